fn main() {
    println!("wavesets");
}
