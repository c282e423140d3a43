//! Exact scalars: rational multiples of pi and the dyadic index helpers.
//!
//! Every coordinate in this crate is `q * pi` with `q` an arbitrary-precision
//! rational, so translations by `2*pi*n` and dilations by `2^k` are closed
//! operations with exact equality.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

/// 2^k as an exact rational, for any sign of k.
pub fn pow2(k: i64) -> Rat {
    let one = Int::one();
    if k >= 0 {
        Rat::from_integer(one << (k as u64))
    } else {
        Rat::new(one.clone(), one << ((-k) as u64))
    }
}

/// Compare q with 2^k without materializing huge intermediates.
pub fn cmp_pow2(q: &Rat, k: i64) -> Ordering {
    let a = q.numer();
    let b = q.denom();
    if a.sign() != Sign::Plus {
        return Ordering::Less;
    }
    if k >= 0 {
        a.cmp(&(b.clone() << (k as u64)))
    } else {
        (a.clone() << ((-k) as u64)).cmp(b)
    }
}

/// Largest j with 2^j <= q, for q > 0. So 2^j <= q < 2^{j+1}.
pub fn dyadic_bracket(q: &Rat) -> i64 {
    assert!(q.is_positive(), "dyadic_bracket needs q > 0");
    let mut j = q.numer().bits() as i64 - q.denom().bits() as i64;
    while cmp_pow2(q, j + 1) != Ordering::Less {
        j += 1;
    }
    while cmp_pow2(q, j) == Ordering::Less {
        j -= 1;
    }
    j
}

/// The exponent floor of a nonzero integer: the unique j with n = 2^{-j} * odd.
/// Equivalently minus the 2-adic valuation, so it is never positive.
pub fn two_adic_floor(n: i64) -> i64 {
    assert!(n != 0, "two_adic_floor needs n != 0");
    -((n.trailing_zeros()) as i64)
}

/// A rational multiple of pi. The stored value is the coefficient q in q*pi.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PiRational(Rat);

impl PiRational {
    pub fn new(num: i64, den: i64) -> Self {
        PiRational(Rat::new(Int::from(num), Int::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        PiRational(Rat::from_integer(Int::from(n)))
    }

    pub fn from_rat(q: Rat) -> Self {
        PiRational(q)
    }

    pub fn zero() -> Self {
        PiRational(Rat::zero())
    }

    pub fn pi() -> Self {
        Self::from_int(1)
    }

    /// 2*pi*n.
    pub fn two_pi(n: i64) -> Self {
        Self::from_int(2 * n)
    }

    pub fn coeff(&self) -> &Rat {
        &self.0
    }

    pub fn into_coeff(self) -> Rat {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// x -> 2^k * x.
    pub fn scale_pow2(&self, k: i64) -> Self {
        PiRational(&self.0 * pow2(k))
    }

    pub fn mul_rat(&self, q: &Rat) -> Self {
        PiRational(&self.0 * q)
    }

    pub fn abs(&self) -> Self {
        PiRational(self.0.abs())
    }

    /// Midpoint of self and other; exact.
    pub fn midpoint(&self, other: &Self) -> Self {
        PiRational((&self.0 + &other.0) / Rat::from_integer(Int::from(2)))
    }

    /// The dyadic block index of a nonzero point: j such that x lies in
    /// [2^j pi, 2^{j+1} pi) or, on the negative side, [-2^{j+1} pi, -2^j pi).
    pub fn dyadic_block(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let q = self.0.abs();
        let b = dyadic_bracket(&q);
        if self.is_negative() && cmp_pow2(&q, b) == Ordering::Equal {
            Some(b - 1)
        } else {
            Some(b)
        }
    }

    /// Index n of the translation window [2*pi*n, 2*pi*(n+1)) containing x.
    pub fn window_index(&self) -> Int {
        (&self.0 / Rat::from_integer(Int::from(2))).floor().to_integer()
    }

    /// Index n of the centered window [2*pi*n - pi, 2*pi*n + pi) containing x.
    pub fn centered_window_index(&self) -> Int {
        ((&self.0 + Rat::one()) / Rat::from_integer(Int::from(2))).floor().to_integer()
    }
}

impl Add for &PiRational {
    type Output = PiRational;
    fn add(self, rhs: &PiRational) -> PiRational {
        PiRational(&self.0 + &rhs.0)
    }
}

impl Sub for &PiRational {
    type Output = PiRational;
    fn sub(self, rhs: &PiRational) -> PiRational {
        PiRational(&self.0 - &rhs.0)
    }
}

impl Neg for &PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-&self.0)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        if self.0.denom().is_one() {
            write!(f, "{}pi", self.0.numer())
        } else {
            write!(f, "{}/{}pi", self.0.numer(), self.0.denom())
        }
    }
}

/// Debug = Display keeps assertion output readable; the derive would print the
/// raw BigInt innards.
impl fmt::Debug for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exponent floor with the two improper values used by congruence domains.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum ExpFloor {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExpFloor {
    pub fn plus(self, e: i64) -> ExpFloor {
        match self {
            ExpFloor::Finite(j) => ExpFloor::Finite(j + e),
            other => other,
        }
    }
}

impl fmt::Display for ExpFloor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpFloor::NegInf => write!(f, "-inf"),
            ExpFloor::Finite(j) => write!(f, "{j}"),
            ExpFloor::PosInf => write!(f, "+inf"),
        }
    }
}

/// Render the coefficient as "p/q" (or "p" when integral), for JSON output.
pub fn rat_string(q: &Rat) -> String {
    use alloc::format;
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
