//! Named constructions. The entries double as CLI presets and as the
//! regression corpus: `get` builds them, `verify` rechecks from scratch the
//! properties each entry is documented to have.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::congruence::is_wavelet_set;
use crate::construct::{self, ContainmentConfig};
use crate::domains::congruence_domain;
use crate::interpolation::{self, FamilyStatus};
use crate::intervals::{ExtendedSet, Interval, IntervalSet};
use crate::plane::{build_2d, is_wavelet_set_2d, Box2, BoxSet, BoxTailSet, PlanarConfig};
use crate::scalars::{PiRational, Rat};
use crate::{Error, Result};

fn p(n: i64, d: i64) -> PiRational {
    PiRational::new(n, d)
}

fn seg(a: (i64, i64), b: (i64, i64)) -> Interval {
    Interval::new(p(a.0, a.1), p(b.0, b.1)).expect("ordered endpoints")
}

fn eset(ivs: &[((i64, i64), (i64, i64))]) -> ExtendedSet {
    ExtendedSet::from_interval_list(ivs.iter().map(|(a, b)| seg(*a, *b)).collect())
}

fn bx2(xa: (i64, i64), xb: (i64, i64), ya: (i64, i64), yb: (i64, i64)) -> Box2 {
    Box2::new(seg(xa, xb), seg(ya, yb))
}

fn sq2(a: (i64, i64), b: (i64, i64)) -> Box2 {
    bx2(a, b, a, b)
}

fn flip(s: &BoxSet, sx: i64, sy: i64) -> BoxSet {
    let s = if sx < 0 { s.reflect_x() } else { s.clone() };
    if sy < 0 {
        s.reflect_y()
    } else {
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub name: &'static str,
    /// Parameter signature with defaults; empty when the entry takes none.
    pub params: &'static str,
    pub summary: &'static str,
    /// What `verify` checks for this entry.
    pub expectations: &'static str,
}

pub const ENTRIES: &[Entry] = &[
    Entry {
        name: "shannon",
        params: "",
        summary: "the two-block set [-2pi,-pi) u [pi,2pi)",
        expectations: "wavelet set",
    },
    Entry {
        name: "meyer_pair",
        params: "",
        summary: "mirror pair around +-4pi/3 with thirds as endpoints",
        expectations: "wavelet sets forming an interpolation pair",
    },
    Entry {
        name: "journe",
        params: "",
        summary: "four-block wavelet set reaching +-32pi/7",
        expectations: "wavelet set",
    },
    Entry {
        name: "swap_pair",
        params: "",
        summary: "shannon and its full cell swap at [pi,3pi/2)",
        expectations: "wavelet sets forming an interpolation pair",
    },
    Entry {
        name: "klein_family",
        params: "",
        summary: "shannon with half-cell swaps at [pi,5pi/4) and [5pi/4,3pi/2)",
        expectations: "four wavelet sets whose maps form a Klein four-group",
    },
    Entry {
        name: "equal_domains_pair",
        params: "",
        summary: "congruence domains agree both ways yet the squared map is not the identity",
        expectations: "wavelet sets, equal domains, pair check false",
    },
    Entry {
        name: "symmetric_chain",
        params: "(depth = 16)",
        summary: "mirror-symmetric chain of shrinking blocks, cut off after `depth` of them",
        expectations: "dilation tiling exact; translation gap is exactly the remainder of the block series; equals its own reflection",
    },
    Entry {
        name: "interior_tail_set",
        params: "",
        summary: "wavelet set with a self-similar tail at 2pi/3",
        expectations: "wavelet set inside E/2 u E u 2E for shannon E; pair check with shannon false",
    },
    Entry {
        name: "boundary_tail_set",
        params: "",
        summary: "wavelet set with a tail accumulating at -2pi",
        expectations: "wavelet set inside (E-2pi) u E u (E+2pi) for shannon E; pair check with shannon false",
    },
    Entry {
        name: "telescope_family",
        params: "(l, m, n = 1, 1, 1)",
        summary: "two flush constructions glued across zero, fully telescoped",
        expectations: "wavelet set for every l, m, n in 1..=16",
    },
    Entry {
        name: "four_corners",
        params: "",
        summary: "square frames pushed to the four corner directions",
        expectations: "planar wavelet set of area 4 pi^2",
    },
    Entry {
        name: "wedding_cake",
        params: "",
        summary: "two half-window frames pushed left and right",
        expectations: "planar wavelet set of area 4 pi^2",
    },
    Entry {
        name: "pine_tree",
        params: "(step = 1/8)",
        summary: "staircase split of the window at a dyadic step, halves pushed to opposite corners",
        expectations: "planar wavelet set of area 4 pi^2",
    },
    Entry {
        name: "sw_set",
        params: "",
        summary: "central frame with four corner constructions accumulating at (+-2pi, +-2pi)",
        expectations: "planar wavelet set of area 4 pi^2",
    },
];

pub fn list() -> &'static [Entry] {
    ENTRIES
}

/// What an entry evaluates to.
#[derive(Clone, Debug)]
pub enum Payload {
    Line(ExtendedSet),
    Pair(ExtendedSet, ExtendedSet),
    Family(Vec<ExtendedSet>),
    Planar(BoxTailSet),
}

fn parse_fraction(text: &str) -> Result<Rat> {
    let bad = Error::BadParameter("parameters are integers or fractions like 1/64");
    let (num, den) = match text.split_once('/') {
        None => (text, "1"),
        Some((a, b)) => (a.trim_end(), b.trim_start()),
    };
    let n: i64 = num.parse().map_err(|_| bad.clone())?;
    let d: i64 = den.parse().map_err(|_| bad.clone())?;
    if d <= 0 {
        return Err(bad);
    }
    Ok(Rat::new(n.into(), d.into()))
}

fn parse_entry(entry: &str) -> Result<(&str, Vec<Rat>)> {
    let entry = entry.trim();
    let (name, inner) = match entry.split_once('(') {
        None => (entry, None),
        Some((name, rest)) => match rest.strip_suffix(')') {
            Some(inner) => (name.trim_end(), Some(inner)),
            None => return Err(Error::BadParameter("unclosed parameter list")),
        },
    };
    let mut args = Vec::new();
    if let Some(inner) = inner {
        for part in inner.split(',') {
            args.push(parse_fraction(part.trim())?);
        }
    }
    Ok((name, args))
}

fn int_arg(args: &[Rat], i: usize, default: i64) -> Result<i64> {
    match args.get(i) {
        None => Ok(default),
        Some(q) if q.is_integer() => {
            q.to_integer().to_i64().ok_or(Error::BadParameter("parameter out of range"))
        }
        Some(_) => Err(Error::BadParameter("expected an integer")),
    }
}

fn chain_depth(args: &[Rat]) -> Result<u32> {
    u32::try_from(int_arg(args, 0, 16)?)
        .map_err(|_| Error::BadParameter("chain depth must lie in 1..=30"))
}

fn scale_args(args: &[Rat]) -> Result<(u32, u32, u32)> {
    if !(args.is_empty() || args.len() == 3) {
        return Err(Error::BadParameter("telescope_family takes three indices"));
    }
    let one = |i| {
        u32::try_from(int_arg(args, i, 1)?)
            .map_err(|_| Error::BadParameter("telescope indices must lie in 1..=16"))
    };
    Ok((one(0)?, one(1)?, one(2)?))
}

/// Build an entry from its `list()` name, with optional parameters in
/// parentheses: `symmetric_chain(8)`, `telescope_family(2,1,3)`,
/// `pine_tree(1/64)`.
pub fn get(entry: &str) -> Result<Payload> {
    let (name, args) = parse_entry(entry)?;
    let arity = |n: usize| {
        if args.len() > n {
            Err(Error::BadParameter("too many parameters"))
        } else {
            Ok(())
        }
    };
    match name {
        "shannon" => {
            arity(0)?;
            Ok(Payload::Line(shannon()))
        }
        "meyer_pair" => {
            arity(0)?;
            let (e, f) = meyer_pair();
            Ok(Payload::Pair(e, f))
        }
        "journe" => {
            arity(0)?;
            Ok(Payload::Line(journe()))
        }
        "swap_pair" => {
            arity(0)?;
            let (e, f) = swap_pair()?;
            Ok(Payload::Pair(e, f))
        }
        "klein_family" => {
            arity(0)?;
            Ok(Payload::Family(klein_family()?))
        }
        "equal_domains_pair" => {
            arity(0)?;
            let (e, f) = equal_domains_pair()?;
            Ok(Payload::Pair(e, f))
        }
        "symmetric_chain" => {
            arity(1)?;
            Ok(Payload::Line(symmetric_chain(chain_depth(&args)?)?))
        }
        "interior_tail_set" => {
            arity(0)?;
            Ok(Payload::Line(interior_tail_set()?))
        }
        "boundary_tail_set" => {
            arity(0)?;
            Ok(Payload::Line(boundary_tail_set()?))
        }
        "telescope_family" => {
            let (l, m, n) = scale_args(&args)?;
            Ok(Payload::Line(telescope_family(l, m, n)?))
        }
        "four_corners" => {
            arity(0)?;
            Ok(Payload::Planar(four_corners()?))
        }
        "wedding_cake" => {
            arity(0)?;
            Ok(Payload::Planar(wedding_cake()?))
        }
        "pine_tree" => {
            arity(1)?;
            let step = match args.first() {
                Some(q) => q.clone(),
                None => Rat::new(1.into(), 8.into()),
            };
            Ok(Payload::Planar(pine_tree(&step)?))
        }
        "sw_set" => {
            arity(0)?;
            Ok(Payload::Planar(sw_set()?))
        }
        other => Err(Error::UnknownEntry(String::from(other))),
    }
}

fn expect(ok: bool, what: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ExpectationFailed(what))
    }
}

fn expect_wavelet(w: &ExtendedSet) -> Result<()> {
    expect(is_wavelet_set(w)?.ok(), "both tilings of the line")
}

/// Recheck every documented property of an entry from scratch. A failure
/// means the catalog itself is wrong, not the caller.
pub fn verify(entry: &str) -> Result<()> {
    let (name, args) = parse_entry(entry)?;
    match get(entry)? {
        Payload::Line(w) => match name {
            "symmetric_chain" => {
                let depth = chain_depth(&args)? as i64;
                let t = p((1i64 << (depth + 1)) - 1, 1i64 << (depth + 1));
                let gap = ExtendedSet::from_interval(
                    Interval::new(t.clone(), &PiRational::two_pi(1) - &t)
                        .expect("ordered endpoints"),
                );
                let report = is_wavelet_set(&w)?;
                expect(report.dilation.ok, "chain dilation tiling")?;
                expect(report.translation.overlap.is_empty(), "chain translation overlap")?;
                expect(report.translation.gap.set_eq(&gap)?, "chain translation remainder")?;
                expect(w.set_eq(&w.reflect())?, "chain reflection symmetry")
            }
            "interior_tail_set" => {
                expect_wavelet(&w)?;
                let e = shannon();
                let hull = e.scale(-1).union(&e)?.union(&e.scale(1))?;
                expect(w.subset_of(&hull)?, "inside E/2 u E u 2E")?;
                expect(
                    !interpolation::is_interpolation_pair(&e, &w)?,
                    "not an interpolation partner of shannon",
                )
            }
            "boundary_tail_set" => {
                expect_wavelet(&w)?;
                let e = shannon();
                let hull = e
                    .translate(&PiRational::two_pi(-1))
                    .union(&e)?
                    .union(&e.translate(&PiRational::two_pi(1)))?;
                expect(w.subset_of(&hull)?, "inside (E-2pi) u E u (E+2pi)")?;
                expect(
                    !interpolation::is_interpolation_pair(&e, &w)?,
                    "not an interpolation partner of shannon",
                )
            }
            _ => expect_wavelet(&w),
        },
        Payload::Pair(e, f) => {
            expect_wavelet(&e)?;
            expect_wavelet(&f)?;
            if name == "equal_domains_pair" {
                let de = congruence_domain(&e, &f)?;
                let df = congruence_domain(&f, &e)?;
                expect(de.saturated_equal(&df)?, "domains agree in both directions")?;
                expect(
                    !interpolation::is_interpolation_pair(&e, &f)?,
                    "squared map is not the identity",
                )
            } else {
                expect(interpolation::is_interpolation_pair(&e, &f)?, "interpolation pair")
            }
        }
        Payload::Family(sets) => {
            for s in &sets {
                expect_wavelet(s)?;
            }
            expect(
                interpolation::is_interpolation_family(&sets)? == FamilyStatus::Yes,
                "maps close under composition",
            )
        }
        Payload::Planar(w) => {
            expect(w.measure() == Rat::from_integer(4.into()), "area 4 pi^2")?;
            expect(is_wavelet_set_2d(&w)?.ok(), "both tilings of the plane")
        }
    }
}

pub fn shannon() -> ExtendedSet {
    eset(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))])
}

pub fn meyer_pair() -> (ExtendedSet, ExtendedSet) {
    let e = eset(&[((-8, 3), (-4, 3)), ((2, 3), (4, 3))]);
    let f = e.reflect();
    (e, f)
}

pub fn journe() -> ExtendedSet {
    eset(&[((-32, 7), (-4, 1)), ((-1, 1), (-4, 7)), ((4, 7), (1, 1)), ((4, 1), (32, 7))])
}

/// Swap the dilation cell c1 (and its forced companion 2^-l c1 - 2 n2 pi)
/// for the two shifted copies that keep both tilings exact.
fn cell_swap(w: &ExtendedSet, c1: &ExtendedSet, l: i64, n2: i64) -> Result<ExtendedSet> {
    let c2 = c1.scale(-l).translate(&PiRational::two_pi(-n2));
    let moved_down = c1.translate(&PiRational::two_pi(-(n2 << l)));
    let scaled_in = c1.scale(-l);
    w.diff(c1)?.diff(&c2)?.union(&moved_down)?.union(&scaled_in)
}

pub fn swap_pair() -> Result<(ExtendedSet, ExtendedSet)> {
    let e = shannon();
    let f = cell_swap(&e, &eset(&[((1, 1), (3, 2))]), 1, 1)?;
    Ok((e, f))
}

/// Shannon, the full swap, and the two half-cell swaps, in that order. Each
/// half swap undoes itself, the two compose to the full one.
pub fn klein_family() -> Result<Vec<ExtendedSet>> {
    let e = shannon();
    let c1a = eset(&[((1, 1), (5, 4))]);
    let c1b = eset(&[((5, 4), (3, 2))]);
    let f = cell_swap(&cell_swap(&e, &c1a, 1, 1)?, &c1b, 1, 1)?;
    let g = cell_swap(&e, &c1a, 1, 1)?;
    let h = cell_swap(&e, &c1b, 1, 1)?;
    Ok(vec![e, f, g, h])
}

fn equal_domains_config() -> ContainmentConfig {
    ContainmentConfig {
        e: eset(&[((0, 1), (1, 16))]),
        f: eset(&[((1, 1), (129, 128)), ((17, 16), (225, 128)), ((113, 64), (2, 1))]),
        n1: 0,
        n2: 4,
        k1: -5,
        k2: 3,
    }
}

/// Two wavelet sets sharing everything but four blocks apiece; the blocks
/// trade places under 2 pi shifts in a way that equalizes both congruence
/// domains without squaring to the identity.
pub fn equal_domains_pair() -> Result<(ExtendedSet, ExtendedSet)> {
    let fixed = construct::build(&ContainmentConfig {
        e: eset(&[((-1, 1), (0, 1))]),
        f: eset(&[((-2, 1), (-1, 1))]),
        n1: 0,
        n2: -1,
        k1: -1,
        k2: 1,
    })?;
    let near_zero = construct::build(&equal_domains_config())?;
    let shared = fixed.g.union(&near_zero.g)?;
    let eb = eset(&[
        ((33, 16), (17, 8)),
        ((129, 8), (65, 4)),
        ((65, 4), (33, 2)),
        ((225, 2), (113, 1)),
    ]);
    let fb = eset(&[
        ((33, 4), (17, 2)),
        ((129, 16), (65, 8)),
        ((65, 2), (33, 1)),
        ((225, 8), (113, 4)),
    ]);
    Ok((shared.union(&eb)?, shared.union(&fb)?))
}

/// Blocks G_n sit at (2^(n+2) - 2) pi and translation-reduce to a partition
/// of [pi/2, pi); their dyadic copies 2^-(n+1) G_n punch the holes of the
/// seed piece in [pi, 2pi). Cut off after `depth` blocks, the dilation tiling
/// is still exact and the translation tiling misses exactly the remainder of
/// the series, [T, 2pi - T) for T = (2^(depth+1) - 1) / 2^(depth+1) pi.
pub fn symmetric_chain(depth: u32) -> Result<ExtendedSet> {
    if !(1..=30).contains(&depth) {
        return Err(Error::BadParameter("chain depth must lie in 1..=30"));
    }
    let mut f0 = IntervalSet::single(seg((1, 1), (2, 1)));
    let mut blocks = Vec::new();
    for j in 1..=depth as i64 {
        let shift = PiRational::two_pi((1i64 << (j + 1)) - 1);
        let block = Interval::new(
            &p((1i64 << j) - 1, 1i64 << j) + &shift,
            &p((1i64 << (j + 1)) - 1, 1i64 << (j + 1)) + &shift,
        )
        .expect("ordered endpoints");
        f0 = f0.diff(&IntervalSet::single(block.affine(-(j + 1), &PiRational::zero())));
        blocks.push(block);
    }
    let chain = construct::build(&ContainmentConfig {
        e: eset(&[((0, 1), (1, 2))]),
        f: ExtendedSet::from_finite(f0),
        n1: 0,
        n2: 1,
        k1: -2,
        k2: 1,
    })?;
    let mut half = chain.g;
    for block in blocks {
        half = half.union(&ExtendedSet::from_interval(block))?;
    }
    half.union(&half.reflect())
}

pub fn interior_tail_set() -> Result<ExtendedSet> {
    let g = construct::build(&ContainmentConfig {
        e: eset(&[((0, 1), (1, 1))]),
        f: eset(&[((1, 1), (7, 4))]),
        n1: 0,
        n2: 1,
        k1: -1,
        k2: 1,
    })?;
    eset(&[((-1, 1), (-1, 2)), ((7, 2), (4, 1))]).union(&g.g)
}

pub fn boundary_tail_set() -> Result<ExtendedSet> {
    let g = construct::build(&ContainmentConfig {
        e: eset(&[((-2, 1), (-11, 8)), ((-9, 8), (-1, 1))]),
        f: eset(&[((-2, 1), (-3, 2))]),
        n1: 0,
        n2: -1,
        k1: 0,
        k2: 1,
    })?;
    eset(&[((-3, 4), (-1, 2)), ((5, 8), (7, 8)), ((1, 1), (5, 4)), ((7, 2), (4, 1))])
        .union(&g.g)
}

pub fn telescope_family(l: u32, m: u32, n: u32) -> Result<ExtendedSet> {
    construct::telescope_wavelet(l, m, n)
}

fn corner_frame(sx: i64, sy: i64) -> PlanarConfig {
    let e = BoxSet::from_box(sq2((0, 1), (1, 1)));
    let f = e.diff(&BoxSet::from_box(sq2((0, 1), (1, 2))));
    PlanarConfig {
        e: BoxTailSet::from_finite(flip(&e, sx, sy)),
        f: BoxTailSet::from_finite(flip(&f, sx, sy)),
        n1: (0, 0),
        n2: (sx, sy),
        k1: 0,
        k2: 2,
    }
}

pub fn four_corners() -> Result<BoxTailSet> {
    let mut w = BoxTailSet::empty_g();
    for (sx, sy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        w = w.union(&build_2d(&corner_frame(sx, sy))?.g)?;
    }
    Ok(w)
}

pub fn wedding_cake() -> Result<BoxTailSet> {
    let inner = BoxSet::from_box(sq2((-1, 2), (1, 2)));
    let mut w = BoxTailSet::empty_g();
    for sx in [1i64, -1] {
        let e = flip(&BoxSet::from_box(bx2((0, 1), (1, 1), (-1, 1), (1, 1))), sx, 1);
        let cfg = PlanarConfig {
            f: BoxTailSet::from_finite(e.diff(&inner)),
            e: BoxTailSet::from_finite(e),
            n1: (0, 0),
            n2: (sx, 0),
            k1: 0,
            k2: 2,
        };
        w = w.union(&build_2d(&cfg)?.g)?;
    }
    Ok(w)
}

/// Staircase split of the window: the columns of cells {(i, j): i <= j} at a
/// dyadic step form a set that contains its own halving, so each half of the
/// window minus the half-size window is a frame that can be pushed to a
/// corner. Tails accumulate at (-2pi/3, 2pi/3) and its opposite.
pub fn pine_tree(step: &Rat) -> Result<BoxTailSet> {
    let denom = match step.numer().to_i64() {
        Some(1) => step.denom().to_i64().filter(|d| d.count_ones() == 1 && *d <= 256),
        _ => None,
    };
    let d = denom.ok_or(Error::BadParameter("step must be 2^-j of pi for j in 0..=8"))?;
    let grid = |i: i64| PiRational::from_rat(Rat::new((i - d).into(), d.into()));
    let columns = (0..2 * d)
        .map(|i| {
            Box2::new(
                Interval::new(grid(i), grid(i + 1)).expect("ordered endpoints"),
                Interval::new(grid(i), grid(2 * d)).expect("ordered endpoints"),
            )
        })
        .collect();
    let up = BoxSet::from_boxes(columns);
    let low = BoxSet::from_box(sq2((-1, 1), (1, 1))).diff(&up);
    let inner = BoxSet::from_box(sq2((-1, 2), (1, 2)));
    let w1 = build_2d(&PlanarConfig {
        f: BoxTailSet::from_finite(up.diff(&inner)),
        e: BoxTailSet::from_finite(up),
        n1: (0, 0),
        n2: (-1, 1),
        k1: 0,
        k2: 2,
    })?;
    let w2 = build_2d(&PlanarConfig {
        f: BoxTailSet::from_finite(low.diff(&inner)),
        e: BoxTailSet::from_finite(low),
        n1: (0, 0),
        n2: (1, -1),
        k1: 0,
        k2: 2,
    })?;
    w1.g.union(&w2.g)
}

pub fn sw_set() -> Result<BoxTailSet> {
    let small = BoxSet::from_box(sq2((-1, 2), (0, 1)));
    let corner = BoxSet::from_box(sq2((-1, 1), (-3, 4)));
    let target = BoxSet::from_box(sq2((3, 2), (2, 1)));
    let corners = corner
        .union(&corner.reflect_x())
        .union(&corner.reflect_y())
        .union(&corner.reflect());
    let window = BoxSet::from_box(sq2((-1, 1), (1, 1)));
    let inner = BoxSet::from_box(sq2((-1, 2), (1, 2)));
    let mut w = BoxTailSet::from_finite(window.diff(&inner).diff(&corners));
    for (sx, sy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
        let cfg = PlanarConfig {
            e: BoxTailSet::from_finite(flip(&small.union(&corner), sx, sy)),
            f: BoxTailSet::from_finite(flip(&target, sx, sy)),
            n1: (sx, sy),
            n2: (2 * sx, 2 * sy),
            k1: 0,
            k2: 1,
        };
        w = w.union(&build_2d(&cfg)?.g)?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn dbg_pine() {
        for d in [8i64, 64] {
            let t0 = std::time::Instant::now();
            let r = pine_tree(&Rat::new(1.into(), d.into()));
            std::eprintln!("pine 1/{d}: err={:?} in {:?}", r.as_ref().err(), t0.elapsed());
            if let Ok(w) = r {
                std::eprintln!("tails {}", w.tails().len());
            }
        }
    }

    #[test]
    fn every_entry_checks_out() {
        for entry in list() {
            verify(entry.name).unwrap();
        }
    }

    #[test]
    fn meyer_literals() {
        let (e, f) = meyer_pair();
        assert!(f.set_eq(&eset(&[((-4, 3), (-2, 3)), ((4, 3), (8, 3))])).unwrap());
        assert_eq!(e.measure(), Rat::from_integer(2.into()));
    }

    #[test]
    fn swap_moves_exactly_one_cell() {
        let (e, f) = swap_pair().unwrap();
        let literal = eset(&[
            ((-3, 1), (-5, 2)),
            ((-2, 1), (-3, 2)),
            ((-5, 4), (-1, 1)),
            ((1, 2), (3, 4)),
            ((3, 2), (2, 1)),
        ]);
        assert!(f.set_eq(&literal).unwrap());
        assert_eq!(e.inter(&f).unwrap().measure(), Rat::new(3.into(), 2.into()));
    }

    #[test]
    fn klein_maps_compose_as_a_four_group() {
        let sets = klein_family().unwrap();
        assert_eq!(interpolation::is_interpolation_family(&sets).unwrap(), FamilyStatus::Yes);
        assert_eq!(interpolation::is_interpolation_family(&sets[..3]).unwrap(), FamilyStatus::No);
        let to = |i: usize| interpolation::build(&sets[0], &sets[i]).unwrap();
        let half_then_half = interpolation::compose(&to(2), &to(3)).unwrap();
        assert!(half_then_half.map_eq(&to(1).as_pt()).unwrap());
    }

    #[test]
    fn equal_domains_internals() {
        let (e, f) = equal_domains_pair().unwrap();
        let shared = e.inter(&f).unwrap();
        assert_eq!(shared.tails().len(), 1);
        assert_eq!(shared.tails()[0].fixed_point(), p(8, 255));
        assert!(eset(&[((-8, 3), (-2, 1)), ((-1, 1), (-2, 3))]).subset_of(&shared).unwrap());
        let de = congruence_domain(&e, &f).unwrap();
        assert!(de.membership(&p(33, 16)));
        assert!(!de.membership(&p(33, 32)));
    }

    #[test]
    fn chain_closed_forms_and_bounds() {
        let w = symmetric_chain(3).unwrap();
        let report = is_wavelet_set(&w).unwrap();
        assert!(report.dilation.ok);
        assert!(report.translation.overlap.is_empty());
        assert!(report.translation.gap.set_eq(&eset(&[((15, 16), (17, 16))])).unwrap());
        assert!(w.set_eq(&w.reflect()).unwrap());
        assert!(matches!(symmetric_chain(0), Err(Error::BadParameter(_))));
        assert!(matches!(symmetric_chain(31), Err(Error::BadParameter(_))));
    }

    #[test]
    fn telescoped_literal() {
        let w = telescope_family(1, 1, 1).unwrap();
        let literal =
            eset(&[((-8, 3), (-2, 1)), ((-1, 1), (-2, 3)), ((2, 3), (1, 1)), ((2, 1), (8, 3))]);
        assert!(w.set_eq(&literal).unwrap());
    }

    #[test]
    fn tail_set_shapes() {
        let w = interior_tail_set().unwrap();
        assert_eq!(w.measure(), Rat::from_integer(2.into()));
        assert_eq!(w.tails().len(), 1);
        assert_eq!(w.tails()[0].fixed_point(), p(2, 3));
        let w = boundary_tail_set().unwrap();
        assert_eq!(w.measure(), Rat::from_integer(2.into()));
        assert_eq!(w.tails().len(), 1);
        assert_eq!(w.tails()[0].fixed_point(), p(-2, 1));
    }

    #[test]
    fn planar_shapes() {
        let w = four_corners().unwrap();
        assert!(w.set_eq(&w.reflect()).unwrap());
        let sw = sw_set().unwrap();
        assert_eq!(sw.measure(), Rat::from_integer(4.into()));
        assert_eq!(sw.tails().len(), 4);
        for t in sw.tails() {
            assert_eq!(t.fixed_point().0.abs(), PiRational::from_int(2));
        }
        assert!(matches!(pine_tree(&Rat::new(3.into(), 7.into())), Err(Error::BadParameter(_))));
        assert!(matches!(pine_tree(&Rat::new(1.into(), 512.into())), Err(Error::BadParameter(_))));
        assert!(matches!(pine_tree(&Rat::zero()), Err(Error::BadParameter(_))));
    }

    #[test]
    fn entry_parsing() {
        assert!(matches!(get("nope"), Err(Error::UnknownEntry(_))));
        assert!(matches!(get("shannon(3)"), Err(Error::BadParameter(_))));
        assert!(matches!(get("telescope_family(1,2)"), Err(Error::BadParameter(_))));
        assert!(matches!(get("symmetric_chain(0)"), Err(Error::BadParameter(_))));
        assert!(matches!(get("symmetric_chain(1/2)"), Err(Error::BadParameter(_))));
        assert!(matches!(get("pine_tree(1/3)"), Err(Error::BadParameter(_))));
        assert!(matches!(get("pine_tree(1/4"), Err(Error::BadParameter(_))));
        match get("telescope_family(2, 1, 3)").unwrap() {
            Payload::Line(w) => assert!(is_wavelet_set(&w).unwrap().ok()),
            _ => unreachable!(),
        }
        match get(" pine_tree( 1/2 ) ").unwrap() {
            Payload::Planar(w) => assert_eq!(w.measure(), Rat::from_integer(4.into())),
            _ => unreachable!(),
        }
    }
}
