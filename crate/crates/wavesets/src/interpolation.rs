//! Maps between wavelet sets that implement the translation congruence, their
//! dyadic extension to the whole line, composition in piecewise-translation
//! normal form, and the pair/family decision procedures built on them.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::congruence::{
    is_wavelet_set, max_magnitude, min_magnitude, translation_witness,
};
use crate::intervals::{ExtendedSet, Interval, IntervalSet};
use crate::scalars::{dyadic_bracket, PiRational, Rat};
use crate::{Error, Result};

/// Default cap on pieces produced by a single composition or restriction.
pub const PIECE_CAP: usize = 4096;

const SEARCH_NODE_BUDGET: usize = 1_000_000;

/// The map carrying one wavelet set onto another window by window: on each
/// piece, sigma(s) = s + 2n*pi. Extends to the line by sigma(2^k s) =
/// 2^k sigma(s), so on 2^k piece the shift is 2^{k+1} n pi.
#[derive(Clone, Debug)]
pub struct InterpolationMap {
    source: ExtendedSet,
    target: ExtendedSet,
    pieces: Vec<(ExtendedSet, i64)>,
}

impl InterpolationMap {
    pub fn source(&self) -> &ExtendedSet {
        &self.source
    }

    pub fn target(&self) -> &ExtendedSet {
        &self.target
    }

    pub fn pieces(&self) -> &[(ExtendedSet, i64)] {
        &self.pieces
    }

    /// The same map with the window shifts spelled out as exact amounts.
    pub fn as_pt(&self) -> PiecewiseTranslation {
        PiecewiseTranslation {
            domain: self.source.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|(part, n)| (part.clone(), PiRational::two_pi(*n)))
                .collect(),
        }
    }
}

pub fn build(e: &ExtendedSet, f: &ExtendedSet) -> Result<InterpolationMap> {
    if !is_wavelet_set(e)?.ok() {
        return Err(Error::NotGenerator("left set is not a wavelet set"));
    }
    if !is_wavelet_set(f)?.ok() {
        return Err(Error::NotGenerator("right set is not a wavelet set"));
    }
    let w = translation_witness(e, f)?;
    Ok(InterpolationMap { source: e.clone(), target: f.clone(), pieces: w.pieces })
}

/// A map of the line that is an exact translation on each of finitely many
/// pieces partitioning `domain`. Compositions of interpolation maps land
/// here; shifts need not be multiples of 2*pi.
#[derive(Clone, Debug)]
pub struct PiecewiseTranslation {
    pub domain: ExtendedSet,
    pub pieces: Vec<(ExtendedSet, PiRational)>,
}

impl PiecewiseTranslation {
    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|(_, t)| t.is_zero())
    }

    /// Equality as maps: equal domains and agreeing shifts wherever pieces
    /// overlap. Both piece lists partition the domain, so this is exact.
    pub fn map_eq(&self, other: &Self) -> Result<bool> {
        if !self.domain.set_eq(&other.domain)? {
            return Ok(false);
        }
        for (x, t) in &self.pieces {
            for (y, u) in &other.pieces {
                if t != u && !x.inter(y)?.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Split s into cells on which the dyadic extension of the piecewise map
/// (pieces partitioning `domain`) acts by a single translation. Fails if the
/// dilates of `domain` do not exhaust s.
fn extension_cells(
    domain: &ExtendedSet,
    pieces: &[(ExtendedSet, PiRational)],
    s: &ExtendedSet,
    cap: usize,
) -> Result<Vec<(ExtendedSet, PiRational)>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let smin = min_magnitude(s)?;
    let dmin = min_magnitude(domain)?;
    if smin.is_zero() || dmin.is_zero() {
        return Err(Error::DivergentAtZero);
    }
    let smax = max_magnitude(s)?;
    let dmax = max_magnitude(domain)?;
    let k_min = -dyadic_bracket(&(&dmax / &smin));
    let k_max = dyadic_bracket(&(&smax / &dmin));
    let mut cells = Vec::new();
    let mut covered = ExtendedSet::empty();
    let mut total = Rat::zero();
    for k in k_min..=k_max {
        for (part, t) in pieces {
            let cell = s.inter(&part.scale(k))?;
            if cell.is_empty() {
                continue;
            }
            if cells.len() == cap {
                return Err(Error::Budget("piecewise refinement piece cap"));
            }
            total += cell.measure();
            covered = covered.union(&cell)?;
            cells.push((cell, t.scale_pow2(k)));
        }
    }
    if total != s.measure() || !covered.set_eq(s)? {
        return Err(Error::NotGenerator("dyadic extension does not cover the operand"));
    }
    Ok(cells)
}

/// The dyadic extension of m restricted to s, in piecewise-translation form.
pub fn restrict(m: &InterpolationMap, s: &ExtendedSet) -> Result<PiecewiseTranslation> {
    let pt = m.as_pt();
    let pieces = extension_cells(&pt.domain, &pt.pieces, s, PIECE_CAP)?;
    Ok(PiecewiseTranslation { domain: s.clone(), pieces })
}

/// Exact image of s under the dyadic extension of m.
pub fn image(m: &InterpolationMap, s: &ExtendedSet) -> Result<ExtendedSet> {
    let mut out = ExtendedSet::empty();
    for (cell, t) in restrict(m, s)?.pieces {
        out = out.union(&cell.translate(&t))?;
    }
    Ok(out)
}

/// Evaluate the dyadic extension at a point. None for the null exceptional
/// set: the origin and points missed by every dilate of the source.
pub fn evaluate(m: &InterpolationMap, s: &PiRational) -> Result<Option<PiRational>> {
    if s.is_zero() {
        return Ok(None);
    }
    let dmin = min_magnitude(&m.source)?;
    if dmin.is_zero() {
        return Err(Error::DivergentAtZero);
    }
    let dmax = max_magnitude(&m.source)?;
    let q = s.abs().into_coeff();
    let k_min = -dyadic_bracket(&(&dmax / &q));
    let k_max = dyadic_bracket(&(&q / &dmin));
    for k in k_min..=k_max {
        let y = s.scale_pow2(-k);
        for (part, n) in &m.pieces {
            if part.contains_point(&y) {
                return Ok(Some(s + &PiRational::two_pi(*n).scale_pow2(k)));
            }
        }
    }
    Ok(None)
}

pub fn compose_pt(
    outer: &PiecewiseTranslation,
    inner: &PiecewiseTranslation,
    cap: usize,
) -> Result<PiecewiseTranslation> {
    let mut pieces = Vec::new();
    for (x, t) in &inner.pieces {
        let moved = x.translate(t);
        for (cell, u) in extension_cells(&outer.domain, &outer.pieces, &moved, cap)? {
            if pieces.len() == cap {
                return Err(Error::Budget("composition piece cap"));
            }
            pieces.push((cell.translate(&-t), t + &u));
        }
    }
    Ok(PiecewiseTranslation { domain: inner.domain.clone(), pieces })
}

/// m2 after m1, as a piecewise translation on the source of m1.
pub fn compose(m2: &InterpolationMap, m1: &InterpolationMap) -> Result<PiecewiseTranslation> {
    compose_pt(&m2.as_pt(), &m1.as_pt(), PIECE_CAP)
}

/// True iff the map squares to the identity. Checking on the source set
/// suffices: the extension commutes with dilation and the dilates of the
/// source cover the line.
pub fn is_interpolation_pair(e: &ExtendedSet, f: &ExtendedSet) -> Result<bool> {
    let m = build(e, f)?;
    Ok(compose(&m, &m)?.is_identity())
}

/// True iff the map sends the union of the two sets into itself.
pub fn union_closed(e: &ExtendedSet, f: &ExtendedSet) -> Result<bool> {
    let m = build(e, f)?;
    let u = e.union(f)?;
    let im = image(&m, &u)?;
    Ok(im.diff(&u)?.is_empty())
}

/// Cell-level pair test: refine the translation and dilation witnesses of
/// (e, f) and demand that whenever material of one nonzero cell, carried into
/// f, meets a dilate of another nonzero cell, the two window shifts cancel:
/// n + 2^l m = 0. The dilation exponents of interacting cells must then be
/// negatives of each other, which is asserted.
pub fn cell_criterion(e: &ExtendedSet, f: &ExtendedSet) -> Result<bool> {
    let jw = crate::congruence::joint_witness(e, f)?;
    let nonzero: Vec<_> = jw.cells.iter().filter(|c| c.n != 0).collect();
    let mut exponents_cancel = true;
    for c1 in &nonzero {
        let shifted = c1.part.translate(&PiRational::two_pi(c1.n));
        for c2 in &nonzero {
            let x = shifted.inter(&c2.part.scale(c2.k))?;
            if x.is_empty() {
                continue;
            }
            let cancels = Rat::from_integer(c1.n.into())
                + crate::scalars::pow2(c2.k) * Rat::from_integer(c2.n.into());
            if !cancels.is_zero() {
                return Ok(false);
            }
            if c2.k != -c1.k {
                exponents_cancel = false;
            }
        }
    }
    assert!(exponents_cancel, "interacting cells must have opposite dilation exponents");
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyStatus {
    Yes,
    No,
    Indeterminate,
}

/// Decide whether the maps from the first set to each listed set form a group
/// under composition. A finite composition-closed collection of these maps
/// always contains the identity and inverses, so closure of pairwise products
/// is the whole question.
pub fn is_interpolation_family(sets: &[ExtendedSet]) -> Result<FamilyStatus> {
    let base = sets.first().ok_or(Error::BadParameter("family needs at least one set"))?;
    let mut maps = Vec::with_capacity(sets.len());
    for f in sets {
        maps.push(build(base, f)?.as_pt());
    }
    for g in &maps {
        for h in &maps {
            let prod = match compose_pt(g, h, PIECE_CAP) {
                Ok(p) => p,
                Err(Error::Budget(_)) => return Ok(FamilyStatus::Indeterminate),
                Err(err) => return Err(err),
            };
            let mut known = false;
            for m in &maps {
                if prod.map_eq(m)? {
                    known = true;
                    break;
                }
            }
            if !known {
                return Ok(FamilyStatus::No);
            }
        }
    }
    Ok(FamilyStatus::Yes)
}

/// All wavelet sets that are unions of grid cells of length pi/2^j inside
/// e u f, up to `cap` of them, in ascending cell order. Finite search only:
/// answers with tails or off-grid endpoints are out of scope, so an empty
/// result means none found at this resolution.
pub fn wavelet_subsets_search(
    e: &ExtendedSet,
    f: &ExtendedSet,
    j: u32,
    cap: usize,
) -> Result<Vec<ExtendedSet>> {
    if j > 16 {
        return Err(Error::BadParameter("grid resolution exponent too large"));
    }
    let u = e.union(f)?;
    let b = match u.bounds() {
        Some(b) => b,
        None => return Ok(Vec::new()),
    };
    let step = PiRational::new(1, 1).scale_pow2(-(j as i64));
    let cell_at = |a: i64| -> Interval {
        Interval::new(step.mul_rat(&Rat::from_integer(a.into())), step.mul_rat(&Rat::from_integer((a + 1).into())))
            .unwrap()
    };
    let floor_cell = |x: &PiRational| -> i64 {
        let scaled = x.coeff() * crate::scalars::pow2(j as i64);
        num_traits::ToPrimitive::to_i64(&scaled.floor().to_integer()).unwrap_or(0)
    };
    let a_lo = floor_cell(b.lo());
    let a_hi = floor_cell(b.hi()) + 1;

    // One candidate list per translation residue class; a wavelet set picks
    // exactly one cell from each. Cells touching the origin never qualify.
    let classes = 1i64 << (j + 1);
    let mut cands: Vec<Vec<i64>> = alloc::vec![Vec::new(); classes as usize];
    for a in a_lo..=a_hi {
        if a == 0 || a == -1 {
            continue;
        }
        let cell = ExtendedSet::from_interval(cell_at(a));
        if !cell.diff(&u)?.is_empty() {
            continue;
        }
        cands[a.rem_euclid(classes) as usize].push(a);
    }
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(Vec::new());
    }

    // Each grid cell away from the origin lies in a single dyadic block, so
    // its reduction is one exact subinterval of the dilation domain.
    fn reduction(cell: &Interval) -> IntervalSet {
        let jb = dyadic_bracket(cell.lo().abs().coeff()).min(dyadic_bracket(cell.hi().abs().coeff()));
        IntervalSet::single(cell.clone()).scale(-jb)
    }

    // Depth-first over residue classes with exact dilation-disjointness
    // pruning; a full assignment tiles both fundamental domains by
    // construction, and a final check guards the assembly.
    let mut out: Vec<ExtendedSet> = Vec::new();
    let mut chosen: Vec<i64> = Vec::with_capacity(classes as usize);
    let mut nodes = 0usize;
    fn dfs(
        class: usize,
        cands: &[Vec<i64>],
        covered: &IntervalSet,
        chosen: &mut Vec<i64>,
        out: &mut Vec<ExtendedSet>,
        nodes: &mut usize,
        cap: usize,
        cell_at: &dyn Fn(i64) -> Interval,
        reduction: &dyn Fn(&Interval) -> IntervalSet,
    ) -> Result<()> {
        if out.len() == cap {
            return Ok(());
        }
        *nodes += 1;
        if *nodes > SEARCH_NODE_BUDGET {
            return Err(Error::Budget("wavelet subset search nodes"));
        }
        if class == cands.len() {
            let ivs: Vec<Interval> = chosen.iter().map(|&a| cell_at(a)).collect();
            let s = ExtendedSet::from_interval_list(ivs);
            if crate::congruence::is_wavelet_set(&s)?.ok() {
                out.push(s);
            }
            return Ok(());
        }
        for &a in &cands[class] {
            let red = reduction(&cell_at(a));
            if !covered.inter(&red).is_empty() {
                continue;
            }
            chosen.push(a);
            let next = covered.union(&red);
            dfs(class + 1, cands, &next, chosen, out, nodes, cap, cell_at, reduction)?;
            chosen.pop();
        }
        Ok(())
    }
    dfs(
        0,
        &cands,
        &IntervalSet::empty(),
        &mut chosen,
        &mut out,
        &mut nodes,
        cap,
        &cell_at,
        &reduction,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::is_wavelet_set;

    fn p(n: i64, d: i64) -> PiRational {
        PiRational::new(n, d)
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(p(a.0, a.1), p(b.0, b.1)).unwrap()
    }

    fn eset(ivs: &[((i64, i64), (i64, i64))]) -> ExtendedSet {
        ExtendedSet::from_interval_list(ivs.iter().map(|(a, b)| iv(*a, *b)).collect())
    }

    fn shannon() -> ExtendedSet {
        eset(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))])
    }

    fn meyer() -> ExtendedSet {
        eset(&[((-8, 3), (-4, 3)), ((2, 3), (4, 3))])
    }

    fn journe() -> ExtendedSet {
        eset(&[((-32, 7), (-4, 1)), ((-1, 1), (-4, 7)), ((4, 7), (1, 1)), ((4, 1), (32, 7))])
    }

    #[test]
    fn identity_map_is_trivial() {
        let e = shannon();
        let m = build(&e, &e).unwrap();
        assert_eq!(m.pieces().len(), 1);
        assert_eq!(m.pieces()[0].1, 0);
        assert!(m.as_pt().is_identity());
        assert!(image(&m, &e).unwrap().set_eq(&e).unwrap());
        assert!(is_interpolation_pair(&e, &e).unwrap());
        assert!(union_closed(&e, &e).unwrap());
        assert!(cell_criterion(&e, &e).unwrap());
    }

    #[test]
    fn build_rejects_non_wavelet_input() {
        let e = shannon();
        let bad = eset(&[((0, 1), (2, 1))]);
        assert!(matches!(
            build(&bad, &e),
            Err(Error::NotGenerator(msg)) if msg.starts_with("left")
        ));
        assert!(matches!(
            build(&e, &bad),
            Err(Error::NotGenerator(msg)) if msg.starts_with("right")
        ));
    }

    #[test]
    fn meyer_pair_is_an_interpolation_pair() {
        let e = meyer();
        let f = e.reflect();
        let m = build(&e, &f).unwrap();
        assert_eq!(m.pieces().len(), 2);
        assert_eq!(m.pieces()[0].1, -1);
        assert_eq!(m.pieces()[1].1, 2);
        assert!(image(&m, &e).unwrap().set_eq(&f).unwrap());
        let u = e.union(&f).unwrap();
        assert!(image(&m, &u).unwrap().set_eq(&u).unwrap());
        assert!(is_interpolation_pair(&e, &f).unwrap());
        assert!(union_closed(&e, &f).unwrap());
        assert!(cell_criterion(&e, &f).unwrap());
        let minv = build(&f, &e).unwrap();
        assert!(compose(&minv, &m).unwrap().is_identity());
        // The inverse map agrees with the forward map on the line.
        assert!(restrict(&minv, &e).unwrap().map_eq(&m.as_pt()).unwrap());
    }

    #[test]
    fn evaluation_commutes_with_dilation() {
        let e = meyer();
        let m = build(&e, &e.reflect()).unwrap();
        let base = evaluate(&m, &p(1, 1)).unwrap().unwrap();
        assert_eq!(base, p(-1, 1));
        for k in -8..=8 {
            let got = evaluate(&m, &p(1, 1).scale_pow2(k)).unwrap().unwrap();
            assert_eq!(got, base.scale_pow2(k));
        }
        assert!(evaluate(&m, &PiRational::zero()).unwrap().is_none());
    }

    #[test]
    fn journe_against_shannon_is_not_a_pair() {
        let e = shannon();
        let f = journe();
        assert!(is_wavelet_set(&f).unwrap().ok());
        let m = build(&e, &f).unwrap();
        let ns: Vec<i64> = m.pieces().iter().map(|(_, n)| *n).collect();
        assert_eq!(ns, vec![-3, -1, 1, 3]);
        assert!(!is_interpolation_pair(&e, &f).unwrap());
        assert!(!union_closed(&e, &f).unwrap());
        assert!(!cell_criterion(&e, &f).unwrap());
        // The square shifts [pi, 9pi/7) by +pi, an odd multiple.
        let sq = compose(&m, &m).unwrap();
        let probe = eset(&[((1, 1), (9, 7))]);
        let mut seen = false;
        for (x, t) in &sq.pieces {
            if !x.inter(&probe).unwrap().is_empty() {
                assert_eq!(t, &p(1, 1));
                seen = true;
            }
        }
        assert!(seen);
    }

    #[test]
    fn family_status_matches_group_structure() {
        assert_eq!(is_interpolation_family(&[shannon()]).unwrap(), FamilyStatus::Yes);
        let e = meyer();
        assert_eq!(
            is_interpolation_family(&[e.clone(), e.reflect()]).unwrap(),
            FamilyStatus::Yes
        );
        assert_eq!(
            is_interpolation_family(&[shannon(), journe()]).unwrap(),
            FamilyStatus::No
        );
        assert!(matches!(is_interpolation_family(&[]), Err(Error::BadParameter(_))));
    }

    #[test]
    fn composition_respects_the_piece_cap() {
        let e = shannon();
        let m = build(&e, &journe()).unwrap();
        assert!(matches!(
            compose_pt(&m.as_pt(), &m.as_pt(), 2),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn subset_search_recovers_the_only_grid_subset() {
        let found = wavelet_subsets_search(&shannon(), &shannon(), 2, 8).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].set_eq(&shannon()).unwrap());
    }
}
