//! Congruence with respect to 2pi-translations and dyadic dilations on the
//! line: decompositions into translation windows and dyadic blocks, coverage
//! profiles of the fundamental domains, tiling-generator checks, and exact
//! congruence witnesses between two sets.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::intervals::{ExtendedSet, Interval, IntervalSet, Line};
use crate::scalars::{cmp_pow2, dyadic_bracket, PiRational, Rat};
use crate::sets::{Ext, Geometry};
use crate::{Error, Result};

/// The translation fundamental domain [0, 2pi).
pub fn window_domain() -> ExtendedSet {
    ExtendedSet::from_interval(
        Interval::new(PiRational::zero(), PiRational::two_pi(1)).unwrap(),
    )
}

/// The dilation fundamental domain [-2pi, -pi) u [pi, 2pi).
pub fn dyadic_domain() -> ExtendedSet {
    ExtendedSet::from_interval_list(vec![
        Interval::new(PiRational::from_int(-2), PiRational::from_int(-1)).unwrap(),
        Interval::new(PiRational::from_int(1), PiRational::from_int(2)).unwrap(),
    ])
}

/// Multiplicity bookkeeping for overlaying reduced pieces onto a fundamental
/// domain. covers[k] holds the points covered at least k+1 times.
pub(crate) struct Overlay<G: Geometry> {
    covers: Vec<Ext<G>>,
}

impl<G: Geometry> Overlay<G> {
    pub(crate) fn new() -> Self {
        Overlay { covers: Vec::new() }
    }

    pub(crate) fn add(&mut self, piece: &Ext<G>) -> Result<()> {
        if piece.is_empty() {
            return Ok(());
        }
        let mut next: Vec<Ext<G>> = Vec::with_capacity(self.covers.len() + 1);
        next.push(match self.covers.first() {
            Some(c0) => c0.union(piece)?,
            None => piece.clone(),
        });
        for k in 1..=self.covers.len() {
            let lifted = self.covers[k - 1].inter(piece)?;
            let stay = match self.covers.get(k) {
                Some(ck) => ck.union(&lifted)?,
                None => lifted,
            };
            next.push(stay);
        }
        while matches!(next.last(), Some(top) if top.is_empty()) {
            next.pop();
        }
        self.covers = next;
        Ok(())
    }

    pub(crate) fn covered(&self) -> Ext<G> {
        self.covers.first().cloned().unwrap_or_else(Ext::empty_g)
    }

    pub(crate) fn covered_twice(&self) -> Ext<G> {
        self.covers.get(1).cloned().unwrap_or_else(Ext::empty_g)
    }

    /// Disjoint classes of exact multiplicity, ascending.
    pub(crate) fn levels(&self) -> Result<Vec<(Ext<G>, u32)>> {
        let mut out = Vec::new();
        for m in 1..=self.covers.len() {
            let exact = match self.covers.get(m) {
                Some(above) => self.covers[m - 1].diff(above)?,
                None => self.covers[m - 1].clone(),
            };
            if !exact.is_empty() {
                out.push((exact, m as u32));
            }
        }
        Ok(out)
    }
}

/// Outcome of checking that reduced pieces tile a fundamental domain: `gap`
/// is the uncovered part, `overlap` the part covered more than once but
/// finitely, `divergent` the part covered infinitely often.
#[derive(Clone, Debug)]
pub struct CoverReport<G: Geometry> {
    pub ok: bool,
    pub gap: Ext<G>,
    pub overlap: Ext<G>,
    pub divergent: Ext<G>,
}

pub type GeneratorReport = CoverReport<Line>;

impl<G: Geometry> CoverReport<G> {
    pub(crate) fn build(
        domain: &Ext<G>,
        overlay: &Overlay<G>,
        divergent: Ext<G>,
    ) -> Result<Self> {
        let covered = overlay.covered().union(&divergent)?;
        let gap = domain.diff(&covered)?;
        let overlap = overlay.covered_twice().diff(&divergent)?;
        let ok = gap.is_empty() && overlap.is_empty() && divergent.is_empty();
        Ok(CoverReport { ok, gap, overlap, divergent })
    }
}

/// Both tiling checks for a single set.
#[derive(Clone, Debug)]
pub struct WaveletReport<G: Geometry> {
    pub translation: CoverReport<G>,
    pub dilation: CoverReport<G>,
}

impl<G: Geometry> WaveletReport<G> {
    pub fn ok(&self) -> bool {
        self.translation.ok && self.dilation.ok
    }
}

fn window_of_interval(iv: &Interval) -> Option<i64> {
    let n = iv.lo().window_index();
    let n = n.to_i64()?;
    let end = PiRational::two_pi(n.checked_add(1)?);
    if iv.hi() <= &end {
        Some(n)
    } else {
        None
    }
}

/// Decompose into pieces each inside one translation window [2n*pi, 2(n+1)*pi),
/// keeping pieces in place. Sorted by n.
pub fn window_pieces(s: &ExtendedSet) -> Result<Vec<(ExtendedSet, i64)>> {
    let mut acc: Vec<(i64, ExtendedSet)> = Vec::new();
    let mut push = |n: i64, piece: ExtendedSet| -> Result<()> {
        if piece.is_empty() {
            return Ok(());
        }
        match acc.iter_mut().find(|(m, _)| *m == n) {
            Some((_, e)) => *e = e.union(&piece)?,
            None => acc.push((n, piece)),
        }
        Ok(())
    };

    for iv in s.finite().intervals() {
        let mut n = iv
            .lo()
            .window_index()
            .to_i64()
            .ok_or(Error::BadParameter("window index out of range"))?;
        loop {
            let w = Interval::new(PiRational::two_pi(n), PiRational::two_pi(n + 1)).unwrap();
            let chunk = IntervalSet::single(w).inter(&IntervalSet::single(iv.clone()));
            push(n, ExtendedSet::from_finite(chunk))?;
            if iv.hi() <= &PiRational::two_pi(n + 1) {
                break;
            }
            n += 1;
        }
    }
    for t in s.tails() {
        let fits = |r: &IntervalSet| r.hull().is_some_and(|h| window_of_interval(&h).is_some());
        let (chunks, localized) = t.localize(fits)?;
        for chunk in chunks {
            for (piece, n) in window_pieces(&ExtendedSet::from_finite(chunk))? {
                push(n, piece)?;
            }
        }
        let hull = localized.region().hull().expect("regions are nonempty");
        let n = window_of_interval(&hull).expect("localized");
        push(n, ExtendedSet::from_tail(localized))?;
    }
    acc.sort_by_key(|(n, _)| *n);
    Ok(acc.into_iter().map(|(n, e)| (e, n)).collect())
}

/// One dyadic block: [2^j pi, 2^{j+1} pi) on the positive side, or
/// [-2^{j+1} pi, -2^j pi) on the negative side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BlockId {
    pub neg: bool,
    pub j: i64,
}

impl BlockId {
    pub fn interval(&self) -> Interval {
        let a = PiRational::from_rat(crate::scalars::pow2(self.j));
        let b = PiRational::from_rat(crate::scalars::pow2(self.j + 1));
        if self.neg {
            Interval::new(-&b, -&a).unwrap()
        } else {
            Interval::new(a, b).unwrap()
        }
    }
}

fn block_of_interval(iv: &Interval) -> Option<BlockId> {
    if iv.lo() >= &PiRational::zero() {
        if iv.lo().is_zero() {
            return None;
        }
        let j = dyadic_bracket(iv.lo().coeff());
        if cmp_pow2(iv.hi().coeff(), j + 1) != core::cmp::Ordering::Greater {
            return Some(BlockId { neg: false, j });
        }
        None
    } else if iv.hi() <= &PiRational::zero() {
        // j is fixed by the most negative point: 2^j < |lo| <= 2^{j+1}.
        let mag = iv.lo().abs();
        let b = dyadic_bracket(mag.coeff());
        let j = if cmp_pow2(mag.coeff(), b) == core::cmp::Ordering::Equal { b - 1 } else { b };
        let inner = PiRational::from_rat(-crate::scalars::pow2(j));
        if iv.hi() <= &inner {
            return Some(BlockId { neg: true, j });
        }
        None
    } else {
        None
    }
}

/// Decomposition into dyadic blocks plus the divergent remainder, reported as
/// the subset of the dilation fundamental domain covered infinitely often.
pub struct DyadicPieces {
    pub pieces: Vec<(ExtendedSet, BlockId)>,
    pub divergent: ExtendedSet,
}

pub fn dyadic_pieces(s: &ExtendedSet) -> Result<DyadicPieces> {
    let mut acc: Vec<(BlockId, ExtendedSet)> = Vec::new();
    let mut divergent = ExtendedSet::empty();
    let mut push = |id: BlockId, piece: ExtendedSet| -> Result<()> {
        if piece.is_empty() {
            return Ok(());
        }
        match acc.iter_mut().find(|(b, _)| *b == id) {
            Some((_, e)) => *e = e.union(&piece)?,
            None => acc.push((id, piece)),
        }
        Ok(())
    };

    for iv in s.finite().intervals() {
        // A piece with positive measure on both arbitrarily small scales
        // covers every small block fully, so its reduction blankets a whole
        // side of the fundamental domain.
        if iv.lo() < &PiRational::zero() && !iv.hi().is_negative() && !iv.lo().is_zero() {
            let side = ExtendedSet::from_interval(
                Interval::new(PiRational::from_int(-2), PiRational::from_int(-1)).unwrap(),
            );
            divergent = divergent.union(&side)?;
        }
        if iv.hi() > &PiRational::zero() && !iv.lo().is_positive() {
            let side = ExtendedSet::from_interval(
                Interval::new(PiRational::from_int(1), PiRational::from_int(2)).unwrap(),
            );
            divergent = divergent.union(&side)?;
        }
        if iv.lo() >= &PiRational::zero() || iv.hi() <= &PiRational::zero() {
            if iv.lo().is_zero() || iv.hi().is_zero() {
                continue;
            }
            let neg = iv.hi() <= &PiRational::zero();
            let (jmin, jmax) = if neg {
                (dyadic_bracket(iv.hi().abs().coeff()), {
                    let mag = iv.lo().abs();
                    let b = dyadic_bracket(mag.coeff());
                    if cmp_pow2(mag.coeff(), b) == core::cmp::Ordering::Equal {
                        b - 1
                    } else {
                        b
                    }
                })
            } else {
                (dyadic_bracket(iv.lo().coeff()), {
                    let b = dyadic_bracket(iv.hi().coeff());
                    if cmp_pow2(iv.hi().coeff(), b) == core::cmp::Ordering::Equal {
                        b - 1
                    } else {
                        b
                    }
                })
            };
            for j in jmin..=jmax {
                let id = BlockId { neg, j };
                let chunk = IntervalSet::single(id.interval())
                    .inter(&IntervalSet::single(iv.clone()));
                push(id, ExtendedSet::from_finite(chunk))?;
            }
        } else {
            // Straddles 0: both sides were already marked divergent above.
        }
    }

    for t in s.tails() {
        if t.fixed_point().is_zero() {
            // A pure dilation orbit has an unbounded exponent range; no
            // finite block decomposition exists.
            return Err(Error::DivergentAtZero);
        }
        let fits = |r: &IntervalSet| r.hull().is_some_and(|h| block_of_interval(&h).is_some());
        let (chunks, localized) = t.localize(fits)?;
        for chunk in chunks {
            let sub = dyadic_pieces(&ExtendedSet::from_finite(chunk))?;
            for (piece, id) in sub.pieces {
                push(id, piece)?;
            }
            divergent = divergent.union(&sub.divergent)?;
        }
        let hull = localized.region().hull().expect("regions are nonempty");
        let id = block_of_interval(&hull).expect("localized");
        push(id, ExtendedSet::from_tail(localized))?;
    }

    acc.sort_by_key(|(id, _)| *id);
    Ok(DyadicPieces {
        pieces: acc.into_iter().map(|(id, e)| (e, id)).collect(),
        divergent,
    })
}

fn translation_overlay(s: &ExtendedSet) -> Result<Overlay<Line>> {
    let mut overlay = Overlay::new();
    for (piece, n) in window_pieces(s)? {
        overlay.add(&piece.translate(&PiRational::two_pi(-n)))?;
    }
    Ok(overlay)
}

pub fn translation_profile(s: &ExtendedSet) -> Result<GeneratorReport> {
    CoverReport::build(&window_domain(), &translation_overlay(s)?, ExtendedSet::empty())
}

/// Exact covering multiplicity of s mod 2pi over [0, 2pi), as disjoint
/// classes in ascending multiplicity.
pub fn translation_reduce(s: &ExtendedSet) -> Result<Vec<(ExtendedSet, u32)>> {
    translation_overlay(s)?.levels()
}

fn dilation_overlay(s: &ExtendedSet) -> Result<(Overlay<Line>, ExtendedSet)> {
    let mut overlay = Overlay::new();
    let dp = dyadic_pieces(s)?;
    for (piece, id) in &dp.pieces {
        overlay.add(&piece.scale(-id.j))?;
    }
    Ok((overlay, dp.divergent))
}

pub fn dilation_profile(s: &ExtendedSet) -> Result<GeneratorReport> {
    let (overlay, divergent) = dilation_overlay(s)?;
    CoverReport::build(&dyadic_domain(), &overlay, divergent)
}

/// Multiplicity classes over the dilation fundamental domain plus the part
/// covered infinitely often. Finite classes exclude the divergent part.
pub struct DilationProfile {
    pub levels: Vec<(ExtendedSet, u32)>,
    pub divergent: ExtendedSet,
}

pub fn dilation_reduce(s: &ExtendedSet) -> Result<DilationProfile> {
    let (overlay, divergent) = dilation_overlay(s)?;
    let mut levels = overlay.levels()?;
    if !divergent.is_empty() {
        for (lv, _) in &mut levels {
            *lv = lv.diff(&divergent)?;
        }
        levels.retain(|(lv, _)| !lv.is_empty());
    }
    Ok(DilationProfile { levels, divergent })
}

pub fn is_translation_generator(s: &ExtendedSet) -> Result<GeneratorReport> {
    translation_profile(s)
}

pub fn is_dilation_generator(s: &ExtendedSet) -> Result<GeneratorReport> {
    dilation_profile(s)
}

/// Both tiling checks; the set is a wavelet set iff both come back clean.
pub fn is_wavelet_set(s: &ExtendedSet) -> Result<WaveletReport<Line>> {
    Ok(WaveletReport { translation: translation_profile(s)?, dilation: dilation_profile(s)? })
}

/// Exact witness that e is 2pi-translation congruent to f: pieces of e with
/// the window shift carrying each into f, partitioning both sides.
#[derive(Clone, Debug)]
pub struct TranslationWitness {
    pub pieces: Vec<(ExtendedSet, i64)>,
}

fn diagnose_translation(e: &ExtendedSet, f: &ExtendedSet) -> Error {
    match translation_profile(e) {
        Ok(r) if !r.ok => return Error::NotGenerator("left set is not a translation generator"),
        Err(err) => return err,
        _ => {}
    }
    match translation_profile(f) {
        Ok(r) if !r.ok => Error::NotGenerator("right set is not a translation generator"),
        Err(err) => err,
        _ => Error::NotCongruent,
    }
}

pub fn translation_witness(e: &ExtendedSet, f: &ExtendedSet) -> Result<TranslationWitness> {
    let mut pieces = Vec::new();
    if e.is_empty() && f.is_empty() {
        return Ok(TranslationWitness { pieces });
    }
    let (eb, fb) = match (e.bounds(), f.bounds()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(diagnose_translation(e, f)),
    };
    let two = Rat::from_integer(2.into());
    let n_min = ((fb.lo().coeff() - eb.hi().coeff()) / &two).floor().to_integer();
    let n_max = ((fb.hi().coeff() - eb.lo().coeff()) / &two).ceil().to_integer();
    let n_min = n_min.to_i64().ok_or(Error::BadParameter("witness range"))? + 1;
    let n_max = n_max.to_i64().ok_or(Error::BadParameter("witness range"))? - 1;
    let mut covered = ExtendedSet::empty();
    let mut target = ExtendedSet::empty();
    let mut total = Rat::zero();
    for n in n_min..=n_max {
        let part = e.inter(&f.translate(&PiRational::two_pi(-n)))?;
        if part.is_empty() {
            continue;
        }
        total += part.measure();
        covered = covered.union(&part)?;
        target = target.union(&part.translate(&PiRational::two_pi(n)))?;
        pieces.push((part, n));
    }
    if !covered.set_eq(e)? || total != e.measure() {
        return Err(diagnose_translation(e, f));
    }
    if total != target.measure() {
        return Err(Error::WitnessOverlap);
    }
    if !target.set_eq(f)? {
        return Err(diagnose_translation(e, f));
    }
    Ok(TranslationWitness { pieces })
}

/// Smallest magnitude of any point of s (0 if s meets every neighborhood of
/// the origin with positive measure).
pub(crate) fn min_magnitude(s: &ExtendedSet) -> Result<Rat> {
    let mut best: Option<Rat> = None;
    let mut consider = |q: Rat| {
        if best.as_ref().map(|b| &q < b).unwrap_or(true) {
            best = Some(q);
        }
    };
    for iv in s.finite().intervals() {
        if iv.lo() < &PiRational::zero() && iv.hi() > &PiRational::zero() {
            consider(Rat::zero());
        } else if iv.lo() >= &PiRational::zero() {
            consider(iv.lo().coeff().clone());
        } else {
            consider(iv.hi().abs().into_coeff());
        }
    }
    for t in s.tails() {
        let zero = PiRational::zero();
        if t.fixed_point().is_zero() {
            consider(Rat::zero());
            continue;
        }
        let (chunks, localized) =
            t.localize(|r| !r.contains(&zero) && !r.lo().is_zero() && !r.hi().is_zero())?;
        for chunk in chunks {
            let sub = min_magnitude(&ExtendedSet::from_finite(chunk))?;
            consider(sub);
        }
        let r = localized.region();
        if r.lo() >= &zero {
            consider(r.lo().coeff().clone());
        } else {
            consider(r.hi().abs().into_coeff());
        }
    }
    best.ok_or(Error::NotCongruent)
}

pub(crate) fn max_magnitude(s: &ExtendedSet) -> Result<Rat> {
    let b = s.bounds().ok_or(Error::NotCongruent)?;
    Ok(b.lo().abs().into_coeff().max(b.hi().abs().into_coeff()))
}

/// Exact witness that e is dyadic-dilation congruent to f: pieces of e with
/// exponents k so that 2^k piece lands in f, partitioning both sides.
#[derive(Clone, Debug)]
pub struct DilationWitness {
    pub pieces: Vec<(ExtendedSet, i64)>,
}

fn diagnose_dilation(e: &ExtendedSet, f: &ExtendedSet) -> Error {
    match dilation_profile(e) {
        Ok(r) if !r.ok => return Error::NotGenerator("left set is not a dilation generator"),
        Err(err) => return err,
        _ => {}
    }
    match dilation_profile(f) {
        Ok(r) if !r.ok => Error::NotGenerator("right set is not a dilation generator"),
        Err(err) => err,
        _ => Error::NotCongruent,
    }
}

pub fn dilation_witness(e: &ExtendedSet, f: &ExtendedSet) -> Result<DilationWitness> {
    let mut pieces = Vec::new();
    if e.is_empty() && f.is_empty() {
        return Ok(DilationWitness { pieces });
    }
    let (emin, emax) = (min_magnitude(e).map_err(|_| diagnose_dilation(e, f))?, max_magnitude(e)?);
    let (fmin, fmax) = (min_magnitude(f).map_err(|_| diagnose_dilation(e, f))?, max_magnitude(f)?);
    if emin.is_zero() || fmin.is_zero() {
        return Err(Error::DivergentAtZero);
    }
    let k_max = dyadic_bracket(&(fmax / &emin));
    let k_min = -dyadic_bracket(&(emax / &fmin));
    let mut covered = ExtendedSet::empty();
    let mut target = ExtendedSet::empty();
    let mut total = Rat::zero();
    let mut target_total = Rat::zero();
    for k in k_min..=k_max {
        let part = e.inter(&f.scale(-k))?;
        if part.is_empty() {
            continue;
        }
        total += part.measure();
        target_total += part.scale(k).measure();
        covered = covered.union(&part)?;
        target = target.union(&part.scale(k))?;
        pieces.push((part, k));
    }
    if !covered.set_eq(e)? || total != e.measure() {
        return Err(diagnose_dilation(e, f));
    }
    if target_total != target.measure() {
        return Err(Error::WitnessOverlap);
    }
    if !target.set_eq(f)? {
        return Err(diagnose_dilation(e, f));
    }
    Ok(DilationWitness { pieces })
}

/// A cell of the simultaneous decomposition: part + 2n*pi lies in f and
/// 2^k part lies in f.
#[derive(Clone, Debug)]
pub struct JointCell {
    pub part: ExtendedSet,
    pub n: i64,
    pub k: i64,
}

#[derive(Clone, Debug)]
pub struct JointWitness {
    pub cells: Vec<JointCell>,
}

/// Refine the translation and dilation witnesses against each other. For
/// tiling generators every cell has either both indices zero (the common part
/// e n f) or both nonzero.
pub fn joint_witness(e: &ExtendedSet, f: &ExtendedSet) -> Result<JointWitness> {
    let tw = translation_witness(e, f)?;
    let dw = dilation_witness(e, f)?;
    let mut cells = Vec::new();
    for (tp, n) in &tw.pieces {
        for (dp, k) in &dw.pieces {
            let part = tp.inter(dp)?;
            if part.is_empty() {
                continue;
            }
            if (*n == 0) != (*k == 0) {
                return Err(Error::NotGenerator("joint cell with exactly one zero index"));
            }
            cells.push(JointCell { part, n: *n, k: *k });
        }
    }
    Ok(JointWitness { cells })
}
