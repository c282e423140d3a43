//! Generic exact set algebra, dimension-independent.
//!
//! A set is a finite part plus finitely many self-similar tails. A tail is the
//! forward orbit `U S^i(base)` of a finite set under an affine contraction
//! `S(x) = 2^lambda (x + c)`, kept inside a rectangular region `R` with
//! `S(R) subset R` and `base subset R \ S(R)`. The annulus alignment makes the
//! orbit pieces pairwise disjoint and gives closed forms for measure and for
//! boolean operations: two tails of the same map intersect annulus by annulus,
//! tails of different maps separate after finitely many peels, and the
//! complement of a tail inside its own region is again a tail of the same map.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use crate::scalars::{dyadic_bracket, pow2, Rat};
use crate::{Error, Result};

/// How many times a tail may be peeled while an operation looks for
/// separation or alignment. Every loop below shrinks a region geometrically,
/// so hitting this means the operands are entangled in a way finite peeling
/// cannot resolve.
const ADVANCE_BUDGET: usize = 4096;

/// Dimension plug: finite sets (unions of half-open intervals or boxes),
/// rectangular regions, and points, with the operations the tail engine needs.
pub trait Geometry: Sized + Clone + fmt::Debug + PartialEq {
    const DIM: u32;
    type Point: Clone + PartialEq + fmt::Debug;
    type Set: Clone + PartialEq + fmt::Debug;

    fn zero_point() -> Self::Point;
    fn add_point(a: &Self::Point, b: &Self::Point) -> Self::Point;
    fn neg_point(p: &Self::Point) -> Self::Point;
    fn mul_point_rat(p: &Self::Point, q: &Rat) -> Self::Point;
    fn cmp_point(a: &Self::Point, b: &Self::Point) -> Ordering;
    /// Max-norm distance between two points, in units of pi.
    fn point_gap(a: &Self::Point, b: &Self::Point) -> Rat;

    fn empty() -> Self::Set;
    fn is_empty(s: &Self::Set) -> bool;
    fn union(a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn inter(a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn diff(a: &Self::Set, b: &Self::Set) -> Self::Set;
    /// Lebesgue measure in units of pi^DIM.
    fn measure(s: &Self::Set) -> Rat;
    /// x -> 2^k x + t.
    fn affine_set(s: &Self::Set, k: i64, t: &Self::Point) -> Self::Set;
    /// x -> -x.
    fn reflect_set(s: &Self::Set) -> Self::Set;
    fn contains_point(s: &Self::Set, p: &Self::Point) -> bool;
    /// Bounding interval or box, as a one-piece set.
    fn hull(s: &Self::Set) -> Option<Self::Set>;
    /// Hull extended per axis just enough that the half-open box absorbs the
    /// orbit of any of its points toward p.
    fn point_hull(s: &Self::Set, p: &Self::Point) -> Option<Self::Set>;
    /// Split into parts that each lie weakly on one side of p per axis
    /// (coordinates >= p count as the upper side). Empty parts are omitted.
    fn split_at_point(s: &Self::Set, p: &Self::Point) -> Vec<Self::Set>;
    fn cmp_set(a: &Self::Set, b: &Self::Set) -> Ordering;
    /// Max axis extent of the hull, in units of pi.
    fn diam(s: &Self::Set) -> Rat;
}

fn set_subset<G: Geometry>(a: &G::Set, b: &G::Set) -> bool {
    G::is_empty(&G::diff(a, b))
}

fn set_disjoint<G: Geometry>(a: &G::Set, b: &G::Set) -> bool {
    G::is_empty(&G::inter(a, b))
}

/// S(x) = 2^lambda (x + shift) with lambda < 0.
#[derive(Clone, PartialEq, Debug)]
pub struct Contraction<G: Geometry> {
    lambda: i64,
    shift: G::Point,
}

impl<G: Geometry> Contraction<G> {
    pub fn new(lambda: i64, shift: G::Point) -> Result<Self> {
        if lambda >= 0 {
            return Err(Error::NotContracting);
        }
        Ok(Contraction { lambda, shift })
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn shift(&self) -> &G::Point {
        &self.shift
    }

    /// The unique fixed point 2^lambda shift / (1 - 2^lambda).
    pub fn fixed_point(&self) -> G::Point {
        let denom = pow2(-self.lambda) - Rat::one();
        G::mul_point_rat(&self.shift, &denom.recip())
    }

    pub fn apply_point(&self, x: &G::Point) -> G::Point {
        G::mul_point_rat(&G::add_point(x, &self.shift), &pow2(self.lambda))
    }

    pub fn apply_set(&self, s: &G::Set) -> G::Set {
        let t = G::mul_point_rat(&self.shift, &pow2(self.lambda));
        G::affine_set(s, self.lambda, &t)
    }

    pub fn unapply_set(&self, s: &G::Set) -> G::Set {
        G::affine_set(s, -self.lambda, &G::neg_point(&self.shift))
    }

    pub fn unapply_point(&self, x: &G::Point) -> G::Point {
        G::add_point(&G::mul_point_rat(x, &pow2(-self.lambda)), &G::neg_point(&self.shift))
    }

    /// S^d as a contraction, d >= 1.
    pub fn pow(&self, d: u32) -> Self {
        assert!(d >= 1);
        let mut geom = Rat::zero();
        for i in 1..=d {
            geom += pow2(self.lambda * i as i64);
        }
        let shift = G::mul_point_rat(&self.shift, &(geom * pow2(-self.lambda * d as i64)));
        Contraction { lambda: self.lambda * d as i64, shift }
    }

    /// The contraction A S A^{-1} for A(x) = 2^k x + t; same lambda.
    pub fn conjugate(&self, k: i64, t: &G::Point) -> Self {
        let a = G::mul_point_rat(t, &(pow2(-self.lambda) - Rat::one()));
        let b = G::mul_point_rat(&self.shift, &pow2(k));
        Contraction { lambda: self.lambda, shift: G::add_point(&a, &b) }
    }

    /// The contraction N S N for N(x) = -x.
    pub fn conjugate_reflect(&self) -> Self {
        Contraction { lambda: self.lambda, shift: G::neg_point(&self.shift) }
    }

    /// Sum of the piece measure ratios: 1 / (1 - 2^{lambda * DIM}).
    fn orbit_measure_factor(&self) -> Rat {
        (Rat::one() - pow2(self.lambda * G::DIM as i64)).recip()
    }
}

/// The orbit `U_{i>=0} S^i(base)` of a finite set under a contraction,
/// tracked inside a region (any finite set) that the contraction maps into
/// itself.
#[derive(Clone, PartialEq, Debug)]
pub struct Tail<G: Geometry> {
    map: Contraction<G>,
    base: G::Set,
    region: G::Set,
}

impl<G: Geometry> Tail<G> {
    /// Region defaults to the hull of the base extended toward the fixed
    /// point, which absorbs the orbit whenever it clears the base.
    pub fn new(map: Contraction<G>, base: G::Set) -> Result<Self> {
        let region = G::point_hull(&base, &map.fixed_point())
            .ok_or(Error::TailInvariant("empty base"))?;
        Self::with_region(map, base, region)
    }

    pub fn with_region(map: Contraction<G>, base: G::Set, region: G::Set) -> Result<Self> {
        if G::is_empty(&base) {
            return Err(Error::TailInvariant("empty base"));
        }
        if !set_subset::<G>(&base, &region) {
            return Err(Error::TailInvariant("base not inside region"));
        }
        let sregion = map.apply_set(&region);
        if !set_subset::<G>(&sregion, &region) {
            return Err(Error::TailInvariant("region not mapped into itself"));
        }
        if !set_disjoint::<G>(&base, &sregion) {
            return Err(Error::TailInvariant("base meets contracted region"));
        }
        Ok(Tail { map, base, region })
    }

    pub fn map(&self) -> &Contraction<G> {
        &self.map
    }

    pub fn base(&self) -> &G::Set {
        &self.base
    }

    pub fn region(&self) -> &G::Set {
        &self.region
    }

    pub fn fixed_point(&self) -> G::Point {
        self.map.fixed_point()
    }

    pub fn measure(&self) -> Rat {
        G::measure(&self.base) * self.map.orbit_measure_factor()
    }

    /// Split off the base as a finite chunk; the rest is the advanced tail.
    pub fn peel(&self) -> (G::Set, Tail<G>) {
        let chunk = self.base.clone();
        let next = Tail {
            map: self.map.clone(),
            base: self.map.apply_set(&self.base),
            region: self.map.apply_set(&self.region),
        };
        (chunk, next)
    }

    fn annulus(&self) -> G::Set {
        G::diff(&self.region, &self.map.apply_set(&self.region))
    }

    /// A tail whose base fills its whole annulus is the region itself, up to
    /// the null fixed point.
    pub fn collapse(&self) -> Option<G::Set> {
        if self.base == self.annulus() {
            Some(self.region.clone())
        } else {
            None
        }
    }

    /// The complement of the orbit inside its own region is the orbit of the
    /// complementary part of the annulus.
    fn complement_within_region(&self) -> Option<Tail<G>> {
        let comp = G::diff(&self.annulus(), &self.base);
        if G::is_empty(&comp) {
            None
        } else {
            Some(Tail { map: self.map.clone(), base: comp, region: self.region.clone() })
        }
    }

    /// Pointwise membership in the orbit. The fixed point itself is never a
    /// member: the orbit accumulates at p without reaching it. Consequently
    /// set operations and pointwise membership agree everywhere except
    /// possibly at tail fixed points, a null set.
    pub fn contains_point(&self, x: &G::Point) -> bool {
        let p = self.fixed_point();
        if *x == p {
            return false;
        }
        let gap = G::point_gap(x, &p);
        let diam = G::diam(&self.region);
        if diam.is_zero() {
            return false;
        }
        // The inverse map doubles the distance to p every -lambda steps at
        // least, so the walk leaves the region after this many iterations.
        let steps = {
            let hi = dyadic_bracket(&diam);
            let lo = dyadic_bracket(&gap);
            let la = (-self.map.lambda) as u64;
            ((hi - lo).max(0) as u64 / la + 3) as usize
        };
        let mut y = x.clone();
        for _ in 0..steps {
            if !G::contains_point(&self.region, &y) {
                return false;
            }
            if G::contains_point(&self.base, &y) {
                return true;
            }
            y = self.map.unapply_point(&y);
        }
        false
    }

    pub fn affine(&self, k: i64, t: &G::Point) -> Tail<G> {
        Tail {
            map: self.map.conjugate(k, t),
            base: G::affine_set(&self.base, k, t),
            region: G::affine_set(&self.region, k, t),
        }
    }

    pub fn reflect(&self) -> Tail<G> {
        Tail {
            map: self.map.conjugate_reflect(),
            base: G::reflect_set(&self.base),
            region: G::reflect_set(&self.region),
        }
    }

    /// Split into tails whose bases are one-sided around the fixed point, so
    /// that later peeling separates them from anything not accumulating at p.
    /// Regions shrink back to point hulls where those clear the base.
    fn split_one_sided(&self) -> Vec<Tail<G>> {
        let p = self.fixed_point();
        let parts = G::split_at_point(&self.base, &p);
        let quads = G::split_at_point(&self.region, &p);
        parts
            .into_iter()
            .map(|part| {
                let hull = G::point_hull(&part, &p).expect("split parts are nonempty");
                if let Ok(t) = Tail::with_region(self.map.clone(), part.clone(), hull) {
                    return t;
                }
                let region = quads
                    .iter()
                    .find(|q| set_subset::<G>(&part, q))
                    .expect("base parts live inside region parts")
                    .clone();
                Tail { map: self.map.clone(), base: part, region }
            })
            .collect()
    }

    /// Advance until the region satisfies `fits`, returning the peeled chunks.
    pub(crate) fn localize<F>(&self, fits: F) -> Result<(Vec<G::Set>, Tail<G>)>
    where
        F: Fn(&G::Set) -> bool,
    {
        let mut chunks = Vec::new();
        let mut cur = self.clone();
        for _ in 0..ADVANCE_BUDGET {
            if fits(&cur.region) {
                return Ok((chunks, cur));
            }
            let (chunk, next) = cur.peel();
            chunks.push(chunk);
            cur = next;
        }
        Err(Error::IncomparableTails)
    }

    /// Rewrite the orbit as a single tail of S^n by thickening the base to
    /// `base u S(base) u ... u S^{n-1}(base)`.
    fn rebase_to_power(&self, n: u32) -> Tail<G> {
        assert!(n >= 1);
        if n == 1 {
            return self.clone();
        }
        let power = self.map.pow(n);
        let mut base = self.base.clone();
        let mut img = self.base.clone();
        for _ in 1..n {
            img = self.map.apply_set(&img);
            base = G::union(&base, &img);
        }
        Tail { map: power, base, region: self.region.clone() }
    }
}

/// t \ x for finite x.
fn tail_minus_finite<G: Geometry>(t: &Tail<G>, x: &G::Set) -> Result<Ext<G>> {
    let mut kept = G::empty();
    let mut cur = t.clone();
    for _ in 0..ADVANCE_BUDGET {
        if set_disjoint::<G>(&cur.region, x) {
            return Ok(Ext::assemble(kept, vec![cur]));
        }
        if set_subset::<G>(&cur.region, x) {
            return Ok(Ext::assemble(kept, vec![]));
        }
        let (chunk, next) = cur.peel();
        kept = G::union(&kept, &G::diff(&chunk, x));
        cur = next;
    }
    Err(Error::IncomparableTails)
}

/// t n x for finite x.
fn tail_inter_finite<G: Geometry>(t: &Tail<G>, x: &G::Set) -> Result<Ext<G>> {
    let mut kept = G::empty();
    let mut cur = t.clone();
    for _ in 0..ADVANCE_BUDGET {
        if set_disjoint::<G>(&cur.region, x) {
            return Ok(Ext::assemble(kept, vec![]));
        }
        if set_subset::<G>(&cur.region, x) {
            return Ok(Ext::assemble(kept, vec![cur]));
        }
        let (chunk, next) = cur.peel();
        kept = G::union(&kept, &G::inter(&chunk, x));
        cur = next;
    }
    Err(Error::IncomparableTails)
}

/// s \ t for finite s. When the walk reaches a region entirely inside s the
/// complement formula finishes in closed form.
fn finite_minus_tail<G: Geometry>(s: &G::Set, t: &Tail<G>) -> Result<Ext<G>> {
    let mut out = G::empty();
    let mut cur_s = s.clone();
    let mut cur_t = t.clone();
    for _ in 0..ADVANCE_BUDGET {
        let rset = &cur_t.region;
        if G::is_empty(&G::inter(&cur_s, rset)) {
            return Ok(Ext::assemble(G::union(&out, &cur_s), vec![]));
        }
        if set_subset::<G>(rset, &cur_s) {
            let outside = G::diff(&cur_s, rset);
            let tails = match cur_t.complement_within_region() {
                Some(c) => vec![c],
                None => vec![],
            };
            return Ok(Ext::assemble(G::union(&out, &outside), tails));
        }
        out = G::union(&out, &G::diff(&cur_s, rset));
        let sr = cur_t.map.apply_set(rset);
        let ann = G::diff(rset, &sr);
        out = G::union(&out, &G::diff(&G::inter(&cur_s, &ann), &cur_t.base));
        cur_s = G::inter(&cur_s, &sr);
        let (_, next) = cur_t.peel();
        cur_t = next;
    }
    Err(Error::IncomparableTails)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TailOp {
    Inter,
    Diff,
}

/// a op b for two tails of the same map with a's region inside b's. Works at
/// the base level: b's orbit extended bilaterally is S-invariant, so it meets
/// a's annulus in a finite slice of images.
fn same_map_nested_op<G: Geometry>(a: &Tail<G>, b: &Tail<G>, op: TailOp) -> Result<Ext<G>> {
    debug_assert!(set_subset::<G>(&a.region, &b.region));
    let ann = a.annulus();
    let sub_region = a.map.apply_set(&a.region);
    let b_hull = G::hull(&b.base).expect("tail bases are nonempty");
    let mut slice = G::inter(&b.base, &ann);
    // Shrinking images: stop once the image hull is inside the contracted
    // region, where it can no longer meet the annulus (nor can later images).
    let mut e: u32 = 1;
    loop {
        let img_hull = b.map.pow(e).apply_set(&b_hull);
        if set_subset::<G>(&img_hull, &sub_region) {
            break;
        }
        let img = b.map.pow(e).apply_set(&b.base);
        slice = G::union(&slice, &G::inter(&img, &ann));
        e += 1;
        if e as usize > ADVANCE_BUDGET {
            return Err(Error::IncomparableTails);
        }
    }
    // Growing images: expansion moves every point outward along its ray from
    // the fixed point, so once an image set misses a's region all later ones
    // do too. The test is on the image itself, not its hull: the hull of an
    // annulus piece can reach the fixed point and would never separate.
    let mut e: u32 = 1;
    loop {
        let img = b.map.pow(e).unapply_set(&b.base);
        if set_disjoint::<G>(&img, &a.region) {
            break;
        }
        slice = G::union(&slice, &G::inter(&img, &ann));
        e += 1;
        if e as usize > ADVANCE_BUDGET {
            return Err(Error::IncomparableTails);
        }
    }
    let base = match op {
        TailOp::Inter => G::inter(&a.base, &slice),
        TailOp::Diff => G::diff(&a.base, &slice),
    };
    if G::is_empty(&base) {
        Ok(Ext::empty_g())
    } else {
        Ok(Ext::assemble(
            G::empty(),
            vec![Tail { map: a.map.clone(), base, region: a.region.clone() }],
        ))
    }
}

/// a op b for arbitrary tails.
fn tail_tail_op<G: Geometry>(a: &Tail<G>, b: &Tail<G>, op: TailOp) -> Result<Ext<G>> {
    // Same fixed point at different rates: rebase both to the lcm rate, after
    // which the maps coincide.
    if a.map != b.map && a.fixed_point() == b.fixed_point() {
        let la = (-a.map.lambda) as u32;
        let lb = (-b.map.lambda) as u32;
        let lcm = num_integer::lcm(la, lb);
        let ra = a.rebase_to_power(lcm / la);
        let rb = b.rebase_to_power(lcm / lb);
        return tail_tail_op(&ra, &rb, op);
    }

    if a.map == b.map {
        if set_disjoint::<G>(&a.region, &b.region) {
            return Ok(match op {
                TailOp::Inter => Ext::empty_g(),
                TailOp::Diff => Ext::assemble(G::empty(), vec![a.clone()]),
            });
        }
        // Peel a until its region nests inside b's; peeled chunks meet b only
        // through the finite ops.
        let (chunks, inner) = a.localize(|r| set_subset::<G>(r, &b.region))?;
        let mut acc = same_map_nested_op(&inner, b, op)?;
        for chunk in chunks {
            let part = match op {
                TailOp::Inter => tail_inter_finite(b, &chunk)?,
                TailOp::Diff => finite_minus_tail(&chunk, b)?,
            };
            acc = acc.merge_disjoint(part);
        }
        return Ok(acc);
    }

    // Different fixed points: peel both until the regions separate.
    let mut ca: Vec<G::Set> = Vec::new();
    let mut cb: Vec<G::Set> = Vec::new();
    let mut ta = a.clone();
    let mut tb = b.clone();
    let mut guard = 0;
    while !set_disjoint::<G>(&ta.region, &tb.region) {
        guard += 1;
        if guard > ADVANCE_BUDGET {
            return Err(Error::IncomparableTails);
        }
        let (x, na) = ta.peel();
        ca.push(x);
        ta = na;
        let (y, nb) = tb.peel();
        cb.push(y);
        tb = nb;
    }
    let fa = ca.iter().fold(G::empty(), |s, c| G::union(&s, c));
    let fb = cb.iter().fold(G::empty(), |s, c| G::union(&s, c));
    match op {
        TailOp::Inter => {
            // The remaining tails live in disjoint regions, so only the
            // finite expansions cross.
            let mut acc = Ext::assemble(G::inter(&fa, &fb), vec![]);
            acc = acc.merge_disjoint(tail_inter_finite(&tb, &fa)?);
            acc = acc.merge_disjoint(tail_inter_finite(&ta, &fb)?);
            Ok(acc)
        }
        TailOp::Diff => {
            let fin = finite_minus_tail(&G::diff(&fa, &fb), &tb)?;
            let tail_part = tail_minus_finite(&ta, &fb)?;
            Ok(fin.merge_disjoint(tail_part))
        }
    }
}

/// A finite set together with finitely many pairwise disjoint tails.
#[derive(Clone, Debug)]
pub struct Ext<G: Geometry> {
    finite: G::Set,
    tails: Vec<Tail<G>>,
}

impl<G: Geometry> Ext<G> {
    pub fn empty_g() -> Self {
        Ext { finite: G::empty(), tails: Vec::new() }
    }

    pub fn from_finite(finite: G::Set) -> Self {
        Ext { finite, tails: Vec::new() }
    }

    pub fn from_tail(tail: Tail<G>) -> Self {
        Ext { finite: G::empty(), tails: vec![tail] }.normalize()
    }

    /// Public assembly: verifies the components are pairwise disjoint.
    pub fn from_components(finite: G::Set, tails: Vec<Tail<G>>) -> Result<Self> {
        let fin_ext = Ext::from_finite(finite.clone());
        let tail_exts: Vec<Ext<G>> =
            tails.iter().map(|t| Ext::assemble(G::empty(), vec![t.clone()])).collect();
        for (i, te) in tail_exts.iter().enumerate() {
            if !fin_ext.inter_impl(te)?.is_empty() {
                return Err(Error::TailInvariant("tail overlaps finite part"));
            }
            for other in &tail_exts[i + 1..] {
                if !te.inter_impl(other)?.is_empty() {
                    return Err(Error::TailInvariant("tails overlap"));
                }
            }
        }
        Ok(Ext { finite, tails }.normalize())
    }

    pub(crate) fn assemble(finite: G::Set, tails: Vec<Tail<G>>) -> Self {
        Ext { finite, tails }
    }

    pub fn finite(&self) -> &G::Set {
        &self.finite
    }

    pub fn tails(&self) -> &[Tail<G>] {
        &self.tails
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty() && G::is_empty(&self.finite)
    }

    pub fn measure(&self) -> Rat {
        let mut m = G::measure(&self.finite);
        for t in &self.tails {
            m += t.measure();
        }
        m
    }

    pub fn contains_point(&self, x: &G::Point) -> bool {
        if G::contains_point(&self.finite, x) {
            return true;
        }
        self.tails.iter().any(|t| t.contains_point(x))
    }

    /// Bounding interval or box of the whole set, as a one-piece set.
    pub fn bounds(&self) -> Option<G::Set> {
        let mut acc = self.finite.clone();
        for t in &self.tails {
            acc = G::union(&acc, &t.region);
        }
        G::hull(&acc)
    }

    pub fn affine(&self, k: i64, t: &G::Point) -> Self {
        Ext {
            finite: G::affine_set(&self.finite, k, t),
            tails: self.tails.iter().map(|tl| tl.affine(k, t)).collect(),
        }
        .normalize()
    }

    pub fn translate(&self, t: &G::Point) -> Self {
        self.affine(0, t)
    }

    pub fn scale(&self, k: i64) -> Self {
        self.affine(k, &G::zero_point())
    }

    pub fn reflect(&self) -> Self {
        Ext {
            finite: G::reflect_set(&self.finite),
            tails: self.tails.iter().map(Tail::reflect).collect(),
        }
        .normalize()
    }

    /// Peel tails until the dropped measure is at most eps; returns the
    /// finite approximation and the exact defect.
    pub fn truncate(&self, eps: &Rat) -> (G::Set, Rat) {
        let mut fin = self.finite.clone();
        let mut live: Vec<Tail<G>> = self.tails.clone();
        loop {
            let defect: Rat = live.iter().map(Tail::measure).fold(Rat::zero(), |a, b| a + b);
            if &defect <= eps || live.is_empty() {
                return (fin, defect);
            }
            let (idx, _) = live
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| a.measure().cmp(&b.measure()))
                .expect("nonempty");
            let (chunk, next) = live[idx].peel();
            fin = G::union(&fin, &chunk);
            live[idx] = next;
        }
    }

    fn merge_disjoint(mut self, other: Ext<G>) -> Self {
        self.finite = G::union(&self.finite, &other.finite);
        self.tails.extend(other.tails);
        self
    }

    /// Canonical form: tails one-sided, full annuli collapsed, same-map tails
    /// merged, deterministic order.
    fn normalize(mut self) -> Self {
        let mut tails: Vec<Tail<G>> = Vec::new();
        for t in self.tails.drain(..) {
            if G::is_empty(&t.base) {
                continue;
            }
            tails.extend(t.split_one_sided());
        }
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < tails.len() {
                if let Some(full) = tails[i].collapse() {
                    self.finite = G::union(&self.finite, &full);
                    tails.swap_remove(i);
                    changed = true;
                    continue;
                }
                i += 1;
            }
            'merge: for i in 0..tails.len() {
                for j in (i + 1)..tails.len() {
                    if let Some((fin, newtails)) = merge_same_map(&tails[i], &tails[j]) {
                        self.finite = G::union(&self.finite, &fin);
                        tails.swap_remove(j);
                        tails.swap_remove(i);
                        tails.extend(newtails);
                        changed = true;
                        break 'merge;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        tails.sort_by(|a, b| {
            G::cmp_point(&a.fixed_point(), &b.fixed_point())
                .then_with(|| a.map.lambda.cmp(&b.map.lambda))
                .then_with(|| G::cmp_set(&a.region, &b.region))
                .then_with(|| G::cmp_set(&a.base, &b.base))
        });
        self.tails = tails;
        self
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let extra = other.diff_impl(self)?;
        Ok(self.clone().merge_disjoint(extra).normalize())
    }

    pub fn inter(&self, other: &Self) -> Result<Self> {
        self.inter_impl(other)
    }

    pub fn diff(&self, other: &Self) -> Result<Self> {
        self.diff_impl(other)
    }

    pub fn symdiff(&self, other: &Self) -> Result<Self> {
        let a = self.diff_impl(other)?;
        let b = other.diff_impl(self)?;
        Ok(a.merge_disjoint(b).normalize())
    }

    pub fn subset_of(&self, other: &Self) -> Result<bool> {
        Ok(self.diff_impl(other)?.is_empty())
    }

    pub fn set_eq(&self, other: &Self) -> Result<bool> {
        if self.finite == other.finite && self.tails == other.tails {
            return Ok(true);
        }
        Ok(self.symdiff(other)?.is_empty())
    }

    fn diff_impl(&self, other: &Self) -> Result<Self> {
        let mut acc = self.clone();
        acc = acc.minus_finite(&other.finite)?;
        for t in &other.tails {
            acc = acc.minus_tail(t)?;
        }
        Ok(acc.normalize())
    }

    fn minus_finite(&self, x: &G::Set) -> Result<Self> {
        if G::is_empty(x) {
            return Ok(self.clone());
        }
        let mut acc = Ext::from_finite(G::diff(&self.finite, x));
        for t in &self.tails {
            acc = acc.merge_disjoint(tail_minus_finite(t, x)?);
        }
        Ok(acc)
    }

    fn minus_tail(&self, t: &Tail<G>) -> Result<Self> {
        let mut acc = finite_minus_tail(&self.finite, t)?;
        for own in &self.tails {
            acc = acc.merge_disjoint(tail_tail_op(own, t, TailOp::Diff)?);
        }
        Ok(acc)
    }

    fn inter_impl(&self, other: &Self) -> Result<Self> {
        let mut acc = Ext::from_finite(G::inter(&self.finite, &other.finite));
        for t in &other.tails {
            acc = acc.merge_disjoint(tail_inter_finite(t, &self.finite)?);
        }
        for own in &self.tails {
            acc = acc.merge_disjoint(tail_inter_finite(own, &other.finite)?);
            for t in &other.tails {
                acc = acc.merge_disjoint(tail_tail_op(own, t, TailOp::Inter)?);
            }
        }
        Ok(acc.normalize())
    }
}

impl<G: Geometry> PartialEq for Ext<G> {
    fn eq(&self, other: &Self) -> bool {
        self.set_eq(other).unwrap_or(false)
    }
}

fn merge_same_map<G: Geometry>(a: &Tail<G>, b: &Tail<G>) -> Option<(G::Set, Vec<Tail<G>>)> {
    if a.map != b.map {
        if a.fixed_point() == b.fixed_point() && a.map.lambda != b.map.lambda {
            let la = (-a.map.lambda) as u32;
            let lb = (-b.map.lambda) as u32;
            let lcm = num_integer::lcm(la, lb);
            return Some((
                G::empty(),
                vec![a.rebase_to_power(lcm / la), b.rebase_to_power(lcm / lb)],
            ));
        }
        return None;
    }
    if a.region == b.region {
        let base = G::union(&a.base, &b.base);
        return Some((
            G::empty(),
            vec![Tail { map: a.map.clone(), base, region: a.region.clone() }],
        ));
    }
    // Align by peeling the wider tail down to the narrower region when the
    // regions are iterates of each other.
    for (outer, inner) in [(a, b), (b, a)] {
        if !set_subset::<G>(&inner.region, &outer.region) {
            continue;
        }
        let mut r = outer.region.clone();
        let mut d = 0u32;
        loop {
            if r == inner.region {
                let mut fin = G::empty();
                let mut cur = outer.clone();
                for _ in 0..d {
                    let (chunk, next) = cur.peel();
                    fin = G::union(&fin, &chunk);
                    cur = next;
                }
                let base = G::union(&cur.base, &inner.base);
                return Some((
                    fin,
                    vec![Tail { map: a.map.clone(), base, region: inner.region.clone() }],
                ));
            }
            if !set_subset::<G>(&inner.region, &r) {
                break;
            }
            r = outer.map.apply_set(&r);
            d += 1;
            if d > 256 {
                break;
            }
        }
    }
    None
}
