//! Sets in the plane: axis-aligned half-open boxes with corners on the
//! rational pi lattice, canonical unions of them, the plane instantiation of
//! the tail engine, and the planar tiling checks under componentwise
//! 2pi-translations and scalar dyadic dilations.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::ToPrimitive;

use crate::congruence::{CoverReport, Overlay, WaveletReport};
use crate::construct::{build_core, validate_core, ContainmentReport, Mode};
use crate::intervals::{Interval, IntervalSet, Line};
use crate::scalars::{dyadic_bracket, PiRational, Rat};
use crate::sets::{Contraction, Ext, Geometry, Tail};
use crate::{Error, Result};

/// Point (x, y), both coordinates rational multiples of pi.
pub type PlanePoint = (PiRational, PiRational);

/// Half-open product [x.lo, x.hi) x [y.lo, y.hi).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Box2 {
    x: Interval,
    y: Interval,
}

impl Box2 {
    pub fn new(x: Interval, y: Interval) -> Self {
        Box2 { x, y }
    }

    pub fn x(&self) -> &Interval {
        &self.x
    }

    pub fn y(&self) -> &Interval {
        &self.y
    }

    /// Area in units of pi^2.
    pub fn area(&self) -> Rat {
        self.x.length().into_coeff() * self.y.length().into_coeff()
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.x.contains(&p.0) && self.y.contains(&p.1)
    }

    pub fn affine(&self, k: i64, t: &PlanePoint) -> Box2 {
        Box2 { x: self.x.affine(k, &t.0), y: self.y.affine(k, &t.1) }
    }

    pub fn reflect(&self) -> Box2 {
        Box2 { x: self.x.reflect(), y: self.y.reflect() }
    }
}

impl fmt::Display for Box2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.x, self.y)
    }
}

impl fmt::Debug for Box2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical finite union of boxes, stored as disjoint x-slabs each carrying
/// its y cross-section: slabs sorted by x, cross-sections nonempty, adjacent
/// slabs with equal cross-sections merged. Cross-sections change only at
/// essential x-cuts, so two values are `==` exactly when the point sets are.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BoxSet {
    slabs: Vec<(Interval, IntervalSet)>,
}

impl BoxSet {
    pub fn empty() -> Self {
        BoxSet { slabs: Vec::new() }
    }

    pub fn from_box(b: Box2) -> Self {
        BoxSet { slabs: vec![(b.x, IntervalSet::single(b.y))] }
    }

    pub fn from_boxes(bs: Vec<Box2>) -> Self {
        Self::canonical(bs.into_iter().map(|b| (b.x, IntervalSet::single(b.y))).collect())
    }

    fn canonical(pieces: Vec<(Interval, IntervalSet)>) -> Self {
        let pieces: Vec<_> = pieces.into_iter().filter(|(_, ys)| !ys.is_empty()).collect();
        let mut cuts: Vec<PiRational> = Vec::with_capacity(2 * pieces.len());
        for (x, _) in &pieces {
            cuts.push(x.lo().clone());
            cuts.push(x.hi().clone());
        }
        cuts.sort();
        cuts.dedup();
        let mut slabs: Vec<(Interval, IntervalSet)> = Vec::new();
        for w in cuts.windows(2) {
            let mut ys = IntervalSet::empty();
            for (x, y) in &pieces {
                if x.lo() <= &w[0] && &w[1] <= x.hi() {
                    ys = ys.union(y);
                }
            }
            if ys.is_empty() {
                continue;
            }
            match slabs.last_mut() {
                Some((px, py)) if *py == ys && px.hi() == &w[0] => {
                    *px = Interval::new(px.lo().clone(), w[1].clone()).unwrap();
                }
                _ => slabs.push((Interval::new(w[0].clone(), w[1].clone()).unwrap(), ys)),
            }
        }
        BoxSet { slabs }
    }

    pub fn slabs(&self) -> &[(Interval, IntervalSet)] {
        &self.slabs
    }

    /// The canonical box list, x-major then y-ascending.
    pub fn boxes(&self) -> Vec<Box2> {
        let mut out = Vec::new();
        for (x, ys) in &self.slabs {
            for y in ys.intervals() {
                out.push(Box2 { x: x.clone(), y: y.clone() });
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.slabs.is_empty()
    }

    /// Bounding box.
    pub fn hull_box(&self) -> Option<Box2> {
        let first = self.slabs.first()?;
        let last = self.slabs.last()?;
        let x = Interval::new(first.0.lo().clone(), last.0.hi().clone()).unwrap();
        let mut lo: Option<PiRational> = None;
        let mut hi: Option<PiRational> = None;
        for (_, ys) in &self.slabs {
            let h = ys.hull().expect("cross-sections are nonempty");
            if lo.as_ref().is_none_or(|v| h.lo() < v) {
                lo = Some(h.lo().clone());
            }
            if hi.as_ref().is_none_or(|v| h.hi() > v) {
                hi = Some(h.hi().clone());
            }
        }
        Some(Box2 { x, y: Interval::new(lo?, hi?).unwrap() })
    }

    /// Area in units of pi^2.
    pub fn area(&self) -> Rat {
        let mut a = Rat::default();
        for (x, ys) in &self.slabs {
            a += x.length().into_coeff() * ys.measure().into_coeff();
        }
        a
    }

    pub fn contains(&self, p: &PlanePoint) -> bool {
        self.slabs.iter().any(|(x, ys)| x.contains(&p.0) && ys.contains(&p.1))
    }

    fn cross_section(&self, x: &PiRational) -> Option<&IntervalSet> {
        self.slabs.iter().find(|(ix, _)| ix.contains(x)).map(|(_, ys)| ys)
    }

    fn zip(&self, other: &Self, f: impl Fn(&IntervalSet, &IntervalSet) -> IntervalSet) -> Self {
        let mut cuts: Vec<PiRational> = Vec::new();
        for (x, _) in self.slabs.iter().chain(other.slabs.iter()) {
            cuts.push(x.lo().clone());
            cuts.push(x.hi().clone());
        }
        cuts.sort();
        cuts.dedup();
        let empty = IntervalSet::empty();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let ya = self.cross_section(&w[0]).unwrap_or(&empty);
            let yb = other.cross_section(&w[0]).unwrap_or(&empty);
            pieces.push((Interval::new(w[0].clone(), w[1].clone()).unwrap(), f(ya, yb)));
        }
        Self::canonical(pieces)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.union(b))
    }

    pub fn inter(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.inter(b))
    }

    pub fn diff(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.diff(b))
    }

    pub fn affine(&self, k: i64, t: &PlanePoint) -> Self {
        BoxSet {
            slabs: self
                .slabs
                .iter()
                .map(|(x, ys)| (x.affine(k, &t.0), ys.affine(k, &t.1)))
                .collect(),
        }
    }

    pub fn translate(&self, t: &PlanePoint) -> Self {
        self.affine(0, t)
    }

    pub fn scale(&self, k: i64) -> Self {
        self.affine(k, &(PiRational::zero(), PiRational::zero()))
    }

    /// Point reflection through the origin.
    pub fn reflect(&self) -> Self {
        let mut slabs: Vec<_> =
            self.slabs.iter().map(|(x, ys)| (x.reflect(), ys.reflect())).collect();
        slabs.reverse();
        BoxSet { slabs }
    }

    /// Mirror across the y-axis, x -> -x.
    pub fn reflect_x(&self) -> Self {
        let mut slabs: Vec<_> = self.slabs.iter().map(|(x, ys)| (x.reflect(), ys.clone())).collect();
        slabs.reverse();
        BoxSet { slabs }
    }

    /// Mirror across the x-axis, y -> -y.
    pub fn reflect_y(&self) -> Self {
        BoxSet { slabs: self.slabs.iter().map(|(x, ys)| (x.clone(), ys.reflect())).collect() }
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slabs.is_empty() {
            return write!(f, "{{}}");
        }
        for (n, b) in self.boxes().iter().enumerate() {
            if n > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The plane as a tail-engine geometry: scalar dyadic dilations, lattice
/// translations componentwise.
#[derive(Clone, PartialEq, Debug)]
pub struct Plane;

impl Geometry for Plane {
    const DIM: u32 = 2;
    type Point = PlanePoint;
    type Set = BoxSet;

    fn zero_point() -> PlanePoint {
        (PiRational::zero(), PiRational::zero())
    }

    fn add_point(a: &PlanePoint, b: &PlanePoint) -> PlanePoint {
        (&a.0 + &b.0, &a.1 + &b.1)
    }

    fn neg_point(p: &PlanePoint) -> PlanePoint {
        (-&p.0, -&p.1)
    }

    fn mul_point_rat(p: &PlanePoint, q: &Rat) -> PlanePoint {
        (p.0.mul_rat(q), p.1.mul_rat(q))
    }

    fn cmp_point(a: &PlanePoint, b: &PlanePoint) -> Ordering {
        a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
    }

    fn point_gap(a: &PlanePoint, b: &PlanePoint) -> Rat {
        let dx = (&a.0 - &b.0).abs().into_coeff();
        let dy = (&a.1 - &b.1).abs().into_coeff();
        if dx >= dy {
            dx
        } else {
            dy
        }
    }

    fn empty() -> BoxSet {
        BoxSet::empty()
    }

    fn is_empty(s: &BoxSet) -> bool {
        s.is_empty()
    }

    fn union(a: &BoxSet, b: &BoxSet) -> BoxSet {
        a.union(b)
    }

    fn inter(a: &BoxSet, b: &BoxSet) -> BoxSet {
        a.inter(b)
    }

    fn diff(a: &BoxSet, b: &BoxSet) -> BoxSet {
        a.diff(b)
    }

    fn measure(s: &BoxSet) -> Rat {
        s.area()
    }

    fn affine_set(s: &BoxSet, k: i64, t: &PlanePoint) -> BoxSet {
        s.affine(k, t)
    }

    fn reflect_set(s: &BoxSet) -> BoxSet {
        s.reflect()
    }

    fn contains_point(s: &BoxSet, p: &PlanePoint) -> bool {
        s.contains(p)
    }

    fn hull(s: &BoxSet) -> Option<BoxSet> {
        s.hull_box().map(BoxSet::from_box)
    }

    fn point_hull(s: &BoxSet, p: &PlanePoint) -> Option<BoxSet> {
        let h = s.hull_box()?;
        let stretch = |i: &Interval, c: &PiRational| {
            let lo = if i.lo() <= c { i.lo().clone() } else { c.clone() };
            let hi = if i.hi() >= c { i.hi().clone() } else { c.clone() };
            Interval::new(lo, hi).expect("stretching keeps intervals nonempty")
        };
        Some(BoxSet::from_box(Box2 { x: stretch(&h.x, &p.0), y: stretch(&h.y, &p.1) }))
    }

    fn split_at_point(s: &BoxSet, p: &PlanePoint) -> Vec<BoxSet> {
        let mut quads: [Vec<(Interval, IntervalSet)>; 4] =
            [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
        for (x, ys) in &s.slabs {
            let mut xparts: Vec<(usize, Interval)> = Vec::new();
            if x.hi() <= &p.0 {
                xparts.push((0, x.clone()));
            } else if x.lo() >= &p.0 {
                xparts.push((1, x.clone()));
            } else {
                xparts.push((0, Interval::new(x.lo().clone(), p.0.clone()).unwrap()));
                xparts.push((1, Interval::new(p.0.clone(), x.hi().clone()).unwrap()));
            }
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            for i in ys.intervals() {
                if i.hi() <= &p.1 {
                    lower.push(i.clone());
                } else if i.lo() >= &p.1 {
                    upper.push(i.clone());
                } else {
                    lower.push(Interval::new(i.lo().clone(), p.1.clone()).unwrap());
                    upper.push(Interval::new(p.1.clone(), i.hi().clone()).unwrap());
                }
            }
            let lower = IntervalSet::from_intervals(lower);
            let upper = IntervalSet::from_intervals(upper);
            for (xi, xv) in xparts {
                if !lower.is_empty() {
                    quads[2 * xi].push((xv.clone(), lower.clone()));
                }
                if !upper.is_empty() {
                    quads[2 * xi + 1].push((xv.clone(), upper.clone()));
                }
            }
        }
        quads
            .into_iter()
            .map(BoxSet::canonical)
            .filter(|q| !q.is_empty())
            .collect()
    }

    fn cmp_set(a: &BoxSet, b: &BoxSet) -> Ordering {
        a.slabs.cmp(&b.slabs)
    }

    fn diam(s: &BoxSet) -> Rat {
        match s.hull_box() {
            Some(h) => {
                let dx = h.x.length().into_coeff();
                let dy = h.y.length().into_coeff();
                if dx >= dy {
                    dx
                } else {
                    dy
                }
            }
            None => Rat::default(),
        }
    }
}

/// S(x) = 2^lambda (x + c) on the plane.
pub type PlanarContraction = Contraction<Plane>;
/// The orbit of a finite box set under a planar affine contraction.
pub type PlanarTail = Tail<Plane>;
/// Finite box set plus finitely many self-similar tails.
pub type BoxTailSet = Ext<Plane>;

/// The centered translation window [-pi, pi)^2.
pub fn window_domain_2d() -> BoxTailSet {
    Ext::from_finite(BoxSet::from_box(centered_cell(0, 0)))
}

/// The dilation fundamental domain [-2pi, 2pi)^2 minus the window.
pub fn dyadic_domain_2d() -> BoxTailSet {
    Ext::from_finite(ring_set())
}

fn square(r: i64) -> BoxSet {
    let iv = Interval::new(PiRational::from_int(-r), PiRational::from_int(r)).unwrap();
    BoxSet::from_box(Box2::new(iv.clone(), iv))
}

fn ring_set() -> BoxSet {
    square(2).diff(&square(1))
}

fn centered_cell(nx: i64, ny: i64) -> Box2 {
    let axis = |n: i64| {
        Interval::new(
            &PiRational::two_pi(n) - &PiRational::pi(),
            &PiRational::two_pi(n) + &PiRational::pi(),
        )
        .unwrap()
    };
    Box2::new(axis(nx), axis(ny))
}

fn cell_of_box(r: &Box2) -> Option<(i64, i64)> {
    let axis = |iv: &Interval| {
        let n = iv.lo().centered_window_index().to_i64()?;
        let end = &PiRational::two_pi(n) + &PiRational::pi();
        if iv.hi() <= &end {
            Some(n)
        } else {
            None
        }
    };
    Some((axis(&r.x)?, axis(&r.y)?))
}

/// Decompose into pieces each inside one translation cell
/// [-pi, pi)^2 + 2pi (nx, ny), keeping pieces in place. Sorted by (nx, ny).
pub fn window_pieces_2d(s: &BoxTailSet) -> Result<Vec<(BoxTailSet, (i64, i64))>> {
    let mut acc: Vec<((i64, i64), BoxTailSet)> = Vec::new();
    let mut push = |n: (i64, i64), piece: BoxTailSet| -> Result<()> {
        if piece.is_empty() {
            return Ok(());
        }
        match acc.iter_mut().find(|(m, _)| *m == n) {
            Some((_, e)) => *e = e.union(&piece)?,
            None => acc.push((n, piece)),
        }
        Ok(())
    };

    for b in s.finite().boxes() {
        let start = |iv: &Interval| {
            iv.lo()
                .centered_window_index()
                .to_i64()
                .ok_or(Error::BadParameter("window index out of range"))
        };
        let bset = BoxSet::from_box(b.clone());
        let mut nx = start(b.x())?;
        loop {
            let mut ny = start(b.y())?;
            loop {
                let cell = BoxSet::from_box(centered_cell(nx, ny));
                push((nx, ny), Ext::from_finite(bset.inter(&cell)))?;
                if b.y().hi() <= &(&PiRational::two_pi(ny) + &PiRational::pi()) {
                    break;
                }
                ny += 1;
            }
            if b.x().hi() <= &(&PiRational::two_pi(nx) + &PiRational::pi()) {
                break;
            }
            nx += 1;
        }
    }
    for t in s.tails() {
        let fits = |r: &BoxSet| r.hull_box().is_some_and(|b| cell_of_box(&b).is_some());
        let (chunks, localized) = t.localize(fits)?;
        for chunk in chunks {
            for (piece, n) in window_pieces_2d(&Ext::from_finite(chunk))? {
                push(n, piece)?;
            }
        }
        let hull = localized.region().hull_box().expect("regions are nonempty");
        let n = cell_of_box(&hull).expect("localized");
        push(n, Ext::from_tail(localized))?;
    }
    acc.sort_by_key(|(n, _)| *n);
    Ok(acc.into_iter().map(|(n, e)| (e, n)).collect())
}

/// Max-norm distance from the origin to the closure of the box, then the
/// farthest corner, both in units of pi.
fn norm_range(r: &Box2) -> (Rat, Rat) {
    let axis = |iv: &Interval| {
        let lo = iv.lo();
        let hi = iv.hi();
        let near = if !lo.is_positive() && !hi.is_negative() {
            Rat::default()
        } else {
            let a = lo.abs();
            let b = hi.abs();
            if a <= b { a.into_coeff() } else { b.into_coeff() }
        };
        let far = {
            let a = lo.abs();
            let b = hi.abs();
            if a >= b { a.into_coeff() } else { b.into_coeff() }
        };
        (near, far)
    };
    let (nx, fx) = axis(&r.x);
    let (ny, fy) = axis(&r.y);
    (if nx >= ny { nx } else { ny }, if fx >= fy { fx } else { fy })
}

fn ring_index_of_set(r: &BoxSet) -> Option<i64> {
    let near = r
        .boxes()
        .into_iter()
        .map(|b| norm_range(&b).0)
        .min()
        .filter(|n| *n != Rat::default())?;
    let j = dyadic_bracket(&near);
    if r.diff(&ring_set().scale(j)).is_empty() {
        Some(j)
    } else {
        None
    }
}

/// Decomposition into dyadic ring copies 2^j ([-2pi,2pi)^2 \ [-pi,pi)^2)
/// plus the divergent remainder: any finite piece with the origin in its
/// closure blankets whole quadrant cones of the fundamental domain at every
/// small scale.
pub struct RingPieces {
    pub pieces: Vec<(BoxTailSet, i64)>,
    pub divergent: BoxTailSet,
}

pub fn ring_pieces(s: &BoxTailSet) -> Result<RingPieces> {
    let mut acc: Vec<(i64, BoxTailSet)> = Vec::new();
    let mut divergent = BoxSet::empty();
    let mut push = |j: i64, piece: BoxTailSet| -> Result<()> {
        if piece.is_empty() {
            return Ok(());
        }
        match acc.iter_mut().find(|(i, _)| *i == j) {
            Some((_, e)) => *e = e.union(&piece)?,
            None => acc.push((j, piece)),
        }
        Ok(())
    };

    for b in s.finite().boxes() {
        let x_touches = !b.x().lo().is_positive() && !b.x().hi().is_negative();
        let y_touches = !b.y().lo().is_positive() && !b.y().hi().is_negative();
        if x_touches && y_touches {
            let zero = PiRational::zero();
            let two = PiRational::from_int(2);
            let pos = Interval::new(zero.clone(), two.clone()).unwrap();
            let neg = Interval::new(-&two, zero).unwrap();
            for (xs, xiv) in [(b.x().hi().is_positive(), &pos), (b.x().lo().is_negative(), &neg)]
            {
                for (ys, yiv) in
                    [(b.y().hi().is_positive(), &pos), (b.y().lo().is_negative(), &neg)]
                {
                    if xs && ys {
                        let quad = BoxSet::from_box(Box2::new(xiv.clone(), yiv.clone()));
                        divergent = divergent.union(&ring_set().inter(&quad));
                    }
                }
            }
            continue;
        }
        let (near, far) = norm_range(&b);
        let jmin = dyadic_bracket(&near) - 1;
        let jmax = dyadic_bracket(&far) + 1;
        let bset = BoxSet::from_box(b.clone());
        for j in jmin..=jmax {
            push(j, Ext::from_finite(bset.inter(&ring_set().scale(j))))?;
        }
    }

    for t in s.tails() {
        if Plane::cmp_point(&t.fixed_point(), &Plane::zero_point()) == Ordering::Equal {
            return Err(Error::DivergentAtZero);
        }
        let (chunks, localized) = t.localize(|r| ring_index_of_set(r).is_some())?;
        for chunk in chunks {
            let sub = ring_pieces(&Ext::from_finite(chunk))?;
            for (piece, j) in sub.pieces {
                push(j, piece)?;
            }
            divergent = divergent.union(sub.divergent.finite());
        }
        let j = ring_index_of_set(localized.region()).expect("localized");
        push(j, Ext::from_tail(localized))?;
    }

    acc.sort_by_key(|(j, _)| *j);
    Ok(RingPieces {
        pieces: acc.into_iter().map(|(j, e)| (e, j)).collect(),
        divergent: Ext::from_finite(divergent),
    })
}

fn translation_overlay_2d(s: &BoxTailSet) -> Result<Overlay<Plane>> {
    let mut overlay = Overlay::new();
    for (piece, (nx, ny)) in window_pieces_2d(s)? {
        overlay.add(&piece.translate(&(PiRational::two_pi(-nx), PiRational::two_pi(-ny))))?;
    }
    Ok(overlay)
}

pub fn translation_profile_2d(s: &BoxTailSet) -> Result<CoverReport<Plane>> {
    CoverReport::build(&window_domain_2d(), &translation_overlay_2d(s)?, Ext::empty_g())
}

pub fn dilation_profile_2d(s: &BoxTailSet) -> Result<CoverReport<Plane>> {
    let mut overlay = Overlay::new();
    let rp = ring_pieces(s)?;
    for (piece, j) in &rp.pieces {
        overlay.add(&piece.scale(-j))?;
    }
    CoverReport::build(&dyadic_domain_2d(), &overlay, rp.divergent)
}

/// Both planar tiling checks; the set is a wavelet set iff both are clean.
pub fn is_wavelet_set_2d(s: &BoxTailSet) -> Result<WaveletReport<Plane>> {
    Ok(WaveletReport { translation: translation_profile_2d(s)?, dilation: dilation_profile_2d(s)? })
}

/// Planar containment data: 2^k1 f against e + 2 pi n1 and e + 2 pi n2
/// against 2^k2 f, with componentwise integer shifts.
#[derive(Clone, Debug)]
pub struct PlanarConfig {
    pub e: BoxTailSet,
    pub f: BoxTailSet,
    pub n1: (i64, i64),
    pub n2: (i64, i64),
    pub k1: i64,
    pub k2: i64,
}

fn lattice_shift(n: (i64, i64)) -> PlanePoint {
    (PiRational::two_pi(n.0), PiRational::two_pi(n.1))
}

pub fn validate_2d(cfg: &PlanarConfig) -> Result<ContainmentReport<Plane>> {
    validate_core(
        &cfg.e,
        &cfg.f,
        &lattice_shift(cfg.n1),
        &lattice_shift(cfg.n2),
        cfg.k1,
        cfg.k2,
    )
}

#[derive(Clone, Debug)]
pub struct PlanarConstruction {
    pub g: BoxTailSet,
    /// Orbit part, inside 2^k1 f.
    pub first: BoxTailSet,
    /// Remainder part, inside e + 2 pi n2.
    pub second: BoxTailSet,
    /// Seed of the orbit.
    pub base: BoxSet,
    pub map: PlanarContraction,
    pub mode: Mode,
    /// Area dropped by truncation, in units of pi^2; zero in exact modes.
    pub defect: Rat,
    /// Pieces of g carried onto e by lattice shifts.
    pub translation: Vec<(BoxTailSet, (i64, i64))>,
    /// Pieces of g carried onto f by dyadic dilations.
    pub dilation: Vec<(BoxTailSet, i64)>,
    pub config: PlanarConfig,
}

fn planar_pieces<I: Copy + Ord>(
    first: &BoxTailSet,
    second: &BoxTailSet,
    ia: I,
    ib: I,
) -> Vec<(BoxTailSet, I)> {
    let mut pieces = Vec::new();
    if !first.is_empty() {
        pieces.push((first.clone(), ia));
    }
    if !second.is_empty() {
        pieces.push((second.clone(), ib));
    }
    pieces.sort_by_key(|(_, i)| *i);
    pieces
}

pub fn build_2d(cfg: &PlanarConfig) -> Result<PlanarConstruction> {
    let parts = build_core::<Plane>(
        &cfg.e,
        &cfg.f,
        &lattice_shift(cfg.n1),
        &lattice_shift(cfg.n2),
        cfg.k1,
        cfg.k2,
    )?;
    let neg = |n: (i64, i64)| (-n.0, -n.1);
    let translation = planar_pieces(&parts.first, &parts.second, neg(cfg.n1), neg(cfg.n2));
    let dilation = planar_pieces(&parts.first, &parts.second, -cfg.k1, -cfg.k2);
    Ok(PlanarConstruction {
        g: parts.g,
        first: parts.first,
        second: parts.second,
        base: parts.base,
        map: parts.map,
        mode: if parts.telescoped { Mode::Telescoped } else { Mode::Tail },
        defect: Rat::default(),
        translation,
        dilation,
        config: cfg.clone(),
    })
}

impl PlanarConstruction {
    /// Finite form with the dropped area at most eps, default 2^-40, carried
    /// exactly; an already finite result comes back unchanged.
    pub fn truncated(&self, eps: Option<&Rat>) -> Result<PlanarConstruction> {
        if self.g.is_finite() {
            return Ok(self.clone());
        }
        let eps = match eps {
            Some(e) if *e <= Rat::default() => {
                return Err(Error::BadParameter("truncation tolerance must be positive"))
            }
            Some(e) => e.clone(),
            None => crate::scalars::pow2(-40),
        };
        let half = &eps / crate::scalars::pow2(1);
        let (fin1, d1) = self.first.truncate(&half);
        let (fin2, d2) = self.second.truncate(&half);
        let first = Ext::from_finite(fin1.clone());
        let second = Ext::from_finite(fin2.clone());
        let cfg = &self.config;
        let neg = |n: (i64, i64)| (-n.0, -n.1);
        Ok(PlanarConstruction {
            g: Ext::from_finite(fin1.union(&fin2)),
            first: first.clone(),
            second: second.clone(),
            base: self.base.clone(),
            map: self.map.clone(),
            mode: Mode::Truncated,
            defect: d1 + d2,
            translation: planar_pieces(&first, &second, neg(cfg.n1), neg(cfg.n2)),
            dilation: planar_pieces(&first, &second, -cfg.k1, -cfg.k2),
            config: cfg.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(n: i64, d: i64) -> PiRational {
        PiRational::new(n, d)
    }

    fn ivl(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(p(a.0, a.1), p(b.0, b.1)).unwrap()
    }

    fn bx(xa: (i64, i64), xb: (i64, i64), ya: (i64, i64), yb: (i64, i64)) -> Box2 {
        Box2::new(ivl(xa, xb), ivl(ya, yb))
    }

    fn sq(a: (i64, i64), b: (i64, i64)) -> Box2 {
        bx(a, b, a, b)
    }

    #[test]
    fn box_algebra_basics() {
        let unit = BoxSet::from_box(sq((0, 1), (1, 1)));
        let shifted = BoxSet::from_box(sq((1, 2), (3, 2)));
        let meet = unit.inter(&shifted);
        assert_eq!(meet, BoxSet::from_box(sq((1, 2), (1, 1))));
        assert_eq!(meet.area(), Rat::new(1.into(), 4.into()));
        assert_eq!(square(1).area(), Rat::from_integer(4.into()));
        let blown = unit.affine(2, &(PiRational::zero(), PiRational::zero()));
        assert_eq!(blown, BoxSet::from_box(sq((0, 1), (4, 1))));

        // Same point set assembled two different ways.
        let a = BoxSet::from_boxes(vec![
            bx((0, 1), (1, 1), (0, 1), (1, 2)),
            bx((0, 1), (1, 2), (1, 2), (1, 1)),
        ]);
        let b = BoxSet::from_boxes(vec![
            bx((0, 1), (1, 2), (0, 1), (1, 1)),
            bx((1, 2), (1, 1), (0, 1), (1, 2)),
        ]);
        assert_eq!(a, b);
        assert_eq!(a.area(), Rat::new(3.into(), 4.into()));
        assert_eq!(a.boxes().len(), 2);

        let l_shape = unit.diff(&BoxSet::from_box(sq((1, 2), (1, 1))));
        assert_eq!(l_shape.area(), Rat::new(3.into(), 4.into()));
        assert!(l_shape.contains(&(p(1, 4), p(1, 4))));
        assert!(!l_shape.contains(&(p(3, 4), p(3, 4))));
        assert!(unit.diff(&unit).is_empty());
    }

    #[test]
    fn axis_reflections() {
        let s = BoxSet::from_boxes(vec![bx((0, 1), (1, 1), (0, 1), (1, 2))]);
        assert_eq!(s.reflect_x(), BoxSet::from_box(bx((-1, 1), (0, 1), (0, 1), (1, 2))));
        assert_eq!(s.reflect_y(), BoxSet::from_box(bx((0, 1), (1, 1), (-1, 2), (0, 1))));
        assert_eq!(s.reflect(), s.reflect_x().reflect_y());
        assert_eq!(s.reflect().reflect(), s);
    }

    #[test]
    fn quadrant_split() {
        let s = BoxSet::from_box(sq((-1, 1), (1, 1)));
        let parts = Plane::split_at_point(&s, &(PiRational::zero(), PiRational::zero()));
        assert_eq!(parts.len(), 4);
        let mut back = BoxSet::empty();
        let mut total = Rat::default();
        for q in &parts {
            total += q.area();
            back = back.union(q);
        }
        assert_eq!(back, s);
        assert_eq!(total, Rat::from_integer(4.into()));
        let off = Plane::split_at_point(&s, &(p(-1, 1), p(-2, 1)));
        assert_eq!(off.len(), 1);
        assert_eq!(off[0], s);
    }

    #[test]
    fn fundamental_domain_reports() {
        assert_eq!(window_domain_2d().measure(), Rat::from_integer(4.into()));
        assert_eq!(dyadic_domain_2d().measure(), Rat::from_integer(12.into()));

        // The window tiles by translations but collapses under dilations.
        let w = window_domain_2d();
        let report = is_wavelet_set_2d(&w).unwrap();
        assert!(report.translation.ok);
        assert!(!report.dilation.ok);
        assert!(report.dilation.divergent.set_eq(&dyadic_domain_2d()).unwrap());

        // The ring tiles by dilations but piles up threefold under translations.
        let ring = dyadic_domain_2d();
        let report = is_wavelet_set_2d(&ring).unwrap();
        assert!(report.dilation.ok);
        assert!(!report.translation.ok);
        assert!(report.translation.gap.is_empty());
        assert!(report.translation.overlap.set_eq(&window_domain_2d()).unwrap());
    }

    fn corner_config(sx: i64, sy: i64) -> PlanarConfig {
        let e0 = BoxSet::from_box(sq((0, 1), (1, 1)));
        let f0 = e0.diff(&BoxSet::from_box(sq((0, 1), (1, 2))));
        let flip = |s: &BoxSet| {
            let s = if sx < 0 { s.reflect_x() } else { s.clone() };
            if sy < 0 {
                s.reflect_y()
            } else {
                s
            }
        };
        PlanarConfig {
            e: Ext::from_finite(flip(&e0)),
            f: Ext::from_finite(flip(&f0)),
            n1: (0, 0),
            n2: (sx, sy),
            k1: 0,
            k2: 2,
        }
    }

    #[test]
    fn corner_construction_and_assembly() {
        let report = validate_2d(&corner_config(1, 1)).unwrap();
        assert!(report.ok());
        let w1 = build_2d(&corner_config(1, 1)).unwrap();
        assert_eq!(w1.mode, Mode::Tail);
        assert_eq!(w1.map.fixed_point(), (p(2, 3), p(2, 3)));
        assert_eq!(w1.g.measure(), Rat::one());
        let inner = BoxSet::from_box(sq((1, 2), (3, 4)));
        assert_eq!(&w1.base, &corner_config(1, 1).f.finite().diff(&inner));
        assert_eq!(w1.translation.len(), 2);
        assert_eq!(w1.translation[0].1, (-1, -1));
        assert_eq!(w1.translation[1].1, (0, 0));

        let w2 = build_2d(&corner_config(-1, 1)).unwrap();
        let w3 = build_2d(&corner_config(-1, -1)).unwrap();
        let w4 = build_2d(&corner_config(1, -1)).unwrap();
        assert!(w3.g.set_eq(&w1.g.reflect()).unwrap());
        assert!(w4.g.set_eq(&w2.g.reflect()).unwrap());

        let whole = w1.g.union(&w2.g).unwrap().union(&w3.g).unwrap().union(&w4.g).unwrap();
        assert_eq!(whole.measure(), Rat::from_integer(4.into()));
        let report = is_wavelet_set_2d(&whole).unwrap();
        assert!(report.translation.ok);
        assert!(report.dilation.ok);

        let cut = w1.truncated(None).unwrap();
        assert_eq!(cut.mode, Mode::Truncated);
        assert!(cut.g.is_finite());
        assert_eq!(cut.g.measure() + &cut.defect, w1.g.measure());
    }
}
