//! Congruence domains: for a pair of wavelet sets, the set of points whose
//! image under the interpolation map differs by a whole number of windows.
//! These sets are unions of dyadic orbits, so they are stored as exponent
//! floors over the dilation fundamental domain.

use alloc::vec::Vec;

use crate::congruence::{dyadic_domain, dyadic_pieces, joint_witness};
use crate::intervals::ExtendedSet;
use crate::scalars::{two_adic_floor, ExpFloor, PiRational};
use crate::{Error, Result};

/// A dyadically up-closed subset of the line: a point 2^j b with b in the
/// dilation fundamental domain belongs iff j is at least the floor of the
/// class containing b. Classes are disjoint, cover the fundamental domain,
/// and are listed in ascending floor order with the +inf gap explicit.
#[derive(Clone, Debug)]
pub struct SaturatedDyadicSet {
    classes: Vec<(ExtendedSet, ExpFloor)>,
}

impl SaturatedDyadicSet {
    pub fn classes(&self) -> &[(ExtendedSet, ExpFloor)] {
        &self.classes
    }

    /// The whole line: floor -inf on the entire fundamental domain.
    pub fn full() -> Self {
        SaturatedDyadicSet { classes: alloc::vec![(dyadic_domain(), ExpFloor::NegInf)] }
    }

    pub fn floor_at(&self, base: &PiRational) -> ExpFloor {
        for (class, floor) in &self.classes {
            if class.contains_point(base) {
                return *floor;
            }
        }
        ExpFloor::PosInf
    }

    pub fn membership(&self, s: &PiRational) -> bool {
        let b = match s.dyadic_block() {
            Some(b) => b,
            None => return false,
        };
        let base = s.scale_pow2(-b);
        ExpFloor::Finite(b) >= self.floor_at(&base)
    }

    /// Exact equality of the represented subsets of the line: same floors on
    /// the same classes, decided by the set algebra.
    pub fn saturated_equal(&self, other: &Self) -> Result<bool> {
        for (class, floor) in &self.classes {
            for (oclass, ofloor) in &other.classes {
                if floor != ofloor && !class.inter(oclass)?.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Merge raw (piece of the fundamental domain, floor) contributions by
/// pointwise minimum, ascending, and make the uncovered gap explicit.
pub(crate) fn saturated_from_parts(
    parts: Vec<(ExtendedSet, ExpFloor)>,
) -> Result<SaturatedDyadicSet> {
    let mut floors: Vec<ExpFloor> = parts.iter().map(|(_, f)| *f).collect();
    floors.sort();
    floors.dedup();
    let mut classes: Vec<(ExtendedSet, ExpFloor)> = Vec::new();
    let mut assigned = ExtendedSet::empty();
    for floor in floors {
        let mut class = ExtendedSet::empty();
        for (piece, f) in &parts {
            if *f == floor {
                class = class.union(piece)?;
            }
        }
        let class = class.diff(&assigned)?;
        if class.is_empty() {
            continue;
        }
        assigned = assigned.union(&class)?;
        classes.push((class, floor));
    }
    let gap = dyadic_domain().diff(&assigned)?;
    if !assigned.diff(&dyadic_domain())?.is_empty() {
        return Err(Error::UnrepresentableDomain);
    }
    if !gap.is_empty() {
        classes.push((gap, ExpFloor::PosInf));
    }
    Ok(SaturatedDyadicSet { classes })
}

/// Exact congruence domain of the map from e to f. Each nonzero joint cell
/// carries shift 2n*pi and contributes the dilates 2^j cell for j at or above
/// the exponent floor of n; the common part contributes every dilate.
pub fn congruence_domain(e: &ExtendedSet, f: &ExtendedSet) -> Result<SaturatedDyadicSet> {
    let jw = joint_witness(e, f)?;
    let mut parts: Vec<(ExtendedSet, ExpFloor)> = Vec::new();
    for cell in &jw.cells {
        let floor = if cell.n == 0 {
            ExpFloor::NegInf
        } else {
            ExpFloor::Finite(two_adic_floor(cell.n))
        };
        let dp = dyadic_pieces(&cell.part)?;
        if !dp.divergent.is_empty() {
            return Err(Error::UnrepresentableDomain);
        }
        for (piece, id) in dp.pieces {
            parts.push((piece.scale(-id.j), floor.plus(id.j)));
        }
    }
    saturated_from_parts(parts)
}

pub fn membership(d: &SaturatedDyadicSet, s: &PiRational) -> bool {
    d.membership(s)
}

/// Domain-level pair test: whenever material of one nonzero cell, carried
/// into f, meets a dilate of another nonzero cell, the exponent floors must
/// match after the dilation: floor(n) + l = floor(m). Holds iff the two
/// congruence domains coincide.
pub fn domain_cell_criterion(e: &ExtendedSet, f: &ExtendedSet) -> Result<bool> {
    let jw = joint_witness(e, f)?;
    let nonzero: Vec<_> = jw.cells.iter().filter(|c| c.n != 0).collect();
    for c1 in &nonzero {
        let shifted = c1.part.translate(&PiRational::two_pi(c1.n));
        for c2 in &nonzero {
            let x = shifted.inter(&c2.part.scale(c2.k))?;
            if x.is_empty() {
                continue;
            }
            if two_adic_floor(c1.n) + c2.k != two_adic_floor(c2.n) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
