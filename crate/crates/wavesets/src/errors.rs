use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Interval or box constructor given `hi <= lo`.
    EmptyInterval,
    /// A tail constructor was handed data violating the tail invariants
    /// (base outside the region, base meeting its own contraction image, ...).
    TailInvariant(&'static str),
    /// A set operation between tails did not separate within the expansion
    /// budget; the operands are entangled beyond what finite peeling resolves.
    IncomparableTails,
    /// Dyadic reduction of a set with positive measure arbitrarily close to 0
    /// cannot be carried out exactly; the caller sees the divergent part in
    /// profile reports instead.
    DivergentAtZero,
    /// The inputs to a witness computation are not congruent: some part of the
    /// source never lands in the target.
    NotCongruent,
    /// Witness pieces overlap in the target, so the input was not a tiling
    /// generator to begin with.
    WitnessOverlap,
    /// A containment hypothesis of the doubly-congruent constructor fails.
    /// `which` is 1 for the dilation-side containment, 2 for the
    /// translation-side containment, 3 for the disjointness hypothesis.
    ContainmentFailed { which: u8 },
    /// The constructor needs k1 < k2 so the induced map is a contraction.
    NotContracting,
    /// A congruence domain did not collapse to finitely many dyadic steps.
    UnrepresentableDomain,
    /// A sigma-map operation was applied to sets that are not wavelet sets.
    NotGenerator(&'static str),
    /// Catalog lookup failed.
    UnknownEntry(String),
    /// A property a catalog entry is documented to have did not check out.
    ExpectationFailed(&'static str),
    /// A catalog entry needs a parameter that was out of range.
    BadParameter(&'static str),
    /// An exact computation exceeded its piece or iteration budget.
    Budget(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInterval => write!(f, "empty interval: hi <= lo"),
            Error::TailInvariant(why) => write!(f, "tail invariant violated: {why}"),
            Error::IncomparableTails => write!(f, "incomparable tails: expansion budget exhausted"),
            Error::DivergentAtZero => {
                write!(f, "set has positive measure accumulating at 0; dyadic reduction diverges")
            }
            Error::NotCongruent => write!(f, "sets are not congruent: witness has a gap"),
            Error::WitnessOverlap => write!(f, "witness pieces overlap in the target"),
            Error::ContainmentFailed { which } => {
                write!(f, "constructor hypothesis {which} failed")
            }
            Error::NotContracting => write!(f, "constructor needs k1 < k2"),
            Error::UnrepresentableDomain => {
                write!(f, "congruence domain does not reduce to finitely many dyadic steps")
            }
            Error::NotGenerator(side) => write!(f, "input is not a wavelet set: {side}"),
            Error::UnknownEntry(name) => write!(f, "no catalog entry named {name:?}"),
            Error::ExpectationFailed(what) => {
                write!(f, "catalog expectation failed: {what}")
            }
            Error::BadParameter(why) => write!(f, "bad parameter: {why}"),
            Error::Budget(what) => write!(f, "budget exhausted: {what}"),
        }
    }
}

impl core::error::Error for Error {}
