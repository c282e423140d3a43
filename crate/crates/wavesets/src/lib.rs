//! Exact computations with dyadic wavelet sets on the line and the plane.
//!
//! A measurable `E` is a dyadic wavelet set when its `2*pi*n` translates tile
//! the line and its `2^k` dilates tile the line (resp. the analogous tilings
//! of the plane by the `2*pi` lattice and by powers of 2). Everything here is
//! exact: points are rational multiples of pi, sets are finite unions of
//! half-open intervals or boxes, optionally extended by self-similar tails
//! (orbits of an affine contraction), so that limits of the natural
//! constructions stay representable and every decision procedure returns a
//! certificate rather than a float tolerance.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod congruence;
pub mod construct;
pub mod domains;
mod errors;
pub mod interpolation;
pub mod intervals;
pub mod plane;
pub mod render;
pub mod scalars;
pub mod sets;

pub use errors::Error;

pub type Result<T> = core::result::Result<T, Error>;
