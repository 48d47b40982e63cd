//! Numerical laboratory for finite sections of symmetric sequence spaces.
//!
//! The crate evaluates norms of `l_p` and Orlicz-Lorentz spaces and their
//! convexifications, Köthe duals and generalized Köthe duals `E^F`, operator
//! norms `B(E, F)`, Schur-multiplier norms (with an exact primal/dual solver
//! for the `gamma_2` factorization norm), growth of the main triangle
//! projection, and injective/projective tensor norms.
//!
//! Every quantity that is not available in closed form is returned as a
//! [`NormBounds`] interval. Lower bounds always come with a witness that
//! reproduces them; upper bounds are marked as certified only when they follow
//! from an inequality rather than from a local search.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod ascent;
mod bounds;
mod error;
mod exponent;
pub mod kothe;
pub mod linalg;
mod math;
pub mod opnorm;
mod rng;
pub mod schur;
pub mod seqspace;
pub mod serde_ext;
pub mod tensor;
pub mod triangle;

pub use bounds::{Budget, Flag, Method, NormBounds};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use linalg::Mat;
pub use seqspace::{OrliczFn, OrliczLorentz, SpaceSpec, WeightFamily, WeightSeq};
