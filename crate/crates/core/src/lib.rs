//! Exact-arithmetic toolkit for discriminantal arrangements `B(n, k, A)`.
//!
//! Everything here is computed over `Q` or a fixed real quadratic extension
//! `Q(sqrt(d))`; there is no floating point and no tolerance anywhere. The
//! crate is `no_std` (alloc only); IO, file formats and the CLI live in the
//! companion `discrim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod completion;
pub mod discriminantal;
pub mod lattice;
pub mod linalg;
pub mod orchard;
pub mod planar;
mod poly;
pub mod scalar;
pub mod subset;

pub use arrangement::{Arrangement, Hyperplane, NonGeneric, ProjectiveFlat};
pub use discriminantal::{DiscriminantalArrangement, DiscriminantalHyperplane};
pub use lattice::{Flat, SimpleIntersectionReport, VeryGenericReport};
pub use linalg::{AffineSubspace, Matrix};
pub use scalar::{Field, Scalar};
pub use subset::Subset;

/// Default seed for every sampling operation surfaced by the CLI as `--seed`.
pub const DEFAULT_SEED: u64 = 20260810;
