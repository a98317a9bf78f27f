//! Lower bounds for Weyl-group-invariant trigonometric polynomials via
//! Hermitian sums of squares, with symmetry-adapted block diagonalization.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod reptheory;
pub mod rootsys;
pub mod sdp;
pub mod trigpoly;
pub mod weyl;

pub use error::{Error, Result};
pub use lattice::{weight_set, WeightSet};
pub use rootsys::{Point, RootSystem, RootSystemId, Weight};
pub use trigpoly::{PolyFile, TermSpec, ToeplitzMat, TrigPoly};
pub use weyl::{GroupElement, WeylGroup};
