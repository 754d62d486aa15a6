//! Exact computations with nilpotent Lie algebras given by structure
//! constants, and with commutative post-Lie algebra (CPA) structures on them.

pub mod cli;
pub mod cpa;
pub mod eqn;
pub mod exact;
pub mod format;
pub mod freelie;
pub mod liealg;
pub mod polysolve;

pub use exact::{Matrix, Rational, Subspace};
pub use freelie::{build_free_nilpotent, witt_dimension, FreeNilpotentPresentation};
pub use liealg::{catalog, LieAlgebraTable};
