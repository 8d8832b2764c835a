//! Fusion-path bases and the sparse two-site operators acting on them.

mod basis;
mod operator;
mod ops;

pub use basis::{enumerate_basis, ChainSpec, PathBasis};
pub use operator::{operator_residual, SparseOperator};
pub use ops::{braid_operator, projector, projector_family_check, ChainOperators};
