//! Multiplicity-free semi-simple tensor systems, fusion-path Hilbert spaces and
//! certificates for Temperley-Lieb and Birman-Murakami-Wenzl relations.
//!
//! Every numeric type is generic over the real scalar `T` (see [`Real`]); the
//! complex scalar used throughout is [`Scalar<T>`]. Concrete aliases for `f64`
//! and `f32` are re-exported at the crate root.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod io;
pub mod path_space;
pub mod relations;
pub mod scalar;
pub mod tensor_system;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub use catalog::{CatalogEntry, CatalogKey};
pub use path_space::{ChainSpec, PathBasis, SparseOperator};
pub use relations::{BmwCertificate, Direction, RelationReport, TlCertificate};
pub use tensor_system::{
    BraidedTensorSystem, FSymbolTable, FusionRules, GaugeTransform, Label, LabelSet,
    OneDimProfile, TensorSystem, ValidationReport,
};

pub type TensorSystemF64 = TensorSystem<f64>;
pub type BraidedTensorSystemF64 = BraidedTensorSystem<f64>;
pub type SparseOperatorF64 = SparseOperator<f64>;
pub type GaugeTransformF64 = GaugeTransform<f64>;
pub type CatalogEntryF64 = CatalogEntry<f64>;

pub type TensorSystemF32 = TensorSystem<f32>;
pub type BraidedTensorSystemF32 = BraidedTensorSystem<f32>;
pub type SparseOperatorF32 = SparseOperator<f32>;
pub type GaugeTransformF32 = GaugeTransform<f32>;
pub type CatalogEntryF32 = CatalogEntry<f32>;
