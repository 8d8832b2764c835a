//! Temperley-Lieb-like and BMW-like relation certificates, by gauge-invariant
//! scalar conditions and by direct operator arithmetic.

mod bmw;
mod report;
mod tl;

pub use bmw::{
    bmw_mixed_relations, bmw_scalars, build_bmw, check_skein, hexagon_variant_report, variant_spread, BmwCertificate,
    BmwRootResult, BmwScalars, SkeinOutcome,
};
pub use report::RelationReport;
pub use tl::{
    attach_matrix_residual, build_tl_chain, build_tl_chain_on, check_homogeneity, fit_projector_constant,
    onedim_tl_constant, tl_condition, verify_projector_identity, verify_projector_identity_with, verify_tl_relations,
    Direction, TlCertificate, TlChain,
};
