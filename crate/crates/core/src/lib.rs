//! Finite metric-measure fields and the distances between them.
//!
//! A *field* here is a 1-Lipschitz map from a finite metric space into a
//! target metric space; with a probability vector on the domain it becomes a
//! metric-measure field ([`MMField`]). The crate provides:
//!
//! * finite (pseudo-)metrics, targets and fields with validation ([`metric`],
//!   [`target`], [`field`]);
//! * Whitney-McShane extensions, Kuratowski rows and one-point extensions
//!   ([`lipschitz`]);
//! * exact discrete optimal transport ([`transport`]);
//! * the field Gromov-Wasserstein distances, the gluing construction and the
//!   embedding bound ([`gw`]);
//! * augmented distance matrix sampling and estimators ([`adm`]);
//! * community hypergraphs of point clouds ([`hypergraph`]);
//! * the JSON field format ([`io`]).
//!
//! The book under `book/` walks through the concepts; its code snippets are
//! compiled and run as doc-tests of this crate.

pub mod adm;
pub mod error;
pub mod field;
pub mod gw;
pub mod hypergraph;
pub mod io;
pub mod lipschitz;
pub mod matrix;
pub mod metric;
pub mod report;
pub mod rng;
pub mod target;
pub mod transport;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use field::{uniform_measure, validate_field, MMField};
pub use matrix::Matrix;
pub use metric::{validate_metric, FiniteMetric, DEFAULT_TOL};
pub use report::{ValidationReport, Violation};
pub use target::{TargetPoint, TargetSpace};
pub use transport::Coupling;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/lipschitz.md")]
    mod lipschitz {}
    #[doc = include_str!("../../../book/src/transport.md")]
    mod transport {}
    #[doc = include_str!("../../../book/src/gw.md")]
    mod gw {}
    #[doc = include_str!("../../../book/src/adm.md")]
    mod adm {}
    #[doc = include_str!("../../../book/src/hypergraph.md")]
    mod hypergraph {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
