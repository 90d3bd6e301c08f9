//! Exact verifier for linear Koszul duality over an affine base.
//!
//! Everything here works with three integer gradings at once: a cohomological
//! degree `h`, an internal weight `w`, and an auxiliary x-degree `d` that keeps
//! every graded piece finite-dimensional. The crate builds the two dual dg
//! algebras attached to a tuple of weighted-homogeneous sections, the duality
//! functors between their module categories, the `t`-localization with its
//! periodic reduced grading, and checks every claimed quasi-isomorphism as an
//! exact dimension identity on a window of tridegrees — no floats anywhere.
//!
//! The primary interface is the `examples/` directory (one runnable example per
//! capability) plus the thin `verify` binary, which runs the full check suite
//! on a scenario file and emits a deterministic report.

pub mod algebra;
pub mod complex;
pub mod constructions;
pub mod dgmodule;
pub mod error;
pub mod field;
pub mod grading;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod tperiodic;

pub use error::{Error, Result};
pub use field::{FieldKind, Scalar};
pub use grading::{Tri, Window};
