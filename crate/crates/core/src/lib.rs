//! Desk-scale numerical laboratory for metric embeddings.
//!
//! The crate is organized around five subsystems:
//!
//! * [`spaces`] — vectors with an `l_p` norm, step functions standing in for
//!   `L_r` elements, finite metric spaces and Holder distortion reports;
//! * [`embeddings`] — explicit constructions: the Koch-type curve and its
//!   extension to the whole line, lifts between function/sequence spaces,
//!   Kuratowski sup-norm embeddings, grid discretization and dyadic rounding;
//! * [`typecotype`] — Rademacher type/cotype ratios, metric type and metric
//!   cotype ratios on hypercubes and discrete tori, and the closed-form
//!   type/cotype profile algebra with its verdict predicates;
//! * [`reductions`] — pairing-based reduction maps, scaled map families,
//!   regime classification and partial-sum traces;
//! * [`search`] — brute-force and multi-start local-search distortion
//!   minimization, used as an oracle for everything above.
//!
//! All operations are pure functions of immutable inputs and deterministic
//! for a fixed seed.

pub mod embeddings;
pub mod error;
pub mod reductions;
pub mod search;
pub mod spaces;
pub mod typecotype;
pub mod util;

pub use error::Error;
pub use spaces::{
    DistortionReport, EmbeddingTable, FiniteMetricSpace, PNormVector, StepFunction,
};

/// Shared absolute tolerance for comparisons of computed invariants.
pub const TOL: f64 = 1e-9;
