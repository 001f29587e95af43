//! Numerical engine for the rigging apparatus on lightlike hypersurfaces of
//! generalized Robertson-Walker spacetimes.
//!
//! The crate builds chart-level curvature (jets give exact first and second
//! metric derivatives), constructs the full rigging frame (rigged field,
//! transverse field, screen, second fundamental form, rotation one-form,
//! shape operators, induced Riemannian metric) on lightlike graph
//! hypersurfaces, and verifies the structure equations, curvature-difference
//! formulas, lightcone characterizations and Jacobi-field statements by
//! evaluating both sides of each identity through independent code paths at
//! sampled points.
//!
//! Core math is generic over the scalar type via [`scalar::Real`]
//! (`f32`/`f64`); concrete `f64` aliases are exported at the crate root.

pub mod error;
pub mod jet;
pub mod linalg;
pub mod numerics;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};

/// Second-order jet over `f64`.
pub type Jet64 = jet::Jet2<f64>;
/// Nested jet carrying derivatives up to total order four.
pub type Jet64x2 = jet::Jet2<jet::Jet2<f64>>;
// Concrete f64 aliases for the main domain types (filled in as modules land).

