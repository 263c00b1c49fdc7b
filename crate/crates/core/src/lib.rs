//! Symbolic-numeric workbench for Higgs-bundle spectral data of the real
//! forms `SL(m,H)`, `SO(2m,H)` and `Sp(m,m)`.
//!
//! Every algorithm is generic over [`Scalar`], with an exact backend
//! (Gaussian rationals) and a floating backend (`Complex64`).

pub mod curve;
pub mod error;
pub mod fiber;
pub mod linalg;
pub mod matrix;
pub mod models;
pub mod numeric;
pub mod numerology;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod spectra;
pub mod tolerance;

#[cfg(any(test, feature = "oracles"))]
pub mod oracle;

pub use curve::{PlaneCurve, Smoothness};
pub use error::{Error, Result};
pub use fiber::{EquivariantLift, FiberModel, SplitVerdict};
pub use linalg::{HermitianForm, QuaternionicStructure, SymplecticSpace};
pub use matrix::Matrix;
pub use models::{Group, HiggsModel};
pub use num_complex::Complex64;
pub use numerology::NumerologyReport;
pub use poly::Poly;
pub use scalar::{Backend, Exact, Float, Scalar};
pub use tolerance::Tolerance;
