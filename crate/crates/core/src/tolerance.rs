use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every floating-point decision.
///
/// In the exact backend only literally-zero residuals pass, whatever the
/// thresholds say (see [`crate::scalar::within`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative residual threshold for identity checks, scaled by
    /// `max(1, ‖input‖)`.
    pub residual: f64,
    /// Two roots collide when `|λᵢ − λⱼ| ≤ cluster · (1 + max|λ|)`.
    pub cluster: f64,
    /// A vector `v` lies in block `B` when `‖v − proj_B v‖ ≤ membership · ‖v‖`.
    pub membership: f64,
    /// Gram-block vanishing threshold, multiplied by the pairing scale.
    pub gram: f64,
    /// Slack added to the disc radius when deciding whether a root is inside.
    pub disc_margin: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance =
        Tolerance { residual: 1e-9, cluster: 1e-7, membership: 1e-8, gram: 1e-9, disc_margin: 1e-9 };

    pub fn with_residual(residual: f64) -> Self {
        Tolerance { residual, ..Self::DEFAULT }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}
