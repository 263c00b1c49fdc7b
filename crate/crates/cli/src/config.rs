use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spectral_lab::{Backend, Group};
use thiserror::Error;

/// Which family of checks a run covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    VerifyMatrix,
    VerifyCurve,
    VerifyFiber,
    Numerology,
    FullSuite,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::VerifyMatrix, Suite::VerifyCurve, Suite::VerifyFiber, Suite::Numerology, Suite::FullSuite];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::VerifyMatrix => "verify-matrix",
            Suite::VerifyCurve => "verify-curve",
            Suite::VerifyFiber => "verify-fiber",
            Suite::Numerology => "numerology",
            Suite::FullSuite => "full-suite",
        }
    }

    pub(crate) fn matrices(self) -> bool {
        matches!(self, Suite::VerifyMatrix | Suite::FullSuite)
    }

    pub(crate) fn curves(self) -> bool {
        matches!(self, Suite::VerifyCurve | Suite::FullSuite)
    }

    pub(crate) fn fibers(self) -> bool {
        matches!(self, Suite::VerifyFiber | Suite::FullSuite)
    }

    pub(crate) fn numerology(self) -> bool {
        matches!(self, Suite::Numerology | Suite::FullSuite)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (expected json or text)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub group: Group,
    pub m: usize,
    pub genus: u64,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    /// Degree in `z` of the random curve coefficients.
    pub coeff_degree: usize,
    pub disc_radius: f64,
    pub backend: Backend,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::FullSuite,
            group: Group::SlH,
            m: 2,
            genus: 2,
            seed: 0,
            trials: 200,
            tolerance: 1e-9,
            coeff_degree: 4,
            disc_radius: 1.5,
            backend: Backend::Floating,
            format: Format::Json,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConfigError {
    #[error("tolerance must be a positive finite number, got {0}")]
    Tolerance(f64),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("m must be at least 1")]
    ZeroRank,
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("disc radius must be a positive finite number, got {0}")]
    Radius(f64),
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        if self.trials < 1 {
            return Err(ConfigError::NoTrials);
        }
        if self.m < 1 {
            return Err(ConfigError::ZeroRank);
        }
        if self.genus < 1 {
            return Err(ConfigError::ZeroGenus);
        }
        if !(self.disc_radius.is_finite() && self.disc_radius > 0.0) {
            return Err(ConfigError::Radius(self.disc_radius));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        assert_eq!("TEXT".parse::<Format>().unwrap(), Format::Text);
        assert!("yaml".parse::<Format>().is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let ok = SuiteConfig::default();
        assert_eq!(ok.validate(), Ok(()));
        let cases = [
            (SuiteConfig { tolerance: -1.0, ..ok.clone() }, ConfigError::Tolerance(-1.0)),
            (SuiteConfig { trials: 0, ..ok.clone() }, ConfigError::NoTrials),
            (SuiteConfig { m: 0, ..ok.clone() }, ConfigError::ZeroRank),
            (SuiteConfig { genus: 0, ..ok.clone() }, ConfigError::ZeroGenus),
            (SuiteConfig { disc_radius: 0.0, ..ok.clone() }, ConfigError::Radius(0.0)),
        ];
        for (cfg, err) in cases {
            assert_eq!(cfg.validate(), Err(err));
        }
        assert!(SuiteConfig { tolerance: f64::NAN, ..ok }.validate().is_err());
    }
}
