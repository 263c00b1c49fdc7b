//! Per-trial checks. Each trial is a pure function of `(config, index)`.

use rand::Rng;
use spectral_lab::curve::PlaneCurve;
use spectral_lab::fiber::{assemble_fiber, equivariant_split, multiplication_operator, EquivariantLift, FiberModel};
use spectral_lab::linalg::check_form_symmetric;
use spectral_lab::models::{
    anti_commutation_residual, fixed_point_signs, involution_pairing, random_degenerate_model, random_model,
};
use spectral_lab::rng::{mix_seed, trial_rng};
use spectral_lab::scalar::within;
use spectral_lab::spectra::{pfaffian_char_poly, verify_annihilator, verify_det_square};
use spectral_lab::{curve, Complex64, Float, Group, Scalar, SplitVerdict, Tolerance};

use crate::config::SuiteConfig;

/// Relative threshold for the direct-image round trip.
pub const ROUNDTRIP_TOL: f64 = 1e-8;
/// Minimum fraction of random curves that must be smooth.
pub const MIN_SMOOTH_RATE: f64 = 0.99;
/// Base points tried per fiber trial before giving up on finding a regular one.
const BASE_POINT_ATTEMPTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    FormSymmetry,
    DetSquare,
    Annihilator,
    EigenPairing,
    FixedPointSigns,
    Smoothness,
    FixedPointCount,
    PairingSkew,
    PairingNondegenerate,
    MultiplicationRoundtrip,
    SplitPlus,
    SplitMinus,
}

impl CheckKind {
    pub const ALL: [CheckKind; 12] = [
        CheckKind::FormSymmetry,
        CheckKind::DetSquare,
        CheckKind::Annihilator,
        CheckKind::EigenPairing,
        CheckKind::FixedPointSigns,
        CheckKind::Smoothness,
        CheckKind::FixedPointCount,
        CheckKind::PairingSkew,
        CheckKind::PairingNondegenerate,
        CheckKind::MultiplicationRoundtrip,
        CheckKind::SplitPlus,
        CheckKind::SplitMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::FormSymmetry => "model-symmetry",
            CheckKind::DetSquare => "det-square",
            CheckKind::Annihilator => "annihilator",
            CheckKind::EigenPairing => "eigen-pairing",
            CheckKind::FixedPointSigns => "fixed-point-signs",
            CheckKind::Smoothness => "curve-smoothness",
            CheckKind::FixedPointCount => "fixed-point-count",
            CheckKind::PairingSkew => "pairing-skew",
            CheckKind::PairingNondegenerate => "pairing-nondegenerate",
            CheckKind::MultiplicationRoundtrip => "multiplication-roundtrip",
            CheckKind::SplitPlus => "split-plus",
            CheckKind::SplitMinus => "split-minus",
        }
    }

    /// The identity each check exercises.
    pub fn anchor(self) -> &'static str {
        match self {
            CheckKind::FormSymmetry => "ω(Φu, v) = ω(u, Φv)",
            CheckKind::DetSquare => "p(x)^2 = det(xI - Φ)",
            CheckKind::Annihilator => "p(Φ) = 0",
            CheckKind::EigenPairing => "Φ(w, -ξ) = (-λw, λξ)",
            CheckKind::FixedPointSigns => "ι|ker Φ: equal signs for SO(2m,H), balanced signs for Sp(m,m)",
            CheckKind::Smoothness => "generic a_i give a smooth spectral curve",
            CheckKind::FixedPointCount => "#{σ-fixed points over the disc} = #{a_m = 0 in the disc}",
            CheckKind::PairingSkew => "<s, s'> = -<s', s>",
            CheckKind::PairingNondegenerate => "Σ_y det(s_y, s'_y) / ∂p/∂x(y) is nondegenerate",
            CheckKind::MultiplicationRoundtrip => "Pf char poly of x on ⊕_y E_y = p(x, z0)",
            CheckKind::SplitPlus => "ε = +1: V = V+ ⊕ V- with both summands Lagrangian",
            CheckKind::SplitMinus => "ε = -1: V = V+ ⊥ V- with nondegenerate summands",
        }
    }

    /// Rate checks pass when at least this fraction of trials passes.
    pub fn min_rate(self) -> Option<f64> {
        (self == CheckKind::Smoothness).then_some(MIN_SMOOTH_RATE)
    }

    pub fn threshold(self, tol: &Tolerance) -> f64 {
        match self {
            CheckKind::MultiplicationRoundtrip => ROUNDTRIP_TOL,
            CheckKind::SplitPlus | CheckKind::SplitMinus => tol.gram,
            CheckKind::Smoothness | CheckKind::FixedPointSigns | CheckKind::FixedPointCount => 0.0,
            _ => tol.residual,
        }
    }
}

/// One check on one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub kind: CheckKind,
    pub passed: bool,
    pub residual: f64,
    pub note: Option<String>,
}

impl Outcome {
    fn measured(kind: CheckKind, residual: f64, passed: bool) -> Self {
        let note = (!passed).then(|| format!("residual {residual:.3e}"));
        Outcome { kind, passed, residual, note }
    }

    fn verdict(kind: CheckKind, passed: bool, note: impl FnOnce() -> String) -> Self {
        Outcome { kind, passed, residual: 0.0, note: (!passed).then(note) }
    }

    fn error(kind: CheckKind, err: impl std::fmt::Display) -> Self {
        Outcome { kind, passed: false, residual: 0.0, note: Some(err.to_string()) }
    }
}

pub(crate) fn tolerance(cfg: &SuiteConfig) -> Tolerance {
    Tolerance { residual: cfg.tolerance, gram: cfg.tolerance, ..Tolerance::DEFAULT }
}

/// Seed of stream `stream` within trial `index`.
fn stream_seed(cfg: &SuiteConfig, index: u64, stream: u64) -> u64 {
    mix_seed(mix_seed(cfg.seed, index), stream)
}

pub fn matrix_trial<T: Scalar>(cfg: &SuiteConfig, index: u64) -> Vec<Outcome> {
    let tol = tolerance(cfg);
    let model = random_model::<T>(cfg.group, cfg.m, stream_seed(cfg, index, 0));
    let mut out = Vec::new();

    out.push(match (model.validate(&tol), check_form_symmetric(&model.phi, &model.space)) {
        (Ok(()), Ok(r)) => Outcome::measured(CheckKind::FormSymmetry, r, true),
        (Err(e), _) | (_, Err(e)) => Outcome::error(CheckKind::FormSymmetry, e),
    });

    match pfaffian_char_poly(&model.phi, &model.space, &tol) {
        Ok(p) => {
            out.push(match verify_det_square(&model.phi, &p, &model.space) {
                Ok(r) => Outcome::measured(CheckKind::DetSquare, r, within::<T>(r, tol.residual)),
                Err(e) => Outcome::error(CheckKind::DetSquare, e),
            });
            out.push(match verify_annihilator(&model.phi, &p) {
                Ok(r) => Outcome::measured(CheckKind::Annihilator, r, within::<T>(r, tol.residual)),
                Err(e) => Outcome::error(CheckKind::Annihilator, e),
            });
        }
        Err(e) => {
            out.push(Outcome::error(CheckKind::DetSquare, &e));
            out.push(Outcome::error(CheckKind::Annihilator, &e));
        }
    }

    if cfg.group.has_involution() {
        // The pairing is located numerically in either backend.
        out.push(match involution_pairing(&model, &tol) {
            Ok(pairs) => {
                let r = pairs.iter().map(|p| p.intertwiner_residual).fold(anti_commutation_residual(&model), f64::max);
                Outcome::measured(CheckKind::EigenPairing, r, r <= tol.residual)
            }
            Err(e) => Outcome::error(CheckKind::EigenPairing, e),
        });

        let degenerate = random_degenerate_model::<T>(cfg.group, cfg.m, stream_seed(cfg, index, 1));
        out.push(match fixed_point_signs(&degenerate, &tol) {
            Ok(signs) => {
                let passed = signs_as_expected(cfg.group, &signs);
                Outcome::verdict(CheckKind::FixedPointSigns, passed, || format!("signs {signs:?}"))
            }
            Err(e) => Outcome::error(CheckKind::FixedPointSigns, e),
        });
    }
    out
}

/// Equal signs on `SO(2m,H)`, as many `+1` as `−1` on `Sp(m,m)`.
pub fn signs_as_expected(group: Group, signs: &[i8]) -> bool {
    if signs.is_empty() {
        return false;
    }
    match group {
        Group::SoStar => signs.iter().all(|&s| s == signs[0]),
        Group::SpMm => signs.iter().map(|&s| s as i64).sum::<i64>() == 0,
        Group::SlH => false,
    }
}

fn trial_curve<T: Scalar>(cfg: &SuiteConfig, index: u64, stream: u64) -> PlaneCurve<T> {
    curve::random_curve::<T>(cfg.group, cfg.m, cfg.coeff_degree, cfg.disc_radius, stream_seed(cfg, index, stream))
}

pub fn curve_trial<T: Scalar>(cfg: &SuiteConfig, index: u64) -> Vec<Outcome> {
    let tol = tolerance(cfg);
    let curve = trial_curve::<T>(cfg, index, 2);
    let mut out = Vec::new();

    out.push(match curve.smoothness_check(&tol) {
        Ok(s) => Outcome::verdict(CheckKind::Smoothness, s.is_smooth(), || format!("{s:?}")),
        Err(e) => Outcome::error(CheckKind::Smoothness, e),
    });

    if cfg.group.has_involution() {
        let expected = curve.last_coefficient().to_c64().count_roots_in_disc(curve.radius());
        out.push(match (curve.sigma_fixed_points(&tol), expected) {
            (Ok(found), Some(expected)) => {
                Outcome::verdict(CheckKind::FixedPointCount, found.len() == expected, || {
                    format!("found {} fixed points, a_m has {expected} zeros in the disc", found.len())
                })
            }
            (Ok(_), None) => Outcome::error(CheckKind::FixedPointCount, "a_m has a zero on the boundary circle"),
            (Err(e), _) => Outcome::error(CheckKind::FixedPointCount, e),
        });
    }
    out
}

pub fn fiber_trial<T: Scalar>(cfg: &SuiteConfig, index: u64) -> Vec<Outcome> {
    let tol = tolerance(cfg);
    let curve = trial_curve::<T>(cfg, index, 3);
    let mut rng = trial_rng(mix_seed(cfg.seed, index), 4);
    let mut kinds = vec![CheckKind::PairingSkew, CheckKind::PairingNondegenerate, CheckKind::MultiplicationRoundtrip];
    if cfg.group.has_involution() {
        kinds.extend([CheckKind::SplitPlus, CheckKind::SplitMinus]);
    }

    let mut fiber = None;
    let mut last_err = None;
    for _ in 0..BASE_POINT_ATTEMPTS {
        let z0 = random_point(&mut rng, cfg.disc_radius);
        match assemble_fiber(&curve, z0, &tol) {
            Ok(f) => {
                fiber = Some(f);
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let Some(fiber) = fiber else {
        let msg = format!("no regular base point found: {}", last_err.map(|e| e.to_string()).unwrap_or_default());
        return kinds.into_iter().map(|k| Outcome::error(k, &msg)).collect();
    };

    let mut out = vec![pairing_skew(&fiber, &mut rng, &tol)];

    let nondeg = fiber.nondegeneracy();
    out.push(Outcome::verdict(CheckKind::PairingNondegenerate, nondeg > tol.residual, || {
        format!("min/max weight ratio {nondeg:.3e}")
    }));

    out.push(match multiplication_operator(&fiber, &tol) {
        Ok(op) => {
            let r = op.roundtrip_residual(&fiber);
            Outcome::measured(CheckKind::MultiplicationRoundtrip, r, r <= ROUNDTRIP_TOL)
        }
        Err(e) => Outcome::error(CheckKind::MultiplicationRoundtrip, e),
    });

    if fiber.is_even() {
        for (kind, sign) in [(CheckKind::SplitPlus, 1), (CheckKind::SplitMinus, -1)] {
            out.push(split_check(kind, sign, &fiber, &mut rng, &tol));
        }
    }
    out
}

/// Uniform point in the disc `|z| < radius`.
fn random_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
}

fn pairing_skew<R: Rng + ?Sized>(fiber: &FiberModel<Float>, rng: &mut R, tol: &Tolerance) -> Outcome {
    let kind = CheckKind::PairingSkew;
    let s = fiber.section_from_fn(|_, _| [Float::random(rng), Float::random(rng)]);
    let t = fiber.section_from_fn(|_, _| [Float::random(rng), Float::random(rng)]);
    match (fiber.residue_pairing(&s, &t), fiber.residue_pairing(&t, &s)) {
        (Ok(st), Ok(ts)) => {
            let scale = fiber
                .volumes()
                .iter()
                .zip(fiber.weights())
                .map(|(c, w)| (c * w).norm())
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
            let r = (st + ts).norm() / scale;
            Outcome::measured(kind, r, r <= tol.residual)
        }
        (Err(e), _) | (_, Err(e)) => Outcome::error(kind, e),
    }
}

fn split_check<R: Rng + ?Sized>(
    kind: CheckKind,
    sign: i8,
    fiber: &FiberModel<Float>,
    rng: &mut R,
    tol: &Tolerance,
) -> Outcome {
    let split = EquivariantLift::random(sign, fiber, rng).and_then(|lift| equivariant_split(fiber, &lift, tol));
    match split {
        Ok(split) => {
            let expected = SplitVerdict::expected_for(sign);
            // Relative size of the blocks that must vanish.
            let vanishing = if sign > 0 { split.max_intra } else { split.max_cross };
            let r = if split.threshold > 0.0 { vanishing * tol.gram / split.threshold } else { vanishing };
            let mut outcome = Outcome::measured(kind, r, split.verdict == expected);
            if split.verdict != expected {
                outcome.note = Some(format!("verdict {:?}, expected {expected:?}", split.verdict));
            }
            outcome
        }
        Err(e) => Outcome::error(kind, e),
    }
}
