//! Integer bookkeeping: spectral genera, degrees, the Riemann–Roch and
//! Lefschetz degree relations, the Milnor–Wood bound, dimension counts
//! and component counts. All arithmetic is in `BigInt`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::models::Group;

fn big(v: impl Into<BigInt>) -> BigInt {
    v.into()
}

/// Serialises as a JSON number when the value fits in `i64`, otherwise as
/// a decimal string.
pub fn serialize_big<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn serialize_big_opt<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_big(v, s),
        None => s.serialize_none(),
    }
}

/// `dim_C` of `SL(2m,C)`, `SO(4m,C)`, `Sp(4m,C)`.
pub fn complex_group_dim(group: Group, m: u64) -> BigInt {
    let m = big(m);
    match group {
        Group::SlH => big(4) * &m * &m - 1,
        Group::SoStar => big(2) * &m * (big(4) * &m - 1),
        Group::SpMm => big(2) * &m * (big(4) * &m + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralGenus {
    #[serde(serialize_with = "serialize_big")]
    pub g_s: BigInt,
    /// Genus of the quotient by `x ↦ −x`; `None` for `SL(m,H)`.
    #[serde(serialize_with = "serialize_big_opt")]
    pub g_sbar: Option<BigInt>,
}

/// `g_S = m²(g−1)+1` for `SL(m,H)`; `g_S = 4m²(g−1)+1` and
/// `g_S̄ = m(2m−1)(g−1)+1` for the other two.
pub fn spectral_genus(group: Group, m: u64, g: u64) -> SpectralGenus {
    let (m, g1) = (big(m), big(g) - 1);
    match group {
        Group::SlH => SpectralGenus { g_s: &m * &m * &g1 + 1, g_sbar: None },
        Group::SoStar | Group::SpMm => {
            SpectralGenus { g_s: big(4) * &m * &m * &g1 + 1, g_sbar: Some(&m * (big(2) * &m - 1) * &g1 + 1) }
        }
    }
}

/// `deg E = deg π*K^{m−1} = m(m−1)(2g−2)` for a spectral cover of degree `m`.
pub fn determinant_degree(m: u64, g: u64) -> BigInt {
    let m = big(m);
    &m * (&m - 1) * (big(2) * big(g) - 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrrDegree {
    #[serde(serialize_with = "serialize_big")]
    pub deg_l: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub deg_w: BigInt,
    /// `m(m−1)(g−1)`.
    #[serde(serialize_with = "serialize_big")]
    pub threshold: BigInt,
    /// `deg L ≤ threshold`.
    pub within_bound: bool,
}

/// `(1−g)m + deg W = (1−g_S) + deg L`, solved for `deg W`.
pub fn grr_degree(m: u64, g: u64, deg_l: i64) -> GrrDegree {
    let (mb, g1, l) = (big(m), big(g) - 1, big(deg_l));
    let g_s = spectral_genus(Group::SlH, m, g).g_s;
    // deg W = (1 − g_S) + deg L − (1 − g)m
    let deg_w = (big(1) - g_s) + &l + &g1 * &mb;
    let threshold = &mb * (&mb - 1) * &g1;
    GrrDegree { within_bound: l <= threshold, deg_l: l, deg_w, threshold }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzDegree {
    #[serde(rename = "M", serialize_with = "serialize_big")]
    pub fixed_minus: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub deg_l: BigInt,
    /// Trace side of the Lefschetz formula: `2(2M − 4m(g−1))`.
    #[serde(serialize_with = "serialize_big")]
    pub h_diff: BigInt,
    /// `4m(1 − g + deg L)`.
    #[serde(serialize_with = "serialize_big")]
    pub h_sum: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub deg_w: BigInt,
    /// `M` odd: the component is smooth and connected.
    pub m_odd: bool,
}

/// Degree of `W` from the holomorphic Lefschetz formula with `M` fixed
/// points of sign `+1` among the `4m(g−1)` zeros of `a_m`.
pub fn lefschetz_degree(m: u64, g: u64, big_m: i64, deg_l: i64) -> Result<LefschetzDegree> {
    let (mb, g1) = (big(m), big(g) - 1);
    let max = big(4) * &mb * &g1;
    let mm = big(big_m);
    if mm.is_negative() || mm > max {
        return Err(Error::MOutOfRange { m_plus: big_m, max: max.to_i64().unwrap_or(i64::MAX) });
    }
    let l = big(deg_l);
    let h_diff = big(2) * (big(2) * &mm - &max);
    let chi = big(1) - big(g) + &l;
    let h_sum = big(4) * &mb * &chi;
    let deg_w = (&h_sum + &h_diff) / 2 - big(2) * &mb * &chi;
    debug_assert_eq!(deg_w, big(2) * &mm - &max);
    Ok(LefschetzDegree { m_odd: (&mm % 2) == BigInt::one(), fixed_minus: mm, deg_l: l, h_diff, h_sum, deg_w })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorWood {
    #[serde(serialize_with = "serialize_big")]
    pub deg_w: BigInt,
    /// `4m(g−1)`.
    #[serde(serialize_with = "serialize_big")]
    pub bound: BigInt,
    pub holds: bool,
}

/// `|deg W| ≤ 4m(g−1)`.
pub fn milnor_wood(m: u64, g: u64, deg_w: i64) -> MilnorWood {
    let bound = big(4) * big(m) * (big(g) - 1);
    let w = big(deg_w);
    MilnorWood { holds: w.abs() <= bound, deg_w: w, bound }
}

/// `2^{4m(g−1)−1}`: one sign per zero of `a_m`, up to overall sign.
pub fn component_count(m: u64, g: u64) -> Result<BigInt> {
    let fixed = big(4) * big(m) * (big(g) - 1);
    if fixed < BigInt::one() {
        return Err(Error::DegenerateCase(format!("4m(g−1) = {fixed} leaves no fixed points")));
    }
    let exp: BigInt = fixed - 1;
    let exp = exp.to_u32().ok_or_else(|| Error::DegenerateCase("exponent overflow".into()))?;
    Ok(BigInt::one() << exp)
}

/// `dim H⁰(Σ, K^j) = (2j−1)(g−1)` for `j ≥ 2`.
fn sections_of_power(j: u64, g: u64) -> BigInt {
    (big(2) * big(j) - 1) * (big(g) - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumerologyReport {
    pub group: Group,
    pub m: u64,
    pub g: u64,
    #[serde(serialize_with = "serialize_big")]
    pub g_s: BigInt,
    #[serde(serialize_with = "serialize_big_opt")]
    pub g_sbar: Option<BigInt>,
    /// Degree of `Λ²E`: `n(n−1)(2g−2)` with `n` the degree of the cover.
    #[serde(serialize_with = "serialize_big")]
    pub deg_e: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub base_dim: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub fiber_dim: BigInt,
    /// Parabolic weights at the `4m(g−1)` fixed points (`Sp(m,m)` only).
    #[serde(serialize_with = "serialize_big")]
    pub parabolic_dim: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub total_dim: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub complex_group_dim: BigInt,
    /// `total_dim = (g−1) · dim G^c`.
    pub dimension_identity: bool,
    #[serde(serialize_with = "serialize_big_opt")]
    pub milnor_wood_bound: Option<BigInt>,
    #[serde(serialize_with = "serialize_big_opt")]
    pub component_count: Option<BigInt>,
    /// `g = 1`: formulas evaluated literally and collapse.
    pub degenerate: bool,
    pub grr: Vec<GrrDegree>,
    pub lefschetz: Vec<LefschetzDegree>,
}

/// Dimension counts for the integrable system of `group`, with a few
/// degree evaluations keyed by `deg L` (and `M`).
pub fn moduli_dimensions(group: Group, m: u64, g: u64) -> NumerologyReport {
    let genus = spectral_genus(group, m, g);
    let g1 = big(g) - 1;
    let (base_dim, fiber_dim, parabolic_dim, cover_degree) = match group {
        Group::SlH => {
            let base = (2..=m).map(|j| sections_of_power(j, g)).sum::<BigInt>();
            (base, big(3) * (&genus.g_s - 1), BigInt::zero(), m)
        }
        Group::SoStar | Group::SpMm => {
            let base = (1..=m).map(|i| sections_of_power(2 * i, g)).sum::<BigInt>();
            let g_sbar = genus.g_sbar.clone().expect("quotient genus");
            let parabolic = if group == Group::SpMm { big(4) * big(m) * &g1 } else { BigInt::zero() };
            (base, big(3) * (g_sbar - 1), parabolic, 2 * m)
        }
    };
    let total_dim = &base_dim + &fiber_dim + &parabolic_dim;
    let complex_dim = complex_group_dim(group, m);
    let dimension_identity = total_dim == &g1 * &complex_dim;
    let (grr, lefschetz, milnor_wood_bound, components) = match group {
        Group::SlH => {
            let t = grr_degree(m, g, 0).threshold.to_i64().unwrap_or(i64::MAX);
            let mut ls = vec![0, t, t.saturating_add(1)];
            ls.sort_unstable();
            ls.dedup();
            let grr = ls.into_iter().map(|l| grr_degree(m, g, l)).collect();
            (grr, Vec::new(), None, None)
        }
        Group::SoStar | Group::SpMm => {
            let max = 4 * m as i64 * (g as i64 - 1);
            let mut ms = vec![0, 1, max / 2, max];
            ms.retain(|&x| x <= max);
            ms.dedup();
            let lef = ms.into_iter().filter_map(|x| lefschetz_degree(m, g, x, 0).ok()).collect();
            (Vec::new(), lef, Some(milnor_wood(m, g, 0).bound), component_count(m, g).ok())
        }
    };
    NumerologyReport {
        group,
        m,
        g,
        g_s: genus.g_s,
        g_sbar: genus.g_sbar,
        deg_e: determinant_degree(cover_degree, g),
        base_dim,
        fiber_dim,
        parabolic_dim,
        total_dim,
        complex_group_dim: complex_dim,
        dimension_identity,
        milnor_wood_bound,
        component_count: components,
        degenerate: g == 1,
        grr,
        lefschetz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn genus_examples() {
        assert_eq!(spectral_genus(Group::SlH, 2, 2).g_s, big(5));
        let so = spectral_genus(Group::SoStar, 1, 2);
        assert_eq!((so.g_s, so.g_sbar), (big(5), Some(big(2))));
        for group in Group::ALL {
            for m in 1..5 {
                assert_eq!(spectral_genus(group, m, 1).g_s, big(1));
            }
        }
    }

    #[test]
    fn determinant_degree_examples() {
        assert_eq!(determinant_degree(2, 2), big(4));
        assert_eq!(determinant_degree(1, 7), big(0));
        assert_eq!(determinant_degree(3, 3), big(24));
        for m in 1..30 {
            for g in 1..30 {
                assert!((determinant_degree(m, g) % big(2)).is_zero());
            }
        }
    }

    #[test]
    fn grr_examples() {
        let r = grr_degree(2, 2, 2);
        assert_eq!((r.deg_w.clone(), r.threshold.clone(), r.within_bound), (big(0), big(2), true));
        let r = grr_degree(2, 2, 4);
        assert_eq!((r.deg_w.clone(), r.within_bound), (big(2), false));
        for g in 1..6 {
            assert_eq!(grr_degree(1, g, 0).deg_w, big(0));
        }
    }

    #[test]
    fn grr_threshold_equivalence_chain() {
        for m in 1..=8u64 {
            for g in 1..=8u64 {
                let deg_e = determinant_degree(m, g);
                for l in -40..=40i64 {
                    let r = grr_degree(m, g, l);
                    let by_w = r.deg_w <= BigInt::zero();
                    let by_e = big(2) * big(l) <= deg_e;
                    assert_eq!(r.within_bound, by_w, "m {m} g {g} L {l}");
                    assert_eq!(by_w, by_e, "m {m} g {g} L {l}");
                }
            }
        }
    }

    #[test]
    fn lefschetz_examples() {
        assert_eq!(lefschetz_degree(1, 2, 4, 3).unwrap().deg_w, big(4));
        assert_eq!(lefschetz_degree(1, 2, 0, -7).unwrap().deg_w, big(-4));
        assert_eq!(lefschetz_degree(2, 3, 8, 11).unwrap().deg_w, big(0));
        assert_eq!(lefschetz_degree(1, 2, 5, 0), Err(Error::MOutOfRange { m_plus: 5, max: 4 }));
        assert!(matches!(lefschetz_degree(1, 2, -1, 0), Err(Error::MOutOfRange { .. })));
        assert!(lefschetz_degree(1, 2, 3, 0).unwrap().m_odd);
    }

    #[test]
    fn milnor_wood_examples() {
        assert!(milnor_wood(1, 2, 4).holds);
        assert!(milnor_wood(1, 2, -4).holds);
        assert!(!milnor_wood(1, 2, 5).holds);
        let mw = milnor_wood(3, 1, 0);
        assert_eq!(mw.bound, big(0));
        assert!(mw.holds && !milnor_wood(3, 1, 1).holds);
    }

    #[test]
    fn milnor_wood_matches_extremes_of_lefschetz() {
        for m in 1..=6u64 {
            for g in 2..=6u64 {
                let bound = milnor_wood(m, g, 0).bound;
                let max = (4 * m * (g - 1)) as i64;
                assert_eq!(lefschetz_degree(m, g, max, 0).unwrap().deg_w, bound);
                assert_eq!(lefschetz_degree(m, g, 0, 0).unwrap().deg_w, -bound);
            }
        }
    }

    #[test]
    fn dimension_examples() {
        let sl = moduli_dimensions(Group::SlH, 2, 2);
        assert_eq!((sl.base_dim.clone(), sl.fiber_dim.clone(), sl.total_dim.clone()), (big(3), big(12), big(15)));
        let so = moduli_dimensions(Group::SoStar, 1, 2);
        assert_eq!((so.base_dim.clone(), so.fiber_dim.clone(), so.total_dim.clone()), (big(3), big(3), big(6)));
        let sp = moduli_dimensions(Group::SpMm, 1, 2);
        assert_eq!(
            (sp.base_dim.clone(), sp.fiber_dim.clone(), sp.parabolic_dim.clone(), sp.total_dim.clone()),
            (big(3), big(3), big(4), big(10))
        );
        assert!(sl.dimension_identity && so.dimension_identity && sp.dimension_identity);
        assert_eq!(so.component_count, Some(big(8)));
    }

    #[test]
    fn dimension_identity_sweep() {
        for group in Group::ALL {
            for m in 1..=20u64 {
                for g in 2..=20u64 {
                    let r = moduli_dimensions(group, m, g);
                    assert!(r.dimension_identity, "{group} m {m} g {g}");
                    // Independent closed forms.
                    let (m_, g1) = (big(m), big(g) - 1);
                    let expected = match group {
                        Group::SlH => (big(4) * &m_ * &m_ - 1) * &g1,
                        Group::SoStar => &m_ * (big(8) * &m_ - 2) * &g1,
                        Group::SpMm => &m_ * (big(8) * &m_ + 2) * &g1,
                    };
                    assert_eq!(r.total_dim, expected);
                }
            }
        }
    }

    #[test]
    fn genus_one_is_degenerate() {
        for group in Group::ALL {
            let r = moduli_dimensions(group, 2, 1);
            assert!(r.degenerate);
            assert_eq!(r.total_dim, big(0));
            assert!(r.dimension_identity);
        }
        assert!(matches!(component_count(1, 1), Err(Error::DegenerateCase(_))));
    }

    #[test]
    fn component_count_examples() {
        assert_eq!(component_count(1, 2).unwrap(), big(8));
        assert_eq!(component_count(2, 2).unwrap(), big(128));
        assert_eq!(component_count(1, 3).unwrap(), big(128));
        // 2^{4·20·19 − 1} does not fit in any machine integer.
        let huge = component_count(20, 20).unwrap();
        assert_eq!(huge.bits(), 4 * 20 * 19);
    }

    #[test]
    fn component_count_from_fixed_points() {
        // Fixed points are the zeros of a_m ∈ H⁰(K^{2m}), deg K^{2m} = 2m(2g−2).
        for m in 1..=6u64 {
            for g in 2..=6u64 {
                let fixed = 2 * m * (2 * g - 2);
                let mut expected = BigInt::one();
                for _ in 0..fixed - 1 {
                    expected *= 2;
                }
                assert_eq!(component_count(m, g).unwrap(), expected);
            }
        }
    }

    #[test]
    fn big_values_serialize_as_strings() {
        let r = moduli_dimensions(Group::SpMm, 20, 20);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["component_count"].is_string());
        assert!(json["total_dim"].is_i64());
        assert_eq!(json["group"], "SP_MM");
        let sl = serde_json::to_value(moduli_dimensions(Group::SlH, 2, 2)).unwrap();
        assert!(sl["component_count"].is_null());
    }

    proptest! {
        #[test]
        fn lefschetz_independent_of_line_bundle(m in 1u64..8, g in 2u64..8, frac in 0.0f64..=1.0, l in -50i64..=50) {
            let max = 4 * m * (g - 1);
            let big_m = (frac * max as f64).round() as i64;
            let a = lefschetz_degree(m, g, big_m, l).unwrap();
            let b = lefschetz_degree(m, g, big_m, 0).unwrap();
            prop_assert_eq!(&a.deg_w, &b.deg_w);
            prop_assert_eq!(a.deg_w, big(2 * big_m) - big(max));
        }
    }
}
