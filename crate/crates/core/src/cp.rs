//! Parametric power-coefficient family `Cp(λ, β)`.
//!
//! Every bundled model is a coefficient set for the shared form
//!
//! ```text
//! Cp  = c1 (c2/λi - c3 β - c4 λi β - c5 β^x - c6) exp(-c7/λi) + c8 λ
//! 1/λi = 1/(λ + c9 β) - c10/(β³ + 1)
//! ```
//!
//! with λ the tip-speed ratio and β the blade pitch in degrees. The absolute
//! magnitude of a model is discarded by [`scale_cp`], which rescales the
//! surface so that its peak at β = 0 equals a prescribed `cp_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Betz limit, the theoretical upper bound on any power coefficient.
pub const BETZ_LIMIT: f64 = 16.0 / 27.0;

/// Tip-speed-ratio interval searched for the optimum.
pub const LAMBDA_SEARCH_MIN: f64 = 0.5;
pub const LAMBDA_SEARCH_MAX: f64 = 25.0;

const COARSE_STEP: f64 = 0.01;
const REFINE_TOL: f64 = 1e-10;

/// Coefficient set of the general Cp form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpParameterisation {
    pub name: String,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    /// Exponent on β in the `c5` term.
    pub x: f64,
    #[serde(default)]
    pub provenance: String,
}

impl CpParameterisation {
    /// Coefficient set with every term zero, handy as a starting point.
    pub fn zeroed(name: impl Into<String>) -> Self {
        CpParameterisation {
            name: name.into(),
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            c4: 0.0,
            c5: 0.0,
            c6: 0.0,
            c7: 0.0,
            c8: 0.0,
            c9: 0.0,
            c10: 0.0,
            x: 1.0,
            provenance: String::new(),
        }
    }

    pub fn coefficients(&self) -> [f64; 11] {
        [
            self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7, self.c8, self.c9,
            self.c10, self.x,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.coefficients().iter().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "Cp parameterisation '{}' has non-finite coefficients",
                self.name
            )))
        }
    }

    pub fn evaluate(&self, lambda: f64, beta: f64) -> Result<f64> {
        cp_general(lambda, beta, self)
    }

    /// Like [`evaluate`](Self::evaluate) but maps an out-of-range λ to zero.
    pub fn evaluate_or_zero(&self, lambda: f64, beta: f64) -> f64 {
        cp_general(lambda, beta, self).unwrap_or(0.0)
    }
}

fn entry(name: &str, c: [f64; 10], x: f64, provenance: &str) -> CpParameterisation {
    CpParameterisation {
        name: name.to_string(),
        c1: c[0],
        c2: c[1],
        c3: c[2],
        c4: c[3],
        c5: c[4],
        c6: c[5],
        c7: c[6],
        c8: c[7],
        c9: c[8],
        c10: c[9],
        x,
        provenance: provenance.to_string(),
    }
}

/// The six bundled parameterisations, in a fixed order.
pub fn registry() -> Vec<CpParameterisation> {
    vec![
        entry(
            "Slootweg2003",
            [0.73, 151.0, 0.58, 0.0, 0.002, 13.2, 18.4, 0.0, -0.02, 0.003],
            2.14,
            "Slootweg et al. (2003), IEEE Trans. Power Systems 18(1): \
             0.73(151/li - 0.58b - 0.002b^2.14 - 13.2)exp(-18.4/li), \
             1/li = 1/(l - 0.02b) - 0.003/(b^3+1)",
        ),
        entry(
            "Heier2014",
            [0.5, 116.0, 0.4, 0.0, 0.0, 5.0, 21.0, 0.0, 0.08, 0.035],
            0.0,
            "Heier, Grid Integration of Wind Energy (2014): \
             0.5(116/li - 0.4b - 5)exp(-21/li), 1/li = 1/(l + 0.08b) - 0.035/(b^3+1)",
        ),
        entry(
            "Thongam2009",
            [
                0.5176, 116.0, 0.4, 0.0, 0.0, 5.0, 21.0, 0.006795, 0.08, 0.035,
            ],
            0.0,
            "Thongam et al. (2009): Heier form with c1=0.5176 plus linear term 0.006795 l",
        ),
        entry(
            "DeKooning2013",
            [0.77, 151.0, 0.0, 0.0, 0.0, 13.65, 18.4, 0.0, 0.0, 0.0],
            0.0,
            "De Kooning et al. (2013): 0.77(151/li - 13.65)exp(-18.4/li) with li = l \
             (pitch terms absent)",
        ),
        entry(
            "Ochieng2014",
            [0.5, 116.0, 0.0, 0.4, 0.0, 5.0, 21.0, 0.0, 0.08, 0.035],
            0.0,
            "Ochieng & Manyonge (2014): 0.5(116/li - 0.4 li b - 5)exp(-21/li), \
             1/li = 1/(l + 0.08b) - 0.035/(b^3+1)",
        ),
        entry(
            "Dai2016",
            [0.22, 116.0, 0.4, 0.0, 0.0, 5.0, 12.5, 0.0, 0.08, 0.035],
            0.0,
            "Dai et al. (2016), Renewable Energy 89: \
             0.22(116/li - 0.4b - 5)exp(-12.5/li), 1/li = 1/(l + 0.08b) - 0.035/(b^3+1)",
        ),
    ]
}

pub fn registry_names() -> Vec<String> {
    registry().into_iter().map(|p| p.name).collect()
}

/// Looks a parameterisation up by name (ASCII case-insensitive).
pub fn lookup(name: &str) -> Result<CpParameterisation> {
    registry()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownCpModel(name.to_string()))
}

pub fn registry_json() -> Result<String> {
    Ok(serde_json::to_string_pretty(&registry())?)
}

/// Evaluates the general Cp form. Negative values are clamped to zero.
pub fn cp_general(lambda: f64, beta: f64, p: &CpParameterisation) -> Result<f64> {
    let degenerate = || Error::NonFiniteResult { lambda, beta };
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(degenerate());
    }
    let shifted = lambda + p.c9 * beta;
    if shifted <= 0.0 {
        return Err(degenerate());
    }
    let inv_li = 1.0 / shifted - p.c10 / (beta.powi(3) + 1.0);
    if !(inv_li > 0.0) || !inv_li.is_finite() {
        return Err(degenerate());
    }
    let li = 1.0 / inv_li;
    let beta_pow = if p.c5 == 0.0 { 0.0 } else { beta.powf(p.x) };
    let cp = p.c1
        * (p.c2 * inv_li - p.c3 * beta - p.c4 * li * beta - p.c5 * beta_pow - p.c6)
        * (-p.c7 * inv_li).exp()
        + p.c8 * lambda;
    if !cp.is_finite() {
        return Err(degenerate());
    }
    Ok(cp.max(0.0))
}

/// Location and value of the unscaled Cp peak at β = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpOptimum {
    pub lambda_opt: f64,
    pub raw_cp_at_opt: f64,
}

/// Finds the tip-speed ratio maximising `Cp(λ, 0)` on
/// [`LAMBDA_SEARCH_MIN`, `LAMBDA_SEARCH_MAX`].
///
/// A coarse scan brackets the peak, then golden-section search refines it.
/// Equal maxima resolve to the smallest λ.
pub fn lambda_opt(p: &CpParameterisation) -> Result<CpOptimum> {
    let f = |l: f64| p.evaluate_or_zero(l, 0.0);
    let steps = ((LAMBDA_SEARCH_MAX - LAMBDA_SEARCH_MIN) / COARSE_STEP).round() as usize;

    let mut best_l = LAMBDA_SEARCH_MIN;
    let mut best_cp = f(best_l);
    for i in 1..=steps {
        let l = if i == steps {
            LAMBDA_SEARCH_MAX
        } else {
            LAMBDA_SEARCH_MIN + i as f64 * COARSE_STEP
        };
        let cp = f(l);
        if cp > best_cp {
            best_l = l;
            best_cp = cp;
        }
    }
    if !(best_cp > 0.0) {
        return Err(Error::NoPositiveCp(p.name.clone()));
    }

    let lo = (best_l - COARSE_STEP).max(LAMBDA_SEARCH_MIN);
    let hi = (best_l + COARSE_STEP).min(LAMBDA_SEARCH_MAX);
    let refined = golden_section_max(f, lo, hi, REFINE_TOL);
    let refined_cp = f(refined);

    let (lambda_opt, raw_cp_at_opt) = if refined_cp > best_cp {
        (refined, refined_cp)
    } else {
        (best_l, best_cp)
    };
    Ok(CpOptimum {
        lambda_opt,
        raw_cp_at_opt,
    })
}

/// Golden-section search for the maximiser of a unimodal function on `[a, b]`.
fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// A Cp surface rescaled so that its β = 0 peak equals `cp_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledCpModel {
    pub base: CpParameterisation,
    pub cp_max: f64,
    pub lambda_opt: f64,
    pub raw_cp_at_opt: f64,
}

impl ScaledCpModel {
    pub fn scale_factor(&self) -> f64 {
        self.cp_max / self.raw_cp_at_opt
    }

    pub fn evaluate(&self, lambda: f64, beta: f64) -> Result<f64> {
        Ok(cp_general(lambda, beta, &self.base)? * self.scale_factor())
    }

    /// Scaled Cp with out-of-domain λ mapped to zero.
    pub fn evaluate_or_zero(&self, lambda: f64, beta: f64) -> f64 {
        self.evaluate(lambda, beta).unwrap_or(0.0)
    }

    pub fn name(&self) -> &str {
        &self.base.name
    }
}

pub fn scale_cp(p: &CpParameterisation, cp_max: f64) -> Result<ScaledCpModel> {
    if !(cp_max > 0.0 && cp_max <= BETZ_LIMIT) {
        return Err(Error::InvalidCpMax(cp_max));
    }
    p.validate()?;
    let opt = lambda_opt(p)?;
    Ok(ScaledCpModel {
        base: p.clone(),
        cp_max,
        lambda_opt: opt.lambda_opt,
        raw_cp_at_opt: opt.raw_cp_at_opt,
    })
}

/// Convenience: registry lookup followed by [`scale_cp`].
pub fn scaled_model(name: &str, cp_max: f64) -> Result<ScaledCpModel> {
    scale_cp(&lookup(name)?, cp_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear(c8: f64) -> CpParameterisation {
        CpParameterisation {
            c8,
            ..CpParameterisation::zeroed("linear")
        }
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let p = CpParameterisation::zeroed("zero");
        assert_eq!(cp_general(7.0, 0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn only_linear_term() {
        assert!((cp_general(5.0, 0.0, &linear(0.1)).unwrap() - 0.5).abs() < 1e-15);
    }

    // mpmath at 40 digits: 0.22 (116·0.09 − 5) exp(−12.5·0.09)
    #[test]
    fn dai2016_at_lambda_8() {
        let p = lookup("Dai2016").unwrap();
        let cp = cp_general(8.0, 0.0, &p).unwrap();
        assert!((cp - 0.388_544_072_934_472_96).abs() < 1e-14, "{cp}");
    }

    #[test]
    fn slootweg_with_pitch() {
        let p = lookup("Slootweg2003").unwrap();
        let cp = cp_general(7.0, 3.0, &p).unwrap();
        assert!((cp - 0.349_955_988_742_215_08).abs() < 1e-13, "{cp}");
    }

    #[test]
    fn degenerate_lambda_i_is_an_error() {
        let p = lookup("Dai2016").unwrap();
        // 1/λ − 0.035 < 0 once λ > 1/0.035
        assert!(matches!(
            cp_general(40.0, 0.0, &p),
            Err(Error::NonFiniteResult { .. })
        ));
        assert!(cp_general(0.0, 0.0, &p).is_err());
        assert_eq!(p.evaluate_or_zero(40.0, 0.0), 0.0);
    }

    #[test]
    fn linear_model_peaks_at_upper_bound() {
        let opt = lambda_opt(&linear(0.1)).unwrap();
        assert_eq!(opt.lambda_opt, LAMBDA_SEARCH_MAX);
        assert!((opt.raw_cp_at_opt - 2.5).abs() < 1e-12);
    }

    #[test]
    fn zero_model_has_no_optimum() {
        assert!(matches!(
            lambda_opt(&CpParameterisation::zeroed("z")),
            Err(Error::NoPositiveCp(_))
        ));
    }

    #[test]
    fn identity_scaling() {
        let p = lookup("Heier2014").unwrap();
        let opt = lambda_opt(&p).unwrap();
        let m = scale_cp(&p, opt.raw_cp_at_opt).unwrap();
        assert_eq!(m.scale_factor(), 1.0);
        for l in [3.0, 6.0, 9.0, 12.0] {
            assert_eq!(m.evaluate(l, 0.0).unwrap(), p.evaluate(l, 0.0).unwrap());
        }
    }

    #[test]
    fn betz_guard() {
        let p = lookup("Dai2016").unwrap();
        assert!(matches!(scale_cp(&p, 0.6), Err(Error::InvalidCpMax(_))));
        assert!(matches!(scale_cp(&p, 0.0), Err(Error::InvalidCpMax(_))));
        assert!(scale_cp(&p, BETZ_LIMIT).is_ok());
    }

    #[test]
    fn table_reference_peak() {
        let m = scaled_model("Dai2016", 0.4615).unwrap();
        assert!((m.evaluate(m.lambda_opt, 0.0).unwrap() - 0.4615).abs() < 1e-9);
    }

    #[test]
    fn registry_is_unique_and_finite() {
        let reg = registry();
        assert_eq!(reg.len(), 6);
        for (i, a) in reg.iter().enumerate() {
            a.validate().unwrap();
            for b in &reg[i + 1..] {
                assert_ne!(a.name, b.name);
            }
        }
        assert!(lookup("dai2016").is_ok());
        assert!(matches!(lookup("nope"), Err(Error::UnknownCpModel(_))));
    }

    #[test]
    fn registry_json_round_trip() {
        let parsed: Vec<CpParameterisation> =
            serde_json::from_str(&registry_json().unwrap()).unwrap();
        assert_eq!(parsed, registry());
        let v: serde_json::Value = serde_json::from_str(&registry_json().unwrap()).unwrap();
        for key in ["name", "c1", "c10", "x", "provenance"] {
            assert!(v[0].get(key).is_some(), "missing {key}");
        }
    }

    proptest! {
        #[test]
        fn never_negative(l in 0.01f64..60.0, b in 0.0f64..10.0, idx in 0usize..6) {
            let p = &registry()[idx];
            if let Ok(cp) = cp_general(l, b, p) {
                prop_assert!(cp >= 0.0);
            }
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scaled_peak_and_argmax_invariance(cp_max in 0.05f64..BETZ_LIMIT, idx in 0usize..6) {
            let p = &registry()[idx];
            let m = scale_cp(p, cp_max).unwrap();
            let opt = lambda_opt(p).unwrap();
            prop_assert_eq!(m.lambda_opt, opt.lambda_opt);
            let mut peak: f64 = 0.0;
            let mut l = LAMBDA_SEARCH_MIN;
            while l <= LAMBDA_SEARCH_MAX {
                peak = peak.max(m.evaluate_or_zero(l, 0.0));
                l += 0.001;
            }
            peak = peak.max(m.evaluate_or_zero(m.lambda_opt, 0.0));
            prop_assert!((peak - cp_max).abs() < 1e-6);
            prop_assert!((m.evaluate(m.lambda_opt, 0.0).unwrap() - cp_max).abs() < 1e-9);
        }
    }
}
