use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::harmonic::HarmonicMap;
use crate::hypgeo::ExtendedReal;
use crate::numeric::linear_fit;
use crate::series::cauchy_coefficients_default;

/// Largest `n_max` accepted by [`coefficient_growth`].
pub const MAX_COEFFICIENT_INDEX: usize = 2048;
/// `|a_n| + |b_n|` below this over the whole fit window makes the fit degenerate.
pub const NEGLIGIBLE_COEFFICIENT: f64 = 1e-10;

/// Upper bound for `|a_2|` given `‖P_f‖ <= λ`, `g'(0) = b1`, `g''(0)/2 = b2`:
/// `½ min{(1-|b1|²)λ + 2|b1 b2|, min_{|ε|<=1} |1+εb1|(λ+1) + 2|εb2|}`.
///
/// For `|ε| = s` fixed the inner term is smallest when `εb1` is negative
/// real, where it equals `(1 - s|b1|)(λ+1) + 2s|b2|`. That is linear in
/// `s`, so the minimum sits at `s = 0` or `s = 1`.
pub fn a2_bound(lambda: f64, b1: Complex64, b2: Complex64) -> Result<f64> {
    let (m1, m2) = (b1.norm(), b2.norm());
    if !(m1 < 1.0) {
        return Err(Error::Domain(format!("|b1| must be < 1, got {m1}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::ParameterDomain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    let first = (1.0 - m1 * m1) * lambda + 2.0 * m1 * m2;
    Ok(0.5 * first.min(a2_inner_minimum(lambda, m1, m2)))
}

/// `min_{|ε| <= 1} |1 + εb1|(λ+1) + 2|εb2|` in terms of `|b1|`, `|b2|`.
pub fn a2_inner_minimum(lambda: f64, b1_mod: f64, b2_mod: f64) -> f64 {
    let at_zero = lambda + 1.0;
    let at_one = (1.0 - b1_mod) * (lambda + 1.0) + 2.0 * b2_mod;
    at_zero.min(at_one)
}

/// `(sqrt(1 + 4x²) - 1) / 2`.
pub fn alpha_exponent(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::ParameterDomain(format!("argument must be >= 0, got {x}")));
    }
    Ok(0.5 * ((1.0 + 4.0 * x * x).sqrt() - 1.0))
}

/// `4 / ((λ+3)(λ-1))`, infinite at `λ = 1`.
pub fn hardy_exponent(lambda: f64) -> Result<ExtendedReal> {
    if !(lambda >= 1.0) {
        return Err(Error::Domain(format!("lambda must be >= 1, got {lambda}")));
    }
    if lambda == 1.0 {
        return Ok(ExtendedReal::Infinite);
    }
    Ok(ExtendedReal::Finite(4.0 / ((lambda + 3.0) * (lambda - 1.0))))
}

/// Least-squares growth exponent of `n(|a_n| + |b_n|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub n_from: usize,
    pub n_to: usize,
    /// `None` when the coefficients are negligible over the window.
    pub gamma: Option<f64>,
    pub residual: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StirlingRatio {
    pub n: usize,
    /// `|a_n| n^{-(λ-3)/2} Γ((λ+1)/2)`, tending to 1 on the sharpness family.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub map: String,
    pub n_max: usize,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub fit: GrowthFit,
    pub stirling: Option<Vec<StirlingRatio>>,
    pub warnings: Vec<Warning>,
}

impl CoefficientReport {
    pub fn a_mod(&self, n: usize) -> f64 {
        self.a[n].norm()
    }

    pub fn b_mod(&self, n: usize) -> f64 {
        self.b[n].norm()
    }

    /// Adds the ratios for `n >= 2` against `Γ((λ+1)/2)^{-1} n^{(λ-3)/2}`.
    pub fn with_stirling(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 1.0 && lambda.is_finite()) {
            return Err(Error::ParameterDomain(format!("lambda must be finite and > 1, got {lambda}")));
        }
        let gamma = libm::tgamma(0.5 * (lambda + 1.0));
        let e = 0.5 * (lambda - 3.0);
        self.stirling = Some(
            (2..=self.n_max)
                .map(|n| StirlingRatio {
                    n,
                    ratio: self.a_mod(n) * (n as f64).powf(-e) * gamma,
                })
                .collect(),
        );
        Ok(self)
    }
}

/// Taylor coefficients of both parts from Cauchy integrals, and the growth
/// exponent fitted over the top decade `n_max/10 ..= n_max`.
pub fn coefficient_growth(f: &HarmonicMap, n_max: usize) -> Result<CoefficientReport> {
    if !(2..=MAX_COEFFICIENT_INDEX).contains(&n_max) {
        return Err(Error::ParameterDomain(format!(
            "n_max must lie in [2, {MAX_COEFFICIENT_INDEX}], got {n_max}"
        )));
    }
    let ca = cauchy_coefficients_default(f.analytic_part(), n_max)?;
    let cb = cauchy_coefficients_default(f.co_analytic_part(), n_max)?;
    let mut warnings = ca.warnings;
    warnings.extend(cb.warnings);

    let n_from = (n_max / 10).max(1);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut peak: f64 = 0.0;
    for n in n_from..=n_max {
        let s = ca.values[n].norm() + cb.values[n].norm();
        peak = peak.max(s);
        if s > 0.0 {
            xs.push((n as f64).ln());
            ys.push((n as f64 * s).ln());
        }
    }
    let fit = match linear_fit(&xs, &ys) {
        Some((slope, _, rms)) if peak > NEGLIGIBLE_COEFFICIENT => GrowthFit {
            n_from,
            n_to: n_max,
            gamma: Some(slope),
            residual: Some(rms),
            degenerate: false,
        },
        _ => {
            warnings.push(Warning::new(
                "coefficient_growth",
                format!("coefficients negligible on {n_from}..={n_max}; growth fit is degenerate"),
            ));
            GrowthFit {
                n_from,
                n_to: n_max,
                gamma: None,
                residual: None,
                degenerate: true,
            }
        }
    };
    Ok(CoefficientReport {
        map: f.label().to_string(),
        n_max,
        a: ca.values,
        b: cb.values,
        fit,
        stirling: None,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn a2_examples() {
        assert_eq!(a2_bound(3.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap(), 1.5);
        assert!((a2_bound(1.0, c(0.5, 0.0), c(0.0, 0.0)).unwrap() - 0.375).abs() < 1e-15);
        assert!(a2_bound(1.0, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn alpha_and_hardy() {
        assert_eq!(alpha_exponent(0.0).unwrap(), 0.0);
        assert!((alpha_exponent(1.0).unwrap() - 0.618_034_0).abs() < 1e-7);
        assert!((alpha_exponent(2f64.sqrt()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(hardy_exponent(1.0).unwrap(), ExtendedReal::Infinite);
        assert_eq!(hardy_exponent(3.0).unwrap(), ExtendedReal::Finite(1.0 / 3.0));
        assert_eq!(hardy_exponent(5.0).unwrap(), ExtendedReal::Finite(0.125));
        assert!(hardy_exponent(0.5).is_err());
    }

    #[test]
    fn identity_fit_is_degenerate() {
        let rep = coefficient_growth(&HarmonicMap::identity(), 64).unwrap();
        assert!(rep.fit.degenerate && rep.fit.gamma.is_none());
        assert!((rep.a[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(rep.a[2..].iter().all(|a| a.norm() < 1e-12));
    }

    #[test]
    fn sharpness_family_coefficients() {
        let f = FamilySpec::TLambda { lambda: 5.0, theta: 0.0 }.build().unwrap();
        let rep = coefficient_growth(&f, 256).unwrap();
        for n in 1..=256 {
            let exact = 0.5 * (n as f64 + 1.0);
            assert!((rep.a_mod(n) - exact).abs() < 1e-9, "a_{n}");
            let prev = 0.5 * n as f64;
            let bn = (n as f64 - 1.0) * prev / n as f64;
            assert!((rep.b_mod(n) - bn).abs() < 1e-9, "b_{n}");
        }
        let gamma = rep.fit.gamma.unwrap();
        assert!((gamma - 2.0).abs() < 0.02, "{gamma}");
        let rep = rep.with_stirling(5.0).unwrap();
        let last = rep.stirling.unwrap().last().unwrap().ratio;
        assert!((last - 1.0).abs() < 0.01);
    }
}
