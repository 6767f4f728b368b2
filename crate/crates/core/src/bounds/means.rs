use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::harmonic::HarmonicMap;
use crate::numeric::linear_fit;
use crate::series::AnalyticFunction;

/// Fewest radii accepted by [`integral_means`].
pub const MIN_MEANS_RADII: usize = 5;
const MAX_MEANS_SAMPLES: usize = 1 << 20;

/// What is averaged over each circle.
#[derive(Debug, Clone, Copy)]
pub enum MeansTarget<'a> {
    Harmonic(&'a HarmonicMap),
    Analytic(&'a AnalyticFunction),
    /// The first derivative of an analytic function.
    Derivative(&'a AnalyticFunction),
}

impl MeansTarget<'_> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Self::Harmonic(f) => f.value(z),
            Self::Analytic(f) => f.value(z),
            Self::Derivative(f) => Ok(f.derivatives(z)?[0]),
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Harmonic(f) => f.label().to_string(),
            Self::Analytic(f) => f.label(),
            Self::Derivative(f) => format!("({})'", f.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeansReport {
    pub target: String,
    pub p: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub samples: Vec<usize>,
    /// Slope of `log I_p` against `log(1/(1-r))`.
    pub exponent: f64,
    pub residual: f64,
    pub warnings: Vec<Warning>,
}

/// `1 - 2^{-k}`, `k = 6..=12`.
pub fn default_means_radii() -> Vec<f64> {
    (6..=12).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}

/// Trapezoid sample count `max(512, ceil(64/(1-r)))`.
pub fn means_samples(r: f64) -> usize {
    ((64.0 / (1.0 - r)).ceil() as usize).clamp(512, MAX_MEANS_SAMPLES)
}

/// `I_p(r) = (1/2π) ∫ |f(re^{iθ})|^p dθ` at each radius, and the exponent of
/// its growth as `r -> 1`.
pub fn integral_means(target: MeansTarget<'_>, p: f64, radii: &[f64]) -> Result<MeansReport> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::ParameterDomain(format!("p must be finite and nonzero, got {p}")));
    }
    if radii.len() < MIN_MEANS_RADII {
        return Err(Error::ParameterDomain(format!(
            "need at least {MIN_MEANS_RADII} radii, got {}",
            radii.len()
        )));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::ParameterDomain("radii must lie in (0, 1)".into()));
    }
    let mut warnings = Vec::new();
    let mut values = Vec::with_capacity(radii.len());
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let m = means_samples(r);
        let moduli: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|k| Ok(target.eval(Complex64::from_polar(r, TAU * k as f64 / m as f64))?.norm()))
            .collect::<Result<_>>()?;
        if p < 0.0 && moduli.iter().any(|&v| v == 0.0) {
            warnings.push(Warning::new(
                "integral_means",
                format!("f vanishes on |z| = {r} and p = {p} < 0; the mean is not integrable"),
            ));
            values.push(f64::INFINITY);
        } else {
            values.push(moduli.iter().map(|v| v.powf(p)).sum::<f64>() / m as f64);
        }
        samples.push(m);
    }
    let finite = values.iter().all(|v| v.is_finite() && *v > 0.0);
    let (exponent, residual) = if finite {
        let xs: Vec<f64> = radii.iter().map(|r| -(1.0 - r).ln()).collect();
        let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        match linear_fit(&xs, &ys) {
            Some((slope, _, rms)) => (slope, rms),
            None => return Err(Error::ParameterDomain("radii must not all coincide".into())),
        }
    } else {
        (f64::INFINITY, f64::NAN)
    };
    Ok(MeansReport {
        target: target.label(),
        p,
        radii: radii.to_vec(),
        values,
        samples,
        exponent,
        residual,
        warnings,
    })
}
