use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result, Warning};
use crate::series::function::AnalyticFunction;

/// Amplification `r^{-n_max}` above which extracted coefficients are flagged.
pub const AMPLIFICATION_LIMIT: f64 = 1e12;

/// Extracted Taylor coefficients with any precision warnings.
#[derive(Debug, Clone)]
pub struct Coefficients {
    pub values: Vec<Complex64>,
    pub radius: f64,
    pub samples: usize,
    pub warnings: Vec<Warning>,
}

/// Default extraction radius `max(0.5, 1 - 4/n_max)`.
///
/// Functions in this library have singularities on the unit circle, so the
/// radius moves toward it as `n_max` grows; `r^{-n_max}` stays near `e^4`.
pub fn default_radius(n_max: usize) -> f64 {
    if n_max == 0 {
        return 0.5;
    }
    (1.0 - 4.0 / n_max as f64).max(0.5)
}

/// Default sample count: `max(256, 8 n_max)`.
pub fn default_samples(n_max: usize) -> usize {
    (8 * n_max).max(256)
}

/// Coefficients `a_0..a_{n_max}` from `M` equispaced samples on `|z| = r`:
/// `a_n ≈ r^{-n} (1/M) Σ f(r e^{2πim/M}) e^{-2πinm/M}`.
pub fn cauchy_coefficients(
    f: &AnalyticFunction,
    n_max: usize,
    r: f64,
    samples: usize,
) -> Result<Coefficients> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("extraction radius must lie in (0, 1), got {r}")));
    }
    if samples < 4 * n_max.max(1) {
        return Err(Error::Domain(format!(
            "need at least 4*n_max = {} samples, got {samples}",
            4 * n_max.max(1)
        )));
    }
    let m = samples;
    let values: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|k| f.value(Complex64::from_polar(r, TAU * k as f64 / m as f64)))
        .collect::<Result<_>>()?;
    let twiddle: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / m as f64))
        .collect();
    let coeffs: Vec<Complex64> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in values.iter().enumerate() {
                acc += v * twiddle[(n * k) % m];
            }
            acc / m as f64 * r.powi(-(n as i32))
        })
        .collect();
    let mut warnings = Vec::new();
    let amplification = r.powi(-(n_max as i32));
    if amplification > AMPLIFICATION_LIMIT {
        warnings.push(Warning::new(
            "cauchy_coefficients",
            format!(
                "r^-n_max = {amplification:.3e} exceeds {AMPLIFICATION_LIMIT:e}; high coefficients lose precision"
            ),
        ));
    }
    Ok(Coefficients {
        values: coeffs,
        radius: r,
        samples: m,
        warnings,
    })
}

/// [`cauchy_coefficients`] with [`default_radius`] and [`default_samples`].
pub fn cauchy_coefficients_default(f: &AnalyticFunction, n_max: usize) -> Result<Coefficients> {
    cauchy_coefficients(f, n_max, default_radius(n_max), default_samples(n_max))
}
