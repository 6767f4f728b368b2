use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{pre_schwarzian_norm, sup_norm_estimate, NormEstimate, SamplingPlan, Verdict};
use crate::harmonic::HarmonicMap;
use crate::numeric::{disk_weight, kronecker_2d};
use crate::series::AnalyticFunction;

/// Points at which the pointwise subordination identity is checked.
pub const IDENTITY_SAMPLES: usize = 200;
/// Relative tolerance of the pointwise identity.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Norm slack for subordinated maps whose co-analytic part is subordinated too.
pub const FULL_SLACK: f64 = 2e-3;
/// Norm slack when only the analytic part is subordinated.
pub const ANALYTIC_ONLY_SLACK: f64 = 2.0 + 2e-3;
/// Largest pair sample radius of [`holder_check`].
pub const HOLDER_RADIUS: f64 = 0.999;
/// Factor applied to the training maximum in [`holder_check`].
pub const HOLDER_MARGIN: f64 = 1.01;

const SELF_MAP_RADII: [f64; 8] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 0.9999];
const SELF_MAP_ANGLES: usize = 128;
const IDENTITY_RADIUS: f64 = 0.95;

/// Lower bound of `sup (1 - |z|^2)(|h'(z)| + |g'(z)|)`.
pub fn bloch_seminorm(f: &HarmonicMap, plan: &SamplingPlan) -> Result<NormEstimate> {
    sup_norm_estimate(
        |z| {
            let (h, g) = (f.analytic_part().derivatives(z)?, f.co_analytic_part().derivatives(z)?);
            Ok(disk_weight(z) * (h[0].norm() + g[0].norm()))
        },
        plan,
    )
}

/// How the subordinate map is assembled from `F = H + conj(G)` and `φ`.
#[derive(Debug, Clone)]
pub enum SubordinationMode {
    /// `h' = H'∘φ` and `g' = G'∘φ`.
    Full,
    /// `h' = H'∘φ`, paired with the given co-analytic part.
    AnalyticOnly { co_analytic: AnalyticFunction },
}

impl SubordinationMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Full => "I",
            Self::AnalyticOnly { .. } => "II",
        }
    }

    pub fn slack(&self) -> f64 {
        match self {
            Self::Full => FULL_SLACK,
            Self::AnalyticOnly { .. } => ANALYTIC_ONLY_SLACK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationRecord {
    pub mode: String,
    pub outer: String,
    pub inner: String,
    /// Present in mode I only.
    pub pointwise: Option<Verdict>,
    pub subordinate_norm: NormEstimate,
    pub dominant_norm: NormEstimate,
    pub norm_verdict: Verdict,
    pub passed: bool,
}

fn check_self_map(phi: &AnalyticFunction) -> Result<()> {
    for &r in &SELF_MAP_RADII {
        let m = if r == 0.0 { 1 } else { SELF_MAP_ANGLES };
        for k in 0..m {
            let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
            let w = phi.value(z)?;
            if !(w.norm() < 1.0) {
                return Err(Error::NotSelfMap { z, modulus: w.norm() });
            }
        }
    }
    Ok(())
}

/// Builds `f` from `F` and `φ` and compares `‖P_f‖` with `‖P_F‖`.
///
/// In mode I the identity `P_f = (P_F∘φ) φ'` is also checked at
/// [`IDENTITY_SAMPLES`] points.
pub fn subordination_check(
    big_f: &HarmonicMap,
    phi: &AnalyticFunction,
    mode: &SubordinationMode,
    plan: &SamplingPlan,
) -> Result<SubordinationRecord> {
    check_self_map(phi)?;
    let zero = Complex64::new(0.0, 0.0);
    let h = AnalyticFunction::compose_derivative(big_f.analytic_part(), phi, zero);
    let g = match mode {
        SubordinationMode::Full => AnalyticFunction::compose_derivative(big_f.co_analytic_part(), phi, zero),
        SubordinationMode::AnalyticOnly { co_analytic } => co_analytic.clone(),
    };
    let f = HarmonicMap::new(h, g)?;

    let pointwise = match mode {
        SubordinationMode::Full => {
            let errors: Vec<f64> = (0..IDENTITY_SAMPLES)
                .into_par_iter()
                .map(|i| {
                    let (u, v) = kronecker_2d(i, 0.5);
                    let z = Complex64::from_polar(IDENTITY_RADIUS * u.sqrt(), TAU * v);
                    let lhs = f.pre_schwarzian(z)?;
                    let rhs = big_f.pre_schwarzian(phi.value(z)?)? * phi.derivatives(z)?[0];
                    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
                })
                .collect::<Result<_>>()?;
            let worst = errors.iter().copied().fold(0.0, f64::max);
            Some(Verdict::at_most("pointwise P_f = (P_F∘φ)φ'", worst, IDENTITY_TOL))
        }
        SubordinationMode::AnalyticOnly { .. } => None,
    };

    let subordinate_norm = pre_schwarzian_norm(&f, plan)?;
    let dominant_norm = pre_schwarzian_norm(big_f, plan)?;
    let norm_verdict = Verdict::at_most(
        "‖P_f‖ <= ‖P_F‖ + slack",
        subordinate_norm.lower_bound,
        dominant_norm.lower_bound + mode.slack(),
    );
    let passed = norm_verdict.passed && pointwise.as_ref().map_or(true, |v| v.passed);
    Ok(SubordinationRecord {
        mode: mode.name().into(),
        outer: big_f.label().to_string(),
        inner: phi.label(),
        pointwise,
        subordinate_norm,
        dominant_norm,
        norm_verdict,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderRecord {
    pub verdict: Verdict,
    pub lambda: f64,
    /// `(1 - λ)/2`.
    pub exponent: f64,
    /// Calibrated constant: the training maximum times [`HOLDER_MARGIN`].
    pub constant: f64,
    pub training_max: f64,
    pub held_out_max: f64,
    pub pairs: usize,
    pub norm: NormEstimate,
}

fn uniform_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

/// Checks `|f(z1) - f(z2)| <= C |z1 - z2|^{(1-λ)/2}` for a map with
/// `‖P_f‖ <= λ < 1`.
///
/// `C` is calibrated on the first half of the pairs and tested on the second.
pub fn holder_check(f: &HarmonicMap, lambda: f64, n_pairs: usize, seed: u64, plan: &SamplingPlan) -> Result<HolderRecord> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::ParameterDomain(format!("lambda must lie in [0, 1), got {lambda}")));
    }
    if n_pairs < 2 {
        return Err(Error::ParameterDomain("need at least two pairs".into()));
    }
    let norm = pre_schwarzian_norm(f, plan)?;
    if norm.lower_bound > lambda + 1e-9 {
        return Err(Error::ParameterDomain(format!(
            "estimated ‖P_f‖ = {} exceeds lambda = {lambda}",
            norm.lower_bound
        )));
    }
    let exponent = 0.5 * (1.0 - lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Complex64, Complex64)> = (0..n_pairs)
        .map(|_| {
            let kind = rng.gen_range(0..3);
            if kind == 0 {
                // both points close to the sampled boundary circle
                let mut near_edge = || {
                    let r = HOLDER_RADIUS * (1.0 - 0.01 * rng.gen::<f64>());
                    Complex64::from_polar(r, TAU * rng.gen::<f64>())
                };
                return (near_edge(), near_edge());
            }
            let z = uniform_in_disk(&mut rng, HOLDER_RADIUS);
            let w = if kind == 1 {
                uniform_in_disk(&mut rng, HOLDER_RADIUS)
            } else {
                let step = rng.gen::<f64>() * (1.0 - z.norm());
                let w = z + Complex64::from_polar(step, TAU * rng.gen::<f64>());
                if w.norm() > HOLDER_RADIUS {
                    w * (HOLDER_RADIUS / w.norm())
                } else {
                    w
                }
            };
            (z, w)
        })
        .collect();
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|&(z, w)| {
            let d = (z - w).norm();
            if d == 0.0 {
                return Ok(0.0);
            }
            Ok((f.value(z)? - f.value(w)?).norm() / d.powf(exponent))
        })
        .collect::<Result<_>>()?;
    let (train, test) = ratios.split_at(n_pairs / 2);
    let training_max = train.iter().copied().fold(0.0, f64::max);
    let held_out_max = test.iter().copied().fold(0.0, f64::max);
    let constant = HOLDER_MARGIN * training_max;
    Ok(HolderRecord {
        verdict: Verdict::at_most("Hölder bound on held-out pairs", held_out_max, constant),
        lambda,
        exponent,
        constant,
        training_max,
        held_out_max,
        pairs: n_pairs,
        norm,
    })
}
