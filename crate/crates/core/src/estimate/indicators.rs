use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::sup::MAX_ANGULAR_COUNT;
use crate::estimate::verify::Verdict;
use crate::harmonic::HarmonicMap;
use crate::hypgeo::{hyperbolic_distance, DiskPoint};
use crate::numeric::disk_weight;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 42;
/// Pair samples stay in `|z| <= 0.95`.
pub const PAIR_RADIUS: f64 = 0.95;
/// Additive slack in the Lipschitz inequality.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;

const BATCH: usize = 4096;

/// A sampled pair and how far it is from satisfying the inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub z: DiskPoint,
    pub z0: DiskPoint,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzRecord {
    pub verdict: Verdict,
    pub lambda: f64,
    pub pairs_checked: usize,
    /// Largest `|ΔlogJ| / d_h` seen.
    pub max_ratio: f64,
    /// First violating pair, if any.
    pub violation: Option<PairWitness>,
}

fn uniform_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

/// Half the pairs are independent uniform points; the other half are
/// short-range pairs, where the Lipschitz constant is approached.
fn sample_pair(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let z = uniform_in_disk(rng, PAIR_RADIUS);
    let z0 = if rng.gen::<bool>() {
        uniform_in_disk(rng, PAIR_RADIUS)
    } else {
        let delta = rng.gen::<f64>() * 0.1 * (1.0 - z.norm());
        let w = z + Complex64::from_polar(delta, TAU * rng.gen::<f64>());
        if w.norm() > PAIR_RADIUS {
            w * (PAIR_RADIUS / w.norm())
        } else {
            w
        }
    };
    (z, z0)
}

/// Checks `|log J(z) - log J(z0)| <= λ d_h(z, z0) + 1e-9` on random pairs,
/// stopping at the first violation.
pub fn log_jacobian_lipschitz_check(f: &HarmonicMap, lambda: f64, n_pairs: usize, seed: u64) -> Result<LipschitzRecord> {
    if !(lambda >= 0.0) {
        return Err(Error::ParameterDomain(format!("lambda must be >= 0, got {lambda}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut max_ratio: f64 = 0.0;
    while checked < n_pairs {
        let batch: Vec<(Complex64, Complex64)> = (0..BATCH.min(n_pairs - checked))
            .map(|_| sample_pair(&mut rng))
            .collect();
        let results: Vec<Result<(f64, f64)>> = batch
            .par_iter()
            .map(|&(z, z0)| {
                let lhs = (f.jacobian(z)?.ln() - f.jacobian(z0)?.ln()).abs();
                let d = hyperbolic_distance(DiskPoint::new(z)?, DiskPoint::new(z0)?);
                Ok((lhs, d))
            })
            .collect();
        for (&(z, z0), res) in batch.iter().zip(results) {
            let (lhs, d) = res?;
            checked += 1;
            if d > 0.0 {
                max_ratio = max_ratio.max(lhs / d);
            }
            let rhs = lambda * d + LIPSCHITZ_SLACK;
            if lhs > rhs {
                let violation = PairWitness {
                    z: DiskPoint::new(z)?,
                    z0: DiskPoint::new(z0)?,
                    lhs,
                    rhs,
                };
                return Ok(LipschitzRecord {
                    verdict: Verdict::new(
                        "log-Jacobian Lipschitz",
                        false,
                        lhs,
                        rhs,
                        format!("violated at pair {checked}: |ΔlogJ| = {lhs} > {rhs}"),
                    ),
                    lambda,
                    pairs_checked: checked,
                    max_ratio,
                    violation: Some(violation),
                });
            }
        }
    }
    Ok(LipschitzRecord {
        verdict: Verdict::new(
            "log-Jacobian Lipschitz",
            true,
            max_ratio,
            lambda,
            format!("{checked} pairs, max |ΔlogJ|/d_h = {max_ratio}"),
        ),
        lambda,
        pairs_checked: checked,
        max_ratio,
        violation: None,
    })
}

/// One radius of [`beta_indicator`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPoint {
    pub radius: f64,
    /// `max_θ (1 - r^2)|P_f(r e^{iθ})|`.
    pub weighted_max: f64,
    /// `(weighted_max - 1) log(1/(1 - r^2))`.
    pub indicator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaIndicator {
    /// Maximum of the indicator over the three outermost radii.
    pub value: f64,
    pub trend: Vec<BetaPoint>,
}

/// `1 - 2^{-k}`, `k = 4..=14`.
pub fn default_beta_radii() -> Vec<f64> {
    (4..=14).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}

/// Finite-radius proxy for the limsup of `((1-|z|^2)|P_f| - 1) log(1/(1-|z|^2))`.
pub fn beta_indicator(f: &HarmonicMap, radii: &[f64]) -> Result<BetaIndicator> {
    if radii.len() < 3 {
        return Err(Error::Domain("beta indicator needs at least three radii".into()));
    }
    if radii.windows(2).any(|w| !(w[0] < w[1])) || !(radii[0] > 0.0 && radii[radii.len() - 1] < 1.0) {
        return Err(Error::Domain("radii must increase within (0, 1)".into()));
    }
    let mut trend = Vec::with_capacity(radii.len());
    for &r in radii {
        let m = ((64.0 / (1.0 - r)).ceil() as usize).min(MAX_ANGULAR_COUNT);
        let values: Vec<Result<f64>> = (0..m)
            .into_par_iter()
            .map(|k| {
                let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
                Ok(disk_weight(z) * f.pre_schwarzian(z)?.norm())
            })
            .collect();
        let mut weighted_max = f64::NEG_INFINITY;
        for v in values {
            weighted_max = weighted_max.max(v?);
        }
        let w = (1.0 - r) * (1.0 + r);
        trend.push(BetaPoint {
            radius: r,
            weighted_max,
            indicator: (weighted_max - 1.0) * (1.0 / w).ln(),
        });
    }
    let value = trend[trend.len() - 3..]
        .iter()
        .map(|p| p.indicator)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BetaIndicator { value, trend })
}
