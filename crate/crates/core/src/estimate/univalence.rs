use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rstar::primitives::GeomWithData;
use rstar::RTree;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::sup::{pre_schwarzian_norm, NormEstimate, SamplingPlan};
use crate::harmonic::HarmonicMap;
use crate::hypgeo::{hyperbolic_disk_to_euclidean, hyperbolic_distance, uniform_radius_lower_bound, DiskPoint, ExtendedReal, HyperbolicDisk};
use crate::numeric::{atanh_clamped, kronecker_2d};

/// Minimum hyperbolic separation of a collision pair.
pub const SEPARATION_FLOOR: f64 = 1e-3;
/// Collision ceiling relative to the local scale `|h'| + |g'|`.
pub const COLLISION_CEILING: f64 = 1e-10;
/// Euclidean radius used for the whole disk.
pub const WHOLE_DISK_RADIUS: f64 = 1.0 - 1.0 / (1u64 << 20) as f64;
/// Offset of the low-discrepancy sample sequence.
pub const SEQUENCE_OFFSET: f64 = 0.5;

const MAX_NEWTON_ATTEMPTS: usize = 256;
const NEWTON_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnivalenceVerdict {
    Refuted,
    NoCollisionFound,
}

/// Two separated points with (numerically) equal images.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub z1: DiskPoint,
    pub z2: DiskPoint,
    pub image_distance: f64,
    pub preimage_distance: f64,
    pub hyperbolic_distance: f64,
    pub local_scale: f64,
}

/// `Refuted` is conclusive up to rounding; `NoCollisionFound` is not a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceEvidence {
    pub verdict: UnivalenceVerdict,
    pub witness: Option<CollisionWitness>,
    pub samples_used: usize,
}

struct Sample {
    z: Complex64,
    w: Complex64,
    scale: f64,
}

fn region_samples(region: &HyperbolicDisk, n: usize) -> Result<Vec<Complex64>> {
    let a = region.center.value();
    let (center, radius, rho) = match region.radius {
        ExtendedReal::Infinite => (a, WHOLE_DISK_RADIUS, 2.0 * atanh_clamped(WHOLE_DISK_RADIUS)),
        ExtendedReal::Finite(rho) => {
            let (c, r) = hyperbolic_disk_to_euclidean(region)?;
            if !(c.norm() + r < 1.0) {
                return Err(Error::RegionOutsideDisk(region.to_string()));
            }
            (c, r, rho)
        }
    };
    let whole = region.radius.is_infinite();
    Ok((0..n)
        .map(|i| {
            let (u, v) = kronecker_2d(i, SEQUENCE_OFFSET);
            let dir = Complex64::from_polar(1.0, TAU * v);
            if i % 2 == 0 {
                // Euclidean-uniform in the image disk
                let base = if whole { Complex64::new(0.0, 0.0) } else { center };
                base + dir * (radius * u.sqrt())
            } else {
                // uniform in hyperbolic radius about the hyperbolic centre
                let s = (0.5 * u * rho).tanh();
                let w = dir * s;
                if whole {
                    w
                } else {
                    (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w)
                }
            }
        })
        .filter(|z| z.norm() < 1.0)
        .collect())
}

/// Solves `f(z) = target` from `z0` by damped Newton on the real 2x2 system.
fn newton_collision(f: &HarmonicMap, target: Complex64, z0: Complex64, tol: f64) -> Option<(Complex64, f64)> {
    let mut z = z0;
    let mut res = f.value(z).ok()? - target;
    for _ in 0..NEWTON_ITERATIONS {
        if res.norm() <= tol {
            return Some((z, res.norm()));
        }
        let jet = f.jet(z).ok()?;
        let (h1, g1) = (jet.h[0], jet.g[0]);
        // df = A dx + B dy
        let a = h1 + g1.conj();
        let b = Complex64::new(0.0, 1.0) * (h1 - g1.conj());
        let det = a.re * b.im - b.re * a.im;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (-res.re * b.im + b.re * res.im) / det;
        let dy = (-a.re * res.im + a.im * res.re) / det;
        let mut step = Complex64::new(dx, dy);
        let mut accepted = false;
        for _ in 0..30 {
            let cand = z + step;
            if cand.norm() < 1.0 {
                if let Ok(v) = f.value(cand) {
                    let r = v - target;
                    if r.norm() < res.norm() {
                        z = cand;
                        res = r;
                        accepted = true;
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (res.norm() <= tol).then(|| (z, res.norm()))
}

/// Searches for two points of `region` at hyperbolic distance at least
/// [`SEPARATION_FLOOR`] whose images agree to within
/// [`COLLISION_CEILING`] times the local derivative scale.
///
/// Samples come from a fixed low-discrepancy sequence; pairs whose images are
/// close relative to the sample spacing seed a Newton solve of
/// `f(z2) = f(z1)`.
pub fn univalence_falsify(f: &HarmonicMap, region: &HyperbolicDisk, n: usize) -> Result<UnivalenceEvidence> {
    let points = region_samples(region, n)?;
    let evaluated: Vec<Result<Sample>> = points
        .par_iter()
        .map(|&z| {
            let jet = f.jet(z)?;
            Ok(Sample {
                z,
                w: f.value(z)?,
                scale: jet.h[0].norm() + jet.g[0].norm(),
            })
        })
        .collect();
    let samples: Vec<Sample> = evaluated.into_iter().collect::<Result<_>>()?;
    let used = samples.len();
    let no_collision = UnivalenceEvidence {
        verdict: UnivalenceVerdict::NoCollisionFound,
        witness: None,
        samples_used: used,
    };
    if used < 2 {
        return Ok(no_collision);
    }

    let extent = match region.radius {
        ExtendedReal::Infinite => WHOLE_DISK_RADIUS,
        ExtendedReal::Finite(_) => hyperbolic_disk_to_euclidean(region)?.1,
    };
    let spacing = extent * (std::f64::consts::PI / used as f64).sqrt();
    let tree = RTree::bulk_load(
        samples
            .iter()
            .enumerate()
            .map(|(i, s)| GeomWithData::new([s.w.re, s.w.im], i))
            .collect(),
    );

    let mut candidates: Vec<(f64, usize, usize)> = samples
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, s)| {
            let reach = 3.0 * s.scale * spacing;
            tree.locate_within_distance([s.w.re, s.w.im], reach * reach)
                .filter_map(|other| {
                    let j = other.data;
                    let t = &samples[j];
                    if j == i || (t.z - s.z).norm() <= 4.0 * spacing {
                        return None;
                    }
                    Some(((t.w - s.w).norm() / s.scale.max(t.scale), i, j))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    candidates.truncate(MAX_NEWTON_ATTEMPTS);

    let attempts: Vec<Option<CollisionWitness>> = candidates
        .par_iter()
        .map(|&(_, i, j)| {
            let (s, t) = (&samples[i], &samples[j]);
            let tol = COLLISION_CEILING * s.scale;
            let (z2, res) = newton_collision(f, s.w, t.z, tol)?;
            let p2 = DiskPoint::new(z2).ok()?;
            if !region.contains(p2) {
                return None;
            }
            let p1 = DiskPoint::new(s.z).ok()?;
            let d = hyperbolic_distance(p1, p2);
            (d >= SEPARATION_FLOOR).then_some(CollisionWitness {
                z1: p1,
                z2: p2,
                image_distance: res,
                preimage_distance: (z2 - s.z).norm(),
                hyperbolic_distance: d,
                local_scale: s.scale,
            })
        })
        .collect();
    Ok(match attempts.into_iter().flatten().next() {
        Some(w) => UnivalenceEvidence {
            verdict: UnivalenceVerdict::Refuted,
            witness: Some(w),
            samples_used: used,
        },
        None => no_collision,
    })
}

/// Guaranteed-radius formula at the estimated norm, plus falsification evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusBounds {
    /// Estimated `‖P_f‖` (a lower bound of the true norm).
    pub norm: NormEstimate,
    /// `2 atanh(1/(8(M+1)))` at the estimated norm.
    pub lower: f64,
    /// Always set: the formula was evaluated at a norm lower bound, so
    /// `lower` may exceed the true guaranteed radius.
    pub lower_uses_norm_lower_bound: bool,
    /// Smallest scanned radius at which a collision was found.
    pub upper_evidence: Option<f64>,
    pub witness: Option<CollisionWitness>,
    pub radii_scanned: Vec<f64>,
}

/// Hyperbolic radii scanned for collisions: `2^{k/2} / 8`, `k = 0..=14`.
pub fn default_radius_scan() -> Vec<f64> {
    (0..=14).map(|k| 0.125 * 2f64.powf(0.5 * k as f64)).collect()
}

pub fn uniform_radius_bounds(f: &HarmonicMap, plan: &SamplingPlan, samples: usize) -> Result<RadiusBounds> {
    uniform_radius_bounds_with(f, plan, samples, &default_radius_scan())
}

/// Scans `radii` in increasing order with centres `0` and the norm argmax.
pub fn uniform_radius_bounds_with(
    f: &HarmonicMap,
    plan: &SamplingPlan,
    samples: usize,
    radii: &[f64],
) -> Result<RadiusBounds> {
    let norm = pre_schwarzian_norm(f, plan)?;
    let lower = uniform_radius_lower_bound(norm.lower_bound)?;
    let mut centers = vec![DiskPoint::origin()];
    if norm.argmax != DiskPoint::origin() {
        centers.push(norm.argmax);
    }
    let mut scanned = Vec::new();
    for &rho in radii {
        scanned.push(rho);
        for &c in &centers {
            let region = HyperbolicDisk::new(c, rho)?;
            let ev = univalence_falsify(f, &region, samples)?;
            if ev.verdict == UnivalenceVerdict::Refuted {
                return Ok(RadiusBounds {
                    norm,
                    lower,
                    lower_uses_norm_lower_bound: true,
                    upper_evidence: Some(rho),
                    witness: ev.witness,
                    radii_scanned: scanned,
                });
            }
        }
    }
    Ok(RadiusBounds {
        norm,
        lower,
        lower_uses_norm_lower_bound: true,
        upper_evidence: None,
        witness: None,
        radii_scanned: scanned,
    })
}
