use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::hypgeo::DiskPoint;
use crate::numeric::disk_weight;

/// Largest ring index of the default schedule `r_k = 1 - 2^{-k}`.
pub const DEFAULT_MAX_RING: usize = 20;
/// Cap on points per ring.
pub const MAX_ANGULAR_COUNT: usize = 1 << 16;
/// Grid maxima per ring that seed local refinement.
pub const REFINE_STARTS_PER_RING: usize = 8;

/// Rings of equispaced points plus local-refinement settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    pub ring_radii: Vec<f64>,
    pub angular_counts: Vec<usize>,
    pub refine_tol: f64,
    pub refine_max_iter: usize,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self::geometric(DEFAULT_MAX_RING)
    }
}

impl SamplingPlan {
    pub fn new(
        ring_radii: Vec<f64>,
        angular_counts: Vec<usize>,
        refine_tol: f64,
        refine_max_iter: usize,
    ) -> Result<Self> {
        let plan = Self {
            ring_radii,
            angular_counts,
            refine_tol,
            refine_max_iter,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// `r_k = 1 - 2^{-k}` for `k = 0..=k_max` with `ceil(64/(1-r_k))` points
    /// per ring, capped at `2^16`.
    pub fn geometric(k_max: usize) -> Self {
        Self::geometric_with_density(k_max, 64, MAX_ANGULAR_COUNT)
    }

    /// [`SamplingPlan::geometric`] with a custom density and cap.
    pub fn geometric_with_density(k_max: usize, base: usize, cap: usize) -> Self {
        let ring_radii: Vec<f64> = (0..=k_max).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect();
        let angular_counts = ring_radii
            .iter()
            .map(|r| {
                let n = (base as f64 / (1.0 - r)).ceil() as usize;
                n.clamp(8, cap.max(8))
            })
            .collect();
        Self {
            ring_radii,
            angular_counts,
            refine_tol: 1e-9,
            refine_max_iter: 200,
        }
    }

    pub fn with_refinement(mut self, tol: f64, max_iter: usize) -> Self {
        self.refine_tol = tol;
        self.refine_max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ring_radii.is_empty() || self.ring_radii.len() != self.angular_counts.len() {
            return Err(Error::Domain(
                "plan needs one angular count per ring and at least one ring".into(),
            ));
        }
        for w in self.ring_radii.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Domain("ring radii must be strictly increasing".into()));
            }
        }
        let (first, last) = (self.ring_radii[0], *self.ring_radii.last().unwrap());
        if !(first >= 0.0 && last < 1.0) {
            return Err(Error::Domain("ring radii must lie in [0, 1)".into()));
        }
        if let Some(m) = self.angular_counts.iter().find(|&&m| m < 8) {
            return Err(Error::Domain(format!("angular count {m} is below 8")));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::Domain("refine_tol must be positive".into()));
        }
        Ok(())
    }

    pub fn max_radius(&self) -> f64 {
        *self.ring_radii.last().unwrap_or(&0.0)
    }

    /// Number of grid evaluations (a ring of radius 0 counts once).
    pub fn grid_size(&self) -> usize {
        self.ring_radii
            .iter()
            .zip(&self.angular_counts)
            .map(|(&r, &m)| if r == 0.0 { 1 } else { m })
            .sum()
    }
}

/// Maximum found on one ring of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingMaximum {
    pub radius: f64,
    pub theta: f64,
    pub value: f64,
}

/// A lower bound of `sup_z q(z)` with the evidence that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower_bound: f64,
    pub argmax: DiskPoint,
    pub plan_used: SamplingPlan,
    pub refined: bool,
    /// Running maximum after each ring, then after refinement.
    pub history: Vec<f64>,
    pub ring_maxima: Vec<RingMaximum>,
    pub evaluations: usize,
    /// Points skipped because `|h'|` fell below the degeneracy threshold.
    #[serde(default)]
    pub skipped_degenerate: usize,
}

/// `None` at a degenerate point, an error for any other failure.
fn checked<Q>(q: &Q, z: Complex64) -> Result<Option<f64>>
where
    Q: Fn(Complex64) -> Result<f64>,
{
    let v = match q(z) {
        Ok(v) => v,
        Err(Error::Degenerate { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if v.is_finite() {
        Ok(Some(v))
    } else {
        Err(Error::NonFinite { z, value: v })
    }
}

fn ring_point(r: f64, k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(r, TAU * k as f64 / m as f64)
}

/// Insert `(v, k)` into a list kept sorted by value (descending), then index.
fn push_top(top: &mut Vec<(f64, usize)>, v: f64, k: usize, cap: usize) {
    let pos = top.partition_point(|&(tv, tk)| tv > v || (tv == v && tk < k));
    if pos < cap {
        top.insert(pos, (v, k));
        top.truncate(cap);
    }
}

struct Refined {
    value: f64,
    z: Complex64,
    evaluations: usize,
}

/// Compass search in the four axis directions, staying in `|z| <= bound`.
fn compass<Q>(q: &Q, z0: Complex64, v0: f64, bound: f64, tol: f64, max_iter: usize) -> Result<Refined>
where
    Q: Fn(Complex64) -> Result<f64>,
{
    let (mut z, mut v) = (z0, v0);
    let mut step = 0.1 * (1.0 - z0.norm());
    let mut evaluations = 0;
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut iter = 0;
    while step >= tol && iter < max_iter {
        iter += 1;
        let mut best: Option<(f64, Complex64)> = None;
        for d in dirs {
            let cand = z + d * step;
            if cand.norm() > bound {
                continue;
            }
            evaluations += 1;
            let Some(cv) = checked(q, cand)? else {
                continue;
            };
            if cv > best.map_or(v, |b| b.0) {
                best = Some((cv, cand));
            }
        }
        match best {
            Some((cv, cz)) => {
                v = cv;
                z = cz;
            }
            None => step *= 0.5,
        }
    }
    Ok(Refined { value: v, z, evaluations })
}

/// Lower bound of `sup_{|z|<1} q(z)`.
///
/// Evaluates `q` on every ring of the plan, then refines from the best
/// [`REFINE_STARTS_PER_RING`] points of each ring by compass search confined
/// to that ring's closed disk. Ties go to the smaller ring index, then the
/// smaller angular index.
pub fn sup_norm_estimate<Q>(q: Q, plan: &SamplingPlan) -> Result<NormEstimate>
where
    Q: Fn(Complex64) -> Result<f64> + Sync,
{
    plan.validate()?;
    let mut best_v = f64::NEG_INFINITY;
    let mut best_z = Complex64::new(0.0, 0.0);
    let mut history = Vec::with_capacity(plan.ring_radii.len() + 1);
    let mut ring_maxima = Vec::with_capacity(plan.ring_radii.len());
    let mut starts: Vec<(f64, Complex64, f64)> = Vec::new();
    let mut evaluations = 0;
    let mut skipped = 0;
    let mut first_degenerate: Option<Complex64> = None;

    for (&r, &m) in plan.ring_radii.iter().zip(&plan.angular_counts) {
        let m = if r == 0.0 { 1 } else { m };
        let values: Vec<Result<Option<f64>>> = (0..m)
            .into_par_iter()
            .map(|k| checked(&q, ring_point(r, k, m)))
            .collect();
        evaluations += m;
        let mut top: Vec<(f64, usize)> = Vec::with_capacity(REFINE_STARTS_PER_RING + 1);
        for (k, v) in values.into_iter().enumerate() {
            match v? {
                Some(v) => push_top(&mut top, v, k, REFINE_STARTS_PER_RING),
                None => {
                    skipped += 1;
                    first_degenerate.get_or_insert(ring_point(r, k, m));
                }
            }
        }
        let Some(&(rv, rk)) = top.first() else {
            history.push(best_v);
            continue;
        };
        ring_maxima.push(RingMaximum {
            radius: r,
            theta: TAU * rk as f64 / m as f64,
            value: rv,
        });
        if rv > best_v {
            best_v = rv;
            best_z = ring_point(r, rk, m);
        }
        history.push(best_v);
        if r > 0.0 {
            starts.extend(top.iter().map(|&(v, k)| (v, ring_point(r, k, m), r)));
        }
    }

    if best_v == f64::NEG_INFINITY {
        let z = first_degenerate.unwrap_or_default();
        return Err(Error::Degenerate { z, modulus: 0.0 });
    }

    let refined = plan.refine_max_iter > 0 && !starts.is_empty();
    if refined {
        let results: Vec<Result<Refined>> = starts
            .par_iter()
            .map(|&(v, z, bound)| compass(&q, z, v, bound, plan.refine_tol, plan.refine_max_iter))
            .collect();
        for res in results {
            let res = res?;
            evaluations += res.evaluations;
            if res.value > best_v {
                best_v = res.value;
                best_z = res.z;
            }
        }
        history.push(best_v);
    }

    Ok(NormEstimate {
        lower_bound: best_v,
        argmax: DiskPoint::new(best_z)?,
        plan_used: plan.clone(),
        refined,
        history,
        ring_maxima,
        evaluations,
        skipped_degenerate: skipped,
    })
}

/// `(1 - |z|^2) |P_f(z)|`.
pub fn pre_schwarzian_quantity(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    Ok(disk_weight(z) * f.pre_schwarzian(z)?.norm())
}

/// `(1 - |z|^2)^2 |S_f(z)|`.
pub fn schwarzian_quantity(f: &HarmonicMap, z: Complex64) -> Result<f64> {
    let w = disk_weight(z);
    Ok(w * w * f.schwarzian(z)?.norm())
}

/// Lower bound of `‖P_f‖ = sup (1 - |z|^2)|P_f(z)|`.
pub fn pre_schwarzian_norm(f: &HarmonicMap, plan: &SamplingPlan) -> Result<NormEstimate> {
    sup_norm_estimate(|z| pre_schwarzian_quantity(f, z), plan)
}

/// Lower bound of `‖S_f‖ = sup (1 - |z|^2)^2 |S_f(z)|`.
pub fn schwarzian_norm(f: &HarmonicMap, plan: &SamplingPlan) -> Result<NormEstimate> {
    sup_norm_estimate(|z| schwarzian_quantity(f, z), plan)
}
