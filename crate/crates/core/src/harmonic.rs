//! Harmonic maps `f = h + conj(g)` and their differential operators.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{sup_norm_estimate, NormEstimate, SamplingPlan};
use crate::numeric::disk_weight;
use crate::series::{AnalyticFunction, PowerSum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this `|h'|` the quotient `h''/h'` is not meaningful.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// `A(w) = a w + conj(b w) + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl AffineMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if !(a.norm() > b.norm()) {
            return Err(Error::InvalidAffine {
                a_mod: a.norm(),
                b_mod: b.norm(),
            });
        }
        Ok(Self { a, b, c })
    }

    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
        }
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        self.a * w + (self.b * w).conj() + self.c
    }
}

/// `h', h'', h'''` and `g', g'', g'''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub z: Complex64,
    pub h: [Complex64; 3],
    pub g: [Complex64; 3],
    /// `g''h' - g'h''` and `(g'''h' - g'h''')h' - 2(g''h' - g'h'')h''` when
    /// available in cancellation-free closed form.
    pub dilatation_numerators: Option<[Complex64; 2]>,
}

impl Jet {
    pub fn dilatation(&self) -> Result<Complex64> {
        let m = self.h[0].norm();
        if !(m >= DEGENERACY_THRESHOLD) {
            return Err(Error::Degenerate { z: self.z, modulus: m });
        }
        let w = self.g[0] / self.h[0];
        if !(w.norm() < 1.0) {
            return Err(Error::SenseViolation {
                z: self.z,
                detail: format!("|dilatation| = {}", w.norm()),
            });
        }
        Ok(w)
    }

    /// `ω' = (g''h' - g'h'')/h'^2`.
    fn dilatation_derivative(&self) -> Complex64 {
        if let Some([n1, _]) = self.dilatation_numerators {
            return n1 / (self.h[0] * self.h[0]);
        }
        let [h1, h2, _] = self.h;
        let [g1, g2, _] = self.g;
        (g2 * h1 - g1 * h2) / (h1 * h1)
    }

    /// `ω'' = (g'''h' - g'h''')/h'^2 - 2(g''h' - g'h'')h''/h'^3`.
    fn dilatation_second_derivative(&self) -> Complex64 {
        if let Some([_, n2]) = self.dilatation_numerators {
            let h1 = self.h[0];
            return n2 / (h1 * h1 * h1);
        }
        let [h1, h2, h3] = self.h;
        let [g1, g2, g3] = self.g;
        let h1sq = h1 * h1;
        (g3 * h1 - g1 * h3) / h1sq - (g2 * h1 - g1 * h2) * h2 * 2.0 / (h1sq * h1)
    }

    pub fn jacobian(&self) -> Result<f64> {
        let j = self.h[0].norm_sqr() - self.g[0].norm_sqr();
        if !(j > 0.0) {
            return Err(Error::SenseViolation {
                z: self.z,
                detail: format!("Jacobian {j}"),
            });
        }
        Ok(j)
    }

    pub fn pre_schwarzian(&self) -> Result<Complex64> {
        let w = self.dilatation()?;
        let pre_h = self.h[1] / self.h[0];
        if self.g.iter().all(|c| *c == ZERO) {
            return Ok(pre_h);
        }
        let wm = w.norm();
        let dw = self.dilatation_derivative();
        Ok(pre_h - w.conj() * dw / ((1.0 - wm) * (1.0 + wm)))
    }

    pub fn schwarzian(&self) -> Result<Complex64> {
        let w = self.dilatation()?;
        let [h1, h2, h3] = self.h;
        let q = h2 / h1;
        let s_h = h3 / h1 - 1.5 * q * q;
        if self.g.iter().all(|c| *c == ZERO) {
            return Ok(s_h);
        }
        let wm = w.norm();
        let denom = (1.0 - wm) * (1.0 + wm);
        let dw = self.dilatation_derivative();
        let d2w = self.dilatation_second_derivative();
        let t = w.conj() * dw / denom;
        Ok(s_h + w.conj() / denom * (q * dw - d2w) - 1.5 * t * t)
    }
}

/// A harmonic map `f = h + conj(g)` in canonical form `g(0) = 0`.
#[derive(Debug, Clone)]
pub struct HarmonicMap {
    h: AnalyticFunction,
    g: AnalyticFunction,
    label: String,
    numerators: Option<Arc<[PowerSum; 2]>>,
}

/// Expanded numerators of `ω'` and `ω''` for closed-form parts, so that
/// cancelling terms cancel exactly instead of in floating point.
fn dilatation_numerators(h: &AnalyticFunction, g: &AnalyticFunction) -> Option<Arc<[PowerSum; 2]>> {
    let (h, g) = (h.as_closed_form()?, g.as_closed_form()?);
    if g.derivative_sum(1).is_zero() {
        return None;
    }
    let [h1, h2, h3] = [1, 2, 3].map(|k| h.derivative_sum(k));
    let [g1, g2, g3] = [1, 2, 3].map(|k| g.derivative_sum(k));
    let n1 = g2.multiply(h1).add(&g1.multiply(h2).scale(-ONE));
    let n2 = g3
        .multiply(h1)
        .add(&g1.multiply(h3).scale(-ONE))
        .multiply(h1)
        .add(&n1.multiply(h2).scale(Complex64::new(-2.0, 0.0)));
    Some(Arc::new([n1, n2]))
}

impl HarmonicMap {
    /// Builds `h + conj(g)`, moving `conj(g(0))` into `h` so that `g(0) = 0`.
    pub fn new(h: AnalyticFunction, g: AnalyticFunction) -> Result<Self> {
        let g0 = g.value(ZERO)?;
        let (h, g) = if g0 == ZERO {
            (h, g)
        } else {
            (h.add_constant(g0.conj())?, g.add_constant(-g0)?)
        };
        let label = format!("{} + conj({})", h.label(), g.label());
        let numerators = dilatation_numerators(&h, &g);
        Ok(Self { h, g, label, numerators })
    }

    /// The analytic map `h` (with `g ≡ 0`).
    pub fn analytic(h: AnalyticFunction) -> Self {
        let label = h.label();
        Self {
            h,
            g: AnalyticFunction::zero(),
            label,
            numerators: None,
        }
    }

    pub fn identity() -> Self {
        Self::analytic(AnalyticFunction::identity()).with_label("identity")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn analytic_part(&self) -> &AnalyticFunction {
        &self.h
    }

    pub fn co_analytic_part(&self) -> &AnalyticFunction {
        &self.g
    }

    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        Ok(Jet {
            z,
            h: self.h.derivatives(z)?,
            g: self.g.derivatives(z)?,
            dilatation_numerators: self.numerators.as_ref().map(|n| [n[0].eval(z), n[1].eval(z)]),
        })
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.value(z)? + self.g.value(z)?.conj())
    }

    /// `ω = g'/h'`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z)?.dilatation()
    }

    /// `J = |h'|^2 - |g'|^2`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        self.jet(z)?.jacobian()
    }

    /// `P_f = h''/h' - conj(ω) ω' / (1 - |ω|^2)`.
    pub fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z)?.pre_schwarzian()
    }

    pub fn schwarzian(&self, z: Complex64) -> Result<Complex64> {
        self.jet(z)?.schwarzian()
    }

    /// `A ∘ f`, with analytic part `a h + conj(b) g + c` and co-analytic part
    /// `b h + conj(a) g`.
    pub fn affine_compose(&self, map: &AffineMap) -> Result<Self> {
        let map = AffineMap::new(map.a, map.b, map.c)?;
        let h = AnalyticFunction::linear_combination(&[(map.a, &self.h), (map.b.conj(), &self.g)], map.c)?;
        let g = AnalyticFunction::linear_combination(&[(map.b, &self.h), (map.a.conj(), &self.g)], ZERO)?;
        Ok(Self::new(h, g)?.with_label(format!("A∘({})", self.label)))
    }

    /// The analytic function `h + ε g`.
    pub fn epsilon_shear(&self, eps: Complex64) -> Result<AnalyticFunction> {
        AnalyticFunction::linear_combination(&[(ONE, &self.h), (eps, &self.g)], ZERO)
    }

    /// `h + ε conj(g)`, whose dilatation is `conj(ε) ω`.
    pub fn epsilon_conjugate(&self, eps: Complex64) -> Result<Self> {
        let g = self.g.scale(eps.conj())?;
        let numerators = dilatation_numerators(&self.h, &g);
        Ok(Self {
            h: self.h.clone(),
            g,
            label: format!("{} [eps={eps}]", self.label),
            numerators,
        })
    }

    /// The affine image with `h(0) = 0`, `h'(0) = 1`, `g'(0) = 0`.
    pub fn normalized(&self) -> Result<Self> {
        let jet = self.jet(ZERO)?;
        let (a, b) = (jet.h[0], jet.g[0]);
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det > 0.0) {
            return Err(Error::SenseViolation {
                z: ZERO,
                detail: "|h'(0)| <= |g'(0)|".into(),
            });
        }
        let alpha = a.conj() / det;
        let beta = -b / det;
        let h0 = self.h.value(ZERO)?;
        let c = -(alpha * h0) - (beta * h0).conj();
        Ok(self
            .affine_compose(&AffineMap::new(alpha, beta, c)?)?
            .with_label(format!("normalized({})", self.label)))
    }

    /// Lower bound of `sup |ω'|(1-|z|^2)/(1-|ω|^2)`.
    pub fn hyperbolic_norm_of_dilatation(&self, plan: &SamplingPlan) -> Result<NormEstimate> {
        sup_norm_estimate(
            |z| {
                let jet = self.jet(z)?;
                let w = jet.dilatation()?;
                let wm = w.norm();
                Ok(jet.dilatation_derivative().norm() * disk_weight(z) / ((1.0 - wm) * (1.0 + wm)))
            },
            plan,
        )
    }

    /// `sup_θ ‖P_{h + e^{iθ} g}‖` over an `n_theta` grid, refined by golden
    /// section around the best grid angle.
    pub fn t_norm(&self, plan: &SamplingPlan, n_theta: usize) -> Result<ThetaSweep> {
        let n_theta = n_theta.max(1);
        let eval = |theta: f64| -> Result<NormEstimate> {
            let f = self.epsilon_shear(Complex64::from_polar(1.0, theta))?;
            crate::estimate::pre_schwarzian_norm(&HarmonicMap::analytic(f), plan)
        };
        let step = std::f64::consts::TAU / n_theta as f64;
        let mut samples = Vec::with_capacity(n_theta + 16);
        let mut best: Option<(f64, NormEstimate)> = None;
        for k in 0..n_theta {
            let theta = step * k as f64;
            let est = eval(theta)?;
            samples.push((theta, est.lower_bound));
            if best.as_ref().map_or(true, |(_, b)| est.lower_bound > b.lower_bound) {
                best = Some((theta, est));
            }
        }
        let (mut theta_best, mut est_best) = best.expect("n_theta >= 1");
        if n_theta > 1 {
            let golden = 0.5 * (5f64.sqrt() - 1.0);
            let (mut lo, mut hi) = (theta_best - step, theta_best + step);
            for _ in 0..12 {
                let x1 = hi - golden * (hi - lo);
                let x2 = lo + golden * (hi - lo);
                let e1 = eval(x1)?;
                let e2 = eval(x2)?;
                samples.push((x1, e1.lower_bound));
                samples.push((x2, e2.lower_bound));
                if e1.lower_bound >= e2.lower_bound {
                    hi = x2;
                    if e1.lower_bound > est_best.lower_bound {
                        theta_best = x1;
                        est_best = e1;
                    }
                } else {
                    lo = x1;
                    if e2.lower_bound > est_best.lower_bound {
                        theta_best = x2;
                        est_best = e2;
                    }
                }
            }
        }
        Ok(ThetaSweep {
            theta: theta_best.rem_euclid(std::f64::consts::TAU),
            estimate: est_best,
            samples,
        })
    }
}

/// Result of [`HarmonicMap::t_norm`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaSweep {
    /// Maximizing rotation of the co-analytic part.
    pub theta: f64,
    pub estimate: NormEstimate,
    /// `(θ, ‖P_{h+e^{iθ}g}‖)` for every evaluated angle.
    pub samples: Vec<(f64, f64)>,
}
