//! Composite Gauss–Legendre quadrature along straight segments `[0, z]`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::power::PowerSum;

/// Nodes per panel.
pub const GAUSS_NODES: usize = 64;
/// Stop doubling once successive results differ by less than this (relative to `max(1, |I|)`).
pub const QUAD_TOL: f64 = 1e-11;
/// Upper limit on panels along a segment.
pub const MAX_PANELS: usize = 1 << 10;

/// Depth of geometric grading toward an endpoint singularity.
const ENDPOINT_GRADING: u32 = 30;

/// Gauss–Legendre rule on `[-1, 1]`: `(nodes, weights)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn default_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GAUSS_NODES))
}

/// Where the integrand may be singular, for mesh grading.
#[derive(Debug, Clone, Default)]
pub struct SingularityInfo {
    /// Singular points with the integrand's local exponent there.
    pub points: Vec<(Complex64, f64)>,
    /// Distance to the nearest singularity when the points are unknown.
    pub fallback_distance: Option<f64>,
}

impl SingularityInfo {
    pub fn from_sum(sum: &PowerSum) -> Self {
        Self {
            points: sum.singularities(),
            fallback_distance: None,
        }
    }

    pub fn unknown_beyond_unit_circle(z: Complex64) -> Self {
        Self {
            points: Vec::new(),
            fallback_distance: Some((1.0 - z.norm()).max(0.0)),
        }
    }
}

/// A panel `[s0, s1]` in the segment parameter, optionally mapped by
/// `s = 1 - delta * u^m` to absorb an endpoint power singularity.
#[derive(Debug, Clone, Copy)]
enum Panel {
    Plain(f64, f64),
    Endpoint { delta: f64, power: f64 },
}

fn integrate_panel<F: Fn(Complex64, f64) -> Complex64>(
    f: &F,
    z: Complex64,
    panel: Panel,
    pieces: usize,
) -> Complex64 {
    let (nodes, weights) = default_rule();
    let mut acc = Complex64::new(0.0, 0.0);
    match panel {
        Panel::Plain(s0, s1) => {
            let h = (s1 - s0) / pieces as f64;
            for p in 0..pieces {
                let a = s0 + h * p as f64;
                let half = 0.5 * h;
                let mid = a + half;
                let mut part = Complex64::new(0.0, 0.0);
                for (x, w) in nodes.iter().zip(weights) {
                    let s = mid + half * x;
                    part += f(z * s, 1.0 - s) * *w;
                }
                acc += part * half;
            }
        }
        Panel::Endpoint { delta, power } => {
            // s = 1 - delta u^power, ds = -delta power u^{power-1} du, u in [0, 1]
            let h = 1.0 / pieces as f64;
            for p in 0..pieces {
                let a = h * p as f64;
                let half = 0.5 * h;
                let mid = a + half;
                let mut part = Complex64::new(0.0, 0.0);
                for (x, w) in nodes.iter().zip(weights) {
                    let u: f64 = mid + half * x;
                    let sigma = delta * u.powf(power);
                    let jac = delta * power * u.powf(power - 1.0);
                    part += f(z * (1.0 - sigma), sigma) * (*w * jac);
                }
                acc += part * half;
            }
        }
    }
    acc * z
}

/// `∫_0^z f(t) dt` along the straight segment.
///
/// The integrand receives `t = z (1 - σ)` together with `σ`, the remaining
/// fraction of the segment, which is exact near the endpoint.
///
/// The mesh is graded geometrically toward `z` when a singularity lies close
/// to it; an endpoint singularity with exponent `e` in `(-1, 0)` is removed by
/// the substitution `σ = δ u^{1/(e+1)}` on the last panel. Each panel carries
/// a 64-point rule; panels are doubled until successive results agree.
pub fn integrate_segment<F>(f: F, z: Complex64, sing: &SingularityInfo) -> Result<Complex64>
where
    F: Fn(Complex64, f64) -> Complex64,
{
    let Some(panels) = segment_panels(z, sing)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let eval = |pieces: usize| -> Complex64 {
        panels
            .iter()
            .map(|&p| integrate_panel(&f, z, p, pieces))
            .sum()
    };
    let mut pieces = 1;
    let mut prev = eval(pieces);
    loop {
        pieces *= 2;
        let next = eval(pieces);
        let converged = (next - prev).norm() < QUAD_TOL * next.norm().max(1.0);
        prev = next;
        if converged || pieces * panels.len() >= MAX_PANELS {
            break;
        }
    }
    Ok(prev)
}

/// [`integrate_segment`] on its graded mesh with every panel split into
/// `pieces` equal parts, without the convergence loop.
pub fn integrate_segment_fixed<F>(f: F, z: Complex64, sing: &SingularityInfo, pieces: usize) -> Result<Complex64>
where
    F: Fn(Complex64, f64) -> Complex64,
{
    let Some(panels) = segment_panels(z, sing)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    Ok(panels
        .iter()
        .map(|&p| integrate_panel(&f, z, p, pieces.max(1)))
        .sum())
}

fn segment_panels(z: Complex64, sing: &SingularityInfo) -> Result<Option<Vec<Panel>>> {
    let zmod = z.norm();
    if zmod == 0.0 {
        return Ok(None);
    }
    let mut dist = sing.fallback_distance.unwrap_or(f64::INFINITY);
    let mut endpoint_exponent: Option<f64> = None;
    for &(p, e) in &sing.points {
        let d = (p - z).norm();
        if d <= 1e-14 * (1.0 + zmod) {
            if e <= -1.0 {
                return Err(Error::Divergent(format!(
                    "integrand behaves like (t - {p})^{e} at the endpoint"
                )));
            }
            endpoint_exponent = Some(endpoint_exponent.map_or(e, |x: f64| x.min(e)));
            dist = 0.0;
        } else {
            dist = dist.min(d);
        }
    }

    let mut panels = Vec::new();
    let levels = if endpoint_exponent.is_some() {
        ENDPOINT_GRADING
    } else if dist < 0.5 * zmod {
        ((zmod / dist).log2().ceil() as u32).min(52)
    } else {
        0
    };
    let mut s0 = 0.0;
    for j in 1..=levels {
        let s1 = 1.0 - 0.5f64.powi(j as i32);
        panels.push(Panel::Plain(s0, s1));
        s0 = s1;
    }
    match endpoint_exponent {
        Some(e) => {
            let power = if e < 0.0 { 1.0 / (e + 1.0) } else { 1.0 };
            panels.push(Panel::Endpoint {
                delta: 1.0 - s0,
                power,
            });
        }
        None => panels.push(Panel::Plain(s0, 1.0)),
    }
    Ok(Some(panels))
}

/// `H_{a,b}(z) = ∫_0^z (1+t)^a (1-t)^{-b} dt` for `|z| <= 1`.
///
/// At `z = -1` convergence requires `a > -1`; at `z = 1` it requires `b < 1`.
pub fn path_integral_primitive(a: f64, b: f64, z: Complex64) -> Result<Complex64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::ParameterDomain(format!("non-finite exponents a={a}, b={b}")));
    }
    if !(z.norm() <= 1.0 + 1e-12) {
        return Err(Error::OutsideDisk { z });
    }
    let weight = PowerSum::jacobi_weight(a, b);
    let sing = SingularityInfo::from_sum(&weight);
    integrate_segment(|_, sigma| weight.eval_on_segment(z, sigma), z, &sing).map_err(|e| match e {
        Error::Divergent(_) => Error::Divergent(format!(
            "H_(a={a}, b={b}) diverges at z = {z}"
        )),
        other => other,
    })
}

/// Real-argument convenience wrapper of [`path_integral_primitive`].
pub fn primitive_real(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(path_integral_primitive(a, b, Complex64::new(x, 0.0))?.re)
}

/// `H'_{a,b}(x) = (1+x)^a (1-x)^{-b}` on `(-1, 1)`.
pub fn weight_real(a: f64, b: f64, x: f64) -> f64 {
    (1.0 + x).powf(a) * (1.0 - x).powf(-b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(64);
        let sum_w: f64 = w.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        let m126: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(126)).sum();
        assert!((m126 - 2.0 / 127.0).abs() < 1e-13);
        let (x5, w5) = gauss_legendre(5);
        let m8: f64 = x5.iter().zip(&w5).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn primitive_at_origin_is_zero() {
        assert_eq!(path_integral_primitive(1.3, -0.4, c(0.0)).unwrap(), c(0.0));
    }

    #[test]
    fn log_closed_form() {
        for k in 0..=9 {
            let x = 0.1 * k as f64;
            let v = primitive_real(0.0, 1.0, x).unwrap();
            assert!((v + (1.0 - x).ln()).abs() < 1e-10, "x={x}: {v}");
        }
    }

    #[test]
    fn improper_value_at_minus_one() {
        // ∫_0^{-1} (1+t)/(1-t) dt = 1 - 2 ln 2
        let v = primitive_real(1.0, 1.0, -1.0).unwrap();
        assert!((v - (1.0 - 2.0 * 2f64.ln())).abs() < 1e-12);
        assert!((v + 0.3862944).abs() < 1e-7);
    }

    #[test]
    fn endpoint_singularities_with_negative_exponents() {
        // ∫_0^{-1} (1+t)^{-1/2} dt = -2
        let v = primitive_real(-0.5, 0.0, -1.0).unwrap();
        assert!((v + 2.0).abs() < 1e-10, "{v}");
        // ∫_0^{-1} (1+t)^{-0.9} dt = -10
        let v = primitive_real(-0.9, 0.0, -1.0).unwrap();
        assert!((v + 10.0).abs() < 1e-8, "{v}");
        // ∫_0^{1} (1-t)^{-0.75} dt = 4
        let v = primitive_real(0.0, 0.75, 1.0).unwrap();
        assert!((v - 4.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn divergent_endpoints_rejected() {
        assert!(matches!(path_integral_primitive(-1.0, 0.0, c(-1.0)), Err(Error::Divergent(_))));
        assert!(matches!(path_integral_primitive(0.0, 1.0, c(1.0)), Err(Error::Divergent(_))));
        assert!(path_integral_primitive(0.0, 0.0, c(1.5)).is_err());
    }

    #[test]
    fn symmetry_identity() {
        let pts = [
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.8, 0.1),
            Complex64::new(0.95, -0.2),
            Complex64::new(0.0, -0.99),
        ];
        for &(a, b) in &[(0.5, 1.5), (-1.2, 2.0), (2.0, -0.3), (3.0, 3.0)] {
            for &z in &pts {
                let lhs = path_integral_primitive(a, b, z).unwrap();
                let rhs = -path_integral_primitive(-b, -a, -z).unwrap();
                assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()), "{a} {b} {z}");
            }
        }
    }

    #[test]
    fn interior_near_boundary_uses_grading() {
        // H_{0,2}(x) = x/(1-x)
        let x = 1.0 - 1e-6;
        let v = primitive_real(0.0, 2.0, x).unwrap();
        let exact = x / (1.0 - x);
        assert!(((v - exact) / exact).abs() < 1e-10, "{v} vs {exact}");
    }
}
