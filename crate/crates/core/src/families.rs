//! Extremal families with closed-form derivatives and pre-Schwarzian oracles.
//!
//! | tag | map |
//! |-----|-----|
//! | `K` | harmonic Koebe function |
//! | `L` | harmonic half-plane map |
//! | `k` | analytic Koebe function `z/(1-z)^2` |
//! | `l` | analytic half-plane map `(1+z)/(1-z)` |
//! | `H` | `H_{a,b}(z) = ∫_0^z (1+t)^a (1-t)^{-b} dt` |
//! | `F` | `H_{a,b} + conj(G_{a,b,θ})` with dilatation `e^{iθ} z` |
//! | `T` | `t_λ + conj(G)` with `t_λ' = (1-z)^{-(1+λ)/2}`, dilatation `e^{iθ} z` |
//! | `DistortionExtremal` | `F_{(λ-1)/2,(λ+1)/2,0} + b1 conj(F_{(λ-1)/2,(λ+1)/2,0})` |
//!
//! Specs have a flat text form such as `tag=F a=-0.5 b=0.5 theta=0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::{AffineMap, HarmonicMap};
use crate::numeric::disk_weight;
use crate::series::{AnalyticFunction, PowerSum};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum FamilySpec {
    HarmonicKoebe,
    HalfPlane,
    AnalyticKoebe,
    AnalyticHalfPlane,
    Hab { a: f64, b: f64 },
    Fab { a: f64, b: f64, theta: f64 },
    TLambda { lambda: f64, theta: f64 },
    DistortionExtremal { lambda: f64, b1: f64 },
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::HarmonicKoebe => "K",
            Self::HalfPlane => "L",
            Self::AnalyticKoebe => "k",
            Self::AnalyticHalfPlane => "l",
            Self::Hab { .. } => "H",
            Self::Fab { .. } => "F",
            Self::TLambda { .. } => "T",
            Self::DistortionExtremal { .. } => "DistortionExtremal",
        }
    }

    /// `H_{a,a}`.
    pub fn h_a(a: f64) -> Self {
        Self::Hab { a, b: a }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::ParameterDomain(format!("{name} = {v} is not finite")))
            }
        };
        match *self {
            Self::Hab { a, b } => {
                finite("a", a)?;
                finite("b", b)
            }
            Self::Fab { a, b, theta } => {
                finite("a", a)?;
                finite("b", b)?;
                finite("theta", theta)
            }
            Self::TLambda { lambda, theta } => {
                finite("theta", theta)?;
                if !(lambda > 1.0 && lambda.is_finite()) {
                    return Err(Error::ParameterDomain(format!("T requires lambda > 1, got {lambda}")));
                }
                Ok(())
            }
            Self::DistortionExtremal { lambda, b1 } => {
                if !(lambda >= 1.0 && lambda.is_finite()) {
                    return Err(Error::ParameterDomain(format!(
                        "DistortionExtremal requires lambda >= 1, got {lambda}"
                    )));
                }
                if !(0.0..1.0).contains(&b1) {
                    return Err(Error::ParameterDomain(format!(
                        "DistortionExtremal requires 0 <= b1 < 1, got {b1}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Closed-form `‖P_f‖`, or `None` where no exact value is known.
    pub fn exact_norm(&self) -> Option<f64> {
        match *self {
            Self::HarmonicKoebe => Some(7.0),
            Self::HalfPlane => Some(5.0),
            Self::AnalyticKoebe => Some(6.0),
            Self::AnalyticHalfPlane => Some(4.0),
            Self::Hab { a, b } => Some(2.0 * a.abs().max(b.abs())),
            Self::Fab { a, b, .. } if a == b => Some(2.0 * a.abs() + 1.0),
            Self::Fab { a, b, .. } if b == a + 1.0 => {
                if a > -1.0 && a < 0.0 {
                    Some(1.0)
                } else {
                    Some((2.0 * a + 1.0).abs())
                }
            }
            Self::Fab { .. } => None,
            Self::TLambda { lambda, .. } => Some(lambda),
            Self::DistortionExtremal { lambda, .. } => Some(lambda),
        }
    }

    /// Closed-form `P_f(z)`.
    pub fn oracle_pre_schwarzian(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk { z });
        }
        let shear = z.conj() / disk_weight(z);
        let one_minus_sq = ONE - z * z;
        Ok(match *self {
            Self::HarmonicKoebe => (5.0 + 3.0 * z) / one_minus_sq - shear,
            Self::HalfPlane => 3.0 / (ONE - z) - shear,
            Self::AnalyticKoebe => (4.0 + 2.0 * z) / one_minus_sq,
            Self::AnalyticHalfPlane => 2.0 / (ONE - z),
            Self::Hab { a, b } => (a + b + (b - a) * z) / one_minus_sq,
            Self::Fab { a, b, .. } => (a + b + (b - a) * z) / one_minus_sq - shear,
            Self::TLambda { lambda, .. } => 0.5 * (1.0 + lambda) / (ONE - z) - shear,
            Self::DistortionExtremal { .. } => return Err(Error::UnsupportedFamily(self.to_string())),
        })
    }

    pub fn build(&self) -> Result<HarmonicMap> {
        build_family(self)
    }
}

fn one_minus_z(e: f64) -> (Complex64, f64) {
    (-ONE, e)
}

fn hab_derivative(a: f64, b: f64) -> PowerSum {
    PowerSum::jacobi_weight(a, b)
}

/// `z (1+z)^a (1-z)^{-b}` rotated by `e^{iθ}`.
fn g_derivative(a: f64, b: f64, theta: f64) -> PowerSum {
    PowerSum::term(Complex64::from_polar(1.0, theta), 1, &[(ONE, a), (-ONE, -b)])
}

fn f_parts(a: f64, b: f64, theta: f64) -> (AnalyticFunction, AnalyticFunction) {
    (
        AnalyticFunction::from_derivative(format!("H[{a},{b}]"), hab_derivative(a, b), ZERO),
        AnalyticFunction::from_derivative(format!("G[{a},{b},{theta}]"), g_derivative(a, b, theta), ZERO),
    )
}

/// Harmonic map for a family spec, with closed-form backends.
pub fn build_family(spec: &FamilySpec) -> Result<HarmonicMap> {
    spec.validate()?;
    let c = |x: f64| Complex64::new(x, 0.0);
    let map = match *spec {
        FamilySpec::HarmonicKoebe => {
            let w = [one_minus_z(-3.0)];
            let h = PowerSum::term(ONE, 1, &w)
                .add(&PowerSum::term(c(-0.5), 2, &w))
                .add(&PowerSum::term(c(1.0 / 6.0), 3, &w));
            let g = PowerSum::term(c(0.5), 2, &w).add(&PowerSum::term(c(1.0 / 6.0), 3, &w));
            HarmonicMap::new(
                AnalyticFunction::from_primitive("h_K", h),
                AnalyticFunction::from_primitive("g_K", g),
            )?
        }
        FamilySpec::HalfPlane => {
            let w = [one_minus_z(-2.0)];
            let h = PowerSum::term(ONE, 1, &w).add(&PowerSum::term(c(-0.5), 2, &w));
            let g = PowerSum::term(c(-0.5), 2, &w);
            HarmonicMap::new(
                AnalyticFunction::from_primitive("h_L", h),
                AnalyticFunction::from_primitive("g_L", g),
            )?
        }
        FamilySpec::AnalyticKoebe => HarmonicMap::analytic(AnalyticFunction::from_primitive(
            "k",
            PowerSum::term(ONE, 1, &[one_minus_z(-2.0)]),
        )),
        FamilySpec::AnalyticHalfPlane => HarmonicMap::analytic(AnalyticFunction::from_primitive(
            "l",
            PowerSum::term(ONE, 0, &[(ONE, 1.0), one_minus_z(-1.0)]),
        )),
        FamilySpec::Hab { a, b } => HarmonicMap::analytic(AnalyticFunction::from_derivative(
            format!("H[{a},{b}]"),
            hab_derivative(a, b),
            ZERO,
        )),
        FamilySpec::Fab { a, b, theta } => {
            let (h, g) = f_parts(a, b, theta);
            HarmonicMap::new(h, g)?
        }
        FamilySpec::TLambda { lambda, theta } => {
            let e = 0.5 * (1.0 - lambda);
            let t = PowerSum::constant(c(1.0 / e)).add(&PowerSum::term(c(-1.0 / e), 0, &[one_minus_z(e)]));
            let g = PowerSum::term(Complex64::from_polar(1.0, theta), 1, &[one_minus_z(-0.5 * (1.0 + lambda))]);
            HarmonicMap::new(
                AnalyticFunction::from_primitive(format!("t[{lambda}]"), t),
                AnalyticFunction::from_derivative(format!("zt'[{lambda},{theta}]"), g, ZERO),
            )?
        }
        FamilySpec::DistortionExtremal { lambda, b1 } => {
            let (h, g) = f_parts(0.5 * (lambda - 1.0), 0.5 * (lambda + 1.0), 0.0);
            let base = HarmonicMap::new(h, g)?;
            base.affine_compose(&AffineMap::new(ONE, c(b1), ZERO)?)?
        }
    };
    Ok(map.with_label(spec.to_string()))
}

/// Closed-form `P_f` for a family; see [`FamilySpec::oracle_pre_schwarzian`].
pub fn oracle_pre_schwarzian(spec: &FamilySpec, z: Complex64) -> Result<Complex64> {
    spec.oracle_pre_schwarzian(z)
}

/// Paper-exact norm; see [`FamilySpec::exact_norm`].
pub fn exact_norm(spec: &FamilySpec) -> Option<f64> {
    spec.exact_norm()
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tag={}", self.tag())?;
        match *self {
            Self::Hab { a, b } => write!(f, " a={a} b={b}"),
            Self::Fab { a, b, theta } => write!(f, " a={a} b={b} theta={theta}"),
            Self::TLambda { lambda, theta } => write!(f, " lambda={lambda} theta={theta}"),
            Self::DistortionExtremal { lambda, b1 } => write!(f, " lambda={lambda} b1={b1}"),
            _ => Ok(()),
        }
    }
}

fn parse_real(key: &str, v: &str) -> Result<f64> {
    let v = v.trim();
    let lower = v.to_ascii_lowercase();
    let scaled_pi = |s: &str| -> Option<f64> {
        let s = s.trim();
        if s.is_empty() {
            return Some(1.0);
        }
        if s == "-" {
            return Some(-1.0);
        }
        s.trim_end_matches('*').parse::<f64>().ok()
    };
    let parsed = if let Some(rest) = lower.strip_suffix("pi") {
        // "pi", "pi/3", "2pi", "-pi" and "0.5*pi"
        scaled_pi(rest).map(|k| k * std::f64::consts::PI)
    } else if let Some((num, den)) = lower.split_once("pi/") {
        match (scaled_pi(num), den.parse::<f64>().ok()) {
            (Some(k), Some(d)) => Some(k * std::f64::consts::PI / d),
            _ => None,
        }
    } else {
        v.parse::<f64>().ok()
    };
    parsed.ok_or_else(|| Error::Parse(format!("{key}: cannot read '{v}' as a real number")))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tag: Option<String> = None;
        let mut params: Vec<(String, f64)> = Vec::new();
        for (i, tok) in s
            .split(|ch: char| ch.is_whitespace() || ch == ',' || ch == ';')
            .filter(|t| !t.is_empty())
            .enumerate()
        {
            match tok.split_once('=') {
                Some(("tag", v)) => tag = Some(v.to_string()),
                Some((k, v)) => {
                    if params.iter().any(|(p, _)| p == k) {
                        return Err(Error::Parse(format!("duplicate key '{k}'")));
                    }
                    params.push((k.to_string(), parse_real(k, v)?));
                }
                None if i == 0 => tag = Some(tok.to_string()),
                None => return Err(Error::Parse(format!("expected key=value, got '{tok}'"))),
            }
        }
        let tag = tag.ok_or_else(|| Error::Parse("missing family tag".into()))?;
        let mut take = |key: &str, default: Option<f64>| -> Result<f64> {
            match params.iter().position(|(k, _)| k == key) {
                Some(i) => Ok(params.remove(i).1),
                None => default.ok_or_else(|| Error::Parse(format!("family {tag} needs {key}=..."))),
            }
        };
        let spec = match tag.as_str() {
            "K" | "HarmonicKoebe" => Self::HarmonicKoebe,
            "L" | "HalfPlane" => Self::HalfPlane,
            "k" | "AnalyticKoebe" => Self::AnalyticKoebe,
            "l" | "AnalyticHalfPlane" => Self::AnalyticHalfPlane,
            "H" | "H_ab" | "Hab" => {
                let a = take("a", None)?;
                let b = take("b", Some(a))?;
                Self::Hab { a, b }
            }
            "F" | "F_abTheta" | "Fab" => {
                let a = take("a", None)?;
                let b = take("b", None)?;
                let theta = take("theta", Some(0.0))?;
                Self::Fab { a, b, theta }
            }
            "T" | "T_lambdaTheta" | "TLambda" => {
                let lambda = take("lambda", None)?;
                let theta = take("theta", Some(0.0))?;
                Self::TLambda { lambda, theta }
            }
            "DistortionExtremal" | "f_lambda" => {
                let lambda = take("lambda", None)?;
                let b1 = take("b1", Some(0.0))?;
                Self::DistortionExtremal { lambda, b1 }
            }
            other => return Err(Error::Parse(format!("unknown family tag '{other}'"))),
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::Parse(format!("unknown key '{k}' for family {}", spec.tag())));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// The families used by the built-in test matrices.
pub fn builtin_harmonic_families() -> Vec<FamilySpec> {
    use std::f64::consts::PI;
    vec![
        FamilySpec::HarmonicKoebe,
        FamilySpec::HalfPlane,
        FamilySpec::Fab { a: 1.0, b: 1.0, theta: 0.0 },
        FamilySpec::Fab { a: -0.5, b: 0.5, theta: PI / 3.0 },
        FamilySpec::Fab { a: 1.0, b: 2.0, theta: PI / 4.0 },
        FamilySpec::TLambda { lambda: 3.0, theta: 0.0 },
        FamilySpec::DistortionExtremal { lambda: 2.0, b1: 0.5 },
    ]
}
