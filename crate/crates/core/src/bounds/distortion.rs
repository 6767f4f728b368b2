use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{primitive_real, weight_real};

/// Supremum constants for the second coefficient of univalent harmonic maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalConstants {
    /// Bound on `|a_2|` over the normalized univalent class.
    pub alpha: f64,
    /// Same, with `g'(0) = 0`.
    pub alpha0: f64,
    pub provenance: String,
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self {
            alpha: 3.0,
            alpha0: 2.5,
            provenance: "exact values for close-to-convex harmonic maps; the univalent-class constants are \
                         unknown and these are conjectural there"
                .into(),
        }
    }
}

impl UniversalConstants {
    pub fn new(alpha: f64, alpha0: f64, provenance: impl Into<String>) -> Result<Self> {
        let c = Self {
            alpha,
            alpha0,
            provenance: provenance.into(),
        };
        c.validate()?;
        Ok(c)
    }

    /// Requires `alpha0 <= alpha <= alpha0 + 1/2`.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 <= self.alpha && self.alpha <= self.alpha0 + 0.5) {
            return Err(Error::ParameterDomain(format!(
                "constants must satisfy alpha0 <= alpha <= alpha0 + 1/2, got alpha = {}, alpha0 = {}",
                self.alpha, self.alpha0
            )));
        }
        Ok(())
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

/// Pointwise pre-Schwarzian bounds `2(α/t + |z|)` and `2(α0/t + |z|)` for a
/// map univalent on hyperbolic disks whose pseudo-hyperbolic radius is `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseBound {
    pub h_bound: f64,
    pub f_bound: f64,
    /// Set when the default constants were used, which are only conjectured
    /// for the full univalent class.
    pub conjectural: bool,
}

pub fn pointwise_pre_schwarzian_bound(constants: &UniversalConstants, t: f64, z_mod: f64) -> Result<PointwiseBound> {
    constants.validate()?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::ParameterDomain(format!("t must lie in (0, 1], got {t}")));
    }
    if !(0.0..=1.0).contains(&z_mod) {
        return Err(Error::ParameterDomain(format!("|z| must lie in [0, 1], got {z_mod}")));
    }
    Ok(PointwiseBound {
        h_bound: 2.0 * (constants.alpha / t + z_mod),
        f_bound: 2.0 * (constants.alpha0 / t + z_mod),
        conjectural: constants.is_default(),
    })
}

/// One line of a [`DistortionReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionItem {
    pub id: String,
    pub quantity: String,
    pub lower: f64,
    pub upper: f64,
    /// Lower bound that holds for univalent maps only.
    pub univalent_lower: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub lambda: f64,
    pub b1_mod: f64,
    pub r: f64,
    pub items: Vec<DistortionItem>,
}

impl DistortionReport {
    pub fn item(&self, id: &str) -> Option<&DistortionItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

fn check_lambda_b1(lambda: f64, b1_mod: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::ParameterDomain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if !(0.0..1.0).contains(&b1_mod) {
        return Err(Error::ParameterDomain(format!("|b1| must lie in [0, 1), got {b1_mod}")));
    }
    Ok(())
}

/// Distortion, growth and Jacobian bounds for maps with
/// `‖P_f‖ <= λ` and `|g'(0)| = b1_mod`, at `|z| = r`.
pub fn distortion_bounds(lambda: f64, b1_mod: f64, r: f64) -> Result<DistortionReport> {
    check_lambda_b1(lambda, b1_mod)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::ParameterDomain(format!("r must lie in [0, 1), got {r}")));
    }
    let b = b1_mod;
    let (lo, hi) = (0.5 * (lambda - 1.0), 0.5 * (lambda + 1.0));
    let half = 0.5 * lambda;
    let w_mixed = weight_real(lo, hi, r);
    let p_mixed = primitive_real(lo, hi, r)?;
    let p_upper = primitive_real(hi, hi, r)?;
    let root = (1.0 - b * b).sqrt();
    let item = |id: &str, quantity: &str, lower: f64, upper: f64, univalent_lower: Option<f64>| DistortionItem {
        id: id.into(),
        quantity: quantity.into(),
        lower,
        upper,
        univalent_lower,
    };
    let items = vec![
        item(
            "thm6.1-1",
            "J_f",
            (1.0 - b * b) * weight_real(lambda, lambda, -r),
            (1.0 - b * b) * weight_real(lambda, lambda, r),
            None,
        ),
        item(
            "thm6.1-2",
            "|h'|",
            root * weight_real(half, half, -r),
            (1.0 + b * r) * w_mixed,
            None,
        ),
        item("thm6.1-3", "|g'|", 0.0, (r + b) * w_mixed, None),
        item(
            "thm6.1-4",
            "|h|",
            -root * primitive_real(half, half, -r)?,
            (1.0 - b) * p_mixed + b * p_upper,
            None,
        ),
        item("thm6.1-5", "|g|", 0.0, p_upper - (1.0 - b) * p_mixed, None),
        item(
            "thm6.1-6",
            "|f|",
            0.0,
            (1.0 + b) * p_upper,
            Some(-(1.0 - b) * primitive_real(hi, hi, -r)?),
        ),
    ];
    Ok(DistortionReport {
        lambda,
        b1_mod,
        r,
        items,
    })
}

/// Radii of disks about the origin covered by `h(D)` and, for univalent
/// maps, by `f(D)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringRadii {
    pub lambda: f64,
    pub b1_mod: f64,
    #[serde(rename = "cor6.1-h")]
    pub h_cover: f64,
    #[serde(rename = "cor6.1-f")]
    pub f_cover: f64,
}

/// `-sqrt(1 - b^2) H_{λ/2}(-1)` and `-(1 - b) H_{(λ+1)/2}(-1)`.
pub fn covering_radius(lambda: f64, b1_mod: f64) -> Result<CoveringRadii> {
    check_lambda_b1(lambda, b1_mod)?;
    let half = 0.5 * lambda;
    let hi = 0.5 * (lambda + 1.0);
    Ok(CoveringRadii {
        lambda,
        b1_mod,
        h_cover: -(1.0 - b1_mod * b1_mod).sqrt() * primitive_real(half, half, -1.0)?,
        f_cover: -(1.0 - b1_mod) * primitive_real(hi, hi, -1.0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        let rep = distortion_bounds(2.0, 0.5, 0.0).unwrap();
        let j = rep.item("thm6.1-1").unwrap();
        assert_eq!((j.lower, j.upper), (0.75, 0.75));
        for id in ["thm6.1-4", "thm6.1-5", "thm6.1-6"] {
            let it = rep.item(id).unwrap();
            assert!(it.lower.abs() < 1e-15 && it.upper.abs() < 1e-15, "{id}");
        }
    }

    #[test]
    fn growth_for_unit_lambda() {
        let rep = distortion_bounds(1.0, 0.0, 0.9).unwrap();
        let expect = -2.0 * 0.1f64.ln() - 0.9;
        assert!((rep.item("thm6.1-6").unwrap().upper - expect).abs() < 1e-10);
        assert!((expect - 3.7051702).abs() < 1e-7);
    }

    #[test]
    fn lower_never_exceeds_upper() {
        for &lambda in &[0.0, 0.5, 1.0, 2.0, 3.0] {
            for &b in &[0.0, 0.3, 0.9] {
                for &r in &[0.0, 0.2, 0.6, 0.95] {
                    let rep = distortion_bounds(lambda, b, r).unwrap();
                    for it in &rep.items {
                        assert!(it.lower <= it.upper + 1e-14, "{} at {lambda},{b},{r}", it.id);
                        assert!(it.lower.is_finite() && it.upper.is_finite());
                    }
                }
            }
        }
    }

    #[test]
    fn covering_constants() {
        let c = covering_radius(1.0, 0.0).unwrap();
        assert!((c.f_cover - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-10);
        assert!((c.f_cover - 0.3862944).abs() < 1e-6);
        let c0 = covering_radius(0.0, 0.0).unwrap();
        assert!((c0.h_cover - 1.0).abs() < 1e-14);
        let f: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|&l| covering_radius(l, 0.0).unwrap().f_cover).collect();
        assert!(f[0] > f[1] && f[1] > f[2]);
    }

    #[test]
    fn pointwise_bound_values() {
        let c = UniversalConstants::default();
        let b = pointwise_pre_schwarzian_bound(&c, 1.0, 1.0).unwrap();
        assert_eq!((b.h_bound, b.f_bound), (8.0, 7.0));
        assert!(b.conjectural);
        assert_eq!(pointwise_pre_schwarzian_bound(&c, 0.5, 0.0).unwrap().h_bound, 12.0);
        assert!(UniversalConstants::new(4.0, 2.5, "x").is_err());
    }
}
