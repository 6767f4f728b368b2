//! Hyperbolic geometry of the unit disk.
//!
//! Distances use the curvature `-1` normalisation
//! `d_h(z, a) = 2 atanh |(z - a) / (1 - conj(a) z)|`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::atanh_clamped;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 {
            Ok(Self(z))
        } else {
            Err(Error::OutsideDisk { z })
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;
    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

impl fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonnegative real or `+infinity`, kept as an explicit sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(x),
            Self::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// `D_h(center, radius)`; an infinite radius denotes the whole disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicDisk {
    pub center: DiskPoint,
    pub radius: ExtendedReal,
}

impl HyperbolicDisk {
    pub fn new(center: DiskPoint, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::Domain(format!(
                "hyperbolic radius must be nonnegative, got {radius}"
            )));
        }
        let radius = if radius.is_infinite() {
            ExtendedReal::Infinite
        } else {
            ExtendedReal::Finite(radius)
        };
        Ok(Self { center, radius })
    }

    pub fn whole_disk() -> Self {
        Self {
            center: DiskPoint::origin(),
            radius: ExtendedReal::Infinite,
        }
    }

    pub fn contains(&self, z: DiskPoint) -> bool {
        match self.radius {
            ExtendedReal::Infinite => true,
            ExtendedReal::Finite(r) => hyperbolic_distance(z, self.center) < r,
        }
    }
}

impl fmt::Display for HyperbolicDisk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_h({}, {})", self.center, self.radius)
    }
}

/// Pseudo-hyperbolic distance `|(z - a) / (1 - conj(a) z)|`.
pub fn pseudo_hyperbolic(z: DiskPoint, a: DiskPoint) -> f64 {
    let (z, a) = (z.value(), a.value());
    ((z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)).norm()
}

pub fn hyperbolic_distance(z: DiskPoint, a: DiskPoint) -> f64 {
    2.0 * atanh_clamped(pseudo_hyperbolic(z, a))
}

/// Checked variant of [`hyperbolic_distance`] on raw complex numbers.
pub fn hyperbolic_distance_checked(z: Complex64, a: Complex64) -> Result<f64> {
    Ok(hyperbolic_distance(DiskPoint::new(z)?, DiskPoint::new(a)?))
}

/// Euclidean `(center, radius)` of a hyperbolic disk.
pub fn hyperbolic_disk_to_euclidean(d: &HyperbolicDisk) -> Result<(Complex64, f64)> {
    let rho = d.radius.finite().ok_or_else(|| {
        Error::Domain("hyperbolic disk of infinite radius has no Euclidean image".into())
    })?;
    let s = (rho / 2.0).tanh();
    let a = d.center.value();
    let a2 = a.norm_sqr();
    let denom = 1.0 - s * s * a2;
    let center = a * ((1.0 - s * s) / denom);
    let radius = s * (1.0 - a2) / denom;
    Ok((center, radius))
}

/// Lower bound `2 atanh(1 / (8 (M + 1)))` for the uniformly hyperbolic
/// radius of a map whose pre-Schwarzian norm is at most `m`.
pub fn uniform_radius_lower_bound(m: f64) -> Result<f64> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("norm bound must be finite and >= 0, got {m}")));
    }
    Ok(2.0 * atanh_clamped(1.0 / (8.0 * (m + 1.0))))
}

/// Disk automorphism `w -> (w - c) / (1 - conj(c) w)`.
pub fn mobius(c: Complex64, w: Complex64) -> Complex64 {
    (w - c) / (Complex64::new(1.0, 0.0) - c.conj() * w)
}
