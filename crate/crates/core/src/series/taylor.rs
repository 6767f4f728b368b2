use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for series built by the library.
pub const DEFAULT_ORDER: usize = 256;

/// Tail tolerance defining the trusted evaluation radius.
pub const TAIL_TOLERANCE: f64 = 1e-9;

/// Truncated power series `c_0 + c_1 z + ... + c_N z^N`.
///
/// Binary operations truncate to the smaller order of the two operands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series of `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse, exact up to `O(z^{N+1})`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0 == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZero);
        }
        let n = self.order();
        let inv0 = c0.inv();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[0] = inv0;
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * inv0;
        }
        Ok(Self { coeffs: out })
    }

    /// Termwise derivative; the order drops by one (floor 0).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        }
    }

    /// Primitive with zero constant term; the order grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k + 1) as f64),
        );
        Self { coeffs }
    }

    /// Value and first three derivatives at `z` by a simultaneous Horner scheme.
    pub fn jet(&self, z: Complex64) -> [Complex64; 4] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p0, mut p1, mut p2, mut p3) = (zero, zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            p3 = p3 * z + p2;
            p2 = p2 * z + p1;
            p1 = p1 * z + p0;
            p0 = p0 * z + c;
        }
        [p0, p1, p2 * 2.0, p3 * 6.0]
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Ratio-test estimate of the truncation tail at radius `r`:
    /// `|c_N| r^N / (1 - q r)` with `q = |c_N / c_{N-1}|` (fallback 1).
    pub fn tail_estimate(&self, r: f64) -> f64 {
        let n = self.order();
        let cn = self.coeffs[n].norm();
        if cn == 0.0 {
            return 0.0;
        }
        let q = if n >= 1 && self.coeffs[n - 1].norm() > 0.0 {
            cn / self.coeffs[n - 1].norm()
        } else {
            1.0
        };
        let denom = 1.0 - q * r;
        if denom <= 0.0 {
            return f64::INFINITY;
        }
        cn * r.powi(n as i32) / denom
    }

    /// Largest radius at which [`Self::tail_estimate`] stays below
    /// [`TAIL_TOLERANCE`]. Returns 1 for series whose last coefficient is zero.
    pub fn trusted_radius(&self) -> f64 {
        if self.tail_estimate(1.0 - 1e-15) < TAIL_TOLERANCE {
            return 1.0;
        }
        if self.tail_estimate(0.0) >= TAIL_TOLERANCE {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.tail_estimate(mid) < TAIL_TOLERANCE {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

impl Add for &TaylorSeries {
    type Output = TaylorSeries;
    fn add(self, rhs: Self) -> TaylorSeries {
        let n = self.order().min(rhs.order());
        TaylorSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &TaylorSeries {
    type Output = TaylorSeries;
    fn sub(self, rhs: Self) -> TaylorSeries {
        self + &(-rhs)
    }
}

impl Neg for &TaylorSeries {
    type Output = TaylorSeries;
    fn neg(self) -> TaylorSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &TaylorSeries {
    type Output = TaylorSeries;
    fn mul(self, rhs: Self) -> TaylorSeries {
        self.multiply(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn reciprocal_of_one_minus_z_is_geometric() {
        let s = TaylorSeries::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let r = s.reciprocal().unwrap();
        assert!(r.coefficients().iter().all(|&x| x == c(1.0)));
        let id = &s * &r;
        assert_eq!(id.coefficient(0), c(1.0));
        assert!(id.coefficients()[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn reciprocal_needs_nonzero_constant() {
        let s = TaylorSeries::identity(4);
        assert_eq!(s.reciprocal(), Err(Error::DivisionByZero));
    }

    #[test]
    fn product_truncates_at_common_order() {
        let a = TaylorSeries::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let b = TaylorSeries::from_real(&[1.0, 2.0]).unwrap();
        let p = &a * &b;
        assert_eq!(p.order(), 1);
        assert_eq!(p.coefficients(), &[c(1.0), c(3.0)]);
    }

    #[test]
    fn jet_of_koebe_at_half() {
        // z/(1-z)^2 = sum n z^n; derivative (1+z)/(1-z)^3 = 12 at z = 1/2
        let coeffs: Vec<f64> = (0..=256).map(|n| n as f64).collect();
        let k = TaylorSeries::from_real(&coeffs).unwrap();
        let j = k.jet(c(0.5));
        assert!((j[0] - c(2.0)).norm() < 1e-12);
        assert!((j[1] - c(12.0)).norm() < 1e-10);
    }

    #[test]
    fn trusted_radius_of_polynomial_is_one() {
        let s = TaylorSeries::from_real(&[0.0, 1.0, 0.5, 0.0]).unwrap();
        assert_eq!(s.trusted_radius(), 1.0);
    }

    #[test]
    fn trusted_radius_of_geometric_series() {
        let s = TaylorSeries::from_real(&vec![1.0; 257]).unwrap();
        let r = s.trusted_radius();
        assert!(r > 0.9 && r < 1.0);
        assert!(s.tail_estimate(r) <= TAIL_TOLERANCE * 1.0001);
    }

    proptest! {
        #[test]
        fn derivative_of_antiderivative_is_identity(
            re in prop::collection::vec(-10.0f64..10.0, 65),
            im in prop::collection::vec(-10.0f64..10.0, 65),
        ) {
            let s = TaylorSeries::new(re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect()).unwrap();
            prop_assert_eq!(s.order(), 64);
            let back = s.antiderivative().differentiate();
            prop_assert_eq!(back.order(), 64);
            for (x, y) in back.coefficients().iter().zip(s.coefficients()) {
                prop_assert!((x - y).norm() <= 1e-12 * (1.0 + y.norm()));
            }
            prop_assert_eq!(s.antiderivative().coefficient(0), Complex64::new(0.0, 0.0));
        }

        #[test]
        fn reciprocal_is_inverse(
            re in prop::collection::vec(-1.0f64..1.0, 24),
        ) {
            let mut coeffs: Vec<Complex64> = re.iter().map(|&a| Complex64::new(a, 0.5 * a)).collect();
            coeffs[0] = Complex64::new(2.0, 0.3);
            let s = TaylorSeries::new(coeffs).unwrap();
            let one = &s * &s.reciprocal().unwrap();
            prop_assert!((one.coefficient(0) - c(1.0)).norm() < 1e-12);
            for k in 1..=one.order() {
                prop_assert!(one.coefficient(k).norm() < 1e-9, "k={} {}", k, one.coefficient(k));
            }
        }
    }
}
