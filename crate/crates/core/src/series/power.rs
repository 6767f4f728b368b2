//! Closed-form expressions built from terms `coef * z^m * prod_k (1 + c_k z)^{e_k}`.
//!
//! Every family in the library has derivatives of this shape, and the class
//! is closed under differentiation, sums and products, so derivatives of any
//! order are exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// One product term. `exponents[k]` belongs to base `bases[k]` of the owning sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coef: Complex64,
    pub z_power: u32,
    pub exponents: Vec<f64>,
}

/// A finite sum of [`PowerTerm`]s over a shared list of bases `c_k`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerSum {
    bases: Vec<Complex64>,
    terms: Vec<PowerTerm>,
}

impl PowerSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0)
    }

    /// `coef * z^m`.
    pub fn monomial(coef: Complex64, m: u32) -> Self {
        let mut s = Self::default();
        s.push_term(coef, m, &[]);
        s
    }

    /// `coef * z^m * prod (1 + c z)^e` over the given `(c, e)` pairs.
    pub fn term(coef: Complex64, m: u32, factors: &[(Complex64, f64)]) -> Self {
        let mut s = Self::default();
        s.push_term(coef, m, factors);
        s
    }

    /// `(1 + z)^a (1 - z)^{-b}`.
    pub fn jacobi_weight(a: f64, b: f64) -> Self {
        Self::term(ONE, 0, &[(ONE, a), (-ONE, -b)])
    }

    fn base_index(&mut self, c: Complex64) -> usize {
        if let Some(i) = self.bases.iter().position(|&b| b == c) {
            return i;
        }
        self.bases.push(c);
        for t in &mut self.terms {
            t.exponents.push(0.0);
        }
        self.bases.len() - 1
    }

    fn push_term(&mut self, coef: Complex64, m: u32, factors: &[(Complex64, f64)]) {
        let mut exps = vec![0.0; self.bases.len()];
        for &(c, e) in factors {
            if c == ZERO || e == 0.0 {
                continue;
            }
            let i = self.base_index(c);
            exps.resize(self.bases.len(), 0.0);
            exps[i] += e;
        }
        self.terms.push(PowerTerm {
            coef,
            z_power: m,
            exponents: exps,
        });
        self.simplify();
    }

    pub fn bases(&self) -> &[Complex64] {
        &self.bases
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge like terms and drop zero coefficients.
    fn simplify(&mut self) {
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(m) = merged.iter_mut().find(|m| {
                m.z_power == t.z_power
                    && m.exponents.len() == t.exponents.len()
                    && m.exponents
                        .iter()
                        .zip(&t.exponents)
                        .all(|(a, b)| a.to_bits() == b.to_bits() || (*a == 0.0 && *b == 0.0))
            }) {
                m.coef += t.coef;
            } else {
                merged.push(t);
            }
        }
        merged.retain(|t| t.coef != ZERO);
        self.terms = merged;
    }

    fn with_bases(&self, bases: &[Complex64]) -> Vec<PowerTerm> {
        self.terms
            .iter()
            .map(|t| {
                let mut exps = vec![0.0; bases.len()];
                for (k, &e) in t.exponents.iter().enumerate() {
                    let idx = bases.iter().position(|&b| b == self.bases[k]).unwrap();
                    exps[idx] = e;
                }
                PowerTerm {
                    coef: t.coef,
                    z_power: t.z_power,
                    exponents: exps,
                }
            })
            .collect()
    }

    fn union_bases(&self, other: &Self) -> Vec<Complex64> {
        let mut bases = self.bases.clone();
        for &b in &other.bases {
            if !bases.contains(&b) {
                bases.push(b);
            }
        }
        bases
    }

    pub fn add(&self, other: &Self) -> Self {
        let bases = self.union_bases(other);
        let mut terms = self.with_bases(&bases);
        terms.extend(other.with_bases(&bases));
        let mut s = Self { bases, terms };
        s.simplify();
        s
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut s = self.clone();
        for t in &mut s.terms {
            t.coef *= k;
        }
        s.simplify();
        s
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let bases = self.union_bases(other);
        let a = self.with_bases(&bases);
        let b = other.with_bases(&bases);
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                terms.push(PowerTerm {
                    coef: x.coef * y.coef,
                    z_power: x.z_power + y.z_power,
                    exponents: x.exponents.iter().zip(&y.exponents).map(|(p, q)| p + q).collect(),
                });
            }
        }
        let mut s = Self { bases, terms };
        s.simplify();
        s
    }

    /// Exact derivative. The base list is preserved.
    pub fn derivative(&self) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.z_power > 0 {
                terms.push(PowerTerm {
                    coef: t.coef * t.z_power as f64,
                    z_power: t.z_power - 1,
                    exponents: t.exponents.clone(),
                });
            }
            for (k, &e) in t.exponents.iter().enumerate() {
                if e == 0.0 {
                    continue;
                }
                let mut exps = t.exponents.clone();
                exps[k] -= 1.0;
                terms.push(PowerTerm {
                    coef: t.coef * e * self.bases[k],
                    z_power: t.z_power,
                    exponents: exps,
                });
            }
        }
        let mut s = Self {
            bases: self.bases.clone(),
            terms,
        };
        s.simplify();
        s
    }

    /// Principal logarithms `ln(1 + c_k z)` for each base.
    pub fn logs(&self, z: Complex64) -> Vec<Complex64> {
        self.bases.iter().map(|&c| (ONE + c * z).ln()).collect()
    }

    /// Evaluate using logarithms from [`Self::logs`] of a sum with the same bases.
    pub fn eval_with_logs(&self, z: Complex64, logs: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for t in &self.terms {
            let mut expo = ZERO;
            let mut any = false;
            for (e, l) in t.exponents.iter().zip(logs) {
                if *e != 0.0 {
                    expo += l * *e;
                    any = true;
                }
            }
            let mut v = t.coef;
            if t.z_power > 0 {
                v *= z.powu(t.z_power);
            }
            if any {
                v *= expo.exp();
            }
            acc += v;
        }
        acc
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_logs(z, &self.logs(z))
    }

    /// Value at `t = z (1 - sigma)`, forming each base as
    /// `(1 + c z) - c z sigma` so that a factor vanishing at `z` keeps full
    /// relative precision for small `sigma`.
    pub fn eval_on_segment(&self, z: Complex64, sigma: f64) -> Complex64 {
        let t = z * (1.0 - sigma);
        let logs: Vec<Complex64> = self
            .bases
            .iter()
            .map(|&c| ((ONE + c * z) - c * z * sigma).ln())
            .collect();
        self.eval_with_logs(t, &logs)
    }

    /// Points `-1/c_k` where some term is not analytic, paired with the
    /// smallest exponent carried by that base. Bases whose exponents are all
    /// nonnegative integers are omitted.
    pub fn singularities(&self) -> Vec<(Complex64, f64)> {
        let mut out = Vec::new();
        for (k, &c) in self.bases.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let exps: Vec<f64> = self.terms.iter().map(|t| t.exponents[k]).collect();
            if exps.iter().all(|&e| e >= 0.0 && e.fract() == 0.0) {
                continue;
            }
            let min = exps.iter().copied().fold(f64::INFINITY, f64::min);
            out.push((-c.inv(), min));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn derivative_of_koebe_closed_form() {
        // z (1 - z)^{-2}  ->  (1 + z)(1 - z)^{-3}
        let k = PowerSum::term(ONE, 1, &[(-ONE, -2.0)]);
        let dk = k.derivative();
        for &x in &[0.0, 0.3, -0.7, 0.95] {
            let z = Complex64::new(x, 0.1);
            let expect = (ONE + z) / (ONE - z).powi(3);
            assert!((dk.eval(z) - expect).norm() < 1e-12 * expect.norm());
        }
        assert!((dk.eval(c(0.5)) - c(12.0)).norm() < 1e-12);
    }

    #[test]
    fn like_terms_merge() {
        let a = PowerSum::jacobi_weight(1.0, 2.0);
        let s = a.add(&a).add(&a.scale(c(-2.0)));
        assert!(s.is_zero());
    }

    #[test]
    fn product_and_sum_agree_with_pointwise() {
        let a = PowerSum::jacobi_weight(0.5, 1.5);
        let b = PowerSum::term(Complex64::new(0.0, 2.0), 2, &[(Complex64::new(0.3, 0.4), -1.0)]);
        let z = Complex64::new(0.2, -0.6);
        assert!((a.multiply(&b).eval(z) - a.eval(z) * b.eval(z)).norm() < 1e-13);
        assert!((a.add(&b).eval(z) - (a.eval(z) + b.eval(z))).norm() < 1e-13);
    }

    #[test]
    fn singularities_report_noninteger_and_negative_exponents() {
        let s = PowerSum::jacobi_weight(0.5, 3.0);
        let sing = s.singularities();
        assert_eq!(sing.len(), 2);
        assert!(sing.contains(&(c(-1.0), 0.5)));
        assert!(sing.contains(&(c(1.0), -3.0)));
        assert!(PowerSum::jacobi_weight(2.0, 0.0).singularities().is_empty());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = PowerSum::jacobi_weight(-0.7, 2.3).multiply(&PowerSum::monomial(c(1.0), 3));
        let d = s.derivative();
        let z = Complex64::new(0.4, 0.3);
        let h = 1e-6;
        let fd = (s.eval(z + h) - s.eval(z - h)) / (2.0 * h);
        assert!((fd - d.eval(z)).norm() < 1e-7 * d.eval(z).norm());
    }
}
