use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::power::PowerSum;
use crate::series::quad::{integrate_segment, SingularityInfo};
use crate::series::taylor::TaylorSeries;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Result of [`AnalyticFunction::evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// `f(z), f'(z), ...` up to the requested order.
    pub values: Vec<Complex64>,
    /// Set when a series backend was evaluated beyond its trusted radius.
    pub truncated: bool,
}

/// Closed-form backend: exact derivatives to order three, value either exact
/// (from a primitive) or by quadrature of the first derivative.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    label: String,
    primitive: Option<PowerSum>,
    constant: Complex64,
    derivs: [PowerSum; 3],
    singular: SingularityInfo,
}

impl ClosedForm {
    fn from_primitive(label: String, primitive: PowerSum) -> Self {
        let d1 = primitive.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let singular = SingularityInfo::from_sum(&d1);
        Self {
            label,
            primitive: Some(primitive),
            constant: ZERO,
            derivs: [d1, d2, d3],
            singular,
        }
    }

    fn from_derivative(label: String, d1: PowerSum, constant: Complex64) -> Self {
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let singular = SingularityInfo::from_sum(&d1);
        Self {
            label,
            primitive: None,
            constant,
            derivs: [d1, d2, d3],
            singular,
        }
    }

    pub fn derivative_sum(&self, k: usize) -> &PowerSum {
        &self.derivs[k - 1]
    }

    pub fn primitive(&self) -> Option<&PowerSum> {
        self.primitive.as_ref()
    }

    fn derivatives(&self, z: Complex64) -> [Complex64; 3] {
        let logs = self.derivs[0].logs(z);
        [
            self.derivs[0].eval_with_logs(z, &logs),
            self.derivs[1].eval_with_logs(z, &logs),
            self.derivs[2].eval_with_logs(z, &logs),
        ]
    }

    fn value(&self, z: Complex64) -> Result<Complex64> {
        match &self.primitive {
            Some(p) => Ok(p.eval(z) + self.constant),
            None => {
                let d1 = &self.derivs[0];
                Ok(self.constant + integrate_segment(|_, sigma| d1.eval_on_segment(z, sigma), z, &self.singular)?)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeriesBackend {
    series: TaylorSeries,
    trusted_radius: f64,
}

#[derive(Debug, Clone)]
pub struct Combination {
    parts: Vec<(Complex64, AnalyticFunction)>,
    constant: Complex64,
}

/// `f(0) = constant`, `f' = outer' ∘ inner`.
#[derive(Debug, Clone)]
pub struct DerivativeComposition {
    outer: AnalyticFunction,
    inner: AnalyticFunction,
    constant: Complex64,
}

/// An analytic function on the unit disk with derivatives to order three.
#[derive(Debug, Clone)]
pub enum AnalyticFunction {
    Series(Arc<SeriesBackend>),
    ClosedForm(Arc<ClosedForm>),
    Combination(Arc<Combination>),
    DerivativeComposition(Arc<DerivativeComposition>),
}

fn check_disk(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisk { z })
    }
}

impl AnalyticFunction {
    pub fn zero() -> Self {
        Self::from_primitive("0", PowerSum::zero())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_primitive("const", PowerSum::constant(c))
    }

    pub fn identity() -> Self {
        Self::from_primitive("z", PowerSum::monomial(ONE, 1))
    }

    pub fn from_series(series: TaylorSeries) -> Self {
        let trusted_radius = series.trusted_radius();
        Self::Series(Arc::new(SeriesBackend {
            series,
            trusted_radius,
        }))
    }

    /// Function given by an exact closed-form primitive.
    pub fn from_primitive(label: impl Into<String>, primitive: PowerSum) -> Self {
        Self::ClosedForm(Arc::new(ClosedForm::from_primitive(label.into(), primitive)))
    }

    /// Function with `f(0) = constant` and closed-form first derivative;
    /// values come from quadrature.
    pub fn from_derivative(label: impl Into<String>, derivative: PowerSum, constant: Complex64) -> Self {
        Self::ClosedForm(Arc::new(ClosedForm::from_derivative(
            label.into(),
            derivative,
            constant,
        )))
    }

    /// The function with derivative `outer' ∘ inner` and value `constant` at 0.
    pub fn compose_derivative(outer: &Self, inner: &Self, constant: Complex64) -> Self {
        Self::DerivativeComposition(Arc::new(DerivativeComposition {
            outer: outer.clone(),
            inner: inner.clone(),
            constant,
        }))
    }

    pub fn label(&self) -> String {
        match self {
            Self::Series(s) => format!("series(N={})", s.series.order()),
            Self::ClosedForm(c) => c.label.clone(),
            Self::Combination(c) => {
                let parts: Vec<String> = c
                    .parts
                    .iter()
                    .map(|(k, f)| format!("({k})*{}", f.label()))
                    .collect();
                parts.join(" + ")
            }
            Self::DerivativeComposition(d) => {
                format!("∫ {}' ∘ {}", d.outer.label(), d.inner.label())
            }
        }
    }

    pub fn as_series(&self) -> Option<&TaylorSeries> {
        match self {
            Self::Series(s) => Some(&s.series),
            _ => None,
        }
    }

    pub fn as_closed_form(&self) -> Option<&ClosedForm> {
        match self {
            Self::ClosedForm(c) => Some(c),
            _ => None,
        }
    }

    /// Radius inside which evaluation is trusted: the tail-estimate radius for
    /// series, 1 for closed forms.
    pub fn trusted_radius(&self) -> f64 {
        match self {
            Self::Series(s) => s.trusted_radius,
            Self::ClosedForm(_) => 1.0,
            Self::Combination(c) => c
                .parts
                .iter()
                .map(|(_, f)| f.trusted_radius())
                .fold(1.0, f64::min),
            Self::DerivativeComposition(d) => d.outer.trusted_radius().min(d.inner.trusted_radius()),
        }
    }

    /// `[f'(z), f''(z), f'''(z)]` without computing `f(z)`.
    pub fn derivatives(&self, z: Complex64) -> Result<[Complex64; 3]> {
        check_disk(z)?;
        self.derivatives_unchecked(z)
    }

    fn derivatives_unchecked(&self, z: Complex64) -> Result<[Complex64; 3]> {
        match self {
            Self::Series(s) => {
                let j = s.series.jet(z);
                Ok([j[1], j[2], j[3]])
            }
            Self::ClosedForm(c) => Ok(c.derivatives(z)),
            Self::Combination(c) => {
                let mut out = [ZERO; 3];
                for (k, f) in &c.parts {
                    let d = f.derivatives_unchecked(z)?;
                    for i in 0..3 {
                        out[i] += k * d[i];
                    }
                }
                Ok(out)
            }
            Self::DerivativeComposition(d) => {
                let w = d.inner.value(z)?;
                if !(w.norm() < 1.0) {
                    return Err(Error::NotSelfMap { z, modulus: w.norm() });
                }
                let [p1, p2, _] = d.inner.derivatives_unchecked(z)?;
                let [o1, o2, o3] = d.outer.derivatives_unchecked(w)?;
                Ok([o1, o2 * p1, o3 * p1 * p1 + o2 * p2])
            }
        }
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        check_disk(z)?;
        match self {
            Self::Series(s) => Ok(s.series.value(z)),
            Self::ClosedForm(c) => c.value(z),
            Self::Combination(c) => {
                let mut acc = c.constant;
                for (k, f) in &c.parts {
                    acc += k * f.value(z)?;
                }
                Ok(acc)
            }
            Self::DerivativeComposition(d) => {
                let failure = RefCell::new(None);
                let integral = integrate_segment(
                    |t, _| match self.derivatives_unchecked(t) {
                        Ok(v) => v[0],
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            ZERO
                        }
                    },
                    z,
                    &SingularityInfo::unknown_beyond_unit_circle(z),
                )?;
                match failure.into_inner() {
                    Some(e) => Err(e),
                    None => Ok(d.constant + integral),
                }
            }
        }
    }

    /// `f(z)` and derivatives up to `order` (at most 3).
    pub fn evaluate(&self, z: Complex64, order: usize) -> Result<Evaluation> {
        if order > 3 {
            return Err(Error::Domain(format!("derivative order {order} exceeds 3")));
        }
        check_disk(z)?;
        let mut values = vec![self.value(z)?];
        if order > 0 {
            let d = self.derivatives_unchecked(z)?;
            values.extend_from_slice(&d[..order]);
        }
        Ok(Evaluation {
            values,
            truncated: z.norm() > self.trusted_radius(),
        })
    }

    /// `sum_i k_i f_i + constant`, merging closed forms and series where possible.
    pub fn linear_combination(parts: &[(Complex64, &AnalyticFunction)], constant: Complex64) -> Result<Self> {
        let parts: Vec<(Complex64, &AnalyticFunction)> =
            parts.iter().filter(|(k, _)| *k != ZERO).copied().collect();
        if parts.is_empty() {
            return Ok(Self::constant(constant));
        }
        if parts.len() == 1 && parts[0].0 == ONE && constant == ZERO {
            return Ok(parts[0].1.clone());
        }
        let closed: Option<Vec<(Complex64, &ClosedForm)>> = parts
            .iter()
            .map(|(k, f)| f.as_closed_form().map(|c| (*k, c)))
            .collect();
        if let Some(closed) = closed {
            let label = closed
                .iter()
                .map(|(k, c)| format!("({k})*{}", c.label))
                .collect::<Vec<_>>()
                .join(" + ");
            if closed.iter().all(|(_, c)| c.primitive.is_some()) {
                let mut sum = PowerSum::constant(constant);
                for (k, c) in &closed {
                    sum = sum.add(&c.primitive.as_ref().unwrap().scale(*k));
                    sum = sum.add(&PowerSum::constant(c.constant * k));
                }
                return Ok(Self::from_primitive(label, sum));
            }
            let mut d1 = PowerSum::zero();
            let mut c0 = constant;
            for (k, c) in &closed {
                d1 = d1.add(&c.derivs[0].scale(*k));
                c0 += k * c.value(ZERO)?;
            }
            return Ok(Self::from_derivative(label, d1, c0));
        }
        let series: Option<Vec<(Complex64, &TaylorSeries)>> = parts
            .iter()
            .map(|(k, f)| f.as_series().map(|s| (*k, s)))
            .collect();
        if let Some(series) = series {
            let order = series.iter().map(|(_, s)| s.order()).min().unwrap();
            let mut acc = TaylorSeries::constant(constant, order);
            for (k, s) in series {
                acc = &acc + &s.scale(k);
            }
            return Ok(Self::from_series(acc));
        }
        Ok(Self::Combination(Arc::new(Combination {
            parts: parts.iter().map(|(k, f)| (*k, (*f).clone())).collect(),
            constant,
        })))
    }

    pub fn scale(&self, k: Complex64) -> Result<Self> {
        Self::linear_combination(&[(k, self)], ZERO)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::linear_combination(&[(ONE, self), (ONE, other)], ZERO)
    }

    pub fn add_constant(&self, c: Complex64) -> Result<Self> {
        Self::linear_combination(&[(ONE, self)], c)
    }
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
