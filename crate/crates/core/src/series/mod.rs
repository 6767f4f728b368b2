//! Analytic-function engine: truncated Taylor series, closed-form power
//! sums, straight-segment quadrature and coefficient extraction.

mod cauchy;
mod function;
mod power;
pub mod quad;
mod taylor;

pub use cauchy::{
    cauchy_coefficients, cauchy_coefficients_default, default_radius, default_samples,
    Coefficients, AMPLIFICATION_LIMIT,
};
pub use function::{AnalyticFunction, ClosedForm, Evaluation};
pub use power::{PowerSum, PowerTerm};
pub use quad::{path_integral_primitive, primitive_real, weight_real};
pub use taylor::{TaylorSeries, DEFAULT_ORDER, TAIL_TOLERANCE};
