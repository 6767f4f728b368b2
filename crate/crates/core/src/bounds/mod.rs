//! Distortion, growth and covering bounds, coefficient estimates, integral
//! means and exponents, the Bloch seminorm and subordination checks.

mod checks;
mod coefficients;
mod distortion;
mod means;

pub use checks::{
    bloch_seminorm, holder_check, subordination_check, HolderRecord, SubordinationMode, SubordinationRecord,
    ANALYTIC_ONLY_SLACK, FULL_SLACK, HOLDER_MARGIN, HOLDER_RADIUS, IDENTITY_SAMPLES, IDENTITY_TOL,
};
pub use coefficients::{
    a2_bound, a2_inner_minimum, alpha_exponent, coefficient_growth, hardy_exponent, CoefficientReport, GrowthFit,
    StirlingRatio, MAX_COEFFICIENT_INDEX, NEGLIGIBLE_COEFFICIENT,
};
pub use distortion::{
    covering_radius, distortion_bounds, pointwise_pre_schwarzian_bound, CoveringRadii, DistortionItem,
    DistortionReport, PointwiseBound, UniversalConstants,
};
pub use means::{default_means_radii, integral_means, means_samples, MeansReport, MeansTarget, MIN_MEANS_RADII};
