//! Supremum estimation over the disk, norm-identity verification,
//! univalence falsification and the Lipschitz / boundedness indicators.
//!
//! Every supremum here is a lower bound: the estimator only reports values
//! it actually evaluated.

mod indicators;
mod sup;
mod univalence;
mod verify;

pub use indicators::{
    beta_indicator, default_beta_radii, log_jacobian_lipschitz_check, BetaIndicator, BetaPoint,
    LipschitzRecord, PairWitness, DEFAULT_SEED, LIPSCHITZ_SLACK, PAIR_RADIUS,
};
pub use sup::{
    pre_schwarzian_norm, pre_schwarzian_quantity, schwarzian_norm, schwarzian_quantity,
    sup_norm_estimate, NormEstimate, RingMaximum, SamplingPlan, DEFAULT_MAX_RING,
    MAX_ANGULAR_COUNT, REFINE_STARTS_PER_RING,
};
pub use univalence::{
    default_radius_scan, uniform_radius_bounds, uniform_radius_bounds_with, univalence_falsify,
    CollisionWitness, RadiusBounds, UnivalenceEvidence, UnivalenceVerdict, COLLISION_CEILING,
    SEPARATION_FLOOR, WHOLE_DISK_RADIUS,
};
pub use verify::{verify_norm_identity, NormIdentityRecord, Verdict, ATTAINMENT_TOL, OVERSHOOT_TOL};
