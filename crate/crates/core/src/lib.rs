//! Numerical analysis of sense-preserving planar harmonic mappings
//! `f = h + conj(g)` of the unit disk.
//!
//! The crate is organised bottom-up:
//!
//! | module       | purpose                                                        |
//! |--------------|----------------------------------------------------------------|
//! | [`hypgeo`]   | hyperbolic distance, hyperbolic disks, uniform-radius formula  |
//! | [`series`]   | Taylor series, closed-form power sums, quadrature, coefficients|
//! | [`harmonic`] | harmonic maps, dilatation, Jacobian, pre-Schwarzian, Schwarzian|
//! | [`families`] | extremal families with closed-form pre-Schwarzian oracles      |
//! | [`estimate`] | supremum estimation over the disk, univalence falsification    |
//! | [`bounds`]   | distortion, coefficient, integral-mean and subordination checks|
//!
//! Every supremum produced by [`estimate`] is a *lower bound* of the true
//! norm. Closed-form families in [`families`] supply exact values against
//! which those lower bounds are checked.

pub mod bounds;
pub mod error;
pub mod estimate;
pub mod families;
pub mod harmonic;
pub mod hypgeo;
pub mod series;

mod numeric;

pub use num_complex::Complex64;

pub use error::{Error, Result, Warning};
pub use estimate::{NormEstimate, SamplingPlan, UnivalenceEvidence, Verdict};
pub use families::FamilySpec;
pub use harmonic::{AffineMap, HarmonicMap};
pub use hypgeo::{DiskPoint, ExtendedReal, HyperbolicDisk};
pub use series::{AnalyticFunction, PowerSum, PowerTerm, TaylorSeries};

/// Crate version, embedded in serialized reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
