use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::sup::{pre_schwarzian_norm, NormEstimate, SamplingPlan};
use crate::families::{build_family, FamilySpec};

/// An estimate may fall short of the exact norm by at most this much.
pub const ATTAINMENT_TOL: f64 = 1e-3;
/// No sampled value may exceed the exact norm by more than this.
pub const OVERSHOOT_TOL: f64 = 1e-9;

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    /// The measured quantity.
    pub measured: f64,
    /// The value or limit it was compared with.
    pub reference: f64,
    pub detail: String,
}

impl Verdict {
    pub fn new(check: impl Into<String>, passed: bool, measured: f64, reference: f64, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            passed,
            measured,
            reference,
            detail: detail.into(),
        }
    }

    /// Passes iff `measured <= limit`.
    pub fn at_most(check: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self::new(check, measured <= limit, measured, limit, format!("{measured} <= {limit}"))
    }

    /// Passes iff `lo <= measured <= hi`; `reference` is the band centre.
    pub fn within(check: impl Into<String>, measured: f64, reference: f64, lo: f64, hi: f64) -> Self {
        Self::new(
            check,
            measured >= lo && measured <= hi,
            measured,
            reference,
            format!("{measured} in [{lo}, {hi}]"),
        )
    }
}

/// Estimated versus exact pre-Schwarzian norm for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormIdentityRecord {
    pub family: String,
    pub exact: f64,
    pub estimate: NormEstimate,
    pub verdict: Verdict,
}

/// Passes iff the estimate lies in `[exact - 1e-3, exact + 1e-9]`.
///
/// Every sampled value is at most the estimate, so the upper end also bounds
/// all samples.
pub fn verify_norm_identity(spec: &FamilySpec, plan: &SamplingPlan) -> Result<NormIdentityRecord> {
    let exact = spec
        .exact_norm()
        .ok_or_else(|| Error::UnknownNorm(spec.to_string()))?;
    let f = build_family(spec)?;
    let estimate = pre_schwarzian_norm(&f, plan)?;
    let verdict = Verdict::within(
        format!("norm {spec}"),
        estimate.lower_bound,
        exact,
        exact - ATTAINMENT_TOL,
        exact + OVERSHOOT_TOL,
    );
    Ok(NormIdentityRecord {
        family: spec.to_string(),
        exact,
        estimate,
        verdict,
    })
}
