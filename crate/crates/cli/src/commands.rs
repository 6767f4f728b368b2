use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use preschwarz::bounds::{
    bloch_seminorm, coefficient_growth, covering_radius, default_means_radii, distortion_bounds, integral_means,
    subordination_check, MeansTarget, SubordinationMode,
};
use preschwarz::estimate::{
    pre_schwarzian_norm, schwarzian_norm, uniform_radius_bounds, verify_norm_identity, NormEstimate, SamplingPlan,
    Verdict,
};
use preschwarz::families::builtin_harmonic_families;
use preschwarz::{FamilySpec, HarmonicMap, Warning};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::input::{default_inner_maps, parse_inner, parse_series, MapSource};
use crate::output::{num, opt, Curve, Outcome, Table};
use crate::UsageError;

/// Slack on each side of a band comparison between two estimates.
const BAND_SLACK: f64 = 2e-3;

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("library records always serialize")
}

fn skipped_warning(what: &str, est: &NormEstimate, warnings: &mut Vec<Warning>) {
    if est.skipped_degenerate > 0 {
        warnings.push(Warning::new(
            what,
            format!("{} sample points skipped where |h'| is below the degeneracy threshold", est.skipped_degenerate),
        ));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// `sup (1-|z|^2)|P_f|`.
    Pre,
    /// `sup (1-|z|^2)^2|S_f|`.
    Schwarzian,
    /// `sup (1-|z|^2)(|h'|+|g'|)`.
    Bloch,
}

pub fn norm(src: &MapSource, kind: NormKind, plan: &SamplingPlan) -> Result<Outcome, UsageError> {
    let est = match kind {
        NormKind::Pre => pre_schwarzian_norm(&src.map, plan)?,
        NormKind::Schwarzian => schwarzian_norm(&src.map, plan)?,
        NormKind::Bloch => bloch_seminorm(&src.map, plan)?,
    };
    let exact = match kind {
        NormKind::Pre => src.spec.and_then(|s| s.exact_norm()),
        _ => None,
    };
    let mut warnings = Vec::new();
    skipped_warning("norm", &est, &mut warnings);
    let mut table = Table::new(&[
        "map", "kind", "lower_bound", "argmax_re", "argmax_im", "exact", "evaluations", "skipped",
    ]);
    let z = est.argmax.value();
    table.push(vec![
        src.map.label().to_string(),
        format!("{kind:?}").to_lowercase(),
        num(est.lower_bound),
        num(z.re),
        num(z.im),
        opt(exact),
        est.evaluations.to_string(),
        est.skipped_degenerate.to_string(),
    ]);
    let curves = vec![
        Curve::new("ring maximum by radius", est.ring_maxima.iter().map(|m| (m.radius, m.value)).collect()),
        Curve::new(
            "running maximum by ring",
            est.history.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect(),
        ),
    ];
    Ok(Outcome {
        payload: json!({
            "map": src.map.label(),
            "family": src.spec.map(|s| s.to_string()),
            "kind": kind,
            "exact": exact,
            "estimate": est,
        }),
        table,
        curves,
        warnings,
        passed: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Every suite below.
    All,
    /// `|‖P_{h+εg}‖ - ‖P_f‖| <= 1` on the built-in families.
    #[value(alias = "thm2.1")]
    ShearBand,
    /// Exact norms of `H_{a,b}` over a grid.
    #[value(alias = "prop5.1")]
    HGrid,
    /// Exact norms of `F_{a,a,θ}` and `F_{a,a+1,θ}`.
    #[value(alias = "prop5.2")]
    FGrid,
    /// The analytic witnesses `k` and `l`.
    #[value(alias = "thm3.2")]
    Analytic,
}

pub struct VerifyOptions {
    pub suite: Suite,
    pub grid: Option<Vec<f64>>,
    pub eps_count: usize,
    pub family: Option<FamilySpec>,
    pub seed: u64,
}

fn identity_verdicts(specs: &[FamilySpec], plan: &SamplingPlan, out: &mut Vec<Verdict>, warnings: &mut Vec<Warning>) -> Result<(), UsageError> {
    for spec in specs {
        let rec = verify_norm_identity(spec, plan)?;
        skipped_warning("verify", &rec.estimate, warnings);
        out.push(rec.verdict);
    }
    Ok(())
}

fn seeded_epsilons(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>()))
        .collect()
}

fn shear_band(opts: &VerifyOptions, plan: &SamplingPlan, out: &mut Vec<Verdict>, warnings: &mut Vec<Warning>) -> Result<(), UsageError> {
    let families = match opts.family {
        Some(spec) => vec![spec],
        None => builtin_harmonic_families(),
    };
    let eps = seeded_epsilons(opts.seed, opts.eps_count);
    for spec in families {
        let f = spec.build()?;
        let base = pre_schwarzian_norm(&f, plan)?;
        skipped_warning("verify", &base, warnings);
        for &e in &eps {
            let sheared = HarmonicMap::analytic(f.epsilon_shear(e)?);
            let est = pre_schwarzian_norm(&sheared, plan)?;
            skipped_warning("verify", &est, warnings);
            out.push(Verdict::at_most(
                format!("shear {spec} eps={e}"),
                (est.lower_bound - base.lower_bound).abs(),
                1.0 + BAND_SLACK,
            ));
        }
    }
    Ok(())
}

pub fn verify(opts: &VerifyOptions, plan: &SamplingPlan) -> Result<Outcome, UsageError> {
    let mut verdicts = Vec::new();
    let mut warnings = Vec::new();
    let run = |s: Suite| opts.suite == Suite::All || opts.suite == s;
    if run(Suite::Analytic) {
        identity_verdicts(&[FamilySpec::AnalyticKoebe, FamilySpec::AnalyticHalfPlane], plan, &mut verdicts, &mut warnings)?;
    }
    if run(Suite::HGrid) {
        let grid = opts.grid.clone().unwrap_or_else(|| (-3..=3).map(f64::from).collect());
        let specs: Vec<FamilySpec> = grid
            .iter()
            .flat_map(|&a| grid.iter().map(move |&b| FamilySpec::Hab { a, b }))
            .collect();
        identity_verdicts(&specs, plan, &mut verdicts, &mut warnings)?;
    }
    if run(Suite::FGrid) {
        let grid = opts.grid.clone().unwrap_or_else(|| vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]);
        let mut specs = Vec::new();
        for &a in &grid {
            for theta in [0.0, PI / 3.0, PI] {
                specs.push(FamilySpec::Fab { a, b: a, theta });
                specs.push(FamilySpec::Fab { a, b: a + 1.0, theta });
            }
        }
        identity_verdicts(&specs, plan, &mut verdicts, &mut warnings)?;
    }
    if run(Suite::ShearBand) {
        shear_band(opts, plan, &mut verdicts, &mut warnings)?;
    }
    let mut table = Table::new(&["check", "passed", "measured", "reference", "detail"]);
    for v in &verdicts {
        table.push(vec![v.check.clone(), v.passed.to_string(), num(v.measured), num(v.reference), v.detail.clone()]);
    }
    let curves = vec![Curve::new(
        "measured minus reference",
        verdicts
            .iter()
            .enumerate()
            .map(|(i, v)| (i as f64, v.measured - v.reference))
            .collect(),
    )];
    let passed = verdicts.iter().all(|v| v.passed);
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    Ok(Outcome {
        payload: json!({ "checks": verdicts.len(), "failed": failed, "verdicts": verdicts }),
        table,
        curves,
        warnings,
        passed,
    })
}

pub fn distortion(lambda: f64, b1: f64, radii: &[f64]) -> Result<Outcome, UsageError> {
    let reports = radii
        .iter()
        .map(|&r| distortion_bounds(lambda, b1, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["r", "item", "quantity", "lower", "upper", "univalent_lower"]);
    let mut curves: Vec<Curve> = Vec::new();
    for rep in &reports {
        for item in &rep.items {
            table.push(vec![
                num(rep.r),
                item.id.clone(),
                item.quantity.clone(),
                num(item.lower),
                num(item.upper),
                opt(item.univalent_lower),
            ]);
            for (suffix, v) in [("lower", item.lower), ("upper", item.upper)] {
                let name = format!("{} {suffix}", item.id);
                match curves.iter_mut().find(|c| c.name == name) {
                    Some(c) => c.points.push((rep.r, v)),
                    None => curves.push(Curve::new(name, vec![(rep.r, v)])),
                }
            }
        }
    }
    Ok(Outcome {
        payload: json!({ "lambda": lambda, "b1_mod": b1, "rows": reports }),
        table,
        curves,
        warnings: Vec::new(),
        passed: true,
    })
}

pub fn covering(lambda: f64, b1: f64) -> Result<Outcome, UsageError> {
    let radii = covering_radius(lambda, b1)?;
    let mut table = Table::new(&["lambda", "b1_mod", "h_cover", "f_cover"]);
    table.push(vec![num(lambda), num(b1), num(radii.h_cover), num(radii.f_cover)]);
    Ok(Outcome {
        payload: json!({
            "lambda": lambda,
            "b1_mod": b1,
            "h_cover": radii.h_cover,
            "f_cover": radii.f_cover,
            "ids": to_json(&radii),
        }),
        table,
        curves: Vec::new(),
        warnings: Vec::new(),
        passed: true,
    })
}

pub fn coeffs(src: &MapSource, n_max: usize, lambda: Option<f64>) -> Result<Outcome, UsageError> {
    let mut rep = coefficient_growth(&src.map, n_max)?;
    if let Some(l) = lambda {
        rep = rep.with_stirling(l)?;
    }
    let mut table = Table::new(&["n", "a_re", "a_im", "a_mod", "b_re", "b_im", "b_mod"]);
    for n in 0..=n_max {
        let (a, b) = (rep.a[n], rep.b[n]);
        table.push(vec![n.to_string(), num(a.re), num(a.im), num(a.norm()), num(b.re), num(b.im), num(b.norm())]);
    }
    let mut curves = vec![
        Curve::new("|a_n|", (1..=n_max).map(|n| (n as f64, rep.a_mod(n))).collect()),
        Curve::new("|b_n|", (1..=n_max).map(|n| (n as f64, rep.b_mod(n))).collect()),
    ];
    if let Some(st) = &rep.stirling {
        curves.push(Curve::new("stirling ratio", st.iter().map(|s| (s.n as f64, s.ratio)).collect()));
    }
    let warnings = rep.warnings.clone();
    Ok(Outcome {
        payload: to_json(&rep),
        table,
        curves,
        warnings,
        passed: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeansPart {
    /// `f = h + conj(g)`.
    Map,
    /// The analytic part `h`.
    H,
    /// `h'`.
    HPrime,
}

pub fn means(src: &MapSource, p: f64, part: MeansPart, radii: Option<&[f64]>) -> Result<Outcome, UsageError> {
    let default = default_means_radii();
    let radii = radii.unwrap_or(&default);
    let target = match part {
        MeansPart::Map => MeansTarget::Harmonic(&src.map),
        MeansPart::H => MeansTarget::Analytic(src.map.analytic_part()),
        MeansPart::HPrime => MeansTarget::Derivative(src.map.analytic_part()),
    };
    let rep = integral_means(target, p, radii)?;
    let mut table = Table::new(&["r", "mean", "samples"]);
    for ((r, v), m) in rep.radii.iter().zip(&rep.values).zip(&rep.samples) {
        table.push(vec![num(*r), num(*v), m.to_string()]);
    }
    let curves = vec![Curve::new(
        "log mean against log 1/(1-r)",
        rep.radii
            .iter()
            .zip(&rep.values)
            .map(|(r, v)| (-(1.0 - r).ln(), v.ln()))
            .collect(),
    )];
    let warnings = rep.warnings.clone();
    Ok(Outcome {
        payload: to_json(&rep),
        table,
        curves,
        warnings,
        passed: true,
    })
}

pub fn radius(src: &MapSource, plan: &SamplingPlan, samples: usize) -> Result<Outcome, UsageError> {
    let rb = uniform_radius_bounds(&src.map, plan, samples)?;
    let mut warnings = Vec::new();
    skipped_warning("radius", &rb.norm, &mut warnings);
    warnings.push(Warning::new(
        "radius",
        "lower radius uses the estimated norm, which is itself a lower bound of the true norm",
    ));
    let mut table = Table::new(&["map", "norm_lower_bound", "radius_lower", "collision_radius"]);
    table.push(vec![
        src.map.label().to_string(),
        num(rb.norm.lower_bound),
        num(rb.lower),
        opt(rb.upper_evidence),
    ]);
    Ok(Outcome {
        payload: json!({ "map": src.map.label(), "bounds": rb }),
        table,
        curves: Vec::new(),
        warnings,
        passed: true,
    })
}

pub struct SubordOptions {
    pub outer: FamilySpec,
    pub inner: Vec<String>,
    pub co_analytic: Option<String>,
}

pub fn subord(opts: &SubordOptions, plan: &SamplingPlan) -> Result<Outcome, UsageError> {
    let big = opts.outer.build()?;
    let mode = match &opts.co_analytic {
        Some(text) => SubordinationMode::AnalyticOnly { co_analytic: parse_series(text)? },
        None => SubordinationMode::Full,
    };
    let inner = if opts.inner.is_empty() { default_inner_maps() } else { opts.inner.clone() };
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for text in &inner {
        let phi = parse_inner(text)?;
        let rec = subordination_check(&big, &phi, &mode, plan)?;
        skipped_warning("subord", &rec.subordinate_norm, &mut warnings);
        skipped_warning("subord", &rec.dominant_norm, &mut warnings);
        records.push(rec);
    }
    let mut table = Table::new(&["mode", "outer", "inner", "pointwise_error", "subordinate_norm", "dominant_norm", "passed"]);
    for r in &records {
        table.push(vec![
            r.mode.clone(),
            r.outer.clone(),
            r.inner.clone(),
            opt(r.pointwise.as_ref().map(|v| v.measured)),
            num(r.subordinate_norm.lower_bound),
            num(r.dominant_norm.lower_bound),
            r.passed.to_string(),
        ]);
    }
    let passed = records.iter().all(|r| r.passed);
    Ok(Outcome {
        payload: json!({ "records": records }),
        table,
        curves: Vec::new(),
        warnings,
        passed,
    })
}

/// Every evaluator on one map.
pub fn report(src: &MapSource, plan: &SamplingPlan, samples: usize) -> Result<Outcome, UsageError> {
    let mut warnings = Vec::new();
    let pre = pre_schwarzian_norm(&src.map, plan)?;
    skipped_warning("report", &pre, &mut warnings);
    let schwarz = schwarzian_norm(&src.map, plan)?;
    skipped_warning("report", &schwarz, &mut warnings);
    let bloch = bloch_seminorm(&src.map, plan)?;
    let coeffs = coefficient_growth(&src.map, 128)?;
    warnings.extend(coeffs.warnings.iter().cloned());
    let means = integral_means(MeansTarget::Harmonic(&src.map), 2.0, &default_means_radii())?;
    warnings.extend(means.warnings.iter().cloned());
    let radius = uniform_radius_bounds(&src.map, plan, samples)?;
    let mut verdicts = Vec::new();
    if let Some(exact) = src.spec.and_then(|s| s.exact_norm()) {
        verdicts.push(Verdict::within(
            "pre-Schwarzian norm",
            pre.lower_bound,
            exact,
            exact - 1e-3,
            exact + 1e-9,
        ));
    }
    let mut table = Table::new(&["quantity", "value"]);
    let mut row = |k: &str, v: String| table.push(vec![k.to_string(), v]);
    row("pre_schwarzian_norm", num(pre.lower_bound));
    row("exact_norm", opt(src.spec.and_then(|s| s.exact_norm())));
    row("schwarzian_norm", num(schwarz.lower_bound));
    row("bloch_seminorm", num(bloch.lower_bound));
    row("coefficient_gamma", opt(coeffs.fit.gamma));
    row("means_p2_exponent", num(means.exponent));
    row("uniform_radius_lower", num(radius.lower));
    row("collision_radius", opt(radius.upper_evidence));
    let passed = verdicts.iter().all(|v| v.passed);
    Ok(Outcome {
        payload: json!({
            "map": src.map.label(),
            "family": src.spec.map(|s| s.to_string()),
            "pre_schwarzian": pre,
            "schwarzian": schwarz,
            "bloch": bloch,
            "coefficients": coeffs,
            "means": means,
            "radius": radius,
            "verdicts": verdicts,
        }),
        table,
        curves: vec![Curve::new(
            "ring maximum by radius",
            pre.ring_maxima.iter().map(|m| (m.radius, m.value)).collect(),
        )],
        warnings,
        passed,
    })
}
