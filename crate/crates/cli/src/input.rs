//! Reading maps, grids and configuration from the command line and disk.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use preschwarz::estimate::SamplingPlan;
use preschwarz::{AnalyticFunction, FamilySpec, HarmonicMap, PowerSum, TaylorSeries};
use serde::Deserialize;

use crate::output::Format;
use crate::UsageError;

/// Contents of a `--config` TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub plot_data: Option<bool>,
    pub plan: Option<PlanConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    /// Number of geometric rings `1 - 2^{-k}`, `k = 0..rings`.
    pub rings: Option<usize>,
    pub ring_radii: Option<Vec<f64>>,
    pub angular_counts: Option<Vec<usize>>,
    pub refine_tol: Option<f64>,
    pub refine_max_iter: Option<usize>,
}

pub fn read_config(path: &Path) -> Result<ConfigFile, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| UsageError(format!("{}: {}", path.display(), e.message())))
}

/// Assemble a plan from the config file, then command-line overrides.
pub fn build_plan(
    config: Option<&PlanConfig>,
    rings: Option<usize>,
    refine_tol: Option<f64>,
) -> Result<SamplingPlan, UsageError> {
    let empty = PlanConfig::default();
    let config = config.unwrap_or(&empty);
    let rings = rings.or(config.rings);
    let mut plan = match (&config.ring_radii, &config.angular_counts) {
        (Some(radii), Some(counts)) => {
            if rings.is_some() {
                return Err(UsageError("give either a ring count or explicit ring_radii, not both".into()));
            }
            SamplingPlan::new(radii.clone(), counts.clone(), 1e-9, 200).map_err(UsageError::from)?
        }
        (None, None) => match rings {
            Some(0) => return Err(UsageError("ring count must be at least 1".into())),
            Some(n) => SamplingPlan::geometric(n - 1),
            None => SamplingPlan::default(),
        },
        _ => return Err(UsageError("ring_radii and angular_counts must be given together".into())),
    };
    let tol = refine_tol.or(config.refine_tol).unwrap_or(plan.refine_tol);
    let iters = config.refine_max_iter.unwrap_or(plan.refine_max_iter);
    plan = plan.with_refinement(tol, iters);
    plan.validate().map_err(UsageError::from)?;
    Ok(plan)
}

/// A harmonic map named on the command line.
pub struct MapSource {
    pub map: HarmonicMap,
    pub spec: Option<FamilySpec>,
}

pub fn load_map(family: Option<&str>, coeffs: Option<&Path>) -> Result<MapSource, UsageError> {
    match (family, coeffs) {
        (Some(text), None) => {
            let spec: FamilySpec = text.parse().map_err(UsageError::from)?;
            let map = spec.build().map_err(UsageError::from)?;
            Ok(MapSource { map, spec: Some(spec) })
        }
        (None, Some(path)) => Ok(MapSource {
            map: read_coefficient_file(path)?,
            spec: None,
        }),
        (Some(_), Some(_)) => Err(UsageError("give --family or --coeffs, not both".into())),
        (None, None) => Err(UsageError("a map is required: --family SPEC or --coeffs FILE".into())),
    }
}

/// Header line `N`, then `N+1` lines `re im` for `h`, then `N+1` for `g`.
pub fn read_coefficient_file(path: &Path) -> Result<HarmonicMap, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let (h, g) = parse_coefficients(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let label = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "coefficients".into());
    let h = AnalyticFunction::from_series(TaylorSeries::new(h).map_err(UsageError::from)?);
    let g = AnalyticFunction::from_series(TaylorSeries::new(g).map_err(UsageError::from)?);
    Ok(HarmonicMap::new(h, g).map_err(UsageError::from)?.with_label(label))
}

pub fn parse_coefficients(text: &str) -> Result<(Vec<Complex64>, Vec<Complex64>), String> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or("empty coefficient file")?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| format!("line 1: expected the degree N, got '{header}'"))?;
    let mut read = |count: usize| -> Result<Vec<Complex64>, String> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let (i, line) = lines.next().ok_or("file ends before all coefficients were read")?;
            let mut parts = line.split_whitespace();
            let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(format!("line {}: expected 're im', got '{line}'", i + 1));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("line {}: '{s}' is not a finite number", i + 1))
            };
            out.push(Complex64::new(parse(re)?, parse(im)?));
        }
        Ok(out)
    };
    let h = read(n + 1)?;
    let g = read(n + 1)?;
    if let Some((i, line)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(format!("line {}: unexpected trailing content '{line}'", i + 1));
    }
    Ok((h, g))
}

/// `lo:hi:step`, inclusive of `hi` up to rounding.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, UsageError> {
    let bad = || UsageError(format!("grid must look like lo:hi:step, got '{text}'"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(UsageError(format!("grid '{text}' needs lo <= hi and step > 0")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 100_000 {
        return Err(UsageError(format!("grid '{text}' has too many points")));
    }
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Comma-separated reals.
pub fn parse_list(text: &str) -> Result<Vec<f64>, UsageError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| UsageError(format!("'{p}' is not a number")))
        })
        .collect()
}

/// `re,im;re,im;...` as a Taylor series.
pub fn parse_series(text: &str) -> Result<AnalyticFunction, UsageError> {
    let coeffs = text
        .split(';')
        .map(|pair| match parse_list(pair)?[..] {
            [re, im] => Ok(Complex64::new(re, im)),
            [re] => Ok(Complex64::new(re, 0.0)),
            _ => Err(UsageError(format!("coefficient '{pair}' must be 're' or 're,im'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AnalyticFunction::from_series(TaylorSeries::new(coeffs).map_err(UsageError::from)?))
}

/// `identity`, `rotation:θ`, `scale:s` or `disk:re,im` for `(z+c)/(1+conj(c)z)`.
pub fn parse_inner(text: &str) -> Result<AnalyticFunction, UsageError> {
    let one = Complex64::new(1.0, 0.0);
    let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "identity" if arg.is_empty() => Ok(AnalyticFunction::identity()),
        "rotation" => {
            let theta = single(arg, text)?;
            Ok(AnalyticFunction::from_primitive(
                format!("e^(i{theta})z"),
                PowerSum::monomial(Complex64::from_polar(1.0, theta), 1),
            ))
        }
        "scale" => {
            let s = single(arg, text)?;
            Ok(AnalyticFunction::from_primitive(
                format!("{s}z"),
                PowerSum::monomial(Complex64::new(s, 0.0), 1),
            ))
        }
        "disk" => match parse_list(arg)?[..] {
            [re, im] => {
                let c = Complex64::new(re, im);
                if !(c.norm() < 1.0) {
                    return Err(UsageError(format!("disk automorphism centre {c} must lie in the unit disk")));
                }
                let base = [(c.conj(), -1.0)];
                Ok(AnalyticFunction::from_primitive(
                    format!("(z+{c})/(1+conj({c})z)"),
                    PowerSum::term(c, 0, &base).add(&PowerSum::term(one, 1, &base)),
                ))
            }
            _ => Err(UsageError(format!("'{text}': disk needs re,im"))),
        },
        _ => Err(UsageError(format!(
            "unknown inner map '{text}' (identity, rotation:θ, scale:s, disk:re,im)"
        ))),
    }
}

fn single(arg: &str, whole: &str) -> Result<f64, UsageError> {
    match parse_list(arg)?[..] {
        [v] if v.is_finite() => Ok(v),
        _ => Err(UsageError(format!("'{whole}' needs one real parameter"))),
    }
}

pub fn default_inner_maps() -> Vec<String> {
    ["identity", "rotation:1.0471975511965976", "scale:0.5", "disk:0.3,0", "disk:0,-0.5"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(parse_grid("-3:3:1").unwrap(), vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(parse_grid("0.1:0.3:0.1").unwrap().len(), 3);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn coefficient_text() {
        let (h, g) = parse_coefficients("1\n0 0\n1 0\n0 0\n0.5 0.25\n").unwrap();
        assert_eq!(h, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(g[1], Complex64::new(0.5, 0.25));
        assert!(parse_coefficients("1\n0 0\n1 0\n0 0\n").is_err());
        assert!(parse_coefficients("1\n0 0\n1 0\n0 0\n0 0\n7 7\n").is_err());
        assert!(parse_coefficients("x\n").is_err());
        assert!(parse_coefficients("0\n0 nan\n0 0\n").is_err());
    }
}
