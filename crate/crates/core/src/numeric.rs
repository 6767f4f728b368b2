//! Small numerical helpers shared across modules.

use num_complex::Complex64;

/// Largest argument passed to [`atanh_clamped`].
pub(crate) const ATANH_CLAMP: f64 = 1.0 - 1e-15;

/// `atanh(x) = 0.5 ln((1+x)/(1-x))` with `x` clamped below `1 - 1e-15`.
pub(crate) fn atanh_clamped(x: f64) -> f64 {
    let x = x.min(ATANH_CLAMP);
    0.5 * ((1.0 + x) / (1.0 - x)).ln()
}

/// `1 - |z|^2`, computed as `(1 - |z|)(1 + |z|)`.
#[inline]
pub(crate) fn disk_weight(z: Complex64) -> f64 {
    let m = z.norm();
    (1.0 - m) * (1.0 + m)
}

/// Ordinary least squares `y = intercept + slope * x`.
///
/// Returns `(slope, intercept, rms residual)`, or `None` for fewer than two
/// distinct abscissae.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs[..n].iter().zip(&ys[..n]) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs[..n]
        .iter()
        .zip(&ys[..n])
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Some((slope, intercept, (ss / nf).sqrt()))
}

/// Additive-recurrence (Kronecker) sequence on the unit square based on the
/// plastic number. Deterministic for a given `offset`.
pub(crate) fn kronecker_2d(index: usize, offset: f64) -> (f64, f64) {
    // 1/rho and 1/rho^2, rho the plastic number
    const A1: f64 = 0.754_877_666_246_692_7;
    const A2: f64 = 0.569_840_290_998_053_2;
    let k = index as f64;
    ((offset + A1 * k).fract(), (offset + A2 * k).fract())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atanh_matches_std_in_interior() {
        for &x in &[0.0, 0.1, 0.5, 0.9, 0.999] {
            assert!((atanh_clamped(x) - f64::atanh(x)).abs() < 1e-14);
        }
        assert!(atanh_clamped(1.0).is_finite());
    }

    #[test]
    fn fit_recovers_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let (s, c, r) = linear_fit(&xs, &ys).unwrap();
        assert!((s + 0.5).abs() < 1e-14 && (c - 3.0).abs() < 1e-13 && r < 1e-13);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn kronecker_stays_in_unit_square() {
        for i in 0..1000 {
            let (u, v) = kronecker_2d(i, 0.5);
            assert!((0.0..1.0).contains(&u) && (0.0..1.0).contains(&v));
        }
    }
}
