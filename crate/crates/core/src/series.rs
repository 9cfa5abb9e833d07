//! Partial sums of `cos(4t ln n)` and `sin(4t ln n)`, their integral
//! counterpart, and an empirical growth exponent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::KahanSum;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub s_cos: f64,
    pub s_sin: f64,
    /// `max_{m <= n} |S_m^cos|`
    pub max_abs_cos: f64,
    pub max_abs_sin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
}

/// Which trigonometric family a fit refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cos,
    Sin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesProbe {
    pub t: f64,
    pub checkpoints: Vec<Checkpoint>,
    /// Fit of the cos family; `None` when undefined (e.g. too few checkpoints).
    pub growth: Option<GrowthFit>,
    /// Rectangle width `c`, carried as metadata only.
    pub rect_width: Option<f64>,
    /// Ratio `d`, carried as metadata only.
    pub ratio_d: Option<f64>,
}

/// 10, 100, ..., 10^5.
pub fn default_checkpoints() -> Vec<u64> {
    (1..=5).map(|k| 10u64.pow(k)).collect()
}

/// Geometric checkpoints with `per_decade` points per factor of ten,
/// starting at the first one `>= start` and ending at `end`.
pub fn geometric_checkpoints(start: f64, end: u64, per_decade: u32) -> Vec<u64> {
    let lo = start.max(1.0).log10();
    let hi = (end as f64).log10();
    let first = (lo * per_decade as f64).ceil() as i64;
    let last = (hi * per_decade as f64).floor() as i64;
    let mut out: Vec<u64> = (first..=last)
        .map(|k| 10f64.powf(k as f64 / per_decade as f64).round() as u64)
        .collect();
    if out.last() != Some(&end) {
        out.push(end);
    }
    out.dedup();
    out
}

/// Checkpoints that skip the initial transient where the constant term of
/// the partial sum still dominates the linear term `N / sqrt(1 + 16 t^2)`.
pub fn transient_free_checkpoints(t: f64, end: u64) -> Vec<u64> {
    let start = 5.0 * (1.0 + 16.0 * t * t).sqrt();
    geometric_checkpoints(start, end, 4)
}

/// Compensated partial sums of `cos(4t ln n)` and `sin(4t ln n)` up to each
/// checkpoint.
pub fn trig_log_partial_sums(t: f64, checkpoints: &[u64]) -> Result<SeriesProbe> {
    if checkpoints.is_empty() {
        return Err(Error::Domain("checkpoints", "must be nonempty".into()));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "checkpoints",
            "must be positive and strictly increasing".into(),
        ));
    }
    let mut cos_sum = KahanSum::new();
    let mut sin_sum = KahanSum::new();
    let (mut max_cos, mut max_sin) = (0f64, 0f64);
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut n = 0u64;
    for &target in checkpoints {
        while n < target {
            n += 1;
            let (s, c) = (4.0 * t * (n as f64).ln()).sin_cos();
            cos_sum.add(c);
            sin_sum.add(s);
            max_cos = max_cos.max(cos_sum.value().abs());
            max_sin = max_sin.max(sin_sum.value().abs());
        }
        out.push(Checkpoint {
            n,
            s_cos: cos_sum.value(),
            s_sin: sin_sum.value(),
            max_abs_cos: max_cos,
            max_abs_sin: max_sin,
        });
    }
    let mut probe = SeriesProbe {
        t,
        checkpoints: out,
        growth: None,
        rect_width: None,
        ratio_d: None,
    };
    probe.growth = growth_exponent(&probe, Family::Cos).ok();
    Ok(probe)
}

/// `(1/(1+16t^2)) [x (cos(4t ln x) + 4t sin(4t ln x))]` from 1 to `w`.
pub fn cos_log_antiderivative(t: f64, w: f64) -> Result<f64> {
    if !(w >= 1.0) {
        return Err(Error::Domain("w", format!("{w} must be >= 1")));
    }
    let (s, c) = (4.0 * t * w.ln()).sin_cos();
    Ok((w * (c + 4.0 * t * s) - 1.0) / (1.0 + 16.0 * t * t))
}

/// Least-squares slope of `ln y` against `ln n`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 4 {
        return Err(Error::UndefinedFit(format!(
            "need at least 4 checkpoints, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, y)| !(n > 0.0) || !(y > 0.0)) {
        return Err(Error::UndefinedFit("zero partial sums".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(GrowthFit {
        slope,
        residual: (rss / k).sqrt(),
    })
}

/// Growth exponent of the running maximum of `|S_N|` over the probe's
/// checkpoints.
pub fn growth_exponent(probe: &SeriesProbe, family: Family) -> Result<GrowthFit> {
    let points: Vec<(f64, f64)> = probe
        .checkpoints
        .iter()
        .map(|c| {
            let y = match family {
                Family::Cos => c.max_abs_cos,
                Family::Sin => c.max_abs_sin,
            };
            (c.n as f64, y)
        })
        .collect();
    log_log_slope(&points)
}

/// CSV with columns `N,S_cos,S_sin,max_abs_cos,max_abs_sin`.
pub fn probe_to_csv(probe: &SeriesProbe) -> String {
    let mut out = String::from("N,S_cos,S_sin,max_abs_cos,max_abs_sin\n");
    for c in &probe.checkpoints {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.n, c.s_cos, c.s_sin, c.max_abs_cos, c.max_abs_sin
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn t_zero_is_exact() {
        let cps: Vec<u64> = (1..=100_000).step_by(997).collect();
        let probe = trig_log_partial_sums(0.0, &cps).unwrap();
        for c in &probe.checkpoints {
            assert_eq!(c.s_cos, c.n as f64);
            assert_eq!(c.s_sin, 0.0);
        }
    }

    #[test]
    fn matches_complex_summation() {
        for t in [1.0, -2.5, 0.3] {
            let probe = trig_log_partial_sums(t, &[1000]).unwrap();
            let direct: Complex64 = (1..=1000u64)
                .map(|n| Complex64::new(0.0, -4.0 * t * (n as f64).ln()).exp())
                .sum();
            let c = probe.checkpoints[0];
            assert!((c.s_cos - direct.re).abs() < 1e-9);
            assert!((-c.s_sin - direct.im).abs() < 1e-9);
        }
    }

    #[test]
    fn cos_family_grows_linearly_at_t_one() {
        let probe = trig_log_partial_sums(1.0, &default_checkpoints()).unwrap();
        assert!(probe.checkpoints.last().unwrap().max_abs_cos > 1e3);
        let fit = probe.growth.unwrap();
        assert!((0.9..=1.1).contains(&fit.slope), "slope {}", fit.slope);
    }

    #[test]
    fn antiderivative() {
        assert_eq!(cos_log_antiderivative(0.37, 1.0).unwrap(), 0.0);
        assert_eq!(cos_log_antiderivative(0.0, 5.0).unwrap(), 4.0);
        let (t, w, h) = (0.7, 10.0, 1e-4);
        let fd = (cos_log_antiderivative(t, w + h).unwrap() - cos_log_antiderivative(t, w - h).unwrap())
            / (2.0 * h);
        assert!((fd - (4.0 * t * w.ln()).cos()).abs() < 1e-6);
        assert!(cos_log_antiderivative(1.0, 0.5).is_err());
    }

    #[test]
    fn synthetic_slopes() {
        let lin: Vec<(f64, f64)> = [10.0, 100.0, 1e3, 1e4, 1e5].iter().map(|&n| (n, n)).collect();
        assert!((log_log_slope(&lin).unwrap().slope - 1.0).abs() < 1e-12);
        let root: Vec<(f64, f64)> = [10.0, 100.0, 1e3, 1e4, 1e5]
            .iter()
            .map(|&n: &f64| (n, n.sqrt()))
            .collect();
        assert!((log_log_slope(&root).unwrap().slope - 0.5).abs() < 1e-12);
        let zero: Vec<(f64, f64)> = [10.0, 100.0, 1e3, 1e4].iter().map(|&n| (n, 0.0)).collect();
        assert!(matches!(log_log_slope(&zero), Err(Error::UndefinedFit(_))));
        assert!(log_log_slope(&lin[..3]).is_err());
    }

    #[test]
    fn checkpoint_validation() {
        assert!(trig_log_partial_sums(1.0, &[]).is_err());
        assert!(trig_log_partial_sums(1.0, &[10, 10]).is_err());
        assert!(trig_log_partial_sums(1.0, &[0, 10]).is_err());
    }

    #[test]
    fn geometric_checkpoint_layout() {
        let cps = geometric_checkpoints(10.0, 100_000, 4);
        assert_eq!(cps.first(), Some(&10));
        assert_eq!(cps.last(), Some(&100_000));
        assert_eq!(cps.len(), 17);
        let tf = transient_free_checkpoints(5.0, 100_000);
        assert!(tf[0] as f64 >= 5.0 * (1.0f64 + 400.0).sqrt());
    }

    #[test]
    fn csv_columns() {
        let probe = trig_log_partial_sums(0.5, &[10, 100]).unwrap();
        let csv = probe_to_csv(&probe);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("N,S_cos,S_sin,max_abs_cos,max_abs_sin"));
        assert_eq!(lines.count(), 2);
    }
}
