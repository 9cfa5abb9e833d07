//! Zeros of `L(s, chi)` on the critical line and sigma-profiles at fixed `t`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{gamma, l_eval, LEvalSettings, SPoint};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

/// A refined zero `1/2 + i t` of `L(s, chi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub q: u64,
    pub index: u64,
    pub t: f64,
    /// `|L(1/2 + i t, chi)|` at the stored ordinate.
    pub residual: f64,
    /// Width of the golden-section bracket after refinement.
    pub width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    /// Grid minima of `|L|` below this are refined.
    pub candidate_threshold: f64,
    /// A refined point is accepted as a zero when `|L|` is below this.
    pub accept_residual: f64,
    /// Golden-section search stops once the bracket is narrower than this.
    pub width_tolerance: f64,
    /// Refined zeros closer than this are merged.
    pub dedup_tolerance: f64,
    /// Worker threads; 0 or 1 runs sequentially.
    pub threads: usize,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            candidate_threshold: 0.1,
            accept_residual: 1e-6,
            width_tolerance: 1e-10,
            dedup_tolerance: 1e-8,
            threads: 1,
        }
    }
}

pub(crate) fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn critical_abs(chi: &DirichletCharacter, t: f64, settings: &LEvalSettings) -> Result<f64> {
    Ok(l_eval(chi, SPoint::new(0.5, t)?, settings)?.norm())
}

/// Golden-section minimization of `f` on `[lo, hi]`; returns the final
/// bracket midpoint and width.
fn golden_section(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    // cap iterations: each step shrinks the bracket by 0.618
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok((0.5 * (lo + hi), hi - lo))
}

/// Refine a zero candidate bracketed by `[lo, hi]` by minimizing `|L|^2`.
pub fn refine_zero(
    chi: &DirichletCharacter,
    lo: f64,
    hi: f64,
    settings: &LEvalSettings,
    scan: &ScanSettings,
) -> Result<ZeroRecord> {
    let (t, width) = golden_section(lo, hi, scan.width_tolerance, |t| {
        critical_abs(chi, t, settings).map(|v| v * v)
    })?;
    Ok(ZeroRecord {
        q: chi.modulus(),
        index: chi.index(),
        t,
        residual: critical_abs(chi, t, settings)?,
        width,
    })
}

fn grid_points(t_lo: f64, t_hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_lo.is_finite() && t_hi.is_finite() && step.is_finite()) {
        return Err(Error::NonFinite("scan interval".into()));
    }
    if !(t_lo < t_hi) {
        return Err(Error::Domain("t range", format!("t_lo {t_lo} >= t_hi {t_hi}")));
    }
    if !(step > 0.0) {
        return Err(Error::Domain("step", format!("{step} must be positive")));
    }
    let len = t_hi - t_lo;
    if step > len {
        return Err(Error::EmptyGrid { step, len });
    }
    let count = (len / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| t_lo + i as f64 * step).collect())
}

/// Scan `|L(1/2 + i t, chi)|` over `[t_lo, t_hi]` and refine every grid
/// minimum below the candidate threshold.
pub fn scan_critical_line(
    chi: &DirichletCharacter,
    t_lo: f64,
    t_hi: f64,
    step: f64,
    settings: &LEvalSettings,
    scan: &ScanSettings,
) -> Result<Vec<ZeroRecord>> {
    let grid = grid_points(t_lo, t_hi, step)?;
    with_threads(scan.threads, || {
        let values: Vec<f64> = if scan.threads > 1 {
            grid.par_iter()
                .map(|&t| critical_abs(chi, t, settings))
                .collect::<Result<_>>()?
        } else {
            grid.iter()
                .map(|&t| critical_abs(chi, t, settings))
                .collect::<Result<_>>()?
        };
        let candidates: Vec<(f64, f64)> = (1..grid.len().saturating_sub(1))
            .filter(|&i| {
                values[i] < scan.candidate_threshold
                    && values[i] <= values[i - 1]
                    && values[i] < values[i + 1]
            })
            .map(|i| (grid[i - 1], grid[i + 1]))
            .collect();
        let refined: Vec<ZeroRecord> = if scan.threads > 1 {
            candidates
                .par_iter()
                .map(|&(lo, hi)| refine_zero(chi, lo, hi, settings, scan))
                .collect::<Result<_>>()?
        } else {
            candidates
                .iter()
                .map(|&(lo, hi)| refine_zero(chi, lo, hi, settings, scan))
                .collect::<Result<_>>()?
        };
        Ok(merge_zeros(refined, scan))
    })
}

fn merge_zeros(mut zeros: Vec<ZeroRecord>, scan: &ScanSettings) -> Vec<ZeroRecord> {
    zeros.retain(|z| z.residual < scan.accept_residual);
    zeros.sort_by(|a, b| a.t.total_cmp(&b.t));
    let mut out: Vec<ZeroRecord> = Vec::with_capacity(zeros.len());
    for z in zeros {
        match out.last_mut() {
            Some(prev) if (z.t - prev.t).abs() < scan.dedup_tolerance => {
                if z.residual < prev.residual {
                    *prev = z;
                }
            }
            _ => out.push(z),
        }
    }
    out
}

/// Hardy's `Z(t) = e^{i theta(t)} zeta(1/2 + i t)`, real for real `t`.
///
/// Only meaningful for the principal character mod 1.
pub fn hardy_z(t: f64, settings: &LEvalSettings) -> Result<f64> {
    let zeta = DirichletCharacter::principal(1)?;
    let value = l_eval(&zeta, SPoint::new(0.5, t)?, settings)?;
    let g = gamma(SPoint::new(0.25, 0.5 * t)?)?;
    let pi_factor = Complex64::from_polar(1.0, -0.5 * t * std::f64::consts::PI.ln());
    let rotation = g / g.norm() * pi_factor;
    Ok((rotation * value).re)
}

/// Locate a sign change of Hardy's `Z` in `[lo, hi]` by bisection.
pub fn bisect_hardy_z(lo: f64, hi: f64, tol: f64, settings: &LEvalSettings) -> Result<Option<f64>> {
    let (mut a, mut b) = (lo, hi);
    let mut za = hardy_z(a, settings)?;
    let zb = hardy_z(b, settings)?;
    if za.signum() == zb.signum() {
        return Ok(None);
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let zm = hardy_z(m, settings)?;
        if zm == 0.0 {
            return Ok(Some(m));
        }
        if zm.signum() == za.signum() {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// `|L(sigma + i t0, chi)|` over a grid of `sigma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaProfile {
    pub t0: f64,
    pub sigmas: Vec<f64>,
    pub values: Vec<f64>,
    pub argmin_sigma: f64,
    pub min_value: f64,
}

/// 0.01, 0.02, ..., 0.99.
pub fn default_sigma_grid() -> Vec<f64> {
    (1..=99).map(|k| k as f64 / 100.0).collect()
}

pub fn sigma_scan(
    chi: &DirichletCharacter,
    t0: f64,
    sigmas: &[f64],
    settings: &LEvalSettings,
) -> Result<SigmaProfile> {
    if sigmas.len() < 9 {
        return Err(Error::Domain(
            "sigma grid",
            format!("need at least 9 points, got {}", sigmas.len()),
        ));
    }
    if sigmas.iter().any(|&s| !(s > 0.0 && s < 1.0)) {
        return Err(Error::Domain("sigma grid", "points must lie in (0, 1)".into()));
    }
    if sigmas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("sigma grid", "must be strictly increasing".into()));
    }
    let values = sigmas
        .iter()
        .map(|&sigma| Ok(l_eval(chi, SPoint::new(sigma, t0)?, settings)?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let (arg, &min_value) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is nonempty");
    Ok(SigmaProfile {
        t0,
        sigmas: sigmas.to_vec(),
        argmin_sigma: sigmas[arg],
        min_value,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingRow {
    pub t_first: f64,
    pub t_second: f64,
    pub n: u64,
    /// `(t_second - t_first) ln n / (2 pi)`.
    pub value: f64,
    /// `value - round(value)`, in `[-1/2, 1/2]`.
    pub fractional_offset: f64,
}

/// For each consecutive pair of ordinates and each `n` in `2..=n_max`,
/// how far `(t_j - t_i) ln n / 2 pi` is from an integer.
pub fn ordinate_spacing_probe(ordinates: &[f64], n_max: u64) -> Result<Vec<SpacingRow>> {
    if ordinates.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 zeros, got {}",
            ordinates.len()
        )));
    }
    if n_max < 2 {
        return Err(Error::Domain("n_max", format!("{n_max} must be >= 2")));
    }
    let mut rows = Vec::new();
    for pair in ordinates.windows(2) {
        for n in 2..=n_max {
            let value = (pair[1] - pair[0]) * (n as f64).ln() / std::f64::consts::TAU;
            rows.push(SpacingRow {
                t_first: pair[0],
                t_second: pair[1],
                n,
                value,
                fractional_offset: value - value.round(),
            });
        }
    }
    Ok(rows)
}
