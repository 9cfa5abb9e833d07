//! Centroids of plane laminas with complex-valued profiles, the
//! volume = 2 pi eta * area identity, and cylinder-volume sums built from
//! `chi(n)^2 / n^{2s}`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{n_pow_minus_s, SPoint};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::math::KahanComplex;

pub type Profile = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// The region between `g` (below) and `f` (above) over `[a, b]`.
#[derive(Clone)]
pub struct Lamina {
    upper: Profile,
    lower: Profile,
    a: f64,
    b: f64,
    panels: usize,
}

impl fmt::Debug for Lamina {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lamina")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("panels", &self.panels)
            .finish_non_exhaustive()
    }
}

pub const DEFAULT_PANELS: usize = 4096;

impl Lamina {
    pub fn new(upper: Profile, lower: Profile, a: f64, b: f64, panels: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain("interval", format!("[{a}, {b}]")));
        }
        if panels < 8 || panels % 2 != 0 {
            return Err(Error::Domain(
                "panels",
                format!("{panels} must be even and >= 8"),
            ));
        }
        Ok(Lamina {
            upper,
            lower,
            a,
            b,
            panels,
        })
    }

    pub fn with_panels(&self, panels: usize) -> Result<Self> {
        Lamina::new(
            Arc::clone(&self.upper),
            Arc::clone(&self.lower),
            self.a,
            self.b,
            panels,
        )
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Composite Simpson on the lamina's interval.
    pub fn integrate(&self, h: impl Fn(f64, Complex64, Complex64) -> Complex64) -> Complex64 {
        let n = self.panels;
        let step = (self.b - self.a) / n as f64;
        let mut acc = KahanComplex::default();
        for i in 0..=n {
            let z = if i == n { self.b } else { self.a + i as f64 * step };
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc.add(w * h(z, (self.upper)(z), (self.lower)(z)));
        }
        acc.value() * (step / 3.0)
    }

    /// `int (f - g)`
    pub fn area(&self) -> Complex64 {
        self.integrate(|_, f, g| f - g)
    }

    /// `pi int (f^2 - g^2)`
    pub fn volume(&self) -> Complex64 {
        PI * self.integrate(|_, f, g| f * f - g * g)
    }
}

/// A fixed catalog of profiles selectable by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileSpec {
    Constant { value: f64 },
    Linear { slope: f64, intercept: f64 },
    Power { coef: f64, exponent: f64 },
    /// `z^{-s}`
    NegPower { sigma: f64, t: f64 },
    Zero,
}

impl ProfileSpec {
    pub fn build(&self) -> Profile {
        match *self {
            ProfileSpec::Constant { value } => Arc::new(move |_| Complex64::new(value, 0.0)),
            ProfileSpec::Linear { slope, intercept } => {
                Arc::new(move |z| Complex64::new(slope * z + intercept, 0.0))
            }
            ProfileSpec::Power { coef, exponent } => {
                Arc::new(move |z| Complex64::new(coef * z.powf(exponent), 0.0))
            }
            ProfileSpec::NegPower { sigma, t } => Arc::new(move |z: f64| {
                let ln = z.ln();
                Complex64::from_polar((-sigma * ln).exp(), -t * ln)
            }),
            ProfileSpec::Zero => Arc::new(|_| Complex64::new(0.0, 0.0)),
        }
    }
}

pub fn lamina_from_specs(
    upper: &ProfileSpec,
    lower: &ProfileSpec,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<Lamina> {
    Lamina::new(upper.build(), lower.build(), a, b, panels)
}

const VANISHING_AREA: f64 = 1e-12;

/// Centroid `(xi, eta)` of the lamina.
pub fn lamina_barycenter(lam: &Lamina) -> Result<(Complex64, Complex64)> {
    let area = lam.area();
    if area.norm() <= VANISHING_AREA {
        return Err(Error::VanishingArea(area.norm()));
    }
    let xi = lam.integrate(|z, f, g| z * (f - g)) / area;
    let eta = 0.5 * lam.integrate(|_, f, g| f * f - g * g) / area;
    Ok((xi, eta))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PappusCheck {
    pub volume: Complex64,
    pub area: Complex64,
    pub eta: Complex64,
    /// `|V - 2 pi eta A|`
    pub residual: f64,
}

pub fn pappus_check(lam: &Lamina) -> Result<PappusCheck> {
    let area = lam.area();
    if area.norm() <= VANISHING_AREA {
        return Err(Error::VanishingArea(area.norm()));
    }
    let volume = lam.volume();
    let eta = 0.5 * lam.integrate(|_, f, g| f * f - g * g) / area;
    Ok(PappusCheck {
        volume,
        area,
        eta,
        residual: (volume - 2.0 * PI * eta * area).norm(),
    })
}

/// Quadrature error of the volume against a closed form at `P` and `2P`
/// panels; Simpson's rule should shrink it by about 16x.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub panels: usize,
    pub error_coarse: f64,
    pub error_fine: f64,
    pub ratio: f64,
}

pub fn simpson_order_check(lam: &Lamina, exact_volume: Complex64) -> Result<OrderCheck> {
    let fine = lam.with_panels(lam.panels() * 2)?;
    let error_coarse = (lam.volume() - exact_volume).norm();
    let error_fine = (fine.volume() - exact_volume).norm();
    Ok(OrderCheck {
        panels: lam.panels(),
        error_coarse,
        error_fine,
        ratio: error_coarse / error_fine,
    })
}

/// `pi sum_{n <= N} chi(n)^2 / n^{2s}`: unit-width cylinders over `[n-1, n]`.
pub fn cylinder_volume_sum(chi: &DirichletCharacter, s: SPoint, n_terms: usize) -> Result<Complex64> {
    Ok(PI * chi_square_sum(chi, s, n_terms)?)
}

fn chi_square_sum(chi: &DirichletCharacter, s: SPoint, n_terms: usize) -> Result<Complex64> {
    if n_terms == 0 {
        return Err(Error::Domain("N", "must be at least 1".into()));
    }
    let two_s = SPoint::new(2.0 * s.sigma, 2.0 * s.t)?;
    let mut acc = KahanComplex::default();
    for n in 1..=n_terms {
        let v = chi.value(n as i64);
        if v.is_zero() {
            continue;
        }
        acc.add(v.pow(2).to_complex() * n_pow_minus_s(n as u64, two_s));
    }
    Ok(acc.value())
}

/// `eta_N = sum chi^2(n)/n^{2s} / (2 sum chi(n)/n^s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaImplied {
    pub numerator: Complex64,
    /// `sum_{n <= N} chi(n) / n^s`
    pub partial_sum: Complex64,
    /// `None` when `|partial_sum| < 1e-12`.
    pub eta: Option<Complex64>,
}

pub fn eta_implied(chi: &DirichletCharacter, s: SPoint, n_terms: usize) -> Result<EtaImplied> {
    let numerator = chi_square_sum(chi, s, n_terms)?;
    let partial_sum = crate::analytic::l_partial_sum(chi, s, n_terms)?;
    let eta = (partial_sum.norm() >= 1e-12).then(|| numerator / (2.0 * partial_sum));
    Ok(EtaImplied {
        numerator,
        partial_sum,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{l_partial_sum, LEvalSettings};
    use crate::characters::enumerate_characters;
    use crate::zeros::{scan_critical_line, ScanSettings};

    fn lam(upper: ProfileSpec, a: f64, b: f64) -> Lamina {
        lamina_from_specs(&upper, &ProfileSpec::Zero, a, b, DEFAULT_PANELS).unwrap()
    }

    fn close(z: Complex64, re: f64, tol: f64) -> bool {
        (z - re).norm() < tol
    }

    #[test]
    fn barycenters() {
        let (xi, eta) = lamina_barycenter(&lam(ProfileSpec::Constant { value: 2.0 }, 0.0, 3.0)).unwrap();
        assert!(close(xi, 1.5, 1e-12) && close(eta, 1.0, 1e-12));
        let (xi, eta) = lamina_barycenter(&lam(
            ProfileSpec::Linear {
                slope: 1.0,
                intercept: 0.0,
            },
            0.0,
            1.0,
        ))
        .unwrap();
        assert!(close(xi, 2.0 / 3.0, 1e-12) && close(eta, 1.0 / 3.0, 1e-12));
        let (xi, eta) = lamina_barycenter(&lam(
            ProfileSpec::Power {
                coef: 1.0,
                exponent: 2.0,
            },
            0.0,
            1.0,
        ))
        .unwrap();
        assert!(close(xi, 0.75, 1e-12) && close(eta, 0.3, 1e-12));
    }

    #[test]
    fn pappus_catalog() {
        let cyl = pappus_check(&lam(ProfileSpec::Constant { value: 2.0 }, 0.0, 3.0)).unwrap();
        assert!(close(cyl.volume, 12.0 * PI, 1e-10) && close(cyl.area, 6.0, 1e-12));
        assert!(close(cyl.eta, 1.0, 1e-12) && cyl.residual < 1e-10);
        let cone = pappus_check(&lam(
            ProfileSpec::Linear {
                slope: 1.0,
                intercept: 0.0,
            },
            0.0,
            1.0,
        ))
        .unwrap();
        assert!(close(cone.volume, PI / 3.0, 1e-12) && close(cone.area, 0.5, 1e-12));
        assert!(close(cone.eta, 1.0 / 3.0, 1e-12) && cone.residual < 1e-10);
        let complex = lam(ProfileSpec::NegPower { sigma: 0.5, t: 2.0 }, 1.0, 2.0);
        let p = pappus_check(&complex).unwrap();
        assert!(p.residual < 1e-8);
        // doubled panel count as the quadrature oracle
        let q = pappus_check(&complex.with_panels(2 * DEFAULT_PANELS).unwrap()).unwrap();
        assert!((p.volume - q.volume).norm() < 1e-10);
    }

    #[test]
    fn vanishing_area() {
        let flat = lamina_from_specs(
            &ProfileSpec::Constant { value: 1.0 },
            &ProfileSpec::Constant { value: 1.0 },
            0.0,
            1.0,
            16,
        )
        .unwrap();
        assert!(matches!(pappus_check(&flat), Err(Error::VanishingArea(_))));
        assert!(matches!(lamina_barycenter(&flat), Err(Error::VanishingArea(_))));
        assert!(lamina_from_specs(&ProfileSpec::Zero, &ProfileSpec::Zero, 1.0, 0.0, 16).is_err());
        assert!(lamina_from_specs(&ProfileSpec::Zero, &ProfileSpec::Zero, 0.0, 1.0, 7).is_err());
    }

    #[test]
    fn simpson_is_fourth_order() {
        let exp_profile: Profile = Arc::new(|z: f64| Complex64::new(z.exp(), 0.0));
        let zero: Profile = Arc::new(|_| Complex64::new(0.0, 0.0));
        let lam = Lamina::new(exp_profile, zero, 0.0, 1.0, 8).unwrap();
        let exact = Complex64::new(PI * (1f64.exp().powi(2) - 1.0) / 2.0, 0.0);
        let check = simpson_order_check(&lam, exact).unwrap();
        assert!(check.ratio >= 8.0, "ratio {}", check.ratio);
    }

    #[test]
    fn cylinder_volumes() {
        let zeta = &enumerate_characters(1).unwrap()[0];
        let s = SPoint::new(0.3, 1.7).unwrap();
        assert!(close(cylinder_volume_sum(zeta, s, 1).unwrap(), PI, 1e-15));
        let v = cylinder_volume_sum(zeta, SPoint::new(1.0, 0.0).unwrap(), 1_000_000).unwrap();
        assert!((v.re - PI.powi(3) / 6.0).abs() < 2e-6 * PI);
        for q in [5u64, 7, 12] {
            for chi in enumerate_characters(q).unwrap() {
                let sq = chi.power(2);
                let two_s = SPoint::new(2.0 * s.sigma, 2.0 * s.t).unwrap();
                let lhs = cylinder_volume_sum(&chi, s, 500).unwrap();
                let rhs = PI * l_partial_sum(&sq, two_s, 500).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_examples() {
        let zeta = &enumerate_characters(1).unwrap()[0];
        let e = eta_implied(zeta, SPoint::new(0.4, 2.0).unwrap(), 1).unwrap();
        assert!(close(e.eta.unwrap(), 0.5, 1e-15));
        let e = eta_implied(zeta, SPoint::new(2.0, 0.0).unwrap(), 10_000).unwrap();
        let want = (PI.powi(4) / 90.0) / (2.0 * PI * PI / 6.0);
        assert!((e.eta.unwrap().re - want).abs() < 1e-3);

        let st = LEvalSettings::default();
        let chi4 = &enumerate_characters(4).unwrap()[1];
        let zero = &scan_critical_line(chi4, 5.0, 7.0, 0.01, &st, &ScanSettings::default()).unwrap()[0];
        let e = eta_implied(chi4, SPoint::new(0.5, zero.t).unwrap(), 10_000).unwrap();
        assert!(e.partial_sum.norm() < 0.05);
        assert!(e.eta.unwrap().norm() > 10.0);
    }
}
