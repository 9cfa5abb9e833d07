//! Complex Gamma, Hurwitz zeta and Dirichlet L-function evaluation.
//!
//! `L(s, chi)` is continued to the whole plane through
//! `L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q)`, with each Hurwitz
//! value computed by Euler-Maclaurin summation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::math::KahanComplex;

/// A point `s = sigma + i t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SPoint {
    pub sigma: f64,
    pub t: f64,
}

impl SPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(Error::NonFinite(format!("s = {sigma} + {t}i")));
        }
        Ok(SPoint { sigma, t })
    }

    pub fn real(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0.0)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn conj(self) -> SPoint {
        SPoint {
            sigma: self.sigma,
            t: -self.t,
        }
    }
}

/// Precision knobs for Euler-Maclaurin evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LEvalSettings {
    /// Number of terms summed directly before the Euler-Maclaurin tail.
    /// The effective shift is raised to `|s| + 1` when that is larger.
    pub euler_maclaurin_shift: usize,
    /// Highest Bernoulli index used in the correction, `B_2 ... B_{this}`.
    pub bernoulli_terms: usize,
    /// Default length for direct partial sums.
    pub series_truncation: usize,
    pub target_tolerance: f64,
}

impl Default for LEvalSettings {
    fn default() -> Self {
        LEvalSettings {
            euler_maclaurin_shift: 30,
            bernoulli_terms: 20,
            series_truncation: 1_000_000,
            target_tolerance: 1e-12,
        }
    }
}

impl LEvalSettings {
    pub fn validate(&self) -> Result<()> {
        if self.euler_maclaurin_shift < 10 {
            return Err(Error::Settings(format!(
                "euler_maclaurin_shift must be >= 10, got {}",
                self.euler_maclaurin_shift
            )));
        }
        if !(2..=30).contains(&self.bernoulli_terms) || self.bernoulli_terms % 2 != 0 {
            return Err(Error::Settings(format!(
                "bernoulli_terms must be even in 2..=30, got {}",
                self.bernoulli_terms
            )));
        }
        if !(self.target_tolerance > 0.0) {
            return Err(Error::Settings(format!(
                "target_tolerance must be positive, got {}",
                self.target_tolerance
            )));
        }
        if self.series_truncation == 0 {
            return Err(Error::Settings("series_truncation must be positive".into()));
        }
        Ok(())
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Complex Gamma function (Lanczos, g = 7, nine coefficients).
pub fn gamma(s: SPoint) -> Result<Complex64> {
    let z = s.to_complex();
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            re: z.re,
            im: z.im,
        });
    }
    Ok(gamma_complex(z))
}

fn gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let pi = Complex64::new(PI, 0.0);
        return pi / ((pi * z).sin() * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Bernoulli numbers `B_2, B_4, ..., B_30`.
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// `(e^w - 1) / w`, accurate near zero.
fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        // Taylor series to w^12 (truncation below 1e-22 for |w| < 0.1)
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 2..=13 {
            term = term * w / k as f64;
            acc += term;
        }
        acc
    } else {
        (w.exp() - 1.0) / w
    }
}

/// `zeta(s, a) - 1/(s - 1)`, finite at `s = 1` where it equals `-psi(a)`.
pub(crate) fn hurwitz_regular(s: Complex64, a: f64, settings: &LEvalSettings) -> Complex64 {
    let shift = settings
        .euler_maclaurin_shift
        .max(s.norm().ceil() as usize + 1);
    let mut head = KahanComplex::default();
    for n in 0..shift {
        head.add((-s * (n as f64 + a).ln()).exp());
    }
    let x = shift as f64 + a;
    let ln_x = x.ln();
    let x_pow = (-s * ln_x).exp(); // x^{-s}

    // x^{1-s}/(s-1) - 1/(s-1) = -ln(x) (e^w - 1)/w with w = (1-s) ln x
    let w = (1.0 - s) * ln_x;
    let tail = -ln_x * expm1_over(w);

    let mut corr = Complex64::new(0.0, 0.0);
    // rising = s (s+1) ... (s+2k-2) x^{-s-2k+1}
    let mut rising = s * x_pow / x;
    let mut factorial = 2.0;
    for k in 1..=settings.bernoulli_terms / 2 {
        corr += BERNOULLI[k - 1] / factorial * rising;
        let j = 2 * k as u32;
        rising = rising * (s + (j - 1) as f64) * (s + j as f64) / (x * x);
        factorial *= ((j + 1) * (j + 2)) as f64;
    }
    head.value() + tail + 0.5 * x_pow + corr
}

/// Hurwitz zeta `sum_{n >= 0} (n + a)^{-s}` for `0 < a <= 1`, `s != 1`.
pub fn hurwitz_zeta(s: SPoint, a: f64, settings: &LEvalSettings) -> Result<Complex64> {
    settings.validate()?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain("a", format!("{a} not in (0, 1]")));
    }
    let z = s.to_complex();
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    Ok(hurwitz_regular(z, a, settings) + 1.0 / (z - 1.0))
}

/// `L(s, chi)` anywhere except the pole of principal characters at `s = 1`.
pub fn l_eval(chi: &DirichletCharacter, s: SPoint, settings: &LEvalSettings) -> Result<Complex64> {
    settings.validate()?;
    let z = s.to_complex();
    let q = chi.modulus();
    let principal = chi.is_principal();
    if principal && z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    let qf = q as f64;
    let mut acc = KahanComplex::default();
    for a in 1..=q {
        let v = chi.value(a as i64);
        if v.is_zero() {
            continue;
        }
        let a_over_q = a as f64 / qf;
        let h = if principal {
            hurwitz_regular(z, a_over_q, settings) + 1.0 / (z - 1.0)
        } else {
            // the 1/(s-1) parts cancel because sum_a chi(a) = 0
            hurwitz_regular(z, a_over_q, settings)
        };
        acc.add(v.to_complex() * h);
    }
    Ok((-z * qf.ln()).exp() * acc.value())
}

/// `n^{-s} = e^{-sigma ln n} (cos(t ln n) - i sin(t ln n))`.
pub fn n_pow_minus_s(n: u64, s: SPoint) -> Complex64 {
    let ln_n = (n as f64).ln();
    let (sin, cos) = (s.t * ln_n).sin_cos();
    let mag = (-s.sigma * ln_n).exp();
    Complex64::new(mag * cos, -mag * sin)
}

/// `sum_{n=1}^{N} chi(n) n^{-s}` by direct compensated summation.
pub fn l_partial_sum(chi: &DirichletCharacter, s: SPoint, n_terms: usize) -> Result<Complex64> {
    if n_terms == 0 {
        return Err(Error::Domain("N", "must be at least 1".into()));
    }
    let table = chi.value_table();
    let q = chi.modulus() as usize;
    let mut acc = KahanComplex::default();
    for n in 1..=n_terms {
        let c = table[n % q];
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        acc.add(c * n_pow_minus_s(n as u64, s));
    }
    Ok(acc.value())
}

/// Which form of the functional equation to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalEquationVariant {
    /// `{e^{-i pi s/2} + chi(-1) e^{i pi s/2}}` bracket.
    General,
    /// `2 cos(pi s/2)`, for `chi(-1) = 1`.
    Even,
    /// `-2i sin(pi s/2)`, for `chi(-1) = -1`.
    Odd,
}

impl FunctionalEquationVariant {
    pub fn name(self) -> &'static str {
        match self {
            FunctionalEquationVariant::General => "general",
            FunctionalEquationVariant::Even => "even",
            FunctionalEquationVariant::Odd => "odd",
        }
    }
}

/// Right-hand side of the functional equation for `L(1 - s, chi)`:
/// `(2 pi)^{-s} q^{s-1} tau(chi) Gamma(s) {bracket} L(s, conj chi)`.
///
/// `allow_imprimitive` skips the primitivity check so that the failure of
/// the identity for imprimitive characters can be measured.
pub fn functional_equation_rhs(
    chi: &DirichletCharacter,
    s: SPoint,
    variant: FunctionalEquationVariant,
    settings: &LEvalSettings,
    allow_imprimitive: bool,
) -> Result<Complex64> {
    if !allow_imprimitive && !chi.is_primitive() {
        return Err(Error::Imprimitive(chi.to_string()));
    }
    let parity = chi.parity();
    let z = s.to_complex();
    let i = Complex64::i();
    let half_pi_s = z * (PI / 2.0);
    let bracket = match variant {
        FunctionalEquationVariant::General => {
            (-i * half_pi_s).exp() + parity as f64 * (i * half_pi_s).exp()
        }
        FunctionalEquationVariant::Even => {
            if parity != 1 {
                return Err(Error::Parity {
                    variant: "even",
                    expected: 1,
                    actual: parity,
                });
            }
            2.0 * half_pi_s.cos()
        }
        FunctionalEquationVariant::Odd => {
            if parity != -1 {
                return Err(Error::Parity {
                    variant: "odd",
                    expected: -1,
                    actual: parity,
                });
            }
            -2.0 * i * half_pi_s.sin()
        }
    };
    let q = chi.modulus() as f64;
    let factor = (-z * (2.0 * PI).ln()).exp() * ((z - 1.0) * q.ln()).exp();
    let l_bar = l_eval(&chi.conjugate(), s, settings)?;
    Ok(factor * chi.gauss_sum() * gamma(s)? * bracket * l_bar)
}

/// `|L(1 - s, chi) - rhs(chi, s, general)|`.
pub fn functional_equation_residual(
    chi: &DirichletCharacter,
    s: SPoint,
    settings: &LEvalSettings,
    allow_imprimitive: bool,
) -> Result<f64> {
    let lhs = l_eval(chi, SPoint::from_complex(1.0 - s.to_complex())?, settings)?;
    let rhs = functional_equation_rhs(
        chi,
        s,
        FunctionalEquationVariant::General,
        settings,
        allow_imprimitive,
    )?;
    Ok((lhs - rhs).norm())
}
