//! Formal (non-conjugating) bilinear geometry on complex n-space.
//!
//! The "dot product" here is `sum u_k v_k` with no conjugation, so squared
//! lengths are complex and nonzero vectors can have zero length (isotropic
//! vectors). Square roots are always principal: argument in `(-pi/2, pi/2]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{l_partial_sum, SPoint};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::math::KahanComplex;
use crate::series::trig_log_partial_sums;

/// Formal norms below this modulus are treated as zero.
pub const ISOTROPIC_EPS: f64 = 1e-12;

/// Principal square root; `-0.0` imaginary parts are treated as `+0.0` so
/// that negative reals map to the positive imaginary axis.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let z = Complex64::new(z.re, if z.im == 0.0 { 0.0 } else { z.im });
    z.sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormalVector(Vec<Complex64>);

impl FormalVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("dimension", "must be at least 1".into()));
        }
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector component".into()));
        }
        Ok(FormalVector(components))
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    /// `other - self`, the edge from `self` to `other`.
    pub fn to(&self, other: &FormalVector) -> Result<FormalVector> {
        check_dims(self, other)?;
        Ok(FormalVector(
            self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect(),
        ))
    }
}

fn check_dims(u: &FormalVector, v: &FormalVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(())
}

/// `sum_k u_k v_k`.
pub fn formal_dot(u: &FormalVector, v: &FormalVector) -> Result<Complex64> {
    check_dims(u, v)?;
    let mut acc = KahanComplex::default();
    for (a, b) in u.0.iter().zip(&v.0) {
        acc.add(a * b);
    }
    Ok(acc.value())
}

pub fn formal_norm_sq(v: &FormalVector) -> Complex64 {
    formal_dot(v, v).expect("same vector")
}

/// Principal square root of the bilinear self-product.
pub fn formal_norm(v: &FormalVector) -> Complex64 {
    principal_sqrt(formal_norm_sq(v))
}

/// The two angle pairings reported for a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pairing {
    /// Angle between `AB` and `AC`, opposite side `BC`.
    AbAc,
    /// Angle between `AC` and `BC`, opposite side `AB`.
    AcBc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub pairing: Pairing,
    pub dot: Complex64,
    /// `(|X|^2 + |Y|^2 - |Z|^2) / 2` from the cosine law.
    pub cosine_law_half: Complex64,
    pub cos_theta: Complex64,
    pub sin_theta: Complex64,
    /// `|X|^2 |Y|^2 - (X.Y)^2`, i.e. `(2 S)^2`.
    pub area_radicand: Complex64,
    pub area: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub a: FormalVector,
    pub b: FormalVector,
    pub c: FormalVector,
    pub ab: FormalVector,
    pub ac: FormalVector,
    pub bc: FormalVector,
    pub norm_sq_ab: Complex64,
    pub norm_sq_ac: Complex64,
    pub norm_sq_bc: Complex64,
    pub pairings: [PairingReport; 2],
}

impl TriangleReport {
    pub fn pairing(&self, p: Pairing) -> &PairingReport {
        match p {
            Pairing::AbAc => &self.pairings[0],
            Pairing::AcBc => &self.pairings[1],
        }
    }
}

fn pairing_report(
    pairing: Pairing,
    x: &FormalVector,
    y: &FormalVector,
    nx: Complex64,
    ny: Complex64,
    nz: Complex64,
) -> Result<PairingReport> {
    let dot = formal_dot(x, y)?;
    let root_x = principal_sqrt(nx);
    let root_y = principal_sqrt(ny);
    let cos_theta = dot / (root_x * root_y);
    let sin_theta = principal_sqrt(1.0 - cos_theta * cos_theta);
    // The product |X||Y| sin(theta) is collapsed into a single principal
    // root of its square: 1/2 sqrt(|X|^2 |Y|^2 (1 - cos^2)).
    let area_radicand = nx * ny - dot * dot;
    Ok(PairingReport {
        pairing,
        dot,
        cosine_law_half: (nx + ny - nz) / 2.0,
        cos_theta,
        sin_theta,
        area_radicand,
        area: 0.5 * principal_sqrt(area_radicand),
    })
}

/// Both sides of the cosine law for the pairings `(AB, AC)` and `(AC, BC)`.
pub fn cosine_theorem_check(
    a: &FormalVector,
    b: &FormalVector,
    c: &FormalVector,
) -> Result<TriangleReport> {
    check_dims(a, b)?;
    check_dims(a, c)?;
    if a == b || a == c || b == c {
        return Err(Error::DegenerateTriangle);
    }
    let ab = a.to(b)?;
    let ac = a.to(c)?;
    let bc = b.to(c)?;
    let (nab, nac, nbc) = (formal_norm_sq(&ab), formal_norm_sq(&ac), formal_norm_sq(&bc));
    for (name, n) in [("AB", nab), ("AC", nac), ("BC", nbc)] {
        if n.norm() < ISOTROPIC_EPS {
            return Err(Error::DegenerateMetric(name));
        }
    }
    let first = pairing_report(Pairing::AbAc, &ab, &ac, nab, nac, nbc)?;
    let second = pairing_report(Pairing::AcBc, &ac, &bc, nac, nbc, nab)?;
    Ok(TriangleReport {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        ab,
        ac,
        bc,
        norm_sq_ab: nab,
        norm_sq_ac: nac,
        norm_sq_bc: nbc,
        pairings: [first, second],
    })
}

/// `1/2 |X| |Y| sin(theta)` for the chosen pairing.
pub fn triangle_area(
    a: &FormalVector,
    b: &FormalVector,
    c: &FormalVector,
    pairing: Pairing,
) -> Result<Complex64> {
    check_dims(a, b)?;
    check_dims(a, c)?;
    if a == b || a == c || b == c {
        return Err(Error::DegenerateTriangle);
    }
    let (x, y, names) = match pairing {
        Pairing::AbAc => (a.to(b)?, a.to(c)?, ("AB", "AC")),
        Pairing::AcBc => (a.to(c)?, b.to(c)?, ("AC", "BC")),
    };
    let (nx, ny) = (formal_norm_sq(&x), formal_norm_sq(&y));
    if nx.norm() < ISOTROPIC_EPS {
        return Err(Error::DegenerateMetric(names.0));
    }
    if ny.norm() < ISOTROPIC_EPS {
        return Err(Error::DegenerateMetric(names.1));
    }
    let dot = formal_dot(&x, &y)?;
    Ok(0.5 * principal_sqrt(nx * ny - dot * dot))
}

#[derive(Clone, Debug, Deserialize)]
struct GoldenFile {
    examples: Vec<TriangleExample>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GoldenArea {
    pub scale: f64,
    pub radicand: Complex64,
}

/// A worked triangle with its printed values.
#[derive(Clone, Debug, Deserialize)]
pub struct TriangleExample {
    pub id: u32,
    #[serde(rename = "A")]
    pub a: Vec<Complex64>,
    #[serde(rename = "B")]
    pub b: Vec<Complex64>,
    #[serde(rename = "C")]
    pub c: Vec<Complex64>,
    pub edges: std::collections::BTreeMap<String, Vec<Complex64>>,
    pub norm_sq: std::collections::BTreeMap<String, Complex64>,
    pub dot: std::collections::BTreeMap<String, Complex64>,
    pub area: GoldenArea,
}

impl TriangleExample {
    pub fn vertices(&self) -> Result<(FormalVector, FormalVector, FormalVector)> {
        Ok((
            FormalVector::new(self.a.clone())?,
            FormalVector::new(self.b.clone())?,
            FormalVector::new(self.c.clone())?,
        ))
    }

    pub fn expected_area(&self) -> Complex64 {
        self.area.scale * principal_sqrt(self.area.radicand)
    }
}

/// Raw golden-vector file for the three worked triangles.
pub const TRIANGLE_EXAMPLES_JSON: &str = include_str!("../data/triangle_examples.json");

pub fn triangle_examples() -> Vec<TriangleExample> {
    serde_json::from_str::<GoldenFile>(TRIANGLE_EXAMPLES_JSON)
        .expect("embedded golden file parses")
        .examples
}

pub fn triangle_example(id: u32) -> Result<TriangleExample> {
    triangle_examples()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Domain("example", format!("{id} not in 1..=3")))
}

/// How the terms of `L(s, chi)` are split into two vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arrangement {
    /// `u_n = chi(n)/n^sigma`, `v_n = n^{-it}`.
    ChiInU,
    /// `u_n = 1/n^sigma`, `v_n = chi(n)/n^{it}`.
    ChiInV,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorForm {
    #[serde(skip)]
    pub u: Option<FormalVector>,
    #[serde(skip)]
    pub v: Option<FormalVector>,
    pub n_terms: usize,
    pub arrangement: Arrangement,
    pub dot: Complex64,
    pub partial_sum: Complex64,
    pub norm_u_sq: Complex64,
    pub norm_v_sq: Complex64,
    /// `None` when either formal norm vanishes.
    pub cos_theta: Option<Complex64>,
}

/// Truncate `L(s, chi)` to `N` terms and write it as a formal dot product.
pub fn l_vector_form(
    chi: &DirichletCharacter,
    s: SPoint,
    n_terms: usize,
    arrangement: Arrangement,
) -> Result<VectorForm> {
    if n_terms == 0 {
        return Err(Error::Domain("N", "must be at least 1".into()));
    }
    let table = chi.value_table();
    let q = chi.modulus() as usize;
    let mut u = Vec::with_capacity(n_terms);
    let mut v = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let ln_n = (n as f64).ln();
        let chi_n = table[n % q];
        let mag = Complex64::new((-s.sigma * ln_n).exp(), 0.0);
        let (sin, cos) = (s.t * ln_n).sin_cos();
        let phase = Complex64::new(cos, -sin);
        match arrangement {
            Arrangement::ChiInU => {
                u.push(chi_n * mag);
                v.push(phase);
            }
            Arrangement::ChiInV => {
                u.push(mag);
                v.push(chi_n * phase);
            }
        }
    }
    let u = FormalVector::new(u)?;
    let v = FormalVector::new(v)?;
    let dot = formal_dot(&u, &v)?;
    let norm_u_sq = formal_norm_sq(&u);
    let norm_v_sq = formal_norm_sq(&v);
    let cos_theta = (norm_u_sq.norm() >= ISOTROPIC_EPS && norm_v_sq.norm() >= ISOTROPIC_EPS)
        .then(|| dot / (principal_sqrt(norm_u_sq) * principal_sqrt(norm_v_sq)));
    Ok(VectorForm {
        u: Some(u),
        v: Some(v),
        n_terms,
        arrangement,
        dot,
        partial_sum: l_partial_sum(chi, s, n_terms)?,
        norm_u_sq,
        norm_v_sq,
        cos_theta,
    })
}

/// `(1 - 8 a^2 b^2, 4 a b (a^2 - b^2))` where `chi(n) = a + i b`; these are the
/// real and imaginary parts of `chi(n)^4`.
pub fn chi4_components(chi: &DirichletCharacter, n: i64) -> Result<(f64, f64)> {
    let v = chi.value(n);
    if v.is_zero() {
        return Err(Error::ZeroValue {
            q: chi.modulus(),
            n,
        });
    }
    let z = v.to_complex();
    let (a, b) = (z.re, z.im);
    Ok((1.0 - 8.0 * a * a * b * b, 4.0 * a * b * (a * a - b * b)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticForm {
    pub n_terms: usize,
    /// `sum (1 - 8 a_n^2 b_n^2) / n^{4 sigma}`
    pub a_real: f64,
    /// `sum 4 a_n b_n (a_n^2 - b_n^2) / n^{4 sigma}`
    pub a_imag: f64,
    /// `sum n^{-4it} = S^cos - i S^sin`
    pub b: Complex64,
    /// Largest `|partial sum|` of each component series over `n <= N`.
    pub max_abs_real_partial: f64,
    pub max_abs_imag_partial: f64,
}

pub fn quartic_form(chi: &DirichletCharacter, s: SPoint, n_terms: usize) -> Result<QuarticForm> {
    if n_terms == 0 {
        return Err(Error::Domain("N", "must be at least 1".into()));
    }
    let mut re = crate::math::KahanSum::new();
    let mut im = crate::math::KahanSum::new();
    let (mut max_re, mut max_im) = (0f64, 0f64);
    for n in 1..=n_terms {
        if chi.value(n as i64).is_zero() {
            continue;
        }
        let (cr, ci) = chi4_components(chi, n as i64)?;
        let w = (-4.0 * s.sigma * (n as f64).ln()).exp();
        re.add(cr * w);
        im.add(ci * w);
        max_re = max_re.max(re.value().abs());
        max_im = max_im.max(im.value().abs());
    }
    let probe = trig_log_partial_sums(s.t, &[n_terms as u64])?;
    let cp = probe.checkpoints[0];
    Ok(QuarticForm {
        n_terms,
        a_real: re.value(),
        a_imag: im.value(),
        b: Complex64::new(cp.s_cos, -cp.s_sin),
        max_abs_real_partial: max_re,
        max_abs_imag_partial: max_im,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, RootOfUnity};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn triangle_dots_and_norms() {
        for ex in triangle_examples() {
            let (a, b, cc) = ex.vertices().unwrap();
            let report = cosine_theorem_check(&a, &b, &cc).unwrap();
            assert_eq!(report.norm_sq_ab, ex.norm_sq["AB"]);
            assert_eq!(report.norm_sq_ac, ex.norm_sq["AC"]);
            assert_eq!(report.norm_sq_bc, ex.norm_sq["BC"]);
            assert_eq!(report.ab.components(), &ex.edges["AB"][..]);
            assert_eq!(report.pairings[0].dot, ex.dot["AB_AC"]);
            assert_eq!(report.pairings[1].dot, ex.dot["AC_BC"]);
            assert_eq!(report.pairings[0].cosine_law_half, ex.dot["AB_AC"]);
            assert_eq!(report.pairings[1].cosine_law_half, ex.dot["AC_BC"]);
            let want = ex.expected_area();
            for p in &report.pairings {
                assert!((p.area - want).norm() <= 1e-10 * want.norm(), "example {}", ex.id);
                let s2 = p.sin_theta * p.sin_theta + p.cos_theta * p.cos_theta;
                assert!((s2 - 1.0).norm() < 1e-10);
            }
            assert_eq!(report.pairings[0].area, report.pairings[1].area);
        }
    }

    #[test]
    fn specific_printed_values() {
        let ex1 = triangle_example(1).unwrap();
        let (a, b, cc) = ex1.vertices().unwrap();
        let ab = a.to(&b).unwrap();
        let ac = a.to(&cc).unwrap();
        assert_eq!(formal_dot(&ab, &ac).unwrap(), c(9.0, -2.0));
        assert_eq!(formal_norm_sq(&ab), c(2.0, -8.0));
        let area = triangle_area(&a, &b, &cc, Pairing::AbAc).unwrap();
        assert!((4.0 * area * area - c(-15.0, -8.0)).norm() < 1e-12);
        let ex2 = triangle_example(2).unwrap();
        let (a, b, cc) = ex2.vertices().unwrap();
        assert_eq!(formal_dot(&a.to(&cc).unwrap(), &b.to(&cc).unwrap()).unwrap(), c(6.0, 0.0));
        assert_eq!(formal_norm_sq(&a.to(&b).unwrap()), c(-24.0, 0.0));
        let r = cosine_theorem_check(&a, &b, &cc).unwrap();
        assert!((r.pairings[0].area - principal_sqrt(c(-3.0, 4.0))).norm() < 1e-12);
        let ex3 = triangle_example(3).unwrap();
        let (a, b, cc) = ex3.vertices().unwrap();
        let r = cosine_theorem_check(&a, &b, &cc).unwrap();
        assert_eq!(r.pairings[0].dot, c(-68.0, -251.0));
        assert_eq!(r.pairings[1].cosine_law_half, c(-37.0, 141.0));
        assert!(triangle_example(4).is_err());
    }

    #[test]
    fn euclidean_cases() {
        let v = FormalVector::from_pairs(&[(3.0, 0.0), (4.0, 0.0)]).unwrap();
        assert_eq!(formal_norm(&v), c(5.0, 0.0));
        let a = FormalVector::from_pairs(&[(0.0, 0.0), (0.0, 0.0)]).unwrap();
        let b = FormalVector::from_pairs(&[(1.0, 0.0), (0.0, 0.0)]).unwrap();
        let cc = FormalVector::from_pairs(&[(2.0, 0.0), (0.0, 0.0)]).unwrap();
        let r = cosine_theorem_check(&a, &b, &cc).unwrap();
        assert_eq!(r.pairings[0].cos_theta, c(1.0, 0.0));
    }

    #[test]
    fn negative_real_norm_uses_positive_imaginary_root() {
        let v = FormalVector::new(vec![c(0.0, -2.0), c(0.0, 2.0), c(0.0, -4.0)]).unwrap();
        let n = formal_norm(&v);
        assert!(n.re.abs() < 1e-15 && n.im > 0.0);
        assert!((n.im - 24f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn isotropic_and_mismatched_inputs() {
        // (1, i) has formal length zero
        let a = FormalVector::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = FormalVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let cc = FormalVector::new(vec![c(2.0, 0.0), c(0.0, 5.0)]).unwrap();
        assert!(matches!(cosine_theorem_check(&a, &b, &cc), Err(Error::DegenerateMetric("AB"))));
        assert!(matches!(triangle_area(&a, &b, &cc, Pairing::AbAc), Err(Error::DegenerateMetric("AB"))));
        let short = FormalVector::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(formal_dot(&a, &short), Err(Error::DimensionMismatch(2, 1))));
        assert!(matches!(cosine_theorem_check(&a, &a, &b), Err(Error::DegenerateTriangle)));
        assert!(FormalVector::new(vec![]).is_err());
    }

    #[test]
    fn vector_form_identity() {
        let chi4 = &enumerate_characters(4).unwrap()[1];
        let s = SPoint::new(0.5, 6.0).unwrap();
        let f = l_vector_form(chi4, s, 1000, Arrangement::ChiInU).unwrap();
        assert!((f.dot - f.partial_sum).norm() < 1e-12);
        let oracle: f64 = (1..=1000).filter(|n| n % 2 == 1).map(|n| 1.0 / n as f64).sum();
        assert!((f.norm_u_sq.re - oracle).abs() < 1e-10 && f.norm_u_sq.im.abs() < 1e-12);
        let g = l_vector_form(chi4, s, 1000, Arrangement::ChiInV).unwrap();
        assert!((g.dot - g.partial_sum).norm() < 1e-12);
        let one = l_vector_form(chi4, s, 1, Arrangement::ChiInU).unwrap();
        assert_eq!(one.u.unwrap().components(), &[c(1.0, 0.0)]);
        assert_eq!(one.v.unwrap().components(), &[c(1.0, 0.0)]);
        assert_eq!(one.cos_theta, Some(c(1.0, 0.0)));
    }

    #[test]
    fn chi4_examples() {
        let one = enumerate_characters(5).unwrap()[0].clone();
        assert_eq!(chi4_components(&one, 2).unwrap(), (1.0, 0.0));
        let quartic = enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.value(2).order() == Some(4))
            .unwrap();
        // chi(2) = +-i
        let (re, im) = chi4_components(&quartic, 2).unwrap();
        assert!((re - 1.0).abs() < 1e-15 && im.abs() < 1e-15);
        // an eighth root of unity: alpha = beta = sqrt(2)/2
        let z = RootOfUnity::new(1, 8).to_complex();
        let (a, b) = (z.re, z.im);
        let comps = (1.0 - 8.0 * a * a * b * b, 4.0 * a * b * (a * a - b * b));
        assert!((comps.0 + 1.0).abs() < 1e-15 && comps.1.abs() < 1e-15);
        let chi16 = enumerate_characters(17)
            .unwrap()
            .into_iter()
            .find(|c| c.value(3).order() == Some(16))
            .unwrap();
        // 3 generates mod 17; pick n whose value is the eighth root e(1/8)
        let n = (1..17).find(|&n| chi16.value(n).angle() == Some((1, 8))).unwrap();
        let (re, im) = chi4_components(&chi16, n).unwrap();
        assert!((re + 1.0).abs() < 1e-14 && im.abs() < 1e-14);
        assert!(matches!(chi4_components(&one, 5), Err(Error::ZeroValue { .. })));
    }

    #[test]
    fn quartic_form_bounds() {
        let quartic = enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.value(2).order() == Some(4))
            .unwrap();
        let s = SPoint::new(0.5, 3.0).unwrap();
        let f = quartic_form(&quartic, s, 10_000).unwrap();
        let bound = PI * PI / 6.0;
        assert!(f.max_abs_real_partial < bound && f.max_abs_imag_partial < bound);
        // oracle: exponent-quadrupled character, exact values
        let fourth = quartic.power(4);
        let oracle: f64 = (1..=10_000i64)
            .map(|n| fourth.value(n).to_complex().re / (n as f64).powi(2))
            .sum();
        assert!((f.a_real - oracle).abs() < 1e-9);
        let flat = quartic_form(&quartic, SPoint::new(0.5, 0.0).unwrap(), 777).unwrap();
        assert_eq!(flat.b, c(777.0, 0.0));
    }
}
