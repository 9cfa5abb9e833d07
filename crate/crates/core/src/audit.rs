//! Claim registry and audit runner.
//!
//! Each claim ties a quantitative assertion to an experiment built from the
//! other modules, with explicit thresholds. A claim that does not hold is a
//! `FAIL` verdict, not an error.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analytic::{functional_equation_residual, l_eval, LEvalSettings, SPoint};
use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::error::{Error, Result};
use crate::format::{fmt_complex, fmt_real};
use crate::geometry::{triangle_examples, cosine_theorem_check, l_vector_form, quartic_form, Arrangement};
use crate::revolution::{
    cylinder_volume_sum, lamina_from_specs, pappus_check, simpson_order_check, Lamina, ProfileSpec,
    DEFAULT_PANELS,
};
use crate::series::{growth_exponent, transient_free_checkpoints, trig_log_partial_sums, Family};
use crate::zeros::{
    default_sigma_grid, ordinate_spacing_probe, scan_critical_line, sigma_scan, with_threads, ScanSettings,
    ZeroRecord,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::C1,
        ClaimId::C2,
        ClaimId::C3,
        ClaimId::C4,
        ClaimId::C5,
        ClaimId::C6,
        ClaimId::C7,
        ClaimId::C8,
        ClaimId::C9,
    ];
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Registry entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub id: ClaimId,
    /// Topic of the source assertion.
    pub topic: &'static str,
    /// The assertion, restated.
    pub assertion: &'static str,
    /// `module::operation` the experiment calls.
    pub operation: &'static str,
    pub parameters: &'static str,
    pub verdict_rule: &'static str,
    /// Verdict the assertion predicts.
    pub expected: Verdict,
}

pub fn registry() -> Vec<Claim> {
    vec![
        Claim {
            id: ClaimId::C1,
            topic: "functional equation",
            assertion: "L(s, chi) = (2 pi)^(-s) q^(s-1) tau(chi) Gamma(s) [e^(-i pi s/2) + chi(-1) e^(i pi s/2)] L(1-s, conj chi)",
            operation: "analytic::functional_equation_residual",
            parameters: "all chi with q <= 20; s on a 5x5 grid of [0.2, 0.8] x [-3, 3]",
            verdict_rule: "PASS if max residual over primitive chi < 1e-8, else FAIL",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C2,
            topic: "central value",
            assertion: "L(1/2, chi) = 0 for real characters",
            operation: "analytic::l_eval",
            parameters: "real primitive chi, 3 <= q <= 163, s = 1/2",
            verdict_rule: "PASS if every |L(1/2, chi)| < 1e-3, else FAIL",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C3,
            topic: "trigonometric series",
            assertion: "sum cos(4t ln n) and sum sin(4t ln n) stay bounded as N grows",
            operation: "series::growth_exponent",
            parameters: "t = 0.1 .. 5 (20 values), N <= 1e5, fit from N >= 5 sqrt(1 + 16 t^2)",
            verdict_rule: "FAIL if any slope >= 0.75; PASS if all slopes <= 0.25; else INCONCLUSIVE",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C4,
            topic: "location of zeros",
            assertion: "a zero ordinate admits only sigma = 1/2 in the critical strip",
            operation: "zeros::sigma_scan",
            parameters: "zeros of zeta on [0, 30] and of chi mod 4 on [0, 20]; sigma = 0.01 .. 0.99",
            verdict_rule: "PASS if every profile has a unique argmin within 0.01 of sigma = 1/2",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C5,
            topic: "worked triangle examples",
            assertion: "complex cosine law, dot products and areas for three triangles",
            operation: "geometry::cosine_theorem_check",
            parameters: "Examples 1-3",
            verdict_rule: "PASS if every printed value is reproduced to 1e-10 relative error and both area pairings agree exactly",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C6,
            topic: "solid of revolution",
            assertion: "V = 2 pi eta A for a lamina with complex profiles",
            operation: "revolution::pappus_check",
            parameters: "catalog laminas and 100 random polynomial laminas on [0, 1]",
            verdict_rule: "PASS if every residual |V - 2 pi eta A| < 1e-8",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C7,
            topic: "Gauss sums",
            assertion: "tau(chi) tau(conj chi) = chi(-1) q",
            operation: "characters::gauss_sum",
            parameters: "all chi with q <= 50, split into primitive and imprimitive",
            verdict_rule: "PASS if max primitive residual < 1e-9; imprimitive residuals reported separately",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C8,
            topic: "squared character series",
            assertion: "sum chi^2(n)/n^(2s) = 0 wherever L(s, chi) = 0",
            operation: "analytic::l_eval",
            parameters: "sum chi^2(n)/n^(2s) = L(2s, chi^2) at the scanned zeros used by C4",
            verdict_rule: "FAIL if any |L(2 rho, chi^2)| > 1e-3; PASS if all < 1e-3",
            expected: Verdict::Pass,
        },
        Claim {
            id: ClaimId::C9,
            topic: "zero spacing",
            assertion: "(t1 - t2) ln n = 2 k pi for integers k and every n",
            operation: "zeros::ordinate_spacing_probe",
            parameters: "consecutive zeta zeros on [0, 30], n = 2 .. 10",
            verdict_rule: "PASS if every |offset from an integer| < 0.01, else FAIL",
            expected: Verdict::Pass,
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditSettings {
    pub l_eval: LEvalSettings,
    pub scan: ScanSettings,
    pub scan_step: f64,
    pub seed: u64,
    /// Zero all clock-derived fields so reports are byte-reproducible.
    pub fixed_clock: bool,
}

impl Default for AuditSettings {
    fn default() -> Self {
        AuditSettings {
            l_eval: LEvalSettings::default(),
            scan: ScanSettings::default(),
            scan_step: 0.01,
            seed: 20240101,
            fixed_clock: false,
        }
    }
}

/// A named table of evidence produced by one operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceTable {
    pub name: String,
    pub operation: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl EvidenceTable {
    fn new(name: &str, operation: &str, columns: &[&str]) -> Self {
        EvidenceTable {
            name: name.into(),
            operation: operation.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

fn check(name: &str, ok: bool, detail: String) -> SubCheck {
    SubCheck {
        name: name.into(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        detail,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: ClaimId,
    pub topic: String,
    pub assertion: String,
    pub operation: String,
    pub parameters: String,
    pub verdict_rule: String,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub summary: String,
    pub checks: Vec<SubCheck>,
    pub evidence: Vec<EvidenceTable>,
    pub notes: Vec<String>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub toolkit_version: String,
    /// Seconds since the Unix epoch; 0 in fixed-clock mode.
    pub generated_at: u64,
    pub settings: AuditSettings,
    pub claims: Vec<ClaimResult>,
    pub total_runtime_ms: u64,
}

impl AuditReport {
    pub fn claim(&self, id: ClaimId) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }
}

struct Outcome {
    verdict: Verdict,
    summary: String,
    checks: Vec<SubCheck>,
    evidence: Vec<EvidenceTable>,
    notes: Vec<String>,
}

fn f(x: f64) -> Value {
    json!(x)
}

/// Parse a comma-separated claim list such as `C1,C5`.
pub fn parse_selection(list: &str) -> Result<BTreeSet<ClaimId>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(ClaimId::from_str)
        .collect()
}

/// Run the selected claims. Claims run independently (in parallel when
/// `threads > 1`) and the report lists them in id order.
pub fn run_audit(selection: &BTreeSet<ClaimId>, settings: &AuditSettings) -> Result<AuditReport> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    settings.l_eval.validate()?;
    let start = Instant::now();
    let registry = registry();
    let claims: Vec<&Claim> = registry.iter().filter(|c| selection.contains(&c.id)).collect();
    let threads = settings.scan.threads;
    let run_one = |claim: &&Claim| -> ClaimResult {
        let t0 = Instant::now();
        let outcome = run_claim(claim.id, settings).unwrap_or_else(|e| Outcome {
            verdict: Verdict::Inconclusive,
            summary: format!("experiment did not complete: {e}"),
            checks: Vec::new(),
            evidence: Vec::new(),
            notes: Vec::new(),
        });
        ClaimResult {
            id: claim.id,
            topic: claim.topic.into(),
            assertion: claim.assertion.into(),
            operation: claim.operation.into(),
            parameters: claim.parameters.into(),
            verdict_rule: claim.verdict_rule.into(),
            expected: claim.expected,
            verdict: outcome.verdict,
            summary: outcome.summary,
            checks: outcome.checks,
            evidence: outcome.evidence,
            notes: outcome.notes,
            runtime_ms: if settings.fixed_clock {
                0
            } else {
                t0.elapsed().as_millis() as u64
            },
        }
    };
    let results: Vec<ClaimResult> = with_threads(threads, || {
        if threads > 1 {
            claims.par_iter().map(run_one).collect()
        } else {
            claims.iter().map(run_one).collect()
        }
    });
    let generated_at = if settings.fixed_clock {
        0
    } else {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    };
    Ok(AuditReport {
        schema_version: REPORT_SCHEMA_VERSION,
        toolkit_version: env!("CARGO_PKG_VERSION").into(),
        generated_at,
        settings: *settings,
        claims: results,
        total_runtime_ms: if settings.fixed_clock {
            0
        } else {
            start.elapsed().as_millis() as u64
        },
    })
}

fn run_claim(id: ClaimId, settings: &AuditSettings) -> Result<Outcome> {
    match id {
        ClaimId::C1 => claim_functional_equation(settings),
        ClaimId::C2 => claim_central_values(settings),
        ClaimId::C3 => claim_series_growth(),
        ClaimId::C4 => claim_sigma_uniqueness(settings),
        ClaimId::C5 => claim_triangle_examples(),
        ClaimId::C6 => claim_pappus(settings),
        ClaimId::C7 => claim_gauss_identity(),
        ClaimId::C8 => claim_chi_square_at_zeros(settings),
        ClaimId::C9 => claim_ordinate_spacing(settings),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Functional-equation residual grid: `s` in `[0.2, 0.8] x [-3, 3]`, 5x5.
pub fn functional_equation_grid() -> Vec<SPoint> {
    let mut out = Vec::new();
    for sigma in linspace(0.2, 0.8, 5) {
        for t in linspace(-3.0, 3.0, 5) {
            out.push(SPoint { sigma, t });
        }
    }
    out
}

pub const C1_THRESHOLD: f64 = 1e-8;

fn claim_functional_equation(settings: &AuditSettings) -> Result<Outcome> {
    let grid = functional_equation_grid();
    let mut table = EvidenceTable::new(
        "functional_equation_residuals",
        "analytic::functional_equation_residual",
        &["q", "index", "primitive", "parity", "max_residual"],
    );
    let (mut max_prim, mut max_imprim) = (0f64, 0f64);
    let (mut n_prim, mut n_imprim) = (0, 0);
    for q in 1..=20 {
        for chi in enumerate_characters(q)? {
            let mut worst = 0f64;
            for &s in &grid {
                worst = worst.max(functional_equation_residual(&chi, s, &settings.l_eval, true)?);
            }
            if chi.is_primitive() {
                max_prim = max_prim.max(worst);
                n_prim += 1;
            } else {
                max_imprim = max_imprim.max(worst);
                n_imprim += 1;
            }
            table.push(vec![
                json!(q),
                json!(chi.index()),
                json!(chi.is_primitive()),
                json!(chi.parity()),
                f(worst),
            ]);
        }
    }
    let ok = max_prim < C1_THRESHOLD;
    Ok(Outcome {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        summary: format!(
            "max residual {} over {n_prim} primitive characters; {} over {n_imprim} imprimitive",
            fmt_real(max_prim),
            fmt_real(max_imprim)
        ),
        checks: vec![
            check(
                "primitive population",
                ok,
                format!("max residual {} (threshold 1e-8)", fmt_real(max_prim)),
            ),
            check(
                "imprimitive population (identity stated without primitivity)",
                max_imprim < C1_THRESHOLD,
                format!("max residual {}", fmt_real(max_imprim)),
            ),
        ],
        evidence: vec![table],
        notes: vec![],
    })
}

/// Real primitive characters with `q_lo <= q <= q_hi`.
pub fn real_primitive_characters(q_lo: u64, q_hi: u64) -> Result<Vec<DirichletCharacter>> {
    let mut out = Vec::new();
    for q in q_lo..=q_hi {
        out.extend(
            enumerate_characters(q)?
                .into_iter()
                .filter(|c| c.is_real() && c.is_primitive() && !c.is_principal()),
        );
    }
    Ok(out)
}

pub const C2_THRESHOLD: f64 = 1e-3;

fn claim_central_values(settings: &AuditSettings) -> Result<Outcome> {
    let half = SPoint { sigma: 0.5, t: 0.0 };
    let mut table = EvidenceTable::new(
        "central_values",
        "analytic::l_eval",
        &["q", "index", "parity", "re", "im", "abs"],
    );
    let mut values = Vec::new();
    for chi in real_primitive_characters(3, 163)? {
        let v = l_eval(&chi, half, &settings.l_eval)?;
        values.push((chi.parity(), v.norm()));
        table.push(vec![
            json!(chi.modulus()),
            json!(chi.index()),
            json!(chi.parity()),
            f(v.re),
            f(v.im),
            f(v.norm()),
        ]);
    }
    let min_of = |parity: Option<i8>| {
        values
            .iter()
            .filter(|(p, _)| parity.map_or(true, |want| *p == want))
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min)
    };
    let (min_all, min_even, min_odd) = (min_of(None), min_of(Some(1)), min_of(Some(-1)));
    let max_all = values.iter().map(|v| v.1).fold(0f64, f64::max);
    let verdict = if max_all < C2_THRESHOLD {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Outcome {
        verdict,
        summary: format!(
            "{} real primitive characters; min |L(1/2, chi)| = {}",
            values.len(),
            fmt_real(min_all)
        ),
        checks: vec![
            check(
                "all central values exceed 1e-3",
                min_all > C2_THRESHOLD,
                format!("min {}", fmt_real(min_all)),
            ),
            check(
                "even characters vanish at 1/2",
                min_even < C2_THRESHOLD,
                format!("min over even {}", fmt_real(min_even)),
            ),
            check(
                "odd characters vanish at 1/2",
                min_odd < C2_THRESHOLD,
                format!("min over odd {}", fmt_real(min_odd)),
            ),
        ],
        evidence: vec![table],
        notes: vec![],
    })
}

/// The 20 ordinates used for the growth experiment.
pub fn growth_t_grid() -> Vec<f64> {
    linspace(0.1, 5.0, 20)
}

pub const SERIES_LENGTH: u64 = 100_000;

fn claim_series_growth() -> Result<Outcome> {
    let mut table = EvidenceTable::new(
        "growth_exponents",
        "series::growth_exponent",
        &["t", "first_checkpoint", "checkpoints", "slope", "fit_residual", "max_abs_cos"],
    );
    let mut slopes = Vec::new();
    for t in growth_t_grid() {
        let cps = transient_free_checkpoints(t, SERIES_LENGTH);
        let probe = trig_log_partial_sums(t, &cps)?;
        let fit = growth_exponent(&probe, Family::Cos)?;
        slopes.push(fit.slope);
        table.push(vec![
            f(t),
            json!(cps[0]),
            json!(cps.len()),
            f(fit.slope),
            f(fit.residual),
            f(probe.checkpoints.last().expect("nonempty").max_abs_cos),
        ]);
    }
    let zero_cps: Vec<u64> = (1..=5).map(|k| 10u64.pow(k)).collect();
    let zero = trig_log_partial_sums(0.0, &zero_cps)?;
    let mut zero_table = EvidenceTable::new(
        "t_zero_partial_sums",
        "series::trig_log_partial_sums",
        &["N", "S_cos", "S_sin"],
    );
    for c in &zero.checkpoints {
        zero_table.push(vec![json!(c.n), f(c.s_cos), f(c.s_sin)]);
    }
    let zero_exact = zero
        .checkpoints
        .iter()
        .all(|c| c.s_cos == c.n as f64 && c.s_sin == 0.0);
    let min = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let max = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let verdict = if slopes.iter().any(|&s| s >= 0.75) {
        Verdict::Fail
    } else if slopes.iter().all(|&s| s <= 0.25) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(Outcome {
        verdict,
        summary: format!(
            "growth exponents of max|sum cos(4t ln n)| lie in [{}, {}]; bounded partial sums would give 0",
            fmt_real(min),
            fmt_real(max)
        ),
        checks: vec![
            check(
                "growth exponents in [0.9, 1.1] (linear growth)",
                min >= 0.9 && max <= 1.1,
                format!("min {}, max {}", fmt_real(min), fmt_real(max)),
            ),
            check(
                "t = 0: partial sums equal N (divergence to infinity)",
                zero_exact,
                "S_cos = N and S_sin = 0 exactly at N = 10 .. 1e5".into(),
            ),
        ],
        evidence: vec![table, zero_table],
        notes: vec![
            "Fits start where N / sqrt(1 + 16 t^2) >= 5 so the constant term of the partial sum does not dominate.".into(),
        ],
    })
}

/// Zeros shared by the zero-based claims.
pub fn audit_zero_sets(settings: &AuditSettings) -> Result<Vec<(DirichletCharacter, Vec<ZeroRecord>)>> {
    let zeta = DirichletCharacter::principal(1)?;
    let chi4 = DirichletCharacter::from_index(4, 1)?;
    let zz = scan_critical_line(&zeta, 0.0, 30.0, settings.scan_step, &settings.l_eval, &settings.scan)?;
    let z4 = scan_critical_line(&chi4, 0.0, 20.0, settings.scan_step, &settings.l_eval, &settings.scan)?;
    Ok(vec![(zeta, zz), (chi4, z4)])
}

fn claim_sigma_uniqueness(settings: &AuditSettings) -> Result<Outcome> {
    let grid = default_sigma_grid();
    let mut table = EvidenceTable::new(
        "sigma_profiles",
        "zeros::sigma_scan",
        &["q", "index", "t", "argmin_sigma", "min_value", "runner_up_value"],
    );
    let mut all_ok = true;
    let mut count = 0;
    for (chi, zeros) in audit_zero_sets(settings)? {
        for z in zeros {
            let profile = sigma_scan(&chi, z.t, &grid, &settings.l_eval)?;
            let runner_up = profile
                .values
                .iter()
                .copied()
                .filter(|&v| v > profile.min_value)
                .fold(f64::INFINITY, f64::min);
            let unique = profile.values.iter().filter(|&&v| v == profile.min_value).count() == 1;
            all_ok &= unique && (profile.argmin_sigma - 0.5).abs() <= 0.01 + 1e-12;
            count += 1;
            table.push(vec![
                json!(chi.modulus()),
                json!(chi.index()),
                f(z.t),
                f(profile.argmin_sigma),
                f(profile.min_value),
                f(runner_up),
            ]);
        }
    }
    if count == 0 {
        return Ok(Outcome {
            verdict: Verdict::Inconclusive,
            summary: "no zeros found to profile".into(),
            checks: vec![],
            evidence: vec![table],
            notes: vec![],
        });
    }
    Ok(Outcome {
        verdict: if all_ok { Verdict::Pass } else { Verdict::Fail },
        summary: format!("{count} sigma-profiles at scanned zeros; argmin at sigma = 0.50 +- 0.01: {all_ok}"),
        checks: vec![check(
            "unique argmin at sigma = 1/2",
            all_ok,
            format!("{count} profiles on the 0.01 .. 0.99 grid"),
        )],
        evidence: vec![table],
        notes: vec![],
    })
}

fn rel_err(got: Complex64, want: Complex64) -> f64 {
    let scale = want.norm();
    if scale == 0.0 {
        got.norm()
    } else {
        (got - want).norm() / scale
    }
}

pub const C5_RELATIVE_TOLERANCE: f64 = 1e-10;

fn claim_triangle_examples() -> Result<Outcome> {
    let mut table = EvidenceTable::new(
        "triangle_values",
        "geometry::cosine_theorem_check",
        &["example", "quantity", "printed", "computed", "relative_error"],
    );
    let mut worst = 0f64;
    let mut pairings_agree = true;
    for ex in triangle_examples() {
        let (a, b, c) = ex.vertices()?;
        let r = cosine_theorem_check(&a, &b, &c)?;
        let mut row = |name: &str, printed: Complex64, printed_text: String, computed: Complex64| {
            let e = rel_err(computed, printed);
            worst = worst.max(e);
            table.push(vec![
                json!(ex.id),
                json!(name),
                json!(printed_text),
                json!(fmt_complex(computed)),
                f(e),
            ]);
        };
        row("|AB|^2", ex.norm_sq["AB"], fmt_complex(ex.norm_sq["AB"]), r.norm_sq_ab);
        row("|AC|^2", ex.norm_sq["AC"], fmt_complex(ex.norm_sq["AC"]), r.norm_sq_ac);
        row("|BC|^2", ex.norm_sq["BC"], fmt_complex(ex.norm_sq["BC"]), r.norm_sq_bc);
        for p in &r.pairings {
            let (label, key) = match p.pairing {
                crate::geometry::Pairing::AbAc => ("AB.AC", "AB_AC"),
                crate::geometry::Pairing::AcBc => ("AC.BC", "AC_BC"),
            };
            let printed = ex.dot[key];
            row(label, printed, fmt_complex(printed), p.dot);
            row(
                &format!("cosine law ({label})"),
                printed,
                fmt_complex(printed),
                p.cosine_law_half,
            );
            let area_text = if ex.area.scale == 1.0 {
                format!("sqrt({})", fmt_complex(ex.area.radicand))
            } else {
                format!("{}*sqrt({})", fmt_real(ex.area.scale), fmt_complex(ex.area.radicand))
            };
            row(&format!("area ({label})"), ex.expected_area(), area_text, p.area);
        }
        pairings_agree &= r.pairings[0].area == r.pairings[1].area;
    }
    let ok = worst <= C5_RELATIVE_TOLERANCE && pairings_agree;
    Ok(Outcome {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        summary: format!(
            "all printed values reproduced; worst relative error {}",
            fmt_real(worst)
        ),
        checks: vec![
            check(
                "printed values within 1e-10 relative error",
                worst <= C5_RELATIVE_TOLERANCE,
                format!("worst {}", fmt_real(worst)),
            ),
            check(
                "area pairings agree exactly",
                pairings_agree,
                "principal root of |X|^2 |Y|^2 - (X.Y)^2".into(),
            ),
        ],
        evidence: vec![table],
        notes: vec![],
    })
}

/// Named catalog laminas used by the Pappus claim.
pub fn pappus_catalog() -> Result<Vec<(&'static str, Lamina)>> {
    let zero = ProfileSpec::Zero;
    Ok(vec![
        (
            "cylinder r=2 h=3",
            lamina_from_specs(&ProfileSpec::Constant { value: 2.0 }, &zero, 0.0, 3.0, DEFAULT_PANELS)?,
        ),
        (
            "cone f=z on [0,1]",
            lamina_from_specs(
                &ProfileSpec::Linear {
                    slope: 1.0,
                    intercept: 0.0,
                },
                &zero,
                0.0,
                1.0,
                DEFAULT_PANELS,
            )?,
        ),
        (
            "power f=z^2 on [0,1]",
            lamina_from_specs(
                &ProfileSpec::Power {
                    coef: 1.0,
                    exponent: 2.0,
                },
                &zero,
                0.0,
                1.0,
                DEFAULT_PANELS,
            )?,
        ),
        (
            "f=z^-(0.5+2i) on [1,2]",
            lamina_from_specs(&ProfileSpec::NegPower { sigma: 0.5, t: 2.0 }, &zero, 1.0, 2.0, DEFAULT_PANELS)?,
        ),
    ])
}

/// Random cubic laminas on `[0, 1]` with `f > g >= 0`.
pub fn random_polynomial_laminas(seed: u64, count: usize) -> Result<Vec<([f64; 4], [f64; 4], Lamina)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            let gap: [f64; 4] = std::array::from_fn(|i| rng.gen_range(if i == 0 { 0.1 } else { 0.0 }..1.0));
            let f: [f64; 4] = std::array::from_fn(|i| g[i] + gap[i]);
            let poly = |c: [f64; 4]| -> crate::revolution::Profile {
                std::sync::Arc::new(move |z: f64| Complex64::new(c[0] + z * (c[1] + z * (c[2] + z * c[3])), 0.0))
            };
            Ok((f, g, Lamina::new(poly(f), poly(g), 0.0, 1.0, DEFAULT_PANELS)?))
        })
        .collect()
}

pub const PAPPUS_THRESHOLD: f64 = 1e-8;

fn claim_pappus(settings: &AuditSettings) -> Result<Outcome> {
    let mut table = EvidenceTable::new(
        "pappus_residuals",
        "revolution::pappus_check",
        &["lamina", "volume_re", "volume_im", "area_re", "area_im", "eta_re", "eta_im", "residual"],
    );
    let mut worst = 0f64;
    let mut push = |name: String, lam: &Lamina| -> Result<()> {
        let p = pappus_check(lam)?;
        worst = worst.max(p.residual);
        table.push(vec![
            json!(name),
            f(p.volume.re),
            f(p.volume.im),
            f(p.area.re),
            f(p.area.im),
            f(p.eta.re),
            f(p.eta.im),
            f(p.residual),
        ]);
        Ok(())
    };
    for (name, lam) in pappus_catalog()? {
        push(name.into(), &lam)?;
    }
    for (i, (_, _, lam)) in random_polynomial_laminas(settings.seed, 100)?.iter().enumerate() {
        push(format!("random cubic #{i}"), lam)?;
    }
    let exp_lam = Lamina::new(
        std::sync::Arc::new(|z: f64| Complex64::new(z.exp(), 0.0)),
        ProfileSpec::Zero.build(),
        0.0,
        1.0,
        8,
    )?;
    let exact = Complex64::new(std::f64::consts::PI * (1f64.exp().powi(2) - 1.0) / 2.0, 0.0);
    let order = simpson_order_check(&exp_lam, exact)?;
    let mut order_table = EvidenceTable::new(
        "simpson_order",
        "revolution::simpson_order_check",
        &["panels", "error_coarse", "error_fine", "ratio"],
    );
    order_table.push(vec![
        json!(order.panels),
        f(order.error_coarse),
        f(order.error_fine),
        f(order.ratio),
    ]);
    let ok = worst < PAPPUS_THRESHOLD;
    Ok(Outcome {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        summary: format!("worst residual {} over 104 laminas", fmt_real(worst)),
        checks: vec![
            check("residuals below 1e-8", ok, format!("worst {}", fmt_real(worst))),
            check(
                "Simpson error shrinks >= 8x on panel doubling",
                order.ratio >= 8.0,
                format!("ratio {}", fmt_real(order.ratio)),
            ),
        ],
        evidence: vec![table, order_table],
        notes: vec![],
    })
}

pub const GAUSS_THRESHOLD: f64 = 1e-9;

/// `|tau(chi) tau(conj chi) - chi(-1) q|`
pub fn gauss_identity_residual(chi: &DirichletCharacter) -> f64 {
    let lhs = chi.gauss_sum() * chi.conjugate().gauss_sum();
    (lhs - chi.parity() as f64 * chi.modulus() as f64).norm()
}

fn claim_gauss_identity() -> Result<Outcome> {
    let mut table = EvidenceTable::new(
        "gauss_identity",
        "characters::gauss_sum",
        &["q", "index", "primitive", "tau_re", "tau_im", "residual"],
    );
    let (mut max_prim, mut max_imprim) = (0f64, 0f64);
    for q in 1..=50 {
        for chi in enumerate_characters(q)? {
            let tau = chi.gauss_sum();
            let r = gauss_identity_residual(&chi);
            if chi.is_primitive() {
                max_prim = max_prim.max(r);
            } else {
                max_imprim = max_imprim.max(r);
            }
            table.push(vec![
                json!(q),
                json!(chi.index()),
                json!(chi.is_primitive()),
                f(tau.re),
                f(tau.im),
                f(r),
            ]);
        }
    }
    let tau4 = DirichletCharacter::from_index(4, 1)?.gauss_sum();
    let ok = max_prim < GAUSS_THRESHOLD;
    Ok(Outcome {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        summary: format!(
            "primitive max residual {}; imprimitive max residual {}",
            fmt_real(max_prim),
            fmt_real(max_imprim)
        ),
        checks: vec![
            check("primitive characters", ok, format!("max {}", fmt_real(max_prim))),
            check(
                "imprimitive characters (identity stated without primitivity)",
                max_imprim < GAUSS_THRESHOLD,
                format!("max {}", fmt_real(max_imprim)),
            ),
            check(
                "tau(chi mod 4) = 2i",
                (tau4 - Complex64::new(0.0, 2.0)).norm() < 1e-12,
                fmt_complex(tau4),
            ),
        ],
        evidence: vec![table],
        notes: vec![],
    })
}

pub const C8_THRESHOLD: f64 = 1e-3;

fn claim_chi_square_at_zeros(settings: &AuditSettings) -> Result<Outcome> {
    let mut table = EvidenceTable::new(
        "chi_square_at_zeros",
        "analytic::l_eval",
        &["q", "index", "t", "abs_L_rho", "abs_L2_2rho", "abs_cylinder_sum_1e4_over_pi"],
    );
    let mut min_rhs = f64::INFINITY;
    let mut first_zero = None;
    for (chi, zeros) in audit_zero_sets(settings)? {
        let sq = chi.power(2);
        for z in zeros {
            let rho = SPoint { sigma: 0.5, t: z.t };
            let l_rho = l_eval(&chi, rho, &settings.l_eval)?;
            let two_rho = SPoint { sigma: 1.0, t: 2.0 * z.t };
            let rhs = l_eval(&sq, two_rho, &settings.l_eval)?;
            let cyl = cylinder_volume_sum(&chi, rho, 10_000)? / std::f64::consts::PI;
            min_rhs = min_rhs.min(rhs.norm());
            first_zero.get_or_insert((chi.clone(), z.t));
            table.push(vec![
                json!(chi.modulus()),
                json!(chi.index()),
                f(z.t),
                f(l_rho.norm()),
                f(rhs.norm()),
                f(cyl.norm()),
            ]);
        }
    }
    let mut trajectory = EvidenceTable::new(
        "chi_in_u_trajectory_at_first_zero",
        "geometry::l_vector_form",
        &["N", "cos_theta_re", "cos_theta_im", "abs_B_N", "dot_abs"],
    );
    if let Some((chi, t)) = &first_zero {
        let rho = SPoint { sigma: 0.5, t: *t };
        for n in [10usize, 100, 1000, 10_000] {
            let form = l_vector_form(chi, rho, n, Arrangement::ChiInU)?;
            let quartic = quartic_form(chi, rho, n)?;
            let cos = form.cos_theta.map(|c| (json!(c.re), json!(c.im))).unwrap_or((Value::Null, Value::Null));
            trajectory.push(vec![json!(n), cos.0, cos.1, f(quartic.b.norm()), f(form.dot.norm())]);
        }
    }
    if !min_rhs.is_finite() {
        return Ok(Outcome {
            verdict: Verdict::Inconclusive,
            summary: "no zeros found".into(),
            checks: vec![],
            evidence: vec![table],
            notes: vec![],
        });
    }
    let fail = min_rhs > C8_THRESHOLD;
    Ok(Outcome {
        verdict: if fail { Verdict::Fail } else { Verdict::Pass },
        summary: format!(
            "at zeros of L, |sum chi^2(n)/n^(2s)| = |L(2 rho, chi^2)| >= {}",
            fmt_real(min_rhs)
        ),
        checks: vec![check(
            "sum chi^2(n)/n^(2s) vanishes wherever L vanishes",
            !fail,
            format!("min |L(2 rho, chi^2)| = {}", fmt_real(min_rhs)),
        )],
        evidence: vec![table, trajectory],
        notes: vec![
            "The products of divergent radicands with a vanishing cosine have no finite-N counterpart; the cos(theta_N) and B_N trajectories are the nearest measurable objects.".into(),
        ],
    })
}

pub const C9_THRESHOLD: f64 = 0.01;

fn claim_ordinate_spacing(settings: &AuditSettings) -> Result<Outcome> {
    let zeta = DirichletCharacter::principal(1)?;
    let zeros = scan_critical_line(&zeta, 0.0, 30.0, settings.scan_step, &settings.l_eval, &settings.scan)?;
    let ts: Vec<f64> = zeros.iter().map(|z| z.t).collect();
    let rows = ordinate_spacing_probe(&ts, 10)?;
    let mut table = EvidenceTable::new(
        "ordinate_spacing",
        "zeros::ordinate_spacing_probe",
        &["t_first", "t_second", "n", "value", "fractional_offset"],
    );
    let mut worst = 0f64;
    for r in &rows {
        worst = worst.max(r.fractional_offset.abs());
        table.push(vec![f(r.t_first), f(r.t_second), json!(r.n), f(r.value), f(r.fractional_offset)]);
    }
    let holds = worst < C9_THRESHOLD;
    Ok(Outcome {
        verdict: if holds { Verdict::Pass } else { Verdict::Fail },
        summary: format!(
            "{} pairs x n = 2..10; largest distance from an integer {}",
            ts.len().saturating_sub(1),
            fmt_real(worst)
        ),
        checks: vec![check(
            "(t2 - t1) ln n / 2pi is an integer for every n",
            holds,
            format!("max |offset| {}", fmt_real(worst)),
        )],
        evidence: vec![table],
        notes: vec![],
    })
}

/// Output formats for [`export_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::UnknownFormat(other.into())),
        }
    }
}

pub fn export_report(report: &AuditReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Markdown => Ok(report_markdown(report).into_bytes()),
        ReportFormat::Csv => Ok(report_csv(report).into_bytes()),
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_real(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

const MARKDOWN_ROW_LIMIT: usize = 40;

fn report_markdown(report: &AuditReport) -> String {
    let mut out = String::new();
    out.push_str("# Claim audit report\n\n");
    out.push_str(&format!(
        "toolkit {} · schema v{} · {} claims\n\n",
        report.toolkit_version,
        report.schema_version,
        report.claims.len()
    ));
    out.push_str("| claim | topic | expected | verdict | summary |\n|---|---|---|---|---|\n");
    for c in &report.claims {
        out.push_str(&format!(
            "| {} | {} | {} | **{}** | {} |\n",
            c.id, c.topic, c.expected, c.verdict, c.summary
        ));
    }
    for c in &report.claims {
        out.push_str(&format!("\n## {}: {}\n\n", c.id, c.topic));
        out.push_str(&format!("- assertion: {}\n", c.assertion));
        out.push_str(&format!("- operation: `{}`\n", c.operation));
        out.push_str(&format!("- parameters: {}\n", c.parameters));
        out.push_str(&format!("- rule: {}\n", c.verdict_rule));
        out.push_str(&format!("- verdict: **{}** (asserted: {})\n", c.verdict, c.expected));
        out.push_str(&format!("- {}\n", c.summary));
        for ch in &c.checks {
            out.push_str(&format!("- check `{}`: {} ({})\n", ch.name, ch.verdict, ch.detail));
        }
        for n in &c.notes {
            out.push_str(&format!("- note: {n}\n"));
        }
        for t in &c.evidence {
            out.push_str(&format!("\n### {} (`{}`)\n\n", t.name, t.operation));
            out.push_str(&format!("| {} |\n", t.columns.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(t.columns.len())));
            for row in t.rows.iter().take(MARKDOWN_ROW_LIMIT) {
                let cells: Vec<String> = row.iter().map(|v| cell_text(v).replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            if t.rows.len() > MARKDOWN_ROW_LIMIT {
                out.push_str(&format!(
                    "\n({} more rows in the json/csv export)\n",
                    t.rows.len() - MARKDOWN_ROW_LIMIT
                ));
            }
        }
    }
    out
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Long format: one line per evidence cell.
fn report_csv(report: &AuditReport) -> String {
    let mut out = String::from("claim,verdict,table,row,column,value\n");
    for c in &report.claims {
        for t in &c.evidence {
            for (i, row) in t.rows.iter().enumerate() {
                for (col, v) in t.columns.iter().zip(row) {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        Value::Null => String::new(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        c.id,
                        c.verdict,
                        csv_escape(&t.name),
                        i,
                        csv_escape(col),
                        csv_escape(&text)
                    ));
                }
            }
        }
    }
    out
}
