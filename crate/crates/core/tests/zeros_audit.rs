use std::collections::BTreeSet;

use dirichlet_core::analytic::{functional_equation_residual, l_eval};
use dirichlet_core::audit::{
    export_report, functional_equation_grid, parse_selection, run_audit, AuditReport, AuditSettings, ClaimId,
    EvidenceTable, ReportFormat, Verdict,
};
use dirichlet_core::series::{growth_exponent, transient_free_checkpoints, trig_log_partial_sums, Family};
use dirichlet_core::zeros::{
    bisect_hardy_z, default_sigma_grid, ordinate_spacing_probe, scan_critical_line, sigma_scan, ScanSettings,
};
use dirichlet_core::{DirichletCharacter, LEvalSettings, SPoint};
use serde_json::Value;

fn l() -> LEvalSettings {
    LEvalSettings::default()
}

#[test]
fn zeta_has_three_zeros_below_thirty() {
    let zeta = DirichletCharacter::principal(1).unwrap();
    let zeros = scan_critical_line(&zeta, 0.0, 30.0, 0.01, &l(), &ScanSettings::default()).unwrap();
    assert_eq!(zeros.len(), 3);
    let known = [14.134725141734693, 21.022039638771555, 25.010857580145688];
    for (z, k) in zeros.iter().zip(known) {
        assert!((z.t - k).abs() < 1e-6, "{z:?}");
        assert!(z.residual < 1e-6);
        let again = l_eval(&zeta, SPoint::new(0.5, z.t).unwrap(), &l()).unwrap().norm();
        assert!((again - z.residual).abs() < 1e-9);
        let hz = bisect_hardy_z(z.t - 0.01, z.t + 0.01, 1e-12, &l()).unwrap().unwrap();
        assert!((hz - z.t).abs() < 1e-6);
    }
}

#[test]
fn real_characters_have_conjugate_zeros() {
    let chi = DirichletCharacter::from_index(5, 2).unwrap();
    let scan = ScanSettings::default();
    let pos = scan_critical_line(&chi, 0.0, 12.0, 0.01, &l(), &scan).unwrap();
    assert!(!pos.is_empty());
    for z in &pos {
        let neg = scan_critical_line(&chi, -z.t - 0.1, -z.t + 0.1, 0.01, &l(), &scan).unwrap();
        assert_eq!(neg.len(), 1);
        assert!((neg[0].t + z.t).abs() < 1e-7, "{} vs {}", neg[0].t, z.t);
    }
}

#[test]
fn scans_are_deterministic_and_thread_independent() {
    let chi = DirichletCharacter::from_index(4, 1).unwrap();
    let one = ScanSettings::default();
    let four = ScanSettings { threads: 4, ..one };
    let a = scan_critical_line(&chi, 0.0, 20.0, 0.01, &l(), &one).unwrap();
    let b = scan_critical_line(&chi, 0.0, 20.0, 0.01, &l(), &one).unwrap();
    let c = scan_critical_line(&chi, 0.0, 20.0, 0.01, &l(), &four).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

fn fixed(threads: usize) -> AuditSettings {
    let mut s = AuditSettings {
        fixed_clock: true,
        ..AuditSettings::default()
    };
    s.scan.threads = threads;
    s
}

fn all() -> BTreeSet<ClaimId> {
    ClaimId::ALL.into_iter().collect()
}

#[test]
fn audit_is_deterministic_and_round_trips() {
    let a = run_audit(&all(), &fixed(1)).unwrap();
    let b = run_audit(&all(), &fixed(1)).unwrap();
    let ja = export_report(&a, ReportFormat::Json).unwrap();
    assert_eq!(ja, export_report(&b, ReportFormat::Json).unwrap());
    let back: AuditReport = serde_json::from_slice(&ja).unwrap();
    assert_eq!(back, a);

    let c = run_audit(&all(), &fixed(4)).unwrap();
    let verdicts = |r: &AuditReport| r.claims.iter().map(|c| (c.id, c.verdict)).collect::<Vec<_>>();
    assert_eq!(verdicts(&a), verdicts(&c));
    assert_eq!(a.claims, c.claims);

    let ids: Vec<ClaimId> = a.claims.iter().map(|c| c.id).collect();
    assert_eq!(ids, ClaimId::ALL.to_vec());
}

#[test]
fn expected_verdicts() {
    let r = run_audit(&all(), &fixed(1)).unwrap();
    let v = |id| r.claim(id).unwrap().verdict;
    assert_eq!(v(ClaimId::C1), Verdict::Pass);
    assert_eq!(v(ClaimId::C2), Verdict::Fail);
    assert_eq!(v(ClaimId::C3), Verdict::Fail);
    assert_eq!(v(ClaimId::C4), Verdict::Pass);
    assert_eq!(v(ClaimId::C5), Verdict::Pass);
    assert_eq!(v(ClaimId::C6), Verdict::Pass);
    assert_eq!(v(ClaimId::C7), Verdict::Pass);
    assert_eq!(v(ClaimId::C8), Verdict::Fail);
    assert_eq!(v(ClaimId::C9), Verdict::Fail);
    assert!(r.claims.iter().all(|c| c.expected == Verdict::Pass));
}

#[test]
fn unknown_claims_are_rejected() {
    assert!(parse_selection("C1,C42").is_err());
    assert!(run_audit(&BTreeSet::new(), &fixed(1)).is_err());
}

fn table<'a>(r: &'a AuditReport, id: ClaimId, name: &str) -> &'a EvidenceTable {
    r.claim(id)
        .unwrap()
        .evidence
        .iter()
        .find(|t| t.name == name)
        .unwrap_or_else(|| panic!("{id}: no table {name}"))
}

fn get(t: &EvidenceTable, row: &[Value], col: &str) -> f64 {
    row[t.column(col).unwrap_or_else(|| panic!("no column {col}"))].as_f64().unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + b.abs())
}

#[test]
fn evidence_is_traceable_to_operations() {
    let settings = fixed(1);
    let r = run_audit(&all(), &settings).unwrap();

    let t = table(&r, ClaimId::C1, "functional_equation_residuals");
    for row in &t.rows {
        let chi = DirichletCharacter::from_index(get(t, row, "q") as u64, get(t, row, "index") as u64).unwrap();
        let worst = functional_equation_grid()
            .into_iter()
            .map(|s| functional_equation_residual(&chi, s, &settings.l_eval, true).unwrap())
            .fold(0.0, f64::max);
        assert!(close(get(t, row, "max_residual"), worst), "C1 {chi}");
    }

    let t = table(&r, ClaimId::C2, "central_values");
    assert_eq!(t.rows.len(), 101);
    for row in &t.rows {
        let chi = DirichletCharacter::from_index(get(t, row, "q") as u64, get(t, row, "index") as u64).unwrap();
        let v = l_eval(&chi, SPoint::real(0.5).unwrap(), &settings.l_eval).unwrap();
        assert!(close(get(t, row, "re"), v.re) && close(get(t, row, "abs"), v.norm()), "C2 {chi}");
        assert!(get(t, row, "abs") > 1e-3);
    }

    let t = table(&r, ClaimId::C3, "growth_exponents");
    for row in &t.rows {
        let x = get(t, row, "t");
        let p = trig_log_partial_sums(x, &transient_free_checkpoints(x, 100_000)).unwrap();
        assert!(close(get(t, row, "slope"), growth_exponent(&p, Family::Cos).unwrap().slope));
    }

    let t = table(&r, ClaimId::C4, "sigma_profiles");
    assert_eq!(t.rows.len(), 8);
    for row in &t.rows {
        let chi = DirichletCharacter::from_index(get(t, row, "q") as u64, get(t, row, "index") as u64).unwrap();
        let p = sigma_scan(&chi, get(t, row, "t"), &default_sigma_grid(), &settings.l_eval).unwrap();
        assert!(close(get(t, row, "min_value"), p.min_value));
        assert_eq!(get(t, row, "argmin_sigma"), p.argmin_sigma);
    }

    let t = table(&r, ClaimId::C8, "chi_square_at_zeros");
    for row in &t.rows {
        let chi = DirichletCharacter::from_index(get(t, row, "q") as u64, get(t, row, "index") as u64).unwrap();
        let x = get(t, row, "t");
        let v = l_eval(&chi.power(2), SPoint::new(1.0, 2.0 * x).unwrap(), &settings.l_eval).unwrap();
        assert!(close(get(t, row, "abs_L2_2rho"), v.norm()));
    }

    let t = table(&r, ClaimId::C9, "ordinate_spacing");
    let mut ts: Vec<f64> = t.rows.iter().flat_map(|row| [get(t, row, "t_first"), get(t, row, "t_second")]).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let again = ordinate_spacing_probe(&ts, 10).unwrap();
    for (row, want) in t.rows.iter().zip(&again) {
        assert!(close(get(t, row, "fractional_offset"), want.fractional_offset));
    }
}
