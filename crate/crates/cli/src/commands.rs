use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context as _, Result};
use dirichlet_core::analytic::{functional_equation_residual, l_eval, l_partial_sum};
use dirichlet_core::audit::{self, AuditSettings, ClaimId, ReportFormat};
use dirichlet_core::cache::{cache_load, cache_store};
use dirichlet_core::format::fmt_complex;
use dirichlet_core::geometry::{cosine_theorem_check, l_vector_form, quartic_form, triangle_example, Arrangement};
use dirichlet_core::revolution::{cylinder_volume_sum, eta_implied, pappus_check, simpson_order_check, Lamina};
use dirichlet_core::series::{
    default_checkpoints, geometric_checkpoints, growth_exponent, transient_free_checkpoints,
    trig_log_partial_sums, Family,
};
use dirichlet_core::zeros::{
    bisect_hardy_z, ordinate_spacing_probe, refine_zero, scan_critical_line, sigma_scan, ScanSettings,
    ZeroRecord,
};
use dirichlet_core::{enumerate_characters, DirichletCharacter, LEvalSettings, SPoint};
use num_complex::Complex64;
use serde_json::json;

use crate::config::ConfigFile;
use crate::output::{num, re_im, Document, Format, Table};
use crate::{ArrangementArg, CharSel, CheckpointLayout, Command, GlobalOpts, ZerosCommand};

/// Errors in how the command was invoked; `main` maps these to exit code 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub struct Context {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub l: LEvalSettings,
    pub scan: ScanSettings,
    pub cache_dir: Option<PathBuf>,
}

fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|base| base.join("dirichlet"))
}

impl Context {
    pub fn resolve(g: &GlobalOpts) -> Result<Self> {
        let cfg = match &g.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut l = LEvalSettings::default();
        let mut scan = ScanSettings::default();
        if let Some(v) = cfg.pick(g.shift, "shift")? {
            l.euler_maclaurin_shift = v;
        }
        if let Some(v) = cfg.pick(g.bernoulli, "bernoulli")? {
            l.bernoulli_terms = v;
        }
        if let Some(v) = cfg.pick(g.truncation, "truncation")? {
            l.series_truncation = v;
        }
        if let Some(v) = cfg.pick(g.tolerance, "tolerance")? {
            l.target_tolerance = v;
        }
        l.validate()?;
        if let Some(v) = cfg.pick(g.candidate_threshold, "candidate-threshold")? {
            scan.candidate_threshold = v;
        }
        if let Some(v) = cfg.pick(g.accept_residual, "accept-residual")? {
            scan.accept_residual = v;
        }
        if let Some(v) = cfg.pick(g.width_tolerance, "width-tolerance")? {
            scan.width_tolerance = v;
        }
        for (name, v) in [
            ("candidate-threshold", scan.candidate_threshold),
            ("accept-residual", scan.accept_residual),
            ("width-tolerance", scan.width_tolerance),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("{name} must be positive, got {v}");
            }
        }
        scan.threads = cfg.pick(g.threads, "threads")?.unwrap_or(1);
        let cache_dir = if g.no_cache {
            None
        } else {
            cfg.pick(g.cache_dir.clone(), "cache-dir")?.or_else(default_cache_dir)
        };
        Ok(Context {
            format: cfg.pick(g.format, "format")?.unwrap_or(Format::Markdown),
            output: cfg.pick(g.output.clone(), "output")?,
            l,
            scan,
            cache_dir,
        })
    }

    pub fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn store_zeros(&self, zeros: &[ZeroRecord]) -> Result<()> {
        if let Some(dir) = &self.cache_dir {
            if !zeros.is_empty() {
                cache_store(dir, zeros).with_context(|| format!("writing zero cache in {}", dir.display()))?;
            }
        }
        Ok(())
    }
}

/// "re,im" or a bare real number.
pub fn parse_point(text: &str) -> Result<SPoint> {
    let parts = parse_floats(text)?;
    match parts.as_slice() {
        [re] => Ok(SPoint::real(*re)?),
        [re, im] => Ok(SPoint::new(*re, *im)?),
        _ => bail!("expected \"re,im\", got {text:?}"),
    }
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| anyhow!("bad number {p:?}: {e}")))
        .collect()
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    match parse_floats(text)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => bail!("expected \"lo,hi\", got {text:?}"),
    }
}

fn character(sel: &CharSel) -> Result<DirichletCharacter> {
    Ok(DirichletCharacter::from_index(sel.q, sel.char_index)?)
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<String> {
    let doc = match cmd {
        Command::Chars { q, values } => chars(*q, *values)?,
        Command::Gauss { q, char_index } => gauss(*q, *char_index)?,
        Command::Lvalue {
            chi,
            s,
            partial,
            functional_equation,
        } => lvalue(ctx, chi, s, *partial, *functional_equation)?,
        Command::Zeros(z) => zeros(ctx, z)?,
        Command::Series { t, n_max, checkpoints } => series(*t, *n_max, *checkpoints)?,
        Command::Geom {
            example,
            chi,
            s,
            n,
            arrangement,
            quartic,
        } => geom(*example, chi, s, *n, *arrangement, *quartic)?,
        Command::Pappus { random, seed, n, chi, s } => pappus(*random, *seed, *n, chi, s)?,
        Command::Audit {
            all,
            claims,
            fixed_clock,
            seed,
            step,
        } => return audit_cmd(ctx, *all, claims.as_deref(), *fixed_clock, *seed, *step),
    };
    Ok(doc.render(ctx.format))
}

fn chars(q: u64, values: bool) -> Result<Document> {
    let chars = enumerate_characters(q)?;
    let mut t = Table::new(
        "characters",
        &["q", "index", "exponents", "order", "parity", "real", "conductor", "primitive", "principal"],
    );
    for c in &chars {
        t.push(vec![
            json!(q),
            json!(c.index()),
            json!(format!("{:?}", c.exponents())),
            json!(c.order()),
            json!(c.parity()),
            json!(c.is_real()),
            json!(c.conductor()),
            json!(c.is_primitive()),
            json!(c.is_principal()),
        ]);
    }
    let mut doc = Document::new(&format!("characters mod {q}")).table(t);
    if values {
        let mut v = Table::new("values", &["index", "n", "value", "re", "im"]);
        for c in &chars {
            for n in 0..q {
                let r = c.value(n as i64);
                let z = r.to_complex();
                v.push(vec![json!(c.index()), json!(n), json!(r.to_string()), num(z.re), num(z.im)]);
            }
        }
        doc = doc.table(v);
    }
    Ok(doc)
}

fn gauss(q: u64, index: Option<u64>) -> Result<Document> {
    let chars = match index {
        Some(i) => vec![DirichletCharacter::from_index(q, i)?],
        None => enumerate_characters(q)?,
    };
    let mut t = Table::new(
        "gauss_sums",
        &["q", "index", "primitive", "parity", "tau", "tau_re", "tau_im", "abs_tau_sq", "identity_residual"],
    );
    for c in &chars {
        let tau = c.gauss_sum();
        let [re, im] = re_im(tau);
        t.push(vec![
            json!(q),
            json!(c.index()),
            json!(c.is_primitive()),
            json!(c.parity()),
            json!(fmt_complex(tau)),
            re,
            im,
            num(tau.norm_sqr()),
            num(audit::gauss_identity_residual(c)),
        ]);
    }
    Ok(Document::new(&format!("Gauss sums mod {q}")).table(t))
}

fn lvalue(ctx: &Context, sel: &CharSel, s: &str, partial: Option<usize>, fe: bool) -> Result<Document> {
    let chi = character(sel)?;
    let s = parse_point(s)?;
    let v = l_eval(&chi, s, &ctx.l)?;
    let mut cols = vec!["q", "index", "sigma", "t", "re", "im", "abs"];
    let [re, im] = re_im(v);
    let mut row = vec![json!(sel.q), json!(sel.char_index), num(s.sigma), num(s.t), re, im, num(v.norm())];
    if let Some(n) = partial {
        let p = l_partial_sum(&chi, s, n)?;
        cols.extend(["partial_terms", "partial_re", "partial_im"]);
        let [pr, pi] = re_im(p);
        row.extend([json!(n), pr, pi]);
    }
    if fe {
        cols.push("functional_equation_residual");
        row.push(num(functional_equation_residual(&chi, s, &ctx.l, false)?));
    }
    let mut t = Table::new("lvalue", &cols);
    t.push(row);
    Ok(Document::new(&format!("L(s, {chi})")).table(t))
}

fn zero_table(zeros: &[ZeroRecord]) -> Table {
    let mut t = Table::new("zeros", &["q", "index", "t", "residual", "width"]);
    for z in zeros {
        t.push(vec![json!(z.q), json!(z.index), num(z.t), num(z.residual), num(z.width)]);
    }
    t
}

fn zeros(ctx: &Context, cmd: &ZerosCommand) -> Result<Document> {
    match cmd {
        ZerosCommand::Scan {
            chi: sel,
            t_range,
            step,
            confirm,
        } => {
            let chi = character(sel)?;
            let (lo, hi) = parse_range(t_range)?;
            let found = scan_critical_line(&chi, lo, hi, *step, &ctx.l, &ctx.scan)?;
            ctx.store_zeros(&found)?;
            let mut doc = Document::new(&format!("zeros of L(s, {chi}) with {lo} <= t <= {hi}"));
            let mut t = zero_table(&found);
            if *confirm {
                if !chi.is_principal() || chi.modulus() != 1 {
                    bail!("--confirm needs the Riemann zeta function (q = 1)");
                }
                t.columns.push("hardy_z_t".into());
                for (row, z) in t.rows.iter_mut().zip(&found) {
                    let b = bisect_hardy_z(z.t - 0.01, z.t + 0.01, 1e-12, &ctx.l)?;
                    row.push(b.map(num).unwrap_or(serde_json::Value::Null));
                }
            }
            doc = doc.table(t);
            Ok(doc.note(format!("{} zeros", found.len())))
        }
        ZerosCommand::Refine { chi: sel, bracket } => {
            let chi = character(sel)?;
            let (lo, hi) = parse_range(bracket)?;
            if !(lo < hi) {
                bail!("bracket must satisfy lo < hi");
            }
            let z = refine_zero(&chi, lo, hi, &ctx.l, &ctx.scan)?;
            if z.residual < ctx.scan.accept_residual {
                ctx.store_zeros(std::slice::from_ref(&z))?;
            }
            let accepted = z.residual < ctx.scan.accept_residual;
            let mut t = zero_table(std::slice::from_ref(&z));
            t.columns.push("accepted".into());
            t.rows[0].push(json!(accepted));
            Ok(Document::new(&format!("refined minimum of |L(1/2 + it, {chi})|")).table(t))
        }
        ZerosCommand::Sigma {
            chi: sel,
            t,
            sigma_grid,
        } => {
            let chi = character(sel)?;
            let grid = match parse_floats(sigma_grid)?.as_slice() {
                [lo, hi, n] if *n >= 2.0 && n.fract() == 0.0 => {
                    let n = *n as usize;
                    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect::<Vec<_>>()
                }
                _ => bail!("expected \"lo,hi,count\", got {sigma_grid:?}"),
            };
            let p = sigma_scan(&chi, *t, &grid, &ctx.l)?;
            let mut summary = Table::new("argmin", &["t", "argmin_sigma", "min_value"]);
            summary.push(vec![num(p.t0), num(p.argmin_sigma), num(p.min_value)]);
            let mut profile = Table::new("profile", &["sigma", "abs_L"]);
            for (s, v) in p.sigmas.iter().zip(&p.values) {
                profile.push(vec![num(*s), num(*v)]);
            }
            Ok(Document::new(&format!("|L(sigma + {t}i, {chi})|"))
                .table(summary)
                .table(profile))
        }
        ZerosCommand::Spacing {
            chi: sel,
            t_range,
            step,
            n_max,
        } => {
            let chi = character(sel)?;
            let (lo, hi) = parse_range(t_range)?;
            let found = scan_critical_line(&chi, lo, hi, *step, &ctx.l, &ctx.scan)?;
            ctx.store_zeros(&found)?;
            let ts: Vec<f64> = found.iter().map(|z| z.t).collect();
            let rows = ordinate_spacing_probe(&ts, *n_max)?;
            let mut t = Table::new("spacing", &["t_first", "t_second", "n", "value", "fractional_offset"]);
            for r in rows {
                t.push(vec![num(r.t_first), num(r.t_second), json!(r.n), num(r.value), num(r.fractional_offset)]);
            }
            Ok(Document::new(&format!("zero spacing for {chi}")).table(t))
        }
        ZerosCommand::Cached { q, char_index } => {
            let dir = ctx
                .cache_dir
                .as_ref()
                .ok_or_else(|| anyhow!("no cache directory configured"))?;
            let loaded = cache_load(dir)?;
            let records: Vec<ZeroRecord> = loaded
                .records
                .into_iter()
                .filter(|r| q.map_or(true, |q| r.q == q) && char_index.map_or(true, |i| r.index == i))
                .collect();
            let mut doc = Document::new("cached zeros").table(zero_table(&records));
            if loaded.warnings > 0 {
                doc = doc.note(format!("{} unreadable cache lines skipped", loaded.warnings));
            }
            Ok(doc)
        }
    }
}

fn series(t: f64, n_max: u64, layout: CheckpointLayout) -> Result<Document> {
    let cps = match layout {
        CheckpointLayout::Decades => default_checkpoints().into_iter().filter(|&n| n <= n_max).collect(),
        CheckpointLayout::Transient => transient_free_checkpoints(t, n_max),
    };
    let cps = if cps.is_empty() { geometric_checkpoints(1.0, n_max, 1) } else { cps };
    let probe = trig_log_partial_sums(t, &cps)?;
    let mut table = Table::new("checkpoints", &["N", "S_cos", "S_sin", "max_abs_cos", "max_abs_sin"]);
    for c in &probe.checkpoints {
        table.push(vec![json!(c.n), num(c.s_cos), num(c.s_sin), num(c.max_abs_cos), num(c.max_abs_sin)]);
    }
    let mut growth = Table::new("growth", &["family", "slope", "fit_residual"]);
    for (name, fam) in [("cos", Family::Cos), ("sin", Family::Sin)] {
        match growth_exponent(&probe, fam) {
            Ok(fit) => growth.push(vec![json!(name), num(fit.slope), num(fit.residual)]),
            Err(_) => growth.push(vec![json!(name), serde_json::Value::Null, serde_json::Value::Null]),
        }
    }
    Ok(Document::new(&format!("sum cos(4t ln n), sum sin(4t ln n) at t = {t}"))
        .table(table)
        .table(growth))
}

fn geom(
    example: Option<u32>,
    sel: &CharSel,
    s: &str,
    n: Option<usize>,
    arrangement: ArrangementArg,
    quartic: bool,
) -> Result<Document> {
    if let Some(id) = example {
        return triangle(id);
    }
    let Some(n) = n else {
        return Err(Usage("geom needs --example K or --n N".into()).into());
    };
    let chi = character(sel)?;
    let s = parse_point(s)?;
    let arrangement = match arrangement {
        ArrangementArg::ChiInU => Arrangement::ChiInU,
        ArrangementArg::ChiInV => Arrangement::ChiInV,
    };
    let f = l_vector_form(&chi, s, n, arrangement)?;
    let mut t = Table::new("vector_form", &["quantity", "value", "re", "im"]);
    let mut push = |name: &str, z: Option<Complex64>| match z {
        Some(z) => {
            let [re, im] = re_im(z);
            t.push(vec![json!(name), json!(fmt_complex(z)), re, im]);
        }
        None => t.push(vec![json!(name), json!("undefined"), serde_json::Value::Null, serde_json::Value::Null]),
    };
    push("u.v", Some(f.dot));
    push("partial sum", Some(f.partial_sum));
    push("|u|^2", Some(f.norm_u_sq));
    push("|v|^2", Some(f.norm_v_sq));
    push("cos theta", f.cos_theta);
    let mut doc = Document::new(&format!("{chi} at s = {} + {}i, N = {n}", s.sigma, s.t)).table(t);
    if quartic {
        let qf = quartic_form(&chi, s, n)?;
        let mut qt = Table::new(
            "quartic",
            &["N", "A_re", "A_im", "B_re", "B_im", "max_abs_re_partial", "max_abs_im_partial"],
        );
        let [br, bi] = re_im(qf.b);
        qt.push(vec![
            json!(qf.n_terms),
            num(qf.a_real),
            num(qf.a_imag),
            br,
            bi,
            num(qf.max_abs_real_partial),
            num(qf.max_abs_imag_partial),
        ]);
        doc = doc.table(qt);
    }
    Ok(doc)
}

fn triangle(id: u32) -> Result<Document> {
    let ex = triangle_example(id)?;
    let (a, b, c) = ex.vertices()?;
    let r = cosine_theorem_check(&a, &b, &c)?;
    let mut t = Table::new("triangle", &["quantity", "value", "printed", "re", "im", "relative_error"]);
    let mut push = |name: &str, z: Complex64, printed: Option<(Complex64, String)>| {
        let [re, im] = re_im(z);
        let (text, err) = match printed {
            Some((p, text)) => (json!(text), num((z - p).norm() / p.norm())),
            None => (serde_json::Value::Null, serde_json::Value::Null),
        };
        t.push(vec![json!(name), json!(fmt_complex(z)), text, re, im, err]);
    };
    let golden = |z: Complex64| Some((z, fmt_complex(z)));
    push("|AB|^2", r.norm_sq_ab, golden(ex.norm_sq["AB"]));
    push("|AC|^2", r.norm_sq_ac, golden(ex.norm_sq["AC"]));
    push("|BC|^2", r.norm_sq_bc, golden(ex.norm_sq["BC"]));
    let area_text = if ex.area.scale == 1.0 {
        format!("sqrt({})", fmt_complex(ex.area.radicand))
    } else {
        format!("{}*sqrt({})", ex.area.scale, fmt_complex(ex.area.radicand))
    };
    for p in &r.pairings {
        let (label, key) = match p.pairing {
            dirichlet_core::geometry::Pairing::AbAc => ("AB.AC", "AB_AC"),
            dirichlet_core::geometry::Pairing::AcBc => ("AC.BC", "AC_BC"),
        };
        push(label, p.dot, golden(ex.dot[key]));
        push(&format!("cosine law half ({label})"), p.cosine_law_half, golden(ex.dot[key]));
        push(&format!("cos theta ({label})"), p.cos_theta, None);
        push(&format!("sin theta ({label})"), p.sin_theta, None);
        push(&format!("area ({label})"), p.area, Some((ex.expected_area(), area_text.clone())));
    }
    let agree = r.pairings[0].area == r.pairings[1].area;
    Ok(Document::new(&format!("worked triangle {id}"))
        .table(t)
        .note(format!("area pairings agree exactly: {agree}")))
}

fn pappus(random: usize, seed: u64, n: Option<usize>, sel: &CharSel, s: &str) -> Result<Document> {
    let mut t = Table::new(
        "laminas",
        &["lamina", "volume_re", "volume_im", "area_re", "area_im", "eta_re", "eta_im", "residual"],
    );
    let mut push = |name: String, lam: &Lamina| -> Result<()> {
        let p = pappus_check(lam)?;
        let [vr, vi] = re_im(p.volume);
        let [ar, ai] = re_im(p.area);
        let [er, ei] = re_im(p.eta);
        t.push(vec![json!(name), vr, vi, ar, ai, er, ei, num(p.residual)]);
        Ok(())
    };
    for (name, lam) in audit::pappus_catalog()? {
        push(name.into(), &lam)?;
    }
    for (i, (_, _, lam)) in audit::random_polynomial_laminas(seed, random)?.iter().enumerate() {
        push(format!("random cubic #{i}"), lam)?;
    }
    let exp_lam = Lamina::new(
        std::sync::Arc::new(|z: f64| Complex64::new(z.exp(), 0.0)),
        std::sync::Arc::new(|_| Complex64::new(0.0, 0.0)),
        0.0,
        1.0,
        8,
    )?;
    let exact = Complex64::new(std::f64::consts::PI * (std::f64::consts::E.powi(2) - 1.0) / 2.0, 0.0);
    let o = simpson_order_check(&exp_lam, exact)?;
    let mut order = Table::new("simpson_order", &["panels", "error_coarse", "error_fine", "ratio"]);
    order.push(vec![json!(o.panels), num(o.error_coarse), num(o.error_fine), num(o.ratio)]);
    let mut doc = Document::new("Pappus centroid identity").table(t).table(order);
    if let Some(n) = n {
        let chi = character(sel)?;
        let s = parse_point(s)?;
        let cyl = cylinder_volume_sum(&chi, s, n)?;
        let eta = eta_implied(&chi, s, n)?;
        let mut ct = Table::new(
            "cylinder_sum",
            &["N", "volume_re", "volume_im", "partial_re", "partial_im", "eta_re", "eta_im"],
        );
        let [vr, vi] = re_im(cyl);
        let [pr, pi] = re_im(eta.partial_sum);
        let [er, ei] = match eta.eta {
            Some(e) => re_im(e),
            None => [serde_json::Value::Null, serde_json::Value::Null],
        };
        ct.push(vec![json!(n), vr, vi, pr, pi, er, ei]);
        doc = doc.table(ct);
    }
    Ok(doc)
}

fn audit_cmd(
    ctx: &Context,
    all: bool,
    claims: Option<&str>,
    fixed_clock: bool,
    seed: u64,
    step: f64,
) -> Result<String> {
    let selection: BTreeSet<ClaimId> = match (all, claims) {
        (true, _) => ClaimId::ALL.into_iter().collect(),
        (false, Some(list)) => audit::parse_selection(list).map_err(|e| Usage(e.to_string()))?,
        (false, None) => return Err(Usage("audit needs --all or --claims".into()).into()),
    };
    let settings = AuditSettings {
        l_eval: ctx.l,
        scan: ctx.scan,
        scan_step: step,
        seed,
        fixed_clock,
    };
    let report = audit::run_audit(&selection, &settings)?;
    let format = match ctx.format {
        Format::Json => ReportFormat::Json,
        Format::Markdown => ReportFormat::Markdown,
        Format::Csv => ReportFormat::Csv,
    };
    let bytes = audit::export_report(&report, format)?;
    Ok(String::from_utf8(bytes)?)
}
