//! Command-line driver. Every command is a library call plus file I/O.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0  | success |
//! | 1  | I/O or internal failure |
//! | 2  | configuration error (bad file, key, value or table path) |
//! | 3  | search found no candidates |
//! | 4  | zero table refused for certification (precision gate) |
//! | 5  | Newton refinement failed |
//! | 6  | Rouché confirmation failed |
//! | 7  | no usable contour |
//! | 8  | contour minimum not certified |
//! | 9  | contour constants failed |
//! | 10 | no admissible q0 |
//! | 11 | certificate failed verification |
//! | 12 | certificate could not be parsed |

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rug::Float;

use crate::ball::{with_precision_ladder, RealBall, RAD_PREC};
use crate::config::{ConfigError, RunConfig, CERTIFY_TABLE, SEARCH_TABLE};
use crate::fmodel::ExpSum;
use crate::rigor::{
    assemble_certificate, contour_alpha, contour_constants, refine_candidate, rouche_verify, solve_q0, verify_certificate,
    AlphaMode, Certificate, Contour, RigorError,
};
use crate::search::{self, Candidate, ContourProposal, FloatSum, ScanParams};
use crate::zeros::ZeroTable;

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const EMPTY_SEARCH: i32 = 3;
    pub const TABLE_REFUSED: i32 = 4;
    pub const REFINE: i32 = 5;
    pub const ROUCHE: i32 = 6;
    pub const CONTOUR: i32 = 7;
    pub const ALPHA: i32 = 8;
    pub const CONSTANTS: i32 = 9;
    pub const Q0: i32 = 10;
    pub const VERIFY_FAILED: i32 = 11;
    pub const CERT_PARSE: i32 = 12;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl std::fmt::Display) -> Self {
        CliError { code, message: message.to_string() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::new(exit::CONFIG, e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "zerodensity", version, about = "Certified lower bounds on sign-change density from zeros of F")]
pub struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set seg_len=1e-5`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct TableArgs {
    /// Zero table file.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Output file.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Newton scan for high zeros of F_N; writes ranked candidates.
    Search {
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[command(flatten)]
        io: TableArgs,
    },
    /// Propose a contour for a candidate; prints config lines.
    Propose {
        /// Take the top candidate from this file instead of the config.
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[command(flatten)]
        io: TableArgs,
    },
    /// Run the rigorous pipeline and write a JSON certificate.
    Certify {
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[command(flatten)]
        io: TableArgs,
    },
    /// Re-check a certificate's inequalities.
    Verify { certificate: PathBuf },
    /// Summarize a certificate.
    Report { certificate: PathBuf },
}

/// Parses arguments, runs, prints errors; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for kv in &cli.overrides {
        cfg.apply_override(kv)?;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if let Some(n) = cfg.threads {
        // Only the first pool build wins; later calls in the same process are harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Search { tmin, tmax, io } => {
            if let Some(t) = tmin {
                cfg.t_min = t;
            }
            if let Some(t) = tmax {
                cfg.t_max = t;
            }
            apply_io(&mut cfg, io);
            cfg.validate()?;
            let out = cmd_search(&cfg)?;
            print!("{out}");
            Ok(())
        }
        Command::Propose { candidates, io } => {
            apply_io(&mut cfg, io);
            cfg.validate()?;
            let cand = candidate_from(&cfg, candidates.as_deref())?;
            let table = load_table(&cfg, SEARCH_TABLE)?;
            let p = cmd_propose(&cfg, &table, &cand)?;
            print!("{}", proposal_text(&p));
            Ok(())
        }
        Command::Certify { candidates, io } => {
            apply_io(&mut cfg, io);
            cfg.validate()?;
            let cand = candidate_from(&cfg, candidates.as_deref())?;
            let cert = cmd_certify(&cfg, &cand)?;
            let two_kappa = cert.ball(&cert.two_kappa_lower).map(|b| b.lower_f64()).unwrap_or(f64::NAN);
            println!("q0 = {}, N = {}, 2 kappa >= {two_kappa:.6e}", cert.q0, cert.bounds.n);
            Ok(())
        }
        Command::Verify { certificate } => {
            let (out, ok) = cmd_verify(&certificate)?;
            print!("{out}");
            if ok {
                Ok(())
            } else {
                Err(CliError::new(exit::VERIFY_FAILED, "certificate failed verification"))
            }
        }
        Command::Report { certificate } => {
            let cert = read_certificate(&certificate)?;
            print!("{}", render_report(&cert));
            Ok(())
        }
    }
}

fn apply_io(cfg: &mut RunConfig, io: TableArgs) {
    if io.table.is_some() {
        cfg.zero_table = io.table;
    }
    if io.out.is_some() {
        cfg.output = io.out;
    }
}

pub fn load_table(cfg: &RunConfig, fallback: &str) -> Result<ZeroTable, CliError> {
    let path = cfg.table_path(fallback);
    let mut table = ZeroTable::load(&path, cfg.declared_abs_error.as_deref())
        .map_err(|e| CliError::new(exit::CONFIG, format!("{}: {e}", path.display())))?;
    if let Some(h) = &cfg.rh_verified_height {
        let h = RealBall::from_decimal(crate::ball::DEFAULT_PREC, h).map_err(|e| CliError::new(exit::CONFIG, e))?;
        table.set_rh_verified_height(h);
    }
    Ok(table)
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::new(exit::IO, format!("{}: {e}", path.display())))
}

/// Ranked candidates, one per line: `re im start_t iterations`.
pub fn candidates_text(cands: &[Candidate]) -> String {
    let mut s = String::from("# re im start_t iterations n_search\n");
    for c in cands {
        let _ = writeln!(s, "{} {} {} {} {}", c.position.re, c.position.im, c.start_t, c.iterations, c.n_search);
    }
    s
}

pub fn parse_candidates(text: &str) -> Result<Vec<Candidate>, CliError> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || CliError::new(exit::CONFIG, format!("bad candidate line {line:?}"));
        if f.len() < 2 {
            return Err(bad());
        }
        let num = |i: usize| f.get(i).map(|v| v.parse::<f64>().map_err(|_| bad())).transpose();
        out.push(Candidate {
            position: Complex64::new(num(0)?.ok_or_else(bad)?, num(1)?.ok_or_else(bad)?),
            start_t: num(2)?.unwrap_or(f64::NAN),
            iterations: num(3)?.map(|v| v as usize).unwrap_or(0),
            n_search: num(4)?.map(|v| v as usize).unwrap_or(0),
        });
    }
    Ok(out)
}

fn candidate_from(cfg: &RunConfig, file: Option<&Path>) -> Result<Candidate, CliError> {
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::new(exit::CONFIG, format!("{}: {e}", path.display())))?;
        return parse_candidates(&text)?
            .into_iter()
            .next()
            .ok_or_else(|| CliError::new(exit::CONFIG, "candidate file is empty"));
    }
    match (&cfg.candidate_re, &cfg.candidate_im) {
        (Some(re), Some(im)) => Ok(Candidate {
            position: Complex64::new(re.parse().unwrap_or(f64::NAN), im.parse().unwrap_or(f64::NAN)),
            start_t: f64::NAN,
            iterations: 0,
            n_search: 0,
        }),
        _ => Err(CliError::new(exit::CONFIG, "no candidate: set candidate_re/candidate_im or pass --candidates")),
    }
}

pub fn cmd_search(cfg: &RunConfig) -> Result<String, CliError> {
    let table = load_table(cfg, SEARCH_TABLE)?;
    let sum = FloatSum::from_table(&table, cfg.n_search).map_err(|e| CliError::new(exit::CONFIG, e))?;
    let params = ScanParams {
        t_min: cfg.t_min,
        t_max: cfg.t_max,
        step: cfg.step,
        y_start: cfg.y_start,
        max_iter: cfg.max_iter,
        y_cap: cfg.y_cap,
    };
    let found = search::newton_scan(&sum, &params).map_err(|e| CliError::new(exit::CONFIG, e))?;
    let text = candidates_text(&found);
    if let Some(out) = &cfg.output {
        write_output(out, &text)?;
    }
    if found.is_empty() {
        return Err(CliError::new(exit::EMPTY_SEARCH, format!("no candidates in [{}, {}]", cfg.t_min, cfg.t_max)));
    }
    Ok(text)
}

pub fn cmd_propose(cfg: &RunConfig, table: &ZeroTable, cand: &Candidate) -> Result<ContourProposal, CliError> {
    let ords = table.ordinates_f64();
    let fail = |e: search::SearchError| CliError::new(exit::CONTOUR, e);
    match cfg.n {
        Some(n) => search::propose_contour(cand, &ords, n).map_err(fail),
        None => search::sweep_n(cand, &ords, cfg.n_start).map_err(fail),
    }
}

pub fn proposal_text(p: &ContourProposal) -> String {
    format!(
        "n = {}\nx0 = {:.12}\nx1 = {:.12}\ny0 = {:.12}\ny1 = {:.12}\n# alpha ~ {:.8}, a ~ {:.8}, b ~ {:.8}, a_w ~ {:.8}, b_w ~ {:.8}\n# q0 ~ {}, kappa ~ {:.4e}\n",
        p.n,
        p.x0,
        p.x1,
        p.y0,
        p.y1,
        p.alpha_est,
        p.a_est,
        p.b_est,
        p.aw_est,
        p.bw_est,
        p.q0_est.map(|q| q.to_string()).unwrap_or_else(|| "none".into()),
        p.kappa_est
    )
}

fn log(diag: &mut Vec<String>, line: String) {
    eprintln!("{line}");
    diag.push(line);
}

/// refine, Rouché, contour, alpha, constants, q0, certificate.
pub fn cmd_certify(cfg: &RunConfig, cand: &Candidate) -> Result<Certificate, CliError> {
    let mut diag = Vec::new();
    let result = certify_stages(cfg, cand, &mut diag);
    if let (Err(e), Some(out)) = (&result, &cfg.output) {
        diag.push(format!("failed (exit {}): {}", e.code, e.message));
        let mut path = out.clone().into_os_string();
        path.push(".partial.txt");
        let _ = std::fs::write(PathBuf::from(path), diag.join("\n") + "\n");
    }
    result
}

fn certify_stages(cfg: &RunConfig, cand: &Candidate, diag: &mut Vec<String>) -> Result<Certificate, CliError> {
    let table = load_table(cfg, CERTIFY_TABLE)?;
    if !table.is_certify_grade() {
        return Err(CliError::new(
            exit::TABLE_REFUSED,
            format!("table declares error {}, certification needs at most 2^-102", table.declared_abs_error_text()),
        ));
    }
    if !(cand.position.re.is_finite() && cand.position.im > 0.0) {
        return Err(CliError::new(exit::CONFIG, "candidate must be finite with positive imaginary part"));
    }
    log(diag, format!("table: {} zeros, digest {}", table.len(), table.source_digest()));
    let (start, max) = (cfg.precision_bits, cfg.max_precision_bits);
    let radius = Float::with_val(RAD_PREC, Float::i_exp(1, -(cfg.radius_exp as i32)));

    let (zero, zero_prec) = with_precision_ladder(start, max, |prec| {
        let sum = ExpSum::from_table(&table, cfg.m, prec)?;
        let center = refine_candidate(cand.position, &sum)?;
        rouche_verify(&center, &sum, &table, &radius)
    })
    .map_err(|e| {
        let code = if matches!(e, RigorError::DerivativeContainsZero | RigorError::Table(_)) { exit::REFINE } else { exit::ROUCHE };
        CliError::new(code, e)
    })?;
    log(
        diag,
        format!(
            "zero: Re in [{}, {}], Im in [{}, {}] ({} bits, {} arcs, min |F_M| >= {}, tail <= {})",
            zero.xi.re.lower().to_string_radix(10, Some(15)),
            zero.xi.re.upper().to_string_radix(10, Some(15)),
            zero.xi.im.lower().to_string_radix(10, Some(9)),
            zero.xi.im.upper().to_string_radix(10, Some(9)),
            zero_prec,
            zero.segments,
            zero.min_on_circle.lower().to_string_radix(10, Some(4)),
            zero.tail_at_circle.upper().to_string_radix(10, Some(4)),
        ),
    );

    let (contour, n) = match cfg.contour() {
        Some([x0, x1, y0, y1]) => {
            let n = cfg.n.ok_or_else(|| CliError::new(exit::CONFIG, "a fixed contour needs n"))?;
            (Contour::new(x0, x1, y0, y1).map_err(|e| CliError::new(exit::CONFIG, e))?, n)
        }
        None => {
            let refined = Candidate {
                position: Complex64::new(zero.center.re.to_f64(), zero.center.im.to_f64()),
                ..cand.clone()
            };
            let p = cmd_propose(cfg, &table, &refined)?;
            let fmt = |v: f64| format!("{v:.12}");
            let c = Contour::new(&fmt(p.x0), &fmt(p.x1), &fmt(p.y0), &fmt(p.y1)).map_err(|e| CliError::new(exit::CONTOUR, e))?;
            (c, p.n)
        }
    };
    if !contour.strictly_contains(&zero.xi).map_err(|e| CliError::new(exit::CONTOUR, e))? {
        return Err(CliError::new(exit::CONTOUR, "the verified zero is not strictly inside the contour"));
    }
    log(diag, format!("contour: N = {n}, {contour:?}"));

    let (alpha, alpha_prec) = with_precision_ladder(start, max, |prec| {
        let sum = ExpSum::from_table(&table, n, prec)?;
        contour_alpha(&sum, &contour, &cfg.seg_len, AlphaMode::Expansion)
    })
    .map_err(|e| CliError::new(exit::ALPHA, e))?;
    log(
        diag,
        format!("alpha >= {} over {} pieces ({} bits)", alpha.alpha.lower().to_string_radix(10, Some(10)), alpha.pieces, alpha_prec),
    );

    let prec = zero_prec.max(alpha_prec);
    let w_lower = RealBall::exact(prec, &zero.xi.im.lower());
    let bounds = contour_constants(&table, n, &contour, &alpha.alpha, &w_lower, prec).map_err(|e| CliError::new(exit::CONSTANTS, e))?;
    log(
        diag,
        format!(
            "a <= {}, b <= {}, a_w <= {}, b_w <= {}",
            bounds.a.upper().to_string_radix(10, Some(8)),
            bounds.b.upper().to_string_radix(10, Some(8)),
            bounds.a_w.upper().to_string_radix(10, Some(8)),
            bounds.b_w.upper().to_string_radix(10, Some(8)),
        ),
    );
    let q0 = solve_q0(&bounds, prec).map_err(|e| CliError::new(exit::Q0, e))?;
    log(diag, format!("q0 = {q0}"));
    let cert = assemble_certificate(&zero, &bounds, q0, &cfg.seg_len, &table, prec).map_err(|e| CliError::new(exit::IO, e))?;
    if let Some(out) = &cfg.output {
        write_output(out, &cert.to_json())?;
    }
    Ok(cert)
}

pub fn read_certificate(path: &Path) -> Result<Certificate, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new(exit::IO, format!("{}: {e}", path.display())))?;
    Certificate::from_json(&text).map_err(|e| CliError::new(exit::CERT_PARSE, format!("{}: {e}", path.display())))
}

/// Check listing and overall verdict.
pub fn cmd_verify(path: &Path) -> Result<(String, bool), CliError> {
    let cert = read_certificate(path)?;
    let report = verify_certificate(&cert);
    let mut out = String::new();
    for c in &report.checks {
        let _ = writeln!(out, "{} {:<22} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(out, "{}", if report.passed() { "certificate verified" } else { "certificate REJECTED" });
    Ok((out, report.passed()))
}

/// Reference constants for the 14685.516 zero; the certificate should be at
/// least as strong as each.
const REFERENCE: [(&str, &str, bool); 5] = [
    ("alpha", "0.00517911", true),
    ("a", "0.0612946", false),
    ("a_w", "0.0463553", false),
    ("b", "0.00212713", false),
    ("b_w", "0.000895455", false),
];

pub fn render_report(cert: &Certificate) -> String {
    let mut s = String::new();
    let ball = |b: &crate::rigor::BallJson| cert.ball(b).ok();
    let digits = |x: &Float, d: usize| x.to_string_radix(10, Some(d));
    let z = &cert.zero;
    let _ = writeln!(s, "zero of F:  Re in [{}, {}]", z.xi_re_interval[0], z.xi_re_interval[1]);
    let _ = writeln!(s, "            Im in [{}, {}]", z.xi_im_interval[0], z.xi_im_interval[1]);
    if let (Some(m), Some(t)) = (ball(&z.min_on_circle), ball(&z.tail_at_circle)) {
        let _ = writeln!(
            s,
            "Rouché:     M = {}, radius {}, min |F_M| >= {}, tail <= {}, winding {}",
            z.m,
            z.radius_used,
            digits(&m.lower(), 4),
            digits(&t.upper(), 4),
            z.winding
        );
    }
    let c = &cert.bounds.contour;
    let _ = writeln!(s, "contour:    [{}, {}] x [{}, {}], N = {}, piece length {}", c.x0, c.x1, c.y0, c.y1, cert.bounds.n, cert.bounds.seg_len);
    let _ = writeln!(s, "\n{:<6} {:>22} {:>14}", "const", "certified", "reference");
    let b = &cert.bounds;
    for (name, reference, is_lower) in REFERENCE {
        let stored = match name {
            "alpha" => &b.alpha,
            "a" => &b.a,
            "a_w" => &b.a_w,
            "b" => &b.b,
            _ => &b.b_w,
        };
        let Some(v) = ball(stored) else { continue };
        let r: f64 = reference.parse().expect("literal");
        let (val, rel, ok) = if is_lower {
            let v = v.lower();
            let ok = v.to_f64() >= r;
            (v, ">=", ok)
        } else {
            let v = v.upper();
            let ok = v.to_f64() <= r;
            (v, "<=", ok)
        };
        let _ = writeln!(s, "{:<6} {} {:>19} {:>14}  {}", name, rel, digits(&val, 10), reference, if ok { "ok" } else { "weaker" });
    }
    let _ = writeln!(s, "\nq0 = {} (criterion crossing at q = {})", cert.q0, cert.q0_crossing);
    match (cert.legacy_q0, &cert.legacy_note) {
        (Some(q), _) => {
            let _ = writeln!(s, "legacy formula: q0 = {q}");
        }
        (None, note) => {
            let _ = writeln!(s, "legacy formula: infeasible ({})", note.as_deref().unwrap_or("no solution"));
        }
    }
    if let (Some(tk), Some(g), Some(f)) = (ball(&cert.two_kappa_lower), ball(&cert.gamma1), ball(&cert.final_constant)) {
        let g_pi = g.div(&RealBall::pi(g.prec())).map(|v| v.lower()).unwrap_or_else(|_| Float::new(64));
        let _ = writeln!(s, "2 kappa >= {}", digits(&tk.lower(), 6));
        let _ = writeln!(s, "final constant >= {} + {}", digits(&g_pi, 12), digits(&tk.lower(), 4));
        let _ = writeln!(s, "               >= {}", digits(&f.lower(), 40));
    }
    s
}
