//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The headline certification takes a minute or two; everything else is quick.

mod common;

use std::path::Path;

use num_complex::Complex64;
use rug::Float;
use zerodensity::ball::RealBall;
use zerodensity::cli::{cmd_certify, cmd_verify, render_report};
use zerodensity::config::RunConfig;
use zerodensity::fmodel::{zero_free_check, ZeroFreeVerdict};
use zerodensity::rigor::{solve_q0, solve_q0_legacy, BallJson, Certificate, RigorError};
use zerodensity::search::{newton_scan, Candidate, FloatSum, ScanParams};

use common::*;

type Outcome = Result<String, String>;

/// Seven significant digits of a stored ball midpoint.
fn short(b: &BallJson) -> String {
    b.mid.parse::<f64>().map(|v| format!("{v:.6e}")).unwrap_or_else(|_| b.mid.clone())
}

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn upper_le(b: &BallJson, cert: &Certificate, limit: &str) -> bool {
    cert.ball(b).map(|b| b.upper() <= Float::with_val(512, Float::parse(limit).unwrap())).unwrap_or(false)
}

fn lower_ge(b: &BallJson, cert: &Certificate, limit: &str) -> bool {
    cert.ball(b).map(|b| b.lower() >= Float::with_val(512, Float::parse(limit).unwrap())).unwrap_or(false)
}

fn certify(out: &Path) -> Result<Certificate, String> {
    let conf = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/zero_14685.conf");
    let mut cfg = RunConfig::load(&conf).map_err(|e| e.to_string())?;
    cfg.output = Some(out.to_path_buf());
    cfg.validate().map_err(|e| e.to_string())?;
    let cand = Candidate {
        position: Complex64::new(cfg.candidate_re.as_ref().unwrap().parse().unwrap(), cfg.candidate_im.as_ref().unwrap().parse().unwrap()),
        start_t: f64::NAN,
        iterations: 0,
        n_search: 0,
    };
    cmd_certify(&cfg, &cand).map_err(|e| format!("exit {}: {}", e.code, e.message))
}

fn headline(cert: &Certificate) -> Outcome {
    let two_kappa = lower_ge(&cert.two_kappa_lower, cert, "1.867e-30");
    check(
        cert.bounds.n == 11 && cert.q0 == 537 && two_kappa && cert.zero.m == 4520,
        format!("N = 11, q0 = 537, 2 kappa >= {}", short(&cert.two_kappa_lower)),
        format!("N = {}, q0 = {}, 2 kappa ~ {}, M = {}", cert.bounds.n, cert.q0, short(&cert.two_kappa_lower), cert.zero.m),
    )
}

fn constants(cert: &Certificate) -> Outcome {
    let b = &cert.bounds;
    let ok = [
        lower_ge(&b.alpha, cert, "0.00517911"),
        upper_le(&b.a, cert, "0.0612946"),
        upper_le(&b.a_w, cert, "0.0463553"),
        upper_le(&b.b, cert, "0.00212713"),
        upper_le(&b.b_w, cert, "0.000895455"),
    ];
    let text = format!("alpha {} a {} a_w {} b {} b_w {}", short(&b.alpha), short(&b.a), short(&b.a_w), short(&b.b), short(&b.b_w));
    check(ok.iter().all(|&x| x), text.clone(), format!("{ok:?}: {text}"))
}

fn enclosure(cert: &Certificate) -> Outcome {
    let z = &cert.zero;
    let (re, im) = (cert.ball(&z.xi_re).unwrap(), cert.ball(&z.xi_im).unwrap());
    let inside = |b: &RealBall, lo: &str, hi: &str| {
        b.lower() >= Float::with_val(512, Float::parse(lo).unwrap()) && b.upper() <= Float::with_val(512, Float::parse(hi).unwrap())
    };
    let ok = inside(&re, "14685.5161551", "14685.5161572") && inside(&im, "0.0798317", "0.0798338") && cert.precision_bits <= 768;
    let text = format!("Re [{}, {}], Im [{}, {}] at {} bits", z.xi_re_interval[0], z.xi_re_interval[1], z.xi_im_interval[0], z.xi_im_interval[1], cert.precision_bits);
    check(ok, text.clone(), text)
}

fn rouche_ingredients(cert: &Certificate) -> Outcome {
    let z = &cert.zero;
    let radius_ok = z.radius_used.parse::<f64>() == Ok(2f64.powi(-20));
    let ok = lower_ge(&z.min_on_circle, cert, "2.9e-7") && upper_le(&z.tail_at_circle, cert, "4e-176") && radius_ok && z.m == 4520;
    let text = format!("min |F_4520| ~ {}, tail ~ {}", short(&z.min_on_circle), short(&z.tail_at_circle));
    check(ok, text.clone(), text)
}

fn zero_free() -> Outcome {
    let table = search_table();
    let prec = 384;
    let r = zero_free_check(&table, &dec(prec, "0.0841"), 1000, prec).map_err(|e| e.to_string())?;
    let first = r.first_term.lower();
    let explicit = r.explicit.upper();
    let tail = r.tail.upper();
    let ok = r.verdict == ZeroFreeVerdict::ZeroFree && first > 0.021536 && explicit < 0.021528 && tail <= 5e-54;
    let text = format!("first >= {first:.8}, explicit <= {explicit:.8}, tail <= {tail:.3e}");
    check(ok, text.clone(), format!("{:?}: {text}", r.verdict))
}

fn search() -> Outcome {
    let table = search_table();
    let sum = FloatSum::from_table(&table, 1000).unwrap();
    let trunc = |x: f64, d: i32| (x * 10f64.powi(d)).floor() / 10f64.powi(d);
    let top = newton_scan(&sum, &ScanParams::window(14600.0, 14800.0)).map_err(|e| e.to_string())?;
    let top = top.first().ok_or("no candidate in [14600, 14800]")?;
    let mut fails = vec![];
    if trunc(top.position.re, 4) != 14685.5161 || trunc(top.position.im, 3) != 0.079 {
        fails.push(format!("top {}", top.position));
    }
    for (re, im) in [(141914.41, 0.0795), (52206.82, 0.0794), (132400.21, 0.0787), (78306.31, 0.0783), (153566.13, 0.0785)] {
        let found = newton_scan(&sum, &ScanParams::window(re - 1.0, re + 1.0)).map_err(|e| e.to_string())?;
        match found.first() {
            Some(c) if trunc(c.position.re, 2) == re && trunc(c.position.im, 4) == im => {}
            other => fails.push(format!("near {re}: {other:?}")),
        }
    }
    check(fails.is_empty(), format!("top {:.6}, five spot windows found", top.position), fails.join("; "))
}

fn oracle_suite() -> Outcome {
    let table = search_table();
    let lehman = lehman_vs_brute_force(&table, 20, 7);
    let (ops, violations) = containment_fuzz(10_000, 11);
    let windings: Vec<i64> = (1..=3).map(winding_of_power).collect();
    let fd = derivative_vs_finite_difference(&table, 10, 3);
    let ok = lehman.is_empty() && violations.is_empty() && ops >= 9_000 && windings == [1, 2, 3] && fd < 1e-6;
    let text = format!(
        "lehman failures {}, containment violations {}/{ops}, windings {windings:?}, derivative gap {fd:.1e}",
        lehman.len(),
        violations.len()
    );
    check(ok, text.clone(), format!("{text}; {lehman:?} {:?}", violations.first()))
}

fn criterion_comparison(cert: &Certificate) -> Outcome {
    let bounds = cert.bounds().map_err(|e| e.to_string())?;
    let prec = cert.precision_bits;
    let legacy = solve_q0_legacy(&bounds, prec);
    let q0 = solve_q0(&bounds, prec).map_err(|e| e.to_string())?;
    let report = render_report(cert);
    let ok = matches!(legacy, Err(RigorError::LegacyInfeasible)) && q0 == 537 && report.contains("infeasible");
    check(ok, format!("legacy infeasible, improved q0 = {q0}"), format!("legacy {legacy:?}, q0 {q0}"))
}

fn tamper(genuine: &Path, dir: &Path) -> Outcome {
    let text = std::fs::read_to_string(genuine).map_err(|e| e.to_string())?;
    let cert = Certificate::from_json(&text).map_err(|e| e.to_string())?;
    let mut verdicts = vec![("genuine", cmd_verify(genuine).map_err(|e| e.message)?.1)];
    let mut mutants = vec![];
    let mut c = cert.clone();
    c.q0 -= 1;
    mutants.push(("q0-1", c));
    let mut c = cert.clone();
    c.bounds.alpha.rad = "0.001".into();
    mutants.push(("widened alpha", c));
    let mut c = cert.clone();
    let r: f64 = c.zero.radius_used.parse().map_err(|_| "unreadable radius")?;
    c.zero.radius_used = (r / 2.0).to_string();
    mutants.push(("shrunken radius", c));
    for (name, mut c) in mutants {
        c.digest = c.payload_digest();
        let p = dir.join(format!("{}.json", name.replace(' ', "_")));
        std::fs::write(&p, c.to_json()).map_err(|e| e.to_string())?;
        verdicts.push((name, cmd_verify(&p).map_err(|e| e.message)?.1));
    }
    let ok = verdicts[0].1 && verdicts[1..].iter().all(|v| !v.1);
    let text = verdicts.iter().map(|(n, v)| format!("{n}: {}", if *v { "accepted" } else { "rejected" })).collect::<Vec<_>>().join(", ");
    check(ok, text.clone(), text)
}

fn main() {
    // `cargo test -- --list` and name filters should not trigger the long run.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("certificate.json");
    let cert = certify(&out);
    let need = |f: fn(&Certificate) -> Outcome| -> Outcome {
        match &cert {
            Ok(c) => f(c),
            Err(e) => Err(format!("certification failed: {e}")),
        }
    };
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "headline reproduction", need(headline)),
        (2, "contour constants", need(constants)),
        (3, "zero enclosure", need(enclosure)),
        (4, "Rouche ingredients", need(rouche_ingredients)),
        (5, "zero-free half-plane", zero_free()),
        (6, "search reproduction", search()),
        (7, "oracle properties", oracle_suite()),
        (8, "criterion comparison", need(criterion_comparison)),
        (9, "tamper detection", if cert.is_ok() { tamper(&out, dir.path()) } else { Err("no certificate".into()) }),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(d) => println!("criterion {n} ({name}): PASS  {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL  {d}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
