//! Oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::Rng;
use proptest::test_runner::{RngAlgorithm, TestRng};
use rug::{Float, Rational};
use zerodensity::ball::{ComplexBall, NumError, RealBall, RAD_PREC};
use zerodensity::fmodel::{lehman_bound, ExpSum, Phi, Term};
use zerodensity::zeros::{coefficient_for, ZeroTable};

pub const ORACLE_PREC: u32 = 4096;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn search_table() -> ZeroTable {
    ZeroTable::load(data("zeros_search_1000.txt"), None).unwrap()
}

pub fn rng(seed: u8) -> TestRng {
    TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32])
}

/// Uniform in `[lo, hi)`.
pub fn uniform(rng: &mut TestRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn dec(prec: u32, s: &str) -> RealBall {
    RealBall::from_decimal(prec, s).unwrap()
}

/// A ball around `mid` of radius `rad`, and an exact point inside it.
fn ball_and_point(prec: u32, mid: f64, rad: f64, t: f64) -> (RealBall, RealBall) {
    let b = RealBall::with_radius(Float::with_val(prec, mid), &Float::with_val(RAD_PREC, rad));
    let p = Float::with_val(ORACLE_PREC, mid) + Float::with_val(ORACLE_PREC, rad) * t;
    (b, RealBall::exact(ORACLE_PREC, &p))
}

fn random_input(rng: &mut TestRng, prec: u32, positive: bool) -> (RealBall, RealBall) {
    let mid = if positive { uniform(rng, 0.05, 20.0) } else { uniform(rng, -20.0, 20.0) };
    let rad = match rng.next_u32() % 3 {
        0 => 0.0,
        1 => mid.abs() * 2f64.powi(-((rng.next_u32() % 50) as i32) - 3),
        _ => 2f64.powi(-((rng.next_u32() % 200) as i32)),
    };
    let t = uniform(rng, -1.0, 1.0);
    ball_and_point(prec, mid, rad.min(mid.abs() * 0.5), t)
}

/// Applies one randomly chosen operation to random balls and to exact points
/// inside them; a violation is a point image outside the ball image.
/// Returns the number of checked operations and the violations.
pub fn containment_fuzz(ops: usize, seed: u8) -> (usize, Vec<String>) {
    let mut rng = rng(seed);
    let mut checked = 0;
    let mut bad = Vec::new();
    for i in 0..ops {
        let prec = [53, 64, 128, 384][(rng.next_u32() % 4) as usize];
        let op = rng.next_u32() % 14;
        let positive = matches!(op, 6 | 7);
        let (x, px) = random_input(&mut rng, prec, positive);
        let (y, py) = random_input(&mut rng, prec, false);
        let (u, pu) = random_input(&mut rng, prec, false);
        let (v, pv) = random_input(&mut rng, prec, false);
        let real = |f: &dyn Fn(&RealBall, &RealBall) -> Result<RealBall, NumError>| {
            (f(&x, &y), f(&px, &py).map(ComplexBall::from_real).map_err(|_| ()))
        };
        let (got, want): (Result<ComplexBall, NumError>, Result<ComplexBall, ()>) = match op {
            0 => wrap(real(&|a, b| Ok(a.add(b)))),
            1 => wrap(real(&|a, b| Ok(a.sub(b)))),
            2 => wrap(real(&|a, b| Ok(a.mul(b)))),
            3 => wrap(real(&|a, b| a.div(b))),
            4 => wrap(real(&|a, _| Ok(a.sqr()))),
            5 => wrap(real(&|a, _| Ok(a.mul_2si(-3).exp()))),
            6 => wrap(real(&|a, _| a.log())),
            7 => wrap(real(&|a, _| a.sqrt())),
            8 => wrap(real(&|a, _| Ok(a.sin()))),
            9 => wrap(real(&|a, _| Ok(a.cos()))),
            10 => {
                let (a, b) = (ComplexBall::new(x.clone(), y.clone()), ComplexBall::new(u.clone(), v.clone()));
                let (pa, pb) = (ComplexBall::new(px.clone(), py.clone()), ComplexBall::new(pu.clone(), pv.clone()));
                (Ok(a.mul(&b)), Ok(pa.mul(&pb)))
            }
            11 => {
                let (a, b) = (ComplexBall::new(x.clone(), y.clone()), ComplexBall::new(u.clone(), v.clone()));
                let (pa, pb) = (ComplexBall::new(px.clone(), py.clone()), ComplexBall::new(pu.clone(), pv.clone()));
                (a.div(&b), pa.div(&pb).map_err(|_| ()))
            }
            12 => {
                let a = ComplexBall::new(x.mul_2si(-3), y.clone());
                (Ok(a.exp()), Ok(ComplexBall::new(px.mul_2si(-3), py.clone()).exp()))
            }
            _ => {
                let a = ComplexBall::new(x.clone(), y.clone());
                (Ok(ComplexBall::from_real(a.abs())), Ok(ComplexBall::from_real(ComplexBall::new(px.clone(), py.clone()).abs())))
            }
        };
        let (Ok(got), Ok(want)) = (got, want) else { continue };
        checked += 1;
        if !got.is_finite() {
            continue;
        }
        if !got.contains(&want) {
            bad.push(format!("op {op} #{i} at {prec} bits: {x:?} {y:?} -> {got:?} misses {want:?}"));
        }
    }
    (checked, bad)
}

fn wrap(
    (got, want): (Result<RealBall, NumError>, Result<ComplexBall, ()>),
) -> (Result<ComplexBall, NumError>, Result<ComplexBall, ()>) {
    (got.map(ComplexBall::from_real), want)
}

/// Lehman bound against the brute-force sum over the table on random
/// sub-ranges; returns the failures.
pub fn lehman_vs_brute_force(table: &ZeroTable, ranges: usize, seed: u8) -> Vec<String> {
    let prec = 256;
    let mut rng = rng(seed);
    let top = table.zeros().last().unwrap().ordinate.to_f64();
    let mut bad = Vec::new();
    for _ in 0..ranges {
        let t1 = uniform(&mut rng, 18.0, top - 50.0);
        let t2 = uniform(&mut rng, t1 + 10.0, top);
        let phi = Phi {
            decay: RealBall::from_f64(prec, uniform(&mut rng, 0.0, 0.05)),
            t_power: rng.next_u32() % 3,
            log_power: rng.next_u32() % 2,
        };
        let (b1, b2) = (RealBall::from_f64(prec, t1), RealBall::from_f64(prec, t2));
        let bound = lehman_bound(&phi, &b1, Some(&b2), prec).unwrap();
        let mut sum = RealBall::zero(prec);
        for n in 1..=table.len() {
            let g = table.ordinate(n, prec).unwrap();
            if g.upper() >= t1 && g.lower() <= t2 {
                sum = sum.add(&phi.eval(&g).unwrap());
            }
        }
        if sum.upper() > bound.upper() {
            bad.push(format!("[{t1}, {t2}] {phi:?}: sum {} > bound {}", sum.upper(), bound.upper()));
        }
    }
    bad
}

/// Winding number of `z^k` around the origin on the unit circle.
pub fn winding_of_power(k: u32) -> i64 {
    let prec = 128;
    let center = ComplexBall::zero(prec);
    let radius = Float::with_val(RAD_PREC, 1);
    zerodensity::rigor::winding_number(
        |z: &ComplexBall| {
            let mut p = z.clone();
            for _ in 1..k {
                p = p.mul(z);
            }
            Ok(p)
        },
        &center,
        &radius,
        64,
    )
    .unwrap()
}

/// Largest relative gap between `F_N'` and a central difference, over random
/// points in the upper half-plane.
pub fn derivative_vs_finite_difference(table: &ZeroTable, points: usize, seed: u8) -> f64 {
    let prec = 256;
    // exact ordinates: the table's error radius would swamp a 1e-20 step
    let terms = table.ordinates_f64()[..100]
        .iter()
        .map(|&g| {
            let w = RealBall::from_f64(prec, g);
            Term { a: coefficient_for(&w), w }
        })
        .collect();
    let sum = ExpSum::from_terms(prec, terms);
    let mut rng = rng(seed);
    let h = RealBall::from_decimal(prec, "1e-20").unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let z = ComplexBall::from_f64(prec, uniform(&mut rng, 0.0, 20000.0), uniform(&mut rng, 0.0, 0.5));
        let step = ComplexBall::from_real(h.clone());
        let fd = sum.eval(&z.add(&step)).sub(&sum.eval(&z.sub(&step))).div(&ComplexBall::from_real(h.mul_2si(1))).unwrap();
        let d = sum.eval_deriv(&z);
        let gap = d.sub(&fd).abs().to_f64() / d.abs().to_f64();
        worst = worst.max(gap);
    }
    worst
}

/// `true` when the exact rational `q` lies in the ball.
pub fn holds(b: &RealBall, q: &str) -> bool {
    b.contains_rational(&q.parse::<Rational>().unwrap())
}
