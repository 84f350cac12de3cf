//! Floating-point exploration: Newton-Raphson scans for zeros of `F_N` high
//! above the real axis, and the heuristics that turn a candidate into a
//! contour. Nothing here is rigorous; `rigor` re-derives every number it uses.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::zeros::{TableError, ZeroTable};

pub const DEFAULT_STEP: f64 = 0.1;
pub const DEFAULT_Y_START: f64 = 0.04;
pub const DEFAULT_MAX_ITER: usize = 25;
pub const DEFAULT_Y_CAP: f64 = 0.085;
pub const DEFAULT_N_SEARCH: usize = 1000;
pub const REFINE_ITER: usize = 100;
/// Candidates must satisfy `|F| < RESIDUAL_TOL * max(1, |F'| |last step|)`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Two candidates closer than this are the same zero.
pub const MERGE_TOL: f64 = 1e-6;
pub const BISECT_TOL: f64 = 1e-12;
/// Half-width of the proposed contour.
pub const CONTOUR_HALF_WIDTH: f64 = 0.05;
/// Window above the candidate searched for the top edge.
pub const Y1_WINDOW: f64 = 0.1;
/// Consecutive infeasible orders tolerated before the first feasible one.
pub const SWEEP_RETRIES: usize = 5;
pub const Q0_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search parameters: {0}")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("no maximum of |F_N| in (Im xi, Im xi + {Y1_WINDOW}]")]
    NoMaximum,
    #[error("no y0 below the candidate matches |F_N| on the top edge")]
    NoMatchingY0,
    #[error("no feasible truncation order found")]
    NoFeasibleOrder,
}

/// `F_N` in double precision.
#[derive(Debug, Clone)]
pub struct FloatSum {
    w: Vec<f64>,
    a: Vec<Complex64>,
}

impl FloatSum {
    pub fn new(ordinates: &[f64]) -> Self {
        let a = ordinates.iter().map(|&g| Complex64::new(0.5, g).inv()).collect();
        FloatSum { w: ordinates.to_vec(), a }
    }

    pub fn from_table(table: &ZeroTable, order: usize) -> Result<Self, TableError> {
        table.require(order)?;
        Ok(Self::new(&table.ordinates_f64()[..order]))
    }

    pub fn order(&self) -> usize {
        self.w.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.w.iter().zip(&self.a).map(|(&w, &a)| a * (Complex64::i() * w * z).exp()).sum()
    }

    /// `(F_N(z), F_N'(z))`.
    pub fn eval_with_deriv(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for (&w, &a) in self.w.iter().zip(&self.a) {
            let v = a * (Complex64::i() * w * z).exp();
            f += v;
            df += Complex64::i() * w * v;
        }
        (f, df)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub position: Complex64,
    pub start_t: f64,
    pub iterations: usize,
    pub n_search: usize,
}

#[derive(Debug, Clone)]
pub struct ScanParams {
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub y_start: f64,
    pub max_iter: usize,
    pub y_cap: f64,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            t_min: 0.0,
            t_max: 0.0,
            step: DEFAULT_STEP,
            y_start: DEFAULT_Y_START,
            max_iter: DEFAULT_MAX_ITER,
            y_cap: DEFAULT_Y_CAP,
        }
    }
}

impl ScanParams {
    pub fn window(t_min: f64, t_max: f64) -> Self {
        ScanParams { t_min, t_max, ..Default::default() }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min < self.t_max) {
            return Err(SearchError::InvalidParams("need t_min < t_max"));
        }
        if !(self.step > 0.0) {
            return Err(SearchError::InvalidParams("step must be positive"));
        }
        if !(self.y_cap > 0.0 && self.y_start > 0.0 && self.y_start < self.y_cap) {
            return Err(SearchError::InvalidParams("need 0 < y_start < y_cap"));
        }
        Ok(())
    }
}

struct Run {
    z: Complex64,
    last_step: f64,
    iterations: usize,
}

/// Plain Newton iteration; `None` when the iterate leaves `0 < Im z < y_cap`
/// or the derivative vanishes.
fn newton(sum: &FloatSum, mut z: Complex64, max_iter: usize, y_cap: f64) -> Option<Run> {
    let mut last_step = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..max_iter {
        let (f, df) = sum.eval_with_deriv(z);
        if df.norm() == 0.0 || !df.is_finite() {
            return None;
        }
        let step = f / df;
        z -= step;
        iterations += 1;
        last_step = step.norm();
        if !(z.im > 0.0 && z.im < y_cap) || !z.is_finite() {
            return None;
        }
        if last_step <= f64::EPSILON * z.norm() {
            break;
        }
    }
    Some(Run { z, last_step, iterations })
}

fn residual_ok(sum: &FloatSum, run: &Run) -> bool {
    let (f, df) = sum.eval_with_deriv(run.z);
    f.norm() < RESIDUAL_TOL * (df.norm() * run.last_step).max(1.0)
}

/// Newton scan of `F_N` from `t + i y_start` for `t` on a grid. Converged
/// runs are merged, ranked, and the best one polished with `REFINE_ITER`
/// further steps.
pub fn newton_scan(sum: &FloatSum, params: &ScanParams) -> Result<Vec<Candidate>, SearchError> {
    params.validate()?;
    let count = ((params.t_max - params.t_min) / params.step).floor() as usize + 1;
    let found: Vec<Candidate> = (0..count)
        .into_par_iter()
        .filter_map(|k| {
            let t = params.t_min + k as f64 * params.step;
            let run = newton(sum, Complex64::new(t, params.y_start), params.max_iter, params.y_cap)?;
            residual_ok(sum, &run).then_some(Candidate {
                position: run.z,
                start_t: t,
                iterations: run.iterations,
                n_search: sum.order(),
            })
        })
        .collect();

    let mut merged: Vec<Candidate> = Vec::new();
    for c in found {
        match merged.iter_mut().find(|m| (m.position - c.position).norm() < MERGE_TOL) {
            Some(m) if c.start_t < m.start_t => *m = c,
            Some(_) => {}
            None => merged.push(c),
        }
    }
    let mut ranked = rank_candidates(merged);
    if let Some(top) = ranked.first_mut() {
        if let Some(run) = newton(sum, top.position, REFINE_ITER, params.y_cap) {
            if residual_ok(sum, &run) {
                top.position = run.z;
                top.iterations += run.iterations;
            }
        }
    }
    Ok(ranked)
}

/// Highest first; equal heights by real part.
pub fn rank_candidates(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    cands.sort_by(|a, b| match b.position.im.total_cmp(&a.position.im) {
        Ordering::Equal => a.position.re.total_cmp(&b.position.re),
        o => o,
    });
    cands
}

/// Floating estimates for a rectangle around a candidate.
#[derive(Debug, Clone)]
pub struct ContourProposal {
    pub n: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub alpha_est: f64,
    pub a_est: f64,
    pub b_est: f64,
    pub aw_est: f64,
    pub bw_est: f64,
    /// `None` when `alpha <= b + 2 b_w` or no `q0` up to the limit works.
    pub q0_est: Option<u64>,
    pub kappa_est: f64,
    pub log_kappa_est: f64,
}

impl ContourProposal {
    pub fn feasible(&self) -> bool {
        self.q0_est.is_some()
    }
}

/// `2 a_w sin(pi/q) + 2 pi a / q <= alpha - b - 2 b_w`.
pub fn q0_condition(q: u64, a: f64, aw: f64, alpha: f64, b: f64, bw: f64) -> bool {
    let q = q as f64;
    2.0 * aw * (PI / q).sin() + 2.0 * PI * a / q <= alpha - b - 2.0 * bw
}

/// Smallest `q >= 2` satisfying [`q0_condition`].
pub fn q0_estimate(a: f64, aw: f64, alpha: f64, b: f64, bw: f64) -> Option<u64> {
    if !(alpha > b + 2.0 * bw) {
        return None;
    }
    (2..=Q0_LIMIT).find(|&q| q0_condition(q, a, aw, alpha, b, bw))
}

/// Lehman-style upper bound for `sum_{gamma >= t1} e^{-y gamma}/gamma`.
fn lehman_tail_f64(y: f64, t1: f64) -> f64 {
    let l1 = (t1 / (2.0 * PI)).ln();
    let e = (-y * t1).exp();
    let main = l1 / t1 * e / y / (2.0 * PI);
    let err = 4.0 * e / t1 * t1.ln() + 2.0 * e / (y * t1 * t1);
    main + err
}

fn weighted_sums(ordinates: &[f64], n: usize, y: f64) -> (f64, f64) {
    let term = |g: f64| (-g * y).exp() / (0.25 + g * g).sqrt();
    let head = ordinates[..n].iter().map(|&g| term(g)).sum();
    let mut tail: f64 = ordinates[n..].iter().map(|&g| term(g)).sum();
    if let Some(&top) = ordinates.last() {
        tail += lehman_tail_f64(y, top);
    }
    (head, tail)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First local maximum of `y -> |F(x + i y)|` above `y_from`.
fn first_maximum(sum: &FloatSum, x: f64, y_from: f64) -> Option<f64> {
    // d/dy |F|^2 = 2 Re(conj(F) i F')
    let slope = |y: f64| {
        let (f, df) = sum.eval_with_deriv(Complex64::new(x, y));
        (f.conj() * Complex64::i() * df).re
    };
    let h = 1e-4;
    let steps = (Y1_WINDOW / h).round() as usize;
    let mut prev = slope(y_from);
    for k in 1..=steps {
        let y = y_from + k as f64 * h;
        let cur = slope(y);
        if prev > 0.0 && cur <= 0.0 {
            return Some(bisect(y - h, y, slope));
        }
        prev = cur;
    }
    None
}

/// Largest `y0` below `y_top` with `|F(x + i y0)| = level`.
fn matching_height(sum: &FloatSum, x: f64, y_top: f64, level: f64) -> Option<f64> {
    let gap = |y: f64| sum.eval(Complex64::new(x, y)).norm() - level;
    let h = 1e-4;
    let mut y = y_top;
    let mut prev = gap(y);
    while y - h > 0.0 {
        let next = y - h;
        let cur = gap(next);
        if (prev > 0.0) != (cur > 0.0) {
            return Some(bisect(next, y, gap));
        }
        prev = cur;
        y = next;
    }
    None
}

/// Minimum of `|F|` sampled along the rectangle boundary.
fn boundary_minimum(sum: &FloatSum, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let h = 1e-4;
    let side = |from: Complex64, to: Complex64| -> f64 {
        let k = ((to - from).norm() / h).ceil().max(1.0) as usize;
        (0..=k)
            .map(|i| sum.eval(from + (to - from) * (i as f64 / k as f64)).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let c = [
        Complex64::new(x0, y0),
        Complex64::new(x1, y0),
        Complex64::new(x1, y1),
        Complex64::new(x0, y1),
    ];
    (0..4).map(|i| side(c[i], c[(i + 1) % 4])).fold(f64::INFINITY, f64::min)
}

/// Contour heuristic for `F_n` around a candidate zero.
pub fn propose_contour(cand: &Candidate, ordinates: &[f64], n: usize) -> Result<ContourProposal, SearchError> {
    if n == 0 || n > ordinates.len() {
        return Err(SearchError::InvalidParams("truncation order out of range"));
    }
    let sum = FloatSum::new(&ordinates[..n]);
    let (xc, w) = (cand.position.re, cand.position.im);
    let y1 = first_maximum(&sum, xc, w).ok_or(SearchError::NoMaximum)?;
    let level = sum.eval(Complex64::new(xc, y1)).norm();
    let y0 = matching_height(&sum, xc, w, level).ok_or(SearchError::NoMatchingY0)?;
    Ok(estimate_contour(ordinates, n, xc - CONTOUR_HALF_WIDTH, xc + CONTOUR_HALF_WIDTH, y0, y1, w))
}

/// Floating estimates of the contour constants for a fixed rectangle.
pub fn estimate_contour(ordinates: &[f64], n: usize, x0: f64, x1: f64, y0: f64, y1: f64, w: f64) -> ContourProposal {
    let sum = FloatSum::new(&ordinates[..n]);
    let alpha_est = boundary_minimum(&sum, x0, x1, y0, y1);
    let (a_est, b_est) = weighted_sums(ordinates, n, y0);
    let (aw_est, bw_est) = weighted_sums(ordinates, n, w);
    let q0_est = q0_estimate(a_est, aw_est, alpha_est, b_est, bw_est);
    let log_kappa_est = match q0_est {
        Some(q) => -(n as f64) * (q as f64).ln(),
        None => f64::NEG_INFINITY,
    };
    ContourProposal {
        n,
        x0,
        x1,
        y0,
        y1,
        alpha_est,
        a_est,
        b_est,
        aw_est,
        bw_est,
        q0_est,
        kappa_est: log_kappa_est.exp(),
        log_kappa_est,
    }
}

/// Increase `N` from `n_start` while the estimated kappa improves.
pub fn sweep_n(cand: &Candidate, ordinates: &[f64], n_start: usize) -> Result<ContourProposal, SearchError> {
    if n_start == 0 {
        return Err(SearchError::InvalidParams("N must be at least 1"));
    }
    let mut best: Option<ContourProposal> = None;
    let mut misses = 0;
    for n in n_start..=ordinates.len() {
        let p = propose_contour(cand, ordinates, n).ok().filter(|p| p.feasible());
        match (p, &best) {
            (Some(p), Some(b)) if p.log_kappa_est > b.log_kappa_est => best = Some(p),
            (Some(p), None) => best = Some(p),
            (_, Some(_)) => break,
            (None, None) => {
                misses += 1;
                if misses >= SWEEP_RETRIES {
                    break;
                }
            }
        }
    }
    best.ok_or(SearchError::NoFeasibleOrder)
}
