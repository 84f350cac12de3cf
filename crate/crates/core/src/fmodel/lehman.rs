//! Upper bounds for sums `sum_{T1 <= gamma <= T2} phi(gamma)` over zeta-zero
//! ordinates via Lehman's estimate
//!
//! ```text
//! sum phi(gamma) = 1/(2 pi) int_{T1}^{T2} phi(t) log(t / 2 pi) dt
//!                + theta { 4 phi(T1) log T1 + 2 int_{T1}^{T2} phi(t)/t dt },  |theta| <= 1,
//! ```
//!
//! valid for continuous, positive, non-increasing `phi` on `2 pi e <= T1 <= t <= T2`.
//! The error term is always added with a positive sign.
//!
//! Supported shapes are `phi(t) = e^{-y t} t^{-p} log(t / 2 pi)^{-q}` with
//! `y >= 0`, `p` in `{0, 1, 2}` and `q` in `{0, 1}`; all of them are
//! non-increasing for `t >= 2 pi e`. The integrals are replaced by closed-form
//! majorants: a non-increasing factor `g(t) = t^{-s} L(t)^r` is pulled out at
//! `T1`, leaving `int e^{-y t} dt`. The one increasing factor (`L(t)` alone)
//! is integrated by parts.

use rug::float::Round;
use rug::Float;
use thiserror::Error;

use crate::ball::{NumError, RealBall};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LehmanError {
    #[error("unsupported phi shape: t^-{p} log^-{q}")]
    UnsupportedShape { p: u32, q: u32 },
    #[error("lower limit must be at least 2 pi e")]
    LowerLimitTooSmall,
    #[error("upper limit must exceed the lower limit")]
    EmptyRange,
    #[error("decay rate must be non-negative")]
    NegativeDecay,
    #[error("sum diverges for this phi over an unbounded range")]
    Divergent,
    #[error(transparent)]
    Num(#[from] NumError),
}

/// `phi(t) = e^{-decay t} t^{-t_power} log(t / 2 pi)^{-log_power}`.
#[derive(Debug, Clone)]
pub struct Phi {
    pub decay: RealBall,
    pub t_power: u32,
    pub log_power: u32,
}

impl Phi {
    /// `e^{-y t} / t`, the shape used for every tail over zeros.
    pub fn exp_over_t(decay: RealBall) -> Self {
        Phi { decay, t_power: 1, log_power: 0 }
    }

    /// Point evaluation.
    pub fn eval(&self, t: &RealBall) -> Result<RealBall, NumError> {
        let prec = t.prec().max(self.decay.prec());
        let mut v = self.decay.mul(t).neg().exp();
        for _ in 0..self.t_power {
            v = v.div(t)?;
        }
        if self.log_power == 1 {
            v = v.div(&log_over_two_pi(t, prec)?)?;
        }
        Ok(v)
    }
}

/// The two pieces of the estimate; `total = main + error`.
#[derive(Debug, Clone)]
pub struct LehmanBound {
    pub main: RealBall,
    pub error: RealBall,
    pub total: RealBall,
}

impl LehmanBound {
    /// The certified upper bound for the sum.
    pub fn upper(&self) -> Float {
        self.total.upper()
    }

    fn zero(prec: u32) -> Self {
        LehmanBound { main: RealBall::zero(prec), error: RealBall::zero(prec), total: RealBall::zero(prec) }
    }
}

fn log_over_two_pi(t: &RealBall, prec: u32) -> Result<RealBall, NumError> {
    let two_pi = RealBall::pi(prec).mul_2si(1);
    t.div(&two_pi)?.log()
}

fn point(prec: u32, x: &Float) -> RealBall {
    RealBall::exact(prec, x)
}

/// Upper bound for `sum_{T1 <= gamma <= T2} phi(gamma)`; `t2 = None` means infinity.
///
/// Ball inputs are reduced to their worst-case endpoints (smallest decay,
/// smallest `T1`, largest `T2`), each of which can only enlarge the sum.
pub fn lehman_bound(phi: &Phi, t1: &RealBall, t2: Option<&RealBall>, prec: u32) -> Result<LehmanBound, LehmanError> {
    if phi.t_power > 2 || phi.log_power > 1 {
        return Err(LehmanError::UnsupportedShape { p: phi.t_power, q: phi.log_power });
    }
    if phi.decay.is_negative() {
        return Err(LehmanError::NegativeDecay);
    }
    let y_low = phi.decay.lower();
    let y_zero = y_low <= 0;
    let y = if y_zero { RealBall::zero(prec) } else { point(prec, &y_low) };
    let a = point(prec, &t1.lower());
    let two_pi_e = RealBall::pi(prec).mul_2si(1).mul(&RealBall::from_int(prec, 1).exp());
    if a.lower() < two_pi_e.upper() {
        return Err(LehmanError::LowerLimitTooSmall);
    }
    let b = match t2 {
        Some(t) => {
            let b = point(prec, &t.upper());
            if b.mid() < a.mid() {
                return Ok(LehmanBound::zero(prec));
            }
            if b.mid() == a.mid() {
                return Err(LehmanError::EmptyRange);
            }
            Some(b)
        }
        None => None,
    };

    let p = phi.t_power;
    let q = phi.log_power;
    // main = 1/(2 pi) * I(s = p, r = 1 - q)
    let main = integral(&y, y_zero, p, 1 - q as i32, &a, b.as_ref(), prec)?
        .div(&RealBall::pi(prec).mul_2si(1))?;
    // error = 4 phi(T1) log T1 + 2 I(s = p + 1, r = -q)
    let phi_point = Phi { decay: y.clone(), t_power: p, log_power: q };
    let phi_a = phi_point.eval(&a)?;
    let err1 = phi_a.mul(&a.log()?).mul_2si(2);
    let err2 = integral(&y, y_zero, p + 1, -(q as i32), &a, b.as_ref(), prec)?.mul_2si(1);
    let error = err1.add(&err2);
    let total = main.add(&error);
    Ok(LehmanBound { main, error, total })
}

/// Majorant of `int_a^b e^{-y t} t^{-s} L(t)^r dt` with `L(t) = log(t / 2 pi)`.
fn integral(
    y: &RealBall,
    y_zero: bool,
    s: u32,
    r: i32,
    a: &RealBall,
    b: Option<&RealBall>,
    prec: u32,
) -> Result<RealBall, LehmanError> {
    let la = log_over_two_pi(a, prec)?;
    let g = |t: &RealBall, lt: &RealBall| -> Result<RealBall, NumError> {
        let mut v = RealBall::from_int(prec, 1);
        for _ in 0..s {
            v = v.div(t)?;
        }
        match r {
            1 => v = v.mul(lt),
            -1 => v = v.div(lt)?,
            _ => {}
        }
        Ok(v)
    };
    let one = RealBall::from_int(prec, 1);

    if !y_zero {
        let ea = y.mul(a).neg().exp();
        let eb = match b {
            Some(b) => y.mul(b).neg().exp(),
            None => RealBall::zero(prec),
        };
        let exp_int = ea.sub(&eb).div(y)?;
        if s == 0 && r == 1 {
            // integrate by parts: [-e^{-yt} L / y] + (1/y) int e^{-yt}/t dt
            let boundary = match b {
                Some(b) => {
                    let lb = log_over_two_pi(b, prec)?;
                    ea.mul(&la).sub(&eb.mul(&lb)).div(y)?
                }
                None => ea.mul(&la).div(y)?,
            };
            let inner = exp_int.div(&y.mul(a))?;
            return Ok(boundary.add(&inner));
        }
        return Ok(g(a, &la)?.mul(&exp_int));
    }

    // y = 0
    match b {
        Some(b) => {
            let width = b.sub(a);
            if s == 0 && r == 1 {
                let lb = log_over_two_pi(b, prec)?;
                Ok(lb.mul(&width))
            } else {
                Ok(g(a, &la)?.mul(&width))
            }
        }
        None => {
            if s < 2 {
                return Err(LehmanError::Divergent);
            }
            let sm1 = RealBall::from_int(prec, s as i64 - 1);
            let a_pow = one.div(&a.powi(s - 1))?;
            let v = match r {
                1 => la.div(&sm1)?.add(&one.div(&sm1.sqr())?).mul(&a_pow),
                0 => a_pow.div(&sm1)?,
                _ => a_pow.div(&sm1)?.div(&la)?,
            };
            Ok(v)
        }
    }
}

/// Rounds a bound up to a short decimal string; for reports.
pub fn format_upper(x: &Float) -> String {
    let (v, _) = Float::with_val_round(64, x, Round::Up);
    v.to_string_radix(10, Some(6))
}
