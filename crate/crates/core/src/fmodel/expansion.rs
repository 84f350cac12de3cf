use rug::float::Round;
use rug::ops::{AddAssignRound, MulAssignRound};
use rug::Float;

use crate::ball::{ComplexBall, NumError, RealBall, RAD_PREC};
use crate::fmodel::ExpSum;

const MAX_DEGREE: usize = 200;

/// Degree-`K` Taylor polynomial of an [`ExpSum`] around `center`, plus a
/// rigorous bound on the truncated series valid for `|z - center| <= radius`:
///
/// `|sum_n a_n e^{i w_n c} sum_{k>K} (i w_n t)^k / k!|
///     <= sum_n |a_n e^{i w_n c}| (w_n r)^{K+1} / (K+1)! e^{w_n r}`.
///
/// Evaluating the polynomial on a small ball is both much cheaper and much
/// tighter than evaluating every exponential on that ball.
#[derive(Debug, Clone)]
pub struct LocalExpansion {
    center: ComplexBall,
    radius: Float,
    coeffs: Vec<ComplexBall>,
    deriv: Vec<ComplexBall>,
    remainder: Float,
}

fn pick_degree(max_w: f64, radius: f64, prec: u32) -> usize {
    let u = max_w * radius;
    // A third of the working precision keeps the degree modest while leaving
    // the truncation far below every other error source.
    let target = (-(prec as f64) / 3.0 * std::f64::consts::LN_2).exp().max(f64::MIN_POSITIVE);
    let mut term = u.exp();
    for k in 0..MAX_DEGREE {
        // term = u^(k+1)/(k+1)! e^u
        term *= u / (k + 1) as f64;
        if term < target || term == 0.0 {
            return k.max(1);
        }
    }
    MAX_DEGREE
}

impl LocalExpansion {
    pub(crate) fn new(sum: &ExpSum, center: &ComplexBall, radius: &Float) -> Self {
        let prec = sum.prec();
        let max_w = sum.terms().iter().map(|t| t.w.upper().to_f64()).fold(0.0_f64, f64::max);
        let degree = pick_degree(max_w, radius.to_f64(), prec);
        let mut coeffs = vec![ComplexBall::zero(prec); degree + 1];
        let radius = Float::with_val_round(RAD_PREC, radius, Round::Up).0;
        let r_ball = RealBall::exact(RAD_PREC, &radius);
        let mut remainder = RealBall::zero(RAD_PREC);
        let mut fact = RealBall::from_int(RAD_PREC, 1);
        for k in 1..=degree + 1 {
            fact = fact.mul(&RealBall::from_int(RAD_PREC, k as i64));
        }
        for t in sum.terms() {
            let base = t.value(center);
            let mut c = base.clone();
            for (k, slot) in coeffs.iter_mut().enumerate() {
                if k > 0 {
                    // c_k = c_{k-1} * i w / k
                    let scale = t.w.div(&RealBall::from_int(prec, k as i64)).expect("k > 0");
                    c = c.mul_real(&scale).mul_i();
                }
                *slot = slot.add(&c);
            }
            let wr = RealBall::exact(RAD_PREC, &t.w.upper()).mul(&r_ball);
            let tail = RealBall::exact(RAD_PREC, &base.abs_upper())
                .mul(&wr.powi(degree as u32 + 1))
                .div(&fact)
                .expect("factorial > 0")
                .mul(&wr.exp());
            remainder = remainder.add(&tail);
        }
        let deriv = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul_real(&RealBall::from_int(prec, k as i64)))
            .collect();
        LocalExpansion {
            center: center.clone(),
            radius,
            coeffs,
            deriv,
            remainder: remainder.upper(),
        }
    }

    pub fn center(&self) -> &ComplexBall {
        &self.center
    }

    pub fn radius(&self) -> &Float {
        &self.radius
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Upper bound on the discarded part of the series.
    pub fn remainder(&self) -> &Float {
        &self.remainder
    }

    /// Enclosure of the sum at `center + offset`; the offset ball must lie
    /// in the disc of validity.
    pub fn eval(&self, offset: &ComplexBall) -> Result<ComplexBall, NumError> {
        if !(offset.abs_upper() <= self.radius) {
            return Err(NumError::Inconclusive("offset outside the expansion disc"));
        }
        Ok(horner(&self.coeffs, offset).widen(&self.remainder))
    }

    /// Mean-value enclosure: the polynomial at the midpoint of `offset`, widened
    /// by a bound on its derivative over the whole offset ball. Much tighter
    /// than [`eval`](Self::eval) when the ball is not tiny.
    pub fn eval_mean_value(&self, offset: &ComplexBall) -> Result<ComplexBall, NumError> {
        if !(offset.abs_upper() <= self.radius) {
            return Err(NumError::Inconclusive("offset outside the expansion disc"));
        }
        let mid = offset.midpoint();
        let value = horner(&self.coeffs, &mid);
        let slope = horner(&self.deriv, offset).abs_upper();
        let reach = offset.sub(&mid).abs_upper();
        let spread = rad_mul_up(&slope, &reach);
        Ok(value.widen(&rad_add_up(&spread, &self.remainder)))
    }

    /// Enclosure of the sum over the absolute ball `z`.
    pub fn eval_at(&self, z: &ComplexBall) -> Result<ComplexBall, NumError> {
        self.eval(&z.sub(&self.center))
    }
}

fn horner(coeffs: &[ComplexBall], t: &ComplexBall) -> ComplexBall {
    let mut acc = coeffs.last().expect("non-empty polynomial").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(t).add(c);
    }
    acc
}

fn rad_mul_up(a: &Float, b: &Float) -> Float {
    let mut r = Float::with_val_round(RAD_PREC, a, Round::Up).0;
    r.mul_assign_round(b, Round::Up);
    r
}

fn rad_add_up(a: &Float, b: &Float) -> Float {
    let mut r = Float::with_val_round(RAD_PREC, a, Round::Up).0;
    r.add_assign_round(b, Round::Up);
    r
}
