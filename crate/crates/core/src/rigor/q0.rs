use rug::float::Round;
use rug::Float;

use super::{ContourBounds, RigorError};
use crate::ball::RealBall;

pub const Q0_LIMIT: u64 = 1_000_000;

/// `(lhs, rhs)` of `2 a_w sin(pi/q) + 2 pi a / q <= alpha - b - 2 b_w`, with
/// every constant replaced by its worst-case endpoint.
fn sides(q: u64, bounds: &ContourBounds, prec: u32) -> (RealBall, RealBall) {
    let at = |x: &Float| RealBall::exact(prec, x);
    let (a, a_w) = (at(&bounds.a.upper()), at(&bounds.a_w.upper()));
    let (b, b_w) = (at(&bounds.b.upper()), at(&bounds.b_w.upper()));
    let alpha = at(&bounds.alpha.lower());
    let pi = RealBall::pi(prec);
    let q = RealBall::from_int(prec, q as i64);
    let lhs = a_w.mul(&pi.div(&q).expect("q > 0").sin()).mul_2si(1).add(&pi.mul(&a).mul_2si(1).div(&q).expect("q > 0"));
    let rhs = alpha.sub(&b).sub(&b_w.mul_2si(1));
    (lhs, rhs)
}

/// The criterion holds for `q` beyond doubt.
pub fn q0_condition(q: u64, bounds: &ContourBounds, prec: u32) -> bool {
    let (lhs, rhs) = sides(q, bounds, prec);
    lhs.upper() <= rhs.lower()
}

/// The criterion certainly fails for `q` with these constants.
pub fn q0_fails(q: u64, bounds: &ContourBounds, prec: u32) -> bool {
    let (lhs, rhs) = sides(q, bounds, prec);
    lhs.lower() > rhs.upper()
}

/// Smallest `q0 >= 2` that satisfies the criterion.
pub fn solve_q0(bounds: &ContourBounds, prec: u32) -> Result<u64, RigorError> {
    let slack = RealBall::exact(prec, &bounds.alpha.lower())
        .sub(&RealBall::exact(prec, &bounds.b.upper()))
        .sub(&RealBall::exact(prec, &bounds.b_w.upper()).mul_2si(1));
    if !slack.is_positive() {
        return Err(RigorError::AlphaTooSmall);
    }
    (2..=Q0_LIMIT).find(|&q| q0_condition(q, bounds, prec)).ok_or(RigorError::NoQ0(Q0_LIMIT))
}

/// `floor(4 pi a / (alpha - 3 b)) + 1`, rounded so that the result can only
/// grow; needs `alpha > 3 b`.
pub fn solve_q0_legacy(bounds: &ContourBounds, prec: u32) -> Result<u64, RigorError> {
    let at = |x: &Float| RealBall::exact(prec, x);
    let den = at(&bounds.alpha.lower()).sub(&at(&bounds.b.upper()).mul(&RealBall::from_int(prec, 3)));
    if !den.is_positive() {
        return Err(RigorError::LegacyInfeasible);
    }
    let ratio = RealBall::pi(prec).mul(&at(&bounds.a.upper())).mul_2si(2).div(&den)?;
    let top = Float::with_val_round(prec, ratio.upper(), Round::Up).0.floor();
    let q = top.to_f64();
    if !(q.is_finite() && q < u64::MAX as f64 / 2.0) {
        return Err(RigorError::NoQ0(u64::MAX));
    }
    Ok(q as u64 + 1)
}
