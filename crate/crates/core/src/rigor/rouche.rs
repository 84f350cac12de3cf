use num_complex::Complex64;
use rayon::prelude::*;
use rug::float::Round;
use rug::ops::MulAssignRound;
use rug::Float;

use super::RigorError;
use crate::ball::{ComplexBall, NumError, RealBall, RAD_PREC};
use crate::fmodel::{tail_bound_partial_rh, ExpSum, TailBound};
use crate::zeros::ZeroTable;

pub const MIN_SEGMENTS: usize = 1 << 12;
pub const MAX_SEGMENTS: usize = 1 << 20;

/// A zero of `F` confirmed inside a small circle.
#[derive(Debug, Clone)]
pub struct VerifiedZero {
    /// Enclosure of the zero: the box `center +/- radius`.
    pub xi: ComplexBall,
    pub center: ComplexBall,
    pub radius: Float,
    pub min_on_circle: RealBall,
    pub tail_at_circle: RealBall,
    pub tail: TailBound,
    pub m: usize,
    pub winding: i64,
    pub segments: usize,
}

/// One ball Newton step for `F_M` from the floating candidate.
pub fn refine_candidate(position: Complex64, sum: &ExpSum) -> Result<ComplexBall, RigorError> {
    let z = ComplexBall::from_f64(sum.prec(), position.re, position.im);
    refine_point(&z, sum)
}

pub(crate) fn refine_point(z: &ComplexBall, sum: &ExpSum) -> Result<ComplexBall, RigorError> {
    let (f, df) = sum.eval_with_deriv(z);
    if df.contains_zero() {
        return Err(RigorError::DerivativeContainsZero);
    }
    Ok(z.sub(&f.div(&df)?))
}

/// Ball covering the circle arc between `2 pi k / n` and `2 pi (k+1) / n`,
/// or the single point at `2 pi k / n` when `arc` is false.
fn circle_piece(center: &ComplexBall, radius: &Float, k: usize, n: usize, arc: bool) -> ComplexBall {
    let prec = center.prec();
    let two_pi = RealBall::pi(prec).mul_2si(1);
    let n_ball = RealBall::from_int(prec, n as i64);
    let theta = if arc {
        let lo = two_pi.mul(&RealBall::from_int(prec, k as i64)).div(&n_ball).expect("n > 0");
        let hi = two_pi.mul(&RealBall::from_int(prec, k as i64 + 1)).div(&n_ball).expect("n > 0");
        RealBall::from_interval(prec, &lo.lower(), &hi.upper())
    } else {
        two_pi.mul(&RealBall::from_int(prec, k as i64)).div(&n_ball).expect("n > 0")
    };
    let (s, c) = theta.sin_cos();
    let r = RealBall::exact(prec, radius);
    center.add(&ComplexBall::new(c.mul(&r), s.mul(&r)))
}

struct CircleScan {
    winding: i64,
    min_abs: Float,
}

/// Winding number of `f` around `center` along the circle of `radius`, split
/// into `segments` arcs. Each arc image must avoid zero; the change of
/// argument across it is then the principal argument of
/// `f(end) conj(f(start))`.
fn scan_circle<F>(f: &F, center: &ComplexBall, radius: &Float, segments: usize) -> Result<CircleScan, NumError>
where
    F: Fn(&ComplexBall) -> Result<ComplexBall, NumError> + Sync,
{
    let prec = center.prec();
    let points: Vec<ComplexBall> = (0..segments)
        .into_par_iter()
        .map(|k| f(&circle_piece(center, radius, k, segments, false)))
        .collect::<Result<_, _>>()?;
    let arcs: Vec<(RealBall, Float)> = (0..segments)
        .into_par_iter()
        .map(|k| {
            let image = f(&circle_piece(center, radius, k, segments, true))?;
            if image.contains_zero() {
                return Err(NumError::Inconclusive("arc image contains zero"));
            }
            let low = image.abs_lower();
            if low <= 0 {
                return Err(NumError::Inconclusive("arc image touches zero"));
            }
            let next = &points[(k + 1) % segments];
            let turn = next.mul(&points[k].conj()).arg()?;
            Ok((turn, low))
        })
        .collect::<Result<_, _>>()?;
    let mut total = RealBall::zero(prec);
    let mut min_abs = Float::with_val(prec, f64::INFINITY);
    for (turn, low) in &arcs {
        total = total.add(turn);
        if *low < min_abs {
            min_abs = low.clone();
        }
    }
    let turns = total.div(&RealBall::pi(prec).mul_2si(1))?;
    let lo = turns.lower().ceil();
    let hi = turns.upper().floor();
    if lo != hi {
        return Err(NumError::Inconclusive("winding number not pinned to one integer"));
    }
    let winding = lo.to_i32_saturating().map(i64::from).ok_or(NumError::Inconclusive("winding number out of range"))?;
    Ok(CircleScan { winding, min_abs })
}

/// Number of zeros of `f` inside the circle, doubling the subdivision from
/// `segments` until every arc is conclusive.
pub fn winding_number<F>(f: F, center: &ComplexBall, radius: &Float, segments: usize) -> Result<i64, RigorError>
where
    F: Fn(&ComplexBall) -> Result<ComplexBall, NumError> + Sync,
{
    scan_with_doubling(&f, center, radius, segments).map(|(scan, _)| scan.winding)
}

fn scan_with_doubling<F>(
    f: &F,
    center: &ComplexBall,
    radius: &Float,
    segments: usize,
) -> Result<(CircleScan, usize), RigorError>
where
    F: Fn(&ComplexBall) -> Result<ComplexBall, NumError> + Sync,
{
    let mut n = segments.max(4);
    loop {
        match scan_circle(f, center, radius, n) {
            Ok(scan) => return Ok((scan, n)),
            Err(NumError::Inconclusive(_)) if n < MAX_SEGMENTS => n *= 2,
            Err(NumError::Inconclusive(_)) => return Err(RigorError::WindingUndetermined(n)),
            Err(e) => return Err(e.into()),
        }
    }
}

/// Rouché confirmation around `center`: `|F_M|` on the circle must beat the
/// bound on `|F - F_M|`, and `F_M` must wind once.
pub fn rouche_verify(center: &ComplexBall, sum: &ExpSum, table: &ZeroTable, radius: &Float) -> Result<VerifiedZero, RigorError> {
    let prec = sum.prec();
    let center = center.midpoint().set_prec(prec);
    // The arc boxes poke slightly outside the circle; leave room for them.
    let mut reach = Float::with_val_round(RAD_PREC, radius, Round::Up).0;
    reach.mul_assign_round(1.01, Round::Up);
    let model = sum.expansion(&center, &reach);
    let f = |z: &ComplexBall| model.eval_at(z);
    let (scan, segments) = scan_with_doubling(&f, &center, radius, MIN_SEGMENTS)?;

    let r = Float::with_val_round(RAD_PREC, radius, Round::Up).0;
    let xi = center.widen(&r);
    let tail = tail_bound_partial_rh(table, sum.order(), &xi.re, &xi.im, Some(table.rh_verified_height()), prec)?;
    let min_on_circle = RealBall::exact(prec, &scan.min_abs);
    let tail_at_circle = RealBall::exact(prec, &tail.upper());
    if !(scan.min_abs > tail.upper()) {
        return Err(RigorError::RoucheGap {
            min: scan.min_abs.to_string_radix(10, Some(6)),
            tail: tail.upper().to_string_radix(10, Some(6)),
        });
    }
    if scan.winding != 1 {
        return Err(RigorError::Winding(scan.winding));
    }
    Ok(VerifiedZero {
        xi,
        center,
        radius: r,
        min_on_circle,
        tail_at_circle,
        tail,
        m: sum.order(),
        winding: scan.winding,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(k: u32) -> impl Fn(&ComplexBall) -> Result<ComplexBall, NumError> + Sync {
        move |z: &ComplexBall| {
            let mut acc = ComplexBall::from_f64(z.prec(), 1.0, 0.0);
            for _ in 0..k {
                acc = acc.mul(z);
            }
            Ok(acc)
        }
    }

    #[test]
    fn winding_of_powers() {
        let origin = ComplexBall::zero(128);
        for k in 1..=3 {
            for r in [1.0, 0.25, 1e-6] {
                let radius = Float::with_val(RAD_PREC, r);
                assert_eq!(winding_number(power(k), &origin, &radius, 16).unwrap(), k as i64);
            }
        }
        // zero outside the circle
        let off = ComplexBall::from_f64(128, 3.0, 0.0);
        let radius = Float::with_val(RAD_PREC, 1.0);
        assert_eq!(winding_number(power(2), &off, &radius, 16).unwrap(), 0);
    }

    #[test]
    fn circle_through_a_zero_is_undetermined() {
        let c = ComplexBall::from_f64(128, 1.0, 0.0);
        let radius = Float::with_val(RAD_PREC, 1.0);
        assert!(matches!(scan_circle(&power(1), &c, &radius, 64), Err(NumError::Inconclusive(_))));
    }
}
