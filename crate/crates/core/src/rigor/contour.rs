use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::RigorError;
use crate::ball::{ComplexBall, NumError, RealBall, RAD_PREC};
use crate::fmodel::{lehman_bound, ExpSum, Phi};
use crate::zeros::{coefficient_for, ZeroTable};

/// Pieces per Taylor model in [`AlphaMode::Expansion`].
const BLOCK_PIECES: usize = 1000;

/// Axis-parallel rectangle `x0 <= Re z <= x1`, `y0 <= Im z <= y1`, stored as
/// the decimal strings it was given in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    pub x0: String,
    pub x1: String,
    pub y0: String,
    pub y1: String,
}

/// The corners as balls, `[x0, x1, y0, y1]`.
pub(crate) type Corners = [RealBall; 4];

impl Contour {
    pub fn new(x0: &str, x1: &str, y0: &str, y1: &str) -> Result<Self, RigorError> {
        let c = Contour { x0: x0.into(), x1: x1.into(), y0: y0.into(), y1: y1.into() };
        let [x0, x1, y0, y1] = c.corners(crate::ball::DEFAULT_PREC)?;
        if x1.lt(&x0) || y1.lt(&y0) || !y0.is_positive() {
            return Err(RigorError::BadContour("need x0 <= x1 and 0 < y0 <= y1".into()));
        }
        if !x1.sub(&x0).lt(&RealBall::from_int(crate::ball::DEFAULT_PREC, 1)) {
            return Err(RigorError::BadContour("width must be below 1".into()));
        }
        Ok(c)
    }

    pub fn corners(&self, prec: u32) -> Result<Corners, RigorError> {
        let parse = |s: &str| {
            RealBall::from_decimal(prec, s).map_err(|_| RigorError::BadContour(format!("bad coordinate {s:?}")))
        };
        Ok([parse(&self.x0)?, parse(&self.x1)?, parse(&self.y0)?, parse(&self.y1)?])
    }

    /// True when the box `z` lies strictly inside the rectangle.
    pub fn strictly_contains(&self, z: &ComplexBall) -> Result<bool, RigorError> {
        let [x0, x1, y0, y1] = self.corners(z.prec())?;
        Ok(x0.lt(&z.re) && z.re.lt(&x1) && y0.lt(&z.im) && z.im.lt(&y1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    /// Every piece evaluated term by term as a ball.
    Direct,
    /// Pieces grouped into blocks, each covered by one Taylor model and
    /// evaluated in mean-value form.
    Expansion,
}

#[derive(Debug, Clone)]
pub struct AlphaResult {
    /// Certified lower bound for `min |F_N|` on the contour, as an exact ball.
    pub alpha: RealBall,
    pub pieces: usize,
    /// Midpoint of the piece attaining the minimum.
    pub argmin: (f64, f64),
}

/// A straight side, split into `n` equal pieces.
struct Side {
    start: RealBall,
    len: RealBall,
    fixed: RealBall,
    horizontal: bool,
    n: usize,
}

impl Side {
    fn piece(&self, j: usize) -> ComplexBall {
        let prec = self.start.prec();
        let n = RealBall::from_int(prec, self.n as i64);
        let at = |k: usize| self.start.add(&self.len.mul(&RealBall::from_int(prec, k as i64)).div(&n).expect("n > 0"));
        let (a, b) = (at(j), at(j + 1));
        let moving = RealBall::from_interval(prec, &a.lower().min(&b.lower()), &a.upper().max(&b.upper()));
        if self.horizontal {
            ComplexBall::new(moving, self.fixed.clone())
        } else {
            ComplexBall::new(self.fixed.clone(), moving)
        }
    }
}

fn sides(corners: &Corners, seg_len: &RealBall) -> Result<Vec<Side>, RigorError> {
    let [x0, x1, y0, y1] = corners;
    let count = |len: &RealBall| -> Result<usize, RigorError> {
        let n = len.div(seg_len)?.upper().ceil();
        let n = n.to_f64();
        if !(n.is_finite() && n < 1e9) {
            return Err(RigorError::BadContour("too many pieces".into()));
        }
        Ok((n as usize).max(1))
    };
    let w = x1.sub(x0);
    let h = y1.sub(y0);
    Ok(vec![
        Side { start: x0.clone(), len: w.clone(), fixed: y0.clone(), horizontal: true, n: count(&w)? },
        Side { start: y0.clone(), len: h.clone(), fixed: x1.clone(), horizontal: false, n: count(&h)? },
        Side { start: x0.clone(), len: w.clone(), fixed: y1.clone(), horizontal: true, n: count(&w)? },
        Side { start: y0.clone(), len: h.clone(), fixed: x0.clone(), horizontal: false, n: count(&h)? },
    ])
}

fn block_min(sum: &ExpSum, pieces: &[ComplexBall], mode: AlphaMode) -> Result<(Float, usize), NumError> {
    let values: Vec<ComplexBall> = match mode {
        AlphaMode::Direct => pieces.iter().map(|p| sum.eval(p)).collect(),
        AlphaMode::Expansion => {
            let first = pieces.first().expect("non-empty block");
            let last = pieces.last().expect("non-empty block");
            let center = first.add(last).midpoint().set_prec(sum.prec());
            let center = ComplexBall::new(center.re.mul_2si(-1), center.im.mul_2si(-1)).midpoint();
            let mut radius = Float::with_val(RAD_PREC, 0);
            for p in pieces {
                let r = p.sub(&center).abs_upper();
                if r > radius {
                    radius = Float::with_val_round(RAD_PREC, &r, rug::float::Round::Up).0;
                }
            }
            let model = sum.expansion(&center, &radius);
            pieces.iter().map(|p| model.eval_mean_value(&p.sub(&center))).collect::<Result<_, _>>()?
        }
    };
    let mut best = (Float::with_val(RAD_PREC, f64::INFINITY), 0);
    for (i, v) in values.iter().enumerate() {
        let low = v.abs_lower();
        if low < best.0 {
            best = (low, i);
        }
    }
    Ok(best)
}

/// Certified lower bound for `min |F_N|` over the rectangle boundary, from
/// pieces of length at most `seg_len`.
pub fn contour_alpha(sum: &ExpSum, contour: &Contour, seg_len: &str, mode: AlphaMode) -> Result<AlphaResult, RigorError> {
    let prec = sum.prec();
    let corners = contour.corners(prec)?;
    let seg = RealBall::from_decimal(prec, seg_len).map_err(|_| RigorError::BadContour(format!("bad seg_len {seg_len:?}")))?;
    if !seg.is_positive() {
        return Err(RigorError::BadContour("seg_len must be positive".into()));
    }
    let sides = sides(&corners, &seg)?;
    let blocks: Vec<(usize, usize, usize)> = sides
        .iter()
        .enumerate()
        .flat_map(|(s, side)| (0..side.n).step_by(BLOCK_PIECES).map(move |j| (s, j, (j + BLOCK_PIECES).min(side.n))))
        .collect();
    let results: Vec<(Float, ComplexBall)> = blocks
        .par_iter()
        .map(|&(s, from, to)| {
            let pieces: Vec<ComplexBall> = (from..to).map(|j| sides[s].piece(j)).collect();
            let (low, i) = block_min(sum, &pieces, mode)?;
            Ok((low, pieces[i].clone()))
        })
        .collect::<Result<_, NumError>>()?;
    let (low, at) = results
        .into_iter()
        .fold(None, |best: Option<(Float, ComplexBall)>, cur| match best {
            Some(b) if b.0 <= cur.0 => Some(b),
            _ => Some(cur),
        })
        .expect("at least one piece");
    let argmin = (at.re.mid().to_f64(), at.im.mid().to_f64());
    if !(low > 0) {
        return Err(RigorError::ContourTouchesZero(format!("{:.9} + {:.9}i", argmin.0, argmin.1)));
    }
    Ok(AlphaResult {
        alpha: RealBall::exact(prec, &low),
        pieces: sides.iter().map(|s| s.n).sum(),
        argmin,
    })
}

/// Rigorous constants for one contour and truncation order.
#[derive(Debug, Clone)]
pub struct ContourBounds {
    pub contour: Contour,
    pub n: usize,
    pub alpha: RealBall,
    pub a: RealBall,
    pub b: RealBall,
    pub a_w: RealBall,
    pub b_w: RealBall,
    pub w_lower: RealBall,
}

/// `(sum_{n <= N} |a_n| e^{-gamma_n y}, sum_{n > N} |a_n| e^{-gamma_n y})`,
/// the second using the table and a Lehman bound beyond it.
fn weighted_sums(table: &ZeroTable, order: usize, y: &RealBall, prec: u32) -> Result<(RealBall, RealBall), RigorError> {
    let mut head = RealBall::zero(prec);
    let mut tail = RealBall::zero(prec);
    for n in 1..=table.len() {
        let g = table.ordinate(n, prec)?;
        let term = coefficient_for(&g).abs().mul(&g.mul(y).neg().exp());
        if n <= order {
            head = head.add(&term);
        } else {
            tail = tail.add(&term);
        }
    }
    let top = table.ordinate(table.len(), prec)?;
    let lehman = lehman_bound(&Phi::exp_over_t(y.clone()), &top, None, prec).map_err(crate::fmodel::ModelError::from)?;
    Ok((head, tail.add(&lehman.total)))
}

fn upper_point(x: &RealBall, prec: u32) -> RealBall {
    RealBall::exact(prec, &x.upper())
}

/// `a`, `b` at the contour bottom and `a_w`, `b_w` at `w_lower`, all as
/// upper bounds (stored as exact balls at the certified endpoint).
pub fn contour_constants(
    table: &ZeroTable,
    order: usize,
    contour: &Contour,
    alpha: &RealBall,
    w_lower: &RealBall,
    prec: u32,
) -> Result<ContourBounds, RigorError> {
    table.require(order)?;
    let [_, _, y0, _] = contour.corners(prec)?;
    let y0 = RealBall::exact(prec, &y0.lower());
    let w = RealBall::exact(prec, &w_lower.lower());
    if !w.is_positive() {
        return Err(RigorError::BadContour("w_lower must be positive".into()));
    }
    let (a, b) = weighted_sums(table, order, &y0, prec)?;
    let (a_w, b_w) = weighted_sums(table, order, &w, prec)?;
    Ok(ContourBounds {
        contour: contour.clone(),
        n: order,
        alpha: alpha.clone(),
        a: upper_point(&a, prec),
        b: upper_point(&b, prec),
        a_w: upper_point(&a_w, prec),
        b_w: upper_point(&b_w, prec),
        w_lower: w,
    })
}
