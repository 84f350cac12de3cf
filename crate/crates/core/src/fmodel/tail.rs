use rug::Float;

use super::{lehman_bound, ModelError, Phi};
use crate::ball::RealBall;
use crate::zeros::{coefficient_for, ZeroTable};

/// Upper bound for a tail sum, split by where it came from.
#[derive(Debug, Clone)]
pub struct TailBound {
    /// Terms summed one by one from the table.
    pub explicit: RealBall,
    /// Lehman estimate for zeros between the table top and the RH height.
    pub lehman: RealBall,
    /// Weighted Lehman estimate above the RH height (zero under full RH).
    pub above_height: RealBall,
    pub total: RealBall,
}

impl TailBound {
    pub fn upper(&self) -> Float {
        self.total.upper()
    }
}

fn require_positive(y: &RealBall, what: &'static str) -> Result<(), ModelError> {
    if y.is_positive() {
        Ok(())
    } else {
        Err(ModelError::InvalidArgument(what))
    }
}

/// `sum_{N < n <= size} e^{-gamma_n y} / gamma_n`.
fn explicit_sum(table: &ZeroTable, from: usize, y: &RealBall, prec: u32) -> Result<RealBall, ModelError> {
    let mut acc = RealBall::zero(prec);
    for n in from + 1..=table.len() {
        let g = table.ordinate(n, prec)?;
        acc = acc.add(&g.mul(y).neg().exp().div(&g)?);
    }
    Ok(acc)
}

/// Upper bound on `sum_{n > N} e^{-gamma_n y} / gamma_n` assuming RH.
///
/// Zeros in the table are summed explicitly; the rest are covered by a
/// Lehman bound starting at the last tabulated ordinate (which is thereby
/// counted twice).
pub fn tail_bound_rh(table: &ZeroTable, order: usize, y: &RealBall, prec: u32) -> Result<TailBound, ModelError> {
    tail_bound_partial_rh(table, order, &RealBall::zero(prec), y, None, prec)
}

/// Upper bound on `|F - F_N|` at `x + i y` when RH is only known below
/// `height`: zeros above it contribute at most `e^{x/2} e^{-gamma y}/gamma`.
/// `height = None` means full RH.
pub fn tail_bound_partial_rh(
    table: &ZeroTable,
    order: usize,
    x: &RealBall,
    y: &RealBall,
    height: Option<&RealBall>,
    prec: u32,
) -> Result<TailBound, ModelError> {
    require_positive(y, "tail height must be positive")?;
    let size = table.len();
    if order > size {
        table.require(order)?;
    }
    let top = table.ordinate(size, prec)?;
    if let Some(h) = height {
        if top.upper() > h.lower() {
            return Err(ModelError::TableAboveHeight);
        }
    }
    let explicit = explicit_sum(table, order, y, prec)?;
    let phi = Phi::exp_over_t(y.clone());
    let lehman = lehman_bound(&phi, &top, height, prec)?.total;
    let above_height = match height {
        Some(h) => {
            let weight = x.mul_2si(-1).exp();
            lehman_bound(&phi, h, None, prec)?.total.mul(&weight)
        }
        None => RealBall::zero(prec),
    };
    let total = explicit.add(&lehman).add(&above_height);
    Ok(TailBound { explicit, lehman, above_height, total })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroFreeVerdict {
    ZeroFree,
    Inconclusive,
}

/// Pieces of the first-term-domination test.
#[derive(Debug, Clone)]
pub struct ZeroFreeReport {
    pub verdict: ZeroFreeVerdict,
    /// `|a_1| e^{-gamma_1 y0}`.
    pub first_term: RealBall,
    /// `sum_{2 <= n <= K} |a_n| e^{-gamma_n y0}`.
    pub explicit: RealBall,
    /// Lehman bound for zeros from `gamma_K` on.
    pub tail: RealBall,
}

impl ZeroFreeReport {
    pub fn remainder(&self) -> RealBall {
        self.explicit.add(&self.tail)
    }
}

/// Checks that the first term of `F` dominates all the others on `Im z = y0`.
/// Since every later term decays faster in `y`, domination then holds for
/// all `Im z >= y0`, so `F` has no zeros there.
pub fn zero_free_check(table: &ZeroTable, y0: &RealBall, k: usize, prec: u32) -> Result<ZeroFreeReport, ModelError> {
    require_positive(y0, "y0 must be positive")?;
    if k < 1 {
        return Err(ModelError::InvalidArgument("K must be at least 1"));
    }
    table.require(k)?;
    let term = |n: usize| -> Result<RealBall, ModelError> {
        let g = table.ordinate(n, prec)?;
        let a = coefficient_for(&g).abs();
        Ok(a.mul(&g.mul(y0).neg().exp()))
    };
    let first_term = term(1)?;
    let mut explicit = RealBall::zero(prec);
    for n in 2..=k {
        explicit = explicit.add(&term(n)?);
    }
    let tail = lehman_bound(&Phi::exp_over_t(y0.clone()), &table.ordinate(k, prec)?, None, prec)?.total;
    let rest = explicit.add(&tail);
    let verdict = if first_term.lower() > rest.upper() { ZeroFreeVerdict::ZeroFree } else { ZeroFreeVerdict::Inconclusive };
    Ok(ZeroFreeReport { verdict, first_term, explicit, tail })
}
