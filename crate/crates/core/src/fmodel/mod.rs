//! The truncated sum `F_N(z) = sum_{n <= N} a_n exp(i w_n z)` with
//! `a_n = 1/(1/2 + i gamma_n)`, `w_n = gamma_n`, evaluated in ball arithmetic,
//! together with tail bounds for `|F - F_N|`.

mod expansion;
pub mod lehman;
mod tail;

pub use expansion::LocalExpansion;
pub use lehman::{lehman_bound, LehmanBound, LehmanError, Phi};
pub use tail::{tail_bound_partial_rh, tail_bound_rh, zero_free_check, TailBound, ZeroFreeReport, ZeroFreeVerdict};

use thiserror::Error;

use crate::ball::{ComplexBall, NumError, RealBall};
use crate::zeros::{coefficient_for, TableError, ZeroTable};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Lehman(#[from] LehmanError),
    #[error("{0}")]
    InvalidArgument(&'static str),
    #[error("zero table extends past the RH height; tail split is undefined")]
    TableAboveHeight,
}

impl crate::ball::IsInconclusive for ModelError {
    fn is_inconclusive(&self) -> bool {
        matches!(self, ModelError::Num(NumError::Inconclusive(_)))
    }
}

/// One term `a exp(i w z)`.
#[derive(Debug, Clone)]
pub struct Term {
    pub a: ComplexBall,
    pub w: RealBall,
}

impl Term {
    /// `exp(i w z)`.
    pub fn phase_factor(&self, z: &ComplexBall) -> ComplexBall {
        // i w (x + i y) = -w y + i w x
        let decay = self.w.mul(&z.im).neg().exp();
        let (s, c) = self.w.mul(&z.re).sin_cos();
        ComplexBall::new(decay.mul(&c), decay.mul(&s))
    }

    pub fn value(&self, z: &ComplexBall) -> ComplexBall {
        self.a.mul(&self.phase_factor(z))
    }
}

/// A finite exponential sum; `from_table` builds `F_N`.
#[derive(Debug, Clone)]
pub struct ExpSum {
    terms: Vec<Term>,
    prec: u32,
}

impl ExpSum {
    /// `F_N` at `prec` bits. `order == 0` gives the empty sum.
    pub fn from_table(table: &ZeroTable, order: usize, prec: u32) -> Result<Self, TableError> {
        if order > 0 {
            table.require(order)?;
        }
        let terms = (1..=order)
            .map(|n| {
                let w = table.ordinate(n, prec)?;
                Ok(Term { a: coefficient_for(&w), w })
            })
            .collect::<Result<Vec<_>, TableError>>()?;
        Ok(ExpSum { terms, prec })
    }

    pub fn from_terms(prec: u32, terms: Vec<Term>) -> Self {
        ExpSum { terms, prec }
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Enclosure of `F_N` over the ball `z`.
    pub fn eval(&self, z: &ComplexBall) -> ComplexBall {
        let mut acc = ComplexBall::zero(self.prec);
        for t in &self.terms {
            acc = acc.add(&t.value(z));
        }
        acc
    }

    /// Enclosure of `F_N'(z) = sum i w_n a_n exp(i w_n z)`.
    pub fn eval_deriv(&self, z: &ComplexBall) -> ComplexBall {
        self.eval_with_deriv(z).1
    }

    pub fn eval_with_deriv(&self, z: &ComplexBall) -> (ComplexBall, ComplexBall) {
        let mut f = ComplexBall::zero(self.prec);
        let mut df = ComplexBall::zero(self.prec);
        for t in &self.terms {
            let v = t.value(z);
            df = df.add(&v.mul_real(&t.w).mul_i());
            f = f.add(&v);
        }
        (f, df)
    }

    /// Taylor model of the sum on the disc `|z - center| <= radius`.
    pub fn expansion(&self, center: &ComplexBall, radius: &rug::Float) -> LocalExpansion {
        LocalExpansion::new(self, center, radius)
    }
}
