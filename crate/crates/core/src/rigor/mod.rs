//! Certification: Rouché confirmation of a zero of `F`, rigorous contour
//! constants, the choice of `q0`, and the certificate that records them.

mod certificate;
mod contour;
mod q0;
mod rouche;

pub use certificate::{assemble_certificate, verify_certificate, BallJson, Certificate, CheckResult, VerifyReport};
pub use contour::{contour_alpha, contour_constants, AlphaMode, AlphaResult, Contour, ContourBounds};
pub use q0::{q0_condition, q0_fails, solve_q0, solve_q0_legacy, Q0_LIMIT};
pub use rouche::{refine_candidate, rouche_verify, winding_number, VerifiedZero, MAX_SEGMENTS, MIN_SEGMENTS};

use thiserror::Error;

use crate::ball::{IsInconclusive, NumError};
use crate::fmodel::ModelError;
use crate::zeros::TableError;

#[derive(Debug, Error)]
pub enum RigorError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("zero table is not certify-grade (declared error {0})")]
    NotCertifyGrade(String),
    #[error("derivative enclosure contains zero")]
    DerivativeContainsZero,
    #[error("|F_M| on the circle (>= {min}) does not exceed the tail bound (<= {tail})")]
    RoucheGap { min: String, tail: String },
    #[error("winding number is {0}, expected 1")]
    Winding(i64),
    #[error("winding number undetermined after {0} segments")]
    WindingUndetermined(usize),
    #[error("invalid contour: {0}")]
    BadContour(String),
    #[error("|F_N| enclosure reaches zero on the contour near {0}")]
    ContourTouchesZero(String),
    #[error("alpha does not exceed b + 2 b_w")]
    AlphaTooSmall,
    #[error("no q0 up to {0} satisfies the criterion")]
    NoQ0(u64),
    #[error("alpha does not exceed 3 b; the legacy formula has no positive solution")]
    LegacyInfeasible,
}

impl IsInconclusive for RigorError {
    fn is_inconclusive(&self) -> bool {
        match self {
            RigorError::Num(NumError::Inconclusive(_)) => true,
            RigorError::Model(m) => m.is_inconclusive(),
            RigorError::ContourTouchesZero(_) => true,
            _ => false,
        }
    }
}
