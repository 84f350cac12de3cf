// Negated comparisons are deliberate: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod cli;
pub mod config;
pub mod fmodel;
pub mod rigor;
pub mod search;
pub mod zeros;
