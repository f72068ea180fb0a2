//! Certification and computation of fixed points for derivative-type
//! interpolative Berinde weak contractions on intervals, plus a Nyström
//! successive-approximation solver for nonlinear Fredholm integral
//! equations of the second kind.

// `!(x >= 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod cli;
pub mod domain;
pub mod error;
pub mod export;
pub mod fredholm;
pub mod gauge;
pub mod picard;
pub mod problem;
pub mod quadrature;

pub use error::{Error, Result};
