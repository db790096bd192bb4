//! Exact multivariate polynomials over ℚ with the bigraded variable layout
//! `t_0..t_n | x_0,y_0,..,x_n,y_n`.

mod gcd;
mod monomial;
mod mpoly;
mod parse;
pub mod upoly;
mod ring;

pub use gcd::{
    content_in, kth_root, multivariate_gcd, primitive_in, squarefree_decompose, trial_divide,
    SquarefreeDecomp,
};
pub use monomial::Monomial;
pub use mpoly::{rat, rat_frac, Assignment, MPoly, MultiDeg, Rat, Value};
pub use parse::parse_poly;
pub use ring::RingSpec;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative exponents are not polynomial")]
    NegativeExponent,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("operation undefined for the zero polynomial")]
    ZeroInput,
    #[error("polynomial is not a perfect {k}-th power")]
    NotAPower { k: u32 },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}
