//! Sparse multivariate polynomials over an exact field, the extended rings
//! `A[x]` and `A[x, y]`, and the expression parser and printer.

mod extended;
mod mpoly;
mod parse;
mod ring;

use thiserror::Error;

pub use extended::{substitute_x_plus_y, BiPoly, SigmaImage};
pub use mpoly::{poly_arith, MPoly, PolyOp};
pub use parse::{parse_poly, parse_sigma_image};
pub use ring::{Monomial, PolyRing, RESERVED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("not divisible")]
    NotDivisible,
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{0}` is reserved and cannot be a ring variable")]
    ReservedVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
}
