//! Exact polynomial algebra for logarithmic differential operators on the
//! Coxeter arrangements of types A, B and D.
//!
//! The crate provides sparse polynomials over ℚ ([`poly`]), polynomial
//! matrices with fraction-free determinants and compound matrices
//! ([`matrix`]), Schur functions ([`schur`]), the arrangements themselves
//! ([`arrangement`]), constant-order differential operators ([`diffop`]),
//! explicit bases of the order-two operator modules ([`bases`]) and the
//! signed-permutation group actions on them ([`group`]).

pub mod arrangement;
pub mod bases;
pub mod diffop;
pub mod error;
pub mod group;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod rational;
pub mod schur;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use poly::{LaurentPolynomial, Monomial, Polynomial};
pub use rational::Rational;

/// Root system type of a Coxeter arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    D,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::A => "A",
            Kind::B => "B",
            Kind::D => "D",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Kind::A),
            "B" => Ok(Kind::B),
            "D" => Ok(Kind::D),
            other => Err(Error::Parse(format!("unknown arrangement kind `{other}`"))),
        }
    }
}
