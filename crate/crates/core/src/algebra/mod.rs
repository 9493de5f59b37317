//! Exact arithmetic in `F`, `F[t]`, `F(t)` and `F[t, 1/t]`, with the
//! valuations at `t = 0` and `t = infinity`.

mod laurent;
mod parse;
mod poly;
mod ratfunc;
mod scalar;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

pub use laurent::LaurentPolynomial;
pub use parse::{parse_rational_function, parse_scalar};
pub use poly::{xgcd_poly, Polynomial};
pub use ratfunc::{laurent_expand, valuation, RationalFunction};
pub(crate) use ratfunc::uniformizer_jet;
pub use scalar::{Field, FieldScalar};

/// One of the two places of `F(t)` that the trees are built from.
///
/// The uniformizer is `t` at `Zero` and `1/t` at `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Place {
    #[serde(alias = "inf")]
    Infinity,
    Zero,
}

impl Place {
    pub const BOTH: [Place; 2] = [Place::Infinity, Place::Zero];

    /// Exponent of `t` carried by the uniformizer power `pi^e`.
    pub fn t_exponent(self, e: i64) -> i64 {
        match self {
            Place::Zero => e,
            Place::Infinity => -e,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Zero => write!(f, "zero"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zero" | "0" => Ok(Place::Zero),
            "inf" | "infinity" => Ok(Place::Infinity),
            _ => Err(format!("unknown place '{s}', expected zero or inf")),
        }
    }
}

/// A value of a discrete valuation: an integer or `+infinity` (for zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    /// `self >= bound` with `+infinity` above every integer.
    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}
