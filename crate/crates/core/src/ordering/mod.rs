//! The four fill-reducing ordering parameters as permutation-producing
//! algorithms.

mod colamd;
mod elimination;

pub use colamd::approx_min_degree_columns;
pub use elimination::{min_degree_order, EliminationGraph};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sparse::{at_plus_a_pattern, ata_pattern, Permutation, SparseMatrix};

/// The tuned knob: which column ordering to apply before factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderingParam {
    /// Approximate minimum degree column ordering. The default.
    Colamd,
    /// No reordering.
    Natural,
    /// Minimum degree on the pattern of A' + A.
    AtPlusA,
    /// Minimum degree on the pattern of A' * A.
    AtTimesA,
}

impl OrderingParam {
    pub const ALL: [OrderingParam; 4] = [
        OrderingParam::Colamd,
        OrderingParam::Natural,
        OrderingParam::AtPlusA,
        OrderingParam::AtTimesA,
    ];

    pub const DEFAULT: OrderingParam = OrderingParam::Colamd;

    /// Stable index used for grade arrays and the wire format.
    pub fn index(self) -> usize {
        match self {
            OrderingParam::Colamd => 0,
            OrderingParam::Natural => 1,
            OrderingParam::AtPlusA => 2,
            OrderingParam::AtTimesA => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OrderingParam::Colamd => "COLAMD",
            OrderingParam::Natural => "NATURAL",
            OrderingParam::AtPlusA => "AT_PLUS_A",
            OrderingParam::AtTimesA => "AT_TIMES_A",
        }
    }
}

impl fmt::Display for OrderingParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderingParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "COLAMD" => Ok(OrderingParam::Colamd),
            "NATURAL" => Ok(OrderingParam::Natural),
            "AT_PLUS_A" => Ok(OrderingParam::AtPlusA),
            "AT_TIMES_A" => Ok(OrderingParam::AtTimesA),
            other => Err(Error::InvalidInput(format!(
                "unknown ordering parameter `{other}`"
            ))),
        }
    }
}

/// Identity permutation of length n.
pub fn natural_order(n: usize) -> Permutation {
    Permutation::identity(n)
}

/// Dispatches a matrix to the ordering algorithm selected by `param`.
pub fn order(matrix: &SparseMatrix, param: OrderingParam) -> Result<Permutation> {
    let n = matrix.require_square()?;
    match param {
        OrderingParam::Natural => Ok(natural_order(n)),
        OrderingParam::AtPlusA => min_degree_order(&at_plus_a_pattern(matrix)?),
        OrderingParam::AtTimesA => min_degree_order(&ata_pattern(matrix)?),
        OrderingParam::Colamd => approx_min_degree_columns(matrix),
    }
}
