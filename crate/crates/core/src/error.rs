use num_bigint::BigInt;
use thiserror::Error;

use crate::shelves::ShelfIndex;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("divisor has leading coefficient {leading}, not a unit")]
    NotAUnit { leading: BigInt },
    #[error("not divisible: coefficient {coefficient} at q^{exponent}")]
    NotDivisible { exponent: i64, coefficient: BigInt },
    #[error("divisibility needs coefficients through q^{needed}, series known to order {order}")]
    InsufficientOrder { needed: i64, order: i64 },
}

/// Why a shelf recursion step could not be completed.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RecursionDetail {
    #[error(transparent)]
    Division(#[from] SeriesError),
    #[error("the two sides disagree at q^{exponent}: {left} vs {right}")]
    Mismatch {
        exponent: i64,
        left: BigInt,
        right: BigInt,
    },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ShelfError {
    #[error("recursion failed at {index}: {detail}")]
    RecursionFailed {
        index: ShelfIndex,
        detail: RecursionDetail,
    },
    #[error("table order {order} too low for shelf {j} (needs at least {needed})")]
    OrderTooLow { order: i64, j: u32, needed: i64 },
    #[error("series r = {r} is not stored in the table")]
    Missing { r: u32 },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HMatrixError {
    #[error("tracked column of row {i} did not stabilize within {steps} steps")]
    NoStabilization { i: u32, steps: u32 },
    #[error("coefficient of q^{exponent} changed at shelf {j}, past the stabilization bound")]
    UnstableCoefficient { exponent: i64, j: u32 },
    #[error("off-parity column {column} is nonzero at shelf {j}")]
    OffParityNonzero { column: u32, j: u32 },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("edge decompositions of r = {r} disagree at n = {n}: {canonical} vs {alternate}")]
    EdgeCountMismatch {
        r: u32,
        n: u32,
        canonical: u64,
        alternate: u64,
    },
}
