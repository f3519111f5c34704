//! Arbitrary-precision interval arithmetic, exact dyadics and oracle numbers.

mod ddball;
mod dyadic;
mod interval;
mod mag;
mod oracle;
mod unity;

pub use ddball::DdBall;
pub use dyadic::{parse_rational, Dyadic, DyadicComplex};
pub use interval::{interval_arith, ArithOp, ComplexInterval, RealInterval};
pub use mag::Mag;
pub use oracle::{oracle_refine, OracleNumber};
pub use unity::root_of_unity;

/// Extra bits carried above the requested output precision.
pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("{0}")]
    Domain(&'static str),
    #[error("invalid numeric literal `{0}`")]
    BadLiteral(String),
    #[error("`{0}` is not a dyadic number")]
    NotDyadic(String),
}
