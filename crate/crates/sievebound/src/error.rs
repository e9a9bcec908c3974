use num::BigInt;
use thiserror::Error;

use crate::exact::Rational;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("log argument must be positive, got {0}")]
    NonPositiveLogArgument(Rational),
    #[error("log argument {0} too large to canonicalize over primes")]
    LogArgumentTooLarge(BigInt),
    #[error("arcoth argument must satisfy |x| > 1, got {0}")]
    InvalidArcothArgument(Rational),
    #[error("cannot parse rational from {0:?} (expected \"p/q\" or \"p\")")]
    ParseRational(String),
}

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("integration limit is not affine")]
    NonAffineLimit,
    #[error("log argument not positive at an integration limit")]
    LogArgumentSign,
    #[error("unsupported closed form: {0}")]
    UnsupportedForm(String),
    #[error("cannot parse polynomial literal {0:?}")]
    ParsePoly(String),
    #[error("basis \"1+eps-x\" requires an epsilon value")]
    MissingEpsilon,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("sliced region is unbounded")]
    UnboundedSlice,
    #[error("kernel integral diverges: slice integral does not vanish at y = 0")]
    Divergent,
    #[error("exact path shape violation: {0}")]
    ExactShapeViolation(String),
    #[error("quadrature error estimate {0} exceeds requested tolerance {1}")]
    ToleranceUnreachable(f64, f64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("extended regime requires k >= 3, got {0}")]
    ExtendedNeedsK3(u32),
    #[error("I(f) = 0: the zero function is outside the admissible class")]
    ZeroDenominator,
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("basis is linearly dependent (denominator form not positive definite)")]
    DependentBasis,
    #[error("eigen residual {0} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("empty basis")]
    EmptyBasis,
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}
