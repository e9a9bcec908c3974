//! Evaluation and optimization of the variational functionals behind weighted
//! Selberg sieves for almost-prime k-tuples.
//!
//! The library computes the quadratic functionals `I`, `Q`, `J` of the
//! standard, extended, and epsilon-enlarged simplex regimes for polynomial
//! test functions of the collapsed form `F(t_1,...,t_k) = f(t_1+...+t_k)`,
//! assembles the Rayleigh quotients they define, minimizes them over small
//! polynomial bases, and converts the resulting bounds into `DHL` statements.
//!
//! Wherever possible values are exact: rational, or rational plus rational
//! multiples of logarithms of primes (see [`exact::LogValue`]). A Monte Carlo
//! oracle over the original multidimensional definitions validates the
//! one-dimensional collapse end to end.

pub mod error;
pub mod exact;
pub mod functionals;
pub mod optimizer;
pub mod oracle;
pub mod poly;
pub mod regions;
