//! Continued fractions, best approximations and constructively given reals.

mod cf;
mod decompose;
mod real;

pub use cf::{
    certified_prefix, certified_prefix_until, cf_expand, cf_of_rational, convergent_membership, convergents, dist_to_int,
    Convergent, Membership,
};
pub use decompose::{decompose, initial_depth, lambda1_estimate, next_depth, Decomposition, Lambda1Estimate, DEEPEN_ATTEMPTS};
pub use real::{
    dyadic_rational, DyadicSeries, DyadicTerm, Enclosure, ProgrammaticReal, QuotientStream,
    RealKind, DEFAULT_QUOTIENT_DEPTH, MAX_EXPONENT,
};
