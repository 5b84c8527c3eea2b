//! Best-known Hausdorff dimension interval for the points on a curve that
//! are simultaneously approximable to a given exponent.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::curve::{r_index_of, CurveProfile};
use crate::arith::rat_int;
use crate::error::{Error, Result};

/// Which result produced the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Exponent at most `1/k`: the whole curve qualifies.
    Dirichlet,
    /// Curve of maximal degree 1; reduces to the one-dimensional Jarník formula.
    Line,
    /// Exponent exceeds the diameter of the curve as given.
    DiameterGap,
    /// Exponent exceeds the diameter of a normalization.
    NormalizedDiameterGap,
    /// Non-degenerate curve and exponent above `d_k - k + 1`.
    NonDegenerateRange,
    /// Exponent above `max(d_k - 1, 1)`.
    HighParameter,
    /// Upper bound sharpened through the first large degree gap.
    GapIndex,
    /// Only the generic sandwich applies.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionBounds {
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub lower: BigRational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub upper: BigRational,
    pub exact: bool,
    pub provenance: Provenance,
    /// Degree `d_r` used for the upper bound when [`Provenance::GapIndex`] or
    /// [`Provenance::Trivial`] fired.
    pub d_r: Option<usize>,
    /// Set when the exponent sits exactly at `max(d_k - 1, 1)`, where only the
    /// `G`-set equality is known.
    pub boundary_g_set_only: bool,
}

fn two_over(d: usize, lambda: &BigRational) -> BigRational {
    let v = rat_int(BigInt::from(2)) / (rat_int(BigInt::from(d)) * (BigRational::one() + lambda));
    if v > BigRational::one() {
        BigRational::one()
    } else {
        v
    }
}

pub fn dimension_bounds(profile: &CurveProfile, lambda: &BigRational) -> Result<DimensionBounds> {
    if !lambda.is_positive() {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let k = profile.k;
    let dk = profile.d_max;
    let int = |n: usize| rat_int(BigInt::from(n));
    let high = int(dk.saturating_sub(1).max(1));
    let exact = |v: BigRational, provenance| DimensionBounds {
        lower: v.clone(),
        upper: v,
        exact: true,
        provenance,
        d_r: None,
        boundary_g_set_only: false,
    };

    if *lambda <= BigRational::new(BigInt::one(), BigInt::from(k)) {
        return Ok(exact(BigRational::one(), Provenance::Dirichlet));
    }
    if dk == 1 {
        let v = if *lambda >= BigRational::one() {
            two_over(1, lambda)
        } else {
            BigRational::one()
        };
        return Ok(exact(v, Provenance::Line));
    }
    let full = two_over(dk, lambda);
    if *lambda > int(profile.diameter) {
        return Ok(exact(full, Provenance::DiameterGap));
    }
    if *lambda > int(profile.normalized_diameter) {
        return Ok(exact(full, Provenance::NormalizedDiameterGap));
    }
    // The two cascades below are implied by the normalized diameter (it never
    // exceeds d_k - k + 1 or d_k - 1) and are kept for completeness of the chain.
    if !profile.degenerate && dk + 1 >= k && *lambda > int(dk + 1 - k) {
        return Ok(exact(full, Provenance::NonDegenerateRange));
    }
    if *lambda > high {
        return Ok(exact(full, Provenance::HighParameter));
    }

    // Largest admissible tau below lambda: degree gaps are integers, so
    // "gap > tau for all tau < lambda close to lambda" is "gap >= ceil(lambda)".
    let ceil = lambda.ceil() - BigRational::one();
    let inv_k = BigRational::new(BigInt::one(), BigInt::from(k));
    let tau = if ceil > inv_k { ceil } else { inv_k };
    let (_, d_r) = r_index_of(&profile.normalized_type, &tau);
    let upper = two_over(d_r, lambda);
    Ok(DimensionBounds {
        lower: full,
        upper,
        exact: false,
        provenance: if d_r > 1 { Provenance::GapIndex } else { Provenance::Trivial },
        d_r: Some(d_r),
        boundary_g_set_only: *lambda == high && !lambda.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::polycurve::curve::{profile, Curve};
    use crate::polycurve::fixtures;

    #[test]
    fn quintic_mixed_exact_above_four() {
        let p = profile(&fixtures::rational_type_13379());
        let b = dimension_bounds(&p, &rat(5, 1)).unwrap();
        assert!(b.exact);
        assert_eq!(b.lower, rat(1, 27));
    }

    #[test]
    fn gap_monomials_bands() {
        let p = profile(&fixtures::gap_monomials());
        let b = dimension_bounds(&p, &rat(7, 2)).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (rat(2 * 2, 15 * 9), rat(2 * 2, 6 * 9), false));
        let b = dimension_bounds(&p, &rat(5, 2)).unwrap();
        assert_eq!((b.lower, b.upper), (rat(4, 15 * 7), rat(4, 3 * 7)));
        assert_eq!(b.provenance, Provenance::GapIndex);
    }

    #[test]
    fn repeated_line_exact_above_four() {
        let p = profile(&fixtures::repeated_line_monomials());
        let b = dimension_bounds(&p, &rat(5, 1)).unwrap();
        assert!(b.exact);
        assert_eq!(b.lower, rat(2, 66));
        let b = dimension_bounds(&p, &rat(3, 1)).unwrap();
        assert_eq!((b.lower, b.upper), (rat(2, 44), rat(2, 4)));
        assert_eq!(b.provenance, Provenance::Trivial);
    }

    #[test]
    fn octic_exact_via_normalization() {
        let p = profile(&fixtures::rational_octic_triple());
        for l in [rat(5, 1), rat(7, 1)] {
            let b = dimension_bounds(&p, &l).unwrap();
            assert!(b.exact);
            assert_eq!(b.provenance, Provenance::NormalizedDiameterGap);
            assert_eq!(b.lower, rat(2, 1) / (rat(8, 1) * (rat(1, 1) + l)));
        }
    }

    #[test]
    fn small_lambda_and_errors() {
        let p = profile(&Curve::veronese(3));
        assert_eq!(dimension_bounds(&p, &rat(1, 3)).unwrap().provenance, Provenance::Dirichlet);
        assert!(dimension_bounds(&p, &rat(0, 1)).is_err());
        assert!(dimension_bounds(&p, &rat(-1, 1)).is_err());
        let line = profile(&Curve::veronese(1));
        assert_eq!(dimension_bounds(&line, &rat(3, 1)).unwrap().lower, rat(1, 2));
    }

    #[test]
    fn boundary_flag() {
        // (X, X^3, X^6, X^10, X^15): max(d_k - 1, 1) = 14 is beyond the diameter,
        // so use a curve where the boundary is reachable below the diameter.
        let c = Curve::monomials(&[1, 2, 3]).unwrap();
        let p = profile(&c);
        let b = dimension_bounds(&p, &rat(2, 1)).unwrap();
        assert!(b.exact);
        let c = Curve::monomials(&[1, 3]).unwrap();
        let p = profile(&c);
        let b = dimension_bounds(&p, &rat(2, 1)).unwrap();
        assert!(!b.exact);
        assert!(b.boundary_g_set_only);
    }
}
