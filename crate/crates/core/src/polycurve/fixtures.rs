//! Reference curves and transforms used throughout the regression suites.

use num_rational::BigRational;

use super::curve::Curve;
use super::poly::RatPoly;
use super::TransformMatrix;
use crate::arith::rat;

fn poly(terms: &[(i64, i64, usize)]) -> RatPoly {
    let deg = terms.iter().map(|t| t.2).max().unwrap_or(0);
    let mut c = vec![rat(0, 1); deg + 1];
    for &(n, d, e) in terms {
        c[e] += rat(n, d);
    }
    RatPoly::new(c)
}

/// Type (1,3,3,7,9), diameter 4, non-monic with rational coefficients.
pub fn rational_type_13379() -> Curve {
    Curve::new(vec![
        RatPoly::x(),
        poly(&[(1, 6, 3), (5, 1, 2)]),
        poly(&[(1, 1, 3), (-11, 2, 1), (1, 3, 0)]),
        poly(&[(2, 13, 7), (-11, 1, 3), (-1, 1, 0)]),
        poly(&[(3, 4, 9), (3, 8, 5), (1, 2, 0)]),
    ])
    .expect("valid curve")
}

/// `(X, X^3, X^6, X^10, X^15)`.
pub fn gap_monomials() -> Curve {
    Curve::monomials(&[1, 3, 6, 10, 15]).expect("valid curve")
}

/// `(X, X, X^5, X^6, X^7, X^11)`.
pub fn repeated_line_monomials() -> Curve {
    Curve::monomials(&[1, 1, 5, 6, 7, 11]).expect("valid curve")
}

/// Integral, non-degenerate and already normalized up to lower terms; type (1,3,4).
pub fn integral_cubic_quartic() -> Curve {
    Curve::new(vec![
        RatPoly::x(),
        poly(&[(4, 1, 3), (12, 1, 2), (5, 1, 1), (-7, 1, 0)]),
        poly(&[(3, 1, 4), (6, 1, 2), (-10, 1, 1), (33, 1, 0)]),
    ])
    .expect("valid curve")
}

/// Type (1,8,8,8) whose normalization has type (1,3,4,8).
pub fn rational_octic_triple() -> Curve {
    Curve::new(vec![
        RatPoly::x(),
        poly(&[(2, 7, 8), (5, 2, 3)]),
        poly(&[(1, 3, 8), (1, 1, 4), (2, 5, 0)]),
        poly(&[(5, 4, 8), (3, 1, 0)]),
    ])
    .expect("valid curve")
}

/// `(X, X^2, X^3, X^3 + X^2)`, degenerate.
pub fn veronese3_with_sum() -> Curve {
    Curve::new(vec![
        RatPoly::x(),
        poly(&[(1, 1, 2)]),
        poly(&[(1, 1, 3)]),
        poly(&[(1, 1, 3), (1, 1, 2)]),
    ])
    .expect("valid curve")
}

fn matrix(rows: &[&[(i64, i64)]]) -> TransformMatrix {
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect())
        .collect();
    TransformMatrix::new(m).expect("invertible")
}

/// Eliminates the shared degree-8 terms of [`rational_octic_triple`] against its last coordinate.
pub fn octic_normalizer() -> TransformMatrix {
    matrix(&[
        &[(1, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (1, 1), (0, 1), (-8, 35)],
        &[(0, 1), (0, 1), (1, 1), (-4, 15)],
        &[(0, 1), (0, 1), (0, 1), (1, 1)],
    ])
}

/// Kills the last coordinate of [`veronese3_with_sum`].
pub fn sum_eliminator() -> TransformMatrix {
    matrix(&[
        &[(1, 1), (0, 1), (0, 1), (0, 1)],
        &[(0, 1), (1, 1), (0, 1), (0, 1)],
        &[(0, 1), (0, 1), (1, 1), (0, 1)],
        &[(0, 1), (-1, 1), (-1, 1), (1, 1)],
    ])
}
