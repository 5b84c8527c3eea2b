use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::normalize::normalize;
use super::poly::RatPoly;
use crate::arith::{rat, rat_int};
use crate::error::{Error, Result};

/// A curve `(X, P_2(X), ..., P_k(X))` with rational coefficient polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    polys: Vec<RatPoly>,
}

impl Curve {
    pub fn new(polys: Vec<RatPoly>) -> Result<Self> {
        match polys.first() {
            Some(p) if *p == RatPoly::x() => Ok(Curve { polys }),
            _ => Err(Error::InvalidParameter(
                "first coordinate must be X".to_string(),
            )),
        }
    }

    /// `(X, X^2, ..., X^k)`.
    pub fn veronese(k: usize) -> Self {
        assert!(k >= 1);
        Curve {
            polys: (1..=k)
                .map(|j| RatPoly::monomial(BigRational::one(), j))
                .collect(),
        }
    }

    /// Curve of monic monomials with the given exponents; the first must be 1.
    pub fn monomials(exps: &[usize]) -> Result<Self> {
        Curve::new(
            exps.iter()
                .map(|&e| RatPoly::monomial(BigRational::one(), e))
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[RatPoly] {
        &self.polys
    }

    pub fn max_degree(&self) -> usize {
        self.polys.iter().filter_map(RatPoly::degree).max().unwrap_or(1)
    }

    pub fn is_integral(&self) -> bool {
        self.polys.iter().all(RatPoly::is_integral)
    }

    /// Evaluates every coordinate at `z`.
    pub fn eval(&self, z: &BigRational) -> Vec<BigRational> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    pub(crate) fn from_polys_unchecked(polys: Vec<RatPoly>) -> Self {
        debug_assert!(polys.first() == Some(&RatPoly::x()));
        Curve { polys }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.polys.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Derived invariants of a curve. Constant and zero coordinates are left out
/// of the type vector, matching how vanishing coordinates are treated after
/// normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveProfile {
    pub k: usize,
    pub type_vec: Vec<usize>,
    pub diameter: usize,
    pub d_max: usize,
    /// Number of nonzero coordinates after normalization.
    pub m: usize,
    pub degenerate: bool,
    pub normalized_type: Vec<usize>,
    pub normalized_diameter: usize,
}

pub fn diameter_of(type_vec: &[usize]) -> usize {
    type_vec
        .windows(2)
        .map(|w| w[1] - w[0])
        .max()
        .unwrap_or(0)
}

fn sort_key(p: &RatPoly) -> (bool, usize) {
    match p.degree() {
        Some(d) if d >= 1 => (false, d),
        _ => (true, 0),
    }
}

/// Orders coordinates by non-decreasing degree, keeping `X` first and
/// constant coordinates last. The permutation is 1-based: entry `i` names the
/// original coordinate placed at position `i`.
pub fn canonical_sort(curve: &Curve) -> (Curve, Vec<usize>) {
    let mut idx: Vec<usize> = (1..curve.k()).collect();
    idx.sort_by_key(|&i| sort_key(&curve.polys[i]));
    let mut perm = vec![1];
    perm.extend(idx.iter().map(|i| i + 1));
    let polys = perm.iter().map(|&i| curve.polys[i - 1].clone()).collect();
    (Curve::from_polys_unchecked(polys), perm)
}

pub fn type_vector(curve: &Curve) -> Vec<usize> {
    let (sorted, _) = canonical_sort(curve);
    sorted
        .polys
        .iter()
        .filter_map(|p| p.degree().filter(|&d| d >= 1))
        .collect()
}

pub fn profile(curve: &Curve) -> CurveProfile {
    let type_vec = type_vector(curve);
    let norm = normalize(curve);
    let normalized_type = type_vector(&norm.curve);
    CurveProfile {
        k: curve.k(),
        diameter: diameter_of(&type_vec),
        d_max: curve.max_degree(),
        m: norm.m,
        degenerate: norm.m < curve.k(),
        normalized_diameter: diameter_of(&normalized_type),
        type_vec,
        normalized_type,
    }
}

/// `P_j = Q_j / K_j` with `Q_j` integral and `K_j` the least common multiple
/// of the coefficient denominators of `P_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerizedCurve {
    pub curve: Curve,
    pub k_j: Vec<BigInt>,
    /// Content of each `Q_j`; 1 unless `P_j` has a non-unit rational content.
    pub content: Vec<BigInt>,
    pub k_total: BigInt,
    pub delta: BigInt,
    pub d: BigInt,
    pub d_max: usize,
}

impl IntegerizedCurve {
    pub fn is_monic(&self) -> bool {
        self.delta.is_one()
    }
}

pub fn integerize(curve: &Curve) -> IntegerizedCurve {
    let mut polys = Vec::with_capacity(curve.k());
    let mut k_j = Vec::with_capacity(curve.k());
    let mut content = Vec::with_capacity(curve.k());
    let mut delta = BigInt::one();
    for p in curve.polys() {
        let l = p.denominator_lcm();
        let ints = p.scaled_integer_coeffs(&l);
        let c = RatPoly::content_of_integer(&ints);
        content.push(if c.is_zero() { BigInt::one() } else { c });
        if ints.len() >= 2 {
            delta *= ints[ints.len() - 1].abs();
        }
        polys.push(RatPoly::new(ints.into_iter().map(rat_int).collect()));
        k_j.push(l);
    }
    let d_max = curve.max_degree();
    let k_total = k_j.iter().product();
    let d = num_traits::pow(delta.clone(), d_max);
    IntegerizedCurve {
        curve: Curve::from_polys_unchecked(polys),
        k_j,
        content,
        k_total,
        delta,
        d,
        d_max,
    }
}

/// Triangle-inequality bound on `max_j max_{|z - zeta| <= 1/2} |P_j'(z)|`
/// given only `|zeta| <= abs_bound`.
pub fn sigma_bound_abs(curve: &Curve, abs_bound: &BigRational) -> BigRational {
    let r = abs_bound.abs() + rat(1, 2);
    let r = if r < BigRational::one() {
        BigRational::one()
    } else {
        r
    };
    curve
        .polys()
        .iter()
        .map(|p| p.derivative_abs_bound(&r))
        .fold(BigRational::one(), |a, b| if b > a { b } else { a })
}

pub fn sigma_bound(curve: &Curve, zeta: &BigRational) -> BigRational {
    sigma_bound_abs(curve, zeta)
}

/// `1 / (2 D Sigma)` for the integerized curve.
pub fn c0_constant_abs(curve: &Curve, abs_bound: &BigRational) -> BigRational {
    let ic = integerize(curve);
    let sigma = sigma_bound_abs(&ic.curve, abs_bound);
    BigRational::one() / (rat_int(BigInt::from(2) * &ic.d) * sigma)
}

pub fn c0_constant(curve: &Curve, zeta: &BigRational) -> BigRational {
    c0_constant_abs(curve, zeta)
}

/// Smallest 1-based `r` with `d_{r+1} - d_r > tau`, or the last index.
pub fn r_index_of(type_vec: &[usize], tau: &BigRational) -> (usize, usize) {
    for (i, w) in type_vec.windows(2).enumerate() {
        if rat_int(BigInt::from(w[1] - w[0])) > *tau {
            return (i + 1, w[0]);
        }
    }
    (type_vec.len(), *type_vec.last().unwrap_or(&1))
}

pub fn r_index(profile: &CurveProfile, tau: &BigRational) -> (usize, usize) {
    r_index_of(&profile.type_vec, tau)
}

/// The first `s` coordinates.
pub fn project(curve: &Curve, s: usize) -> Result<Curve> {
    if s == 0 || s > curve.k() {
        return Err(Error::IndexOutOfRange {
            index: s,
            k: curve.k(),
        });
    }
    Ok(Curve::from_polys_unchecked(curve.polys[..s].to_vec()))
}
