use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::curve::Curve;
use super::linalg::{self, Mat};
use super::poly::RatPoly;
use crate::error::{Error, Result};

/// Invertible square matrix with rational entries acting on curve coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformMatrix {
    rows: Mat,
}

impl TransformMatrix {
    pub fn new(rows: Mat) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square".into()));
        }
        if linalg::determinant(&rows).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(TransformMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        TransformMatrix {
            rows: linalg::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &Mat {
        &self.rows
    }

    pub fn inverse(&self) -> TransformMatrix {
        TransformMatrix {
            rows: linalg::inverse(&self.rows).expect("invertible by construction"),
        }
    }

    pub fn compose(&self, after: &TransformMatrix) -> TransformMatrix {
        TransformMatrix {
            rows: linalg::mul(&after.rows, &self.rows),
        }
    }

    pub fn determinant(&self) -> BigRational {
        linalg::determinant(&self.rows)
    }

    fn combine(&self, polys: &[RatPoly]) -> Vec<RatPoly> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(polys)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(RatPoly::zero(), |acc, (c, p)| acc.add(&p.scale(c)))
            })
            .collect()
    }
}

impl Serialize for TransformMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Replaces each coordinate by the corresponding row combination of the
/// original coordinates.
pub fn apply_transform(curve: &Curve, m: &TransformMatrix) -> Result<Curve> {
    if m.dim() != curve.k() {
        return Err(Error::DimensionMismatch(curve.k(), m.dim()));
    }
    let polys = m.combine(curve.polys());
    if polys[0] != RatPoly::x() {
        return Err(Error::FirstCoordinate);
    }
    Ok(Curve::from_polys_unchecked(polys))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    /// Constant-free normalized curve, zero coordinates last.
    pub curve: Curve,
    /// `matrix * (original without constants) = curve`.
    pub matrix: TransformMatrix,
    pub m: usize,
    /// Constant terms removed from the original coordinates.
    pub constants: Vec<BigRational>,
}

pub fn normalize(curve: &Curve) -> Normalization {
    normalize_with_pivot(curve, |cands| cands[0])
}

/// Normalization with a caller-chosen pivot among the coordinates sharing
/// the highest repeated degree (indices 0-based, sorted ascending). For
/// degree 1 the pivot is always `X`.
pub fn normalize_with_pivot(curve: &Curve, mut pick: impl FnMut(&[usize]) -> usize) -> Normalization {
    let k = curve.k();
    let constants: Vec<BigRational> = curve.polys().iter().map(RatPoly::constant_term).collect();
    let mut w: Vec<RatPoly> = curve.polys().iter().map(RatPoly::without_constant).collect();
    let mut mat = linalg::identity(k);

    let sub_row = |mat: &mut Mat, i: usize, e: usize, f: &BigRational| {
        for j in 0..k {
            let d = f * &mat[e][j];
            mat[i][j] -= d;
        }
    };

    loop {
        let mut h = None;
        for d in w.iter().filter_map(RatPoly::degree) {
            let count = w.iter().filter(|p| p.degree() == Some(d)).count();
            if count > 1 && h.is_none_or(|h| d > h) {
                h = Some(d);
            }
        }
        let Some(h) = h else { break };
        let cands: Vec<usize> = (0..k).filter(|&i| w[i].degree() == Some(h)).collect();
        let e = if h == 1 { 0 } else { pick(&cands) };
        let lead_e = w[e].leading().expect("nonzero").clone();
        for &i in cands.iter().filter(|&&i| i != e) {
            let f = w[i].leading().expect("nonzero") / &lead_e;
            w[i] = w[i].sub(&w[e].scale(&f));
            sub_row(&mut mat, i, e, &f);
        }
    }

    for i in 1..k {
        let f = w[i].coeff(1);
        if !f.is_zero() {
            w[i] = w[i].sub(&RatPoly::x().scale(&f));
            sub_row(&mut mat, i, 0, &f);
        }
    }

    let mut order: Vec<usize> = (1..k).collect();
    order.sort_by_key(|&i| match w[i].degree() {
        Some(d) => (false, d),
        None => (true, 0),
    });
    order.insert(0, 0);
    let polys: Vec<RatPoly> = order.iter().map(|&i| w[i].clone()).collect();
    let rows: Mat = order.iter().map(|&i| mat[i].clone()).collect();
    let m = polys.iter().filter(|p| !p.is_zero()).count();
    Normalization {
        curve: Curve::from_polys_unchecked(polys),
        matrix: TransformMatrix::new(rows).expect("row operations preserve invertibility"),
        m,
        constants,
    }
}

fn coefficient_matrix(curve: &Curve, cols: std::ops::RangeInclusive<usize>) -> Mat {
    curve
        .polys()
        .iter()
        .map(|p| cols.clone().map(|i| p.coeff(i)).collect())
        .collect()
}

/// True when `1, P_1, ..., P_k` are linearly dependent over the rationals.
pub fn is_degenerate(curve: &Curve) -> bool {
    let mut a = coefficient_matrix(curve, 0..=curve.max_degree());
    let mut one = vec![BigRational::zero(); curve.max_degree() + 1];
    one[0] = num_traits::One::one();
    a.push(one);
    linalg::rank(&a) < curve.k() + 1
}

/// A matrix `M` with `M * c1 = c2` after constant-term removal, if one exists.
///
/// Both coefficient matrices are brought to reduced row echelon form; the
/// curves are equivalent exactly when these coincide, and the witness is
/// `G2^{-1} G1`.
pub fn equivalent(c1: &Curve, c2: &Curve) -> Result<Option<TransformMatrix>> {
    if c1.k() != c2.k() {
        return Err(Error::DimensionMismatch(c1.k(), c2.k()));
    }
    let d = c1.max_degree().max(c2.max_degree());
    let a = coefficient_matrix(c1, 1..=d);
    let b = coefficient_matrix(c2, 1..=d);
    let (ra, ga, _) = linalg::rref_with_transform(&a);
    let (rb, gb, _) = linalg::rref_with_transform(&b);
    if ra != rb {
        return Ok(None);
    }
    let gb_inv = linalg::inverse(&gb).expect("elimination transform is invertible");
    let m = TransformMatrix::new(linalg::mul(&gb_inv, &ga))?;
    debug_assert_eq!(linalg::mul(m.rows(), &a), b);
    Ok(Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::polycurve::curve::{profile, type_vector};
    use crate::polycurve::fixtures;

    fn strip(c: &Curve) -> Curve {
        Curve::from_polys_unchecked(c.polys().iter().map(RatPoly::without_constant).collect())
    }

    #[test]
    fn octic_normalizes_to_1348() {
        let c = fixtures::rational_octic_triple();
        let n = normalize(&c);
        assert_eq!(type_vector(&n.curve), vec![1, 3, 4, 8]);
        assert_eq!(n.m, 4);
        let p = profile(&c);
        assert_eq!(p.normalized_diameter, 4);
        assert_eq!(p.diameter, 7);
        assert!(!p.degenerate);
        assert_eq!(apply_transform(&strip(&c), &n.matrix).unwrap(), n.curve);
    }

    #[test]
    fn sum_curve_degenerate() {
        let c = fixtures::veronese3_with_sum();
        let n = normalize(&c);
        assert_eq!(n.curve, Curve::new(vec![RatPoly::x(), RatPoly::from_i64(&[0, 0, 1]), RatPoly::from_i64(&[0, 0, 0, 1]), RatPoly::zero()]).unwrap());
        assert_eq!(n.m, 3);
        assert!(profile(&c).degenerate);
        assert!(is_degenerate(&c));
    }

    #[test]
    fn cubic_quartic_only_loses_lower_terms() {
        let c = fixtures::integral_cubic_quartic();
        let n = normalize(&c);
        assert_eq!(n.m, 3);
        assert_eq!(n.curve.polys()[1], RatPoly::from_i64(&[0, 0, 12, 4]));
        assert_eq!(n.curve.polys()[2], RatPoly::from_i64(&[0, 0, 6, 0, 3]));
        assert!(!is_degenerate(&c));
    }

    #[test]
    fn degeneracy_by_inspection() {
        let c = Curve::new(vec![RatPoly::x(), RatPoly::from_i64(&[1, 1])]).unwrap();
        assert!(is_degenerate(&c));
        assert!(!is_degenerate(&fixtures::rational_octic_triple()));
        let n = normalize(&c);
        assert_eq!(n.m, 1);
    }

    #[test]
    fn worked_matrices_apply() {
        let c3 = fixtures::veronese3_with_sum();
        let t = apply_transform(&c3, &fixtures::sum_eliminator()).unwrap();
        assert_eq!(t.polys()[3], RatPoly::zero());
        let c2 = fixtures::rational_octic_triple();
        let t = apply_transform(&c2, &fixtures::octic_normalizer()).unwrap();
        assert_eq!(t.polys()[1], RatPoly::new(vec![rat(-24, 35), rat(0, 1), rat(0, 1), rat(5, 2)]));
        assert_eq!(t.polys()[2], RatPoly::new(vec![rat(-2, 5), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]));
        assert_eq!(type_vector(&t), vec![1, 3, 4, 8]);
    }

    #[test]
    fn six_sevenths_row_leaves_octic_residue() {
        // Subtracting 6/7 of the last coordinate reproduces the constant -76/35
        // but leaves 1/3 - 15/14 = -31/42 at X^8.
        let mut rows = fixtures::octic_normalizer().rows().clone();
        rows[2][3] = rat(-6, 7);
        let m = TransformMatrix::new(rows).unwrap();
        let t = apply_transform(&fixtures::rational_octic_triple(), &m).unwrap();
        assert_eq!(t.polys()[2].constant_term(), rat(-76, 35));
        assert_eq!(t.polys()[2].coeff(8), rat(-31, 42));
        assert_eq!(type_vector(&t), vec![1, 3, 8, 8]);
    }

    #[test]
    fn transform_round_trip() {
        let c = fixtures::rational_octic_triple();
        let m = fixtures::octic_normalizer();
        let there = apply_transform(&c, &m).unwrap();
        assert_eq!(apply_transform(&there, &m.inverse()).unwrap(), c);
        assert_eq!(apply_transform(&c, &TransformMatrix::identity(4)).unwrap(), c);
    }

    #[test]
    fn singular_rejected() {
        let rows = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(2, 1), rat(0, 1)]];
        assert_eq!(TransformMatrix::new(rows), Err(Error::SingularMatrix));
    }

    #[test]
    fn equivalence_witnesses() {
        let c2 = fixtures::rational_octic_triple();
        let n = normalize(&c2);
        let m = equivalent(&c2, &n.curve).unwrap().expect("equivalent");
        assert_eq!(apply_transform(&strip(&c2), &m).unwrap(), n.curve);
        let back = equivalent(&n.curve, &c2).unwrap().unwrap();
        assert_eq!(apply_transform(&n.curve, &back).unwrap(), strip(&c2));
        assert_eq!(equivalent(&c2, &c2).unwrap(), Some(TransformMatrix::identity(4)));
        let a = Curve::veronese(2);
        let b = Curve::monomials(&[1, 3]).unwrap();
        assert_eq!(equivalent(&a, &b).unwrap(), None);
        assert!(equivalent(&a, &c2).is_err());
    }
}
