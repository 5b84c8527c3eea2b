//! Dense Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Mat = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigRational::zero(), |acc, l| acc + &row[l] * &b[l][j])
                })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form of `a` together with an invertible `g` such that
/// `g * a = rref`. Returns `(rref, g, pivot_columns)`.
pub fn rref_with_transform(a: &Mat) -> (Mat, Mat, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut g = identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        g.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for x in g[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
            for j in 0..rows {
                let d = &f * &g[r][j];
                g[i][j] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, g, pivots)
}

pub fn rank(a: &Mat) -> usize {
    rref_with_transform(a).2.len()
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return None;
    }
    let (r, g, piv) = rref_with_transform(a);
    (piv.len() == n && r == identity(n)).then_some(g)
}

pub fn determinant(a: &Mat) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    det
}
