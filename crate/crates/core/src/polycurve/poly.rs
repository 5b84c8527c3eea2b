use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{gcd_all, lcm_all, rat_int};

/// Univariate polynomial over the rationals, constant term first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and every other polynomial has a nonzero
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Exact value at `z`, evaluated on integers with a single reduction.
    pub fn eval(&self, z: &BigRational) -> BigRational {
        if self.coeffs.is_empty() {
            return BigRational::zero();
        }
        let l = self.denominator_lcm();
        let (a, b) = (z.numer(), z.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + (c.numer() * (&l / c.denom())) * &bpow;
            bpow *= b;
        }
        // The loop multiplied bpow by b once more than the degree.
        crate::arith::reduced(acc, l * (bpow / b))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn without_constant(&self) -> RatPoly {
        let mut c = self.coeffs.clone();
        if let Some(c0) = c.first_mut() {
            *c0 = BigRational::zero();
        }
        RatPoly::new(c)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        lcm_all(self.coeffs.iter().map(|c| c.denom()))
    }

    /// Integer coefficients of `m * self`; `m` must clear all denominators.
    pub fn scaled_integer_coeffs(&self, m: &BigInt) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .map(|c| {
                let s = c * rat_int(m.clone());
                debug_assert!(s.is_integer());
                s.to_integer()
            })
            .collect()
    }

    /// Sum of absolute values of the coefficients of the derivative weighted by `r^i`.
    pub fn derivative_abs_bound(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            acc += c.abs() * rat_int(BigInt::from(i)) * &pow;
            pow *= r;
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn content_of_integer(coeffs: &[BigInt]) -> BigInt {
        gcd_all(coeffs.iter())
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Sparse text form, e.g. `1/3 - 11/2*X + X^3`.
impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            if i == 0 {
                write!(f, "{}", fmt_coeff(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_coeff(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn trims_and_degree() {
        let p = RatPoly::new(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(RatPoly::zero().degree(), None);
        assert_eq!(RatPoly::x().degree(), Some(1));
    }

    #[test]
    fn eval_and_derivative() {
        // 1/3 - 11/2 X + X^3
        let p = RatPoly::new(vec![rat(1, 3), rat(-11, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(p.eval(&rat(2, 1)), rat(1, 3) - rat(11, 1) + rat(8, 1));
        assert_eq!(p.derivative(), RatPoly::new(vec![rat(-11, 2), rat(0, 1), rat(3, 1)]));
    }

    #[test]
    fn display_sparse() {
        let p = RatPoly::new(vec![rat(1, 3), rat(-11, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(p.to_string(), "1/3 - 11/2*X + X^3");
        assert_eq!(RatPoly::from_i64(&[0, -1]).to_string(), "-X");
        assert_eq!(RatPoly::zero().to_string(), "0");
    }
}
