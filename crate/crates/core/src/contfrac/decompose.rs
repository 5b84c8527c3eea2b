use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cf::{certified_prefix, certified_prefix_until, convergents};
use super::real::{ProgrammaticReal, RealKind};
use crate::arith::{add_rat, cmp_rat, dist_frac_mul, from_biguint, log2_biguint, rat_int, to_biguint};
use crate::error::{Error, Result};

/// How many times an operation may deepen a truncation before giving up.
pub const DEEPEN_ATTEMPTS: usize = 40;

/// Shallowest truncation adaptive operations start from.
pub fn initial_depth(r: &ProgrammaticReal) -> usize {
    match r.kind() {
        RealKind::Rational(_) => 0,
        RealKind::Dyadic(_) => 1,
        RealKind::Quotients(_) => 8,
    }
}

/// Next truncation depth to try when an enclosure is too wide.
pub fn next_depth(r: &ProgrammaticReal, depth: usize) -> usize {
    match r.kind() {
        RealKind::Rational(_) => depth,
        RealKind::Dyadic(_) => depth + 1,
        RealKind::Quotients(_) => (depth * 2).max(depth + 8),
    }
}

/// `x = m0 * x0` with `y0/x0` the best convergent below `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub x0: BigUint,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub y0: BigInt,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub m0: BigUint,
}

pub fn decompose(zeta: &ProgrammaticReal, x: &BigUint) -> Result<Decomposition> {
    if x.is_zero() {
        return Err(Error::InvalidParameter("x must be positive".into()));
    }
    let xr = rat_int(from_biguint(x.clone()));
    let xi = from_biguint(x.clone());
    let bound = BigRational::new(BigInt::one(), from_biguint(x * 2u32));
    let mut depth = initial_depth(zeta);
    for _ in 0..DEEPEN_ATTEMPTS {
        let enc = zeta.enclosure_at(depth)?;
        let d = dist_frac_mul(&enc.center, x);
        let w = &enc.radius * &xr;
        if cmp_rat(&add_rat(&d, &w), &bound).is_lt() {
            let conv = convergents(&certified_prefix_until(&enc, Some(&xi)));
            let exhausted = zeta.is_rational() || conv.last().is_some_and(|c| c.q > xi);
            if exhausted {
                let best = conv
                    .iter()
                    .rev()
                    .find(|c| c.q <= xi)
                    .expect("q_0 = 1 never exceeds x");
                let x0 = to_biguint(&best.q);
                let (m0, rem) = x.div_rem(&x0);
                if !rem.is_zero() {
                    return Err(Error::Precondition(format!(
                        "convergent denominator {x0} does not divide {x}"
                    )));
                }
                return Ok(Decomposition {
                    x0,
                    y0: best.p.clone(),
                    m0,
                });
            }
        } else if cmp_rat(&d, &w).is_gt() && cmp_rat(&add_rat(&d, &-&w), &bound).is_ge() {
            return Err(Error::Precondition(format!(
                "||zeta * {x}|| is not below 1/(2x)"
            )));
        }
        let next = next_depth(zeta, depth);
        if next == depth {
            break;
        }
        depth = next;
    }
    Err(Error::Enclosure { q: x.clone() })
}

/// Estimated one-dimensional exponent of a real.
#[derive(Clone, Debug, Serialize)]
pub struct Lambda1Estimate {
    pub rational: bool,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub estimate: f64,
    /// Exact value for dyadic schedules.
    #[serde(serialize_with = "crate::report::ser_opt_rat")]
    pub exact: Option<BigRational>,
    #[serde(serialize_with = "crate::report::ser_f64_vec")]
    pub trace: Vec<f64>,
}

/// Per-level exponents `log q_{n+1} / log q_n` (or `b_{n+1}/b_n - 1`) for
/// `n = 1..=depth`; the estimate is the largest of the second half of them.
pub fn lambda1_estimate(r: &ProgrammaticReal, depth: usize) -> Result<Lambda1Estimate> {
    if depth < 2 {
        return Err(Error::InsufficientDepth("lambda1 estimate needs depth >= 2".into()));
    }
    let tail_start = depth / 2;
    match r.kind() {
        RealKind::Dyadic(s) => {
            let b = s.exponents(depth + 1)?;
            let exact: Vec<BigRational> = b
                .windows(2)
                .map(|w| BigRational::new(BigInt::from(w[1] - w[0]), BigInt::from(w[0])))
                .collect();
            let best = exact[tail_start..].iter().max().expect("non-empty").clone();
            Ok(Lambda1Estimate {
                rational: false,
                estimate: crate::arith::ratio_to_f64(&best),
                exact: Some(best),
                trace: exact.iter().map(crate::arith::ratio_to_f64).collect(),
            })
        }
        RealKind::Rational(_) | RealKind::Quotients(_) => {
            let qs = match r.kind() {
                RealKind::Quotients(s) => s.quotients(depth + 2),
                _ => certified_prefix(&r.enclosure()?),
            };
            let conv = convergents(&qs);
            let mut trace = Vec::new();
            for w in conv.windows(2) {
                let (a, b) = (to_biguint(&w[0].q), to_biguint(&w[1].q));
                if a <= BigUint::one() {
                    continue;
                }
                trace.push(log2_biguint(&b) / log2_biguint(&a));
                if trace.len() == depth {
                    break;
                }
            }
            if r.is_rational() {
                trace.push(f64::INFINITY);
                return Ok(Lambda1Estimate {
                    rational: true,
                    estimate: f64::INFINITY,
                    exact: None,
                    trace,
                });
            }
            let from = tail_start.min(trace.len().saturating_sub(1));
            let estimate = trace[from..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(Lambda1Estimate {
                rational: false,
                estimate,
                exact: None,
                trace,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::contfrac::real::QuotientStream;

    fn sqrt2_minus_one() -> ProgrammaticReal {
        ProgrammaticReal::quotients(
            QuotientStream::new(BigInt::zero(), vec![], vec![BigUint::from(2u32)]).unwrap(),
        )
    }

    #[test]
    fn decomposes_convergent_denominator() {
        let d = decompose(&sqrt2_minus_one(), &BigUint::from(29u32)).unwrap();
        assert_eq!((d.x0, d.y0, d.m0), (BigUint::from(29u32), BigInt::from(12), BigUint::one()));
    }

    #[test]
    fn decomposes_exact_multiple() {
        let z = ProgrammaticReal::from_rational(rat(1, 10));
        let d = decompose(&z, &BigUint::from(10u32)).unwrap();
        assert_eq!((d.x0, d.y0, d.m0), (BigUint::from(10u32), BigInt::one(), BigUint::one()));
        let d = decompose(&z, &BigUint::from(30u32)).unwrap();
        assert_eq!(d.m0, BigUint::from(3u32));
    }

    #[test]
    fn decomposes_dyadic_multiple() {
        let z = ProgrammaticReal::dyadic_exponents(&[2, 16, 128, 1024]).unwrap();
        let x = BigUint::from(3u32) << 16;
        let d = decompose(&z, &x).unwrap();
        assert_eq!(d.x0, BigUint::one() << 16);
        assert_eq!(d.m0, BigUint::from(3u32));
    }

    #[test]
    fn rejects_bad_precondition() {
        let e = decompose(&sqrt2_minus_one(), &BigUint::from(7u32)).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn lambda1_of_geometric_schedule() {
        let z = ProgrammaticReal::dyadic(
            super::super::real::DyadicSeries::geometric(2, rat(8, 1), 2).unwrap(),
        );
        let e = lambda1_estimate(&z, 4).unwrap();
        assert_eq!(e.exact, Some(rat(7, 1)));
        assert!(lambda1_estimate(&z, 1).is_err());
    }

    #[test]
    fn lambda1_of_golden_and_rational() {
        let g = lambda1_estimate(&ProgrammaticReal::golden_conjugate(), 60).unwrap();
        assert!(!g.rational && g.estimate > 1.0 && g.estimate < 1.05, "{}", g.estimate);
        let r = lambda1_estimate(&ProgrammaticReal::from_rational(rat(355, 113)), 4).unwrap();
        assert!(r.rational && r.estimate.is_infinite());
    }
}
