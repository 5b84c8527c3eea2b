use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::psi::PsiSpec;
use crate::arith::{dist_frac, from_biguint, log2_biguint, log2_ratio, rat_int, ratio_to_f64, to_biguint};
use crate::contfrac::{DyadicSeries, DyadicTerm, ProgrammaticReal};
use crate::engine::{decide_below, eval_error_sharp, poly_enclosure, ScanKernel, CHUNK};
use crate::error::{Error, Result};
use crate::polycurve::{diameter_of, integerize, type_vector, Curve};

/// Dyadic real with `b_{n+1} = floor((L+1) b_n)`, so that `lambda_1 = L`.
pub fn make_lambda1(l: &BigRational, b1: u64, depth: usize) -> Result<ProgrammaticReal> {
    if *l <= BigRational::one() {
        return Err(Error::Precondition(format!("target lambda_1 must exceed 1, got {l}")));
    }
    if b1 < 2 {
        return Err(Error::Precondition(format!("seed exponent must be at least 2, got {b1}")));
    }
    let series = DyadicSeries::geometric(b1, l + BigRational::one(), depth.max(2))?;
    Ok(ProgrammaticReal::dyadic(series).with_depth(depth.max(2)))
}

/// One constructed level: witness `q = K D x0^{d_k}` with `x0 = 2^{b}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelTranscript {
    pub level: usize,
    pub b: u64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub log2_q: f64,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub err_lo: BigRational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub err_hi: BigRational,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub log2_psi: f64,
    /// `err / Psi(q)` at the truncation.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub ratio: f64,
    /// `c Psi(q) <= err(q) <= Psi(q)` holds exactly for the constructed real.
    pub sandwich: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Construction {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub zeta: ProgrammaticReal,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub psi: PsiSpec,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub c: BigRational,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub witnesses: Vec<BigUint>,
    pub levels: Vec<LevelTranscript>,
    /// Smallest `err / Psi` over the levels.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub achieved_c: f64,
}

impl Construction {
    pub fn all_sandwiched(&self) -> bool {
        self.levels.iter().all(|l| l.sandwich)
    }
}

/// `c < 1 / (D K)` for the integerized curve.
pub fn check_c_hypothesis(curve: &Curve, c: &BigRational) -> Result<()> {
    let ic = integerize(curve);
    let dk = rat_int(&ic.d * &ic.k_total);
    if c.is_negative() || c * &dk >= BigRational::one() {
        return Err(Error::Hypothesis(format!(
            "c = {} must satisfy 0 <= c < 1/(D K) = 1/{}",
            crate::report::fmt_rat(c),
            crate::report::fmt_rat(&dk)
        )));
    }
    Ok(())
}

fn diameter(curve: &Curve) -> usize {
    diameter_of(&type_vector(curve))
}

const MANTISSA_BITS: i64 = 6;
const ATTEMPTS: usize = 64;

/// Greedy dyadic construction with `c Psi(q_n) <= err(q_n) <= Psi(q_n)` at
/// `q_n = K D 2^{b_n d_k}` for `n = 1..=depth`.
pub fn make_prescribed_psi(
    curve: &Curve,
    psi: &PsiSpec,
    c: &BigRational,
    depth: usize,
    b1: u64,
) -> Result<Construction> {
    let t = diameter(curve);
    if t < 1 {
        return Err(Error::Precondition("construction needs diameter t >= 1".into()));
    }
    psi.validate_for(t)?;
    check_c_hypothesis(curve, c)?;
    if depth == 0 || b1 < 1 {
        return Err(Error::InvalidParameter("need depth >= 1 and seed exponent >= 1".into()));
    }
    let ic = integerize(curve);
    let kd = to_biguint(&(&ic.k_total * &ic.d));
    let d_k = curve.max_degree();
    let cf = ratio_to_f64(c);
    let band_lo = cf + (1.0 - cf) / 8.0;
    let band_hi = 1.0 - (1.0 - cf) / 8.0;
    let mid = (band_lo + band_hi) / 2.0;

    let mut terms = vec![DyadicTerm::unit(b1)];
    let mut sum = terms[0].value();
    let mut levels = Vec::new();
    for level in 1..=depth {
        let last = terms.last().expect("non-empty").clone();
        let q = &kd * num_traits::pow(BigUint::one() << last.exponent, d_k);
        let qr = rat_int(from_biguint(q.clone()));
        let slope = curve
            .polys()
            .iter()
            .map(|p| p.derivative().eval(&sum).abs())
            .max()
            .expect("X present");
        let log2_psi = psi.log2_at(&q);
        let mut log2_term = log2_psi + mid.log2() - log2_biguint(&q) - log2_ratio(&slope);
        let mut chosen = None;
        for _ in 0..ATTEMPTS {
            let b = (-log2_term).ceil() as i64 + MANTISSA_BITS;
            if b <= last.exponent as i64 {
                return Err(Error::Infeasible {
                    level,
                    reason: format!(
                        "next term 2^{log2_term:.3} is not below the previous term 2^-{}",
                        last.exponent
                    ),
                });
            }
            let b = b as u64;
            let mut m = (log2_term + b as f64).exp2().round() as u64;
            if m.is_even() {
                m += 1;
            }
            let term = DyadicTerm {
                mantissa: BigUint::from(m),
                exponent: b,
            };
            // m 2^-b <= m_last 2^-b_last / 2
            if (&term.mantissa << (last.exponent + 1)) > (&last.mantissa << b) {
                return Err(Error::Infeasible {
                    level,
                    reason: format!(
                        "term {m}*2^-{b} exceeds half of the previous term {}*2^-{}",
                        last.mantissa, last.exponent
                    ),
                });
            }
            let next_sum = &sum + term.value();
            let err = curve
                .polys()
                .iter()
                .map(|p| dist_frac(&(&qr * p.eval(&next_sum))))
                .max()
                .expect("X present");
            if err.is_zero() {
                log2_term += 1.0;
                continue;
            }
            let ratio = (log2_ratio(&err) - log2_psi).exp2();
            if (band_lo..=band_hi).contains(&ratio) {
                chosen = Some((term, next_sum, ratio));
                break;
            }
            log2_term += (mid / ratio).log2();
        }
        let (term, next_sum, ratio) = chosen.ok_or_else(|| Error::Infeasible {
            level,
            reason: format!("no odd mantissa puts err/Psi inside [{band_lo:.4}, {band_hi:.4}]"),
        })?;
        levels.push(LevelTranscript {
            level,
            b: last.exponent,
            log2_q: log2_biguint(&q),
            q,
            err_lo: BigRational::zero(),
            err_hi: BigRational::zero(),
            log2_psi,
            ratio,
            sandwich: false,
        });
        terms.push(term);
        sum = next_sum;
    }
    let n = terms.len();
    let growth = BigRational::new(
        BigInt::from(terms[n - 1].exponent),
        BigInt::from(terms[n - 2].exponent),
    )
    .max(rat_int(BigInt::from(2)));
    let zeta = ProgrammaticReal::dyadic(DyadicSeries::new(terms, growth)?);
    for l in levels.iter_mut() {
        let e = eval_error_sharp(curve, &zeta, &l.q)?;
        l.sandwich = psi.compare(&e.lo, &l.q, c) != std::cmp::Ordering::Less
            && psi.at_most(&e.hi, &l.q, &BigRational::one());
        l.err_lo = e.lo;
        l.err_hi = e.hi;
    }
    let achieved_c = levels.iter().map(|l| l.ratio).fold(f64::INFINITY, f64::min);
    Ok(Construction {
        witnesses: levels.iter().map(|l| l.q.clone()).collect(),
        zeta,
        psi: psi.clone(),
        c: c.clone(),
        levels,
        achieved_c,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub c: BigRational,
    pub q_window: u64,
    /// First `q` scanned; `q = 1` is skipped because `||P_j(zeta)|| <= 1/2 <= c Psi(1)`
    /// holds for every real once `c >= 1/2`.
    pub scan_from: u64,
    pub witnesses_ok: Vec<bool>,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub foreign: Vec<BigUint>,
}

impl MembershipReport {
    pub fn passes(&self) -> bool {
        self.witnesses_ok.iter().all(|&b| b) && self.foreign.is_empty()
    }
}

/// Witnesses satisfy `err <= Psi`, and no other `2 <= q <= q_window` has
/// `err <= c Psi`.
pub fn verify_membership(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    psi: &PsiSpec,
    c: &BigRational,
    q_window: u64,
    witnesses: &[BigUint],
) -> Result<MembershipReport> {
    check_c_hypothesis(curve, c)?;
    let one = BigRational::one();
    let witnesses_ok = witnesses
        .par_iter()
        .map(|q| decide_below(curve, zeta, q, |v| psi.at_most(v, q, &one)).map(|(ok, _)| ok))
        .collect::<Result<Vec<bool>>>()?;
    let scan_from = 2u64;
    let foreign = if c.is_zero() || q_window < scan_from {
        Vec::new()
    } else {
        let (enc, _) = crate::engine::scan_enclosure(curve, zeta, q_window)?;
        let values: Vec<_> = curve.polys().iter().map(|p| poly_enclosure(p, &enc)).collect();
        let kernel = ScanKernel::new(&values);
        let log2_c = log2_ratio(c);
        let log2_den = log2_biguint(kernel.den());
        let mut ranges = Vec::new();
        let mut a = scan_from;
        while a <= q_window {
            let b = a.saturating_add(CHUNK).min(q_window + 1);
            ranges.push((a, b));
            a = b;
        }
        let hits: Vec<u64> = ranges
            .par_iter()
            .map(|&(a, b)| {
                let mut out = Vec::new();
                kernel.run(a, b, |q, e| {
                    let (lo, _) = kernel.bounds(q, e);
                    let bound = log2_c + psi.log2_at(&BigUint::from(q));
                    if lo.is_zero() || log2_biguint(&lo) - log2_den <= bound + 1.0 {
                        out.push(q);
                    }
                });
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        let flagged = hits
            .par_iter()
            .map(|&q| {
                let qb = BigUint::from(q);
                if witnesses.contains(&qb) {
                    return Ok(None);
                }
                let (below, _) = decide_below(curve, zeta, &qb, |v| psi.at_most(v, &qb, c))?;
                Ok(below.then_some(qb))
            })
            .collect::<Result<Vec<Option<BigUint>>>>()?;
        flagged.into_iter().flatten().collect()
    };
    Ok(MembershipReport {
        c: c.clone(),
        q_window,
        scan_from,
        witnesses_ok,
        foreign,
    })
}
