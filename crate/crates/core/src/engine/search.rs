use std::io::Write;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::certify::{certify_with, CertContext, CertStatus};
use super::eval::{eval_error_sharp, poly_enclosure, ErrorEnclosure};
use super::kernel::{chunks, ScanKernel};
use crate::arith::{exponent_of, to_biguint};
use crate::contfrac::{
    cf_of_rational, convergents, decompose, next_depth, Decomposition, Enclosure,
    ProgrammaticReal, RealKind, DEEPEN_ATTEMPTS,
};
use crate::error::{Error, Result};
use crate::polycurve::{integerize, Curve};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxRecord {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub err: BigRational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub err_lo: BigRational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub err_hi: BigRational,
    #[serde(serialize_with = "crate::report::ser_opt_f64")]
    pub exponent: Option<f64>,
    pub decomp: Option<Decomposition>,
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub x1: Option<BigUint>,
    pub cert: CertStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    Exhaustive,
    Structural,
    Combined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub method: SearchMethod,
    pub q_max: Option<u64>,
    pub depth: Option<usize>,
    pub records: Vec<ApproxRecord>,
    /// Largest exponent over the evaluated `q >= 2^(THETA_MIN_BITS - 1)`.
    #[serde(serialize_with = "crate::report::ser_opt_f64")]
    pub theta_estimate: Option<f64>,
}

impl SearchReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv output: {e}"));
        out.write_record(["q", "err_num", "err_den", "exponent", "x0", "M0", "x1", "cert"])
            .map_err(io)?;
        for r in &self.records {
            let (x0, m0) = match &r.decomp {
                Some(d) => (d.x0.to_string(), d.m0.to_string()),
                None => (String::new(), String::new()),
            };
            out.write_record([
                r.q.to_string(),
                r.err.numer().to_string(),
                r.err.denom().to_string(),
                r.exponent.map(crate::report::fmt_f64).unwrap_or_default(),
                x0,
                m0,
                r.x1.as_ref().map(ToString::to_string).unwrap_or_default(),
                r.cert.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::InvalidParameter(format!("csv output: {e}")))?;
        Ok(())
    }

    pub fn record_qs(&self) -> Vec<BigUint> {
        self.records.iter().map(|r| r.q.clone()).collect()
    }
}

/// Bit length below which a `q` does not enter the exponent estimate: for
/// small `q` the constant in `err ~ C q^-theta` swamps the exponent. A fixed
/// floor keeps the estimate monotone in both the depth and `Q_max`.
pub const THETA_MIN_BITS: u64 = 10;

fn exponent(e: &ErrorEnclosure) -> Option<f64> {
    exponent_of(&e.value, &e.q)
}

fn build_record(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    ctx: Option<&CertContext>,
    q: &BigUint,
) -> Result<ApproxRecord> {
    let err = eval_error_sharp(curve, zeta, q)?;
    let decomp = match decompose(zeta, q) {
        Ok(d) => Some(d),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    let cert = match ctx {
        Some(ctx) => {
            let rule = ctx.rule(None)?;
            certify_with(ctx, &rule, zeta, q)?.status
        }
        None => CertStatus::NotApplicable,
    };
    let x1 = match (&decomp, ctx) {
        (Some(d), Some(ctx)) => Some(ctx.x1_of(&d.x0)),
        (Some(d), None) => {
            let delta = to_biguint(&integerize(curve).delta);
            Some(&d.x0 / d.x0.gcd(&delta))
        }
        _ => None,
    };
    Ok(ApproxRecord {
        exponent: exponent(&err),
        q: q.clone(),
        err: err.value,
        err_lo: err.lo,
        err_hi: err.hi,
        decomp,
        x1,
        cert,
    })
}

fn cert_context(curve: &Curve, zeta: &ProgrammaticReal) -> Result<Option<CertContext>> {
    let ctx = CertContext::new(curve, zeta)?;
    Ok(if ctx.t >= 1 { Some(ctx) } else { None })
}

enum Merge {
    Records(Vec<u64>),
    Ambiguous(u64),
}

fn merge_candidates(kernel: &ScanKernel, cands: Vec<(u64, BigUint)>) -> Merge {
    let mut out = Vec::new();
    let mut min_lo: Option<BigUint> = None;
    let mut min_hi: Option<BigUint> = None;
    for (q, e) in cands {
        let (lo, hi) = kernel.bounds(q, &e);
        let record = match (&min_lo, &min_hi) {
            (None, _) | (_, None) => true,
            (Some(ml), Some(mh)) => {
                if hi < *ml {
                    true
                } else if lo >= *mh {
                    false
                } else {
                    return Merge::Ambiguous(q);
                }
            }
        };
        if record {
            out.push(q);
        }
        if min_lo.as_ref().is_none_or(|m| lo < *m) {
            min_lo = Some(lo);
        }
        if min_hi.as_ref().is_none_or(|m| hi < *m) {
            min_hi = Some(hi);
        }
    }
    Merge::Records(out)
}

/// Every `q <= q_max` whose error is strictly below that of all smaller `q`.
pub fn record_qs(curve: &Curve, zeta: &ProgrammaticReal, q_max: u64) -> Result<Vec<u64>> {
    let (mut enc, mut depth) = super::certify::scan_enclosure(curve, zeta, q_max)?;
    for _ in 0..DEEPEN_ATTEMPTS {
        let values: Vec<Enclosure> = curve.polys().iter().map(|p| poly_enclosure(p, &enc)).collect();
        let kernel = ScanKernel::new(&values);
        let per_chunk: Vec<Vec<(u64, BigUint)>> = chunks(q_max)
            .par_iter()
            .map(|&(a, b)| {
                let mut local: Vec<(u64, BigUint)> = Vec::new();
                let mut local_hi: Option<BigUint> = None;
                kernel.run(a, b, |q, e| {
                    let (lo, hi) = kernel.bounds(q, e);
                    if local_hi.as_ref().is_none_or(|m| lo < *m) {
                        local.push((q, e.clone()));
                    }
                    if local_hi.as_ref().is_none_or(|m| hi < *m) {
                        local_hi = Some(hi);
                    }
                });
                local
            })
            .collect();
        match merge_candidates(&kernel, per_chunk.into_iter().flatten().collect()) {
            Merge::Records(r) => return Ok(r),
            Merge::Ambiguous(q) => {
                let next = next_depth(zeta, depth);
                if next == depth {
                    return Err(Error::Enclosure { q: BigUint::from(q) });
                }
                depth = next;
                enc = zeta.enclosure_at(next)?;
            }
        }
    }
    Err(Error::Enclosure { q: BigUint::from(q_max) })
}

fn finish(
    method: SearchMethod,
    q_max: Option<u64>,
    depth: Option<usize>,
    mut evaluated: Vec<ApproxRecord>,
) -> SearchReport {
    evaluated.sort_by(|a, b| a.q.cmp(&b.q));
    evaluated.dedup_by(|a, b| a.q == b.q);
    let theta_estimate = evaluated
        .iter()
        .filter(|r| r.q.bits() >= THETA_MIN_BITS)
        .filter_map(|r| r.exponent)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let mut records = Vec::new();
    let mut best: Option<BigRational> = None;
    for r in evaluated {
        if best.as_ref().is_none_or(|b| r.err < *b) {
            best = Some(r.err.clone());
            records.push(r);
        }
    }
    SearchReport {
        method,
        q_max,
        depth,
        records,
        theta_estimate,
    }
}

fn build_records(curve: &Curve, zeta: &ProgrammaticReal, qs: &[BigUint]) -> Result<Vec<ApproxRecord>> {
    let ctx = cert_context(curve, zeta)?;
    qs.par_iter()
        .map(|q| build_record(curve, zeta, ctx.as_ref(), q))
        .collect()
}

pub fn exhaustive_search(curve: &Curve, zeta: &ProgrammaticReal, q_max: u64) -> Result<SearchReport> {
    if q_max < 1 {
        return Err(Error::InvalidParameter("Q_max must be at least 1".into()));
    }
    let qs: Vec<BigUint> = record_qs(curve, zeta, q_max)?.into_iter().map(BigUint::from).collect();
    let records = build_records(curve, zeta, &qs)?;
    Ok(finish(SearchMethod::Exhaustive, Some(q_max), None, records))
}

/// Reduced denominators `x0` of the first `depth` levels of the real.
pub fn level_denominators(zeta: &ProgrammaticReal, depth: usize) -> Result<Vec<BigUint>> {
    let mut out: Vec<BigUint> = Vec::new();
    match zeta.kind() {
        RealKind::Dyadic(s) => {
            for n in 1..=depth {
                let c = s.enclosure(n)?.center;
                out.push(to_biguint(c.denom()));
            }
        }
        RealKind::Quotients(s) => {
            let conv = convergents(&s.quotients(depth));
            out.extend(conv.iter().skip(1).map(|c| to_biguint(&c.q)));
        }
        RealKind::Rational(r) => {
            let conv = convergents(&cf_of_rational(r));
            out.extend(conv.iter().skip(1).take(depth).map(|c| to_biguint(&c.q)));
        }
    }
    out.retain(|x| *x > BigUint::one());
    out.dedup();
    Ok(out)
}

/// Candidates `x0^{d_k}` (and `K D x0^{d_k}` unless the curve is monic and
/// integral) over the first `depth` levels.
pub fn structural_candidates(curve: &Curve, zeta: &ProgrammaticReal, depth: usize) -> Result<Vec<BigUint>> {
    let ic = integerize(curve);
    let d_k = curve.max_degree();
    let kd = to_biguint(&(&ic.k_total * &ic.d));
    let extra = !(ic.is_monic() && curve.is_integral()) && !kd.is_one();
    let mut qs = Vec::new();
    for x0 in level_denominators(zeta, depth)? {
        let p = num_traits::pow(x0, d_k);
        if extra {
            qs.push(&p * &kd);
        }
        qs.push(p);
    }
    qs.sort();
    qs.dedup();
    Ok(qs)
}

pub fn structural_search(curve: &Curve, zeta: &ProgrammaticReal, depth: usize) -> Result<SearchReport> {
    let qs = structural_candidates(curve, zeta, depth)?;
    let records = build_records(curve, zeta, &qs)?;
    Ok(finish(SearchMethod::Structural, None, Some(depth), records))
}

/// Lower estimate of the simultaneous exponent from the union of the
/// structural candidates and the exhaustive records.
pub fn theta_estimate(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    depth: usize,
    q_max: u64,
) -> Result<SearchReport> {
    if zeta.is_rational() {
        return Err(Error::Precondition("λ₁ infinite: rational input".into()));
    }
    let mut qs = structural_candidates(curve, zeta, depth)?;
    if q_max >= 1 {
        qs.extend(record_qs(curve, zeta, q_max)?.into_iter().map(BigUint::from));
    }
    qs.sort();
    qs.dedup();
    let records = build_records(curve, zeta, &qs)?;
    Ok(finish(
        SearchMethod::Combined,
        (q_max >= 1).then_some(q_max),
        Some(depth),
        records,
    ))
}
