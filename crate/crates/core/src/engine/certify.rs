use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::eval::{decide_below, eval_at, eval_error_sharp, poly_enclosure, ErrorEnclosure};
use super::kernel::{chunks, ScanKernel};
use crate::arith::{cmp_with_neg_power, from_biguint, nearest_int, rat, rat_int, to_biguint};
use crate::contfrac::{
    convergent_membership, decompose, initial_depth, next_depth, Decomposition, Enclosure, Membership,
    ProgrammaticReal, DEEPEN_ATTEMPTS,
};
use crate::error::{Error, Result};
use crate::polycurve::{canonical_sort, c0_constant_abs, diameter_of, integerize, r_index_of, type_vector, Curve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CertStatus {
    #[serde(rename = "not-applicable")]
    NotApplicable,
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "VIOLATION")]
    Violation,
}

impl std::fmt::Display for CertStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertStatus::NotApplicable => "not-applicable",
            CertStatus::Pass => "pass",
            CertStatus::Violation => "VIOLATION",
        })
    }
}

/// Constants of the sorted, integerized curve that every certificate needs.
#[derive(Clone, Debug)]
pub struct CertContext {
    pub curve: Curve,
    pub type_vec: Vec<usize>,
    pub t: usize,
    pub d_k: usize,
    pub delta: BigInt,
    pub d: BigInt,
    pub c0: BigRational,
}

impl CertContext {
    pub fn new(curve: &Curve, zeta: &ProgrammaticReal) -> Result<Self> {
        let (sorted, _) = canonical_sort(curve);
        let ic = integerize(&sorted);
        let type_vec = type_vector(&ic.curve);
        let enc = zeta.enclosure_at(initial_depth(zeta))?;
        let abs = enc.center.abs() + &enc.radius;
        let c0 = c0_constant_abs(&sorted, &abs);
        Ok(CertContext {
            t: diameter_of(&type_vec),
            d_k: ic.d_max,
            type_vec,
            curve: ic.curve,
            delta: ic.delta,
            d: ic.d,
            c0,
        })
    }

    /// Divisibility rule: threshold exponent `tau` and the degree `d_r` whose
    /// power of `x_1` must divide `q`.
    pub fn rule(&self, tau: Option<&BigRational>) -> Result<CertRule> {
        if self.t < 1 {
            return Err(Error::Precondition(format!(
                "certificate needs diameter t >= 1, curve has t = {}",
                self.t
            )));
        }
        match tau {
            None => Ok(CertRule {
                tau: rat_int(BigInt::from(self.t)),
                degree: self.d_k,
                r: self.type_vec.len(),
            }),
            Some(tau) => {
                if *tau < BigRational::one() {
                    return Err(Error::InvalidParameter(format!("tau must be >= 1, got {tau}")));
                }
                let (r, d_r) = r_index_of(&self.type_vec, tau);
                Ok(CertRule {
                    tau: tau.clone(),
                    degree: d_r,
                    r,
                })
            }
        }
    }

    pub fn x1_of(&self, x0: &BigUint) -> BigUint {
        let g = x0.gcd(&to_biguint(&self.delta));
        x0 / g
    }

    fn below_threshold(&self, rule: &CertRule, q: &BigUint, v: &BigRational) -> bool {
        let scaled = v / &self.c0;
        cmp_with_neg_power(&scaled, q, &rule.tau) == std::cmp::Ordering::Less
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertRule {
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub tau: BigRational,
    pub degree: usize,
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub status: CertStatus,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub x0: Option<BigUint>,
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub y0: Option<BigInt>,
    #[serde(serialize_with = "crate::report::ser_opt_display")]
    pub x1: Option<BigUint>,
    pub err: ErrorEnclosure,
}

/// Threshold test and divisibility check at one `q` under `rule`.
pub fn certify_with(ctx: &CertContext, rule: &CertRule, zeta: &ProgrammaticReal, q: &BigUint) -> Result<Certificate> {
    let (applies, err) = decide_below(&ctx.curve, zeta, q, |v| ctx.below_threshold(rule, q, v))?;
    if !applies {
        return Ok(Certificate {
            status: CertStatus::NotApplicable,
            q: q.clone(),
            x0: None,
            y0: None,
            x1: None,
            err,
        });
    }
    let enc = zeta.enclosure_at(err.depth)?;
    let y = nearest_int(&(&enc.center * rat_int(from_biguint(q.clone()))));
    let qi = from_biguint(q.clone());
    let g = y.gcd(&qi);
    let (x0, y0) = if g.is_zero() {
        (BigUint::one(), BigInt::zero())
    } else {
        (to_biguint(&(&qi / &g)), &y / &g)
    };
    let x1 = ctx.x1_of(&x0);
    let power = num_traits::pow(x1.clone(), rule.degree);
    let status = if (q % &power).is_zero() {
        CertStatus::Pass
    } else {
        CertStatus::Violation
    };
    Ok(Certificate {
        status,
        q: q.clone(),
        x0: Some(x0),
        y0: Some(y0),
        x1: Some(x1),
        err,
    })
}

/// `max_j ||P_j(zeta) q|| < C_0 q^{-t}` implies `x_1^{d_k} | q`.
pub fn certify_divisibility(curve: &Curve, zeta: &ProgrammaticReal, q: &BigUint) -> Result<CertStatus> {
    let ctx = CertContext::new(curve, zeta)?;
    let rule = ctx.rule(None)?;
    Ok(certify_with(&ctx, &rule, zeta, q)?.status)
}

/// Variant with threshold `C_0 q^{-tau}` and conclusion `x_1^{d_r} | q`.
pub fn certify_divisibility_tau(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    q: &BigUint,
    tau: &BigRational,
) -> Result<CertStatus> {
    let ctx = CertContext::new(curve, zeta)?;
    let rule = ctx.rule(Some(tau))?;
    Ok(certify_with(&ctx, &rule, zeta, q)?.status)
}

/// Is every `Q_j(y0/x0)` a convergent of `Q_j(zeta)`?
pub fn convergent_image(ctx: &CertContext, zeta: &ProgrammaticReal, x0: &BigUint, y0: &BigInt) -> Result<bool> {
    let point = BigRational::new(y0.clone(), from_biguint(x0.clone()));
    let mut pending: Vec<usize> = (0..ctx.curve.k()).collect();
    let mut depth = initial_depth(zeta);
    for _ in 0..DEEPEN_ATTEMPTS {
        let enc = zeta.enclosure_at(depth)?;
        let mut still = Vec::new();
        for &j in &pending {
            let p = &ctx.curve.polys()[j];
            match convergent_membership(&p.eval(&point), &poly_enclosure(p, &enc)) {
                Membership::Yes => {}
                Membership::No => return Ok(false),
                Membership::Undecided => still.push(j),
            }
        }
        if still.is_empty() {
            return Ok(true);
        }
        pending = still;
        let next = next_depth(zeta, depth);
        if next == depth {
            break;
        }
        depth = next;
    }
    Err(Error::Enclosure { q: x0.clone() })
}

/// The three inequalities `x >= x0^{d_k}/D`, `M0 >= x0^{d_k-1}/D` and
/// `|zeta x0 - y0| <= x0^{-d_k T - d_k + 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCheck {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub t_param: BigRational,
    pub decomposition: Option<Decomposition>,
    pub x_bound: bool,
    pub m0_bound: bool,
    pub dist_bound: bool,
    /// Set when the hypothesis behind the inequalities was not established.
    pub advisory: bool,
}

impl GrowthCheck {
    pub fn all_hold(&self) -> bool {
        self.x_bound && self.m0_bound && self.dist_bound
    }
}

fn growth_inequalities(
    ctx: &CertContext,
    zeta: &ProgrammaticReal,
    q: &BigUint,
    t_param: &BigRational,
    advisory: bool,
) -> Result<GrowthCheck> {
    let dec = match decompose(zeta, q) {
        Ok(d) => d,
        Err(Error::Precondition(_)) => {
            return Ok(GrowthCheck {
                q: q.clone(),
                t_param: t_param.clone(),
                decomposition: None,
                x_bound: false,
                m0_bound: false,
                dist_bound: false,
                advisory: true,
            })
        }
        Err(e) => return Err(e),
    };
    let d = to_biguint(&ctx.d);
    let top = num_traits::pow(dec.x0.clone(), ctx.d_k);
    let x_bound = q * &d >= top;
    let m0_bound = &dec.m0 * &d >= num_traits::pow(dec.x0.clone(), ctx.d_k - 1);
    let dk = rat_int(BigInt::from(ctx.d_k));
    let e = &dk * t_param + &dk - BigRational::one();
    let x0r = rat_int(from_biguint(dec.x0.clone()));
    let mut depth = initial_depth(zeta);
    let mut dist_bound = None;
    for _ in 0..DEEPEN_ATTEMPTS {
        let enc = zeta.enclosure_at(depth)?;
        let c = (&enc.center * &x0r - rat_int(dec.y0.clone())).abs();
        let w = &enc.radius * &x0r;
        let hi = &c + &w;
        let lo = if c > w { &c - &w } else { BigRational::zero() };
        if hi.is_zero() || cmp_with_neg_power(&hi, &dec.x0, &e) != std::cmp::Ordering::Greater {
            dist_bound = Some(true);
            break;
        }
        if !lo.is_zero() && cmp_with_neg_power(&lo, &dec.x0, &e) == std::cmp::Ordering::Greater {
            dist_bound = Some(false);
            break;
        }
        let next = next_depth(zeta, depth);
        if next == depth {
            break;
        }
        depth = next;
    }
    let dist_bound = dist_bound.ok_or_else(|| Error::Enclosure { q: q.clone() })?;
    Ok(GrowthCheck {
        q: q.clone(),
        t_param: t_param.clone(),
        decomposition: Some(dec),
        x_bound,
        m0_bound,
        dist_bound,
        advisory,
    })
}

/// Checks the three inequalities at `q` for parameter `t_param`.
///
/// The result is non-advisory when `q` meets the `C_0 q^{-t}` threshold and
/// `t_param = t`, or when `t_param > t`, the error is at most `q^{-t_param}`
/// and `q >= warmup`.
pub fn check_growth_inequalities(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    q: &BigUint,
    t_param: &BigRational,
    warmup: &BigUint,
) -> Result<GrowthCheck> {
    let ctx = CertContext::new(curve, zeta)?;
    let rule = ctx.rule(None)?;
    let t = rat_int(BigInt::from(ctx.t));
    let established = if *t_param == t {
        let (applies, _) = decide_below(&ctx.curve, zeta, q, |v| ctx.below_threshold(&rule, q, v))?;
        applies
    } else if *t_param > t {
        let (small, _) = decide_below(&ctx.curve, zeta, q, |v| {
            cmp_with_neg_power(v, q, t_param) != std::cmp::Ordering::Greater
        })?;
        small && q >= warmup
    } else {
        false
    };
    growth_inequalities(&ctx, zeta, q, t_param, !established)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativityCheck {
    pub applicable: bool,
    /// `err(M x0^{d_k}) = M err(x0^{d_k})` for every `1 <= M <= N`.
    pub equality: bool,
    /// `err(M x0^{d_k})` is smallest at `M = 1` among `1 <= M <= N`.
    pub min_at_one: bool,
}

pub const MAX_MULTIPLIER: u64 = 1 << 16;

pub fn check_multiplicativity(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    x0: &BigUint,
    n: u64,
) -> Result<MultiplicativityCheck> {
    if n == 0 || n > MAX_MULTIPLIER || x0.is_zero() {
        return Err(Error::InvalidParameter(format!(
            "need x0 >= 1 and 1 <= N <= {MAX_MULTIPLIER}"
        )));
    }
    let ctx = CertContext::new(curve, zeta)?;
    let rule = ctx.rule(None)?;
    let base = num_traits::pow(x0.clone(), ctx.d_k);
    let q = &base * n;
    let (applies, _) = decide_below(&ctx.curve, zeta, &q, |v| ctx.below_threshold(&rule, &q, v))?;
    if !applies {
        return Ok(MultiplicativityCheck {
            applicable: false,
            equality: false,
            min_at_one: false,
        });
    }
    let b = eval_error_sharp(&ctx.curve, zeta, &base)?;
    // N ||v|| <= 1/2 forces ||N v|| = N ||v|| for every real v in the enclosure.
    let certified = &b.hi * rat_int(BigInt::from(n)) <= rat(1, 2);
    let mut equality = certified;
    let mut min_at_one = certified;
    if certified {
        for m in 2..=n {
            let e = eval_at(&ctx.curve, zeta, &(&base * m), b.depth)?;
            if e.value != &b.value * rat_int(BigInt::from(m)) {
                equality = false;
            }
            if e.lo < b.hi {
                min_at_one = false;
            }
        }
    }
    Ok(MultiplicativityCheck {
        applicable: true,
        equality,
        min_at_one,
    })
}

/// One `q` that met the certificate threshold during a scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedApprox {
    pub certificate: Certificate,
    pub convergent_image: Option<bool>,
    pub growth: Option<GrowthCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifySummary {
    pub q_max: u64,
    pub rule: CertRule,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub c0: BigRational,
    pub not_applicable: u64,
    pub pass: u64,
    pub violation: u64,
    pub convergent_failures: u64,
    pub growth_failures: u64,
    pub certified: Vec<CertifiedApprox>,
}

impl CertifySummary {
    pub fn is_clean(&self) -> bool {
        self.violation == 0 && self.convergent_failures == 0 && self.growth_failures == 0
    }
}

/// Runs the certificate on every `1 <= q <= q_max`.
///
/// With `tau = None` this is the plain divisibility certificate together with
/// the convergent-image and three-inequality checks on every passing `q`;
/// with `Some(tau)` only the generalized divisibility claim is checked.
pub fn certify_scan(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    q_max: u64,
    tau: Option<&BigRational>,
) -> Result<CertifySummary> {
    let ctx = CertContext::new(curve, zeta)?;
    let rule = ctx.rule(tau)?;
    let (enc, _) = scan_enclosure(&ctx.curve, zeta, q_max)?;
    let values: Vec<Enclosure> = ctx.curve.polys().iter().map(|p| poly_enclosure(p, &enc)).collect();
    let kernel = ScanKernel::new(&values);
    // C_0 q^{-tau} <= 1/(2q) because C_0 <= 1/2 and tau >= 1.
    let hits: Vec<u64> = chunks(q_max)
        .par_iter()
        .map(|&(a, b)| {
            let mut out = Vec::new();
            kernel.run(a, b, |q, e| {
                let (lo, _) = kernel.bounds(q, e);
                if (lo * (2 * q)) < *kernel.den() {
                    out.push(q);
                }
            });
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let plain = tau.is_none();
    let t = rat_int(BigInt::from(ctx.t));
    let checked: Vec<Option<CertifiedApprox>> = hits
        .par_iter()
        .map(|&q| -> Result<Option<CertifiedApprox>> {
            let q = BigUint::from(q);
            let cert = certify_with(&ctx, &rule, zeta, &q)?;
            if cert.status == CertStatus::NotApplicable {
                return Ok(None);
            }
            let (mut image, mut nk) = (None, None);
            if plain && cert.status == CertStatus::Pass {
                let (x0, y0) = (cert.x0.as_ref().expect("set"), cert.y0.as_ref().expect("set"));
                image = Some(convergent_image(&ctx, zeta, x0, y0)?);
                nk = Some(growth_inequalities(&ctx, zeta, &q, &t, false)?);
            }
            Ok(Some(CertifiedApprox {
                certificate: cert,
                convergent_image: image,
                growth: nk,
            }))
        })
        .collect::<Result<_>>()?;
    let certified: Vec<CertifiedApprox> = checked.into_iter().flatten().collect();
    let count = |f: &dyn Fn(&CertifiedApprox) -> bool| certified.iter().filter(|c| f(c)).count() as u64;
    let pass = count(&|c| c.certificate.status == CertStatus::Pass);
    let violation = count(&|c| c.certificate.status == CertStatus::Violation);
    Ok(CertifySummary {
        q_max,
        rule,
        c0: ctx.c0.clone(),
        not_applicable: q_max - pass - violation,
        pass,
        violation,
        convergent_failures: count(&|c| c.convergent_image == Some(false)),
        growth_failures: count(&|c| c.growth.as_ref().is_some_and(|n| !n.all_hold())),
        certified,
    })
}

/// Shallowest enclosure of `zeta` whose propagated width over `q <= q_max`
/// stays below `2^-64`.
pub fn scan_enclosure(curve: &Curve, zeta: &ProgrammaticReal, q_max: u64) -> Result<(Enclosure, usize)> {
    let mut depth = initial_depth(zeta);
    let qm = rat_int(BigInt::from(q_max.max(1)));
    let limit = BigRational::new(BigInt::one(), BigInt::one() << 64u32);
    for _ in 0..DEEPEN_ATTEMPTS {
        let enc = zeta.enclosure_at(depth)?;
        let widest = curve
            .polys()
            .iter()
            .map(|p| poly_enclosure(p, &enc).radius)
            .max()
            .unwrap_or_else(BigRational::zero);
        let next = next_depth(zeta, depth);
        if widest * &qm <= limit || next == depth {
            return Ok((enc, depth));
        }
        depth = next;
    }
    Ok((zeta.enclosure_at(depth)?, depth))
}
