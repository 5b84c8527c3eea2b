use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{add_rat, cmp_rat, dist_frac_mul, from_biguint, rat, rat_int, round_dyadic};
use crate::contfrac::{initial_depth, next_depth, Enclosure, ProgrammaticReal, DEEPEN_ATTEMPTS};
use crate::error::{Error, Result};
use crate::polycurve::{Curve, RatPoly};

/// `max_j ||q P_j(zeta)||` on a truncation, with a rigorous enclosure of the
/// value at the untruncated real.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorEnclosure {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub value: BigRational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub hi: BigRational,
    pub depth: usize,
}

impl ErrorEnclosure {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Mantissa bits kept when widening radii and error bounds to dyadic values.
const ROUND_BITS: u64 = 128;

/// Enclosure of `P(zeta)` given an enclosure of `zeta`. The radius is widened
/// to a short dyadic so later arithmetic never touches the huge centre.
pub fn poly_enclosure(p: &RatPoly, enc: &Enclosure) -> Enclosure {
    let center = p.eval(&enc.center);
    if enc.is_exact() {
        return Enclosure::exact(center);
    }
    let rho = round_dyadic(&enc.radius, ROUND_BITS, true);
    let abs = round_dyadic(&add_rat(&round_dyadic(&enc.center.abs(), ROUND_BITS, true), &rho), ROUND_BITS, true);
    Enclosure {
        center,
        radius: round_dyadic(&(p.derivative_abs_bound(&abs) * &rho), ROUND_BITS, true),
    }
}

pub(crate) fn error_from_enclosures(
    values: &[Enclosure],
    q: &BigUint,
    depth: usize,
) -> ErrorEnclosure {
    let qr = rat_int(from_biguint(q.clone()));
    let half = rat(1, 2);
    let mut value = BigRational::zero();
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for v in values {
        let e = dist_frac_mul(&v.center, q);
        let (l, h) = if v.radius.is_zero() {
            (e.clone(), e.clone())
        } else {
            let w = &v.radius * &qr;
            let l = add_rat(&round_dyadic(&e, ROUND_BITS, false), &-&w);
            let h = add_rat(&round_dyadic(&e, ROUND_BITS, true), &w);
            let l = if l.is_negative() { BigRational::zero() } else { round_dyadic(&l, ROUND_BITS, false) };
            let h = if cmp_rat(&h, &half).is_ge() { half.clone() } else { round_dyadic(&h, ROUND_BITS, true) };
            (l, h)
        };
        if cmp_rat(&e, &value).is_gt() {
            value = e;
        }
        if l > lo {
            lo = l;
        }
        if h > hi {
            hi = h;
        }
    }
    ErrorEnclosure {
        q: q.clone(),
        value,
        lo,
        hi,
        depth,
    }
}

pub(crate) fn eval_at(curve: &Curve, zeta: &ProgrammaticReal, q: &BigUint, depth: usize) -> Result<ErrorEnclosure> {
    let enc = zeta.enclosure_at(depth)?;
    let values: Vec<Enclosure> = curve.polys().iter().map(|p| poly_enclosure(p, &enc)).collect();
    Ok(error_from_enclosures(&values, q, depth))
}

/// Error at the real's own truncation depth.
pub fn eval_error(curve: &Curve, zeta: &ProgrammaticReal, q: &BigUint) -> Result<ErrorEnclosure> {
    if q.is_zero() {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    eval_at(curve, zeta, q, zeta.depth())
}

/// Relative width below which an error enclosure counts as sharp.
const SHARP_BITS: u32 = 40;

/// Deepens the truncation, starting from the shallowest one, until the
/// enclosure is exact or its width is below `2^-40` times its lower end. The
/// result depends only on the curve, the real and `q`.
pub fn eval_error_sharp(curve: &Curve, zeta: &ProgrammaticReal, q: &BigUint) -> Result<ErrorEnclosure> {
    let mut e = eval_at(curve, zeta, q, initial_depth(zeta))?;
    for _ in 0..DEEPEN_ATTEMPTS {
        if e.is_exact() || (!e.lo.is_zero() && e.width() * rat_int((BigUint::from(1u32) << SHARP_BITS).into()) <= e.lo) {
            return Ok(e);
        }
        let next = next_depth(zeta, e.depth);
        e = eval_at(curve, zeta, q, next)?;
    }
    Err(Error::Enclosure { q: q.clone() })
}

/// Decides `value(q) < bound(q)` for the untruncated real, deepening as needed.
pub fn decide_below(
    curve: &Curve,
    zeta: &ProgrammaticReal,
    q: &BigUint,
    below: impl Fn(&BigRational) -> bool,
) -> Result<(bool, ErrorEnclosure)> {
    let mut e = eval_at(curve, zeta, q, initial_depth(zeta))?;
    for _ in 0..DEEPEN_ATTEMPTS {
        if below(&e.hi) {
            return Ok((true, e));
        }
        if !below(&e.lo) {
            return Ok((false, e));
        }
        let next = next_depth(zeta, e.depth);
        if next == e.depth {
            break;
        }
        e = eval_at(curve, zeta, q, next)?;
    }
    Err(Error::Enclosure { q: q.clone() })
}
