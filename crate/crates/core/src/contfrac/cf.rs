use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::real::{Enclosure, ProgrammaticReal};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    #[serde(serialize_with = "crate::report::ser_display")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigInt,
    pub index: usize,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// Canonical expansion of a rational by the Euclidean algorithm.
pub fn cf_of_rational(r: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    while !den.is_zero() {
        let (a, rem) = num.div_mod_floor(&den);
        out.push(a);
        num = den;
        den = rem;
    }
    out
}

/// The alternative expansion `[.., a_n - 1, 1]` of a rational (if it exists).
fn alternate_expansion(cf: &[BigInt]) -> Option<Vec<BigInt>> {
    let (last, init) = cf.split_last()?;
    if init.is_empty() {
        // [a0] = [a0 - 1; 1]
        return Some(vec![last - 1, BigInt::one()]);
    }
    if last.is_one() {
        return None;
    }
    let mut v = init.to_vec();
    v.push(last - 1);
    v.push(BigInt::one());
    Some(v)
}

/// Partial quotients shared by every real in the enclosure.
pub fn certified_prefix(enc: &Enclosure) -> Vec<BigInt> {
    certified_prefix_until(enc, None)
}

/// Like [`certified_prefix`], but stops once a convergent denominator exceeds
/// `q_limit`. Both endpoints are expanded together on unreduced fractions,
/// which keeps huge truncations cheap.
pub fn certified_prefix_until(enc: &Enclosure, q_limit: Option<&BigInt>) -> Vec<BigInt> {
    if enc.is_exact() {
        return cf_of_rational(&enc.center);
    }
    let (cn, cd) = (enc.center.numer(), enc.center.denom());
    let (rn, rd) = (enc.radius.numer(), enc.radius.denom());
    let den = cd * rd;
    let (mut n1, mut d1) = (cn * rd - rn * cd, den.clone());
    let (mut n2, mut d2) = (cn * rd + rn * cd, den);
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::new();
    loop {
        let (a1, r1) = n1.div_mod_floor(&d1);
        let (a2, r2) = n2.div_mod_floor(&d2);
        // The last quotient of either expansion is not shared by nearby reals.
        if a1 != a2 || r1.is_zero() || r2.is_zero() {
            break;
        }
        if !out.is_empty() {
            let next = &a1 * &q + &q_prev;
            q_prev = std::mem::replace(&mut q, next);
        }
        out.push(a1);
        if q_limit.is_some_and(|l| q > *l) {
            break;
        }
        (n1, d1) = (d1, r1);
        (n2, d2) = (d2, r2);
    }
    out
}

/// First `n` partial quotients `[a0; a1, ..., a_{n-1}]` of `r`.
///
/// Rationals return their whole expansion when it is shorter than `n`.
pub fn cf_expand(r: &ProgrammaticReal, n: usize) -> Result<Vec<BigInt>> {
    let prefix = certified_prefix(&r.enclosure()?);
    if r.is_rational() {
        return Ok(prefix.into_iter().take(n).collect());
    }
    if prefix.len() < n {
        return Err(Error::InsufficientDepth(format!(
            "truncation depth {} certifies only {} partial quotients, {} requested",
            r.depth(),
            prefix.len(),
            n
        )));
    }
    Ok(prefix.into_iter().take(n).collect())
}

pub fn convergents(pqs: &[BigInt]) -> Vec<Convergent> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    pqs.iter()
        .enumerate()
        .map(|(index, a)| {
            let p = a * &p0 + &p1;
            let q = a * &q0 + &q1;
            p1 = std::mem::replace(&mut p0, p.clone());
            q1 = std::mem::replace(&mut q0, q.clone());
            Convergent { p, q, index }
        })
        .collect()
}

/// `||q * a / b||` exactly.
pub fn dist_to_int(a: &BigInt, b: &BigUint, q: &BigUint) -> Result<BigRational> {
    if b.is_zero() {
        return Err(Error::InvalidParameter("denominator must be positive".into()));
    }
    let b = BigInt::from(b.clone());
    let s = (a * BigInt::from(q.clone())).mod_floor(&b);
    let other = &b - &s;
    Ok(BigRational::new(s.clone().min(other), b))
}

/// Outcome of testing whether a rational is a convergent of an enclosed real.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes,
    No,
    Undecided,
}

/// Is `p/q` a convergent of every real in `enc`?
pub fn convergent_membership(value: &BigRational, enc: &Enclosure) -> Membership {
    let canon = cf_of_rational(value);
    let alt = alternate_expansion(&canon);
    if enc.is_exact() {
        if enc.center == *value {
            return Membership::Yes;
        }
        let full = cf_of_rational(&enc.center);
        let starts = |e: &Vec<BigInt>| full.len() > e.len() && full[..e.len()] == e[..];
        return if starts(&canon) || alt.as_ref().is_some_and(starts) {
            Membership::Yes
        } else {
            Membership::No
        };
    }
    let prefix = certified_prefix(enc);
    let mut undecided = false;
    for e in std::iter::once(&canon).chain(alt.as_ref()) {
        let common = prefix.iter().zip(e).take_while(|(a, b)| a == b).count();
        if common == e.len() {
            return Membership::Yes;
        }
        if common == prefix.len() {
            undecided = true;
        }
    }
    if undecided {
        Membership::Undecided
    } else {
        Membership::No
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::contfrac::real::QuotientStream;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn expands_rationals() {
        let r = ProgrammaticReal::from_rational(rat(355, 113));
        assert_eq!(cf_expand(&r, 3).unwrap(), ints(&[3, 7, 16]));
        let h = ProgrammaticReal::from_rational(rat(1, 2));
        assert_eq!(cf_expand(&h, 2).unwrap(), ints(&[0, 2]));
        assert_eq!(cf_expand(&h, 9).unwrap(), ints(&[0, 2]));
        assert_eq!(cf_of_rational(&rat(-7, 3)), ints(&[-3, 1, 2]));
    }

    #[test]
    fn dyadic_prefix_matches_truncation_euclid() {
        let r = ProgrammaticReal::dyadic_exponents(&[2, 16, 128, 1024]).unwrap().with_depth(4);
        let got = cf_expand(&r, 5).unwrap();
        // independent: Euclid on the 4-term truncation
        let trunc = rat(1, 4) + rat(1, 1 << 16)
            + BigRational::new(int(1), BigInt::one() << 128)
            + BigRational::new(int(1), BigInt::one() << 1024);
        let direct = cf_of_rational(&trunc);
        assert_eq!(got[..], direct[..5]);
        let deeper = cf_expand(&r.deeper(1), 5).unwrap();
        assert_eq!(got, deeper);
    }

    #[test]
    fn shallow_truncation_is_reported() {
        let r = ProgrammaticReal::golden_conjugate().with_depth(5);
        assert!(matches!(cf_expand(&r, 40), Err(Error::InsufficientDepth(_))));
    }

    #[test]
    fn convergent_tables() {
        let c = convergents(&ints(&[0, 2, 2, 2, 2]));
        let pq: Vec<(i64, i64)> = c.iter().map(|c| (i64::try_from(&c.p).unwrap(), i64::try_from(&c.q).unwrap())).collect();
        assert_eq!(pq, vec![(0, 1), (1, 2), (2, 5), (5, 12), (12, 29)]);
        let c = convergents(&ints(&[3]));
        assert_eq!((c[0].p.clone(), c[0].q.clone()), (int(3), int(1)));
        let c = convergents(&ints(&[0, 1, 1, 1, 1, 1]));
        let pq: Vec<(i64, i64)> = c.iter().map(|c| (i64::try_from(&c.p).unwrap(), i64::try_from(&c.q).unwrap())).collect();
        assert_eq!(pq, vec![(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]);
    }

    #[test]
    fn distances() {
        let d = |a: i64, b: u64, q: u64| dist_to_int(&int(a), &BigUint::from(b), &BigUint::from(q)).unwrap();
        assert_eq!(d(1, 3, 2), rat(1, 3));
        assert_eq!(d(1, 2, 4), rat(0, 1));
        assert_eq!(d(12, 29, 70), rat(1, 29));
        assert!(dist_to_int(&int(1), &BigUint::zero(), &BigUint::one()).is_err());
    }

    #[test]
    fn membership_uses_both_expansions() {
        let sqrt2m1 = ProgrammaticReal::quotients(
            QuotientStream::new(int(0), vec![], vec![BigUint::from(2u32)]).unwrap(),
        );
        let enc = sqrt2m1.enclosure_at(20).unwrap();
        assert_eq!(convergent_membership(&rat(5, 12), &enc), Membership::Yes);
        assert_eq!(convergent_membership(&rat(1, 3), &enc), Membership::No);
        // 1/2 = [0; 2] is a convergent; so is 0 = [0].
        assert_eq!(convergent_membership(&rat(0, 1), &enc), Membership::Yes);
        let shallow = sqrt2m1.enclosure_at(2).unwrap();
        assert_eq!(convergent_membership(&rat(408, 985), &shallow), Membership::Undecided);
    }
}
