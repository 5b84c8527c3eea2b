//! Exact integer and rational helpers shared by every module.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Greatest common divisor that stays fast when one operand is much shorter
/// than the other or when both carry a large power of two.
pub fn fast_gcd(a: &BigUint, b: &BigUint) -> BigUint {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (ta, tb) = (a.trailing_zeros().unwrap_or(0), b.trailing_zeros().unwrap_or(0));
    let mut x = a >> ta;
    let mut y = b >> tb;
    loop {
        if x < y {
            std::mem::swap(&mut x, &mut y);
        }
        if y.is_zero() {
            break;
        }
        if x.bits() > y.bits() + 32 {
            x %= &y;
        } else {
            x = x.gcd(&y);
            break;
        }
    }
    x << ta.min(tb)
}

/// `n / d` in lowest terms, using [`fast_gcd`].
pub fn reduced(n: BigInt, d: BigInt) -> BigRational {
    assert!(!d.is_zero(), "zero denominator");
    let g = from_biguint(fast_gcd(n.magnitude(), d.magnitude()));
    let (mut n, mut d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    BigRational::new_raw(n, d)
}

/// Ordering by cross-multiplication, which avoids the quadratic
/// continued-fraction walk of the default comparison on huge operands.
pub fn cmp_rat(a: &BigRational, b: &BigRational) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// `a + b` reduced with [`fast_gcd`]; cheap for dyadic operands of very
/// different magnitude, where the default addition crawls.
pub fn add_rat(a: &BigRational, b: &BigRational) -> BigRational {
    reduced(a.numer() * b.denom() + b.numer() * a.denom(), a.denom() * b.denom())
}

/// Distance from `r` to the nearest integer.
pub fn dist_frac(r: &BigRational) -> BigRational {
    dist_frac_mul(r, &BigUint::one())
}

/// `||q r||`, computed on integers so huge denominators stay cheap.
pub fn dist_frac_mul(r: &BigRational, q: &BigUint) -> BigRational {
    let d = r.denom();
    let m = (r.numer() * from_biguint(q.clone())).mod_floor(d);
    let other = d - &m;
    reduced(if m <= other { m } else { other }, d.clone())
}

/// Dyadic rational within relative `2^-bits` of a non-negative `x`, rounded
/// up or down as requested.
pub fn round_dyadic(x: &BigRational, bits: u64, up: bool) -> BigRational {
    assert!(!x.is_negative(), "round_dyadic needs x >= 0");
    if x.is_zero() {
        return BigRational::zero();
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let shift = bits as i64 - (n.bits() as i64 - d.bits() as i64);
    let (num, den) = if shift >= 0 {
        (n << shift as u64, d.clone())
    } else {
        (n.clone(), d << (-shift) as u64)
    };
    let (mut m, rem) = num.div_rem(&den);
    if up && !rem.is_zero() {
        m += 1u32;
    }
    let m = from_biguint(m);
    if shift >= 0 {
        reduced(m, from_biguint(BigUint::one() << shift as u64))
    } else {
        BigRational::from_integer(m << (-shift) as u64)
    }
}

/// Nearest integer to `r`, ties rounded toward the even neighbour.
pub fn nearest_int(r: &BigRational) -> BigInt {
    let fl = r.floor().to_integer();
    let frac = r - rat_int(fl.clone());
    let half = rat(1, 2);
    if frac < half || (frac == half && fl.is_even()) {
        fl
    } else {
        fl + 1
    }
}

/// Multiplicity of the prime `p` in `n`; `None` for `n = 0`.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, d| acc.lcm(&d.abs()))
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, d| acc.gcd(d))
}

pub fn to_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub fn from_biguint(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}

/// Base-2 logarithm of a positive integer, accurate to f64 precision for any size.
pub fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(0.0);
    top.log2() + shift as f64
}

/// Base-2 logarithm of a positive rational.
pub fn log2_ratio(r: &BigRational) -> f64 {
    log2_biguint(r.numer().magnitude()) - log2_biguint(r.denom().magnitude())
}

/// `-log(err) / log(q)`; `None` at `q = 1` or `err = 0`.
pub fn exponent_of(err: &BigRational, q: &BigUint) -> Option<f64> {
    if err.is_zero() || *q <= BigUint::one() {
        return None;
    }
    Some(-log2_ratio(err) / log2_biguint(q))
}

/// Compares `r` with `x^(-e)` for a non-negative rational exponent `e`.
/// Returns the sign of `r - x^(-e)`.
pub fn cmp_with_neg_power(r: &BigRational, x: &BigUint, e: &BigRational) -> std::cmp::Ordering {
    // r <=> x^(-a/b)  <=>  r^b * x^a <=> 1 (r >= 0, b > 0)
    let a = e.numer().to_biguint().expect("non-negative exponent");
    let b = e.denom().to_u32().expect("exponent denominator fits u32");
    let a = a.to_u32().expect("exponent numerator fits u32");
    if r.is_zero() {
        return std::cmp::Ordering::Less;
    }
    let lhs_num = r.numer().magnitude().pow(b) * x.pow(a);
    let lhs_den = r.denom().magnitude().pow(b);
    lhs_num.cmp(&lhs_den)
}

/// Parses an exact rational: `p`, `p/q`, or a finite decimal such as `-3.25`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p)?;
        let q: BigInt = parse_int(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ipv: BigInt = if ip.trim() == "-" || ip.trim() == "+" || ip.trim().is_empty() {
            BigInt::zero()
        } else {
            parse_int(ip)?
        };
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) || fp.len() > 4096 {
            return None;
        }
        let fv: BigInt = fp.parse().ok()?;
        let scale = BigInt::from(10u32).pow(fp.len() as u32);
        let mag = ipv.abs() * &scale + fv;
        let num = if neg { -mag } else { mag };
        return Some(BigRational::new(num, scale));
    }
    Some(rat_int(parse_int(s)?))
}

pub fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ceil_log2_ratio(r: &BigRational) -> i64 {
    // smallest e with 2^e >= r, r > 0
    let mut e = log2_ratio(r).ceil() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            two.pow(e as i32)
        } else {
            BigRational::one() / two.pow((-e) as i32)
        }
    };
    while pow(e) < *r {
        e += 1;
    }
    while pow(e - 1) >= *r {
        e -= 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PRIMES: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];

    #[test]
    fn dist_frac_basic() {
        assert_eq!(dist_frac(&rat(2, 3)), rat(1, 3));
        assert_eq!(dist_frac(&rat(4, 2)), rat(0, 1));
        assert_eq!(dist_frac(&rat(-7, 4)), rat(1, 4));
        assert_eq!(dist_frac(&rat(1, 2)), rat(1, 2));
    }

    #[test]
    fn nearest_ties_to_even() {
        assert_eq!(nearest_int(&rat(5, 2)), int(2));
        assert_eq!(nearest_int(&rat(7, 2)), int(4));
        assert_eq!(nearest_int(&rat(-5, 2)), int(-2));
        assert_eq!(nearest_int(&rat(10, 3)), int(3));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-3.25"), Some(rat(-13, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1e5"), None);
    }

    #[test]
    fn ceil_log2() {
        assert_eq!(ceil_log2_ratio(&rat(1, 1)), 0);
        assert_eq!(ceil_log2_ratio(&rat(3, 1)), 2);
        assert_eq!(ceil_log2_ratio(&rat(1, 3)), -1);
        assert_eq!(ceil_log2_ratio(&rat(1, 4)), -2);
    }

    #[test]
    fn neg_power_compare() {
        use std::cmp::Ordering::*;
        let x = BigUint::from(16u32);
        assert_eq!(cmp_with_neg_power(&rat(1, 4), &x, &rat(1, 2)), Equal);
        assert_eq!(cmp_with_neg_power(&rat(1, 5), &x, &rat(1, 2)), Less);
        assert_eq!(cmp_with_neg_power(&rat(1, 65536), &x, &rat(4, 1)), Equal);
    }

    proptest! {
        #[test]
        fn coprime_survives_powers(a in 1i64..100_000, b in 1i64..100_000, l in 1u32..6) {
            let (a, b) = (int(a), int(b));
            if a.gcd(&b).is_one() {
                prop_assert!(a.gcd(&b.pow(l)).is_one());
            }
        }

        #[test]
        fn gcd_of_powers(a in 1i64..10_000, b in 1i64..10_000, l in 1u32..6) {
            let (a, b) = (int(a), int(b));
            prop_assert_eq!(a.pow(l).gcd(&b.pow(l)), a.gcd(&b).pow(l));
        }

        #[test]
        fn valuation_of_sum(a in 1i64..1_000_000, b in 1i64..1_000_000, pi in 0usize..25) {
            let p = PRIMES[pi];
            let (va, vb) = (valuation(&int(a), p).unwrap(), valuation(&int(b), p).unwrap());
            let vs = valuation(&int(a + b), p).unwrap();
            prop_assert!(vs >= va.min(vb));
            if va != vb {
                prop_assert_eq!(vs, va.min(vb));
            }
        }

        #[test]
        fn gcd_with_product_divides(a in 1i64..10_000, b1 in 1i64..1000, b2 in 1i64..1000) {
            let (a, b1, b2) = (int(a), int(b1), int(b2));
            let lhs = a.gcd(&(&b1 * &b2));
            let rhs = a.gcd(&b1) * a.gcd(&b2);
            prop_assert!((rhs.clone() % &lhs).is_zero());
            if b1.gcd(&b2).is_one() {
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn dist_lower_bound(a in 1i64..100_000, b in 1i64..1000) {
            // ||A/B|| >= 1/B unless B | A
            let d = dist_frac(&rat(a, b));
            if a % b != 0 {
                prop_assert!(d >= rat(1, b));
            } else {
                prop_assert!(d.is_zero());
            }
        }
    }

    proptest! {
        #[test]
        fn fast_gcd_agrees(a in 0u64..1 << 40, b in 0u64..1 << 40, s in 0u64..200) {
            let x = BigUint::from(a) << s;
            let y = BigUint::from(b) * BigUint::from(3u32).pow(40);
            let want = if a == 0 { y.clone() } else if b == 0 { x.clone() } else { x.gcd(&y) };
            prop_assert_eq!(fast_gcd(&x, &y), want);
        }

        #[test]
        fn rounding_brackets(n in 1i64..1 << 50, d in 1i64..1 << 50, bits in 8u64..80) {
            let x = rat(n, d);
            let lo = round_dyadic(&x, bits, false);
            let hi = round_dyadic(&x, bits, true);
            prop_assert!(lo <= x && x <= hi);
            prop_assert!((&hi - &lo) * rat_int(BigInt::one() << (bits - 2)) <= x);
        }

        #[test]
        fn dist_frac_mul_matches_rational(n in -1000i64..1000, d in 1i64..500, q in 1u64..10_000) {
            let r = rat(n, d);
            let direct = dist_frac(&(&r * rat_int(BigInt::from(q))));
            prop_assert_eq!(dist_frac_mul(&r, &BigUint::from(q)), direct);
        }
    }
}
