use dioph::arith::{add_rat, cmp_rat, dist_frac_mul, rat, rat_int};
use dioph::contfrac::{
    certified_prefix, cf_expand, convergents, decompose, DyadicSeries, Enclosure, ProgrammaticReal,
};
use dioph::format::parse_real;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

const X_MAX: u64 = 10_000;

fn test_reals() -> Vec<ProgrammaticReal> {
    ["cf:0;1,...", "cf:1;2,...", "cf:0;3,1,4;period=2", "dyadic:2,5,11,23,47", "dyadic:3,7,20;growth=5/2", "rat:355/113"]
        .iter()
        .map(|s| parse_real(s).unwrap())
        .collect()
}

/// An enclosure narrow enough that `||zeta v||` is resolved for all `v <= X_MAX`.
fn fine(zeta: &ProgrammaticReal) -> Enclosure {
    let limit = rat(1, 1) / rat_int(BigInt::one() << 200u32);
    let mut depth = 1;
    loop {
        let e = zeta.enclosure_at(depth).unwrap();
        if e.radius <= limit {
            return e;
        }
        depth += 1;
    }
}

fn norm(center: &BigRational, v: u64) -> BigRational {
    dist_frac_mul(center, &BigUint::from(v))
}

/// Error of the center is at most `X_MAX * radius`, far below every gap we compare.
fn assert_separated(a: &BigRational, b: &BigRational, enc: &Enclosure) {
    let slack = &enc.radius * rat_int(BigInt::from(2 * X_MAX));
    assert!(a == b || (a - b).abs() > slack, "comparison not resolved by the enclosure");
}

#[test]
fn best_approximation_law() {
    for zeta in test_reals() {
        let enc = fine(&zeta);
        let conv = convergents(&certified_prefix(&enc));
        for w in conv.windows(2) {
            let (qn, qn1) = (&w[0].q, &w[1].q);
            if *qn1 > BigInt::from(X_MAX) {
                break;
            }
            let qn = u64::try_from(qn).unwrap();
            let qn1 = u64::try_from(qn1).unwrap();
            let best = norm(&enc.center, qn);
            for v in 1..qn1 {
                let nv = norm(&enc.center, v);
                assert_separated(&nv, &best, &enc);
                assert!(nv >= best, "{zeta}: v={v} beats q_n={qn}");
            }
        }
    }
}

#[test]
fn decompose_matches_brute_force_and_multiplies() {
    for zeta in test_reals() {
        let enc = fine(&zeta);
        let mut best_v = 1u64;
        let mut best = norm(&enc.center, 1);
        let mut checked = 0;
        for x in 1..=X_MAX {
            let nx = norm(&enc.center, x);
            if nx < best {
                assert_separated(&nx, &best, &enc);
                best = nx.clone();
                best_v = x;
            }
            let bound = BigRational::new(BigInt::one(), BigInt::from(2 * x));
            let w = &enc.radius * rat_int(BigInt::from(x));
            if cmp_rat(&add_rat(&nx, &w), &bound).is_ge() {
                continue;
            }
            let d = decompose(&zeta, &BigUint::from(x)).unwrap();
            assert_eq!(d.x0, BigUint::from(best_v), "{zeta}: x={x}");
            assert_eq!(&d.x0 * &d.m0, BigUint::from(x));
            let base = dist_frac_mul(&enc.center, &d.x0);
            let m0 = rat_int(BigInt::from(d.m0.clone()));
            assert_eq!(nx, &m0 * &base, "{zeta}: multiplicativity at x={x}");
            checked += 1;
        }
        assert!(checked >= 5, "{zeta}: only {checked} x satisfied the precondition");
    }
}

#[test]
fn multiplicativity_is_exact_on_rationals() {
    let zeta = ProgrammaticReal::from_rational(rat(355, 113));
    for x in 1..=2000u64 {
        if let Ok(d) = decompose(&zeta, &BigUint::from(x)) {
            let c = rat(355, 113);
            let lhs = dist_frac_mul(&c, &BigUint::from(x));
            let rhs = rat_int(BigInt::from(d.m0.clone())) * dist_frac_mul(&c, &d.x0);
            assert_eq!(lhs, rhs);
        }
    }
}

fn schedule() -> impl Strategy<Value = Vec<u64>> {
    (2u64..6, prop::collection::vec(2u64..40, 3..7)).prop_map(|(b1, steps)| {
        let mut v = vec![b1];
        for s in steps {
            let last = *v.last().unwrap();
            v.push(last + s.max(last / 2));
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `||2^{b_n} zeta||` lies in `[2^-(b_{n+1}-b_n), 2^-(b_{n+1}-b_n) (1 + 2^{1+b_{n+1}-b_{n+2}})]`.
    #[test]
    fn dyadic_level_exponents(b in schedule()) {
        let s = DyadicSeries::from_exponents(&b).unwrap();
        let exps = s.exponents(b.len() + 2).unwrap();
        let enc = s.enclosure(b.len() + 2).unwrap();
        for n in 0..b.len() - 1 {
            let x = BigUint::one() << exps[n];
            let xr = rat_int(BigInt::from(x.clone()));
            let c = dist_frac_mul(&enc.center, &x);
            let w = &enc.radius * &xr;
            let lo = &c - &w;
            let hi = &c + &w;
            let main = rat(1, 1) / rat_int(BigInt::one() << (exps[n + 1] - exps[n]));
            let corr = rat(1, 1) + rat(2, 1) / rat_int(BigInt::one() << (exps[n + 2] - exps[n + 1]));
            prop_assert!(lo >= main, "level {} below the main term", n);
            prop_assert!(hi <= &main * &corr, "level {} above the corrected term", n);
        }
    }

    #[test]
    fn truncation_is_stable(prefix in prop::collection::vec(1u32..20, 0..6), period in prop::collection::vec(1u32..20, 1..4), depth in 8usize..30) {
        let list = |v: &[u32]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let spec = if prefix.is_empty() {
            format!("cf:0;{},...", list(&period))
        } else {
            format!("cf:0;{},{};period={}", list(&prefix), list(&period), period.len())
        };
        let zeta = parse_real(&spec).unwrap();
        let a = cf_expand(&zeta.with_depth(depth), depth - 2);
        let b = cf_expand(&zeta.with_depth(depth + 1), depth - 2);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
        let s = DyadicSeries::from_exponents(&[2, 5, 11]).unwrap();
        let d = ProgrammaticReal::dyadic(s);
        let shallow = depth % 6 + 3;
        let a = cf_expand(&d.with_depth(shallow), 6);
        let b = cf_expand(&d.with_depth(shallow + 1), 6);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }
}
