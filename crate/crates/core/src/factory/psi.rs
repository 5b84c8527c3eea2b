use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
#[cfg(test)]
use num_traits::One;

use crate::arith::{cmp_with_neg_power, log2_biguint, log2_ratio, rat_int};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiKind {
    /// `Psi(x) = x^{-lambda}`.
    Power(BigRational),
    /// `Psi(x) = min(psi_i, x^{-tail})` for `x_i <= x < x_{i+1}`, and `psi_1`
    /// below `x_1`.
    Scheduled {
        steps: Vec<(BigUint, BigRational)>,
        tail: BigRational,
    },
}

/// A positive non-increasing approximation function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSpec {
    kind: PsiKind,
}

fn check_exponent(l: &BigRational) -> Result<()> {
    if *l <= BigRational::zero() {
        return Err(Error::InvalidParameter(format!("decay exponent must be positive, got {l}")));
    }
    let fits = |n: &BigInt| u32::try_from(n).is_ok();
    if !fits(l.numer()) || !fits(l.denom()) {
        return Err(Error::InvalidParameter(format!("decay exponent {l} too large")));
    }
    Ok(())
}

impl PsiSpec {
    pub fn power(lambda: BigRational) -> Result<Self> {
        check_exponent(&lambda)?;
        Ok(PsiSpec {
            kind: PsiKind::Power(lambda),
        })
    }

    pub fn scheduled(steps: Vec<(BigUint, BigRational)>, tail: BigRational) -> Result<Self> {
        check_exponent(&tail)?;
        if steps.is_empty() {
            return Err(Error::InvalidParameter("schedule needs at least one step".into()));
        }
        for (x, v) in &steps {
            if x.is_zero() || *v <= BigRational::zero() {
                return Err(Error::InvalidParameter("schedule steps need x >= 1 and positive values".into()));
            }
        }
        for w in steps.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidParameter("schedule x values must increase".into()));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::InvalidParameter("schedule values must not increase".into()));
            }
        }
        Ok(PsiSpec {
            kind: PsiKind::Scheduled { steps, tail },
        })
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    /// Exponent `mu` with `Psi(x) <= x^{-mu}` for all large `x`.
    pub fn decay_exponent(&self) -> &BigRational {
        match &self.kind {
            PsiKind::Power(l) => l,
            PsiKind::Scheduled { tail, .. } => tail,
        }
    }

    /// `Psi(x) = o(x^{-t})`.
    pub fn validate_for(&self, t: usize) -> Result<()> {
        let mu = self.decay_exponent();
        if *mu <= rat_int(BigInt::from(t)) {
            return Err(Error::Hypothesis(format!(
                "Psi decays like x^-{mu}, which is not o(x^-{t}) for diameter {t}"
            )));
        }
        Ok(())
    }

    fn step_value(&self, x: &BigUint) -> Option<&BigRational> {
        match &self.kind {
            PsiKind::Power(_) => None,
            PsiKind::Scheduled { steps, .. } => {
                let i = steps.iter().rposition(|(s, _)| s <= x).unwrap_or(0);
                Some(&steps[i].1)
            }
        }
    }

    pub fn log2_at(&self, x: &BigUint) -> f64 {
        let power = -crate::arith::ratio_to_f64(self.decay_exponent()) * log2_biguint(x);
        match self.step_value(x) {
            None => power,
            Some(v) => power.min(log2_ratio(v)),
        }
    }

    /// Sign of `err - c Psi(x)`, exactly.
    pub fn compare(&self, err: &BigRational, x: &BigUint, c: &BigRational) -> Ordering {
        if c.is_zero() {
            return err.cmp(&BigRational::zero());
        }
        let scaled = err / c;
        let vs_power = cmp_with_neg_power(&scaled, x, self.decay_exponent());
        match self.step_value(x) {
            None => vs_power,
            Some(v) => vs_power.max(scaled.cmp(v)),
        }
    }

    pub fn at_most(&self, err: &BigRational, x: &BigUint, c: &BigRational) -> bool {
        self.compare(err, x, c) != Ordering::Greater
    }
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = crate::report::fmt_rat;
        match &self.kind {
            PsiKind::Power(l) => write!(f, "power:{}", r(l)),
            PsiKind::Scheduled { steps, tail } => {
                let body: Vec<String> = steps.iter().map(|(x, v)| format!("{x}={}", r(v))).collect();
                write!(f, "sched:{};tail={}", body.join(","), r(tail))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn one() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn power_comparisons_are_exact() {
        let p = PsiSpec::power(rat(4, 1)).unwrap();
        let x = BigUint::from(16u32);
        assert_eq!(p.compare(&rat(1, 65536), &x, &one()), Ordering::Equal);
        assert_eq!(p.compare(&rat(1, 65537), &x, &one()), Ordering::Less);
        assert_eq!(p.compare(&rat(9, 10 * 65536), &x, &rat(9, 10)), Ordering::Equal);
        assert_eq!(p.compare(&rat(1, 3), &x, &rat(0, 1)), Ordering::Greater);
        assert!(p.validate_for(3).is_ok());
        assert!(matches!(p.validate_for(4), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn schedule_is_monotone_and_capped() {
        let s = PsiSpec::scheduled(
            vec![(BigUint::from(1u32), rat(1, 2)), (BigUint::from(10u32), rat(1, 1000))],
            rat(2, 1),
        )
        .unwrap();
        assert!(s.at_most(&rat(1, 2), &BigUint::from(1u32), &one()));
        assert!(!s.at_most(&rat(1, 2), &BigUint::from(2u32), &one()));
        assert!(s.at_most(&rat(1, 1000), &BigUint::from(10u32), &one()));
        assert_eq!(s.to_string(), "sched:1=1/2,10=1/1000;tail=2");
        assert!(PsiSpec::scheduled(vec![(BigUint::from(2u32), rat(1, 4)), (BigUint::from(3u32), rat(1, 2))], rat(2, 1)).is_err());
    }
}
