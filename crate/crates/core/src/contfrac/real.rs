use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{from_biguint, rat_int};
use crate::error::{Error, Result};

/// Largest dyadic exponent a truncation may reach (bits of the denominator).
pub const MAX_EXPONENT: u64 = 1 << 26;

/// `center - radius <= value <= center + radius`, all exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub center: BigRational,
    pub radius: BigRational,
}

impl Enclosure {
    pub fn exact(v: BigRational) -> Self {
        Enclosure {
            center: v,
            radius: BigRational::zero(),
        }
    }

    pub fn lo(&self) -> BigRational {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> BigRational {
        &self.center + &self.radius
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn scale(&self, s: &BigRational) -> Enclosure {
        Enclosure {
            center: &self.center * s,
            radius: &self.radius * num_traits::Signed::abs(s),
        }
    }
}

/// One term `mantissa * 2^-exponent` of a dyadic series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicTerm {
    pub mantissa: BigUint,
    pub exponent: u64,
}

impl DyadicTerm {
    pub fn unit(exponent: u64) -> Self {
        DyadicTerm {
            mantissa: BigUint::one(),
            exponent,
        }
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(
            from_biguint(self.mantissa.clone()),
            from_biguint(BigUint::one() << self.exponent),
        )
    }
}

/// `sum_n m_n 2^{-b_n}` with an explicit prefix and a geometric continuation
/// `b_{n+1} = max(b_n + 1, floor(growth * b_n))` with unit mantissas.
///
/// Every term is at most half its predecessor, so the tail after any
/// truncation is below twice the first omitted term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicSeries {
    prefix: Vec<DyadicTerm>,
    growth: BigRational,
}

impl DyadicSeries {
    pub fn new(prefix: Vec<DyadicTerm>, growth: BigRational) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidParameter("dyadic series needs at least one term".into()));
        }
        if growth <= BigRational::one() {
            return Err(Error::InvalidParameter(format!("dyadic growth must exceed 1, got {growth}")));
        }
        if prefix[0].exponent < 1 {
            return Err(Error::InvalidParameter("first dyadic exponent must be at least 1".into()));
        }
        for t in &prefix {
            if t.mantissa.is_zero() {
                return Err(Error::InvalidParameter("dyadic mantissa must be positive".into()));
            }
            if t.exponent > MAX_EXPONENT {
                return Err(Error::InvalidParameter(format!("dyadic exponent {} too large", t.exponent)));
            }
        }
        for w in prefix.windows(2) {
            if w[1].exponent <= w[0].exponent {
                return Err(Error::InvalidParameter("dyadic exponents must increase strictly".into()));
            }
            // m1 2^-b1 <= m0 2^-b0 / 2
            let lhs = &w[1].mantissa << (w[0].exponent + 1);
            let rhs = &w[0].mantissa << w[1].exponent;
            if lhs > rhs {
                return Err(Error::InvalidParameter(format!(
                    "dyadic term at exponent {} exceeds half its predecessor",
                    w[1].exponent
                )));
            }
        }
        Ok(DyadicSeries { prefix, growth })
    }

    /// Unit mantissas with the given exponents; continues with the ratio of the
    /// last two exponents (2 if only one is given).
    pub fn from_exponents(exps: &[u64]) -> Result<Self> {
        let growth = match exps {
            [.., a, b] if *a > 0 => BigRational::new(BigInt::from(*b), BigInt::from(*a)),
            _ => rat_int(BigInt::from(2)),
        };
        Self::new(exps.iter().map(|&b| DyadicTerm::unit(b)).collect(), growth)
    }

    /// `b_1 = seed`, `b_{n+1} = floor(ratio * b_n)`.
    pub fn geometric(seed: u64, ratio: BigRational, explicit: usize) -> Result<Self> {
        let s = DyadicSeries::new(vec![DyadicTerm::unit(seed)], ratio)?;
        let terms = s.terms(explicit.max(1))?;
        Ok(DyadicSeries {
            prefix: terms,
            growth: s.growth,
        })
    }

    pub fn prefix(&self) -> &[DyadicTerm] {
        &self.prefix
    }

    pub fn growth(&self) -> &BigRational {
        &self.growth
    }

    fn next_exponent(&self, b: u64) -> Result<u64> {
        let v = (rat_int(BigInt::from(b)) * &self.growth).floor().to_integer();
        let v = v.to_u64().unwrap_or(u64::MAX).max(b + 1);
        if v > MAX_EXPONENT {
            return Err(Error::InsufficientDepth(format!(
                "dyadic exponent {v} beyond supported size"
            )));
        }
        Ok(v)
    }

    /// The first `n` terms.
    pub fn terms(&self, n: usize) -> Result<Vec<DyadicTerm>> {
        let mut out: Vec<DyadicTerm> = self.prefix.iter().take(n).cloned().collect();
        while out.len() < n {
            let b = self.next_exponent(out.last().expect("non-empty").exponent)?;
            out.push(DyadicTerm::unit(b));
        }
        Ok(out)
    }

    pub fn exponents(&self, n: usize) -> Result<Vec<u64>> {
        Ok(self.terms(n)?.into_iter().map(|t| t.exponent).collect())
    }

    pub fn enclosure(&self, depth: usize) -> Result<Enclosure> {
        let depth = depth.max(1);
        let terms = self.terms(depth + 1)?;
        let last = terms[depth - 1].exponent;
        let mut num = BigUint::zero();
        for t in &terms[..depth] {
            num += &t.mantissa << (last - t.exponent);
        }
        let center = crate::arith::reduced(from_biguint(num), from_biguint(BigUint::one() << last));
        let radius = terms[depth].value() * rat_int(BigInt::from(2));
        Ok(Enclosure { center, radius })
    }
}

/// `[a0; a1, a2, ...]` given by a finite prefix and an optional period that
/// repeats forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientStream {
    a0: BigInt,
    prefix: Vec<BigUint>,
    period: Vec<BigUint>,
}

impl QuotientStream {
    pub fn new(a0: BigInt, prefix: Vec<BigUint>, period: Vec<BigUint>) -> Result<Self> {
        if prefix.iter().chain(&period).any(Zero::is_zero) {
            return Err(Error::InvalidParameter("partial quotients after a0 must be >= 1".into()));
        }
        Ok(QuotientStream { a0, prefix, period })
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn prefix(&self) -> &[BigUint] {
        &self.prefix
    }

    pub fn period(&self) -> &[BigUint] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// `a_i` for `i >= 1`, `None` past the end of a finite expansion.
    pub fn quotient(&self, i: usize) -> Option<BigUint> {
        debug_assert!(i >= 1);
        let j = i - 1;
        if j < self.prefix.len() {
            return Some(self.prefix[j].clone());
        }
        if self.period.is_empty() {
            return None;
        }
        Some(self.period[(j - self.prefix.len()) % self.period.len()].clone())
    }

    /// `[a0, a1, ..., a_n]` (shorter when finite).
    pub fn quotients(&self, n: usize) -> Vec<BigInt> {
        let mut v = vec![self.a0.clone()];
        v.extend((1..=n).map_while(|i| self.quotient(i).map(from_biguint)));
        v
    }

    pub fn enclosure(&self, depth: usize) -> Enclosure {
        let qs = self.quotients(depth);
        let conv = super::cf::convergents(&qs);
        let last = conv.last().expect("a0 always present");
        let center = crate::arith::reduced(last.p.clone(), last.q.clone());
        match self.quotient(qs.len()) {
            None => Enclosure::exact(center),
            Some(a_next) => {
                let prev_q = if conv.len() >= 2 {
                    conv[conv.len() - 2].q.clone()
                } else {
                    BigInt::zero()
                };
                let q_next = from_biguint(a_next) * &last.q + prev_q;
                let radius = BigRational::new(BigInt::one(), &last.q * q_next);
                Enclosure { center, radius }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RealKind {
    Rational(BigRational),
    Dyadic(DyadicSeries),
    Quotients(QuotientStream),
}

/// A real number given constructively, together with the truncation depth
/// used by default when an exact rational approximation is needed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProgrammaticReal {
    kind: RealKind,
    depth: usize,
}

pub const DEFAULT_QUOTIENT_DEPTH: usize = 64;

impl ProgrammaticReal {
    pub fn rational(p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Ok(ProgrammaticReal {
            kind: RealKind::Rational(BigRational::new(p, q)),
            depth: 0,
        })
    }

    pub fn from_rational(r: BigRational) -> Self {
        ProgrammaticReal {
            kind: RealKind::Rational(r),
            depth: 0,
        }
    }

    pub fn dyadic(series: DyadicSeries) -> Self {
        let depth = series.prefix().len().max(2);
        ProgrammaticReal {
            kind: RealKind::Dyadic(series),
            depth,
        }
    }

    pub fn dyadic_exponents(exps: &[u64]) -> Result<Self> {
        Ok(Self::dyadic(DyadicSeries::from_exponents(exps)?))
    }

    pub fn quotients(stream: QuotientStream) -> Self {
        let depth = if stream.is_finite() {
            stream.prefix().len()
        } else {
            DEFAULT_QUOTIENT_DEPTH
        };
        ProgrammaticReal {
            kind: RealKind::Quotients(stream),
            depth,
        }
    }

    /// `[0; 1, 1, 1, ...]`.
    pub fn golden_conjugate() -> Self {
        Self::quotients(
            QuotientStream::new(BigInt::zero(), vec![], vec![BigUint::one()]).expect("valid"),
        )
    }

    pub fn kind(&self) -> &RealKind {
        &self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        ProgrammaticReal {
            kind: self.kind.clone(),
            depth,
        }
    }

    pub fn deeper(&self, extra: usize) -> Self {
        self.with_depth(self.depth + extra)
    }

    pub fn is_rational(&self) -> bool {
        match &self.kind {
            RealKind::Rational(_) => true,
            RealKind::Dyadic(_) => false,
            RealKind::Quotients(s) => s.is_finite(),
        }
    }

    pub fn enclosure_at(&self, depth: usize) -> Result<Enclosure> {
        match &self.kind {
            RealKind::Rational(r) => Ok(Enclosure::exact(r.clone())),
            RealKind::Dyadic(s) => s.enclosure(depth),
            RealKind::Quotients(s) => Ok(s.enclosure(depth)),
        }
    }

    pub fn enclosure(&self) -> Result<Enclosure> {
        self.enclosure_at(self.depth)
    }

    /// Text form accepted by the command line parser.
    pub fn to_spec(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ProgrammaticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RealKind::Rational(r) => write!(f, "rat:{}/{}", r.numer(), r.denom()),
            RealKind::Dyadic(s) => {
                write!(f, "dyadic:")?;
                for (i, t) in s.prefix().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if t.mantissa.is_one() {
                        write!(f, "{}", t.exponent)?;
                    } else {
                        write!(f, "{}*2^-{}", t.mantissa, t.exponent)?;
                    }
                }
                let natural = DyadicSeries::from_exponents(
                    &s.prefix().iter().map(|t| t.exponent).collect::<Vec<_>>(),
                )
                .map(|d| d.growth == s.growth)
                .unwrap_or(false);
                if !natural {
                    write!(f, ";growth={}", s.growth)?;
                }
                Ok(())
            }
            RealKind::Quotients(s) => {
                write!(f, "cf:{};", s.a0())?;
                let all: Vec<String> = s
                    .prefix()
                    .iter()
                    .chain(s.period())
                    .map(ToString::to_string)
                    .collect();
                write!(f, "{}", all.join(","))?;
                if !s.is_finite() {
                    if s.prefix().is_empty() {
                        write!(f, ",...")?;
                    } else {
                        write!(f, ";period={}", s.period().len())?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Exact value of `num / 2^shift` as a rational.
pub fn dyadic_rational(num: BigInt, shift: u64) -> BigRational {
    BigRational::new(num, from_biguint(BigUint::one() << shift))
}
