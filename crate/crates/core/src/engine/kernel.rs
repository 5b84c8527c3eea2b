//! Incremental residue scan over consecutive `q`.
//!
//! With `P_j(zeta_trunc) = n_j / den` over a common denominator, the fractional
//! part of `q P_j` is `s_j / den` where `s_j = q n_j mod den`, so stepping `q`
//! by one is a single big-integer addition per coordinate.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{lcm_all, to_biguint};
use crate::contfrac::Enclosure;

/// Number of consecutive `q` handled by one parallel work unit. Fixed so that
/// results never depend on the thread count.
pub const CHUNK: u64 = 8192;

pub struct ScanKernel {
    den: BigUint,
    half: BigUint,
    residues: Vec<BigUint>,
    /// Per-unit-of-`q` enclosure half-width, in units of `1/den`, rounded up.
    rho: BigUint,
}

impl ScanKernel {
    pub fn new(values: &[Enclosure]) -> Self {
        let den_int = lcm_all(values.iter().map(|v| v.center.denom()));
        let den = to_biguint(&den_int);
        let residues = values
            .iter()
            .map(|v| {
                let scaled = v.center.numer() * (&den_int / v.center.denom());
                to_biguint(&scaled.mod_floor(&den_int))
            })
            .collect();
        let max_radius = values
            .iter()
            .map(|v| v.radius.clone())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        let rho = (max_radius * BigRational::from_integer(den_int)).ceil().to_integer();
        ScanKernel {
            half: &den >> 1u32,
            den,
            residues,
            rho: to_biguint(&rho),
        }
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn rho(&self) -> &BigUint {
        &self.rho
    }

    pub fn is_exact(&self) -> bool {
        self.rho.is_zero()
    }

    /// `[lo, hi]` in units of `1/den` around the truncated error numerator `e`.
    pub fn bounds(&self, q: u64, e: &BigUint) -> (BigUint, BigUint) {
        let w = &self.rho * q;
        let lo = if *e > w { e - &w } else { BigUint::zero() };
        let hi = e + w;
        (lo, hi)
    }

    /// Calls `f(q, e)` for `q` in `start..end`, where `e / den` is the
    /// truncated `max_j ||q P_j||`.
    pub fn run(&self, start: u64, end: u64, mut f: impl FnMut(u64, &BigUint)) {
        if start >= end {
            return;
        }
        let mut s: Vec<BigUint> = self
            .residues
            .iter()
            .map(|r| (r * start) % &self.den)
            .collect();
        let mut best = BigUint::zero();
        for q in start..end {
            best.set_zero();
            for s_j in &s {
                if *s_j <= self.half {
                    if *s_j > best {
                        best.clone_from(s_j);
                    }
                } else {
                    let other = &self.den - s_j;
                    if other > best {
                        best = other;
                    }
                }
            }
            f(q, &best);
            for (s_j, r_j) in s.iter_mut().zip(&self.residues) {
                *s_j += r_j;
                if *s_j >= self.den {
                    *s_j -= &self.den;
                }
            }
        }
    }
}

pub fn chunks(qmax: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = 1u64;
    while a <= qmax {
        let b = a.saturating_add(CHUNK).min(qmax + 1);
        out.push((a, b));
        a = b;
    }
    out
}
