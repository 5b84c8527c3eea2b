use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::eval::eval_error_sharp;
use super::search::{level_denominators, theta_estimate, SearchReport};
use crate::arith::{exponent_of, rat_int, ratio_to_f64};
use crate::contfrac::{lambda1_estimate, Lambda1Estimate, ProgrammaticReal};
use crate::error::{Error, Result};
use crate::factory::make_lambda1;
use crate::polycurve::{profile, Curve};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelExponent {
    pub level: usize,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub x0: BigUint,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub q: BigUint,
    #[serde(serialize_with = "crate::report::ser_opt_f64")]
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub lambda1: BigRational,
    pub d_k: usize,
    pub diameter: usize,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub predicted: BigRational,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub measured: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub deviation: f64,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub zeta: ProgrammaticReal,
    pub lambda1_estimate: Lambda1Estimate,
    /// Set when the hypothesis gate was skipped; the comparison is data only.
    pub exploratory: bool,
    /// Witnesses `q = x0^{d_k}` for the lower inclusion, one per level.
    pub levels: Vec<LevelExponent>,
    pub search: SearchReport,
}

/// Builds a real with `lambda_1 = L` and compares the measured simultaneous
/// exponent on the curve with `(L - d_k + 1) / d_k`.
pub fn verify_exponent_identity(curve: &Curve, l: &BigRational, depth: usize, q_max: u64) -> Result<IdentityReport> {
    measure(curve, l, depth, q_max, false)
}

/// Same measurement for parameters with predicted exponent at most the
/// diameter, where the identity is only conjectural. Never rejects on the
/// hypothesis and asserts nothing.
pub fn explore_exponent_identity(curve: &Curve, l: &BigRational, depth: usize, q_max: u64) -> Result<IdentityReport> {
    measure(curve, l, depth, q_max, true)
}

fn measure(curve: &Curve, l: &BigRational, depth: usize, q_max: u64, exploratory: bool) -> Result<IdentityReport> {
    let prof = profile(curve);
    let d_k = prof.d_max;
    let t = prof.normalized_diameter;
    let dk = rat_int(BigInt::from(d_k));
    let predicted = (l - &dk + BigRational::one()) / &dk;
    if !exploratory && predicted <= rat_int(BigInt::from(t)) {
        return Err(Error::Hypothesis(format!(
            "predicted exponent {} does not exceed the diameter t = {t}",
            crate::report::fmt_rat(&predicted)
        )));
    }
    if depth < 2 {
        return Err(Error::InvalidParameter("verification needs depth >= 2".into()));
    }
    let zeta = make_lambda1(l, 2, depth + 2)?;
    let search = theta_estimate(curve, &zeta, depth, q_max)?;
    let measured = search.theta_estimate.unwrap_or(f64::NEG_INFINITY);
    let mut levels = Vec::new();
    for (i, x0) in level_denominators(&zeta, depth)?.into_iter().enumerate() {
        let q = num_traits::pow(x0.clone(), d_k);
        let e = eval_error_sharp(curve, &zeta, &q)?;
        levels.push(LevelExponent {
            level: i + 1,
            exponent: exponent_of(&e.value, &q),
            x0,
            q,
        });
    }
    Ok(IdentityReport {
        lambda1: l.clone(),
        d_k,
        diameter: t,
        deviation: measured - ratio_to_f64(&predicted),
        predicted,
        measured,
        lambda1_estimate: lambda1_estimate(&zeta, depth)?,
        exploratory,
        zeta,
        levels,
        search,
    })
}
