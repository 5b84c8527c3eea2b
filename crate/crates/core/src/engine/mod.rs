//! Search for good simultaneous approximations on a curve and the checks
//! that accompany them: divisibility certificate, convergent images, the
//! three growth inequalities and multiplicativity.

mod certify;
mod eval;
mod kernel;
mod search;
mod identity;

pub use certify::{
    certify_divisibility, certify_divisibility_tau, certify_scan, certify_with, check_multiplicativity,
    check_growth_inequalities, convergent_image, CertContext, CertRule, CertStatus, Certificate, CertifiedApprox,
    CertifySummary, MultiplicativityCheck, GrowthCheck, MAX_MULTIPLIER,
};
pub use certify::scan_enclosure;
pub use eval::{decide_below, eval_error, eval_error_sharp, poly_enclosure, ErrorEnclosure};
pub use kernel::{ScanKernel, CHUNK};
pub use search::{
    exhaustive_search, level_denominators, record_qs, structural_candidates, structural_search,
    theta_estimate, ApproxRecord, THETA_MIN_BITS, SearchMethod, SearchReport,
};
pub use identity::{explore_exponent_identity, verify_exponent_identity, LevelExponent, IdentityReport};
