//! Reals with prescribed approximation behaviour.

mod construct;
mod psi;

pub use construct::{
    check_c_hypothesis, make_lambda1, make_prescribed_psi, verify_membership, Construction,
    LevelTranscript, MembershipReport,
};
pub use psi::{PsiKind, PsiSpec};
