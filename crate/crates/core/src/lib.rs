//! Arithmetic in skew inverse Laurent series rings over finite tabulated
//! coefficient rings, with the radical machinery needed to analyse them.
//!
//! The crate has four layers:
//!
//! * [`ring`]: finite rings as operation tables, derivations, ideals,
//!   quotients.
//! * [`series`]: truncated series in `x` and `x^-1` where moving a
//!   coefficient past a power of `x` applies the derivation.
//! * [`radicals`]: left T-nilpotency, annihilator towers and the radical
//!   sets built from them.
//! * [`verify`]: randomized and exhaustive property suites producing
//!   machine-readable reports.

pub mod radicals;
pub mod ring;
pub mod series;
pub mod set;
pub mod verify;

pub use radicals::{TNilpVerdict, is_left_t_nilpotent};
pub use ring::{Derivation, Elem, FiniteRing, Ideal, Sidedness};
pub use series::{PrecisionPolicy, Series, SeriesRing};
pub use set::ElemSet;
pub use verify::{
    default_catalog, reports_to_jsonl, run_all, Fixture, ReportStatus, VerificationReport,
    VerifyConfig,
};
