//! Property suites for the results the engine is built around, producing
//! structured, reproducible reports.
//!
//! Each suite checks one statement on one fixture. Hypotheses are checked
//! before anything else: a fixture outside a suite's hypothesis yields a
//! skip record with the reason, never a silent pass. Randomized suites
//! draw from a private stream derived from (seed, suite, fixture), so
//! reports are reproducible and independent of scheduling.

mod counterexample;
mod fixtures;
mod suites;

pub use counterexample::{counterexample_growth, CounterexampleError, CounterexampleOutcome};
pub use fixtures::{default_catalog, Fixture};
pub use suites::{
    suite_counterexample, suite_delta_compat, suite_delta_orbit, suite_higher_and_prime,
    suite_ideal_lifts, suite_main_theorem, suite_series_tnilp,
};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Knobs shared by every suite run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Budget for randomized cases per suite per fixture.
    pub trials: usize,
    /// Truncation depth for series work inside suites.
    pub floor_drop: u32,
    /// Length up to which non-membership witnesses are pumped at series level.
    pub witness_len: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: 200,
            floor_drop: 24,
            witness_len: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportStatus {
    Passed,
    Failed,
    /// Hypothesis not met; nothing was asserted.
    Skipped { reason: String },
    /// Some obligations could not be checked; the rest were.
    Partial { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub case: String,
    pub expected: String,
    pub got: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub fixture: String,
    pub status: ReportStatus,
    pub cases_run: u64,
    pub passed: u64,
    pub failures: Vec<FailureRecord>,
    pub seed: u64,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    /// One-line human summary, timing-free so golden outputs stay stable.
    pub fn summary_line(&self) -> String {
        let status = match &self.status {
            ReportStatus::Passed => "PASS".to_string(),
            ReportStatus::Failed => "FAIL".to_string(),
            ReportStatus::Skipped { reason } => format!("SKIP ({reason})"),
            ReportStatus::Partial { reason } => format!("PARTIAL ({reason})"),
        };
        format!(
            "{:<18} {:<16} cases={:<5} passed={:<5} {}",
            self.suite, self.fixture, self.cases_run, self.passed, status
        )
    }
}

/// One structured-text object per report, one per line, stable field order.
pub fn reports_to_jsonl(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}

/// Accumulates cases for one (suite, fixture) run.
pub(crate) struct SuiteRun {
    suite: String,
    fixture: String,
    seed: u64,
    cases_run: u64,
    passed: u64,
    failures: Vec<FailureRecord>,
    start: Instant,
}

impl SuiteRun {
    pub(crate) fn new(suite: &str, fixture: &str, cfg: &VerifyConfig) -> SuiteRun {
        SuiteRun {
            suite: suite.to_string(),
            fixture: fixture.to_string(),
            seed: cfg.seed,
            cases_run: 0,
            passed: 0,
            failures: Vec::new(),
            start: Instant::now(),
        }
    }

    /// Private deterministic stream for this (seed, suite, fixture).
    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(stream_seed(self.seed, &self.suite, &self.fixture))
    }

    pub(crate) fn pass(&mut self) {
        self.cases_run += 1;
        self.passed += 1;
    }

    pub(crate) fn fail(&mut self, case: String, expected: String, got: String, witness: String) {
        self.cases_run += 1;
        self.failures.push(FailureRecord {
            case,
            expected,
            got,
            witness,
        });
    }

    pub(crate) fn check(&mut self, ok: bool, case: &str, expected: &str, got: &str, witness: &str) {
        if ok {
            self.pass();
        } else {
            self.fail(
                case.to_string(),
                expected.to_string(),
                got.to_string(),
                witness.to_string(),
            );
        }
    }

    pub(crate) fn skip(self, reason: String) -> VerificationReport {
        self.close(ReportStatus::Skipped { reason })
    }

    pub(crate) fn partial(self, reason: String) -> VerificationReport {
        // Recorded failures trump partial coverage.
        if self.failures.is_empty() {
            self.close(ReportStatus::Partial { reason })
        } else {
            self.close(ReportStatus::Failed)
        }
    }

    pub(crate) fn finish(self) -> VerificationReport {
        let status = if self.failures.is_empty() {
            ReportStatus::Passed
        } else {
            ReportStatus::Failed
        };
        self.close(status)
    }

    fn close(self, status: ReportStatus) -> VerificationReport {
        VerificationReport {
            suite: self.suite,
            fixture: self.fixture,
            status,
            cases_run: self.cases_run,
            passed: self.passed,
            failures: self.failures,
            seed: self.seed,
            elapsed_ms: self.start.elapsed().as_millis(),
        }
    }
}

/// Mixes the run seed with the suite and fixture names so each pairing owns
/// an independent stream regardless of execution order.
pub(crate) fn stream_seed(seed: u64, suite: &str, fixture: &str) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in suite.bytes().chain([0xff]).chain(fixture.bytes()) {
        h = splitmix(h ^ u64::from(b));
    }
    splitmix(h)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Every suite on every applicable fixture, plus the growth counterexample.
/// Failures never abort the batch.
pub fn run_all(catalog: &[Fixture], cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    for fx in catalog {
        reports.push(suite_delta_compat(fx, cfg));
        reports.push(suite_ideal_lifts(fx, cfg));
        reports.push(suite_delta_orbit(fx, cfg));
        reports.push(suite_series_tnilp(fx, cfg));
        reports.push(suite_main_theorem(fx, cfg));
        reports.push(suite_higher_and_prime(fx, cfg));
    }
    reports.push(suite_counterexample(2, 3, 3, cfg));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_seeds_separate_suites_and_fixtures() {
        let a = stream_seed(0, "alpha", "z4");
        let b = stream_seed(0, "alpha", "z8");
        let c = stream_seed(0, "beta", "z4");
        let d = stream_seed(1, "alpha", "z4");
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_eq!(a, stream_seed(0, "alpha", "z4"));
        // The separator byte keeps (suite, fixture) concatenations apart.
        assert_ne!(stream_seed(0, "ab", "c"), stream_seed(0, "a", "bc"));
    }

    #[test]
    fn reports_serialize_one_per_line() {
        let r = VerificationReport {
            suite: "demo".into(),
            fixture: "z4".into(),
            status: ReportStatus::Skipped {
                reason: "because".into(),
            },
            cases_run: 3,
            passed: 3,
            failures: vec![],
            seed: 7,
            elapsed_ms: 0,
        };
        let text = reports_to_jsonl(&[r.clone(), r.clone()]);
        assert_eq!(text.lines().count(), 2);
        let back: VerificationReport = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
