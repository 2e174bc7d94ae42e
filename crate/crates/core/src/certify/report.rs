use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::par;

/// One failed trial: the inputs in the external JSON formats, the assertion
/// that failed, and where.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    /// `None` for checks made once per run rather than per trial.
    pub trial: Option<u64>,
    pub assertion: String,
    pub witness: String,
    pub inputs: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub property: String,
    pub attempted: u64,
    pub passed: u64,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
    pub wall_ms: u64,
    pub seed: u64,
}

impl CertificateReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// The report without its wall time. Two runs with the same seed and
    /// inputs produce identical fingerprints regardless of thread count.
    pub fn fingerprint(&self) -> String {
        let mut v = self.to_json();
        v.as_object_mut().expect("object").remove("wall_ms");
        v.to_string()
    }
}

/// Runs `trials` independent trials plus any run-level failures and
/// assembles the report.
pub(crate) fn run_trials<F>(
    property: &str,
    seed: u64,
    trials: u64,
    preliminary: Vec<Counterexample>,
    trial: F,
) -> CertificateReport
where
    F: Fn(u64) -> Result<(), Counterexample> + Sync + Send,
{
    let start = Instant::now();
    let outcomes = par::map_trials(trials, trial);
    let mut counterexamples = preliminary;
    let mut passed = 0;
    for outcome in outcomes {
        match outcome {
            Ok(()) => passed += 1,
            Err(cx) => counterexamples.push(cx),
        }
    }
    CertificateReport {
        property: property.to_string(),
        attempted: trials,
        passed,
        pass: counterexamples.is_empty(),
        counterexamples,
        wall_ms: start.elapsed().as_millis() as u64,
        seed,
    }
}
