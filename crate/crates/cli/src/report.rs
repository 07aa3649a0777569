use serde_json::{json, Value};
use symplaw_core::Result;

/// One named check: `trials` runs that stop at the first counterexample.
pub struct Check {
    name: &'static str,
    trials: u64,
    passed: bool,
    witness: Option<Value>,
}

impl Check {
    pub fn run(name: &'static str, trials: u64, mut trial: impl FnMut(u64) -> Result<Option<Value>>) -> Check {
        for k in 0..trials {
            let witness = match trial(k) {
                Ok(None) => continue,
                Ok(Some(w)) => w,
                Err(e) => json!({ "error": e.to_string() }),
            };
            return Check { name, trials: k + 1, passed: false, witness: Some(witness) };
        }
        Check { name, trials, passed: true, witness: None }
    }

    pub fn single(name: &'static str, trial: impl FnOnce() -> Result<Option<Value>>) -> Check {
        let mut trial = Some(trial);
        Check::run(name, 1, |_| trial.take().expect("runs once")())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "name": self.name, "passed": self.passed, "trials": self.trials });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

/// `{"suite", "passed", "checks", ...extra}`.
pub fn suite_report(suite: &str, checks: &[Check], extra: Value) -> Value {
    let mut v = json!({
        "suite": suite,
        "passed": checks.iter().all(|c| c.passed),
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    });
    if let Value::Object(fields) = extra {
        for (k, x) in fields {
            v[k] = x;
        }
    }
    v
}
