//! Seeded, reproducible verification suites and the CLT iteration.
//!
//! Trial `i` of a suite draws from its own ChaCha stream `(seed, i)`, so
//! results do not depend on how trials are scheduled across threads.

mod clt;
mod suites;

use std::fmt::Write as _;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::jsonfmt::{fmt_f64, nullable_f64, to_json_string};

pub use clt::{clt_run, fit_log_slope, CltSeries, CltStep, CLT_ALPHAS};
pub use suites::{
    run_suite, suite_clt, suite_duality, suite_entropy, suite_extremality, suite_fisher, suite_holevo,
    suite_min_output, suite_monotonicity, suite_stability, suite_synthesis, SuiteConfig, SuiteName,
};

/// How a record's value is compared to its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `value <= bound + tol`
    AtMost,
    /// `value >= bound - tol`
    AtLeast,
    /// Reported only.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub index: usize,
    pub metric: String,
    #[serde(deserialize_with = "nullable_f64")]
    pub value: f64,
    #[serde(deserialize_with = "nullable_f64")]
    pub bound: f64,
    pub check: Check,
    pub tol: f64,
    pub pass: bool,
}

impl Record {
    fn new(index: usize, metric: impl Into<String>, value: f64, bound: f64, check: Check, tol: f64) -> Self {
        let pass = match check {
            Check::AtMost => value <= bound + tol,
            Check::AtLeast => value >= bound - tol,
            Check::Info => true,
        };
        Self { index, metric: metric.into(), value, bound, check, tol, pass }
    }

    pub fn at_most(index: usize, metric: impl Into<String>, value: f64, bound: f64, tol: f64) -> Self {
        Self::new(index, metric, value, bound, Check::AtMost, tol)
    }

    pub fn at_least(index: usize, metric: impl Into<String>, value: f64, bound: f64, tol: f64) -> Self {
        Self::new(index, metric, value, bound, Check::AtLeast, tol)
    }

    pub fn info(index: usize, metric: impl Into<String>, value: f64) -> Self {
        Self::new(index, metric, value, f64::NAN, Check::Info, 0.0)
    }

    /// A failed computation, kept as a failing record.
    pub fn error(index: usize, metric: impl Into<String>, err: &crate::Error) -> Self {
        let mut r = Self::new(index, format!("{}: {err}", metric.into()), f64::NAN, f64::NAN, Check::Info, 0.0);
        r.pass = false;
        r
    }

    /// Amount by which the relation fails, ignoring the tolerance; 0 when it holds.
    pub fn violation(&self) -> f64 {
        let v = match self.check {
            Check::AtMost => self.value - self.bound,
            Check::AtLeast => self.bound - self.value,
            Check::Info => 0.0,
        };
        if v.is_nan() {
            0.0
        } else {
            v.max(0.0)
        }
    }
}

/// Run parameters echoed into every report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub configs: Vec<String>,
    pub alphas: Vec<String>,
    pub trials: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub suite: String,
    pub seed: u64,
    pub params: Params,
    pub records: Vec<Record>,
    pub pass: bool,
    #[serde(deserialize_with = "nullable_f64")]
    pub max_violation: f64,
    pub failures: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentReport {
    pub fn new(suite: &str, seed: u64, params: Params, records: Vec<Record>, elapsed: Duration) -> Self {
        let failures = records.iter().filter(|r| !r.pass).count();
        let max_violation = records.iter().map(Record::violation).fold(0.0, f64::max);
        Self { suite: suite.into(), seed, params, records, pass: failures == 0, max_violation, failures, elapsed }
    }

    pub fn failed_records(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        to_json_string(self).expect("reports serialize")
    }

    /// One row per record: `suite,seed,index,metric,value,bound,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,seed,index,metric,value,bound,pass\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.suite,
                self.seed,
                r.index,
                csv_field(&r.metric),
                fmt_f64(r.value),
                fmt_f64(r.bound),
                r.pass
            );
        }
        out
    }

    /// Single-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} seed={} records={} failures={} max_violation={} {}",
            self.suite,
            self.seed,
            self.records.len(),
            self.failures,
            fmt_f64(self.max_violation),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `count` independent trials, in order, on up to `jobs` threads.
pub fn run_trials<T, F>(jobs: usize, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if jobs <= 1 {
        return (0..count).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build();
    match pool {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
        Err(_) => (0..count).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn record_checks() {
        assert!(Record::at_most(0, "m", 1.0, 1.0, 0.0).pass);
        assert!(!Record::at_most(0, "m", 1.1, 1.0, 0.05).pass);
        assert!(Record::at_least(0, "m", 0.99, 1.0, 0.02).pass);
        assert!((Record::at_least(0, "m", 0.99, 1.0, 0.02).violation() - 0.01).abs() < 1e-12);
        assert!(Record::info(0, "m", 5.0).pass);
        assert!(!Record::at_most(0, "m", f64::NAN, 1.0, 0.0).pass);
    }

    #[test]
    fn trial_streams_are_independent_of_order() {
        let a: Vec<u64> = run_trials(1, 8, |i| trial_rng(3, i).next_u64());
        let b: Vec<u64> = run_trials(4, 8, |i| trial_rng(3, i).next_u64());
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn report_formats() {
        let records = vec![Record::at_most(0, "norm", 0.5, 1.0, 1e-9), Record::at_least(1, "a,b", 0.0, 1.0, 0.0)];
        let rep = ExperimentReport::new("demo", 7, Params::default(), records, Duration::ZERO);
        assert!(!rep.pass);
        assert_eq!(rep.failures, 1);
        assert_eq!(rep.max_violation, 1.0);
        let csv = rep.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("demo,7,1,\"a,b\",0.0000000000000000e0,1.0000000000000000e0,false"));
        let back: ExperimentReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back.records, rep.records);
    }
}
