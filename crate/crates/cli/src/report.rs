//! Verification reports: one verdict per check, deterministic for fixed
//! input and config. Wall-times are recorded but excluded from both output
//! formats unless explicitly requested (text only), so reports compare
//! byte-for-byte across runs.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessOut {
    /// 1-based index tuple of the first failing component.
    pub indices: Vec<usize>,
    /// Residual expression, truncated to 10 monomials.
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictEntry {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessOut>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OverallResult {
    Pass,
    Fail,
    Indeterminate,
}

impl OverallResult {
    pub fn exit_code(self) -> i32 {
        match self {
            OverallResult::Pass => 0,
            OverallResult::Fail => 1,
            OverallResult::Indeterminate => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub mode: String,
    pub seed: u64,
    pub trials: u32,
    #[serde(rename = "sample-range")]
    pub sample_range: u64,
    pub parallel: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub config: ConfigEcho,
    pub verdicts: Vec<VerdictEntry>,
    pub result: OverallResult,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn new(command: &str, input: &str, name: Option<&str>, config: ConfigEcho) -> Self {
        Report {
            command: command.to_string(),
            input: input.to_string(),
            name: name.map(str::to_string),
            config,
            verdicts: Vec::new(),
            result: OverallResult::Pass,
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: VerdictEntry) {
        self.verdicts.push(entry);
    }

    pub fn push_simple(&mut self, check: &str, verdict: Verdict) {
        self.push(VerdictEntry {
            check: check.to_string(),
            verdict,
            witness: None,
            data: BTreeMap::new(),
        });
    }

    pub fn record_time(&mut self, label: &str, elapsed: Duration) {
        self.timings.push((label.to_string(), elapsed));
    }

    /// Fail dominates indeterminate dominates pass.
    pub fn finalize(&mut self) {
        let mut result = OverallResult::Pass;
        for v in &self.verdicts {
            match v.verdict {
                Verdict::Fail => {
                    result = OverallResult::Fail;
                    break;
                }
                Verdict::Indeterminate => result = OverallResult::Indeterminate,
                Verdict::Pass => {}
            }
        }
        self.result = result;
    }

    pub fn render_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!("qfrob {}\n", self.command));
        out.push_str(&format!("input: {}\n", self.input));
        if let Some(name) = &self.name {
            out.push_str(&format!("name: {name}\n"));
        }
        out.push_str(&format!(
            "config: mode={} seed={} trials={} sample-range={} parallel={}\n",
            self.config.mode,
            self.config.seed,
            self.config.trials,
            self.config.sample_range,
            self.config.parallel
        ));
        for v in &self.verdicts {
            let verdict = match v.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Indeterminate => "INDETERMINATE",
            };
            out.push_str(&format!("  check {}: {}\n", v.check, verdict));
            if let Some(w) = &v.witness {
                let idx: Vec<String> = w.indices.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "    witness ({}): residual = {}\n",
                    idx.join(","),
                    w.residual
                ));
            }
            for (key, value) in &v.data {
                out.push_str(&format!("    {key} = {value}\n"));
            }
        }
        out.push_str(&format!(
            "result: {}\n",
            match self.result {
                OverallResult::Pass => "pass",
                OverallResult::Fail => "fail",
                OverallResult::Indeterminate => "indeterminate",
            }
        ));
        if with_timings {
            for (label, d) in &self.timings {
                out.push_str(&format!("time {label}: {:.3} ms\n", d.as_secs_f64() * 1e3));
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> ConfigEcho {
        ConfigEcho {
            mode: "symbolic".into(),
            seed: 0,
            trials: 8,
            sample_range: 1_000_000,
            parallel: 1,
        }
    }

    #[test]
    fn result_precedence() {
        let mut r = Report::new("check-poisson", "x.toml", None, config());
        r.push_simple("s1", Verdict::Pass);
        r.finalize();
        assert_eq!(r.result, OverallResult::Pass);
        r.push_simple("s2", Verdict::Indeterminate);
        r.finalize();
        assert_eq!(r.result, OverallResult::Indeterminate);
        r.push_simple("s3", Verdict::Fail);
        r.finalize();
        assert_eq!(r.result, OverallResult::Fail);
        assert_eq!(r.result.exit_code(), 1);
    }

    #[test]
    fn json_omits_timing_and_is_stable() {
        let mut r = Report::new("residuals", "y.toml", Some("fixture"), config());
        r.push_simple("ass1", Verdict::Pass);
        r.record_time("residuals", Duration::from_millis(5));
        r.finalize();
        let a = r.render_json();
        assert!(!a.contains("time"));
        r.record_time("residuals", Duration::from_millis(9));
        let b = r.render_json();
        assert_eq!(a, b);
    }
}
