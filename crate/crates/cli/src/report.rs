use std::collections::BTreeMap;
use std::fmt::Write as _;

use roapprox::MeterStats;
use serde::Serialize;
use serde_json::Value;

pub type Params = BTreeMap<String, Value>;

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct MeterReport {
    pub charged_peak_words: u64,
    pub primitive_words: u64,
    pub input_accesses: u64,
    pub pass_estimate: u64,
}

impl From<MeterStats> for MeterReport {
    fn from(s: MeterStats) -> Self {
        MeterReport {
            charged_peak_words: s.charged_peak_words,
            primitive_words: s.primitive_words,
            input_accesses: s.input_accesses,
            pass_estimate: s.pass_estimate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub algorithm: String,
    pub params: Params,
    pub solution: Vec<u32>,
    pub size: usize,
    pub valid: bool,
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
    pub meter: MeterReport,
    pub runtime_ms: f64,
}

/// What a budgeted run prints when it answers NO.
#[derive(Debug, Clone, Serialize)]
pub struct NoReport {
    pub algorithm: String,
    pub params: Params,
    pub verdict: &'static str,
    pub meter: MeterReport,
    pub runtime_ms: f64,
}

/// `size/opt`, or `opt/size` when maximizing; `None` when the quotient is undefined.
pub fn ratio(size: usize, opt: usize, maximize: bool) -> Option<f64> {
    let (num, den) = if maximize { (opt, size) } else { (size, opt) };
    match (num, den) {
        (0, 0) => Some(1.0),
        (_, 0) => None,
        _ => Some(num as f64 / den as f64),
    }
}

fn ids(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn params_line(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn meter_lines(out: &mut String, m: &MeterReport) {
    let _ = writeln!(out, "charged_peak_words {}", m.charged_peak_words);
    let _ = writeln!(out, "primitive_words {}", m.primitive_words);
    let _ = writeln!(out, "input_accesses {}", m.input_accesses);
    let _ = writeln!(out, "pass_estimate {}", m.pass_estimate);
}

impl SolutionReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algorithm {}", self.algorithm);
        let _ = writeln!(out, "params {}", params_line(&self.params));
        let _ = writeln!(out, "solution {}", ids(&self.solution));
        let _ = writeln!(out, "size {}", self.size);
        let _ = writeln!(out, "valid {}", self.valid);
        if let Some(opt) = self.opt {
            let _ = writeln!(out, "opt {opt}");
        }
        if let Some(r) = self.ratio {
            let _ = writeln!(out, "ratio {r:.4}");
        }
        meter_lines(&mut out, &self.meter);
        let _ = writeln!(out, "runtime_ms {:.3}", self.runtime_ms);
        out
    }
}

impl NoReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algorithm {}", self.algorithm);
        let _ = writeln!(out, "params {}", params_line(&self.params));
        let _ = writeln!(out, "verdict NO");
        meter_lines(&mut out, &self.meter);
        let _ = writeln!(out, "runtime_ms {:.3}", self.runtime_ms);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_cases() {
        assert_eq!(ratio(4, 2, false), Some(2.0));
        assert_eq!(ratio(2, 4, true), Some(2.0));
        assert_eq!(ratio(0, 0, false), Some(1.0));
        assert_eq!(ratio(0, 3, true), None);
    }

    #[test]
    fn keys_exact() {
        let r = SolutionReport {
            algorithm: "x".into(),
            params: Params::new(),
            solution: vec![1],
            size: 1,
            valid: true,
            opt: None,
            ratio: None,
            meter: MeterReport::default(),
            runtime_ms: 0.0,
        };
        let v: Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        let mut want = ["algorithm", "params", "solution", "size", "valid", "opt", "ratio", "meter", "runtime_ms"];
        want.sort();
        assert_eq!(keys, want);
    }
}
