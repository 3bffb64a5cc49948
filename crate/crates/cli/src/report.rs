use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    fn tag(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "skip",
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::Pass,
            detail: Some(detail.into()).filter(|d| !d.is_empty()),
            reason: None,
            witness: None,
        }
    }

    /// A failure always carries a witness.
    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::Fail,
            detail: None,
            reason: None,
            witness: Some(witness),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::Skipped,
            detail: None,
            reason: Some(reason.into()),
            witness: None,
        }
    }

    pub fn verdict(
        name: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        witness: impl FnOnce() -> Value,
    ) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            let mut c = Self::fail(name, witness());
            c.detail = Some(detail.into()).filter(|d| !d.is_empty());
            c
        }
    }
}

/// What was asked for, echoed into the report.
#[derive(Serialize, Clone, Debug, Default, PartialEq)]
pub struct Request {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<usize>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub job: Request,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, job: Request, checks: Vec<Check>, data: Map<String, Value>) -> Self {
        let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if checks.iter().any(|c| c.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Skipped
        };
        Self {
            command: command.into(),
            job,
            verdict,
            checks,
            data,
            timing_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Fail { 1 } else { 0 }
    }

    pub fn to_json(&self) -> String {
        crate::doc::to_text(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.job.input);
        for (k, v) in [
            ("contraction", self.job.contraction.clone()),
            ("points", self.job.points.clone()),
            ("degrees", self.job.degrees.map(|d| d.to_string())),
            ("weights", self.job.weights.map(|w| w.to_string())),
        ] {
            if let Some(v) = v {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        out.push_str(&format!("verdict: {}\n", self.verdict.tag()));
        for c in &self.checks {
            out.push_str(&format!("[{}] {}", c.verdict.tag(), c.name));
            if let Some(d) = c.detail.as_ref().or(c.reason.as_ref()) {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                out.push_str(&format!("       witness: {w}\n"));
            }
        }
        for (k, v) in &self.data {
            text_value(&mut out, k, v, 0);
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("timing: {t} ms\n"));
        }
        out
    }
}

fn text_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        Value::Array(items) if items.iter().all(Value::is_string) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for i in items {
                out.push_str(&format!("{pad}  {}\n", i.as_str().unwrap_or_default()));
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                text_value(out, k, x, indent + 1);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}
