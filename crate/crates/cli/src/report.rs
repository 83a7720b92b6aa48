//! The report every command produces, and its text rendering.

use std::fmt::{self, Display, Write as _};

use odeinv::compare::{Classification, Verdict};
use odeinv::expr::{Expr, RatFunc};
use odeinv::ode::Ode;
use odeinv::report::{IdentityReport, Status};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub verdict: Option<VerdictReport>,
    pub scalars_sd: Option<Vec<ScalarEntry>>,
    pub scalars_bgd: Option<Vec<ScalarEntry>>,
    pub identities: Vec<IdentityReport>,
    /// Wall-clock time; only filled in on request so that reports stay
    /// byte-identical across runs.
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transformed: Option<OdeText>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trials: Vec<TrialSummary>,
}

impl RunReport {
    pub fn empty() -> RunReport {
        RunReport {
            verdict: None,
            scalars_sd: None,
            scalars_bgd: None,
            identities: Vec::new(),
            timing_ms: None,
            transformed: None,
            trials: Vec::new(),
        }
    }

    pub fn failures(&self) -> usize {
        self.identities.iter().filter(|r| !r.passed()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f5: Option<String>,
    pub probabilistic: bool,
}

impl From<&Classification> for VerdictReport {
    fn from(c: &Classification) -> VerdictReport {
        let (x, y, f5) = match &c.verdict {
            Verdict::GeneralPositionAt { x, y, f5 } => (Some(x.to_string()), Some(y.to_string()), Some(f5.to_string())),
            _ => (None, None, None),
        };
        VerdictReport {
            kind: c.verdict.kind().to_string(),
            x,
            y,
            f5,
            probabilistic: c.probabilistic,
        }
    }
}

impl Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.x, &self.y, &self.f5) {
            (Some(x), Some(y), Some(v)) => write!(f, "general position at ({x}, {y}), F^5 = {v}")?,
            _ => f.write_str(&self.kind.replace('_', " "))?,
        }
        if self.probabilistic {
            f.write_str(" (probabilistic)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Closed form in the coordinates and `F`.
    Symbolic,
    Exact,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarEntry {
    pub name: String,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeText {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "S")]
    pub s: String,
}

impl From<&Ode<RatFunc>> for OdeText {
    fn from(o: &Ode<RatFunc>) -> OdeText {
        let s = |k: &RatFunc| Expr::from(k).to_string();
        OdeText {
            p: s(&o.p),
            q: s(&o.q),
            r: s(&o.r),
            s: s(&o.s),
        }
    }
}

impl Display for OdeText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "P = {}", self.p)?;
        writeln!(f, "Q = {}", self.q)?;
        writeln!(f, "R = {}", self.r)?;
        writeln!(f, "S = {}", self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub index: usize,
    pub ode: OdeText,
    pub verdict: VerdictReport,
    pub checked: usize,
    pub failed: usize,
}

fn status_word(s: &Status) -> String {
    match s {
        Status::ExactZero => "exact".into(),
        Status::NumericZero { points, .. } => format!("numeric/{points}"),
        Status::Failed => "FAILED".into(),
    }
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    if let Some(v) = &r.verdict {
        let _ = writeln!(out, "verdict: {v}");
    }
    if let Some(t) = &r.transformed {
        let _ = write!(out, "{t}");
    }
    for (title, scalars) in [("first family", &r.scalars_sd), ("second family", &r.scalars_bgd)] {
        if let Some(list) = scalars {
            let _ = writeln!(out, "{title}:");
            for s in list {
                let tag = match s.provenance {
                    Provenance::Symbolic => "",
                    Provenance::Exact => "  [exact]",
                    Provenance::Numeric => "  [numeric]",
                };
                let _ = writeln!(out, "  {} = {}{tag}", s.name, s.value);
            }
        }
    }
    for t in &r.trials {
        let _ = writeln!(out, "trial {}: {} ({} checked, {} failed)", t.index, t.verdict, t.checked, t.failed);
    }
    if !r.identities.is_empty() {
        for i in &r.identities {
            let _ = write!(out, "{:<12} {}", status_word(&i.status), i.name);
            if !i.passed() {
                let _ = write!(out, "\n             residual: {}", i.residual);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} identities, {} failed",
            r.identities.len(),
            r.failures()
        );
    }
    if let Some(ms) = r.timing_ms {
        let _ = writeln!(out, "time: {ms} ms");
    }
    out
}
