//! Versioned report envelope and its JSON / CSV renderings.

use serde::Serialize;
use serde_json::Value;

use supnorm_core::{Partition, Rat, SymPoly};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "supnorm";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// A budget ran out; the results present are correct but incomplete.
    Partial,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Partial => 3,
        }
    }

    /// Worst of the two, with `Fail` dominating `Partial`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Partial, _) | (_, Verdict::Partial) => Verdict::Partial,
            _ => Verdict::Pass,
        }
    }
}

/// Rows for ladder-style experiments.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub result: Value,
    pub table: Option<Table>,
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a Value,
    pub verdict: Verdict,
    pub result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl<'a> Report<'a> {
    pub fn new(command: &'a str, config: &'a Value, outcome: &'a Outcome, timing: Option<f64>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            version: VERSION,
            command,
            config,
            verdict: outcome.verdict,
            result: &outcome.result,
            timing: timing.map(|elapsed_seconds| Timing { elapsed_seconds }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are always serializable");
        s.push('\n');
        s
    }

    /// CSV body preceded by `#` lines carrying the version stamp and config.
    pub fn to_csv(&self, table: &Table) -> Result<String, csv::Error> {
        let mut out = format!(
            "# {TOOL} {VERSION} schema {SCHEMA_VERSION} command {} verdict {}\n# config {}\n",
            self.command,
            serde_json::to_string(&self.verdict).unwrap_or_default().trim_matches('"'),
            serde_json::to_string(self.config).unwrap_or_default(),
        );
        if let Some(t) = &self.timing {
            out.push_str(&format!("# elapsed_seconds {}\n", t.elapsed_seconds));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        let body = w.into_inner().map_err(|e| e.into_error())?;
        out.push_str(&String::from_utf8_lossy(&body));
        Ok(out)
    }
}

pub fn rat_str(x: &Rat) -> String {
    x.to_string()
}

pub fn partition_str(a: &Partition) -> String {
    a.to_string()
}

/// Monomial-symmetric expansion as `[{exponent, coeff}]`, leading term first.
pub fn sympoly_json(f: &SymPoly) -> Value {
    Value::Array(
        f.terms()
            .iter()
            .rev()
            .map(|(e, c)| serde_json::json!({ "exponent": e, "coeff": rat_str(c) }))
            .collect(),
    )
}
