//! Check reports and their JSON and text renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::grid::{Cell, CheckerConfig};
use crate::sink::Mode;

pub const SCHEMA: &str = "adlv-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// No record satisfied the hypothesis.
    Vacuous,
    BudgetExceeded,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub cell: Cell,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub lemma_id: String,
    pub quote: String,
    pub mode: Mode,
    pub version: String,
    pub config: CheckerConfig,
    pub cells: usize,
    pub cells_completed: usize,
    pub instances_checked: u64,
    pub hits: u64,
    pub counterexample_count: u64,
    pub counterexamples: Vec<Counterexample>,
    pub status: Status,
    pub errors: Vec<String>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn is_clean(&self) -> bool {
        self.status == Status::Pass
    }
}

fn header() -> String {
    format!("{:<22} {:<15} {:>10} {:>10} {:>8}\n", "lemma", "status", "checked", "hits", "cex")
}

fn row(r: &CheckReport) -> String {
    let status = serde_json::to_value(r.status).unwrap();
    format!(
        "{:<22} {:<15} {:>10} {:>10} {:>8}\n",
        r.lemma_id,
        status.as_str().unwrap(),
        r.instances_checked,
        r.hits,
        r.counterexample_count
    )
}

/// A fixed-width table, one line per report, then the stored counterexamples.
pub fn text_table(reports: &[CheckReport]) -> String {
    let mut out = header();
    for r in reports {
        out.push_str(&row(r));
    }
    for r in reports {
        for c in &r.counterexamples {
            out.push_str(&format!(
                "  {} on {}: {}\n",
                r.lemma_id,
                serde_json::to_string(&c.cell).unwrap(),
                serde_json::to_string(&c.witness).unwrap()
            ));
        }
        for e in &r.errors {
            out.push_str(&format!("  {} error: {e}\n", r.lemma_id));
        }
    }
    out
}

pub fn json_list(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(&serde_json::json!({ "schema": SCHEMA, "reports": reports })).unwrap()
}
