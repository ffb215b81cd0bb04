//! Suites: ordered lists of checks with expected outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::grid::{CheckerConfig, GridRef, SweepMode};
use crate::report::{CheckReport, Status, SCHEMA};
use crate::runner::run_checker;

pub const SUITE_SCHEMA: &str = "adlv-suite/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// No counterexample; zero hypothesis hits only warns.
    #[default]
    Clean,
    /// At least one counterexample.
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub lemma_id: String,
    #[serde(default)]
    pub expect: Expect,
    /// Overrides the suite grid for this check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridRef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub grid: GridRef,
    #[serde(default = "default_cap")]
    pub instance_cap: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: SweepMode,
    #[serde(default)]
    pub hypothesis_q: bool,
    #[serde(default)]
    pub checks: Vec<SuiteCheck>,
}

fn default_cap() -> u64 {
    1_000_000
}

impl Suite {
    pub fn parse(text: &str) -> LabResult<Self> {
        serde_json::from_str(text).map_err(|e| LabError::ConfigParse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> LabResult<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub lemma_id: String,
    pub expect: Expect,
    pub status: Status,
    pub ok: bool,
    /// Clean runs with zero hypothesis hits.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub name: String,
    pub reports: Vec<CheckReport>,
    pub outcomes: Vec<Outcome>,
    pub instances_checked: u64,
    pub ok: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }

    pub fn to_text(&self) -> String {
        let mut out = crate::report::text_table(&self.reports);
        for o in &self.outcomes {
            if !o.ok {
                out.push_str(&format!("UNEXPECTED {} ({:?}, expected {:?})\n", o.lemma_id, o.status, o.expect));
            } else if o.vacuous {
                out.push_str(&format!("warning: {} had no hypothesis hits\n", o.lemma_id));
            }
        }
        out.push_str(&format!("suite {}: {}\n", self.name, if self.ok { "ok" } else { "FAILED" }));
        out
    }
}

/// Runs checks in declared order.
pub fn run_suite(s: &Suite) -> LabResult<SuiteReport> {
    let mut reports = Vec::new();
    let mut outcomes = Vec::new();
    for c in &s.checks {
        let cfg = CheckerConfig {
            lemma_id: c.lemma_id.clone(),
            grid: c.grid.clone().unwrap_or_else(|| s.grid.clone()),
            instance_cap: s.instance_cap,
            seed: s.seed,
            mode: s.mode,
            sample_rate: 0.1,
            hypothesis_q: s.hypothesis_q,
        };
        let r = run_checker(&cfg)?;
        let ok = match c.expect {
            Expect::Clean => matches!(r.status, Status::Pass | Status::Vacuous),
            Expect::Counterexample => r.status == Status::Fail,
        };
        outcomes.push(Outcome {
            lemma_id: c.lemma_id.clone(),
            expect: c.expect,
            status: r.status,
            ok,
            vacuous: r.status == Status::Vacuous,
        });
        reports.push(r);
    }
    let ok = outcomes.iter().all(|o| o.ok);
    let instances_checked = reports.iter().map(|r| r.instances_checked).sum();
    Ok(SuiteReport { schema: SCHEMA.into(), name: s.name.clone(), reports, outcomes, instances_checked, ok })
}
