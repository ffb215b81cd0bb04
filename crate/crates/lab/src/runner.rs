//! Running one checker over a grid.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde_json::Value;

use crate::checkers::{self, Checker};
use crate::context::CellCtx;
use crate::error::{LabError, LabResult};
use crate::grid::{self, Cell, CheckerConfig, SweepMode};
use crate::report::{CheckReport, Counterexample, Status, SCHEMA};
use crate::sink::{Mode, Sink};

/// Counterexamples stored per report.
pub const KEEP: usize = 20;

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("ADLV_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool")
    })
}

/// Splits `id~negate` / `id~drop` into the base id and the twin mode.
pub fn parse_id(id: &str) -> LabResult<(&str, Mode)> {
    match id.split_once('~') {
        None => Ok((id, Mode::Normal)),
        Some((base, "negate")) => Ok((base, Mode::NegateConclusion)),
        Some((base, "drop")) => Ok((base, Mode::DropHypothesis)),
        Some(_) => Err(LabError::UnknownLemma(id.into())),
    }
}

struct CellOutcome {
    checked: u64,
    hits: u64,
    failures: u64,
    witnesses: Vec<Value>,
    error: Option<String>,
}

fn run_cell(c: &Checker, cell: &Cell, mode: Mode, cfg: &CheckerConfig, idx: usize) -> CellOutcome {
    let mut sink = Sink::new(mode, KEEP);
    if cfg.mode == SweepMode::Sampled {
        let seed = cfg.seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        sink = sink.sampled(seed, cfg.sample_rate);
    }
    let res = CellCtx::new(cell).and_then(|ctx| (c.run)(&ctx, &mut sink));
    CellOutcome {
        checked: sink.checked,
        hits: sink.hits,
        failures: sink.failures,
        witnesses: sink.witnesses,
        error: res.err().map(|e| e.to_string()),
    }
}

pub fn run_checker(cfg: &CheckerConfig) -> LabResult<CheckReport> {
    let (base, mode) = parse_id(&cfg.lemma_id)?;
    let c = checkers::lookup(base)?;
    let grid = cfg.grid.resolve()?;
    let cells = grid::cells(&grid, c.kind)?;
    if cells.is_empty() {
        return Err(LabError::EmptyUniverse(cfg.lemma_id.clone()));
    }
    let outcomes: Vec<CellOutcome> =
        pool().install(|| cells.par_iter().enumerate().map(|(i, cell)| run_cell(c, cell, mode, cfg, i)).collect());

    let mut report = CheckReport {
        schema: SCHEMA.into(),
        lemma_id: cfg.lemma_id.clone(),
        quote: c.quote.into(),
        mode,
        version: crate::VERSION.into(),
        config: cfg.clone(),
        cells: cells.len(),
        cells_completed: 0,
        instances_checked: 0,
        hits: 0,
        counterexample_count: 0,
        counterexamples: Vec::new(),
        status: Status::Pass,
        errors: Vec::new(),
    };
    let mut over = false;
    for (cell, o) in cells.iter().zip(outcomes) {
        if report.instances_checked + o.checked > cfg.instance_cap {
            over = true;
            break;
        }
        report.cells_completed += 1;
        report.instances_checked += o.checked;
        report.hits += o.hits;
        report.counterexample_count += o.failures;
        for w in o.witnesses {
            if report.counterexamples.len() < KEEP {
                report.counterexamples.push(Counterexample { cell: cell.clone(), witness: w });
            }
        }
        if let Some(e) = o.error {
            report.errors.push(format!("{}: {e}", serde_json::to_string(cell).unwrap()));
        }
    }
    report.status = if !report.errors.is_empty() {
        Status::Error
    } else if over {
        Status::BudgetExceeded
    } else if report.counterexample_count > 0 {
        Status::Fail
    } else if report.hits == 0 {
        Status::Vacuous
    } else {
        Status::Pass
    };
    Ok(report)
}

/// Re-runs every stored counterexample in isolation; `true` where the failure recurs.
pub fn replay(report: &CheckReport) -> LabResult<Vec<bool>> {
    let (base, mode) = parse_id(&report.lemma_id)?;
    let c = checkers::lookup(base)?;
    report
        .counterexamples
        .iter()
        .map(|cx| {
            let ctx = CellCtx::new(&cx.cell)?;
            let mut sink = Sink::new(mode, 1).replaying(cx.witness.clone());
            (c.run)(&ctx, &mut sink)?;
            Ok(sink.replayed == Some(true))
        })
        .collect()
}
