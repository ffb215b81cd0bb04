//! Where checkers send their records.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How a record counts as a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Hypothesis holds and conclusion fails.
    #[default]
    Normal,
    /// Hypothesis holds and conclusion holds.
    NegateConclusion,
    /// Conclusion fails, whatever the hypothesis.
    DropHypothesis,
}

impl Mode {
    pub fn suffix(self) -> &'static str {
        match self {
            Mode::Normal => "",
            Mode::NegateConclusion => "~negate",
            Mode::DropHypothesis => "~drop",
        }
    }
}

pub struct Sink {
    pub mode: Mode,
    pub checked: u64,
    pub hits: u64,
    pub failures: u64,
    pub witnesses: Vec<Value>,
    keep: usize,
    sampler: Option<(ChaCha8Rng, u64)>,
    target: Option<Value>,
    /// Outcome of the replayed record, once seen.
    pub replayed: Option<bool>,
}

impl Sink {
    pub fn new(mode: Mode, keep: usize) -> Self {
        Sink { mode, checked: 0, hits: 0, failures: 0, witnesses: Vec::new(), keep, sampler: None, target: None, replayed: None }
    }

    /// Keep each record with probability `rate`.
    pub fn sampled(mut self, seed: u64, rate: f64) -> Self {
        let threshold = (rate.clamp(0.0, 1.0) * u64::MAX as f64) as u64;
        self.sampler = Some((ChaCha8Rng::seed_from_u64(seed), threshold));
        self
    }

    /// Only evaluate the record whose witness equals `target`.
    pub fn replaying(mut self, target: Value) -> Self {
        self.target = Some(target);
        self
    }

    pub fn rec(&mut self, hyp: bool, concl: impl FnOnce() -> bool, witness: impl FnOnce() -> Value) {
        if let Some((rng, t)) = &mut self.sampler {
            if rng.next_u64() > *t {
                return;
            }
        }
        let mut witness = Some(witness);
        let mut wit = None;
        if let Some(target) = &self.target {
            let w = (witness.take().unwrap())();
            if &w != target {
                return;
            }
            wit = Some(w);
        }
        self.checked += 1;
        if hyp {
            self.hits += 1;
        }
        let fail = match self.mode {
            Mode::Normal => hyp && !concl(),
            Mode::NegateConclusion => hyp && concl(),
            Mode::DropHypothesis => !concl(),
        };
        if self.target.is_some() {
            self.replayed = Some(fail);
        }
        if fail {
            self.failures += 1;
            if self.witnesses.len() < self.keep {
                self.witnesses.push(wit.unwrap_or_else(|| (witness.take().unwrap())()));
            }
        }
    }
}
