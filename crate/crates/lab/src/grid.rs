//! Instance grids and the cells a checker sweeps over.

use std::collections::{BTreeMap, HashSet};

use adlv_core::{sigma, AdmissibleSet, ExtAffElem, Frobenius, Q};
use serde::{Deserialize, Serialize};

use crate::context;
use crate::error::{LabError, LabResult};

fn default_height() -> i64 {
    4
}

fn default_length() -> usize {
    10
}

/// One root datum with a Frobenius, a set of dominant `λ` and a length bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEntry {
    pub datum: String,
    #[serde(default = "default_sigma")]
    pub sigma: String,
    /// Explicit `λ` list; otherwise every dominant `λ` of coroot height at most `max_height`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<Vec<i64>>>,
    #[serde(default = "default_height")]
    pub max_height: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_lambdas: Vec<Vec<i64>>,
    #[serde(default = "default_length")]
    pub length_bound: usize,
}

fn default_sigma() -> String {
    "id".into()
}

impl GridEntry {
    pub fn new(datum: &str, sigma: &str) -> Self {
        GridEntry {
            datum: datum.into(),
            sigma: sigma.into(),
            lambdas: None,
            max_height: default_height(),
            extra_lambdas: Vec::new(),
            length_bound: default_length(),
        }
    }

    pub fn with_lambdas(mut self, l: Vec<Vec<i64>>) -> Self {
        self.lambdas = Some(l);
        self
    }

    pub fn with_height(mut self, h: i64) -> Self {
        self.max_height = h;
        self
    }

    pub fn with_length(mut self, l: usize) -> Self {
        self.length_bound = l;
        self
    }

    pub fn with_extra(mut self, l: Vec<Vec<i64>>) -> Self {
        self.extra_lambdas = l;
        self
    }

    pub fn lambda_list(&self) -> LabResult<Vec<Vec<i64>>> {
        let d = context::datum(&self.datum)?;
        let mut out: Vec<Vec<i64>> = match &self.lambdas {
            Some(l) => l.clone(),
            None => d
                .dominant_up_to_height(&Q::from_integer(self.max_height as i128))
                .iter()
                .map(|m| d.coords_vec(m))
                .collect(),
        };
        for l in &self.extra_lambdas {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        for l in &out {
            if l.len() != d.rank() || !d.is_dominant(&d.coords(l)) {
                return Err(LabError::ConfigParse(format!("{l:?} is not a dominant coweight of {}", self.datum)));
            }
        }
        Ok(out)
    }
}

/// The desk-scale grid: split and twisted forms of small types, and `D₄` with triality.
pub fn default_grid() -> Vec<GridEntry> {
    vec![
        GridEntry::new("A1", "id"),
        GridEntry::new("A2", "id"),
        GridEntry::new("A3", "id"),
        GridEntry::new("B2", "id"),
        GridEntry::new("A1xA1", "swap"),
        GridEntry::new("A2", "flip"),
        GridEntry::new("A3", "flip"),
        d4_triality(),
        a2_pair_order4(),
    ]
}

/// Two copies of `A₂` swapped by `σ`, with the flip on the return: `ord(σ) = 4`, `d = 2`.
pub fn a2_pair_order4() -> GridEntry {
    GridEntry::new("A2xA2", r#"{"perm":[2,1],"components_shift":1}"#).with_height(2).with_length(6)
}

/// `D₄` with triality at tight caps; `ω₂` is added so that `J = {α₂}` occurs.
pub fn d4_triality() -> GridEntry {
    GridEntry::new("D4", "triality").with_height(3).with_length(8).with_extra(vec![vec![0, 1, 0, 0]])
}

/// The order-three checks need a wider `λ` on `D₄` than the default grid affords.
pub fn d4_triality_wide() -> GridEntry {
    d4_triality().with_lambdas(vec![vec![0, 1, 0, 0], vec![0, 1, 1, 1]])
}

/// Named grids accepted wherever a grid is expected.
pub fn named_grid(name: &str) -> LabResult<Vec<GridEntry>> {
    match name {
        "default" => Ok(default_grid()),
        "d4" | "triality" => Ok(vec![d4_triality()]),
        "triality-wide" => Ok(vec![d4_triality_wide()]),
        "small" => Ok(vec![
            GridEntry::new("A1", "id").with_height(2).with_length(6),
            GridEntry::new("A2", "flip").with_height(2).with_length(6),
        ]),
        other => Err(LabError::ConfigParse(format!("unknown grid `{other}`"))),
    }
}

/// A grid given either by name or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridRef {
    Named(String),
    Inline(Vec<GridEntry>),
}

impl Default for GridRef {
    fn default() -> Self {
        GridRef::Named("default".into())
    }
}

impl GridRef {
    pub fn resolve(&self) -> LabResult<Vec<GridEntry>> {
        match self {
            GridRef::Named(n) => named_grid(n),
            GridRef::Inline(g) => Ok(g.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    #[default]
    Exhaustive,
    Sampled,
}

fn default_cap() -> u64 {
    1_000_000
}

fn default_rate() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckerConfig {
    pub lemma_id: String,
    #[serde(default)]
    pub grid: GridRef,
    #[serde(default = "default_cap")]
    pub instance_cap: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: SweepMode,
    /// Fraction of records kept in sampled mode.
    #[serde(default = "default_rate")]
    pub sample_rate: f64,
    /// Whether the residue field hypothesis on `q` is assumed; recorded only.
    #[serde(default)]
    pub hypothesis_q: bool,
}

impl CheckerConfig {
    pub fn new(lemma_id: &str) -> Self {
        CheckerConfig {
            lemma_id: lemma_id.into(),
            grid: GridRef::default(),
            instance_cap: default_cap(),
            seed: 0,
            mode: SweepMode::Exhaustive,
            sample_rate: default_rate(),
            hypothesis_q: false,
        }
    }

    pub fn with_grid(mut self, g: Vec<GridEntry>) -> Self {
        self.grid = GridRef::Inline(g);
        self
    }
}

/// What a checker sweeps over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// A ball of `W̃` per datum and Frobenius.
    Ball,
    /// A ball per datum; the Frobenius is irrelevant.
    BallSplit,
    /// `Adm(λ)` per datum, Frobenius and `λ`.
    Adm,
    /// `Adm(λ)` per datum and `λ`; the Frobenius is irrelevant.
    AdmSplit,
    /// A pair `(λ, [b])` with `[b]` meeting `Adm(λ)`.
    Instance,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub datum: String,
    pub sigma: String,
    pub length_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

/// One representative per σ-conjugacy class meeting `Adm(λ)`, of minimal length.
pub fn b_candidates(f: &Frobenius, adm: &AdmissibleSet) -> Vec<ExtAffElem> {
    let d = f.datum();
    let mut best: BTreeMap<(Vec<String>, Vec<i64>), (usize, ExtAffElem)> = BTreeMap::new();
    for x in adm.iter() {
        let nk = sigma::newton_point(f, x);
        let key = (nk.newton.coords.iter().map(|q| q.to_string()).collect(), nk.kottwitz);
        let cand = (d.length(x), *x);
        best.entry(key).and_modify(|e| *e = (*e).min(cand)).or_insert(cand);
    }
    let mut out: Vec<(usize, ExtAffElem)> = best.into_values().collect();
    out.sort();
    out.into_iter().map(|(_, x)| x).collect()
}

/// Cells of the given kind, in grid order and without repetitions.
pub fn cells(grid: &[GridEntry], kind: CellKind) -> LabResult<Vec<Cell>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |c: Cell, out: &mut Vec<Cell>| {
        if seen.insert(c.clone()) {
            out.push(c);
        }
    };
    for e in grid {
        let split = matches!(kind, CellKind::BallSplit | CellKind::AdmSplit);
        let sigma = if split { "id".to_string() } else { e.sigma.clone() };
        let base = Cell { datum: e.datum.clone(), sigma, length_bound: e.length_bound, lambda: None, b: None };
        match kind {
            CellKind::Ball | CellKind::BallSplit => push(base, &mut out),
            CellKind::Adm | CellKind::AdmSplit => {
                for l in e.lambda_list()? {
                    push(Cell { lambda: Some(l), ..base.clone() }, &mut out);
                }
            }
            CellKind::Instance => {
                let f = context::frobenius(&e.datum, &e.sigma)?;
                for l in e.lambda_list()? {
                    let adm = context::adm(&e.datum, &l)?;
                    for b in b_candidates(&f, &adm) {
                        let b = f.datum().format_elem(&b);
                        push(Cell { lambda: Some(l.clone()), b: Some(b), ..base.clone() }, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}
