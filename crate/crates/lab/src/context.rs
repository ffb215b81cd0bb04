//! Shared, lazily built data for the cells of a sweep.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use adlv_core::components::{self, ArrowGraph, HNStatus, Leaf, SPlus};
use adlv_core::{adm_set, AdmissibleSet, Coords, ExtAffElem, Frobenius, RootDatum};

use crate::error::{LabError, LabResult};
use crate::grid::Cell;

type Slot<V> = Arc<OnceLock<Result<Arc<V>, String>>>;

struct Cache<K, V> {
    map: Mutex<HashMap<K, Slot<V>>>,
}

impl<K: Eq + Hash + Clone, V> Cache<K, V> {
    fn new() -> Self {
        Cache { map: Mutex::new(HashMap::new()) }
    }

    fn get(&self, k: &K, build: impl FnOnce() -> LabResult<V>) -> LabResult<Arc<V>> {
        let slot = self.map.lock().unwrap().entry(k.clone()).or_default().clone();
        slot.get_or_init(|| build().map(Arc::new).map_err(|e| e.to_string())).clone().map_err(LabError::Cell)
    }
}

fn caches() -> &'static Caches {
    static C: OnceLock<Caches> = OnceLock::new();
    C.get_or_init(|| Caches {
        datum: Cache::new(),
        frob: Cache::new(),
        adm: Cache::new(),
        ball: Cache::new(),
        inst: Cache::new(),
    })
}

struct Caches {
    datum: Cache<String, RootDatum>,
    frob: Cache<(String, String), Frobenius>,
    adm: Cache<(String, Vec<i64>), AdmissibleSet>,
    ball: Cache<(String, usize), Vec<ExtAffElem>>,
    inst: Cache<(String, String, Vec<i64>, String), Instance>,
}

/// The datum for a label; one shared copy per label so that elements stay compatible.
pub fn datum(label: &str) -> LabResult<Arc<RootDatum>> {
    caches().datum.get(&label.to_string(), || Ok(RootDatum::from_label(label)?))
}

pub fn frobenius(label: &str, sigma: &str) -> LabResult<Arc<Frobenius>> {
    caches().frob.get(&(label.to_string(), sigma.to_string()), || Ok(Frobenius::named(datum(label)?, sigma)?))
}

pub fn adm(label: &str, lambda: &[i64]) -> LabResult<Arc<AdmissibleSet>> {
    caches().adm.get(&(label.to_string(), lambda.to_vec()), || {
        let d = datum(label)?;
        Ok(adm_set(&d, &d.coords(lambda))?)
    })
}

/// All elements of length at most `radius`, sorted by length.
pub fn ball(label: &str, radius: usize) -> LabResult<Arc<Vec<ExtAffElem>>> {
    caches().ball.get(&(label.to_string(), radius), || {
        let d = datum(label)?;
        let mut b = d.ball(radius);
        b.sort_by_cached_key(|x| (d.length(x), *x));
        Ok(b)
    })
}

/// Everything computed about one pair `(λ, [b])`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub b: ExtAffElem,
    pub hn: HNStatus,
    pub sp: SPlus,
    pub graph: ArrowGraph,
    /// `𝒮_{λ,b,x}` for each `x` in the order of `sp.elems`.
    pub leaves: Vec<Leaf>,
    /// `𝒮_{λ,b}` by a direct scan of `Adm(λ)`.
    pub scan: BTreeSet<ExtAffElem>,
}

pub fn instance(label: &str, sigma: &str, lambda: &[i64], b: &str) -> LabResult<Arc<Instance>> {
    let key = (label.to_string(), sigma.to_string(), lambda.to_vec(), b.to_string());
    caches().inst.get(&key, || {
        let f = frobenius(label, sigma)?;
        let d = f.datum();
        let lam = d.coords(lambda);
        let b = d.parse_elem(b)?;
        let adm = adm(label, lambda)?;
        let hn = components::hn_status(&f, &lam, &b);
        let sp = components::s_plus(&f, &lam, &b)?;
        let graph = components::arrows(&f, &sp);
        let leaves = sp.elems.iter().map(|x| components::s_leaf(&f, x, &adm)).collect::<Result<Vec<_>, _>>()?;
        let scan = components::full_scan(&f, &b, &adm);
        Ok(Instance { b, hn, sp, graph, leaves, scan })
    })
}

/// A cell with its data resolved.
pub struct CellCtx {
    pub cell: Cell,
    pub f: Arc<Frobenius>,
    pub lambda: Option<Coords>,
    adm: Option<Arc<AdmissibleSet>>,
    inst: Option<Arc<Instance>>,
}

impl CellCtx {
    pub fn new(cell: &Cell) -> LabResult<Self> {
        let f = frobenius(&cell.datum, &cell.sigma)?;
        let lambda = cell.lambda.as_ref().map(|l| f.datum().coords(l));
        let adm = cell.lambda.as_ref().map(|l| adm(&cell.datum, l)).transpose()?;
        let inst = match (&cell.lambda, &cell.b) {
            (Some(l), Some(b)) => Some(instance(&cell.datum, &cell.sigma, l, b)?),
            _ => None,
        };
        Ok(CellCtx { cell: cell.clone(), f, lambda, adm, inst })
    }

    pub fn d(&self) -> &RootDatum {
        self.f.datum()
    }

    pub fn ball(&self) -> LabResult<Arc<Vec<ExtAffElem>>> {
        ball(&self.cell.datum, self.cell.length_bound)
    }

    /// A ball of radius `min(r, length_bound)`.
    pub fn small_ball(&self, r: usize) -> LabResult<Arc<Vec<ExtAffElem>>> {
        ball(&self.cell.datum, r.min(self.cell.length_bound))
    }

    pub fn adm(&self) -> &AdmissibleSet {
        self.adm.as_ref().expect("cell without λ")
    }

    pub fn lambda(&self) -> &Coords {
        self.lambda.as_ref().expect("cell without λ")
    }

    pub fn inst(&self) -> &Instance {
        self.inst.as_ref().expect("cell without b")
    }
}
