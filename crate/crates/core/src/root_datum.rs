//! Adjoint root data, the finite Weyl group and vector-level predicates.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::{build_pi1, build_simple_aff, SimpleAff};
use crate::error::{Error, Result};
use crate::intlat::QuotientGroup;
use crate::linalg::{self, CoweightVec};
use crate::scalar::Exact;
use crate::{QVec, Q};

pub const MAX_RANK: usize = 8;

/// Integer coordinates; entries past the rank are zero.
pub type Coords = [i32; MAX_RANK];

/// Default cap on the order of the finite Weyl group.
pub const DEFAULT_WEYL_BUDGET: u64 = 60_000;

static NEXT_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl SimpleType {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "A" => Self::A,
            "B" => Self::B,
            "C" => Self::C,
            "D" => Self::D,
            "E" => Self::E,
            "F" => Self::F,
            "G" => Self::G,
            _ => return None,
        })
    }

    fn valid_rank(self, r: usize) -> bool {
        match self {
            Self::A => r >= 1,
            Self::B => r >= 2,
            Self::C => r >= 2,
            Self::D => r >= 3,
            Self::E => (6..=8).contains(&r),
            Self::F => r == 4,
            Self::G => r == 2,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: usize,
    #[serde(default = "one")]
    pub copies: usize,
}

fn one() -> usize {
    1
}

/// JSON form: `{"components":[{"type":"A","rank":2,"copies":2}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub components: Vec<ComponentSpec>,
}

impl DatumSpec {
    pub fn single(ty: &str, rank: usize, copies: usize) -> Self {
        DatumSpec { components: vec![ComponentSpec { ty: ty.into(), rank, copies }] }
    }

    /// Parses labels such as `A2`, `A1xA1`, `D4`, `A2^2`.
    pub fn parse_label(label: &str) -> Result<Self> {
        let mut comps: Vec<ComponentSpec> = Vec::new();
        for term in label.split(['x', '×', '*']) {
            let term = term.trim();
            let (base, copies) = match term.split_once('^') {
                Some((b, c)) => (b, c.parse().map_err(|_| Error::UnsupportedType(label.into()))?),
                None => (term, 1usize),
            };
            let mut chars = base.chars();
            let ty = chars.next().ok_or_else(|| Error::UnsupportedType(label.into()))?.to_ascii_uppercase();
            let rank: usize = chars.as_str().parse().map_err(|_| Error::UnsupportedType(label.into()))?;
            match comps.last_mut() {
                Some(c) if c.ty == ty.to_string() && c.rank == rank => c.copies += copies,
                _ => comps.push(ComponentSpec { ty: ty.to_string(), rank, copies }),
            }
        }
        Ok(DatumSpec { components: comps })
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for c in &self.components {
            for _ in 0..c.copies {
                parts.push(format!("{}{}", c.ty, c.rank));
            }
        }
        parts.join("x")
    }
}

/// One simple factor of the datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub ty: SimpleType,
    pub rank: usize,
    /// Index of the first simple root of this factor.
    pub offset: usize,
}

/// Element of the finite Weyl group, as an index into the enumerated group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElem(pub u32);

impl WeylElem {
    pub const ID: WeylElem = WeylElem(0);
}

/// Flags returned by [`RootDatum::classify_coweight`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoweightFlags {
    pub k_dominant: bool,
    pub k_antidominant: bool,
    pub k_minuscule: bool,
    pub strongly_k_minuscule: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderFlags {
    pub leq_cone: bool,
    pub preceq: bool,
}

struct WeylTable {
    count: usize,
    nroots: usize,
    perm: Vec<u16>,
    mat: Vec<i32>,
    inv: Vec<u32>,
    len: Vec<u16>,
    word: Vec<Vec<u8>>,
    left: Vec<u32>,
    lookup: HashMap<[u16; MAX_RANK], u32>,
    mul: Option<Vec<u32>>,
}

/// An adjoint root datum: `X = ZΦ`, `Y` the coweight lattice.
pub struct RootDatum {
    id: u32,
    spec: DatumSpec,
    comps: Vec<Component>,
    n: usize,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Coords>,
    coroots: Vec<Coords>,
    root_index: HashMap<Coords, u16>,
    np: usize,
    support: Vec<u32>,
    root_comp: Vec<u8>,
    root_len2: Vec<i64>,
    height: Vec<i32>,
    highest: Vec<u16>,
    gram: Vec<Vec<Q>>,
    coroot_gram: Vec<Vec<Q>>,
    cartan_t_inv: Vec<Vec<Q>>,
    weyl: WeylTable,
    refl: Vec<WeylElem>,
    simple_aff: OnceLock<Vec<SimpleAff>>,
    pi1: OnceLock<QuotientGroup>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootDatum({})", self.spec.label())
    }
}

/// Symmetric form `(α_i, α_j)` of one simple factor in Bourbaki numbering.
fn bilinear(ty: SimpleType, r: usize) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0i64; r]; r];
    let edge = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        b[i][j] = v;
        b[j][i] = v;
    };
    match ty {
        SimpleType::A => {
            for i in 0..r {
                b[i][i] = 2;
            }
            for i in 0..r.saturating_sub(1) {
                edge(&mut b, i, i + 1, -1);
            }
        }
        SimpleType::B => {
            for i in 0..r {
                b[i][i] = 2;
            }
            b[r - 1][r - 1] = 1;
            for i in 0..r - 1 {
                edge(&mut b, i, i + 1, -1);
            }
        }
        SimpleType::C => {
            for i in 0..r {
                b[i][i] = 2;
            }
            b[r - 1][r - 1] = 4;
            for i in 0..r - 2 {
                edge(&mut b, i, i + 1, -1);
            }
            edge(&mut b, r - 2, r - 1, -2);
        }
        SimpleType::D => {
            for i in 0..r {
                b[i][i] = 2;
            }
            for i in 0..r - 2 {
                edge(&mut b, i, i + 1, -1);
            }
            edge(&mut b, r - 3, r - 1, -1);
        }
        SimpleType::E => {
            for i in 0..r {
                b[i][i] = 2;
            }
            edge(&mut b, 0, 2, -1);
            edge(&mut b, 1, 3, -1);
            for i in 2..r - 1 {
                edge(&mut b, i, i + 1, -1);
            }
        }
        SimpleType::F => {
            b[0][0] = 4;
            b[1][1] = 4;
            b[2][2] = 2;
            b[3][3] = 2;
            edge(&mut b, 0, 1, -2);
            edge(&mut b, 1, 2, -2);
            edge(&mut b, 2, 3, -1);
        }
        SimpleType::G => {
            b[0][0] = 2;
            b[1][1] = 6;
            edge(&mut b, 0, 1, -3);
        }
    }
    b
}

fn zero_coords() -> Coords {
    [0; MAX_RANK]
}

impl RootDatum {
    pub fn new(spec: &DatumSpec) -> Result<Self> {
        Self::with_budget(spec, DEFAULT_WEYL_BUDGET)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(&DatumSpec::parse_label(label)?)
    }

    /// Builds the datum; fails if `|W₀|` would exceed `budget`.
    pub fn with_budget(spec: &DatumSpec, budget: u64) -> Result<Self> {
        let mut comps = Vec::new();
        let mut n = 0;
        for c in &spec.components {
            let ty = SimpleType::parse(&c.ty.to_ascii_uppercase()).ok_or_else(|| Error::UnsupportedType(c.ty.clone()))?;
            if !ty.valid_rank(c.rank) || c.copies == 0 {
                return Err(Error::UnsupportedType(format!("{}{}", c.ty, c.rank)));
            }
            for _ in 0..c.copies {
                comps.push(Component { ty, rank: c.rank, offset: n });
                n += c.rank;
            }
        }
        if n == 0 {
            return Err(Error::UnsupportedType("empty datum".into()));
        }
        let order: u64 = comps.iter().map(|c| weyl_order(c.ty, c.rank)).product();
        if n > MAX_RANK || order > budget {
            return Err(Error::RankTooLarge { order, budget });
        }
        let mut bil = vec![vec![0i64; n]; n];
        for c in &comps {
            let b = bilinear(c.ty, c.rank);
            for i in 0..c.rank {
                for j in 0..c.rank {
                    bil[c.offset + i][c.offset + j] = b[i][j];
                }
            }
        }
        let cartan: Vec<Vec<i32>> =
            (0..n).map(|i| (0..n).map(|j| (2 * bil[i][j] / bil[i][i]) as i32).collect()).collect();

        // roots by closure under simple reflections
        let mut all: Vec<(Coords, Coords)> = Vec::new();
        let mut seen: HashMap<Coords, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut r = zero_coords();
            r[i] = 1;
            let mut c = zero_coords();
            c[..n].copy_from_slice(&cartan[i][..n]);
            seen.insert(r, ());
            queue.push_back((r, c));
        }
        while let Some((r, c)) = queue.pop_front() {
            all.push((r, c));
            for i in 0..n {
                let p: i32 = (0..n).map(|j| r[j] * cartan[i][j]).sum();
                let mut r2 = r;
                r2[i] -= p;
                let ci = c[i];
                let mut c2 = c;
                for j in 0..n {
                    c2[j] -= ci * cartan[i][j];
                }
                if seen.insert(r2, ()).is_none() {
                    queue.push_back((r2, c2));
                }
            }
        }
        let mut pos: Vec<(Coords, Coords)> = all.iter().filter(|(r, _)| r.iter().all(|&x| x >= 0)).cloned().collect();
        pos.sort_by_key(|(r, _)| (r.iter().sum::<i32>(), std::cmp::Reverse(*r)));
        let np = pos.len();
        let mut roots = Vec::with_capacity(2 * np);
        let mut coroots = Vec::with_capacity(2 * np);
        for (r, c) in &pos {
            roots.push(*r);
            coroots.push(*c);
        }
        for (r, c) in &pos {
            roots.push(r.map(|x| -x));
            coroots.push(c.map(|x| -x));
        }
        let root_index: HashMap<Coords, u16> = roots.iter().enumerate().map(|(i, r)| (*r, i as u16)).collect();
        let comp_of_simple = |i: usize| comps.iter().position(|c| i >= c.offset && i < c.offset + c.rank).unwrap();
        let support: Vec<u32> =
            roots.iter().map(|r| (0..n).filter(|&j| r[j] != 0).fold(0u32, |m, j| m | (1 << j))).collect();
        let root_comp: Vec<u8> = support.iter().map(|&m| comp_of_simple(m.trailing_zeros() as usize) as u8).collect();
        let root_len2: Vec<i64> = roots
            .iter()
            .map(|r| {
                let mut s = 0;
                for i in 0..n {
                    for j in 0..n {
                        s += r[i] as i64 * r[j] as i64 * bil[i][j];
                    }
                }
                s
            })
            .collect();
        let height: Vec<i32> = roots.iter().map(|r| r.iter().sum()).collect();
        let highest: Vec<u16> = (0..comps.len())
            .map(|c| (0..np).filter(|&i| root_comp[i] as usize == c).max_by_key(|&i| height[i]).unwrap() as u16)
            .collect();

        // invariant form, short coroots of squared length 2 in every factor
        let mut clen: Vec<Q> = vec![Q::zero(); n];
        for c in &comps {
            clen[c.offset] = Q::one();
            let mut stack = vec![c.offset];
            let mut done = vec![false; n];
            done[c.offset] = true;
            while let Some(i) = stack.pop() {
                for j in c.offset..c.offset + c.rank {
                    if !done[j] && cartan[i][j] != 0 {
                        clen[j] = clen[i] * Q::from_int(cartan[j][i] as i64) / Q::from_int(cartan[i][j] as i64);
                        done[j] = true;
                        stack.push(j);
                    }
                }
            }
            let m = (c.offset..c.offset + c.rank).map(|i| clen[i]).min().unwrap();
            let f = Q::from_int(2) / m;
            for i in c.offset..c.offset + c.rank {
                clen[i] *= f;
            }
        }
        let coroot_gram: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| Q::from_int(cartan[i][j] as i64) * clen[j] / Q::from_int(2)).collect())
            .collect();
        let cq: Vec<Vec<Q>> = cartan.iter().map(|r| r.iter().map(|&x| Q::from_int(x as i64)).collect()).collect();
        let cinv = linalg::inverse(&cq).expect("Cartan matrix is invertible");
        let mut gram = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for k in 0..n {
                    for l in 0..n {
                        s += cinv[i][k] * coroot_gram[k][l] * cinv[j][l];
                    }
                }
                gram[i][j] = s;
            }
        }
        let ct: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| cq[j][i]).collect()).collect();
        let cartan_t_inv = linalg::inverse(&ct).unwrap();

        let mut d = RootDatum {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            spec: spec.clone(),
            comps,
            n,
            cartan,
            roots,
            coroots,
            root_index,
            np,
            support,
            root_comp,
            root_len2,
            height,
            highest,
            gram,
            coroot_gram,
            cartan_t_inv,
            weyl: WeylTable {
                count: 0,
                nroots: 0,
                perm: vec![],
                mat: vec![],
                inv: vec![],
                len: vec![],
                word: vec![],
                left: vec![],
                lookup: HashMap::new(),
                mul: None,
            },
            refl: Vec::new(),
            simple_aff: OnceLock::new(),
            pi1: OnceLock::new(),
        };
        d.weyl = d.enumerate_weyl();
        d.refl = d.reflection_table();
        Ok(d)
    }

    fn enumerate_weyl(&self) -> WeylTable {
        let n = self.n;
        let nr = self.roots.len();
        let refl: Vec<Vec<u16>> = (0..n)
            .map(|i| {
                (0..nr)
                    .map(|k| {
                        let r = &self.roots[k];
                        let p: i32 = (0..n).map(|j| r[j] * self.cartan[i][j]).sum();
                        let mut r2 = *r;
                        r2[i] -= p;
                        self.root_index[&r2]
                    })
                    .collect()
            })
            .collect();
        let key = |perm: &[u16]| {
            let mut k = [u16::MAX; MAX_RANK];
            k[..n].copy_from_slice(&perm[..n]);
            k
        };
        let idp: Vec<u16> = (0..nr as u16).collect();
        let mut idm = vec![0i32; n * n];
        for i in 0..n {
            idm[i * n + i] = 1;
        }
        let mut perm = idp.clone();
        let mut mat = idm;
        let mut len = vec![0u16];
        let mut lookup = HashMap::new();
        lookup.insert(key(&idp), 0u32);
        let mut left: Vec<u32> = Vec::new();
        let mut head = 0usize;
        while head < len.len() {
            let w = head;
            head += 1;
            for i in 0..n {
                let p: Vec<u16> = (0..nr).map(|k| refl[i][perm[w * nr + k] as usize]).collect();
                let kk = key(&p);
                let id = match lookup.get(&kk) {
                    Some(&id) => id,
                    None => {
                        let id = len.len() as u32;
                        lookup.insert(kk, id);
                        perm.extend_from_slice(&p);
                        let mut m = mat[w * n * n..(w + 1) * n * n].to_vec();
                        // s_i(μ)_j = μ_j − μ_i·cartan[i][j]
                        for c in 0..n {
                            let mi = mat[w * n * n + i * n + c];
                            for r in 0..n {
                                m[r * n + c] -= mi * self.cartan[i][r];
                            }
                        }
                        mat.extend_from_slice(&m);
                        len.push(len[w] + 1);
                        id
                    }
                };
                left.push(id);
            }
        }
        let count = len.len();
        let mut inv = vec![0u32; count];
        for w in 0..count {
            let p = &perm[w * nr..(w + 1) * nr];
            let mut ip = vec![0u16; nr];
            for (k, &x) in p.iter().enumerate() {
                ip[x as usize] = k as u16;
            }
            inv[w] = lookup[&key(&ip)];
        }
        let mut word: Vec<Vec<u8>> = vec![Vec::new(); count];
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&w| len[w]);
        for &w in &order {
            if len[w] == 0 {
                continue;
            }
            let i = (0..n).find(|&i| len[left[w * n + i] as usize] < len[w]).unwrap();
            let mut wd = vec![i as u8];
            wd.extend_from_slice(&word[left[w * n + i] as usize]);
            word[w] = wd;
        }
        let mut table = WeylTable { count, nroots: nr, perm, mat, inv, len, word, left, lookup, mul: None };
        if count <= 1200 {
            let mut mul = vec![0u32; count * count];
            for a in 0..count {
                for b in 0..count {
                    mul[a * count + b] = slow_mul(&table, n, a as u32, b as u32);
                }
            }
            table.mul = Some(mul);
        }
        table
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn spec(&self) -> &DatumSpec {
        &self.spec
    }

    pub fn label(&self) -> String {
        self.spec.label()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    /// Index of the simple factor containing simple root `i`.
    pub fn component_of_simple(&self, i: usize) -> usize {
        self.comps.iter().position(|c| i >= c.offset && i < c.offset + c.rank).unwrap()
    }

    pub fn component_mask(&self, c: usize) -> u32 {
        let comp = &self.comps[c];
        ((1u32 << comp.rank) - 1) << comp.offset
    }

    pub fn all_simple_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// `⟨α_j, α_i∨⟩`.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i32 {
        self.cartan[i][j]
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_pos_roots(&self) -> usize {
        self.np
    }

    /// Root in simple-root coordinates.
    pub fn root(&self, a: usize) -> &Coords {
        &self.roots[a]
    }

    /// Coroot in fundamental-coweight coordinates.
    pub fn coroot(&self, a: usize) -> &Coords {
        &self.coroots[a]
    }

    pub fn root_index(&self, r: &Coords) -> Option<usize> {
        self.root_index.get(r).map(|&i| i as usize)
    }

    pub fn is_positive(&self, a: usize) -> bool {
        a < self.np
    }

    pub fn neg(&self, a: usize) -> usize {
        if a < self.np { a + self.np } else { a - self.np }
    }

    /// Index of the positive root among `±a`.
    pub fn abs_root(&self, a: usize) -> usize {
        if a < self.np { a } else { a - self.np }
    }

    pub fn simple_root(&self, i: usize) -> usize {
        i
    }

    pub fn support(&self, a: usize) -> u32 {
        self.support[a]
    }

    pub fn root_component(&self, a: usize) -> usize {
        self.root_comp[a] as usize
    }

    pub fn root_height(&self, a: usize) -> i32 {
        self.height[a]
    }

    /// Highest root of factor `c`.
    pub fn highest_root(&self, c: usize) -> usize {
        self.highest[c] as usize
    }

    /// Whether `a` is a long root of its factor (all roots count as long when simply laced).
    pub fn is_long(&self, a: usize) -> bool {
        let c = self.root_comp[a] as usize;
        let max = (0..self.np).filter(|&b| self.root_comp[b] as usize == c).map(|b| self.root_len2[b]).max().unwrap();
        self.root_len2[a] == max
    }

    pub fn root_len2(&self, a: usize) -> i64 {
        self.root_len2[a]
    }

    pub fn is_simply_laced(&self) -> bool {
        self.comps.iter().all(|c| matches!(c.ty, SimpleType::A | SimpleType::D | SimpleType::E))
    }

    /// Whether `a ∈ Φ_K` for a mask `K` of simple roots.
    pub fn in_levi(&self, a: usize, k: u32) -> bool {
        self.support[a] & !k == 0
    }

    /// Positive roots of `Φ_K`.
    pub fn levi_pos_roots(&self, k: u32) -> Vec<usize> {
        (0..self.np).filter(|&a| self.in_levi(a, k)).collect()
    }

    /// `⟨α, μ⟩` for an integral coweight.
    #[inline]
    pub fn pair(&self, a: usize, mu: &Coords) -> i32 {
        let r = &self.roots[a];
        let mut s = 0;
        for j in 0..self.n {
            s += r[j] * mu[j];
        }
        s
    }

    pub fn pair_q(&self, a: usize, v: &QVec) -> Q {
        v.pair(&self.roots[a][..self.n])
    }

    /// `⟨α_a, α_b∨⟩`.
    pub fn pair_roots(&self, a: usize, b: usize) -> i32 {
        self.pair(a, &self.coroots[b])
    }

    pub fn to_q(&self, mu: &Coords) -> QVec {
        CoweightVec { coords: mu[..self.n].iter().map(|&x| Q::from_int(x as i64)).collect() }
    }

    pub fn from_q(&self, v: &QVec) -> Option<Coords> {
        let mut c = zero_coords();
        for (i, x) in v.coords.iter().enumerate() {
            c[i] = x.to_int()? as i32;
        }
        Some(c)
    }

    pub fn coords(&self, v: &[i64]) -> Coords {
        let mut c = zero_coords();
        for (i, &x) in v.iter().enumerate().take(self.n) {
            c[i] = x as i32;
        }
        c
    }

    pub fn coords_vec(&self, mu: &Coords) -> Vec<i64> {
        mu[..self.n].iter().map(|&x| x as i64).collect()
    }

    /// Sum of coroots as coweight coordinates.
    pub fn add(&self, a: &Coords, b: &Coords) -> Coords {
        let mut c = *a;
        for i in 0..self.n {
            c[i] += b[i];
        }
        c
    }

    pub fn sub(&self, a: &Coords, b: &Coords) -> Coords {
        let mut c = *a;
        for i in 0..self.n {
            c[i] -= b[i];
        }
        c
    }

    pub fn neg_coords(&self, a: &Coords) -> Coords {
        a.map(|x| -x)
    }

    // ---- finite Weyl group ----

    pub fn weyl_order(&self) -> usize {
        self.weyl.count
    }

    pub fn weyl_elements(&self) -> impl Iterator<Item = WeylElem> {
        (0..self.weyl.count as u32).map(WeylElem)
    }

    pub fn simple_reflection(&self, i: usize) -> WeylElem {
        WeylElem(self.weyl.left[i])
    }

    /// `s_i · w`.
    #[inline]
    pub fn left_simple(&self, i: usize, w: WeylElem) -> WeylElem {
        WeylElem(self.weyl.left[w.0 as usize * self.n + i])
    }

    #[inline]
    pub fn w_mul(&self, a: WeylElem, b: WeylElem) -> WeylElem {
        match &self.weyl.mul {
            Some(t) => WeylElem(t[a.0 as usize * self.weyl.count + b.0 as usize]),
            None => WeylElem(slow_mul(&self.weyl, self.n, a.0, b.0)),
        }
    }

    #[inline]
    pub fn w_inv(&self, a: WeylElem) -> WeylElem {
        WeylElem(self.weyl.inv[a.0 as usize])
    }

    pub fn w_len(&self, a: WeylElem) -> usize {
        self.weyl.len[a.0 as usize] as usize
    }

    /// Reduced word in simple-reflection indices (0-based), lowest-index left descents first.
    pub fn w_word(&self, a: WeylElem) -> &[u8] {
        &self.weyl.word[a.0 as usize]
    }

    pub fn w_from_word(&self, word: &[usize]) -> WeylElem {
        let mut w = WeylElem::ID;
        for &i in word.iter().rev() {
            w = self.left_simple(i, w);
        }
        w
    }

    /// Integer matrix of `w` on `Y` (row-major, coweight basis).
    pub fn w_matrix(&self, a: WeylElem) -> Vec<Vec<i32>> {
        let n = self.n;
        let m = &self.weyl.mat[a.0 as usize * n * n..(a.0 as usize + 1) * n * n];
        (0..n).map(|r| m[r * n..(r + 1) * n].to_vec()).collect()
    }

    /// Image of root `a` under `w`.
    #[inline]
    pub fn w_root(&self, w: WeylElem, a: usize) -> usize {
        self.weyl.perm[w.0 as usize * self.weyl.nroots + a] as usize
    }

    #[inline]
    pub fn w_act(&self, w: WeylElem, mu: &Coords) -> Coords {
        let n = self.n;
        let m = &self.weyl.mat[w.0 as usize * n * n..];
        let mut out = zero_coords();
        for r in 0..n {
            let mut s = 0;
            for c in 0..n {
                s += m[r * n + c] * mu[c];
            }
            out[r] = s;
        }
        out
    }

    pub fn w_act_q(&self, w: WeylElem, v: &QVec) -> QVec {
        let n = self.n;
        let m = &self.weyl.mat[w.0 as usize * n * n..];
        let coords = (0..n)
            .map(|r| {
                (0..n).fold(Q::zero(), |s, c| {
                    let x = m[r * n + c];
                    if x == 0 { s } else { s + v.coords[c] * Q::from_int(x as i64) }
                })
            })
            .collect();
        CoweightVec { coords }
    }

    /// Whether `s_i w < w`.
    pub fn w_left_descent(&self, i: usize, w: WeylElem) -> bool {
        !self.is_positive(self.w_root(self.w_inv(w), i))
    }

    /// Whether `w s_i < w`.
    pub fn w_right_descent(&self, w: WeylElem, i: usize) -> bool {
        !self.is_positive(self.w_root(w, i))
    }

    /// Mask of simple reflections occurring in any reduced word of `w`.
    pub fn w_support(&self, w: WeylElem) -> u32 {
        self.w_word(w).iter().fold(0u32, |m, &i| m | (1 << i))
    }

    pub fn w_in_parabolic(&self, w: WeylElem, k: u32) -> bool {
        self.w_support(w) & !k == 0
    }

    /// Longest element of `W_K`.
    pub fn longest_of(&self, k: u32) -> WeylElem {
        let mut w = WeylElem::ID;
        loop {
            let Some(i) = (0..self.n).find(|&i| k & (1 << i) != 0 && !self.w_left_descent(i, w)) else {
                return w;
            };
            w = self.left_simple(i, w);
        }
    }

    /// Elements of the parabolic subgroup `W_K`.
    pub fn parabolic(&self, k: u32) -> Vec<WeylElem> {
        self.weyl_elements().filter(|&w| self.w_in_parabolic(w, k)).collect()
    }

    /// Minimal length representatives of `W₀ / W_K`.
    pub fn min_coset_reps(&self, k: u32) -> Vec<WeylElem> {
        self.weyl_elements()
            .filter(|&w| (0..self.n).all(|i| k & (1 << i) == 0 || !self.w_right_descent(w, i)))
            .collect()
    }

    /// Reflection `s_α` as a Weyl group element.
    pub fn reflection(&self, a: usize) -> WeylElem {
        self.refl[self.abs_root(a)]
    }

    fn reflection_table(&self) -> Vec<WeylElem> {
        // s_α = u s_i u⁻¹ with α = u(α_i)
        let mut out: Vec<Option<WeylElem>> = vec![None; self.np];
        let mut left = self.np;
        for u in self.weyl_elements() {
            for i in 0..self.n {
                let a = self.abs_root(self.w_root(u, i));
                if out[a].is_none() {
                    out[a] = Some(self.w_mul(self.w_mul(u, self.simple_reflection(i)), self.w_inv(u)));
                    left -= 1;
                }
            }
            if left == 0 {
                break;
            }
        }
        out.into_iter().map(|x| x.expect("every root is conjugate to a simple root")).collect()
    }

    pub(crate) fn simple_aff_table(&self) -> &[SimpleAff] {
        self.simple_aff.get_or_init(|| build_simple_aff(self))
    }

    pub(crate) fn pi1_table(&self) -> &QuotientGroup {
        self.pi1.get_or_init(|| build_pi1(self))
    }

    // ---- vector predicates ----

    /// `v − ⟨v, α⟩α∨`.
    pub fn reflect(&self, a: usize, v: &QVec) -> Result<QVec> {
        if a >= self.roots.len() {
            return Err(Error::NotARoot(format!("index {a}")));
        }
        let p = self.pair_q(a, v);
        let c = self.to_q(&self.coroots[a]).scale(&p);
        Ok(v - &c)
    }

    pub fn reflect_int(&self, a: usize, mu: &Coords) -> Coords {
        let p = self.pair(a, mu);
        let mut out = *mu;
        for j in 0..self.n {
            out[j] -= p * self.coroots[a][j];
        }
        out
    }

    pub fn is_dominant(&self, mu: &Coords) -> bool {
        mu[..self.n].iter().all(|&x| x >= 0)
    }

    pub fn is_dominant_q(&self, v: &QVec) -> bool {
        v.coords.iter().all(|x| !x.is_negative())
    }

    /// Dominant conjugate and the minimal `z` with `z(μ)` dominant.
    pub fn dominant_conjugate(&self, mu: &Coords) -> (Coords, WeylElem) {
        let mut v = *mu;
        let mut z = WeylElem::ID;
        while let Some(i) = (0..self.n).find(|&i| v[i] < 0) {
            v = self.reflect_int(i, &v);
            z = self.left_simple(i, z);
        }
        (v, z)
    }

    pub fn dominant_conjugate_q(&self, v: &QVec) -> (QVec, WeylElem) {
        let mut v = v.clone();
        let mut z = WeylElem::ID;
        while let Some(i) = (0..self.n).find(|&i| v.coords[i].is_negative()) {
            v = self.reflect(i, &v).unwrap();
            z = self.left_simple(i, z);
        }
        (v, z)
    }

    /// Coordinates in the simple coroot basis.
    pub fn coroot_coords_q(&self, v: &QVec) -> Vec<Q> {
        linalg::mat_vec(&self.cartan_t_inv, &v.coords)
    }

    pub fn coroot_coords(&self, mu: &Coords) -> Vec<Q> {
        self.coroot_coords_q(&self.to_q(mu))
    }

    /// Whether `μ ∈ ZΦ∨`.
    pub fn in_coroot_lattice(&self, mu: &Coords) -> bool {
        self.coroot_coords(mu).iter().all(|c| c.is_integer())
    }

    /// `v′ ≤ v`: `v − v′` is a nonnegative combination of simple coroots.
    pub fn leq_cone(&self, vp: &QVec, v: &QVec) -> bool {
        self.coroot_coords_q(&(v - vp)).iter().all(|c| !c.is_negative())
    }

    pub fn leq_cone_int(&self, vp: &Coords, v: &Coords) -> bool {
        self.leq_cone(&self.to_q(vp), &self.to_q(v))
    }

    /// `μ ⪯ λ` with the congruence clause on.
    pub fn preceq(&self, mu: &Coords, lambda: &Coords) -> bool {
        self.preceq_with(mu, lambda, true)
    }

    pub fn preceq_with(&self, mu: &Coords, lambda: &Coords, congruence: bool) -> bool {
        let (bar, _) = self.dominant_conjugate(mu);
        let d = self.sub(lambda, &bar);
        let c = self.coroot_coords(&d);
        if c.iter().any(|x| x.is_negative()) {
            return false;
        }
        !congruence || c.iter().all(|x| x.is_integer())
    }

    pub fn order_relations(&self, v: &QVec, vp: &QVec, lambda: &Coords) -> OrderFlags {
        let preceq = self.from_q(vp).is_some_and(|mu| self.preceq(&mu, lambda));
        OrderFlags { leq_cone: self.leq_cone(vp, v), preceq }
    }

    /// `⟨ρ, μ⟩`, the sum of the simple-coroot coordinates.
    pub fn height(&self, mu: &Coords) -> Q {
        self.coroot_coords(mu).into_iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn classify_coweight(&self, mu: &Coords, k: u32) -> CoweightFlags {
        let mut dom = true;
        let mut anti = true;
        let mut min = true;
        for a in self.levi_pos_roots(k) {
            let p = self.pair(a, mu);
            dom &= p >= 0;
            anti &= p <= 0;
            min &= p.abs() <= 1;
        }
        let strongly = self
            .root_of_coroot(mu)
            .filter(|&g| self.is_positive(g) && !self.in_levi(g, k))
            .is_some_and(|g| min && self.strongly_ok(g, k));
        CoweightFlags { k_dominant: dom, k_antidominant: anti, k_minuscule: min, strongly_k_minuscule: strongly }
    }

    /// Strong `K`-minusculity of `γ∨`; fails with `NotACoroot` when `γ ∉ Φ⁺ ∖ Φ_K`.
    pub fn strongly_minuscule(&self, g: usize, k: u32) -> Result<bool> {
        if !self.is_positive(g) || self.in_levi(g, k) {
            return Err(Error::NotACoroot(format!("root index {g}")));
        }
        let min = self.levi_pos_roots(k).into_iter().all(|a| self.pair(a, &self.coroots[g]).abs() <= 1);
        Ok(min && self.strongly_ok(g, k))
    }

    fn strongly_ok(&self, g: usize, k: u32) -> bool {
        let has_g2 = self.comps.iter().any(|c| c.ty == SimpleType::G);
        if !has_g2 {
            return true;
        }
        let short: u32 = (0..self.n).filter(|&i| !self.is_long(i)).fold(0, |m, i| m | (1 << i));
        if k == short {
            self.is_long(g)
        } else {
            true
        }
    }

    pub fn root_of_coroot(&self, mu: &Coords) -> Option<usize> {
        (0..self.roots.len()).find(|&a| self.coroots[a] == *mu)
    }

    /// `Φ_v`.
    pub fn phi_v(&self, v: &QVec) -> Vec<usize> {
        (0..self.roots.len()).filter(|&a| self.pair_q(a, v).is_zero()).collect()
    }

    /// `J_v` for dominant `v`, as a mask.
    pub fn j_v(&self, v: &QVec) -> Result<u32> {
        if !self.is_dominant_q(v) {
            return Err(Error::NotDominant(v.to_string()));
        }
        Ok((0..self.n).filter(|&i| v.coords[i].is_zero()).fold(0, |m, i| m | (1 << i)))
    }

    /// Invariant form on `V` in the coweight basis.
    pub fn inner_product(&self, u: &QVec, v: &QVec) -> Q {
        let mut s = Q::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s += u.coords[i] * self.gram[i][j] * v.coords[j];
            }
        }
        s
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    /// Orthogonal projection onto `(RΦ_K∨)^⊥`.
    pub fn pr(&self, v: &QVec, k: u32) -> QVec {
        let idx: Vec<usize> = (0..self.n).filter(|&i| k & (1 << i) != 0).collect();
        if idx.is_empty() {
            return v.clone();
        }
        let a: Vec<Vec<Q>> = idx.iter().map(|&r| idx.iter().map(|&c| self.coroot_gram[c][r]).collect()).collect();
        let b: Vec<Q> = idx.iter().map(|&r| self.inner_product(v, &self.to_q(&self.coroots[r]))).collect();
        let c = linalg::solve(&a, &b).expect("Gram matrix of a Levi is non-singular");
        let mut out = v.clone();
        for (ci, &j) in c.iter().zip(&idx) {
            out = &out - &self.to_q(&self.coroots[j]).scale(ci);
        }
        out
    }

    /// Dominant coweights below `λ` (with or without the congruence clause).
    pub fn dominant_below(&self, lambda: &Coords, congruence: bool) -> Vec<Coords> {
        let cl = self.coroot_coords(lambda);
        let bounds: Vec<i32> = (0..self.n)
            .map(|i| {
                let mut e = zero_coords();
                e[i] = 1;
                let ci = self.coroot_coords(&e)[i];
                let b = cl[i] / ci;
                if b.is_negative() { -1 } else { b.floor().to_int().unwrap() as i32 }
            })
            .collect();
        let mut out = Vec::new();
        if bounds.iter().any(|&b| b < 0) {
            return out;
        }
        let mut cur = zero_coords();
        self.box_rec(0, &bounds, &mut cur, &mut |mu| {
            if self.leq_cone_int(mu, lambda) && (!congruence || self.in_coroot_lattice(&self.sub(lambda, mu))) {
                out.push(*mu);
            }
        });
        out.sort();
        out
    }

    fn box_rec(&self, i: usize, bounds: &[i32], cur: &mut Coords, f: &mut dyn FnMut(&Coords)) {
        if i == self.n {
            f(cur);
            return;
        }
        for x in 0..=bounds[i] {
            cur[i] = x;
            self.box_rec(i + 1, bounds, cur, f);
        }
        cur[i] = 0;
    }

    /// The `W₀`-orbit of `μ`, sorted.
    pub fn orbit(&self, mu: &Coords) -> Vec<Coords> {
        let set: BTreeSet<Coords> = self.weyl_elements().map(|w| self.w_act(w, mu)).collect();
        set.into_iter().collect()
    }

    /// All `μ` with `μ ⪯ λ`.
    pub fn saturation(&self, lambda: &Coords, congruence: bool) -> Vec<Coords> {
        let mut out: Vec<Coords> = self.dominant_below(lambda, congruence).iter().flat_map(|d| self.orbit(d)).collect();
        out.sort();
        out
    }

    /// Dominant coweights `λ ≠ 0` with `⟨ρ, λ⟩ ≤ h`.
    pub fn dominant_up_to_height(&self, h: &Q) -> Vec<Coords> {
        let mut out = Vec::new();
        let bounds: Vec<i32> = (0..self.n)
            .map(|i| {
                let mut e = zero_coords();
                e[i] = 1;
                (*h / self.height(&e)).floor().to_int().unwrap() as i32
            })
            .collect();
        let mut cur = zero_coords();
        self.box_rec(0, &bounds, &mut cur, &mut |mu| {
            if mu.iter().any(|&x| x != 0) && self.height(mu) <= *h {
                out.push(*mu);
            }
        });
        out.sort_by_key(|mu| (self.height(mu), *mu));
        out
    }
}

fn slow_mul(t: &WeylTable, n: usize, a: u32, b: u32) -> u32 {
    let nr = t.nroots;
    let mut k = [u16::MAX; MAX_RANK];
    for j in 0..n {
        let bj = t.perm[b as usize * nr + j] as usize;
        k[j] = t.perm[a as usize * nr + bj];
    }
    t.lookup[&k]
}

fn weyl_order(ty: SimpleType, r: usize) -> u64 {
    let fact = |m: u64| (1..=m).product::<u64>();
    match ty {
        SimpleType::A => fact(r as u64 + 1),
        SimpleType::B | SimpleType::C => (1u64 << r) * fact(r as u64),
        SimpleType::D => (1u64 << (r - 1)) * fact(r as u64),
        SimpleType::E => match r {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        SimpleType::F => 1152,
        SimpleType::G => 12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(label: &str) -> RootDatum {
        RootDatum::from_label(label).unwrap()
    }

    fn classical_pos_count(ty: char, n: usize) -> usize {
        match ty {
            'A' => n * (n + 1) / 2,
            'B' | 'C' => n * n,
            'D' => n * (n - 1),
            _ => unreachable!(),
        }
    }

    #[test]
    fn positive_root_counts() {
        for (l, t, n) in [("A1", 'A', 1), ("A3", 'A', 3), ("B3", 'B', 3), ("C4", 'C', 4), ("D4", 'D', 4), ("D5", 'D', 5)] {
            assert_eq!(d(l).num_pos_roots(), classical_pos_count(t, n), "{l}");
        }
        assert_eq!(d("G2").num_pos_roots(), 6);
        assert_eq!(d("F4").num_pos_roots(), 24);
        assert_eq!(d("E6").num_pos_roots(), 36);
    }

    #[test]
    fn weyl_orders_match_enumeration() {
        for l in ["A1", "A2", "A3", "B2", "G2", "D4", "A1xA1", "C3", "F4"] {
            let dd = d(l);
            let expected: u64 = dd.components().iter().map(|c| weyl_order(c.ty, c.rank)).product();
            assert_eq!(dd.weyl_order() as u64, expected, "{l}");
        }
    }

    #[test]
    fn e7_exceeds_default_budget() {
        assert!(matches!(RootDatum::from_label("E7"), Err(Error::RankTooLarge { .. })));
        assert!(matches!(RootDatum::from_label("Q3"), Err(Error::UnsupportedType(_))));
        assert!(matches!(RootDatum::from_label("B1"), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn a1_coroot_is_twice_fundamental() {
        let dd = d("A1");
        assert_eq!(dd.coroot(0)[0], 2);
    }

    #[test]
    fn a2_reflection_example() {
        let dd = d("A2");
        let v = dd.to_q(dd.coroot(1));
        let r = dd.reflect(0, &v).unwrap();
        let expect = &dd.to_q(dd.coroot(1)) + &dd.to_q(dd.coroot(0));
        assert_eq!(r, expect);
    }

    #[test]
    fn pairing_of_root_with_own_coroot_is_two() {
        for l in ["B3", "C3", "G2", "F4", "D4"] {
            let dd = d(l);
            for a in 0..dd.num_roots() {
                assert_eq!(dd.pair_roots(a, a), 2);
            }
        }
    }

    #[test]
    fn matrices_match_words_and_lengths_match_inversions() {
        for l in ["A3", "B2", "G2"] {
            let dd = d(l);
            for w in dd.weyl_elements() {
                let mut m = zero_coords();
                m[0] = 3;
                m[1] = -2;
                let mut v = m;
                for &i in dd.w_word(w).iter().rev() {
                    v = dd.reflect_int(i as usize, &v);
                }
                assert_eq!(v, dd.w_act(w, &m));
                let inv = (0..dd.num_pos_roots()).filter(|&a| !dd.is_positive(dd.w_root(w, a))).count();
                assert_eq!(inv, dd.w_len(w));
                assert_eq!(dd.w_word(w).len(), dd.w_len(w));
            }
        }
    }

    #[test]
    fn inner_product_is_invariant() {
        for l in ["B3", "G2", "C3", "A2xA2"] {
            let dd = d(l);
            let u = dd.to_q(&dd.coords(&[1, -2, 3, 0]));
            let v = dd.to_q(&dd.coords(&[2, 1, -1, 1]));
            for i in 0..dd.rank() {
                let su = dd.reflect(i, &u).unwrap();
                let sv = dd.reflect(i, &v).unwrap();
                assert_eq!(dd.inner_product(&su, &sv), dd.inner_product(&u, &v));
            }
            for i in 0..dd.rank() {
                let c = dd.to_q(dd.coroot(i));
                let short = !dd.is_long(i) || dd.is_simply_laced();
                let long_coroot_of_short_root = !dd.is_long(i);
                let l2 = dd.inner_product(&c, &c);
                if dd.is_simply_laced() || !long_coroot_of_short_root {
                    assert_eq!(l2, Q::from_int(2), "{l} {i} {short}");
                }
            }
        }
    }

    #[test]
    fn dominant_conjugate_examples() {
        let dd = d("A1");
        let (v, z) = dd.dominant_conjugate(&dd.coords(&[-1]));
        assert_eq!(v[0], 1);
        assert_eq!(z, dd.simple_reflection(0));
        let dd = d("A2");
        let mu = dd.neg_coords(dd.coroot(0));
        let (v, z) = dd.dominant_conjugate(&mu);
        let brute: Vec<WeylElem> = dd.weyl_elements().filter(|&w| dd.is_dominant(&dd.w_act(w, &mu))).collect();
        let zmin = *brute.iter().min_by_key(|&&w| dd.w_len(w)).unwrap();
        assert_eq!(z, zmin);
        assert_eq!(v, dd.w_act(zmin, &mu));
    }

    #[test]
    fn preceq_examples() {
        let dd = d("A1");
        let alpha = *dd.coroot(0);
        assert!(dd.preceq(&zero_coords(), &alpha));
        assert!(!dd.preceq(&dd.coords(&[1]), &alpha));
        assert!(dd.preceq_with(&dd.coords(&[1]), &alpha, false));
    }

    #[test]
    fn classify_examples() {
        let dd = d("A2");
        let f = dd.classify_coweight(dd.coroot(1), 0b01);
        assert!(f.k_minuscule);
        let f = dd.classify_coweight(&zero_coords(), 0b11);
        assert!(f.k_dominant && f.k_antidominant && f.k_minuscule && !f.strongly_k_minuscule);
        let g = d("G2");
        // short simple root is α_1; the long positive roots outside Φ_K are the ones of length² 6
        let k = 0b01;
        for a in 0..g.num_pos_roots() {
            if g.in_levi(a, k) {
                continue;
            }
            let min = g.levi_pos_roots(k).into_iter().all(|b| g.pair(b, g.coroot(a)).abs() <= 1);
            assert_eq!(g.strongly_minuscule(a, k).unwrap(), min && g.is_long(a));
        }
        assert!(g.strongly_minuscule(0, k).is_err());
    }

    #[test]
    fn projection_example() {
        let dd = d("A2");
        let v = dd.to_q(dd.coroot(0));
        let p = dd.pr(&v, 0b01);
        assert!(dd.pair_q(0, &p).is_zero());
        assert!(p.is_zero());
        let v = dd.to_q(&dd.coords(&[2, 1]));
        let p = dd.pr(&v, 0b01);
        assert!(dd.pair_q(0, &p).is_zero());
        let diff = &v - &p;
        let c = dd.coroot_coords_q(&diff);
        assert!(c[1].is_zero());
    }

    #[test]
    fn levi_examples() {
        let dd = d("A2");
        let reg = dd.to_q(&dd.coords(&[1, 1]));
        assert!(dd.phi_v(&reg).is_empty());
        assert_eq!(dd.j_v(&reg).unwrap(), 0);
        let z = dd.to_q(&zero_coords());
        assert_eq!(dd.phi_v(&z).len(), 6);
        assert_eq!(dd.j_v(&z).unwrap(), 0b11);
        assert!(dd.j_v(&dd.to_q(&dd.coords(&[-1, 0]))).is_err());
    }

    #[test]
    fn saturation_of_a1_alpha() {
        let dd = d("A1");
        let s = dd.saturation(dd.coroot(0), true);
        assert_eq!(s, vec![dd.coords(&[-2]), dd.coords(&[0]), dd.coords(&[2])]);
    }

    #[test]
    fn label_round_trip() {
        let s = DatumSpec::parse_label("A1xA1").unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].copies, 2);
        assert_eq!(s.label(), "A1xA1");
        let js: DatumSpec = serde_json::from_str(r#"{"components":[{"type":"A","rank":2,"copies":2}]}"#).unwrap();
        assert_eq!(js.label(), "A2xA2");
    }
}
