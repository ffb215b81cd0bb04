//! Diagram automorphisms σ and their action on the root datum and on `W̃`.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::affine::{AffRoot, ExtAffElem};
use crate::error::{Error, Result};
use crate::intlat::QuotientGroup;
use crate::root_datum::{Coords, RootDatum, SimpleType, WeylElem, MAX_RANK};

/// JSON form `{"perm":[2,1,3],"components_shift":1}`, 1-based.
///
/// `perm` is either a permutation of all simple roots (with shift 0) or a
/// diagram automorphism π of one factor; in the latter case σ sends factor `c`
/// to factor `c + shift`, applying π when the index wraps around.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusSpec {
    pub perm: Vec<usize>,
    #[serde(default)]
    pub components_shift: usize,
}

pub struct Frobenius {
    datum: Arc<RootDatum>,
    name: String,
    perm: Vec<usize>,
    order: usize,
    root_perm: Vec<u16>,
    w_perm: Vec<u32>,
    saff_perm: Vec<usize>,
    coinv: OnceLock<QuotientGroup>,
}

impl std::fmt::Debug for Frobenius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Frobenius({}, {:?})", self.name, self.perm)
    }
}

fn perm_order(p: &[usize]) -> usize {
    let mut cur: Vec<usize> = (0..p.len()).collect();
    let mut k = 1;
    loop {
        cur = cur.iter().map(|&i| p[i]).collect();
        if cur.iter().enumerate().all(|(i, &x)| i == x) {
            return k;
        }
        k += 1;
    }
}

impl Frobenius {
    pub fn identity(datum: Arc<RootDatum>) -> Self {
        let n = datum.rank();
        Self::from_perm(datum, (0..n).collect(), "id").unwrap()
    }

    /// Builds σ from a 0-based permutation of the simple roots.
    pub fn from_perm(datum: Arc<RootDatum>, perm: Vec<usize>, name: &str) -> Result<Self> {
        let n = datum.rank();
        let bad = || Error::NotDiagramAutomorphism(format!("{perm:?}"));
        if perm.len() != n {
            return Err(bad());
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(bad());
            }
            seen[p] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if datum.cartan_entry(perm[i], perm[j]) != datum.cartan_entry(i, j) {
                    return Err(bad());
                }
            }
        }
        let root_perm: Vec<u16> = (0..datum.num_roots())
            .map(|a| {
                let r = datum.root(a);
                let mut img = [0; MAX_RANK];
                for i in 0..n {
                    img[perm[i]] = r[i];
                }
                datum.root_index(&img).expect("diagram automorphisms permute roots") as u16
            })
            .collect();
        let w_perm: Vec<u32> = datum
            .weyl_elements()
            .map(|w| {
                let word: Vec<usize> = datum.w_word(w).iter().map(|&i| perm[i as usize]).collect();
                datum.w_from_word(&word).0
            })
            .collect();
        let saff_perm: Vec<usize> = datum
            .simple_affine()
            .iter()
            .map(|s| match s.finite {
                Some(i) => perm[i],
                None => {
                    let c = datum.components()[s.component];
                    n + datum.component_of_simple(perm[c.offset])
                }
            })
            .collect();
        let order = perm_order(&perm);
        Ok(Frobenius {
            datum,
            name: name.to_string(),
            perm,
            order,
            root_perm,
            w_perm,
            saff_perm,
            coinv: OnceLock::new(),
        })
    }

    pub fn from_spec(datum: Arc<RootDatum>, spec: &FrobeniusSpec) -> Result<Self> {
        let n = datum.rank();
        let bad = || Error::NotDiagramAutomorphism(format!("{spec:?}"));
        let p0: Vec<usize> = spec.perm.iter().map(|&x| x.checked_sub(1).ok_or_else(bad)).collect::<Result<_>>()?;
        if p0.len() == n && spec.components_shift == 0 {
            return Self::from_perm(datum, p0, "custom");
        }
        let comps = datum.components().to_vec();
        let d = comps.len();
        let r = comps[0].rank;
        if comps.iter().any(|c| c.rank != r || c.ty != comps[0].ty) || p0.len() != r {
            return Err(bad());
        }
        let k = spec.components_shift % d;
        let mut perm = vec![0; n];
        for c in 0..d {
            for i in 0..r {
                let (c2, i2) = if c + k < d { (c + k, i) } else { (c + k - d, p0[i]) };
                perm[c * r + i] = c2 * r + i2;
            }
        }
        Self::from_perm(datum, perm, "custom")
    }

    /// `id`, `flip` (the nontrivial diagram automorphism of each factor),
    /// `swap` (cyclic shift of the factors), `triality` (D4) or a JSON spec.
    pub fn named(datum: Arc<RootDatum>, name: &str) -> Result<Self> {
        let n = datum.rank();
        let comps = datum.components().to_vec();
        match name {
            "id" | "identity" | "trivial" => Ok(Self::identity(datum)),
            "flip" => {
                let mut perm: Vec<usize> = (0..n).collect();
                for c in &comps {
                    let o = c.offset;
                    let r = c.rank;
                    match c.ty {
                        SimpleType::A => (0..r).for_each(|i| perm[o + i] = o + r - 1 - i),
                        SimpleType::D => {
                            perm[o + r - 2] = o + r - 1;
                            perm[o + r - 1] = o + r - 2;
                        }
                        SimpleType::E if r == 6 => {
                            for (a, b) in [(0, 5), (2, 4), (1, 1), (3, 3), (4, 2), (5, 0)] {
                                perm[o + a] = o + b;
                            }
                        }
                        _ => return Err(Error::NotDiagramAutomorphism(format!("no flip for {}{}", c.ty, r))),
                    }
                }
                Self::from_perm(datum, perm, "flip")
            }
            "swap" | "shift" => {
                let r = comps[0].rank;
                let spec = FrobeniusSpec { perm: (1..=r).collect(), components_shift: 1 };
                let mut f = Self::from_spec(datum, &spec)?;
                f.name = name.to_string();
                Ok(f)
            }
            "triality" => {
                if comps.iter().any(|c| c.ty != SimpleType::D || c.rank != 4) {
                    return Err(Error::NotDiagramAutomorphism("triality needs D4".into()));
                }
                let mut perm: Vec<usize> = (0..n).collect();
                for c in &comps {
                    let o = c.offset;
                    perm[o] = o + 2;
                    perm[o + 2] = o + 3;
                    perm[o + 3] = o;
                }
                Self::from_perm(datum, perm, "triality")
            }
            other => {
                let spec: FrobeniusSpec =
                    serde_json::from_str(other).map_err(|e| Error::Parse(format!("sigma `{other}`: {e}")))?;
                Self::from_spec(datum, &spec)
            }
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> Arc<RootDatum> {
        self.datum.clone()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// 0-based image of each simple root.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn spec(&self) -> FrobeniusSpec {
        FrobeniusSpec { perm: self.perm.iter().map(|&x| x + 1).collect(), components_shift: 0 }
    }

    /// Integer matrix of σ on `Y` in the fundamental coweight basis.
    pub fn y_matrix(&self) -> Vec<Vec<i32>> {
        let n = self.datum.rank();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[self.perm[i]][i] = 1;
        }
        m
    }

    #[inline]
    pub fn act_y(&self, mu: &Coords) -> Coords {
        let mut out = [0; MAX_RANK];
        for i in 0..self.datum.rank() {
            out[self.perm[i]] = mu[i];
        }
        out
    }

    pub fn act_y_inv(&self, mu: &Coords) -> Coords {
        let mut out = [0; MAX_RANK];
        for i in 0..self.datum.rank() {
            out[i] = mu[self.perm[i]];
        }
        out
    }

    pub fn act_y_pow(&self, mu: &Coords, k: usize) -> Coords {
        (0..k % self.order).fold(*mu, |m, _| self.act_y(&m))
    }

    pub fn act_q(&self, v: &crate::QVec) -> crate::QVec {
        let mut coords = v.coords.clone();
        for i in 0..self.datum.rank() {
            coords[self.perm[i]] = v.coords[i];
        }
        crate::QVec { coords }
    }

    #[inline]
    pub fn act_root(&self, a: usize) -> usize {
        self.root_perm[a] as usize
    }

    pub fn act_root_pow(&self, a: usize, k: usize) -> usize {
        (0..k % self.order).fold(a, |b, _| self.act_root(b))
    }

    pub fn act_simple(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// Mask image of a set of simple roots.
    pub fn act_mask(&self, k: u32) -> u32 {
        (0..self.datum.rank()).filter(|&i| k & (1 << i) != 0).fold(0, |m, i| m | (1 << self.perm[i]))
    }

    pub fn is_stable_mask(&self, k: u32) -> bool {
        self.act_mask(k) == k
    }

    #[inline]
    pub fn act_w(&self, w: WeylElem) -> WeylElem {
        WeylElem(self.w_perm[w.0 as usize])
    }

    /// `σ(t^μ w) = t^{σμ} σ(w)`.
    #[inline]
    pub fn act(&self, x: &ExtAffElem) -> ExtAffElem {
        self.datum.elem(self.act_y(&x.mu), self.act_w(x.w))
    }

    pub fn act_inv(&self, x: &ExtAffElem) -> ExtAffElem {
        (1..self.order).fold(*x, |y, _| self.act(&y))
    }

    pub fn act_affroot(&self, r: &AffRoot) -> AffRoot {
        AffRoot { alpha: self.act_root(r.alpha), k: r.k }
    }

    /// Image of a simple affine reflection index.
    pub fn act_s(&self, s: usize) -> usize {
        self.saff_perm[s]
    }

    /// Simple affine reflection orbits, each sorted.
    pub fn s_orbits(&self) -> Vec<Vec<usize>> {
        orbits(&self.saff_perm)
    }

    /// Orbits of σ on the finite simple roots.
    pub fn simple_orbits(&self) -> Vec<Vec<usize>> {
        orbits(&self.perm)
    }

    /// Orbits of σ on all roots, each starting at its smallest index.
    pub fn root_orbits(&self) -> Vec<Vec<usize>> {
        let p: Vec<usize> = self.root_perm.iter().map(|&x| x as usize).collect();
        orbits(&p)
    }

    pub fn root_orbit(&self, a: usize) -> Vec<usize> {
        let mut o = vec![a];
        let mut b = self.act_root(a);
        while b != a {
            o.push(b);
            b = self.act_root(b);
        }
        o
    }

    /// `(w̃σ)(α̃) = w̃(σ α̃)`.
    pub fn twisted_act_affroot(&self, x: &ExtAffElem, r: &AffRoot) -> AffRoot {
        self.datum.act_affroot(x, &self.act_affroot(r))
    }

    /// `(w̃σ)⁻¹(α̃) = σ⁻¹(w̃⁻¹ α̃)`.
    pub fn twisted_act_affroot_inv(&self, x: &ExtAffElem, r: &AffRoot) -> AffRoot {
        let y = self.datum.act_affroot_inv(x, r);
        let a = self.act_root_pow(y.alpha, self.order - 1);
        AffRoot { alpha: a, k: y.k }
    }

    /// `w̃ σ(w̃) ⋯ σ^{m−1}(w̃)`, the element with `(w̃σ)^m = (that)·σ^m`.
    pub fn twisted_power(&self, x: &ExtAffElem, m: usize) -> ExtAffElem {
        let d = &self.datum;
        let mut acc = d.identity();
        let mut cur = *x;
        for _ in 0..m {
            acc = d.mul(&acc, &cur);
            cur = self.act(&cur);
        }
        acc
    }

    /// σ-conjugation `g w̃ σ(g)⁻¹`.
    pub fn conj(&self, g: &ExtAffElem, x: &ExtAffElem) -> ExtAffElem {
        let d = &self.datum;
        d.mul(&d.mul(g, x), &d.inv(&self.act(g)))
    }

    /// Action on `π₁(G)` classes.
    pub fn act_pi1(&self, c: &[i64]) -> Vec<i64> {
        let g = self.datum.pi1();
        let v = self.datum.coords(&g.rep(c));
        g.class(&self.datum.coords_vec(&self.act_y(&v)))
    }

    /// `π₁(G)^σ` as a sorted element list.
    pub fn pi1_fixed(&self) -> Vec<Vec<i64>> {
        self.datum.pi1().elements().into_iter().filter(|c| self.act_pi1(c) == *c).collect()
    }

    pub fn pi1_fixed_factors(&self) -> Vec<u64> {
        let els = self.pi1_fixed();
        self.datum.pi1().invariant_factors(&els)
    }

    /// `π₁(G)_σ = Y / (ZΦ∨ + (σ−1)Y)`.
    pub fn pi1_coinv(&self) -> &QuotientGroup {
        self.coinv.get_or_init(|| {
            let d = &self.datum;
            let n = d.rank();
            let mut gens: Vec<Vec<i64>> = (0..n).map(|i| d.coords_vec(d.coroot(i))).collect();
            for i in 0..n {
                let mut e = [0; MAX_RANK];
                e[i] = 1;
                gens.push(d.coords_vec(&d.sub(&self.act_y(&e), &e)));
            }
            QuotientGroup::new(&gens, n)
        })
    }

    pub fn pi1_coinv_factors(&self) -> Vec<u64> {
        let g = self.pi1_coinv();
        g.invariant_factors(&g.elements())
    }

    /// Kottwitz point `κ(w̃) ∈ π₁(G)_σ`.
    pub fn kappa(&self, x: &ExtAffElem) -> Vec<i64> {
        self.pi1_coinv().class(&self.datum.coords_vec(&x.mu))
    }

    pub fn kappa_coweight(&self, mu: &Coords) -> Vec<i64> {
        self.pi1_coinv().class(&self.datum.coords_vec(mu))
    }

    /// σ-average `(1/o) Σ σ^i(μ)`.
    pub fn average(&self, mu: &Coords) -> crate::QVec {
        let d = &self.datum;
        let mut acc = crate::QVec::zero(d.rank());
        let mut cur = *mu;
        for _ in 0..self.order {
            acc = &acc + &d.to_q(&cur);
            cur = self.act_y(&cur);
        }
        acc.scale(&crate::Q::new(1, self.order as i128))
    }
}

fn orbits(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut o = vec![i];
        seen[i] = true;
        let mut j = p[i];
        while j != i {
            seen[j] = true;
            o.push(j);
            j = p[j];
        }
        out.push(o);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: &str) -> Arc<RootDatum> {
        Arc::new(RootDatum::from_label(l).unwrap())
    }

    #[test]
    fn identity_and_orders() {
        let f = Frobenius::identity(arc("A2"));
        assert_eq!(f.order(), 1);
        let f = Frobenius::named(arc("A2"), "flip").unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.y_matrix(), vec![vec![0, 1], vec![1, 0]]);
        let f = Frobenius::named(arc("D4"), "triality").unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.act_simple(1), 1);
        let f = Frobenius::named(arc("A1xA1"), "swap").unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.perm(), &[1, 0]);
    }

    #[test]
    fn rejects_non_automorphisms() {
        assert!(Frobenius::from_perm(arc("B2"), vec![1, 0], "x").is_err());
        assert!(Frobenius::from_perm(arc("A3"), vec![1, 0, 2], "x").is_err());
        assert!(Frobenius::named(arc("B3"), "flip").is_err());
    }

    #[test]
    fn spec_json_with_shift() {
        let d = arc("A2xA2");
        let spec: FrobeniusSpec = serde_json::from_str(r#"{"perm":[2,1],"components_shift":1}"#).unwrap();
        let f = Frobenius::from_spec(d, &spec).unwrap();
        assert_eq!(f.perm(), &[2, 3, 1, 0]);
        assert_eq!(f.order(), 4);
    }

    #[test]
    fn sigma_preserves_positive_affine_roots_and_simple_set() {
        for (l, s) in [("A2", "flip"), ("A3", "flip"), ("D4", "triality"), ("A1xA1", "swap"), ("E6", "flip")] {
            let f = Frobenius::named(arc(l), s).unwrap();
            let d = f.datum();
            for a in 0..d.num_roots() {
                assert_eq!(d.is_positive(a), d.is_positive(f.act_root(a)));
            }
            for (s_i, sa) in d.simple_affine().iter().enumerate() {
                let img = f.act_affroot(&sa.root);
                assert_eq!(img, d.simple_affine()[f.act_s(s_i)].root);
                assert_eq!(f.act(&sa.elem), d.s_elem(f.act_s(s_i)));
            }
        }
    }

    #[test]
    fn a2_flip_pi1_fixed_is_trivial() {
        let f = Frobenius::named(arc("A2"), "flip").unwrap();
        assert_eq!(f.pi1_fixed().len(), 1);
        assert_eq!(f.pi1_coinv().order(), Some(1));
        let f = Frobenius::named(arc("A1xA1"), "swap").unwrap();
        assert_eq!(f.pi1_fixed().len(), 2);
        assert_eq!(f.pi1_coinv().order(), Some(2));
        let f = Frobenius::named(arc("D4"), "triality").unwrap();
        assert_eq!(f.pi1_fixed().len(), 1);
    }
}
