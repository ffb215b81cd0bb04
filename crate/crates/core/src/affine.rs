//! The extended affine Weyl group `W̃ = Y ⋊ W₀`.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlat::QuotientGroup;
use crate::root_datum::{Coords, RootDatum, WeylElem, MAX_RANK};
use crate::{QVec, Q};

/// `t^μ w`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffElem {
    pub mu: Coords,
    pub w: WeylElem,
    pub datum: u32,
}

impl fmt::Debug for ExtAffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}·w{}", &self.mu[..], self.w.0)
    }
}

/// The affine function `v ↦ −⟨α, v⟩ + k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffRoot {
    pub alpha: usize,
    pub k: i32,
}

/// A simple affine reflection with its simple affine root.
#[derive(Clone, Copy, Debug)]
pub struct SimpleAff {
    pub root: AffRoot,
    pub elem: ExtAffElem,
    /// Finite index, or the factor for an affine node.
    pub finite: Option<usize>,
    pub component: usize,
}

pub(crate) fn build_simple_aff(d: &RootDatum) -> Vec<SimpleAff> {
    let mut out = Vec::new();
    for i in 0..d.rank() {
        let root = AffRoot { alpha: d.neg(i), k: 0 };
        out.push(SimpleAff {
            root,
            elem: d.finite(d.simple_reflection(i)),
            finite: Some(i),
            component: d.component_of_simple(i),
        });
    }
    for c in 0..d.components().len() {
        let theta = d.highest_root(c);
        let root = AffRoot { alpha: theta, k: 1 };
        out.push(SimpleAff { root, elem: d.affine_reflection(root), finite: None, component: c });
    }
    out
}

pub(crate) fn build_pi1(d: &RootDatum) -> QuotientGroup {
    let gens: Vec<Vec<i64>> = (0..d.rank()).map(|i| d.coords_vec(d.coroot(i))).collect();
    QuotientGroup::new(&gens, d.rank())
}

impl RootDatum {
    pub fn elem(&self, mu: Coords, w: WeylElem) -> ExtAffElem {
        ExtAffElem { mu, w, datum: self.id() }
    }

    pub fn identity(&self) -> ExtAffElem {
        self.elem([0; MAX_RANK], WeylElem::ID)
    }

    pub fn translation(&self, mu: &Coords) -> ExtAffElem {
        self.elem(*mu, WeylElem::ID)
    }

    pub fn finite(&self, w: WeylElem) -> ExtAffElem {
        self.elem([0; MAX_RANK], w)
    }

    fn check(&self, a: &ExtAffElem) -> Result<()> {
        if a.datum == self.id() { Ok(()) } else { Err(Error::DatumMismatch) }
    }

    /// Product with datum checks.
    pub fn compose(&self, a: &ExtAffElem, b: &ExtAffElem) -> Result<ExtAffElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn invert(&self, a: &ExtAffElem) -> Result<ExtAffElem> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    #[inline]
    pub fn mul(&self, a: &ExtAffElem, b: &ExtAffElem) -> ExtAffElem {
        debug_assert!(a.datum == self.id() && b.datum == self.id());
        let wb = self.w_act(a.w, &b.mu);
        self.elem(self.add(&a.mu, &wb), self.w_mul(a.w, b.w))
    }

    #[inline]
    pub fn inv(&self, a: &ExtAffElem) -> ExtAffElem {
        let wi = self.w_inv(a.w);
        let m = self.w_act(wi, &a.mu);
        self.elem(self.neg_coords(&m), wi)
    }

    /// Action on `V`: `v ↦ μ + w(v)`.
    pub fn act_point(&self, a: &ExtAffElem, v: &QVec) -> QVec {
        &self.to_q(&a.mu) + &self.w_act_q(a.w, v)
    }

    pub fn eval_affroot(&self, r: &AffRoot, v: &QVec) -> Q {
        Q::from_integer(r.k as i128) - self.pair_q(r.alpha, v)
    }

    /// `w̃(α̃)`, the function `v ↦ α̃(w̃⁻¹ v)`.
    #[inline]
    pub fn act_affroot(&self, a: &ExtAffElem, r: &AffRoot) -> AffRoot {
        let b = self.w_root(a.w, r.alpha);
        AffRoot { alpha: b, k: r.k + self.pair(b, &a.mu) }
    }

    /// `w̃⁻¹(α̃)`.
    #[inline]
    pub fn act_affroot_inv(&self, a: &ExtAffElem, r: &AffRoot) -> AffRoot {
        let wi = self.w_inv(a.w);
        AffRoot { alpha: self.w_root(wi, r.alpha), k: r.k - self.pair(r.alpha, &a.mu) }
    }

    #[inline]
    pub fn is_positive_affroot(&self, r: &AffRoot) -> bool {
        if self.is_positive(r.alpha) { r.k >= 1 } else { r.k >= 0 }
    }

    pub fn neg_affroot(&self, r: &AffRoot) -> AffRoot {
        AffRoot { alpha: self.neg(r.alpha), k: -r.k }
    }

    /// `s_α̃ = t^{kα∨} s_α`.
    pub fn affine_reflection(&self, r: AffRoot) -> ExtAffElem {
        let c = self.coroot(r.alpha);
        let mut mu = [0; MAX_RANK];
        for j in 0..self.rank() {
            mu[j] = r.k * c[j];
        }
        self.elem(mu, self.reflection(r.alpha))
    }

    /// `ℓ(t^μ w) = Σ_{β>0} |⟨wβ, μ⟩ + [wβ < 0]|`.
    pub fn length(&self, a: &ExtAffElem) -> usize {
        let mut l = 0i32;
        for b in 0..self.num_pos_roots() {
            let wb = self.w_root(a.w, b);
            let c = self.pair(wb, &a.mu) + i32::from(!self.is_positive(wb));
            l += c.abs();
        }
        l as usize
    }

    /// Length as the number of positive affine roots sent to negative ones,
    /// counted over the finite window of levels that can change sign.
    pub fn length_by_inversions(&self, a: &ExtAffElem) -> usize {
        let bound = (0..self.num_roots()).map(|b| self.pair(b, &a.mu).abs()).max().unwrap_or(0) + 1;
        let mut l = 0;
        for alpha in 0..self.num_roots() {
            for k in -bound..=bound {
                let r = AffRoot { alpha, k };
                if self.is_positive_affroot(&r) && !self.is_positive_affroot(&self.act_affroot(a, &r)) {
                    l += 1;
                }
            }
        }
        l
    }

    pub fn simple_affine(&self) -> &[SimpleAff] {
        self.simple_aff_table()
    }

    pub fn num_simple_affine(&self) -> usize {
        self.simple_aff_table().len()
    }

    pub fn s_elem(&self, s: usize) -> ExtAffElem {
        self.simple_aff_table()[s].elem
    }

    /// Name of a simple affine reflection: `s1..sn`, then `s0` or `s0_c`.
    pub fn s_name(&self, s: usize) -> String {
        let sa = &self.simple_aff_table()[s];
        match sa.finite {
            Some(i) => format!("s{}", i + 1),
            None if self.components().len() == 1 => "s0".into(),
            None => format!("s0_{}", sa.component + 1),
        }
    }

    /// Whether `s·w̃ < w̃`.
    #[inline]
    pub fn left_descent(&self, s: usize, a: &ExtAffElem) -> bool {
        let r = self.simple_aff_table()[s].root;
        !self.is_positive_affroot(&self.act_affroot_inv(a, &r))
    }

    /// Whether `w̃·s < w̃`.
    #[inline]
    pub fn right_descent(&self, a: &ExtAffElem, s: usize) -> bool {
        let r = self.simple_aff_table()[s].root;
        !self.is_positive_affroot(&self.act_affroot(a, &r))
    }

    #[inline]
    pub fn lmul_s(&self, s: usize, a: &ExtAffElem) -> ExtAffElem {
        self.mul(&self.s_elem(s), a)
    }

    #[inline]
    pub fn rmul_s(&self, a: &ExtAffElem, s: usize) -> ExtAffElem {
        self.mul(a, &self.s_elem(s))
    }

    /// `w̃ = s_{i₁}⋯s_{i_k}·ω` with each `i_j` the lowest-index left descent.
    pub fn decompose(&self, a: &ExtAffElem) -> (Vec<usize>, ExtAffElem) {
        let mut word = Vec::new();
        let mut x = *a;
        'outer: loop {
            for s in 0..self.num_simple_affine() {
                if self.left_descent(s, &x) {
                    word.push(s);
                    x = self.lmul_s(s, &x);
                    continue 'outer;
                }
            }
            return (word, x);
        }
    }

    pub fn is_length_zero(&self, a: &ExtAffElem) -> bool {
        (0..self.num_simple_affine()).all(|s| !self.left_descent(s, a))
    }

    pub fn pi1(&self) -> &QuotientGroup {
        self.pi1_table()
    }

    /// `η(t^μ w) = μ mod ZΦ∨`.
    pub fn eta(&self, a: &ExtAffElem) -> Vec<i64> {
        self.pi1().class(&self.coords_vec(&a.mu))
    }

    pub fn eta_coweight(&self, mu: &Coords) -> Vec<i64> {
        self.pi1().class(&self.coords_vec(mu))
    }

    /// The length-zero elements, one per class of `π₁`, ordered by class.
    pub fn omega(&self) -> Vec<ExtAffElem> {
        let g = self.pi1();
        g.elements()
            .into_iter()
            .map(|c| {
                let mu = self.coords(&g.rep(&c));
                self.decompose(&self.translation(&mu)).1
            })
            .collect()
    }

    /// Elements of length at most `radius`.
    pub fn ball(&self, radius: usize) -> Vec<ExtAffElem> {
        let mut out: Vec<ExtAffElem> = self.omega();
        let mut seen: HashSet<ExtAffElem> = out.iter().copied().collect();
        let mut level = out.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &level {
                for s in 0..self.num_simple_affine() {
                    if !self.left_descent(s, x) {
                        let y = self.lmul_s(s, x);
                        if seen.insert(y) {
                            next.push(y);
                        }
                    }
                }
            }
            next.sort();
            out.extend_from_slice(&next);
            level = next;
        }
        out
    }

    /// Prints `t[c1,..,cn]` followed by a reduced word of the finite part.
    pub fn format_elem(&self, a: &ExtAffElem) -> String {
        let mut s = String::from("t[");
        let parts: Vec<String> = a.mu[..self.rank()].iter().map(|x| x.to_string()).collect();
        s.push_str(&parts.join(","));
        s.push(']');
        for &i in self.w_word(a.w) {
            s.push_str(&format!(".s{}", i + 1));
        }
        s
    }

    /// Parses the notation of [`RootDatum::format_elem`]; also accepts `s0`/`s0_c`,
    /// `e` for the identity and any order of factors.
    pub fn parse_elem(&self, text: &str) -> Result<ExtAffElem> {
        let perr = |m: &str| Error::Parse(format!("{m} in `{text}`"));
        let mut x = self.identity();
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "1" {
            return Ok(x);
        }
        let mut rest = t;
        while !rest.is_empty() {
            rest = rest.trim_start_matches(['.', '*', ' ']);
            if rest.is_empty() {
                break;
            }
            if let Some(r) = rest.strip_prefix("t[") {
                let end = r.find(']').ok_or_else(|| perr("unclosed bracket"))?;
                let vals: Vec<i64> = r[..end]
                    .split(',')
                    .map(|v| v.trim().parse::<i64>().map_err(|_| perr("bad coordinate")))
                    .collect::<Result<_>>()?;
                if vals.len() != self.rank() {
                    return Err(perr("wrong number of coordinates"));
                }
                x = self.mul(&x, &self.translation(&self.coords(&vals)));
                rest = &r[end + 1..];
            } else if let Some(r) = rest.strip_prefix('s') {
                let end = r.find(['.', '*', ' ', 't']).unwrap_or(r.len());
                let tok = &r[..end];
                let s = self.parse_s(tok).ok_or_else(|| perr("bad reflection"))?;
                x = self.rmul_s(&x, s);
                rest = &r[end..];
            } else if let Some(r) = rest.strip_prefix('e') {
                rest = r;
            } else {
                return Err(perr("unexpected token"));
            }
        }
        Ok(x)
    }

    fn parse_s(&self, tok: &str) -> Option<usize> {
        if let Some(c) = tok.strip_prefix("0_") {
            let c: usize = c.parse().ok()?;
            (1..=self.components().len()).contains(&c).then(|| self.rank() + c - 1)
        } else {
            let i: usize = tok.parse().ok()?;
            if i == 0 {
                (self.components().len() == 1).then_some(self.rank())
            } else {
                (i <= self.rank()).then(|| i - 1)
            }
        }
    }

    /// Translation part paired with every root is zero.
    pub fn is_central(&self, mu: &Coords) -> bool {
        mu[..self.rank()].iter().all(|&x| x == 0)
    }

    pub fn q_is_zero(&self, v: &QVec) -> bool {
        v.coords.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::RootDatum;

    fn d(l: &str) -> RootDatum {
        RootDatum::from_label(l).unwrap()
    }

    #[test]
    fn a1_examples() {
        let a1 = d("A1");
        let tau = a1.parse_elem("t[1].s1").unwrap();
        assert_eq!(a1.mul(&tau, &tau), a1.identity());
        assert_eq!(a1.length(&tau), 0);
        let ta = a1.translation(a1.coroot(0));
        assert_eq!(a1.length(&ta), 2);
        assert_eq!(a1.length_by_inversions(&ta), 2);
        assert_eq!(a1.num_simple_affine(), 2);
        let (w, om) = a1.decompose(&ta);
        assert_eq!(w.len(), 2);
        assert_eq!(om, a1.identity());
        assert_eq!(a1.omega().len(), 2);
        assert_eq!(a1.eta(&tau), vec![1]);
    }

    #[test]
    fn a1_affroot_action_pointwise() {
        let a1 = d("A1");
        let x = a1.mul(&a1.translation(a1.coroot(0)), &a1.finite(a1.simple_reflection(0)));
        let r = AffRoot { alpha: 0, k: 0 };
        let img = a1.act_affroot(&x, &r);
        assert_eq!(img, AffRoot { alpha: 1, k: -2 });
        let v = QVec { coords: vec![Q::new(1, 3)] };
        let xinv_v = a1.act_point(&a1.inv(&x), &v);
        assert_eq!(a1.eval_affroot(&img, &v), a1.eval_affroot(&r, &xinv_v));
    }

    #[test]
    fn a2_simple_and_omega() {
        let a2 = d("A2");
        assert_eq!(a2.num_simple_affine(), 3);
        let om = a2.omega();
        assert_eq!(om.len(), 3);
        for o in &om {
            assert_eq!(a2.length(o), 0);
        }
        for s in 0..3 {
            assert_eq!(a2.length(&a2.s_elem(s)), 1);
        }
    }

    #[test]
    fn positivity_matches_alcove_barycenter() {
        for l in ["A2", "B2", "G2", "A1xA2"] {
            let dd = d(l);
            let tot = (0..dd.components().len())
                .map(|c| dd.root_height(dd.highest_root(c)))
                .max()
                .unwrap() as i128;
            let v = QVec { coords: vec![Q::new(1, tot + 1); dd.rank()] };
            for alpha in 0..dd.num_roots() {
                for k in -3..=3 {
                    let r = AffRoot { alpha, k };
                    assert_eq!(dd.is_positive_affroot(&r), dd.eval_affroot(&r, &v) > Q::zero());
                }
            }
        }
    }

    #[test]
    fn format_parse_round_trip() {
        let a3 = d("A3");
        for x in a3.ball(4) {
            let s = a3.format_elem(&x);
            assert_eq!(a3.parse_elem(&s).unwrap(), x, "{s}");
        }
        assert!(a3.parse_elem("t[1,2]").is_err());
        assert!(a3.parse_elem("s9").is_err());
        let s0 = a3.parse_elem("s0").unwrap();
        assert_eq!(s0, a3.s_elem(3));
    }

    #[test]
    fn datum_mismatch() {
        let a = d("A1");
        let b = d("A1");
        assert_eq!(a.compose(&a.identity(), &b.identity()), Err(Error::DatumMismatch));
    }
}
