//! σ-conjugation: Newton and Kottwitz points, semi-standard elements, partial
//! conjugation, the flat invariant `ν♭` and permissible roots.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::affine::{AffRoot, ExtAffElem};
use crate::bruhat::AdmissibleSet;
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::root_datum::{Coords, RootDatum, WeylElem};
use crate::{QVec, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonKottwitz {
    /// `ν_w̃ = ξ/m`, not dominantized.
    pub nu: QVec,
    /// The dominant conjugate `ν̄_w̃`.
    pub newton: QVec,
    pub kottwitz: Vec<i64>,
    pub m: usize,
}

/// Order of `p(w̃σ)` in `W₀ ⋊ ⟨σ⟩`.
pub fn p_order(f: &Frobenius, x: &ExtAffElem) -> usize {
    let d = f.datum();
    let mut w = WeylElem::ID;
    let mut cur = x.w;
    let mut i = 0;
    loop {
        w = d.w_mul(w, cur);
        cur = f.act_w(cur);
        i += 1;
        if i % f.order() == 0 && w == WeylElem::ID {
            return i;
        }
    }
}

/// `p(w̃σ)^k(v) = (wσ)^k v`.
pub fn p_act(f: &Frobenius, x: &ExtAffElem, mu: &Coords, k: usize) -> Coords {
    let d = f.datum();
    (0..k).fold(*mu, |m, _| d.w_act(x.w, &f.act_y(&m)))
}

pub fn p_act_q(f: &Frobenius, x: &ExtAffElem, v: &QVec) -> QVec {
    f.datum().w_act_q(x.w, &f.act_q(v))
}

/// `p(w̃σ)` on roots.
pub fn p_act_root(f: &Frobenius, x: &ExtAffElem, a: usize) -> usize {
    f.datum().w_root(x.w, f.act_root(a))
}

pub fn p_act_root_inv(f: &Frobenius, x: &ExtAffElem, a: usize) -> usize {
    let d = f.datum();
    f.act_root_pow(d.w_root(d.w_inv(x.w), a), f.order() - 1)
}

pub fn nu(f: &Frobenius, x: &ExtAffElem) -> QVec {
    let d = f.datum();
    let m = p_order(f, x);
    let xi = f.twisted_power(x, m).mu;
    d.to_q(&xi).scale(&Q::new(1, m as i128))
}

pub fn newton_point(f: &Frobenius, x: &ExtAffElem) -> NewtonKottwitz {
    let d = f.datum();
    let m = p_order(f, x);
    let xi = f.twisted_power(x, m).mu;
    let nu = d.to_q(&xi).scale(&Q::new(1, m as i128));
    let (newton, _) = d.dominant_conjugate_q(&nu);
    NewtonKottwitz { nu, newton, kottwitz: f.kappa(x), m }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiStandard {
    pub semi_standard: bool,
    pub standard: bool,
    pub nu: QVec,
}

/// Decides `w̃σ(Φ̃⁺_ν) = Φ̃⁺_ν` from the floor affine roots of `Φ_ν`.
pub fn semi_standard(f: &Frobenius, x: &ExtAffElem) -> SemiStandard {
    let d = f.datum();
    let v = nu(f, x);
    let phi = d.phi_v(&v);
    let stable = phi.iter().all(|&a| d.pair_q(p_act_root(f, x, a), &v).is_zero());
    let floors = phi.iter().all(|&a| {
        let r = AffRoot { alpha: a, k: i32::from(d.is_positive(a)) };
        let img = f.twisted_act_affroot(x, &r);
        img.k == i32::from(d.is_positive(img.alpha))
    });
    let ss = stable && floors;
    SemiStandard { semi_standard: ss, standard: ss && d.is_dominant_q(&v), nu: v }
}

pub fn is_semi_standard(f: &Frobenius, x: &ExtAffElem) -> bool {
    semi_standard(f, x).semi_standard
}

/// Semi-standardness tested on all affine roots of `Φ_ν` with `|k| ≤ bound`.
pub fn semi_standard_window(f: &Frobenius, x: &ExtAffElem, bound: i32) -> bool {
    let d = f.datum();
    let v = nu(f, x);
    let phi: HashSet<usize> = d.phi_v(&v).into_iter().collect();
    phi.iter().all(|&a| {
        (-bound..=bound).all(|k| {
            let r = AffRoot { alpha: a, k };
            let img = f.twisted_act_affroot(x, &r);
            phi.contains(&img.alpha) && d.is_positive_affroot(&r) == d.is_positive_affroot(&img)
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    /// `w̃ →_s w̃′`: `w̃′ = s w̃ σ(s)` and `ℓ(w̃′) ≤ ℓ(w̃)`.
    Arrow,
    /// `w̃ ⇀_s w̃′`: `w̃′ = s w̃ σ(s)` and `s w̃ < w̃`.
    HalfArrow,
}

pub fn conj_move(f: &Frobenius, x: &ExtAffElem, s: usize, kind: MoveKind) -> Option<ExtAffElem> {
    let d = f.datum();
    let y = d.rmul_s(&d.lmul_s(s, x), f.act_s(s));
    let ok = match kind {
        MoveKind::Arrow => d.length(&y) <= d.length(x),
        MoveKind::HalfArrow => d.left_descent(s, x),
    };
    ok.then_some(y)
}

/// Whether `w̃ ∈ ᴷW̃`, i.e. `w̃ < s w̃` for all `s ∈ K`.
pub fn in_left_min(d: &RootDatum, x: &ExtAffElem, k: &[usize]) -> bool {
    k.iter().all(|&s| !d.left_descent(s, x))
}

/// `y = u·x` with `u ∈ W_K` and `x ∈ ᴷW̃`; returns `(u, x)`.
pub fn left_coset_split(d: &RootDatum, y: &ExtAffElem, k: &[usize]) -> (ExtAffElem, ExtAffElem) {
    let mut x = *y;
    let mut u = d.identity();
    while let Some(&s) = k.iter().find(|&&s| d.left_descent(s, &x)) {
        x = d.lmul_s(s, &x);
        u = d.rmul_s(&u, s);
    }
    (u, x)
}

/// Letters of a reduced word of `u ∈ W_K`, or `None` if `u ∉ W_K`.
pub fn parabolic_support(d: &RootDatum, u: &ExtAffElem, k: &[usize]) -> Option<BTreeSet<usize>> {
    let (word, rest) = left_coset_split_word(d, u, k);
    (rest == d.identity()).then(|| word.into_iter().collect())
}

fn left_coset_split_word(d: &RootDatum, y: &ExtAffElem, k: &[usize]) -> (Vec<usize>, ExtAffElem) {
    let mut x = *y;
    let mut word = Vec::new();
    while let Some(&s) = k.iter().find(|&&s| d.left_descent(s, &x)) {
        x = d.lmul_s(s, &x);
        word.push(s);
    }
    (word, x)
}

/// `I(K, x) = max{K′ ⊆ K : x σ(K′) x⁻¹ = K′}`.
pub fn i_set(f: &Frobenius, x: &ExtAffElem, k: &[usize]) -> Vec<usize> {
    let d = f.datum();
    let elems: Vec<ExtAffElem> = (0..d.num_simple_affine()).map(|s| d.s_elem(s)).collect();
    let image = |s: usize| {
        let e = d.mul(&d.mul(x, &d.s_elem(f.act_s(s))), &d.inv(x));
        elems.iter().position(|t| *t == e)
    };
    let mut cur: Vec<usize> = k.to_vec();
    loop {
        let keep: Vec<usize> = cur.iter().copied().filter(|&s| image(s).is_some_and(|t| cur.contains(&t))).collect();
        if keep.len() == cur.len() {
            return cur;
        }
        cur = keep;
    }
}

/// Elements of the parabolic subgroup `W_K ⊆ W^a`; fails if it exceeds `cap`.
pub fn parabolic_group(d: &RootDatum, k: &[usize], cap: usize) -> Result<Vec<ExtAffElem>> {
    let mut seen: HashSet<ExtAffElem> = HashSet::new();
    let id = d.identity();
    seen.insert(id);
    let mut queue = VecDeque::from([id]);
    let mut out = vec![id];
    while let Some(u) = queue.pop_front() {
        for &s in k {
            let v = d.rmul_s(&u, s);
            if seen.insert(v) {
                if out.len() >= cap {
                    return Err(Error::BudgetExceeded(format!("parabolic subgroup larger than {cap}")));
                }
                out.push(v);
                queue.push_back(v);
            }
        }
    }
    out.sort_by_cached_key(|u| (d.length(u), *u));
    Ok(out)
}

/// `{u w̃ σ(u)⁻¹ : u ∈ group}`.
pub fn sigma_class(f: &Frobenius, x: &ExtAffElem, group: &[ExtAffElem]) -> BTreeSet<ExtAffElem> {
    group.iter().map(|u| f.conj(u, x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialConj {
    pub x: ExtAffElem,
    pub u: ExtAffElem,
    /// Moves `(s, result)` applied in order.
    pub trace: Vec<(usize, ExtAffElem)>,
}

/// `w̃ →_K u·x` with `x ∈ ᴷW̃` and `u ∈ W_{I(K,x)}`.
pub fn partial_conjugation(f: &Frobenius, w: &ExtAffElem, k: &[usize], budget: usize) -> Result<PartialConj> {
    let d = f.datum();
    let mut cur = *w;
    let mut trace: Vec<(usize, ExtAffElem)> = Vec::new();
    'outer: loop {
        let l = d.length(&cur);
        for &s in k {
            if let Some(y) = conj_move(f, &cur, s, MoveKind::Arrow) {
                if d.length(&y) < l {
                    trace.push((s, y));
                    cur = y;
                    continue 'outer;
                }
            }
        }
        // same-length plateau
        let mut parent: std::collections::HashMap<ExtAffElem, (ExtAffElem, usize)> = Default::default();
        let mut seen: HashSet<ExtAffElem> = HashSet::from([cur]);
        let mut queue = VecDeque::from([cur]);
        let path_to = |parent: &std::collections::HashMap<ExtAffElem, (ExtAffElem, usize)>, mut y: ExtAffElem| {
            let mut p = Vec::new();
            while let Some(&(prev, s)) = parent.get(&y) {
                p.push((s, y));
                y = prev;
            }
            p.reverse();
            p
        };
        while let Some(y) = queue.pop_front() {
            let (u, x) = left_coset_split(d, &y, k);
            let iset = i_set(f, &x, k);
            if parabolic_support(d, &u, k).is_some_and(|sup| sup.iter().all(|s| iset.contains(s))) {
                trace.extend(path_to(&parent, y));
                return Ok(PartialConj { x, u, trace });
            }
            for &s in k {
                let z = d.rmul_s(&d.lmul_s(s, &y), f.act_s(s));
                let lz = d.length(&z);
                if lz < l {
                    trace.extend(path_to(&parent, y));
                    trace.push((s, z));
                    cur = z;
                    continue 'outer;
                }
                if lz == l && seen.insert(z) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded(format!(
                            "partial conjugation plateau of {} exceeds {budget}",
                            d.format_elem(w)
                        )));
                    }
                    parent.insert(z, (y, s));
                    queue.push_back(z);
                }
            }
        }
        return Err(Error::BudgetExceeded(format!("no terminal element for {}", d.format_elem(w))));
    }
}

/// A maximal `⇀_K` chain, always moving by the lowest available `s`.
pub fn halfarrow_chain(f: &Frobenius, w: &ExtAffElem, k: &[usize], cap: usize) -> Result<Vec<ExtAffElem>> {
    let mut chain = vec![*w];
    let mut cur = *w;
    loop {
        let next = k.iter().find_map(|&s| conj_move(f, &cur, s, MoveKind::HalfArrow));
        match next {
            Some(y) => {
                chain.push(y);
                cur = y;
                if chain.len() > cap {
                    return Err(Error::BudgetExceeded(format!("⇀ chain longer than {cap}")));
                }
            }
            None => return Ok(chain),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatInvariant {
    pub eta: Vec<i64>,
    pub a: i64,
    pub m: i64,
    pub n: usize,
    pub vec: QVec,
}

/// Minimal `M ≥ 2` with `M|⟨α, η⟩| > 2A` for all `α` with `⟨α, η⟩ ≠ 0`.
pub fn flat_modulus(d: &RootDatum, eta: &Coords) -> (i64, i64) {
    let vals: Vec<i64> = (0..d.num_roots()).map(|a| d.pair(a, eta).abs() as i64).collect();
    let a = vals.iter().copied().max().unwrap_or(0);
    let amin = vals.iter().copied().filter(|&v| v != 0).min();
    let m = match amin {
        Some(amin) => (2 * a / amin + 1).max(2),
        None => 2,
    };
    (a, m)
}

pub fn flat_invariant(f: &Frobenius, x: &ExtAffElem, eta: &Coords) -> Result<FlatInvariant> {
    let d = f.datum();
    if d.dominant_conjugate(&x.mu).0 != d.dominant_conjugate(eta).0 {
        return Err(Error::NotInOrbit);
    }
    let (a, m) = flat_modulus(d, eta);
    let n = p_order(f, x);
    let mut acc = QVec::zero(d.rank());
    let mut cur = x.mu;
    let mut scale = Q::from_integer(1);
    for _ in 0..n {
        acc = &acc + &d.to_q(&cur).scale(&scale);
        cur = p_act(f, x, &cur, 1);
        scale /= Q::from_integer(m as i128);
    }
    Ok(FlatInvariant { eta: d.coords_vec(eta), a, m, n, vec: acc })
}

/// `z₀` minimal with `z₀(ν♭)` dominant, and `z₀ w̃ σ(z₀)⁻¹`.
pub fn min_z0(f: &Frobenius, x: &ExtAffElem, eta: &Coords) -> Result<(WeylElem, ExtAffElem)> {
    let d = f.datum();
    let fl = flat_invariant(f, x, eta)?;
    let (_, z) = d.dominant_conjugate_q(&fl.vec);
    Ok((z, f.conj(&d.finite(z), x)))
}

/// `α^i = (w̃σ)^i(α)` for the finite root `α` (as the affine root `(α, 0)`).
pub fn alpha_iter(f: &Frobenius, x: &ExtAffElem, alpha: usize, i: i64) -> AffRoot {
    let mut r = AffRoot { alpha, k: 0 };
    if i >= 0 {
        for _ in 0..i {
            r = f.twisted_act_affroot(x, &r);
        }
    } else {
        for _ in 0..(-i) {
            r = f.twisted_act_affroot_inv(x, &r);
        }
    }
    r
}

/// `m_{α,w̃} = min{i ≥ 1 : α^{−i} ∉ Φ}`.
pub fn m_alpha(f: &Frobenius, x: &ExtAffElem, alpha: usize) -> usize {
    let n = p_order(f, x);
    let mut r = AffRoot { alpha, k: 0 };
    for i in 1..=(n + 1) {
        r = f.twisted_act_affroot_inv(x, &r);
        if r.k != 0 {
            return i;
        }
    }
    panic!("⟨α, ν⟩ ≠ 0 forces the level to move within one period");
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Permissible {
    /// `(α, m_{α,w̃})` for `α ∈ Φ⁺ ∖ Φ_ν`.
    pub m_map: Vec<(usize, usize)>,
    pub set: Vec<usize>,
}

pub fn permissible(f: &Frobenius, x: &ExtAffElem, adm: &AdmissibleSet) -> Result<Permissible> {
    let d = f.datum();
    if !adm.contains(x) {
        return Err(Error::NotAdmissible(d.format_elem(x)));
    }
    let v = nu(f, x);
    let mut m_map = Vec::new();
    let mut set = Vec::new();
    for a in 0..d.num_pos_roots() {
        if d.pair_q(a, &v).is_zero() {
            continue;
        }
        let m = m_alpha(f, x, a);
        m_map.push((a, m));
        let refl = d.affine_reflection(AffRoot { alpha: f.act_root(a), k: 0 });
        let y = d.mul(x, &refl);
        if adm.contains(&y) && d.is_positive_affroot(&alpha_iter(f, x, a, -(m as i64))) {
            set.push(a);
        }
    }
    Ok(Permissible { m_map, set })
}

/// `(w̃′, z′) ∈ 𝒮⁺ × W₀^{J}` with `w̃ = z′ w̃′ σ(z′)⁻¹`.
pub fn standard_part(f: &Frobenius, x: &ExtAffElem) -> (ExtAffElem, WeylElem) {
    let d = f.datum();
    let v = nu(f, x);
    let (_, z) = d.dominant_conjugate_q(&v);
    let zp = d.w_inv(z);
    let wp = f.conj(&d.finite(z), x);
    (wp, zp)
}

/// Whether `⟨α, v⟩ > 0`, `= 0` or `< 0`.
pub fn sign_of(d: &RootDatum, a: usize, v: &QVec) -> i32 {
    let p = d.pair_q(a, v);
    if p.is_zero() {
        0
    } else if p.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn fr(l: &str, s: &str) -> Frobenius {
        Frobenius::named(Arc::new(RootDatum::from_label(l).unwrap()), s).unwrap()
    }

    #[test]
    fn newton_examples() {
        let f = fr("A1", "id");
        let d = f.datum();
        let t = d.translation(&d.coords(&[3]));
        assert_eq!(newton_point(&f, &t).newton, d.to_q(&d.coords(&[3])));
        let tau = d.parse_elem("t[1].s1").unwrap();
        let nk = newton_point(&f, &tau);
        assert!(nk.newton.is_zero());
        assert_eq!(nk.kottwitz, vec![1]);

        let f = fr("A2", "flip");
        let d = f.datum();
        let t = d.translation(d.coroot(0));
        let nk = newton_point(&f, &t);
        let expect = (&d.to_q(d.coroot(0)) + &d.to_q(d.coroot(1))).scale(&Q::new(1, 2));
        assert_eq!(nk.newton, d.dominant_conjugate_q(&expect).0);
    }

    #[test]
    fn semi_standard_examples() {
        let f = fr("A2", "id");
        let d = f.datum();
        for x in d.ball(3) {
            if x.w == WeylElem::ID {
                assert!(is_semi_standard(&f, &x));
            }
            assert_eq!(is_semi_standard(&f, &x), semi_standard_window(&f, &x, 8), "{}", d.format_elem(&x));
        }
        for o in d.omega() {
            assert!(is_semi_standard(&f, &o));
        }
    }

    #[test]
    fn semi_standard_matches_window_twisted() {
        for (l, s) in [("A2", "flip"), ("A1xA1", "swap"), ("B2", "id")] {
            let f = fr(l, s);
            let d = f.datum();
            for x in d.ball(4) {
                assert_eq!(is_semi_standard(&f, &x), semi_standard_window(&f, &x, 10), "{l} {}", d.format_elem(&x));
            }
        }
    }

    #[test]
    fn flat_examples() {
        let f = fr("A1", "id");
        let d = f.datum();
        let eta = *d.coroot(0);
        let t = d.translation(&eta);
        let fl = flat_invariant(&f, &t, &eta).unwrap();
        assert_eq!(fl.n, 1);
        assert_eq!(fl.vec, d.to_q(&eta));
        let x = d.mul(&t, &d.s_elem(0));
        let fl = flat_invariant(&f, &x, &eta).unwrap();
        assert_eq!(fl.m, 3);
        assert_eq!(fl.vec, d.to_q(&eta).scale(&Q::new(2, 3)));
        assert!(d.pair_q(0, &fl.vec) > Q::zero());
        assert_eq!(flat_invariant(&f, &x, &d.coords(&[1])), Err(Error::NotInOrbit));
        let (z0, _) = min_z0(&f, &t, &eta).unwrap();
        assert_eq!(z0, WeylElem::ID);
    }

    #[test]
    fn partial_conjugation_reaches_left_minimal() {
        let f = fr("A2", "flip");
        let d = f.datum();
        let k: Vec<usize> = (0..d.rank()).collect();
        for w in d.ball(5) {
            let pc = partial_conjugation(&f, &w, &k, 100_000).unwrap();
            assert!(in_left_min(d, &pc.x, &k));
            let mut cur = w;
            for (s, y) in &pc.trace {
                assert_eq!(conj_move(&f, &cur, *s, MoveKind::Arrow), Some(*y));
                cur = *y;
            }
            assert_eq!(cur, d.mul(&pc.u, &pc.x));
        }
        let w = d.s_elem(2);
        let pc = partial_conjugation(&f, &w, &[], 10).unwrap();
        assert_eq!((pc.x, pc.u), (w, d.identity()));
    }

    #[test]
    fn halfarrow_move_example() {
        let f = fr("A1", "id");
        let d = f.datum();
        let t = d.translation(d.coroot(0));
        let y = conj_move(&f, &t, 0, MoveKind::HalfArrow);
        assert_eq!(y.is_some(), d.left_descent(0, &t));
    }

    #[test]
    fn permissible_translation_has_m_one() {
        let f = fr("A2", "id");
        let d = f.datum();
        let lam = d.coords(&[1, 1]);
        let adm = crate::bruhat::adm_set(d, &lam).unwrap();
        let t = d.translation(&lam);
        let p = permissible(&f, &t, &adm).unwrap();
        assert!(p.m_map.iter().all(|&(_, m)| m == 1));
    }
}
