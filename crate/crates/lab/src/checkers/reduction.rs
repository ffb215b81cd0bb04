//! Partial conjugation, semi-standard elements, `ν♭` and permissible roots.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use adlv_core::bruhat::{distinct_test, Side};
use adlv_core::sigma::{self, in_left_min, parabolic_group, MoveKind};
use adlv_core::{linalg, AdmissibleSet, AffRoot, ExtAffElem, Frobenius, QVec, Q};
use serde_json::json;

use super::{bits, fe, finite_affine_sets, left_descents, masks, root_json};
use crate::context::CellCtx;
use crate::error::LabResult;
use crate::sink::Sink;

pub fn k_min_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let ns = d.num_simple_affine();
    for w in ctx.ball()?.iter() {
        let ld = left_descents(d, w);
        for s in 0..ns {
            if d.right_descent(w, s) {
                continue;
            }
            let ws = d.rmul_s(w, s);
            let ld_ws = left_descents(d, &ws);
            let eq = (0..ns).filter(|&t| d.lmul_s(t, w) == ws).fold(0u32, |m, t| m | (1 << t));
            for k in masks(ns).filter(|k| k & ld == 0) {
                sink.rec(true, || ld_ws & k == 0 || eq & k != 0, || json!({"w": fe(d, w), "s": s, "K": bits(k, ns)}));
            }
        }
    }
    Ok(())
}

pub fn k_min_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for k in finite_affine_sets(f, false) {
        let group = parabolic_group(d, &k, 1 << 14)?;
        for w in ctx.ball()?.iter() {
            let hyp = in_left_min(d, w, &k);
            sink.rec(
                hyp,
                || {
                    let class = sigma::sigma_class(f, w, &group);
                    let mins: Vec<&ExtAffElem> = class.iter().filter(|y| in_left_min(d, y, &k)).collect();
                    mins == [w]
                },
                || json!({"w": fe(d, w), "K": k}),
            );
        }
    }
    Ok(())
}

/// Elements `x ∈ ᴷW̃` such that `u·x` lies in the class for some `u ∈ W_{I(K,x)}`.
fn terminal_candidates(f: &Frobenius, class: &BTreeSet<ExtAffElem>, k: &[usize]) -> BTreeSet<ExtAffElem> {
    let d = f.datum();
    class
        .iter()
        .filter_map(|y| {
            let (u, x) = sigma::left_coset_split(d, y, k);
            let iset = sigma::i_set(f, &x, k);
            sigma::parabolic_support(d, &u, k).filter(|sup| sup.iter().all(|s| iset.contains(s))).map(|_| x)
        })
        .collect()
}

/// Universe: the ball of radius `min(6, L)`; uniqueness of `x` is tested by exhausting the class.
pub fn partial_conj(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let ball = ctx.small_ball(6)?;
    for k in finite_affine_sets(f, false) {
        let group = parabolic_group(d, &k, 1 << 14)?;
        for w in ball.iter() {
            let pc = sigma::partial_conjugation(f, w, &k, 1 << 16)?;
            sink.rec(
                true,
                || {
                    let mut prev = *w;
                    for &(s, y) in &pc.trace {
                        if !k.contains(&s) || sigma::conj_move(f, &prev, s, MoveKind::Arrow) != Some(y) {
                            return false;
                        }
                        prev = y;
                    }
                    let iset = sigma::i_set(f, &pc.x, &k);
                    let u_ok = sigma::parabolic_support(d, &pc.u, &k).is_some_and(|sup| sup.iter().all(|s| iset.contains(s)));
                    let class = sigma::sigma_class(f, w, &group);
                    let cands = terminal_candidates(f, &class, &k);
                    u_ok && in_left_min(d, &pc.x, &k)
                        && prev == d.mul(&pc.u, &pc.x)
                        && cands.len() == 1
                        && cands.contains(&pc.x)
                },
                || json!({"w": fe(d, w), "K": k}),
            );
        }
    }
    Ok(())
}

/// Whether `z` maps every positive affine root over `Φ_v` to a positive affine root.
fn keeps_positive(ctx: &CellCtx, z: &ExtAffElem, phi: &[usize]) -> bool {
    let d = ctx.d();
    phi.iter().all(|&a| {
        let floor = AffRoot { alpha: a, k: i32::from(d.is_positive(a)) };
        d.is_positive_affroot(&d.act_affroot(z, &floor))
    })
}

fn semi_standard_adm(ctx: &CellCtx) -> Vec<ExtAffElem> {
    ctx.adm().iter().filter(|w| sigma::is_semi_standard(&ctx.f, w)).copied().collect()
}

/// `z` ranges over the ball of radius `min(3, L)`.
pub fn semi_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let zs = ctx.small_ball(3)?;
    for w in semi_standard_adm(ctx) {
        let phi = d.phi_v(&sigma::nu(f, &w));
        for z in zs.iter() {
            let hyp = keeps_positive(ctx, z, &phi);
            sink.rec(hyp, || sigma::is_semi_standard(f, &f.conj(z, &w)), || json!({"w": fe(d, &w), "z": fe(d, z)}));
        }
    }
    Ok(())
}

pub fn semi_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in ctx.adm().iter() {
        let ss = sigma::semi_standard(f, w);
        let (nubar, _) = d.dominant_conjugate_q(&ss.nu);
        let j = d.j_v(&nubar)?;
        sink.rec(
            ss.semi_standard,
            || {
                let found: Vec<ExtAffElem> = d
                    .min_coset_reps(j)
                    .into_iter()
                    .map(|z| f.conj(&d.finite(d.w_inv(z)), w))
                    .filter(|y| sigma::semi_standard(f, y).standard)
                    .collect();
                found.len() == 1 && found[0] == sigma::standard_part(f, w).0
            },
            || json!({"w": fe(d, w)}),
        );
    }
    Ok(())
}

pub fn semi_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in ctx.adm().iter() {
        let ss = sigma::is_semi_standard(f, w);
        for s in 0..d.num_simple_affine() {
            let hyp = ss && (d.left_descent(s, w) || d.right_descent(w, f.act_s(s)));
            let y = d.rmul_s(&d.lmul_s(s, w), f.act_s(s));
            sink.rec(hyp, || sigma::is_semi_standard(f, &y), || json!({"w": fe(d, w), "s": s}));
        }
    }
    Ok(())
}

/// The σ-centralizer of `w̃` inside `W̃` lies in `W̃_{M_ν}`; `z` ranges over the ball of radius `min(4, L)`.
pub fn semi_4(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let zs = ctx.small_ball(4)?;
    for w in semi_standard_adm(ctx) {
        let v = sigma::nu(f, &w);
        for z in zs.iter() {
            let hyp = f.conj(z, &w) == w;
            sink.rec(hyp, || d.w_act_q(z.w, &v) == v, || json!({"w": fe(d, &w), "z": fe(d, z)}));
        }
    }
    Ok(())
}

/// `Adm(λ)` together with the full cosets `t^μ W₀` for `μ ∈ W₀λ`.
fn flat_universe(ctx: &CellCtx) -> Vec<ExtAffElem> {
    let d = ctx.d();
    let mut set: BTreeSet<ExtAffElem> = ctx.adm().iter().copied().collect();
    for mu in d.orbit(ctx.lambda()) {
        for v in d.weyl_elements() {
            set.insert(d.elem(mu, v));
        }
    }
    set.into_iter().collect()
}

struct Flat {
    vec: QVec,
    /// `p(w̃σ)^i(μ)` for `0 ≤ i < N`.
    orbit: Vec<adlv_core::Coords>,
}

fn flat_of(f: &Frobenius, w: &ExtAffElem) -> LabResult<Flat> {
    let d = f.datum();
    let eta = d.dominant_conjugate(&w.mu).0;
    let fl = sigma::flat_invariant(f, w, &eta)?;
    let orbit = (0..fl.n).map(|i| sigma::p_act(f, w, &w.mu, i)).collect();
    Ok(Flat { vec: fl.vec, orbit })
}

fn sign(q: Q) -> i32 {
    if q > Q::from_integer(0) {
        1
    } else if q < Q::from_integer(0) {
        -1
    } else {
        0
    }
}

pub fn flat(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in flat_universe(ctx) {
        let fl = flat_of(f, &w)?;
        for a in 0..d.num_roots() {
            let first = fl.orbit.iter().map(|m| d.pair(a, m)).find(|&p| p != 0);
            sink.rec(
                first.is_some(),
                || sign(d.pair_q(a, &fl.vec)) * first.unwrap_or(0).signum() > 0,
                || json!({"w": fe(d, &w), "alpha": root_json(d, a)}),
            );
        }
    }
    Ok(())
}

pub fn dominant_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in flat_universe(ctx) {
        let fl = flat_of(f, &w)?;
        for a in 0..d.num_roots() {
            let all_zero = fl.orbit.iter().all(|m| d.pair(a, m) == 0);
            sink.rec(
                true,
                || (d.pair_q(a, &fl.vec) == Q::from_integer(0)) == all_zero,
                || json!({"w": fe(d, &w), "alpha": root_json(d, a)}),
            );
        }
    }
    Ok(())
}

pub fn dominant_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in flat_universe(ctx) {
        let ss = sigma::semi_standard(f, &w);
        let fl = flat_of(f, &w)?;
        for a in 0..d.num_pos_roots() {
            if d.pair_q(a, &ss.nu) != Q::from_integer(0) {
                continue;
            }
            sink.rec(
                ss.semi_standard,
                || d.pair_q(a, &fl.vec) >= Q::from_integer(0),
                || json!({"w": fe(d, &w), "alpha": root_json(d, a)}),
            );
        }
    }
    Ok(())
}

pub fn dominant_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in ctx.adm().iter() {
        let fl = flat_of(f, w)?;
        for z in d.weyl_elements() {
            let y = f.conj(&d.finite(z), w);
            let fy = flat_of(f, &y)?;
            sink.rec(true, || fy.vec == d.w_act_q(z, &fl.vec), || json!({"w": fe(d, w), "z": fe(d, &d.finite(z))}));
        }
    }
    Ok(())
}

pub fn dominant_4(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in flat_universe(ctx) {
        let hyp = sigma::is_semi_standard(f, &w);
        let fl = flat_of(f, &w)?;
        let phi: HashSet<usize> = d.phi_v(&fl.vec).into_iter().collect();
        sink.rec(
            hyp,
            || {
                phi.iter().all(|&a| {
                    let k0 = i32::from(d.is_positive(a));
                    let up = f.twisted_act_affroot(&w, &AffRoot { alpha: a, k: k0 });
                    let down = f.twisted_act_affroot(&w, &AffRoot { alpha: a, k: k0 - 1 });
                    phi.contains(&up.alpha) && d.is_positive_affroot(&up) && !d.is_positive_affroot(&down)
                })
            },
            || json!({"w": fe(d, &w)}),
        );
    }
    Ok(())
}

pub fn dominant_5(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    for w in ctx.adm().iter() {
        let p = sigma::permissible(f, w, ctx.adm())?;
        let fl = flat_of(f, w)?;
        for &(a, m) in &p.m_map {
            let hyp = p.set.contains(&a);
            sink.rec(
                hyp,
                || {
                    let roots: Vec<AffRoot> = (1 - m as i64..=0).map(|i| sigma::alpha_iter(f, w, a, i)).collect();
                    let finite = roots.iter().all(|r| r.k == 0);
                    let neg = roots.iter().all(|r| d.pair_q(r.alpha, &fl.vec) < Q::from_integer(0));
                    let rows: Vec<Vec<Q>> = roots
                        .iter()
                        .map(|r| d.root(r.alpha)[..d.rank()].iter().map(|&c| Q::from_integer(c as i128)).collect())
                        .collect();
                    finite && neg && linalg::rank(&rows) == roots.len()
                },
                || json!({"w": fe(d, w), "alpha": root_json(d, a)}),
            );
        }
    }
    Ok(())
}

pub fn min(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let s0: Vec<usize> = (0..d.rank()).collect();
    for w in flat_universe(ctx) {
        let hyp = sigma::is_semi_standard(f, &w);
        let eta = d.dominant_conjugate(&w.mu).0;
        let (z0, y) = sigma::min_z0(f, &w, &eta)?;
        let fl = flat_of(f, &w)?;
        sink.rec(
            hyp,
            || {
                let good: Vec<_> = d.weyl_elements().filter(|&z| d.is_dominant_q(&d.w_act_q(z, &fl.vec))).collect();
                let lmin = good.iter().map(|&z| d.w_len(z)).min().unwrap();
                let minimal: Vec<_> = good.into_iter().filter(|&z| d.w_len(z) == lmin).collect();
                minimal == [z0] && in_left_min(d, &y, &s0)
            },
            || json!({"w": fe(d, &w)}),
        );
    }
    Ok(())
}

pub fn unique(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let n = d.rank();
    let adm = ctx.adm();
    for kmask in masks(n) {
        let k = bits(kmask, n);
        let group: Vec<ExtAffElem> = d.parabolic(kmask).into_iter().map(|u| d.finite(u)).collect();
        for w in &inst.scan {
            let class = sigma::sigma_class(f, w, &group);
            let found: Vec<ExtAffElem> =
                class.into_iter().filter(|y| in_left_min(d, y, &k) && sigma::is_semi_standard(f, y)).collect();
            sink.rec(true, || found.len() == 1, || json!({"clause": "unique", "w": fe(d, w), "K": k}));
            if kmask + 1 == 1 << n && found.len() == 1 {
                let wp = found[0];
                sink.rec(
                    inst.hn.irreducible,
                    || {
                        adm.contains(&wp)
                            && f.simple_orbits().iter().all(|r| !distinct_test(d, &wp, r, Side::Left, adm).unwrap_or(true))
                    },
                    || json!({"clause": "not-distinct", "w": fe(d, w)}),
                );
            }
        }
    }
    Ok(())
}

fn has_halfarrow_cycle(f: &Frobenius, w: &ExtAffElem, k: &[usize]) -> bool {
    // iterative DFS with grey/black colouring
    let mut state: HashMap<ExtAffElem, u8> = HashMap::new();
    let mut stack: Vec<(ExtAffElem, usize)> = vec![(*w, 0)];
    state.insert(*w, 1);
    while let Some((x, i)) = stack.pop() {
        if i == k.len() {
            state.insert(x, 2);
            continue;
        }
        stack.push((x, i + 1));
        if let Some(y) = sigma::conj_move(f, &x, k[i], MoveKind::HalfArrow) {
            match state.get(&y) {
                Some(1) => return true,
                Some(_) => {}
                None => {
                    state.insert(y, 1);
                    stack.push((y, 0));
                }
            }
        }
    }
    false
}

pub fn finite_seq(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let n = d.rank();
    for w in ctx.adm().iter() {
        let hyp = sigma::is_semi_standard(f, w);
        for kmask in masks(n).skip(1) {
            let k = bits(kmask, n);
            sink.rec(hyp, || !has_halfarrow_cycle(f, w, &k), || json!({"w": fe(d, w), "K": k}));
        }
    }
    Ok(())
}

pub fn left(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let s0: Vec<usize> = (0..d.rank()).collect();
    let w0: Vec<ExtAffElem> = d.weyl_elements().map(|u| d.finite(u)).collect();
    let orbits: Vec<(Vec<usize>, Vec<ExtAffElem>)> = f
        .simple_orbits()
        .into_iter()
        .map(|r| {
            let g = d.parabolic(super::mask_of(&r)).into_iter().map(|u| d.finite(u)).collect();
            (r, g)
        })
        .collect();
    for w in semi_standard_adm(ctx) {
        sink.rec(
            true,
            || {
                let mins: Vec<ExtAffElem> =
                    sigma::sigma_class(f, &w, &w0).into_iter().filter(|y| in_left_min(d, y, &s0)).collect();
                if mins.len() != 1 {
                    return false;
                }
                let mut seen = HashSet::from([w]);
                let mut queue = VecDeque::from([w]);
                while let Some(v) = queue.pop_front() {
                    if v == mins[0] {
                        return true;
                    }
                    for (r, g) in &orbits {
                        for y in sigma::sigma_class(f, &v, g) {
                            if in_left_min(d, &y, r) && sigma::is_semi_standard(f, &y) && seen.insert(y) {
                                queue.push_back(y);
                            }
                        }
                    }
                }
                false
            },
            || json!({"w": fe(d, &w)}),
        );
    }
    Ok(())
}

struct PermCache<'a> {
    f: &'a Frobenius,
    adm: &'a AdmissibleSet,
    memo: HashMap<ExtAffElem, bool>,
}

impl PermCache<'_> {
    fn nonempty(&mut self, w: &ExtAffElem) -> bool {
        if let Some(&b) = self.memo.get(w) {
            return b;
        }
        let b = sigma::permissible(self.f, w, self.adm).map(|p| !p.set.is_empty()).unwrap_or(false);
        self.memo.insert(*w, b);
        b
    }
}

pub fn permissible(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let adm = ctx.adm();
    let mut pc = PermCache { f, adm, memo: HashMap::new() };
    for r in f.simple_orbits() {
        let wr = d.finite(d.longest_of(super::mask_of(&r)));
        for w in adm.iter() {
            let hyp = distinct_test(d, w, &r, Side::Left, adm)?;
            let v = d.mul(&d.mul(&wr, w), &wr);
            let v_in = adm.contains(&v);
            sink.rec(
                hyp,
                || v_in && distinct_test(d, &v, &r, Side::Right, adm).unwrap_or(false),
                || json!({"clause": "distinct", "R": r, "w": fe(d, w)}),
            );
            let p_w = pc.nonempty(w);
            let p_v = v_in && pc.nonempty(&v);
            sink.rec(hyp && p_w, || p_v, || json!({"clause": "permissible", "R": r, "w": fe(d, w)}));
        }
    }
    Ok(())
}

pub fn existence(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let adm = ctx.adm();
    let mut pc = PermCache { f, adm, memo: HashMap::new() };
    for w in semi_standard_adm(ctx) {
        for r in f.simple_orbits() {
            let hyp = !in_left_min(d, &w, &r) && !distinct_test(d, &w, &r, Side::Right, adm)?;
            let p = pc.nonempty(&w);
            sink.rec(hyp, || p, || json!({"R": r, "w": fe(d, &w)}));
        }
    }
    Ok(())
}

pub fn non_empty(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let s0: Vec<usize> = (0..d.rank()).collect();
    let mut pc = PermCache { f, adm: ctx.adm(), memo: HashMap::new() };
    for w in &inst.scan {
        let ok = in_left_min(d, w, &s0) || pc.nonempty(w);
        sink.rec(inst.hn.irreducible, || ok, || json!({"w": fe(d, w)}));
    }
    Ok(())
}
