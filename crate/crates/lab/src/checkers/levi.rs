//! Length-zero elements of Levi subgroups, the arrow graph on `𝒮⁺_{λ,b}` and
//! orbit types.

use std::collections::BTreeSet;

use adlv_core::components::{self, c_set as core_c_set, j0_j1, j_components, omega_rep, orbit_info, Arrows, OrbitInfo, OrbitType, SPlus};
use adlv_core::root_datum::SimpleType;
use adlv_core::{AffRoot, Coords, ExtAffElem, Frobenius, RootDatum, WeylElem};
use serde_json::json;

use super::{bits, fe, masks, root_json, s_alpha};
use crate::context::CellCtx;
use crate::error::LabResult;
use crate::sink::Sink;

/// Distinct length-zero elements of `W̃_{M_K}` whose translation part is `⪯ λ`.
fn omega_elems(d: &RootDatum, k: u32, lambda: &Coords) -> Vec<ExtAffElem> {
    let mut seen = BTreeSet::new();
    for mu in d.saturation(lambda, true) {
        let x = omega_rep(d, k, &mu);
        if d.preceq(&x.mu, lambda) {
            seen.insert(x.rep);
        }
    }
    seen.into_iter().collect()
}

fn stable_masks(f: &Frobenius) -> Vec<u32> {
    masks(f.datum().rank()).filter(|&k| f.is_stable_mask(k)).collect()
}

/// `γ ∈ Φ⁺ ∖ Φ_K` with `γ∨` `K`-dominant and `K`-minuscule.
fn dom_minuscule(d: &RootDatum, k: u32) -> Vec<usize> {
    (0..d.num_pos_roots())
        .filter(|&g| !d.in_levi(g, k))
        .filter(|&g| {
            let c = d.classify_coweight(d.coroot(g), k);
            c.k_dominant && c.k_minuscule
        })
        .collect()
}

/// The setting shared by the orthogonality and line lemmas.
struct PreK<'a> {
    d: &'a RootDatum,
    w: &'a ExtAffElem,
    g: usize,
    /// `σ^r(γ)`.
    sg: usize,
    /// `wσ^r(γ)`.
    wsg: usize,
}

impl PreK<'_> {
    fn mu(&self) -> &Coords {
        &self.w.mu
    }

    fn minus_g(&self) -> Coords {
        self.d.sub(self.mu(), self.d.coroot(self.g))
    }

    fn plus_wsg(&self) -> Coords {
        self.d.add(self.mu(), self.d.coroot(self.wsg))
    }

    fn both(&self) -> Coords {
        self.d.add(&self.minus_g(), self.d.coroot(self.wsg))
    }

    fn holds(&self, lambda: &Coords) -> bool {
        [*self.mu(), self.minus_g(), self.plus_wsg(), self.both()].iter().all(|m| self.d.preceq(m, lambda))
    }

    fn s_tilde(&self, a: usize) -> ExtAffElem {
        self.d.affine_reflection(AffRoot { alpha: a, k: 1 })
    }
}

fn for_each_pre_k(ctx: &CellCtx, mut body: impl FnMut(u32, &PreK, usize)) {
    let f = &ctx.f;
    let d = ctx.d();
    for k in stable_masks(f) {
        let gammas = dom_minuscule(d, k);
        for w in omega_elems(d, k, ctx.lambda()) {
            for &g in &gammas {
                for r in 0..f.order() {
                    let sg = f.act_root_pow(g, r);
                    let p = PreK { d, w: &w, g, sg, wsg: d.w_root(w.w, sg) };
                    body(k, &p, r);
                }
            }
        }
    }
}

fn pre_k_json(d: &RootDatum, k: u32, p: &PreK, r: usize) -> serde_json::Value {
    json!({"K": bits(k, d.rank()), "w": fe(d, p.w), "gamma": root_json(d, p.g), "r": r})
}

pub fn orth_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let lam = ctx.lambda();
    for_each_pre_k(ctx, |k, p, r| {
        sink.rec(
            p.holds(lam),
            || [p.minus_g(), p.plus_wsg(), p.both()].iter().all(|m| d.classify_coweight(m, k).k_minuscule),
            || pre_k_json(d, k, p, r),
        );
    });
    Ok(())
}

pub fn orth_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for_each_pre_k(ctx, |k, p, r| {
        sink.rec(
            p.holds(ctx.lambda()),
            || {
                let sg = p.s_tilde(p.g);
                let ssg = p.s_tilde(p.sg);
                [*p.w, d.mul(&sg, p.w), d.mul(p.w, &ssg), d.mul(&d.mul(&sg, p.w), &sg)].iter().all(|y| adm.contains(y))
            },
            || pre_k_json(d, k, p, r),
        );
    });
    Ok(())
}

pub fn orth_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for_each_pre_k(ctx, |k, p, r| {
        let hyp = p.holds(ctx.lambda()) && p.g != p.sg && -d.pair(p.wsg, p.mu()) <= 1 && d.pair(p.g, p.mu()) <= 1;
        sink.rec(
            hyp,
            || adm.contains(&d.mul(&d.mul(&p.s_tilde(p.g), p.w), &p.s_tilde(p.sg))),
            || pre_k_json(d, k, p, r),
        );
    });
    Ok(())
}

/// Number of roots in `Φ ∩ (Zα + Zβ)`.
fn rank2_count(d: &RootDatum, a: usize, b: usize) -> usize {
    let mut seen = BTreeSet::new();
    for i in -4..=4 {
        for j in -4..=4 {
            let mut v = [0; adlv_core::root_datum::MAX_RANK];
            for (t, x) in v.iter_mut().enumerate().take(d.rank()) {
                *x = i * d.root(a)[t] + j * d.root(b)[t];
            }
            if let Some(r) = d.root_index(&v) {
                seen.insert(r);
            }
        }
    }
    seen.len()
}

pub fn line(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let lam = ctx.lambda();
    for_each_pre_k(ctx, |k, p, r| {
        let hyp = p.holds(lam) && d.classify_coweight(d.coroot(p.g), k).strongly_k_minuscule;
        sink.rec(hyp, || matches!(rank2_count(d, p.g, p.wsg), 2 | 4 | 6), || json!({"clause": "type", "at": pre_k_json(d, k, p, r)}));
        let star = d.pair(p.g, p.mu()) == 1 && d.pair(p.wsg, p.mu()) == -1 && d.pair_roots(p.g, p.wsg) == -1;
        sink.rec(
            hyp && star,
            || {
                let s = d.add(d.coroot(p.g), d.coroot(p.wsg));
                let w2 = omega_rep(d, k, &d.add(&p.minus_g(), d.coroot(p.sg)));
                w2.rep != *p.w && d.preceq(&d.add(p.mu(), &s), lam) && d.preceq(&d.sub(p.mu(), &s), lam) && d.preceq(&w2.mu, lam)
            },
            || json!({"clause": "star", "at": pre_k_json(d, k, p, r)}),
        );
    });
    Ok(())
}

/// Roots in the `W₀`-orbit of `γ`.
fn weyl_orbit(d: &RootDatum, g: usize) -> Vec<usize> {
    (0..d.num_roots()).filter(|&a| d.root_component(a) == d.root_component(g) && d.root_len2(a) == d.root_len2(g)).collect()
}

/// `w̃(α) = α` for the affine root `(α, 0)`.
fn fixes(d: &RootDatum, w: &ExtAffElem, a: usize) -> bool {
    d.act_affroot(w, &AffRoot { alpha: a, k: 0 }) == AffRoot { alpha: a, k: 0 }
}

fn non_levi_roots(d: &RootDatum, j: u32) -> Vec<usize> {
    (0..d.num_roots()).filter(|&a| !d.in_levi(a, j)).collect()
}

/// Every arrow is tested up to `r = 2·ord(σ)`, beyond the bounds used for connectivity.
pub fn saturate(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    let ar = Arrows::new(f, sp);
    for x in 0..sp.len() {
        let wx = &sp.elems[x].rep;
        for g in non_levi_roots(d, sp.j) {
            let per = components::component_period(f, g);
            for r in 1..=2 * f.order() {
                let to = ar.tail_arrow(x, g, r);
                let hyp = to.is_some_and(|t| t != x);
                for dl in weyl_orbit(d, g) {
                    for i in (1..r).filter(|&i| i % per != 0 && (r - i) % per != 0) {
                        sink.rec(
                            hyp,
                            || fixes(d, wx, f.act_root_pow(dl, i)),
                            || json!({"x": sp.elems[x].cls, "gamma": root_json(d, g), "r": r, "delta": root_json(d, dl), "i": i}),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn conneted(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let inst = ctx.inst();
    sink.rec(inst.hn.irreducible, || inst.graph.connected, || json!({"size": inst.sp.len()}));
    Ok(())
}

/// `α ∈ Φ⁺ ∖ Φ_J` with `⟨α, β∨⟩ ≤ 0` for the simple roots `β` of `J`.
fn j_antidominant(d: &RootDatum, a: usize, j: u32) -> bool {
    d.is_positive(a) && !d.in_levi(a, j) && bits(j, d.rank()).into_iter().all(|s| d.pair_roots(a, d.simple_root(s)) <= 0)
}

fn orbits_of(f: &Frobenius, roots: impl Iterator<Item = usize>) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in roots {
        if seen.contains(&a) {
            continue;
        }
        let o = components::root_orbit(f, a);
        seen.extend(o.iter().copied());
        out.push(o);
    }
    out
}

pub fn pr(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    let wj = d.longest_of(sp.j);
    for o in orbits_of(f, (0..d.num_roots()).filter(|&a| j_antidominant(d, a, sp.j))) {
        for x in &sp.elems {
            let p = d.pr(&d.to_q(&x.mu), sp.j);
            sink.rec(
                true,
                || {
                    let sum = o.iter().fold(adlv_core::Q::from_integer(0), |s, &a| s + d.pair_q(a, &p));
                    sum > adlv_core::Q::from_integer(0) && o.iter().any(|&b| d.pair(d.w_root(wj, b), &x.mu) >= 1)
                },
                || json!({"x": x.cls, "orbit": root_json(d, o[0])}),
            );
        }
    }
    Ok(())
}

/// Length-zero elements of `W̃_{M_K}` whose translation part lies within one coroot of the saturation of `λ`.
fn anti_universe(d: &RootDatum, k: u32, lambda: &Coords) -> Vec<ExtAffElem> {
    let sat = d.saturation(lambda, true);
    let mut seen = BTreeSet::new();
    for mu in &sat {
        seen.insert(omega_rep(d, k, mu).rep);
        for a in 0..d.num_roots() {
            seen.insert(omega_rep(d, k, &d.add(mu, d.coroot(a))).rep);
        }
    }
    seen.into_iter().collect()
}

fn k_antidominant_roots(d: &RootDatum, k: u32) -> Vec<usize> {
    (0..d.num_pos_roots()).filter(|&a| d.classify_coweight(d.coroot(a), k).k_antidominant).collect()
}

/// `right`: the claim about `w̃s_α`, otherwise about `s_αw̃`. `printed` pairs each
/// product with the other clause's bound and drops `w̃ ∈ Adm(λ)`.
fn anti_sweep(ctx: &CellCtx, sink: &mut Sink, right: bool, printed: bool) -> LabResult<()> {
    let d = ctx.d();
    let lam = ctx.lambda();
    let adm = ctx.adm();
    for k in masks(d.rank()) {
        let roots = k_antidominant_roots(d, k);
        for w in anti_universe(d, k, lam) {
            for &a in &roots {
                let plus = d.preceq(&d.add(&w.mu, d.coroot(a)), lam);
                let minus = d.preceq(&d.sub(&w.mu, d.coroot(d.w_root(w.w, a))), lam);
                let hyp = match (right, printed) {
                    (true, true) => plus,
                    (false, true) => minus,
                    (true, false) => adm.contains(&w) && minus,
                    (false, false) => adm.contains(&w) && plus,
                };
                sink.rec(
                    hyp,
                    || {
                        let y = if right { d.mul(&w, &s_alpha(d, a)) } else { d.mul(&s_alpha(d, a), &w) };
                        adm.contains(&y)
                    },
                    || json!({"K": bits(k, d.rank()), "w": fe(d, &w), "alpha": root_json(d, a)}),
                );
            }
        }
    }
    Ok(())
}

pub fn anti_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    anti_sweep(ctx, sink, true, false)
}

pub fn anti_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    anti_sweep(ctx, sink, false, false)
}

pub fn anti_1_printed(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    anti_sweep(ctx, sink, true, true)
}

pub fn anti_2_printed(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    anti_sweep(ctx, sink, false, true)
}

/// `z` ranges over the minimal length representatives of `W₀/W_K`.
pub fn anti_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for k in masks(d.rank()) {
        let reps = d.min_coset_reps(k);
        for w in anti_universe(d, k, ctx.lambda()) {
            for &z in &reps {
                let ze = d.finite(z);
                sink.rec(
                    adm.contains(&w),
                    || adm.contains(&d.mul(&d.mul(&ze, &w), &d.inv(&ze))),
                    || json!({"K": bits(k, d.rank()), "w": fe(d, &w), "z": z.0}),
                );
            }
        }
    }
    Ok(())
}

/// `J_{x,0}`: components of `J` on which every `σ^i(μ_x)` is central.
fn j_x0(f: &Frobenius, j: u32, mu: &Coords) -> u32 {
    let d = f.datum();
    j_components(d, j)
        .into_iter()
        .filter(|&c| (0..f.order()).all(|i| bits(c, d.rank()).into_iter().all(|s| d.pair(d.simple_root(s), &f.act_y_pow(mu, i)) == 0)))
        .fold(0, |m, c| m | c)
}

pub fn j1_decomp(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    let core = j0_j1(f, sp);
    for (i, x) in sp.elems.iter().enumerate() {
        let j0 = j_x0(f, sp.j, &x.mu);
        let j1 = sp.j & !j0;
        sink.rec(
            true,
            || {
                let orth = bits(j0, d.rank()).into_iter().all(|u| bits(j1, d.rank()).into_iter().all(|v| d.cartan_entry(u, v) == 0));
                d.w_in_parabolic(x.w, j1) && orth && core.per_x[i] == (j0, j1)
            },
            || json!({"x": x.cls}),
        );
    }
    Ok(())
}

pub fn choice(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let lam = ctx.lambda();
    let pos = d.num_pos_roots();
    for mu in d.saturation(lam, true) {
        for a in 0..pos {
            let ma = d.add(&mu, d.coroot(a));
            sink.rec(
                d.leq_cone_int(&ma, lam) && !d.preceq(&ma, lam),
                || {
                    (0..pos).any(|b| {
                        d.pair(b, &ma) <= -2
                            && (d.preceq(&d.add(&mu, d.coroot(b)), lam) || d.leq_cone_int(&d.add(&ma, d.coroot(b)), lam))
                    })
                },
                || json!({"mu": d.coords_vec(&mu), "alpha": root_json(d, a)}),
            );
        }
    }
    Ok(())
}

/// Unions of σ-orbits of connected components of `J₀`.
fn k_blocks(f: &Frobenius, j0: u32) -> Vec<u32> {
    let d = f.datum();
    let comps = j_components(d, j0);
    let mut seen = 0u32;
    let mut out = Vec::new();
    for &c in &comps {
        if seen & c != 0 {
            continue;
        }
        let mut k = 0u32;
        let mut cur = c;
        for _ in 0..f.order() {
            k |= cur;
            cur = f.act_mask(cur);
        }
        seen |= k;
        out.push(k);
    }
    out
}

/// The component of `Φ ∩ Z(J ∪ 𝒪_β)` containing `β`.
fn psi_component(f: &Frobenius, b: usize, j: u32) -> Vec<usize> {
    let d = f.datum();
    let orbit = components::root_orbit(f, b);
    let psi = components::psi_roots(d, &orbit, j);
    components::subsystem_components(d, &psi).into_iter().find(|c| c.contains(&b)).unwrap_or_default()
}

/// Clauses of the weak-dominance lemma, evaluated for one `(x, β)`.
fn weak_clauses(f: &Frobenius, sp: &SPlus, j0: u32, k: u32, x: usize, b: usize) -> LabResult<[bool; 4]> {
    let d = f.datum();
    let (mu, wx, rep) = (&sp.elems[x].mu, sp.elems[x].w, &sp.elems[x].rep);
    let c1 = d.preceq(&d.add(mu, d.coroot(b)), &sp.lambda) && bits(k, d.rank()).into_iter().any(|s| d.pair(d.simple_root(s), d.coroot(b)) != 0);
    let n = orbit_info(f, b, sp.j)?.n;
    let c2 = (1..n * f.order()).filter(|i| i % n != 0).all(|i| fixes(d, rep, f.act_root_pow(b, i)));
    let c3 = d.pair(d.w_root(wx, f.act_root_pow(b, n)), mu) >= 1;
    let comp = psi_component(f, b, sp.j);
    let c4 = bits(j0, d.rank()).into_iter().map(|s| d.simple_root(s)).filter(|a| comp.contains(a)).all(|a| f.act_root_pow(a, n) == a);
    Ok([c1, c2, c3, c4])
}

/// `level` is the number of clauses required jointly of a single `(x, β)`.
/// The `E₆` exception in the last clause is not modelled.
fn weak(ctx: &CellCtx, sink: &mut Sink, level: usize) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    let j0 = j0_j1(f, sp).j0;
    let betas: Vec<usize> = (0..d.num_pos_roots())
        .filter(|&b| !d.in_levi(b, sp.j))
        .filter(|&b| {
            let c = d.classify_coweight(d.coroot(b), sp.j);
            c.k_antidominant && c.k_minuscule
        })
        .collect();
    for k in k_blocks(f, j0) {
        let hyp = inst.hn.irreducible
            && sp.elems.iter().all(|x| d.levi_pos_roots(k).into_iter().all(|a| !d.preceq(&d.add(&x.mu, d.coroot(a)), &sp.lambda)));
        let mut found = false;
        if hyp {
            'outer: for x in 0..sp.len() {
                for &b in &betas {
                    if weak_clauses(f, sp, j0, k, x, b)?[..level].iter().all(|&c| c) {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        sink.rec(hyp, || found, || json!({"K": bits(k, d.rank())}));
    }
    Ok(())
}

pub fn weak_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    weak(ctx, sink, 1)
}

pub fn weak_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    weak(ctx, sink, 2)
}

pub fn weak_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    weak(ctx, sink, 3)
}

pub fn weak_4(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    weak(ctx, sink, 4)
}

pub fn type_i(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    let ar = Arrows::new(f, sp);
    for x in 0..sp.len() {
        for xi in core_c_set(f, sp, x) {
            let info = orbit_info(f, xi, sp.j)?;
            sink.rec(
                inst.hn.irreducible && info.ty == OrbitType::I,
                || info.orbit.iter().any(|&g| (1..=info.n).any(|r| ar.arrow(x, g, r).is_some())),
                || json!({"x": sp.elems[x].cls, "xi": root_json(d, xi)}),
            );
        }
    }
    Ok(())
}

/// Type II orbits of `J`-anti-dominant `J`-minuscule roots in `Φ⁺ ∖ Φ_J`
/// with `μ_{x″} + ϑ_β∨ ⋠ λ` throughout.
fn type_ii_orbits(f: &Frobenius, sp: &SPlus) -> LabResult<Vec<OrbitInfo>> {
    let d = f.datum();
    let cands = (0..d.num_pos_roots()).filter(|&a| {
        let c = d.classify_coweight(d.coroot(a), sp.j);
        !d.in_levi(a, sp.j) && c.k_antidominant && c.k_minuscule
    });
    let mut out = Vec::new();
    for o in orbits_of(f, cands) {
        let info = orbit_info(f, o[0], sp.j)?;
        if info.ty != OrbitType::II {
            continue;
        }
        let blocked =
            sp.elems.iter().all(|x| info.vartheta.iter().all(|&(_, t)| !d.preceq(&d.add(&x.mu, d.coroot(t)), &sp.lambda)));
        if blocked {
            out.push(info);
        }
    }
    Ok(out)
}

fn vartheta_of(info: &OrbitInfo, a: usize) -> usize {
    info.vartheta.iter().find(|p| p.0 == a).expect("ϑ is recorded for each orbit element").1
}

fn root_diff(d: &RootDatum, a: usize, b: usize) -> Option<usize> {
    d.root_index(&d.sub(d.root(a), d.root(b)))
}

/// The first three clauses, for tail arrows with `n < r < 2n`.
fn type_ii_long(ctx: &CellCtx, sink: &mut Sink, clause: usize) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    let ar = Arrows::new(f, sp);
    if !inst.hn.irreducible {
        return Ok(());
    }
    for info in type_ii_orbits(f, sp)? {
        let n = info.n;
        for x in 0..sp.len() {
            let (mu, wx) = (&sp.elems[x].mu, sp.elems[x].w);
            for &g in &info.orbit {
                for r in n + 1..2 * n {
                    if ar.tail_arrow(x, g, r).is_none() {
                        continue;
                    }
                    let tg = vartheta_of(&info, g);
                    let concl = || match clause {
                        1 => (1..r).filter(|&i| i != r - n).all(|i| {
                            let a = f.act_root_pow(g, i);
                            d.pair(a, mu) == 0 && d.w_root(wx, a) == a
                        }),
                        2 => {
                            let a = f.act_root_pow(g, r - n);
                            let want = root_diff(d, tg, f.act_root_pow(g, n)).map(|t| f.act_root_pow(t, r - n));
                            Some(d.w_root(wx, a)) == want && d.pair(d.w_root(wx, a), mu) == 1
                        }
                        _ => root_diff(d, tg, f.act_root_pow(g, n)).is_some_and(|t| d.pair(d.w_root(wx, t), mu) >= 1),
                    };
                    sink.rec(true, concl, || json!({"x": sp.elems[x].cls, "gamma": root_json(d, g), "r": r}));
                }
            }
        }
    }
    Ok(())
}

pub fn type_ii_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    type_ii_long(ctx, sink, 1)
}

pub fn type_ii_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    type_ii_long(ctx, sink, 2)
}

pub fn type_ii_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    type_ii_long(ctx, sink, 3)
}

fn type_ii_stuck(f: &Frobenius, sp: &SPlus, info: &OrbitInfo, x: usize, a: usize, wj: WeylElem) -> bool {
    let d = f.datum();
    let n = info.n;
    let (mu, wx) = (&sp.elems[x].mu, sp.elems[x].w);
    let ta = vartheta_of(info, a);
    let c1 = (1..2 * n).filter(|&i| i != n).all(|i| {
        let b = f.act_root_pow(a, i);
        d.pair(b, mu) == 0 && d.w_root(wx, b) == b
    });
    let sna = f.act_root_pow(a, n);
    let c2 = Some(d.w_root(wx, sna)) == root_diff(d, ta, a) && d.pair(d.w_root(wj, sna), mu) == 1;
    let wt = d.w_root(wx, ta);
    let c3 = d.pair(wt, &d.add(mu, d.coroot(a))) >= 1;
    let c4 = d.pair(wt, mu) >= 1;
    c1 && c2 && c3 && c4
}

/// The case without tail arrows inside a type II orbit.
pub fn type_ii_4(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    let ar = Arrows::new(f, sp);
    if !inst.hn.irreducible {
        return Ok(());
    }
    let wj = d.longest_of(sp.j);
    let infos = type_ii_orbits(f, sp)?;
    for x in 0..sp.len() {
        let cx = core_c_set(f, sp, x);
        for info in infos.iter().filter(|i| i.orbit.iter().any(|a| cx.contains(a))) {
            let n = info.n;
            let stuck = info.orbit.iter().all(|&g| (1..2 * n).all(|r| ar.tail_arrow(x, g, r).is_none()));
            sink.rec(
                stuck,
                || info.orbit.iter().any(|&a| type_ii_stuck(f, sp, info, x, a, wj)),
                || json!({"x": sp.elems[x].cls, "orbit": root_json(d, info.orbit[0])}),
            );
        }
    }
    Ok(())
}

fn strongly_j_minuscule(d: &RootDatum, a: usize, j: u32) -> bool {
    let min = d.levi_pos_roots(j).into_iter().all(|b| d.pair(b, d.coroot(a)).abs() <= 1);
    let g2 = d.components().iter().any(|c| c.ty == SimpleType::G);
    let short: u32 = (0..d.rank()).filter(|&i| !d.is_long(d.simple_root(i))).fold(0, |m, i| m | (1 << i));
    min && (!g2 || j != short || d.is_long(a))
}

/// `C_{λ,b,x}` recomputed from its definition and compared.
pub fn c_set(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    for x in 0..sp.len() {
        let mu = &sp.elems[x].mu;
        let mine: Vec<usize> = (0..d.num_pos_roots())
            .filter(|&a| !d.in_levi(a, sp.j) && d.preceq(&d.add(mu, d.coroot(a)), &sp.lambda))
            .filter(|&a| bits(sp.j, d.rank()).into_iter().all(|s| d.pair(d.simple_root(s), d.coroot(a)) <= 0))
            .filter(|&a| strongly_j_minuscule(d, a, sp.j))
            .collect();
        sink.rec(true, || core_c_set(f, sp, x) == mine, || json!({"x": sp.elems[x].cls, "C": mine}));
    }
    Ok(())
}

/// Orbits of `J`-anti-dominant `J`-minuscule roots in `Φ⁺ ∖ Φ_J`.
fn minuscule_orbits(f: &Frobenius, j: u32) -> Vec<Vec<usize>> {
    let d = f.datum();
    orbits_of(
        f,
        (0..d.num_pos_roots()).filter(|&a| {
            let c = d.classify_coweight(d.coroot(a), j);
            !d.in_levi(a, j) && c.k_antidominant && c.k_minuscule
        }),
    )
}

pub fn omega_orbit(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    let special: BTreeSet<usize> = minuscule_orbits(f, sp.j).into_iter().flatten().collect();
    for o in orbits_of(f, 0..d.num_pos_roots()) {
        let mut om = [0; adlv_core::root_datum::MAX_RANK];
        for &a in &o {
            om = d.add(&om, d.coroot(a));
        }
        let cls = sp.class_of(&om, d);
        sink.rec(
            inst.hn.irreducible,
            || {
                let fixed = sp.class_of(&f.act_y(&om), d) == cls;
                let agrees = !special.contains(&o[0]) || orbit_info(f, o[0], sp.j).is_ok_and(|i| i.omega == cls);
                fixed && agrees
            },
            || json!({"orbit": root_json(d, o[0])}),
        );
    }
    Ok(())
}

pub fn orbit_type(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let inst = ctx.inst();
    let sp = &inst.sp;
    for o in minuscule_orbits(f, sp.j) {
        let info = orbit_info(f, o[0], sp.j);
        let ty = info.as_ref().map(|i| i.ty).unwrap_or(OrbitType::II);
        sink.rec(
            inst.hn.irreducible && ty != OrbitType::I,
            || {
                info.as_ref().is_ok_and(|i| {
                    i.n == components::component_period(f, o[0]) && d.is_simply_laced() && i.union_is_base
                })
            },
            || json!({"orbit": root_json(d, o[0])}),
        );
    }
    Ok(())
}
