//! The triality case: `σ` of order `3d` on factors of type `D₄`, with
//! `J = 𝒪_β` for the central node `β`.

use adlv_core::components::{component_period, orbit_info, Arrows, OrbitType, SPlus};
use adlv_core::{AffRoot, ExtAffElem, Frobenius, RootDatum};
use serde_json::json;

use super::root_json;
use crate::context::CellCtx;
use crate::error::LabResult;
use crate::sink::Sink;

/// `(β, [α…])`: a σ-fixed simple root and its neighbours, when `J = {β}`.
struct Triality {
    beta: usize,
    alphas: Vec<usize>,
    d: usize,
}

fn setting(f: &Frobenius, sp: &SPlus) -> Option<Triality> {
    let d = f.datum();
    if f.order() != 3 * component_period(f, d.simple_root(0)) {
        return None;
    }
    let b = (0..d.rank()).find(|&s| sp.j == 1 << s && f.act_simple(s) == s)?;
    let alphas: Vec<usize> = (0..d.rank()).filter(|&s| s != b && d.cartan_entry(s, b) == -1).map(|s| d.simple_root(s)).collect();
    (alphas.len() == 3).then(|| Triality { beta: d.simple_root(b), alphas, d: component_period(f, d.simple_root(b)) })
}

fn plus(d: &RootDatum, roots: &[usize]) -> Option<usize> {
    let mut s = [0; adlv_core::root_datum::MAX_RANK];
    for &r in roots {
        s = d.add(&s, d.root(r));
    }
    d.root_index(&s)
}

fn fixes(d: &RootDatum, w: &ExtAffElem, a: usize) -> bool {
    d.act_affroot(w, &AffRoot { alpha: a, k: 0 }) == AffRoot { alpha: a, k: 0 }
}

/// Whether `w̃_x` and `w̃_x s_{σ^r(α+β)+1}` both lie in `Adm(λ)`.
fn tail_admissible(ctx: &CellCtx, t: &Triality, wx: &ExtAffElem, a: usize, r: usize) -> bool {
    let d = ctx.d();
    let adm = ctx.adm();
    let Some(ab) = plus(d, &[a, t.beta]) else { return false };
    let th = AffRoot { alpha: ctx.f.act_root_pow(ab, r), k: 1 };
    adm.contains(wx) && adm.contains(&d.mul(wx, &d.affine_reflection(th)))
}

pub fn small(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    let Some(t) = setting(f, sp) else { return Ok(()) };
    let ar = Arrows::new(f, sp);
    for x in 0..sp.len() {
        let (mu, wx) = (&sp.elems[x].mu, sp.elems[x].w);
        for &a in &t.alphas {
            let g = plus(d, &[a, t.beta]).expect("α + β is a root");
            for r in 1..=t.d {
                let wsg = d.w_root(wx, f.act_root_pow(g, r));
                let star = d.pair(g, mu) == 1 && d.pair(wsg, mu) == -1 && d.pair_roots(g, wsg) == -1;
                let hyp = star && ar.tail_arrow(x, a, r).is_some();
                sink.rec(
                    hyp,
                    || {
                        let sda = f.act_root_pow(a, t.d);
                        let Some(dl) = plus(d, &[a, t.beta, sda]) else { return false };
                        let lam = &sp.lambda;
                        let adm = ctx.adm();
                        let sd = d.mul(&d.affine_reflection(AffRoot { alpha: dl, k: 1 }), &sp.elems[x].rep);
                        r == t.d
                            && d.pair(t.beta, mu) == 1
                            && d.w_root(wx, f.act_root_pow(g, t.d)) == sda
                            && d.preceq(&d.add(mu, d.coroot(dl)), lam)
                            && d.preceq(&d.sub(mu, d.coroot(dl)), lam)
                            && adm.contains(&sp.elems[x].rep)
                            && adm.contains(&sd)
                    },
                    || json!({"x": sp.elems[x].cls, "alpha": root_json(d, a), "r": r}),
                );
            }
        }
    }
    Ok(())
}

pub fn large(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    let Some(t) = setting(f, sp) else { return Ok(()) };
    let ar = Arrows::new(f, sp);
    let dd = t.d;
    for x in 0..sp.len() {
        let (mu, rep) = (&sp.elems[x].mu, &sp.elems[x].rep);
        for &a in &t.alphas {
            let sa = |i: usize| f.act_root_pow(a, i);
            for r in 2 * dd..3 * dd {
                let special = [r - dd, r - 2 * dd, dd, 2 * dd];
                let c1 = d.pair(a, mu) >= 1;
                let c2 = r != 2 * dd || d.pair(sa(dd), mu) == 0;
                let c3 = r == 2 * dd
                    || (d.pair(f.act_root_pow(t.beta, r), mu) == 1
                        && d.pair(t.beta, mu) == 0
                        && special.iter().all(|&i| d.pair(sa(i), mu) == 0));
                let c4 = (1..r).filter(|i| !special.contains(i)).all(|i| fixes(d, rep, sa(i)));
                let hyp = ar.arrow(x, a, r).is_some() && c1 && c2 && c3 && c4;
                sink.rec(hyp, || tail_admissible(ctx, &t, rep, a, r), || json!({"x": sp.elems[x].cls, "alpha": root_json(d, a), "r": r}));
            }
        }
    }
    Ok(())
}

/// Empty when `d = 1`.
pub fn good(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    let Some(t) = setting(f, sp) else { return Ok(()) };
    let ar = Arrows::new(f, sp);
    let dd = t.d;
    for x in 0..sp.len() {
        let (mu, rep) = (&sp.elems[x].mu, &sp.elems[x].rep);
        for &a in &t.alphas {
            let sa = |i: usize| f.act_root_pow(a, i);
            for r in dd + 1..2 * dd {
                let c1 = d.pair(t.beta, mu) == 0 && matches!(d.pair(f.act_root_pow(t.beta, r), mu), 0 | 1);
                let c2 = d.pair(sa(dd), mu) == 0 && d.pair(sa(r - dd), mu) == 0 && d.pair(a, mu) >= 1;
                let c3 = (1..r).filter(|&i| i != r - dd && i != dd).all(|i| fixes(d, rep, sa(i)));
                let hyp = ar.arrow(x, a, r).is_some() && c1 && c2 && c3;
                sink.rec(hyp, || tail_admissible(ctx, &t, rep, a, r), || json!({"x": sp.elems[x].cls, "alpha": root_json(d, a), "r": r}));
            }
        }
    }
    Ok(())
}

pub fn central(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let f = &ctx.f;
    let d = ctx.d();
    let sp = &ctx.inst().sp;
    let Some(t) = setting(f, sp) else { return Ok(()) };
    let ar = Arrows::new(f, sp);
    for &a in &t.alphas {
        let Some(dl) = plus(d, &[a, t.beta, f.act_root_pow(a, 2 * t.d)]) else { continue };
        let ty = orbit_info(f, dl, sp.j)?.ty;
        for x in 0..sp.len() {
            for k in 1..3 * t.d {
                sink.rec(
                    ar.arrow(x, dl, k).is_some(),
                    || ty == OrbitType::I,
                    || json!({"x": sp.elems[x].cls, "alpha": root_json(d, a), "k": k}),
                );
            }
        }
    }
    Ok(())
}
