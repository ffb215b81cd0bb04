//! Distinct elements of `Adm(λ)` and the elementary moves behind them.

use adlv_core::bruhat::{distinct_test, Side};
use adlv_core::sigma::parabolic_group;
use serde_json::json;

use super::{fe, root_json, s_alpha, small_subsets};
use crate::context::CellCtx;
use crate::error::LabResult;
use crate::sink::Sink;

pub fn commute(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let ns = d.num_simple_affine();
    for w in ctx.ball()?.iter() {
        let lw = d.length(w);
        for s in 0..ns {
            let sw = d.lmul_s(s, w);
            for t in 0..ns {
                let wt = d.rmul_s(w, t);
                let swt = d.rmul_s(&sw, t);
                let hyp = d.length(&sw) == d.length(&wt) && d.length(&swt) == lw;
                sink.rec(hyp, || swt == *w, || json!({"w": fe(d, w), "s": s, "t": t}));
            }
        }
    }
    Ok(())
}

/// Records over `w ∈ Adm(λ)` and `s ∈ S^a` with `w < sw`.
fn r1(ctx: &CellCtx, sink: &mut Sink, clause: u8) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for w in adm.iter() {
        for s in 0..d.num_simple_affine() {
            if d.left_descent(s, w) {
                continue;
            }
            let ws = d.rmul_s(w, s);
            let sw = d.lmul_s(s, w);
            let sws = d.lmul_s(s, &ws);
            let (hyp, concl) = match clause {
                1 => (d.length(&ws) < d.length(&sws), adm.contains(&ws)),
                2 => (!adm.contains(&ws), ws == sw),
                _ => (d.length(&sws) == d.length(w), adm.contains(&sws)),
            };
            sink.rec(hyp, || concl, || json!({"w": fe(d, w), "s": s}));
        }
    }
    Ok(())
}

pub fn r1_1(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    r1(ctx, sink, 1)
}

pub fn r1_2(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    r1(ctx, sink, 2)
}

pub fn r1_3(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    r1(ctx, sink, 3)
}

/// Non-admissible `w` are taken from the ball, inside the `Ω`-coset of `Adm(λ)`.
pub fn r4(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    let eta = d.eta(&adm.elements()[0]);
    for w in ctx.ball()?.iter() {
        if d.eta(w) != eta || adm.contains(w) {
            continue;
        }
        for s in 0..d.num_simple_affine() {
            let ws = d.rmul_s(w, s);
            let hyp = d.length(&ws) > d.length(w);
            sink.rec(hyp, || !adm.contains(&d.lmul_s(s, &ws)), || json!({"w": fe(d, w), "s": s}));
        }
    }
    Ok(())
}

pub fn r_dist(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for r in small_subsets(d.rank()) {
        let wr = parabolic_group(d, &r, 1 << 12)?;
        let longest = d.finite(d.longest_of(r.iter().fold(0, |m, &i| m | (1 << i))));
        for w in adm.iter() {
            let hyp = distinct_test(d, w, &r, Side::Right, adm)?;
            for u in &wr {
                for up in &wr {
                    if d.length(up) > d.length(u) {
                        continue;
                    }
                    let y = d.mul(&d.mul(up, w), &d.inv(u));
                    sink.rec(
                        hyp,
                        || adm.contains(&y) == (u == up),
                        || json!({"clause": "iff", "R": r, "w": fe(d, w), "u": fe(d, u), "u'": fe(d, up)}),
                    );
                }
            }
            let v = d.mul(&d.mul(&longest, w), &longest);
            sink.rec(
                hyp,
                || adm.contains(&v) && distinct_test(d, &v, &r, Side::Left, adm).unwrap_or(false),
                || json!({"clause": "consequence", "R": r, "w": fe(d, w)}),
            );
        }
    }
    Ok(())
}

pub fn lr(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for w in adm.iter() {
        for s in 0..d.rank() {
            let sws = d.rmul_s(&d.lmul_s(s, w), s);
            let pre = adm.contains(&sws) && !adm.contains(&d.lmul_s(s, w));
            for a in 0..d.num_pos_roots() {
                if a == d.simple_root(s) {
                    continue;
                }
                let wa = d.mul(w, &s_alpha(d, a));
                let hyp = pre && adm.contains(&wa);
                let target = d.rmul_s(&d.lmul_s(s, &wa), s);
                sink.rec(hyp, || adm.contains(&target), || json!({"w": fe(d, w), "s": s, "alpha": root_json(d, a)}));
            }
        }
    }
    Ok(())
}

pub fn conj(ctx: &CellCtx, sink: &mut Sink) -> LabResult<()> {
    let d = ctx.d();
    let adm = ctx.adm();
    for r in small_subsets(d.rank()) {
        let mask = r.iter().fold(0u32, |m, &i| m | (1 << i));
        let wr = parabolic_group(d, &r, 1 << 12)?;
        for w in adm.iter() {
            let distinct = distinct_test(d, w, &r, Side::Left, adm)?;
            for a in 0..d.num_pos_roots() {
                if d.in_levi(a, mask) {
                    continue;
                }
                let wa = d.mul(w, &s_alpha(d, a));
                let hyp = distinct && adm.contains(&wa);
                for u in &wr {
                    let y = d.mul(&d.mul(u, &wa), &d.inv(u));
                    sink.rec(
                        hyp,
                        || adm.contains(&y),
                        || json!({"R": r, "w": fe(d, w), "alpha": root_json(d, a), "u": fe(d, u)}),
                    );
                }
            }
        }
    }
    Ok(())
}
