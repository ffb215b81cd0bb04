//! The acceptance criteria, one test each. Every test writes a single
//! `acceptance N: pass|FAIL ...` line to stderr, uncaptured.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::Write;
use std::time::{Duration, Instant};

use adlv_core::bruhat::{adm_set, adm_set_by_ball, bruhat_leq, covers_down};
use adlv_core::components::pi0_prediction;
use adlv_core::{AffRoot, Coords, ExtAffElem, Frobenius, RootDatum, Q};
use adlv_lab::checkers::{registry, twin_ids};
use adlv_lab::context::{self, instance};
use adlv_lab::grid::{cells, d4_triality, d4_triality_wide, default_grid, GridRef};
use adlv_lab::{run_checker, CellKind, CheckReport, CheckerConfig, Status};

fn line(n: u32, ok: bool, detail: &str) {
    let tag = if ok { "pass" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance {n}: {tag} {detail}");
}

fn finish(n: u32, ok: bool, detail: String, start: Instant, budget: Duration) {
    let t = start.elapsed();
    let ok = ok && t <= budget;
    line(n, ok, &format!("{detail} ({:.1}s, budget {}s)", t.as_secs_f64(), budget.as_secs()));
    assert!(ok, "criterion {n}: {detail}");
}

fn grid_for(group: &str) -> GridRef {
    if group == "order3" {
        GridRef::Inline(vec![d4_triality_wide()])
    } else {
        GridRef::default()
    }
}

fn run_group(group: &str, grid: Option<GridRef>) -> Vec<CheckReport> {
    registry()
        .iter()
        .filter(|c| c.group == group)
        .map(|c| {
            let mut cfg = CheckerConfig::new(c.id);
            cfg.grid = grid.clone().unwrap_or_else(|| grid_for(group));
            run_checker(&cfg).expect("checker runs")
        })
        .collect()
}

fn summary(reports: &[CheckReport]) -> String {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| format!("{}={:?}/{}cex/{}hits", r.lemma_id, r.status, r.counterexample_count, r.hits))
        .collect();
    let cex: u64 = reports.iter().map(|r| r.counterexample_count).sum();
    format!("{} checkers, {} counterexamples, non-pass: [{}]", reports.len(), cex, bad.join(", "))
}

/// Elements of length at most `n` by breadth-first search from `Ω`, with their depth.
fn levels(d: &RootDatum, n: usize) -> Vec<Vec<ExtAffElem>> {
    let mut seen: HashSet<ExtAffElem> = d.omega().into_iter().collect();
    let mut out = vec![seen.iter().copied().collect::<Vec<_>>()];
    for _ in 0..n {
        let mut next = Vec::new();
        for x in out.last().unwrap() {
            for s in 0..d.num_simple_affine() {
                let y = d.mul(x, &d.s_elem(s));
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        out.push(next);
    }
    out
}

#[test]
fn criterion_1_length_and_covers() {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut total = 0;
    let mut cover_bad = 0;
    for label in ["A1", "A2", "B2"] {
        let d = context::datum(label).unwrap();
        let lv = levels(&d, 8);
        for (l, layer) in lv.iter().enumerate() {
            for x in layer {
                total += 1;
                let greedy = d.decompose(x).0.len();
                if d.length_by_inversions(x) != l || d.length(x) != l || greedy != l {
                    mismatches += 1;
                }
                if l == 0 {
                    continue;
                }
                let derived: BTreeSet<ExtAffElem> = lv[l - 1].iter().filter(|y| bruhat_leq(&d, y, x)).copied().collect();
                let direct: BTreeSet<ExtAffElem> = covers_down(&d, x).into_iter().collect();
                if derived != direct {
                    cover_bad += 1;
                }
            }
        }
    }
    let ok = mismatches == 0 && cover_bad == 0 && total > 0;
    finish(1, ok, format!("{total} elements, {mismatches} length mismatches, {cover_bad} cover mismatches"), start, Duration::from_secs(60));
}

#[test]
fn criterion_2_adm_oracle() {
    let start = Instant::now();
    let a1 = context::datum("A1").unwrap();
    let n_a1 = adm_set(&a1, &a1.coords(&[1])).unwrap().len();
    let mut compared = 0;
    let mut bad = Vec::new();
    for label in ["A2", "B2"] {
        let d = context::datum(label).unwrap();
        for lam in d.dominant_up_to_height(&Q::from_integer(4)) {
            compared += 1;
            let a = adm_set(&d, &lam).unwrap().as_set();
            let b = adm_set_by_ball(&d, &lam).unwrap().as_set();
            if a != b {
                bad.push(format!("{label} {:?}", d.coords_vec(&lam)));
            }
        }
    }
    let ok = n_a1 == 3 && bad.is_empty() && compared > 0;
    finish(2, ok, format!("|Adm(ω∨)| on A1 = {n_a1}, {compared} λ compared, mismatches {bad:?}"), start, Duration::from_secs(300));
}

#[test]
fn criterion_3_appendix() {
    let start = Instant::now();
    let r = run_group("appendix", None);
    let ok = !r.is_empty() && r.iter().all(|r| r.status == Status::Pass);
    finish(3, ok, summary(&r), start, Duration::from_secs(15 * 60));
}

#[test]
fn criterion_4_reduction() {
    let start = Instant::now();
    let r = run_group("reduction", None);
    let ok = !r.is_empty() && r.iter().all(|r| r.status == Status::Pass);
    finish(4, ok, summary(&r), start, Duration::from_secs(30 * 60));
}

#[test]
fn criterion_5_levi() {
    let start = Instant::now();
    let r = run_group("levi", None);
    let clean = r.iter().all(|r| matches!(r.status, Status::Pass | Status::Vacuous));
    let connected = r.iter().any(|r| r.lemma_id == "conneted" && r.status == Status::Pass);
    let ok = !r.is_empty() && clean && connected;
    finish(5, ok, format!("{}, arrow graph connectivity {}", summary(&r), if connected { "holds" } else { "FAILS" }), start, Duration::from_secs(45 * 60));
}

/// `ZΦ_J∨` cut to coefficients in `[-c, c]`.
fn levi_coroot_lattice(d: &RootDatum, j: u32, c: i32) -> HashSet<Coords> {
    let mut pts: HashSet<Coords> = HashSet::from([[0; adlv_core::root_datum::MAX_RANK]]);
    for i in (0..d.rank()).filter(|i| j >> i & 1 == 1) {
        let a = *d.coroot(d.simple_root(i));
        let mut next = HashSet::new();
        for p in &pts {
            for k in -c..=c {
                let mut q = *p;
                for t in 0..d.rank() {
                    q[t] += k * a[t];
                }
                next.insert(q);
            }
        }
        pts = next;
    }
    pts
}

fn box_coweights(n: usize, b: i32) -> Vec<Coords> {
    let mut out = vec![[0; adlv_core::root_datum::MAX_RANK]];
    for t in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |k| {
                    let mut w = v;
                    w[t] = k;
                    w
                })
            })
            .collect();
    }
    out
}

/// `π₁(G)^σ` and the image of `π₁(M_J)^σ` in `π₁(G)`, both by enumeration.
fn fixed_and_image(f: &Frobenius, lat: &HashSet<Coords>) -> (BTreeSet<Vec<i64>>, BTreeSet<Vec<i64>>) {
    let d = f.datum();
    let g = d.pi1();
    let fixed = g
        .elements()
        .into_iter()
        .filter(|c| {
            let y = d.coords(&g.rep(c));
            d.eta_coweight(&f.act_y(&y)) == *c
        })
        .collect();
    let image = box_coweights(d.rank(), 3)
        .into_iter()
        .filter(|mu| lat.contains(&d.sub(&f.act_y(mu), mu)))
        .map(|mu| d.eta_coweight(&mu))
        .collect();
    (fixed, image)
}

#[test]
fn criterion_6_pi0() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut lattices: HashMap<(String, u32), HashSet<Coords>> = HashMap::new();
    for c in cells(&default_grid(), CellKind::Instance).unwrap() {
        let (lam, b) = (c.lambda.clone().unwrap(), c.b.clone().unwrap());
        let inst = instance(&c.datum, &c.sigma, &lam, &b).unwrap();
        if !inst.hn.irreducible {
            continue;
        }
        let f = context::frobenius(&c.datum, &c.sigma).unwrap();
        let d = f.datum();
        let j = inst.sp.j;
        let lat = lattices.entry((c.datum.clone(), j)).or_insert_with(|| levi_coroot_lattice(d, j, 12));
        let (fixed, image) = fixed_and_image(&f, lat);
        let p = pi0_prediction(&f, &d.coords(&lam), &inst.b).unwrap();
        let fixed_v: Vec<Vec<i64>> = fixed.iter().cloned().collect();
        let image_v: Vec<Vec<i64>> = image.iter().cloned().collect();
        let factors_ok = d.pi1().invariant_factors(&image_v) == d.pi1().invariant_factors(&fixed_v) && p.factors == d.pi1().invariant_factors(&fixed_v);
        checked += 1;
        if image != fixed || !factors_ok || p.order != Some(fixed.len() as u64) || !p.consistency {
            bad.push(format!("{} {} {:?} {}", c.datum, c.sigma, lam, b));
        }
    }
    let order = |label: &str, sigma: &str, lam: &[i64], b: &str| {
        let f = context::frobenius(label, sigma).unwrap();
        let d = f.datum();
        pi0_prediction(&f, &d.coords(lam), &d.parse_elem(b).unwrap()).unwrap().order
    };
    let a1 = order("A1", "id", &[2], "1");
    let a2 = cells(&[adlv_lab::GridEntry::new("A2", "flip").with_height(2)], CellKind::Instance)
        .unwrap()
        .into_iter()
        .find(|c| instance(&c.datum, &c.sigma, c.lambda.as_ref().unwrap(), c.b.as_ref().unwrap()).unwrap().hn.irreducible)
        .and_then(|c| order("A2", "flip", c.lambda.as_ref().unwrap(), c.b.as_ref().unwrap()));
    let ok = checked > 0 && bad.is_empty() && a1 == Some(2) && a2 == Some(1);
    finish(6, ok, format!("{checked} irreducible instances, failures {bad:?}, A1 order {a1:?}, A2 flip order {a2:?}"), start, Duration::from_secs(600));
}

/// `(w̃σ)^m = t^ξ` with `m` a multiple of `ord(σ)`.
fn newton_pair(f: &Frobenius, y: &ExtAffElem) -> (Coords, i32) {
    let d = f.datum();
    let mut acc = d.identity();
    let mut cur = *y;
    for i in 1.. {
        acc = d.mul(&acc, &cur);
        cur = f.act(&cur);
        if i % f.order() == 0 && acc.w == d.identity().w {
            return (acc.mu, i as i32);
        }
    }
    unreachable!()
}

fn scale(d: &RootDatum, v: &Coords, k: i32) -> Coords {
    let mut out = *v;
    for x in out.iter_mut().take(d.rank()) {
        *x *= k;
    }
    out
}

/// `w̃σ` sends the positive affine roots vanishing on `ν` to positive ones.
fn semi_standard(f: &Frobenius, y: &ExtAffElem, xi: &Coords) -> bool {
    let d = f.datum();
    (0..d.num_roots()).filter(|&a| d.pair(a, xi) == 0).all(|a| {
        let k = if a < d.num_pos_roots() { 1 } else { 0 };
        let r = d.act_affroot(y, &AffRoot { alpha: f.act_root(a), k });
        d.is_positive_affroot(&r)
    })
}

#[test]
fn criterion_7_decomposition() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for c in cells(&default_grid(), CellKind::Instance).unwrap() {
        let (lam, b) = (c.lambda.clone().unwrap(), c.b.clone().unwrap());
        let inst = instance(&c.datum, &c.sigma, &lam, &b).unwrap();
        if !inst.hn.nonempty {
            continue;
        }
        let f = context::frobenius(&c.datum, &c.sigma).unwrap();
        let d = f.datum();
        let adm = context::adm(&c.datum, &lam).unwrap();
        let (xb, mb) = newton_pair(&f, &inst.b);
        let nb = d.dominant_conjugate(&xb).0;
        let kb = f.kappa(&inst.b);
        let scan: BTreeSet<ExtAffElem> = adm
            .iter()
            .filter(|y| f.kappa(y) == kb)
            .filter(|y| {
                let (xi, m) = newton_pair(&f, y);
                scale(d, &d.dominant_conjugate(&xi).0, mb) == scale(d, &nb, m) && semi_standard(&f, y, &xi)
            })
            .copied()
            .collect();
        let mut union = BTreeSet::new();
        let mut disjoint = true;
        for leaf in &inst.leaves {
            for y in &leaf.elements {
                disjoint &= union.insert(*y);
            }
        }
        checked += 1;
        if !disjoint || union != scan || scan != inst.scan {
            bad.push(format!("{} {} {:?} {}", c.datum, c.sigma, lam, b));
        }
    }
    let ok = checked > 0 && bad.is_empty();
    finish(7, ok, format!("{checked} instances, failures {bad:?}"), start, Duration::from_secs(600));
}

#[test]
fn criterion_8_order_three() {
    let start = Instant::now();
    let tight = run_group("order3", Some(GridRef::Inline(vec![d4_triality()])));
    let wide = run_group("order3", None);
    let clean = |r: &[CheckReport]| r.iter().all(|r| r.counterexample_count == 0 && r.errors.is_empty() && r.status != Status::BudgetExceeded);
    let hits: Vec<String> = wide.iter().map(|r| format!("{}:{}", r.lemma_id, r.hits)).collect();
    let ok = !tight.is_empty() && clean(&tight) && clean(&wide);
    finish(8, ok, format!("tight grid: {}; wider λ hits [{}]", summary(&tight), hits.join(", ")), start, Duration::from_secs(3600));
}

#[test]
fn criterion_9_mutation() {
    let start = Instant::now();
    let ids = twin_ids();
    let mut survivors = Vec::new();
    for id in &ids {
        let base = id.split('~').next().unwrap();
        let group = registry().iter().find(|c| c.id == base).unwrap().group;
        let mut cfg = CheckerConfig::new(id);
        cfg.grid = grid_for(group);
        let r = run_checker(&cfg).unwrap();
        if r.status != Status::Fail {
            survivors.push(format!("{id}={:?}", r.status));
        }
    }
    let ok = !ids.is_empty() && survivors.is_empty();
    finish(9, ok, format!("{} twins, surviving {survivors:?}", ids.len()), start, Duration::from_secs(3600));
}
