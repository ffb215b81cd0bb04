//! The checker registry.
//!
//! Every checker sweeps one cell and sends `(hypothesis, conclusion, witness)`
//! records to a [`Sink`]. Its `quote` is the sentence of the statement it tests.

use adlv_core::{ExtAffElem, RootDatum};
use serde_json::{json, Value};

use crate::context::CellCtx;
use crate::error::{LabError, LabResult};
use crate::grid::CellKind;
use crate::sink::{Mode, Sink};

mod appendix;
mod levi;
mod order3;
mod reduction;

pub type RunFn = fn(&CellCtx, &mut Sink) -> LabResult<()>;

pub struct Checker {
    pub id: &'static str,
    pub quote: &'static str,
    pub group: &'static str,
    pub kind: CellKind,
    /// Mutated twins expected to fail on the default grid.
    pub twins: &'static [Mode],
    pub run: RunFn,
}

const N: Mode = Mode::NegateConclusion;
const D: Mode = Mode::DropHypothesis;

macro_rules! checker {
    ($id:expr, $group:expr, $kind:ident, [$($t:expr),*], $run:path, $quote:expr) => {
        Checker { id: $id, quote: $quote, group: $group, kind: CellKind::$kind, twins: &[$($t),*], run: $run }
    };
}

pub fn registry() -> &'static [Checker] {
    static R: &[Checker] = &[
        checker!("commute", "appendix", BallSplit, [N, D], appendix::commute, "Then w̃ = s w̃ s′"),
        checker!("R1.1", "appendix", AdmSplit, [N, D], appendix::r1_1, "w̃s ∈ Adm(λ) if w̃s < sw̃s"),
        checker!("R1.2", "appendix", AdmSplit, [N, D], appendix::r1_2, "w̃s = sw̃ if w̃s ∉ Adm(λ)"),
        checker!("R1.3", "appendix", AdmSplit, [N, D], appendix::r1_3, "sw̃s ∈ Adm(λ) if ℓ(sw̃s) = ℓ(w̃)"),
        checker!("R4", "appendix", AdmSplit, [N, D], appendix::r4, "Then sw̃s ∉ Adm(λ)"),
        checker!("R-dist", "appendix", AdmSplit, [N, D], appendix::r_dist, "Then u′w̃u⁻¹ ∈ Adm(λ) if and only if u = u′"),
        checker!("LR", "appendix", AdmSplit, [N, D], appendix::lr, "Then sw̃s_α s ∈ Adm(λ)"),
        checker!("conj", "appendix", AdmSplit, [N, D], appendix::conj, "Then uw̃s_α u⁻¹ ∈ Adm(λ) for u ∈ W_R"),
        checker!("K-min.1", "reduction", BallSplit, [N], reduction::k_min_1, "then w̃s ∈ ᴷW̃ or w̃s = s′w̃ for some s′ ∈ K"),
        checker!("K-min.2", "reduction", Ball, [N, D], reduction::k_min_2, "then w̃ is the unique element of ᴷW̃ in its W_K-σ-conjugacy class"),
        checker!("partial-conj", "reduction", Ball, [N], reduction::partial_conj, "w̃ →_K ux for some x ∈ ᴷW̃ and u ∈ W_{I(K,x)}"),
        checker!("semi.1", "reduction", Adm, [N, D], reduction::semi_1, "then zw̃σ(z)⁻¹ is semi-standard"),
        checker!("semi.2", "reduction", Adm, [N, D], reduction::semi_2, "there is a unique z′ ∈ W₀^{J_ν̄} such that z′⁻¹w̃σ(z′) is standard"),
        checker!("semi.3", "reduction", Adm, [N, D], reduction::semi_3, "if sw̃ < w̃ or w̃σ(s) < w̃, then sw̃σ(s) is semi-standard"),
        checker!("semi.4", "reduction", Adm, [N, D], reduction::semi_4, "𝕁_w̃ is generated by I ∩ 𝕁_w̃ and W̃ ∩ 𝕁_w̃"),
        checker!("flat", "reduction", Adm, [N, D], reduction::flat, "then ⟨α, ν♭⟩ and ⟨α, p(w̃σ)^n(μ)⟩ have the same sign"),
        checker!("dominant.1", "reduction", Adm, [N], reduction::dominant_1, "⟨α, ν♭⟩ = 0 if and only if ⟨α, p(w̃σ)^i(μ)⟩ = 0 for all i"),
        checker!("dominant.2", "reduction", Adm, [N, D], reduction::dominant_2, "if w̃ is semi-standard, ⟨α, ν♭⟩ ≥ 0 for α ∈ Φ⁺_ν"),
        checker!("dominant.3", "reduction", Adm, [N], reduction::dominant_3, "ν♭_{zw̃σ(z)⁻¹} = z(ν♭_w̃) for z ∈ W₀"),
        checker!("dominant.4", "reduction", Adm, [N, D], reduction::dominant_4, "if w̃ is semi-standard, then w̃σ(Φ̃⁺_{ν♭}) = Φ̃⁺_{ν♭}"),
        checker!("dominant.5", "reduction", Adm, [N, D], reduction::dominant_5, "⟨α^i, ν♭⟩ < 0 for 1 − m ≤ i ≤ 0"),
        checker!("min", "reduction", Adm, [N, D], reduction::min, "Then z₀w̃σ(z₀)⁻¹ ∈ ^{S₀}W̃"),
        checker!("unique", "reduction", Instance, [N, D], reduction::unique, "contains a unique semi-standard element in ᴷW̃"),
        checker!("finite-seq", "reduction", Adm, [N, D], reduction::finite_seq, "there is no infinite sequence w̃ ⇀_K w̃₁ ⇀_K w̃₂ ⇀_K ⋯"),
        checker!("Left", "reduction", Adm, [N], reduction::left, "then w̃ ⇒ w̃′ for the unique w̃′ ∈ ^{S₀}W̃ in its W₀-σ-conjugacy class"),
        checker!("permissible", "reduction", Adm, [N, D], reduction::permissible, "then w_R w̃ w_R is right R-distinct and 𝒫_{w_R w̃ w_R} ≠ ∅"),
        checker!("existence", "reduction", Adm, [N, D], reduction::existence, "Then 𝒫_w̃ ≠ ∅"),
        checker!("non-empty", "reduction", Instance, [N, D], reduction::non_empty, "then w̃ ∈ ^{S₀}W̃ or 𝒫_w̃ ≠ ∅"),
        checker!("orth.1", "levi", Adm, [N], levi::orth_1, "μ − γ∨, μ + wσ^r(γ∨) and μ − γ∨ + wσ^r(γ∨) are K-minuscule"),
        checker!("orth.2", "levi", Adm, [N, D], levi::orth_2, "w̃, s_γ̃w̃, w̃s_{σ^r(γ̃)}, s_γ̃w̃s_γ̃ ∈ Adm(λ)"),
        checker!("orth.3", "levi", Adm, [N, D], levi::orth_3, "then s_γ̃ w̃ s_{σ^r(γ̃)} ∈ Adm(λ)"),
        checker!("line", "levi", Adm, [N, D], levi::line, "then μ ± (γ∨ + wσ^r(γ∨)) ⪯ λ and μ_{w̃′} ⪯ λ"),
        checker!("saturate", "levi", Instance, [N, D], levi::saturate, "then w̃_x σ^i(δ) = σ^i(δ)"),
        checker!("conneted", "levi", Instance, [N], levi::conneted, "there exist distinct elements x = x₀, x₁, …, x_m = x′"),
        checker!("pr", "levi", Instance, [N], levi::pr, "Σ_{α ∈ 𝒪} ⟨α, pr_J(μ_x)⟩ > 0 and ⟨w_J(β), μ_x⟩ ≥ 1 for some β ∈ 𝒪"),
        checker!("anti.1", "levi", Adm, [N, D], levi::anti_1, "w̃s_α ∈ Adm(λ) if μ − w(α∨) ⪯ λ"),
        checker!("anti.2", "levi", Adm, [N, D], levi::anti_2, "s_α w̃ ∈ Adm(λ) if μ + α∨ ⪯ λ"),
        checker!("anti.1.printed", "levi-printed", Adm, [], levi::anti_1_printed, "w̃s_α ∈ Adm(λ) if μ + α∨ ⪯ λ"),
        checker!("anti.2.printed", "levi-printed", Adm, [], levi::anti_2_printed, "s_α w̃ ∈ Adm(λ) if μ − w(α∨) ⪯ λ"),
        checker!("anti.3", "levi", Adm, [N, D], levi::anti_3, "zw̃z⁻¹ ∈ Adm(λ) for z ∈ W^K"),
        checker!("J1-decomp", "levi", Instance, [N], levi::j1_decomp, "w_x ∈ W_{J_{x,1}} and J_{x,0} is orthogonal to J_{x,1}"),
        checker!("choice", "levi", Adm, [N, D], levi::choice, "there exists β ∈ Φ⁺ such that ⟨β, μ + α∨⟩ ≤ −2, and either μ + β∨ ⪯ λ or μ + α∨ + β∨ ≤ λ"),
        checker!("weak.1", "levi", Instance, [N, D], levi::weak_1, "σ^n(Ψ_β ∩ J₀) = Ψ_β ∩ J₀"),
        checker!("weak.2", "levi", Instance, [N, D], levi::weak_2, "𝒪_β ∪ (Ψ_β ∩ J₀) is a set of simple roots of Ψ_β"),
        checker!("weak.3", "levi", Instance, [N, D], levi::weak_3, "w_x fixes Ψ_β ∩ J₀ pointwise"),
        checker!("weak.4", "levi", Instance, [N, D], levi::weak_4, "σ^n acts trivially on Ψ_β ∩ J₀"),
        checker!("type-I", "levi", Instance, [N, D], levi::type_i, "then there exist γ ∈ 𝒪, 1 ≤ r ≤ n, and x′ ∈ 𝒮⁺_{λ,b} such that x →^{(γ,r)} x′"),
        checker!("type-II.1", "levi", Instance, [N], levi::type_ii_1, "ϑ_γ∨ is J-anti-dominant and J-minuscule"),
        checker!("type-II.2", "levi", Instance, [N], levi::type_ii_2, "⟨w_x(ϑ_γ), μ_x⟩ ≥ 1"),
        checker!("type-II.3", "levi", Instance, [N], levi::type_ii_3, "(w̃_xσ)^i(θ̃) = σ^i(θ̃) for 1 − n ≤ i ≤ 0"),
        checker!("type-II.4", "levi", Instance, [N, D], levi::type_ii_4, "Then there exists α ∈ 𝒪 such that x →^{(α,2n)} x"),
        checker!("c-set", "levi", Instance, [N], levi::c_set, "C_{λ,b,x}: α ∈ Φ⁺ ∖ Φ_J with μ_x + α∨ ⪯ λ, J-anti-dominant and strongly J-minuscule"),
        checker!("omega-orbit", "levi", Instance, [N], levi::omega_orbit, "ω_𝒪 = Σ_{α∈𝒪} α∨ ∈ π₁(M_J)^σ"),
        checker!("orbit-type", "levi", Instance, [N, D], levi::orbit_type, "If 𝒪 is of type II or III, then n = d, Φ is simply-laced and 𝒪 ∪ J is a set of simple roots of Ψ"),
        checker!("order3d.small", "order3", Instance, [N, D], order3::small, "If 1 ≤ r ≤ d, then gI ∼ gy⁻¹I for some y ∈ W₀^J ω⁻¹ W_J^a"),
        checker!("order3d.large", "order3", Instance, [N, D], order3::large, "Suppose 2d ≤ r ≤ 3d − 1 and the following conditions hold"),
        checker!("order3d.good", "order3", Instance, [], order3::good, "Assume d + 1 ≤ r ≤ 2d − 1 and the following conditions hold"),
        checker!("order3d.central", "order3", Instance, [N], order3::central, "then 𝒪_δ is of type I"),
    ];
    R
}

pub fn lookup(id: &str) -> LabResult<&'static Checker> {
    registry().iter().find(|c| c.id == id).ok_or_else(|| LabError::UnknownLemma(id.into()))
}

/// Every shipped twin id, e.g. `commute~negate`.
pub fn twin_ids() -> Vec<String> {
    registry().iter().flat_map(|c| c.twins.iter().map(move |m| format!("{}{}", c.id, m.suffix()))).collect()
}

pub(crate) fn fe(d: &RootDatum, x: &ExtAffElem) -> Value {
    json!(d.format_elem(x))
}

pub(crate) fn root_json(d: &RootDatum, a: usize) -> Value {
    json!(d.coords_vec(d.root(a)))
}

/// Subsets of `{0, …, n−1}` as bit masks.
pub(crate) fn masks(n: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << n)
}

pub(crate) fn bits(m: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| m & (1 << i) != 0).collect()
}

/// Singletons and pairs of finite simple reflections.
pub(crate) fn small_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(vec![i, j]);
        }
    }
    out
}

/// The finite reflection `s_α` as an element of `W̃`.
pub(crate) fn s_alpha(d: &RootDatum, a: usize) -> ExtAffElem {
    d.finite(d.reflection(a))
}

/// Subsets `K ⊆ S^a` with `W_K` finite, optionally only the σ-stable ones.
pub(crate) fn finite_affine_sets(f: &adlv_core::Frobenius, stable_only: bool) -> Vec<Vec<usize>> {
    let d = f.datum();
    let ns = d.num_simple_affine();
    let comp_nodes: Vec<u32> = (0..d.components().len())
        .map(|c| (0..ns).filter(|&s| d.simple_affine()[s].component == c).fold(0, |m, s| m | (1 << s)))
        .collect();
    masks(ns)
        .filter(|&k| comp_nodes.iter().all(|&c| k & c != c))
        .map(|k| bits(k, ns))
        .filter(|k| !stable_only || k.iter().all(|&s| k.contains(&f.act_s(s))))
        .collect()
}

/// Left descents in `S^a` as a bit mask.
pub(crate) fn left_descents(d: &RootDatum, x: &ExtAffElem) -> u32 {
    (0..d.num_simple_affine()).filter(|&s| d.left_descent(s, x)).fold(0, |m, s| m | (1 << s))
}

pub(crate) fn mask_of(k: &[usize]) -> u32 {
    k.iter().fold(0, |m, &i| m | (1 << i))
}
