//! Lower bounds on `wsat(n, H)`: the gamma quantities in subgraph, shadow
//! and vertex-set form, the codegree bound, trivial bounds and `eta`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::canonical::canonical_form;
use crate::caps::Caps;
use crate::combinatorics::{binom_usize, cmp_lex_masks};
use crate::count_polymatroid::CountParams;
use crate::error::{Result, WsatError};
use crate::hypergraph::{delta_m, delta_star, link, shadow, sparseness, sub_masks, vertices_of, Hypergraph, VertexSubset};
use crate::io::HypergraphJson;
use crate::rational::{self, Rational};
use crate::wsat::{wsat_exact, Family, WsatOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    #[serde(with = "crate::rational")]
    pub value: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<usize>>>,
}

/// A minimizer over subsets, with the subset as an item-index mask.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetMinimum {
    pub value: Rational,
    pub selection: u64,
    pub witness: Vec<Vec<usize>>,
}

/// Visits every subset of `items` by Gray code, tracking how many targets
/// are incident to the chosen items. `ratio(size, hit)` returns the
/// objective as `(num, den)`, `den > 0`, or `None` when infeasible.
/// Ties keep the lexicographically least selection.
fn gray_min(
    incidence: &[Vec<usize>],
    targets: usize,
    ratio: impl Fn(usize, usize) -> Option<(i64, i64)>,
) -> Option<(i64, i64, u64)> {
    let items = incidence.len();
    let mut hits = vec![0u32; targets];
    let mut hit = 0usize;
    let mut sel = 0u64;
    let mut best: Option<(i64, i64, u64)> = None;
    for i in 1u64..(1u64 << items) {
        let j = i.trailing_zeros() as usize;
        sel ^= 1u64 << j;
        if sel >> j & 1 == 1 {
            for &t in &incidence[j] {
                hits[t] += 1;
                if hits[t] == 1 {
                    hit += 1;
                }
            }
        } else {
            for &t in &incidence[j] {
                hits[t] -= 1;
                if hits[t] == 0 {
                    hit -= 1;
                }
            }
        }
        let Some((num, den)) = ratio(sel.count_ones() as usize, hit) else {
            continue;
        };
        let better = match best {
            None => true,
            Some((bn, bd, bs)) => {
                let lhs = num as i128 * bd as i128;
                let rhs = bn as i128 * den as i128;
                lhs < rhs || (lhs == rhs && cmp_lex_masks(sel, bs).is_lt())
            }
        };
        if better {
            best = Some((num, den, sel));
        }
    }
    best
}

fn check_level(h: &Hypergraph, s: usize) -> Result<()> {
    if h.r() < 2 {
        return Err(WsatError::arg("gamma needs r >= 2"));
    }
    if s < 2 || s > h.r() {
        return Err(WsatError::arg(format!("gamma level s = {s} outside 2..={}", h.r())));
    }
    Ok(())
}

fn index_of(masks: &[u64]) -> HashMap<u64, usize> {
    masks.iter().enumerate().map(|(i, &m)| (m, i)).collect()
}

/// `min (|E(H)| - |E(G)| - 1) / (|shadow_{s-1}(H)| - |shadow_{s-1}(G)|)` over
/// non-empty `G ⊆ H` with strictly smaller shadow.
pub fn gamma_subgraph(h: &Hypergraph, s: usize, caps: &Caps) -> Result<SubsetMinimum> {
    check_level(h, s)?;
    caps.check("gamma subgraph edges", h.num_edges() as u128, caps.gamma_items as u128)?;
    let sh = shadow(h, s - 1)?;
    let ids = index_of(&sh);
    let incidence: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|&e| sub_masks(e, s - 1).map(|u| ids[&u]).collect())
        .collect();
    let (total, e) = (sh.len(), h.num_edges());
    let (num, den, sel) = gray_min(&incidence, total, |size, hit| {
        (hit < total).then(|| ((e - size - 1) as i64, (total - hit) as i64))
    })
    .ok_or_else(|| WsatError::pre("no proper subgraph with a smaller shadow"))?;
    Ok(SubsetMinimum {
        value: rational::ratio(num, den),
        selection: sel,
        witness: h.edge_subset(sel).edge_lists(),
    })
}

/// `min (#{e : e meets S} - 1) / |S|` over non-empty `S ⊆ shadow_{s-1}(H)`
/// leaving at least `C(r, s-1)` shadow sets outside `S`.
pub fn gamma_shadow(h: &Hypergraph, s: usize, caps: &Caps) -> Result<SubsetMinimum> {
    check_level(h, s)?;
    let sh = shadow(h, s - 1)?;
    caps.check("gamma shadow sets", sh.len() as u128, caps.gamma_items as u128)?;
    let ids = index_of(&sh);
    let mut incidence = vec![Vec::new(); sh.len()];
    for (j, &e) in h.edges().iter().enumerate() {
        for u in sub_masks(e, s - 1) {
            incidence[ids[&u]].push(j);
        }
    }
    let keep = binom_usize(h.r(), s - 1) as usize;
    let total = sh.len();
    let (num, den, sel) = gray_min(&incidence, h.num_edges(), |size, hit| {
        (total - size >= keep).then(|| (hit as i64 - 1, size as i64))
    })
    .ok_or_else(|| WsatError::pre("shadow too small for an admissible subset"))?;
    Ok(SubsetMinimum {
        value: rational::ratio(num, den),
        selection: sel,
        witness: crate::combinatorics::bits(sel).map(|i| vertices_of(sh[i])).collect(),
    })
}

/// Graph form: `min (#{e : e meets U} - 1) / |U|` over non-empty
/// `U ⊆ V(H)` with `|V(H) \ U| >= m`.
pub fn gamma_graph_m(h: &Hypergraph, m: usize, caps: &Caps) -> Result<SubsetMinimum> {
    if h.r() != 2 {
        return Err(WsatError::arg("gamma_graph_m needs a graph"));
    }
    if h.is_empty() {
        return Err(WsatError::arg("gamma_graph_m needs at least one edge"));
    }
    if !h.isolated_vertices().is_empty() {
        return Err(WsatError::pre("gamma_graph_m needs a graph without isolated vertices"));
    }
    let n = h.n();
    if m >= n {
        return Err(WsatError::arg(format!("m = {m} must be below |V(H)| = {n}")));
    }
    caps.check("gamma vertex sets", n as u128, caps.gamma_items as u128)?;
    let mut incidence = vec![Vec::new(); n];
    for (j, &e) in h.edges().iter().enumerate() {
        for v in crate::combinatorics::bits(e) {
            incidence[v].push(j);
        }
    }
    let (num, den, sel) = gray_min(&incidence, h.num_edges(), |size, hit| {
        (n - size >= m).then(|| (hit as i64 - 1, size as i64))
    })
    .expect("a single vertex is always admissible");
    Ok(SubsetMinimum {
        value: rational::ratio(num, den),
        selection: sel,
        witness: vec![vertices_of(sel)],
    })
}

/// Gamma at level `s` using whichever form fits the caps.
pub fn gamma(h: &Hypergraph, s: usize, caps: &Caps) -> Result<SubsetMinimum> {
    if h.num_edges() <= caps.gamma_items {
        gamma_subgraph(h, s, caps)
    } else {
        gamma_shadow(h, s, caps)
    }
}

fn check_n(h: &Hypergraph, n: usize) -> Result<()> {
    if n < h.n() {
        return Err(WsatError::arg(format!("n = {n} is below |V(H)| = {}", h.n())));
    }
    Ok(())
}

/// `gamma_{s,H} (C(n, s-1) - |shadow_{s-1}(H)|) + |E(H)| - 1` with `s = s(H)`.
pub fn lb_gamma(h: &Hypergraph, n: usize, caps: &Caps) -> Result<Rational> {
    check_n(h, n)?;
    let s = sparseness(h);
    if s < 2 {
        return Err(WsatError::pre(format!("lb_gamma needs s(H) >= 2, got {s}")));
    }
    let s = s as usize;
    let g = gamma(h, s, caps)?.value;
    let room = binom_usize(n, s - 1) as i64 - shadow(h, s - 1)?.len() as i64;
    Ok(g * rational::int(room) + rational::int(h.num_edges() as i64 - 1))
}

/// Count parameters behind [`lb_gamma`]: `a_{s-1} = gamma`,
/// `a_0 = |E(H)| - 1 - gamma |shadow_{s-1}(H)|`, so that `L_a(K_n^r)` is the bound.
pub fn gamma_count_params(h: &Hypergraph, caps: &Caps) -> Result<CountParams> {
    let s = sparseness(h);
    if s < 2 {
        return Err(WsatError::pre(format!("gamma parameters need s(H) >= 2, got {s}")));
    }
    let s = s as usize;
    let g = gamma(h, s, caps)?.value;
    let a0 = rational::int(h.num_edges() as i64 - 1) - &g * rational::int(shadow(h, s - 1)?.len() as i64);
    CountParams::single_level(h.r(), s - 1, g, a0)
}

/// `delta/r - 1/C(r+delta-1, r-1)`.
pub fn delta_star_coefficient(r: usize, delta: usize) -> Rational {
    rational::ratio(delta as i64, r as i64) - rational::ratio(1, binom_usize(r + delta - 1, r - 1) as i64)
}

/// `(delta/r - 1/C(r+delta-1, r-1)) C(n, r-1)` with `delta = delta*(H)`.
pub fn lb_delta_star(h: &Hypergraph, n: usize) -> Result<Rational> {
    check_n(h, n)?;
    if h.r() == 0 || h.is_empty() {
        return Err(WsatError::arg("lb_delta_star needs a non-empty pattern with r >= 1"));
    }
    let delta = delta_star(h)? as usize;
    Ok(delta_star_coefficient(h.r(), delta) * rational::from_u128(binom_usize(n, h.r() - 1)))
}

/// `(delta_m - 1) / C(r, m) * C(n, m)`.
pub fn lb_trivial(h: &Hypergraph, m: usize, n: usize) -> Result<Rational> {
    check_n(h, n)?;
    if m > h.r() {
        return Err(WsatError::arg(format!("m = {m} exceeds r = {}", h.r())));
    }
    let d = delta_m(h, m)?;
    if d < 1 {
        return Err(WsatError::pre("lb_trivial needs a non-empty pattern"));
    }
    Ok(rational::ratio(d - 1, binom_usize(h.r(), m) as i64) * rational::from_u128(binom_usize(n, m)))
}

/// The largest of the applicable lower bounds.
pub fn best_lower_bound(h: &Hypergraph, n: usize, caps: &Caps) -> Result<Rational> {
    check_n(h, n)?;
    let mut best = rational::int(0);
    if h.is_empty() {
        return Ok(best);
    }
    for m in 0..=h.r() {
        best = best.max(lb_trivial(h, m, n)?);
    }
    best = best.max(lb_delta_star(h, n)?);
    if sparseness(h) >= 2 {
        match lb_gamma(h, n, caps) {
            Ok(v) => best = best.max(v),
            Err(WsatError::CapExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Every applicable bound at `n`, for reporting.
pub fn all_bounds(h: &Hypergraph, n: usize, caps: &Caps) -> Result<Vec<BoundReport>> {
    check_n(h, n)?;
    let mut out = Vec::new();
    for m in 0..=h.r() {
        if let Ok(v) = lb_trivial(h, m, n) {
            out.push(BoundReport {
                name: format!("trivial_m{m}"),
                value: v,
                n: Some(n),
                formula: format!("(delta_{m} - 1) / C(r,{m}) * C(n,{m})"),
                witness: None,
            });
        }
    }
    if let Ok(v) = lb_delta_star(h, n) {
        out.push(BoundReport {
            name: "delta_star".into(),
            value: v,
            n: Some(n),
            formula: "(delta/r - 1/C(r+delta-1,r-1)) * C(n,r-1)".into(),
            witness: None,
        });
    }
    let s = sparseness(h);
    if s >= 2 {
        let s = s as usize;
        if let Ok(g) = gamma(h, s, caps) {
            out.push(BoundReport {
                name: format!("gamma_s{s}"),
                value: g.value.clone(),
                n: None,
                formula: "min (|E(H)|-|E(G)|-1) / (|shadow(H)|-|shadow(G)|)".into(),
                witness: Some(g.witness),
            });
            out.push(BoundReport {
                name: "lb_gamma".into(),
                value: lb_gamma(h, n, caps)?,
                n: Some(n),
                formula: "gamma * (C(n,s-1) - |shadow_{s-1}(H)|) + |E(H)| - 1".into(),
                witness: None,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaDeltaReport {
    pub delta: usize,
    #[serde(with = "crate::rational")]
    pub gamma: Rational,
    #[serde(with = "crate::rational")]
    pub rhs: Rational,
    pub holds: bool,
}

/// `gamma_{r,H} >= delta/r - 1/C(r+delta-1, r-1)` for `delta = delta*(H) >= 2`.
pub fn verify_gamma_delta_inequality(h: &Hypergraph, caps: &Caps) -> Result<GammaDeltaReport> {
    if h.r() < 2 {
        return Err(WsatError::arg("needs r >= 2"));
    }
    let delta = delta_star(h)?;
    if delta < 2 {
        return Err(WsatError::pre(format!("needs delta* >= 2, got {delta}")));
    }
    let delta = delta as usize;
    let g = gamma(h, h.r(), caps)?.value;
    let rhs = delta_star_coefficient(h.r(), delta);
    Ok(GammaDeltaReport {
        delta,
        holds: g >= rhs,
        gamma: g,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaStatus {
    /// `s(H) = r` (or a single edge): the value is `delta* - 1`.
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "upper bound, sequence nonincreasing")]
    UpperBoundNonincreasing,
    #[serde(rename = "value at largest n, sequence not monotone")]
    NotMonotone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaReport {
    pub value: usize,
    pub status: EtaStatus,
    pub sparseness: i64,
    /// `(n, wsat(n, link family))` for each computed `n`.
    pub sequence: Vec<(usize, usize)>,
    pub links: Vec<HypergraphJson>,
}

/// Distinct (up to isomorphism) compacted links of `(s-1)`-shadow sets.
pub fn link_family(h: &Hypergraph, s: usize) -> Result<Vec<Hypergraph>> {
    if s == 0 || s > h.r() {
        return Err(WsatError::arg(format!("link level s = {s} outside 1..={}", h.r())));
    }
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for u in shadow(h, s - 1)? {
        let l = link(h, &VertexSubset::from_mask(u))?.compact();
        let key = canonical_form(&l);
        if !seen.contains(&key) {
            seen.push(key);
            out.push(l);
        }
    }
    Ok(out)
}

/// `eta(H)`: `delta* - 1` when `s(H) = r`, otherwise `wsat(n, links)` at the
/// largest `n <= n_cap` within the exact-search caps.
pub fn eta(h: &Hypergraph, n_cap: usize, caps: &Caps) -> Result<EtaReport> {
    if h.is_empty() {
        return Err(WsatError::arg("eta needs a non-empty pattern"));
    }
    let s = sparseness(h);
    let r = h.r() as i64;
    if s == r || s == 0 {
        return Ok(EtaReport {
            value: delta_star(h)? as usize - 1,
            status: EtaStatus::Exact,
            sparseness: s,
            sequence: Vec::new(),
            links: Vec::new(),
        });
    }
    let links = link_family(h, s as usize)?;
    let fam = Family::new(links.clone())?;
    let lr = fam.r();
    let mut sequence = Vec::new();
    for n in fam.max_vertices().max(1)..=n_cap {
        if binom_usize(n, lr) > caps.wsat_edges as u128 {
            break;
        }
        sequence.push((n, wsat_exact(n, &fam, &WsatOptions::default(), caps)?.value));
    }
    let Some(&(_, value)) = sequence.last() else {
        return Err(WsatError::cap("eta link-family vertex count", fam.max_vertices() as u128, n_cap as u128));
    };
    let status = if sequence.windows(2).all(|w| w[1].1 <= w[0].1) {
        EtaStatus::UpperBoundNonincreasing
    } else {
        EtaStatus::NotMonotone
    };
    Ok(EtaReport {
        value,
        status,
        sparseness: s,
        sequence,
        links: links.iter().map(HypergraphJson::from).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaBounds {
    #[serde(with = "crate::rational")]
    pub lower: Rational,
    /// Without the lower-order term.
    #[serde(with = "crate::rational")]
    pub upper_leading: Rational,
    pub upper_label: String,
}

/// `eta/C(r,s-1) C(n,s-1)` and the leading term `eta C(n,s-1)`.
pub fn eta_bounds(h: &Hypergraph, n: usize, eta: usize) -> Result<EtaBounds> {
    check_n(h, n)?;
    let s = sparseness(h);
    if s < 2 {
        return Err(WsatError::pre(format!("eta_bounds needs s(H) >= 2, got {s}")));
    }
    let s = s as usize;
    let c = binom_usize(n, s - 1);
    Ok(EtaBounds {
        lower: rational::ratio(eta as i64, binom_usize(h.r(), s - 1) as i64) * rational::from_u128(c),
        upper_leading: rational::from_u128(eta as u128 * c),
        upper_label: "leading term only".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub delta: usize,
    #[serde(with = "crate::rational")]
    pub rhs: Rational,
    pub qualifying: usize,
    pub violations: Vec<HypergraphJson>,
    #[serde(with = "crate::rational::option")]
    pub min_slack: Option<Rational>,
    pub min_slack_witness: Option<HypergraphJson>,
}

/// Compares `gamma_{s,H}` with `delta/C(r,s-1) - 1/C(k,s-1)` over corpus
/// members with `s(H) = s` and `delta_{s-1}(H) = C(k-s+1, r-s+1)`.
pub fn conjecture_probe(r: usize, s: usize, k: usize, corpus: &[Hypergraph], caps: &Caps) -> Result<ConjectureReport> {
    if s < 2 || s > r || k < r {
        return Err(WsatError::arg("conjecture_probe needs 2 <= s <= r <= k"));
    }
    let delta = binom_usize(k - s + 1, r - s + 1) as usize;
    let rhs = rational::ratio(delta as i64, binom_usize(r, s - 1) as i64)
        - rational::ratio(1, binom_usize(k, s - 1) as i64);
    let mut rep = ConjectureReport {
        r,
        s,
        k,
        delta,
        rhs: rhs.clone(),
        qualifying: 0,
        violations: Vec::new(),
        min_slack: None,
        min_slack_witness: None,
    };
    for h in corpus {
        if h.r() != r || sparseness(h) != s as i64 || delta_m(h, s - 1)? != delta as i64 {
            continue;
        }
        rep.qualifying += 1;
        let g = gamma_shadow(h, s, caps)?.value;
        let slack = g - &rhs;
        if slack < rational::int(0) {
            rep.violations.push(HypergraphJson::from(h));
        }
        if rep.min_slack.as_ref().map_or(true, |m| slack < *m) {
            rep.min_slack = Some(slack);
            rep.min_slack_witness = Some(HypergraphJson::from(h));
        }
    }
    Ok(rep)
}
