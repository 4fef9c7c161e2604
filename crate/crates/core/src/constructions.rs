//! Extremal patterns and explicit weakly saturated hosts: cliques, greedy
//! covers, the staged pattern built from a base hypergraph `G` and a vertex
//! set `P`, and the shell host.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::combinatorics::{bits, binom_usize, k_subsets};
use crate::error::{Result, WsatError};
use crate::hypergraph::{delta_m, disjoint_union, full_mask, mask_of, shadow, sort_lex, sparseness, sub_masks, vertices_of, Hypergraph};
use crate::rational::{self, Rational};
use crate::wsat::Family;

pub fn clique(n: usize, r: usize) -> Hypergraph {
    Hypergraph::complete(n, r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDesign {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl CoverDesign {
    /// Every `t`-subset of `[n]` lies in some block.
    pub fn validate(&self) -> Result<()> {
        let blocks: Vec<u64> = self.blocks.iter().map(|b| mask_of(b)).collect();
        if let Some(b) = self.blocks.iter().find(|b| b.len() != self.k || b.iter().any(|&v| v >= self.n)) {
            return Err(WsatError::pre(format!("block {b:?} is not a {}-subset of [{}]", self.k, self.n)));
        }
        match k_subsets(self.n, self.t).find(|&a| !blocks.iter().any(|&b| b & a == a)) {
            Some(a) => Err(WsatError::pre(format!("{:?} is not covered", vertices_of(a)))),
            None => Ok(()),
        }
    }

    /// `|blocks| / (C(n,t) / C(k,t))`.
    pub fn ratio(&self) -> f64 {
        self.blocks.len() as f64 * binom_usize(self.k, self.t) as f64 / binom_usize(self.n, self.t) as f64
    }
}

/// Repeatedly takes the block covering the most uncovered `t`-sets,
/// the lexicographically least on ties.
pub fn greedy_cover(n: usize, k: usize, t: usize, caps: &Caps) -> Result<CoverDesign> {
    if t > k || k > n || n > 64 {
        return Err(WsatError::arg(format!("greedy_cover needs t <= k <= n <= 64, got t={t} k={k} n={n}")));
    }
    caps.check("cover candidate blocks", binom_usize(n, k), caps.enumeration)?;
    let mut candidates: Vec<u64> = k_subsets(n, k).collect();
    sort_lex(&mut candidates);
    let mut uncovered: HashSet<u64> = k_subsets(n, t).collect();
    let mut blocks = Vec::new();
    while !uncovered.is_empty() {
        let mut best = (0usize, 0u64);
        for &b in &candidates {
            let gain = sub_masks(b, t).filter(|a| uncovered.contains(a)).count();
            if gain > best.0 {
                best = (gain, b);
            }
        }
        for a in sub_masks(best.1, t) {
            uncovered.remove(&a);
        }
        blocks.push(vertices_of(best.1));
    }
    let cover = CoverDesign { n, k, t, blocks };
    cover.validate()?;
    Ok(cover)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub s: usize,
    pub delta: usize,
    pub g_tilde_edges: usize,
    pub p_size: usize,
    /// `(|G~| - 1) / C(|P|, s-1)`.
    #[serde(with = "crate::rational")]
    pub coefficient: Rational,
    pub h0_vertices: usize,
    pub stages: usize,
    /// `s` and `delta_{s-1}` of `G ⊔ H_0 ⊔ ... ⊔ H_m`, from the parts.
    pub union_sparseness: usize,
    pub union_delta: usize,
    /// Whether the union was also materialized and measured directly.
    pub union_materialized: bool,
}

/// The staged pattern: `G`, `H_0` on `V(G) ∪ W`, and `H_i` adding the
/// missing edges of `H_0` one at a time in lex order.
#[derive(Debug, Clone)]
pub struct Construction {
    pub g: Hypergraph,
    pub p: Vec<usize>,
    pub g_tilde: Vec<u64>,
    /// Lex-least edge of `G~`.
    pub e_tilde: u64,
    pub h0: Hypergraph,
    pub stages: Vec<Hypergraph>,
    pub meta: ConstructionMeta,
}

impl Construction {
    /// `{G, H_0, ..., H_m}`.
    pub fn family(&self) -> Result<Family> {
        let mut parts = vec![self.g.clone()];
        parts.extend(self.stages.iter().cloned());
        Family::new(parts)
    }
}

/// Checks the preconditions on `(G, P)` and returns `(s, delta, G~)`.
fn check_base(g: &Hypergraph, p: &[usize]) -> Result<(usize, usize, Vec<u64>)> {
    let s = sparseness(g);
    if s < 2 {
        return Err(WsatError::pre(format!("G needs sparseness >= 2, got {s}")));
    }
    let s = s as usize;
    let delta = delta_m(g, s - 1)?;
    if delta < 2 {
        return Err(WsatError::pre(format!("G needs delta_(s-1) >= 2, got {delta}")));
    }
    if p.len() < s - 1 || p.windows(2).any(|w| w[0] >= w[1]) || p.iter().any(|&v| v >= g.n()) {
        return Err(WsatError::arg("P must be an ascending subset of V(G) with at least s-1 vertices"));
    }
    let pm = mask_of(p);
    let sh: HashSet<u64> = shadow(g, s - 1)?.into_iter().collect();
    if let Some(missing) = sub_masks(pm, s - 1).find(|u| !sh.contains(u)) {
        return Err(WsatError::pre(format!(
            "the (s-1)-set {:?} inside P is not in the shadow of G",
            vertices_of(missing)
        )));
    }
    let g_tilde: Vec<u64> = g
        .edges()
        .iter()
        .copied()
        .filter(|&e| (e & pm).count_ones() as usize >= s - 1)
        .collect();
    Ok((s, delta as usize, g_tilde))
}

/// `(|G~| - 1) / C(|P|, s-1)` without building the stages.
pub fn construction_coefficient(g: &Hypergraph, p: &[usize]) -> Result<Rational> {
    let (s, _, g_tilde) = check_base(g, p)?;
    Ok(rational::ratio(g_tilde.len() as i64 - 1, binom_usize(p.len(), s - 1) as i64))
}

pub fn build_construction_h(g: &Hypergraph, p: &[usize], caps: &Caps) -> Result<Construction> {
    let (s, delta, g_tilde) = check_base(g, p)?;
    let nv = 2 * g.n();
    caps.check("construction vertices |V(H_0)|", nv as u128, caps.construction_vertices as u128)?;
    let pm = mask_of(p);
    let r = g.r();
    let thin: Vec<u64> = k_subsets(nv, r)
        .filter(|&e| ((e & pm).count_ones() as usize) < s - 1)
        .collect();
    let mut h0_edges = g_tilde.clone();
    h0_edges.extend(thin);
    let h0 = Hypergraph::from_masks(nv, r, h0_edges)?;
    let mut stages = vec![h0.clone()];
    let mut cur = h0.clone();
    for &e in h0.complement().edges() {
        cur = cur.with_edges(&[e])?;
        stages.push(cur.clone());
    }
    let mut parts = vec![g.clone()];
    parts.extend(stages.iter().cloned());
    // delta_m of a disjoint union is the least delta_m of a part for m >= 1
    let level = |m: usize| -> Result<i64> {
        let mut best = i64::MAX;
        for part in &parts {
            best = best.min(delta_m(part, m)?);
        }
        Ok(best)
    };
    let union_sparseness = (1..=r)
        .map(|m| level(m).map(|d| (m, d)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|&(_, d)| d == 1)
        .map(|(m, _)| m)
        .expect("delta_r is 1");
    let union_delta = level(s - 1)? as usize;
    let total_vertices: usize = parts.iter().map(|h| h.n()).sum();
    let union_materialized = total_vertices <= 64;
    if union_materialized {
        let u = disjoint_union(&parts)?;
        if sparseness(&u) as usize != union_sparseness || delta_m(&u, s - 1)? as usize != union_delta {
            return Err(WsatError::pre("internal: partwise invariants disagree with the union"));
        }
    }
    if union_sparseness != s || union_delta != delta {
        return Err(WsatError::pre(format!(
            "constructed pattern has s = {union_sparseness}, delta = {union_delta}; expected {s}, {delta}"
        )));
    }
    let mut sorted_tilde = g_tilde.clone();
    sort_lex(&mut sorted_tilde);
    let meta = ConstructionMeta {
        s,
        delta,
        g_tilde_edges: g_tilde.len(),
        p_size: p.len(),
        coefficient: rational::ratio(g_tilde.len() as i64 - 1, binom_usize(p.len(), s - 1) as i64),
        h0_vertices: nv,
        stages: stages.len(),
        union_sparseness,
        union_delta,
        union_materialized,
    };
    Ok(Construction {
        g: g.clone(),
        p: p.to_vec(),
        e_tilde: sorted_tilde[0],
        g_tilde: sorted_tilde,
        h0,
        stages,
        meta,
    })
}

#[derive(Debug, Clone)]
pub struct CorollaryInstance {
    pub g: Hypergraph,
    pub p: Vec<usize>,
    pub delta: usize,
}

/// `K^r_{r+delta-1}` with `P = V(G)`.
pub fn corollary_s_r_g(r: usize, delta: usize) -> Result<CorollaryInstance> {
    if r < 2 || delta < 2 {
        return Err(WsatError::arg("needs r >= 2 and delta >= 2"));
    }
    let n = r + delta - 1;
    Ok(CorollaryInstance {
        g: clique(n, r),
        p: (0..n).collect(),
        delta,
    })
}

/// `G` on `A ∪ B ∪ C` with `|A| = |C| = k`, `|B| = s`, `W` the first
/// `r - s` vertices of `C`, and `P = A`.
pub fn corollary_s_arbitrary_g(r: usize, s: usize, k: usize) -> Result<CorollaryInstance> {
    if s < 2 || r < s || k < r + 1 {
        return Err(WsatError::arg(format!("needs r >= s >= 2 and k >= r + 1, got r={r} s={s} k={k}")));
    }
    let n = 2 * k + s;
    if n > 64 {
        return Err(WsatError::cap("vertex count", n as u128, 64));
    }
    let a = full_mask(k);
    let b = full_mask(s) << k;
    let c_start = k + s;
    let w = full_mask(r - s) << c_start;
    let mut edges: Vec<u64> = k_subsets(n, r)
        .filter(|&e| {
            e & a == e
                || e == b | w
                || ((e & a).count_ones() as usize <= s - 2 && (e & b).count_ones() as usize <= s - 1)
        })
        .collect();
    sort_lex(&mut edges);
    let g = Hypergraph::from_masks(n, r, edges)?;
    let delta = binom_usize(k - s + 1, r - s + 1) as usize;
    let got_s = sparseness(&g);
    let got_delta = delta_m(&g, s - 1)?;
    let full_shadow = shadow(&g, s - 1)?.len() as u128 == binom_usize(n, s - 1);
    if got_s != s as i64 || got_delta != delta as i64 || !full_shadow {
        return Err(WsatError::pre(format!(
            "built G has s = {got_s}, delta = {got_delta}, complete shadow = {full_shadow}"
        )));
    }
    Ok(CorollaryInstance {
        g,
        p: (0..k).collect(),
        delta,
    })
}

#[derive(Debug, Clone)]
pub struct SaturatedHost {
    pub host: Hypergraph,
    pub z: Vec<usize>,
    pub cover: CoverDesign,
    pub coefficient: Rational,
    /// `coefficient * C(n, s-1)`.
    pub leading_term: Rational,
}

/// The host `F`: every edge with `|e \ Z| <= s-2` plus a copy of
/// `H_0 - e~` on `X ∪ Z` for each cover block `X`, `P` mapped onto `X`.
pub fn build_saturated_host(c: &Construction, n: usize, caps: &Caps) -> Result<SaturatedHost> {
    let nv = c.h0.n();
    if n < nv || n > 64 {
        return Err(WsatError::arg(format!("n = {n} must lie in {nv}..=64")));
    }
    let s = c.meta.s;
    let r = c.g.r();
    let zn = nv - c.p.len();
    let zm = full_mask(zn);
    let cover = greedy_cover(n - zn, c.p.len(), s - 1, caps)?;
    let mut edges: HashSet<u64> = k_subsets(n, r)
        .filter(|&e| ((e & !zm).count_ones() as usize) <= s - 2)
        .collect();
    let pm = mask_of(&c.p);
    let rest: Vec<usize> = (0..nv).filter(|&v| pm >> v & 1 == 0).collect();
    let mut image = vec![0usize; nv];
    for (i, &v) in rest.iter().enumerate() {
        image[v] = i;
    }
    for block in &cover.blocks {
        for (&v, &x) in c.p.iter().zip(block) {
            image[v] = x + zn;
        }
        for &e in c.h0.edges() {
            if e != c.e_tilde {
                edges.insert(bits(e).fold(0u64, |m, v| m | 1u64 << image[v]));
            }
        }
    }
    let host = Hypergraph::from_masks(n, r, edges.into_iter().collect())?;
    Ok(SaturatedHost {
        host,
        z: (0..zn).collect(),
        cover,
        coefficient: c.meta.coefficient.clone(),
        leading_term: c.meta.coefficient.clone() * rational::from_u128(binom_usize(n, s - 1)),
    })
}

/// `base ∪ {e : |e \ Z| <= s(H) - 1}` with `Z` the first `z_size` vertices.
pub fn shell_host(n: usize, pattern: &Hypergraph, z_size: usize, base: &Hypergraph) -> Result<Hypergraph> {
    let s = sparseness(pattern);
    if s < 1 {
        return Err(WsatError::pre("shell needs a pattern with s(H) >= 1"));
    }
    let s = s as usize;
    if z_size + s < pattern.n() {
        return Err(WsatError::pre(format!(
            "|Z| = {z_size} is below |V(H)| - s = {}",
            pattern.n() - s
        )));
    }
    if z_size > n || base.n() != n || base.r() != pattern.r() {
        return Err(WsatError::arg("shell host dimensions do not match"));
    }
    let zm = full_mask(z_size);
    let extra: Vec<u64> = k_subsets(n, pattern.r())
        .filter(|&e| ((e & !zm).count_ones() as usize) < s)
        .collect();
    base.with_edges(&extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::delta_star_coefficient;
    use crate::rational::ratio;
    use crate::wsat::closure;

    #[test]
    fn cliques() {
        assert_eq!(clique(4, 2).num_edges(), 6);
        assert_eq!(clique(5, 3).num_edges(), 10);
        assert_eq!(clique(3, 3).num_edges(), 1);
    }

    #[test]
    fn covers() {
        let caps = Caps::default();
        let c = greedy_cover(6, 3, 2, &caps).unwrap();
        assert!(c.blocks.len() >= 5);
        let c = greedy_cover(5, 2, 2, &caps).unwrap();
        assert_eq!(c.blocks.len(), 10);
        let c = greedy_cover(7, 3, 2, &caps).unwrap();
        c.validate().unwrap();
        assert!(c.ratio() >= 1.0);
        let bad = CoverDesign { n: 4, k: 2, t: 2, blocks: vec![vec![0, 1]] };
        assert!(bad.validate().is_err());
        for n in 1..9 {
            for k in 0..=n {
                for t in 0..=k {
                    greedy_cover(n, k, t, &caps).unwrap();
                }
            }
        }
    }

    #[test]
    fn clique_constructions() {
        let caps = Caps::default();
        for (delta, coef) in [(2usize, ratio(2, 3)), (3, ratio(5, 4))] {
            let inst = corollary_s_r_g(2, delta).unwrap();
            let c = build_construction_h(&inst.g, &inst.p, &caps).unwrap();
            assert_eq!(c.meta.coefficient, coef);
            assert_eq!(c.meta.coefficient, delta_star_coefficient(2, delta));
            assert_eq!((c.meta.s, c.meta.delta), (2, delta));
            assert_eq!(c.stages.last().unwrap(), &clique(2 * inst.g.n(), 2));
        }
        let k3 = corollary_s_r_g(2, 2).unwrap();
        assert!(build_construction_h(&k3.g, &k3.p, &caps).unwrap().meta.union_materialized);
    }

    #[test]
    fn shadow_condition_failure_names_the_set() {
        let caps = Caps::default();
        // K_4 plus a pendant vertex 4 that lies in no edge
        let g = clique(4, 2).with_n(5).unwrap();
        match build_construction_h(&g, &[0, 4], &caps) {
            Err(WsatError::Precondition(msg)) => assert!(msg.contains("[4]"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arbitrary_sparseness_instances() {
        let inst = corollary_s_arbitrary_g(3, 2, 4).unwrap();
        assert_eq!(inst.delta, 3);
        let inst2 = corollary_s_arbitrary_g(2, 2, 3).unwrap();
        assert_eq!(inst2.delta, 2);
        assert!(corollary_s_arbitrary_g(2, 3, 5).is_err());
        for (r, s, k) in [(3, 2, 4), (3, 2, 5), (3, 3, 4), (4, 2, 5), (4, 3, 5), (2, 2, 4)] {
            let inst = corollary_s_arbitrary_g(r, s, k).unwrap();
            let coef = construction_coefficient(&inst.g, &inst.p).unwrap();
            let target = ratio(inst.delta as i64, binom_usize(r, s - 1) as i64) - ratio(1, binom_usize(k, s - 1) as i64);
            assert_eq!(coef, target, "r={r} s={s} k={k}");
        }
        let caps = Caps::default();
        assert!(matches!(
            build_construction_h(&inst.g, &inst.p, &caps),
            Err(WsatError::CapExceeded { .. })
        ));
    }

    #[test]
    fn hosts_close_and_match_counts() {
        let caps = Caps::default();
        for (delta, n, expect) in [(2usize, 8usize, 7usize), (3, 8, 11)] {
            let inst = corollary_s_r_g(2, delta).unwrap();
            let c = build_construction_h(&inst.g, &inst.p, &caps).unwrap();
            let fam = c.family().unwrap();
            let h = build_saturated_host(&c, n, &caps).unwrap();
            assert_eq!(h.host.num_edges(), expect);
            let res = closure::closure(&h.host, &fam, &caps).unwrap();
            assert!(res.is_complete(), "delta={delta} n={n}");
            res.certificate.validate_saturating(&fam).unwrap();
        }
        let k3 = build_construction_h(&clique(3, 2), &[0, 1, 2], &caps).unwrap();
        assert_eq!(build_saturated_host(&k3, 12, &caps).unwrap().host.num_edges(), 9);
        let k4 = build_construction_h(&clique(4, 2), &[0, 1, 2, 3], &caps).unwrap();
        assert_eq!(build_saturated_host(&k4, 12, &caps).unwrap().host.num_edges(), 16);
        assert!(build_saturated_host(&k4, 7, &caps).is_err());
    }

    #[test]
    fn host_excess_over_leading_term_stays_bounded() {
        let caps = Caps::default();
        for g in [clique(3, 2), clique(4, 2)] {
            let p: Vec<usize> = (0..g.n()).collect();
            let c = build_construction_h(&g, &p, &caps).unwrap();
            let fam = c.family().unwrap();
            let mut worst = rational::int(i64::MIN / 2);
            for n in c.h0.n()..=16 {
                let h = build_saturated_host(&c, n, &caps).unwrap();
                if n <= 10 {
                    assert!(closure::is_weakly_saturated(&h.host, &fam, &caps).unwrap());
                }
                let excess = rational::int(h.host.num_edges() as i64) - &h.leading_term;
                worst = worst.max(excess);
            }
            // s = 2: the edges inside Z plus one block of rounding stay below |E(H_0)|
            assert!(worst <= rational::int(c.h0.num_edges() as i64), "{worst}");
        }
    }

    #[test]
    fn shell_hosts() {
        let k3 = clique(3, 2);
        let f = shell_host(6, &k3, 3, &Hypergraph::empty(6, 2)).unwrap();
        let z = full_mask(3);
        assert!(f.edges().iter().all(|&e| e & z != 0));
        assert_eq!(f.num_edges(), 15 - 3);
        let caps = Caps::default();
        let fam = Family::single(&k3).unwrap();
        for n in 3..=8 {
            let f = shell_host(n, &k3, 1, &Hypergraph::empty(n, 2)).unwrap();
            assert!(closure::is_weakly_saturated(&f, &fam, &caps).unwrap());
        }
        assert!(shell_host(6, &clique(4, 2), 1, &Hypergraph::empty(6, 2)).is_err());
        let k4_3 = clique(4, 3);
        let f = shell_host(7, &k4_3, 1, &Hypergraph::empty(7, 3)).unwrap();
        assert!(closure::is_weakly_saturated(&f, &Family::single(&k4_3).unwrap(), &caps).unwrap());
    }
}
