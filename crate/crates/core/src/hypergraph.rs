//! Uniform hypergraphs on `[n]` stored as sorted vertex bit masks.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom_usize, bits, cmp_lex_masks, k_subsets};
use crate::error::{Result, WsatError};

/// Largest supported vertex count; vertex subsets are single `u64` words.
pub const MAX_VERTICES: usize = 64;

pub fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

pub fn vertices_of(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

pub fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Sorts equal-size masks lexicographically by their sorted vertex lists.
pub fn sort_lex(masks: &mut [u64]) {
    masks.sort_unstable_by(|a, b| cmp_lex_masks(*a, *b));
}

/// All `m`-subsets of the bits of `edge`.
pub fn sub_masks(edge: u64, m: usize) -> impl Iterator<Item = u64> {
    let positions: Vec<u64> = bits(edge).map(|v| 1u64 << v).collect();
    let width = positions.len();
    k_subsets(width, m).map(move |sel| bits(sel).fold(0u64, |acc, i| acc | positions[i]))
}

/// Sorted list of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSubset {
    pub members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(WsatError::arg("vertex subset has repeated vertices"));
        }
        if members.iter().any(|&v| v >= MAX_VERTICES) {
            return Err(WsatError::arg("vertex index exceeds 63"));
        }
        Ok(VertexSubset { members })
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSubset {
            members: vertices_of(mask),
        }
    }

    pub fn mask(&self) -> u64 {
        mask_of(&self.members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// An `r`-uniform hypergraph on the vertex set `{0, .., n-1}`.
///
/// Edges are kept sorted lexicographically and deduplicated, so two
/// hypergraphs with the same edges compare and serialize identically.
/// The label is informational and ignored by equality.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<u64>,
    label: Option<String>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl std::hash::Hash for Hypergraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.r.hash(state);
        self.edges.hash(state);
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, r={}, edges=[", self.n, self.r)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            for v in bits(*e) {
                write!(f, "{v},")?;
            }
        }
        write!(f, "])")
    }
}

impl Hypergraph {
    /// Builds from vertex lists in any order; duplicates are merged.
    pub fn new(n: usize, r: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut masks = Vec::new();
        for edge in edges {
            let mut sorted = edge.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != edge.len() {
                return Err(WsatError::arg(format!("edge {edge:?} repeats a vertex")));
            }
            if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
                return Err(WsatError::arg(format!("vertex {v} out of range for n={n}")));
            }
            if sorted.len() != r {
                return Err(WsatError::arg(format!("edge {edge:?} does not have {r} vertices")));
            }
            masks.push(mask_of(&sorted));
        }
        Self::from_masks(n, r, masks)
    }

    /// Builds from vertex masks in any order; duplicates are merged.
    pub fn from_masks(n: usize, r: usize, mut masks: Vec<u64>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(WsatError::cap("vertex count", n as u128, MAX_VERTICES as u128));
        }
        if r > n && !masks.is_empty() {
            return Err(WsatError::arg(format!("uniformity {r} exceeds n={n}")));
        }
        let outside = !full_mask(n);
        for &m in &masks {
            if m.count_ones() as usize != r || m & outside != 0 {
                return Err(WsatError::arg(format!(
                    "edge {:?} is not an {r}-subset of [{n}]",
                    vertices_of(m)
                )));
            }
        }
        sort_lex(&mut masks);
        masks.dedup();
        Ok(Hypergraph {
            n,
            r,
            edges: masks,
            label: None,
        })
    }

    pub fn empty(n: usize, r: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        Hypergraph {
            n,
            r,
            edges: Vec::new(),
            label: None,
        }
    }

    /// `K_n^r`.
    pub fn complete(n: usize, r: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        let mut masks: Vec<u64> = if r <= n { k_subsets(n, r).collect() } else { Vec::new() };
        sort_lex(&mut masks);
        Hypergraph {
            n,
            r,
            edges: masks,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Edge masks in lexicographic order.
    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|&e| vertices_of(e)).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, edge: u64) -> bool {
        self.edges
            .binary_search_by(|probe| cmp_lex_masks(*probe, edge))
            .is_ok()
    }

    /// Union of all edges.
    pub fn support(&self) -> u64 {
        self.edges.iter().fold(0, |acc, e| acc | e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&e| e >> v & 1 == 1).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &e in &self.edges {
            for v in bits(e) {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        let support = self.support();
        (0..self.n).filter(|&v| support >> v & 1 == 0).collect()
    }

    /// Same edges on a larger vertex set.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        if n < self.n && self.support() & !full_mask(n) != 0 {
            return Err(WsatError::arg("edges use vertices beyond the new n"));
        }
        Hypergraph::from_masks(n, self.r, self.edges.clone())
    }

    /// Relabels the support onto `{0, .., |support|-1}` preserving order.
    pub fn compact(&self) -> Self {
        let support: Vec<usize> = vertices_of(self.support());
        let mut index = [usize::MAX; 64];
        for (i, &v) in support.iter().enumerate() {
            index[v] = i;
        }
        let masks = self
            .edges
            .iter()
            .map(|&e| bits(e).fold(0u64, |m, v| m | 1u64 << index[v]))
            .collect();
        let mut out = Hypergraph::from_masks(support.len(), self.r, masks).expect("relabel");
        out.label = self.label.clone();
        out
    }

    /// Image under a vertex map `perm[old] = new` into `[n]`.
    pub fn relabel(&self, perm: &[usize], n: usize) -> Result<Self> {
        if perm.len() < self.n {
            return Err(WsatError::arg("relabel map shorter than vertex count"));
        }
        let masks = self
            .edges
            .iter()
            .map(|&e| bits(e).fold(0u64, |m, v| m | 1u64 << perm[v]))
            .collect();
        Hypergraph::from_masks(n, self.r, masks)
    }

    /// Adds edges, returning a new hypergraph.
    pub fn with_edges(&self, extra: &[u64]) -> Result<Self> {
        let mut masks = self.edges.clone();
        masks.extend_from_slice(extra);
        Hypergraph::from_masks(self.n, self.r, masks)
    }

    pub fn without_edge(&self, edge: u64) -> Self {
        Hypergraph {
            n: self.n,
            r: self.r,
            edges: self.edges.iter().copied().filter(|&e| e != edge).collect(),
            label: None,
        }
    }

    pub fn edge_subset(&self, selection: u64) -> Self {
        Hypergraph {
            n: self.n,
            r: self.r,
            edges: bits(selection).map(|i| self.edges[i]).collect(),
            label: None,
        }
    }

    /// Edges of `K_n^r` missing from this hypergraph, in lexicographic order.
    pub fn complement(&self) -> Self {
        let edges = Hypergraph::complete(self.n, self.r)
            .edges
            .into_iter()
            .filter(|&e| !self.contains_edge(e))
            .collect();
        Hypergraph {
            n: self.n,
            r: self.r,
            edges,
            label: None,
        }
    }
}

/// `m`-subsets contained in at least one edge, in lexicographic order.
pub fn shadow(g: &Hypergraph, m: usize) -> Result<Vec<u64>> {
    if m > g.r {
        return Err(WsatError::arg(format!("shadow level {m} exceeds r={}", g.r)));
    }
    let mut out: Vec<u64> = if m == g.r {
        g.edges.clone()
    } else {
        let mut all: Vec<u64> = g.edges.iter().flat_map(|&e| sub_masks(e, m)).collect();
        all.sort_unstable();
        all.dedup();
        all
    };
    sort_lex(&mut out);
    Ok(out)
}

pub fn shadow_size(g: &Hypergraph, m: usize) -> Result<usize> {
    Ok(shadow(g, m)?.len())
}

/// Link of `u`: the residues `e \ u` over edges containing `u`.
pub fn link(g: &Hypergraph, u: &VertexSubset) -> Result<Hypergraph> {
    let um = u.mask();
    if u.len() > g.r {
        return Err(WsatError::arg(format!(
            "link set of size {} exceeds r={}",
            u.len(),
            g.r
        )));
    }
    if um & !full_mask(g.n) != 0 {
        return Err(WsatError::arg("link set has vertices outside [n]"));
    }
    let masks = g.edges.iter().filter(|&&e| e & um == um).map(|&e| e & !um).collect();
    Hypergraph::from_masks(g.n, g.r - u.len(), masks)
}

/// Number of edges containing the vertex set `u`.
pub fn link_size(g: &Hypergraph, u: u64) -> usize {
    g.edges.iter().filter(|&&e| e & u == u).count()
}

/// Link sizes of every `m`-subset in the shadow.
pub fn codegrees(g: &Hypergraph, m: usize) -> Result<HashMap<u64, usize>> {
    if m > g.r {
        return Err(WsatError::arg(format!("codegree level {m} exceeds r={}", g.r)));
    }
    let mut counts = HashMap::new();
    for &e in &g.edges {
        for u in sub_masks(e, m) {
            *counts.entry(u).or_insert(0usize) += 1;
        }
    }
    Ok(counts)
}

/// Minimum nonzero link size over `m`-subsets; `-1` for the empty hypergraph.
pub fn delta_m(h: &Hypergraph, m: usize) -> Result<i64> {
    if m > h.r {
        return Err(WsatError::arg(format!("level {m} exceeds r={}", h.r)));
    }
    if h.is_empty() {
        return Ok(-1);
    }
    let counts = codegrees(h, m)?;
    Ok(*counts.values().min().expect("non-empty") as i64)
}

/// Minimum positive codegree; `0` for the empty hypergraph.
pub fn delta_star(h: &Hypergraph) -> Result<i64> {
    if h.r == 0 {
        return Err(WsatError::arg("codegree needs r >= 1"));
    }
    if h.is_empty() {
        return Ok(0);
    }
    delta_m(h, h.r - 1)
}

/// Least `m` with `delta_m = 1`; `-1` for the empty hypergraph.
pub fn sparseness(h: &Hypergraph) -> i64 {
    if h.is_empty() {
        return -1;
    }
    (0..=h.r)
        .find(|&m| delta_m(h, m).expect("level in range") == 1)
        .expect("delta_r is 1 for a non-empty hypergraph") as i64
}

/// `delta * |shadow_{r-1}(G)| - r * |E(G)|`, computed two ways.
pub fn f_r_delta(g: &Hypergraph, delta: i64) -> Result<i64> {
    if delta < 1 {
        return Err(WsatError::arg("delta must be at least 1"));
    }
    if g.r == 0 {
        return Err(WsatError::arg("f_r_delta needs r >= 1"));
    }
    let codeg = codegrees(g, g.r - 1)?;
    let closed = delta * codeg.len() as i64 - (g.r * g.num_edges()) as i64;
    let summed: i64 = codeg.values().map(|&c| delta - c as i64).sum();
    assert_eq!(closed, summed, "the two forms of f_r_delta disagree");
    Ok(closed)
}

/// Vertex-disjoint union, part `i` occupying the next `parts[i].n()` labels.
pub fn disjoint_union(parts: &[Hypergraph]) -> Result<Hypergraph> {
    let first = parts
        .first()
        .ok_or_else(|| WsatError::arg("disjoint union of no parts"))?;
    if parts.iter().any(|p| p.r != first.r) {
        return Err(WsatError::arg("disjoint union of mixed uniformities"));
    }
    let total: usize = parts.iter().map(|p| p.n).sum();
    if total > MAX_VERTICES {
        return Err(WsatError::cap("disjoint union vertex count", total as u128, 64));
    }
    let mut masks = Vec::new();
    let mut offset = 0;
    for p in parts {
        masks.extend(p.edges.iter().map(|&e| e << offset));
        offset += p.n;
    }
    Hypergraph::from_masks(total, first.r, masks)
}

/// A subset of `K_n^r` edges with multiplicities in `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiEdgeSet {
    base_n: usize,
    base_r: usize,
    q: u32,
    entries: Vec<(u64, u32)>,
}

impl MultiEdgeSet {
    pub fn new(base_n: usize, base_r: usize, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(WsatError::arg("multiplicity cap q must be positive"));
        }
        if base_n > MAX_VERTICES {
            return Err(WsatError::cap("vertex count", base_n as u128, 64));
        }
        Ok(MultiEdgeSet {
            base_n,
            base_r,
            q,
            entries: Vec::new(),
        })
    }

    /// `G^{(q)}`: every edge of `g` with multiplicity `q`.
    pub fn multiplied(g: &Hypergraph, q: u32) -> Result<Self> {
        let mut set = MultiEdgeSet::new(g.n, g.r, q)?;
        set.entries = g.edges.iter().map(|&e| (e, q)).collect();
        Ok(set)
    }

    /// Sets the multiplicity of `edge`; zero removes it.
    pub fn set(&mut self, edge: u64, mult: u32) -> Result<()> {
        if mult > self.q {
            return Err(WsatError::arg(format!("multiplicity {mult} exceeds q={}", self.q)));
        }
        if edge.count_ones() as usize != self.base_r || edge & !full_mask(self.base_n) != 0 {
            return Err(WsatError::arg("edge is not an r-subset of [n]"));
        }
        match self
            .entries
            .binary_search_by(|(e, _)| cmp_lex_masks(*e, edge))
        {
            Ok(i) if mult == 0 => {
                self.entries.remove(i);
            }
            Ok(i) => self.entries[i].1 = mult,
            Err(_) if mult == 0 => {}
            Err(i) => self.entries.insert(i, (edge, mult)),
        }
        Ok(())
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn base_r(&self) -> usize {
        self.base_r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    /// Total number of elements counted with multiplicity.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m as usize).sum()
    }

    /// The underlying hypergraph `pi`.
    pub fn projection(&self) -> Hypergraph {
        Hypergraph {
            n: self.base_n,
            r: self.base_r,
            edges: self.entries.iter().map(|&(e, _)| e).collect(),
            label: None,
        }
    }
}

/// Number of edges of `K_n^r`.
pub fn complete_edge_count(n: usize, r: usize) -> u128 {
    binom_usize(n, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[[usize; 2]]) -> Hypergraph {
        Hypergraph::new(n, 2, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    fn single(r: usize) -> Hypergraph {
        Hypergraph::new(r, r, vec![(0..r).collect()]).unwrap()
    }

    /// Literal shadow: every m-subset of [n] contained in some edge.
    fn shadow_oracle(g: &Hypergraph, m: usize) -> Vec<u64> {
        let mut out: Vec<u64> = k_subsets(g.n(), m)
            .filter(|&u| g.edges().iter().any(|&e| e & u == u))
            .collect();
        sort_lex(&mut out);
        out
    }

    /// Least |S| over all S subsets of V(H) lying in exactly one edge.
    fn sparseness_oracle(h: &Hypergraph) -> i64 {
        if h.is_empty() {
            return -1;
        }
        (0..=h.n())
            .find(|&k| k_subsets(h.n(), k).any(|s| link_size(h, s) == 1))
            .unwrap() as i64
    }

    #[test]
    fn canonical_storage() {
        let a = Hypergraph::new(4, 2, vec![vec![2, 3], vec![1, 0], vec![0, 3], vec![0, 1]]).unwrap();
        assert_eq!(a.edge_lists(), vec![vec![0, 1], vec![0, 3], vec![2, 3]]);
        let b = graph(4, &[[0, 3], [2, 3], [0, 1]]).with_label("x");
        assert_eq!(a, b);
        assert!(Hypergraph::new(3, 2, vec![vec![0, 0]]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 3]]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn shadow_examples() {
        let k3 = Hypergraph::complete(3, 2);
        assert_eq!(shadow(&k3, 1).unwrap(), vec![1, 2, 4]);
        assert_eq!(shadow(&Hypergraph::complete(4, 3), 2).unwrap().len(), 6);
        let e = single(3);
        assert_eq!(
            shadow(&e, 2).unwrap().iter().map(|&m| vertices_of(m)).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert!(shadow(&k3, 3).is_err());
        assert_eq!(shadow(&k3, 2).unwrap(), k3.edges().to_vec());
    }

    #[test]
    fn link_examples() {
        let k4 = Hypergraph::complete(4, 2);
        let l = link(&k4, &VertexSubset::new(vec![0]).unwrap()).unwrap();
        assert_eq!(l.r(), 1);
        assert_eq!(l.edge_lists(), vec![vec![1], vec![2], vec![3]]);
        let h = Hypergraph::new(4, 3, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let l = link(&h, &VertexSubset::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!(l.edge_lists(), vec![vec![2], vec![3]]);
        let k3 = Hypergraph::complete(3, 2);
        assert!(link(&k3, &VertexSubset::new(vec![0, 1, 2]).unwrap()).is_err());
        assert!(link(&k3, &VertexSubset::new(vec![2, 1]).unwrap()).unwrap().r() == 0);
    }

    #[test]
    fn delta_examples() {
        let k4 = Hypergraph::complete(4, 2);
        assert_eq!(delta_m(&k4, 1).unwrap(), 3);
        assert_eq!(delta_star(&k4).unwrap(), 3);
        assert_eq!(delta_m(&Hypergraph::empty(3, 2), 1).unwrap(), -1);
        assert_eq!(delta_star(&Hypergraph::empty(3, 2)).unwrap(), 0);
        assert_eq!(delta_m(&graph(4, &[[0, 1], [2, 3]]), 1).unwrap(), 1);
        assert!(delta_m(&k4, 3).is_err());
    }

    #[test]
    fn sparseness_examples() {
        for r in 1..5 {
            assert_eq!(sparseness(&single(r)), 0);
        }
        let k3 = Hypergraph::complete(3, 2);
        assert_eq!(
            (0..3).map(|m| delta_m(&k3, m).unwrap()).collect::<Vec<_>>(),
            vec![3, 2, 1]
        );
        assert_eq!(sparseness(&k3), 2);
        assert_eq!(sparseness(&Hypergraph::complete(4, 2)), 2);
        assert_eq!(sparseness(&Hypergraph::empty(4, 2)), -1);
    }

    #[test]
    fn f_r_delta_examples() {
        assert_eq!(f_r_delta(&Hypergraph::complete(4, 2), 3).unwrap(), 0);
        assert_eq!(f_r_delta(&graph(3, &[[0, 1], [0, 2]]), 2).unwrap(), 2);
        assert_eq!(f_r_delta(&Hypergraph::empty(5, 3), 4).unwrap(), 0);
    }

    #[test]
    fn disjoint_union_examples() {
        let k3 = Hypergraph::complete(3, 2);
        let u = disjoint_union(&[k3.clone(), k3.clone()]).unwrap();
        assert_eq!((u.n(), u.num_edges()), (6, 6));
        assert_eq!(disjoint_union(&[single(3)]).unwrap(), single(3));
        assert!(disjoint_union(&[k3, single(3)]).is_err());
        assert!(disjoint_union(&[]).is_err());
    }

    #[test]
    fn multi_edge_set_projection() {
        let k4 = Hypergraph::complete(4, 2);
        let mut m = MultiEdgeSet::multiplied(&k4, 3).unwrap();
        assert_eq!(m.total(), 18);
        assert_eq!(m.projection(), k4);
        m.set(0b11, 1).unwrap();
        m.set(0b1100, 0).unwrap();
        assert_eq!(m.total(), 13);
        assert!(m.set(0b11, 4).is_err());
        assert_eq!(m.projection().num_edges(), 5);
    }

    #[test]
    fn invariants_on_small_graphs() {
        // every graph on 5 vertices and every 3-graph on 5 vertices with <= 4 edges
        for (n, r, max_e) in [(5usize, 2usize, 10usize), (5, 3, 4)] {
            let all = Hypergraph::complete(n, r);
            let m = all.num_edges();
            for sel in 0u64..(1 << m) {
                if sel.count_ones() as usize > max_e {
                    continue;
                }
                let g = all.edge_subset(sel);
                for lvl in 0..=r {
                    let sh = shadow(&g, lvl).unwrap();
                    assert_eq!(sh, shadow_oracle(&g, lvl));
                    assert!(sh.len() as u128 <= binom_usize(n, lvl));
                }
                if !g.is_empty() {
                    let d1: usize = codegrees(&g, r - 1).unwrap().values().sum();
                    assert_eq!(d1, r * g.num_edges());
                    assert_eq!(delta_m(&g, 0).unwrap(), g.num_edges() as i64);
                }
                assert_eq!(sparseness(&g), sparseness_oracle(&g));
                for d in 1..5 {
                    f_r_delta(&g, d).unwrap();
                }
            }
        }
    }
}
