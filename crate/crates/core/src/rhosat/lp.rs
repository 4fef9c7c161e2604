//! The set-function LP over subsets of `E(K_n^r)` and its orbit reduction.
//!
//! Elementary rows suffice. Monotonicity: any `A ⊆ B` is reached by adding
//! the elements of `B \ A` one at a time. Submodularity: the elementary
//! rows say the marginal `rho(S + x) - rho(S)` is nonincreasing in `S` for
//! `x ∉ S`, one element at a time, hence for all `S ⊆ T`. Writing
//! `B \ A = {y_1..y_k}`, `rho(A ∪ B) - rho(A)` telescopes into marginals
//! of `y_i` over `A ∪ {y_1..y_{i-1}}`, each at most the marginal over
//! `(A ∩ B) ∪ {y_1..y_{i-1}}`, which telescope to `rho(B) - rho(A ∩ B)`.
//! With `rho(∅) = 0` and singleton caps, submodularity also gives
//! `rho(A) <= sum of singletons <= |A|`, and monotonicity gives `rho >= 0`.
//!
//! Orbit reduction. The symmetric group on `[n]` permutes the rows among
//! themselves and fixes the objective, so averaging any optimal solution
//! over the group gives an optimal solution constant on orbits of subsets.
//! The reduced LP has one variable per isomorphism class of edge sets and
//! the rows generated from one representative per class: every full row is
//! the image of such a row under a vertex permutation.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::canonical::canonical_key;
use crate::caps::{Caps, LP_HARD_CAP};
use crate::combinatorics::bits;
use crate::copies::copies_in_complete;
use crate::enumerate::iso_classes;
use crate::error::{Result, WsatError};
use crate::hypergraph::{complete_edge_count, vertices_of, Hypergraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowTag {
    EmptyZero,
    SingletonCap,
    ElementaryMonotone,
    ElementarySubmodular,
    Saturation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// `sum coeff * rho(subset) rel rhs`, subsets as bit masks over edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpRow {
    pub tag: RowTag,
    pub lhs: Vec<(usize, i64)>,
    pub rel: Rel,
    pub rhs: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFunctionLP {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub variables: usize,
    /// Edge `i` of `K_n^r` is bit `i` of a subset index.
    pub edges: Vec<Vec<usize>>,
    /// Maximize the variable of the full edge set.
    pub objective: usize,
    pub rows: Vec<LpRow>,
}

fn edge_count(n: usize, r: usize, caps: &Caps) -> Result<usize> {
    let m = complete_edge_count(n, r);
    caps.check("LP edge count", m, caps.lp_edges.min(LP_HARD_CAP) as u128)?;
    Ok(m as usize)
}

/// Index masks of the copies of `h`, over the lex-ordered edges of `K_n^r`.
fn copy_masks(h: &Hypergraph, n: usize, all: &[u64], caps: &Caps) -> Result<Vec<usize>> {
    let pos: HashMap<u64, usize> = all.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    Ok(copies_in_complete(h, n, caps)?
        .iter()
        .map(|c| c.iter().fold(0usize, |m, e| m | 1 << pos[e]))
        .collect())
}

/// The full LP with one variable per subset.
pub fn build_lp(h: &Hypergraph, n: usize, caps: &Caps) -> Result<SetFunctionLP> {
    if h.is_empty() {
        return Err(WsatError::arg("pattern must be non-empty"));
    }
    let r = h.r();
    let m = edge_count(n, r, caps)?;
    let all = Hypergraph::complete(n, r).edges().to_vec();
    let full = (1usize << m) - 1;
    let mut rows = vec![LpRow {
        tag: RowTag::EmptyZero,
        lhs: vec![(0, 1)],
        rel: Rel::Eq,
        rhs: 0,
    }];
    for x in 0..m {
        rows.push(LpRow {
            tag: RowTag::SingletonCap,
            lhs: vec![(1 << x, 1)],
            rel: Rel::Le,
            rhs: 1,
        });
    }
    for a in 0..=full {
        for x in (0..m).filter(|&x| a >> x & 1 == 0) {
            rows.push(LpRow {
                tag: RowTag::ElementaryMonotone,
                lhs: vec![(a, 1), (a | 1 << x, -1)],
                rel: Rel::Le,
                rhs: 0,
            });
        }
    }
    for a in 0..=full {
        for x in (0..m).filter(|&x| a >> x & 1 == 0) {
            for y in (x + 1..m).filter(|&y| a >> y & 1 == 0) {
                rows.push(LpRow {
                    tag: RowTag::ElementarySubmodular,
                    lhs: vec![(a | 1 << x | 1 << y, 1), (a, 1), (a | 1 << x, -1), (a | 1 << y, -1)],
                    rel: Rel::Le,
                    rhs: 0,
                });
            }
        }
    }
    for c in copy_masks(h, n, &all, caps)? {
        for e in (0..m).filter(|&e| c >> e & 1 == 1) {
            rows.push(LpRow {
                tag: RowTag::Saturation,
                lhs: vec![(c, 1), (c ^ 1 << e, -1)],
                rel: Rel::Le,
                rhs: 0,
            });
        }
    }
    Ok(SetFunctionLP {
        n,
        r,
        m,
        variables: 1 << m,
        edges: all.iter().map(|&e| vertices_of(e)).collect(),
        objective: full,
        rows,
    })
}

/// `1 + m + m 2^(m-1) + C(m,2) 2^(m-2) + copies * |E(H)|`.
pub fn expected_row_count(m: usize, copies: usize, pattern_edges: usize) -> u128 {
    let m128 = m as u128;
    let half = if m >= 1 { m128 << (m - 1) } else { 0 };
    let quarter = if m >= 2 { (m128 * (m128 - 1) / 2) << (m - 2) } else { 0 };
    1 + m128 + half + quarter + (copies * pattern_edges) as u128
}

/// The orbit-reduced LP. Variable `j` stands for class `j + 1`; class 0 is
/// the empty set, whose value is fixed at 0 and eliminated.
#[derive(Debug, Clone)]
pub struct OrbitLp {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// Canonical keys; index 0 is the empty class.
    pub classes: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
    /// Rows as `(tag, lhs over class ids >= 1, rhs)`, all `<=`.
    pub rows: Vec<(RowTag, Vec<(usize, i64)>, i64)>,
    pub full_class: usize,
    pub copy_classes: usize,
}

impl OrbitLp {
    pub fn build(h: &Hypergraph, n: usize, caps: &Caps) -> Result<Self> {
        if h.is_empty() {
            return Err(WsatError::arg("pattern must be non-empty"));
        }
        let r = h.r();
        let m = edge_count(n, r, caps)?;
        let all = Hypergraph::complete(n, r).edges().to_vec();
        let mut classes = Vec::new();
        for k in 0..=m {
            classes.extend(iso_classes(n, r, k, caps)?.iter().cloned());
        }
        let index: HashMap<Vec<u64>, usize> = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let id = |edges: &[u64]| -> usize { index[&canonical_key(n, edges)] };
        let mut seen: HashSet<(RowTag, Vec<(usize, i64)>)> = HashSet::new();
        let mut rows = Vec::new();
        let mut push = |tag: RowTag, terms: &[(usize, i64)], rhs: i64, rows: &mut Vec<(RowTag, Vec<(usize, i64)>, i64)>| {
            let mut acc: Vec<(usize, i64)> = Vec::new();
            for &(v, c) in terms {
                if v == 0 {
                    continue;
                }
                match acc.iter_mut().find(|(u, _)| *u == v) {
                    Some(t) => t.1 += c,
                    None => acc.push((v, c)),
                }
            }
            acc.retain(|&(_, c)| c != 0);
            acc.sort_unstable();
            // with x >= 0, a row with no positive coefficient and rhs >= 0 is slack
            if acc.iter().all(|&(_, c)| c <= 0) && rhs >= 0 {
                return;
            }
            if seen.insert((tag, acc.clone())) {
                rows.push((tag, acc, rhs));
            }
        };
        if m > 0 {
            push(RowTag::SingletonCap, &[(id(&all[..1]), 1)], 1, &mut rows);
        }
        for rep in &classes {
            let a = id(rep);
            let free: Vec<u64> = all.iter().copied().filter(|e| !rep.contains(e)).collect();
            let with = |extra: &[u64]| -> usize {
                let mut edges = rep.clone();
                edges.extend_from_slice(extra);
                id(&edges)
            };
            let singles: Vec<usize> = free.iter().map(|&x| with(&[x])).collect();
            for &ax in &singles {
                push(RowTag::ElementaryMonotone, &[(a, 1), (ax, -1)], 0, &mut rows);
            }
            for i in 0..free.len() {
                for j in i + 1..free.len() {
                    let axy = with(&[free[i], free[j]]);
                    push(
                        RowTag::ElementarySubmodular,
                        &[(axy, 1), (a, 1), (singles[i], -1), (singles[j], -1)],
                        0,
                        &mut rows,
                    );
                }
            }
        }
        // all copies form a single orbit
        let copies = copies_in_complete(h, n, caps)?;
        if let Some(c) = copies.first() {
            for e in c {
                let rest: Vec<u64> = c.iter().copied().filter(|f| f != e).collect();
                push(RowTag::Saturation, &[(id(c), 1), (id(&rest), -1)], 0, &mut rows);
            }
        }
        let full_class = id(&all);
        Ok(OrbitLp {
            n,
            r,
            m,
            index,
            rows,
            full_class,
            copy_classes: usize::from(!copies.is_empty()),
            classes,
        })
    }

    /// Class id of an edge set (masks of `K_n^r` edges).
    pub fn class_of(&self, edges: &[u64]) -> usize {
        self.index[&canonical_key(self.n, edges)]
    }

    pub fn num_variables(&self) -> usize {
        self.classes.len() - 1
    }
}

/// Edge masks of the subset with index mask `sel` over `all`.
pub fn subset_edges(all: &[u64], sel: usize) -> Vec<u64> {
    bits(sel as u64).map(|i| all[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binom_usize;

    #[test]
    fn triangle_lp_counts() {
        let caps = Caps::default();
        let lp = build_lp(&Hypergraph::complete(3, 2), 4, &caps).unwrap();
        assert_eq!((lp.m, lp.variables), (6, 64));
        assert_eq!(lp.rows.len(), 451);
        assert_eq!(lp.rows.len() as u128, expected_row_count(6, 4, 3));
        assert_eq!(lp.rows.iter().filter(|r| r.tag == RowTag::Saturation).count(), 12);
        assert!(lp.rows.iter().all(|r| r.lhs.iter().all(|&(i, _)| i < lp.variables)));
    }

    #[test]
    fn row_counts_across_instances() {
        let caps = Caps::default();
        for (h, n) in [
            (Hypergraph::complete(3, 2), 3),
            (Hypergraph::complete(4, 2), 3),
            (Hypergraph::complete(4, 3), 5),
            (Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap(), 4),
        ] {
            let lp = build_lp(&h, n, &caps).unwrap();
            let copies = copies_in_complete(&h, n, &caps).unwrap().len();
            assert_eq!(lp.rows.len() as u128, expected_row_count(lp.m, copies, h.num_edges()));
        }
        let lp = build_lp(&Hypergraph::complete(3, 3), 2, &caps).unwrap();
        assert_eq!((lp.m, lp.variables, lp.rows.len()), (0, 1, 1));
    }

    #[test]
    fn caps_apply() {
        let caps = Caps::default();
        assert!(matches!(
            build_lp(&Hypergraph::complete(3, 2), 7, &caps),
            Err(WsatError::CapExceeded { .. })
        ));
        let mut big = Caps::default();
        big.lp_edges = 40;
        assert!(OrbitLp::build(&Hypergraph::complete(3, 2), 7, &big).is_err());
    }

    #[test]
    fn orbit_lp_uses_classes() {
        let caps = Caps::default();
        let lp = OrbitLp::build(&Hypergraph::complete(3, 2), 5, &caps).unwrap();
        assert_eq!(lp.classes.len(), 34);
        assert_eq!(lp.class_of(&[]), 0);
        assert_eq!(lp.class_of(Hypergraph::complete(5, 2).edges()), lp.full_class);
        assert!(lp.rows.iter().all(|(_, lhs, _)| lhs.iter().all(|&(v, _)| v >= 1 && v < lp.classes.len())));
        assert_eq!(binom_usize(5, 2), 10);
    }
}
