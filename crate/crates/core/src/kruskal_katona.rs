//! Left-compressed hypergraphs and exact shadow lower bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::combinatorics::{binom, binom_usize};
use crate::enumerate::{enumerate_hypergraphs, EnumOptions};
use crate::error::{Result, WsatError};
use crate::hypergraph::{shadow_size, Hypergraph};
use crate::io::HypergraphJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcSpec {
    pub r: usize,
    pub e: u128,
}

/// Edge masks of the left-compressed `r`-graph with `e` edges (0-based).
fn lc_masks(r: usize, e: u128) -> Vec<u64> {
    if e == 0 {
        return Vec::new();
    }
    if r == 1 {
        return (0..e as usize).map(|v| 1u64 << v).collect();
    }
    let mut k = r;
    while binom(k as u64 + 1, r as u64) <= e {
        k += 1;
    }
    let rest = e - binom(k as u64, r as u64);
    let mut masks: Vec<u64> = crate::combinatorics::k_subsets(k, r).collect();
    // rest < C(k, r-1), so the lifted part lives on [k] plus vertex k
    masks.extend(lc_masks(r - 1, rest).into_iter().map(|m| m | 1u64 << k));
    masks
}

/// `lcG(r, e)` on the fewest vertices it needs.
pub fn left_compressed(r: usize, e: u128) -> Result<Hypergraph> {
    if r == 0 || e == 0 {
        return Err(WsatError::arg("left_compressed needs r >= 1 and e >= 1"));
    }
    let masks = lc_masks(r, e);
    let n = 64 - masks.iter().fold(0u64, |a, &m| a | m).leading_zeros() as usize;
    if masks.len() as u128 != e || n > 64 {
        return Err(WsatError::cap("left-compressed vertex count", n as u128, 64));
    }
    Hypergraph::from_masks(n, r, masks)
}

/// `|shadow_m(lcG(r, e))|`, the least `m`-shadow of any `e`-edge `r`-graph.
pub fn kk_shadow_bound(r: usize, e: u128, m: usize) -> Result<usize> {
    if m == 0 || m > r {
        return Err(WsatError::arg(format!("shadow level {m} outside 1..={r}")));
    }
    shadow_size(&left_compressed(r, e)?, m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KkParams {
    pub n: usize,
    pub r: usize,
    pub e: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KkReport {
    pub params: KkParams,
    pub bound: usize,
    pub min_found: usize,
    pub witness: HypergraphJson,
    pub pass: bool,
}

/// Minimum `m`-shadow over every labelled `e`-edge `r`-graph on `[n]`.
pub fn verify_kk_exhaustive(n: usize, r: usize, e: usize, m: usize, caps: &Caps) -> Result<KkReport> {
    if e == 0 {
        return Err(WsatError::arg("verify_kk_exhaustive needs e >= 1"));
    }
    let bound = kk_shadow_bound(r, e as u128, m)?;
    let all = enumerate_hypergraphs(n, r, e, EnumOptions::default(), caps)?;
    let best = all
        .par_bridge()
        .map(|g| (shadow_size(&g, m).expect("level checked"), g))
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.edges().cmp(b.1.edges())))
        .expect("at least one hypergraph");
    Ok(KkReport {
        params: KkParams { n, r, e, m },
        bound,
        min_found: best.0,
        witness: HypergraphJson::from(&best.1),
        pass: best.0 == bound || (best.0 > bound && bound_unreachable(n, r, e)),
    })
}

/// The bound is attained inside `[n]` only if `lcG` fits on `n` vertices;
/// otherwise exceeding it is expected and still consistent.
fn bound_unreachable(n: usize, r: usize, e: usize) -> bool {
    left_compressed(r, e as u128).map(|g| g.n() > n).unwrap_or(false)
}

/// `C(a+b, a) >= ab + 1`.
pub fn binomial_product_inequality(a: u64, b: u64) -> bool {
    binom(a + b, a) >= (a * b + 1) as u128
}

/// `(a + b + 1 - x) * C(x, a) >= ab + 1` for `a + 1 <= x <= a + b`.
pub fn binomial_convexity_inequality(a: u64, b: u64, x: u64) -> bool {
    ((a + b + 1 - x) as u128) * binom(x, a) >= (a * b + 1) as u128
}

/// Largest `a` for which `f_{r,delta}(G) >= a` is claimed for `e`-edge `G`.
pub fn f_bound_target(r: usize, delta: usize, e: usize) -> Option<i64> {
    if delta < 2 || e == 0 {
        return None;
    }
    let cap = ((r - 1) * (delta - 1) + 1) as i64;
    let room = binom_usize(r + delta - 1, r) as i64 - e as i64;
    let a = cap.min(room);
    (a >= 1).then_some(a)
}

/// `C(r + delta - 1, r - 1)`, the least `(r-1)`-shadow given codegree `delta`.
pub fn shadow_floor_from_codegree(r: usize, delta: usize) -> u128 {
    binom_usize(r + delta - 1, r - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{delta_star, f_r_delta, shadow};

    #[test]
    fn left_compressed_examples() {
        assert_eq!(left_compressed(2, 3).unwrap(), Hypergraph::complete(3, 2));
        assert_eq!(
            left_compressed(2, 4).unwrap().edge_lists(),
            Hypergraph::new(4, 2, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3]])
                .unwrap()
                .edge_lists()
        );
        assert_eq!(left_compressed(3, 1).unwrap().edge_lists(), vec![vec![0, 1, 2]]);
        assert_eq!(left_compressed(1, 4).unwrap().n(), 4);
    }

    #[test]
    fn shadow_bound_examples() {
        assert_eq!(kk_shadow_bound(2, 3, 1).unwrap(), 3);
        assert_eq!(kk_shadow_bound(2, 4, 1).unwrap(), 4);
        for r in 1..6 {
            for m in 1..=r {
                assert_eq!(kk_shadow_bound(r, 1, m).unwrap() as u128, binom_usize(r, m));
            }
        }
        assert!(kk_shadow_bound(2, 3, 0).is_err());
    }

    #[test]
    fn exhaustive_examples() {
        let caps = Caps::default();
        let rep = verify_kk_exhaustive(5, 2, 4, 1, &caps).unwrap();
        assert_eq!((rep.min_found, rep.pass), (4, true));
        let rep = verify_kk_exhaustive(5, 3, 3, 2, &caps).unwrap();
        assert_eq!(rep.min_found, kk_shadow_bound(3, 3, 2).unwrap());
        assert!(rep.pass);
        let rep = verify_kk_exhaustive(4, 2, 6, 1, &caps).unwrap();
        assert_eq!((rep.min_found, rep.pass), (4, true));
    }

    #[test]
    fn structure_and_monotonicity() {
        for r in 1..=4 {
            let top = binom_usize(12, r);
            let mut prev = vec![0usize; r + 1];
            for e in 1..=top {
                let g = left_compressed(r, e).unwrap();
                assert_eq!(g.num_edges() as u128, e);
                for m in 1..=r {
                    let b = shadow(&g, m).unwrap().len();
                    assert!(b >= prev[m], "r={r} e={e} m={m}");
                    prev[m] = b;
                }
            }
        }
    }

    #[test]
    fn binomial_sweeps() {
        for a in 0..=30 {
            for b in 0..=30 {
                assert!(binomial_product_inequality(a, b), "a={a} b={b}");
            }
        }
        for a in 1..=12 {
            for b in 1..=12 {
                for x in a + 1..=a + b {
                    assert!(binomial_convexity_inequality(a, b, x), "a={a} b={b} x={x}");
                }
            }
        }
    }

    #[test]
    fn f_bound_on_left_compressed() {
        for r in 1..=3 {
            for delta in 2..=4 {
                for e in 1..binom_usize(r + delta - 1, r) as usize {
                    if let Some(a) = f_bound_target(r, delta, e) {
                        let g = left_compressed(r, e as u128).unwrap();
                        assert!(f_r_delta(&g, delta as i64).unwrap() >= a, "r={r} d={delta} e={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn codegree_shadow_floor_on_small_graphs() {
        let caps = Caps::default();
        for n in 2..=6 {
            for k in 1..=binom_usize(n, 2) as usize {
                for g in enumerate_hypergraphs(n, 2, k, EnumOptions { iso_classes: true }, &caps).unwrap() {
                    let d = delta_star(&g).unwrap() as usize;
                    assert!(shadow(&g, 1).unwrap().len() as u128 >= shadow_floor_from_codegree(2, d));
                }
            }
        }
    }
}
