//! Copies of a pattern inside `K_n^r`, deduplicated by image edge set.

use std::collections::HashSet;

use crate::caps::Caps;
use crate::combinatorics::bits;
use crate::error::{Result, WsatError};
use crate::hypergraph::{sort_lex, vertices_of, Hypergraph};

/// Distinct edge sets `phi(E(H))` over injective maps of `V(H)` into `[n]`,
/// each lex-sorted, the list itself sorted.
pub fn copies_in_complete(h: &Hypergraph, n: usize, caps: &Caps) -> Result<Vec<Vec<u64>>> {
    if h.n() > n {
        return Ok(Vec::new());
    }
    let support = vertices_of(h.support());
    let k = support.len();
    let maps: u128 = (0..k).map(|i| (n - i) as u128).product();
    caps.check("pattern placements", maps, caps.enumeration)?;
    if h.n() > 64 {
        return Err(WsatError::arg("pattern too large"));
    }
    let mut found: HashSet<Vec<u64>> = HashSet::new();
    let mut image = vec![0usize; 64];
    place(h, &support, 0, 0, n, &mut image, &mut found);
    let mut out: Vec<Vec<u64>> = found.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

fn place(
    h: &Hypergraph,
    support: &[usize],
    depth: usize,
    used: u64,
    n: usize,
    image: &mut [usize],
    found: &mut HashSet<Vec<u64>>,
) {
    if depth == support.len() {
        let mut edges: Vec<u64> = h
            .edges()
            .iter()
            .map(|&e| bits(e).fold(0u64, |m, v| m | 1u64 << image[v]))
            .collect();
        sort_lex(&mut edges);
        found.insert(edges);
        return;
    }
    for t in 0..n {
        if used >> t & 1 == 0 {
            image[support[depth]] = t;
            place(h, support, depth + 1, used | 1u64 << t, n, image, found);
        }
    }
}
