//! Canonical labelling by exhaustive permutation minimization.
//!
//! Vertices are first partitioned by an isomorphism-invariant colour
//! (iterated degree refinement). Only permutations that map colour
//! classes onto consecutive label ranges, in colour order, are tried, and
//! the canonical form is the least sorted image edge list among them.
//! Because the colouring commutes with isomorphisms, isomorphic inputs
//! see the same candidate images and hence the same minimum.

use crate::combinatorics::bits;
use crate::hypergraph::Hypergraph;

/// Stable colouring of `[n]` by iterated incidence refinement.
pub fn refine_colors(n: usize, edges: &[u64]) -> Vec<u32> {
    let mut colors = vec![0u32; n];
    for &e in edges {
        for v in bits(e) {
            colors[v] += 1;
        }
    }
    let mut classes = count_classes(&colors);
    loop {
        let mut sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..n)
            .map(|v| {
                let mut incident: Vec<Vec<u32>> = edges
                    .iter()
                    .filter(|&&e| e >> v & 1 == 1)
                    .map(|&e| {
                        let mut c: Vec<u32> =
                            bits(e).filter(|&w| w != v).map(|w| colors[w]).collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                incident.sort_unstable();
                (colors[v], incident)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let next: Vec<u32> = sigs
            .iter_mut()
            .map(|s| distinct.binary_search(s).expect("present") as u32)
            .collect();
        let next_classes = count_classes(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Canonical key: the least numerically sorted image edge list.
pub fn canonical_key(n: usize, edges: &[u64]) -> Vec<u64> {
    canonical_key_with_perm(n, edges).0
}

/// Canonical key together with a permutation `perm[old] = new` realizing it.
pub fn canonical_key_with_perm(n: usize, edges: &[u64]) -> (Vec<u64>, Vec<usize>) {
    if edges.is_empty() {
        return (Vec::new(), (0..n).collect());
    }
    let colors = refine_colors(n, edges);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (colors[v], v));
    // group boundaries inside `order`
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || colors[order[i]] != colors[order[start]] {
            groups.push((start, i));
            start = i;
        }
    }
    let mut best: Option<Vec<u64>> = None;
    let mut best_perm = vec![0usize; n];
    let mut image = Vec::with_capacity(edges.len());
    let mut bit = [0u64; 64];
    loop {
        // order[i] receives label i
        for (label, &v) in order.iter().enumerate() {
            bit[v] = 1u64 << label;
        }
        image.clear();
        image.extend(
            edges
                .iter()
                .map(|&e| bits(e).fold(0u64, |m, v| m | bit[v])),
        );
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
            for (label, &v) in order.iter().enumerate() {
                best_perm[v] = label;
            }
        }
        if !advance(&mut order, &groups) {
            break;
        }
    }
    (best.expect("at least one permutation"), best_perm)
}

/// Odometer over the product of per-group permutations.
fn advance(order: &mut [usize], groups: &[(usize, usize)]) -> bool {
    for &(s, e) in groups.iter().rev() {
        if next_permutation(&mut order[s..e]) {
            return true;
        }
        // next_permutation has reset this group to ascending order
    }
    false
}

/// Lexicographic successor; on the last permutation resets to ascending and returns false.
fn next_permutation(xs: &mut [usize]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = n - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Canonical representative of the isomorphism class of `g` on the same vertex set.
pub fn canonical_form(g: &Hypergraph) -> Hypergraph {
    let key = canonical_key(g.n(), g.edges());
    Hypergraph::from_masks(g.n(), g.r(), key).expect("image of a valid hypergraph")
}

pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    a.n() == b.n()
        && a.r() == b.r()
        && a.num_edges() == b.num_edges()
        && canonical_key(a.n(), a.edges()) == canonical_key(b.n(), b.edges())
}
