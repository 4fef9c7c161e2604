//! Backtracking search for a new pattern copy through a given edge.

use std::collections::HashSet;

use crate::combinatorics::bits;
use crate::hypergraph::{vertices_of, Hypergraph};

/// Edge membership plus degrees for a host on `[n]`.
#[derive(Debug, Clone)]
pub struct HostSet {
    n: usize,
    dense: Option<Vec<u64>>,
    sparse: HashSet<u64>,
    deg: Vec<u32>,
    count: usize,
}

/// Hosts up to this many vertices use a `2^n`-bit membership table.
const DENSE_LIMIT: usize = 20;

impl HostSet {
    pub fn new(n: usize) -> Self {
        HostSet {
            n,
            dense: (n <= DENSE_LIMIT).then(|| vec![0u64; ((1usize << n) + 63) / 64]),
            sparse: HashSet::new(),
            deg: vec![0; n],
            count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[u64]) -> Self {
        let mut h = HostSet::new(n);
        for &e in edges {
            h.insert(e);
        }
        h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, e: u64) -> bool {
        match &self.dense {
            Some(t) => t[(e >> 6) as usize] >> (e & 63) & 1 == 1,
            None => self.sparse.contains(&e),
        }
    }

    /// Returns false if the edge was already present.
    pub fn insert(&mut self, e: u64) -> bool {
        if self.contains(e) {
            return false;
        }
        match &mut self.dense {
            Some(t) => t[(e >> 6) as usize] |= 1u64 << (e & 63),
            None => {
                self.sparse.insert(e);
            }
        }
        for v in bits(e) {
            self.deg[v] += 1;
        }
        self.count += 1;
        true
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.deg[v]
    }
}

#[derive(Debug, Clone)]
struct AnchorPlan {
    /// Pattern vertices of the anchor edge, ascending.
    anchor: Vec<usize>,
    /// Remaining non-isolated pattern vertices in placement order.
    order: Vec<usize>,
    /// Pattern edges completed when `order[p]` is placed.
    checks: Vec<Vec<u64>>,
}

/// A pattern with per-anchor placement plans, built once per search.
#[derive(Debug, Clone)]
pub struct PreparedPattern {
    pattern: Hypergraph,
    deg: Vec<u32>,
    isolated: Vec<usize>,
    plans: Vec<AnchorPlan>,
    perms: Vec<Vec<usize>>,
}

impl PreparedPattern {
    pub fn new(h: &Hypergraph) -> Self {
        let deg: Vec<u32> = h.degrees().into_iter().map(|d| d as u32).collect();
        let isolated = h.isolated_vertices();
        let support = h.support();
        let plans = h
            .edges()
            .iter()
            .map(|&f| {
                let anchor = vertices_of(f);
                let mut placed = f;
                let mut remaining: Vec<usize> = vertices_of(support & !f);
                let mut order = Vec::new();
                let mut checks = Vec::new();
                while !remaining.is_empty() {
                    // most edges touching the placed part first, then degree
                    let (pos, _) = remaining
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| {
                            let touching = h
                                .edges()
                                .iter()
                                .filter(|&&e| e >> v & 1 == 1 && e & placed != 0)
                                .count();
                            (i, (touching, deg[v], std::cmp::Reverse(v)))
                        })
                        .max_by_key(|&(_, key)| key)
                        .expect("non-empty");
                    let v = remaining.remove(pos);
                    let now = placed | 1u64 << v;
                    checks.push(
                        h.edges()
                            .iter()
                            .copied()
                            .filter(|&e| e >> v & 1 == 1 && e & now == e)
                            .collect(),
                    );
                    placed = now;
                    order.push(v);
                }
                AnchorPlan {
                    anchor,
                    order,
                    checks,
                }
            })
            .collect();
        PreparedPattern {
            pattern: h.clone(),
            deg,
            isolated,
            plans,
            perms: permutations(h.r()),
        }
    }

    pub fn pattern(&self) -> &Hypergraph {
        &self.pattern
    }

    /// An injective map `V(H) -> [n]` sending some pattern edge onto `e`
    /// and every other pattern edge into `host`. `e` must not be in `host`.
    pub fn find(&self, host: &HostSet, e: u64) -> Option<Vec<usize>> {
        let h = &self.pattern;
        let n = host.n();
        if h.n() > n || h.is_empty() || host.len() + 1 < h.num_edges() {
            return None;
        }
        let host_deg = |v: usize| host.degree(v) + (e >> v & 1) as u32;
        let targets = vertices_of(e);
        let mut image = vec![usize::MAX; h.n()];
        for plan in &self.plans {
            for perm in &self.perms {
                let mut ok = true;
                for (i, &pv) in plan.anchor.iter().enumerate() {
                    let t = targets[perm[i]];
                    if host_deg(t) < self.deg[pv] {
                        ok = false;
                        break;
                    }
                    image[pv] = t;
                }
                if !ok {
                    continue;
                }
                if self.extend(host, plan, 0, e, &mut image, &host_deg) {
                    let used = image
                        .iter()
                        .filter(|&&t| t != usize::MAX)
                        .fold(0u64, |m, &t| m | 1u64 << t);
                    let mut free = (0..n).filter(|&t| used >> t & 1 == 0);
                    for &v in &self.isolated {
                        image[v] = free.next()?;
                    }
                    return Some(image);
                }
                for &v in &plan.order {
                    image[v] = usize::MAX;
                }
            }
        }
        None
    }

    fn extend(
        &self,
        host: &HostSet,
        plan: &AnchorPlan,
        depth: usize,
        used: u64,
        image: &mut [usize],
        host_deg: &dyn Fn(usize) -> u32,
    ) -> bool {
        if depth == plan.order.len() {
            return host.n() - used.count_ones() as usize >= self.isolated.len();
        }
        let v = plan.order[depth];
        for t in 0..host.n() {
            if used >> t & 1 == 1 || host_deg(t) < self.deg[v] {
                continue;
            }
            image[v] = t;
            let fits = plan.checks[depth].iter().all(|&pe| {
                host.contains(bits(pe).fold(0u64, |m, u| m | 1u64 << image[u]))
            });
            if fits && self.extend(host, plan, depth + 1, used | 1u64 << t, image, host_deg) {
                return true;
            }
        }
        image[v] = usize::MAX;
        false
    }
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let mut i = r;
        while i > 1 && cur[i - 2] >= cur[i - 1] {
            i -= 1;
        }
        if i <= 1 {
            return out;
        }
        let mut j = r - 1;
        while cur[j] <= cur[i - 2] {
            j -= 1;
        }
        cur.swap(i - 2, j);
        cur[i - 1..].reverse();
    }
}

/// `Some(embedding)` if adding `e` to `g` creates a new copy of `h`.
/// Returns `None` when `e` is already an edge of `g`.
pub fn creates_new_copy(g: &Hypergraph, h: &Hypergraph, e: &[usize]) -> Option<Vec<usize>> {
    let mask = crate::hypergraph::mask_of(e);
    if h.r() != g.r() || e.len() != g.r() || g.contains_edge(mask) {
        return None;
    }
    let host = HostSet::from_edges(g.n(), g.edges());
    PreparedPattern::new(h).find(&host, mask)
}

/// Checks that `phi` maps some edge of `h` onto `e` and all others into `host`.
pub fn is_valid_embedding(host: &HostSet, h: &Hypergraph, e: u64, phi: &[usize]) -> bool {
    if phi.len() != h.n() || phi.iter().any(|&t| t >= host.n()) {
        return false;
    }
    let distinct: HashSet<usize> = phi.iter().copied().collect();
    if distinct.len() != phi.len() {
        return false;
    }
    let mut hit = false;
    for &f in h.edges() {
        let img = bits(f).fold(0u64, |m, v| m | 1u64 << phi[v]);
        if img == e {
            hit = true;
        } else if !host.contains(img) {
            return false;
        }
    }
    hit
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, r: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, r, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    /// Tries every injective map V(H) -> [n].
    fn oracle(host: &Hypergraph, h: &Hypergraph, e: u64) -> bool {
        fn rec(host: &HostSet, h: &Hypergraph, e: u64, phi: &mut Vec<usize>, n: usize) -> bool {
            if phi.len() == h.n() {
                return is_valid_embedding(host, h, e, phi);
            }
            for t in 0..n {
                if !phi.contains(&t) {
                    phi.push(t);
                    if rec(host, h, e, phi, n) {
                        return true;
                    }
                    phi.pop();
                }
            }
            false
        }
        let hs = HostSet::from_edges(host.n(), host.edges());
        rec(&hs, h, e, &mut Vec::new(), host.n())
    }

    #[test]
    fn examples() {
        let k3 = Hypergraph::complete(3, 2);
        assert!(creates_new_copy(&g(3, 2, &[&[0, 1], &[0, 2]]), &k3, &[1, 2]).is_some());
        assert!(creates_new_copy(&g(4, 2, &[&[0, 1]]), &k3, &[2, 3]).is_none());
        let k4 = Hypergraph::complete(4, 2);
        let host = k4.without_edge(crate::hypergraph::mask_of(&[2, 3]));
        let phi = creates_new_copy(&host, &k4, &[2, 3]).unwrap();
        let hs = HostSet::from_edges(4, host.edges());
        assert!(is_valid_embedding(&hs, &k4, 0b1100, &phi));
        assert!(creates_new_copy(&host, &k4, &[0, 1]).is_none());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn isolated_pattern_vertices_need_room() {
        let p = g(4, 2, &[&[0, 1], &[1, 2]]);
        let host = g(3, 2, &[&[0, 1]]);
        assert!(creates_new_copy(&host, &p, &[1, 2]).is_none());
        let host = g(4, 2, &[&[0, 1]]);
        let phi = creates_new_copy(&host, &p, &[1, 2]).unwrap();
        assert_eq!(phi.len(), 4);
    }

    #[test]
    fn agrees_with_exhaustive_maps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let patterns = [
            Hypergraph::complete(3, 2),
            Hypergraph::complete(4, 2),
            g(4, 2, &[&[0, 1], &[1, 2], &[2, 3]]),
            g(5, 2, &[&[0, 1], &[0, 2], &[0, 3], &[3, 4]]),
            Hypergraph::complete(4, 3),
            g(5, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 4]]),
        ];
        for _ in 0..300 {
            let h = &patterns[rng.gen_range(0..patterns.len())];
            let n = rng.gen_range(h.n()..=6);
            let all = Hypergraph::complete(n, h.r());
            let host = all.edge_subset(rng.gen::<u64>() & rng.gen::<u64>() & crate::hypergraph::full_mask(all.num_edges()));
            let missing = host.complement();
            if missing.is_empty() {
                continue;
            }
            let e = missing.edges()[rng.gen_range(0..missing.num_edges())];
            let hs = HostSet::from_edges(n, host.edges());
            let found = PreparedPattern::new(h).find(&hs, e);
            assert_eq!(found.is_some(), oracle(&host, h, e), "{host:?} {h:?} {e:b}");
            if let Some(phi) = found {
                assert!(is_valid_embedding(&hs, h, e, &phi));
            }
        }
    }
}
