//! Exact `wsat(n, 𝓗)` by exhaustive search over edge sets of `K_n^r`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::combinatorics::{binom, binom_usize};
use crate::enumerate::{iso_classes, Combinations};
use crate::error::{Result, WsatError};
use crate::hypergraph::{disjoint_union, Hypergraph};
use crate::rational;

use super::closure::{closure, saturates, Family, SaturationCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WsatOptions {
    /// Test one representative per isomorphism class of edge sets.
    pub symmetry: bool,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Start at the bounds-module lower bound instead of 0.
    pub use_bounds: bool,
}

impl Default for WsatOptions {
    fn default() -> Self {
        WsatOptions {
            symmetry: true,
            workers: None,
            use_bounds: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelOutcome {
    pub k: usize,
    pub saturating: bool,
}

#[derive(Debug, Clone)]
pub struct WsatExactResult {
    pub n: usize,
    pub value: usize,
    pub witness: Hypergraph,
    pub certificate: SaturationCertificate,
    /// First level tested.
    pub start: usize,
    pub levels: Vec<LevelOutcome>,
}

/// Least `k` such that some `k`-edge host on `[n]` closes to `K_n^r`.
///
/// The search starts at the best lower bound and walks down while the
/// level below still saturates, or up until one does. Every level's answer
/// is decided by search, so a wrong starting bound costs time, not
/// correctness.
pub fn wsat_exact(n: usize, fam: &Family, opts: &WsatOptions, caps: &Caps) -> Result<WsatExactResult> {
    let r = fam.r();
    if n < fam.max_vertices() {
        return Err(WsatError::arg(format!(
            "n = {n} is smaller than a pattern with {} vertices",
            fam.max_vertices()
        )));
    }
    let m = binom(n as u64, r as u64);
    caps.check(&format!("exact search edge count C({n},{r})"), m, caps.wsat_edges as u128)?;
    let m = m as usize;
    let start = if opts.use_bounds && fam.len() == 1 {
        let h = fam.pattern(0).expect("one pattern");
        let lb = crate::bounds::best_lower_bound(h, n, caps)?;
        rational::ceil_i64(&lb).clamp(0, m as i64) as usize
    } else {
        0
    };
    let run = || search(n, r, m, start, fam, opts, caps);
    let (value, edges, levels) = match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| WsatError::arg(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let witness = Hypergraph::from_masks(n, r, edges)?;
    let res = closure(&witness, fam, caps)?;
    if !res.is_complete() {
        return Err(WsatError::pre("internal: witness failed to saturate on replay"));
    }
    Ok(WsatExactResult {
        n,
        value,
        witness,
        certificate: res.certificate,
        start,
        levels,
    })
}

type Found = (usize, Vec<u64>, Vec<LevelOutcome>);

fn search(n: usize, r: usize, m: usize, start: usize, fam: &Family, opts: &WsatOptions, caps: &Caps) -> Result<Found> {
    let all = Hypergraph::complete(n, r).edges().to_vec();
    let mut levels = Vec::new();
    let mut test = |k: usize| -> Result<Option<Vec<u64>>> {
        let found = level(n, r, k, &all, fam, opts, caps)?;
        levels.push(LevelOutcome {
            k,
            saturating: found.is_some(),
        });
        Ok(found)
    };
    let mut k = start;
    let mut best = test(k)?;
    if best.is_some() {
        while k > 0 {
            match test(k - 1)? {
                Some(w) => {
                    best = Some(w);
                    k -= 1;
                }
                None => break,
            }
        }
    } else {
        while best.is_none() {
            k += 1;
            if k > m {
                return Err(WsatError::pre("internal: complete host did not saturate"));
            }
            best = test(k)?;
        }
    }
    Ok((k, best.expect("found"), levels))
}

fn level(n: usize, r: usize, k: usize, all: &[u64], fam: &Family, opts: &WsatOptions, caps: &Caps) -> Result<Option<Vec<u64>>> {
    let m = all.len();
    if opts.symmetry {
        let classes = iso_classes(n, r, k, caps)?;
        return Ok(classes
            .par_iter()
            .find_map_first(|edges| saturates(n, edges, all, fam).then(|| edges.clone())));
    }
    caps.check(
        &format!("labelled level C({m},{k})"),
        binom_usize(m, k),
        caps.enumeration,
    )?;
    if k == 0 {
        return Ok(saturates(n, &[], all, fam).then(Vec::new));
    }
    // split by smallest chosen index so the first witness is lex-least
    Ok((0..=m - k).into_par_iter().find_map_first(|first| {
        Combinations::new(m - first - 1, k - 1).find_map(|rest| {
            let mut edges = Vec::with_capacity(k);
            edges.push(all[first]);
            edges.extend(rest.iter().map(|&i| all[first + 1 + i]));
            saturates(n, &edges, all, fam).then_some(edges)
        })
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyComparison {
    pub n: usize,
    pub family_value: usize,
    pub disjoint_value: usize,
    pub difference: i64,
    pub union_vertices: usize,
    /// `C(|V(⊔)|, r)`.
    pub slack: u128,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

/// Compares `wsat(n, 𝓗)` with `wsat(n, ⊔𝓗)`.
pub fn wsat_family_vs_disjoint(n: usize, fam: &Family, opts: &WsatOptions, caps: &Caps) -> Result<FamilyComparison> {
    let parts: Vec<Hypergraph> = fam.patterns().cloned().collect();
    let union = disjoint_union(&parts)?;
    let union_fam = Family::single(&union)?;
    let family_value = wsat_exact(n, fam, opts, caps)?.value;
    let disjoint_value = wsat_exact(n, &union_fam, opts, caps)?.value;
    let slack = binom_usize(union.n(), fam.r());
    Ok(FamilyComparison {
        n,
        family_value,
        disjoint_value,
        difference: disjoint_value as i64 - family_value as i64,
        union_vertices: union.n(),
        slack,
        lower_holds: family_value <= disjoint_value,
        upper_holds: disjoint_value as u128 <= family_value as u128 + slack,
    })
}

/// `min |E(H)| - 1` over a family of 1-uniform patterns.
pub fn wsat_r1(fam: &Family) -> Result<usize> {
    if fam.r() != 1 {
        return Err(WsatError::arg(format!("wsat_r1 needs r = 1, got r = {}", fam.r())));
    }
    Ok(fam.patterns().map(|h| h.num_edges()).min().expect("non-empty family") - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: usize, h: &Hypergraph) -> usize {
        wsat_exact(n, &Family::single(h).unwrap(), &WsatOptions::default(), &Caps::default())
            .unwrap()
            .value
    }

    #[test]
    fn clique_examples() {
        assert_eq!(exact(4, &Hypergraph::complete(3, 2)), 3);
        assert_eq!(exact(5, &Hypergraph::complete(4, 2)), 7);
        assert_eq!(exact(5, &Hypergraph::complete(4, 3)), 6);
        assert_eq!(exact(6, &Hypergraph::complete(4, 2)), 9);
    }

    #[test]
    fn labelled_and_symmetric_agree() {
        let caps = Caps::default();
        let patterns = [
            Hypergraph::complete(3, 2),
            Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap(),
            Hypergraph::new(4, 2, vec![vec![0, 1], vec![2, 3]]).unwrap(),
            Hypergraph::complete(4, 2),
        ];
        for h in &patterns {
            for n in h.n()..=5 {
                let fam = Family::single(h).unwrap();
                let sym = wsat_exact(n, &fam, &WsatOptions::default(), &caps).unwrap();
                let lab = wsat_exact(
                    n,
                    &fam,
                    &WsatOptions {
                        symmetry: false,
                        use_bounds: false,
                        workers: Some(2),
                    },
                    &caps,
                )
                .unwrap();
                assert_eq!(sym.value, lab.value, "{h:?} n={n}");
                lab.certificate.validate_saturating(&fam).unwrap();
                // lex-least labelled witness is deterministic
                let again = wsat_exact(n, &fam, &WsatOptions { symmetry: false, use_bounds: false, workers: None }, &caps).unwrap();
                assert_eq!(again.witness, lab.witness);
            }
        }
    }

    #[test]
    fn starting_level_does_not_change_value() {
        let caps = Caps::default();
        let fam = Family::single(&Hypergraph::complete(4, 2)).unwrap();
        let with = wsat_exact(6, &fam, &WsatOptions::default(), &caps).unwrap();
        let without = wsat_exact(6, &fam, &WsatOptions { use_bounds: false, ..Default::default() }, &caps).unwrap();
        assert_eq!(with.value, without.value);
        assert!(without.levels.len() > with.levels.len());
    }

    #[test]
    fn argument_errors() {
        let caps = Caps::default();
        let fam = Family::single(&Hypergraph::complete(4, 2)).unwrap();
        assert!(matches!(wsat_exact(3, &fam, &WsatOptions::default(), &caps), Err(WsatError::InvalidArgument(_))));
        assert!(matches!(wsat_exact(8, &fam, &WsatOptions::default(), &caps), Err(WsatError::CapExceeded { .. })));
    }

    #[test]
    fn r1_formula_and_exact() {
        let caps = Caps::default();
        let k3 = Hypergraph::complete(3, 1);
        let fam = Family::single(&k3).unwrap();
        assert_eq!(wsat_r1(&fam).unwrap(), 2);
        assert_eq!(wsat_r1(&Family::single(&Hypergraph::complete(1, 1)).unwrap()).unwrap(), 0);
        let mixed = Family::new(vec![Hypergraph::complete(5, 1), Hypergraph::complete(2, 1)]).unwrap();
        assert_eq!(wsat_r1(&mixed).unwrap(), 1);
        for n in 5..=8 {
            assert_eq!(wsat_exact(n, &mixed, &WsatOptions::default(), &caps).unwrap().value, 1);
            assert_eq!(wsat_exact(n, &fam, &WsatOptions::default(), &caps).unwrap().value, 2);
        }
        assert!(wsat_r1(&Family::single(&Hypergraph::complete(3, 2)).unwrap()).is_err());
    }

    #[test]
    fn family_against_disjoint_union() {
        let caps = Caps::default();
        let k3 = Hypergraph::complete(3, 2);
        let rep = wsat_family_vs_disjoint(5, &Family::single(&k3).unwrap(), &WsatOptions::default(), &caps).unwrap();
        assert_eq!(rep.difference, 0);
        let two = Family::new(vec![k3.clone(), k3.clone()]).unwrap();
        let rep = wsat_family_vs_disjoint(6, &two, &WsatOptions::default(), &caps).unwrap();
        assert!(rep.lower_holds && rep.upper_holds, "{rep:?}");
        let mixed = Family::new(vec![k3, Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap()]).unwrap();
        let rep = wsat_family_vs_disjoint(6, &mixed, &WsatOptions::default(), &caps).unwrap();
        assert!(rep.lower_holds && rep.upper_holds, "{rep:?}");
    }

    #[test]
    fn sparseness_one_families_are_monotone_in_n() {
        let caps = Caps::default();
        // each has a vertex lying in exactly one edge
        let fams = [
            Family::single(&Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap()).unwrap(),
            Family::single(&Hypergraph::new(4, 2, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap()).unwrap(),
            Family::single(&Hypergraph::new(4, 3, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap()).unwrap(),
        ];
        for fam in &fams {
            let top = if fam.r() == 2 { 7 } else { 6 };
            let vals: Vec<usize> = (fam.max_vertices()..=top)
                .map(|n| wsat_exact(n, fam, &WsatOptions::default(), &caps).unwrap().value)
                .collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
        }
    }
}
