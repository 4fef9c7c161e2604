//! Enumeration of `e`-edge hypergraphs on `[n]`, labelled or up to isomorphism.
//!
//! Isomorphism classes are generated level by level: every class with
//! `k + 1` edges arises from some class with `k` edges by adding one edge,
//! so canonicalizing all one-edge extensions of level `k` yields level
//! `k + 1` exactly. Levels are cached per `(n, r)` for the process lifetime.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::canonical::canonical_key;
use crate::caps::Caps;
use crate::combinatorics::binom;
use crate::error::{Result, WsatError};
use crate::hypergraph::Hypergraph;

/// Iterator over `k`-element index combinations of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumOptions {
    /// Yield one canonical representative per isomorphism class.
    pub iso_classes: bool,
}

/// Every `e`-edge `r`-uniform hypergraph on `[n]`, each exactly once.
pub fn enumerate_hypergraphs(
    n: usize,
    r: usize,
    e: usize,
    opts: EnumOptions,
    caps: &Caps,
) -> Result<Box<dyn Iterator<Item = Hypergraph> + Send>> {
    let m = binom(n as u64, r as u64);
    if e as u128 > m {
        return Err(WsatError::arg(format!("{e} edges exceed C({n},{r}) = {m}")));
    }
    if opts.iso_classes {
        let classes = iso_classes(n, r, e, caps)?;
        let len = classes.len();
        return Ok(Box::new((0..len).map(move |i| {
            Hypergraph::from_masks(n, r, classes[i].clone()).expect("valid class")
        })));
    }
    let count = binom(m as u64, e as u64);
    caps.check(
        &format!("labelled enumeration C(C({n},{r}),{e})"),
        count,
        caps.enumeration,
    )?;
    let all = Hypergraph::complete(n, r).edges().to_vec();
    Ok(Box::new(Combinations::new(all.len(), e).map(move |sel| {
        Hypergraph::from_masks(n, r, sel.iter().map(|&i| all[i]).collect()).expect("subset")
    })))
}

type Level = Arc<Vec<Vec<u64>>>;

struct ClassLevels {
    levels: Vec<Level>,
}

fn cache() -> &'static Mutex<HashMap<(usize, usize), Arc<Mutex<ClassLevels>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Mutex<ClassLevels>>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Canonical keys of all isomorphism classes of `k`-edge `r`-graphs on `[n]`.
pub fn iso_classes(n: usize, r: usize, k: usize, caps: &Caps) -> Result<Level> {
    let m = binom(n as u64, r as u64);
    caps.check(
        &format!("isomorphism-class generation C({n},{r})"),
        m,
        caps.iso_edges as u128,
    )?;
    if k as u128 > m {
        return Err(WsatError::arg(format!("{k} edges exceed C({n},{r}) = {m}")));
    }
    let entry = {
        let mut map = cache().lock().expect("class cache poisoned");
        map.entry((n, r))
            .or_insert_with(|| {
                Arc::new(Mutex::new(ClassLevels {
                    levels: vec![Arc::new(vec![Vec::new()])],
                }))
            })
            .clone()
    };
    let all = Hypergraph::complete(n, r).edges().to_vec();
    loop {
        // the lock is never held across parallel work: a rayon worker waiting
        // inside `extend_level` may steal a task that asks for the same cache
        let (have, prev) = {
            let levels = entry.lock().expect("class levels poisoned");
            if levels.levels.len() > k {
                return Ok(levels.levels[k].clone());
            }
            (levels.levels.len(), levels.levels.last().expect("level 0").clone())
        };
        let next = Arc::new(extend_level(n, &all, &prev));
        let mut levels = entry.lock().expect("class levels poisoned");
        if levels.levels.len() == have {
            levels.levels.push(next);
        }
    }
}

fn extend_level(n: usize, all: &[u64], prev: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let found: HashSet<Vec<u64>> = prev
        .par_iter()
        .flat_map_iter(|class| {
            let mut local = HashSet::new();
            for &x in all {
                if class.binary_search(&x).is_ok() {
                    continue;
                }
                let mut edges = class.clone();
                edges.push(x);
                local.insert(canonical_key(n, &edges));
            }
            local.into_iter()
        })
        .collect();
    let mut out: Vec<Vec<u64>> = found.into_iter().collect();
    out.sort_unstable();
    out
}

/// Number of isomorphism classes of `r`-graphs on `[n]`, summed over all sizes.
pub fn count_all_classes(n: usize, r: usize, caps: &Caps) -> Result<usize> {
    let m = binom(n as u64, r as u64) as usize;
    let mut total = 0;
    for k in 0..=m {
        total += iso_classes(n, r, k, caps)?.len();
    }
    Ok(total)
}
