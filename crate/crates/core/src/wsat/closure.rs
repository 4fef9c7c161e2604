//! Bootstrap closure and replayable saturation certificates.
//!
//! Monotonicity lemma: if adding `e` to `G` creates a new copy of `H` and
//! `G ⊆ G'` with `e ∉ G'`, then adding `e` to `G'` creates one too, since the
//! same embedding still maps every other pattern edge into `G' ⊇ G`.
//! Consequently an edge that becomes addable stays addable, every maximal run
//! of additions from `F` ends at the same edge set (any two runs can each
//! absorb the other's edges in order), and the greedy fixpoint equals `K_n^r`
//! exactly when some ordering witnesses weak saturation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::combinatorics::k_subsets;
use crate::error::{Result, WsatError};
use crate::hypergraph::{mask_of, vertices_of, Hypergraph};

use super::embedding::{is_valid_embedding, HostSet, PreparedPattern};

/// Non-empty list of non-empty patterns with a common uniformity.
#[derive(Debug, Clone)]
pub struct Family {
    prepared: Vec<PreparedPattern>,
}

impl Family {
    pub fn new(patterns: Vec<Hypergraph>) -> Result<Self> {
        let Some(first) = patterns.first() else {
            return Err(WsatError::arg("family must contain a pattern"));
        };
        let r = first.r();
        if r == 0 {
            return Err(WsatError::arg("patterns must have r >= 1"));
        }
        for (i, p) in patterns.iter().enumerate() {
            if p.is_empty() {
                return Err(WsatError::arg(format!("pattern {i} has no edges")));
            }
            if p.r() != r {
                return Err(WsatError::arg(format!("pattern {i} has r = {}, expected {r}", p.r())));
            }
        }
        Ok(Family {
            prepared: patterns.iter().map(PreparedPattern::new).collect(),
        })
    }

    pub fn single(h: &Hypergraph) -> Result<Self> {
        Family::new(vec![h.clone()])
    }

    pub fn r(&self) -> usize {
        self.prepared[0].pattern().r()
    }

    pub fn len(&self) -> usize {
        self.prepared.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn patterns(&self) -> impl Iterator<Item = &Hypergraph> {
        self.prepared.iter().map(|p| p.pattern())
    }

    pub fn pattern(&self, i: usize) -> Option<&Hypergraph> {
        self.prepared.get(i).map(|p| p.pattern())
    }

    pub fn max_vertices(&self) -> usize {
        self.patterns().map(|p| p.n()).max().unwrap_or(0)
    }

    fn find(&self, host: &HostSet, e: u64) -> Option<(usize, Vec<usize>)> {
        self.prepared
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.find(host, e).map(|phi| (i, phi)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationStep {
    pub edge: Vec<usize>,
    pub pattern: usize,
    /// Image of each pattern vertex.
    pub embedding: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationCertificate {
    pub n: usize,
    pub r: usize,
    pub initial: Vec<Vec<usize>>,
    pub steps: Vec<SaturationStep>,
}

impl SaturationCertificate {
    /// Replays every step, checking each witness, and returns the end state.
    pub fn replay(&self, fam: &Family) -> Result<Hypergraph> {
        if self.r != fam.r() || self.n > 64 {
            return Err(WsatError::pre("certificate does not match the family"));
        }
        let start = Hypergraph::new(self.n, self.r, self.initial.iter().cloned())?;
        let mut host = HostSet::from_edges(self.n, start.edges());
        let mut edges = start.edges().to_vec();
        for (i, step) in self.steps.iter().enumerate() {
            let bad = |why: &str| WsatError::pre(format!("step {i}: {why}"));
            let valid_edge = step.edge.len() == self.r
                && step.edge.windows(2).all(|w| w[0] < w[1])
                && step.edge.iter().all(|&v| v < self.n);
            if !valid_edge {
                return Err(bad("not an r-subset of [n]"));
            }
            let e = mask_of(&step.edge);
            if host.contains(e) {
                return Err(bad("edge already present"));
            }
            let h = fam.pattern(step.pattern).ok_or_else(|| bad("no such pattern"))?;
            if !is_valid_embedding(&host, h, e, &step.embedding) {
                return Err(bad("embedding is not a new copy through the edge"));
            }
            host.insert(e);
            edges.push(e);
        }
        Hypergraph::from_masks(self.n, self.r, edges)
    }

    /// Replays and additionally requires the end state to be `K_n^r`.
    pub fn validate_saturating(&self, fam: &Family) -> Result<()> {
        let end = self.replay(fam)?;
        if end != Hypergraph::complete(self.n, self.r) {
            return Err(WsatError::pre("certificate does not reach the complete hypergraph"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub closure: Hypergraph,
    pub certificate: SaturationCertificate,
}

impl ClosureResult {
    pub fn is_complete(&self) -> bool {
        self.closure.num_edges() as u128 == crate::hypergraph::complete_edge_count(self.closure.n(), self.closure.r())
    }
}

/// Greedy fixpoint scanning missing edges in lex order.
pub fn closure(f: &Hypergraph, fam: &Family, caps: &Caps) -> Result<ClosureResult> {
    closure_in_order(f, fam, None, caps)
}

/// As [`closure`] but scanning missing edges in a seeded random order.
pub fn closure_shuffled(f: &Hypergraph, fam: &Family, seed: u64, caps: &Caps) -> Result<ClosureResult> {
    closure_in_order(f, fam, Some(seed), caps)
}

fn closure_in_order(f: &Hypergraph, fam: &Family, seed: Option<u64>, caps: &Caps) -> Result<ClosureResult> {
    if f.r() != fam.r() {
        return Err(WsatError::arg(format!("host has r = {}, family has r = {}", f.r(), fam.r())));
    }
    let total = crate::hypergraph::complete_edge_count(f.n(), f.r());
    caps.check("closure edge count", total, caps.closure_edges as u128)?;
    let mut host = HostSet::from_edges(f.n(), f.edges());
    let mut pending: Vec<u64> = k_subsets(f.n(), f.r()).filter(|&e| !host.contains(e)).collect();
    crate::hypergraph::sort_lex(&mut pending);
    if let Some(seed) = seed {
        pending.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    }
    let mut steps = Vec::new();
    let mut edges = f.edges().to_vec();
    loop {
        let before = pending.len();
        pending.retain(|&e| match fam.find(&host, e) {
            Some((pattern, embedding)) => {
                host.insert(e);
                edges.push(e);
                steps.push(SaturationStep {
                    edge: vertices_of(e),
                    pattern,
                    embedding,
                });
                false
            }
            None => true,
        });
        if pending.len() == before || pending.is_empty() {
            break;
        }
    }
    Ok(ClosureResult {
        closure: Hypergraph::from_masks(f.n(), f.r(), edges)?,
        certificate: SaturationCertificate {
            n: f.n(),
            r: f.r(),
            initial: f.edge_lists(),
            steps,
        },
    })
}

pub fn is_weakly_saturated(f: &Hypergraph, fam: &Family, caps: &Caps) -> Result<bool> {
    Ok(closure(f, fam, caps)?.is_complete())
}

/// Certificate-free saturation test used by the exact search; `all` lists
/// every edge of `K_n^r`.
pub(crate) fn saturates(n: usize, initial: &[u64], all: &[u64], fam: &Family) -> bool {
    let mut host = HostSet::from_edges(n, initial);
    let mut pending: Vec<u64> = all.iter().copied().filter(|&e| !host.contains(e)).collect();
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|&e| {
            if fam.find(&host, e).is_some() {
                host.insert(e);
                false
            } else {
                true
            }
        });
        if pending.len() == before {
            return false;
        }
    }
    true
}
