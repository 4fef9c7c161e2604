//! Pattern corpora and expectation files.
//!
//! The builtin corpus is every non-empty `r`-graph without isolated
//! vertices on a small vertex range, one per isomorphism class. An
//! expectation file names a pattern and the values it should produce.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{gamma_shadow, gamma_subgraph, lb_delta_star, lb_gamma};
use crate::caps::Caps;
use crate::combinatorics::binom_usize;
use crate::enumerate::iso_classes;
use crate::error::{Result, WsatError};
use crate::hypergraph::{delta_star, sparseness, Hypergraph};
use crate::io::HypergraphJson;
use crate::rational::{self, Rational};
use crate::rhosat::{solve_rhosat, SolveMode};
use crate::wsat::{wsat_exact, Family, WsatOptions};

/// Iso classes of `r`-graphs with at least one edge and no isolated vertex
/// on `min_vertices..=max_vertices` vertices, in order of vertex count,
/// edge count, canonical key.
pub fn pattern_corpus(r: usize, min_vertices: usize, max_vertices: usize, caps: &Caps) -> Result<Vec<Hypergraph>> {
    if r == 0 {
        return Err(WsatError::arg("r must be at least 1"));
    }
    let mut out = Vec::new();
    for v in min_vertices.max(r)..=max_vertices {
        let m = binom_usize(v, r) as usize;
        for k in 1..=m {
            for (i, key) in iso_classes(v, r, k, caps)?.iter().enumerate() {
                let g = Hypergraph::from_masks(v, r, key.clone())?;
                if g.isolated_vertices().is_empty() {
                    out.push(g.with_label(format!("r{r}-v{v}-e{k}-{i}")));
                }
            }
        }
    }
    Ok(out)
}

/// Graphs on 2..=5 vertices and 3-graphs on 3..=5 vertices.
pub fn builtin_corpus(caps: &Caps) -> Result<Vec<Hypergraph>> {
    let mut out = pattern_corpus(2, 2, 5, caps)?;
    out.extend(pattern_corpus(3, 3, 5, caps)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "quantity", rename_all = "kebab-case")]
pub enum Quantity {
    Wsat { n: usize },
    Rhosat { n: usize },
    LbGamma { n: usize },
    LbDeltaStar { n: usize },
    GammaSubgraph { s: usize },
    GammaShadow { s: usize },
    DeltaStar,
    Sparseness,
}

impl Quantity {
    pub fn describe(&self) -> String {
        match self {
            Quantity::Wsat { n } => format!("wsat(n={n})"),
            Quantity::Rhosat { n } => format!("rhosat(n={n})"),
            Quantity::LbGamma { n } => format!("lb_gamma(n={n})"),
            Quantity::LbDeltaStar { n } => format!("lb_delta_star(n={n})"),
            Quantity::GammaSubgraph { s } => format!("gamma_subgraph(s={s})"),
            Quantity::GammaShadow { s } => format!("gamma_shadow(s={s})"),
            Quantity::DeltaStar => "delta_star".into(),
            Quantity::Sparseness => "sparseness".into(),
        }
    }

    pub fn evaluate(&self, h: &Hypergraph, caps: &Caps) -> Result<Rational> {
        Ok(match *self {
            Quantity::Wsat { n } => {
                rational::int(wsat_exact(n, &Family::single(h)?, &WsatOptions::default(), caps)?.value as i64)
            }
            Quantity::Rhosat { n } => solve_rhosat(h, n, SolveMode::Exact, caps)?
                .value
                .expect("exact mode"),
            Quantity::LbGamma { n } => lb_gamma(h, n, caps)?,
            Quantity::LbDeltaStar { n } => lb_delta_star(h, n)?,
            Quantity::GammaSubgraph { s } => gamma_subgraph(h, s, caps)?.value,
            Quantity::GammaShadow { s } => gamma_shadow(h, s, caps)?.value,
            Quantity::DeltaStar => rational::int(delta_star(h)?),
            Quantity::Sparseness => rational::int(sparseness(h)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub quantity: Quantity,
    #[serde(with = "crate::rational")]
    pub expect: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub pattern: HypergraphJson,
    pub checks: Vec<Expectation>,
}

/// Every `*.json` file in `dir`, by file name.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let read = |e: std::io::Error| WsatError::Parse(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(read)?
        .map(|entry| entry.map(|e| e.path()).map_err(read))
        .collect::<Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| WsatError::Parse(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| {
                WsatError::Parse(format!("{} line {} column {}: {e}", p.display(), e.line(), e.column()))
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub entry: String,
    pub check: String,
    #[serde(with = "crate::rational")]
    pub expected: Rational,
    #[serde(with = "crate::rational::option")]
    pub actual: Option<Rational>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Evaluates every expectation. Cap violations are skips with the reason;
/// any other error is a failure.
pub fn run_corpus_checks(entries: &[CorpusEntry], caps: &Caps) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for entry in entries {
        let pattern = entry.pattern.clone().into_hypergraph();
        for check in &entry.checks {
            let mut outcome = CheckOutcome {
                entry: entry.name.clone(),
                check: check.quantity.describe(),
                expected: check.expect.clone(),
                actual: None,
                status: Status::Fail,
                reason: None,
            };
            match pattern.as_ref().map_err(Clone::clone).and_then(|h| check.quantity.evaluate(h, caps)) {
                Ok(v) => {
                    outcome.status = if v == check.expect { Status::Pass } else { Status::Fail };
                    outcome.actual = Some(v);
                }
                Err(e @ WsatError::CapExceeded { .. }) => {
                    outcome.status = Status::Skip;
                    outcome.reason = Some(e.to_string());
                }
                Err(e) => outcome.reason = Some(e.to_string()),
            }
            out.push(outcome);
        }
    }
    out
}
