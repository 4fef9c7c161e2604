//! JSON formats for hypergraphs and count parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WsatError};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HypergraphJson {
    pub n: usize,
    pub r: usize,
    pub edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Hypergraph> for HypergraphJson {
    fn from(g: &Hypergraph) -> Self {
        HypergraphJson {
            n: g.n(),
            r: g.r(),
            edges: g.edge_lists(),
            label: g.label().map(str::to_owned),
        }
    }
}

impl HypergraphJson {
    /// Validates the bit-exact canonical form: ascending vertices inside
    /// each edge and strictly ascending lexicographic edge order.
    pub fn into_hypergraph(self) -> Result<Hypergraph> {
        if self.r == 0 {
            return Err(WsatError::Parse("uniformity must be at least 1".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(WsatError::Parse(format!(
                    "edge #{i} {e:?} is not strictly ascending"
                )));
            }
        }
        for (i, w) in self.edges.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(WsatError::Parse(format!(
                    "edges #{i} and #{} are not in strictly ascending order",
                    i + 1
                )));
            }
        }
        let g = Hypergraph::new(self.n, self.r, self.edges)
            .map_err(|e| WsatError::Parse(e.to_string()))?;
        Ok(match self.label {
            Some(l) => g.with_label(l),
            None => g,
        })
    }
}

pub fn hypergraph_from_json(text: &str) -> Result<Hypergraph> {
    let raw: HypergraphJson = serde_json::from_str(text).map_err(|e| {
        WsatError::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    raw.into_hypergraph()
}

pub fn hypergraph_to_json(g: &Hypergraph) -> String {
    serde_json::to_string(&HypergraphJson::from(g)).expect("serializable")
}

pub fn read_hypergraph(path: &std::path::Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| WsatError::Parse(format!("{}: {e}", path.display())))?;
    hypergraph_from_json(&text).map_err(|e| WsatError::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Hypergraph::complete(4, 3).with_label("K4^3");
        let text = hypergraph_to_json(&g);
        assert_eq!(
            text,
            r#"{"n":4,"r":3,"edges":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]],"label":"K4^3"}"#
        );
        let back = hypergraph_from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.label(), Some("K4^3"));
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(hypergraph_from_json(r#"{"n":3,"r":2,"edges":[[1,0]]}"#).is_err());
        assert!(hypergraph_from_json(r#"{"n":3,"r":2,"edges":[[0,2],[0,1]]}"#).is_err());
        assert!(hypergraph_from_json(r#"{"n":3,"r":2,"edges":[[0,1],[0,1]]}"#).is_err());
        assert!(hypergraph_from_json(r#"{"n":3,"r":2,"edges":[[0,3]]}"#).is_err());
        let err = hypergraph_from_json("{\n\"n\": 3,\n\"r\": 2,\n\"edges\": [[0,1],\n}").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }
}
