//! Size caps for the exhaustive routines.
//!
//! Every cap is an explicit refusal threshold; nothing silently
//! approximates when a cap is exceeded.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WsatError};

pub const CAP_OVERRIDE_ENV: &str = "WSAT_CAP_OVERRIDE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Labelled enumeration size `C(C(n,r), e)`.
    pub enumeration: u128,
    /// `C(n,r)` limit for isomorphism-class generation.
    pub iso_edges: usize,
    /// `C(n,r)` limit for exact weak saturation search.
    pub wsat_edges: usize,
    /// `C(n,r)` limit for building set-function LPs.
    pub lp_edges: usize,
    /// `C(n,r)` limit for the exact simplex.
    pub lp_exact_edges: usize,
    /// Total multiplicity for matroid rank computation.
    pub matroid_elements: usize,
    /// Distinct edges examined by one independence test.
    pub projection: usize,
    /// Items enumerated by the gamma minimizations.
    pub gamma_items: usize,
    /// `C(n,r)` limit for closure computations.
    pub closure_edges: usize,
    /// Vertex limit on the base pattern of the stage construction.
    pub construction_vertices: usize,
    /// Worker threads for parallel searches; 0 means the global pool.
    pub workers: usize,
}

/// Hard ceiling for the LP size regardless of overrides.
pub const LP_HARD_CAP: usize = 20;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 10_000_000,
            iso_edges: 28,
            wsat_edges: 24,
            lp_edges: 16,
            lp_exact_edges: 12,
            matroid_elements: 40,
            projection: 20,
            gamma_items: 22,
            closure_edges: 200_000,
            construction_vertices: 12,
            workers: 0,
        }
    }
}

impl Caps {
    /// Defaults adjusted by `WSAT_CAP_OVERRIDE`, if set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(spec) = std::env::var(CAP_OVERRIDE_ENV) {
            caps.apply_overrides(&spec)?;
        }
        Ok(caps)
    }

    /// Applies `key=value,key=value` pairs.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| WsatError::Parse(format!("cap override {item:?} lacks '='")))?;
            let value: u128 = value
                .trim()
                .parse()
                .map_err(|_| WsatError::Parse(format!("cap override {item:?} is not a number")))?;
            if value == 0 && key.trim() != "workers" {
                return Err(WsatError::arg(format!("cap {key} must be positive")));
            }
            let small = || usize::try_from(value).map_err(|_| WsatError::arg("cap too large"));
            match key.trim() {
                "enumeration" => self.enumeration = value,
                "iso_edges" => self.iso_edges = small()?,
                "wsat_edges" => self.wsat_edges = small()?,
                "lp_edges" => self.lp_edges = small()?.min(LP_HARD_CAP),
                "lp_exact_edges" => self.lp_exact_edges = small()?.min(LP_HARD_CAP),
                "matroid_elements" => self.matroid_elements = small()?,
                "projection" => self.projection = small()?,
                "gamma_items" => self.gamma_items = small()?.min(63),
                "closure_edges" => self.closure_edges = small()?,
                "construction_vertices" => self.construction_vertices = small()?,
                "workers" => self.workers = small()?,
                other => return Err(WsatError::Parse(format!("unknown cap {other:?}"))),
            }
        }
        Ok(())
    }

    pub(crate) fn check(&self, what: &str, size: u128, cap: u128) -> Result<()> {
        if size > cap {
            Err(WsatError::cap(what, size, cap))
        } else {
            Ok(())
        }
    }
}
