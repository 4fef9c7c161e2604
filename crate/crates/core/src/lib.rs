//! Weak saturation of uniform hypergraphs: invariants, exact search,
//! count polymatroid lower bounds, constructions and the set-function LP.

pub mod bounds;
pub mod canonical;
pub mod caps;
pub mod combinatorics;
pub mod constructions;
pub mod copies;
pub mod corpus;
pub mod count_polymatroid;
pub mod enumerate;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod kruskal_katona;
pub mod rational;
pub mod rhosat;
pub mod verify;
pub mod wsat;

pub use caps::Caps;
pub use error::{Result, WsatError};
pub use hypergraph::{Hypergraph, MultiEdgeSet, VertexSubset};
pub use rational::Rational;
pub use wsat::{Family, SaturationCertificate};
