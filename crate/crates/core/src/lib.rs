//! Multi-layered social networks: the `<V, E, L>` model, local and
//! multi-layered neighbourhoods, cross-layer degree centralities, dataset
//! analytics and a seeded synthetic generator.

pub mod analytics;
pub mod centrality;
pub mod error;
pub mod fixtures;
pub mod generator;
pub mod io;
pub mod neighborhood;
pub mod network;

pub use centrality::{CentralityScores, CrossLayerSums, Variant};
pub use error::{Error, Result};
pub use generator::{generate, GeneratorConfig, WeightModel};
pub use io::{parse_edge_list, write_edge_list, DuplicatePolicy, IngestOptions, LoopPolicy};
pub use neighborhood::{NeighborLink, NeighborSet, Scope};
pub use network::{Counts, Edge, LayerId, MultiLayerNetwork, NetworkBuilder, NodeId};
