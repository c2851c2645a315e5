//! Small reference networks shipped with the crate.

use crate::io::{parse_edge_list, IngestOptions};
use crate::network::MultiLayerNetwork;

/// Three nodes, two layers: `a->b`, `b->a`, `a->c` on `l1` and `a->b` on `l2`.
pub const F3_TSV: &str = include_str!("../fixtures/f3.tsv");

/// The three-layer, six-user example network with its published neighbourhoods.
pub const FIG1_TSV: &str = include_str!("../fixtures/fig1.tsv");

pub fn f3() -> MultiLayerNetwork {
    parse_edge_list(F3_TSV.as_bytes(), &IngestOptions::default()).expect("valid fixture")
}

pub fn fig1() -> MultiLayerNetwork {
    parse_edge_list(FIG1_TSV.as_bytes(), &IngestOptions::default()).expect("valid fixture")
}
