//! Cross-layer degree centrality (CLDC) and its in/out variants.
//!
//! For a node `x` and threshold `alpha`, the score sums the weights of every
//! edge between `x` and a member of `MN(x, alpha)`, over all layers on which
//! such an edge exists, and divides by `(m - 1) * |L|` where `m` counts every
//! node including isolated ones. The in/out variants keep only incoming or
//! outgoing edges.
//!
//! Sums run in ascending neighbor index, then ascending layer index. The batch
//! path calls the same per-node kernel, so its results are bitwise identical
//! to per-node calls for any thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::neighborhood::{check_alpha, Links};
use crate::network::{MultiLayerNetwork, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Total,
    In,
    Out,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Total, Variant::In, Variant::Out];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Total => "total",
            Variant::In => "in",
            Variant::Out => "out",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "total" => Ok(Variant::Total),
            "in" => Ok(Variant::In),
            "out" => Ok(Variant::Out),
            other => Err(format!("unknown variant `{other}` (total|in|out)")),
        }
    }
}

/// Weight sums between a node and its multi-layered neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CrossLayerSums {
    pub out_weight: f64,
    pub in_weight: f64,
    pub neighbors: usize,
}

impl CrossLayerSums {
    pub fn of(network: &MultiLayerNetwork, x: NodeId, alpha: usize) -> Self {
        let mut sums = Self::default();
        for link in Links::new(network, x).filter(|l| l.support >= alpha) {
            sums.out_weight += link.out_weight;
            sums.in_weight += link.in_weight;
            sums.neighbors += 1;
        }
        sums
    }

    pub fn numerator(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Total => self.out_weight + self.in_weight,
            Variant::In => self.in_weight,
            Variant::Out => self.out_weight,
        }
    }
}

fn denominator(network: &MultiLayerNetwork) -> Result<f64> {
    let m = network.node_count();
    if m < 2 {
        return Err(Error::DegenerateNetwork(m));
    }
    Ok((m - 1) as f64 * network.layer_count() as f64)
}

/// Scores for every node at one `(alpha, variant)`, indexed by node.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub alpha: usize,
    pub variant: Variant,
    pub values: Vec<f64>,
}

impl CentralityScores {
    pub fn get(&self, node: NodeId) -> f64 {
        self.values[node.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (NodeId(i as u32), v))
    }

    pub fn positive_count(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }
}

impl MultiLayerNetwork {
    /// Score of one node for the given variant.
    pub fn centrality(&self, x: NodeId, alpha: usize, variant: Variant) -> Result<f64> {
        self.check_node(x)?;
        check_alpha(self, alpha)?;
        let denom = denominator(self)?;
        Ok(CrossLayerSums::of(self, x, alpha).numerator(variant) / denom)
    }

    /// `CLDC(x, alpha)`.
    pub fn cldc(&self, x: NodeId, alpha: usize) -> Result<f64> {
        self.centrality(x, alpha, Variant::Total)
    }

    /// `CLDC_in(x, alpha)`.
    pub fn cldc_in(&self, x: NodeId, alpha: usize) -> Result<f64> {
        self.centrality(x, alpha, Variant::In)
    }

    /// `CLDC_out(x, alpha)`.
    pub fn cldc_out(&self, x: NodeId, alpha: usize) -> Result<f64> {
        self.centrality(x, alpha, Variant::Out)
    }

    /// Scores for every node on the current rayon pool.
    pub fn cldc_batch(&self, alpha: usize, variant: Variant) -> Result<CentralityScores> {
        check_alpha(self, alpha)?;
        let denom = denominator(self)?;
        let values = (0..self.node_count() as u32)
            .into_par_iter()
            .map(|i| CrossLayerSums::of(self, NodeId(i), alpha).numerator(variant) / denom)
            .collect();
        Ok(CentralityScores {
            alpha,
            variant,
            values,
        })
    }

    /// Like [`cldc_batch`](Self::cldc_batch) on a dedicated pool of `threads` workers.
    pub fn cldc_batch_with_threads(
        &self,
        alpha: usize,
        variant: Variant,
        threads: usize,
    ) -> Result<CentralityScores> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        pool.install(|| self.cldc_batch(alpha, variant))
    }
}
