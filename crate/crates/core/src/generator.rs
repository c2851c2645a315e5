//! Seeded synthetic multi-layer networks.
//!
//! Every layer grows over the same arrival order. Nodes `0..seed_clique` start
//! fully connected (both directions) on every layer; each later node arrives in
//! turn and the layer's remaining edge budget is spread evenly over arrivals.
//! A new edge either
//!
//! * copies a `(source, target)` pair that already exists on another layer,
//!   with probability `overlap`, or
//! * picks a source uniformly among arrived nodes and a target with
//!   probability proportional to `in-degree + 1` on that layer.
//!
//! Loops and triples that already exist are resampled up to
//! [`MAX_ATTEMPTS`] times, then the edge is dropped, so the budget is an upper
//! bound. Randomness comes from ChaCha8 seeded with `seed` through
//! `SeedableRng::seed_from_u64`; identical configs produce identical networks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::network::{LayerId, MultiLayerNetwork, NetworkBuilder, NodeId};

pub const RNG_ALGORITHM: &str = "chacha8";
pub const MAX_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightModel {
    Constant(f64),
    /// Exponentially distributed with the given mean.
    Exponential(f64),
}

impl Default for WeightModel {
    fn default() -> Self {
        WeightModel::Constant(1.0)
    }
}

impl fmt::Display for WeightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightModel::Constant(w) => write!(f, "const:{w}"),
            WeightModel::Exponential(mean) => write!(f, "exp:{mean}"),
        }
    }
}

impl FromStr for WeightModel {
    type Err = String;

    /// `const:<w>` or `exp:<mean>`; a bare number means `const`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, value) = s.split_once(':').unwrap_or(("const", s));
        let value: f64 = value
            .parse()
            .map_err(|_| format!("invalid weight value in `{s}`"))?;
        match kind {
            "const" => Ok(WeightModel::Constant(value)),
            "exp" => Ok(WeightModel::Exponential(value)),
            other => Err(format!("unknown weight model `{other}` (const|exp)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub nodes: usize,
    pub layers: usize,
    /// Upper bound on edges per layer, seed clique included. The clique is
    /// always emitted in full even when it exceeds the budget.
    pub edges_per_layer: usize,
    pub seed_clique: usize,
    /// Probability that a new edge copies a pair from another layer.
    pub overlap: f64,
    pub seed: u64,
    pub weights: WeightModel,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            nodes: 1000,
            layers: 5,
            edges_per_layer: 5000,
            seed_clique: 3,
            overlap: 0.3,
            seed: 42,
            weights: WeightModel::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::ConfigInvalid(m));
        if self.seed_clique < 2 {
            return fail(format!("seed clique must be at least 2, got {}", self.seed_clique));
        }
        if self.nodes < self.seed_clique {
            return fail(format!(
                "{} nodes cannot hold a seed clique of {}",
                self.nodes, self.seed_clique
            ));
        }
        if u32::try_from(self.nodes).is_err() {
            return fail(format!("too many nodes: {}", self.nodes));
        }
        if self.layers == 0 {
            return fail("at least one layer is required".into());
        }
        if !(0.0..=1.0).contains(&self.overlap) {
            return fail(format!("overlap must lie in [0, 1], got {}", self.overlap));
        }
        match self.weights {
            WeightModel::Constant(w) if !(w.is_finite() && w >= 0.0) => {
                fail(format!("constant weight must be finite and non-negative, got {w}"))
            }
            WeightModel::Exponential(m) if !(m.is_finite() && m > 0.0) => {
                fail(format!("exponential mean must be finite and positive, got {m}"))
            }
            _ => Ok(()),
        }
    }

    /// Applies `key = value` lines over `self` and returns the keys that were
    /// set. `#` starts a comment.
    pub fn apply_key_values(&mut self, text: &str) -> Result<Vec<String>> {
        let mut applied = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| Error::ConfigInvalid(format!("line {}: {m}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("invalid {key} `{v}`")));
            match key {
                "nodes" => self.nodes = num(value)?,
                "layers" => self.layers = num(value)?,
                "edges_per_layer" => self.edges_per_layer = num(value)?,
                "seed_clique" => self.seed_clique = num(value)?,
                "overlap" => {
                    self.overlap = value
                        .parse()
                        .map_err(|_| bad(format!("invalid overlap `{value}`")))?
                }
                "seed" => {
                    self.seed = value
                        .parse()
                        .map_err(|_| bad(format!("invalid seed `{value}`")))?
                }
                "weights" => self.weights = value.parse().map_err(bad)?,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
            applied.push(key.to_owned());
        }
        Ok(applied)
    }

    /// One-line description recorded in generated files.
    pub fn describe(&self) -> String {
        format!(
            "generator=directed-preferential-attachment rng={RNG_ALGORITHM} seed={} nodes={} layers={} \
             edges_per_layer={} seed_clique={} overlap={} weights={}",
            self.seed,
            self.nodes,
            self.layers,
            self.edges_per_layer,
            self.seed_clique,
            self.overlap,
            self.weights
        )
    }
}

struct Sampler {
    rng: ChaCha8Rng,
    weights: WeightModel,
    exp: Option<Exp<f64>>,
}

impl Sampler {
    fn weight(&mut self) -> f64 {
        match (self.weights, &self.exp) {
            (WeightModel::Exponential(_), Some(exp)) => exp.sample(&mut self.rng),
            (WeightModel::Constant(w), _) | (WeightModel::Exponential(w), None) => w,
        }
    }
}

pub fn generate(config: &GeneratorConfig) -> Result<MultiLayerNetwork> {
    config.validate()?;
    let n = config.nodes;
    let k = config.layers;
    let s = config.seed_clique;

    let mut b = NetworkBuilder::new();
    for i in 0..n {
        b.add_node(&format!("n{i}"));
    }
    for l in 1..=k {
        b.add_layer(&format!("l{l}"));
    }
    let exp = match config.weights {
        WeightModel::Exponential(mean) => Some(Exp::new(1.0 / mean).expect("validated mean")),
        WeightModel::Constant(_) => None,
    };
    let mut sampler = Sampler {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        weights: config.weights,
        exp,
    };

    // urn[l] holds each arrived node once plus one copy per in-edge on l
    let mut urns: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut placed: Vec<(u32, u32, u32)> = Vec::new();

    for (l, urn) in urns.iter_mut().enumerate() {
        urn.extend(0..s as u32);
        for u in 0..s as u32 {
            for v in (0..s as u32).filter(|&v| v != u) {
                let w = sampler.weight();
                b.add_edge(NodeId(u), NodeId(v), LayerId(l as u32), w)?;
                urn.push(v);
                placed.push((u, v, l as u32));
            }
        }
    }

    let remaining = config.edges_per_layer.saturating_sub(s * (s - 1)) as u128;
    let arrivals = (n - s) as u128;
    for step in 0..arrivals {
        let newcomer = (s as u128 + step) as u32;
        for urn in urns.iter_mut() {
            urn.push(newcomer);
        }
        let quota = (remaining * (step + 1) / arrivals - remaining * step / arrivals) as usize;
        for l in 0..k {
            for _ in 0..quota {
                place_edge(&mut b, &mut sampler, &mut urns[l], &mut placed, l as u32, newcomer + 1, config.overlap, k);
            }
        }
    }
    Ok(b.freeze())
}

#[allow(clippy::too_many_arguments)]
fn place_edge(
    b: &mut NetworkBuilder,
    sampler: &mut Sampler,
    urn: &mut Vec<u32>,
    placed: &mut Vec<(u32, u32, u32)>,
    layer: u32,
    arrived: u32,
    overlap: f64,
    layers: usize,
) {
    for _ in 0..MAX_ATTEMPTS {
        let copy = sampler.rng.random::<f64>() < overlap;
        let (u, v) = if copy && layers > 1 {
            let (u, v, l) = placed[sampler.rng.random_range(0..placed.len())];
            if l == layer {
                continue;
            }
            (u, v)
        } else {
            let u = sampler.rng.random_range(0..arrived);
            let v = urn[sampler.rng.random_range(0..urn.len())];
            (u, v)
        };
        let (su, sv, sl) = (NodeId(u), NodeId(v), LayerId(layer));
        if u == v || b.contains_edge(su, sv, sl) {
            continue;
        }
        let w = sampler.weight();
        b.add_edge(su, sv, sl, w).expect("checked loop and duplicate");
        urn.push(v);
        placed.push((u, v, layer));
        return;
    }
}
