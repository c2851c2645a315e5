//! Local neighbourhoods `N(x, l)` and multi-layered neighbourhoods `MN(x, alpha)`.

use crate::error::{Error, Result};
use crate::network::{AdjEntry, LayerId, MultiLayerNetwork, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Layer(LayerId),
    Alpha(usize),
}

/// Members are sorted by ascending node index and never contain the owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSet {
    pub owner: NodeId,
    pub scope: Scope,
    pub members: Vec<NodeId>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn labels<'a>(&self, network: &'a MultiLayerNetwork) -> Vec<&'a str> {
        self.members.iter().map(|&y| network.node_label(y)).collect()
    }
}

/// Everything connecting a node to one neighbor, across all layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborLink {
    pub neighbor: NodeId,
    /// Distinct layers with an edge in either direction.
    pub support: usize,
    /// Sum of `w(x, y, l)` over layers, ascending layer order.
    pub out_weight: f64,
    /// Sum of `w(y, x, l)` over layers, ascending layer order.
    pub in_weight: f64,
}

/// Merges the outgoing and incoming adjacency of one node, yielding one
/// [`NeighborLink`] per distinct neighbor in ascending index order.
pub struct Links<'a> {
    out: &'a [AdjEntry],
    inc: &'a [AdjEntry],
}

impl<'a> Links<'a> {
    pub fn new(network: &'a MultiLayerNetwork, x: NodeId) -> Self {
        Self {
            out: network.out_edges(x),
            inc: network.in_edges(x),
        }
    }
}

fn take_run<'a>(slice: &mut &'a [AdjEntry], y: NodeId) -> &'a [AdjEntry] {
    let n = slice.iter().take_while(|a| a.neighbor == y).count();
    let (run, rest) = slice.split_at(n);
    *slice = rest;
    run
}

/// Number of distinct layers in two runs that are each sorted by layer.
fn distinct_layers(a: &[AdjEntry], b: &[AdjEntry]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].layer.cmp(&b[j].layer) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
        count += 1;
    }
    count + (a.len() - i) + (b.len() - j)
}

fn run_weight(run: &[AdjEntry]) -> f64 {
    run.iter().fold(0.0, |acc, a| acc + a.weight)
}

impl Iterator for Links<'_> {
    type Item = NeighborLink;

    fn next(&mut self) -> Option<NeighborLink> {
        let y = match (self.out.first(), self.inc.first()) {
            (None, None) => return None,
            (Some(o), None) => o.neighbor,
            (None, Some(i)) => i.neighbor,
            (Some(o), Some(i)) => o.neighbor.min(i.neighbor),
        };
        let out_run = take_run(&mut self.out, y);
        let in_run = take_run(&mut self.inc, y);
        Some(NeighborLink {
            neighbor: y,
            support: distinct_layers(out_run, in_run),
            out_weight: run_weight(out_run),
            in_weight: run_weight(in_run),
        })
    }
}

pub(crate) fn check_alpha(network: &MultiLayerNetwork, alpha: usize) -> Result<()> {
    if alpha >= 1 && alpha <= network.layer_count() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange {
            alpha,
            layers: network.layer_count(),
        })
    }
}

/// `N(x, l)`: nodes adjacent to `x` on layer `l` in either direction.
pub fn local_neighborhood(network: &MultiLayerNetwork, x: NodeId, layer: LayerId) -> Result<NeighborSet> {
    network.check_node(x)?;
    network.check_layer(layer)?;
    let mut members: Vec<NodeId> = network
        .out_edges(x)
        .iter()
        .chain(network.in_edges(x))
        .filter(|a| a.layer == layer)
        .map(|a| a.neighbor)
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(NeighborSet {
        owner: x,
        scope: Scope::Layer(layer),
        members,
    })
}

fn neighbor_run(adj: &[AdjEntry], y: NodeId) -> &[AdjEntry] {
    let lo = adj.partition_point(|a| a.neighbor < y);
    let hi = adj.partition_point(|a| a.neighbor <= y);
    &adj[lo..hi]
}

/// Number of distinct layers on which `x` and `y` are adjacent in either direction.
pub fn layer_support(network: &MultiLayerNetwork, x: NodeId, y: NodeId) -> Result<usize> {
    network.check_node(x)?;
    network.check_node(y)?;
    Ok(distinct_layers(
        neighbor_run(network.out_edges(x), y),
        neighbor_run(network.in_edges(x), y),
    ))
}

/// `MN(x, alpha)`: nodes adjacent to `x` on at least `alpha` layers.
pub fn multi_layer_neighborhood(network: &MultiLayerNetwork, x: NodeId, alpha: usize) -> Result<NeighborSet> {
    network.check_node(x)?;
    check_alpha(network, alpha)?;
    let members = Links::new(network, x)
        .filter(|l| l.support >= alpha)
        .map(|l| l.neighbor)
        .collect();
    Ok(NeighborSet {
        owner: x,
        scope: Scope::Alpha(alpha),
        members,
    })
}

/// `|MN(x, alpha)|` without materialising the set. Caller validates inputs.
pub(crate) fn mn_size_unchecked(network: &MultiLayerNetwork, x: NodeId, alpha: usize) -> usize {
    Links::new(network, x).filter(|l| l.support >= alpha).count()
}

impl MultiLayerNetwork {
    pub fn local_neighborhood(&self, x: NodeId, layer: LayerId) -> Result<NeighborSet> {
        local_neighborhood(self, x, layer)
    }

    pub fn layer_support(&self, x: NodeId, y: NodeId) -> Result<usize> {
        layer_support(self, x, y)
    }

    pub fn multi_layer_neighborhood(&self, x: NodeId, alpha: usize) -> Result<NeighborSet> {
        multi_layer_neighborhood(self, x, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(n: &MultiLayerNetwork, s: &NeighborSet) -> Vec<String> {
        let mut v: Vec<String> = s.labels(n).into_iter().map(str::to_owned).collect();
        v.sort();
        v
    }

    #[test]
    fn fig1_local() {
        let n = fixtures::fig1();
        let z = n.node_id("z").unwrap();
        let get = |l: &str| labels(&n, &n.local_neighborhood(z, n.layer_id(l).unwrap()).unwrap());
        assert_eq!(get("l1"), ["t", "u", "x", "y"]);
        assert_eq!(get("l2"), ["x"]);
        assert_eq!(get("l3"), ["t", "x", "y"]);
    }

    #[test]
    fn fig1_multi_layer() {
        let n = fixtures::fig1();
        let x = n.node_id("x").unwrap();
        let get = |a| labels(&n, &n.multi_layer_neighborhood(x, a).unwrap());
        assert_eq!(get(1), ["u", "v", "y", "z"]);
        assert_eq!(get(2), ["u", "v", "y", "z"]);
        assert_eq!(get(3), ["u", "y", "z"]);
    }

    #[test]
    fn f3_layer_support() {
        let n = fixtures::f3();
        let id = |s| n.node_id(s).unwrap();
        assert_eq!(n.layer_support(id("a"), id("b")).unwrap(), 2);
        assert_eq!(n.layer_support(id("b"), id("a")).unwrap(), 2);
        assert_eq!(n.layer_support(id("a"), id("c")).unwrap(), 1);
        assert_eq!(n.layer_support(id("a"), id("a")).unwrap(), 0);
        assert_eq!(n.layer_support(id("b"), id("c")).unwrap(), 0);
        let mn = n.multi_layer_neighborhood(id("a"), 2).unwrap();
        assert_eq!(mn.members, vec![id("b")]);
    }

    #[test]
    fn both_directions_count_layer_once() {
        // <a,b,l1> and <b,a,l1> exist in F3; support counts l1 once
        let n = fixtures::f3();
        let a = n.node_id("a").unwrap();
        let link = Links::new(&n, a).next().unwrap();
        assert_eq!(link.neighbor, n.node_id("b").unwrap());
        assert_eq!(link.support, 2);
        assert_eq!(link.out_weight, 2.0);
        assert_eq!(link.in_weight, 1.0);
    }

    #[test]
    fn isolated_node_has_empty_neighborhoods() {
        let mut b = fixtures::f3().to_builder();
        let d = b.add_node("d");
        let n = b.freeze();
        for l in n.layers() {
            assert!(n.local_neighborhood(d, l).unwrap().is_empty());
        }
        assert!(n.multi_layer_neighborhood(d, 1).unwrap().is_empty());
    }

    #[test]
    fn alpha_bounds() {
        let n = fixtures::f3();
        let a = n.node_id("a").unwrap();
        for alpha in [0, 3, 99] {
            assert!(matches!(
                n.multi_layer_neighborhood(a, alpha),
                Err(Error::AlphaOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn unknown_ids() {
        let n = fixtures::f3();
        let a = n.node_id("a").unwrap();
        assert!(matches!(n.local_neighborhood(NodeId(9), LayerId(0)), Err(Error::UnknownNode(_))));
        assert!(matches!(n.local_neighborhood(a, LayerId(9)), Err(Error::UnknownLayer(_))));
        assert!(matches!(n.layer_support(a, NodeId(9)), Err(Error::UnknownNode(_))));
        assert!(matches!(n.multi_layer_neighborhood(NodeId(9), 1), Err(Error::UnknownNode(_))));
    }
}
