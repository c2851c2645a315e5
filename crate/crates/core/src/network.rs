//! The multi-layered network `<V, E, L>`.
//!
//! Nodes and layers carry opaque text labels mapped to dense indices. Edges are
//! directed, loop-free, and unique per `(source, target, layer)` triple, so an
//! ordered pair of nodes may be joined by at most one edge per layer.
//!
//! Networks are assembled with a [`NetworkBuilder`] (single writer) and then
//! frozen into an immutable [`MultiLayerNetwork`], which keeps one adjacency
//! table per direction. Each node's adjacency slice is sorted by
//! `(neighbor, layer)` so one merge pass over the outgoing and incoming slices
//! yields every neighbor together with all the layers that connect it.

use std::collections::HashMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Dense index of a node, contiguous from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// Dense index of a layer, contiguous from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L#{}", self.0)
    }
}

/// One directed edge `<source, target, layer>` with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub layer: LayerId,
    pub weight: f64,
}

/// Bidirectional label dictionary.
#[derive(Debug, Clone, Default)]
struct Interner {
    labels: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = u32::try_from(self.labels.len()).expect("more than u32::MAX labels");
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    fn get(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Returns true if `label` can be stored in the text edge-list format.
pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty() && !label.contains(['\t', '\n', '\r'])
}

/// Single-writer construction phase of a network.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    nodes: Interner,
    layers: Interner,
    edges: Vec<Edge>,
    lookup: FxHashMap<(u32, u32, u32), usize>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a node. Idempotent: an existing label returns its id.
    pub fn add_node(&mut self, label: &str) -> NodeId {
        NodeId(self.nodes.intern(label))
    }

    /// Registers a layer. Idempotent like [`add_node`](Self::add_node).
    pub fn add_layer(&mut self, label: &str) -> LayerId {
        LayerId(self.layers.intern(label))
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.nodes.get(label).map(NodeId)
    }

    pub fn layer_id(&self, label: &str) -> Option<LayerId> {
        self.layers.get(label).map(LayerId)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, source: NodeId, target: NodeId, layer: LayerId) -> bool {
        self.lookup.contains_key(&(source.0, target.0, layer.0))
    }

    pub fn edge_weight(&self, source: NodeId, target: NodeId, layer: LayerId) -> Option<f64> {
        self.lookup
            .get(&(source.0, target.0, layer.0))
            .map(|&i| self.edges[i].weight)
    }

    /// Validates and stores an edge.
    pub fn add_edge(
        &mut self,
        source: NodeId,
        target: NodeId,
        layer: LayerId,
        weight: f64,
    ) -> Result<()> {
        self.check_node(source)?;
        self.check_node(target)?;
        if layer.index() >= self.layers.len() {
            return Err(Error::UnknownLayer(layer.to_string()));
        }
        check_weight(weight)?;
        if source == target {
            return Err(Error::LoopRejected(self.nodes.labels[source.index()].clone()));
        }
        let key = (source.0, target.0, layer.0);
        if self.lookup.contains_key(&key) {
            return Err(Error::DuplicateEdge {
                source_label: self.nodes.labels[source.index()].clone(),
                target_label: self.nodes.labels[target.index()].clone(),
                layer: self.layers.labels[layer.index()].clone(),
            });
        }
        self.lookup.insert(key, self.edges.len());
        self.edges.push(Edge {
            source,
            target,
            layer,
            weight,
        });
        Ok(())
    }

    /// Overwrites the weight of an existing edge. Returns false if absent.
    pub(crate) fn set_weight(
        &mut self,
        source: NodeId,
        target: NodeId,
        layer: LayerId,
        weight: f64,
    ) -> Result<bool> {
        check_weight(weight)?;
        match self.lookup.get(&(source.0, target.0, layer.0)) {
            Some(&i) => {
                self.edges[i].weight = weight;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node.index() < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(node.to_string()))
        }
    }

    /// Ends the construction phase.
    pub fn freeze(self) -> MultiLayerNetwork {
        let m = self.nodes.len();
        let mut per_layer = vec![0usize; self.layers.len()];
        for e in &self.edges {
            per_layer[e.layer.index()] += 1;
        }
        let outgoing = Adjacency::build(m, &self.edges, |e| (e.source, e.target));
        let incoming = Adjacency::build(m, &self.edges, |e| (e.target, e.source));
        MultiLayerNetwork {
            nodes: self.nodes,
            layers: self.layers,
            outgoing,
            incoming,
            per_layer,
        }
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if weight.is_finite() && weight >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight(weight))
    }
}

/// One adjacency entry as seen from the owning node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjEntry {
    pub neighbor: NodeId,
    pub layer: LayerId,
    pub weight: f64,
}

/// Compressed per-node adjacency for one direction.
#[derive(Debug, Clone, Default)]
struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<AdjEntry>,
}

impl Adjacency {
    fn build(m: usize, edges: &[Edge], ends: impl Fn(&Edge) -> (NodeId, NodeId)) -> Self {
        let mut offsets = vec![0usize; m + 1];
        for e in edges {
            offsets[ends(e).0.index() + 1] += 1;
        }
        for i in 0..m {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let placeholder = AdjEntry {
            neighbor: NodeId(0),
            layer: LayerId(0),
            weight: 0.0,
        };
        let mut entries = vec![placeholder; edges.len()];
        for e in edges {
            let (owner, neighbor) = ends(e);
            let slot = &mut cursor[owner.index()];
            entries[*slot] = AdjEntry {
                neighbor,
                layer: e.layer,
                weight: e.weight,
            };
            *slot += 1;
        }
        for w in offsets.windows(2) {
            entries[w[0]..w[1]].sort_unstable_by_key(|a| (a.neighbor, a.layer));
        }
        Self { offsets, entries }
    }

    fn of(&self, node: NodeId) -> &[AdjEntry] {
        let i = node.index();
        &self.entries[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Structural counts of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub nodes: usize,
    pub layers: usize,
    pub edges: usize,
    pub per_layer: Vec<usize>,
}

/// Frozen, immutable multi-layered network. Safe to share across threads.
#[derive(Debug, Clone)]
pub struct MultiLayerNetwork {
    nodes: Interner,
    layers: Interner,
    outgoing: Adjacency,
    incoming: Adjacency,
    per_layer: Vec<usize>,
}

impl Default for MultiLayerNetwork {
    fn default() -> Self {
        NetworkBuilder::new().freeze()
    }
}

impl MultiLayerNetwork {
    /// `m = |V|`, isolated nodes included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.outgoing.entries.len()
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.nodes.get(label).map(NodeId)
    }

    pub fn layer_id(&self, label: &str) -> Option<LayerId> {
        self.layers.get(label).map(LayerId)
    }

    /// Like [`node_id`](Self::node_id) but reports `UnknownNode`.
    pub fn require_node(&self, label: &str) -> Result<NodeId> {
        self.node_id(label)
            .ok_or_else(|| Error::UnknownNode(label.to_owned()))
    }

    pub fn require_layer(&self, label: &str) -> Result<LayerId> {
        self.layer_id(label)
            .ok_or_else(|| Error::UnknownLayer(label.to_owned()))
    }

    pub fn node_label(&self, node: NodeId) -> &str {
        &self.nodes.labels[node.index()]
    }

    pub fn layer_label(&self, layer: LayerId) -> &str {
        &self.layers.labels[layer.index()]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn layers(&self) -> impl ExactSizeIterator<Item = LayerId> + '_ {
        (0..self.layers.len() as u32).map(LayerId)
    }

    pub(crate) fn check_node(&self, node: NodeId) -> Result<()> {
        if node.index() < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(node.to_string()))
        }
    }

    pub(crate) fn check_layer(&self, layer: LayerId) -> Result<()> {
        if layer.index() < self.layers.len() {
            Ok(())
        } else {
            Err(Error::UnknownLayer(layer.to_string()))
        }
    }

    /// Outgoing edges of `node`, sorted by `(target, layer)`.
    pub fn out_edges(&self, node: NodeId) -> &[AdjEntry] {
        self.outgoing.of(node)
    }

    /// Incoming edges of `node`, sorted by `(source, layer)`.
    pub fn in_edges(&self, node: NodeId) -> &[AdjEntry] {
        self.incoming.of(node)
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out_edges(node).len()
    }

    pub fn in_degree(&self, node: NodeId) -> usize {
        self.in_edges(node).len()
    }

    /// All edges ordered by `(source, target, layer)` index.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.nodes().flat_map(move |source| {
            self.out_edges(source).iter().map(move |a| Edge {
                source,
                target: a.neighbor,
                layer: a.layer,
                weight: a.weight,
            })
        })
    }

    pub fn weight(&self, source: NodeId, target: NodeId, layer: LayerId) -> Option<f64> {
        if source.index() >= self.node_count() {
            return None;
        }
        let adj = self.out_edges(source);
        adj.binary_search_by_key(&(target, layer), |a| (a.neighbor, a.layer))
            .ok()
            .map(|i| adj[i].weight)
    }

    pub fn contains_edge(&self, source: NodeId, target: NodeId, layer: LayerId) -> bool {
        self.weight(source, target, layer).is_some()
    }

    pub fn counts(&self) -> Counts {
        Counts {
            nodes: self.node_count(),
            layers: self.layer_count(),
            edges: self.edge_count(),
            per_layer: self.per_layer.clone(),
        }
    }

    pub fn layer_edge_count(&self, layer: LayerId) -> usize {
        self.per_layer[layer.index()]
    }

    /// Nodes with at least one incident edge on any layer, ascending.
    pub fn active_nodes(&self) -> Vec<NodeId> {
        self.nodes()
            .filter(|&x| self.out_degree(x) > 0 || self.in_degree(x) > 0)
            .collect()
    }

    /// The one-layer network `<V, E_l, {l}>`: same nodes, only edges of `layer`.
    pub fn layer_subnetwork(&self, layer: LayerId) -> Result<MultiLayerNetwork> {
        self.check_layer(layer)?;
        let mut builder = NetworkBuilder::new();
        for label in &self.nodes.labels {
            builder.add_node(label);
        }
        let only = builder.add_layer(self.layer_label(layer));
        for e in self.edges().filter(|e| e.layer == layer) {
            builder.add_edge(e.source, e.target, only, e.weight)?;
        }
        Ok(builder.freeze())
    }

    /// Returns a builder holding the same nodes, layers and edges.
    pub fn to_builder(&self) -> NetworkBuilder {
        let mut builder = NetworkBuilder::new();
        for label in &self.nodes.labels {
            builder.add_node(label);
        }
        for label in &self.layers.labels {
            builder.add_layer(label);
        }
        for e in self.edges() {
            builder
                .add_edge(e.source, e.target, e.layer, e.weight)
                .expect("frozen network satisfies builder invariants");
        }
        builder
    }

    fn labelled_edges(&self) -> Vec<(&str, &str, &str, f64)> {
        let mut v: Vec<_> = self
            .edges()
            .map(|e| {
                (
                    self.node_label(e.source),
                    self.node_label(e.target),
                    self.layer_label(e.layer),
                    e.weight,
                )
            })
            .collect();
        v.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        v
    }
}

/// Label-based equality: same node labels, layer labels, and labelled edges
/// with equal weights. Internal index assignment is irrelevant.
impl PartialEq for MultiLayerNetwork {
    fn eq(&self, other: &Self) -> bool {
        if self.node_count() != other.node_count()
            || self.layer_count() != other.layer_count()
            || self.edge_count() != other.edge_count()
        {
            return false;
        }
        fn sorted(labels: &[String]) -> Vec<&str> {
            let mut v: Vec<&str> = labels.iter().map(String::as_str).collect();
            v.sort_unstable();
            v
        }
        sorted(&self.nodes.labels) == sorted(&other.nodes.labels)
            && sorted(&self.layers.labels) == sorted(&other.layers.labels)
            && self.labelled_edges() == other.labelled_edges()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn add_node_is_idempotent() {
        let mut b = NetworkBuilder::new();
        let a1 = b.add_node("a");
        let a2 = b.add_node("a");
        assert_eq!(a1, a2);
        assert_eq!(b.node_count(), 1);
        let bb = b.add_node("b");
        assert_ne!(a1, bb);
        assert_eq!(b.node_count(), 2);
    }

    #[test]
    fn many_distinct_labels() {
        let mut b = NetworkBuilder::new();
        for i in 0..103_112 {
            b.add_node(&format!("user{i}"));
        }
        let n = b.freeze();
        assert_eq!(n.node_count(), 103_112);
        assert_eq!(n.node_id("user103111"), Some(NodeId(103_111)));
    }

    #[test]
    fn edge_constraints() {
        let mut b = NetworkBuilder::new();
        let a = b.add_node("a");
        let c = b.add_node("b");
        let l1 = b.add_layer("l1");
        assert!(matches!(b.add_edge(a, a, l1, 1.0), Err(Error::LoopRejected(_))));
        b.add_edge(a, c, l1, 1.0).unwrap();
        assert!(matches!(
            b.add_edge(a, c, l1, 1.0),
            Err(Error::DuplicateEdge { .. })
        ));
        // directed: the reverse edge is a different tuple
        b.add_edge(c, a, l1, 1.0).unwrap();
        assert_eq!(b.edge_count(), 2);
    }

    #[test]
    fn rejects_bad_weights_and_unknown_ids() {
        let mut b = NetworkBuilder::new();
        let a = b.add_node("a");
        let c = b.add_node("b");
        let l1 = b.add_layer("l1");
        for w in [-1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(b.add_edge(a, c, l1, w), Err(Error::InvalidWeight(_))));
        }
        assert!(matches!(
            b.add_edge(a, NodeId(7), l1, 1.0),
            Err(Error::UnknownNode(_))
        ));
        assert!(matches!(
            b.add_edge(a, c, LayerId(3), 1.0),
            Err(Error::UnknownLayer(_))
        ));
        b.add_edge(a, c, l1, 0.0).unwrap();
    }

    #[test]
    fn f3_counts_and_active_nodes() {
        let n = fixtures::f3();
        let c = n.counts();
        assert_eq!((c.nodes, c.layers, c.edges), (3, 2, 4));
        let l1 = n.layer_id("l1").unwrap();
        let l2 = n.layer_id("l2").unwrap();
        assert_eq!(c.per_layer[l1.index()], 3);
        assert_eq!(c.per_layer[l2.index()], 1);
        assert_eq!(n.active_nodes().len(), 3);
    }

    #[test]
    fn isolated_node_not_active() {
        let mut b = fixtures::f3().to_builder();
        let d = b.add_node("d");
        let n = b.freeze();
        assert_eq!(n.node_count(), 4);
        assert!(!n.active_nodes().contains(&d));
        assert_eq!(n.active_nodes().len(), 3);
    }

    #[test]
    fn empty_network_counts() {
        let mut b = NetworkBuilder::new();
        b.add_layer("l1");
        b.add_layer("l2");
        let c = b.freeze().counts();
        assert_eq!(c, Counts { nodes: 0, layers: 2, edges: 0, per_layer: vec![0, 0] });
    }

    #[test]
    fn layer_subnetwork_keeps_nodes() {
        let n = fixtures::f3();
        let l2 = n.layer_subnetwork(n.layer_id("l2").unwrap()).unwrap();
        assert_eq!(l2.node_count(), 3);
        assert_eq!(l2.layer_count(), 1);
        let edges: Vec<_> = l2.edges().collect();
        assert_eq!(edges.len(), 1);
        assert_eq!(l2.node_label(edges[0].source), "a");
        assert_eq!(l2.node_label(edges[0].target), "b");
        assert!(n.layer_subnetwork(LayerId(9)).is_err());
    }

    #[test]
    fn layer_subnetwork_of_empty_layer() {
        let mut b = fixtures::f3().to_builder();
        let l3 = b.add_layer("l3");
        let n = b.freeze();
        let sub = n.layer_subnetwork(l3).unwrap();
        assert_eq!(sub.node_count(), 3);
        assert_eq!(sub.edge_count(), 0);
    }

    #[test]
    fn fig1_layer_one() {
        let n = fixtures::fig1();
        let l1 = n.layer_subnetwork(n.layer_id("l1").unwrap()).unwrap();
        // eight enumerated relationships plus t->z and x->u
        assert_eq!(l1.edge_count(), 10);
        assert_eq!(l1.node_count(), 6);
    }

    #[test]
    fn adjacency_is_sorted() {
        let n = fixtures::fig1();
        for x in n.nodes() {
            for adj in [n.out_edges(x), n.in_edges(x)] {
                assert!(adj
                    .windows(2)
                    .all(|w| (w[0].neighbor, w[0].layer) < (w[1].neighbor, w[1].layer)));
            }
        }
    }

    #[test]
    fn equality_ignores_index_order() {
        let mut b1 = NetworkBuilder::new();
        let (a, c) = (b1.add_node("a"), b1.add_node("c"));
        let l = b1.add_layer("l");
        b1.add_edge(a, c, l, 2.0).unwrap();
        let mut b2 = NetworkBuilder::new();
        let l = b2.add_layer("l");
        let (c, a) = (b2.add_node("c"), b2.add_node("a"));
        b2.add_edge(a, c, l, 2.0).unwrap();
        assert_eq!(b1.clone().freeze(), b2.freeze());
        let mut b3 = b1.clone();
        let l = b3.add_layer("l");
        b3.set_weight(NodeId(0), NodeId(1), l, 3.0).unwrap();
        assert_ne!(b1.freeze(), b3.freeze());
    }
}
