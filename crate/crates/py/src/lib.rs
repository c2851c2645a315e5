//! Python bindings. Nodes and layers are addressed by label on the Python side.

use std::collections::BTreeMap;

use msn_core::analytics::{self, loglog_fit as fit_loglog};
use msn_core::io::{parse_edge_list, read_edge_list_file, write_edge_list, write_edge_list_file};
use msn_core::{
    fixtures, DuplicatePolicy, Error, GeneratorConfig, IngestOptions, LoopPolicy,
    MultiLayerNetwork, NetworkBuilder as CoreBuilder, NodeId, Variant, WeightModel,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyKeyError, PyOSError, PyValueError};
use pyo3::prelude::*;

create_exception!(msn, MsnError, PyValueError, "Invalid network operation.");

fn to_py(e: Error) -> PyErr {
    match e.root() {
        Error::UnknownNode(_) | Error::UnknownLayer(_) => PyKeyError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => MsnError::new_err(e.to_string()),
    }
}

fn value_err(message: String) -> PyErr {
    MsnError::new_err(message)
}

fn variant(name: &str) -> PyResult<Variant> {
    name.parse().map_err(value_err)
}

fn ingest_options(duplicates: &str, loops: &str, manifest: Option<Vec<String>>) -> PyResult<IngestOptions> {
    Ok(IngestOptions {
        duplicate_policy: duplicates.parse::<DuplicatePolicy>().map_err(value_err)?,
        loop_policy: loops.parse::<LoopPolicy>().map_err(value_err)?,
        node_manifest: manifest,
    })
}

/// Mutable network under construction; `freeze()` returns a `Network`.
#[pyclass(module = "msn")]
#[derive(Default)]
pub struct NetworkBuilder {
    inner: Option<CoreBuilder>,
}

impl NetworkBuilder {
    fn builder(&mut self) -> PyResult<&mut CoreBuilder> {
        self.inner
            .as_mut()
            .ok_or_else(|| value_err("builder already frozen".into()))
    }
}

#[pymethods]
impl NetworkBuilder {
    #[new]
    fn new() -> Self {
        Self {
            inner: Some(CoreBuilder::new()),
        }
    }

    fn add_node(&mut self, label: &str) -> PyResult<u32> {
        Ok(self.builder()?.add_node(label).0)
    }

    fn add_layer(&mut self, label: &str) -> PyResult<u32> {
        Ok(self.builder()?.add_layer(label).0)
    }

    /// Registers missing endpoints and layer, then adds the edge.
    #[pyo3(signature = (source, target, layer, weight = 1.0))]
    fn add_edge(&mut self, source: &str, target: &str, layer: &str, weight: f64) -> PyResult<()> {
        let b = self.builder()?;
        let (s, t, l) = (b.add_node(source), b.add_node(target), b.add_layer(layer));
        b.add_edge(s, t, l, weight).map_err(to_py)
    }

    fn freeze(&mut self) -> PyResult<Network> {
        let b = self
            .inner
            .take()
            .ok_or_else(|| value_err("builder already frozen".into()))?;
        Ok(Network { inner: b.freeze() })
    }
}

/// Immutable multi-layered network.
#[pyclass(module = "msn", frozen)]
pub struct Network {
    inner: MultiLayerNetwork,
}

impl Network {
    fn node(&self, label: &str) -> PyResult<NodeId> {
        self.inner.require_node(label).map_err(to_py)
    }

    fn labels(&self, nodes: impl IntoIterator<Item = NodeId>) -> Vec<String> {
        nodes
            .into_iter()
            .map(|x| self.inner.node_label(x).to_owned())
            .collect()
    }
}

#[pymethods]
impl Network {
    #[staticmethod]
    #[pyo3(signature = (text, duplicates = "error", loops = "error", manifest = None))]
    fn from_edge_list(text: &str, duplicates: &str, loops: &str, manifest: Option<Vec<String>>) -> PyResult<Self> {
        let options = ingest_options(duplicates, loops, manifest)?;
        let inner = parse_edge_list(text.as_bytes(), &options).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, duplicates = "error", loops = "error", manifest = None))]
    fn read(path: &str, duplicates: &str, loops: &str, manifest: Option<Vec<String>>) -> PyResult<Self> {
        let options = ingest_options(duplicates, loops, manifest)?;
        let inner = read_edge_list_file(path, &options).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_edge_list(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_edge_list(&self.inner, &mut buf).map_err(to_py)?;
        Ok(String::from_utf8(buf).expect("labels are UTF-8"))
    }

    fn write(&self, path: &str) -> PyResult<()> {
        write_edge_list_file(&self.inner, path).map_err(to_py)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn layer_count(&self) -> usize {
        self.inner.layer_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn nodes(&self) -> Vec<String> {
        self.labels(self.inner.nodes())
    }

    fn layers(&self) -> Vec<String> {
        self.inner
            .layers()
            .map(|l| self.inner.layer_label(l).to_owned())
            .collect()
    }

    /// `(source, target, layer, weight)` tuples in index order.
    fn edges(&self) -> Vec<(String, String, String, f64)> {
        self.inner
            .edges()
            .map(|e| {
                (
                    self.inner.node_label(e.source).to_owned(),
                    self.inner.node_label(e.target).to_owned(),
                    self.inner.layer_label(e.layer).to_owned(),
                    e.weight,
                )
            })
            .collect()
    }

    /// `{"nodes": m, "layers": |L|, "edges": |E|, "per_layer": {label: count}}`
    fn counts(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let c = self.inner.counts();
        let per_layer: BTreeMap<String, usize> = self
            .inner
            .layers()
            .map(|l| (self.inner.layer_label(l).to_owned(), c.per_layer[l.index()]))
            .collect();
        let d = pyo3::types::PyDict::new(py);
        d.set_item("nodes", c.nodes)?;
        d.set_item("layers", c.layers)?;
        d.set_item("edges", c.edges)?;
        d.set_item("per_layer", per_layer)?;
        Ok(d.into_any().unbind())
    }

    fn active_nodes(&self) -> Vec<String> {
        self.labels(self.inner.active_nodes())
    }

    fn layer_subnetwork(&self, layer: &str) -> PyResult<Network> {
        let l = self.inner.require_layer(layer).map_err(to_py)?;
        Ok(Network {
            inner: self.inner.layer_subnetwork(l).map_err(to_py)?,
        })
    }

    fn local_neighborhood(&self, node: &str, layer: &str) -> PyResult<Vec<String>> {
        let l = self.inner.require_layer(layer).map_err(to_py)?;
        let set = self.inner.local_neighborhood(self.node(node)?, l).map_err(to_py)?;
        Ok(self.labels(set.members))
    }

    fn layer_support(&self, x: &str, y: &str) -> PyResult<usize> {
        self.inner
            .layer_support(self.node(x)?, self.node(y)?)
            .map_err(to_py)
    }

    fn multi_layer_neighborhood(&self, node: &str, alpha: usize) -> PyResult<Vec<String>> {
        let set = self
            .inner
            .multi_layer_neighborhood(self.node(node)?, alpha)
            .map_err(to_py)?;
        Ok(self.labels(set.members))
    }

    #[pyo3(signature = (node, alpha, variant = "total"))]
    fn centrality(&self, node: &str, alpha: usize, variant: &str) -> PyResult<f64> {
        self.inner
            .centrality(self.node(node)?, alpha, self::variant(variant)?)
            .map_err(to_py)
    }

    fn cldc(&self, node: &str, alpha: usize) -> PyResult<f64> {
        self.centrality(node, alpha, "total")
    }

    fn cldc_in(&self, node: &str, alpha: usize) -> PyResult<f64> {
        self.centrality(node, alpha, "in")
    }

    fn cldc_out(&self, node: &str, alpha: usize) -> PyResult<f64> {
        self.centrality(node, alpha, "out")
    }

    /// `{label: score}` for every node. Runs without holding the GIL.
    #[pyo3(signature = (alpha, variant = "total", threads = None))]
    fn cldc_batch(
        &self,
        py: Python<'_>,
        alpha: usize,
        variant: &str,
        threads: Option<usize>,
    ) -> PyResult<BTreeMap<String, f64>> {
        let v = self::variant(variant)?;
        let scores = py
            .detach(|| match threads {
                Some(n) => self.inner.cldc_batch_with_threads(alpha, v, n),
                None => self.inner.cldc_batch(alpha, v),
            })
            .map_err(to_py)?;
        Ok(scores
            .iter()
            .map(|(x, s)| (self.inner.node_label(x).to_owned(), s))
            .collect())
    }

    /// `[(layer, edges, active_nodes), ...]`
    fn layer_stats(&self) -> Vec<(String, usize, usize)> {
        analytics::layer_stats(&self.inner)
            .rows
            .into_iter()
            .map(|r| (r.layer, r.edges, r.active_nodes))
            .collect()
    }

    /// `[(node, size), ...]` sorted descending, empty neighbourhoods omitted.
    fn mn_size_distribution(&self, alpha: usize) -> PyResult<Vec<(String, usize)>> {
        let d = analytics::mn_size_distribution(&self.inner, alpha).map_err(to_py)?;
        Ok(d.entries
            .iter()
            .map(|e| (self.inner.node_label(e.node).to_owned(), e.value as usize))
            .collect())
    }

    #[pyo3(signature = (alpha, variant = "total"))]
    fn cldc_distribution(&self, alpha: usize, variant: &str) -> PyResult<Vec<(String, f64)>> {
        let d = analytics::cldc_distribution(&self.inner, alpha, self::variant(variant)?).map_err(to_py)?;
        Ok(d.entries
            .iter()
            .map(|e| (self.inner.node_label(e.node).to_owned(), e.value))
            .collect())
    }

    /// `[(bucket_lo, bucket_hi, count), ...]` with half-open `(lo, hi]` buckets.
    fn mn_histogram(&self, alpha: usize) -> PyResult<Vec<(usize, usize, usize)>> {
        let h = analytics::mn_histogram(&self.inner, alpha).map_err(to_py)?;
        Ok(h.buckets
            .iter()
            .map(|b| (b.bucket_lo, b.bucket_hi, b.count))
            .collect())
    }

    /// `[(alpha, nonempty, empty, pct_nonempty), ...]`
    fn mn_occupancy(&self, alphas: Vec<usize>) -> PyResult<Vec<(usize, usize, usize, f64)>> {
        let r = analytics::mn_occupancy(&self.inner, &alphas).map_err(to_py)?;
        Ok(r.rows
            .iter()
            .map(|o| (o.alpha, o.nonempty, o.empty, o.pct_nonempty))
            .collect())
    }

    /// `[(alpha, min_positive, max, count_positive), ...]`
    #[pyo3(signature = (alphas, variant = "total"))]
    fn cldc_summary(
        &self,
        alphas: Vec<usize>,
        variant: &str,
    ) -> PyResult<Vec<(usize, Option<f64>, Option<f64>, usize)>> {
        let s = analytics::cldc_summary(&self.inner, &alphas, self::variant(variant)?).map_err(to_py)?;
        Ok(s.rows.iter().map(|r| (r.alpha, r.min, r.max, r.count)).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __eq__(&self, other: &Network) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(nodes={}, layers={}, edges={})",
            self.inner.node_count(),
            self.inner.layer_count(),
            self.inner.edge_count()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (nodes = 1000, layers = 5, edges_per_layer = 5000, seed_clique = 3, overlap = 0.3, seed = 42, weights = "const:1"))]
fn generate(
    py: Python<'_>,
    nodes: usize,
    layers: usize,
    edges_per_layer: usize,
    seed_clique: usize,
    overlap: f64,
    seed: u64,
    weights: &str,
) -> PyResult<Network> {
    let config = GeneratorConfig {
        nodes,
        layers,
        edges_per_layer,
        seed_clique,
        overlap,
        seed,
        weights: weights.parse::<WeightModel>().map_err(value_err)?,
    };
    let inner = py.detach(|| msn_core::generate(&config)).map_err(to_py)?;
    Ok(Network { inner })
}

/// `(slope, intercept, r_squared, points)` of the log-log rank-size fit, or `None`.
#[pyfunction]
fn loglog_fit(values: Vec<f64>) -> Option<(f64, f64, f64, usize)> {
    fit_loglog(&values).map(|f| (f.slope, f.intercept, f.r_squared, f.points))
}

/// Bucket `(lo, hi]` that holds a positive neighbourhood size.
#[pyfunction]
fn bucket_bounds(size: usize) -> PyResult<(usize, usize)> {
    if size == 0 {
        return Err(value_err("size must be positive".into()));
    }
    Ok(analytics::bucket_bounds(size))
}

#[pyfunction]
fn f3() -> Network {
    Network { inner: fixtures::f3() }
}

#[pyfunction]
fn fig1() -> Network {
    Network {
        inner: fixtures::fig1(),
    }
}

#[pymodule]
fn msn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_class::<NetworkBuilder>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(loglog_fit, m)?)?;
    m.add_function(wrap_pyfunction!(bucket_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(f3, m)?)?;
    m.add_function(wrap_pyfunction!(fig1, m)?)?;
    m.add("MsnError", m.py().get_type::<MsnError>())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_round_trip() {
        let mut b = NetworkBuilder::new();
        b.add_edge("a", "b", "l1", 1.0).unwrap();
        b.add_edge("b", "a", "l1", 1.0).unwrap();
        b.add_edge("a", "c", "l1", 1.0).unwrap();
        b.add_edge("a", "b", "l2", 1.0).unwrap();
        let n = b.freeze().unwrap();
        assert!(b.freeze().is_err());
        assert_eq!(n.inner, fixtures::f3());
        assert_eq!(n.cldc("a", 1).unwrap(), 1.0);
        assert_eq!(n.multi_layer_neighborhood("a", 2).unwrap(), vec!["b"]);
    }

    #[test]
    fn errors_surface() {
        let n = fig1();
        assert!(n.local_neighborhood("nobody", "l1").is_err());
        assert!(n.multi_layer_neighborhood("x", 4).is_err());
        assert!(n.centrality("x", 1, "sideways").is_err());
        assert!(Network::from_edge_list("a\ta\tl1\n", "error", "error", None).is_err());
        let skipped = Network::from_edge_list("a\ta\tl1\n", "error", "skip", None).unwrap();
        assert_eq!(skipped.edge_count(), 0);
    }

    #[test]
    fn fig1_through_bindings() {
        let n = fig1();
        let mut z1 = n.local_neighborhood("z", "l1").unwrap();
        z1.sort();
        assert_eq!(z1, ["t", "u", "x", "y"]);
        let mut x3 = n.multi_layer_neighborhood("x", 3).unwrap();
        x3.sort();
        assert_eq!(x3, ["u", "y", "z"]);
        let text = n.to_edge_list().unwrap();
        let back = Network::from_edge_list(&text, "error", "error", None).unwrap();
        assert!(back.__eq__(&n));
    }

    #[test]
    fn analytics_through_bindings() {
        let n = f3();
        assert_eq!(
            n.mn_size_distribution(1).unwrap(),
            vec![("a".to_owned(), 2), ("b".to_owned(), 1), ("c".to_owned(), 1)]
        );
        assert_eq!(n.mn_occupancy(vec![2]).unwrap()[0].1, 2);
        assert_eq!(n.cldc_summary(vec![1], "total").unwrap()[0].2, Some(1.0));
        assert_eq!(n.mn_histogram(1).unwrap()[0], (0, 10, 3));
        assert_eq!(loglog_fit(vec![1.0]), None);
        assert_eq!(bucket_bounds(100).unwrap(), (90, 100));
    }
}
