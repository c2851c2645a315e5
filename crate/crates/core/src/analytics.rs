//! Dataset-level measurements: per-layer statistics, rank distributions,
//! bucketed neighbourhood-size histograms, empty/non-empty occupancy and
//! per-alpha centrality summaries. Every report exports to CSV and JSON with
//! the same field names.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::centrality::Variant;
use crate::error::Result;
use crate::neighborhood::{check_alpha, mn_size_unchecked};
use crate::network::{MultiLayerNetwork, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerStatsRow {
    pub layer: String,
    pub edges: usize,
    pub active_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStatsTable {
    pub rows: Vec<LayerStatsRow>,
    pub total_edges: usize,
    /// Sum of the per-layer active counts; a node active on two layers counts twice.
    pub total_layer_active: usize,
    /// Nodes active on at least one layer.
    pub active_nodes: usize,
    pub nodes: usize,
}

pub fn layer_stats(network: &MultiLayerNetwork) -> LayerStatsTable {
    let k = network.layer_count();
    let mut active = vec![0usize; k];
    let mut seen = vec![u32::MAX; k];
    for x in network.nodes() {
        for a in network.out_edges(x).iter().chain(network.in_edges(x)) {
            let l = a.layer.index();
            if seen[l] != x.0 {
                seen[l] = x.0;
                active[l] += 1;
            }
        }
    }
    let rows: Vec<LayerStatsRow> = network
        .layers()
        .map(|l| LayerStatsRow {
            layer: network.layer_label(l).to_owned(),
            edges: network.layer_edge_count(l),
            active_nodes: active[l.index()],
        })
        .collect();
    LayerStatsTable {
        total_edges: rows.iter().map(|r| r.edges).sum(),
        total_layer_active: rows.iter().map(|r| r.active_nodes).sum(),
        active_nodes: network.active_nodes().len(),
        nodes: network.node_count(),
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankContext {
    MnSize { alpha: usize },
    Cldc { alpha: usize, variant: Variant },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankEntry {
    pub node: NodeId,
    pub value: f64,
}

/// Positive values sorted descending, ties by ascending node index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDistribution {
    pub context: RankContext,
    pub entries: Vec<RankEntry>,
}

impl RankDistribution {
    fn from_values(context: RankContext, values: impl IntoIterator<Item = (NodeId, f64)>) -> Self {
        let mut entries: Vec<RankEntry> = values
            .into_iter()
            .filter(|&(_, v)| v > 0.0)
            .map(|(node, value)| RankEntry { node, value })
            .collect();
        entries.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.node.cmp(&b.node)));
        Self { context, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

fn mn_sizes(network: &MultiLayerNetwork, alpha: usize) -> Vec<usize> {
    (0..network.node_count() as u32)
        .into_par_iter()
        .map(|i| mn_size_unchecked(network, NodeId(i), alpha))
        .collect()
}

/// `(node, |MN(node, alpha)|)` for every node with a non-empty neighbourhood.
pub fn mn_size_distribution(network: &MultiLayerNetwork, alpha: usize) -> Result<RankDistribution> {
    check_alpha(network, alpha)?;
    let sizes = mn_sizes(network, alpha);
    Ok(RankDistribution::from_values(
        RankContext::MnSize { alpha },
        sizes
            .into_iter()
            .enumerate()
            .map(|(i, s)| (NodeId(i as u32), s as f64)),
    ))
}

/// Positive centrality scores ranked like [`mn_size_distribution`].
pub fn cldc_distribution(network: &MultiLayerNetwork, alpha: usize, variant: Variant) -> Result<RankDistribution> {
    let scores = network.cldc_batch(alpha, variant)?;
    Ok(RankDistribution::from_values(
        RankContext::Cldc { alpha, variant },
        scores.iter(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bucket {
    /// Exclusive lower bound.
    pub bucket_lo: usize,
    /// Inclusive upper bound.
    pub bucket_hi: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramReport {
    pub alpha: Option<usize>,
    pub buckets: Vec<Bucket>,
}

impl HistogramReport {
    pub fn total(&self) -> usize {
        self.buckets.iter().map(|b| b.count).sum()
    }

    pub fn count_in(&self, lo: usize, hi: usize) -> Option<usize> {
        self.buckets
            .iter()
            .find(|b| b.bucket_lo == lo && b.bucket_hi == hi)
            .map(|b| b.count)
    }
}

/// Half-open bucket `(lo, hi]` holding `size`: width 10 up to 100, width 100
/// up to 1000, width 1000 beyond. `size` must be positive.
pub fn bucket_bounds(size: usize) -> (usize, usize) {
    debug_assert!(size > 0);
    let width = match size {
        0..=100 => 10,
        101..=1000 => 100,
        _ => 1000,
    };
    let lo = (size - 1) / width * width;
    (lo, lo + width)
}

/// Three-tier histogram of positive sizes. The ten width-10 and nine
/// width-100 buckets are always present; width-1000 buckets run up to the
/// one holding the largest size.
pub fn histogram(sizes: impl IntoIterator<Item = usize>) -> HistogramReport {
    let mut buckets: Vec<Bucket> = (0..100)
        .step_by(10)
        .chain((100..1000).step_by(100))
        .zip((10..=100).step_by(10).chain((200..=1000).step_by(100)))
        .map(|(bucket_lo, bucket_hi)| Bucket {
            bucket_lo,
            bucket_hi,
            count: 0,
        })
        .collect();
    for size in sizes.into_iter().filter(|&s| s > 0) {
        let (lo, hi) = bucket_bounds(size);
        let idx = match lo {
            0..=90 => lo / 10,
            100..=900 => 10 + (lo - 100) / 100,
            _ => 19 + (lo - 1000) / 1000,
        };
        while buckets.len() <= idx {
            let lo = 1000 * (buckets.len() - 18);
            buckets.push(Bucket {
                bucket_lo: lo,
                bucket_hi: lo + 1000,
                count: 0,
            });
        }
        debug_assert_eq!((buckets[idx].bucket_lo, buckets[idx].bucket_hi), (lo, hi));
        buckets[idx].count += 1;
    }
    HistogramReport {
        alpha: None,
        buckets,
    }
}

pub fn mn_histogram(network: &MultiLayerNetwork, alpha: usize) -> Result<HistogramReport> {
    check_alpha(network, alpha)?;
    let mut report = histogram(mn_sizes(network, alpha));
    report.alpha = Some(alpha);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupancyRow {
    pub alpha: usize,
    pub nonempty: usize,
    pub empty: usize,
    pub pct_nonempty: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyReport {
    pub rows: Vec<OccupancyRow>,
}

/// Empty vs non-empty `MN(x, alpha)` over all `m` nodes, isolated ones included.
pub fn mn_occupancy(network: &MultiLayerNetwork, alphas: &[usize]) -> Result<OccupancyReport> {
    for &alpha in alphas {
        check_alpha(network, alpha)?;
    }
    let m = network.node_count();
    let rows = alphas
        .iter()
        .map(|&alpha| {
            let nonempty = mn_sizes(network, alpha).iter().filter(|&&s| s > 0).count();
            OccupancyRow {
                alpha,
                nonempty,
                empty: m - nonempty,
                pct_nonempty: if m == 0 { 0.0 } else { 100.0 * nonempty as f64 / m as f64 },
            }
        })
        .collect();
    Ok(OccupancyReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryRow {
    pub alpha: usize,
    /// Smallest positive score; `None` when no score is positive.
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CldcSummary {
    pub variant: Variant,
    pub rows: Vec<SummaryRow>,
}

pub fn cldc_summary(network: &MultiLayerNetwork, alphas: &[usize], variant: Variant) -> Result<CldcSummary> {
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let scores = network.cldc_batch(alpha, variant)?;
        let positive = scores.values.iter().copied().filter(|&v| v > 0.0);
        let (min, max, count) = positive.fold((None, None, 0), |(lo, hi, n), v| {
            (
                Some(lo.map_or(v, |m: f64| m.min(v))),
                Some(hi.map_or(v, |m: f64| m.max(v))),
                n + 1,
            )
        });
        rows.push(SummaryRow { alpha, min, max, count });
    }
    Ok(CldcSummary { variant, rows })
}

/// Least-squares line through `(ln rank, ln value)` of a rank-size sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits positive `values` after sorting them descending and ranking from 1.
/// Returns `None` with fewer than two positive values.
pub fn loglog_fit(values: &[f64]) -> Option<PowerLawFit> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&x| x > 0.0).collect();
    if v.len() < 2 {
        return None;
    }
    v.sort_by(|a, b| b.total_cmp(a));
    let xs: Vec<f64> = (1..=v.len()).map(|r| (r as f64).ln()).collect();
    let ys: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let n = v.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(PowerLawFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points: v.len(),
    })
}

/// A report that exports as a flat table.
pub trait Report {
    type Row: Serialize;

    fn rows(&self, network: &MultiLayerNetwork) -> Vec<Self::Row>;

    fn write_csv<W: Write>(&self, network: &MultiLayerNetwork, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in self.rows(network) {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, network: &MultiLayerNetwork, writer: W) -> Result<()> {
        let mut writer = writer;
        serde_json::to_writer_pretty(&mut writer, &self.rows(network))?;
        writeln!(writer)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionRow {
    pub rank: usize,
    pub node: String,
    pub value: f64,
}

impl Report for RankDistribution {
    type Row = DistributionRow;

    fn rows(&self, network: &MultiLayerNetwork) -> Vec<DistributionRow> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| DistributionRow {
                rank: i + 1,
                node: network.node_label(e.node).to_owned(),
                value: e.value,
            })
            .collect()
    }
}

impl Report for HistogramReport {
    type Row = Bucket;

    fn rows(&self, _: &MultiLayerNetwork) -> Vec<Bucket> {
        self.buckets.clone()
    }
}

impl Report for OccupancyReport {
    type Row = OccupancyRow;

    fn rows(&self, _: &MultiLayerNetwork) -> Vec<OccupancyRow> {
        self.rows.clone()
    }
}

impl Report for CldcSummary {
    type Row = SummaryRow;

    fn rows(&self, _: &MultiLayerNetwork) -> Vec<SummaryRow> {
        self.rows.clone()
    }
}

impl Report for LayerStatsTable {
    type Row = LayerStatsRow;

    /// Per-layer rows followed by a `SUM` row.
    fn rows(&self, _: &MultiLayerNetwork) -> Vec<LayerStatsRow> {
        let mut rows = self.rows.clone();
        rows.push(LayerStatsRow {
            layer: "SUM".to_owned(),
            edges: self.total_edges,
            active_nodes: self.total_layer_active,
        });
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::network::NetworkBuilder;

    #[test]
    fn f3_layer_stats() {
        let t = layer_stats(&fixtures::f3());
        assert_eq!(
            t.rows,
            vec![
                LayerStatsRow { layer: "l1".into(), edges: 3, active_nodes: 3 },
                LayerStatsRow { layer: "l2".into(), edges: 1, active_nodes: 2 },
            ]
        );
        assert_eq!(t.total_edges, 4);
        assert_eq!(t.total_layer_active, 5);
        assert_eq!(t.active_nodes, 3);
    }

    #[test]
    fn empty_layer_stats() {
        let t = layer_stats(&MultiLayerNetwork::default());
        assert!(t.rows.is_empty());
        assert_eq!((t.total_edges, t.active_nodes, t.nodes), (0, 0, 0));
    }

    #[test]
    fn f3_size_distribution() {
        let n = fixtures::f3();
        let d1 = mn_size_distribution(&n, 1).unwrap();
        assert_eq!(d1.values(), vec![2.0, 1.0, 1.0]);
        let labels: Vec<_> = d1.entries.iter().map(|e| n.node_label(e.node)).collect();
        assert_eq!(labels, ["a", "b", "c"]);
        let d2 = mn_size_distribution(&n, 2).unwrap();
        assert_eq!(d2.values(), vec![1.0, 1.0]);
        assert!(d2.entries.iter().all(|e| n.node_label(e.node) != "c"));
    }

    #[test]
    fn all_isolated_distribution_is_empty() {
        let mut b = NetworkBuilder::new();
        b.add_node("a");
        b.add_node("b");
        b.add_layer("l");
        assert!(mn_size_distribution(&b.freeze(), 1).unwrap().is_empty());
    }

    #[test]
    fn bucket_boundaries() {
        assert_eq!(bucket_bounds(1), (0, 10));
        assert_eq!(bucket_bounds(10), (0, 10));
        assert_eq!(bucket_bounds(11), (10, 20));
        assert_eq!(bucket_bounds(100), (90, 100));
        assert_eq!(bucket_bounds(101), (100, 200));
        assert_eq!(bucket_bounds(1000), (900, 1000));
        assert_eq!(bucket_bounds(1001), (1000, 2000));
        assert_eq!(bucket_bounds(4500), (4000, 5000));
    }

    #[test]
    fn histogram_of_sizes() {
        let h = histogram([5, 15, 150]);
        assert_eq!(h.count_in(0, 10), Some(1));
        assert_eq!(h.count_in(10, 20), Some(1));
        assert_eq!(h.count_in(100, 200), Some(1));
        assert_eq!(h.total(), 3);
        assert_eq!(h.buckets.len(), 19);

        let h = histogram([100]);
        assert_eq!(h.count_in(90, 100), Some(1));
        assert_eq!(h.count_in(100, 200), Some(0));

        let h = histogram([3500]);
        assert_eq!(h.buckets.len(), 22);
        assert_eq!(h.count_in(3000, 4000), Some(1));
        assert_eq!(h.count_in(1000, 2000), Some(0));
    }

    #[test]
    fn f3_histogram_and_occupancy() {
        let n = fixtures::f3();
        assert_eq!(mn_histogram(&n, 1).unwrap().count_in(0, 10), Some(3));
        let occ = mn_occupancy(&n, &[1, 2]).unwrap();
        assert_eq!((occ.rows[0].nonempty, occ.rows[0].empty), (3, 0));
        assert_eq!(occ.rows[0].pct_nonempty, 100.0);
        assert_eq!((occ.rows[1].nonempty, occ.rows[1].empty), (2, 1));
        assert!((occ.rows[1].pct_nonempty - 200.0 / 3.0).abs() < 1e-12);
        assert!(mn_occupancy(&n, &[1, 3]).is_err());
    }

    #[test]
    fn f3_summary() {
        let s = cldc_summary(&fixtures::f3(), &[1, 2], Variant::Total).unwrap();
        assert_eq!(s.rows[0], SummaryRow { alpha: 1, min: Some(0.25), max: Some(1.0), count: 3 });
        assert_eq!(s.rows[1].max, Some(0.75));
        assert_eq!(s.rows[1].count, 2);
    }

    #[test]
    fn fit_exact_power_law() {
        let values: Vec<f64> = (1..=50).map(|r| 1000.0 * (r as f64).powf(-1.5)).collect();
        let fit = loglog_fit(&values).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-9);
        assert!((fit.intercept - 1000f64.ln()).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(loglog_fit(&[3.0]).is_none());
    }

    #[test]
    fn csv_and_json_export() {
        let n = fixtures::f3();
        let mut out = Vec::new();
        mn_size_distribution(&n, 1).unwrap().write_csv(&n, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("rank,node,value"));
        assert_eq!(text.lines().count(), 4);

        let mut out = Vec::new();
        mn_occupancy(&n, &[2]).unwrap().write_csv(&n, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("alpha,nonempty,empty,pct_nonempty\n2,2,1,66.66"));

        let mut out = Vec::new();
        histogram([5]).write_csv(&n, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("bucket_lo,bucket_hi,count\n0,10,1\n"));

        let mut out = Vec::new();
        cldc_summary(&n, &[1], Variant::Total).unwrap().write_json(&n, &mut out).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v[0]["alpha"], 1);
        assert_eq!(v[0]["max"], 1.0);
        assert_eq!(v[0]["count"], 3);
    }
}
