//! Property tests against a brute-force re-derivation from the raw edge list.

use msn_core::analytics::{cldc_summary, mn_histogram, mn_occupancy, mn_size_distribution};
use msn_core::{
    parse_edge_list, write_edge_list, IngestOptions, LayerId, MultiLayerNetwork, NetworkBuilder,
    NodeId, Variant,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Raw {
    m: usize,
    k: usize,
    edges: Vec<(usize, usize, usize, f64)>,
}

impl Raw {
    fn build(&self) -> MultiLayerNetwork {
        let mut b = NetworkBuilder::new();
        for i in 0..self.m {
            b.add_node(&format!("v{i}"));
        }
        for l in 0..self.k {
            b.add_layer(&format!("l{l}"));
        }
        for &(s, t, l, w) in &self.edges {
            b.add_edge(NodeId(s as u32), NodeId(t as u32), LayerId(l as u32), w)
                .unwrap();
        }
        b.freeze()
    }

    fn support(&self, x: usize, y: usize) -> usize {
        (0..self.k)
            .filter(|&l| {
                self.edges
                    .iter()
                    .any(|&(s, t, el, _)| el == l && ((s == x && t == y) || (s == y && t == x)))
            })
            .count()
    }

    fn mn(&self, x: usize, alpha: usize) -> Vec<usize> {
        (0..self.m)
            .filter(|&y| y != x && self.support(x, y) >= alpha)
            .collect()
    }

    /// (total, in, out)
    fn cldc(&self, x: usize, alpha: usize) -> (f64, f64, f64) {
        let mn = self.mn(x, alpha);
        let denom = ((self.m - 1) * self.k) as f64;
        let mut inc = 0.0;
        let mut out = 0.0;
        for &(s, t, _, w) in &self.edges {
            if s == x && mn.contains(&t) {
                out += w;
            }
            if t == x && mn.contains(&s) {
                inc += w;
            }
        }
        ((inc + out) / denom, inc / denom, out / denom)
    }
}

fn raw_network(max_nodes: usize, max_layers: usize, unit: bool) -> impl Strategy<Value = Raw> {
    (2..=max_nodes, 1..=max_layers, 0.02f64..0.5)
        .prop_flat_map(move |(m, k, p)| {
            let cells = m * m * k;
            (
                Just(m),
                Just(k),
                proptest::collection::vec((proptest::bool::weighted(p), 0.0f64..=10.0), cells),
            )
        })
        .prop_map(move |(m, k, cells)| {
            let mut edges = Vec::new();
            for (i, (present, w)) in cells.into_iter().enumerate() {
                let (s, t, l) = (i / (m * k), (i / k) % m, i % k);
                if present && s != t {
                    edges.push((s, t, l, if unit { 1.0 } else { w }));
                }
            }
            Raw { m, k, edges }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn matches_brute_force(raw in raw_network(30, 5, false)) {
        let n = raw.build();
        for x in 0..raw.m {
            let xi = NodeId(x as u32);
            for y in 0..raw.m {
                prop_assert_eq!(n.layer_support(xi, NodeId(y as u32)).unwrap(), raw.support(x, y));
            }
            for alpha in 1..=raw.k {
                let got: Vec<usize> = n.multi_layer_neighborhood(xi, alpha).unwrap()
                    .members.iter().map(|v| v.index()).collect();
                prop_assert_eq!(got, raw.mn(x, alpha));
                let (t, i, o) = raw.cldc(x, alpha);
                prop_assert!((n.cldc(xi, alpha).unwrap() - t).abs() <= 1e-12);
                prop_assert!((n.cldc_in(xi, alpha).unwrap() - i).abs() <= 1e-12);
                prop_assert!((n.cldc_out(xi, alpha).unwrap() - o).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn neighborhood_laws(raw in raw_network(20, 5, false)) {
        let n = raw.build();
        for x in n.nodes() {
            let mut union: Vec<NodeId> = n.layers()
                .flat_map(|l| n.local_neighborhood(x, l).unwrap().members)
                .collect();
            union.sort();
            union.dedup();
            prop_assert_eq!(&n.multi_layer_neighborhood(x, 1).unwrap().members, &union);
            for alpha in 1..=raw.k {
                let mn = n.multi_layer_neighborhood(x, alpha).unwrap();
                prop_assert!(!mn.contains(x));
                for &y in &mn.members {
                    prop_assert!(n.multi_layer_neighborhood(y, alpha).unwrap().contains(x));
                }
                if alpha < raw.k {
                    let next = n.multi_layer_neighborhood(x, alpha + 1).unwrap();
                    prop_assert!(next.members.iter().all(|y| mn.contains(*y)));
                }
            }
        }
    }

    #[test]
    fn centrality_laws(raw in raw_network(20, 5, false), scale in 0.01f64..100.0) {
        let n = raw.build();
        for alpha in 1..=raw.k {
            let total = n.cldc_batch(alpha, Variant::Total).unwrap();
            let inc = n.cldc_batch(alpha, Variant::In).unwrap();
            let out = n.cldc_batch(alpha, Variant::Out).unwrap();
            for x in n.nodes() {
                prop_assert!((total.get(x) - inc.get(x) - out.get(x)).abs() <= 1e-12);
                prop_assert_eq!(total.get(x).to_bits(), n.cldc(x, alpha).unwrap().to_bits());
                if alpha < raw.k {
                    prop_assert!(n.cldc(x, alpha + 1).unwrap() <= total.get(x));
                }
            }
        }
        // scaling every weight by c scales every score by c
        let scaled = Raw {
            edges: raw.edges.iter().map(|&(s, t, l, w)| (s, t, l, w * scale)).collect(),
            ..raw.clone()
        }.build();
        let a = n.cldc_batch(1, Variant::Total).unwrap();
        let b = scaled.cldc_batch(1, Variant::Total).unwrap();
        for x in n.nodes() {
            prop_assert!((b.get(x) - scale * a.get(x)).abs() <= 1e-9 * (1.0 + b.get(x)));
        }
    }

    #[test]
    fn positivity_matches_occupancy(raw in raw_network(20, 4, true)) {
        let n = raw.build();
        let alphas: Vec<usize> = (1..=raw.k).collect();
        let occ = mn_occupancy(&n, &alphas).unwrap();
        let summary = cldc_summary(&n, &alphas, Variant::Total).unwrap();
        for (o, s) in occ.rows.iter().zip(&summary.rows) {
            prop_assert_eq!(o.nonempty + o.empty, raw.m);
            prop_assert_eq!(o.nonempty, s.count);
        }
        for w in occ.rows.windows(2) {
            prop_assert!(w[1].nonempty <= w[0].nonempty);
        }
        for w in summary.rows.windows(2) {
            prop_assert!(w[1].max.unwrap_or(0.0) <= w[0].max.unwrap_or(0.0));
        }
        for alpha in alphas {
            let dist = mn_size_distribution(&n, alpha).unwrap();
            prop_assert_eq!(mn_histogram(&n, alpha).unwrap().total(), dist.len());
            prop_assert!(dist.entries.windows(2).all(|w| w[0].value >= w[1].value));
        }
    }

    #[test]
    fn single_layer_reduces_to_degree_centrality(raw in raw_network(30, 1, true)) {
        let n = raw.build();
        let m = raw.m as f64;
        for x in n.nodes() {
            let classical = (n.in_degree(x) + n.out_degree(x)) as f64 / (m - 1.0);
            prop_assert!((n.cldc(x, 1).unwrap() - classical).abs() <= 1e-12);
        }
    }

    #[test]
    fn edge_list_round_trip(raw in raw_network(12, 4, false)) {
        let n = raw.build();
        let mut buf = Vec::new();
        write_edge_list(&n, &mut buf).unwrap();
        let back = parse_edge_list(buf.as_slice(), &IngestOptions::default()).unwrap();
        prop_assert_eq!(&back, &n);
        let mut again = Vec::new();
        write_edge_list(&back, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }
}
