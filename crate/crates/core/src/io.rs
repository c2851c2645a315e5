//! Tab-separated edge-list format.
//!
//! One edge per line: `source<TAB>target<TAB>layer[<TAB>weight]`. A missing
//! weight means 1.0. Lines starting with `#` are comments and blank lines are
//! skipped. Two comment forms are also read as declarations:
//!
//! ```text
//! #@layer<TAB>label
//! #@node<TAB>label
//! ```
//!
//! They register a layer or node without an edge, which is how isolated nodes
//! and empty layers survive a write/parse round trip. Any other tool can treat
//! them as ordinary comments.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{is_valid_label, MultiLayerNetwork, NetworkBuilder};

const NODE_DIRECTIVE: &str = "#@node\t";
const LAYER_DIRECTIVE: &str = "#@layer\t";

/// What to do when the same `(source, target, layer)` appears twice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DuplicatePolicy {
    #[default]
    Error,
    /// Store the sum of all duplicate weights.
    Sum,
    Max,
    /// Keep the first record, ignore later ones.
    First,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LoopPolicy {
    #[default]
    Error,
    Skip,
}

impl FromStr for DuplicatePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "error" => Ok(Self::Error),
            "sum" => Ok(Self::Sum),
            "max" => Ok(Self::Max),
            "first" => Ok(Self::First),
            other => Err(format!("unknown duplicate policy `{other}` (error|sum|max|first)")),
        }
    }
}

impl FromStr for LoopPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "error" => Ok(Self::Error),
            "skip" => Ok(Self::Skip),
            other => Err(format!("unknown loop policy `{other}` (error|skip)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub duplicate_policy: DuplicatePolicy,
    pub loop_policy: LoopPolicy,
    /// Labels registered before any edge, so isolated nodes count in `m`.
    pub node_manifest: Option<Vec<String>>,
}

/// One parsed data line.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub layer: String,
    pub weight: Option<f64>,
}

impl EdgeRecord {
    pub fn weight_or_default(&self) -> f64 {
        self.weight.unwrap_or(1.0)
    }
}

/// Parses one data line (no comment handling). `line` is for error messages.
pub fn parse_record(text: &str, line: usize) -> Result<EdgeRecord> {
    let fields: Vec<&str> = text.split('\t').collect();
    if !(3..=4).contains(&fields.len()) {
        return Err(Error::Parse {
            line,
            message: format!("expected 3 or 4 tab-separated fields, found {}", fields.len()),
        });
    }
    for (name, f) in ["source", "target", "layer"].iter().zip(&fields) {
        if f.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("empty {name} label"),
            });
        }
    }
    let weight = match fields.get(3) {
        None => None,
        Some(raw) => {
            let w: f64 = raw.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid weight `{raw}`"),
            })?;
            if !w.is_finite() || w < 0.0 {
                return Err(at_line(line, Error::InvalidWeight(w)));
            }
            Some(w)
        }
    };
    Ok(EdgeRecord {
        source: fields[0].to_owned(),
        target: fields[1].to_owned(),
        layer: fields[2].to_owned(),
        weight,
    })
}

fn at_line(line: usize, source: Error) -> Error {
    Error::AtLine {
        line,
        source: Box::new(source),
    }
}

fn declared_label(rest: &str, line: usize) -> Result<&str> {
    if is_valid_label(rest) {
        Ok(rest)
    } else {
        Err(Error::Parse {
            line,
            message: format!("invalid declared label {rest:?}"),
        })
    }
}

/// Reads an edge list into a frozen network.
pub fn parse_edge_list<R: BufRead>(reader: R, options: &IngestOptions) -> Result<MultiLayerNetwork> {
    let mut builder = NetworkBuilder::new();
    if let Some(labels) = &options.node_manifest {
        for label in labels {
            builder.add_node(label);
        }
    }
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let raw = line?;
        let text = raw.strip_suffix('\r').unwrap_or(&raw);
        if let Some(rest) = text.strip_prefix(NODE_DIRECTIVE) {
            builder.add_node(declared_label(rest, lineno)?);
            continue;
        }
        if let Some(rest) = text.strip_prefix(LAYER_DIRECTIVE) {
            builder.add_layer(declared_label(rest, lineno)?);
            continue;
        }
        if text.starts_with('#') || text.trim().is_empty() {
            continue;
        }
        let rec = parse_record(text, lineno)?;
        ingest_record(&mut builder, &rec, options).map_err(|e| at_line(lineno, e))?;
    }
    Ok(builder.freeze())
}

fn ingest_record(builder: &mut NetworkBuilder, rec: &EdgeRecord, options: &IngestOptions) -> Result<()> {
    if rec.source == rec.target {
        return match options.loop_policy {
            LoopPolicy::Error => Err(Error::LoopRejected(rec.source.clone())),
            LoopPolicy::Skip => Ok(()),
        };
    }
    let source = builder.add_node(&rec.source);
    let target = builder.add_node(&rec.target);
    let layer = builder.add_layer(&rec.layer);
    let weight = rec.weight_or_default();
    let Some(existing) = builder.edge_weight(source, target, layer) else {
        return builder.add_edge(source, target, layer, weight);
    };
    let merged = match options.duplicate_policy {
        DuplicatePolicy::Error => return builder.add_edge(source, target, layer, weight),
        DuplicatePolicy::First => return Ok(()),
        DuplicatePolicy::Sum => existing + weight,
        DuplicatePolicy::Max => existing.max(weight),
    };
    builder.set_weight(source, target, layer, merged).map(|_| ())
}

pub fn read_edge_list_file(path: impl AsRef<Path>, options: &IngestOptions) -> Result<MultiLayerNetwork> {
    let file = File::open(path)?;
    parse_edge_list(BufReader::new(file), options)
}

/// Reads a node manifest: one label per line, `#` comments and blank lines skipped.
pub fn parse_node_manifest<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut labels = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let raw = line?;
        let text = raw.strip_suffix('\r').unwrap_or(&raw);
        if text.starts_with('#') || text.trim().is_empty() {
            continue;
        }
        if !is_valid_label(text) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("invalid node label {text:?}"),
            });
        }
        labels.push(text.to_owned());
    }
    Ok(labels)
}

pub fn read_node_manifest_file(path: impl AsRef<Path>) -> Result<Vec<String>> {
    parse_node_manifest(BufReader::new(File::open(path)?))
}

/// Writes `network` with default header only. See [`write_edge_list_with_header`].
pub fn write_edge_list<W: Write>(network: &MultiLayerNetwork, writer: W) -> Result<()> {
    write_edge_list_with_header(network, writer, &[])
}

/// Writes layer and node declarations in index order, then every edge sorted by
/// `(layer, source, target)` index with the shortest round-trip weight text.
/// Each entry of `comments` becomes one leading `# ` line.
pub fn write_edge_list_with_header<W: Write>(
    network: &MultiLayerNetwork,
    writer: W,
    comments: &[String],
) -> Result<()> {
    for label in network
        .nodes()
        .map(|x| network.node_label(x))
        .chain(network.layers().map(|l| network.layer_label(l)))
    {
        if !is_valid_label(label) {
            return Err(Error::InvalidLabel(label.to_owned()));
        }
    }
    let mut w = BufWriter::new(writer);
    for c in comments {
        for part in c.lines() {
            writeln!(w, "# {part}")?;
        }
    }
    writeln!(w, "# source\ttarget\tlayer\tweight")?;
    for l in network.layers() {
        writeln!(w, "{LAYER_DIRECTIVE}{}", network.layer_label(l))?;
    }
    for x in network.nodes() {
        writeln!(w, "{NODE_DIRECTIVE}{}", network.node_label(x))?;
    }
    let mut edges: Vec<_> = network.edges().collect();
    edges.sort_by_key(|e| (e.layer, e.source, e.target));
    for e in edges {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            network.node_label(e.source),
            network.node_label(e.target),
            network.layer_label(e.layer),
            e.weight
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_edge_list_file(network: &MultiLayerNetwork, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list(network, File::create(path)?)
}
