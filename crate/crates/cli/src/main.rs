mod format;
mod manifest;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msn_core::analytics::{self, loglog_fit, Report};
use msn_core::io::{read_edge_list_file, read_node_manifest_file, write_edge_list_with_header};
use msn_core::{
    generate, DuplicatePolicy, Error, GeneratorConfig, IngestOptions, LoopPolicy, MultiLayerNetwork,
    Variant, WeightModel,
};

use crate::format::{parse_alphas, significant};
use crate::manifest::RunRecorder;

#[derive(Debug, Parser)]
#[command(name = "msn", version, about = "Multi-layered social network analysis")]
struct Cli {
    /// Worker threads for batch centrality (default: all cores).
    #[arg(long, global = true, env = "MSN_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Node, edge and per-layer counts.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// CSV file (JSON when the name ends in `.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local (`--layer`) or multi-layered (`--alpha`) neighbourhood of a node.
    Neighborhood {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        node: String,
        #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
        layer: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Cross-layer degree centrality of one node or all nodes.
    Centrality {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Total)]
        variant: VariantArg,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        node: Option<String>,
        #[arg(long)]
        all: bool,
        /// `node,score` CSV (JSON when the name ends in `.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank distributions, histograms, occupancy and centrality summaries.
    Distribution {
        #[command(flatten)]
        input: InputArgs,
        /// Single value, comma list or range, e.g. `1-10`.
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Kind::Mn)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = VariantArg::Total)]
        variant: VariantArg,
        /// Three-tier histogram of neighbourhood sizes.
        #[arg(long)]
        histogram: bool,
        /// Empty vs non-empty neighbourhood counts.
        #[arg(long)]
        occupancy: bool,
        /// Log-log rank-size slope and R².
        #[arg(long)]
        fit: bool,
        /// Output directory for report files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FileFormat::Csv)]
        format: FileFormat,
    },
    /// Seeded synthetic network in edge-list format.
    Generate {
        /// `key = value` file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        layers: Option<usize>,
        /// Edge budget per layer (default: five per node).
        #[arg(long)]
        edges_per_layer: Option<usize>,
        #[arg(long)]
        seed_clique: Option<usize>,
        #[arg(long)]
        overlap: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// `const:<w>` or `exp:<mean>`.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Edge list: `source<TAB>target<TAB>layer[<TAB>weight]`.
    input: PathBuf,
    /// Node manifest, one label per line; registers isolated nodes.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value = "error")]
    duplicates: DuplicatePolicy,
    #[arg(long, default_value = "error")]
    loops: LoopPolicy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Total,
    In,
    Out,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Total => Variant::Total,
            VariantArg::In => Variant::In,
            VariantArg::Out => Variant::Out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Mn,
    Cldc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    fn of_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => FileFormat::Json,
            _ => FileFormat::Csv,
        }
    }

    fn extension(self) -> &'static str {
        match self {
            FileFormat::Csv => "csv",
            FileFormat::Json => "json",
        }
    }
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::AtLine { .. } => 2,
            _ => match e.root() {
                Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
                Error::UnknownNode(_) | Error::UnknownLayer(_) => 3,
                Error::AlphaOutOfRange { .. } => 4,
                Error::DegenerateNetwork(_) => 5,
                Error::ConfigInvalid(_) => 6,
                _ => 2,
            },
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn failure(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("msn: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("msn: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(args: &InputArgs, rec: &mut RunRecorder) -> CmdResult<MultiLayerNetwork> {
    let node_manifest = match &args.manifest {
        Some(p) => {
            rec.input(p);
            Some(read_node_manifest_file(p)?)
        }
        None => None,
    };
    rec.input(&args.input);
    let options = IngestOptions {
        duplicate_policy: args.duplicates,
        loop_policy: args.loops,
        node_manifest,
    };
    Ok(read_edge_list_file(&args.input, &options)?)
}

fn alphas(list: &str) -> CmdResult<Vec<usize>> {
    parse_alphas(list).map_err(|m| failure(4, m))
}

fn single_alpha(list: &str) -> CmdResult<usize> {
    match alphas(list)?.as_slice() {
        [a] => Ok(*a),
        _ => Err(failure(4, format!("expected a single alpha, got `{list}`"))),
    }
}

fn create(path: &Path) -> CmdResult<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn export<R: Report>(
    report: &R,
    network: &MultiLayerNetwork,
    path: &Path,
    format: FileFormat,
    rec: &mut RunRecorder,
) -> CmdResult {
    let mut w = create(path)?;
    match format {
        FileFormat::Csv => report.write_csv(network, &mut w)?,
        FileFormat::Json => report.write_json(network, &mut w)?,
    }
    w.flush()?;
    rec.output(path);
    Ok(())
}

/// Writes the manifest beside `out` (inside it for directories), or to
/// stderr as one JSON line when there is no output location.
fn emit_manifest(rec: RunRecorder, out: Option<&Path>, dir: bool) -> CmdResult {
    let manifest = rec.finish();
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| failure(1, e.to_string()))?;
    match out {
        Some(p) => {
            let path = if dir {
                p.join("manifest.json")
            } else {
                let mut s = p.as_os_str().to_owned();
                s.push(".manifest.json");
                PathBuf::from(s)
            };
            let mut w = create(&path)?;
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None => eprintln!("manifest: {}", serde_json::to_string(&manifest).unwrap_or_default()),
    }
    Ok(())
}

fn run(command: Command, out: &mut impl Write) -> CmdResult {
    match command {
        Command::Stats { input, out: path } => cmd_stats(&input, path.as_deref(), out),
        Command::Neighborhood {
            input,
            node,
            layer,
            alpha,
        } => cmd_neighborhood(&input, &node, layer.as_deref(), alpha.as_deref(), out),
        Command::Centrality {
            input,
            alpha,
            variant,
            node,
            all: _,
            out: path,
        } => cmd_centrality(&input, &alpha, variant.into(), node.as_deref(), path.as_deref(), out),
        Command::Distribution {
            input,
            alpha,
            kind,
            variant,
            histogram,
            occupancy,
            fit,
            out: dir,
            format,
        } => cmd_distribution(
            &input,
            &DistributionRequest {
                alphas: alphas(&alpha)?,
                kind,
                variant: variant.into(),
                histogram,
                occupancy,
                fit,
                format,
            },
            dir.as_deref(),
            out,
        ),
        Command::Generate {
            config,
            nodes,
            layers,
            edges_per_layer,
            seed_clique,
            overlap,
            seed,
            weights,
            out: path,
        } => {
            let mut rec = RunRecorder::start("generate");
            let mut cfg = GeneratorConfig::default();
            let mut from_file = Vec::new();
            if let Some(p) = &config {
                rec.input(p);
                from_file = cfg.apply_key_values(&fs::read_to_string(p)?)?;
            }
            cfg.nodes = nodes.unwrap_or(cfg.nodes);
            if !from_file.iter().any(|k| k == "edges_per_layer") {
                // five edges per node and layer unless told otherwise
                cfg.edges_per_layer = cfg.nodes.saturating_mul(5);
            }
            cfg.layers = layers.unwrap_or(cfg.layers);
            cfg.edges_per_layer = edges_per_layer.unwrap_or(cfg.edges_per_layer);
            cfg.seed_clique = seed_clique.unwrap_or(cfg.seed_clique);
            cfg.overlap = overlap.unwrap_or(cfg.overlap);
            cfg.seed = seed.unwrap_or(cfg.seed);
            if let Some(w) = weights {
                cfg.weights = w
                    .parse::<WeightModel>()
                    .map_err(|m| failure(6, format!("invalid generator config: {m}")))?;
            }
            let network = generate(&cfg)?;
            let mut w = create(&path)?;
            write_edge_list_with_header(&network, &mut w, &[cfg.describe()])?;
            w.flush()?;
            rec.output(&path);
            writeln!(
                out,
                "wrote {} edges on {} layers over {} nodes to {}",
                network.edge_count(),
                network.layer_count(),
                network.node_count(),
                path.display()
            )?;
            emit_manifest(rec, Some(&path), false)
        }
    }
}

fn cmd_stats(input: &InputArgs, path: Option<&Path>, out: &mut impl Write) -> CmdResult {
    let mut rec = RunRecorder::start("stats");
    let network = load(input, &mut rec)?;
    let table = analytics::layer_stats(&network);
    writeln!(out, "nodes\t{}", table.nodes)?;
    writeln!(out, "layers\t{}", network.layer_count())?;
    writeln!(out, "edges\t{}", table.total_edges)?;
    writeln!(out, "active nodes\t{}", table.active_nodes)?;
    writeln!(out)?;
    writeln!(out, "layer\tedges\tactive_nodes")?;
    for row in &table.rows {
        writeln!(out, "{}\t{}\t{}", row.layer, row.edges, row.active_nodes)?;
    }
    writeln!(out, "SUM\t{}\t{}", table.total_edges, table.total_layer_active)?;
    if let Some(p) = path {
        export(&table, &network, p, FileFormat::of_path(p), &mut rec)?;
    }
    emit_manifest(rec, path, false)
}

fn cmd_neighborhood(
    input: &InputArgs,
    node: &str,
    layer: Option<&str>,
    alpha: Option<&str>,
    out: &mut impl Write,
) -> CmdResult {
    let mut rec = RunRecorder::start("neighborhood");
    let network = load(input, &mut rec)?;
    let x = network.require_node(node)?;
    let set = match (layer, alpha) {
        (Some(l), _) => network.local_neighborhood(x, network.require_layer(l)?)?,
        (None, Some(a)) => network.multi_layer_neighborhood(x, single_alpha(a)?)?,
        (None, None) => return Err(failure(2, "one of --layer or --alpha is required")),
    };
    let mut labels = set.labels(&network);
    labels.sort_unstable();
    writeln!(out, "{}", labels.join(" "))?;
    writeln!(out, "count\t{}", labels.len())?;
    emit_manifest(rec, None, false)
}

fn cmd_centrality(
    input: &InputArgs,
    alpha: &str,
    variant: Variant,
    node: Option<&str>,
    path: Option<&Path>,
    out: &mut impl Write,
) -> CmdResult {
    let mut rec = RunRecorder::start("centrality");
    let network = load(input, &mut rec)?;
    let alpha = single_alpha(alpha)?;
    if let Some(label) = node {
        let x = network.require_node(label)?;
        let score = network.centrality(x, alpha, variant)?;
        writeln!(out, "{}", significant(score, 6))?;
        if let Some(p) = path {
            let rows = vec![ScoreRow { node: label.to_owned(), score }];
            write_rows(&rows, p, &mut rec)?;
        }
        return emit_manifest(rec, path, false);
    }
    let scores = network.cldc_batch(alpha, variant)?;
    let mut rows: Vec<ScoreRow> = scores
        .iter()
        .map(|(x, score)| ScoreRow {
            node: network.node_label(x).to_owned(),
            score,
        })
        .collect();
    rows.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.node.cmp(&b.node)));
    for r in rows.iter().filter(|r| r.score > 0.0) {
        writeln!(out, "{}\t{}", r.node, significant(r.score, 6))?;
    }
    if let Some(p) = path {
        write_rows(&rows, p, &mut rec)?;
    }
    emit_manifest(rec, path, false)
}

#[derive(Debug, serde::Serialize)]
struct ScoreRow {
    node: String,
    score: f64,
}

fn write_rows(rows: &[ScoreRow], path: &Path, rec: &mut RunRecorder) -> CmdResult {
    let mut w = create(path)?;
    match FileFormat::of_path(path) {
        FileFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rows).map_err(|e| failure(1, e.to_string()))?;
            writeln!(w)?;
        }
        FileFormat::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r).map_err(|e| failure(1, e.to_string()))?;
            }
            csv.flush()?;
        }
    }
    w.flush()?;
    rec.output(path);
    Ok(())
}

struct DistributionRequest {
    alphas: Vec<usize>,
    kind: Kind,
    variant: Variant,
    histogram: bool,
    occupancy: bool,
    fit: bool,
    format: FileFormat,
}

fn cmd_distribution(
    input: &InputArgs,
    req: &DistributionRequest,
    dir: Option<&Path>,
    out: &mut impl Write,
) -> CmdResult {
    let mut rec = RunRecorder::start("distribution");
    let network = load(input, &mut rec)?;
    let ext = req.format.extension();
    let file = |name: String| dir.map(|d| d.join(format!("{name}.{ext}")));
    let mut fits = Vec::new();

    match req.kind {
        Kind::Mn => {
            let show_rank = !req.histogram && !req.occupancy;
            for &alpha in &req.alphas {
                let dist = analytics::mn_size_distribution(&network, alpha)?;
                if show_rank {
                    writeln!(out, "# mn alpha={alpha}")?;
                    writeln!(out, "rank,node,value")?;
                    for (i, e) in dist.entries.iter().enumerate() {
                        writeln!(out, "{},{},{}", i + 1, network.node_label(e.node), e.value)?;
                    }
                }
                if let Some(p) = file(format!("mn_rank_a{alpha}")) {
                    export(&dist, &network, &p, req.format, &mut rec)?;
                }
                if req.fit {
                    fits.push((alpha, loglog_fit(&dist.values())));
                }
                if req.histogram {
                    let hist = analytics::mn_histogram(&network, alpha)?;
                    writeln!(out, "# histogram alpha={alpha}")?;
                    writeln!(out, "bucket_lo,bucket_hi,count")?;
                    for b in &hist.buckets {
                        writeln!(out, "{},{},{}", b.bucket_lo, b.bucket_hi, b.count)?;
                    }
                    if let Some(p) = file(format!("mn_hist_a{alpha}")) {
                        export(&hist, &network, &p, req.format, &mut rec)?;
                    }
                }
            }
        }
        Kind::Cldc => {
            let summary = analytics::cldc_summary(&network, &req.alphas, req.variant)?;
            writeln!(out, "# cldc variant={}", req.variant)?;
            writeln!(out, "alpha,min,max,count")?;
            let opt = |v: Option<f64>| v.map(|x| significant(x, 6)).unwrap_or_default();
            for r in &summary.rows {
                writeln!(out, "{},{},{},{}", r.alpha, opt(r.min), opt(r.max), r.count)?;
            }
            if let Some(p) = file(format!("cldc_{}_summary", req.variant)) {
                export(&summary, &network, &p, req.format, &mut rec)?;
            }
            for &alpha in &req.alphas {
                if dir.is_none() && !req.fit {
                    break;
                }
                let dist = analytics::cldc_distribution(&network, alpha, req.variant)?;
                if let Some(p) = file(format!("cldc_{}_rank_a{alpha}", req.variant)) {
                    export(&dist, &network, &p, req.format, &mut rec)?;
                }
                if req.fit {
                    fits.push((alpha, loglog_fit(&dist.values())));
                }
            }
        }
    }

    if req.occupancy {
        let occ = analytics::mn_occupancy(&network, &req.alphas)?;
        writeln!(out, "alpha,nonempty,empty,pct_nonempty")?;
        for r in &occ.rows {
            writeln!(out, "{},{},{},{:.1}", r.alpha, r.nonempty, r.empty, r.pct_nonempty)?;
        }
        if let Some(p) = file("mn_occupancy".to_owned()) {
            export(&occ, &network, &p, req.format, &mut rec)?;
        }
    }

    if req.fit {
        writeln!(out, "# log-log rank-size fit")?;
        writeln!(out, "alpha,slope,r_squared,points")?;
        for (alpha, fit) in &fits {
            match fit {
                Some(f) => writeln!(
                    out,
                    "{alpha},{},{},{}",
                    significant(f.slope, 6),
                    significant(f.r_squared, 6),
                    f.points
                )?,
                None => writeln!(out, "{alpha},,,0")?,
            }
        }
    }

    if let Some(d) = dir {
        fs::create_dir_all(d)?;
    }
    emit_manifest(rec, dir, true)
}
