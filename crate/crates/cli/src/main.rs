use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde_json::json;

use truss_core::bench::{
    generate_updates, load_edge_list, read_stream, run_strategy, verify_stream, write_stream,
    BenchConfig, BenchError, LoadStats, Strategy, UpdateOp,
};
use truss_core::decompose::truss_decompose;
use truss_core::generators::{self, CommunityParams};
use truss_core::index::query_k_truss_scan;
use truss_core::Graph;

#[derive(Parser)]
#[command(
    name = "truss",
    version,
    about = "k-truss decomposition, maintenance benchmarks and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an edge list and print the truss-number histogram.
    Decompose {
        file: PathBuf,
        /// Also report the maximal k-trusses at this level.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Replay a seeded update stream with one strategy and report timings.
    Bench {
        file: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        updates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        delete_fraction: f64,
        /// Query after every Q updates (default: once, at the end).
        #[arg(long)]
        query_every: Option<usize>,
        /// Replay this stream file instead of generating one.
        #[arg(long)]
        stream: Option<PathBuf>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append an `update_count,strategy,millis` row to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check every maintained update against the brute-force oracle.
    Verify {
        file: PathBuf,
        #[arg(long)]
        updates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        delete_fraction: f64,
        #[arg(long)]
        stream: Option<PathBuf>,
    },
    /// Generate a seeded update stream and save it as `I u v` / `D u v` lines.
    GenUpdates {
        file: PathBuf,
        #[arg(long)]
        updates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        delete_fraction: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic edge list.
    GenGraph {
        #[arg(long, value_enum, default_value_t = GraphKind::Community)]
        kind: GraphKind,
        /// Vertices for gnp; communities for community graphs.
        #[arg(long)]
        n: Option<u64>,
        /// Edge probability for gnp.
        #[arg(long, default_value_t = 0.05)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Batch,
    Progressive,
    Indexed,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Batch => Strategy::Batch,
            StrategyArg::Progressive => Strategy::Progressive,
            StrategyArg::Indexed => Strategy::Indexed,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Gnp,
    Community,
}

fn load(path: &Path) -> Result<(Graph, f64)> {
    let t = Instant::now();
    let (g, stats) = load_edge_list(path)?;
    let ms = t.elapsed().as_secs_f64() * 1e3;
    report_drops(path, &stats);
    info!(
        "loaded {} vertices, {} edges in {ms:.1} ms",
        g.vertex_count(),
        g.edge_count()
    );
    Ok((g, ms))
}

fn report_drops(path: &Path, stats: &LoadStats) {
    if stats.duplicates > 0 {
        warn!(
            "{}: dropped {} duplicate edges",
            path.display(),
            stats.duplicates
        );
    }
    if stats.self_loops > 0 {
        warn!(
            "{}: dropped {} self-loops",
            path.display(),
            stats.self_loops
        );
    }
}

fn updates_for(
    g: &Graph,
    stream: Option<&Path>,
    count: usize,
    seed: u64,
    delete_fraction: f64,
) -> Result<Vec<UpdateOp>> {
    match stream {
        Some(path) => {
            let ops = read_stream(path)?;
            Ok(ops.into_iter().take(count).collect())
        }
        None => Ok(generate_updates(g, count, seed, delete_fraction)?),
    }
}

fn decompose(file: &Path, k: Option<u32>) -> Result<()> {
    let (mut g, _) = load(file)?;
    let t = Instant::now();
    truss_decompose(&mut g);
    let ms = t.elapsed().as_secs_f64() * 1e3;
    let mut histogram = std::collections::BTreeMap::new();
    for (_, st) in g.edges() {
        *histogram.entry(st.phi).or_insert(0usize) += 1;
    }
    let mut out = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "max_phi": g.max_phi(),
        "histogram": histogram,
        "decompose_ms": ms,
    });
    if let Some(k) = k {
        let comps = query_k_truss_scan(&g, k);
        out["k"] = json!(k);
        out["components"] = json!(comps.len());
        out["edges_in_trusses"] = json!(comps.iter().map(Vec::len).sum::<usize>());
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    file: &Path,
    strategy: Strategy,
    k: u32,
    updates: usize,
    seed: u64,
    delete_fraction: f64,
    query_every: Option<usize>,
    stream: Option<&Path>,
    out: Option<&Path>,
    csv_path: Option<&Path>,
) -> Result<()> {
    let (g, load_ms) = load(file)?;
    let ops = updates_for(&g, stream, updates, seed, delete_fraction)?;
    let cfg = BenchConfig {
        strategy,
        k,
        update_count: ops.len(),
        seed,
        query_every: query_every.unwrap_or(0),
        delete_fraction,
    };
    let mut report = run_strategy(&g, &ops, &cfg)?;
    report.timings.load_ms = load_ms;
    let text = serde_json::to_string_pretty(&report)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    if let Some(path) = csv_path {
        let fresh = std::fs::metadata(path)
            .map(|m| m.len() == 0)
            .unwrap_or(true);
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        let mut w = csv::Writer::from_writer(file);
        if fresh {
            w.write_record(["update_count", "strategy", "millis"])?;
        }
        w.write_record([
            report.update_count.to_string(),
            report.strategy.to_string(),
            format!("{:.3}", report.timings.total_ms),
        ])?;
        w.flush()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decompose { file, k } => decompose(&file, k),
        Command::Bench {
            file,
            strategy,
            k,
            updates,
            seed,
            delete_fraction,
            query_every,
            stream,
            out,
            csv,
        } => bench(
            &file,
            strategy.into(),
            k,
            updates,
            seed,
            delete_fraction,
            query_every,
            stream.as_deref(),
            out.as_deref(),
            csv.as_deref(),
        ),
        Command::Verify {
            file,
            updates,
            seed,
            delete_fraction,
            stream,
        } => {
            let (g, _) = load(&file)?;
            let ops = updates_for(&g, stream.as_deref(), updates, seed, delete_fraction)?;
            let summary = verify_stream(&g, &ops)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
        Command::GenUpdates {
            file,
            updates,
            seed,
            delete_fraction,
            out,
        } => {
            let (g, _) = load(&file)?;
            let ops = generate_updates(&g, updates, seed, delete_fraction)?;
            write_stream(&out, &ops)?;
            info!("wrote {} updates to {}", ops.len(), out.display());
            Ok(())
        }
        Command::GenGraph {
            kind,
            n,
            p,
            seed,
            out,
        } => {
            let g = match kind {
                GraphKind::Gnp => generators::gnp(n.unwrap_or(1000), p, seed),
                GraphKind::Community => {
                    let mut params = CommunityParams::default();
                    if let Some(n) = n {
                        params.extra_edges = params.extra_edges * n / params.communities;
                        params.communities = n;
                    }
                    generators::community_graph(&params, seed)
                }
            };
            let mut text = String::new();
            for key in g.edge_keys() {
                text.push_str(&format!("{} {}\n", key.u(), key.v()));
            }
            std::fs::write(&out, text).with_context(|| format!("writing {}", out.display()))?;
            info!("wrote {} edges to {}", g.edge_count(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<BenchError>() {
                Some(BenchError::Verification(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
