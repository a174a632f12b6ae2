//! Command-line front end for the staged pipeline.

use clap::{Parser, Subcommand};
use copurchase::features::Variant;
use copurchase::pipeline::{self, ModelKind, PipelineConfig, Workspace};
use copurchase::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "copurchase", version, about = "Co-purchase graph analysis and link prediction")]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Workspace root (default: $COPURCHASE_WORKSPACE or ./workspace).
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Metadata dump (plain or gzip).
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    d_cat: Option<usize>,
    /// Feature variant: full, no_group, no_category, no_degree, no_cluster.
    #[arg(long, global = true)]
    variant: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Continue even if upstream artifacts no longer match their manifests.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and filter the metadata dump.
    Parse,
    /// Build the co-purchase graph and its largest connected component.
    BuildGraph,
    /// Structural statistics and degree distributions.
    Stats,
    /// Louvain partition and attribute/category modularity.
    Communities,
    /// Per-node feature table.
    Features,
    /// Labeled pairs around 1-degree nodes, split into train and test.
    MakeDataset,
    /// Train the random forest.
    TrainRf,
    /// Train the GraphSAGE link predictor.
    TrainSage,
    /// Top-k protocol on BFS subgraphs of the LCC.
    Evaluate {
        #[arg(long, default_value = "rf")]
        model: String,
        /// Subgraph size.
        #[arg(long)]
        n: Option<usize>,
        /// Number of subgraph seeds.
        #[arg(long)]
        repeats: Option<usize>,
    },
    /// Retrain the forest once per feature variant.
    Ablate {
        /// Comma-separated variants (default: all).
        #[arg(long, value_delimiter = ',')]
        variants: Vec<String>,
    },
    /// Write the neighborhood of the highest-degree nodes as GEXF and CSV.
    ExportViz {
        #[arg(long, default_value_t = 50)]
        top: usize,
    },
    /// Summarize measured values against reference values.
    ReproReport,
}

fn config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(w) = &cli.workspace {
        cfg.workspace = w.clone();
    }
    if let Some(d) = &cli.dataset {
        cfg.dataset = d.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(d) = cli.d_cat {
        cfg.d_cat = d;
    }
    if let Some(v) = &cli.variant {
        cfg.variant = v.parse()?;
    }
    if let Command::Evaluate { n, repeats, .. } = &cli.command {
        if let Some(n) = n {
            cfg.eval.n = *n;
        }
        if let Some(r) = repeats {
            cfg.eval.repeats = *r;
        }
    }
    cfg.resolved()
}

fn print<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::invalid(e.to_string()))?;
    }
    let cfg = config(&cli)?;
    let ws = Workspace::new(&cfg.workspace, cli.force);
    match &cli.command {
        Command::Parse => print(&pipeline::parse(&ws, &cfg)?),
        Command::BuildGraph => print(&pipeline::build_graph(&ws, &cfg)?),
        Command::Stats => print(&pipeline::stats(&ws, &cfg)?),
        Command::Communities => print(&pipeline::communities(&ws, &cfg)?),
        Command::Features => {
            let n = pipeline::features(&ws, &cfg)?;
            println!("{n} node feature rows");
            Ok(())
        }
        Command::MakeDataset => print(&pipeline::make_dataset(&ws, &cfg)?),
        Command::TrainRf => print(&pipeline::train_rf(&ws, &cfg)?),
        Command::TrainSage => print(&pipeline::train_sage_stage(&ws, &cfg)?),
        Command::Evaluate { model, .. } => {
            let kind: ModelKind = model.parse()?;
            let r = pipeline::evaluate(&ws, &cfg, kind)?;
            print(&serde_json::json!({
                "model": r.model,
                "top5": r.top5,
                "mrr": r.mrr,
                "queries": r.queries,
                "topk_curve": r.topk_curve,
            }))
        }
        Command::Ablate { variants } => {
            let vs: Vec<Variant> = if variants.is_empty() {
                Variant::ALL.to_vec()
            } else {
                variants.iter().map(|v| v.parse()).collect::<Result<_>>()?
            };
            let rows = pipeline::ablate(&ws, &cfg, &vs)?;
            copurchase::eval::write_ablation_csv(&rows, std::io::stdout())
        }
        Command::ExportViz { top } => {
            let (n, m) = pipeline::export_viz(&ws, &cfg, *top)?;
            println!("exported {n} nodes, {m} edges");
            Ok(())
        }
        Command::ReproReport => print(&pipeline::repro_report(&ws, &cfg)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
