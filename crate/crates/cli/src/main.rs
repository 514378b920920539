//! `kgscope` command-line driver.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kgscope::graph::EdgeFormat;
use kgscope::pipeline::{run_pipeline, PipelineConfig};
use kgscope::Error;

#[derive(Parser, Debug)]
#[command(name = "kgscope", version, about = "Relation-level analysis of multi-relational knowledge graphs")]
struct Cli {
    /// Log more (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge-list file; overrides `input.path`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input format: conceptnet-dump or generic-3col.
    #[arg(long)]
    format: Option<EdgeFormat>,
    /// Sets every seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Bundle output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph statistics only.
    Stats(Common),
    /// Train and export embeddings.
    Train(Common),
    /// Similarity-list validation of trained embeddings.
    Validate(Common),
    /// Relation similarity matrices.
    Relsim(Common),
    /// k-means substructure of selected relations.
    Cluster {
        #[command(flatten)]
        common: Common,
        /// Relation to cluster (repeatable).
        #[arg(long = "relation")]
        relations: Vec<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Relation / negation pair probe.
    Negation {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        relation: Option<String>,
        #[arg(long)]
        negation: Option<String>,
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Every stage enabled in the configuration.
    Run(Common),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Only {
    Stats,
    Train,
    Validate,
    Relsim,
    Cluster,
    Negation,
}

fn base_config(common: &Common) -> Result<PipelineConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => PipelineConfig::from_file(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = &common.input {
        cfg.input.path = p.clone();
    }
    if let Some(f) = common.format {
        cfg.input.format = f;
    }
    if let Some(s) = common.seed {
        cfg.input.seed = s;
        cfg.split.seed = s;
        cfg.train.seed = s;
        cfg.validate.seed = s;
        cfg.cluster.seed = s;
        cfg.negation.seed = s;
        if let Some(f) = cfg.negation.forest.as_mut() {
            f.seed = s;
        }
    }
    if let Some(o) = &common.out {
        cfg.output.dir = o.clone();
    }
    if common.workers.is_some() {
        cfg.output.workers = common.workers;
    }
    Ok(cfg)
}

fn select(cfg: &mut PipelineConfig, only: Only) {
    cfg.train.export = only == Only::Train;
    cfg.validate.enabled = only == Only::Validate;
    cfg.relsim.enabled = only == Only::Relsim;
    cfg.cluster.enabled = only == Only::Cluster;
    cfg.negation.enabled = only == Only::Negation;
}

fn build(command: &Command) -> Result<PipelineConfig, Error> {
    let (common, only) = match command {
        Command::Stats(c) => (c, Some(Only::Stats)),
        Command::Train(c) => (c, Some(Only::Train)),
        Command::Validate(c) => (c, Some(Only::Validate)),
        Command::Relsim(c) => (c, Some(Only::Relsim)),
        Command::Cluster { common, .. } => (common, Some(Only::Cluster)),
        Command::Negation { common, .. } => (common, Some(Only::Negation)),
        Command::Run(c) => (c, None),
    };
    let mut cfg = base_config(common)?;
    if let Some(only) = only {
        select(&mut cfg, only);
    }
    match command {
        Command::Cluster { relations, k, .. } => {
            if !relations.is_empty() {
                cfg.cluster.relations = relations.clone();
            }
            if let Some(k) = k {
                cfg.cluster.k = *k;
                cfg.cluster.k_range = None;
            }
        }
        Command::Negation { relation, negation, folds, .. } => {
            if let Some(r) = relation {
                cfg.negation.relation = r.clone();
            }
            if let Some(n) = negation {
                cfg.negation.negation = n.clone();
            }
            if let Some(f) = folds {
                cfg.negation.folds = *f;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn exit_code(err: &Error) -> u8 {
    match err.root() {
        Error::Config(_) => 1,
        Error::Serialize(_) => 3,
        _ => 2,
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let cfg = build(&cli.command)?;
    let bundle = run_pipeline(&cfg)?;
    let stats = &bundle.dir.join("stats/summary.json");
    println!("bundle\t{}", bundle.dir.display());
    println!("files\t{}", bundle.manifest.files.len());
    println!("stages\t{}", bundle.manifest.stages.join(","));
    if let Ok(text) = std::fs::read_to_string(stats) {
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(&text) {
            for key in ["triples", "entities", "duplicates_removed"] {
                println!("{key}\t{}", v[key]);
            }
        }
    }
    for note in &bundle.manifest.notes {
        println!("note\t{note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
