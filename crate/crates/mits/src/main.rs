//! CLI harness: benchmark runs over JSONL datasets, trace rescoring, and the
//! pinned-fixture selftest.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mits::backend::{HttpBackend, LanguageModel, MockBackend, MockTable};
use mits::bench::dataset::{load_dataset, DatasetFormat};
use mits::bench::{fixtures, run_benchmark, trace, BenchOptions};
use mits::pmi::Aggregation;
use mits::search::Backends;
use mits::types::{RunConfig, ScoreSource};

const AUTH_ENV_VAR: &str = "MITS_API_KEY";

#[derive(Parser)]
#[command(name = "mits", about = "PMI-guided tree search over reasoning steps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark over a JSONL dataset.
    Run(RunArgs),
    /// Recompute PMI deltas over an existing trace file.
    ScoreTrace(ScoreTraceArgs),
    /// Verify the pinned reference traces.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendKind {
    Mock,
    Http,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Sum,
    Average,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file mirroring the flags; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "generic")]
    format: String,

    #[arg(long, value_enum, default_value = "mock")]
    backend: BackendKind,
    /// Mock-table JSON file (mock backend).
    #[arg(long)]
    mock_table: Option<PathBuf>,
    /// Completions endpoint (http backend); auth token read from MITS_API_KEY.
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// Separate evaluator endpoint; defaults to the generator.
    #[arg(long)]
    evaluator_endpoint: Option<String>,
    #[arg(long)]
    evaluator_model: Option<String>,

    #[arg(long)]
    beam_width: Option<usize>,
    #[arg(long)]
    n_base: Option<usize>,
    #[arg(long)]
    v_p: Option<f64>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    max_new_tokens: Option<usize>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    top_p: Option<f64>,
    #[arg(long)]
    vote_k: Option<usize>,
    #[arg(long, value_enum)]
    aggregation: Option<AggregationArg>,
    #[arg(long)]
    full_expand: bool,
    /// Diagnostic: rank by conditional likelihood instead of PMI.
    #[arg(long)]
    likelihood_only: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_nodes: Option<usize>,

    /// Output directory for the results summary (and traces with --trace).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump one trace file per question into the output directory.
    #[arg(long)]
    trace: bool,
    /// Also write full-precision traces.
    #[arg(long)]
    precise_traces: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ScoreTraceArgs {
    /// Trace file to rescore.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
}

fn apply_config_file(cfg: &mut RunConfig, path: &PathBuf) -> Result<()> {
    let content = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    *cfg = serde_json::from_str(&content)
        .with_context(|| format!("parsing config file {}", path.display()))?;
    Ok(())
}

fn build_config(args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        apply_config_file(&mut cfg, path)?;
    }
    macro_rules! set {
        ($field:ident) => {
            if let Some(v) = args.$field {
                cfg.$field = v;
            }
        };
    }
    set!(beam_width);
    set!(n_base);
    set!(v_p);
    set!(max_depth);
    set!(max_new_tokens);
    set!(temperature);
    set!(top_k);
    set!(top_p);
    set!(vote_k);
    set!(seed);
    set!(max_nodes);
    if let Some(a) = args.aggregation {
        cfg.aggregation = match a {
            AggregationArg::Sum => Aggregation::Sum,
            AggregationArg::Average => Aggregation::Average,
        };
    }
    if args.full_expand {
        cfg.full_expand = true;
    }
    if args.likelihood_only {
        cfg.score_source = ScoreSource::ConditionalOnly;
    }
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(cfg)
}

fn build_backends(args: &RunArgs) -> Result<Backends> {
    match args.backend {
        BackendKind::Mock => {
            let path = args
                .mock_table
                .as_ref()
                .context("--mock-table is required with the mock backend")?;
            let table = MockTable::from_path(path).map_err(|e| anyhow::anyhow!("{e}"))?;
            let backend: Arc<dyn LanguageModel> =
                Arc::new(MockBackend::new(table).map_err(|e| anyhow::anyhow!("{e}"))?);
            Ok(Backends::shared(backend))
        }
        BackendKind::Http => {
            let endpoint = args.endpoint.as_ref().context("--endpoint is required")?;
            let model = args.model.as_ref().context("--model is required")?;
            let auth = std::env::var(AUTH_ENV_VAR).ok();
            let generator = HttpBackend::new(endpoint, model.clone(), auth.clone())
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            generator.probe().map_err(|e| anyhow::anyhow!("generator probe failed: {e}"))?;
            let generator: Arc<dyn LanguageModel> = Arc::new(generator);
            match (&args.evaluator_endpoint, &args.evaluator_model) {
                (None, None) => Ok(Backends::shared(generator)),
                (endpoint2, model2) => {
                    let endpoint2 = endpoint2.as_deref().unwrap_or(endpoint);
                    let model2 = model2.clone().unwrap_or_else(|| model.clone());
                    let evaluator = HttpBackend::new(endpoint2, model2, auth)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    evaluator
                        .probe()
                        .map_err(|e| anyhow::anyhow!("evaluator probe failed: {e}"))?;
                    Ok(Backends::split(generator, Arc::new(evaluator)))
                }
            }
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let format: DatasetFormat =
        args.format.parse().map_err(|e: String| anyhow::anyhow!(e))?;
    let records = load_dataset(&args.dataset, format).map_err(|e| anyhow::anyhow!("{e}"))?;
    let cfg = build_config(&args)?;
    let backends = build_backends(&args)?;

    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
    }
    let opts = BenchOptions {
        workers: args.workers,
        trace_dir: if args.trace { args.out.clone() } else { None },
        precise_traces: args.precise_traces,
    };
    if opts.trace_dir.is_none() && args.trace {
        bail!("--trace requires --out DIR");
    }

    let report = run_benchmark(&records, &backends, &cfg, &opts);
    let summary = report.to_json()?;
    if let Some(dir) = &args.out {
        let path = dir.join("results.json");
        std::fs::write(&path, &summary)
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    println!(
        "accuracy: {:.2}% ({}/{}), mean {:.2}s/question, {} nodes total",
        report.aggregate.accuracy_pct,
        report.aggregate.correct,
        report.aggregate.total_questions,
        report.aggregate.mean_seconds,
        report.aggregate.total_nodes,
    );
    let failed = report.per_question.iter().filter(|q| q.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} question(s) recorded errors");
    }
    Ok(())
}

fn cmd_score_trace(args: ScoreTraceArgs) -> Result<()> {
    let content = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let nodes = trace::parse_trace(&content).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut worst = 0.0f64;
    for n in &nodes {
        let recomputed = n.logp_conditional - n.logp_marginal;
        let dev = (recomputed - n.pmi).abs();
        worst = worst.max(dev);
        println!(
            "node {}: log p(S|q)={:.2} log p(S)={:.2} recomputed PMI={:.2} recorded={:.2} |dev|={:.4}",
            n.index, n.logp_conditional, n.logp_marginal, recomputed, n.pmi, dev
        );
    }
    println!("{} node(s), max deviation {:.4}", nodes.len(), worst);
    if worst > args.tolerance {
        bail!("max deviation {worst:.4} exceeds tolerance {}", args.tolerance);
    }
    Ok(())
}

fn cmd_selftest() -> Result<()> {
    let results = fixtures::check_all(0.02);
    let mut failed = 0;
    for (line, ok) in &results {
        println!("{}: {line}", if *ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        bail!("{failed} fixture check(s) failed");
    }
    println!("all {} fixture checks passed", results.len());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::ScoreTrace(args) => cmd_score_trace(args),
        Command::Selftest => cmd_selftest(),
    }
}
