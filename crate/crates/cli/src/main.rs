use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use iacollab_core::link::Threshold;
use iacollab_core::pipeline::{self, artifacts, PipelineConfig, PipelineError};
use serde_json::json;

/// Industry-academia collaboration analysis over conference paper corpora.
#[derive(Parser)]
#[command(name = "iacollab", version)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    /// Print summaries and errors as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

/// Overrides for config file keys. Unset flags keep the file's value or the default.
#[derive(Args)]
struct ConfigArgs {
    /// JSON config file (an emitted effective_config.json works too).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Registry dump (JSON array of organization records).
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Minimum link score, in (0, 1].
    #[arg(long, global = true)]
    link_threshold: Option<f64>,
    /// CSV with name,label columns.
    #[arg(long, global = true)]
    labeled_list: Option<PathBuf>,
    /// JSON map from query to ordered result URLs.
    #[arg(long, global = true)]
    resolver_fixture: Option<PathBuf>,
    #[arg(long, global = true)]
    resolver_cache: Option<PathBuf>,
    #[arg(long, global = true)]
    type_model: Option<PathBuf>,
    #[arg(long, global = true)]
    type_model_dimension: Option<usize>,
    #[arg(long, global = true)]
    type_model_seed: Option<u64>,
    #[arg(long, global = true)]
    content_seed: Option<u64>,
    #[arg(long, global = true)]
    content_dimension: Option<usize>,
    #[arg(long, global = true)]
    random_trials: Option<usize>,
    /// Network edges need strictly more joint papers than this.
    #[arg(long, global = true)]
    network_min_weight: Option<usize>,
    /// Comma-separated: graphml, dot, json.
    #[arg(long, global = true, value_delimiter = ',')]
    graph_formats: Option<Vec<String>>,
    #[arg(long, global = true)]
    top_k: Option<usize>,
    #[arg(long, global = true)]
    top_k_per_year: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Read TEI files or JSONL corpora into corpus.jsonl.
    Ingest {
        /// Files or directories; *.xml is read as TEI, *.jsonl as corpus lines.
        inputs: Vec<PathBuf>,
        /// Keep valid records and list failures in ingest_errors.jsonl.
        #[arg(long)]
        skip_errors: bool,
        /// Venue for every record (for TEI without conference metadata).
        #[arg(long)]
        venue: Option<String>,
        /// Year for every record.
        #[arg(long)]
        year: Option<i32>,
    },
    /// Link affiliation strings to registry records.
    Link,
    /// Train the institution-name model from registry names and types.
    TrainTypeModel,
    /// Label institutions and queue split votes for review.
    Classify,
    /// Write the pending review queue for annotators.
    ReviewExport {
        /// Destination; defaults to review_export.csv in the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge a resolved review queue into labels.csv.
    ReviewImport {
        file: PathBuf,
    },
    /// Compute statistics, rankings, plot series and the network.
    Analyze,
    /// Export only the thresholded collaboration network.
    Network,
    /// Run the abstract-classification experiments.
    Content,
    /// Summarize all artifacts into report.md.
    Report,
}

fn build_config(cli: &Cli) -> anyhow::Result<PipelineConfig> {
    let a = &cli.config;
    let mut cfg = match &a.config {
        Some(p) => PipelineConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => PipelineConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = &a.$field {
                cfg.$field = v.clone().into();
            }
        )*};
    }
    set!(output_dir, type_model_dimension, type_model_seed, content_seed, content_dimension, random_trials);
    set!(network_min_weight, graph_formats, top_k, top_k_per_year);
    macro_rules! set_opt {
        ($($field:ident),*) => {$(
            if let Some(v) = &a.$field {
                cfg.$field = Some(v.clone());
            }
        )*};
    }
    set_opt!(registry, labeled_list, resolver_fixture, resolver_cache, type_model);
    if let Some(t) = a.link_threshold {
        cfg.link_threshold = Threshold::new(t).map_err(PipelineError::from)?;
    }
    if let Command::Ingest {
        inputs,
        skip_errors,
        venue,
        year,
    } = &cli.command
    {
        if !inputs.is_empty() {
            cfg.corpus_inputs = inputs.clone();
        }
        cfg.skip_errors |= *skip_errors;
        if venue.is_some() {
            cfg.venue = venue.clone();
        }
        if year.is_some() {
            cfg.year = *year;
        }
    }
    Ok(cfg.resolved()?)
}

fn emit(json: bool, value: serde_json::Value, text: String) {
    if json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = build_config(cli)?;
    let j = cli.json;
    match &cli.command {
        Command::Ingest { .. } => {
            let s = pipeline::cmd_ingest(&cfg)?;
            emit(
                j,
                json!(s),
                format!(
                    "{} records read: {} kept, {} skipped ({} incomplete)",
                    s.records_seen, s.processed, s.skipped, s.incomplete
                ),
            );
        }
        Command::Link => {
            let s = pipeline::cmd_link(&cfg)?;
            emit(j, json!(s), s.to_string());
        }
        Command::TrainTypeModel => {
            let s = pipeline::cmd_train_type_model(&cfg)?;
            let auc = s
                .metrics
                .test_auc
                .map(|a| format!("{a:.4}"))
                .unwrap_or_else(|| "n/a".into());
            emit(
                j,
                json!(s),
                format!(
                    "trained on {} names ({} academia, {} industry); test ROC-AUC {auc}; saved {}",
                    s.pairs,
                    s.academia,
                    s.industry,
                    s.path.display()
                ),
            );
        }
        Command::Classify => {
            let s = pipeline::cmd_classify(&cfg)?;
            emit(j, json!(s), s.to_string());
        }
        Command::ReviewExport { out } => {
            let out = out.clone().unwrap_or_else(|| cfg.path("review_export.csv"));
            let n = pipeline::cmd_review_export(&cfg, &out)?;
            emit(
                j,
                json!({"items": n, "path": out}),
                format!("{n} items written to {}", out.display()),
            );
        }
        Command::ReviewImport { file } => {
            let s = pipeline::cmd_review_import(&cfg, file)?;
            emit(
                j,
                json!(s),
                format!(
                    "{} manual labels imported ({} replaced), {} items still queued",
                    s.imported, s.replaced, s.remaining
                ),
            );
        }
        Command::Analyze => {
            let s = pipeline::cmd_analyze(&cfg)?;
            emit(
                j,
                json!(s),
                format!(
                    "{} papers, {} collaborative, {} unknown; {} network edges kept of {}",
                    s.papers, s.collaborative, s.unknown, s.network.edges_kept, s.network.edges_total
                ),
            );
        }
        Command::Network => {
            let s = pipeline::cmd_network(&cfg)?;
            emit(
                j,
                json!(s),
                format!(
                    "{} of {} edges kept (weight > {})",
                    s.stats.edges_kept, s.stats.edges_total, s.stats.min_weight_exclusive
                ),
            );
        }
        Command::Content => {
            let s = pipeline::cmd_content(&cfg)?;
            let mut text = format!(
                "{} collaborative / {} academia-only abstracts",
                s.dataset.collaborative, s.dataset.non_collaborative
            );
            for r in &s.rows {
                text.push_str(&format!(
                    "\n  {:<8} {:<9} P {:.4}  R {:.4}  F1 {:.4}",
                    if r.negative_sampling { "balanced" } else { "full" },
                    format!("{:?}", r.method).to_lowercase(),
                    r.metrics.macro_precision,
                    r.metrics.macro_recall,
                    r.metrics.macro_f1
                ));
            }
            emit(j, json!(s), text);
        }
        Command::Report => {
            let p = pipeline::cmd_report(&cfg)?;
            emit(j, json!({"path": p}), format!("wrote {}", p.display()));
        }
    }
    log::debug!("effective config in {}", cfg.path(artifacts::EFFECTIVE_CONFIG).display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let kind = err
                .downcast_ref::<PipelineError>()
                .map(PipelineError::kind)
                .unwrap_or("error");
            if cli.json {
                eprintln!("{}", json!({"error": {"kind": kind, "message": format!("{err:#}")}}));
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(if kind == "usage" { 2 } else { 1 })
        }
    }
}
