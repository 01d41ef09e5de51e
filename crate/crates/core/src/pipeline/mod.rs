//! On-disk orchestration of the stages.
//!
//! Every command reads its inputs from the configured output directory (plus
//! any external inputs named in the config), writes its artifacts there, and
//! stamps each artifact with the tool version and a hash of the effective
//! configuration. JSON artifacts carry the stamp inline; CSV and JSONL
//! artifacts get a `<name>.meta.json` sidecar.

mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use commands::{
    cmd_analyze, cmd_classify, cmd_content, cmd_ingest, cmd_link, cmd_network, cmd_report, cmd_review_export,
    cmd_review_import, cmd_train_type_model, registry_training_pairs, AnalyzeSummary, ClassifySummary, ContentSummary, IngestFailure,
    IngestSummary, NetworkSummary, ReviewImportSummary, TypeModelSummary,
};
pub use report::{
    BucketCounts, LabelGaps, MetricsFile, NetworkStats, RankedInstitution, Rankings, SideRankings, StatsReport,
    VenueYearEntry,
};

use crate::analytics::{AnalyticsError, GraphFormat};
use crate::classify::ClassifyError;
use crate::content::{ContentError, CONTENT_DIMENSION};
use crate::corpus::IngestError;
use crate::link::{LinkError, Threshold, DEFAULT_THRESHOLD};

pub const TOOL_VERSION: &str = concat!("iacollab ", env!("CARGO_PKG_VERSION"));

pub mod artifacts {
    pub const CORPUS: &str = "corpus.jsonl";
    pub const INGEST_ERRORS: &str = "ingest_errors.jsonl";
    pub const LINKS: &str = "links.jsonl";
    pub const TYPE_MODEL: &str = "type_model.json";
    pub const LABELS: &str = "labels.csv";
    pub const REVIEW_QUEUE: &str = "review_queue.csv";
    pub const PAPERS: &str = "paper_classifications.jsonl";
    pub const STATS: &str = "stats_report.json";
    pub const RANKINGS: &str = "rankings.csv";
    pub const RANKINGS_BY_YEAR: &str = "rankings_by_year.csv";
    pub const FIG_COUNTS: &str = "figure_counts.csv";
    pub const FIG_PROPORTIONS: &str = "figure_proportions.csv";
    pub const FIG_FIRST_AUTHOR: &str = "figure_first_author.csv";
    pub const NETWORK_STEM: &str = "network";
    pub const METRICS: &str = "metrics.json";
    pub const REPORT: &str = "report.md";
    pub const EFFECTIVE_CONFIG: &str = "effective_config.json";
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("no corpus inputs given")]
    NoInputs,
    #[error("missing setting {0}")]
    MissingSetting(&'static str),
    #[error("{failed} of {total} input records failed; see {}", .report.display())]
    IngestFailed {
        failed: usize,
        total: usize,
        report: PathBuf,
    },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", .path.display())]
    Artifact { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Content(#[from] ContentError),
}

impl PipelineError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::NoInputs => "usage",
            PipelineError::MissingSetting(_) | PipelineError::Config(_) => "config",
            PipelineError::IngestFailed { .. } | PipelineError::Ingest(_) => "ingest",
            PipelineError::Io { .. } => "io",
            PipelineError::Artifact { .. } => "artifact",
            PipelineError::Link(LinkError::InvalidThreshold(_)) => "config",
            PipelineError::Link(_) => "link",
            PipelineError::Classify(_) => "classify",
            PipelineError::Analytics(_) => "analytics",
            PipelineError::Content(_) => "content",
        }
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

/// Every knob of the pipeline. Absent optional paths serialize as null so
/// the effective config lists each key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// TEI files, JSONL corpora, or directories holding them.
    pub corpus_inputs: Vec<PathBuf>,
    /// Keep going past unreadable or invalid records, listing them in the error sidecar.
    pub skip_errors: bool,
    /// Venue assigned to every ingested record.
    pub venue: Option<String>,
    /// Year assigned to every ingested record.
    pub year: Option<i32>,
    pub registry: Option<PathBuf>,
    pub link_threshold: Threshold,
    pub labeled_list: Option<PathBuf>,
    pub resolver_fixture: Option<PathBuf>,
    pub resolver_cache: Option<PathBuf>,
    /// Defaults to `type_model.json` in the output directory.
    pub type_model: Option<PathBuf>,
    pub type_model_dimension: usize,
    pub type_model_seed: u64,
    pub content_seed: u64,
    pub content_dimension: usize,
    pub random_trials: usize,
    pub output_dir: PathBuf,
    /// Edges are kept when their weight is strictly greater.
    pub network_min_weight: usize,
    pub graph_formats: Vec<String>,
    pub top_k: usize,
    pub top_k_per_year: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus_inputs: Vec::new(),
            skip_errors: false,
            venue: None,
            year: None,
            registry: None,
            link_threshold: Threshold::new(DEFAULT_THRESHOLD).expect("default threshold is valid"),
            labeled_list: None,
            resolver_fixture: None,
            resolver_cache: None,
            type_model: None,
            type_model_dimension: crate::classify::DEFAULT_DIMENSION,
            type_model_seed: 42,
            content_seed: 42,
            content_dimension: CONTENT_DIMENSION,
            random_trials: 50,
            output_dir: PathBuf::from("out"),
            network_min_weight: 5,
            graph_formats: GraphFormat::ALL.iter().map(|f| f.extension().to_string()).collect(),
            top_k: 10,
            top_k_per_year: 5,
        }
    }
}

#[derive(Serialize)]
struct EffectiveConfig<'a> {
    tool_version: &'a str,
    config_hash: &'a str,
    config: &'a PipelineConfig,
}

impl PipelineConfig {
    /// Reads a JSON config file. An emitted effective config is accepted too.
    pub fn load(path: &Path) -> Result<Self> {
        let bad = |e: serde_json::Error| PipelineError::Artifact {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut value: serde_json::Value = serde_json::from_slice(&read(path)?).map_err(bad)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(bad)
    }

    /// Fills derived defaults and checks ranges.
    pub fn resolved(mut self) -> Result<Self> {
        if self.type_model.is_none() {
            self.type_model = Some(self.output_dir.join(artifacts::TYPE_MODEL));
        }
        if self.type_model_dimension < 2 || self.content_dimension < 2 {
            return Err(PipelineError::Config("feature dimensions must be at least 2".into()));
        }
        for f in &self.graph_formats {
            f.parse::<GraphFormat>()?;
        }
        if self.top_k == 0 || self.top_k_per_year == 0 {
            return Err(PipelineError::Config("top_k values must be at least 1".into()));
        }
        Ok(self)
    }

    pub fn formats(&self) -> Vec<GraphFormat> {
        self.graph_formats
            .iter()
            .filter_map(|f| f.parse().ok())
            .collect()
    }

    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }

    pub fn type_model_path(&self) -> PathBuf {
        self.type_model
            .clone()
            .unwrap_or_else(|| self.path(artifacts::TYPE_MODEL))
    }

    pub(crate) fn stamp(&self) -> Stamp {
        Stamp {
            tool_version: TOOL_VERSION.to_string(),
            config_hash: self.hash(),
        }
    }

    /// Creates the output directory and writes the effective config into it.
    pub fn prepare(&self) -> Result<()> {
        fs::create_dir_all(&self.output_dir).map_err(|e| io_err(&self.output_dir, e))?;
        let hash = self.hash();
        let body = EffectiveConfig {
            tool_version: TOOL_VERSION,
            config_hash: &hash,
            config: self,
        };
        let mut text = serde_json::to_string_pretty(&body).expect("config serializes");
        text.push('\n');
        write_atomic(&self.path(artifacts::EFFECTIVE_CONFIG), text.as_bytes())
    }
}

/// Tool version and config hash carried by every artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stamp {
    pub tool_version: String,
    pub config_hash: String,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    artifact: &'a str,
    #[serde(flatten)]
    stamp: &'a Stamp,
    sha256: String,
    records: usize,
}

pub(crate) fn io_err(path: &Path, source: std::io::Error) -> PipelineError {
    PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| io_err(path, e))
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    f.write_all(bytes).map_err(|e| io_err(&tmp, e))?;
    f.sync_all().map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Writes a flat-file artifact and its provenance sidecar.
pub(crate) fn write_with_sidecar(path: &Path, bytes: &[u8], records: usize, stamp: &Stamp) -> Result<()> {
    write_atomic(path, bytes)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let sidecar = Sidecar {
        artifact: &name,
        stamp,
        sha256: hex::encode(Sha256::digest(bytes)),
        records,
    };
    let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    text.push('\n');
    write_atomic(&sidecar_path(path), text.as_bytes())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
