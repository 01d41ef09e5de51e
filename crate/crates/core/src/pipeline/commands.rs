use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::report::{self, ArtifactCounts, MetricsFile, NetworkStats, StatsReport};
use super::{artifacts, io_err, read, write_atomic, write_with_sidecar, PipelineConfig, PipelineError, Result, Stamp};
use crate::analytics::{
    build_collab_network, export_graph, filter_edges, label_paper, InstitutionIndex, PaperClassification,
};
use crate::classify::{
    classify_by_registry_type, classify_institutions, export_review_queue, import_review_labels, read_labels_csv,
    read_review_queue, train_type_model, write_labels_csv, CachedResolver, ClassifyError, FixtureResolver,
    InstitutionLabel, Label, LabeledList, Provenance, ReviewItem, TrainingMetrics, TypeModel, TypeModelOptions,
    WebResolver,
};
use crate::content::{build_content_dataset, run_experiments, ContentConfig, DatasetSummary, ExperimentRow};
use crate::corpus::{
    parse_jsonl_corpus, parse_jsonl_lines, parse_tei_document, validate_record, write_jsonl_corpus, IngestError,
    PaperRecord, Venue, Violation,
};
use crate::link::{link_all, load_registry, LinkResult, LinkSummary, Registry};

// ---------------------------------------------------------------------------
// ingest

/// One input record that did not make it into the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestFailure {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_id: Option<String>,
    pub kind: &'static str,
    pub message: String,
}

/// `records_seen == processed + skipped` always holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub records_seen: usize,
    pub processed: usize,
    pub skipped: usize,
    /// Kept records flagged incomplete (no authors).
    pub incomplete: usize,
    /// Kept records with an empty title.
    pub empty_title: usize,
}

fn is_jsonl(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("jsonl"))
}

fn is_xml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml"))
}

fn input_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        let meta = fs::metadata(input).map_err(|e| io_err(input, e))?;
        if meta.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .map_err(|e| io_err(input, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && (is_xml(p) || is_jsonl(p)))
                .collect();
            found.sort();
            if found.is_empty() {
                log::warn!("{} holds no .xml or .jsonl files", input.display());
            }
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

/// `<paper_id>.tei.xml` or `<paper_id>.xml`.
fn tei_paper_id(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    for suffix in [".tei.xml", ".xml"] {
        if name.len() > suffix.len() && name.to_ascii_lowercase().ends_with(suffix) {
            return name[..name.len() - suffix.len()].to_string();
        }
    }
    name
}

struct Parsed {
    source: String,
    line: Option<usize>,
    /// Known from the file name for TEI, even when parsing fails.
    paper_id: Option<String>,
    result: std::result::Result<PaperRecord, IngestError>,
}

fn parse_file(path: &Path) -> Result<Vec<Parsed>> {
    let source = path.display().to_string();
    let bytes = read(path)?;
    if is_jsonl(path) {
        let lines = parse_jsonl_lines(bytes.as_slice())?;
        Ok(lines
            .into_iter()
            .map(|l| Parsed {
                source: source.clone(),
                line: Some(l.line),
                paper_id: None,
                result: l.result,
            })
            .collect())
    } else {
        let id = tei_paper_id(path);
        Ok(vec![Parsed {
            source,
            line: None,
            result: parse_tei_document(&bytes, &id),
            paper_id: Some(id),
        }])
    }
}

fn failure_kind(e: &IngestError) -> &'static str {
    match e {
        IngestError::Xml { .. } => "malformed_xml",
        IngestError::Incomplete { .. } => "incomplete",
        IngestError::MalformedLine { .. } => "malformed_line",
        IngestError::DuplicateId { .. } => "duplicate_id",
        IngestError::Io(_) => "io",
    }
}

/// Reads TEI documents and JSONL corpora into `corpus.jsonl`, sorted by
/// paper id. Failed records are listed in `ingest_errors.jsonl`; unless
/// `skip_errors` is set any failure aborts before the corpus is written.
pub fn cmd_ingest(cfg: &PipelineConfig) -> Result<IngestSummary> {
    if cfg.corpus_inputs.is_empty() {
        return Err(PipelineError::NoInputs);
    }
    cfg.prepare()?;
    let stamp = cfg.stamp();
    let files = input_files(&cfg.corpus_inputs)?;
    let parsed: Vec<Vec<Parsed>> = files.par_iter().map(|p| parse_file(p)).collect::<Result<_>>()?;

    let venue = cfg.venue.as_deref().map(Venue::parse);
    let mut summary = IngestSummary::default();
    let mut failures = Vec::new();
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut records = Vec::new();
    for p in parsed.into_iter().flatten() {
        summary.records_seen += 1;
        let where_ = match p.line {
            Some(l) => format!("{} line {l}", p.source),
            None => p.source.clone(),
        };
        let mut fail = |paper_id: Option<String>, kind, message: String| {
            failures.push(IngestFailure {
                source: p.source.clone(),
                line: p.line,
                paper_id,
                kind,
                message,
            })
        };
        let mut record = match p.result {
            Ok(r) => r,
            Err(e) => {
                let id = match &e {
                    IngestError::Incomplete { recovered, .. } => Some(recovered.paper_id.clone()),
                    _ => p.paper_id.clone(),
                };
                fail(id, failure_kind(&e), e.to_string());
                continue;
            }
        };
        if let Some(v) = &venue {
            record.venue = v.clone();
        }
        if let Some(y) = cfg.year {
            record.year = y;
        }
        let report = validate_record(&record);
        let fatal: Vec<String> = report
            .violations
            .iter()
            .filter(|v| !matches!(v, Violation::EmptyTitle))
            .map(|v| v.to_string())
            .collect();
        if !fatal.is_empty() {
            fail(Some(record.paper_id), "invalid", fatal.join("; "));
            continue;
        }
        if let Some(first) = seen.get(&record.paper_id) {
            let msg = format!("duplicate paper_id {:?}, first seen in {first}", record.paper_id);
            fail(Some(record.paper_id), "duplicate_id", msg);
            continue;
        }
        if report.violations.contains(&Violation::EmptyTitle) {
            log::warn!("{where_}: paper {} has an empty title", record.paper_id);
            summary.empty_title += 1;
        }
        if record.incomplete {
            summary.incomplete += 1;
        }
        seen.insert(record.paper_id.clone(), where_);
        records.push(record);
    }
    summary.processed = records.len();
    summary.skipped = failures.len();

    let mut errors = Vec::new();
    for f in &failures {
        serde_json::to_writer(&mut errors, f).expect("failure serializes");
        errors.push(b'\n');
    }
    let report_path = cfg.path(artifacts::INGEST_ERRORS);
    write_with_sidecar(&report_path, &errors, failures.len(), &stamp)?;
    if !failures.is_empty() {
        for f in &failures {
            log::warn!("{}: {}", f.source, f.message);
        }
        if !cfg.skip_errors {
            return Err(PipelineError::IngestFailed {
                failed: failures.len(),
                total: summary.records_seen,
                report: report_path,
            });
        }
    }

    records.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    let mut buf = Vec::new();
    write_jsonl_corpus(&mut buf, &records).map_err(|e| io_err(&cfg.path(artifacts::CORPUS), e))?;
    write_with_sidecar(&cfg.path(artifacts::CORPUS), &buf, records.len(), &stamp)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// shared loaders

fn artifact_err(path: &Path, message: impl ToString) -> PipelineError {
    PipelineError::Artifact {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

pub(crate) fn load_corpus(cfg: &PipelineConfig) -> Result<Vec<PaperRecord>> {
    let path = cfg.path(artifacts::CORPUS);
    let bytes = read(&path)?;
    parse_jsonl_corpus(BufReader::new(bytes.as_slice())).map_err(|e| artifact_err(&path, e))
}

fn load_links(cfg: &PipelineConfig) -> Result<Vec<LinkResult>> {
    let path = cfg.path(artifacts::LINKS);
    let text = String::from_utf8(read(&path)?).map_err(|e| artifact_err(&path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| artifact_err(&path, format!("line {}: {e}", i + 1))))
        .collect()
}

fn load_labels(path: &Path) -> Result<Vec<InstitutionLabel>> {
    read_labels_csv(read(path)?.as_slice()).map_err(|e| artifact_err(path, e))
}

fn require_registry(cfg: &PipelineConfig) -> Result<Registry> {
    let path = cfg.registry.as_ref().ok_or(PipelineError::MissingSetting("registry"))?;
    let (registry, report) = load_registry(path)?;
    for w in &report.warnings {
        log::warn!("registry: {w}");
    }
    log::info!("registry: {} records", registry.len());
    Ok(registry)
}

fn jsonl_bytes<T: Serialize>(items: &[T]) -> Vec<u8> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item).expect("artifact serializes");
        buf.push(b'\n');
    }
    buf
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut buf = serde_json::to_vec_pretty(value).expect("artifact serializes");
    buf.push(b'\n');
    buf
}

// ---------------------------------------------------------------------------
// link

/// Links every distinct affiliation string in the corpus.
pub fn cmd_link(cfg: &PipelineConfig) -> Result<LinkSummary> {
    let registry = require_registry(cfg)?;
    cfg.prepare()?;
    let records = load_corpus(cfg)?;
    let (results, summary) = link_all(records.iter().flat_map(|r| r.affiliations()), &registry, cfg.link_threshold);
    write_with_sidecar(&cfg.path(artifacts::LINKS), &jsonl_bytes(&results), results.len(), &cfg.stamp())?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// train-type-model

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeModelSummary {
    pub pairs: usize,
    pub academia: usize,
    pub industry: usize,
    /// Names carried by records of both labels, left out of training.
    pub conflicting_names: usize,
    pub metrics: TrainingMetrics,
    pub path: PathBuf,
}

/// Registry names (primary and aliases) paired with the label their record's
/// type implies. Names shared by records of both labels are dropped.
pub fn registry_training_pairs(registry: &Registry) -> (Vec<(String, Label)>, usize) {
    let mut by_name: BTreeMap<String, (String, Option<Label>)> = BTreeMap::new();
    for rec in registry.records() {
        let label = classify_by_registry_type(rec.inst_type);
        for name in std::iter::once(&rec.primary_name).chain(&rec.aliases) {
            let key = name.trim().to_lowercase();
            if key.is_empty() {
                continue;
            }
            by_name
                .entry(key)
                .and_modify(|(_, l)| {
                    if *l != Some(label) {
                        *l = None;
                    }
                })
                .or_insert_with(|| (name.trim().to_string(), Some(label)));
        }
    }
    let conflicts = by_name.values().filter(|(_, l)| l.is_none()).count();
    let pairs = by_name
        .into_values()
        .filter_map(|(name, l)| l.map(|l| (name, l)))
        .collect();
    (pairs, conflicts)
}

pub fn cmd_train_type_model(cfg: &PipelineConfig) -> Result<TypeModelSummary> {
    let registry = require_registry(cfg)?;
    cfg.prepare()?;
    let (pairs, conflicting_names) = registry_training_pairs(&registry);
    let industry = pairs.iter().filter(|(_, l)| *l == Label::Industry).count();
    let options = TypeModelOptions {
        dimension: cfg.type_model_dimension,
        ..TypeModelOptions::default()
    };
    let model = train_type_model(&pairs, cfg.type_model_seed, options)?;
    let path = cfg.type_model_path();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    write_with_sidecar(&path, model.to_json().as_bytes(), 1, &cfg.stamp())?;
    Ok(TypeModelSummary {
        pairs: pairs.len(),
        academia: pairs.len() - industry,
        industry,
        conflicting_names,
        metrics: model.training_metrics,
        path,
    })
}

// ---------------------------------------------------------------------------
// classify and review

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassifySummary {
    pub registry_type: usize,
    pub ensemble_unanimous: usize,
    pub manual: usize,
    pub review: usize,
}

impl ClassifySummary {
    fn of(labels: &[InstitutionLabel], review: usize) -> Self {
        let count = |p| labels.iter().filter(|l| l.provenance == p).count();
        ClassifySummary {
            registry_type: count(Provenance::RegistryType),
            ensemble_unanimous: count(Provenance::EnsembleUnanimous),
            manual: count(Provenance::Manual),
            review,
        }
    }
}

impl std::fmt::Display for ClassifySummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} by registry type, {} by unanimous vote, {} manual, {} queued for review",
            self.registry_type, self.ensemble_unanimous, self.manual, self.review
        )
    }
}

fn write_labels(cfg: &PipelineConfig, labels: &[InstitutionLabel]) -> Result<()> {
    let mut buf = Vec::new();
    write_labels_csv(labels, &mut buf)?;
    write_with_sidecar(&cfg.path(artifacts::LABELS), &buf, labels.len(), &cfg.stamp())
}

fn write_queue(cfg: &PipelineConfig, path: &Path, items: &[ReviewItem]) -> Result<()> {
    let mut buf = Vec::new();
    export_review_queue(items, &mut buf)?;
    write_with_sidecar(path, &buf, items.len(), &cfg.stamp())
}

fn resolver_err(path: &Path, e: impl ToString) -> PipelineError {
    artifact_err(path, e)
}

/// Labels every institution key found in `links.jsonl`. Manual labels from
/// an earlier review import are kept and take their keys off the queue.
pub fn cmd_classify(cfg: &PipelineConfig) -> Result<ClassifySummary> {
    let registry = require_registry(cfg)?;
    cfg.prepare()?;
    let links = load_links(cfg)?;
    let list = match &cfg.labeled_list {
        Some(p) => LabeledList::from_csv(read(p)?.as_slice()).map_err(|e| artifact_err(p, e))?,
        None => LabeledList::new(),
    };
    let fixture = match &cfg.resolver_fixture {
        Some(p) => FixtureResolver::load(p).map_err(|e| resolver_err(p, e))?,
        None => FixtureResolver::new(BTreeMap::new()),
    };
    let model_path = cfg.type_model_path();
    let model = if model_path.exists() {
        Some(TypeModel::load(&model_path).map_err(|e| artifact_err(&model_path, e))?)
    } else {
        None
    };
    let run = |resolver: &dyn WebResolver| {
        classify_institutions(&links, &registry, &list, resolver, model.as_ref()).map_err(|e| match e {
            ClassifyError::ModelRequired(n) => PipelineError::Config(format!(
                "{n} unlinked institutions need the type model at {}; run `iacollab train-type-model` first",
                model_path.display()
            )),
            other => other.into(),
        })
    };
    let outcome = match &cfg.resolver_cache {
        Some(cache_path) => {
            let cached = CachedResolver::open(fixture, cache_path).map_err(|e| resolver_err(cache_path, e))?;
            let outcome = run(&cached)?;
            cached.flush().map_err(|e| resolver_err(cache_path, e))?;
            outcome
        }
        None => {
            if cfg.resolver_fixture.is_none() {
                log::warn!("no resolver fixture configured; every domain vote abstains");
            }
            run(&fixture)?
        }
    };

    let labels_path = cfg.path(artifacts::LABELS);
    let manual: BTreeMap<String, InstitutionLabel> = if labels_path.exists() {
        load_labels(&labels_path)?
            .into_iter()
            .filter(|l| l.provenance == Provenance::Manual)
            .map(|l| (l.institution_key.clone(), l))
            .collect()
    } else {
        BTreeMap::new()
    };
    let mut labels = outcome.labels;
    let mut queue = Vec::new();
    for item in outcome.review {
        match manual.get(&item.institution_key) {
            Some(l) => labels.push(l.clone()),
            None => queue.push(item),
        }
    }
    labels.sort_by(|a, b| a.institution_key.cmp(&b.institution_key));
    write_labels(cfg, &labels)?;
    write_queue(cfg, &cfg.path(artifacts::REVIEW_QUEUE), &queue)?;
    Ok(ClassifySummary::of(&labels, queue.len()))
}

/// Writes the pending review queue to `out` for annotators.
pub fn cmd_review_export(cfg: &PipelineConfig, out: &Path) -> Result<usize> {
    cfg.prepare()?;
    let queue_path = cfg.path(artifacts::REVIEW_QUEUE);
    let items = read_review_queue(read(&queue_path)?.as_slice()).map_err(|e| artifact_err(&queue_path, e))?;
    write_queue(cfg, out, &items)?;
    Ok(items.len())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReviewImportSummary {
    pub imported: usize,
    pub replaced: usize,
    pub remaining: usize,
}

/// Merges a resolved queue into `labels.csv` as manual labels.
pub fn cmd_review_import(cfg: &PipelineConfig, resolved: &Path) -> Result<ReviewImportSummary> {
    cfg.prepare()?;
    let imported = import_review_labels(read(resolved)?.as_slice()).map_err(|e| artifact_err(resolved, e))?;
    let labels_path = cfg.path(artifacts::LABELS);
    let mut by_key: BTreeMap<String, InstitutionLabel> = load_labels(&labels_path)?
        .into_iter()
        .map(|l| (l.institution_key.clone(), l))
        .collect();
    let mut summary = ReviewImportSummary {
        imported: imported.len(),
        ..Default::default()
    };
    let keys: BTreeSet<String> = imported.iter().map(|l| l.institution_key.clone()).collect();
    for l in imported {
        if by_key.insert(l.institution_key.clone(), l).is_some() {
            summary.replaced += 1;
        }
    }
    let labels: Vec<InstitutionLabel> = by_key.into_values().collect();
    write_labels(cfg, &labels)?;

    let queue_path = cfg.path(artifacts::REVIEW_QUEUE);
    let queue: Vec<ReviewItem> = if queue_path.exists() {
        read_review_queue(read(&queue_path)?.as_slice())
            .map_err(|e| artifact_err(&queue_path, e))?
            .into_iter()
            .filter(|i| !keys.contains(&i.institution_key))
            .collect()
    } else {
        Vec::new()
    };
    summary.remaining = queue.len();
    write_queue(cfg, &queue_path, &queue)?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// analysis

struct Labelled {
    records: Vec<PaperRecord>,
    classifications: Vec<PaperClassification>,
    index: InstitutionIndex,
}

fn label_corpus(cfg: &PipelineConfig) -> Result<Labelled> {
    let records = load_corpus(cfg)?;
    let links = load_links(cfg)?;
    let labels = load_labels(&cfg.path(artifacts::LABELS))?;
    let index = InstitutionIndex::new(&links, &labels);
    let classifications: Vec<PaperClassification> = records.par_iter().map(|r| label_paper(r, &index)).collect();
    let gaps = report::label_gaps(&classifications);
    if gaps.unlabeled_institutions > 0 {
        log::warn!(
            "{} institutions on {} papers have no label and are left out of the counts",
            gaps.unlabeled_institutions,
            gaps.papers_with_unlabeled
        );
    }
    Ok(Labelled {
        records,
        classifications,
        index,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NetworkSummary {
    pub stats: NetworkStats,
    pub files: Vec<PathBuf>,
}

fn write_network(cfg: &PipelineConfig, data: &Labelled, stamp: &Stamp) -> Result<NetworkSummary> {
    let all = build_collab_network(&data.classifications);
    let kept = filter_edges(&all, cfg.network_min_weight);
    let nodes: BTreeSet<&str> = kept
        .iter()
        .flat_map(|e| [e.inst_a.as_str(), e.inst_b.as_str()])
        .collect();
    let comment = format!(
        "{} config {}; edges with weight > {}",
        stamp.tool_version, stamp.config_hash, cfg.network_min_weight
    );
    let mut files = Vec::new();
    for format in cfg.formats() {
        let path = cfg.path(&format!("{}.{}", artifacts::NETWORK_STEM, format.extension()));
        let text = export_graph(&kept, |k| data.index.name(k), format, Some(&comment));
        write_atomic(&path, text.as_bytes())?;
        files.push(path);
    }
    Ok(NetworkSummary {
        stats: NetworkStats {
            min_weight_exclusive: cfg.network_min_weight,
            edges_total: all.len(),
            edges_kept: kept.len(),
            nodes_kept: nodes.len(),
        },
        files,
    })
}

/// Exports only the thresholded collaboration network.
pub fn cmd_network(cfg: &PipelineConfig) -> Result<NetworkSummary> {
    cfg.prepare()?;
    let data = label_corpus(cfg)?;
    write_network(cfg, &data, &cfg.stamp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeSummary {
    pub papers: usize,
    pub collaborative: usize,
    pub unknown: usize,
    pub unlabeled_institutions: usize,
    pub network: NetworkStats,
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| PipelineError::Classify(e.into());
    w.write_record(header).map_err(to_err)?;
    for r in rows {
        w.write_record(&r).map_err(to_err)?;
    }
    w.into_inner().map_err(|e| PipelineError::Classify(ClassifyError::Csv(e.to_string())))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_csv(cfg: &PipelineConfig, name: &str, header: &[&str], rows: Vec<Vec<String>>, stamp: &Stamp) -> Result<()> {
    let n = rows.len();
    write_with_sidecar(&cfg.path(name), &csv_bytes(header, rows)?, n, stamp)
}

fn write_figure_series(cfg: &PipelineConfig, stats: &StatsReport, stamp: &Stamp) -> Result<()> {
    let mut counts = Vec::new();
    let mut props = Vec::new();
    for (venue, years) in &stats.venues {
        for (year, e) in years {
            let c = &e.counts;
            counts.push(vec![
                venue.clone(),
                year.to_string(),
                c.total.to_string(),
                c.academia_only.to_string(),
                c.industry_only.to_string(),
                c.collaborative.to_string(),
                c.unknown.to_string(),
            ]);
            props.push(vec![
                venue.clone(),
                year.to_string(),
                opt(e.proportions.map(|p| p.academia_only)),
                opt(e.proportions.map(|p| p.industry_only)),
                opt(e.proportions.map(|p| p.collaborative)),
            ]);
        }
    }
    write_csv(
        cfg,
        artifacts::FIG_COUNTS,
        &["venue", "year", "total", "academia_only", "industry_only", "collaborative", "unknown"],
        counts,
        stamp,
    )?;
    write_csv(
        cfg,
        artifacts::FIG_PROPORTIONS,
        &["venue", "year", "academia_only", "industry_only", "collaborative"],
        props,
        stamp,
    )?;
    let first = stats
        .first_author_by_year
        .iter()
        .map(|r| {
            vec![
                r.year.to_string(),
                r.collaborative.to_string(),
                r.academia.to_string(),
                r.industry.to_string(),
                r.dual.to_string(),
                r.unknown.to_string(),
                opt(r.proportions.map(|p| p.academia)),
                opt(r.proportions.map(|p| p.industry)),
                opt(r.proportions.map(|p| p.dual)),
            ]
        })
        .collect();
    write_csv(
        cfg,
        artifacts::FIG_FIRST_AUTHOR,
        &[
            "year",
            "collaborative",
            "academia",
            "industry",
            "dual",
            "unknown",
            "academia_share",
            "industry_share",
            "dual_share",
        ],
        first,
        stamp,
    )
}

fn write_rankings(cfg: &PipelineConfig, stats: &StatsReport, stamp: &Stamp) -> Result<()> {
    let sides = |r: &report::SideRankings| -> Vec<(&'static str, Vec<report::RankedInstitution>)> {
        vec![("academia", r.academia.clone()), ("industry", r.industry.clone())]
    };
    let mut rows = Vec::new();
    for (side, list) in sides(&stats.rankings.overall) {
        for e in list {
            rows.push(vec![e.rank.to_string(), side.to_string(), e.name, e.papers.to_string()]);
        }
    }
    write_csv(cfg, artifacts::RANKINGS, &["rank", "side", "institution", "papers"], rows, stamp)?;
    let mut rows = Vec::new();
    for (year, ranks) in &stats.rankings.by_year {
        for (side, list) in sides(ranks) {
            for e in list {
                rows.push(vec![
                    year.to_string(),
                    e.rank.to_string(),
                    side.to_string(),
                    e.name,
                    e.papers.to_string(),
                ]);
            }
        }
    }
    write_csv(
        cfg,
        artifacts::RANKINGS_BY_YEAR,
        &["year", "rank", "side", "institution", "papers"],
        rows,
        stamp,
    )
}

/// Buckets every paper and writes the statistics report, rankings, plot
/// series and network files.
pub fn cmd_analyze(cfg: &PipelineConfig) -> Result<AnalyzeSummary> {
    cfg.prepare()?;
    let stamp = cfg.stamp();
    let data = label_corpus(cfg)?;
    let network = write_network(cfg, &data, &stamp)?;
    let stats = report::build_stats_report(
        stamp.clone(),
        &data.records,
        &data.classifications,
        &data.index,
        cfg.top_k,
        cfg.top_k_per_year,
        network.stats.clone(),
    )?;
    write_atomic(&cfg.path(artifacts::STATS), &json_bytes(&stats))?;
    write_with_sidecar(
        &cfg.path(artifacts::PAPERS),
        &jsonl_bytes(&data.classifications),
        data.classifications.len(),
        &stamp,
    )?;
    write_rankings(cfg, &stats, &stamp)?;
    write_figure_series(cfg, &stats, &stamp)?;
    Ok(AnalyzeSummary {
        papers: stats.totals.total,
        collaborative: stats.totals.collaborative,
        unknown: stats.totals.unknown,
        unlabeled_institutions: stats.label_gaps.unlabeled_institutions,
        network: network.stats,
    })
}

// ---------------------------------------------------------------------------
// content

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentSummary {
    pub dataset: DatasetSummary,
    pub rows: Vec<ExperimentRow>,
}

/// Runs the four abstract-classification experiments into `metrics.json`.
pub fn cmd_content(cfg: &PipelineConfig) -> Result<ContentSummary> {
    cfg.prepare()?;
    let data = label_corpus(cfg)?;
    let (dataset, summary) = build_content_dataset(&data.classifications, &data.records);
    let content_cfg = ContentConfig {
        seed: cfg.content_seed,
        dimension: cfg.content_dimension,
        random_trials: cfg.random_trials,
        ..ContentConfig::default()
    };
    let rows = run_experiments(&dataset, &content_cfg)?;
    let file = MetricsFile {
        stamp: cfg.stamp(),
        seed: content_cfg.seed,
        split_ratios: content_cfg.ratios,
        random_trials: content_cfg.random_trials,
        dataset: summary.clone(),
        rows: rows.clone(),
    };
    write_atomic(&cfg.path(artifacts::METRICS), &json_bytes(&file))?;
    Ok(ContentSummary { dataset: summary, rows })
}

// ---------------------------------------------------------------------------
// report

fn optional_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Option<T>> {
    if !path.exists() {
        return Ok(None);
    }
    serde_json::from_slice(&read(path)?)
        .map(Some)
        .map_err(|e| artifact_err(path, e))
}

/// Summarizes whatever artifacts exist into `report.md`.
pub fn cmd_report(cfg: &PipelineConfig) -> Result<PathBuf> {
    cfg.prepare()?;
    let mut counts = ArtifactCounts::default();
    if cfg.path(artifacts::CORPUS).exists() {
        counts.papers = Some(load_corpus(cfg)?.len());
    }
    if cfg.path(artifacts::LINKS).exists() {
        let links = load_links(cfg)?;
        let linked = links.iter().filter(|l| l.linked_id().is_some()).count();
        counts.links = Some((linked, links.len() - linked));
    }
    let labels_path = cfg.path(artifacts::LABELS);
    if labels_path.exists() {
        let mut by: BTreeMap<String, usize> = BTreeMap::new();
        for l in load_labels(&labels_path)? {
            *by.entry(l.provenance.as_str().to_string()).or_default() += 1;
        }
        counts.labels = Some(by);
    }
    let queue_path = cfg.path(artifacts::REVIEW_QUEUE);
    if queue_path.exists() {
        let q = read_review_queue(read(&queue_path)?.as_slice()).map_err(|e| artifact_err(&queue_path, e))?;
        counts.review_queue = Some(q.len());
    }
    let stats: Option<StatsReport> = optional_json(&cfg.path(artifacts::STATS))?;
    let metrics: Option<MetricsFile> = optional_json(&cfg.path(artifacts::METRICS))?;
    let text = report::render_markdown(&cfg.stamp(), &counts, stats.as_ref(), metrics.as_ref());
    let path = cfg.path(artifacts::REPORT);
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}
