//! Affiliation normalization against an organization registry.
//!
//! Linking runs in two stages. Candidates are retrieved from the registry's
//! inverted token index and ranked by an IDF-weighted Dice overlap between the
//! cleaned string and each record name. The top candidates are then scored by
//! token-set Jaccard similarity; the string links only if the best score
//! reaches the threshold. Affiliation strings usually wrap the institution in
//! department and address segments, so the full score is taken over every
//! contiguous run of comma-separated segments of the input.

mod clean;
mod registry;

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use clean::clean_affiliation;
pub use registry::{
    load_registry, parse_registry, InstType, LoadReport, Registry, RegistryRecord,
};

use crate::text::tokens;

pub const DEFAULT_THRESHOLD: f64 = 0.9;
pub const DEFAULT_CANDIDATES: usize = 50;

#[derive(Debug, thiserror::Error)]
pub enum LinkError {
    #[error("cannot read registry dump {path}: {source}")]
    Unreadable {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid registry dump: {0}")]
    InvalidDump(String),
    #[error("duplicate registry id {0}")]
    DuplicateId(String),
    #[error("link threshold must be in (0, 1], got {0}")]
    InvalidThreshold(f64),
}

/// A link threshold in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(value: f64) -> Result<Self, LinkError> {
        if value > 0.0 && value <= 1.0 {
            Ok(Threshold(value))
        } else {
            Err(LinkError::InvalidThreshold(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold(DEFAULT_THRESHOLD)
    }
}

impl TryFrom<f64> for Threshold {
    type Error = LinkError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Threshold::new(v)
    }
}

impl From<Threshold> for f64 {
    fn from(t: Threshold) -> f64 {
        t.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub ror_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LinkStatus {
    Linked { ror_id: String, score: f64 },
    Unlinked,
}

/// Outcome of normalizing one affiliation string. `score` is the best full
/// score found (0 when no candidate exists), whether or not it linked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkResult {
    pub input_raw: String,
    pub input_cleaned: String,
    #[serde(flatten)]
    pub status: LinkStatus,
    #[serde(rename = "best_score")]
    pub score: f64,
}

impl LinkResult {
    pub fn linked_id(&self) -> Option<&str> {
        match &self.status {
            LinkStatus::Linked { ror_id, .. } => Some(ror_id),
            LinkStatus::Unlinked => None,
        }
    }

    /// The key the institution is known by downstream: the registry id when
    /// linked, otherwise the cleaned string (or the trimmed raw string when
    /// cleaning removed everything).
    pub fn institution_key(&self) -> Option<String> {
        if let Some(id) = self.linked_id() {
            return Some(id.to_string());
        }
        unlinked_key(&self.input_raw, &self.input_cleaned)
    }
}

pub(crate) fn unlinked_key(raw: &str, cleaned: &str) -> Option<String> {
    [cleaned.trim(), raw.trim()]
        .into_iter()
        .find(|s| !s.is_empty())
        .map(str::to_string)
}

fn distinct_tokens(s: &str) -> Vec<String> {
    let set: BTreeSet<String> = tokens(s).into_iter().collect();
    set.into_iter().collect()
}

/// Distinct token sets of every contiguous run of comma-separated segments.
fn segment_spans(cleaned: &str) -> Vec<Vec<String>> {
    let segments: Vec<&str> = cleaned.split(',').map(str::trim).collect();
    let mut spans = Vec::new();
    for start in 0..segments.len() {
        for end in start + 1..=segments.len() {
            let toks = distinct_tokens(&segments[start..end].join(" "));
            if !toks.is_empty() {
                spans.push(toks);
            }
        }
    }
    spans
}

/// Jaccard similarity of two sorted, deduplicated token lists.
fn jaccard(a: &[String], b: &[String]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    inter as f64 / (a.len() + b.len() - inter) as f64
}

fn full_score(spans: &[Vec<String>], names: &[Vec<String>]) -> f64 {
    let mut best = 0.0f64;
    for span in spans {
        for name in names {
            best = best.max(jaccard(span, name));
            if best == 1.0 {
                return best;
            }
        }
    }
    best
}

/// Full similarity between a cleaned affiliation and one record: the best
/// token-set Jaccard over the record's names and the input's segment spans.
/// Case-insensitive equality with any name scores 1.
pub fn score_candidate(cleaned: &str, record: &RegistryRecord) -> f64 {
    if record
        .names()
        .any(|n| registry::exact_key(n) == registry::exact_key(cleaned))
    {
        return 1.0;
    }
    let names: Vec<Vec<String>> = record.names().map(distinct_tokens).collect();
    full_score(&segment_spans(cleaned), &names)
}

fn sort_candidates(c: &mut [Candidate]) {
    c.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.ror_id.cmp(&b.ror_id))
    });
}

/// Up to `k` records sharing at least one token (or an acronym) with the
/// cleaned string, ranked by IDF-weighted Dice overlap with their best name.
pub fn generate_candidates(cleaned: &str, registry: &Registry, k: usize) -> Vec<Candidate> {
    let query = distinct_tokens(cleaned);
    let mut acronym_hits: HashSet<usize> = HashSet::new();
    for seg in cleaned.split(',') {
        acronym_hits.extend(registry.acronym_matches(seg));
    }
    let mut pool: BTreeSet<usize> = acronym_hits.iter().copied().collect();
    for t in &query {
        pool.extend(registry.postings(t));
    }
    if pool.is_empty() || k == 0 {
        return Vec::new();
    }
    let query_weight: f64 = query.iter().map(|t| registry.idf(t)).sum();
    let query_set: HashSet<&str> = query.iter().map(String::as_str).collect();

    let mut out: Vec<Candidate> = pool
        .into_iter()
        .map(|idx| {
            let mut best = if acronym_hits.contains(&idx) { 1.0 } else { 0.0 };
            for name in registry.name_tokens_at(idx) {
                let name_weight: f64 = name.iter().map(|t| registry.idf(t)).sum();
                let shared: f64 = name
                    .iter()
                    .filter(|t| query_set.contains(t.as_str()))
                    .map(|t| registry.idf(t))
                    .sum();
                let denom = query_weight + name_weight;
                if denom > 0.0 {
                    best = f64::max(best, 2.0 * shared / denom);
                }
            }
            Candidate {
                ror_id: registry.record_at(idx).ror_id.clone(),
                score: best,
            }
        })
        .filter(|c| c.score > 0.0)
        .collect();
    sort_candidates(&mut out);
    out.truncate(k);
    out
}

pub fn link_affiliation(raw: &str, registry: &Registry, threshold: Threshold) -> LinkResult {
    link_affiliation_with(raw, registry, threshold, DEFAULT_CANDIDATES)
}

/// Links one raw string, fully scoring the top `k` prefilter candidates.
pub fn link_affiliation_with(
    raw: &str,
    registry: &Registry,
    threshold: Threshold,
    k: usize,
) -> LinkResult {
    let cleaned = clean_affiliation(raw);
    let mut exact: Vec<usize> = registry
        .exact_matches(raw)
        .iter()
        .chain(registry.exact_matches(&cleaned))
        .copied()
        .collect();
    exact.sort_unstable();

    let best = if let Some(&idx) = exact.first() {
        Some(Candidate {
            ror_id: registry.record_at(idx).ror_id.clone(),
            score: 1.0,
        })
    } else {
        let spans = segment_spans(&cleaned);
        let mut scored: Vec<Candidate> = generate_candidates(&cleaned, registry, k)
            .into_iter()
            .map(|c| {
                let idx = registry
                    .records()
                    .binary_search_by(|r| r.ror_id.as_str().cmp(&c.ror_id))
                    .expect("candidate ids come from the registry");
                Candidate {
                    score: full_score(&spans, registry.name_tokens_at(idx)),
                    ror_id: c.ror_id,
                }
            })
            .collect();
        sort_candidates(&mut scored);
        scored.into_iter().next()
    };

    let score = best.as_ref().map_or(0.0, |c| c.score);
    let status = match best {
        Some(c) if c.score >= threshold.value() => LinkStatus::Linked {
            ror_id: c.ror_id,
            score: c.score,
        },
        _ => LinkStatus::Unlinked,
    };
    LinkResult {
        input_raw: raw.to_string(),
        input_cleaned: cleaned,
        status,
        score,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LinkSummary {
    pub linked: usize,
    pub unlinked: usize,
}

impl std::fmt::Display for LinkSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} linked / {} unlinked", self.linked, self.unlinked)
    }
}

/// Links each distinct string once, in parallel; output sorted by raw string.
pub fn link_all<'a, I>(raws: I, registry: &Registry, threshold: Threshold) -> (Vec<LinkResult>, LinkSummary)
where
    I: IntoIterator<Item = &'a str>,
{
    let unique: Vec<&str> = raws.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let results: Vec<LinkResult> = unique
        .par_iter()
        .map(|raw| link_affiliation(raw, registry, threshold))
        .collect();
    let linked = results.iter().filter(|r| r.linked_id().is_some()).count();
    let summary = LinkSummary {
        linked,
        unlinked: results.len() - linked,
    };
    (results, summary)
}
