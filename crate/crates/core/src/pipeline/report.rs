use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Stamp;
use crate::analytics::{
    rankings_by_year, top_institutions, yearly_stats, AnalyticsError, Bucket, BucketProportions,
    FirstAuthorRow, InstitutionIndex, PaperClassification, RankEntry,
};
use crate::classify::Label;
use crate::content::{DatasetSummary, ExperimentRow, Method};
use crate::corpus::PaperRecord;
use crate::sampling::SplitRatios;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketCounts {
    pub total: usize,
    pub academia_only: usize,
    pub industry_only: usize,
    pub collaborative: usize,
    pub unknown: usize,
}

impl BucketCounts {
    fn add(&mut self, bucket: Bucket) {
        self.total += 1;
        match bucket {
            Bucket::AcademiaOnly => self.academia_only += 1,
            Bucket::IndustryOnly => self.industry_only += 1,
            Bucket::Collaborative => self.collaborative += 1,
            Bucket::Unknown => self.unknown += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VenueYearEntry {
    pub counts: BucketCounts,
    pub proportions: Option<BucketProportions>,
    /// First-author split among this venue-year's collaborative papers.
    pub first_author: Option<FirstAuthorRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedInstitution {
    pub rank: usize,
    pub institution_key: String,
    pub name: String,
    pub papers: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideRankings {
    pub academia: Vec<RankedInstitution>,
    pub industry: Vec<RankedInstitution>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rankings {
    pub top_k: usize,
    pub overall: SideRankings,
    pub top_k_per_year: usize,
    pub by_year: BTreeMap<i32, SideRankings>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelGaps {
    pub papers_with_unlabeled: usize,
    pub unlabeled_institutions: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub min_weight_exclusive: usize,
    pub edges_total: usize,
    pub edges_kept: usize,
    pub nodes_kept: usize,
}

/// Everything the analysis stage computes, keyed venue → year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    #[serde(flatten)]
    pub stamp: Stamp,
    pub totals: BucketCounts,
    pub label_gaps: LabelGaps,
    pub venues: BTreeMap<String, BTreeMap<i32, VenueYearEntry>>,
    /// All venues together, one row per year with collaborative papers.
    pub first_author_by_year: Vec<FirstAuthorRow>,
    pub rankings: Rankings,
    pub network: NetworkStats,
}

pub(crate) fn label_gaps(classifications: &[PaperClassification]) -> LabelGaps {
    let mut keys: Vec<&str> = classifications
        .iter()
        .flat_map(|c| c.unlabeled_keys.iter().map(String::as_str))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    LabelGaps {
        papers_with_unlabeled: classifications
            .iter()
            .filter(|c| !c.unlabeled_keys.is_empty())
            .count(),
        unlabeled_institutions: keys.len(),
    }
}

fn named(entries: Vec<RankEntry>, index: &InstitutionIndex) -> Vec<RankedInstitution> {
    entries
        .into_iter()
        .map(|e| RankedInstitution {
            rank: e.rank,
            name: index.name(&e.institution_key).to_string(),
            institution_key: e.institution_key,
            papers: e.papers,
        })
        .collect()
}

pub(crate) fn build_stats_report(
    stamp: Stamp,
    records: &[PaperRecord],
    classifications: &[PaperClassification],
    index: &InstitutionIndex,
    top_k: usize,
    top_k_per_year: usize,
    network: NetworkStats,
) -> Result<StatsReport, AnalyticsError> {
    let overall = yearly_stats(classifications, records)?;
    let venue_of: HashMap<&str, &str> = records
        .iter()
        .map(|r| (r.paper_id.as_str(), r.venue.as_str()))
        .collect();

    let mut by_venue: BTreeMap<&str, Vec<PaperClassification>> = BTreeMap::new();
    let mut totals = BucketCounts::default();
    for c in classifications {
        totals.add(c.bucket);
        by_venue
            .entry(venue_of[c.paper_id.as_str()])
            .or_default()
            .push(c.clone());
    }

    let mut venues = BTreeMap::new();
    for (venue, subset) in by_venue {
        let stats = yearly_stats(&subset, records)?;
        let mut first: BTreeMap<i32, FirstAuthorRow> =
            stats.first_author.into_iter().map(|r| (r.year, r)).collect();
        let years = stats
            .rows
            .into_iter()
            .map(|row| {
                let entry = VenueYearEntry {
                    counts: BucketCounts {
                        total: row.total,
                        academia_only: row.academia_only,
                        industry_only: row.industry_only,
                        collaborative: row.collaborative,
                        unknown: row.unknown,
                    },
                    proportions: row.proportions,
                    first_author: first.remove(&row.year),
                };
                (row.year, entry)
            })
            .collect();
        venues.insert(venue.to_string(), years);
    }

    let side = |label| named(top_institutions(classifications, label, top_k, None), index);
    let per_year_a = rankings_by_year(classifications, Label::Academia, top_k_per_year);
    let mut per_year_i = rankings_by_year(classifications, Label::Industry, top_k_per_year);
    let by_year = per_year_a
        .into_iter()
        .map(|(year, academia)| {
            let industry = per_year_i.remove(&year).unwrap_or_default();
            (
                year,
                SideRankings {
                    academia: named(academia, index),
                    industry: named(industry, index),
                },
            )
        })
        .collect();

    Ok(StatsReport {
        stamp,
        totals,
        label_gaps: label_gaps(classifications),
        venues,
        first_author_by_year: overall.first_author,
        rankings: Rankings {
            top_k,
            overall: SideRankings {
                academia: side(Label::Academia),
                industry: side(Label::Industry),
            },
            top_k_per_year,
            by_year,
        },
        network,
    })
}

/// Contents of `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    #[serde(flatten)]
    pub stamp: Stamp,
    pub seed: u64,
    pub split_ratios: SplitRatios,
    pub random_trials: usize,
    pub dataset: DatasetSummary,
    pub rows: Vec<ExperimentRow>,
}

/// Counts gathered from the flat-file artifacts for the summary report.
#[derive(Debug, Clone, Default)]
pub(crate) struct ArtifactCounts {
    pub papers: Option<usize>,
    pub links: Option<(usize, usize)>,
    pub labels: Option<BTreeMap<String, usize>>,
    pub review_queue: Option<usize>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".to_string())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Random => "Random baseline",
        Method::Majority => "Majority baseline",
        Method::Model => "Model",
    }
}

pub(crate) fn render_markdown(
    stamp: &Stamp,
    counts: &ArtifactCounts,
    stats: Option<&StatsReport>,
    metrics: Option<&MetricsFile>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Industry-academia collaboration report\n");
    let _ = writeln!(out, "Generated by {} (config {}).\n", stamp.tool_version, stamp.config_hash);

    out.push_str("## Inputs\n\n");
    match counts.papers {
        Some(n) => {
            let _ = writeln!(out, "- Papers in corpus: {n}");
        }
        None => out.push_str("- Corpus: not yet produced (run `iacollab ingest`)\n"),
    }
    match counts.links {
        Some((l, u)) => {
            let _ = writeln!(out, "- Affiliation strings: {l} linked / {u} unlinked");
        }
        None => out.push_str("- Links: not yet produced (run `iacollab link`)\n"),
    }
    match &counts.labels {
        Some(by_prov) => {
            let total: usize = by_prov.values().sum();
            let parts: Vec<String> = by_prov.iter().map(|(p, n)| format!("{p} {n}")).collect();
            let _ = writeln!(out, "- Labelled institutions: {total} ({})", parts.join(", "));
        }
        None => out.push_str("- Labels: not yet produced (run `iacollab classify`)\n"),
    }
    if let Some(q) = counts.review_queue {
        let _ = writeln!(out, "- Institutions awaiting review: {q}");
    }
    out.push('\n');

    match stats {
        None => out.push_str("## Analysis\n\nNot yet produced (run `iacollab analyze`).\n\n"),
        Some(s) => {
            out.push_str("## Papers by venue and year\n\n");
            out.push_str("| Venue | Year | Total | Academia only | Industry only | Collaborative | Unknown | Collaborative share |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
            for (venue, years) in &s.venues {
                for (year, e) in years {
                    let c = &e.counts;
                    let _ = writeln!(
                        out,
                        "| {venue} | {year} | {} | {} | {} | {} | {} | {} |",
                        c.total,
                        c.academia_only,
                        c.industry_only,
                        c.collaborative,
                        c.unknown,
                        fmt_opt(e.proportions.map(|p| p.collaborative))
                    );
                }
            }
            let t = &s.totals;
            let _ = writeln!(
                out,
                "\nTotal: {} papers, {} collaborative, {} unknown. {} papers cite {} unlabelled institutions.\n",
                t.total, t.collaborative, t.unknown, s.label_gaps.papers_with_unlabeled, s.label_gaps.unlabeled_institutions
            );

            let _ = writeln!(out, "## Top {} institutions by collaborative papers\n", s.rankings.top_k);
            for (title, list) in [("Academia", &s.rankings.overall.academia), ("Industry", &s.rankings.overall.industry)] {
                let _ = writeln!(out, "### {title}\n");
                if list.is_empty() {
                    out.push_str("None.\n\n");
                    continue;
                }
                out.push_str("| Rank | Institution | Papers |\n|---|---|---|\n");
                for r in list {
                    let _ = writeln!(out, "| {} | {} | {} |", r.rank, r.name, r.papers);
                }
                out.push('\n');
            }

            out.push_str("## First authors of collaborative papers\n\n");
            out.push_str("| Year | Collaborative | Academia | Industry | Dual | Unknown |\n|---|---|---|---|---|---|\n");
            for r in &s.first_author_by_year {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.year, r.collaborative, r.academia, r.industry, r.dual, r.unknown
                );
            }
            let n = &s.network;
            let _ = writeln!(
                out,
                "\n## Collaboration network\n\n{} of {} institution pairs have more than {} joint papers ({} institutions).\n",
                n.edges_kept, n.edges_total, n.min_weight_exclusive, n.nodes_kept
            );
        }
    }

    match metrics {
        None => out.push_str("## Abstract classification\n\nNot yet produced (run `iacollab content`).\n"),
        Some(m) => {
            let _ = writeln!(
                out,
                "## Abstract classification\n\n{} collaborative and {} academia-only abstracts ({} without abstract).\n",
                m.dataset.collaborative, m.dataset.non_collaborative, m.dataset.empty_abstract
            );
            out.push_str("| Negative sampling | Method | Accuracy | Precision | Recall | F1 | Test size |\n|---|---|---|---|---|---|---|\n");
            for r in &m.rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {:.4} | {:.4} | {:.4} | {} |",
                    if r.negative_sampling { "with" } else { "without" },
                    method_name(r.method),
                    fmt_opt(r.metrics.accuracy),
                    r.metrics.macro_precision,
                    r.metrics.macro_recall,
                    r.metrics.macro_f1,
                    r.test_size
                );
            }
        }
    }
    out
}
