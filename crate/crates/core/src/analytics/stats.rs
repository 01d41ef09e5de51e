use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{AnalyticsError, Bucket, FirstAuthorType, PaperClassification};
use crate::classify::Label;
use crate::corpus::PaperRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BucketProportions {
    pub academia_only: f64,
    pub industry_only: f64,
    pub collaborative: f64,
}

/// Paper counts for one venue and year. Proportions exclude unknown papers
/// and are absent when every paper is unknown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VenueYearRow {
    pub venue: String,
    pub year: i32,
    pub total: usize,
    pub academia_only: usize,
    pub industry_only: usize,
    pub collaborative: usize,
    pub unknown: usize,
    pub proportions: Option<BucketProportions>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstAuthorProportions {
    pub academia: f64,
    pub industry: f64,
    pub dual: f64,
}

/// First-author affiliation types among one year's collaborative papers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstAuthorRow {
    pub year: i32,
    pub collaborative: usize,
    pub academia: usize,
    pub industry: usize,
    pub dual: usize,
    pub unknown: usize,
    pub proportions: Option<FirstAuthorProportions>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct YearlyStats {
    /// Sorted by venue, then year.
    pub rows: Vec<VenueYearRow>,
    /// Sorted by year; years without collaborative papers are omitted.
    pub first_author: Vec<FirstAuthorRow>,
}

pub fn yearly_stats(
    classifications: &[PaperClassification],
    records: &[PaperRecord],
) -> Result<YearlyStats, AnalyticsError> {
    let venue_of: HashMap<&str, (&str, i32)> = records
        .iter()
        .map(|r| (r.paper_id.as_str(), (r.venue.as_str(), r.year)))
        .collect();

    let mut rows: BTreeMap<(String, i32), [usize; 4]> = BTreeMap::new();
    let mut first: BTreeMap<i32, [usize; 4]> = BTreeMap::new();
    for c in classifications {
        let &(venue, year) = venue_of
            .get(c.paper_id.as_str())
            .ok_or_else(|| AnalyticsError::MissingRecord(c.paper_id.clone()))?;
        let slot = match c.bucket {
            Bucket::AcademiaOnly => 0,
            Bucket::IndustryOnly => 1,
            Bucket::Collaborative => 2,
            Bucket::Unknown => 3,
        };
        rows.entry((venue.to_string(), year)).or_default()[slot] += 1;
        if c.bucket == Bucket::Collaborative {
            let slot = match c.first_author_type {
                FirstAuthorType::Academia => 0,
                FirstAuthorType::Industry => 1,
                FirstAuthorType::Dual => 2,
                FirstAuthorType::Unknown => 3,
            };
            first.entry(year).or_default()[slot] += 1;
        }
    }

    let rows = rows
        .into_iter()
        .map(|((venue, year), [a, i, c, u])| {
            let known = (a + i + c) as f64;
            VenueYearRow {
                venue,
                year,
                total: a + i + c + u,
                academia_only: a,
                industry_only: i,
                collaborative: c,
                unknown: u,
                proportions: (known > 0.0).then(|| BucketProportions {
                    academia_only: a as f64 / known,
                    industry_only: i as f64 / known,
                    collaborative: c as f64 / known,
                }),
            }
        })
        .collect();
    let first_author = first
        .into_iter()
        .map(|(year, [a, i, d, u])| {
            let known = (a + i + d) as f64;
            FirstAuthorRow {
                year,
                collaborative: a + i + d + u,
                academia: a,
                industry: i,
                dual: d,
                unknown: u,
                proportions: (known > 0.0).then(|| FirstAuthorProportions {
                    academia: a as f64 / known,
                    industry: i as f64 / known,
                    dual: d as f64 / known,
                }),
            }
        })
        .collect();
    Ok(YearlyStats { rows, first_author })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub institution_key: String,
    pub papers: usize,
}

/// Institutions of one side ranked by the number of distinct collaborative
/// papers they appear on; ties go to the lexicographically smaller key.
pub fn top_institutions(
    classifications: &[PaperClassification],
    side: Label,
    k: usize,
    year: Option<i32>,
) -> Vec<RankEntry> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in classifications {
        if c.bucket != Bucket::Collaborative || year.is_some_and(|y| y != c.year) {
            continue;
        }
        let keys = match side {
            Label::Academia => &c.academic_keys,
            Label::Industry => &c.industry_keys,
        };
        // Keys are already distinct per paper.
        for key in keys {
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (key, papers))| RankEntry {
            rank: i + 1,
            institution_key: key.to_string(),
            papers,
        })
        .collect()
}

/// `top_institutions` for every year that has collaborative papers.
pub fn rankings_by_year(
    classifications: &[PaperClassification],
    side: Label,
    k: usize,
) -> BTreeMap<i32, Vec<RankEntry>> {
    let years: BTreeSet<i32> = classifications
        .iter()
        .filter(|c| c.bucket == Bucket::Collaborative)
        .map(|c| c.year)
        .collect();
    years
        .into_iter()
        .map(|y| (y, top_institutions(classifications, side, k, Some(y))))
        .collect()
}
