//! CSV files exchanged with annotators and downstream stages.

use std::io::{Read, Write};

use super::{ClassifyError, InstitutionLabel, Label, Provenance, ReviewItem, Vote, Votes};

pub const REVIEW_HEADER: [&str; 5] = [
    "institution_key",
    "keyword_vote",
    "domain_vote",
    "model_vote",
    "resolved_label",
];

pub fn export_review_queue<W: Write>(items: &[ReviewItem], writer: W) -> Result<(), ClassifyError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(REVIEW_HEADER)?;
    for item in items {
        let resolved = item.resolved_label.map(|l| l.as_str()).unwrap_or("");
        w.write_record([
            item.institution_key.as_str(),
            item.votes.keyword.as_str(),
            item.votes.domain.as_str(),
            item.votes.model.as_str(),
            resolved,
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_vote(value: &str, row: usize) -> Result<Vote, ClassifyError> {
    value.parse().map_err(|_| ClassifyError::BadLabel {
        row,
        value: value.to_string(),
    })
}

/// Reads a resolved review queue. Rows are numbered from 1 after the header.
/// Every row must carry a resolved label; blank ones are reported together.
pub fn import_review_labels<R: Read>(reader: R) -> Result<Vec<InstitutionLabel>, ClassifyError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().map(str::trim).ne(REVIEW_HEADER) {
        return Err(ClassifyError::Csv(format!(
            "review queue header must be {}",
            REVIEW_HEADER.join(",")
        )));
    }
    let mut labels = Vec::new();
    let mut unresolved = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let n = i + 1;
        let field = |k: usize| row.get(k).unwrap_or_default().trim();
        let resolved = field(4);
        if resolved.is_empty() {
            unresolved.push(n);
            continue;
        }
        let label: Label = resolved.parse().map_err(|_| ClassifyError::BadLabel {
            row: n,
            value: resolved.to_string(),
        })?;
        labels.push(InstitutionLabel {
            institution_key: field(0).to_string(),
            name: field(0).to_string(),
            label,
            provenance: Provenance::Manual,
            votes: Some(Votes {
                keyword: parse_vote(field(1), n)?,
                domain: parse_vote(field(2), n)?,
                model: parse_vote(field(3), n)?,
            }),
        });
    }
    if !unresolved.is_empty() {
        return Err(ClassifyError::Unresolved(unresolved));
    }
    Ok(labels)
}

/// Reads a queue as exported, resolved or not. Votes must be valid tokens.
pub fn read_review_queue<R: Read>(reader: R) -> Result<Vec<ReviewItem>, ClassifyError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().map(str::trim).ne(REVIEW_HEADER) {
        return Err(ClassifyError::Csv(format!(
            "review queue header must be {}",
            REVIEW_HEADER.join(",")
        )));
    }
    let mut items = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let n = i + 1;
        let field = |k: usize| row.get(k).unwrap_or_default().trim();
        let resolved = match field(4) {
            "" => None,
            v => Some(v.parse::<Label>().map_err(|_| ClassifyError::BadLabel {
                row: n,
                value: v.to_string(),
            })?),
        };
        items.push(ReviewItem {
            institution_key: field(0).to_string(),
            votes: Votes {
                keyword: parse_vote(field(1), n)?,
                domain: parse_vote(field(2), n)?,
                model: parse_vote(field(3), n)?,
            },
            resolved_label: resolved,
        });
    }
    Ok(items)
}

pub const LABELS_HEADER: [&str; 7] = [
    "institution_key",
    "name",
    "label",
    "provenance",
    "keyword_vote",
    "domain_vote",
    "model_vote",
];

pub fn write_labels_csv<W: Write>(labels: &[InstitutionLabel], writer: W) -> Result<(), ClassifyError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(LABELS_HEADER)?;
    for l in labels {
        let vote = |f: fn(&Votes) -> Vote| l.votes.as_ref().map(|v| f(v).as_str()).unwrap_or("");
        w.write_record([
            l.institution_key.as_str(),
            l.name.as_str(),
            l.label.as_str(),
            l.provenance.as_str(),
            vote(|v| v.keyword),
            vote(|v| v.domain),
            vote(|v| v.model),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_labels_csv<R: Read>(reader: R) -> Result<Vec<InstitutionLabel>, ClassifyError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().map(str::trim).ne(LABELS_HEADER) {
        return Err(ClassifyError::Csv(format!(
            "labels header must be {}",
            LABELS_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let n = i + 1;
        let field = |k: usize| row.get(k).unwrap_or_default();
        let bad = |v: &str| ClassifyError::BadLabel {
            row: n,
            value: v.to_string(),
        };
        let label: Label = field(2).parse().map_err(|_| bad(field(2)))?;
        let provenance: Provenance = field(3).parse().map_err(|_| bad(field(3)))?;
        let votes = if field(4).is_empty() {
            None
        } else {
            Some(Votes {
                keyword: parse_vote(field(4), n)?,
                domain: parse_vote(field(5), n)?,
                model: parse_vote(field(6), n)?,
            })
        };
        out.push(InstitutionLabel {
            institution_key: field(0).to_string(),
            name: field(1).to_string(),
            label,
            provenance,
            votes,
        });
    }
    Ok(out)
}
