//! Paper records and the two ingestion paths: GROBID-style TEI headers and
//! the canonical line-delimited JSON corpus.

mod jsonl;
mod tei;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use jsonl::{parse_jsonl_corpus, parse_jsonl_lines, write_jsonl_corpus, JsonlLine};
pub use tei::parse_tei_document;

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("incomplete record {}: {reason}", .recovered.paper_id)]
    Incomplete {
        reason: String,
        recovered: Box<PaperRecord>,
    },
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate paper_id {paper_id:?} on lines {first_line} and {second_line}")]
    DuplicateId {
        paper_id: String,
        first_line: usize,
        second_line: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Venue {
    Aaai,
    Ijcai,
    Other(String),
}

impl Venue {
    pub fn as_str(&self) -> &str {
        match self {
            Venue::Aaai => "AAAI",
            Venue::Ijcai => "IJCAI",
            Venue::Other(name) => name,
        }
    }

    /// Recognizes the two conference names case-insensitively; anything else
    /// is kept verbatim.
    pub fn parse(name: &str) -> Venue {
        let trimmed = name.trim();
        if trimmed.eq_ignore_ascii_case("aaai") {
            Venue::Aaai
        } else if trimmed.eq_ignore_ascii_case("ijcai") {
            Venue::Ijcai
        } else {
            Venue::Other(trimmed.to_string())
        }
    }
}

impl fmt::Display for Venue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Venue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Venue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Venue::parse(&s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorEntry {
    pub name: String,
    #[serde(default)]
    pub affiliations: Vec<String>,
}

/// One paper. Author order is source order; index 0 is the first author.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub venue: Venue,
    pub year: i32,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    pub authors: Vec<AuthorEntry>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub incomplete: bool,
}

impl PaperRecord {
    /// Every raw affiliation string on the paper, in author order.
    pub fn affiliations(&self) -> impl Iterator<Item = &str> {
        self.authors
            .iter()
            .flat_map(|a| a.affiliations.iter().map(String::as_str))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    YearOutOfRange { year: i32 },
    EmptyAuthors,
    EmptyTitle,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::YearOutOfRange { year } => write!(f, "year out of range ({year})"),
            Violation::EmptyAuthors => f.write_str("empty authors on a record not flagged incomplete"),
            Violation::EmptyTitle => f.write_str("empty title"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub paper_id: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_record(record: &PaperRecord) -> ValidationReport {
    let mut violations = Vec::new();
    if !(MIN_YEAR..=MAX_YEAR).contains(&record.year) {
        violations.push(Violation::YearOutOfRange { year: record.year });
    }
    if record.authors.is_empty() && !record.incomplete {
        violations.push(Violation::EmptyAuthors);
    }
    if record.title.trim().is_empty() {
        violations.push(Violation::EmptyTitle);
    }
    ValidationReport {
        paper_id: record.paper_id.clone(),
        violations,
    }
}
