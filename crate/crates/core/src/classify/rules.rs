use std::collections::HashMap;
use std::io::Read;

use super::{ClassifyError, Label};
use crate::link::InstType;

/// Only companies count as industry.
pub fn classify_by_registry_type(inst_type: InstType) -> Label {
    match inst_type {
        InstType::Company => Label::Industry,
        _ => Label::Academia,
    }
}

pub const ACADEMIC_KEYWORDS: [&str; 7] = [
    "Universi",
    "Academ",
    "School",
    "Polytech",
    "Department",
    "Univ.",
    "Dept.",
];

/// Institution names with known labels, matched case-insensitively on the
/// whole trimmed name.
#[derive(Debug, Clone, Default)]
pub struct LabeledList {
    entries: HashMap<String, Label>,
}

impl LabeledList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, label: Label) {
        self.entries.insert(name.trim().to_lowercase(), label);
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.entries.get(&name.trim().to_lowercase()).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads `name,label` CSV; labels are `academia` or `industry`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, ClassifyError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(name))
                .ok_or_else(|| ClassifyError::Csv(format!("labeled list lacks a {name:?} column")))
        };
        let (name_col, label_col) = (col("name")?, col("label")?);
        let mut list = LabeledList::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let label_text = row.get(label_col).unwrap_or_default();
            let label = label_text.parse().map_err(|_| ClassifyError::BadLabel {
                row: i + 1,
                value: label_text.to_string(),
            })?;
            list.insert(row.get(name_col).unwrap_or_default(), label);
        }
        Ok(list)
    }
}

/// A labeled-list hit wins; otherwise academia iff any keyword occurs as a
/// case-insensitive substring.
pub fn keyword_classify(cleaned: &str, list: &LabeledList) -> Label {
    if let Some(label) = list.get(cleaned) {
        return label;
    }
    let lower = cleaned.to_lowercase();
    if ACADEMIC_KEYWORDS
        .iter()
        .any(|k| lower.contains(&k.to_lowercase()))
    {
        Label::Academia
    } else {
        Label::Industry
    }
}
