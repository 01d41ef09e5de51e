use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LinkError;
use crate::text::tokens;

/// The registry's eight organization types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InstType {
    Education,
    Healthcare,
    Company,
    Archive,
    Nonprofit,
    Government,
    Facility,
    Other,
}

impl InstType {
    pub const ALL: [InstType; 8] = [
        InstType::Education,
        InstType::Healthcare,
        InstType::Company,
        InstType::Archive,
        InstType::Nonprofit,
        InstType::Government,
        InstType::Facility,
        InstType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InstType::Education => "Education",
            InstType::Healthcare => "Healthcare",
            InstType::Company => "Company",
            InstType::Archive => "Archive",
            InstType::Nonprofit => "Nonprofit",
            InstType::Government => "Government",
            InstType::Facility => "Facility",
            InstType::Other => "Other",
        }
    }
}

impl fmt::Display for InstType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InstType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown institution type {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryRecord {
    pub ror_id: String,
    pub primary_name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    #[serde(default)]
    pub acronyms: Vec<String>,
    pub inst_type: InstType,
    #[serde(default)]
    pub country: String,
}

impl RegistryRecord {
    /// Primary name, then aliases, then acronyms.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.primary_name.as_str())
            .chain(self.aliases.iter().map(String::as_str))
            .chain(self.acronyms.iter().map(String::as_str))
    }
}

pub(crate) fn exact_key(s: &str) -> String {
    s.trim().to_lowercase()
}

/// Immutable registry with its lookup indices. Record positions are stable
/// and sorted by `ror_id`.
#[derive(Debug, Default)]
pub struct Registry {
    records: Vec<RegistryRecord>,
    by_id: HashMap<String, usize>,
    name_index: HashMap<String, Vec<usize>>,
    acronym_index: HashMap<String, Vec<usize>>,
    exact_index: HashMap<String, Vec<usize>>,
    /// Distinct tokens per record name, parallel to `RegistryRecord::names`.
    name_tokens: Vec<Vec<Vec<String>>>,
}

impl Registry {
    pub fn from_records(mut records: Vec<RegistryRecord>) -> Result<Self, LinkError> {
        records.sort_by(|a, b| a.ror_id.cmp(&b.ror_id));
        if let Some(w) = records.windows(2).find(|w| w[0].ror_id == w[1].ror_id) {
            return Err(LinkError::DuplicateId(w[0].ror_id.clone()));
        }
        let mut reg = Registry {
            by_id: records
                .iter()
                .enumerate()
                .map(|(i, r)| (r.ror_id.clone(), i))
                .collect(),
            ..Registry::default()
        };
        for (idx, rec) in records.iter().enumerate() {
            let mut per_name = Vec::new();
            let mut all_tokens = HashSet::new();
            for name in rec.names() {
                let mut toks = tokens(name);
                toks.sort();
                toks.dedup();
                all_tokens.extend(toks.iter().cloned());
                per_name.push(toks);
                push_unique(reg.exact_index.entry(exact_key(name)).or_default(), idx);
            }
            for acr in &rec.acronyms {
                push_unique(reg.acronym_index.entry(exact_key(acr)).or_default(), idx);
            }
            for t in all_tokens {
                reg.name_index.entry(t).or_default().push(idx);
            }
            reg.name_tokens.push(per_name);
        }
        for ids in reg.name_index.values_mut() {
            ids.sort_unstable();
        }
        reg.records = records;
        Ok(reg)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[RegistryRecord] {
        &self.records
    }

    pub fn get(&self, ror_id: &str) -> Option<&RegistryRecord> {
        self.by_id.get(ror_id).map(|&i| &self.records[i])
    }

    pub(crate) fn record_at(&self, idx: usize) -> &RegistryRecord {
        &self.records[idx]
    }

    pub(crate) fn name_tokens_at(&self, idx: usize) -> &[Vec<String>] {
        &self.name_tokens[idx]
    }

    /// Record positions whose names contain `token`.
    pub fn postings(&self, token: &str) -> &[usize] {
        self.name_index.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn acronym_matches(&self, acronym: &str) -> &[usize] {
        self.acronym_index
            .get(&exact_key(acronym))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub(crate) fn exact_matches(&self, name: &str) -> &[usize] {
        self.exact_index
            .get(&exact_key(name))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Smoothed inverse document frequency; tokens absent from the registry
    /// get the maximum weight.
    pub fn idf(&self, token: &str) -> f64 {
        let n = self.records.len() as f64;
        let df = self.postings(token).len() as f64;
        ((n + 1.0) / (df + 1.0)).ln() + 1.0
    }

    pub fn type_histogram(&self) -> BTreeMap<InstType, usize> {
        let mut h = BTreeMap::new();
        for r in &self.records {
            *h.entry(r.inst_type).or_insert(0) += 1;
        }
        h
    }
}

fn push_unique(v: &mut Vec<usize>, idx: usize) {
    if v.last() != Some(&idx) {
        v.push(idx);
    }
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct LoadReport {
    pub records: usize,
    pub warnings: Vec<String>,
}

// Both the v1 (`name`/`aliases`/`labels`/`acronyms`/`country`) and the v2
// (`names[]`/`locations[]`) dump shapes are accepted.
#[derive(Deserialize)]
struct RawOrg {
    id: String,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    aliases: Vec<String>,
    #[serde(default)]
    acronyms: Vec<String>,
    #[serde(default)]
    labels: Vec<RawLabel>,
    #[serde(default)]
    names: Vec<RawName>,
    #[serde(default)]
    types: Vec<String>,
    #[serde(default)]
    country: Option<RawCountry>,
    #[serde(default)]
    locations: Vec<RawLocation>,
}

#[derive(Deserialize)]
struct RawLabel {
    label: String,
}

#[derive(Deserialize)]
struct RawName {
    value: String,
    #[serde(default)]
    types: Vec<String>,
}

#[derive(Deserialize)]
struct RawCountry {
    #[serde(default)]
    country_code: String,
}

#[derive(Deserialize)]
struct RawLocation {
    #[serde(default)]
    geonames_details: Option<RawGeo>,
}

#[derive(Deserialize)]
struct RawGeo {
    #[serde(default)]
    country_code: String,
}

fn push_distinct(v: &mut Vec<String>, s: &str, primary: &str) {
    let s = s.trim();
    if !s.is_empty() && s != primary && !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

fn convert(raw: RawOrg, warnings: &mut Vec<String>) -> Option<RegistryRecord> {
    let mut primary = raw.name.clone().unwrap_or_default();
    if primary.is_empty() {
        primary = raw
            .names
            .iter()
            .find(|n| n.types.iter().any(|t| t == "ror_display"))
            .or_else(|| raw.names.iter().find(|n| !n.types.iter().any(|t| t == "acronym")))
            .map(|n| n.value.clone())
            .unwrap_or_default();
    }
    let primary = primary.trim().to_string();
    if primary.is_empty() {
        warnings.push(format!("{}: no name, skipped", raw.id));
        return None;
    }
    let mut aliases = Vec::new();
    let mut acronyms = Vec::new();
    for a in &raw.aliases {
        push_distinct(&mut aliases, a, &primary);
    }
    for l in &raw.labels {
        push_distinct(&mut aliases, &l.label, &primary);
    }
    for a in &raw.acronyms {
        push_distinct(&mut acronyms, a, &primary);
    }
    for n in &raw.names {
        if n.types.iter().any(|t| t == "acronym") {
            push_distinct(&mut acronyms, &n.value, &primary);
        } else {
            push_distinct(&mut aliases, &n.value, &primary);
        }
    }
    let inst_type = match raw.types.first() {
        Some(t) => t.parse().unwrap_or_else(|_| {
            warnings.push(format!("{}: unknown type {t:?}, using Other", raw.id));
            InstType::Other
        }),
        None => {
            warnings.push(format!("{}: missing type, using Other", raw.id));
            InstType::Other
        }
    };
    let country = raw
        .country
        .map(|c| c.country_code)
        .filter(|c| !c.is_empty())
        .or_else(|| {
            raw.locations
                .into_iter()
                .filter_map(|l| l.geonames_details)
                .map(|g| g.country_code)
                .find(|c| !c.is_empty())
        })
        .unwrap_or_default();
    Some(RegistryRecord {
        ror_id: raw.id,
        primary_name: primary,
        aliases,
        acronyms,
        inst_type,
        country,
    })
}

/// Parses a registry dump held in memory.
pub fn parse_registry(json: &[u8]) -> Result<(Registry, LoadReport), LinkError> {
    let raw: Vec<RawOrg> =
        serde_json::from_slice(json).map_err(|e| LinkError::InvalidDump(e.to_string()))?;
    let mut report = LoadReport::default();
    if raw.is_empty() {
        report.warnings.push("registry dump is empty".into());
    }
    let records: Vec<_> = raw
        .into_iter()
        .filter_map(|r| convert(r, &mut report.warnings))
        .collect();
    let registry = Registry::from_records(records)?;
    report.records = registry.len();
    for w in &report.warnings {
        log::warn!("{w}");
    }
    Ok((registry, report))
}

pub fn load_registry(path: &Path) -> Result<(Registry, LoadReport), LinkError> {
    let bytes = std::fs::read(path).map_err(|e| LinkError::Unreadable {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_registry(&bytes)
}
