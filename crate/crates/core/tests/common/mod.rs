//! Fixture builders shared by the integration tests.
#![allow(dead_code)]

pub mod e2e;
pub mod properties;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SYLLABLES: [&str; 32] = [
    "ka", "lo", "ven", "dor", "mi", "ra", "tes", "qua", "an", "bel", "cor", "fi", "gra", "hal", "is", "jo",
    "lum", "ner", "os", "pin", "sar", "tov", "ul", "wen", "yar", "zen", "bri", "cas", "del", "mor", "tam", "vik",
];

/// Distinct capitalized pseudo place names.
pub fn place_names(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let parts = rng.gen_range(2..=4);
        let mut s: String = (0..parts).map(|_| *SYLLABLES.choose(rng).unwrap()).collect();
        s[..1].make_ascii_uppercase();
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

/// Name templates per registry type; `{}` is the place.
pub fn templates(inst_type: &str) -> &'static [&'static str] {
    match inst_type {
        "education" => &[
            "University of {}",
            "{} University",
            "{} Institute of Technology",
            "{} College",
            "{} State University",
            "Technical University of {}",
            "{} Normal University",
            "{} Polytechnic Institute",
            "{} School of Medicine",
        ],
        "healthcare" => &["{} General Hospital", "{} Medical Center", "{} Children's Hospital", "{} Cancer Center"],
        "government" => &[
            "{} National Laboratory",
            "Ministry of Science of {}",
            "{} Geological Survey",
            "{} Space Agency",
        ],
        "facility" => &["{} Research Center", "{} Observatory", "{} Institute for Advanced Study", "{} Labs"],
        "nonprofit" => &["{} Foundation", "{} Society for Science", "{} Research Council", "{} Institute"],
        "archive" => &["{} Museum", "{} National Library", "{} Archives"],
        "company" => &[
            "{} Inc",
            "{} Corporation",
            "{} Technologies",
            "{} Labs",
            "{} Systems",
            "{} Group",
            "{} Software",
            "{} AI",
            "{} Robotics",
            "{} Networks",
            "{} Research",
            "{} Ltd",
            "{} GmbH",
            "{} Holdings",
            "{} Analytics",
        ],
        other => panic!("no templates for {other}"),
    }
}

const ACADEMIC_MIX: [(&str, u32); 6] = [
    ("education", 70),
    ("healthcare", 10),
    ("government", 7),
    ("facility", 5),
    ("nonprofit", 5),
    ("archive", 3),
];

fn academic_type(rng: &mut ChaCha8Rng) -> &'static str {
    let mut roll = rng.gen_range(0..100);
    for (t, w) in ACADEMIC_MIX {
        if roll < w {
            return t;
        }
        roll -= w;
    }
    "education"
}

#[derive(Debug, Clone)]
pub struct SynthRecord {
    pub id: String,
    pub name: String,
    pub aliases: Vec<String>,
    pub inst_type: &'static str,
}

/// Registry-shaped records with every name built from a unique place.
/// `alias_share` is the probability of an alias (always 1.0 gives one each).
pub fn synthetic_records(n_academic: usize, n_industry: usize, alias_share: f64, seed: u64) -> Vec<SynthRecord> {
    let mut rng = rng(seed);
    let places = place_names(&mut rng, n_academic + n_industry);
    let mut out = Vec::with_capacity(places.len());
    for (i, place) in places.into_iter().enumerate() {
        let inst_type = if i < n_academic { academic_type(&mut rng) } else { "company" };
        let ts = templates(inst_type);
        let first = rng.gen_range(0..ts.len());
        let name = ts[first].replace("{}", &place);
        let mut aliases = Vec::new();
        if rng.gen_bool(alias_share) {
            let mut second = rng.gen_range(0..ts.len());
            if second == first {
                second = (second + 1) % ts.len();
            }
            aliases.push(ts[second].replace("{}", &place));
        }
        out.push(SynthRecord {
            id: format!("https://ror.org/s{i:06}"),
            name,
            aliases,
            inst_type,
        });
    }
    out
}

/// Newer dump shape: `names[]` with typed entries.
pub fn registry_dump(records: &[SynthRecord]) -> String {
    let arr: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut names = vec![json!({"value": r.name, "types": ["ror_display", "label"]})];
            names.extend(r.aliases.iter().map(|a| json!({"value": a, "types": ["alias"]})));
            json!({"id": r.id, "names": names, "types": [r.inst_type]})
        })
        .collect();
    serde_json::to_string(&arr).unwrap()
}

#[derive(Debug, Clone, Default)]
pub struct Aff {
    pub orgs: Vec<String>,
    pub address: Vec<String>,
}

impl Aff {
    pub fn new(orgs: &[&str], address: &[&str]) -> Self {
        Aff {
            orgs: orgs.iter().map(|s| s.to_string()).collect(),
            address: address.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// The raw string the parser should reconstruct.
    pub fn raw(&self) -> String {
        self.orgs.iter().chain(&self.address).cloned().collect::<Vec<_>>().join(", ")
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A GROBID-style TEI header. Authors are `(forename surname, affiliations)`.
pub fn tei_document(title: &str, meeting: &str, year: i32, abstract_text: &str, authors: &[(String, Vec<Aff>)]) -> String {
    let mut a = String::new();
    for (name, affs) in authors {
        let (fore, sur) = name.split_once(' ').unwrap_or(("", name));
        let _ = write!(
            a,
            "<author><persName><forename type=\"first\">{}</forename><surname>{}</surname></persName>",
            esc(fore),
            esc(sur)
        );
        for (i, aff) in affs.iter().enumerate() {
            let _ = write!(a, "<affiliation key=\"aff{i}\">");
            for o in &aff.orgs {
                let _ = write!(a, "<orgName type=\"institution\">{}</orgName>", esc(o));
            }
            if !aff.address.is_empty() {
                a.push_str("<address>");
                for (j, part) in aff.address.iter().enumerate() {
                    let tag = if j + 1 == aff.address.len() { "country" } else { "settlement" };
                    let _ = write!(a, "<{tag}>{}</{tag}>", esc(part));
                }
                a.push_str("</address>");
            }
            a.push_str("</affiliation>");
        }
        a.push_str("</author>\n");
    }
    format!(
        r#"<?xml version="1.0" encoding="UTF-8"?>
<TEI xmlns="http://www.tei-c.org/ns/1.0">
  <teiHeader xml:lang="en">
    <fileDesc>
      <titleStmt><title level="a" type="main">{title}</title></titleStmt>
      <publicationStmt><publisher/><date type="published" when="{year}-02-01">{year}</date></publicationStmt>
      <sourceDesc><biblStruct>
        <analytic>
{a}        </analytic>
        <monogr><meeting>{meeting}</meeting><imprint/></monogr>
      </biblStruct></sourceDesc>
    </fileDesc>
    <profileDesc><abstract><div><p>{abs}</p></div></abstract></profileDesc>
  </teiHeader>
  <text><body><p>body text is not read</p></body></text>
</TEI>
"#,
        title = esc(title),
        abs = esc(abstract_text),
    )
}

/// Zipf-ish word sampler over a pseudo vocabulary.
pub struct WordSampler {
    words: Vec<String>,
    cumulative: Vec<f64>,
}

impl WordSampler {
    pub fn new(rng: &mut ChaCha8Rng, vocab: usize) -> Self {
        let words: Vec<String> = place_names(rng, vocab).into_iter().map(|w| w.to_lowercase()).collect();
        let mut total = 0.0;
        let cumulative = (1..=vocab)
            .map(|r| {
                total += 1.0 / r as f64;
                total
            })
            .collect();
        WordSampler { words, cumulative }
    }

    pub fn sample<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a str {
        let x = rng.gen::<f64>() * self.cumulative.last().unwrap();
        let i = self.cumulative.partition_point(|&c| c < x).min(self.words.len() - 1);
        &self.words[i]
    }

    pub fn text(&self, rng: &mut ChaCha8Rng, len: usize) -> String {
        (0..len).map(|_| self.sample(rng)).collect::<Vec<_>>().join(" ")
    }
}
