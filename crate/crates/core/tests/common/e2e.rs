//! A 40-paper TEI corpus over six registry institutions and one unlinked
//! company, with every expected statistic worked out by hand.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use iacollab_core::classify::{Label, ReviewItem};
use iacollab_core::pipeline::{self, artifacts, PipelineConfig};
use serde_json::json;

use super::{registry_dump, synthetic_records, tei_document, Aff};

pub const U1: &str = "https://ror.org/0u1alpha";
pub const U2: &str = "https://ror.org/0u2beta";
pub const U3: &str = "https://ror.org/0u3gamma";
pub const G1: &str = "https://ror.org/0g1delta";
pub const C1: &str = "https://ror.org/0c1nimbus";
pub const C2: &str = "https://ror.org/0c2quark";
/// Not in the registry; known by its cleaned affiliation string.
pub const ORION: &str = "Orion Analytics Ltd";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Inst {
    U1,
    U2,
    U3,
    G1,
    C1,
    C2,
    Orion,
}

impl Inst {
    pub fn key(self) -> &'static str {
        match self {
            Inst::U1 => U1,
            Inst::U2 => U2,
            Inst::U3 => U3,
            Inst::G1 => G1,
            Inst::C1 => C1,
            Inst::C2 => C2,
            Inst::Orion => ORION,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Inst::U1 => "Alpha University",
            Inst::U2 => "Beta Institute of Technology",
            Inst::U3 => "Gamma Polytechnic",
            Inst::G1 => "Delta National Laboratory",
            Inst::C1 => "Nimbus Robotics",
            Inst::C2 => "Quark Systems",
            Inst::Orion => ORION,
        }
    }

    pub fn label(self) -> Label {
        match self {
            Inst::C1 | Inst::C2 | Inst::Orion => Label::Industry,
            _ => Label::Academia,
        }
    }

    /// Affiliation as a GROBID header would carry it, address included.
    pub fn aff(self) -> Aff {
        match self {
            Inst::U1 => Aff::new(
                &["Department of Computer Science", "Alpha University"],
                &["Springfield", "12345", "USA"],
            ),
            Inst::U2 => Aff::new(&["Beta Institute of Technology"], &["Cambridge", "MA 02139", "USA"]),
            Inst::U3 => Aff::new(&["School of Informatics", "Gamma Polytechnic"], &["Lyon", "France"]),
            Inst::G1 => Aff::new(&["Delta National Laboratory"], &["Oak Valley", "TN 37830", "USA"]),
            Inst::C1 => Aff::new(&["Nimbus Robotics"], &["Palo Alto", "94301", "USA"]),
            Inst::C2 => Aff::new(&["AI Research", "Quark Systems"], &["Seattle", "WA", "USA"]),
            Inst::Orion => Aff::new(&["Orion Analytics Ltd"], &["221B Baker Street"]),
        }
    }
}

pub struct Group {
    pub tag: &'static str,
    pub venue: &'static str,
    pub year: i32,
    pub count: usize,
    /// Affiliations per author, first author first.
    pub authors: Vec<Vec<Inst>>,
}

pub fn groups() -> Vec<Group> {
    use Inst::*;
    let g = |tag, venue, year, count, authors: Vec<Vec<Inst>>| Group {
        tag,
        venue,
        year,
        count,
        authors,
    };
    vec![
        g("a", "AAAI", 2019, 6, vec![vec![U1], vec![C1]]),
        g("b", "AAAI", 2020, 5, vec![vec![C2], vec![U2]]),
        g("c", "IJCAI", 2019, 2, vec![vec![U3, Orion], vec![G1]]),
        g("h", "IJCAI", 2019, 3, vec![vec![U1], vec![C2], vec![C2]]),
        g("d1", "AAAI", 2019, 4, vec![vec![U1], vec![U1]]),
        g("d2", "AAAI", 2020, 3, vec![vec![U1], vec![U2]]),
        g("d3", "IJCAI", 2019, 3, vec![vec![U3]]),
        g("x", "IJCAI", 2020, 5, vec![vec![U2]]),
        g("e1", "AAAI", 2020, 3, vec![vec![C1]]),
        g("e2", "IJCAI", 2019, 2, vec![vec![C1], vec![C2]]),
        g("f1", "AAAI", 2019, 2, vec![vec![], vec![]]),
        g("f2", "IJCAI", 2019, 2, vec![vec![]]),
    ]
}

const MEETINGS: [(&str, &str); 2] = [
    ("AAAI", "Proceedings of the AAAI Conference on Artificial Intelligence"),
    ("IJCAI", "Proceedings of the International Joint Conference on Artificial Intelligence (IJCAI)"),
];

/// Writes `<paper_id>.tei.xml` for all 40 papers and returns the directory.
pub fn write_corpus(dir: &Path) -> PathBuf {
    let tei_dir = dir.join("tei");
    fs::create_dir_all(&tei_dir).unwrap();
    let mut n = 0;
    for g in groups() {
        let meeting = MEETINGS.iter().find(|(v, _)| *v == g.venue).unwrap().1;
        for i in 0..g.count {
            n += 1;
            let id = format!("{}-{:02}", g.tag, i + 1);
            let authors: Vec<(String, Vec<Aff>)> = g
                .authors
                .iter()
                .enumerate()
                .map(|(j, insts)| (format!("Author{j} Writer{n}"), insts.iter().map(|x| x.aff()).collect()))
                .collect();
            let title = format!("Study number {n} of group {}", g.tag);
            let abstract_text = format!("We study problem {n} with method {} and report results.", g.tag);
            let xml = tei_document(&title, meeting, g.year, &abstract_text, &authors);
            fs::write(tei_dir.join(format!("{id}.tei.xml")), xml).unwrap();
        }
    }
    assert_eq!(n, 40);
    tei_dir
}

/// Six named records in the older dump shape, plus unrelated filler in the
/// newer shape so the name model has enough of each class to train on.
pub fn registry_json() -> String {
    let named = [
        (U1, Inst::U1, "education", vec!["University of Alpha"]),
        (U2, Inst::U2, "education", vec![]),
        (U3, Inst::U3, "education", vec!["Gamma Poly"]),
        (G1, Inst::G1, "government", vec![]),
        (C1, Inst::C1, "company", vec!["Nimbus Robotics Inc"]),
        (C2, Inst::C2, "company", vec![]),
    ];
    let mut arr: Vec<serde_json::Value> = named
        .iter()
        .map(|(id, inst, t, aliases)| {
            json!({
                "id": id,
                "name": inst.name(),
                "aliases": aliases,
                "acronyms": [],
                "types": [t],
                "country": {"country_code": "US"}
            })
        })
        .collect();
    let filler: Vec<serde_json::Value> =
        serde_json::from_str(&registry_dump(&synthetic_records(60, 30, 0.5, 2024))).unwrap();
    arr.extend(filler);
    serde_json::to_string_pretty(&arr).unwrap()
}

pub fn truth(key: &str) -> Label {
    [Inst::U1, Inst::U2, Inst::U3, Inst::G1, Inst::C1, Inst::C2, Inst::Orion]
        .into_iter()
        .find(|i| i.key() == key)
        .unwrap_or_else(|| panic!("unexpected institution key {key:?}"))
        .label()
}

/// Corpus, registry and config under `root`; artifacts go to `root/out`.
pub fn setup(root: &Path) -> PipelineConfig {
    let tei = write_corpus(root);
    let registry = root.join("registry.json");
    fs::write(&registry, registry_json()).unwrap();
    PipelineConfig {
        corpus_inputs: vec![tei],
        registry: Some(registry),
        output_dir: root.join("out"),
        type_model_dimension: 1 << 12,
        content_dimension: 1 << 12,
        ..PipelineConfig::default()
    }
    .resolved()
    .unwrap()
}

/// Runs every stage through `analyze`, resolving review items from the
/// fixture's truth table. Returns how many items were reviewed.
pub fn run(cfg: &PipelineConfig) -> usize {
    pipeline::cmd_ingest(cfg).unwrap();
    pipeline::cmd_link(cfg).unwrap();
    pipeline::cmd_train_type_model(cfg).unwrap();
    pipeline::cmd_classify(cfg).unwrap();
    let queue_path = cfg.path(artifacts::REVIEW_QUEUE);
    let mut items: Vec<ReviewItem> =
        iacollab_core::classify::read_review_queue(fs::read(&queue_path).unwrap().as_slice()).unwrap();
    let reviewed = items.len();
    if reviewed > 0 {
        for item in &mut items {
            item.resolved_label = Some(truth(&item.institution_key));
        }
        let resolved = cfg.output_dir.join("resolved.csv");
        let mut buf = Vec::new();
        iacollab_core::classify::export_review_queue(&items, &mut buf).unwrap();
        fs::write(&resolved, buf).unwrap();
        pipeline::cmd_review_import(cfg, &resolved).unwrap();
    }
    pipeline::cmd_analyze(cfg).unwrap();
    reviewed
}

/// `(academia_only, industry_only, collaborative, unknown)` per venue-year.
pub fn expected_counts() -> BTreeMap<(&'static str, i32), [usize; 4]> {
    BTreeMap::from([
        (("AAAI", 2019), [4, 0, 6, 2]),
        (("AAAI", 2020), [3, 3, 5, 0]),
        (("IJCAI", 2019), [3, 2, 5, 2]),
        (("IJCAI", 2020), [5, 0, 0, 0]),
    ])
}

/// `(year, academia, industry, dual, unknown)` over collaborative papers.
pub fn expected_first_author() -> Vec<(i32, [usize; 4])> {
    vec![(2019, [9, 0, 2, 0]), (2020, [0, 5, 0, 0])]
}

/// Every edge before thresholding, endpoints in key order.
pub fn expected_edges() -> Vec<(&'static str, &'static str, usize)> {
    let mut v = vec![
        (C1, U1, 6),
        (C2, U2, 5),
        (C2, U1, 3),
        (ORION, U3, 2),
        (ORION, G1, 2),
        (G1, U3, 2),
    ];
    for e in &mut v {
        if e.0 > e.1 {
            std::mem::swap(&mut e.0, &mut e.1);
        }
    }
    v.sort();
    v
}

/// `(key, papers)` in rank order.
pub fn expected_overall() -> (Vec<(&'static str, usize)>, Vec<(&'static str, usize)>) {
    (
        vec![(U1, 9), (U2, 5), (G1, 2), (U3, 2)],
        vec![(C2, 8), (C1, 6), (ORION, 2)],
    )
}

pub fn expected_by_year() -> BTreeMap<i32, (Vec<(&'static str, usize)>, Vec<(&'static str, usize)>)> {
    BTreeMap::from([
        (2019, (vec![(U1, 9), (G1, 2), (U3, 2)], vec![(C1, 6), (C2, 3), (ORION, 2)])),
        (2020, (vec![(U2, 5)], vec![(C2, 5)])),
    ])
}
