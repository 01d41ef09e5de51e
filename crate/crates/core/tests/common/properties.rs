//! Randomized properties. Each takes a case count and reports the first
//! minimal failure, so the same checks back both the quick test target and
//! the acceptance run.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use iacollab_core::analytics::{
    build_collab_network, filter_edges, label_paper, top_institutions, yearly_stats, Bucket, FirstAuthorType,
    InstitutionIndex, PaperClassification,
};
use iacollab_core::classify::{roc_auc, InstitutionLabel, Label, Provenance};
use iacollab_core::content::{evaluate, ContentLabel, LabeledAbstract, MajorityBaseline};
use iacollab_core::corpus::{parse_jsonl_corpus, parse_tei_document, write_jsonl_corpus, AuthorEntry, PaperRecord, Venue};
use iacollab_core::link::{clean_affiliation, link_affiliation, parse_registry, Registry, Threshold};
use iacollab_core::pipeline::{self, PipelineConfig};
use iacollab_core::sampling::{negative_sample_indices, stratified_indices, SplitRatios};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use super::{registry_dump, synthetic_records, tei_document, Aff};

pub type Property = fn(u32) -> Result<(), String>;

/// Every property with the name printed by the acceptance run.
pub const ALL: [(&str, Property); 14] = [
    ("proportion closure", proportion_closure),
    ("collaboration rule biconditional", collaboration_rule),
    ("first-author invariance", first_author_invariance),
    ("network brute-force equivalence", network_equivalence),
    ("ranking recount", ranking_recount),
    ("AUC equals enumeration", auc_enumeration),
    ("clean idempotence", clean_idempotence),
    ("threshold monotonicity", threshold_monotonicity),
    ("split disjointness and determinism", split_partition),
    ("negative sampling keeps positives", negative_sampling),
    ("majority closed form", majority_closed_form),
    ("JSONL round-trip", jsonl_round_trip),
    ("TEI author order", tei_author_order),
    ("byte-identical reruns", byte_identical_reruns),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// random labelled corpora

/// Institution pool; `None` marks a name with no label.
const POOL: [(&str, Option<Label>); 9] = [
    ("alpha university", Some(Label::Academia)),
    ("beta college", Some(Label::Academia)),
    ("gamma institute", Some(Label::Academia)),
    ("delta hospital", Some(Label::Academia)),
    ("nimbus robotics", Some(Label::Industry)),
    ("quark systems", Some(Label::Industry)),
    ("orion analytics", Some(Label::Industry)),
    ("mystery lab", None),
    ("unknown works", None),
];

/// `(venue, year, affiliations per author)`.
type PaperShape = (bool, i32, Vec<Vec<usize>>);

fn paper_shape() -> impl Strategy<Value = PaperShape> {
    (
        any::<bool>(),
        2017..2022i32,
        prop::collection::vec(prop::collection::vec(0..POOL.len(), 0..3), 0..5),
    )
}

fn corpus_shape(max: usize) -> impl Strategy<Value = Vec<PaperShape>> {
    prop::collection::vec(paper_shape(), 0..=max)
}

fn record(i: usize, (ijcai, year, authors): &PaperShape) -> PaperRecord {
    PaperRecord {
        paper_id: format!("p{i:03}"),
        venue: if *ijcai { Venue::Ijcai } else { Venue::Aaai },
        year: *year,
        title: format!("paper {i}"),
        abstract_text: String::new(),
        authors: authors
            .iter()
            .enumerate()
            .map(|(j, affs)| AuthorEntry {
                name: format!("author {j}"),
                affiliations: affs.iter().map(|&k| POOL[k].0.to_string()).collect(),
            })
            .collect(),
        incomplete: false,
    }
}

fn pool_index() -> InstitutionIndex {
    let labels: Vec<InstitutionLabel> = POOL
        .iter()
        .filter_map(|(name, label)| {
            label.map(|label| InstitutionLabel {
                institution_key: name.to_string(),
                name: name.to_string(),
                label,
                provenance: Provenance::Manual,
                votes: None,
            })
        })
        .collect();
    InstitutionIndex::new(&[], &labels)
}

fn classify_all(shapes: &[PaperShape]) -> (Vec<PaperRecord>, Vec<PaperClassification>) {
    let index = pool_index();
    let records: Vec<PaperRecord> = shapes.iter().enumerate().map(|(i, s)| record(i, s)).collect();
    let classes = records.iter().map(|r| label_paper(r, &index)).collect();
    (records, classes)
}

/// Distinct labelled pool entries of each side, straight from the generated shape.
fn oracle_sides(shape: &PaperShape) -> (BTreeSet<&'static str>, BTreeSet<&'static str>) {
    let mut acad = BTreeSet::new();
    let mut ind = BTreeSet::new();
    for &k in shape.2.iter().flatten() {
        match POOL[k].1 {
            Some(Label::Academia) => acad.insert(POOL[k].0),
            Some(Label::Industry) => ind.insert(POOL[k].0),
            None => false,
        };
    }
    (acad, ind)
}

fn oracle_collaborative(shape: &PaperShape) -> bool {
    let (a, i) = oracle_sides(shape);
    !a.is_empty() && !i.is_empty()
}

pub fn proportion_closure(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&corpus_shape(40), |shapes| {
        let (records, classes) = classify_all(&shapes);
        let stats = yearly_stats(&classes, &records).unwrap();
        let total: usize = stats.rows.iter().map(|r| r.total).sum();
        prop_assert_eq!(total, shapes.len());
        for row in &stats.rows {
            prop_assert_eq!(row.total, row.academia_only + row.industry_only + row.collaborative + row.unknown);
            let known = row.total - row.unknown;
            match row.proportions {
                Some(p) => {
                    prop_assert!(known > 0);
                    let sum = p.academia_only + p.industry_only + p.collaborative;
                    prop_assert!((sum - 1.0).abs() <= 1e-9, "proportions sum to {}", sum);
                }
                None => prop_assert_eq!(known, 0),
            }
        }
        for row in &stats.first_author {
            if let Some(p) = row.proportions {
                prop_assert!((p.academia + p.industry + p.dual - 1.0).abs() <= 1e-9);
            }
        }
        Ok(())
    }))
}

pub fn collaboration_rule(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&corpus_shape(30), |shapes| {
        let (_, classes) = classify_all(&shapes);
        for (shape, c) in shapes.iter().zip(&classes) {
            let (acad, ind) = oracle_sides(shape);
            prop_assert_eq!(c.academic_count, acad.len());
            prop_assert_eq!(c.industry_count, ind.len());
            prop_assert_eq!(
                c.bucket == Bucket::Collaborative,
                c.academic_count.min(c.industry_count) >= 1
            );
            let expected = match (acad.is_empty(), ind.is_empty()) {
                (false, false) => Bucket::Collaborative,
                (false, true) => Bucket::AcademiaOnly,
                (true, false) => Bucket::IndustryOnly,
                (true, true) => Bucket::Unknown,
            };
            prop_assert_eq!(c.bucket, expected);
        }
        Ok(())
    }))
}

pub fn first_author_invariance(cases: u32) -> Result<(), String> {
    let strategy = (paper_shape(), prop::collection::vec(prop::collection::vec(0..POOL.len(), 0..3), 0..5));
    finish(runner(cases).run(&strategy, |(shape, others)| {
        let index = pool_index();
        let before = label_paper(&record(0, &shape), &index);
        let mut changed = shape.clone();
        let first = changed.2.first().cloned();
        changed.2 = first.into_iter().chain(others).collect();
        if shape.2.is_empty() {
            changed.2.clear();
        }
        let after = label_paper(&record(0, &changed), &index);
        prop_assert_eq!(before.first_author_type, after.first_author_type);

        let labels: BTreeSet<Label> = shape.2.first().into_iter().flatten().filter_map(|&k| POOL[k].1).collect();
        let expected = match (labels.contains(&Label::Academia), labels.contains(&Label::Industry)) {
            (true, true) => FirstAuthorType::Dual,
            (true, false) => FirstAuthorType::Academia,
            (false, true) => FirstAuthorType::Industry,
            (false, false) => FirstAuthorType::Unknown,
        };
        prop_assert_eq!(before.first_author_type, expected);
        Ok(())
    }))
}

pub fn network_equivalence(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&(corpus_shape(50), 0..6usize), |(shapes, min)| {
        let (_, classes) = classify_all(&shapes);
        let built: Vec<(String, String, usize)> = build_collab_network(&classes)
            .into_iter()
            .map(|e| (e.inst_a, e.inst_b, e.weight))
            .collect();

        let names: Vec<&str> = POOL.iter().filter(|p| p.1.is_some()).map(|p| p.0).collect();
        let mut brute = Vec::new();
        for a in &names {
            for b in &names {
                if a >= b {
                    continue;
                }
                let weight = shapes
                    .iter()
                    .filter(|s| oracle_collaborative(s))
                    .filter(|s| {
                        let (acad, ind) = oracle_sides(s);
                        let has = |x: &str| acad.contains(x) || ind.contains(x);
                        has(a) && has(b)
                    })
                    .count();
                if weight > 0 {
                    brute.push((a.to_string(), b.to_string(), weight));
                }
            }
        }
        brute.sort();
        prop_assert_eq!(&built, &brute);

        let edges = build_collab_network(&classes);
        let kept: Vec<usize> = filter_edges(&edges, min).iter().map(|e| e.weight).collect();
        let expected: Vec<usize> = brute.iter().map(|e| e.2).filter(|&w| w > min).collect();
        prop_assert_eq!(kept, expected);
        Ok(())
    }))
}

pub fn ranking_recount(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&(corpus_shape(40), 1..8usize), |(shapes, k)| {
        let (_, classes) = classify_all(&shapes);
        for side in [Label::Academia, Label::Industry] {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for s in shapes.iter().filter(|s| oracle_collaborative(s)) {
                let (acad, ind) = oracle_sides(s);
                for key in if side == Label::Academia { acad } else { ind } {
                    *counts.entry(key).or_default() += 1;
                }
            }
            let mut expected: Vec<(&str, usize)> = counts.into_iter().collect();
            expected.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
            expected.truncate(k);
            let got: Vec<(&str, usize)> = top_institutions(&classes, side, k, None)
                .iter()
                .map(|e| (POOL.iter().find(|p| p.0 == e.institution_key).unwrap().0, e.papers))
                .collect();
            prop_assert_eq!(got, expected);
        }
        Ok(())
    }))
}

pub fn auc_enumeration(cases: u32) -> Result<(), String> {
    let point = (0..6u8, any::<bool>());
    finish(runner(cases).run(&prop::collection::vec(point, 1..=20), |points| {
        let scores: Vec<f64> = points.iter().map(|p| p.0 as f64 / 5.0).collect();
        let labels: Vec<bool> = points.iter().map(|p| p.1).collect();
        let pos: Vec<f64> = points.iter().filter(|p| p.1).map(|p| p.0 as f64 / 5.0).collect();
        let neg: Vec<f64> = points.iter().filter(|p| !p.1).map(|p| p.0 as f64 / 5.0).collect();
        let got = roc_auc(&scores, &labels);
        if pos.is_empty() || neg.is_empty() {
            prop_assert_eq!(got, None);
            return Ok(());
        }
        let mut wins = 0.0;
        for p in &pos {
            for n in &neg {
                wins += if p > n {
                    1.0
                } else if p == n {
                    0.5
                } else {
                    0.0
                };
            }
        }
        let brute = wins / (pos.len() * neg.len()) as f64;
        let got = got.unwrap();
        prop_assert!((got - brute).abs() < 1e-12, "rank AUC {} vs enumeration {}", got, brute);
        Ok(())
    }))
}

pub fn clean_idempotence(cases: u32) -> Result<(), String> {
    let s = "[A-Za-z0-9 ,.é&'-]{0,60}";
    finish(runner(cases).run(&s, |s| {
        let once = clean_affiliation(&s);
        prop_assert_eq!(clean_affiliation(&once), once.clone());
        prop_assert!(!once.chars().any(|c| c.is_ascii_digit()));
        Ok(())
    }))
}

fn link_registry() -> (Registry, Vec<String>) {
    let records = synthetic_records(40, 10, 1.0, 77);
    let names = records
        .iter()
        .flat_map(|r| std::iter::once(r.name.clone()).chain(r.aliases.clone()))
        .collect();
    (parse_registry(registry_dump(&records).as_bytes()).unwrap().0, names)
}

/// A registry name, perturbed: tokens dropped or added and address noise.
fn query_strategy(names: Vec<String>) -> impl Strategy<Value = String> {
    let noise = prop::sample::select(vec!["Department of Physics", "Springfield", "12345", "USA", "Labs", "School"]);
    (
        prop::sample::select(names),
        prop::collection::vec(noise, 0..3),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(name, noise, drop_last, append)| {
            let mut toks: Vec<&str> = name.split_whitespace().collect();
            if drop_last && toks.len() > 1 {
                toks.pop();
            }
            let mut base = toks.join(" ");
            if append {
                base.push_str(" Group");
            }
            let mut parts = vec![base];
            parts.extend(noise.into_iter().map(str::to_string));
            parts.join(", ")
        })
}

pub fn threshold_monotonicity(cases: u32) -> Result<(), String> {
    let (registry, names) = link_registry();
    let strategy = (query_strategy(names), 1..=100u32, 1..=100u32);
    finish(runner(cases).run(&strategy, |(q, a, b)| {
        let (lo, hi) = (a.min(b) as f64 / 100.0, a.max(b) as f64 / 100.0);
        let at_lo = link_affiliation(&q, &registry, Threshold::new(lo).unwrap());
        let at_hi = link_affiliation(&q, &registry, Threshold::new(hi).unwrap());
        if let Some(id) = at_hi.linked_id() {
            prop_assert_eq!(at_lo.linked_id(), Some(id), "linked at {} but not at {}", hi, lo);
        }
        let again = link_affiliation(&q, &registry, Threshold::new(hi).unwrap());
        prop_assert_eq!(again, at_hi);
        Ok(())
    }))
}

fn ratios_strategy() -> impl Strategy<Value = SplitRatios> {
    (50..=90u32).prop_map(|t| {
        let train = t as f64 / 100.0;
        let val = (1.0 - train) / 2.0;
        SplitRatios {
            train,
            val,
            test: 1.0 - train - val,
        }
    })
}

pub fn split_partition(cases: u32) -> Result<(), String> {
    let labels = prop::collection::vec(any::<bool>(), 2..300)
        .prop_filter("both classes", |l| l.iter().any(|&x| x) && l.iter().any(|&x| !x));
    finish(runner(cases).run(&(labels, any::<u64>(), ratios_strategy()), |(labels, seed, ratios)| {
        let split = stratified_indices(&labels, ratios, seed).unwrap();
        let mut all: Vec<usize> = split.train.iter().chain(&split.val).chain(&split.test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        prop_assert_eq!(&stratified_indices(&labels, ratios, seed).unwrap(), &split);
        for class in [false, true] {
            let n = labels.iter().filter(|&&l| l == class).count();
            let in_train = split.train.iter().filter(|&&i| labels[i] == class).count();
            prop_assert_eq!(in_train, (n as f64 * ratios.train).round() as usize);
        }
        Ok(())
    }))
}

pub fn negative_sampling(cases: u32) -> Result<(), String> {
    let labels = prop::collection::vec(any::<bool>(), 1..300)
        .prop_filter("enough negatives", |l| l.iter().filter(|&&x| x).count() * 2 <= l.len());
    finish(runner(cases).run(&(labels, any::<u64>()), |(labels, seed)| {
        let kept = negative_sample_indices(&labels, seed).unwrap();
        let positives: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
        let kept_pos: Vec<usize> = kept.iter().copied().filter(|&i| labels[i]).collect();
        prop_assert_eq!(&kept_pos, &positives);
        prop_assert_eq!(kept.len(), 2 * positives.len());
        prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(negative_sample_indices(&labels, seed).unwrap(), kept);
        Ok(())
    }))
}

pub fn majority_closed_form(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&(1..500usize, 1..5000usize), |(pos, neg)| {
        let test: Vec<LabeledAbstract> = (0..pos + neg)
            .map(|i| LabeledAbstract {
                paper_id: i.to_string(),
                abstract_text: String::new(),
                label: if i < pos {
                    ContentLabel::Collaborative
                } else {
                    ContentLabel::NonCollaborative
                },
            })
            .collect();
        let m = evaluate(&MajorityBaseline, &test, false);
        let p = neg as f64 / (pos + neg) as f64;
        prop_assert!((m.macro_precision - p / 2.0).abs() < 1e-9);
        prop_assert!((m.macro_recall - 0.5).abs() < 1e-9);
        prop_assert!((m.macro_f1 - p / (1.0 + p)).abs() < 1e-9);
        Ok(())
    }))
}

fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 ,.\"\\\\é\u{4e2d}-]{0,30}"
}

pub fn jsonl_round_trip(cases: u32) -> Result<(), String> {
    let author = (text(), prop::collection::vec(text(), 0..3));
    let rec = (
        "[a-z0-9]{1,10}",
        prop::sample::select(vec!["AAAI", "IJCAI", "NeurIPS"]),
        1900..=2100i32,
        text(),
        text(),
        prop::collection::vec(author, 0..4),
        any::<bool>(),
    );
    finish(runner(cases).run(&prop::collection::vec(rec, 0..5), |recs| {
        let records: Vec<PaperRecord> = recs
            .into_iter()
            .map(|(id, venue, year, title, abs, authors, incomplete)| PaperRecord {
                paper_id: id,
                venue: Venue::parse(venue),
                year,
                title,
                abstract_text: abs,
                authors: authors
                    .into_iter()
                    .map(|(name, affiliations)| AuthorEntry { name, affiliations })
                    .collect(),
                incomplete,
            })
            .collect();
        let mut buf = Vec::new();
        write_jsonl_corpus(&mut buf, &records).unwrap();
        prop_assert_eq!(parse_jsonl_corpus(buf.as_slice()).unwrap(), records);
        Ok(())
    }))
}

pub fn tei_author_order(cases: u32) -> Result<(), String> {
    let name = "[A-Z][a-z]{1,6} [A-Z][a-z]{1,8}";
    let org = "[A-Z][a-z]{2,8}( [A-Z][a-z]{2,8}){0,2}";
    let author = (name, prop::collection::vec(org, 0..3));
    finish(runner(cases).run(&prop::collection::vec(author, 1..6), |authors| {
        let authors: Vec<(String, Vec<Aff>)> = authors
            .into_iter()
            .map(|(n, orgs)| (n, orgs.iter().map(|o| Aff::new(&[o.as_str()], &[])).collect()))
            .collect();
        let xml = tei_document("Title", "AAAI", 2020, "Abstract.", &authors);
        let rec = parse_tei_document(xml.as_bytes(), "x").unwrap();
        prop_assert_eq!(&parse_tei_document(xml.as_bytes(), "x").unwrap(), &rec);
        let names: Vec<&str> = rec.authors.iter().map(|a| a.name.as_str()).collect();
        let expected: Vec<&str> = authors.iter().map(|a| a.0.as_str()).collect();
        prop_assert_eq!(names, expected);
        for (got, (_, affs)) in rec.authors.iter().zip(&authors) {
            let raws: Vec<String> = affs.iter().map(Aff::raw).collect();
            prop_assert_eq!(&got.affiliations, &raws);
        }
        Ok(())
    }))
}

// ---------------------------------------------------------------------------
// reruns

struct RerunFixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
    registry: PathBuf,
    model: PathBuf,
    names: Vec<String>,
}

fn rerun_fixture() -> RerunFixture {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let records = synthetic_records(40, 15, 0.3, 11);
    let registry = root.join("registry.json");
    fs::write(&registry, registry_dump(&records)).unwrap();
    let cfg = PipelineConfig {
        registry: Some(registry.clone()),
        output_dir: root.join("model"),
        type_model_dimension: 1 << 10,
        ..PipelineConfig::default()
    }
    .resolved()
    .unwrap();
    let model = pipeline::cmd_train_type_model(&cfg).unwrap().path;
    RerunFixture {
        _dir: dir,
        root,
        registry,
        model,
        names: records.into_iter().map(|r| r.name).collect(),
    }
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

fn run_stages(cfg: &PipelineConfig) -> Result<(), String> {
    pipeline::cmd_ingest(cfg).map_err(|e| e.to_string())?;
    pipeline::cmd_link(cfg).map_err(|e| e.to_string())?;
    pipeline::cmd_classify(cfg).map_err(|e| e.to_string())?;
    pipeline::cmd_analyze(cfg).map_err(|e| e.to_string())?;
    pipeline::cmd_report(cfg).map_err(|e| e.to_string())?;
    Ok(())
}

pub fn byte_identical_reruns(cases: u32) -> Result<(), String> {
    let fx = rerun_fixture();
    let unlinked = ["Orion Analytics Ltd", "Blue Heron Labs, Austin", "Institute of Something, 5 Main St"];
    let aff = prop_oneof![
        prop::sample::select(fx.names.clone()),
        prop::sample::select(unlinked.map(str::to_string).to_vec()),
        prop::sample::select(fx.names.clone()).prop_map(|n| format!("Dept of Math, {n}, 10001, USA")),
    ];
    let paper = (
        any::<bool>(),
        2018..2021i32,
        prop::collection::vec(prop::collection::vec(aff, 0..3), 1..4),
    );
    let counter = std::cell::Cell::new(0u32);
    finish(runner(cases).run(&(prop::collection::vec(paper, 1..8), 1..4usize), |(papers, min)| {
        counter.set(counter.get() + 1);
        let case_dir = fx.root.join(format!("case{}", counter.get()));
        fs::create_dir_all(&case_dir).unwrap();
        let corpus = case_dir.join("corpus.jsonl");
        let lines: Vec<String> = papers
            .iter()
            .enumerate()
            .map(|(i, (ijcai, year, authors))| {
                serde_json::json!({
                    "paper_id": format!("p{i}"),
                    "venue": if *ijcai { "IJCAI" } else { "AAAI" },
                    "year": year,
                    "title": format!("t{i}"),
                    "abstract": "",
                    "authors": authors.iter().enumerate().map(|(j, a)| serde_json::json!({
                        "name": format!("a{j}"), "affiliations": a
                    })).collect::<Vec<_>>(),
                })
                .to_string()
            })
            .collect();
        fs::write(&corpus, lines.join("\n") + "\n").unwrap();
        let cfg = PipelineConfig {
            corpus_inputs: vec![corpus],
            registry: Some(fx.registry.clone()),
            type_model: Some(fx.model.clone()),
            output_dir: case_dir.join("out"),
            network_min_weight: min,
            ..PipelineConfig::default()
        }
        .resolved()
        .unwrap();
        let first = run_stages(&cfg).map(|_| snapshot(&cfg.output_dir));
        let second = run_stages(&cfg).map(|_| snapshot(&cfg.output_dir));
        fs::remove_dir_all(&case_dir).unwrap();
        let (first, second) = (first.map_err(TestCaseError::fail)?, second.map_err(TestCaseError::fail)?);
        prop_assert!(first.len() >= 10, "only {} artifacts", first.len());
        prop_assert_eq!(first.keys().collect::<Vec<_>>(), second.keys().collect::<Vec<_>>());
        for (name, bytes) in &first {
            prop_assert!(&second[name] == bytes, "{} differs between runs", name);
        }
        Ok(())
    }))
}
