//! Industry–academia collaboration analysis for conference paper corpora.
//!
//! The pipeline runs in stages, each with its own module:
//!
//! * [`corpus`] reads TEI headers or JSONL into [`corpus::PaperRecord`]s.
//! * [`link`] cleans raw affiliation strings and links them to a research
//!   organization registry.
//! * [`classify`] labels every institution as academia or industry.
//! * [`analytics`] buckets papers and computes trends, rankings and the
//!   co-authorship network.
//! * [`content`] runs the abstract classification experiment and baselines.
//! * [`pipeline`] wires the stages to on-disk artifacts.

pub mod corpus;
pub mod link;
pub mod text;
pub mod classify;
pub mod linear;
pub mod sampling;
pub mod analytics;
pub mod content;
pub mod pipeline;
