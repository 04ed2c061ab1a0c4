//! Evaluation machinery for words of estimative probability (WEPs).
//!
//! The crate covers the offline half of the pipeline:
//!
//! * [`domain`] holds the shared vocabulary: the 17 WEPs, the two choice
//!   sets with their probability ranges, context templates, interval kinds,
//!   confidence points and the prompt/response record types.
//! * [`promptgen`] builds the two prompt corpora: numeric elicitation over
//!   context templates ([`promptgen::rq1`]) and choice elicitation over
//!   sampled numbers ([`promptgen::rq2`]).
//! * [`parser`] turns raw replies into probabilities or choices.
//! * [`metrics`] scores choice responses with the four consistency metrics
//!   and computes random baselines.
//! * [`stats`] compares probability samples (binning, KL divergence,
//!   Mann-Whitney U, KS, paired t-test, medians).
//! * [`survey`] ingests the human survey baseline.
//!
//! Talking to models lives in the `wepbench-gateway` crate.

pub mod domain;
mod error;
pub mod jsonl;
pub mod metrics;
pub mod parser;
pub mod promptgen;
pub mod stats;
pub mod survey;

pub use error::{Error, Result};
