//! Core algorithms for test-suite based evaluation of sentence-level MT
//! quality estimation.
//!
//! A test suite is a set of short source sentences, each targeting one
//! linguistic phenomenon and carrying a positive (and optionally a negative)
//! regular-expression rule. MT outputs for those sentences are labeled
//! pass/fail, deconstructed into pairwise comparisons with exactly one
//! passing and one failing translation, and QE systems are scored by their
//! accuracy at picking the passing side, reported per error category.
//!
//! This crate holds the pure, allocation-only parts of that pipeline:
//! output merging, the verdict decision table, pair generation, presentation
//! ordering, credit scoring and report aggregation, rendering, and a
//! self-contained baseline comparator (n-gram LM features plus a pairwise
//! logistic model with recursive feature elimination). File formats, regex
//! compilation and process handling live in the companion `suiteval` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baseline;
pub mod category;
pub mod error;
pub mod evaluation;
pub mod labeling;
pub mod output;
pub mod pairing;
pub mod prediction;
pub mod present;
pub mod report;
pub mod suite;
pub mod tsv;

pub(crate) mod math;

pub use category::CategoryPath;
pub use error::{CoreError, CoreResult};
pub use labeling::{decide_verdict, Label, LabelSet, Origin, OverrideRecord, OverrideVerdict, Verdict};
pub use output::{merge_identical_outputs, MTOutput, RawOutput, SystemType};
pub use pairing::{generate_pairs, pair_stats, ComparisonPair, PairSetStats};
pub use prediction::{Choice, QEPrediction};
pub use present::{presentation_order, PresentedPair};
pub use suite::{TestItem, TestSuite};
