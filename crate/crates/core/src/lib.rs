//! Error-type annotation for Arabic text correction.
//!
//! The pipeline aligns an erroneous sentence with its correction, classifies
//! every aligned word pair with a set of error tags and scores system
//! output by per-tag F1 against reference annotations.

pub mod alignment;
pub mod annotator;
pub mod metrics;
pub mod morphology;
pub mod script;
pub mod taxonomy;
