//! Architecture conformance checking through source-code annotations.
//!
//! The pipeline has two halves. The [`annotations`] scanner extracts
//! architectural annotations from a source tree into a [`CodeModel`]; the
//! [`conformance`] checks compare that model with an [`ArchitectureModel`]
//! read from an `.arch` description. On top of both sit the [`smells`]
//! detectors and the [`refactor`] engine, which applies architectural
//! refactoring plans and reports the annotations each step touches. The
//! [`cli`] module is the `archlint` command line.

pub mod annotations;
pub mod arch_model;
pub mod cli;
pub mod conformance;
pub mod diagnostics;
pub mod refactor;
pub mod smells;

pub use annotations::{AnnotationInstance, CodeModel};
pub use arch_model::{ArchitectureModel, ElementRef};
pub use diagnostics::{CheckId, Finding, Severity, SourceLocation};

#[cfg(test)]
pub(crate) mod test_fixtures;
