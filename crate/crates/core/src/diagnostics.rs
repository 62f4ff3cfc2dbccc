//! Findings shared by the model validator, the scanner, the conformance
//! checks and the smell detectors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arch_model::ElementRef;

/// Position of an annotation inside a scanned tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceLocation {
    /// Path relative to the scan root, always `/`-separated.
    pub file: String,
    pub line: u32,
    pub column: u32,
}

impl SourceLocation {
    pub fn new(file: impl Into<String>, line: u32, column: u32) -> Self {
        Self {
            file: file.into(),
            line,
            column,
        }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

macro_rules! check_ids {
    ($($variant:ident => $name:literal, $sev:ident;)*) => {
        /// Registered catalog of finding identifiers.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "SCREAMING_SNAKE_CASE")]
        pub enum CheckId {
            $($variant,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }

            pub fn severity(self) -> Severity {
                match self {
                    $(CheckId::$variant => Severity::$sev,)*
                }
            }

            pub fn from_name(name: &str) -> Option<CheckId> {
                match name {
                    $($name => Some(CheckId::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

check_ids! {
    // model well-formedness
    DuplicateComponent => "DUPLICATE_COMPONENT", Error;
    DuplicatePort => "DUPLICATE_PORT", Error;
    DuplicatePartRole => "DUPLICATE_PART_ROLE", Error;
    PartPortNameClash => "PART_PORT_NAME_CLASH", Error;
    UnresolvedPartType => "UNRESOLVED_PART_TYPE", Error;
    InvalidMultiplicity => "INVALID_MULTIPLICITY", Error;
    InvalidIdentifier => "INVALID_IDENTIFIER", Error;
    UnknownContext => "UNKNOWN_CONTEXT", Error;
    DuplicateConnectorId => "DUPLICATE_CONNECTOR_ID", Error;
    DuplicateConnector => "DUPLICATE_CONNECTOR", Error;
    SelfConnector => "SELF_CONNECTOR", Error;
    UnresolvedEndpoint => "UNRESOLVED_ENDPOINT", Error;
    // scanning
    IoError => "IO_ERROR", Error;
    MalformedPragma => "MALFORMED_PRAGMA", Error;
    MalformedAnnotation => "MALFORMED_ANNOTATION", Error;
    UnclassifiableTarget => "UNCLASSIFIABLE_TARGET", Error;
    TargetRuleViolation => "TARGET_RULE_VIOLATION", Error;
    // conformance
    MissingAnnotation => "MISSING_ANNOTATION", Error;
    UnknownElement => "UNKNOWN_ELEMENT", Error;
    UndeclaredConnection => "UNDECLARED_CONNECTION", Error;
    ContextConflict => "CONTEXT_CONFLICT", Error;
    // smells
    ScatteredComponent => "SCATTERED_COMPONENT", Warning;
    ConnectorLifecycle => "CONNECTOR_LIFECYCLE", Warning;
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Finding {
    #[serde(rename = "checkId")]
    pub check_id: CheckId,
    pub severity: Severity,
    pub message: String,
    pub element: Option<ElementRef>,
    pub locations: Vec<SourceLocation>,
}

impl Finding {
    /// Builds a finding whose severity is taken from the catalog.
    pub fn new(check_id: CheckId, message: impl Into<String>) -> Self {
        Self {
            check_id,
            severity: check_id.severity(),
            message: message.into(),
            element: None,
            locations: Vec::new(),
        }
    }

    pub fn with_element(mut self, element: ElementRef) -> Self {
        self.element = Some(element);
        self
    }

    pub fn at(mut self, location: SourceLocation) -> Self {
        self.locations.push(location);
        self
    }

    pub fn with_locations(mut self, locations: impl IntoIterator<Item = SourceLocation>) -> Self {
        self.locations.extend(locations);
        self
    }

    pub fn primary_location(&self) -> Option<&SourceLocation> {
        self.locations.first()
    }

    /// Report ordering: file, line, check id, element, then the rest for totality.
    pub fn report_cmp(&self, other: &Self) -> Ordering {
        let key = |f: &Finding| {
            let loc = f.primary_location();
            (
                loc.map(|l| l.file.clone()).unwrap_or_default(),
                loc.map(|l| l.line).unwrap_or(0),
                f.check_id.as_str(),
                f.element.as_ref().map(|e| e.path()).unwrap_or_default(),
            )
        };
        key(self)
            .cmp(&key(other))
            .then_with(|| self.locations.cmp(&other.locations))
            .then_with(|| self.message.cmp(&other.message))
    }
}

/// Sorts findings into report order and drops exact duplicates.
pub fn sort_findings(findings: &mut Vec<Finding>) {
    findings.sort_by(Finding::report_cmp);
    findings.dedup();
}
