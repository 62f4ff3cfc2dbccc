//! Annotation extraction: builds the lightweight architectural model
//! ([`CodeModel`]) from annotated source files.
//!
//! Two front-ends feed the same [`AnnotationInstance`] shape:
//!
//! * [`extract_attributes`] recognizes host-language annotations such as
//!   `@Component("Car") class Car { ... }` and infers their target from the
//!   declaration that follows.
//! * [`extract_pragmas`] recognizes comment pragmas in any language, e.g.
//!   `//@arch Part("rear") @on field rear`, where the target is explicit.

mod args;
mod attribute;
mod code_model;
mod context;
mod pragma;
mod scan;
mod targets;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arch_model::{Direction, ElementRef, EndpointPath};
use crate::diagnostics::{Finding, SourceLocation};

pub use attribute::extract_attributes;
pub use code_model::CodeModel;
pub use context::resolve_context;
pub use pragma::{extract_pragmas, DEFAULT_SIGIL};
pub use scan::{scan_tree, ScanConfig, ScanError};
pub use targets::{permitted_targets, validate_targets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AnnotationKind {
    Component,
    Part,
    Port,
    AddPart,
    RemovePart,
    Connects,
    Disconnects,
    Connector,
}

impl AnnotationKind {
    pub const ALL: [AnnotationKind; 8] = [
        AnnotationKind::Component,
        AnnotationKind::Part,
        AnnotationKind::Port,
        AnnotationKind::AddPart,
        AnnotationKind::RemovePart,
        AnnotationKind::Connects,
        AnnotationKind::Disconnects,
        AnnotationKind::Connector,
    ];

    /// Name as written in source, e.g. `AddPart`.
    pub fn source_name(self) -> &'static str {
        match self {
            AnnotationKind::Component => "Component",
            AnnotationKind::Part => "Part",
            AnnotationKind::Port => "Port",
            AnnotationKind::AddPart => "AddPart",
            AnnotationKind::RemovePart => "RemovePart",
            AnnotationKind::Connects => "Connects",
            AnnotationKind::Disconnects => "Disconnects",
            AnnotationKind::Connector => "Connector",
        }
    }

    pub fn from_source_name(name: &str) -> Option<AnnotationKind> {
        AnnotationKind::ALL.into_iter().find(|k| k.source_name() == name)
    }

    /// Kinds whose `value` array is mandatory.
    pub fn takes_values(self) -> bool {
        !self.is_connection()
    }

    /// CONNECTS, DISCONNECTS and CONNECTOR describe a connection between two endpoints.
    pub fn is_connection(self) -> bool {
        matches!(
            self,
            AnnotationKind::Connects | AnnotationKind::Disconnects | AnnotationKind::Connector
        )
    }

    pub fn allowed_attributes(self) -> &'static [&'static str] {
        match self {
            AnnotationKind::Component | AnnotationKind::Part | AnnotationKind::Port => &[],
            AnnotationKind::AddPart | AnnotationKind::RemovePart => &["componentname"],
            AnnotationKind::Connects | AnnotationKind::Disconnects | AnnotationKind::Connector => {
                &["leftcomponent", "left", "rightcomponent", "right", "type"]
            }
        }
    }
}

impl fmt::Display for AnnotationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.source_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TargetKind {
    Type,
    Field,
    Method,
    Constructor,
    Local,
}

impl TargetKind {
    pub const ALL: [TargetKind; 5] = [
        TargetKind::Type,
        TargetKind::Field,
        TargetKind::Method,
        TargetKind::Constructor,
        TargetKind::Local,
    ];

    /// Keyword used after `@on` in pragmas.
    pub fn keyword(self) -> &'static str {
        match self {
            TargetKind::Type => "type",
            TargetKind::Field => "field",
            TargetKind::Method => "method",
            TargetKind::Constructor => "constructor",
            TargetKind::Local => "local",
        }
    }

    pub fn from_keyword(keyword: &str) -> Option<TargetKind> {
        TargetKind::ALL.into_iter().find(|t| t.keyword() == keyword)
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Which end of a connection annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One extracted annotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnotationInstance {
    pub kind: AnnotationKind,
    /// The array-valued `value` attribute; empty for connection kinds.
    pub values: Vec<String>,
    /// Named attributes (`left`, `right`, `leftcomponent`, `rightcomponent`,
    /// `componentname`, `type`). `type` is normalized to LEFT/RIGHT/BIDIR.
    pub attrs: BTreeMap<String, String>,
    pub target: TargetKind,
    #[serde(rename = "targetName")]
    pub target_name: String,
    #[serde(rename = "enclosingComponents")]
    pub enclosing_components: Vec<String>,
    pub location: SourceLocation,
    pub package: String,
    /// Line of the declaration the annotation is attached to. Distinguishes
    /// overloaded methods that share a name.
    #[serde(rename = "declarationLine")]
    pub declaration_line: u32,
}

impl AnnotationInstance {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.get(name).map(String::as_str)
    }

    pub fn direction(&self) -> Option<Direction> {
        self.attr("type").and_then(|t| t.parse().ok())
    }

    /// Component in which the endpoint on `side` is resolved: the explicit
    /// `leftcomponent`/`rightcomponent` attribute, else the first enclosing component.
    pub fn endpoint_context(&self, side: Side) -> Option<&str> {
        let key = match side {
            Side::Left => "leftcomponent",
            Side::Right => "rightcomponent",
        };
        self.attr(key)
            .or_else(|| self.enclosing_components.first().map(String::as_str))
    }

    pub fn endpoint_path(&self, side: Side) -> Option<EndpointPath> {
        let key = match side {
            Side::Left => "left",
            Side::Right => "right",
        };
        self.attr(key).and_then(|p| p.parse().ok())
    }

    /// Components an ADD_PART/REMOVE_PART acts on: `componentname` when
    /// given, else the enclosing components.
    pub fn part_owners(&self) -> Vec<&str> {
        match self.attr("componentname") {
            Some(name) => vec![name],
            None => self.enclosing_components.iter().map(String::as_str).collect(),
        }
    }

    /// Elements named directly by this instance, without consulting an
    /// architecture model. Connection endpoints need resolution and are
    /// not included; explicit endpoint components are.
    pub fn named_elements(&self) -> Vec<ElementRef> {
        let mut refs = Vec::new();
        match self.kind {
            AnnotationKind::Component => {
                refs.extend(self.values.iter().map(|v| ElementRef::component(v.as_str())));
            }
            AnnotationKind::Part | AnnotationKind::Port => {
                for component in &self.enclosing_components {
                    for value in &self.values {
                        refs.push(if self.kind == AnnotationKind::Part {
                            ElementRef::part(component.as_str(), value.as_str())
                        } else {
                            ElementRef::port(component.as_str(), value.as_str())
                        });
                    }
                }
            }
            AnnotationKind::AddPart | AnnotationKind::RemovePart => {
                for owner in self.part_owners() {
                    for value in &self.values {
                        refs.push(ElementRef::part(owner, value.as_str()));
                    }
                }
                if let Some(name) = self.attr("componentname") {
                    refs.push(ElementRef::component(name));
                }
            }
            AnnotationKind::Connects | AnnotationKind::Disconnects | AnnotationKind::Connector => {
                for key in ["leftcomponent", "rightcomponent"] {
                    if let Some(name) = self.attr(key) {
                        refs.push(ElementRef::component(name));
                    }
                }
            }
        }
        refs.sort();
        refs.dedup();
        refs
    }

    /// Equality ignoring where the annotation was written.
    pub fn same_declaration(&self, other: &AnnotationInstance) -> bool {
        self.kind == other.kind
            && self.values == other.values
            && self.attrs == other.attrs
            && self.target == other.target
            && self.target_name == other.target_name
            && self.enclosing_components == other.enclosing_components
            && self.package == other.package
    }
}

impl Ord for AnnotationInstance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.location
            .cmp(&other.location)
            .then_with(|| self.kind.cmp(&other.kind))
            .then_with(|| self.values.cmp(&other.values))
            .then_with(|| self.attrs.cmp(&other.attrs))
            .then_with(|| self.target.cmp(&other.target))
            .then_with(|| self.target_name.cmp(&other.target_name))
            .then_with(|| self.enclosing_components.cmp(&other.enclosing_components))
            .then_with(|| self.package.cmp(&other.package))
            .then_with(|| self.declaration_line.cmp(&other.declaration_line))
    }
}

impl PartialOrd for AnnotationInstance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// How an instance's enclosing component is determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextHint {
    /// Brace-delimited type scopes, innermost first. `opens` is the scope
    /// introduced by the annotated declaration itself when it is a type.
    Lexical { scopes: Vec<usize>, opens: Option<usize> },
    /// Nearest preceding type-targeted COMPONENT pragma in the file.
    Sequential,
    /// Given by an `@in` clause.
    Explicit(Vec<String>),
}

/// Output of one front-end over one file, before context resolution.
#[derive(Debug, Clone, Default)]
pub struct FileExtraction {
    pub instances: Vec<AnnotationInstance>,
    /// Parallel to `instances`.
    pub hints: Vec<ContextHint>,
    pub findings: Vec<Finding>,
}

impl FileExtraction {
    fn push(&mut self, instance: AnnotationInstance, hint: ContextHint) {
        self.instances.push(instance);
        self.hints.push(hint);
    }
}

/// Directory part of a `/`-separated relative path.
pub(crate) fn package_of(path: &str) -> String {
    match path.rfind('/') {
        Some(idx) => path[..idx].to_owned(),
        None => String::new(),
    }
}
