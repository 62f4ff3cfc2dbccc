//! The three automatic checks between an architecture description and the
//! annotations found in code, plus the report that bundles them.
//!
//! * completeness of annotations: every component, part and port is annotated
//! * completeness of the architecture: every annotation names a declared element
//! * consistency of connections: every wired connection is a declared connector

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::annotations::{AnnotationInstance, AnnotationKind, CodeModel, Side};
use crate::arch_model::{
    list_elements, normalize_connector, resolve_endpoint, serialize_architecture, validate_model, ArchitectureModel,
    CanonicalConnector, Direction, ElementKind, ElementRef,
};
use crate::diagnostics::{sort_findings, CheckId, Finding};

/// Elements an instance marks as annotated, for the completeness check.
fn covered_by(instance: &AnnotationInstance) -> Vec<ElementRef> {
    match instance.kind {
        AnnotationKind::Component | AnnotationKind::Part | AnnotationKind::Port => instance.named_elements(),
        AnnotationKind::AddPart => instance
            .part_owners()
            .into_iter()
            .flat_map(|owner| instance.values.iter().map(move |v| ElementRef::part(owner, v.as_str())))
            .collect(),
        _ => Vec::new(),
    }
}

pub fn check_annotation_completeness(arch: &ArchitectureModel, code: &CodeModel) -> Vec<Finding> {
    let covered: BTreeSet<ElementRef> = code.instances().iter().flat_map(covered_by).collect();
    let mut findings: Vec<Finding> = list_elements(arch)
        .into_iter()
        .filter(|e| e.kind() != ElementKind::Connector && !covered.contains(e))
        .map(|element| {
            let what = match element.kind() {
                ElementKind::Component => "component",
                ElementKind::Part => "part",
                _ => "port",
            };
            Finding::new(
                CheckId::MissingAnnotation,
                format!("{what} `{element}` has no annotation in the code"),
            )
            .with_element(element)
        })
        .collect();
    sort_findings(&mut findings);
    findings
}

/// Elements a non-connection instance refers to. An instance without any
/// context component yields a single `None`.
fn referents(instance: &AnnotationInstance) -> Vec<Option<ElementRef>> {
    let owners: Vec<&str> = match instance.kind {
        AnnotationKind::Component => {
            return instance
                .values
                .iter()
                .map(|v| Some(ElementRef::component(v.as_str())))
                .collect()
        }
        AnnotationKind::AddPart | AnnotationKind::RemovePart => instance.part_owners(),
        AnnotationKind::Part | AnnotationKind::Port => {
            instance.enclosing_components.iter().map(String::as_str).collect()
        }
        _ => return Vec::new(),
    };
    if owners.is_empty() {
        return vec![None];
    }
    owners
        .into_iter()
        .flat_map(|owner| {
            instance.values.iter().map(move |v| {
                Some(if instance.kind == AnnotationKind::Port {
                    ElementRef::port(owner, v.as_str())
                } else {
                    ElementRef::part(owner, v.as_str())
                })
            })
        })
        .collect()
}

pub fn check_architecture_completeness(arch: &ArchitectureModel, code: &CodeModel) -> Vec<Finding> {
    let mut findings = Vec::new();
    for instance in code.instances() {
        for referent in referents(instance) {
            match referent {
                Some(element) if !arch.contains(&element) => findings.push(
                    Finding::new(
                        CheckId::UnknownElement,
                        format!(
                            "@{} names `{element}`, which the architecture does not declare",
                            instance.kind
                        ),
                    )
                    .with_element(element)
                    .at(instance.location.clone()),
                ),
                Some(_) => {}
                None => findings.push(
                    Finding::new(
                        CheckId::UnknownElement,
                        format!("@{} is not inside any annotated component", instance.kind),
                    )
                    .at(instance.location.clone()),
                ),
            }
        }
    }
    sort_findings(&mut findings);
    findings
}

/// A connection-shaped annotation with both endpoints resolved. `direction`
/// is `None` when the annotation leaves it open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiredConnection {
    pub left: ElementRef,
    pub right: ElementRef,
    pub direction: Option<Direction>,
}

impl WiredConnection {
    pub fn matches(&self, declared: &CanonicalConnector) -> bool {
        let probe = normalize_connector(
            self.left.clone(),
            self.right.clone(),
            self.direction.unwrap_or(Direction::Bidir),
        );
        probe.same_endpoints(declared) && (self.direction.is_none() || probe.direction == declared.direction)
    }
}

fn resolve_side(arch: &ArchitectureModel, instance: &AnnotationInstance, side: Side) -> Result<ElementRef, Finding> {
    let (key, label) = match side {
        Side::Left => ("leftcomponent", "left"),
        Side::Right => ("rightcomponent", "right"),
    };
    let path = instance
        .endpoint_path(side)
        .expect("connection annotations carry both endpoint paths");
    let fail = |check: CheckId, message: String| Err(Finding::new(check, message).at(instance.location.clone()));
    let Some(context) = instance.endpoint_context(side) else {
        return fail(
            CheckId::UnresolvedEndpoint,
            format!("{label} endpoint `{path}` has no component to be resolved in"),
        );
    };
    match resolve_endpoint(arch, Some(context), &path) {
        Ok(element) => Ok(element),
        Err(err) => {
            let enclosing = instance.enclosing_components.first();
            let explicit = instance.attr(key).is_some();
            if let Some(enclosing) = enclosing.filter(|e| explicit && e.as_str() != context) {
                if resolve_endpoint(arch, Some(enclosing), &path).is_ok() {
                    return Err(Finding::new(
                        CheckId::ContextConflict,
                        format!(
                            "{label} endpoint `{path}`: {key}=`{context}` contradicts the enclosing component `{enclosing}`"
                        ),
                    )
                    .with_element(ElementRef::component(context))
                    .at(instance.location.clone()));
                }
            }
            fail(CheckId::UnresolvedEndpoint, format!("{label} endpoint: {err}"))
        }
    }
}

/// Resolves both endpoints of a CONNECTS, DISCONNECTS or CONNECTOR instance.
pub fn wired_connection(
    arch: &ArchitectureModel,
    instance: &AnnotationInstance,
) -> Result<WiredConnection, Vec<Finding>> {
    debug_assert!(instance.kind.is_connection());
    let left = resolve_side(arch, instance, Side::Left);
    let right = resolve_side(arch, instance, Side::Right);
    match (left, right) {
        (Ok(left), Ok(right)) => Ok(WiredConnection {
            left,
            right,
            direction: instance.direction(),
        }),
        (left, right) => Err(left.err().into_iter().chain(right.err()).collect()),
    }
}

/// Canonical forms of every declared connector that resolves.
pub fn declared_connections(arch: &ArchitectureModel) -> Vec<(ElementRef, CanonicalConnector)> {
    arch.connectors
        .iter()
        .filter_map(|c| Some((c.element_ref(), CanonicalConnector::of(arch, c).ok()?)))
        .collect()
}

pub fn check_connection_consistency(arch: &ArchitectureModel, code: &CodeModel) -> Vec<Finding> {
    let declared = declared_connections(arch);
    let mut findings = Vec::new();
    for instance in code.instances().iter().filter(|i| i.kind.is_connection()) {
        match wired_connection(arch, instance) {
            Err(mut errors) => findings.append(&mut errors),
            Ok(wired) if declared.iter().any(|(_, c)| wired.matches(c)) => {}
            Ok(wired) => {
                let arrow = wired.direction.map_or("--", Direction::arrow);
                findings.push(
                    Finding::new(
                        CheckId::UndeclaredConnection,
                        format!(
                            "@{} wires `{}` {arrow} `{}`, which no declared connector matches",
                            instance.kind, wired.left, wired.right
                        ),
                    )
                    .at(instance.location.clone()),
                );
            }
        }
    }
    sort_findings(&mut findings);
    findings
}

/// What a report was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    /// SHA-256 of the canonical architecture text.
    pub architecture: String,
    #[serde(rename = "scanConfig")]
    pub scan_config: String,
}

impl Fingerprint {
    pub fn of(arch: &ArchitectureModel, code: &CodeModel) -> Self {
        let text = serialize_architecture(arch);
        Self {
            architecture: hex::encode(Sha256::digest(text.as_bytes())),
            scan_config: code.config_fingerprint().to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub findings: Vec<Finding>,
    pub counts: BTreeMap<CheckId, usize>,
    pub fingerprint: Fingerprint,
}

impl ConformanceReport {
    /// Sorts `findings` and derives the counts.
    pub fn new(mut findings: Vec<Finding>, fingerprint: Fingerprint) -> Self {
        sort_findings(&mut findings);
        let mut counts = BTreeMap::new();
        for finding in &findings {
            *counts.entry(finding.check_id).or_insert(0) += 1;
        }
        Self {
            findings,
            counts,
            fingerprint,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings
            .iter()
            .any(|f| f.severity == crate::diagnostics::Severity::Error)
    }
}

/// Model validation, extraction diagnostics, target rules and the three checks.
pub fn run_all(arch: &ArchitectureModel, code: &CodeModel) -> ConformanceReport {
    let mut findings = validate_model(arch);
    findings.extend_from_slice(code.diagnostics());
    findings.extend(check_annotation_completeness(arch, code));
    findings.extend(check_architecture_completeness(arch, code));
    findings.extend(check_connection_consistency(arch, code));
    ConformanceReport::new(findings, Fingerprint::of(arch, code))
}
