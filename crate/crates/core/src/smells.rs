//! Architectural bad smells, found through the redundancy between the
//! annotations and the architecture description. Smells are only reported
//! as warnings; judging and repairing them is left to the developer.

use std::collections::{BTreeMap, BTreeSet};

use crate::annotations::{AnnotationInstance, AnnotationKind, CodeModel};
use crate::arch_model::{ArchitectureModel, ElementRef};
use crate::conformance::{declared_connections, wired_connection};
use crate::diagnostics::{sort_findings, CheckId, Finding};

pub const SMELL_IDS: [CheckId; 2] = [CheckId::ScatteredComponent, CheckId::ConnectorLifecycle];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmellConfig {
    scatter_threshold: usize,
    pub enabled: BTreeSet<CheckId>,
}

impl Default for SmellConfig {
    fn default() -> Self {
        Self {
            scatter_threshold: 2,
            enabled: SMELL_IDS.into_iter().collect(),
        }
    }
}

impl SmellConfig {
    /// Minimum number of distinct packages that makes a component scattered.
    pub fn scatter_threshold(&self) -> usize {
        self.scatter_threshold
    }

    pub fn set_scatter_threshold(&mut self, threshold: usize) -> Result<(), String> {
        if threshold < 2 {
            return Err(format!("scatter threshold must be at least 2, got {threshold}"));
        }
        self.scatter_threshold = threshold;
        Ok(())
    }

    /// Parses a comma-separated list of smell ids.
    pub fn set_enabled(&mut self, list: &str) -> Result<(), String> {
        let mut enabled = BTreeSet::new();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match CheckId::from_name(name) {
                Some(id) if SMELL_IDS.contains(&id) => {
                    enabled.insert(id);
                }
                _ => return Err(format!("`{name}` is not a smell id")),
            }
        }
        self.enabled = enabled;
        Ok(())
    }
}

pub fn smell_scattered_component(_arch: &ArchitectureModel, code: &CodeModel, cfg: &SmellConfig) -> Vec<Finding> {
    let mut findings = Vec::new();
    for (component, packages) in code.packages_by_component() {
        if packages.len() < cfg.scatter_threshold {
            continue;
        }
        let locations = code
            .of_kind(AnnotationKind::Component)
            .filter(|i| i.values.contains(component))
            .map(|i| i.location.clone());
        let listed: Vec<String> = packages
            .iter()
            .map(|p| if p.is_empty() { "<root>".to_owned() } else { p.clone() })
            .collect();
        findings.push(
            Finding::new(
                CheckId::ScatteredComponent,
                format!(
                    "component `{component}` is spread over {} packages: {}",
                    packages.len(),
                    listed.join(", ")
                ),
            )
            .with_element(ElementRef::component(component.as_str()))
            .with_locations(locations),
        );
    }
    sort_findings(&mut findings);
    findings
}

/// Identity of an annotated method: overloads differ by declaration line.
fn method_key(instance: &AnnotationInstance) -> (&str, u32, &str) {
    (
        instance.location.file.as_str(),
        instance.declaration_line,
        instance.target_name.as_str(),
    )
}

fn side_problem(count: usize, verb: &str) -> Option<String> {
    match count {
        1 => None,
        0 => Some(format!("no {verb} method")),
        n => Some(format!("more than one {verb} method ({n})")),
    }
}

pub fn smell_connector_lifecycle(arch: &ArchitectureModel, code: &CodeModel, _cfg: &SmellConfig) -> Vec<Finding> {
    let wired: Vec<_> = code
        .instances()
        .iter()
        .filter(|i| matches!(i.kind, AnnotationKind::Connects | AnnotationKind::Disconnects))
        .filter_map(|i| Some((i, wired_connection(arch, i).ok()?)))
        .collect();

    let mut findings = Vec::new();
    for (element, declared) in declared_connections(arch) {
        let mut methods: BTreeMap<AnnotationKind, BTreeSet<_>> = BTreeMap::new();
        let mut locations = Vec::new();
        for (instance, connection) in &wired {
            if connection.matches(&declared) {
                methods.entry(instance.kind).or_default().insert(method_key(instance));
                locations.push(instance.location.clone());
            }
        }
        let count = |kind| methods.get(&kind).map_or(0, BTreeSet::len);
        let problems: Vec<String> = [
            side_problem(count(AnnotationKind::Connects), "connecting"),
            side_problem(count(AnnotationKind::Disconnects), "disconnecting"),
        ]
        .into_iter()
        .flatten()
        .collect();
        if problems.is_empty() {
            continue;
        }
        findings.push(
            Finding::new(
                CheckId::ConnectorLifecycle,
                format!("connector `{element}`: {}", problems.join("; ")),
            )
            .with_element(element)
            .with_locations(locations),
        );
    }
    sort_findings(&mut findings);
    findings
}

/// All enabled smells, in report order.
pub fn run_smells(arch: &ArchitectureModel, code: &CodeModel, cfg: &SmellConfig) -> Vec<Finding> {
    let mut findings = Vec::new();
    if cfg.enabled.contains(&CheckId::ScatteredComponent) {
        findings.extend(smell_scattered_component(arch, code, cfg));
    }
    if cfg.enabled.contains(&CheckId::ConnectorLifecycle) {
        findings.extend(smell_connector_lifecycle(arch, code, cfg));
    }
    sort_findings(&mut findings);
    findings
}
