use std::collections::{BTreeMap, BTreeSet};

use super::{validate_targets, AnnotationInstance, AnnotationKind};
use crate::arch_model::ElementRef;
use crate::diagnostics::{sort_findings, Finding};

/// The lightweight architectural model recovered from annotations, with
/// lookup indexes. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeModel {
    instances: Vec<AnnotationInstance>,
    by_element: BTreeMap<ElementRef, Vec<usize>>,
    by_kind: BTreeMap<AnnotationKind, Vec<usize>>,
    packages_by_component: BTreeMap<String, BTreeSet<String>>,
    diagnostics: Vec<Finding>,
    config_fingerprint: String,
}

impl CodeModel {
    /// Builds the model from context-resolved instances. Target rules are
    /// checked here and their findings join `extraction_findings`.
    pub fn from_instances(mut instances: Vec<AnnotationInstance>, extraction_findings: Vec<Finding>) -> Self {
        instances.sort();
        let mut by_element: BTreeMap<ElementRef, Vec<usize>> = BTreeMap::new();
        let mut by_kind: BTreeMap<AnnotationKind, Vec<usize>> = BTreeMap::new();
        let mut packages_by_component: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut diagnostics = extraction_findings;

        for (idx, instance) in instances.iter().enumerate() {
            by_kind.entry(instance.kind).or_default().push(idx);
            for element in instance.named_elements() {
                by_element.entry(element).or_default().push(idx);
            }
            if instance.kind == AnnotationKind::Component {
                for name in &instance.values {
                    packages_by_component
                        .entry(name.clone())
                        .or_default()
                        .insert(instance.package.clone());
                }
            }
            diagnostics.extend(validate_targets(instance));
        }
        sort_findings(&mut diagnostics);

        Self {
            instances,
            by_element,
            by_kind,
            packages_by_component,
            diagnostics,
            config_fingerprint: String::new(),
        }
    }

    pub fn with_config_fingerprint(mut self, fingerprint: impl Into<String>) -> Self {
        self.config_fingerprint = fingerprint.into();
        self
    }

    /// All instances, sorted by file, line and column.
    pub fn instances(&self) -> &[AnnotationInstance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Instances that name `element` directly (see [`AnnotationInstance::named_elements`]).
    pub fn naming(&self, element: &ElementRef) -> impl Iterator<Item = &AnnotationInstance> {
        self.by_element
            .get(element)
            .into_iter()
            .flatten()
            .map(|&idx| &self.instances[idx])
    }

    pub fn of_kind(&self, kind: AnnotationKind) -> impl Iterator<Item = &AnnotationInstance> {
        self.by_kind
            .get(&kind)
            .into_iter()
            .flatten()
            .map(|&idx| &self.instances[idx])
    }

    pub fn indexed_elements(&self) -> impl Iterator<Item = &ElementRef> {
        self.by_element.keys()
    }

    pub fn packages_by_component(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.packages_by_component
    }

    /// Extraction problems and target-rule violations.
    pub fn diagnostics(&self) -> &[Finding] {
        &self.diagnostics
    }

    pub fn config_fingerprint(&self) -> &str {
        &self.config_fingerprint
    }
}
