use std::collections::{BTreeMap, BTreeSet};

use super::{is_identifier, resolve_endpoint, ArchitectureModel, CanonicalConnector, ElementRef};
use crate::diagnostics::{sort_findings, CheckId, Finding};

/// Checks the well-formedness invariants of a model. Violations are data:
/// an empty result means the model is well-formed.
pub fn validate_model(model: &ArchitectureModel) -> Vec<Finding> {
    let mut findings = Vec::new();

    let mut seen_components = BTreeSet::new();
    for component in &model.components {
        let here = ElementRef::component(component.name.as_str());
        if !is_identifier(&component.name) {
            findings.push(
                Finding::new(
                    CheckId::InvalidIdentifier,
                    format!("component name `{}` is not an identifier", component.name),
                )
                .with_element(here.clone()),
            );
        }
        if !seen_components.insert(component.name.as_str()) {
            findings.push(
                Finding::new(
                    CheckId::DuplicateComponent,
                    format!("component `{}` is declared more than once", component.name),
                )
                .with_element(here.clone()),
            );
        }

        let mut ports = BTreeSet::new();
        for port in &component.ports {
            let element = ElementRef::port(component.name.as_str(), port.name.as_str());
            if !is_identifier(&port.name) {
                findings.push(
                    Finding::new(
                        CheckId::InvalidIdentifier,
                        format!("port name `{}` is not an identifier", port.name),
                    )
                    .with_element(element.clone()),
                );
            }
            if !ports.insert(port.name.as_str()) {
                findings.push(
                    Finding::new(
                        CheckId::DuplicatePort,
                        format!("port `{}` is declared twice in `{}`", port.name, component.name),
                    )
                    .with_element(element),
                );
            }
        }

        let mut roles = BTreeSet::new();
        for part in &component.parts {
            let element = ElementRef::part(component.name.as_str(), part.role.as_str());
            if !is_identifier(&part.role) {
                findings.push(
                    Finding::new(
                        CheckId::InvalidIdentifier,
                        format!("part role `{}` is not an identifier", part.role),
                    )
                    .with_element(element.clone()),
                );
            }
            if !roles.insert(part.role.as_str()) {
                findings.push(
                    Finding::new(
                        CheckId::DuplicatePartRole,
                        format!("part role `{}` is declared twice in `{}`", part.role, component.name),
                    )
                    .with_element(element.clone()),
                );
            }
            if ports.contains(part.role.as_str()) {
                findings.push(
                    Finding::new(
                        CheckId::PartPortNameClash,
                        format!("`{}` in `{}` names both a part and a port", part.role, component.name),
                    )
                    .with_element(element.clone()),
                );
            }
            if model.component(&part.type_component).is_none() {
                findings.push(
                    Finding::new(
                        CheckId::UnresolvedPartType,
                        format!("part `{}` has undeclared type `{}`", element, part.type_component),
                    )
                    .with_element(element.clone()),
                );
            }
            if !part.multiplicity.is_valid() {
                findings.push(
                    Finding::new(
                        CheckId::InvalidMultiplicity,
                        format!("part `{element}` has invalid multiplicity {}", part.multiplicity),
                    )
                    .with_element(element),
                );
            }
        }
    }

    let mut ids = BTreeSet::new();
    let mut canonical: BTreeMap<CanonicalConnector, &str> = BTreeMap::new();
    for connector in &model.connectors {
        let element = connector.element_ref();
        if !is_identifier(&connector.id) {
            findings.push(
                Finding::new(
                    CheckId::InvalidIdentifier,
                    format!("connector id `{}` is not an identifier", connector.id),
                )
                .with_element(element.clone()),
            );
        }
        if !ids.insert(connector.id.as_str()) {
            findings.push(
                Finding::new(
                    CheckId::DuplicateConnectorId,
                    format!("connector id `{}` is declared more than once", connector.id),
                )
                .with_element(element.clone()),
            );
        }
        let context = connector.context.as_deref();
        if let Some(name) = context {
            if model.component(name).is_none() {
                findings.push(
                    Finding::new(
                        CheckId::UnknownContext,
                        format!("connector `{}` is declared in unknown component `{name}`", connector.id),
                    )
                    .with_element(element),
                );
                continue;
            }
        }

        let left = resolve_endpoint(model, context, &connector.left);
        let right = resolve_endpoint(model, context, &connector.right);
        for endpoint in [&left, &right] {
            if let Err(err) = endpoint {
                findings.push(
                    Finding::new(
                        CheckId::UnresolvedEndpoint,
                        format!("connector `{}`: {err}", connector.id),
                    )
                    .with_element(element.clone()),
                );
            }
        }
        let (Ok(left), Ok(right)) = (left, right) else {
            continue;
        };
        if left == right {
            findings.push(
                Finding::new(
                    CheckId::SelfConnector,
                    format!("connector `{}` joins `{left}` to itself", connector.id),
                )
                .with_element(element),
            );
            continue;
        }
        let key = super::normalize_connector(left, right, connector.direction);
        if let Some(first) = canonical.get(&key) {
            findings.push(
                Finding::new(
                    CheckId::DuplicateConnector,
                    format!(
                        "connector `{}` duplicates `{first}` ({} {} {})",
                        connector.id,
                        key.left,
                        key.direction.arrow(),
                        key.right
                    ),
                )
                .with_element(element),
            );
        } else {
            canonical.insert(key, connector.id.as_str());
        }
    }

    sort_findings(&mut findings);
    findings
}
