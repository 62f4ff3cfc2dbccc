use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ArchitectureModel, Component, Connector, Direction, ElementRef, EndpointPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot resolve `{path}` in {}: {reason}", context_label(.context))]
pub struct ResolveError {
    pub path: String,
    pub context: Option<String>,
    pub reason: String,
}

fn context_label(context: &Option<String>) -> String {
    match context {
        Some(c) => format!("`{c}`"),
        None => "model scope".to_owned(),
    }
}

/// Resolves every segment of `path` and returns the element reached by each.
///
/// With a context component the first segment names one of its parts or
/// ports; at model scope (`context == None`) it names a component. Each
/// later segment is looked up in the type of the part reached before it.
pub fn trace_endpoint(
    model: &ArchitectureModel,
    context: Option<&str>,
    path: &EndpointPath,
) -> Result<Vec<ElementRef>, ResolveError> {
    let fail = |reason: String| ResolveError {
        path: path.to_string(),
        context: context.map(str::to_owned),
        reason,
    };

    let mut segments = path.segments().iter();
    let mut trace = Vec::with_capacity(path.segments().len());
    let mut current: &Component = match context {
        Some(name) => model
            .component(name)
            .ok_or_else(|| fail(format!("no component `{name}`")))?,
        None => {
            let first = segments.next().expect("endpoint paths are non-empty");
            let component = model
                .component(first)
                .ok_or_else(|| fail(format!("no component `{first}`")))?;
            trace.push(ElementRef::component(first.as_str()));
            component
        }
    };

    let mut pending_type: Option<&str> = None;
    for segment in segments {
        if let Some(type_name) = pending_type.take() {
            current = model
                .component(type_name)
                .ok_or_else(|| fail(format!("part type `{type_name}` is not declared")))?;
        } else if matches!(trace.last(), Some(ElementRef::Port { .. })) {
            return Err(fail(format!("`{segment}` follows a port")));
        }
        if let Some(part) = current.part(segment) {
            trace.push(ElementRef::part(current.name.as_str(), segment.as_str()));
            pending_type = Some(&part.type_component);
        } else if current.port(segment).is_some() {
            trace.push(ElementRef::port(current.name.as_str(), segment.as_str()));
        } else {
            return Err(fail(format!(
                "component `{}` has no part or port `{segment}`",
                current.name
            )));
        }
    }
    Ok(trace)
}

/// Resolves an endpoint path to the part or port it designates.
pub fn resolve_endpoint(
    model: &ArchitectureModel,
    context: Option<&str>,
    path: &EndpointPath,
) -> Result<ElementRef, ResolveError> {
    let trace = trace_endpoint(model, context, path)?;
    match trace.last() {
        Some(element @ (ElementRef::Part { .. } | ElementRef::Port { .. })) => Ok(element.clone()),
        _ => Err(ResolveError {
            path: path.to_string(),
            context: context.map(str::to_owned),
            reason: "an endpoint must designate a part or a port".to_owned(),
        }),
    }
}

/// Connector reduced to ordered endpoints so that `a <- b` and `b -> a`
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalConnector {
    pub left: ElementRef,
    pub right: ElementRef,
    pub direction: Direction,
}

impl CanonicalConnector {
    pub fn of(model: &ArchitectureModel, connector: &Connector) -> Result<Self, ResolveError> {
        let context = connector.context.as_deref();
        let left = resolve_endpoint(model, context, &connector.left)?;
        let right = resolve_endpoint(model, context, &connector.right)?;
        Ok(normalize_connector(left, right, connector.direction))
    }

    pub fn same_endpoints(&self, other: &CanonicalConnector) -> bool {
        self.left == other.left && self.right == other.right
    }
}

/// Orders endpoints by qualified path, flipping LEFT/RIGHT when swapped.
pub fn normalize_connector(left: ElementRef, right: ElementRef, direction: Direction) -> CanonicalConnector {
    if left == right {
        // both orientations coincide; pick one so the result stays symmetric
        return CanonicalConnector {
            left,
            right,
            direction: direction.min(direction.flip()),
        };
    }
    if right < left {
        CanonicalConnector {
            left: right,
            right: left,
            direction: direction.flip(),
        }
    } else {
        CanonicalConnector { left, right, direction }
    }
}

/// Every component, part, port and connector declared in the model.
pub fn list_elements(model: &ArchitectureModel) -> BTreeSet<ElementRef> {
    let mut elements = BTreeSet::new();
    for component in &model.components {
        elements.insert(ElementRef::component(component.name.as_str()));
        for part in &component.parts {
            elements.insert(ElementRef::part(component.name.as_str(), part.role.as_str()));
        }
        for port in &component.ports {
            elements.insert(ElementRef::port(component.name.as_str(), port.name.as_str()));
        }
    }
    for connector in &model.connectors {
        elements.insert(connector.element_ref());
    }
    elements
}
