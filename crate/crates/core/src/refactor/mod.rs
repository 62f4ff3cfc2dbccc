//! Architectural refactoring over the architecture model, composed from
//! basic steps into plans. Source code is never rewritten: each step comes
//! with the annotations that refer to the elements it touched, so the
//! developer knows where the code has to follow.

mod ops;
mod plan;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::annotations::{AnnotationInstance, AnnotationKind, CodeModel, Side as EndpointSide};
use crate::arch_model::{trace_endpoint, ArchitectureModel, CanonicalConnector, Direction, ElementRef, EndpointPath};
use crate::conformance::wired_connection;

pub use ops::apply_op;
pub use plan::{parse_plan, PlanParseError};

/// Half of a split component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A = 0,
    B = 1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefactoringOp {
    AddPort {
        component: String,
        port: String,
    },
    RemovePort {
        component: String,
        port: String,
    },
    AddConnector {
        id: String,
        /// `None` declares the connector at model level.
        context: Option<String>,
        left: EndpointPath,
        right: EndpointPath,
        direction: Direction,
    },
    RemoveConnector {
        id: String,
    },
    SplitComponent {
        target: String,
        name_a: String,
        name_b: String,
        /// Every part role and port name of `target`, assigned to a half.
        partition: BTreeMap<String, Side>,
    },
    RenameElement {
        element: ElementRef,
        new_name: String,
    },
    MovePart {
        role: String,
        from: String,
        to: String,
    },
}

impl fmt::Display for RefactoringOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefactoringOp::AddPort { component, port } => write!(f, "AddPort({component}, {port})"),
            RefactoringOp::RemovePort { component, port } => {
                write!(f, "RemovePort({component}, {port})")
            }
            RefactoringOp::AddConnector {
                id,
                context,
                left,
                right,
                direction,
            } => write!(
                f,
                "AddConnector({id}, {}, {left}, {right}, {direction})",
                context.as_deref().unwrap_or("*"),
                direction = direction.as_str()
            ),
            RefactoringOp::RemoveConnector { id } => write!(f, "RemoveConnector({id})"),
            RefactoringOp::SplitComponent {
                target,
                name_a,
                name_b,
                partition,
            } => {
                let entries: Vec<String> = partition
                    .iter()
                    .map(|(k, side)| format!("{k}: {}", if *side == Side::A { "A" } else { "B" }))
                    .collect();
                write!(
                    f,
                    "SplitComponent({target}, {name_a}, {name_b}, {{{}}})",
                    entries.join(", ")
                )
            }
            RefactoringOp::RenameElement { element, new_name } => {
                write!(f, "RenameElement({element}, {new_name})")
            }
            RefactoringOp::MovePart { role, from, to } => write!(f, "MovePart({role}, {from}, {to})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefactoringPlan {
    pub name: String,
    pub ops: Vec<RefactoringOp>,
}

impl fmt::Display for RefactoringPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "plan {}", self.name)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefactorError {
    #[error("{op}: precondition failed{}: {reason}", .element.as_ref().map(|e| format!(" on `{e}`")).unwrap_or_default())]
    PreconditionFailed {
        op: String,
        element: Option<ElementRef>,
        reason: String,
    },
    #[error("plan failed at step {step}: {source}")]
    PlanFailed {
        /// 1-based.
        step: usize,
        source: Box<RefactorError>,
    },
    #[error("`{0}` is not a declared connector")]
    UnknownConnector(ElementRef),
}

impl RefactorError {
    pub fn code(&self) -> &'static str {
        match self {
            RefactorError::PreconditionFailed { .. } => "PRECONDITION_FAILED",
            RefactorError::PlanFailed { .. } => "PLAN_FAILED",
            RefactorError::UnknownConnector(_) => "UNKNOWN_CONNECTOR",
        }
    }
}

/// Whether `instance` refers to `element`: by value, by enclosing
/// component, through an endpoint path, by an explicit component attribute,
/// or (for connectors) by wiring the same connection.
pub fn references(arch: &ArchitectureModel, instance: &AnnotationInstance, element: &ElementRef) -> bool {
    if instance.named_elements().contains(element) {
        return true;
    }
    match element {
        ElementRef::Component(name) if instance.enclosing_components.contains(name) => return true,
        ElementRef::Connector { id, .. } if instance.kind.is_connection() => {
            let declared = arch.connector(id).and_then(|c| CanonicalConnector::of(arch, c).ok());
            return match (declared, wired_connection(arch, instance)) {
                (Some(declared), Ok(wired)) => wired.matches(&declared),
                _ => false,
            };
        }
        _ => {}
    }
    instance.kind.is_connection()
        && [EndpointSide::Left, EndpointSide::Right].into_iter().any(|side| {
            let (Some(context), Some(path)) = (instance.endpoint_context(side), instance.endpoint_path(side)) else {
                return false;
            };
            trace_endpoint(arch, Some(context), &path).is_ok_and(|trace| trace.contains(element))
        })
}

/// Annotation lookup: every instance that refers to `element`, in location order.
pub fn lookup<'a>(arch: &ArchitectureModel, code: &'a CodeModel, element: &ElementRef) -> Vec<&'a AnnotationInstance> {
    code.instances()
        .iter()
        .filter(|i| references(arch, i, element))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConnectorUsages {
    pub connects: Vec<AnnotationInstance>,
    pub disconnects: Vec<AnnotationInstance>,
    /// Classes or fields annotated as representing the connection itself.
    pub stores: Vec<AnnotationInstance>,
}

pub fn connector_usages(
    arch: &ArchitectureModel,
    code: &CodeModel,
    connector: &ElementRef,
) -> Result<ConnectorUsages, RefactorError> {
    let unknown = || RefactorError::UnknownConnector(connector.clone());
    let ElementRef::Connector { id, .. } = connector else {
        return Err(unknown());
    };
    let declared = arch
        .connector(id)
        .filter(|c| &c.element_ref() == connector)
        .ok_or_else(unknown)?;
    let canonical = CanonicalConnector::of(arch, declared).map_err(|_| unknown())?;
    let mut usages = ConnectorUsages::default();
    for instance in code.instances().iter().filter(|i| i.kind.is_connection()) {
        if !wired_connection(arch, instance).is_ok_and(|w| w.matches(&canonical)) {
            continue;
        }
        let group = match instance.kind {
            AnnotationKind::Connects => &mut usages.connects,
            AnnotationKind::Disconnects => &mut usages.disconnects,
            _ => &mut usages.stores,
        };
        group.push(instance.clone());
    }
    Ok(usages)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TouchedElement {
    pub element: ElementRef,
    pub instances: Vec<AnnotationInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepImpact {
    /// 1-based position in the plan.
    pub step: usize,
    pub op: String,
    pub touched: Vec<TouchedElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImpactReport {
    pub plan: String,
    pub steps: Vec<StepImpact>,
}

impl ImpactReport {
    /// Distinct annotation sites across all steps.
    pub fn instance_count(&self) -> usize {
        let mut all: Vec<&AnnotationInstance> = self
            .steps
            .iter()
            .flat_map(|s| s.touched.iter().flat_map(|t| t.instances.iter()))
            .collect();
        all.sort();
        all.dedup();
        all.len()
    }
}

/// Applies every step in order. Any failure discards the whole plan.
///
/// References are looked up in the model as it was before each step, so
/// removed elements still find their annotations; elements a step creates
/// are looked up in the model after it.
pub fn apply_plan(
    model: &ArchitectureModel,
    plan: &RefactoringPlan,
    code: &CodeModel,
) -> Result<(ArchitectureModel, ImpactReport), RefactorError> {
    let mut current = model.clone();
    let mut steps = Vec::with_capacity(plan.ops.len());
    for (idx, op) in plan.ops.iter().enumerate() {
        let (next, touched) = apply_op(&current, op).map_err(|source| RefactorError::PlanFailed {
            step: idx + 1,
            source: Box::new(source),
        })?;
        let touched = touched
            .into_iter()
            .map(|element| {
                let arch = if current.contains(&element) { &current } else { &next };
                let instances = lookup(arch, code, &element).into_iter().cloned().collect();
                TouchedElement { element, instances }
            })
            .collect();
        steps.push(StepImpact {
            step: idx + 1,
            op: op.to_string(),
            touched,
        });
        current = next;
    }
    Ok((
        current,
        ImpactReport {
            plan: plan.name.clone(),
            steps,
        },
    ))
}

#[cfg(test)]
mod tests;
