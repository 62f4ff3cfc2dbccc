use super::{AnnotationInstance, AnnotationKind, TargetKind};
use crate::diagnostics::{CheckId, Finding};

/// Declaration kinds each annotation may be attached to.
pub fn permitted_targets(kind: AnnotationKind) -> &'static [TargetKind] {
    use TargetKind::*;
    match kind {
        AnnotationKind::Component => &[Type],
        AnnotationKind::Part => &[Field],
        AnnotationKind::Port => &[Method, Constructor, Type],
        AnnotationKind::AddPart
        | AnnotationKind::RemovePart
        | AnnotationKind::Connects
        | AnnotationKind::Disconnects => &[Method, Constructor],
        AnnotationKind::Connector => &[Type, Field, Local],
    }
}

pub fn validate_targets(instance: &AnnotationInstance) -> Vec<Finding> {
    let permitted = permitted_targets(instance.kind);
    if permitted.contains(&instance.target) {
        return Vec::new();
    }
    let allowed: Vec<&str> = permitted.iter().map(|t| t.keyword()).collect();
    vec![Finding::new(
        CheckId::TargetRuleViolation,
        format!(
            "@{} may not annotate a {} (allowed: {})",
            instance.kind,
            instance.target,
            allowed.join(", ")
        ),
    )
    .at(instance.location.clone())]
}
