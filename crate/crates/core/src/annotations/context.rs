use std::collections::BTreeMap;

use super::{AnnotationKind, ContextHint, FileExtraction, TargetKind};

/// Fills `enclosing_components` for every non-COMPONENT instance of one file.
///
/// Lexical hints (attribute front-end) take the components of the nearest
/// enclosing annotated type, counting the annotated declaration itself when
/// it is a type. Sequential hints (pragmas) take the nearest preceding
/// type-targeted COMPONENT pragma. Explicit `@in` hints are used verbatim.
pub fn resolve_context(file: &mut FileExtraction) {
    let mut components_by_scope: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (instance, hint) in file.instances.iter().zip(&file.hints) {
        if let (AnnotationKind::Component, TargetKind::Type, ContextHint::Lexical { opens: Some(id), .. }) =
            (instance.kind, instance.target, hint)
        {
            let names = components_by_scope.entry(*id).or_default();
            for value in &instance.values {
                if !names.contains(value) {
                    names.push(value.clone());
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..file.instances.len()).collect();
    order.sort_by(|&a, &b| file.instances[a].location.cmp(&file.instances[b].location));

    let mut preceding: Vec<String> = Vec::new();
    for idx in order {
        let instance = &mut file.instances[idx];
        if instance.kind == AnnotationKind::Component {
            instance.enclosing_components.clear();
            if instance.target == TargetKind::Type && file.hints[idx] == ContextHint::Sequential {
                preceding = instance.values.clone();
            }
            continue;
        }
        instance.enclosing_components = match &file.hints[idx] {
            ContextHint::Explicit(names) => names.clone(),
            ContextHint::Sequential => preceding.clone(),
            ContextHint::Lexical { scopes, opens } => opens
                .iter()
                .chain(scopes)
                .find_map(|id| components_by_scope.get(id))
                .cloned()
                .unwrap_or_default(),
        };
    }
}
