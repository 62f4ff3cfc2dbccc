use std::collections::{BTreeMap, BTreeSet};

use super::{RefactorError, RefactoringOp, Side};
use crate::arch_model::{
    is_identifier, trace_endpoint, validate_model, ArchitectureModel, CanonicalConnector, Connector, ElementRef, Part,
};

type Applied = Result<(ArchitectureModel, BTreeSet<ElementRef>), RefactorError>;

/// Applies one operation. On failure the input is untouched and the error
/// names the violated precondition.
pub fn apply_op(model: &ArchitectureModel, op: &RefactoringOp) -> Applied {
    let fail = |element: Option<ElementRef>, reason: String| {
        Err(RefactorError::PreconditionFailed {
            op: op.to_string(),
            element,
            reason,
        })
    };
    let mut next = model.clone();
    let mut touched = BTreeSet::new();

    match op {
        RefactoringOp::AddPort { component, port } => {
            let target = ElementRef::port(component.as_str(), port.as_str());
            let Some(c) = next.component_mut(component) else {
                return fail(
                    Some(ElementRef::component(component.as_str())),
                    "no such component".into(),
                );
            };
            if !is_identifier(port) {
                return fail(Some(target), "port name is not an identifier".into());
            }
            if !c.is_fresh_member(port) {
                return fail(
                    Some(target),
                    format!("`{component}` already has a part or port `{port}`"),
                );
            }
            c.ports.push(crate::arch_model::Port::new(port.as_str()));
            touched.insert(target);
        }
        RefactoringOp::RemovePort { component, port } => {
            let target = ElementRef::port(component.as_str(), port.as_str());
            if !model.contains(&target) {
                return fail(Some(target), "no such port".into());
            }
            if let Some(connector) = connectors_through(model, &target).first() {
                return fail(Some(target), format!("connector `{connector}` is attached to it"));
            }
            let c = next.component_mut(component).expect("checked above");
            c.ports.retain(|p| &p.name != port);
            touched.insert(target);
        }
        RefactoringOp::AddConnector {
            id,
            context,
            left,
            right,
            direction,
        } => {
            let target = ElementRef::connector(context.as_deref(), id.as_str());
            if !is_identifier(id) {
                return fail(Some(target), "connector id is not an identifier".into());
            }
            if let Some(existing) = model.connector(id) {
                return fail(Some(existing.element_ref()), format!("connector id `{id}` is taken"));
            }
            if let Some(ctx) = context {
                if model.component(ctx).is_none() {
                    return fail(Some(ElementRef::component(ctx.as_str())), "no such component".into());
                }
            }
            let connector = Connector::new(id.as_str(), context.as_deref(), left.clone(), right.clone(), *direction);
            let canonical = match CanonicalConnector::of(model, &connector) {
                Ok(c) => c,
                Err(err) => return fail(Some(target), err.to_string()),
            };
            for existing in &model.connectors {
                if CanonicalConnector::of(model, existing).is_ok_and(|c| c == canonical) {
                    return fail(
                        Some(existing.element_ref()),
                        format!("`{}` already declares this connection", existing.id),
                    );
                }
            }
            next.connectors.push(connector);
            touched.insert(target);
        }
        RefactoringOp::RemoveConnector { id } => {
            let Some(existing) = model.connector(id) else {
                return fail(None, format!("no connector `{id}`"));
            };
            touched.insert(existing.element_ref());
            next.connectors.retain(|c| &c.id != id);
        }
        RefactoringOp::SplitComponent {
            target,
            name_a,
            name_b,
            partition,
        } => {
            if let Err((element, reason)) = split(&mut next, &mut touched, target, name_a, name_b, partition) {
                return fail(element, reason);
            }
        }
        RefactoringOp::RenameElement { element, new_name } => {
            if let Err((element, reason)) = rename(&mut next, &mut touched, element, new_name) {
                return fail(element, reason);
            }
        }
        RefactoringOp::MovePart { role, from, to } => {
            let source = ElementRef::part(from.as_str(), role.as_str());
            let dest = ElementRef::part(to.as_str(), role.as_str());
            if !model.contains(&source) {
                return fail(Some(source), "no such part".into());
            }
            match model.component(to) {
                None => return fail(Some(ElementRef::component(to.as_str())), "no such component".into()),
                Some(c) if !c.is_fresh_member(role) => {
                    return fail(Some(dest), format!("`{to}` already has a part or port `{role}`"))
                }
                Some(_) => {}
            }
            if let Some(connector) = connectors_through(model, &source).first() {
                return fail(Some(source), format!("connector `{connector}` routes through it"));
            }
            let from_c = next.component_mut(from).expect("checked above");
            let idx = from_c
                .parts
                .iter()
                .position(|p| &p.role == role)
                .expect("checked above");
            let part = from_c.parts.remove(idx);
            next.component_mut(to).expect("checked above").parts.push(part);
            touched.extend([source, dest]);
        }
    }

    next.canonicalize();
    if let Some(finding) = validate_model(&next).into_iter().next() {
        return fail(
            finding.element,
            format!("the result would be invalid: {}", finding.message),
        );
    }
    Ok((next, touched))
}

/// Ids of connectors whose endpoint traces pass through `element`.
fn connectors_through(model: &ArchitectureModel, element: &ElementRef) -> Vec<String> {
    model
        .connectors
        .iter()
        .filter(|c| {
            [&c.left, &c.right]
                .into_iter()
                .any(|path| trace_endpoint(model, c.context.as_deref(), path).is_ok_and(|t| t.contains(element)))
        })
        .map(|c| c.id.clone())
        .collect()
}

type OpFailure = (Option<ElementRef>, String);

/// Rewrites endpoint paths segment by segment. `rewrite` sees the full
/// trace of the path (resolved in `model`) and a segment index, and returns
/// a replacement segment when one is due.
fn rewrite_paths(
    model: &ArchitectureModel,
    connectors: &mut [Connector],
    mut rewrite: impl FnMut(&Connector, &[ElementRef], usize) -> Result<Option<String>, OpFailure>,
) -> Result<(), OpFailure> {
    for connector in connectors.iter_mut() {
        let snapshot = connector.clone();
        for path in [&mut connector.left, &mut connector.right] {
            let trace = trace_endpoint(model, snapshot.context.as_deref(), path)
                .map_err(|e| (Some(snapshot.element_ref()), e.to_string()))?;
            let mut rewritten = path.clone();
            for idx in 0..trace.len() {
                if let Some(segment) = rewrite(&snapshot, &trace, idx)? {
                    rewritten = rewritten.with_segment(idx, &segment);
                }
            }
            *path = rewritten;
        }
    }
    Ok(())
}

fn rename(
    model: &mut ArchitectureModel,
    touched: &mut BTreeSet<ElementRef>,
    element: &ElementRef,
    new_name: &str,
) -> Result<(), OpFailure> {
    if !is_identifier(new_name) {
        return Err((Some(element.clone()), format!("`{new_name}` is not an identifier")));
    }
    if !model.contains(element) {
        return Err((Some(element.clone()), "no such element".into()));
    }
    let before = model.clone();
    match element {
        ElementRef::Component(old) => {
            if model.component(new_name).is_some() {
                return Err((Some(element.clone()), format!("component `{new_name}` already exists")));
            }
            let component = before.component(old).expect("checked above");
            touched.insert(element.clone());
            touched.insert(ElementRef::component(new_name));
            for part in &component.parts {
                touched.insert(ElementRef::part(old.as_str(), part.role.as_str()));
                touched.insert(ElementRef::part(new_name, part.role.as_str()));
            }
            for port in &component.ports {
                touched.insert(ElementRef::port(old.as_str(), port.name.as_str()));
                touched.insert(ElementRef::port(new_name, port.name.as_str()));
            }
            for c in &mut model.components {
                if &c.name == old {
                    c.name = new_name.to_owned();
                }
                for part in &mut c.parts {
                    if &part.type_component == old {
                        part.type_component = new_name.to_owned();
                    }
                }
            }
            for connector in &mut model.connectors {
                if connector.context.as_deref() == Some(old.as_str()) {
                    touched.insert(connector.element_ref());
                    connector.context = Some(new_name.to_owned());
                    touched.insert(connector.element_ref());
                }
                if connector.context.is_none() {
                    for path in [&mut connector.left, &mut connector.right] {
                        if path.first() == old {
                            *path = path.with_segment(0, new_name);
                        }
                    }
                }
            }
        }
        ElementRef::Part { component, role: old } | ElementRef::Port { component, port: old } => {
            let c = model.component_mut(component).expect("checked above");
            if !c.is_fresh_member(new_name) {
                return Err((
                    Some(element.clone()),
                    format!("`{component}` already has a part or port `{new_name}`"),
                ));
            }
            let renamed = if matches!(element, ElementRef::Part { .. }) {
                c.parts.iter_mut().find(|p| &p.role == old).expect("checked above").role = new_name.to_owned();
                ElementRef::part(component.as_str(), new_name)
            } else {
                c.ports.iter_mut().find(|p| &p.name == old).expect("checked above").name = new_name.to_owned();
                ElementRef::port(component.as_str(), new_name)
            };
            rewrite_paths(&before, &mut model.connectors, |_, trace, idx| {
                Ok((&trace[idx] == element).then(|| new_name.to_owned()))
            })?;
            touched.extend([element.clone(), renamed]);
        }
        ElementRef::Connector { context, id } => {
            if model.connector(new_name).is_some() {
                return Err((Some(element.clone()), format!("connector id `{new_name}` is taken")));
            }
            let connector = model
                .connectors
                .iter_mut()
                .find(|c| &c.id == id)
                .expect("checked above");
            connector.id = new_name.to_owned();
            touched.extend([element.clone(), ElementRef::connector(context.as_deref(), new_name)]);
        }
    }
    Ok(())
}

fn split(
    model: &mut ArchitectureModel,
    touched: &mut BTreeSet<ElementRef>,
    target: &str,
    name_a: &str,
    name_b: &str,
    partition: &BTreeMap<String, Side>,
) -> Result<(), OpFailure> {
    let target_ref = ElementRef::component(target);
    let Some(original) = model.component(target).cloned() else {
        return Err((Some(target_ref), "no such component".into()));
    };
    for name in [name_a, name_b] {
        if !is_identifier(name) {
            return Err((Some(target_ref), format!("`{name}` is not an identifier")));
        }
        if model.component(name).is_some() {
            return Err((Some(ElementRef::component(name)), "component already exists".into()));
        }
    }
    if name_a == name_b {
        return Err((Some(target_ref), "the two new components need different names".into()));
    }
    let members: BTreeSet<&str> = original
        .parts
        .iter()
        .map(|p| p.role.as_str())
        .chain(original.ports.iter().map(|p| p.name.as_str()))
        .collect();
    let keys: BTreeSet<&str> = partition.keys().map(String::as_str).collect();
    if let Some(missing) = members.difference(&keys).next() {
        return Err((Some(target_ref), format!("the partition does not place `{missing}`")));
    }
    if let Some(extra) = keys.difference(&members).next() {
        return Err((Some(target_ref), format!("`{target}` has no part or port `{extra}`")));
    }
    let new_name = |side: Side| if side == Side::A { name_a } else { name_b };

    // parts typed by the target are split into one part per half
    let uses: Vec<(String, Part)> = model
        .components
        .iter()
        .flat_map(|c| {
            c.parts
                .iter()
                .filter(|p| p.type_component == target)
                .map(|p| (c.name.clone(), p.clone()))
        })
        .collect();
    if uses.len() > 1 {
        return Err((
            Some(target_ref),
            format!(
                "`{target}` is the type of {} parts; only a single use can be split",
                uses.len()
            ),
        ));
    }
    let owner = uses.first().cloned();
    let split_role = |role: &str, side: Side| format!("{role}_{}", new_name(side));

    let before = model.clone();
    let side_of = |element: &ElementRef| -> Option<Side> {
        match element {
            ElementRef::Part { component, role } if component == target => partition.get(role).copied(),
            ElementRef::Port { component, port } if component == target => partition.get(port).copied(),
            _ => None,
        }
    };

    // re-home connectors declared inside the target, or lift them out when they cross halves
    let mut moved = Vec::new();
    let mut kept = Vec::new();
    for connector in std::mem::take(&mut model.connectors) {
        if connector.context.as_deref() != Some(target) {
            kept.push(connector);
            continue;
        }
        let left = partition[connector.left.first()];
        let right = partition[connector.right.first()];
        touched.insert(connector.element_ref());
        let mut rehomed = connector.clone();
        if left == right {
            rehomed.context = Some(new_name(left).to_owned());
        } else {
            match &owner {
                Some((owner_name, part)) => {
                    rehomed.context = Some(owner_name.clone());
                    rehomed.left = connector.left.prefixed(&split_role(&part.role, left));
                    rehomed.right = connector.right.prefixed(&split_role(&part.role, right));
                }
                None => {
                    rehomed.context = None;
                    rehomed.left = connector.left.prefixed(new_name(left));
                    rehomed.right = connector.right.prefixed(new_name(right));
                }
            }
        }
        touched.insert(rehomed.element_ref());
        moved.push(rehomed);
    }

    // every other path that passes through the target now goes through a half
    rewrite_paths(&before, &mut kept, |connector, trace, idx| {
        let Some(side) = trace.get(idx + 1).and_then(side_of) else {
            if idx + 1 == trace.len() {
                if let Some((owner_name, part)) = &owner {
                    if trace[idx] == ElementRef::part(owner_name.as_str(), part.role.as_str()) {
                        return Err((
                            Some(connector.element_ref()),
                            format!("connector `{}` ends at the part being split", connector.id),
                        ));
                    }
                }
            }
            return Ok(None);
        };
        Ok(Some(match &trace[idx] {
            ElementRef::Component(_) => new_name(side).to_owned(),
            ElementRef::Part { role, .. } => split_role(role, side),
            _ => unreachable!("only components and parts precede a member"),
        }))
    })?;
    kept.extend(moved);
    model.connectors = kept;

    let mut halves = [
        crate::arch_model::Component::new(name_a),
        crate::arch_model::Component::new(name_b),
    ];
    for half in &mut halves {
        half.top_level = original.top_level;
    }
    for part in &original.parts {
        let side = partition[&part.role];
        halves[side as usize].parts.push(part.clone());
        touched.insert(ElementRef::part(target, part.role.as_str()));
        touched.insert(ElementRef::part(new_name(side), part.role.as_str()));
    }
    for port in &original.ports {
        let side = partition[&port.name];
        halves[side as usize].ports.push(port.clone());
        touched.insert(ElementRef::port(target, port.name.as_str()));
        touched.insert(ElementRef::port(new_name(side), port.name.as_str()));
    }
    model.components.retain(|c| c.name != target);
    model.components.extend(halves);
    touched.insert(target_ref);
    touched.insert(ElementRef::component(name_a));
    touched.insert(ElementRef::component(name_b));

    if let Some((owner_name, part)) = owner {
        let c = model.component_mut(&owner_name).expect("owner exists");
        c.parts.retain(|p| p.role != part.role);
        touched.insert(ElementRef::part(owner_name.as_str(), part.role.as_str()));
        for side in [Side::A, Side::B] {
            let role = split_role(&part.role, side);
            if !c.is_fresh_member(&role) {
                return Err((
                    Some(ElementRef::part(owner_name.as_str(), role.as_str())),
                    format!("`{owner_name}` already has a member `{role}`"),
                ));
            }
            c.parts.push(Part {
                role: role.clone(),
                type_component: new_name(side).to_owned(),
                multiplicity: part.multiplicity,
            });
            touched.insert(ElementRef::part(owner_name.as_str(), role.as_str()));
        }
    }
    Ok(())
}
