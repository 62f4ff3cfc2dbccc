//! Shared helpers for the integration suites: fixture paths, an in-process
//! CLI runner, seeded generators and brute-force oracles that recompute the
//! checks without going through the library's own resolution code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use archlint::annotations::{
    extract_attributes, extract_pragmas, resolve_context, AnnotationInstance, AnnotationKind, CodeModel, DEFAULT_SIGIL,
};
use archlint::arch_model::{
    validate_model, ArchitectureModel, Component, Connector, Direction, ElementRef, EndpointPath, Multiplicity, Part,
};
use archlint::refactor::{RefactoringOp, Side};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(relative)
}

pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("archlint").chain(args.iter().copied());
    let status = archlint::cli::run(argv, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).expect("utf-8 stdout"),
        String::from_utf8(err).expect("utf-8 stderr"),
    )
}

/// Builds a code model from in-memory files the same way a scan would.
pub fn code_from(files: &[(String, String)]) -> CodeModel {
    let mut instances = Vec::new();
    let mut findings = Vec::new();
    for (path, text) in files {
        let mut out = if path.ends_with(".java") {
            extract_attributes(text, path)
        } else {
            extract_pragmas(text, path, DEFAULT_SIGIL)
        };
        resolve_context(&mut out);
        instances.extend(out.instances);
        findings.extend(out.findings);
    }
    CodeModel::from_instances(instances, findings)
}

pub fn write_tree(root: &Path, files: &[(String, String)]) {
    for (path, text) in files {
        let full = root.join(path);
        std::fs::create_dir_all(full.parent().unwrap()).unwrap();
        std::fs::write(full, text).unwrap();
    }
}

// ---------------------------------------------------------------- generators

const DIRECTIONS: [Direction; 3] = [Direction::Left, Direction::Right, Direction::Bidir];

fn random_multiplicity(rng: &mut ChaCha8Rng) -> Multiplicity {
    match rng.gen_range(0..4) {
        0 => Multiplicity::ONE,
        1 => Multiplicity::MANY,
        2 => Multiplicity {
            lower: 0,
            upper: Some(1),
        },
        _ => Multiplicity { lower: 1, upper: None },
    }
}

/// Endpoint paths usable inside `component`: its ports, its parts, and the
/// ports of its parts' types.
pub fn local_endpoints(model: &ArchitectureModel, component: &Component) -> Vec<String> {
    let mut out: Vec<String> = component.ports.iter().map(|p| p.name.clone()).collect();
    for part in &component.parts {
        out.push(part.role.clone());
        if let Some(t) = model.component(&part.type_component) {
            out.extend(t.ports.iter().map(|p| format!("{}.{}", part.role, p.name)));
        }
    }
    out
}

/// A well-formed random architecture with up to `max_components`
/// components. Part types always point to higher-numbered components, so
/// containment is acyclic.
pub fn random_arch(rng: &mut ChaCha8Rng, max_components: usize) -> ArchitectureModel {
    let n = rng.gen_range(1..=max_components);
    let mut components = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = Component::new(format!("C{i}"));
        for p in 0..rng.gen_range(0..=3) {
            c = c.with_port(format!("p{p}"));
        }
        if i + 1 < n {
            for r in 0..rng.gen_range(0..=3) {
                let t = rng.gen_range(i + 1..n);
                c = c
                    .with_part(Part::new(format!("r{r}"), format!("C{t}")).with_multiplicity(random_multiplicity(rng)));
            }
        }
        c.top_level = i == 0 || rng.gen_bool(0.3);
        components.push(c);
    }
    let mut model = ArchitectureModel {
        components,
        connectors: Vec::new(),
    };

    let mut next_id = 0;
    let mut try_add =
        |model: &mut ArchitectureModel, context: Option<&str>, a: String, b: String, rng: &mut ChaCha8Rng| {
            if a == b {
                return;
            }
            let d = *DIRECTIONS.choose(rng).unwrap();
            model.connectors.push(Connector::new(
                format!("k{next_id}"),
                context,
                a.parse().unwrap(),
                b.parse().unwrap(),
                d,
            ));
            if validate_model(model).is_empty() {
                next_id += 1;
            } else {
                model.connectors.pop();
            }
        };

    for i in 0..n {
        let component = model.components[i].clone();
        let endpoints = local_endpoints(&model, &component);
        if endpoints.len() < 2 {
            continue;
        }
        for _ in 0..rng.gen_range(0..=3) {
            let a = endpoints.choose(rng).unwrap().clone();
            let b = endpoints.choose(rng).unwrap().clone();
            try_add(&mut model, Some(&component.name), a, b, rng);
        }
    }
    let tops: Vec<Component> = model.top_level_components().cloned().collect();
    if tops.len() >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            let x = tops.choose(rng).unwrap();
            let y = tops.choose(rng).unwrap();
            let (ex, ey) = (local_endpoints(&model, x), local_endpoints(&model, y));
            if let (Some(a), Some(b)) = (ex.choose(rng), ey.choose(rng)) {
                let (a, b) = (format!("{}.{a}", x.name), format!("{}.{b}", y.name));
                try_add(&mut model, None, a, b, rng);
            }
        }
    }
    model.canonicalize();
    assert!(validate_model(&model).is_empty());
    model
}

fn connects_line(kind: &str, left: &str, right: &str, direction: Option<Direction>, method: &str) -> String {
    let ty = direction.map_or(String::new(), |d| format!(", type={}", d.as_str()));
    format!("//@arch {kind}(left=\"{left}\", right=\"{right}\"{ty}) @on method {method}\n")
}

/// Random pragma-annotated sources for `arch`: mostly faithful, with some
/// omissions, unknown elements, wrong directions and unresolvable paths.
pub fn random_sources(rng: &mut ChaCha8Rng, arch: &ArchitectureModel) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut method = 0;
    let mut next_method = || {
        method += 1;
        format!("m{method}")
    };
    for component in &arch.components {
        if rng.gen_bool(0.1) {
            continue;
        }
        let name = &component.name;
        let mut text = format!("//@arch Component(\"{name}\") @on type {name}\n");
        for part in &component.parts {
            match rng.gen_range(0..10) {
                0 => {}
                1 => text += &format!("//@arch AddPart(\"{}\") @on method {}\n", part.role, next_method()),
                _ => text += &format!("//@arch Part(\"{}\") @on field {}\n", part.role, part.role),
            }
        }
        for port in &component.ports {
            if rng.gen_bool(0.85) {
                text += &format!("//@arch Port(\"{}\") @on method {}\n", port.name, port.name);
            }
        }
        if rng.gen_bool(0.1) {
            text += "//@arch Port(\"ghost\") @on method ghost\n";
        }
        if rng.gen_bool(0.05) {
            text += "//@arch Part(\"phantom\") @on field phantom\n";
        }
        for connector in arch.connectors.iter().filter(|c| c.context.as_deref() == Some(name)) {
            let (l, r) = (connector.left.to_string(), connector.right.to_string());
            for kind in ["Connects", "Disconnects"] {
                if rng.gen_bool(0.3) {
                    continue;
                }
                let direction = match rng.gen_range(0..10) {
                    0 | 1 => None,
                    2 => Some(*DIRECTIONS.choose(rng).unwrap()),
                    _ => Some(connector.direction),
                };
                let line = if rng.gen_bool(0.5) {
                    connects_line(kind, &l, &r, direction, &next_method())
                } else {
                    connects_line(kind, &r, &l, direction.map(Direction::flip), &next_method())
                };
                text += &line;
            }
        }
        let endpoints = local_endpoints(arch, component);
        if !endpoints.is_empty() && rng.gen_bool(0.3) {
            let a = endpoints.choose(rng).unwrap();
            let b = endpoints.choose(rng).unwrap();
            let d = *DIRECTIONS.choose(rng).unwrap();
            text += &connects_line("Connects", a, b, Some(d), &next_method());
        }
        if rng.gen_bool(0.1) {
            text += &connects_line("Connects", "nope", "nada.p0", None, &next_method());
        }
        if !endpoints.is_empty() && rng.gen_bool(0.1) {
            // explicit endpoint component, right or wrong
            let other = &arch.components.choose(rng).unwrap().name;
            let a = endpoints.choose(rng).unwrap();
            let b = endpoints.choose(rng).unwrap();
            text += &format!(
                "//@arch Connects(leftcomponent=\"{other}\", left=\"{a}\", right=\"{b}\") @on method {}\n",
                next_method()
            );
        }
        for connector in arch
            .connectors
            .iter()
            .filter(|c| c.context.is_none() && c.left.first() == name)
        {
            let strip = |p: &EndpointPath| p.segments()[1..].join(".");
            text += &format!(
                "//@arch Connects(leftcomponent=\"{}\", left=\"{}\", rightcomponent=\"{}\", right=\"{}\", type={}) @on method {}\n",
                connector.left.first(),
                strip(&connector.left),
                connector.right.first(),
                strip(&connector.right),
                connector.direction.as_str(),
                next_method()
            );
        }
        let package = format!("pkg{}", rng.gen_range(0..3));
        files.push((format!("{package}/{name}.rs"), text));
    }
    if rng.gen_bool(0.2) {
        files.push((
            "extra/Ghost.rs".into(),
            "//@arch Component(\"Ghost\") @on type Ghost\n".into(),
        ));
    }
    files
}

/// A random operation against `model`; roughly half are expected to fail.
pub fn random_op(rng: &mut ChaCha8Rng, model: &ArchitectureModel, fresh: &mut usize) -> RefactoringOp {
    *fresh += 1;
    let fresh_name = format!("n{fresh}");
    let component = model
        .components
        .choose(rng)
        .map_or_else(|| "Missing".to_owned(), |c| c.name.clone());
    let any_port = |rng: &mut ChaCha8Rng| {
        let c = model.components.choose(rng)?;
        let p = c.ports.choose(rng)?;
        Some((c.name.clone(), p.name.clone()))
    };
    match rng.gen_range(0..8) {
        0 => RefactoringOp::AddPort {
            component,
            port: if rng.gen_bool(0.8) { fresh_name } else { "p0".into() },
        },
        1 => {
            let (component, port) = any_port(rng).unwrap_or((component, "p0".into()));
            RefactoringOp::RemovePort { component, port }
        }
        2 | 3 => {
            let c = model.component(&component);
            let endpoints = c.map(|c| local_endpoints(model, c)).unwrap_or_default();
            let pick = |rng: &mut ChaCha8Rng| endpoints.choose(rng).cloned().unwrap_or_else(|| "x".into());
            RefactoringOp::AddConnector {
                id: if rng.gen_bool(0.9) {
                    format!("a{fresh}")
                } else {
                    "k0".into()
                },
                context: Some(component),
                left: pick(rng).parse().unwrap(),
                right: pick(rng).parse().unwrap(),
                direction: *DIRECTIONS.choose(rng).unwrap(),
            }
        }
        4 => RefactoringOp::RemoveConnector {
            id: model
                .connectors
                .choose(rng)
                .map_or_else(|| "k0".into(), |c| c.id.clone()),
        },
        5 => {
            let target = model.component(&component);
            let partition = target
                .map(|t| {
                    t.parts
                        .iter()
                        .map(|p| p.role.clone())
                        .chain(t.ports.iter().map(|p| p.name.clone()))
                        .map(|m| (m, if rng.gen_bool(0.5) { Side::A } else { Side::B }))
                        .collect()
                })
                .unwrap_or_default();
            RefactoringOp::SplitComponent {
                target: component,
                name_a: format!("A{fresh}"),
                name_b: format!("B{fresh}"),
                partition,
            }
        }
        6 => {
            let element = match rng.gen_range(0..3) {
                0 => ElementRef::component(component.as_str()),
                1 => any_port(rng).map_or(ElementRef::component("Missing"), |(c, p)| ElementRef::port(c, p)),
                _ => model
                    .connectors
                    .choose(rng)
                    .map_or(ElementRef::component("Missing"), Connector::element_ref),
            };
            let new_name = match element {
                ElementRef::Component(_) => format!("R{fresh}"),
                _ => format!("r{fresh}"),
            };
            RefactoringOp::RenameElement { element, new_name }
        }
        _ => {
            let from = model.components.choose(rng);
            let role = from
                .and_then(|c| c.parts.choose(rng))
                .map_or_else(|| "r0".into(), |p| p.role.clone());
            RefactoringOp::MovePart {
                role,
                from: from.map_or_else(|| "Missing".into(), |c| c.name.clone()),
                to: component,
            }
        }
    }
}

// ------------------------------------------------------------------- oracles

/// Walks `path` segment by segment. `None` when any step is missing.
pub fn oracle_trace(arch: &ArchitectureModel, context: Option<&str>, path: &str) -> Option<Vec<ElementRef>> {
    let segments: Vec<&str> = path.split('.').collect();
    let mut trace = Vec::new();
    let (mut owner, rest) = match context {
        Some(c) => (arch.components.iter().find(|x| x.name == c)?, &segments[..]),
        None => {
            let c = arch.components.iter().find(|x| x.name == segments[0])?;
            trace.push(ElementRef::component(c.name.as_str()));
            (c, &segments[1..])
        }
    };
    for (idx, segment) in rest.iter().enumerate() {
        let last = idx + 1 == rest.len();
        if let Some(part) = owner.parts.iter().find(|p| p.role == *segment) {
            trace.push(ElementRef::part(owner.name.as_str(), *segment));
            if !last {
                owner = arch.components.iter().find(|x| x.name == part.type_component)?;
            }
        } else if owner.ports.iter().any(|p| p.name == *segment) {
            if !last {
                return None;
            }
            trace.push(ElementRef::port(owner.name.as_str(), *segment));
        } else {
            return None;
        }
    }
    match trace.last()? {
        ElementRef::Component(_) => None,
        _ => Some(trace),
    }
}

pub fn oracle_resolve(arch: &ArchitectureModel, context: Option<&str>, path: &str) -> Option<ElementRef> {
    oracle_trace(arch, context, path)?.pop()
}

/// Endpoints ordered by path text, direction flipped when swapped.
pub fn oracle_triple(a: ElementRef, b: ElementRef, d: Direction) -> (String, String, Direction) {
    let (pa, pb) = (a.path(), b.path());
    if pb < pa {
        (pb, pa, d.flip())
    } else {
        (pa, pb, d)
    }
}

pub fn oracle_declared(arch: &ArchitectureModel) -> Vec<(ElementRef, (String, String, Direction))> {
    arch.connectors
        .iter()
        .filter_map(|c| {
            let ctx = c.context.as_deref();
            let l = oracle_resolve(arch, ctx, &c.left.to_string())?;
            let r = oracle_resolve(arch, ctx, &c.right.to_string())?;
            Some((c.element_ref(), oracle_triple(l, r, c.direction)))
        })
        .collect()
}

/// Elements (component, part, port) that no instance covers, by double loop.
pub fn oracle_missing(arch: &ArchitectureModel, code: &CodeModel) -> BTreeSet<ElementRef> {
    let mut elements = Vec::new();
    for c in &arch.components {
        elements.push(ElementRef::component(c.name.as_str()));
        elements.extend(
            c.parts
                .iter()
                .map(|p| ElementRef::part(c.name.as_str(), p.role.as_str())),
        );
        elements.extend(
            c.ports
                .iter()
                .map(|p| ElementRef::port(c.name.as_str(), p.name.as_str())),
        );
    }
    elements
        .into_iter()
        .filter(|e| {
            !code.instances().iter().any(|i| {
                let has = |v: &str| i.values.iter().any(|x| x == v);
                let inside = |c: &str| i.enclosing_components.iter().any(|x| x == c);
                match e {
                    ElementRef::Component(c) => i.kind == AnnotationKind::Component && has(c),
                    ElementRef::Part { component, role } => {
                        (i.kind == AnnotationKind::Part && has(role) && inside(component))
                            || (i.kind == AnnotationKind::AddPart
                                && has(role)
                                && match i.attrs.get("componentname") {
                                    Some(owner) => owner == component,
                                    None => inside(component),
                                })
                    }
                    ElementRef::Port { component, port } => {
                        i.kind == AnnotationKind::Port && has(port) && inside(component)
                    }
                    ElementRef::Connector { .. } => true,
                }
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Expected {
    Unresolved,
    Conflict,
    Undeclared,
}

fn oracle_side(
    arch: &ArchitectureModel,
    i: &AnnotationInstance,
    key: &str,
    path_key: &str,
) -> Result<ElementRef, Expected> {
    let path = &i.attrs[path_key];
    let enclosing = i.enclosing_components.first().map(String::as_str);
    let explicit = i.attrs.get(key).map(String::as_str);
    let Some(context) = explicit.or(enclosing) else {
        return Err(Expected::Unresolved);
    };
    if let Some(e) = oracle_resolve(arch, Some(context), path) {
        return Ok(e);
    }
    match (explicit, enclosing) {
        (Some(x), Some(enc)) if x != enc && oracle_resolve(arch, Some(enc), path).is_some() => Err(Expected::Conflict),
        _ => Err(Expected::Unresolved),
    }
}

/// Per connection instance, the findings check 3 should produce.
pub fn oracle_connection_findings(arch: &ArchitectureModel, code: &CodeModel) -> Vec<(String, Expected)> {
    let declared = oracle_declared(arch);
    let mut out = Vec::new();
    for i in code.instances().iter().filter(|i| i.kind.is_connection()) {
        let at = i.location.to_string();
        let left = oracle_side(arch, i, "leftcomponent", "left");
        let right = oracle_side(arch, i, "rightcomponent", "right");
        match (left, right) {
            (Ok(l), Ok(r)) => {
                let direction = i.attrs.get("type").map(|t| t.parse::<Direction>().unwrap());
                let (a, b, d) = oracle_triple(l, r, direction.unwrap_or(Direction::Bidir));
                let member = declared
                    .iter()
                    .any(|(_, (x, y, z))| *x == a && *y == b && (direction.is_none() || *z == d));
                if !member {
                    out.push((at, Expected::Undeclared));
                }
            }
            (l, r) => {
                out.extend(l.err().map(|e| (at.clone(), e)));
                out.extend(r.err().map(|e| (at.clone(), e)));
            }
        }
    }
    out.sort();
    out
}

/// Whether `instance` refers to `element`, recomputed from scratch.
pub fn oracle_references(arch: &ArchitectureModel, i: &AnnotationInstance, element: &ElementRef) -> bool {
    let has = |v: &str| i.values.iter().any(|x| x == v);
    let inside = |c: &str| i.enclosing_components.iter().any(|x| x == c);
    let named_component = |c: &str| {
        ["componentname", "leftcomponent", "rightcomponent"]
            .iter()
            .any(|k| i.attrs.get(*k).is_some_and(|v| v == c))
    };
    let owners: Vec<&str> = match i.attrs.get("componentname") {
        Some(c) => vec![c.as_str()],
        None => i.enclosing_components.iter().map(String::as_str).collect(),
    };
    let traced = || {
        i.kind.is_connection()
            && [("leftcomponent", "left"), ("rightcomponent", "right")]
                .iter()
                .any(|(k, p)| {
                    let ctx = i.attrs.get(*k).or(i.enclosing_components.first());
                    ctx.and_then(|c| oracle_trace(arch, Some(c), &i.attrs[*p]))
                        .is_some_and(|t| t.contains(element))
                })
    };
    match element {
        ElementRef::Component(c) => (i.kind == AnnotationKind::Component && has(c)) || inside(c) || named_component(c),
        ElementRef::Part { component, role } => {
            (i.kind == AnnotationKind::Part && has(role) && inside(component))
                || (matches!(i.kind, AnnotationKind::AddPart | AnnotationKind::RemovePart)
                    && has(role)
                    && owners.contains(&component.as_str()))
                || traced()
        }
        ElementRef::Port { component, port } => {
            (i.kind == AnnotationKind::Port && has(port) && inside(component)) || traced()
        }
        ElementRef::Connector { .. } => {
            if !i.kind.is_connection() {
                return false;
            }
            let Some((_, triple)) = oracle_declared(arch).into_iter().find(|(e, _)| e == element) else {
                return false;
            };
            let side = |k: &str, p: &str| {
                i.attrs
                    .get(k)
                    .or(i.enclosing_components.first())
                    .and_then(|c| oracle_resolve(arch, Some(c), &i.attrs[p]))
            };
            let (Some(l), Some(r)) = (side("leftcomponent", "left"), side("rightcomponent", "right")) else {
                return false;
            };
            let direction = i.attrs.get("type").map(|t| t.parse::<Direction>().unwrap());
            let (a, b, d) = oracle_triple(l, r, direction.unwrap_or(Direction::Bidir));
            a == triple.0 && b == triple.1 && (direction.is_none() || d == triple.2)
        }
    }
}
