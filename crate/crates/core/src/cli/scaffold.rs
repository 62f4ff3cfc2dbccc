//! Code frames generated from an architecture description, one Rust file
//! per component, annotated with comment pragmas so that a fresh scaffold
//! passes the conformance checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::annotations::DEFAULT_SIGIL;
use crate::arch_model::{ArchitectureModel, Component, Connector, Multiplicity};

const RUST_KEYWORDS: &[&str] = &[
    "as", "async", "await", "break", "const", "continue", "dyn", "else", "enum", "extern", "false", "fn", "for", "if",
    "impl", "in", "let", "loop", "match", "mod", "move", "mut", "pub", "ref", "return", "static", "struct", "trait",
    "true", "type", "unsafe", "use", "where", "while", "abstract", "become", "box", "do", "final", "gen", "macro",
    "override", "priv", "try", "typeof", "unsized", "virtual", "yield",
];

fn rust_ident(name: &str) -> String {
    match name {
        "self" | "Self" | "super" | "crate" | "_" => format!("{name}_"),
        _ if RUST_KEYWORDS.contains(&name) => format!("r#{name}"),
        _ => name.to_owned(),
    }
}

fn field_type(type_name: &str, multiplicity: Multiplicity) -> String {
    let type_name = rust_ident(type_name);
    match (multiplicity.lower, multiplicity.upper) {
        (1, Some(1)) => format!("Box<{type_name}>"),
        (0, Some(1)) => format!("Option<Box<{type_name}>>"),
        _ => format!("Vec<{type_name}>"),
    }
}

fn connects_pragma(sigil: &str, connector: &Connector, explicit: Option<(&str, &str)>) -> String {
    let mut args = Vec::new();
    let (left, right) = match explicit {
        Some((left_component, _)) => {
            args.push(format!("leftcomponent=\"{left_component}\""));
            (
                strip_first(&connector.left.to_string()),
                strip_first(&connector.right.to_string()),
            )
        }
        None => (connector.left.to_string(), connector.right.to_string()),
    };
    args.push(format!("left=\"{left}\""));
    if let Some((_, right_component)) = explicit {
        args.push(format!("rightcomponent=\"{right_component}\""));
    }
    args.push(format!("right=\"{right}\""));
    args.push(format!("type={}", connector.direction.as_str()));
    format!(
        "    //{sigil} Connects({}) @on method connect_{}",
        args.join(", "),
        connector.id
    )
}

fn strip_first(path: &str) -> String {
    path.split_once('.').map_or(path, |(_, rest)| rest).to_owned()
}

/// A connector written into a component's file, with the explicit
/// endpoint components for model-level connectors.
type Wiring<'a> = (&'a Connector, Option<(&'a str, &'a str)>);

fn component_file(sigil: &str, component: &Component, connectors: &[Wiring<'_>]) -> String {
    let name = rust_ident(&component.name);
    let mut out = String::new();
    let _ = writeln!(out, "// Code frame for component `{}`.", component.name);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "//{sigil} Component(\"{}\") @on type {}",
        component.name, component.name
    );
    if component.parts.is_empty() {
        let _ = writeln!(out, "pub struct {name} {{}}");
    } else {
        let _ = writeln!(out, "pub struct {name} {{");
    }
    for part in &component.parts {
        let _ = writeln!(out, "    //{sigil} Part(\"{}\") @on field {}", part.role, part.role);
        let _ = writeln!(
            out,
            "    pub {}: {},",
            rust_ident(&part.role),
            field_type(&part.type_component, part.multiplicity)
        );
    }
    if !component.parts.is_empty() {
        let _ = writeln!(out, "}}");
    }

    if component.ports.is_empty() && connectors.is_empty() {
        return out;
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "impl {name} {{");
    let mut first = true;
    for port in &component.ports {
        if !first {
            let _ = writeln!(out);
        }
        first = false;
        let _ = writeln!(out, "    //{sigil} Port(\"{}\") @on method {}", port.name, port.name);
        let _ = writeln!(out, "    pub fn {}(&self) {{}}", rust_ident(&port.name));
    }
    for (connector, explicit) in connectors {
        if !first {
            let _ = writeln!(out);
        }
        first = false;
        let _ = writeln!(out, "{}", connects_pragma(sigil, connector, *explicit));
        let _ = writeln!(out, "    pub fn connect_{}(&mut self) {{}}", connector.id);
    }
    let _ = writeln!(out, "}}");
    out
}

/// File name and contents for every component, in name order.
pub fn scaffold(model: &ArchitectureModel) -> BTreeMap<String, String> {
    scaffold_with_sigil(model, DEFAULT_SIGIL)
}

pub fn scaffold_with_sigil(model: &ArchitectureModel, sigil: &str) -> BTreeMap<String, String> {
    let mut by_component: BTreeMap<&str, Vec<Wiring<'_>>> = BTreeMap::new();
    for connector in &model.connectors {
        match connector.context.as_deref() {
            Some(context) => by_component.entry(context).or_default().push((connector, None)),
            None => {
                // model-level: both endpoints start with a component name
                let left = connector.left.first();
                let right = connector.right.first();
                by_component
                    .entry(left)
                    .or_default()
                    .push((connector, Some((left, right))));
            }
        }
    }
    model
        .components
        .iter()
        .map(|component| {
            let connectors = by_component.get(component.name.as_str()).map_or(&[][..], Vec::as_slice);
            (
                format!("{}.rs", component.name),
                component_file(sigil, component, connectors),
            )
        })
        .collect()
}
