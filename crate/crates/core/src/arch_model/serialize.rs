use std::fmt::Write;

use super::{ArchitectureModel, Connector, Multiplicity};

pub const HEADER: &str = "// archlint architecture description\n";

/// Renders a model in canonical form: components, members and connectors
/// in lexicographic order, default multiplicities omitted.
pub fn serialize_architecture(model: &ArchitectureModel) -> String {
    let model = model.clone().canonicalized();
    let mut out = String::from(HEADER);

    for component in &model.components {
        out.push('\n');
        if component.top_level {
            out.push_str("top ");
        }
        let connectors: Vec<&Connector> = model
            .connectors
            .iter()
            .filter(|c| c.context.as_deref() == Some(component.name.as_str()))
            .collect();
        if component.ports.is_empty() && component.parts.is_empty() && connectors.is_empty() {
            let _ = writeln!(out, "component {} {{}}", component.name);
            continue;
        }
        let _ = writeln!(out, "component {} {{", component.name);
        for port in &component.ports {
            let _ = writeln!(out, "    port {};", port.name);
        }
        for part in &component.parts {
            let _ = write!(out, "    part {}: {}", part.role, part.type_component);
            if part.multiplicity != Multiplicity::ONE {
                let _ = write!(out, " {}", part.multiplicity);
            }
            out.push_str(";\n");
        }
        for connector in connectors {
            out.push_str("    ");
            write_connector(&mut out, connector);
        }
        out.push_str("}\n");
    }

    let model_level: Vec<&Connector> = model
        .connectors
        .iter()
        .filter(|c| c.context.as_deref().is_none_or(|ctx| model.component(ctx).is_none()))
        .collect();
    if !model_level.is_empty() {
        out.push('\n');
        for connector in model_level {
            write_connector(&mut out, connector);
        }
    }
    out
}

fn write_connector(out: &mut String, connector: &Connector) {
    let _ = writeln!(
        out,
        "connector {}: {} {} {};",
        connector.id,
        connector.left,
        connector.direction.arrow(),
        connector.right
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch_model::parse_architecture;
    use crate::test_fixtures::{car_model, CAR_ARCH};

    #[test]
    fn empty_model_is_header_only() {
        assert_eq!(serialize_architecture(&ArchitectureModel::new()), HEADER);
        assert_eq!(parse_architecture(HEADER).unwrap(), ArchitectureModel::new());
    }

    #[test]
    fn car_round_trips() {
        let text = serialize_architecture(&car_model());
        assert_eq!(parse_architecture(&text).unwrap(), car_model());
        assert_eq!(serialize_architecture(&parse_architecture(CAR_ARCH).unwrap()), text);
    }

    #[test]
    fn car_golden() {
        let expected = "\
// archlint architecture description

top component Car {
    part e: Engine;
    part rear: Wheel [*];
    connector c1: rear <- e.p;
}

component Engine {
    port p;
}

component Wheel {}
";
        assert_eq!(serialize_architecture(&car_model()), expected);
    }
}
