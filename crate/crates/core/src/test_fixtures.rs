use crate::annotations::{extract_attributes, extract_pragmas, resolve_context, CodeModel, DEFAULT_SIGIL};
use crate::arch_model::{parse_architecture, ArchitectureModel};

pub const CAR_ARCH: &str = "\
// car example
component Wheel {}

top component Car {
    part rear: Wheel [*];
    part e: Engine;
    connector c1: rear <- e.p;
}

component Engine {
    port p;
}
";

pub fn car_model() -> ArchitectureModel {
    parse_architecture(CAR_ARCH).expect("car fixture parses")
}

pub const CAR_SNIPPET_JAVA: &str = r#"public @Component("Car") class Car {
    private @Part("rear") Wheel[] rear;

    private @Part("e") Engine e;

    public @AddPart({"rear", "e" })
        @Connects(left="rear",right="e.p",type=Arrow.LEFT)
        Car() { /*...*/ }
}
"#;

pub const ENGINE_JAVA: &str = r#"@Component("Engine")
public class Engine {
    @Port("p") public void start() { }

    @Port("p") public void stop() { }
}
"#;

pub const WHEEL_JAVA: &str = r#"@Component("Wheel")
public class Wheel { }
"#;

/// Builds a code model from in-memory files; `.java` files go through the
/// attribute front-end, everything else through pragmas.
pub fn code_from(files: &[(&str, &str)]) -> CodeModel {
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

pub fn car_tree_code() -> CodeModel {
    code_from(&[
        ("vehicle/Car.java", CAR_SNIPPET_JAVA),
        ("vehicle/Engine.java", ENGINE_JAVA),
        ("vehicle/Wheel.java", WHEEL_JAVA),
    ])
}

pub const DESKTOP_ARCH: &str = "\
top component System {
    part ui: Gui;
    part model: Model;
    part query: Query;
    part db: Storage;
    connector c1: ui.events -> model.commands;
    connector c2: model.data -> query.request;
    connector c3: query.store -> db.access;
}

component Gui { port events; }
component Model { port commands; port data; }
component Query { port request; port store; }
component Storage { port access; }
";

pub const DESKTOP_PLAN: &str = "\
plan client-server
// 1-4: four new ports
AddPort(Model, remoteOut)
AddPort(System, clientGate)
AddPort(System, serverGate)
AddPort(Query, remoteIn)
// 5-7: connect Model with Query through the gates
AddConnector(c4, System, model.remoteOut, clientGate, RIGHT)
AddConnector(c5, System, clientGate, serverGate, RIGHT)
AddConnector(c6, System, serverGate, query.remoteIn, RIGHT)
// 8: the obsolete direct connector
RemoveConnector(c2)
// 9-10: the obsolete ports
RemovePort(Model, data)
RemovePort(Query, request)
// 11
SplitComponent(System, Client, Server, {ui: A, model: A, clientGate: A, query: B, db: B, serverGate: B})
";

pub fn desktop_model() -> ArchitectureModel {
    parse_architecture(DESKTOP_ARCH).expect("desktop fixture parses")
}
