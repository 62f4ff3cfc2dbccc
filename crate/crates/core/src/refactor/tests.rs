use super::*;
use crate::arch_model::{parse_architecture, validate_model};
use crate::test_fixtures::{car_model, car_tree_code, code_from, desktop_model, DESKTOP_PLAN, CAR_SNIPPET_JAVA};

fn op(text: &str) -> RefactoringOp {
    parse_plan(text).unwrap().ops.remove(0)
}

fn apply(model: &ArchitectureModel, text: &str) -> Result<ArchitectureModel, RefactorError> {
    apply_op(model, &op(text)).map(|(m, _)| m)
}

#[test]
fn add_then_remove_port_is_identity() {
    let model = desktop_model();
    let added = apply(&model, "AddPort(Model, out)").unwrap();
    assert_ne!(added, model);
    assert_eq!(apply(&added, "RemovePort(Model, out)").unwrap(), model);
}

#[test]
fn add_then_remove_connector_is_identity() {
    let model = desktop_model();
    let added = apply(&model, "AddConnector(c9, System, ui.events, db.access, BIDIR)").unwrap();
    assert_eq!(apply(&added, "RemoveConnector(c9)").unwrap(), model);
}

#[test]
fn attached_port_cannot_be_removed() {
    let err = apply(&car_model(), "RemovePort(Engine, p)").unwrap_err();
    assert_eq!(err.code(), "PRECONDITION_FAILED");
    assert!(err.to_string().contains("c1"), "{err}");
}

#[test]
fn add_connector_preconditions() {
    let model = desktop_model();
    for bad in [
        "AddConnector(c1, System, ui.events, db.access, RIGHT)",
        "AddConnector(c9, Nowhere, ui.events, db.access, RIGHT)",
        "AddConnector(c9, System, ui.nothing, db.access, RIGHT)",
        // c1 again, written the other way round
        "AddConnector(c9, System, model.commands, ui.events, <-)",
    ] {
        assert!(apply(&model, bad).is_err(), "{bad}");
    }
}

#[test]
fn failures_leave_no_trace() {
    let model = desktop_model();
    for bad in [
        "AddPort(Nowhere, x)",
        "AddPort(Model, data)",
        "RemovePort(Model, nothing)",
        "RemoveConnector(c42)",
        "SplitComponent(System, Gui, Server, {ui: A, model: A, query: B, db: B})",
        "SplitComponent(System, Client, Server, {ui: A, model: A, query: B})",
        "SplitComponent(System, Client, Server, {ui: A, model: A, query: B, db: B, extra: B})",
        "RenameElement(Model, Gui)",
        "RenameElement(System.ui, model)",
        "MovePart(ui, System, Nowhere)",
    ] {
        let copy = model.clone();
        assert!(apply_op(&copy, &op(bad)).is_err(), "{bad}");
        assert_eq!(copy, model);
    }
}

const SPLIT_RESULT: &str = "\
top component Client {
    port clientGate;
    part ui: Gui;
    part model: Model;
    connector c1: ui.events -> model.commands;
    connector c4: model.remoteOut -> clientGate;
}
top component Server {
    port serverGate;
    part query: Query;
    part db: Storage;
    connector c3: query.store -> db.access;
    connector c6: serverGate -> query.remoteIn;
}
component Gui { port events; }
component Model { port commands; port remoteOut; }
component Query { port remoteIn; port store; }
component Storage { port access; }
connector c5: Client.clientGate -> Server.serverGate;
";

#[test]
fn desktop_plan_reaches_client_server() {
    let plan = parse_plan(DESKTOP_PLAN).unwrap();
    assert_eq!(plan.ops.len(), 11);
    let (model, report) = apply_plan(&desktop_model(), &plan, &CodeModel::default()).unwrap();
    assert_eq!(model, parse_architecture(SPLIT_RESULT).unwrap());
    assert_eq!(model.top_level_components().count(), 2);
    assert!(validate_model(&model).is_empty());
    assert_eq!(report.steps.len(), 11);
    assert_eq!(report.plan, "client-server");
}

#[test]
fn plan_is_a_fold_over_ops() {
    let plan = parse_plan(DESKTOP_PLAN).unwrap();
    let folded = plan
        .ops
        .iter()
        .try_fold(desktop_model(), |m, o| apply_op(&m, o).map(|(m, _)| m))
        .unwrap();
    let (planned, _) = apply_plan(&desktop_model(), &plan, &CodeModel::default()).unwrap();
    assert_eq!(folded, planned);
}

#[test]
fn failing_plan_reports_step_and_rolls_back() {
    let plan = parse_plan("AddPort(Model, x)\nAddPort(Nowhere, y)\nAddPort(Query, z)\n").unwrap();
    let err = apply_plan(&desktop_model(), &plan, &CodeModel::default()).unwrap_err();
    assert!(matches!(err, RefactorError::PlanFailed { step: 2, .. }), "{err}");
    assert_eq!(err.code(), "PLAN_FAILED");
}

#[test]
fn empty_effect_plan() {
    let plan = parse_plan("AddPort(Model, x)\nRemovePort(Model, x)\n").unwrap();
    let (model, report) = apply_plan(&desktop_model(), &plan, &CodeModel::default()).unwrap();
    assert_eq!(model, desktop_model());
    assert_eq!(report.steps.len(), 2);
}

#[test]
fn split_of_a_used_component_splits_the_part() {
    let model = parse_architecture(
        "top component Host { part s: Sys; part peer: Peer; connector h1: peer.p -> s.a; }\n\
         component Sys { port a; port b; part x: Leaf; part y: Leaf; connector k: x.out -> y.in; connector j: a -> x.in; }\n\
         component Leaf { port in; port out; }\n\
         component Peer { port p; }\n",
    )
    .unwrap();
    let split = apply(&model, "SplitComponent(Sys, Front, Back, {a: A, x: A, b: B, y: B})").unwrap();
    let expected = parse_architecture(
        "top component Host { part s_Front: Front; part s_Back: Back; part peer: Peer;\n\
             connector h1: peer.p -> s_Front.a; connector k: s_Front.x.out -> s_Back.y.in; }\n\
         component Front { port a; part x: Leaf; connector j: a -> x.in; }\n\
         component Back { port b; part y: Leaf; }\n\
         component Leaf { port in; port out; }\n\
         component Peer { port p; }\n",
    )
    .unwrap();
    assert_eq!(split, expected);
}

#[test]
fn split_refuses_connectors_ending_at_the_split_part() {
    let model = parse_architecture(
        "top component Host { part s: Sys; part t: Sys2; connector h: s <-> t.q; }\n\
         component Sys { port a; }\n\
         component Sys2 { port q; }\n",
    )
    .unwrap();
    assert!(apply(&model, "SplitComponent(Sys, L, R, {a: A})").is_err());
}

#[test]
fn rename_rewrites_paths() {
    let model = apply(&car_model(), "RenameElement(Car.e, engine)").unwrap();
    assert_eq!(model.connector("c1").unwrap().right.to_string(), "engine.p");
    let model = apply(&model, "RenameElement(Engine#p, power)").unwrap();
    assert_eq!(model.connector("c1").unwrap().right.to_string(), "engine.power");
    let model = apply(&model, "RenameElement(Engine, Motor)").unwrap();
    assert_eq!(
        model.component("Car").unwrap().part("engine").unwrap().type_component,
        "Motor"
    );
    let model = apply(&model, "RenameElement(Car/c1, drive)").unwrap();
    assert!(model.connector("drive").is_some());
}

#[test]
fn move_part() {
    assert!(
        apply(&desktop_model(), "MovePart(ui, System, Storage)").is_err(),
        "c1 routes through ui"
    );
    let model = parse_architecture("component A { part x: L; }\ncomponent B {}\ncomponent L {}\n").unwrap();
    let (moved, touched) = apply_op(&model, &op("MovePart(x, A, B)")).unwrap();
    assert!(moved.contains(&ElementRef::part("B", "x")));
    assert_eq!(touched.len(), 2);
    assert!(apply(&moved, "MovePart(x, A, B)").is_err());
}

#[test]
fn plan_syntax() {
    let plan = parse_plan(
        "// comment\nplan demo\nadd-port(A, b) // trailing\nAddConnector(k, *, A.b, B.c, ->)\nRenameElement(/k, m)\n",
    )
    .unwrap();
    assert_eq!(plan.name, "demo");
    assert_eq!(plan.ops.len(), 3);
    assert_eq!(parse_plan(&plan.to_string()).unwrap(), plan);
    let round = parse_plan(DESKTOP_PLAN).unwrap();
    assert_eq!(parse_plan(&round.to_string()).unwrap(), round);

    for (bad, line) in [
        ("", 1),
        ("// only comments\n", 1),
        ("AddPort(A)\n", 1),
        ("AddPort(A, b)\nFrobnicate(x)\n", 2),
        ("AddPort(A, b c)\n", 1),
        ("SplitComponent(S, A, B, {x: C})\n", 1),
        ("AddPort(A, b)\nplan late\n", 2),
    ] {
        assert_eq!(parse_plan(bad).unwrap_err().line, line, "{bad:?}");
    }
}

#[test]
fn lookup_car_rear() {
    let code = car_tree_code();
    let found: Vec<String> = lookup(&car_model(), &code, &ElementRef::part("Car", "rear"))
        .iter()
        .map(|i| i.kind.to_string())
        .collect();
    assert_eq!(found, ["Part", "AddPart", "Connects"]);
    assert!(lookup(&car_model(), &code, &ElementRef::part("Car", "front")).is_empty());
}

#[test]
fn connector_usage_groups() {
    let code = car_tree_code();
    let c1 = ElementRef::connector(Some("Car"), "c1");
    let usages = connector_usages(&car_model(), &code, &c1).unwrap();
    assert_eq!(usages.connects.len(), 1);
    assert_eq!(usages.connects[0].target_name, "Car");
    assert!(usages.disconnects.is_empty() && usages.stores.is_empty());

    let cached = CAR_SNIPPET_JAVA.replace(
        "    private @Part(\"e\") Engine e;",
        "    private @Part(\"e\") Engine e;\n    @Connector(left=\"rear\", right=\"e.p\") Object wiring;",
    );
    let code = code_from(&[("vehicle/Car.java", &cached)]);
    assert_eq!(connector_usages(&car_model(), &code, &c1).unwrap().stores.len(), 1);

    let err = connector_usages(&car_model(), &code, &ElementRef::connector(Some("Car"), "c9")).unwrap_err();
    assert_eq!(err.code(), "UNKNOWN_CONNECTOR");
}

#[test]
fn impact_report_lists_annotations_of_removed_connector() {
    let plan = parse_plan("RemoveConnector(c1)\n").unwrap();
    let (_, report) = apply_plan(&car_model(), &plan, &car_tree_code()).unwrap();
    let touched = &report.steps[0].touched;
    assert_eq!(touched.len(), 1);
    assert_eq!(touched[0].instances.len(), 1);
    assert_eq!(touched[0].instances[0].kind, AnnotationKind::Connects);
}
