//! Seeded randomized comparisons between the checks and brute-force
//! recomputations, plus algebraic properties of refactoring.

mod common;

use std::collections::BTreeSet;

use archlint::arch_model::{parse_architecture, serialize_architecture, validate_model};
use archlint::conformance::{
    check_annotation_completeness, check_architecture_completeness, check_connection_consistency,
};
use archlint::refactor::{apply_op, apply_plan, RefactoringOp, RefactoringPlan};
use archlint::smells::{smell_connector_lifecycle, SmellConfig};
use archlint::{CheckId, CodeModel};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn serialization_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let arch = random_arch(&mut rng, 10);
        let text = serialize_architecture(&arch);
        let back = parse_architecture(&text).unwrap();
        assert_eq!(back, arch, "{text}");
        assert_eq!(serialize_architecture(&back), text);
    }
}

#[test]
fn completeness_checks_agree_with_double_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let arch = random_arch(&mut rng, 10);
        let code = code_from(&random_sources(&mut rng, &arch));
        let found: BTreeSet<_> = check_annotation_completeness(&arch, &code)
            .into_iter()
            .map(|f| f.element.unwrap())
            .collect();
        assert_eq!(found, oracle_missing(&arch, &code));

        // every unknown-element finding points at an annotation naming something undeclared
        for f in check_architecture_completeness(&arch, &code) {
            assert_eq!(f.check_id, CheckId::UnknownElement);
            if let Some(e) = f.element {
                assert!(!arch.contains(&e));
            }
        }
    }
}

#[test]
fn connection_check_agrees_with_triple_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let arch = random_arch(&mut rng, 10);
        let code = code_from(&random_sources(&mut rng, &arch));
        let mut found: Vec<(String, Expected)> = check_connection_consistency(&arch, &code)
            .into_iter()
            .map(|f| {
                let kind = match f.check_id {
                    CheckId::UnresolvedEndpoint => Expected::Unresolved,
                    CheckId::ContextConflict => Expected::Conflict,
                    CheckId::UndeclaredConnection => Expected::Undeclared,
                    other => panic!("unexpected {other}"),
                };
                (f.primary_location().unwrap().to_string(), kind)
            })
            .collect();
        found.sort();
        assert_eq!(found, oracle_connection_findings(&arch, &code));
    }
}

#[test]
fn lifecycle_smell_counts_distinct_methods() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let arch = random_arch(&mut rng, 8);
        let code = code_from(&random_sources(&mut rng, &arch));
        let flagged: BTreeSet<_> = smell_connector_lifecycle(&arch, &code, &SmellConfig::default())
            .into_iter()
            .map(|f| f.element.unwrap())
            .collect();
        let mut expected = BTreeSet::new();
        for c in &arch.connectors {
            let element = c.element_ref();
            let methods = |kind| {
                code.instances()
                    .iter()
                    .filter(|i| i.kind == kind && oracle_references(&arch, i, &element))
                    .map(|i| (i.location.file.clone(), i.declaration_line, i.target_name.clone()))
                    .collect::<BTreeSet<_>>()
                    .len()
            };
            use archlint::annotations::AnnotationKind::{Connects, Disconnects};
            if methods(Connects) != 1 || methods(Disconnects) != 1 {
                expected.insert(element);
            }
        }
        assert_eq!(flagged, expected);
    }
}

#[test]
fn random_op_sequences_keep_models_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fresh = 0;
    let empty = CodeModel::default();
    for _ in 0..100 {
        let start = random_arch(&mut rng, 8);
        let mut model = start.clone();
        let mut applied = Vec::new();
        for _ in 0..6 {
            let op = random_op(&mut rng, &model, &mut fresh);
            match apply_op(&model, &op) {
                Ok((next, _)) => {
                    assert!(validate_model(&next).is_empty(), "{op}");
                    model = next;
                    applied.push(op);
                }
                Err(e) => assert_eq!(e.code(), "PRECONDITION_FAILED", "{op}: {e}"),
            }
        }
        if !applied.is_empty() {
            let plan = RefactoringPlan {
                name: "p".into(),
                ops: applied,
            };
            let (folded, impact) = apply_plan(&start, &plan, &empty).unwrap();
            assert_eq!(folded, model);
            assert_eq!(impact.steps.len(), plan.ops.len());
        }
    }
}

#[test]
fn added_things_can_be_removed_again() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut fresh = 0;
    let mut checked = 0;
    while checked < 100 {
        let model = random_arch(&mut rng, 8);
        let op = random_op(&mut rng, &model, &mut fresh);
        let inverse = match &op {
            RefactoringOp::AddPort { component, port } => RefactoringOp::RemovePort {
                component: component.clone(),
                port: port.clone(),
            },
            RefactoringOp::AddConnector { id, .. } => RefactoringOp::RemoveConnector { id: id.clone() },
            _ => continue,
        };
        if let Ok((added, _)) = apply_op(&model, &op) {
            let (back, _) = apply_op(&added, &inverse).unwrap();
            assert_eq!(back, model, "{op}");
            checked += 1;
        }
    }
}

proptest! {
    #[test]
    fn element_refs_print_and_parse_back(
        owner in "[A-Z][A-Za-z0-9]{0,6}",
        member in "[a-z][A-Za-z0-9_]{0,6}",
        kind in 0u8..5,
    ) {
        use archlint::ElementRef;
        let element = match kind {
            0 => ElementRef::component(owner),
            1 => ElementRef::part(owner, member),
            2 => ElementRef::port(owner, member),
            3 => ElementRef::connector(Some(&owner), member),
            _ => ElementRef::connector(None, member),
        };
        prop_assert_eq!(element.path().parse::<ElementRef>(), Ok(element));
    }
}
