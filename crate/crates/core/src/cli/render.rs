//! Text and JSON renderings. JSON is the canonical artifact; its layout is
//! described by `docs/report.schema.json`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::annotations::{AnnotationInstance, CodeModel};
use crate::arch_model::ElementRef;
use crate::conformance::ConformanceReport;
use crate::diagnostics::{Finding, Severity};
use crate::refactor::{ConnectorUsages, ImpactReport};

pub const REPORT_VERSION: u32 = 1;

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

pub fn to_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    text
}

fn severity_name(severity: Severity) -> &'static str {
    match severity {
        Severity::Error => "ERROR",
        Severity::Warning => "WARNING",
    }
}

/// `file:line:col severity checkId element message`, with `-` for a
/// missing location or element.
pub fn finding_line(finding: &Finding) -> String {
    let location = finding
        .primary_location()
        .map_or_else(|| "-".to_owned(), ToString::to_string);
    let element = finding
        .element
        .as_ref()
        .map_or_else(|| "-".to_owned(), ElementRef::path);
    format!(
        "{location} {} {} {element} {}",
        severity_name(finding.severity),
        finding.check_id,
        finding.message
    )
}

pub fn findings_text(findings: &[Finding]) -> String {
    findings.iter().map(|f| finding_line(f) + "\n").collect()
}

pub fn report_json(command: &str, report: &ConformanceReport) -> Value {
    json!({
        "version": REPORT_VERSION,
        "command": command,
        "findings": to_value(&report.findings),
        "counts": to_value(&report.counts),
        "fingerprint": to_value(&report.fingerprint),
    })
}

pub fn instance_line(instance: &AnnotationInstance) -> String {
    let mut args: Vec<String> = instance.values.iter().map(|v| format!("{v:?}")).collect();
    args.extend(instance.attrs.iter().map(|(k, v)| format!("{k}={v:?}")));
    let mut line = format!(
        "{} {}({}) @on {}",
        instance.location,
        instance.kind,
        args.join(", "),
        instance.target
    );
    if !instance.target_name.is_empty() {
        line.push(' ');
        line.push_str(&instance.target_name);
    }
    if !instance.enclosing_components.is_empty() {
        line.push_str(" @in ");
        line.push_str(&instance.enclosing_components.join(", "));
    }
    line
}

pub fn instances_text(instances: &[&AnnotationInstance]) -> String {
    instances.iter().map(|i| instance_line(i) + "\n").collect()
}

pub fn extract_json(code: &CodeModel) -> Value {
    json!({
        "version": REPORT_VERSION,
        "command": "extract",
        "instances": to_value(&code.instances()),
        "diagnostics": to_value(&code.diagnostics()),
        "fingerprint": { "scanConfig": code.config_fingerprint() },
    })
}

pub fn extract_text(code: &CodeModel) -> String {
    let instances: Vec<&AnnotationInstance> = code.instances().iter().collect();
    instances_text(&instances) + &findings_text(code.diagnostics())
}

pub fn lookup_json(element: &ElementRef, instances: &[&AnnotationInstance]) -> Value {
    json!({
        "version": REPORT_VERSION,
        "command": "lookup",
        "element": to_value(element),
        "instances": to_value(&instances),
    })
}

pub fn usages_json(element: &ElementRef, usages: &ConnectorUsages) -> Value {
    json!({
        "version": REPORT_VERSION,
        "command": "lookup",
        "element": to_value(element),
        "connects": to_value(&usages.connects),
        "disconnects": to_value(&usages.disconnects),
        "stores": to_value(&usages.stores),
    })
}

pub fn usages_text(usages: &ConnectorUsages) -> String {
    let mut out = String::new();
    for (label, group) in [
        ("connects", &usages.connects),
        ("disconnects", &usages.disconnects),
        ("stores", &usages.stores),
    ] {
        out.push_str(&format!("{label}: {}\n", group.len()));
        for instance in group {
            out.push_str(&format!("  {}\n", instance_line(instance)));
        }
    }
    out
}

pub fn impact_json(report: &ImpactReport, output: &str) -> Value {
    json!({
        "version": REPORT_VERSION,
        "command": "refactor",
        "plan": report.plan,
        "output": output,
        "steps": to_value(&report.steps),
    })
}

pub fn impact_text(report: &ImpactReport) -> String {
    let mut out = String::new();
    for step in &report.steps {
        out.push_str(&format!("step {}: {}\n", step.step, step.op));
        for touched in &step.touched {
            out.push_str(&format!("  {}\n", touched.element));
            for instance in &touched.instances {
                out.push_str(&format!("    {}\n", instance_line(instance)));
            }
        }
    }
    out
}
