//! Comment-pragma front-end.
//!
//! A pragma is a line comment whose body starts with the sigil:
//!
//! ```text
//! <leader> <sigil> <Name>(<args>) @on <kind> [<name>] [@in <Component>[, <Component>...]]
//! ```
//!
//! `<leader>` is any of `//`, `#`, `--`, `;`, `%`, `/*`, `*` or `<!--`.

use super::args::parse_arguments;
use super::{package_of, AnnotationInstance, AnnotationKind, ContextHint, FileExtraction, TargetKind};
use crate::arch_model::is_identifier;
use crate::diagnostics::{CheckId, Finding, SourceLocation};

pub const DEFAULT_SIGIL: &str = "@arch";

const LEADERS: &[&str] = &["<!--", "//", "/*", "--", "#", ";", "%", "*"];

/// Byte offset of the sigil when `line` is a pragma line.
fn sigil_offset(line: &str, sigil: &str) -> Option<usize> {
    let trimmed = line.trim_start();
    let indent = line.len() - trimmed.len();
    let leader = LEADERS.iter().find(|l| trimmed.starts_with(*l))?;
    let after_leader = &trimmed[leader.len()..];
    // tolerate repeated leader characters such as `///` or `##`
    let body = after_leader.trim_start_matches(|c: char| leader.contains(c));
    let body_trimmed = body.trim_start();
    let rest = body_trimmed.strip_prefix(sigil)?;
    if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
        return None;
    }
    Some(indent + leader.len() + (after_leader.len() - body_trimmed.len()))
}

fn strip_closer(text: &str) -> &str {
    let text = text.trim_end();
    text.strip_suffix("*/")
        .or_else(|| text.strip_suffix("-->"))
        .unwrap_or(text)
        .trim_end()
}

struct Parsed {
    kind: AnnotationKind,
    args: String,
    target: TargetKind,
    target_name: String,
    explicit: Option<Vec<String>>,
}

fn parse_body(body: &str) -> Result<Parsed, String> {
    let body = body.trim_start();
    let name_len = body
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(body.len());
    let name = &body[..name_len];
    if name.is_empty() {
        return Err("expected an annotation name after the sigil".into());
    }
    let kind = AnnotationKind::from_source_name(name).ok_or_else(|| format!("unknown annotation `{name}`"))?;
    let rest = &body[name_len..];
    let rest = rest
        .strip_prefix('(')
        .ok_or_else(|| format!("expected `(` after `{name}`"))?;

    // find the closing parenthesis outside string literals
    let mut in_string = false;
    let mut escaped = false;
    let mut close = None;
    for (idx, c) in rest.char_indices() {
        if in_string {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
        } else if c == '"' {
            in_string = true;
        } else if c == ')' {
            close = Some(idx);
            break;
        }
    }
    let close = close.ok_or("unclosed argument list")?;
    let args = rest[..close].to_owned();
    let tail = &rest[close + 1..];

    let mut words = tail.split_whitespace();
    if words.next() != Some("@on") {
        return Err("expected `@on <kind>` after the arguments".into());
    }
    let kind_word = words.next().ok_or("expected a target kind after `@on`")?;
    let target = TargetKind::from_keyword(kind_word).ok_or_else(|| {
        format!("unknown target kind `{kind_word}` (expected type, field, method, constructor or local)")
    })?;

    let remaining: Vec<&str> = words.collect();
    let (name_part, in_part) = match remaining.iter().position(|w| *w == "@in") {
        Some(idx) => (&remaining[..idx], Some(&remaining[idx + 1..])),
        None => (&remaining[..], None),
    };
    let target_name = match name_part {
        [] => String::new(),
        [name] if is_identifier(name) => (*name).to_owned(),
        _ => return Err(format!("unexpected `{}` after the target kind", name_part.join(" "))),
    };
    let explicit = match in_part {
        None => None,
        Some(words) => {
            let names: Vec<String> = words.join(" ").split(',').map(|s| s.trim().to_owned()).collect();
            if names.iter().any(|n| !is_identifier(n)) {
                return Err("`@in` expects a comma-separated list of component names".into());
            }
            Some(names)
        }
    };
    Ok(Parsed {
        kind,
        args,
        target,
        target_name,
        explicit,
    })
}

/// Extracts every pragma in `text`. Malformed pragmas become
/// MALFORMED_PRAGMA findings; other lines are ignored.
pub fn extract_pragmas(text: &str, path: &str, sigil: &str) -> FileExtraction {
    let lines: Vec<&str> = text.lines().collect();
    let offsets: Vec<Option<usize>> = lines.iter().map(|l| sigil_offset(l, sigil)).collect();
    let package = package_of(path);
    let mut out = FileExtraction::default();

    for (idx, line) in lines.iter().enumerate() {
        let Some(offset) = offsets[idx] else { continue };
        let line_no = idx as u32 + 1;
        let column = line[..offset].chars().count() as u32 + 1;
        let location = SourceLocation::new(path, line_no, column);
        let body = strip_closer(&line[offset + sigil.len()..]);

        let parsed =
            parse_body(body).and_then(|p| parse_arguments(p.kind, &p.args).map(|(values, attrs)| (p, values, attrs)));
        let (parsed, values, attrs) = match parsed {
            Ok(ok) => ok,
            Err(message) => {
                out.findings
                    .push(Finding::new(CheckId::MalformedPragma, format!("malformed pragma: {message}")).at(location));
                continue;
            }
        };

        // the declaration is the next line that is neither blank nor a pragma
        let declaration_line = (idx + 1..lines.len())
            .find(|&j| offsets[j].is_none() && !lines[j].trim().is_empty())
            .map_or(line_no, |j| j as u32 + 1);
        let hint = match parsed.explicit {
            Some(names) => ContextHint::Explicit(names),
            None => ContextHint::Sequential,
        };
        out.push(
            AnnotationInstance {
                kind: parsed.kind,
                values,
                attrs,
                target: parsed.target,
                target_name: parsed.target_name,
                enclosing_components: Vec::new(),
                location,
                package: package.clone(),
                declaration_line,
            },
            hint,
        );
    }
    out
}
