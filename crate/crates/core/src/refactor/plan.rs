//! Plan files: an optional `plan <name>` header, then one operation per
//! line in call syntax. `//` starts a comment.
//!
//! ```text
//! plan client-server
//! AddPort(Model, remoteOut)
//! add-connector(c4, System, model.remoteOut, clientGate, RIGHT)
//! SplitComponent(System, Client, Server, {ui: A, db: B})
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use super::{RefactoringOp, RefactoringPlan, Side};
use crate::arch_model::{is_identifier, Direction, ElementRef, EndpointPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct PlanParseError {
    pub line: usize,
    pub message: String,
}

fn strip_comment(line: &str) -> &str {
    line.find("//").map_or(line, |idx| &line[..idx]).trim()
}

/// Splits on commas outside braces.
fn split_args(text: &str) -> Result<Vec<&str>, String> {
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (idx, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced `}`".into());
                }
            }
            ',' if depth == 0 => {
                args.push(text[start..idx].trim());
                start = idx + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced `{`".into());
    }
    let last = text[start..].trim();
    if !(last.is_empty() && args.is_empty()) {
        args.push(last);
    }
    Ok(args)
}

fn ident(arg: &str, what: &str) -> Result<String, String> {
    if is_identifier(arg) {
        Ok(arg.to_owned())
    } else {
        Err(format!("{what} `{arg}` is not an identifier"))
    }
}

fn path(arg: &str) -> Result<EndpointPath, String> {
    arg.parse().map_err(|e| format!("endpoint `{arg}`: {e}"))
}

fn direction(arg: &str) -> Result<Direction, String> {
    Direction::from_arrow(arg)
        .or_else(|| arg.parse().ok())
        .ok_or_else(|| format!("`{arg}` is not a direction (LEFT, RIGHT, BIDIR or an arrow)"))
}

fn partition(arg: &str) -> Result<BTreeMap<String, Side>, String> {
    let inner = arg
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or("the partition must be written `{member: A, ...}`")?;
    let mut map = BTreeMap::new();
    for entry in inner.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (member, side) = entry
            .split_once(':')
            .ok_or_else(|| format!("partition entry `{entry}` needs `member: A|B`"))?;
        let member = ident(member.trim(), "member")?;
        let side = match side.trim() {
            "A" => Side::A,
            "B" => Side::B,
            other => return Err(format!("`{other}` is not a side (A or B)")),
        };
        if map.insert(member.clone(), side).is_some() {
            return Err(format!("`{member}` is placed twice"));
        }
    }
    Ok(map)
}

fn parse_op(text: &str) -> Result<RefactoringOp, String> {
    let open = text.find('(').ok_or("expected `Op(args)`")?;
    let body = text[open + 1..]
        .strip_suffix(')')
        .ok_or("expected `)` at the end of the line")?;
    let name = text[..open].trim();
    let args = split_args(body)?;
    let normalized: String = name
        .chars()
        .filter(|c| *c != '-' && *c != '_')
        .collect::<String>()
        .to_lowercase();

    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{name} takes {n} arguments, got {}", args.len()))
        }
    };
    Ok(match normalized.as_str() {
        "addport" | "removeport" => {
            arity(2)?;
            let component = ident(args[0], "component")?;
            let port = ident(args[1], "port")?;
            if normalized == "addport" {
                RefactoringOp::AddPort { component, port }
            } else {
                RefactoringOp::RemovePort { component, port }
            }
        }
        "addconnector" => {
            arity(5)?;
            RefactoringOp::AddConnector {
                id: ident(args[0], "connector id")?,
                context: match args[1] {
                    "*" => None,
                    other => Some(ident(other, "context")?),
                },
                left: path(args[2])?,
                right: path(args[3])?,
                direction: direction(args[4])?,
            }
        }
        "removeconnector" => {
            arity(1)?;
            RefactoringOp::RemoveConnector {
                id: ident(args[0], "connector id")?,
            }
        }
        "splitcomponent" => {
            arity(4)?;
            RefactoringOp::SplitComponent {
                target: ident(args[0], "component")?,
                name_a: ident(args[1], "component")?,
                name_b: ident(args[2], "component")?,
                partition: partition(args[3])?,
            }
        }
        "renameelement" | "rename" => {
            arity(2)?;
            RefactoringOp::RenameElement {
                element: args[0]
                    .parse::<ElementRef>()
                    .map_err(|e| format!("`{}`: {e}", args[0]))?,
                new_name: ident(args[1], "name")?,
            }
        }
        "movepart" => {
            arity(3)?;
            RefactoringOp::MovePart {
                role: ident(args[0], "part role")?,
                from: ident(args[1], "component")?,
                to: ident(args[2], "component")?,
            }
        }
        _ => return Err(format!("unknown operation `{name}`")),
    })
}

pub fn parse_plan(text: &str) -> Result<RefactoringPlan, PlanParseError> {
    let mut name = None;
    let mut ops = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let error = |message: String| PlanParseError { line: idx + 1, message };
        if let Some(rest) = line.strip_prefix("plan ") {
            if name.is_some() || !ops.is_empty() {
                return Err(error("`plan` must be the first line and appear once".into()));
            }
            name = Some(rest.trim().to_owned());
            continue;
        }
        ops.push(parse_op(line).map_err(error)?);
    }
    if ops.is_empty() {
        return Err(PlanParseError {
            line: text.lines().count().max(1),
            message: "the plan has no steps".into(),
        });
    }
    Ok(RefactoringPlan {
        name: name.unwrap_or_else(|| "plan".to_owned()),
        ops,
    })
}
