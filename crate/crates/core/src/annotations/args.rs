//! Argument lists shared by both front-ends:
//! `("Car")`, `({"rear", "e"})`, `(left="rear", right="e.p", type=LEFT)`.

use std::collections::BTreeMap;
use std::iter::Peekable;
use std::str::Chars;

use super::AnnotationKind;
use crate::arch_model::{Direction, EndpointPath};

#[derive(Debug, Clone, PartialEq, Eq)]
enum ArgValue {
    Str(String),
    Array(Vec<String>),
    /// Bare, possibly qualified token such as `LEFT` or `Arrow.LEFT`.
    Token(String),
}

struct Cursor<'a> {
    chars: Peekable<Chars<'a>>,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.chars.peek() == Some(&want) {
            self.chars.next();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.chars.peek().is_none()
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let mut out = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                out.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        (!out.is_empty()).then_some(out)
    }

    fn string(&mut self) -> Result<String, String> {
        self.skip_ws();
        if self.chars.next() != Some('"') {
            return Err("expected a string literal".into());
        }
        let mut out = String::new();
        loop {
            match self.chars.next() {
                Some('"') => return Ok(out),
                Some('\\') => match self.chars.next() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some(c) => out.push(c),
                    None => return Err("unterminated string literal".into()),
                },
                Some(c) => out.push(c),
                None => return Err("unterminated string literal".into()),
            }
        }
    }

    fn value(&mut self) -> Result<ArgValue, String> {
        self.skip_ws();
        match self.chars.peek() {
            Some('"') => Ok(ArgValue::Str(self.string()?)),
            Some('{') => {
                self.chars.next();
                let mut items = Vec::new();
                if self.eat('}') {
                    return Ok(ArgValue::Array(items));
                }
                loop {
                    items.push(self.string()?);
                    if self.eat('}') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err("expected `,` or `}` in array".into());
                    }
                    if self.eat('}') {
                        break;
                    }
                }
                Ok(ArgValue::Array(items))
            }
            _ => self
                .word()
                .map(ArgValue::Token)
                .ok_or_else(|| "expected a string, array or enum token".to_owned()),
        }
    }
}

/// The positional value, if any, and the named arguments in source order.
type ArgList = (Option<ArgValue>, Vec<(String, ArgValue)>);

fn parse_list(text: &str) -> Result<ArgList, String> {
    let mut cursor = Cursor {
        chars: text.chars().peekable(),
    };
    let mut positional = None;
    let mut named = Vec::new();
    if cursor.at_end() {
        return Ok((positional, named));
    }
    loop {
        cursor.skip_ws();
        let is_named = {
            // lookahead for `ident =`
            let mut probe = cursor.chars.clone();
            let mut saw_ident = false;
            while probe.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                probe.next();
                saw_ident = true;
            }
            while probe.peek().is_some_and(|c| c.is_whitespace()) {
                probe.next();
            }
            saw_ident && probe.peek() == Some(&'=')
        };
        if is_named {
            let name = cursor.word().expect("lookahead saw an identifier");
            cursor.eat('=');
            let value = cursor.value()?;
            if named.iter().any(|(n, _)| n == &name) {
                return Err(format!("attribute `{name}` given twice"));
            }
            named.push((name, value));
        } else {
            if positional.is_some() || !named.is_empty() {
                return Err("only the first argument may be positional".into());
            }
            positional = Some(cursor.value()?);
        }
        if cursor.at_end() {
            break;
        }
        if !cursor.eat(',') {
            return Err("expected `,` between arguments".into());
        }
    }
    Ok((positional, named))
}

/// Parses an argument list for `kind` into `(values, attrs)`.
pub(crate) fn parse_arguments(
    kind: AnnotationKind,
    text: &str,
) -> Result<(Vec<String>, BTreeMap<String, String>), String> {
    let (positional, named) = parse_list(text)?;
    let mut value = positional;
    let mut attrs = BTreeMap::new();
    for (name, arg) in named {
        if name == "value" {
            if value.is_some() {
                return Err("`value` given twice".into());
            }
            value = Some(arg);
            continue;
        }
        if !kind.allowed_attributes().contains(&name.as_str()) {
            return Err(format!("`{kind}` has no attribute `{name}`"));
        }
        let text = match (name.as_str(), arg) {
            ("type", ArgValue::Token(token) | ArgValue::Str(token)) => {
                let last = token.rsplit('.').next().unwrap_or(&token);
                last.parse::<Direction>()?.as_str().to_owned()
            }
            (_, ArgValue::Str(s)) => s,
            (_, _) => return Err(format!("attribute `{name}` expects a string")),
        };
        attrs.insert(name, text);
    }

    let values = match value {
        None => Vec::new(),
        Some(ArgValue::Str(s)) => vec![s],
        Some(ArgValue::Array(items)) => items,
        Some(ArgValue::Token(t)) => return Err(format!("`value` expects strings, found `{t}`")),
    };
    if kind.takes_values() {
        if values.is_empty() {
            return Err(format!("`{kind}` requires a value"));
        }
        if let Some(empty) = values.iter().find(|v| v.trim().is_empty()) {
            return Err(format!("`{kind}` has an empty value `{empty}`"));
        }
    } else {
        if !values.is_empty() {
            return Err(format!("`{kind}` takes no value"));
        }
        for side in ["left", "right"] {
            let path = attrs.get(side).ok_or_else(|| format!("`{kind}` requires `{side}`"))?;
            path.parse::<EndpointPath>().map_err(|e| format!("`{side}`: {e}"))?;
        }
    }
    Ok((values, attrs))
}
