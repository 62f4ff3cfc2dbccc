//! Host-language annotation front-end (Java syntax).
//!
//! This is a token-level heuristic, not a parser. An annotation attaches to
//! the declaration that follows it, classified as:
//!
//! * `class`, `interface`, `enum` or `record` before the first `{`, `;`,
//!   `=` or `(` → TYPE;
//! * `name(...)` followed by `{` or `;` (after an optional `throws` clause)
//!   inside a type body → CONSTRUCTOR when `name` is the enclosing type,
//!   METHOD otherwise;
//! * `Type name` followed by `;`, `=` or `,` → FIELD in a type body, LOCAL in
//!   a code block.
//!
//! Anything else is reported as UNCLASSIFIABLE_TARGET.

use super::args::parse_arguments;
use super::{package_of, AnnotationInstance, AnnotationKind, ContextHint, FileExtraction, TargetKind};
use crate::diagnostics::{CheckId, Finding, SourceLocation};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Literal,
    Punct(char),
    At,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    column: u32,
    /// Byte range in the source.
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Vec<Token> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut line_start = 0usize;
    let column = |at: usize, line_start: usize| text[line_start..at].chars().count() as u32 + 1;

    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                i += 1;
                line += 1;
                line_start = i;
            }
            _ if c.is_ascii_whitespace() => i += 1,
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                i += 2;
                while i < bytes.len() && !(bytes[i] == b'*' && bytes.get(i + 1) == Some(&b'/')) {
                    if bytes[i] == b'\n' {
                        line += 1;
                        line_start = i + 1;
                    }
                    i += 1;
                }
                i = (i + 2).min(bytes.len());
            }
            b'"' | b'\'' => {
                let start = i;
                let (start_line, col) = (line, column(i, line_start));
                let text_block = c == b'"' && bytes[i..].starts_with(b"\"\"\"");
                i += if text_block { 3 } else { 1 };
                while i < bytes.len() {
                    if bytes[i] == b'\\' {
                        i += 2;
                        continue;
                    }
                    if bytes[i] == b'\n' {
                        if !text_block {
                            break;
                        }
                        line += 1;
                        line_start = i + 1;
                    }
                    if text_block && bytes[i..].starts_with(b"\"\"\"") {
                        i += 3;
                        break;
                    }
                    if !text_block && bytes[i] == c {
                        i += 1;
                        break;
                    }
                    i += 1;
                }
                let end = i.min(bytes.len());
                tokens.push(Token {
                    tok: Tok::Literal,
                    line: start_line,
                    column: col,
                    start,
                    end,
                });
                i = end;
            }
            _ if c.is_ascii_alphabetic() || c == b'_' || c == b'$' || c >= 0x80 => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$' || bytes[i] >= 0x80)
                {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(text[start..i].to_owned()),
                    line,
                    column: column(start, line_start),
                    start,
                    end: i,
                });
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'.') {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Literal,
                    line,
                    column: column(start, line_start),
                    start,
                    end: i,
                });
            }
            b'@' => {
                tokens.push(Token {
                    tok: Tok::At,
                    line,
                    column: column(i, line_start),
                    start: i,
                    end: i + 1,
                });
                i += 1;
            }
            _ => {
                tokens.push(Token {
                    tok: Tok::Punct(c as char),
                    line,
                    column: column(i, line_start),
                    start: i,
                    end: i + 1,
                });
                i += 1;
            }
        }
    }
    tokens
}

const TYPE_KEYWORDS: &[&str] = &["class", "interface", "enum", "record"];

#[derive(Debug, Clone)]
enum Scope {
    Type { id: usize, name: String },
    Code,
}

struct PendingAnnotation {
    kind: AnnotationKind,
    args: String,
    line: u32,
    column: u32,
}

enum Classified {
    Decl { target: TargetKind, name: String },
    Unclassifiable(String),
}

fn is_ident(t: &Token, word: &str) -> bool {
    matches!(&t.tok, Tok::Ident(s) if s == word)
}

fn is_punct(t: &Token, c: char) -> bool {
    t.tok == Tok::Punct(c)
}

/// Index of the token closing the group opened at `open`, if any.
fn matching(tokens: &[Token], open: usize, open_c: char, close_c: char) -> Option<usize> {
    let mut depth = 0usize;
    for (idx, t) in tokens.iter().enumerate().skip(open) {
        if is_punct(t, open_c) {
            depth += 1;
        } else if is_punct(t, close_c) {
            depth -= 1;
            if depth == 0 {
                return Some(idx);
            }
        }
    }
    None
}

/// Whether `tokens[idx]` is a type keyword opening a declaration (and not `Foo.class`).
fn is_type_keyword(tokens: &[Token], idx: usize) -> bool {
    let Some(Tok::Ident(word)) = tokens.get(idx).map(|t| &t.tok) else {
        return false;
    };
    if !TYPE_KEYWORDS.contains(&word.as_str()) {
        return false;
    }
    if idx > 0 && is_punct(&tokens[idx - 1], '.') {
        return false;
    }
    // `record` and `enum` are contextual: require a following identifier
    matches!(tokens.get(idx + 1).map(|t| &t.tok), Some(Tok::Ident(_)))
}

fn classify(tokens: &[Token], start: usize, scopes: &[Scope]) -> Classified {
    let mut generic_depth = 0i32;
    let mut last_ident: Option<&str> = None;
    let mut consumed = 0;
    let mut idx = start;
    while idx < tokens.len() {
        let t = &tokens[idx];
        if is_type_keyword(tokens, idx) {
            if let Some(Tok::Ident(name)) = tokens.get(idx + 1).map(|t| &t.tok) {
                return Classified::Decl {
                    target: TargetKind::Type,
                    name: name.clone(),
                };
            }
        }
        match &t.tok {
            Tok::Punct('<') => generic_depth += 1,
            Tok::Punct('>') => generic_depth -= 1,
            Tok::Punct('(') => {
                let Some(name) = last_ident else {
                    return Classified::Unclassifiable("`(` without a preceding name".into());
                };
                let Some(close) = matching(tokens, idx, '(', ')') else {
                    return Classified::Unclassifiable("unbalanced parentheses".into());
                };
                let mut after = close + 1;
                if tokens.get(after).is_some_and(|t| is_ident(t, "throws")) {
                    while after < tokens.len() && !is_punct(&tokens[after], '{') && !is_punct(&tokens[after], ';') {
                        after += 1;
                    }
                }
                let has_body = tokens.get(after).is_some_and(|t| is_punct(t, '{') || is_punct(t, ';'));
                return match (scopes.last(), has_body) {
                    (Some(Scope::Type { name: type_name, .. }), true) => Classified::Decl {
                        target: if type_name == name {
                            TargetKind::Constructor
                        } else {
                            TargetKind::Method
                        },
                        name: name.to_owned(),
                    },
                    (Some(Scope::Type { .. }), false) => {
                        Classified::Unclassifiable(format!("`{name}(...)` is not followed by a body or `;`"))
                    }
                    _ => Classified::Unclassifiable(format!("`{name}(...)` is not a member declaration")),
                };
            }
            Tok::Punct(c @ (';' | '=' | ',')) if generic_depth <= 0 => {
                let Some(name) = last_ident else {
                    return Classified::Unclassifiable(format!("no name before `{c}`"));
                };
                if consumed < 2 {
                    return Classified::Unclassifiable(format!("`{name}` is not a declaration"));
                }
                return match scopes.last() {
                    Some(Scope::Type { .. }) => Classified::Decl {
                        target: TargetKind::Field,
                        name: name.to_owned(),
                    },
                    Some(Scope::Code) => Classified::Decl {
                        target: TargetKind::Local,
                        name: name.to_owned(),
                    },
                    None => Classified::Unclassifiable(format!("`{name}` is declared outside any type")),
                };
            }
            Tok::Punct(c @ ('{' | '}' | ')')) => {
                return Classified::Unclassifiable(format!("unexpected `{c}` where a declaration was expected"));
            }
            Tok::At => {
                // a further annotation among the modifiers or on a type use
                let mut next = idx + 1;
                while tokens.get(next).is_some_and(|t| matches!(t.tok, Tok::Ident(_))) && !is_type_keyword(tokens, next)
                {
                    next += 1;
                    if tokens.get(next).is_some_and(|t| is_punct(t, '.')) {
                        next += 1;
                    } else {
                        break;
                    }
                }
                if tokens.get(next).is_some_and(|t| is_punct(t, '(')) {
                    match matching(tokens, next, '(', ')') {
                        Some(close) => next = close + 1,
                        None => return Classified::Unclassifiable("unbalanced parentheses".into()),
                    }
                }
                idx = next;
                continue;
            }
            Tok::Ident(word) => last_ident = Some(word),
            _ => {}
        }
        if !matches!(t.tok, Tok::Punct('[') | Tok::Punct(']') | Tok::At) {
            consumed += 1;
        }
        idx += 1;
    }
    Classified::Unclassifiable("end of file where a declaration was expected".into())
}

/// Extracts host-language annotations from Java-like source.
pub fn extract_attributes(text: &str, path: &str) -> FileExtraction {
    let tokens = lex(text);
    let mut out = FileExtraction::default();
    let mut package = package_of(path);
    let mut scopes: Vec<Scope> = Vec::new();
    let mut pending: Vec<PendingAnnotation> = Vec::new();
    // type declared but its `{` not reached yet: (id, name)
    let mut pending_type: Option<(usize, String)> = None;
    let mut next_scope_id = 0usize;
    let mut seen_type = false;

    let mut idx = 0;
    while idx < tokens.len() {
        let t = &tokens[idx];
        match &t.tok {
            Tok::At if !tokens.get(idx + 1).is_some_and(|n| is_ident(n, "interface")) => {
                // qualified annotation name; the last segment counts
                let mut j = idx + 1;
                let mut name = None;
                while let Some(Tok::Ident(word)) = tokens.get(j).map(|t| &t.tok) {
                    name = Some(word.clone());
                    j += 1;
                    if tokens.get(j).is_some_and(|t| is_punct(t, '.'))
                        && matches!(tokens.get(j + 1).map(|t| &t.tok), Some(Tok::Ident(_)))
                    {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let mut args = String::new();
                if tokens.get(j).is_some_and(|t| is_punct(t, '(')) {
                    match matching(&tokens, j, '(', ')') {
                        Some(close) => {
                            args = text[tokens[j].end..tokens[close].start].to_owned();
                            j = close + 1;
                        }
                        None => j = tokens.len(),
                    }
                }
                if let Some(kind) = name.as_deref().and_then(AnnotationKind::from_source_name) {
                    pending.push(PendingAnnotation {
                        kind,
                        args,
                        line: t.line,
                        column: t.column,
                    });
                }
                idx = j.max(idx + 1);
                continue;
            }
            Tok::Ident(word) if word == "package" && scopes.is_empty() && !seen_type => {
                let mut j = idx + 1;
                let mut segments = Vec::new();
                while let Some(Tok::Ident(seg)) = tokens.get(j).map(|t| &t.tok) {
                    segments.push(seg.clone());
                    j += 1;
                    if tokens.get(j).is_some_and(|t| is_punct(t, '.')) {
                        j += 1;
                    }
                }
                if tokens.get(j).is_some_and(|t| is_punct(t, ';')) && !segments.is_empty() {
                    package = segments.join("/");
                    pending.clear();
                    idx = j + 1;
                    continue;
                }
            }
            _ => {}
        }

        if !pending.is_empty() {
            let decl = &tokens[idx];
            let classified = classify(&tokens, idx, &scopes);
            let type_scopes: Vec<usize> = scopes
                .iter()
                .rev()
                .filter_map(|s| match s {
                    Scope::Type { id, .. } => Some(*id),
                    Scope::Code => None,
                })
                .collect();
            match classified {
                Classified::Decl { target, name } => {
                    let opens = if target == TargetKind::Type {
                        let id = next_scope_id;
                        next_scope_id += 1;
                        pending_type = Some((id, name.clone()));
                        Some(id)
                    } else {
                        None
                    };
                    for p in pending.drain(..) {
                        let location = SourceLocation::new(path, p.line, p.column);
                        match parse_arguments(p.kind, &p.args) {
                            Ok((values, attrs)) => out.push(
                                AnnotationInstance {
                                    kind: p.kind,
                                    values,
                                    attrs,
                                    target,
                                    target_name: name.clone(),
                                    enclosing_components: Vec::new(),
                                    location,
                                    package: String::new(),
                                    declaration_line: decl.line,
                                },
                                ContextHint::Lexical {
                                    scopes: type_scopes.clone(),
                                    opens,
                                },
                            ),
                            Err(message) => out.findings.push(
                                Finding::new(
                                    CheckId::MalformedAnnotation,
                                    format!("malformed @{}: {message}", p.kind),
                                )
                                .at(location),
                            ),
                        }
                    }
                }
                Classified::Unclassifiable(reason) => {
                    for p in pending.drain(..) {
                        out.findings.push(
                            Finding::new(
                                CheckId::UnclassifiableTarget,
                                format!("cannot classify the target of @{}: {reason}", p.kind),
                            )
                            .at(SourceLocation::new(path, p.line, p.column)),
                        );
                    }
                }
            }
        }

        // `@interface` or a type keyword declares a type whose body opens at the next `{`
        let keyword_at = if matches!(t.tok, Tok::At) { idx + 1 } else { idx };
        if is_type_keyword(&tokens, keyword_at) {
            seen_type = true;
            if pending_type.is_none() {
                if let Some(Tok::Ident(name)) = tokens.get(keyword_at + 1).map(|t| &t.tok) {
                    pending_type = Some((next_scope_id, name.clone()));
                    next_scope_id += 1;
                }
            }
            idx = keyword_at + 1;
            continue;
        }
        match t.tok {
            Tok::Punct('{') => scopes.push(match pending_type.take() {
                Some((id, name)) => Scope::Type { id, name },
                None => Scope::Code,
            }),
            Tok::Punct('}') => {
                scopes.pop();
            }
            _ => {}
        }
        idx += 1;
    }

    for p in pending {
        out.findings.push(
            Finding::new(
                CheckId::UnclassifiableTarget,
                format!("@{} is not followed by a declaration", p.kind),
            )
            .at(SourceLocation::new(path, p.line, p.column)),
        );
    }
    for instance in &mut out.instances {
        instance.package = package.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::CAR_SNIPPET_JAVA;

    fn summary(out: &FileExtraction) -> Vec<(AnnotationKind, Vec<String>, TargetKind, String)> {
        out.instances
            .iter()
            .map(|i| (i.kind, i.values.clone(), i.target, i.target_name.clone()))
            .collect()
    }

    #[test]
    fn car_snippet() {
        let out = extract_attributes(CAR_SNIPPET_JAVA, "Car.java");
        assert!(out.findings.is_empty(), "{:?}", out.findings);
        use AnnotationKind as K;
        use TargetKind as T;
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(
            summary(&out),
            vec![
                (K::Component, s(&["Car"]), T::Type, "Car".into()),
                (K::Part, s(&["rear"]), T::Field, "rear".into()),
                (K::Part, s(&["e"]), T::Field, "e".into()),
                (K::AddPart, s(&["rear", "e"]), T::Constructor, "Car".into()),
                (K::Connects, vec![], T::Constructor, "Car".into()),
            ]
        );
        let connects = &out.instances[4];
        assert_eq!(connects.attr("left"), Some("rear"));
        assert_eq!(connects.attr("right"), Some("e.p"));
        assert_eq!(connects.attr("type"), Some("LEFT"));
    }

    #[test]
    fn array_valued_component() {
        let out = extract_attributes(r#"@Component({"A","B"}) class X {}"#, "X.java");
        assert_eq!(out.instances.len(), 1);
        assert_eq!(out.instances[0].values, ["A", "B"]);
    }

    #[test]
    fn foreign_annotations_are_ignored() {
        let text =
            "class X {\n  @Override\n  public String toString() { return \"\"; }\n  @SuppressWarnings(\"x\") int y;\n}";
        let out = extract_attributes(text, "X.java");
        assert!(out.instances.is_empty() && out.findings.is_empty());
    }

    #[test]
    fn methods_locals_and_qualified_names() {
        let text = r#"
package vehicle.parts;

@arch.Component("Engine")
public class Engine implements Runnable {
    @Port("p")
    public synchronized void start() throws IOException, Foo { }

    @Port("p")
    abstract <T> List<T> stop(Map<String, T> m);

    void wire() {
        @Connector(left="a", right="b") Map<A, B> table = new HashMap<>();
        @Connects(left = "a", right = "b") helper();
    }
}
"#;
        let out = extract_attributes(text, "src/Engine.java");
        assert_eq!(
            summary(&out)
                .into_iter()
                .map(|(k, _, t, n)| (k, t, n))
                .collect::<Vec<_>>(),
            vec![
                (AnnotationKind::Component, TargetKind::Type, "Engine".into()),
                (AnnotationKind::Port, TargetKind::Method, "start".into()),
                (AnnotationKind::Port, TargetKind::Method, "stop".into()),
                (AnnotationKind::Connector, TargetKind::Local, "table".into()),
            ]
        );
        assert!(out.instances.iter().all(|i| i.package == "vehicle/parts"));
        assert_eq!(out.findings.len(), 1);
        assert_eq!(out.findings[0].check_id, CheckId::UnclassifiableTarget);
        assert_eq!(out.findings[0].locations[0].line, 14);
    }

    #[test]
    fn nested_types_get_their_own_scope() {
        let text = r#"
@Component("A") class A {
    @Component("B") static class B {
        @Part("x") X x;
    }
    @Part("y") Y y;
}
"#;
        let out = extract_attributes(text, "A.java");
        let scopes: Vec<&ContextHint> = out.hints.iter().collect();
        assert_eq!(
            scopes[0],
            &ContextHint::Lexical {
                scopes: vec![],
                opens: Some(0)
            }
        );
        assert_eq!(
            scopes[1],
            &ContextHint::Lexical {
                scopes: vec![0],
                opens: Some(1)
            }
        );
        assert_eq!(
            scopes[2],
            &ContextHint::Lexical {
                scopes: vec![1, 0],
                opens: None
            }
        );
        assert_eq!(
            scopes[3],
            &ContextHint::Lexical {
                scopes: vec![0],
                opens: None
            }
        );
    }

    #[test]
    fn strings_and_comments_do_not_confuse_braces() {
        let text = r#"
@Component("A") class A {
    String s = "{ not a brace";
    // } nor this
    /* } or this */
    @Part("y") Y y;
}
"#;
        let out = extract_attributes(text, "A.java");
        assert_eq!(
            out.hints[1],
            ContextHint::Lexical {
                scopes: vec![0],
                opens: None
            }
        );
        assert_eq!(out.instances[1].target, TargetKind::Field);
    }

    #[test]
    fn malformed_arguments() {
        let out = extract_attributes("class A { @Part(\"\") int x; }", "A.java");
        assert!(out.instances.is_empty());
        assert_eq!(out.findings[0].check_id, CheckId::MalformedAnnotation);
    }

    #[test]
    fn annotation_type_declaration() {
        let text = "@Component(\"Meta\") public @interface Meta { String[] value(); }";
        let out = extract_attributes(text, "Meta.java");
        assert_eq!(out.instances[0].target, TargetKind::Type);
        assert_eq!(out.instances[0].target_name, "Meta");
    }

    #[test]
    fn trailing_annotation_is_unclassifiable() {
        let out = extract_attributes("class A { @Part(\"x\") }", "A.java");
        assert_eq!(out.findings.len(), 1);
        assert_eq!(out.findings[0].check_id, CheckId::UnclassifiableTarget);
    }
}
