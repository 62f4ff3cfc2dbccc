//! Parser for the `.arch` description language.
//!
//! ```text
//! // line comment
//! top component Car {
//!     part rear: Wheel [*];
//!     part e: Engine;
//!     connector c1: rear <- e.p;
//! }
//! component Engine { port p; }
//! component Wheel {}
//! connector c9: Car.rear -> Other.x;   // model-level, between components
//! ```

use thiserror::Error;

use super::{
    validate_model, ArchitectureModel, Component, Connector, Direction, ElementRef, EndpointPath, Multiplicity, Part,
    Port,
};
use crate::diagnostics::CheckId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Duplicate,
    Unresolved,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u32),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Dot,
    DotDot,
    Star,
    Arrow(Direction),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Star => "`*`".into(),
            Tok::Arrow(d) => format!("`{}`", d.arrow()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: u32,
    column: u32,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut tokens = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos {
                line: line_idx as u32 + 1,
                column: i as u32 + 1,
            };
            let c = chars[i];
            let next = chars.get(i + 1).copied();
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '/' && next == Some('/') {
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| syntax(pos, format!("number `{digits}` is too large")))?;
                tokens.push((Tok::Number(n), pos));
                continue;
            }
            let (tok, len) = match (c, next, chars.get(i + 2).copied()) {
                ('<', Some('-'), Some('>')) => (Tok::Arrow(Direction::Bidir), 3),
                ('<', Some('-'), _) => (Tok::Arrow(Direction::Left), 2),
                ('-', Some('>'), _) => (Tok::Arrow(Direction::Right), 2),
                ('.', Some('.'), _) => (Tok::DotDot, 2),
                ('.', _, _) => (Tok::Dot, 1),
                ('{', _, _) => (Tok::LBrace, 1),
                ('}', _, _) => (Tok::RBrace, 1),
                ('[', _, _) => (Tok::LBracket, 1),
                (']', _, _) => (Tok::RBracket, 1),
                (';', _, _) => (Tok::Semi, 1),
                (':', _, _) => (Tok::Colon, 1),
                ('*', _, _) => (Tok::Star, 1),
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            };
            tokens.push((tok, pos));
            i += len;
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    index: usize,
    end: Pos,
    /// Declaration sites, used to place semantic errors.
    sites: Vec<(ElementRef, Pos)>,
    /// Connectors declared inside component blocks.
    pending_connectors: Vec<Connector>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.index).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self, expected: &str) -> Result<(Tok, Pos), ParseError> {
        match self.tokens.get(self.index).cloned() {
            Some(tok) => {
                self.index += 1;
                Ok(tok)
            }
            None => Err(syntax(self.end, format!("expected {expected}, found end of input"))),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, ParseError> {
        let (tok, pos) = self.next(&want.describe())?;
        if tok == want {
            Ok(pos)
        } else {
            Err(syntax(
                pos,
                format!("expected {}, found {}", want.describe(), tok.describe()),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.next(what)? {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (tok, pos) => Err(syntax(pos, format!("expected {what}, found {}", tok.describe()))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        match self.next(&format!("`{kw}`"))? {
            (Tok::Ident(s), pos) if s == kw => Ok(pos),
            (tok, pos) => Err(syntax(pos, format!("expected `{kw}`, found {}", tok.describe()))),
        }
    }

    fn document(&mut self) -> Result<ArchitectureModel, ParseError> {
        let mut model = ArchitectureModel::new();
        while let Some(tok) = self.peek() {
            let pos = self.pos();
            match tok {
                Tok::Ident(kw) if kw == "top" || kw == "component" => {
                    let top_level = kw == "top";
                    if top_level {
                        self.index += 1;
                    }
                    self.keyword("component")?;
                    let component = self.component_body(top_level)?;
                    model.components.push(component);
                }
                Tok::Ident(kw) if kw == "connector" => {
                    let connector = self.connector(None)?;
                    model.connectors.push(connector);
                }
                other => {
                    return Err(syntax(
                        pos,
                        format!(
                            "expected `component`, `top component` or `connector`, found {}",
                            other.describe()
                        ),
                    ))
                }
            }
        }
        Ok(model)
    }

    fn component_body(&mut self, top_level: bool) -> Result<Component, ParseError> {
        let (name, pos) = self.ident("component name")?;
        self.sites.push((ElementRef::component(name.as_str()), pos));
        let mut component = Component::new(name.clone());
        component.top_level = top_level;
        self.expect(Tok::LBrace)?;
        let mut connectors = Vec::new();
        loop {
            let pos = self.pos();
            match self.next("a member or `}`")? {
                (Tok::RBrace, _) => break,
                (Tok::Ident(kw), _) if kw == "port" => {
                    let (port, pos) = self.ident("port name")?;
                    self.expect(Tok::Semi)?;
                    self.sites.push((ElementRef::port(name.as_str(), port.as_str()), pos));
                    component.ports.push(Port::new(port));
                }
                (Tok::Ident(kw), _) if kw == "part" => {
                    let (role, pos) = self.ident("part role")?;
                    self.expect(Tok::Colon)?;
                    let (type_name, _) = self.ident("part type")?;
                    let multiplicity = if self.peek() == Some(&Tok::LBracket) {
                        self.multiplicity()?
                    } else {
                        Multiplicity::ONE
                    };
                    self.expect(Tok::Semi)?;
                    self.sites.push((ElementRef::part(name.as_str(), role.as_str()), pos));
                    component
                        .parts
                        .push(Part::new(role, type_name).with_multiplicity(multiplicity));
                }
                (Tok::Ident(kw), _) if kw == "connector" => {
                    self.index -= 1;
                    connectors.push(self.connector(Some(&name))?);
                }
                (tok, _) => {
                    return Err(syntax(
                        pos,
                        format!("expected `port`, `part`, `connector` or `}}`, found {}", tok.describe()),
                    ))
                }
            }
        }
        self.pending_connectors.extend(connectors);
        Ok(component)
    }

    fn multiplicity(&mut self) -> Result<Multiplicity, ParseError> {
        self.expect(Tok::LBracket)?;
        let pos = self.pos();
        let multiplicity = match self.next("multiplicity")? {
            (Tok::Star, _) => Multiplicity::MANY,
            (Tok::Number(lower), _) => {
                if self.peek() == Some(&Tok::DotDot) {
                    self.index += 1;
                    match self.next("upper bound")? {
                        (Tok::Star, _) => Multiplicity { lower, upper: None },
                        (Tok::Number(upper), _) => Multiplicity {
                            lower,
                            upper: Some(upper),
                        },
                        (tok, pos) => {
                            return Err(syntax(pos, format!("expected upper bound, found {}", tok.describe())))
                        }
                    }
                } else {
                    Multiplicity {
                        lower,
                        upper: Some(lower),
                    }
                }
            }
            (tok, _) => return Err(syntax(pos, format!("expected multiplicity, found {}", tok.describe()))),
        };
        self.expect(Tok::RBracket)?;
        Ok(multiplicity)
    }

    fn connector(&mut self, context: Option<&str>) -> Result<Connector, ParseError> {
        self.keyword("connector")?;
        let (id, pos) = self.ident("connector id")?;
        self.expect(Tok::Colon)?;
        let left = self.path()?;
        let direction = match self.next("connector arrow")? {
            (Tok::Arrow(d), _) => d,
            (tok, pos) => {
                return Err(syntax(
                    pos,
                    format!("expected `->`, `<-` or `<->`, found {}", tok.describe()),
                ))
            }
        };
        let right = self.path()?;
        self.expect(Tok::Semi)?;
        let connector = Connector::new(id, context, left, right, direction);
        self.sites.push((connector.element_ref(), pos));
        Ok(connector)
    }

    fn path(&mut self) -> Result<EndpointPath, ParseError> {
        let (first, _) = self.ident("endpoint path")?;
        let mut segments = vec![first];
        while self.peek() == Some(&Tok::Dot) {
            self.index += 1;
            segments.push(self.ident("path segment")?.0);
        }
        Ok(EndpointPath(segments))
    }
}

/// Parses and validates an architecture description.
pub fn parse_architecture(text: &str) -> Result<ArchitectureModel, ParseError> {
    let tokens = lex(text)?;
    let end = Pos {
        line: text.lines().count().max(1) as u32,
        column: text.lines().last().map_or(1, |l| l.chars().count() as u32 + 1),
    };
    let mut parser = Parser {
        tokens,
        index: 0,
        end,
        sites: Vec::new(),
        pending_connectors: Vec::new(),
    };
    let mut model = parser.document()?;
    model.connectors.append(&mut parser.pending_connectors);
    model.canonicalize();

    let findings = validate_model(&model);
    if findings.is_empty() {
        return Ok(model);
    }
    let located = findings.iter().map(|finding| {
        let kind = match finding.check_id {
            CheckId::DuplicateComponent
            | CheckId::DuplicatePort
            | CheckId::DuplicatePartRole
            | CheckId::DuplicateConnectorId
            | CheckId::DuplicateConnector => ParseErrorKind::Duplicate,
            CheckId::UnresolvedPartType | CheckId::UnresolvedEndpoint | CheckId::UnknownContext => {
                ParseErrorKind::Unresolved
            }
            _ => ParseErrorKind::Invalid,
        };
        let mut sites = parser
            .sites
            .iter()
            .filter(|(element, _)| Some(element) == finding.element.as_ref())
            .map(|(_, pos)| *pos);
        // a duplicate is reported at its second declaration
        let pos = if kind == ParseErrorKind::Duplicate {
            sites
                .nth(1)
                .or_else(|| site_of(&parser.sites, finding.element.as_ref()))
        } else {
            sites.next()
        }
        .unwrap_or(Pos { line: 1, column: 1 });
        ParseError {
            kind,
            line: pos.line,
            column: pos.column,
            message: finding.message.clone(),
        }
    });
    Err(located
        .min_by_key(|e| (e.line, e.column))
        .expect("findings is non-empty"))
}

fn site_of(sites: &[(ElementRef, Pos)], element: Option<&ElementRef>) -> Option<Pos> {
    sites.iter().find(|(e, _)| Some(e) == element).map(|(_, pos)| *pos)
}
