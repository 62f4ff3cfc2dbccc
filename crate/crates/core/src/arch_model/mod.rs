//! Component-and-connector architecture model.
//!
//! An [`ArchitectureModel`] holds components (each owning ports and typed
//! parts) and connectors that wire two endpoints inside a context component,
//! or between top-level components when declared at model level.
//!
//! The model keeps its collections as sorted vectors rather than maps so that
//! ill-formed models (duplicate names, dangling references) can still be
//! represented and reported by [`validate_model`].

mod parse;
mod resolve;
mod serialize;
mod validate;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use parse::{parse_architecture, ParseError, ParseErrorKind};
pub use resolve::{
    list_elements, normalize_connector, resolve_endpoint, trace_endpoint, CanonicalConnector, ResolveError,
};
pub use serialize::serialize_architecture;
pub use validate::validate_model;

/// Returns true for `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Left,
    Right,
    Bidir,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
            Direction::Bidir => Direction::Bidir,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Left => "LEFT",
            Direction::Right => "RIGHT",
            Direction::Bidir => "BIDIR",
        }
    }

    pub fn arrow(self) -> &'static str {
        match self {
            Direction::Left => "<-",
            Direction::Right => "->",
            Direction::Bidir => "<->",
        }
    }

    pub fn from_arrow(arrow: &str) -> Option<Direction> {
        match arrow {
            "<-" => Some(Direction::Left),
            "->" => Some(Direction::Right),
            "<->" => Some(Direction::Bidir),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LEFT" => Ok(Direction::Left),
            "RIGHT" => Ok(Direction::Right),
            "BIDIR" => Ok(Direction::Bidir),
            other => Err(format!("unknown direction `{other}` (expected LEFT, RIGHT or BIDIR)")),
        }
    }
}

/// Part multiplicity. Parsed and kept, never checked against code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multiplicity {
    pub lower: u32,
    /// `None` is unbounded (`*`).
    pub upper: Option<u32>,
}

impl Multiplicity {
    pub const ONE: Multiplicity = Multiplicity {
        lower: 1,
        upper: Some(1),
    };
    pub const MANY: Multiplicity = Multiplicity { lower: 0, upper: None };

    pub fn is_valid(&self) -> bool {
        match self.upper {
            Some(upper) => upper >= 1 && self.lower <= upper,
            None => true,
        }
    }
}

impl Default for Multiplicity {
    fn default() -> Self {
        Multiplicity::ONE
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lower, self.upper) {
            (0, None) => f.write_str("[*]"),
            (lower, None) => write!(f, "[{lower}..*]"),
            (lower, Some(upper)) if lower == upper => write!(f, "[{lower}]"),
            (lower, Some(upper)) => write!(f, "[{lower}..{upper}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
}

impl Port {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Part {
    pub role: String,
    #[serde(rename = "type")]
    pub type_component: String,
    pub multiplicity: Multiplicity,
}

impl Part {
    pub fn new(role: impl Into<String>, type_component: impl Into<String>) -> Self {
        Self {
            role: role.into(),
            type_component: type_component.into(),
            multiplicity: Multiplicity::ONE,
        }
    }

    pub fn with_multiplicity(mut self, multiplicity: Multiplicity) -> Self {
        self.multiplicity = multiplicity;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    #[serde(rename = "topLevel")]
    pub top_level: bool,
    pub ports: Vec<Port>,
    pub parts: Vec<Part>,
}

impl Component {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            top_level: false,
            ports: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn top_level(mut self) -> Self {
        self.top_level = true;
        self
    }

    pub fn with_port(mut self, name: impl Into<String>) -> Self {
        self.ports.push(Port::new(name));
        self
    }

    pub fn with_part(mut self, part: Part) -> Self {
        self.parts.push(part);
        self
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn part(&self, role: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.role == role)
    }

    /// True when `name` is neither a part role nor a port name here.
    pub fn is_fresh_member(&self, name: &str) -> bool {
        self.port(name).is_none() && self.part(name).is_none()
    }

    fn canonicalize(&mut self) {
        self.ports.sort();
        self.parts.sort();
    }
}

/// Dotted endpoint path such as `rear` or `e.p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndpointPath(Vec<String>);

impl EndpointPath {
    pub fn new(segments: Vec<String>) -> Result<Self, String> {
        if segments.is_empty() {
            return Err("endpoint path is empty".to_owned());
        }
        if let Some(bad) = segments.iter().find(|s| !is_identifier(s)) {
            return Err(format!("`{bad}` is not a valid identifier"));
        }
        Ok(Self(segments))
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn first(&self) -> &str {
        &self.0[0]
    }

    /// Returns a new path with `segment` prepended.
    pub fn prefixed(&self, segment: &str) -> EndpointPath {
        let mut segments = Vec::with_capacity(self.0.len() + 1);
        segments.push(segment.to_owned());
        segments.extend(self.0.iter().cloned());
        EndpointPath(segments)
    }

    /// Returns a copy with segment `index` replaced.
    pub fn with_segment(&self, index: usize, segment: &str) -> EndpointPath {
        let mut segments = self.0.clone();
        segments[index] = segment.to_owned();
        EndpointPath(segments)
    }
}

impl fmt::Display for EndpointPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

impl FromStr for EndpointPath {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EndpointPath::new(s.split('.').map(str::to_owned).collect())
    }
}

impl Serialize for EndpointPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EndpointPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Connector {
    pub id: String,
    /// Owning component; `None` for model-level connectors between top-level components.
    pub context: Option<String>,
    pub left: EndpointPath,
    pub right: EndpointPath,
    pub direction: Direction,
}

impl Connector {
    pub fn new(
        id: impl Into<String>,
        context: Option<&str>,
        left: EndpointPath,
        right: EndpointPath,
        direction: Direction,
    ) -> Self {
        Self {
            id: id.into(),
            context: context.map(str::to_owned),
            left,
            right,
            direction,
        }
    }

    pub fn element_ref(&self) -> ElementRef {
        ElementRef::Connector {
            context: self.context.clone(),
            id: self.id.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArchitectureModel {
    pub components: Vec<Component>,
    pub connectors: Vec<Connector>,
}

impl ArchitectureModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty() && self.connectors.is_empty()
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn component_mut(&mut self, name: &str) -> Option<&mut Component> {
        self.components.iter_mut().find(|c| c.name == name)
    }

    pub fn connector(&self, id: &str) -> Option<&Connector> {
        self.connectors.iter().find(|c| c.id == id)
    }

    pub fn top_level_components(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.top_level)
    }

    /// Sorts every collection into canonical order so that equality does
    /// not depend on declaration order.
    pub fn canonicalize(&mut self) {
        for component in &mut self.components {
            component.canonicalize();
        }
        self.components.sort_by(|a, b| {
            a.name
                .cmp(&b.name)
                .then_with(|| a.top_level.cmp(&b.top_level))
                .then_with(|| a.ports.cmp(&b.ports))
                .then_with(|| a.parts.cmp(&b.parts))
        });
        self.connectors.sort_by(|a, b| {
            a.id.cmp(&b.id)
                .then_with(|| a.context.cmp(&b.context))
                .then_with(|| a.left.cmp(&b.left))
                .then_with(|| a.right.cmp(&b.right))
                .then_with(|| a.direction.cmp(&b.direction))
        });
    }

    pub fn canonicalized(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Whether the referenced element is declared.
    pub fn contains(&self, element: &ElementRef) -> bool {
        match element {
            ElementRef::Component(name) => self.component(name).is_some(),
            ElementRef::Part { component, role } => self.component(component).is_some_and(|c| c.part(role).is_some()),
            ElementRef::Port { component, port } => self.component(component).is_some_and(|c| c.port(port).is_some()),
            ElementRef::Connector { context, id } => self.connector(id).is_some_and(|c| &c.context == context),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ElementKind {
    Component,
    Part,
    Port,
    Connector,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Component => "COMPONENT",
            ElementKind::Part => "PART",
            ElementKind::Port => "PORT",
            ElementKind::Connector => "CONNECTOR",
        })
    }
}

/// Uniform address of an architecture element.
///
/// Path shapes: `Car` (component), `Car.rear` (part), `Engine#p` (port),
/// `Car/c1` (connector in `Car`), `/c9` (model-level connector).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementRef {
    Component(String),
    Part { component: String, role: String },
    Port { component: String, port: String },
    Connector { context: Option<String>, id: String },
}

impl ElementRef {
    pub fn component(name: impl Into<String>) -> Self {
        ElementRef::Component(name.into())
    }

    pub fn part(component: impl Into<String>, role: impl Into<String>) -> Self {
        ElementRef::Part {
            component: component.into(),
            role: role.into(),
        }
    }

    pub fn port(component: impl Into<String>, port: impl Into<String>) -> Self {
        ElementRef::Port {
            component: component.into(),
            port: port.into(),
        }
    }

    pub fn connector(context: Option<&str>, id: impl Into<String>) -> Self {
        ElementRef::Connector {
            context: context.map(str::to_owned),
            id: id.into(),
        }
    }

    pub fn kind(&self) -> ElementKind {
        match self {
            ElementRef::Component(_) => ElementKind::Component,
            ElementRef::Part { .. } => ElementKind::Part,
            ElementRef::Port { .. } => ElementKind::Port,
            ElementRef::Connector { .. } => ElementKind::Connector,
        }
    }

    pub fn path(&self) -> String {
        self.to_string()
    }

    /// The component that owns this element (the component itself for
    /// component refs, the context for connectors).
    pub fn owner(&self) -> Option<&str> {
        match self {
            ElementRef::Component(name) => Some(name),
            ElementRef::Part { component, .. } | ElementRef::Port { component, .. } => Some(component),
            ElementRef::Connector { context, .. } => context.as_deref(),
        }
    }

    /// Final name segment: component name, role, port name or connector id.
    pub fn name(&self) -> &str {
        match self {
            ElementRef::Component(name) => name,
            ElementRef::Part { role, .. } => role,
            ElementRef::Port { port, .. } => port,
            ElementRef::Connector { id, .. } => id,
        }
    }
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::Component(name) => f.write_str(name),
            ElementRef::Part { component, role } => write!(f, "{component}.{role}"),
            ElementRef::Port { component, port } => write!(f, "{component}#{port}"),
            ElementRef::Connector { context, id } => {
                write!(f, "{}/{id}", context.as_deref().unwrap_or(""))
            }
        }
    }
}

impl FromStr for ElementRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ident = |part: &str| {
            if is_identifier(part) {
                Ok(part.to_owned())
            } else {
                Err(format!("`{s}` is not a valid element path"))
            }
        };
        if let Some((context, id)) = s.split_once('/') {
            let context = if context.is_empty() {
                None
            } else {
                Some(ident(context)?)
            };
            return Ok(ElementRef::Connector {
                context,
                id: ident(id)?,
            });
        }
        if let Some((component, port)) = s.split_once('#') {
            return Ok(ElementRef::port(ident(component)?, ident(port)?));
        }
        if let Some((component, role)) = s.split_once('.') {
            return Ok(ElementRef::part(ident(component)?, ident(role)?));
        }
        Ok(ElementRef::Component(ident(s)?))
    }
}

impl Ord for ElementRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.path()
            .cmp(&other.path())
            .then_with(|| self.kind().cmp(&other.kind()))
    }
}

impl PartialOrd for ElementRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRefRepr {
    kind: ElementKind,
    path: String,
}

impl Serialize for ElementRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ElementRefRepr {
            kind: self.kind(),
            path: self.path(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ElementRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ElementRefRepr::deserialize(deserializer)?;
        let element: ElementRef = repr.path.parse().map_err(D::Error::custom)?;
        if element.kind() != repr.kind {
            return Err(D::Error::custom(format!(
                "path `{}` does not denote a {}",
                repr.path, repr.kind
            )));
        }
        Ok(element)
    }
}
