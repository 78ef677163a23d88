//! The intended structure: classes with property definitions, and value sets.
//!
//! A definition graph is turned into a [`Schema`] by [`load_schema`], then
//! checked into a [`CheckedSchema`] by [`resolve_schema`]. Emitters and the
//! validator only accept the checked form.

mod cardinality;
mod error;
mod load;
mod propdefs;
mod resolve;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::rdf::{Iri, PrefixMap};

pub use cardinality::parse_cardinality;
pub use error::{CompileError, ErrorCode};
pub use load::load_schema;
pub use propdefs::{format_property_block, parse_property_block};
pub use resolve::{resolve_schema, CheckedSchema, EffectiveProperty};

pub const DEFAULT_PROPERTY_DEFINITIONS: &str = "http://empusa.org/0.1#propertyDefinitions";
pub const DEFAULT_ENUMERATED_VALUE_ROOT: &str = "http://empusa.org/0.1#EnumeratedValueClass";
pub const DEFAULT_INDEX_PREDICATE: &str = "http://empusa.org/0.1#index";

/// The four multiplicities of the definition language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Cardinality {
    #[serde(rename = "0..1")]
    ZeroOrOne,
    #[serde(rename = "1..1")]
    ExactlyOne,
    #[serde(rename = "0..N")]
    ZeroOrMore,
    #[serde(rename = "1..N")]
    OneOrMore,
}

impl Cardinality {
    pub const ALL: [Cardinality; 4] = [
        Cardinality::ZeroOrOne,
        Cardinality::ExactlyOne,
        Cardinality::ZeroOrMore,
        Cardinality::OneOrMore,
    ];

    pub fn from_bounds(min: usize, max_is_one: bool) -> Self {
        match (min >= 1, max_is_one) {
            (false, true) => Cardinality::ZeroOrOne,
            (true, true) => Cardinality::ExactlyOne,
            (false, false) => Cardinality::ZeroOrMore,
            (true, false) => Cardinality::OneOrMore,
        }
    }

    pub fn min(self) -> usize {
        match self {
            Cardinality::ZeroOrOne | Cardinality::ZeroOrMore => 0,
            Cardinality::ExactlyOne | Cardinality::OneOrMore => 1,
        }
    }

    pub fn max_is_one(self) -> bool {
        matches!(self, Cardinality::ZeroOrOne | Cardinality::ExactlyOne)
    }

    pub fn token(self) -> &'static str {
        match self {
            Cardinality::ZeroOrOne => "0..1",
            Cardinality::ExactlyOne => "1..1",
            Cardinality::ZeroOrMore => "0..N",
            Cardinality::OneOrMore => "1..N",
        }
    }

    /// Whether `count` values satisfy this multiplicity.
    pub fn admits(self, count: usize) -> bool {
        count >= self.min() && (!self.max_is_one() || count <= 1)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// How multiple values are stored. `=` marks an ordered list (an RDF
/// collection), `~` a numbered list (entries carrying a 0-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ContainerKind {
    #[serde(rename = "none")]
    Plain,
    OrderedList,
    NumberedList,
}

impl ContainerKind {
    pub fn marker(self) -> &'static str {
        match self {
            ContainerKind::Plain => "",
            ContainerKind::OrderedList => "=",
            ContainerKind::NumberedList => "~",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            ContainerKind::Plain => "none",
            ContainerKind::OrderedList => "ordered list",
            ContainerKind::NumberedList => "numbered list",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueType {
    Datatype(Iri),
    ClassRef(Iri),
    ExternalIri,
    ValueSetRef(Iri),
}

impl ValueType {
    pub fn kind(&self) -> &'static str {
        match self {
            ValueType::Datatype(_) => "datatype",
            ValueType::ClassRef(_) => "class",
            ValueType::ExternalIri => "iri",
            ValueType::ValueSetRef(_) => "valueSet",
        }
    }

    pub fn target(&self) -> Option<&Iri> {
        match self {
            ValueType::Datatype(i) | ValueType::ClassRef(i) | ValueType::ValueSetRef(i) => Some(i),
            ValueType::ExternalIri => None,
        }
    }

    pub fn is_datatype(&self) -> bool {
        matches!(self, ValueType::Datatype(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub predicate: Iri,
    pub value_type: ValueType,
    pub cardinality: Cardinality,
    pub container: ContainerKind,
    pub description: Option<String>,
    /// 1-based line inside the owning definition block.
    pub source_line: usize,
}

impl PropertyDef {
    /// True when the two definitions constrain values identically.
    pub fn same_constraint(&self, other: &PropertyDef) -> bool {
        self.value_type == other.value_type && self.cardinality == other.cardinality && self.container == other.container
    }

    /// Cardinality token with its container marker, e.g. `=0..N`.
    pub fn marked_token(&self) -> String {
        format!("{}{}", self.container.marker(), self.cardinality.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub iri: Iri,
    pub label: Option<String>,
    pub description: Option<String>,
    pub parents: Vec<Iri>,
    pub own_properties: Vec<PropertyDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSetMember {
    pub iri: Iri,
    /// Parent inside the value set; `None` for direct members of the root.
    pub parent: Option<Iri>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSet {
    pub root: Iri,
    pub label: Option<String>,
    pub description: Option<String>,
    pub members: Vec<ValueSetMember>,
}

impl ValueSet {
    pub fn contains(&self, iri: &Iri) -> bool {
        self.members.iter().any(|m| &m.iri == iri)
    }
}

/// IRIs of the annotation vocabulary the definition language relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub property_definitions: Iri,
    pub enumerated_value_root: Iri,
    /// Predicate carrying the position of a numbered-list entry.
    pub index_predicate: Iri,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary {
            property_definitions: Iri::from_static(DEFAULT_PROPERTY_DEFINITIONS),
            enumerated_value_root: Iri::from_static(DEFAULT_ENUMERATED_VALUE_ROOT),
            index_predicate: Iri::from_static(DEFAULT_INDEX_PREDICATE),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    pub ontology_iri: Option<Iri>,
    pub prefixes: PrefixMap,
    pub classes: BTreeMap<Iri, ClassDef>,
    pub value_sets: BTreeMap<Iri, ValueSet>,
    pub vocab: Vocabulary,
}

impl Schema {
    pub fn new(vocab: Vocabulary) -> Self {
        Schema {
            vocab,
            ..Default::default()
        }
    }
}
