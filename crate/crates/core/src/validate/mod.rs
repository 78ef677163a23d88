//! Checks instance data against a checked schema.

mod lexical;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};

use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

pub use lexical::lexically_valid;

use crate::rdf::{vocab, Graph, Iri, Term};
use crate::schema::{CheckedSchema, ContainerKind, PropertyDef, ValueType};
use crate::Severity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    MissingRequired,
    TooMany,
    BadDatatype,
    BadTargetType,
    NotInValueset,
    NotAnIri,
    UndeclaredPredicate,
    UntypedNode,
    AmbiguousType,
    MalformedList,
}

impl ViolationCode {
    pub const ALL: [ViolationCode; 10] = [
        ViolationCode::MissingRequired,
        ViolationCode::TooMany,
        ViolationCode::BadDatatype,
        ViolationCode::BadTargetType,
        ViolationCode::NotInValueset,
        ViolationCode::NotAnIri,
        ViolationCode::UndeclaredPredicate,
        ViolationCode::UntypedNode,
        ViolationCode::AmbiguousType,
        ViolationCode::MalformedList,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::MissingRequired => "MISSING_REQUIRED",
            ViolationCode::TooMany => "TOO_MANY",
            ViolationCode::BadDatatype => "BAD_DATATYPE",
            ViolationCode::BadTargetType => "BAD_TARGET_TYPE",
            ViolationCode::NotInValueset => "NOT_IN_VALUESET",
            ViolationCode::NotAnIri => "NOT_AN_IRI",
            ViolationCode::UndeclaredPredicate => "UNDECLARED_PREDICATE",
            ViolationCode::UntypedNode => "UNTYPED_NODE",
            ViolationCode::AmbiguousType => "AMBIGUOUS_TYPE",
            ViolationCode::MalformedList => "MALFORMED_LIST",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            ViolationCode::UndeclaredPredicate | ViolationCode::UntypedNode | ViolationCode::AmbiguousType => {
                Severity::Warning
            }
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One divergence between the schema and the data. `focus` is always the
/// subject node being checked, never a literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub code: ViolationCode,
    pub severity: Severity,
    pub focus: Term,
    pub class: Option<Iri>,
    pub predicate: Option<Iri>,
    pub expected: String,
    pub actual: String,
    pub message: String,
}

impl Violation {
    pub fn new(code: ViolationCode, focus: &Term, expected: impl Into<String>, actual: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            code,
            severity: code.severity(),
            focus: focus.clone(),
            class: None,
            predicate: None,
            expected: expected.into(),
            actual: actual.into(),
            message: message.into(),
        }
    }

    pub fn class(mut self, class: &Iri) -> Self {
        self.class = Some(class.clone());
        self
    }

    pub fn predicate(mut self, predicate: &Iri) -> Self {
        self.predicate = Some(predicate.clone());
        self
    }

    fn sort_key(&self) -> (&Term, ViolationCode, &Option<Iri>, &Option<Iri>, &str, &str, &str) {
        (&self.focus, self.code, &self.class, &self.predicate, &self.expected, &self.actual, &self.message)
    }
}

impl PartialOrd for Violation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Violation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} focus={}", self.severity, self.code, self.focus)?;
        if let Some(c) = &self.class {
            write!(f, " class={c}")?;
        }
        if let Some(p) = &self.predicate {
            write!(f, " predicate={p}")?;
        }
        write!(f, " expected={:?} actual={:?} {}", self.expected, self.actual, self.message)
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Violation", 8)?;
        s.serialize_field("code", &self.code)?;
        s.serialize_field("severity", &self.severity)?;
        s.serialize_field("focus", &self.focus.to_string())?;
        s.serialize_field("class", &self.class.as_ref().map(Iri::as_str))?;
        s.serialize_field("predicate", &self.predicate.as_ref().map(Iri::as_str))?;
        s.serialize_field("expected", &self.expected)?;
        s.serialize_field("actual", &self.actual)?;
        s.serialize_field("message", &self.message)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub counts: BTreeMap<ViolationCode, usize>,
    pub checked_node_count: usize,
    pub conformant: bool,
}

impl ValidationReport {
    fn from_violations(mut violations: Vec<Violation>, checked_node_count: usize) -> Self {
        violations.sort();
        let mut counts = BTreeMap::new();
        for v in &violations {
            *counts.entry(v.code).or_insert(0) += 1;
        }
        let conformant = violations.iter().all(|v| v.severity != Severity::Error);
        ValidationReport {
            violations,
            counts,
            checked_node_count,
            conformant,
        }
    }

    pub fn count(&self, code: ViolationCode) -> usize {
        self.counts.get(&code).copied().unwrap_or(0)
    }

    pub fn errors(&self) -> usize {
        self.violations.iter().filter(|v| v.severity == Severity::Error).count()
    }

    pub fn warnings(&self) -> usize {
        self.violations.len() - self.errors()
    }

    /// One line per violation followed by a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let _ = writeln!(out, "{v}");
        }
        let _ = writeln!(
            out,
            "SUMMARY conformant={} checkedNodes={} errors={} warnings={}",
            self.conformant,
            self.checked_node_count,
            self.errors(),
            self.warnings()
        );
        out
    }

    pub fn to_json(&self) -> String {
        crate::canonical_json(self)
    }
}

/// Nodes with at least one schema class among their `rdf:type`s, with those classes.
fn focus_nodes(schema: &CheckedSchema, data: &Graph) -> Vec<(Term, Vec<Iri>)> {
    data.subjects()
        .filter(|s| !s.is_literal())
        .filter_map(|s| {
            let types: Vec<Iri> = data
                .types_of(s)
                .into_iter()
                .filter(|t| schema.class(t).is_ok())
                .cloned()
                .collect();
            (!types.is_empty()).then(|| (s.clone(), types))
        })
        .collect()
}

/// Validates every typed node against each of its schema types, fanning out
/// over focus nodes.
pub fn validate_graph(schema: &CheckedSchema, data: &Graph) -> ValidationReport {
    let focus = focus_nodes(schema, data);
    let violations = focus.par_iter().flat_map_iter(|(node, types)| check_focus(schema, data, node, types)).collect();
    ValidationReport::from_violations(violations, focus.len())
}

/// Same result as [`validate_graph`] on the calling thread only.
pub fn validate_graph_serial(schema: &CheckedSchema, data: &Graph) -> ValidationReport {
    let focus = focus_nodes(schema, data);
    let violations = focus.iter().flat_map(|(node, types)| check_focus(schema, data, node, types)).collect();
    ValidationReport::from_violations(violations, focus.len())
}

fn check_focus(schema: &CheckedSchema, data: &Graph, focus: &Term, types: &[Iri]) -> Vec<Violation> {
    let mut out = Vec::new();
    let unrelated = types.iter().enumerate().any(|(i, a)| {
        types[i + 1..].iter().any(|b| !schema.is_subclass_of(a, b) && !schema.is_subclass_of(b, a))
    });
    if unrelated {
        let names: Vec<&str> = types.iter().map(Iri::as_str).collect();
        out.push(Violation::new(
            ViolationCode::AmbiguousType,
            focus,
            "types related by subclassing",
            names.join(" "),
            "node carries unrelated schema types",
        ));
    }
    let mut declared: BTreeSet<&Iri> = BTreeSet::new();
    for class in types {
        let props = schema.effective_properties(class).unwrap_or_default();
        declared.extend(props.iter().map(|p| &p.def.predicate));
        for prop in props {
            out.extend(check_property(schema, data, focus, class, &prop.def));
        }
    }
    let single = (types.len() == 1).then(|| &types[0]);
    out.extend(undeclared(data, focus, &declared, single));
    out
}

fn undeclared(data: &Graph, focus: &Term, declared: &BTreeSet<&Iri>, class: Option<&Iri>) -> Vec<Violation> {
    let Some(predicates) = data.predicates_of(focus) else {
        return Vec::new();
    };
    predicates
        .iter()
        .filter(|(p, _)| p.as_str() != vocab::RDF_TYPE && !declared.contains(p))
        .map(|(p, objects)| {
            let mut v = Violation::new(
                ViolationCode::UndeclaredPredicate,
                focus,
                "a declared predicate",
                format!("{} value(s)", objects.len()),
                "predicate is not part of the class shape",
            )
            .predicate(p);
            v.class = class.cloned();
            v
        })
        .collect()
}

/// Checks `focus` against the effective properties of `class`, including
/// undeclared predicates relative to that class alone.
pub fn check_node(schema: &CheckedSchema, data: &Graph, focus: &Term, class: &Iri) -> Vec<Violation> {
    let props = schema.effective_properties(class).unwrap_or_default();
    let mut out: Vec<Violation> =
        props.iter().flat_map(|p| check_property(schema, data, focus, class, &p.def)).collect();
    let declared = props.iter().map(|p| &p.def.predicate).collect();
    out.extend(undeclared(data, focus, &declared, Some(class)));
    out.sort();
    out
}

fn check_property(schema: &CheckedSchema, data: &Graph, focus: &Term, class: &Iri, def: &PropertyDef) -> Vec<Violation> {
    let tag = |v: Violation| v.class(class).predicate(&def.predicate);
    let mut out = Vec::new();
    let objects = data.objects_of(focus, &def.predicate);
    let values = match def.container {
        ContainerKind::Plain => Some(objects),
        ContainerKind::OrderedList => ordered_members(data, focus, &objects).map_err(|m| out.push(tag(*m))).ok(),
        ContainerKind::NumberedList => {
            numbered_values(data, focus, &objects, &schema.schema().vocab.index_predicate).map_err(|m| out.push(tag(*m))).ok()
        }
    };
    let Some(values) = values else {
        return out;
    };
    let count = values.len();
    if count < def.cardinality.min() {
        out.push(tag(Violation::new(
            ViolationCode::MissingRequired,
            focus,
            def.cardinality.token(),
            count.to_string(),
            "required property is missing",
        )));
    }
    if count > 1 && def.cardinality.max_is_one() {
        out.push(tag(Violation::new(
            ViolationCode::TooMany,
            focus,
            def.cardinality.token(),
            count.to_string(),
            "more values than the cardinality allows",
        )));
    }
    for value in &values {
        if let Some(v) = classify_term(schema, data, focus, value, &def.value_type) {
            out.push(tag(v));
        }
    }
    out
}

fn malformed(focus: &Term, expected: &str, reason: impl Into<String>) -> Box<Violation> {
    Box::new(Violation::new(ViolationCode::MalformedList, focus, expected, reason, "list structure cannot be read"))
}

fn ordered_members(data: &Graph, focus: &Term, heads: &[Term]) -> Result<Vec<Term>, Box<Violation>> {
    match heads {
        [] => Ok(Vec::new()),
        [head] => data.list_members(head).map_err(|e| malformed(focus, "ordered list", e.to_string())),
        _ => Err(malformed(focus, "ordered list", format!("{} list heads", heads.len()))),
    }
}

fn numbered_values(data: &Graph, focus: &Term, entries: &[Term], index: &Iri) -> Result<Vec<Term>, Box<Violation>> {
    let value = Iri::from_static(vocab::RDF_VALUE);
    let mut slots: Vec<Option<Term>> = vec![None; entries.len()];
    for entry in entries {
        let bad = |reason: String| Err(malformed(focus, "numbered list", reason));
        if entry.is_literal() {
            return bad(format!("literal entry {entry}"));
        }
        let indices = data.objects_of(entry, index);
        let values = data.objects_of(entry, &value);
        let [Term::Literal(i)] = indices.as_slice() else {
            return bad(format!("entry {entry} needs exactly one literal index"));
        };
        let [member] = values.as_slice() else {
            return bad(format!("entry {entry} needs exactly one rdf:value"));
        };
        let position = match i.lexical().parse::<usize>() {
            Ok(p) if i.datatype().as_str() == vocab::XSD_INTEGER && p < entries.len() => p,
            _ => return bad(format!("index {} outside 0..{}", i.lexical(), entries.len())),
        };
        if slots[position].replace(member.clone()).is_some() {
            return bad(format!("index {position} used twice"));
        }
    }
    Ok(slots.into_iter().flatten().collect())
}

/// Checks one value against the expected value type; `focus` is the subject
/// the value hangs off.
pub fn classify_term(schema: &CheckedSchema, data: &Graph, focus: &Term, value: &Term, expected: &ValueType) -> Option<Violation> {
    let fail = |code, expected: &str, message: &str| Some(Violation::new(code, focus, expected, value.to_string(), message));
    match expected {
        ValueType::Datatype(d) => {
            let Term::Literal(lit) = value else {
                return fail(ViolationCode::BadDatatype, d.as_str(), "expected a literal");
            };
            if lit.datatype() != d {
                return fail(ViolationCode::BadDatatype, d.as_str(), "literal has the wrong datatype");
            }
            if lexically_valid(d.as_str(), lit.lexical()) == Some(false) {
                return fail(ViolationCode::BadDatatype, d.as_str(), "not a valid lexical form");
            }
            None
        }
        ValueType::ClassRef(c) => {
            if value.is_literal() {
                return fail(ViolationCode::BadTargetType, c.as_str(), "expected a node, found a literal");
            }
            let types = data.types_of(value);
            if types.is_empty() {
                return fail(ViolationCode::UntypedNode, c.as_str(), "referenced node has no rdf:type");
            }
            if types.iter().any(|t| schema.is_subclass_of(t, c)) {
                return None;
            }
            let names: Vec<&str> = types.iter().map(|t| t.as_str()).collect();
            Some(Violation::new(
                ViolationCode::BadTargetType,
                focus,
                c.as_str(),
                format!("{value} a {}", names.join(" ")),
                "referenced node has an incompatible type",
            ))
        }
        ValueType::ExternalIri => match value {
            Term::Iri(_) => None,
            _ => fail(ViolationCode::NotAnIri, "IRI", "expected an IRI"),
        },
        ValueType::ValueSetRef(root) => match value {
            Term::Iri(iri) if schema.value_set(root).is_ok_and(|vs| vs.contains(iri)) => None,
            _ => fail(ViolationCode::NotInValueset, root.as_str(), "value is not a member of the value set"),
        },
    }
}
