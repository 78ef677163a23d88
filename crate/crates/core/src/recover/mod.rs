//! Recovers the structure actually present in a dataset and compares it with
//! the schema.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::rdf::{vocab, Graph, Iri, Term};
use crate::schema::{Cardinality, CheckedSchema, ContainerKind, PropertyDef, ValueType, Vocabulary};

/// What an object of a property turned out to be.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetKind {
    Datatype(Iri),
    Class(Iri),
    UntypedIri,
    UntypedBlank,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetKind::Datatype(d) => write!(f, "datatype:{}", d.as_str()),
            TargetKind::Class(c) => write!(f, "class:{}", c.as_str()),
            TargetKind::UntypedIri => f.write_str("untyped-iri"),
            TargetKind::UntypedBlank => f.write_str("blank-untyped"),
        }
    }
}

/// Kinds of a single object: one per `rdf:type`, or the datatype or untyped marker.
pub type Signature = BTreeSet<TargetKind>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObservedProperty {
    #[serde(serialize_with = "iri_str")]
    pub predicate: Iri,
    /// Container shape seen on every object; target kinds then describe the
    /// list members or entry values.
    pub container: ContainerKind,
    #[serde(serialize_with = "kind_map")]
    pub target_kinds: BTreeMap<TargetKind, usize>,
    #[serde(serialize_with = "signature_map")]
    pub target_signatures: BTreeMap<Signature, usize>,
    pub min_count: usize,
    pub max_count: usize,
    pub subjects_with: usize,
    pub subjects_total: usize,
    /// Per-instance member counts when the objects are ordered lists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member_min_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member_max_count: Option<usize>,
}

impl ObservedProperty {
    /// Value-count bounds: list members for ordered lists, triples otherwise.
    pub fn value_bounds(&self) -> (usize, usize) {
        match (self.member_min_count, self.member_max_count) {
            (Some(min), Some(max)) => (min, max),
            _ => (self.min_count, self.max_count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObservedSchema {
    #[serde(serialize_with = "class_map")]
    pub classes: BTreeMap<Iri, Vec<ObservedProperty>>,
    #[serde(serialize_with = "count_map")]
    pub instance_counts: BTreeMap<Iri, usize>,
}

impl ObservedSchema {
    pub fn property(&self, class: &Iri, predicate: &Iri) -> Option<&ObservedProperty> {
        self.classes.get(class)?.iter().find(|p| &p.predicate == predicate)
    }

    pub fn to_json(&self) -> String {
        crate::canonical_json(self)
    }
}

fn iri_str<S: Serializer>(iri: &Iri, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(iri.as_str())
}

fn kind_map<S: Serializer>(m: &BTreeMap<TargetKind, usize>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, n)| (k.to_string(), n)))
}

fn signature_map<S: Serializer>(m: &BTreeMap<Signature, usize>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(sig, n)| {
        let kinds: Vec<String> = sig.iter().map(ToString::to_string).collect();
        (kinds.join(" "), n)
    }))
}

fn class_map<S: Serializer>(m: &BTreeMap<Iri, Vec<ObservedProperty>>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.as_str(), v)))
}

fn count_map<S: Serializer>(m: &BTreeMap<Iri, usize>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.as_str(), v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryOptions {
    /// Predicate marking numbered-list entries.
    pub index_predicate: Iri,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            index_predicate: Vocabulary::default().index_predicate,
        }
    }
}

/// Observed structure of `data` with the default vocabulary.
pub fn recover_structure(data: &Graph) -> ObservedSchema {
    recover_structure_with(data, &RecoveryOptions::default())
}

pub fn recover_structure_with(data: &Graph, options: &RecoveryOptions) -> ObservedSchema {
    let rdf_type = Iri::from_static(vocab::RDF_TYPE);
    let classes: BTreeSet<Iri> = data
        .triples()
        .filter(|t| t.predicate == rdf_type && !t.subject.is_literal())
        .filter_map(|t| t.object.as_iri().cloned())
        .collect();
    let observed: Vec<(Iri, usize, Vec<ObservedProperty>)> = classes
        .into_par_iter()
        .map(|class| {
            let instances = data.instances_of(&class);
            let props = observe_class(data, &instances, options);
            (class, instances.len(), props)
        })
        .collect();
    let mut out = ObservedSchema::default();
    for (class, count, props) in observed {
        out.instance_counts.insert(class.clone(), count);
        out.classes.insert(class, props);
    }
    out
}

fn observe_class(data: &Graph, instances: &BTreeSet<Term>, options: &RecoveryOptions) -> Vec<ObservedProperty> {
    let mut predicates: BTreeSet<&Iri> = BTreeSet::new();
    for instance in instances {
        if let Some(ps) = data.predicates_of(instance) {
            predicates.extend(ps.keys().filter(|p| p.as_str() != vocab::RDF_TYPE));
        }
    }
    predicates
        .into_iter()
        .map(|p| {
            let objects: Vec<Vec<Term>> = instances.iter().map(|i| data.objects_of(i, p)).collect();
            observe_property(data, p, &objects, options)
        })
        .collect()
}

fn observe_property(data: &Graph, predicate: &Iri, objects: &[Vec<Term>], options: &RecoveryOptions) -> ObservedProperty {
    let all = || objects.iter().flatten();
    let value = Iri::from_static(vocab::RDF_VALUE);
    let first = Iri::from_static(vocab::RDF_FIRST);
    let is_head = |o: &Term| o.is_iri_str(vocab::RDF_NIL) || (!o.is_literal() && data.count(o, &first) > 0);
    let lists: Option<Vec<Vec<Term>>> = (all().next().is_some() && all().all(is_head))
        .then(|| {
            objects
                .iter()
                .map(|heads| {
                    let mut members = Vec::new();
                    for h in heads {
                        members.extend(data.list_members(h).ok()?);
                    }
                    Some(members)
                })
                .collect()
        })
        .flatten();
    let numbered = all().next().is_some()
        && all().all(|o| !o.is_literal() && data.count(o, &options.index_predicate) > 0);

    let (container, values): (ContainerKind, Vec<Vec<Term>>) = if let Some(lists) = lists {
        (ContainerKind::OrderedList, lists)
    } else if numbered {
        let values = objects.iter().map(|entries| entries.iter().flat_map(|e| data.objects_of(e, &value)).collect()).collect();
        (ContainerKind::NumberedList, values)
    } else {
        (ContainerKind::Plain, objects.to_vec())
    };

    let bounds = |counts: Vec<usize>| {
        let with = counts.iter().filter(|&&c| c > 0).count();
        let max = counts.iter().copied().max().unwrap_or(0);
        let min = if with < counts.len() { 0 } else { counts.iter().copied().min().unwrap_or(0) };
        (min, max, with)
    };
    let subjects_total = objects.len();
    let (min_count, max_count, subjects_with) = bounds(objects.iter().map(Vec::len).collect());
    let (member_min_count, member_max_count) = match container {
        ContainerKind::OrderedList => {
            let (min, max, _) = bounds(values.iter().map(Vec::len).collect());
            (Some(min), Some(max))
        }
        _ => (None, None),
    };

    let mut target_kinds = BTreeMap::new();
    let mut target_signatures = BTreeMap::new();
    for v in values.iter().flatten() {
        let sig = signature(data, v);
        for k in &sig {
            *target_kinds.entry(k.clone()).or_insert(0) += 1;
        }
        *target_signatures.entry(sig).or_insert(0) += 1;
    }
    ObservedProperty {
        predicate: predicate.clone(),
        container,
        target_kinds,
        target_signatures,
        min_count,
        max_count,
        subjects_with,
        subjects_total,
        member_min_count,
        member_max_count,
    }
}

fn signature(data: &Graph, value: &Term) -> Signature {
    match value {
        Term::Literal(l) => BTreeSet::from([TargetKind::Datatype(l.datatype().clone())]),
        _ => {
            let types: Signature = data.types_of(value).into_iter().cloned().map(TargetKind::Class).collect();
            if !types.is_empty() {
                types
            } else if value.is_blank() {
                BTreeSet::from([TargetKind::UntypedBlank])
            } else {
                BTreeSet::from([TargetKind::UntypedIri])
            }
        }
    }
}

/// Folds observed counts into the four multiplicity tokens; ordered lists
/// are judged by their member counts.
pub fn infer_cardinality(op: &ObservedProperty) -> Cardinality {
    let (min, max) = op.value_bounds();
    Cardinality::from_bounds(usize::from(min >= 1), max <= 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiffKind {
    MissingInData,
    ExtraInData,
    CardinalityMismatch,
    TypeMismatch,
    ClassUnused,
    ClassUndeclared,
}

impl DiffKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiffKind::MissingInData => "MISSING_IN_DATA",
            DiffKind::ExtraInData => "EXTRA_IN_DATA",
            DiffKind::CardinalityMismatch => "CARDINALITY_MISMATCH",
            DiffKind::TypeMismatch => "TYPE_MISMATCH",
            DiffKind::ClassUnused => "CLASS_UNUSED",
            DiffKind::ClassUndeclared => "CLASS_UNDECLARED",
        }
    }

    /// Everything but an unused class fails a gate.
    pub fn is_blocking(self) -> bool {
        self != DiffKind::ClassUnused
    }
}

impl fmt::Display for DiffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffEntry {
    #[serde(rename = "class", serialize_with = "iri_str")]
    pub class: Iri,
    #[serde(serialize_with = "opt_iri_str")]
    pub predicate: Option<Iri>,
    pub kind: DiffKind,
    pub intended: String,
    pub observed: String,
}

fn opt_iri_str<S: Serializer>(iri: &Option<Iri>, s: S) -> Result<S::Ok, S::Error> {
    match iri {
        Some(i) => s.serialize_some(i.as_str()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SchemaDiff {
    pub entries: Vec<DiffEntry>,
}

impl SchemaDiff {
    pub fn is_blocking(&self) -> bool {
        self.entries.iter().any(|e| e.kind.is_blocking())
    }

    pub fn kinds(&self) -> BTreeSet<DiffKind> {
        self.entries.iter().map(|e| e.kind).collect()
    }

    pub fn to_json(&self) -> String {
        crate::canonical_json(self)
    }

    pub fn to_markdown(&self) -> String {
        let cell = |s: &str| s.replace('|', "\\|").replace('\n', "<br>");
        let mut out = String::from("| kind | class | predicate | intended | observed |\n|---|---|---|---|---|\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "| {} | `{}` | {} | {} | {} |",
                e.kind,
                e.class.as_str(),
                e.predicate.as_ref().map(|p| format!("`{}`", p.as_str())).unwrap_or_default(),
                cell(&e.intended),
                cell(&e.observed)
            );
        }
        out
    }
}

fn describe(def: &PropertyDef) -> String {
    let target = match &def.value_type {
        ValueType::Datatype(t) | ValueType::ClassRef(t) => t.as_str().to_owned(),
        ValueType::ValueSetRef(t) => format!("@{}", t.as_str()),
        ValueType::ExternalIri => "IRI".to_owned(),
    };
    format!("{} {}", def.container.describe(), target)
}

fn accepts(schema: &CheckedSchema, expected: &ValueType, kind: &TargetKind) -> bool {
    match (expected, kind) {
        (ValueType::Datatype(d), TargetKind::Datatype(k)) => d == k,
        (ValueType::ClassRef(c), TargetKind::Class(k)) => schema.is_subclass_of(k, c),
        (ValueType::ExternalIri, TargetKind::UntypedIri | TargetKind::Class(_)) => true,
        (ValueType::ValueSetRef(_), TargetKind::UntypedIri) => true,
        (ValueType::ValueSetRef(r), TargetKind::Class(k)) => k == r,
        _ => false,
    }
}

/// Intended-versus-actual gaps between the schema and an observed dataset.
pub fn diff_schema(schema: &CheckedSchema, observed: &ObservedSchema) -> SchemaDiff {
    let mut entries = Vec::new();
    let entry = |kind, class: &Iri, predicate: Option<&Iri>, intended: String, observed: String| DiffEntry {
        class: class.clone(),
        predicate: predicate.cloned(),
        kind,
        intended,
        observed,
    };
    for class in schema.classes() {
        let c = &class.iri;
        let instances = observed.instance_counts.get(c).copied().unwrap_or(0);
        if instances == 0 {
            entries.push(entry(DiffKind::ClassUnused, c, None, "declared".into(), "0 instances".into()));
            continue;
        }
        let props = schema.effective_properties(c).unwrap_or_default();
        for prop in props {
            let def = &prop.def;
            let p = &def.predicate;
            let obs = observed.property(c, p).filter(|o| o.subjects_with > 0);
            let Some(obs) = obs else {
                if def.cardinality.min() >= 1 {
                    entries.push(entry(DiffKind::MissingInData, c, Some(p), def.marked_token(), "absent".into()));
                }
                continue;
            };
            let inferred = infer_cardinality(obs);
            let (min, max) = obs.value_bounds();
            if (max > 1 && def.cardinality.max_is_one()) || (min == 0 && def.cardinality.min() >= 1) {
                entries.push(entry(
                    DiffKind::CardinalityMismatch,
                    c,
                    Some(p),
                    def.cardinality.token().into(),
                    inferred.token().into(),
                ));
            }
            let container_ok = obs.container == def.container;
            let bad: Vec<String> = obs
                .target_signatures
                .keys()
                .filter(|sig| !sig.iter().any(|k| accepts(schema, &def.value_type, k)))
                .flatten()
                .map(ToString::to_string)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if !container_ok || !bad.is_empty() {
                let seen = if bad.is_empty() {
                    obs.container.describe().to_owned()
                } else {
                    format!("{} {}", obs.container.describe(), bad.join(" "))
                };
                entries.push(entry(DiffKind::TypeMismatch, c, Some(p), describe(def), seen));
            }
        }
        let declared: BTreeSet<&Iri> = props.iter().map(|p| &p.def.predicate).collect();
        for obs in observed.classes.get(c).into_iter().flatten() {
            if !declared.contains(&obs.predicate) {
                entries.push(entry(
                    DiffKind::ExtraInData,
                    c,
                    Some(&obs.predicate),
                    "absent".into(),
                    infer_cardinality(obs).token().into(),
                ));
            }
        }
    }
    for (c, n) in &observed.instance_counts {
        if schema.class(c).is_err() && schema.value_set(c).is_err() {
            entries.push(entry(DiffKind::ClassUndeclared, c, None, "absent".into(), format!("{n} instances")));
        }
    }
    entries.sort();
    SchemaDiff { entries }
}
