use std::collections::{BTreeMap, BTreeSet};

use super::{ClassDef, CompileError, ContainerKind, ErrorCode, PropertyDef, Schema, ValueSet, ValueType};
use crate::rdf::{Iri, PrefixMap};

/// A property as seen from one class, with the class whose definition won.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectiveProperty {
    pub def: PropertyDef,
    pub declared_in: Iri,
}

/// A schema that passed every resolution check, plus the derived tables.
#[derive(Debug, Clone)]
pub struct CheckedSchema {
    schema: Schema,
    linearization: BTreeMap<Iri, Vec<Iri>>,
    effective: BTreeMap<Iri, Vec<EffectiveProperty>>,
    descendants: BTreeMap<Iri, BTreeSet<Iri>>,
}

pub fn resolve_schema(schema: Schema) -> Result<CheckedSchema, Vec<CompileError>> {
    let mut errors = Vec::new();
    let classes = &schema.classes;

    for class in classes.values() {
        for parent in &class.parents {
            if !classes.contains_key(parent) {
                errors.push(
                    CompileError::new(ErrorCode::DanglingReference, format!("parent {parent} is not a declared class"))
                        .class(&class.iri),
                );
            }
        }
        for def in &class.own_properties {
            if let Some(message) = dangling(&schema, &def.value_type) {
                errors.push(
                    CompileError::new(ErrorCode::DanglingReference, message)
                        .class(&class.iri)
                        .predicate(&def.predicate)
                        .line(def.source_line),
                );
            }
            if def.container != ContainerKind::Plain && def.cardinality.max_is_one() {
                errors.push(
                    CompileError::new(
                        ErrorCode::ContainerOnSingle,
                        format!("{} container on single-valued {}", def.container.describe(), def.cardinality),
                    )
                    .class(&class.iri)
                    .predicate(&def.predicate)
                    .line(def.source_line),
                );
            }
        }
    }

    let cycles = find_cycles(classes);
    for cycle in &cycles {
        let names: Vec<String> = cycle.iter().map(Iri::to_string).collect();
        errors.push(
            CompileError::new(ErrorCode::SubclassCycle, format!("subClassOf cycle {}", names.join(" -> ")))
                .class(&cycle[0]),
        );
    }

    let mut checked = CheckedSchema {
        schema: Schema::default(),
        linearization: BTreeMap::new(),
        effective: BTreeMap::new(),
        descendants: BTreeMap::new(),
    };
    if cycles.is_empty() {
        for iri in classes.keys() {
            checked.linearization.insert(iri.clone(), linearize(classes, iri));
        }
        for (iri, line) in &checked.linearization {
            checked.descendants.entry(iri.clone()).or_default();
            for ancestor in &line[..line.len() - 1] {
                checked.descendants.entry(ancestor.clone()).or_default().insert(iri.clone());
            }
        }
        for iri in classes.keys() {
            let props = effective(classes, &checked.linearization, iri, &mut errors);
            checked.effective.insert(iri.clone(), props);
        }
    }

    if errors.is_empty() {
        checked.schema = schema;
        Ok(checked)
    } else {
        errors.sort();
        errors.dedup();
        Err(errors)
    }
}

fn dangling(schema: &Schema, value_type: &ValueType) -> Option<String> {
    match value_type {
        ValueType::ClassRef(target) if !schema.classes.contains_key(target) => Some(if schema.value_sets.contains_key(target) {
            format!("{target} is a value set; reference it as @{}", schema.prefixes.render(target))
        } else {
            format!("{target} is neither a datatype nor a declared class")
        }),
        ValueType::ValueSetRef(target) if !schema.value_sets.contains_key(target) => {
            Some(format!("{target} is not a value-set root"))
        }
        _ => None,
    }
}

/// Each elementary cycle reachable along parent links, reported once and
/// rotated to start at its smallest IRI.
fn find_cycles(classes: &BTreeMap<Iri, ClassDef>) -> Vec<Vec<Iri>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(
        node: &'a Iri,
        classes: &'a BTreeMap<Iri, ClassDef>,
        marks: &mut BTreeMap<&'a Iri, Mark>,
        stack: &mut Vec<&'a Iri>,
        found: &mut BTreeSet<Vec<Iri>>,
    ) {
        marks.insert(node, Mark::Open);
        stack.push(node);
        for parent in classes.get(node).map(|c| c.parents.as_slice()).unwrap_or_default() {
            match marks.get(parent) {
                Some(Mark::Open) => {
                    let start = stack.iter().position(|n| *n == parent).expect("open node is on the stack");
                    let mut cycle: Vec<Iri> = stack[start..].iter().map(|n| (*n).clone()).collect();
                    let min = cycle.iter().enumerate().min_by_key(|(_, n)| *n).map(|(i, _)| i).unwrap_or(0);
                    cycle.rotate_left(min);
                    found.insert(cycle);
                }
                Some(Mark::Done) => {}
                None if classes.contains_key(parent) => visit(parent, classes, marks, stack, found),
                None => {}
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
    }

    let mut marks = BTreeMap::new();
    let mut found = BTreeSet::new();
    for iri in classes.keys() {
        if !marks.contains_key(iri) {
            visit(iri, classes, &mut marks, &mut Vec::new(), &mut found);
        }
    }
    found.into_iter().collect()
}

/// Ancestors root-first, ending with the class itself: depth-first over
/// parents in declaration order, each class placed after all of its parents.
fn linearize(classes: &BTreeMap<Iri, ClassDef>, iri: &Iri) -> Vec<Iri> {
    fn walk(classes: &BTreeMap<Iri, ClassDef>, iri: &Iri, seen: &mut BTreeSet<Iri>, out: &mut Vec<Iri>) {
        if !seen.insert(iri.clone()) {
            return;
        }
        for parent in &classes[iri].parents {
            walk(classes, parent, seen, out);
        }
        out.push(iri.clone());
    }
    let mut out = Vec::new();
    walk(classes, iri, &mut BTreeSet::new(), &mut out);
    out
}

fn effective(
    classes: &BTreeMap<Iri, ClassDef>,
    linearization: &BTreeMap<Iri, Vec<Iri>>,
    iri: &Iri,
    errors: &mut Vec<CompileError>,
) -> Vec<EffectiveProperty> {
    let line = &linearization[iri];
    let mut order: Vec<Iri> = Vec::new();
    let mut definers: BTreeMap<&Iri, Vec<(&Iri, &PropertyDef)>> = BTreeMap::new();
    for class in line {
        for def in &classes[class].own_properties {
            let entry = definers.entry(&def.predicate).or_default();
            if entry.is_empty() {
                order.push(def.predicate.clone());
            }
            entry.push((class, def));
        }
    }
    let is_ancestor = |a: &Iri, b: &Iri| a != b && linearization[b].contains(a);
    order
        .iter()
        .map(|predicate| {
            let all = &definers[predicate];
            let minimal: Vec<&(&Iri, &PropertyDef)> = all
                .iter()
                .filter(|(c, _)| !all.iter().any(|(other, _)| is_ancestor(c, other)))
                .collect();
            let (winner_class, winner) = **minimal.last().expect("at least one definer");
            if let Some((other_class, _)) = minimal.iter().find(|(_, d)| !d.same_constraint(winner)) {
                errors.push(
                    CompileError::new(
                        ErrorCode::OverrideConflict,
                        format!(
                            "inherits conflicting definitions from {other_class} and {winner_class}; redefine it on this class"
                        ),
                    )
                    .class(iri)
                    .predicate(predicate),
                );
            }
            EffectiveProperty {
                def: winner.clone(),
                declared_in: winner_class.clone(),
            }
        })
        .collect()
}

impl CheckedSchema {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn into_schema(self) -> Schema {
        self.schema
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.schema.prefixes
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.schema.classes.values()
    }

    pub fn class(&self, iri: &Iri) -> Result<&ClassDef, CompileError> {
        self.schema
            .classes
            .get(iri)
            .ok_or_else(|| CompileError::new(ErrorCode::UnknownClass, format!("{iri} is not a schema class")))
    }

    pub fn value_sets(&self) -> impl Iterator<Item = &ValueSet> {
        self.schema.value_sets.values()
    }

    pub fn value_set(&self, root: &Iri) -> Result<&ValueSet, CompileError> {
        self.schema
            .value_sets
            .get(root)
            .ok_or_else(|| CompileError::new(ErrorCode::UnknownValueSet, format!("{root} is not a value-set root")))
    }

    /// Own and inherited properties, root class first, file order within a class.
    pub fn effective_properties(&self, class: &Iri) -> Result<&[EffectiveProperty], CompileError> {
        self.class(class)?;
        Ok(&self.effective[class])
    }

    /// Ancestors root-first followed by the class itself.
    pub fn linearization(&self, class: &Iri) -> Result<&[Iri], CompileError> {
        self.class(class)?;
        Ok(&self.linearization[class])
    }

    /// Strict transitive subclasses.
    pub fn descendants(&self, class: &Iri) -> Result<&BTreeSet<Iri>, CompileError> {
        self.class(class)?;
        Ok(&self.descendants[class])
    }

    /// True when `class` equals `ancestor` or inherits from it.
    pub fn is_subclass_of(&self, class: &Iri, ancestor: &Iri) -> bool {
        self.linearization.get(class).is_some_and(|line| line.contains(ancestor))
    }

    pub fn valueset_members(&self, root: &Iri) -> Result<BTreeSet<Iri>, CompileError> {
        Ok(self.value_set(root)?.members.iter().map(|m| m.iri.clone()).collect())
    }

    /// Drops every class that is a strict ancestor of another in the set.
    pub fn most_specific<'a>(&self, classes: impl IntoIterator<Item = &'a Iri>) -> Vec<Iri> {
        let set: BTreeSet<&Iri> = classes.into_iter().filter(|c| self.schema.classes.contains_key(*c)).collect();
        set.iter()
            .filter(|c| !set.iter().any(|other| other != *c && self.is_subclass_of(other, c)))
            .map(|c| (*c).clone())
            .collect()
    }
}
