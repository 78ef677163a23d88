use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use super::accessor_name;
use crate::rdf::{Iri, PrefixMap};
use crate::schema::{CheckedSchema, CompileError, ContainerKind, ValueType};

/// JSON-LD frame for `class`. Plain class-valued properties nest frames of
/// their target class `depth` levels deep; past that they are `@embed: @never`.
pub fn emit_jsonld_frame(schema: &CheckedSchema, class: &Iri, depth: usize) -> Result<String, CompileError> {
    let props = schema.effective_properties(class)?;
    let mut prefixes = PrefixMap::new();
    for (label, ns) in schema.prefixes().iter().filter(|(l, _)| !l.is_empty()) {
        prefixes.insert(label, ns.clone());
    }

    let mut context = Map::new();
    for (label, ns) in prefixes.iter() {
        context.insert(label.to_owned(), Value::String(ns.as_str().to_owned()));
    }
    let mut terms: BTreeMap<Iri, String> = BTreeMap::new();
    let mut taken: BTreeSet<String> = prefixes.iter().map(|(l, _)| l.to_owned()).collect();
    for prop in props {
        let def = &prop.def;
        let name = accessor_name(&def.predicate);
        if !taken.insert(name.clone()) {
            continue;
        }
        let mut term = Map::new();
        term.insert("@id".into(), Value::String(prefixes.render_bare(&def.predicate)));
        match (&def.value_type, def.container) {
            (_, ContainerKind::NumberedList) => {}
            (ValueType::Datatype(d), _) => {
                term.insert("@type".into(), Value::String(prefixes.render_bare(d)));
            }
            _ => {
                term.insert("@type".into(), json!("@id"));
            }
        }
        if def.container == ContainerKind::OrderedList {
            term.insert("@container".into(), json!("@list"));
        }
        context.insert(name.clone(), Value::Object(term));
        terms.insert(def.predicate.clone(), name);
    }

    let framer = Framer {
        schema,
        prefixes: &prefixes,
        terms: &terms,
        depth,
    };
    let mut frame = framer.frame(class, 0);
    frame.insert("@context".into(), Value::Object(context));
    Ok(crate::canonical_json(&Value::Object(frame)))
}

struct Framer<'a> {
    schema: &'a CheckedSchema,
    prefixes: &'a PrefixMap,
    terms: &'a BTreeMap<Iri, String>,
    depth: usize,
}

impl Framer<'_> {
    fn frame(&self, class: &Iri, level: usize) -> Map<String, Value> {
        let mut frame = Map::new();
        frame.insert("@type".into(), Value::String(self.prefixes.render_bare(class)));
        for prop in self.schema.effective_properties(class).unwrap_or_default() {
            let def = &prop.def;
            let ValueType::ClassRef(target) = &def.value_type else {
                continue;
            };
            if def.container != ContainerKind::Plain {
                continue;
            }
            let key = self
                .terms
                .get(&def.predicate)
                .cloned()
                .unwrap_or_else(|| self.prefixes.render_bare(&def.predicate));
            let nested = if level < self.depth {
                Value::Object(self.frame(target, level + 1))
            } else {
                json!({ "@embed": "@never" })
            };
            frame.insert(key, nested);
        }
        frame
    }
}

impl PrefixMap {
    /// CURIE when compactable, otherwise the bare IRI (JSON-LD has no `<>` form).
    pub(crate) fn render_bare(&self, iri: &Iri) -> String {
        self.compact(iri).unwrap_or_else(|| iri.as_str().to_owned())
    }
}
