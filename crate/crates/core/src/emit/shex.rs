use std::collections::BTreeMap;
use std::fmt::Write;

use super::accessor_name;
use crate::rdf::{ns, vocab, Iri, PrefixMap};
use crate::schema::{Cardinality, CheckedSchema, ContainerKind, EffectiveProperty, ValueType};

const HEADER: &str = "\
# Shapes are CLOSED: a predicate not declared for the class is a violation.
# EXTRA rdf:type lets a node carry types beyond the ones listed.
# Ordered lists (=) are RDF collections checked by the *_List shapes;
# numbered lists (~) are entries with a 0-based index checked by the *_Entry shapes.
";

/// ShExC text with one closed shape per class, labelled by the class IRI.
pub fn emit_shex(schema: &CheckedSchema) -> String {
    let mut prefixes = schema.prefixes().clone();
    prefixes.insert_if_absent("rdf", ns::RDF);
    prefixes.insert_if_absent("xsd", ns::XSD);
    let rdf_type = prefixes.render(&Iri::from_static(vocab::RDF_TYPE));

    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        let _ = writeln!(out, "PREFIX {label}: <{}>", ns.as_str());
    }
    if schema.classes().next().is_none() {
        return out;
    }
    out.push('\n');
    out.push_str(HEADER);

    let mut aux: BTreeMap<String, String> = BTreeMap::new();
    let mut aux_names: BTreeMap<(Iri, Iri), String> = BTreeMap::new();
    for class in schema.classes() {
        let mut constraints = Vec::new();
        let mut types = vec![prefixes.render(&class.iri)];
        for d in schema.descendants(&class.iri).into_iter().flatten() {
            types.push(prefixes.render(d));
        }
        constraints.push(format!("{rdf_type} [{}] +", types.join(" ")));
        for prop in schema.effective_properties(&class.iri).unwrap_or_default() {
            constraints.push(constraint(schema, &prefixes, prop, &mut aux, &mut aux_names));
        }
        let _ = write!(out, "\n{} CLOSED EXTRA {rdf_type} {{\n  {}\n}}\n", prefixes.render(&class.iri), constraints.join(" ;\n  "));
    }
    for body in aux.values() {
        out.push('\n');
        out.push_str(body);
    }
    out
}

fn constraint(
    schema: &CheckedSchema,
    prefixes: &PrefixMap,
    prop: &EffectiveProperty,
    aux: &mut BTreeMap<String, String>,
    aux_names: &mut BTreeMap<(Iri, Iri), String>,
) -> String {
    let def = &prop.def;
    let predicate = prefixes.render(&def.predicate);
    let value = value_expr(schema, prefixes, &def.value_type);
    match def.container {
        ContainerKind::Plain => format!("{predicate} {value}{}", repetition(def.cardinality)),
        ContainerKind::OrderedList | ContainerKind::NumberedList => {
            let ordered = def.container == ContainerKind::OrderedList;
            let key = (prop.declared_in.clone(), def.predicate.clone());
            let label = match aux_names.get(&key) {
                Some(label) => label.clone(),
                None => {
                    let suffix = if ordered { "List" } else { "Entry" };
                    let base = format!("{}_{}_{suffix}", prop.declared_in.as_str(), accessor_name(&def.predicate));
                    let mut name = base.clone();
                    let mut n = 2;
                    while aux.contains_key(&name) {
                        name = format!("{base}{n}");
                        n += 1;
                    }
                    let label = prefixes.render(&Iri::new(name.clone()).expect("suffixed IRI stays absolute"));
                    let body = if ordered {
                        let nil = prefixes.render(&Iri::from_static(vocab::RDF_NIL));
                        format!(
                            "{label} CLOSED {{\n  {} {value} ;\n  {} (@{label} OR [{nil}])\n}}\n",
                            prefixes.render(&Iri::from_static(vocab::RDF_FIRST)),
                            prefixes.render(&Iri::from_static(vocab::RDF_REST)),
                        )
                    } else {
                        format!(
                            "{label} CLOSED {{\n  {} {} ;\n  {} {value}\n}}\n",
                            prefixes.render(&schema.schema().vocab.index_predicate),
                            prefixes.render(&Iri::from_static(vocab::XSD_INTEGER)),
                            prefixes.render(&Iri::from_static(vocab::RDF_VALUE)),
                        )
                    };
                    aux.insert(name, body);
                    aux_names.insert(key, label.clone());
                    label
                }
            };
            match (ordered, def.cardinality.min()) {
                (true, 0) => {
                    let nil = prefixes.render(&Iri::from_static(vocab::RDF_NIL));
                    format!("{predicate} (@{label} OR [{nil}]) ?")
                }
                (true, _) => format!("{predicate} @{label}"),
                (false, _) => format!("{predicate} @{label}{}", repetition(def.cardinality)),
            }
        }
    }
}

fn repetition(cardinality: Cardinality) -> &'static str {
    match cardinality {
        Cardinality::ZeroOrOne => " ?",
        Cardinality::ExactlyOne => "",
        Cardinality::ZeroOrMore => " *",
        Cardinality::OneOrMore => " +",
    }
}

fn value_expr(schema: &CheckedSchema, prefixes: &PrefixMap, value_type: &ValueType) -> String {
    match value_type {
        ValueType::Datatype(d) => prefixes.render(d),
        ValueType::ExternalIri => "IRI".to_owned(),
        ValueType::ClassRef(c) => {
            let descendants = schema.descendants(c).into_iter().flatten();
            let refs: Vec<String> = std::iter::once(c).chain(descendants).map(|t| format!("@{}", prefixes.render(t))).collect();
            if refs.len() == 1 {
                refs.into_iter().next().unwrap_or_default()
            } else {
                format!("({})", refs.join(" OR "))
            }
        }
        ValueType::ValueSetRef(root) => {
            let members: Vec<String> = schema
                .valueset_members(root)
                .unwrap_or_default()
                .iter()
                .map(|m| prefixes.render(m))
                .collect();
            format!("[{}]", members.join(" "))
        }
    }
}
