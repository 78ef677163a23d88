use std::collections::{BTreeMap, BTreeSet};

use super::{parse_property_block, ClassDef, CompileError, ErrorCode, Schema, ValueSet, ValueSetMember, Vocabulary};
use crate::rdf::{vocab, Graph, Iri, Term};

/// Extracts classes, property definitions and value sets from a definition graph.
///
/// Parsing continues past bad blocks; every problem found is returned.
pub fn load_schema(graph: &Graph, vocabulary: &Vocabulary) -> Result<Schema, Vec<CompileError>> {
    let mut schema = Schema::new(vocabulary.clone());
    schema.prefixes = graph.prefixes.clone();
    let mut errors = Vec::new();

    let rdf_type = Iri::from_static(vocab::RDF_TYPE);
    let sub_class_of = Iri::from_static(vocab::RDFS_SUBCLASS_OF);

    schema.ontology_iri = graph
        .subjects_with(&rdf_type, &Term::Iri(Iri::from_static(vocab::OWL_ONTOLOGY)))
        .find_map(Term::as_iri)
        .cloned();

    let children = |parent: &Iri| -> Vec<Iri> {
        graph
            .subjects_with(&sub_class_of, &Term::Iri(parent.clone()))
            .filter_map(Term::as_iri)
            .cloned()
            .collect()
    };

    // value sets: each direct subclass of the root, members its transitive subclasses
    let root = &vocabulary.enumerated_value_root;
    let mut enumerated: BTreeSet<Iri> = BTreeSet::from([root.clone()]);
    let mut owner: BTreeMap<Iri, Iri> = BTreeMap::new();
    for set_root in children(root) {
        enumerated.insert(set_root.clone());
        let mut members = Vec::new();
        let mut queue = vec![set_root.clone()];
        let mut visited = BTreeSet::from([set_root.clone()]);
        while let Some(node) = queue.pop() {
            for child in children(&node) {
                if !visited.insert(child.clone()) {
                    continue;
                }
                enumerated.insert(child.clone());
                if let Some(previous) = owner.insert(child.clone(), set_root.clone()) {
                    if previous != set_root {
                        errors.push(
                            CompileError::new(
                                ErrorCode::ValueSetOverlap,
                                format!("{child} is a member of both {previous} and {set_root}"),
                            )
                            .class(&child),
                        );
                    }
                }
                queue.push(child);
            }
        }
        for member in visited.into_iter().filter(|m| m != &set_root) {
            let parent = graph
                .objects_of(&Term::Iri(member.clone()), &sub_class_of)
                .into_iter()
                .filter_map(|t| t.as_iri().cloned())
                .find(|p| p != &set_root && owner.get(p) == Some(&set_root));
            members.push(ValueSetMember {
                label: literal(graph, &member, &[vocab::RDFS_LABEL]),
                parent,
                iri: member,
            });
        }
        let root_term = Term::Iri(set_root.clone());
        if graph.predicates_of(&root_term).is_some_and(|p| p.contains_key(&vocabulary.property_definitions)) {
            errors.push(
                CompileError::new(ErrorCode::Syntax, "value sets cannot carry property definitions").class(&set_root),
            );
        }
        schema.value_sets.insert(
            set_root.clone(),
            ValueSet {
                label: literal(graph, &set_root, &[vocab::RDFS_LABEL]),
                description: literal(graph, &set_root, &[vocab::SKOS_DESCRIPTION, vocab::RDFS_COMMENT]),
                root: set_root,
                members,
            },
        );
    }

    let mut class_iris = BTreeSet::new();
    for class_type in [vocab::OWL_CLASS, vocab::RDFS_CLASS] {
        for s in graph.subjects_with(&rdf_type, &Term::Iri(Iri::from_static(class_type))) {
            if let Term::Iri(iri) = s {
                if !enumerated.contains(iri) {
                    class_iris.insert(iri.clone());
                }
            }
        }
    }
    // classes that only appear through subClassOf still need a ClassDef when
    // they carry definitions
    for s in graph.subjects_with_predicate(&vocabulary.property_definitions) {
        if let Term::Iri(iri) = s {
            if !enumerated.contains(iri) {
                class_iris.insert(iri.clone());
            }
        }
    }

    for iri in class_iris {
        let subject = Term::Iri(iri.clone());
        let parents: Vec<Iri> = graph
            .objects_of(&subject, &sub_class_of)
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .filter(|p| p.as_str() != vocab::OWL_THING)
            .collect();
        let mut own_properties = Vec::new();
        let mut seen = BTreeSet::new();
        for block in graph.objects_of(&subject, &vocabulary.property_definitions) {
            let Some(text) = block.as_literal().map(|l| l.lexical().to_owned()) else {
                errors.push(
                    CompileError::new(ErrorCode::Syntax, "property definitions must be a literal").class(&iri),
                );
                continue;
            };
            match parse_property_block(&text, &schema.prefixes) {
                Ok(defs) => {
                    for def in defs {
                        if seen.insert(def.predicate.clone()) {
                            own_properties.push(def);
                        } else {
                            errors.push(
                                CompileError::new(
                                    ErrorCode::DuplicatePredicate,
                                    format!("predicate {} defined in more than one block", def.predicate),
                                )
                                .class(&iri)
                                .predicate(&def.predicate)
                                .line(def.source_line),
                            );
                        }
                    }
                }
                Err(errs) => errors.extend(errs.into_iter().map(|e| e.class(&iri))),
            }
        }
        schema.classes.insert(
            iri.clone(),
            ClassDef {
                label: literal(graph, &iri, &[vocab::RDFS_LABEL]),
                description: literal(graph, &iri, &[vocab::SKOS_DESCRIPTION, vocab::RDFS_COMMENT]),
                iri,
                parents,
                own_properties,
            },
        );
    }

    if errors.is_empty() {
        Ok(schema)
    } else {
        errors.sort();
        errors.dedup();
        Err(errors)
    }
}

/// First literal value among `predicates`, tried in order.
fn literal(graph: &Graph, subject: &Iri, predicates: &[&str]) -> Option<String> {
    let subject = Term::Iri(subject.clone());
    predicates.iter().find_map(|p| {
        graph
            .objects_str(&subject, p)
            .find_map(Term::as_literal)
            .map(|l| l.lexical().to_owned())
    })
}
