use std::collections::BTreeMap;

use crate::rdf::{ns, vocab, Graph, Iri, Literal, Term};
use crate::schema::{CheckedSchema, CompileError, ContainerKind, ErrorCode, PropertyDef, ValueType};

/// OWL rendering of the schema. Per class and effective property, separate
/// restrictions carry `minCardinality 1`, `maxCardinality 1` and the
/// `allValuesFrom` range.
pub fn emit_owl(schema: &CheckedSchema) -> Result<Graph, Vec<CompileError>> {
    let mut g = Graph::new();
    g.prefixes = schema.prefixes().clone();
    for (label, namespace) in [("owl", ns::OWL), ("rdf", ns::RDF), ("rdfs", ns::RDFS), ("xsd", ns::XSD), ("skos", ns::SKOS)] {
        g.prefixes.insert_if_absent(label, namespace);
    }
    let iri = |s: &str| Iri::from_static(s);
    let rdf_type = iri(vocab::RDF_TYPE);
    let sub_class_of = iri(vocab::RDFS_SUBCLASS_OF);
    let label = iri(vocab::RDFS_LABEL);
    let description = iri(vocab::SKOS_DESCRIPTION);
    let owl_class = Term::Iri(iri(vocab::OWL_CLASS));

    if let Some(ontology) = &schema.schema().ontology_iri {
        g.add(ontology.clone(), &rdf_type, iri(vocab::OWL_ONTOLOGY));
    }

    let mut errors = Vec::new();
    // predicate -> (is a datatype property, first class using it, first description)
    let mut globals: BTreeMap<&Iri, (bool, &Iri, Option<&String>)> = BTreeMap::new();
    for class in schema.classes() {
        for def in &class.own_properties {
            let datatype = is_datatype_property(def);
            match globals.get_mut(&def.predicate) {
                None => {
                    globals.insert(&def.predicate, (datatype, &class.iri, def.description.as_ref()));
                }
                Some((kind, first, desc)) => {
                    if *kind != datatype {
                        errors.push(
                            CompileError::new(
                                ErrorCode::ConflictingGlobalProperty,
                                format!(
                                    "used as a {} property here and as a {} property on {first}",
                                    if datatype { "datatype" } else { "object" },
                                    if *kind { "datatype" } else { "object" },
                                ),
                            )
                            .class(&class.iri)
                            .predicate(&def.predicate),
                        );
                    }
                    if desc.is_none() {
                        *desc = def.description.as_ref();
                    }
                }
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    for (predicate, (datatype, _, desc)) in &globals {
        let kind = if *datatype { vocab::OWL_DATATYPE_PROPERTY } else { vocab::OWL_OBJECT_PROPERTY };
        g.add((*predicate).clone(), &rdf_type, iri(kind));
        if let Some(desc) = desc {
            g.add((*predicate).clone(), &iri(vocab::RDFS_COMMENT), Literal::string(desc.as_str()));
        }
    }

    for class in schema.classes() {
        let subject = Term::Iri(class.iri.clone());
        g.add(subject.clone(), &rdf_type, owl_class.clone());
        for parent in &class.parents {
            g.add(subject.clone(), &sub_class_of, parent.clone());
        }
        if let Some(l) = &class.label {
            g.add(subject.clone(), &label, Literal::string(l.as_str()));
        }
        if let Some(d) = &class.description {
            g.add(subject.clone(), &description, Literal::string(d.as_str()));
        }
        for prop in schema.effective_properties(&class.iri).unwrap_or_default() {
            let def = &prop.def;
            let restrict = |g: &mut Graph, p: &str, o: Term| {
                let node = g.fresh_blank();
                g.add(node.clone(), &rdf_type, iri(vocab::OWL_RESTRICTION));
                g.add(node.clone(), &iri(vocab::OWL_ON_PROPERTY), def.predicate.clone());
                g.add(node.clone(), &iri(p), o);
                g.add(subject.clone(), &sub_class_of, node);
            };
            let one = || Term::Literal(Literal::typed("1", iri(vocab::XSD_NON_NEGATIVE_INTEGER)));
            if def.cardinality.min() == 1 {
                restrict(&mut g, vocab::OWL_MIN_CARDINALITY, one());
            }
            if def.cardinality.max_is_one() {
                restrict(&mut g, vocab::OWL_MAX_CARDINALITY, one());
            }
            restrict(&mut g, vocab::OWL_ALL_VALUES_FROM, Term::Iri(range(def)));
        }
    }

    for vs in schema.value_sets() {
        let subject = Term::Iri(vs.root.clone());
        g.add(subject.clone(), &rdf_type, owl_class.clone());
        if let Some(l) = &vs.label {
            g.add(subject.clone(), &label, Literal::string(l.as_str()));
        }
        if let Some(d) = &vs.description {
            g.add(subject.clone(), &description, Literal::string(d.as_str()));
        }
        let members: Vec<Term> = schema
            .valueset_members(&vs.root)
            .unwrap_or_default()
            .into_iter()
            .map(Term::Iri)
            .collect();
        let list = g.add_list(&members);
        g.add(subject.clone(), &iri(vocab::OWL_ONE_OF), list);
        for member in &vs.members {
            let m = Term::Iri(member.iri.clone());
            g.add(m.clone(), &rdf_type, iri(vocab::OWL_NAMED_INDIVIDUAL));
            g.add(m.clone(), &rdf_type, vs.root.clone());
            if let Some(l) = &member.label {
                g.add(m.clone(), &label, Literal::string(l.as_str()));
            }
            if let Some(parent) = &member.parent {
                g.add(m, &iri(vocab::SKOS_BROADER), parent.clone());
            }
        }
    }
    Ok(g)
}

fn is_datatype_property(def: &PropertyDef) -> bool {
    def.value_type.is_datatype() && def.container == ContainerKind::Plain
}

fn range(def: &PropertyDef) -> Iri {
    match (def.container, &def.value_type) {
        (ContainerKind::OrderedList, _) => Iri::from_static(vocab::RDF_LIST),
        (ContainerKind::NumberedList, _) | (_, ValueType::ExternalIri) => Iri::from_static(vocab::OWL_THING),
        (ContainerKind::Plain, ValueType::Datatype(t) | ValueType::ClassRef(t) | ValueType::ValueSetRef(t)) => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse_turtle, serialize_turtle};
    use crate::schema::{load_schema, resolve_schema, Vocabulary};

    fn compile(body: &str) -> CheckedSchema {
        let text = format!(
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix e: <http://empusa.org/0.1#> .
@prefix ex: <http://x/> .
{body}"
        );
        resolve_schema(load_schema(&parse_turtle(&text).unwrap(), &Vocabulary::default()).unwrap()).unwrap()
    }

    fn restrictions_on(g: &Graph, class: &str, predicate: &str) -> Vec<(String, Term)> {
        let on = Iri::from_static(vocab::OWL_ON_PROPERTY);
        g.objects_of(&Term::iri(class).unwrap(), &Iri::from_static(vocab::RDFS_SUBCLASS_OF))
            .into_iter()
            .filter(|r| g.objects_of(r, &on).contains(&Term::iri(predicate).unwrap()))
            .flat_map(|r| {
                g.predicates_of(&r)
                    .unwrap()
                    .iter()
                    .filter(|(p, _)| p.as_str() != vocab::RDF_TYPE && **p != on)
                    .flat_map(|(p, os)| os.iter().map(|o| (p.local_name().to_owned(), o.clone())))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    #[test]
    fn optional_class_ref_has_max_only() {
        let s = compile(r#"ex:B a owl:Class . ex:A a owl:Class ; e:propertyDefinitions "ex:b ex:B 0..1" ."#);
        let g = emit_owl(&s).unwrap();
        let mut r = restrictions_on(&g, "http://x/A", "http://x/b");
        r.sort();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0], ("allValuesFrom".to_owned(), Term::iri("http://x/B").unwrap()));
        assert_eq!(r[1].0, "maxCardinality");
        assert!(g.contains(
            &crate::rdf::Triple::new(
                Term::iri("http://x/b").unwrap(),
                Iri::from_static(vocab::RDF_TYPE),
                Term::iri(vocab::OWL_OBJECT_PROPERTY).unwrap()
            )
            .unwrap()
        ));
    }

    #[test]
    fn file_type_one_of() {
        let s = compile(
            "ex:FileType rdfs:subClassOf e:EnumeratedValueClass .
             ex:CSV rdfs:subClassOf ex:FileType . ex:TXT rdfs:subClassOf ex:FileType . ex:TSV rdfs:subClassOf ex:FileType .",
        );
        let g = emit_owl(&s).unwrap();
        let list = g.objects_of(&Term::iri("http://x/FileType").unwrap(), &Iri::from_static(vocab::OWL_ONE_OF));
        let members = g.list_members(&list[0]).unwrap();
        let names: Vec<_> = members.iter().map(|m| m.as_iri().unwrap().local_name().to_owned()).collect();
        assert_eq!(names, ["CSV", "TSV", "TXT"]);
    }

    #[test]
    fn conflicting_global_property() {
        let s = compile(
            r#"ex:B a owl:Class . ex:A a owl:Class ; e:propertyDefinitions "ex:p xsd:string 0..1" .
               ex:C a owl:Class ; e:propertyDefinitions "ex:p ex:B 0..1" ."#,
        );
        let errs = emit_owl(&s).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, ErrorCode::ConflictingGlobalProperty);
    }

    #[test]
    fn round_trips_through_turtle() {
        let s = compile(
            r##"<http://x/onto> a owl:Ontology .
               ex:A a owl:Class ; rdfs:label "A" ; e:propertyDefinitions "# multi\n# line\nex:p xsd:string 1..N\nex:l xsd:string =0..N" ."##,
        );
        let g = emit_owl(&s).unwrap();
        let text = serialize_turtle(&g);
        assert!(text.contains("owl:Ontology"));
        assert!(parse_turtle(&text).unwrap().is_isomorphic(&g));
    }
}
