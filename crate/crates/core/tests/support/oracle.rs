//! Brute-force reference checker over the raw random schema. Inheritance is
//! re-derived by enumerating every path to a root; counts come from scanning
//! all triples.

use std::collections::BTreeSet;

use ontoforge::rdf::{vocab, Graph, Iri, Term, Triple};

use super::gen::{ex, RContainer, RProp, RValue, RandSchema, INDEX, LITERAL_POOL, XSD};

/// Every path from `class` up to a root, each starting at `class`.
pub fn paths(schema: &RandSchema, class: usize) -> Vec<Vec<usize>> {
    let parents = &schema.classes[class].parents;
    if parents.is_empty() {
        return vec![vec![class]];
    }
    let mut out = Vec::new();
    for &p in parents {
        for mut path in paths(schema, p) {
            path.insert(0, class);
            out.push(path);
        }
    }
    out
}

pub fn ancestors_or_self(schema: &RandSchema, class: usize) -> BTreeSet<usize> {
    paths(schema, class).into_iter().flatten().collect()
}

pub fn descendants_or_self(schema: &RandSchema, class: usize) -> BTreeSet<usize> {
    (0..schema.classes.len()).filter(|&d| ancestors_or_self(schema, d).contains(&class)).collect()
}

/// Properties in force on `class`: for each predicate defined on some path,
/// the definition of the definers with no definer below them; `Err` when
/// those disagree.
pub fn effective(schema: &RandSchema, class: usize) -> Result<Vec<RProp>, String> {
    let ancestors = ancestors_or_self(schema, class);
    let predicates: BTreeSet<&str> =
        ancestors.iter().flat_map(|&a| schema.classes[a].props.iter().map(|p| p.predicate.as_str())).collect();
    let mut out = Vec::new();
    for predicate in predicates {
        let definers: Vec<(usize, &RProp)> = ancestors
            .iter()
            .filter_map(|&a| schema.classes[a].props.iter().find(|p| p.predicate == predicate).map(|p| (a, p)))
            .collect();
        let minimal: Vec<&RProp> = definers
            .iter()
            .filter(|(d, _)| !definers.iter().any(|(other, _)| other != d && ancestors_or_self(schema, *other).contains(d)))
            .map(|(_, p)| *p)
            .collect();
        if minimal.iter().any(|p| !p.same_constraint(minimal[0])) {
            return Err(format!("conflicting definitions of {predicate} on C{class}"));
        }
        out.push(minimal[0].clone());
    }
    Ok(out)
}

pub type Finding = (String, Term, Option<Iri>, Option<Iri>);

fn objects(data: &Graph, subject: &Term, predicate: &Iri) -> Vec<Term> {
    data.triples().filter(|t| &t.subject == subject && &t.predicate == predicate).map(|t| t.object).collect()
}

fn types(data: &Graph, node: &Term) -> Vec<Iri> {
    objects(data, node, &Iri::new(vocab::RDF_TYPE).unwrap()).into_iter().filter_map(|t| t.as_iri().cloned()).collect()
}

fn class_index(schema: &RandSchema, iri: &Iri) -> Option<usize> {
    (0..schema.classes.len()).find(|&c| &schema.class_iri(c) == iri)
}

/// Violations as `(code, focus, class, predicate)` tuples, sorted.
pub fn check(schema: &RandSchema, data: &Graph) -> Vec<Finding> {
    let all: Vec<Triple> = data.triples().collect();
    let subjects: BTreeSet<Term> = all.iter().map(|t| t.subject.clone()).collect();
    let mut out = Vec::new();
    for focus in &subjects {
        let typed: Vec<usize> = types(data, focus).iter().filter_map(|t| class_index(schema, t)).collect::<BTreeSet<_>>().into_iter().collect();
        if typed.is_empty() {
            continue;
        }
        let mut ambiguous = false;
        for (i, &a) in typed.iter().enumerate() {
            for &b in &typed[i + 1..] {
                if !ancestors_or_self(schema, a).contains(&b) && !ancestors_or_self(schema, b).contains(&a) {
                    ambiguous = true;
                }
            }
        }
        if ambiguous {
            out.push(("AMBIGUOUS_TYPE".to_owned(), focus.clone(), None, None));
        }
        let mut declared = BTreeSet::new();
        for &c in &typed {
            let class = schema.class_iri(c);
            for prop in effective(schema, c).unwrap() {
                let predicate = ex(&prop.predicate);
                declared.insert(predicate.clone());
                for code in check_property(schema, data, focus, &prop) {
                    out.push((code, focus.clone(), Some(class.clone()), Some(predicate.clone())));
                }
            }
        }
        let used: BTreeSet<Iri> = all.iter().filter(|t| &t.subject == focus).map(|t| t.predicate.clone()).collect();
        for p in used {
            if p.as_str() != vocab::RDF_TYPE && !declared.contains(&p) {
                let class = (typed.len() == 1).then(|| schema.class_iri(typed[0]));
                out.push(("UNDECLARED_PREDICATE".to_owned(), focus.clone(), class, Some(p)));
            }
        }
    }
    out.sort();
    out
}

fn check_property(schema: &RandSchema, data: &Graph, focus: &Term, prop: &RProp) -> Vec<String> {
    let direct = objects(data, focus, &ex(&prop.predicate));
    let values = match prop.container {
        RContainer::Plain => direct,
        RContainer::Ordered => match direct.len() {
            0 => Vec::new(),
            1 => match walk_list(data, &direct[0]) {
                Some(members) => members,
                None => return vec!["MALFORMED_LIST".to_owned()],
            },
            _ => return vec!["MALFORMED_LIST".to_owned()],
        },
        RContainer::Numbered => match read_entries(data, &direct) {
            Some(values) => values,
            None => return vec!["MALFORMED_LIST".to_owned()],
        },
    };
    let mut out = Vec::new();
    if values.len() < prop.min {
        out.push("MISSING_REQUIRED".to_owned());
    }
    if prop.max_one && values.len() > 1 {
        out.push("TOO_MANY".to_owned());
    }
    for v in &values {
        if let Some(code) = classify(schema, data, v, prop.value) {
            out.push(code.to_owned());
        }
    }
    out
}

fn walk_list(data: &Graph, head: &Term) -> Option<Vec<Term>> {
    let nil = Term::iri(vocab::RDF_NIL).unwrap();
    let first = Iri::new(vocab::RDF_FIRST).unwrap();
    let rest = Iri::new(vocab::RDF_REST).unwrap();
    let mut members = Vec::new();
    let mut visited = Vec::new();
    let mut node = head.clone();
    while node != nil {
        if matches!(node, Term::Literal(_)) || visited.contains(&node) {
            return None;
        }
        visited.push(node.clone());
        let firsts = objects(data, &node, &first);
        let rests = objects(data, &node, &rest);
        if firsts.len() != 1 || rests.len() != 1 {
            return None;
        }
        members.push(firsts[0].clone());
        node = rests[0].clone();
    }
    Some(members)
}

fn read_entries(data: &Graph, entries: &[Term]) -> Option<Vec<Term>> {
    let index = Iri::new(INDEX).unwrap();
    let value = Iri::new(vocab::RDF_VALUE).unwrap();
    let mut by_position: Vec<(usize, Term)> = Vec::new();
    for entry in entries {
        if matches!(entry, Term::Literal(_)) {
            return None;
        }
        let indices = objects(data, entry, &index);
        let values = objects(data, entry, &value);
        if indices.len() != 1 || values.len() != 1 {
            return None;
        }
        let Term::Literal(lit) = &indices[0] else {
            return None;
        };
        if lit.datatype().as_str() != vocab::XSD_INTEGER || !lit.lexical().bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let position: usize = lit.lexical().parse().ok()?;
        if position >= entries.len() || by_position.iter().any(|(p, _)| *p == position) {
            return None;
        }
        by_position.push((position, values[0].clone()));
    }
    by_position.sort_by_key(|(p, _)| *p);
    Some(by_position.into_iter().map(|(_, v)| v).collect())
}

fn classify(schema: &RandSchema, data: &Graph, value: &Term, expected: RValue) -> Option<&'static str> {
    match expected {
        RValue::Datatype(d) => {
            let Term::Literal(lit) = value else {
                return Some("BAD_DATATYPE");
            };
            if lit.datatype().as_str() != format!("{XSD}{d}") {
                return Some("BAD_DATATYPE");
            }
            let pooled = LITERAL_POOL.iter().find(|(l, dt, _)| *l == lit.lexical() && *dt == d);
            match pooled {
                Some((_, _, false)) => Some("BAD_DATATYPE"),
                _ => None,
            }
        }
        RValue::Class(c) => {
            if matches!(value, Term::Literal(_)) {
                return Some("BAD_TARGET_TYPE");
            }
            let ts = types(data, value);
            if ts.is_empty() {
                return Some("UNTYPED_NODE");
            }
            let accepted = descendants_or_self(schema, c);
            if ts.iter().any(|t| class_index(schema, t).is_some_and(|i| accepted.contains(&i))) {
                None
            } else {
                Some("BAD_TARGET_TYPE")
            }
        }
        RValue::External => match value {
            Term::Iri(_) => None,
            _ => Some("NOT_AN_IRI"),
        },
        RValue::ValueSet(v) => match value {
            Term::Iri(i) if schema.members(v).contains(i) => None,
            _ => Some("NOT_IN_VALUESET"),
        },
    }
}
