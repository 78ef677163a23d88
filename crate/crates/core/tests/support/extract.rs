//! Reads (class, predicate, cardinality token) rows back out of each emitted
//! artifact by its own format, without going through the schema model.

use std::collections::{BTreeMap, BTreeSet};

use ontoforge::emit::FileMap;

use super::gen::{RandSchema, EX};
use super::oracle;

pub type Row = (String, String, String);

pub fn from_random(schema: &RandSchema) -> BTreeSet<Row> {
    let mut out = BTreeSet::new();
    for c in 0..schema.classes.len() {
        for p in oracle::effective(schema, c).unwrap() {
            out.insert((schema.class_iri(c).as_str().to_owned(), format!("{EX}{}", p.predicate), p.token().to_owned()));
        }
    }
    out
}

fn expand(prefixes: &BTreeMap<String, String>, name: &str) -> String {
    if let Some(iri) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
        return iri.to_owned();
    }
    let (label, local) = name.split_once(':').unwrap_or_else(|| panic!("not a prefixed name: {name}"));
    format!("{}{local}", prefixes.get(label).unwrap_or_else(|| panic!("unknown prefix {label}")))
}

/// Rows of the class shapes (the ones opened with `CLOSED EXTRA rdf:type`).
pub fn from_shex(text: &str) -> BTreeSet<Row> {
    let mut prefixes = BTreeMap::new();
    let mut out = BTreeSet::new();
    let mut class: Option<String> = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("PREFIX ") {
            let (label, iri) = rest.split_once(": ").unwrap();
            prefixes.insert(label.to_owned(), iri.trim_start_matches('<').trim_end_matches('>').to_owned());
        } else if let Some(head) = line.strip_suffix(" CLOSED EXTRA rdf:type {") {
            class = Some(expand(&prefixes, head));
        } else if line == "}" {
            class = None;
        } else if let Some(class) = &class {
            let line = line.trim_end_matches(" ;");
            let (predicate, constraint) = line.split_once(' ').unwrap();
            if predicate == "rdf:type" {
                continue;
            }
            let marker = constraint.rsplit(' ').next().unwrap();
            let token = if constraint.contains("_List") {
                if constraint.contains("OR [rdf:nil]") { "0..N" } else { "1..N" }
            } else {
                match marker {
                    "?" => "0..1",
                    "*" => "0..N",
                    "+" => "1..N",
                    _ => "1..1",
                }
            };
            out.insert((class.clone(), expand(&prefixes, predicate), token.to_owned()));
        }
    }
    out
}

/// Rows from the `owl:Restriction`s under each class, parsed with an
/// independent Turtle reader. Every property carries an `allValuesFrom`.
pub fn from_owl(text: &str) -> BTreeSet<Row> {
    use oxrdf::{NamedOrBlankNode, Term};
    const OWL: &str = "http://www.w3.org/2002/07/owl#";
    const SUBCLASS: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    let triples: Vec<oxrdf::Triple> =
        oxttl::TurtleParser::new().for_slice(text.as_bytes()).collect::<Result<_, _>>().expect("ontology parses");
    let object = |s: &NamedOrBlankNode, p: &str| -> Vec<Term> {
        triples.iter().filter(|t| &t.subject == s && t.predicate.as_str() == p).map(|t| t.object.clone()).collect()
    };
    let mut bounds: BTreeMap<(String, String), (usize, bool)> = BTreeMap::new();
    for t in triples.iter().filter(|t| t.predicate.as_str() == SUBCLASS) {
        let (NamedOrBlankNode::NamedNode(class), Term::BlankNode(r)) = (&t.subject, &t.object) else {
            continue;
        };
        let r = NamedOrBlankNode::BlankNode(r.clone());
        let Some(Term::NamedNode(property)) = object(&r, &format!("{OWL}onProperty")).pop() else {
            continue;
        };
        let entry = bounds.entry((class.as_str().to_owned(), property.as_str().to_owned())).or_insert((0, false));
        if let Some(Term::Literal(l)) = object(&r, &format!("{OWL}minCardinality")).pop() {
            entry.0 = l.value().parse().unwrap();
        }
        if let Some(Term::Literal(l)) = object(&r, &format!("{OWL}maxCardinality")).pop() {
            assert_eq!(l.value(), "1");
            entry.1 = true;
        }
    }
    bounds
        .into_iter()
        .map(|((c, p), (min, one))| {
            let token = match (min, one) {
                (0, true) => "0..1",
                (_, true) => "1..1",
                (0, false) => "0..N",
                (_, false) => "1..N",
            };
            (c, p, token.to_owned())
        })
        .collect()
}

/// Rows from the property tables of the class pages under `docs/classes/`.
pub fn from_docs(files: &FileMap) -> BTreeSet<Row> {
    let mut out = BTreeSet::new();
    for (path, text) in files.iter() {
        if !path.contains("docs/classes/") {
            continue;
        }
        let class = text
            .lines()
            .find_map(|l| l.strip_prefix('`').and_then(|l| l.strip_suffix('`')))
            .expect("class page names its IRI")
            .to_owned();
        for line in text.lines().filter(|l| l.starts_with("| [")) {
            let cells: Vec<&str> = line.trim_matches('|').split(" | ").map(str::trim).collect();
            let predicate = cells[0].rsplit_once("](").unwrap().1.trim_end_matches(')');
            out.insert((class.clone(), predicate.to_owned(), cells[2].to_owned()));
        }
    }
    out
}

pub fn from_api(json: &str) -> BTreeSet<Row> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let mut out = BTreeSet::new();
    for class in v["classes"].as_array().unwrap() {
        for p in class["properties"].as_array().unwrap() {
            out.insert((
                class["iri"].as_str().unwrap().to_owned(),
                p["predicate"].as_str().unwrap().to_owned(),
                p["cardinality"].as_str().unwrap().to_owned(),
            ));
        }
    }
    out
}

/// Relative Markdown links and mkdocs nav entries under `docs/` whose target
/// is not in the file map.
pub fn dangling_links(files: &FileMap) -> Vec<String> {
    let link = regex::Regex::new(r"\]\(([^)\s]+)\)").unwrap();
    let mut out = Vec::new();
    let resolve = |base: &str, target: &str| -> String {
        let mut parts: Vec<&str> = base.split('/').collect();
        parts.pop();
        for seg in target.split('/') {
            match seg {
                "." => {}
                ".." => {
                    parts.pop();
                }
                s => parts.push(s),
            }
        }
        parts.join("/")
    };
    for (path, text) in files.iter() {
        if path.ends_with(".md") {
            for cap in link.captures_iter(text) {
                let target = cap[1].split('#').next().unwrap();
                if target.is_empty() || target.contains("://") {
                    continue;
                }
                let resolved = resolve(path, target);
                if files.get(&resolved).is_none() {
                    out.push(format!("{path} -> {target}"));
                }
            }
        } else if path.ends_with("mkdocs.yml") {
            let docs_dir = path.replace("mkdocs.yml", "docs/");
            for line in text.lines() {
                if let Some(target) = line.trim().strip_suffix(".md").and_then(|l| l.rsplit(' ').next()) {
                    let target = format!("{target}.md");
                    if files.get(&format!("{docs_dir}{target}")).is_none() {
                        out.push(format!("{path} -> {target}"));
                    }
                }
            }
        }
    }
    out
}
