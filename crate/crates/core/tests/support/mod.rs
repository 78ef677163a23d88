#![allow(dead_code)]

pub mod extract;
pub mod gen;
pub mod mutate;
pub mod oracle;
pub mod ox;

use std::path::PathBuf;

use ontoforge::rdf::{parse_turtle, Graph, Term};
use ontoforge::schema::{load_schema, resolve_schema, CheckedSchema, Vocabulary};
use ontoforge::validate::ValidationReport;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn compile(definition: &str) -> CheckedSchema {
    let graph = parse_turtle(definition).unwrap();
    let schema = load_schema(&graph, &Vocabulary::default()).unwrap_or_else(|e| panic!("{e:?}\n{definition}"));
    resolve_schema(schema).unwrap_or_else(|e| panic!("{e:?}\n{definition}"))
}

pub fn fixture_schema() -> CheckedSchema {
    compile(&fixture("gbol.ttl"))
}

pub fn fixture_data() -> Graph {
    parse_turtle(&fixture("gbol-data.ttl")).unwrap()
}

/// The report as sorted `(code, focus, class, predicate)` tuples, the shape
/// the brute-force checker produces.
pub fn findings(report: &ValidationReport) -> Vec<oracle::Finding> {
    let mut out: Vec<_> = report
        .violations
        .iter()
        .map(|v| (v.code.as_str().to_owned(), v.focus.clone(), v.class.clone(), v.predicate.clone()))
        .collect();
    out.sort();
    out
}

pub fn iri_term(iri: &str) -> Term {
    Term::iri(iri).unwrap()
}
