//! Bridge to an independent RDF implementation for isomorphism checks.

use ontoforge::rdf::{Graph, Term};
use oxrdf::dataset::CanonicalizationAlgorithm;
use oxrdf::{BlankNode, Literal, NamedNode, NamedOrBlankNode};

fn term(t: &Term) -> oxrdf::Term {
    match t {
        Term::Iri(i) => NamedNode::new(i.as_str()).unwrap().into(),
        Term::Blank(b) => BlankNode::new(b.as_str()).unwrap().into(),
        Term::Literal(l) => match l.language() {
            Some(tag) => Literal::new_language_tagged_literal(l.lexical(), tag).unwrap().into(),
            None => Literal::new_typed_literal(l.lexical(), NamedNode::new(l.datatype().as_str()).unwrap()).into(),
        },
    }
}

pub fn convert(g: &Graph) -> oxrdf::Graph {
    let mut out = oxrdf::Graph::new();
    for t in g.triples() {
        let subject: NamedOrBlankNode = match term(&t.subject) {
            oxrdf::Term::NamedNode(n) => n.into(),
            oxrdf::Term::BlankNode(b) => b.into(),
            other => panic!("subject {other}"),
        };
        out.insert(&oxrdf::Triple::new(subject, NamedNode::new(t.predicate.as_str()).unwrap(), term(&t.object)));
    }
    out
}

/// Sorted N-Triples lines of the canonical relabelling.
pub fn canonical(mut g: oxrdf::Graph) -> Vec<String> {
    g.canonicalize(CanonicalizationAlgorithm::Unstable);
    let mut lines: Vec<String> = g.iter().map(|t| t.to_string()).collect();
    lines.sort();
    lines
}

pub fn parse_turtle(text: &str) -> oxrdf::Graph {
    let mut out = oxrdf::Graph::new();
    for t in oxttl::TurtleParser::new().for_slice(text.as_bytes()) {
        out.insert(&t.unwrap_or_else(|e| panic!("{e}\n{text}")));
    }
    out
}

pub fn parse_ntriples(text: &str) -> oxrdf::Graph {
    let mut out = oxrdf::Graph::new();
    for t in oxttl::NTriplesParser::new().for_slice(text.as_bytes()) {
        out.insert(&t.unwrap_or_else(|e| panic!("{e}\n{text}")));
    }
    out
}
