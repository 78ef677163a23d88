//! Single-triple mutations of conforming data, each expected to produce one
//! known violation.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use ontoforge::rdf::{vocab, Graph, Iri, Literal, Term, Triple};

use super::gen::{ex, RandSchema};
use super::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    DeleteRequired,
    AddUndeclared,
    SwapMember,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::DeleteRequired, Mutation::AddUndeclared, Mutation::SwapMember];

    pub fn expected_code(self) -> &'static str {
        match self {
            Mutation::DeleteRequired => "MISSING_REQUIRED",
            Mutation::AddUndeclared => "UNDECLARED_PREDICATE",
            Mutation::SwapMember => "NOT_IN_VALUESET",
        }
    }
}

/// Applies `mutation` to a copy of `data`; `None` when the data offers no
/// place for it.
pub fn apply(schema: &RandSchema, data: &Graph, mutation: Mutation, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let rdf_type = Iri::new(vocab::RDF_TYPE).unwrap();
    let mut typed: Vec<(Term, usize)> = Vec::new();
    for t in data.triples().filter(|t| t.predicate == rdf_type) {
        if let Some(c) = (0..schema.classes.len()).find(|&c| t.object == Term::Iri(schema.class_iri(c))) {
            typed.push((t.subject, c));
        }
    }
    let mut out = data.clone();
    match mutation {
        Mutation::DeleteRequired => {
            // a required property carried by exactly one direct triple
            let mut candidates = Vec::new();
            for (node, c) in &typed {
                for p in oracle::effective(schema, *c).unwrap() {
                    let predicate = ex(&p.predicate);
                    let direct: Vec<Triple> = data.triples().filter(|t| &t.subject == node && t.predicate == predicate).collect();
                    if p.min >= 1 && direct.len() == 1 {
                        candidates.push(direct[0].clone());
                    }
                }
            }
            let victim = candidates.choose(rng)?;
            out.remove(victim);
        }
        Mutation::AddUndeclared => {
            let (node, _) = typed.choose(rng)?;
            out.add(node.clone(), &ex("undeclaredPredicate"), Literal::string("stray"));
        }
        Mutation::SwapMember => {
            let members: Vec<Iri> = (0..schema.value_sets.len()).flat_map(|v| schema.members(v)).collect();
            let candidates: Vec<Triple> = data.triples().filter(|t| t.object.as_iri().is_some_and(|i| members.contains(i))).collect();
            let victim = candidates.choose(rng)?;
            out.remove(victim);
            out.add(victim.subject.clone(), &victim.predicate, ex("NotAMember"));
        }
    }
    Some(out)
}
