use std::collections::{BTreeMap, BTreeSet};

use super::{vocab, Iri, PrefixMap, RdfError, Term, Triple};

/// A set of triples plus prefix bindings.
///
/// Triples are indexed subject → predicate → objects, so every iteration is in
/// canonical order. A second (predicate, object) → subjects index serves type
/// lookups.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    spo: BTreeMap<Term, BTreeMap<Iri, BTreeSet<Term>>>,
    pos: BTreeMap<(Iri, Term), BTreeSet<Term>>,
    len: usize,
    pub prefixes: PrefixMap,
    next_blank: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo && self.prefixes == other.prefixes
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let Triple {
            subject,
            predicate,
            object,
        } = triple;
        if let Term::Blank(label) = &subject {
            self.bump_blank_counter(label);
        }
        if let Term::Blank(label) = &object {
            self.bump_blank_counter(label);
        }
        let added = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if added {
            self.pos.entry((predicate, object)).or_default().insert(subject);
            self.len += 1;
        }
        added
    }

    /// Convenience for building graphs from known-good parts.
    pub fn add(&mut self, subject: impl Into<Term>, predicate: &Iri, object: impl Into<Term>) -> bool {
        let subject = subject.into();
        debug_assert!(!subject.is_literal());
        self.insert(Triple {
            subject,
            predicate: predicate.clone(),
            object: object.into(),
        })
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let Some(preds) = self.spo.get_mut(&triple.subject) else {
            return false;
        };
        let Some(objs) = preds.get_mut(&triple.predicate) else {
            return false;
        };
        if !objs.remove(&triple.object) {
            return false;
        }
        if objs.is_empty() {
            preds.remove(&triple.predicate);
        }
        if preds.is_empty() {
            self.spo.remove(&triple.subject);
        }
        let key = (triple.predicate.clone(), triple.object.clone());
        if let Some(subjects) = self.pos.get_mut(&key) {
            subjects.remove(&triple.subject);
            if subjects.is_empty() {
                self.pos.remove(&key);
            }
        }
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|p| p.get(&triple.predicate))
            .is_some_and(|o| o.contains(&triple.object))
    }

    /// Allocates a blank node label not yet used in this graph.
    pub fn fresh_blank(&mut self) -> Term {
        let label = format!("b{}", self.next_blank);
        self.next_blank += 1;
        Term::Blank(label)
    }

    fn bump_blank_counter(&mut self, label: &str) {
        if let Some(n) = label.strip_prefix('b').and_then(|d| d.parse::<usize>().ok()) {
            if n >= self.next_blank {
                self.next_blank = n + 1;
            }
        }
    }

    /// All triples in canonical order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, preds)| {
            preds.iter().flat_map(move |(p, objs)| {
                objs.iter().map(move |o| Triple {
                    subject: s.clone(),
                    predicate: p.clone(),
                    object: o.clone(),
                })
            })
        })
    }

    /// Distinct subjects in canonical order.
    pub fn subjects(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    /// Predicate → objects map for one subject.
    pub fn predicates_of(&self, subject: &Term) -> Option<&BTreeMap<Iri, BTreeSet<Term>>> {
        self.spo.get(subject)
    }

    pub fn objects_of(&self, subject: &Term, predicate: &Iri) -> Vec<Term> {
        self.object_set(subject, predicate)
            .map(|objs| objs.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub(crate) fn object_set(&self, subject: &Term, predicate: &Iri) -> Option<&BTreeSet<Term>> {
        self.spo.get(subject).and_then(|p| p.get(predicate))
    }

    pub(crate) fn objects_str<'a>(&'a self, subject: &Term, predicate: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        let preds = self.spo.get(subject);
        preds
            .into_iter()
            .flat_map(|p| p.iter())
            .filter(move |(p, _)| p.as_str() == predicate)
            .flat_map(|(_, objs)| objs.iter())
    }

    pub fn count(&self, subject: &Term, predicate: &Iri) -> usize {
        self.object_set(subject, predicate).map_or(0, BTreeSet::len)
    }

    pub fn subjects_with(&self, predicate: &Iri, object: &Term) -> impl Iterator<Item = &Term> {
        self.pos.get(&(predicate.clone(), object.clone())).into_iter().flatten()
    }

    /// Subjects having at least one `predicate` triple, in canonical order.
    pub fn subjects_with_predicate<'a>(&'a self, predicate: &'a Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo.iter().filter(move |(_, p)| p.contains_key(predicate)).map(|(s, _)| s)
    }

    /// Subjects directly typed `class`; no subclass closure.
    pub fn instances_of(&self, class: &Iri) -> BTreeSet<Term> {
        self.subjects_with(&rdf_type(), &Term::Iri(class.clone())).cloned().collect()
    }

    /// `rdf:type` objects of `subject`.
    pub fn types_of(&self, subject: &Term) -> Vec<&Iri> {
        self.objects_str(subject, vocab::RDF_TYPE).filter_map(Term::as_iri).collect()
    }

    /// Number of triples whose object is `term`.
    pub fn references_to(&self, term: &Term) -> usize {
        self.pos
            .iter()
            .filter(|((_, o), _)| o == term)
            .map(|(_, subjects)| subjects.len())
            .sum()
    }

    /// Members of the RDF collection starting at `head`.
    pub fn list_members(&self, head: &Term) -> Result<Vec<Term>, RdfError> {
        let first = Iri::from_static(vocab::RDF_FIRST);
        let rest = Iri::from_static(vocab::RDF_REST);
        let mut members = Vec::new();
        let mut seen = BTreeSet::new();
        let mut node = head.clone();
        let malformed = |node: &Term, reason: &str| RdfError::MalformedList {
            node: node.to_string(),
            reason: reason.to_owned(),
        };
        while !node.is_iri_str(vocab::RDF_NIL) {
            if node.is_literal() {
                return Err(malformed(&node, "literal in list position"));
            }
            if !seen.insert(node.clone()) {
                return Err(malformed(&node, "cycle in rdf:rest chain"));
            }
            let firsts = self.object_set(&node, &first);
            let rests = self.object_set(&node, &rest);
            let value = match firsts.map(|f| f.len()) {
                None | Some(0) => return Err(malformed(&node, "missing rdf:first")),
                Some(1) => firsts.and_then(|f| f.first()).cloned(),
                Some(_) => return Err(malformed(&node, "more than one rdf:first")),
            };
            let next = match rests.map(|r| r.len()) {
                None | Some(0) => return Err(malformed(&node, "missing rdf:rest")),
                Some(1) => rests.and_then(|r| r.first()).cloned(),
                Some(_) => return Err(malformed(&node, "branching rdf:rest")),
            };
            members.extend(value);
            node = next.unwrap_or_else(|| Term::Iri(Iri::from_static(vocab::RDF_NIL)));
        }
        Ok(members)
    }

    /// Builds an RDF collection of `members` and returns its head.
    pub fn add_list(&mut self, members: &[Term]) -> Term {
        let first = Iri::from_static(vocab::RDF_FIRST);
        let rest = Iri::from_static(vocab::RDF_REST);
        let mut head = Term::Iri(Iri::from_static(vocab::RDF_NIL));
        let nodes: Vec<Term> = members.iter().map(|_| self.fresh_blank()).collect();
        for (node, member) in nodes.iter().zip(members).rev() {
            self.add(node.clone(), &first, member.clone());
            self.add(node.clone(), &rest, head.clone());
            head = node.clone();
        }
        head
    }

    /// Adds every triple of `other`, relabelling its blank nodes apart from ours.
    pub fn merge(&mut self, other: &Graph) {
        let mut relabel: BTreeMap<String, Term> = BTreeMap::new();
        let mut map = |g: &mut Graph, t: &Term| -> Term {
            match t {
                Term::Blank(label) => relabel.entry(label.clone()).or_insert_with(|| g.fresh_blank()).clone(),
                other => other.clone(),
            }
        };
        for t in other.triples() {
            let subject = map(self, &t.subject);
            let object = map(self, &t.object);
            self.insert(Triple {
                subject,
                predicate: t.predicate,
                object,
            });
        }
        for (label, ns) in other.prefixes.iter() {
            if self.prefixes.get(label).is_none() {
                self.prefixes.insert_if_absent(label, ns.as_str());
            }
        }
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        super::iso::isomorphic(self, other)
    }
}

pub(crate) fn rdf_type() -> Iri {
    Iri::from_static(vocab::RDF_TYPE)
}

impl FromIterator<Triple> for Graph {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}
