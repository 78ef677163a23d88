use std::collections::{BTreeMap, BTreeSet};

use super::{escape_string, vocab, Graph, Iri, Literal, PrefixMap, Term};

/// Canonical Turtle: sorted `@prefix` block, a blank line, then one block per
/// top-level subject in canonical order. Blank nodes referenced exactly once are
/// written inline (`[ ... ]` or `( ... )` for well-formed collections); the rest
/// keep their labels.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (label, ns) in graph.prefixes.iter() {
        out.push_str(&format!("@prefix {label}: <{}> .\n", ns.as_str()));
    }
    if graph.is_empty() {
        return out;
    }
    if !out.is_empty() {
        out.push('\n');
    }
    let plan = Plan::new(graph);
    let writer = Writer {
        graph,
        prefixes: &graph.prefixes,
        plan: &plan,
    };
    let mut first = true;
    for subject in graph.subjects() {
        if !plan.top.contains(subject) {
            continue;
        }
        if !first {
            out.push('\n');
        }
        first = false;
        writer.subject_block(subject, &mut out);
    }
    out
}

struct Plan {
    top: BTreeSet<Term>,
    /// Blank objects referenced more than once; never inlined.
    shared: BTreeSet<Term>,
    collections: BTreeMap<Term, Vec<Term>>,
}

impl Plan {
    fn new(graph: &Graph) -> Self {
        let mut refs: BTreeMap<Term, usize> = BTreeMap::new();
        for t in graph.triples() {
            if t.object.is_blank() {
                *refs.entry(t.object).or_default() += 1;
            }
        }
        let inlinable = |t: &Term| t.is_blank() && refs.get(t) == Some(&1);
        let shared: BTreeSet<Term> = refs.iter().filter(|(_, &n)| n > 1).map(|(t, _)| t.clone()).collect();
        let mut top: BTreeSet<Term> = graph.subjects().filter(|s| !inlinable(s)).cloned().collect();
        loop {
            let collections = find_collections(graph, &refs, &top);
            let mut reached = BTreeSet::new();
            for s in &top {
                mark(graph, s, &top, &collections, &mut reached, true);
            }
            let unreached = graph
                .subjects()
                .find(|s| !top.contains(*s) && !reached.contains(*s))
                .cloned();
            match unreached {
                Some(s) => {
                    top.insert(s);
                }
                None => return Plan { top, shared, collections },
            }
        }
    }
}

fn find_collections(graph: &Graph, refs: &BTreeMap<Term, usize>, top: &BTreeSet<Term>) -> BTreeMap<Term, Vec<Term>> {
    let first = Iri::from_static(vocab::RDF_FIRST);
    let rest = Iri::from_static(vocab::RDF_REST);
    let mut out = BTreeMap::new();
    // a list node is a blank with exactly rdf:first and rdf:rest, one value each
    let is_list_node = |n: &Term| {
        n.is_blank()
            && refs.get(n) == Some(&1)
            && !top.contains(n)
            && graph.predicates_of(n).is_some_and(|preds| {
                preds.len() == 2 && graph.count(n, &first) == 1 && graph.count(n, &rest) == 1
            })
    };
    'heads: for head in graph.subjects() {
        if !is_list_node(head) {
            continue;
        }
        // skip interior nodes: only start from nodes not referenced via rdf:rest
        if graph.subjects_with(&rest, head).next().is_some() {
            continue;
        }
        let mut members = Vec::new();
        let mut node = head.clone();
        let mut seen = BTreeSet::new();
        while !node.is_iri_str(vocab::RDF_NIL) {
            if !is_list_node(&node) || !seen.insert(node.clone()) {
                continue 'heads;
            }
            members.push(graph.objects_of(&node, &first).remove(0));
            node = graph.objects_of(&node, &rest).remove(0);
        }
        out.insert(head.clone(), members);
    }
    out
}

fn mark(
    graph: &Graph,
    node: &Term,
    top: &BTreeSet<Term>,
    collections: &BTreeMap<Term, Vec<Term>>,
    reached: &mut BTreeSet<Term>,
    is_root: bool,
) {
    if !is_root {
        if top.contains(node) || !reached.insert(node.clone()) {
            return;
        }
        if collections.contains_key(node) {
            let rest = Iri::from_static(vocab::RDF_REST);
            let mut n = node.clone();
            while !n.is_iri_str(vocab::RDF_NIL) {
                reached.insert(n.clone());
                n = graph.objects_of(&n, &rest).remove(0);
            }
            for m in &collections[node] {
                if m.is_blank() {
                    mark(graph, m, top, collections, reached, false);
                }
            }
            return;
        }
    }
    if let Some(preds) = graph.predicates_of(node) {
        for objs in preds.values() {
            for o in objs {
                if o.is_blank() {
                    mark(graph, o, top, collections, reached, false);
                }
            }
        }
    }
}

struct Writer<'a> {
    graph: &'a Graph,
    prefixes: &'a PrefixMap,
    plan: &'a Plan,
}

impl Writer<'_> {
    fn subject_block(&self, subject: &Term, out: &mut String) {
        out.push_str(&self.node(subject, true));
        let preds = self.graph.predicates_of(subject).cloned().unwrap_or_default();
        for (i, (p, objs)) in preds.iter().enumerate() {
            out.push_str(if i == 0 { " " } else { " ;\n  " });
            out.push_str(&self.predicate(p));
            out.push(' ');
            let rendered: Vec<String> = objs.iter().map(|o| self.node(o, false)).collect();
            out.push_str(&rendered.join(", "));
        }
        out.push_str(" .\n");
    }

    fn predicate(&self, p: &Iri) -> String {
        if p.as_str() == vocab::RDF_TYPE {
            "a".to_owned()
        } else {
            self.prefixes.render(p)
        }
    }

    fn node(&self, term: &Term, as_subject: bool) -> String {
        match term {
            Term::Iri(iri) => self.prefixes.render(iri),
            Term::Literal(lit) => self.literal(lit),
            Term::Blank(label) => {
                if as_subject || self.plan.top.contains(term) || self.plan.shared.contains(term) {
                    return format!("_:{label}");
                }
                if let Some(members) = self.plan.collections.get(term) {
                    if members.is_empty() {
                        return "()".to_owned();
                    }
                    let items: Vec<String> = members.iter().map(|m| self.node(m, false)).collect();
                    return format!("( {} )", items.join(" "));
                }
                match self.graph.predicates_of(term) {
                    None => "[]".to_owned(),
                    Some(preds) => {
                        let parts: Vec<String> = preds
                            .iter()
                            .map(|(p, objs)| {
                                let os: Vec<String> = objs.iter().map(|o| self.node(o, false)).collect();
                                format!("{} {}", self.predicate(p), os.join(", "))
                            })
                            .collect();
                        format!("[ {} ]", parts.join(" ; "))
                    }
                }
            }
        }
    }

    fn literal(&self, lit: &Literal) -> String {
        let body = if lit.lexical().contains('\n') {
            format!("\"\"\"{}\"\"\"", escape_string(lit.lexical(), true))
        } else {
            format!("\"{}\"", escape_string(lit.lexical(), false))
        };
        match lit.language() {
            Some(tag) => format!("{body}@{tag}"),
            None if lit.datatype().as_str() == vocab::XSD_STRING => body,
            None => format!("{body}^^{}", self.prefixes.render(lit.datatype())),
        }
    }
}
