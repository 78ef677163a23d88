//! Blank-node isomorphism: colour refinement followed by backtracking.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use super::{Graph, Term, Triple};

pub(crate) fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ground = |g: &Graph| -> BTreeSet<Triple> {
        g.triples().filter(|t| !t.subject.is_blank() && !t.object.is_blank()).collect()
    };
    if ground(a) != ground(b) {
        return false;
    }
    let ca = colours(a);
    let cb = colours(b);
    let mut hist_a: Vec<u64> = ca.values().copied().collect();
    let mut hist_b: Vec<u64> = cb.values().copied().collect();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }

    let blank_triples: Vec<Triple> = a.triples().filter(|t| t.subject.is_blank() || t.object.is_blank()).collect();
    let order: Vec<Term> = {
        let mut v: Vec<Term> = ca.keys().cloned().collect();
        // rarest colours first keeps the search narrow
        let freq = |c: u64| hist_a.iter().filter(|&&x| x == c).count();
        v.sort_by_key(|t| (freq(ca[t]), t.clone()));
        v
    };
    let mut mapping = BTreeMap::new();
    let mut used = BTreeSet::new();
    search(0, &order, &ca, &cb, &blank_triples, b, &mut mapping, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    order: &[Term],
    ca: &BTreeMap<Term, u64>,
    cb: &BTreeMap<Term, u64>,
    triples: &[Triple],
    target: &Graph,
    mapping: &mut BTreeMap<Term, Term>,
    used: &mut BTreeSet<Term>,
) -> bool {
    let Some(node) = order.get(depth) else {
        return true;
    };
    for (candidate, colour) in cb {
        if *colour != ca[node] || used.contains(candidate) {
            continue;
        }
        mapping.insert(node.clone(), candidate.clone());
        used.insert(candidate.clone());
        if consistent(node, triples, mapping, target)
            && search(depth + 1, order, ca, cb, triples, target, mapping, used)
        {
            return true;
        }
        mapping.remove(node);
        used.remove(candidate);
    }
    false
}

/// Every triple touching `node` whose blanks are all mapped must exist in `target`.
fn consistent(node: &Term, triples: &[Triple], mapping: &BTreeMap<Term, Term>, target: &Graph) -> bool {
    let map = |t: &Term| -> Option<Term> {
        if t.is_blank() {
            mapping.get(t).cloned()
        } else {
            Some(t.clone())
        }
    };
    triples
        .iter()
        .filter(|t| &t.subject == node || &t.object == node)
        .all(|t| match (map(&t.subject), map(&t.object)) {
            (Some(subject), Some(object)) => target.contains(&Triple {
                subject,
                predicate: t.predicate.clone(),
                object,
            }),
            _ => true,
        })
}

fn colours(g: &Graph) -> BTreeMap<Term, u64> {
    let blanks: BTreeSet<Term> = g
        .triples()
        .flat_map(|t| [t.subject, t.object])
        .filter(Term::is_blank)
        .collect();
    let mut colour: BTreeMap<Term, u64> = blanks.iter().map(|b| (b.clone(), 0)).collect();
    let triples: Vec<Triple> = g.triples().filter(|t| t.subject.is_blank() || t.object.is_blank()).collect();
    let term_key = |t: &Term, colour: &BTreeMap<Term, u64>| -> String {
        match t {
            Term::Blank(_) => format!("_{}", colour[t]),
            other => other.to_string(),
        }
    };
    for _ in 0..blanks.len().max(1) {
        let mut next = BTreeMap::new();
        for b in &blanks {
            let mut edges: Vec<String> = triples
                .iter()
                .filter_map(|t| {
                    if &t.subject == b {
                        Some(format!("out {} {}", t.predicate, term_key(&t.object, &colour)))
                    } else if &t.object == b {
                        Some(format!("in {} {}", t.predicate, term_key(&t.subject, &colour)))
                    } else {
                        None
                    }
                })
                .collect();
            edges.sort();
            let mut h = DefaultHasher::new();
            colour[b].hash(&mut h);
            edges.hash(&mut h);
            next.insert(b.clone(), h.finish());
        }
        let stable = partition_size(&next) == partition_size(&colour);
        colour = next;
        if stable {
            break;
        }
    }
    colour
}

fn partition_size(c: &BTreeMap<Term, u64>) -> usize {
    c.values().collect::<BTreeSet<_>>().len()
}
