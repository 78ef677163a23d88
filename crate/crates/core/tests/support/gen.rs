//! Seeded random schemas, data and graphs.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ontoforge::rdf::{vocab, Graph, Iri, Literal, Term};

use super::oracle;

pub const EX: &str = "http://x.test/";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const INDEX: &str = "http://empusa.org/0.1#index";

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ex(local: &str) -> Iri {
    Iri::new(format!("{EX}{local}")).unwrap()
}

pub fn ext(local: &str) -> Term {
    Term::iri(&format!("http://ext.test/{local}")).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RValue {
    Datatype(&'static str),
    Class(usize),
    External,
    ValueSet(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RContainer {
    Plain,
    Ordered,
    Numbered,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RProp {
    pub predicate: String,
    pub value: RValue,
    pub min: usize,
    pub max_one: bool,
    pub container: RContainer,
}

impl RProp {
    pub fn token(&self) -> &'static str {
        match (self.min, self.max_one) {
            (0, true) => "0..1",
            (_, true) => "1..1",
            (0, false) => "0..N",
            (_, false) => "1..N",
        }
    }

    pub fn same_constraint(&self, other: &RProp) -> bool {
        (self.value, self.min, self.max_one, self.container) == (other.value, other.min, other.max_one, other.container)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RClass {
    pub name: String,
    pub parents: Vec<usize>,
    pub props: Vec<RProp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RValueSet {
    pub name: String,
    /// Member local name and the index of its parent member, if nested.
    pub members: Vec<(String, Option<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandSchema {
    pub classes: Vec<RClass>,
    pub value_sets: Vec<RValueSet>,
}

pub const DATATYPES: [&str; 6] = ["string", "integer", "boolean", "double", "decimal", "date"];

pub struct Limits {
    pub classes: usize,
    pub props: usize,
}

impl RandSchema {
    /// Draws schemas until one has no override conflict and no predicate is
    /// both a datatype and an object property.
    pub fn generate(rng: &mut ChaCha8Rng, limits: &Limits) -> RandSchema {
        loop {
            let s = Self::draw(rng, limits);
            if (0..s.classes.len()).all(|c| oracle::effective(&s, c).is_ok()) && s.property_kinds_agree() {
                return s;
            }
        }
    }

    fn property_kinds_agree(&self) -> bool {
        let mut seen = std::collections::BTreeMap::new();
        self.classes.iter().flat_map(|c| &c.props).all(|p| {
            let literal = matches!(p.value, RValue::Datatype(_)) && p.container == RContainer::Plain;
            *seen.entry(p.predicate.as_str()).or_insert(literal) == literal
        })
    }

    fn draw(rng: &mut ChaCha8Rng, limits: &Limits) -> RandSchema {
        let n_sets = rng.gen_range(0..=2);
        let value_sets: Vec<RValueSet> = (0..n_sets)
            .map(|v| {
                let n = rng.gen_range(2..=3);
                let members = (0..n)
                    .map(|m| {
                        let parent = (m > 0 && rng.gen_bool(0.3)).then(|| rng.gen_range(0..m));
                        (format!("V{v}m{m}"), parent)
                    })
                    .collect();
                RValueSet { name: format!("V{v}"), members }
            })
            .collect();
        let n_classes = rng.gen_range(1..=limits.classes);
        let mut classes: Vec<RClass> = Vec::new();
        for c in 0..n_classes {
            let mut parents = BTreeSet::new();
            if c > 0 {
                for _ in 0..rng.gen_range(0..=2usize) {
                    parents.insert(rng.gen_range(0..c));
                }
            }
            let mut props = Vec::new();
            let n_props = rng.gen_range(0..=limits.props);
            for k in 0..n_props {
                // occasionally redefine an inherited predicate
                let inherited: Vec<String> = parents.iter().flat_map(|&p| classes[p].props.iter().map(|q| q.predicate.clone())).collect();
                let predicate = if !inherited.is_empty() && rng.gen_bool(0.2) {
                    inherited.choose(rng).unwrap().clone()
                } else {
                    format!("p{c}_{k}")
                };
                if props.iter().any(|p: &RProp| p.predicate == predicate) {
                    continue;
                }
                props.push(random_prop(rng, predicate, n_classes, value_sets.len()));
            }
            classes.push(RClass {
                name: format!("C{c}"),
                parents: parents.into_iter().collect(),
                props,
            });
        }
        RandSchema { classes, value_sets }
    }

    pub fn class_iri(&self, c: usize) -> Iri {
        ex(&self.classes[c].name)
    }

    pub fn members(&self, v: usize) -> Vec<Iri> {
        self.value_sets[v].members.iter().map(|(m, _)| ex(m)).collect()
    }

    /// The definition as Turtle, in the annotated-OWL input format.
    pub fn to_turtle(&self) -> String {
        let mut out = format!(
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             @prefix xsd: <{XSD}> .\n@prefix e: <http://empusa.org/0.1#> .\n@prefix ex: <{EX}> .\n\n<{EX}onto> a owl:Ontology .\n"
        );
        for vs in &self.value_sets {
            let _ = writeln!(out, "ex:{} rdfs:subClassOf e:EnumeratedValueClass .", vs.name);
            for (m, parent) in &vs.members {
                let parent = parent.map(|p| vs.members[p].0.clone()).unwrap_or_else(|| vs.name.clone());
                let _ = writeln!(out, "ex:{m} rdfs:subClassOf ex:{parent} ; rdfs:label \"{m}\" .");
            }
        }
        for class in &self.classes {
            let _ = write!(out, "ex:{} a owl:Class", class.name);
            for p in &class.parents {
                let _ = write!(out, " ; rdfs:subClassOf ex:{}", self.classes[*p].name);
            }
            if !class.props.is_empty() {
                let lines: Vec<String> = class
                    .props
                    .iter()
                    .map(|p| {
                        let target = match p.value {
                            RValue::Datatype(d) => format!("xsd:{d}"),
                            RValue::Class(c) => format!("ex:{}", self.classes[c].name),
                            RValue::External => "IRI".to_owned(),
                            RValue::ValueSet(v) => format!("@ex:{}", self.value_sets[v].name),
                        };
                        let marker = match p.container {
                            RContainer::Plain => "",
                            RContainer::Ordered => "=",
                            RContainer::Numbered => "~",
                        };
                        format!("# about {}\\nex:{} {target} {marker}{}", p.predicate, p.predicate, p.token())
                    })
                    .collect();
                let _ = write!(out, " ;\n    e:propertyDefinitions \"{}\"", lines.join("\\n"));
            }
            out.push_str(" .\n");
        }
        out
    }
}

fn random_prop(rng: &mut ChaCha8Rng, predicate: String, n_classes: usize, n_sets: usize) -> RProp {
    let value = match rng.gen_range(0..10) {
        0..=4 => RValue::Datatype(DATATYPES.choose(rng).copied().unwrap()),
        5..=6 => RValue::Class(rng.gen_range(0..n_classes)),
        7 => RValue::External,
        _ if n_sets > 0 => RValue::ValueSet(rng.gen_range(0..n_sets)),
        _ => RValue::External,
    };
    let min = rng.gen_range(0..=1);
    let max_one = rng.gen_bool(0.5);
    let container = match (max_one, rng.gen_range(0..10)) {
        (false, 0..=2) => RContainer::Ordered,
        (false, 3..=4) => RContainer::Numbered,
        _ => RContainer::Plain,
    };
    RProp {
        predicate,
        value,
        min,
        max_one,
        container,
    }
}

/// A literal known to lie in the lexical space of `xsd:<datatype>`.
pub fn valid_literal(rng: &mut ChaCha8Rng, datatype: &str) -> Literal {
    let lexical = match datatype {
        "string" => format!("s{}", rng.gen_range(0..100)),
        "integer" => rng.gen_range(-50..50).to_string(),
        "boolean" => ["true", "false"].choose(rng).unwrap().to_string(),
        "double" => format!("{}.5E0", rng.gen_range(0..50)),
        "decimal" => format!("{}.25", rng.gen_range(0..50)),
        "date" => format!("2024-01-{:02}", rng.gen_range(1..=28)),
        other => panic!("no sample for {other}"),
    };
    Literal::typed(lexical, Iri::new(format!("{XSD}{datatype}")).unwrap())
}

/// Literals drawn for random data, each with whether it is lexically valid
/// for its datatype.
pub const LITERAL_POOL: [(&str, &str, bool); 12] = [
    ("abc", "string", true),
    ("7", "integer", true),
    ("-3", "integer", true),
    ("x7", "integer", false),
    ("true", "boolean", true),
    ("yes", "boolean", false),
    ("1.5E0", "double", true),
    ("1.5.5", "double", false),
    ("2.5", "decimal", true),
    ("2.5e1", "decimal", false),
    ("2024-01-31", "date", true),
    ("2024-02-30", "date", false),
];

pub struct DataBuilder<'a> {
    pub schema: &'a RandSchema,
    pub graph: Graph,
    blanks: usize,
    /// Instances per class index.
    pub instances: Vec<Vec<Term>>,
}

impl<'a> DataBuilder<'a> {
    pub fn new(schema: &'a RandSchema) -> Self {
        DataBuilder {
            schema,
            graph: Graph::new(),
            blanks: 0,
            instances: vec![Vec::new(); schema.classes.len()],
        }
    }

    fn blank(&mut self) -> Term {
        self.blanks += 1;
        Term::blank(format!("g{}", self.blanks)).unwrap()
    }

    pub fn declare(&mut self, class: usize, count: usize) {
        for k in 0..count {
            let node = Term::Iri(ex(&format!("i{class}_{k}")));
            self.graph.add(node.clone(), &Iri::new(vocab::RDF_TYPE).unwrap(), self.schema.class_iri(class));
            self.instances[class].push(node);
        }
    }

    fn value(&mut self, rng: &mut ChaCha8Rng, value: RValue) -> Term {
        match value {
            RValue::Datatype(d) => Term::Literal(valid_literal(rng, d)),
            RValue::Class(c) => {
                let pool: Vec<Term> = oracle::descendants_or_self(self.schema, c)
                    .into_iter()
                    .flat_map(|d| self.instances[d].clone())
                    .collect();
                pool.choose(rng).expect("target class has instances").clone()
            }
            RValue::External => ext(&format!("r{}", rng.gen_range(0..5))),
            RValue::ValueSet(v) => Term::Iri(self.schema.members(v).choose(rng).unwrap().clone()),
        }
    }

    /// Attaches `count` values of `prop` to `node` in the property's container form.
    pub fn attach(&mut self, rng: &mut ChaCha8Rng, node: &Term, prop: &RProp, count: usize) {
        let predicate = ex(&prop.predicate);
        let mut values = Vec::new();
        while values.len() < count {
            let v = self.value(rng, prop.value);
            if prop.container == RContainer::Plain && values.contains(&v) {
                // plain values form a set; retry until distinct or give up
                if values.len() >= distinct_values(self.schema, prop.value, &self.instances) {
                    break;
                }
                continue;
            }
            values.push(v);
        }
        match prop.container {
            RContainer::Plain => {
                for v in values {
                    self.graph.add(node.clone(), &predicate, v);
                }
            }
            RContainer::Ordered if values.is_empty() => {}
            RContainer::Ordered => {
                let first = Iri::new(vocab::RDF_FIRST).unwrap();
                let rest = Iri::new(vocab::RDF_REST).unwrap();
                let cells: Vec<Term> = values.iter().map(|_| self.blank()).collect();
                self.graph.add(node.clone(), &predicate, cells[0].clone());
                for (i, v) in values.into_iter().enumerate() {
                    self.graph.add(cells[i].clone(), &first, v);
                    let next = cells.get(i + 1).cloned().unwrap_or_else(|| Term::iri(vocab::RDF_NIL).unwrap());
                    self.graph.add(cells[i].clone(), &rest, next);
                }
            }
            RContainer::Numbered => {
                let index = Iri::new(INDEX).unwrap();
                let value = Iri::new(vocab::RDF_VALUE).unwrap();
                for (i, v) in values.into_iter().enumerate() {
                    let entry = self.blank();
                    self.graph.add(node.clone(), &predicate, entry.clone());
                    self.graph.add(entry.clone(), &index, Literal::typed(i.to_string(), Iri::new(vocab::XSD_INTEGER).unwrap()));
                    self.graph.add(entry, &value, v);
                }
            }
        }
    }
}

/// How many different values a plain property can take in generated data.
fn distinct_values(schema: &RandSchema, value: RValue, instances: &[Vec<Term>]) -> usize {
    match value {
        RValue::Datatype("boolean") => 2,
        RValue::Datatype("date") => 28,
        RValue::Datatype(_) => 50,
        RValue::Class(c) => oracle::descendants_or_self(schema, c).into_iter().map(|d| instances[d].len()).sum(),
        RValue::External => 5,
        RValue::ValueSet(v) => schema.value_sets[v].members.len(),
    }
}

/// Instances of every class whose properties take in-range counts and values.
pub fn conforming_data(schema: &RandSchema, rng: &mut ChaCha8Rng, per_class: usize) -> Graph {
    let mut b = DataBuilder::new(schema);
    for c in 0..schema.classes.len() {
        b.declare(c, per_class);
    }
    for c in 0..schema.classes.len() {
        let props = oracle::effective(schema, c).unwrap();
        for node in b.instances[c].clone() {
            for prop in &props {
                let hi = if prop.max_one { 1 } else { 3 };
                let count = rng.gen_range(prop.min..=hi.max(prop.min));
                b.attach(rng, &node, prop, count);
            }
        }
    }
    b.graph
}

/// Two instances per used class: the first at every lower bound, the second
/// with one value for max-one properties and two for unbounded ones. Returns
/// the data and the classes deliberately left without instances.
pub fn exhaustive_data(schema: &RandSchema, rng: &mut ChaCha8Rng) -> (Graph, Vec<usize>) {
    let targeted: BTreeSet<usize> = schema
        .classes
        .iter()
        .flat_map(|c| c.props.iter())
        .filter_map(|p| match p.value {
            RValue::Class(t) => Some(t),
            _ => None,
        })
        .collect();
    let unused: Vec<usize> = (0..schema.classes.len()).filter(|c| !targeted.contains(c) && rng.gen_bool(0.3)).collect();
    let mut b = DataBuilder::new(schema);
    for c in 0..schema.classes.len() {
        if !unused.contains(&c) {
            b.declare(c, 2);
        }
    }
    for c in 0..schema.classes.len() {
        let props = oracle::effective(schema, c).unwrap();
        let nodes = b.instances[c].clone();
        for (k, node) in nodes.iter().enumerate() {
            for prop in &props {
                let count = match (k, prop.max_one) {
                    (0, _) => prop.min,
                    (_, true) => 1,
                    (_, false) => 2,
                };
                b.attach(rng, node, prop, count);
            }
        }
    }
    (b.graph, unused)
}

/// Small arbitrary graph (at most 8 subjects, 20 triples) built to exercise
/// every violation code: stray types, lists, invalid literals, undeclared
/// predicates.
pub fn random_data(schema: &RandSchema, rng: &mut ChaCha8Rng) -> Graph {
    let rdf_type = Iri::new(vocab::RDF_TYPE).unwrap();
    let mut graph = if rng.gen_bool(0.5) {
        let full = conforming_data(schema, rng, 1);
        let mut triples: Vec<_> = full.triples().collect();
        triples.shuffle(rng);
        let mut g = Graph::new();
        let mut subjects = BTreeSet::new();
        for t in triples.into_iter().take(rng.gen_range(4..=16)) {
            if subjects.len() < 4 || subjects.contains(&t.subject) {
                subjects.insert(t.subject.clone());
                g.insert(t);
            }
        }
        g
    } else {
        Graph::new()
    };
    let nodes: Vec<Term> = (0..3)
        .map(|i| Term::Iri(ex(&format!("n{i}"))))
        .chain([Term::blank("k0").unwrap()])
        .collect();
    let predicates: Vec<Iri> = schema.classes.iter().flat_map(|c| c.props.iter().map(|p| ex(&p.predicate))).collect();
    while graph.len() < 20 && rng.gen_bool(0.85) {
        let subject = nodes.choose(rng).unwrap().clone();
        let roll = rng.gen_range(0..20);
        let (predicate, object) = match roll {
            0..=4 => {
                let object = if rng.gen_bool(0.85) {
                    Term::Iri(schema.class_iri(rng.gen_range(0..schema.classes.len())))
                } else {
                    Term::Iri(ex("Other"))
                };
                (rdf_type.clone(), object)
            }
            5 => (Iri::new(vocab::RDF_FIRST).unwrap(), random_object(schema, rng, &nodes)),
            6 => {
                let object = if rng.gen_bool(0.6) { Term::iri(vocab::RDF_NIL).unwrap() } else { nodes.choose(rng).unwrap().clone() };
                (Iri::new(vocab::RDF_REST).unwrap(), object)
            }
            7 => (Iri::new(vocab::RDF_VALUE).unwrap(), random_object(schema, rng, &nodes)),
            8 => {
                let object = if rng.gen_bool(0.8) {
                    Literal::typed(rng.gen_range(0..3).to_string(), Iri::new(vocab::XSD_INTEGER).unwrap())
                } else {
                    Literal::string("x")
                };
                (Iri::new(INDEX).unwrap(), Term::Literal(object))
            }
            9 => (ex("undeclared"), random_object(schema, rng, &nodes)),
            _ if predicates.is_empty() => (ex("undeclared"), random_object(schema, rng, &nodes)),
            _ => (predicates.choose(rng).unwrap().clone(), random_object(schema, rng, &nodes)),
        };
        graph.add(subject, &predicate, object);
    }
    graph
}

fn random_object(schema: &RandSchema, rng: &mut ChaCha8Rng, nodes: &[Term]) -> Term {
    match rng.gen_range(0..10) {
        0..=3 => nodes.choose(rng).unwrap().clone(),
        4..=6 => {
            let (lexical, datatype, _) = LITERAL_POOL.choose(rng).unwrap();
            Term::Literal(Literal::typed(*lexical, Iri::new(format!("{XSD}{datatype}")).unwrap()))
        }
        7 => Term::Literal(Literal::lang("hi", "en").unwrap()),
        8 if !schema.value_sets.is_empty() => {
            let v = rng.gen_range(0..schema.value_sets.len());
            Term::Iri(schema.members(v).choose(rng).unwrap().clone())
        }
        8 => Term::iri(vocab::RDF_NIL).unwrap(),
        _ => ext("r0"),
    }
}

/// Arbitrary graph of at most `max` triples for serializer round trips.
pub fn random_graph(rng: &mut ChaCha8Rng, max: usize) -> Graph {
    const LOCALS: [&str; 8] = ["a", "b-c", "d_e", "f.g", "h1", "Ünï", "x%20y", "z"];
    const STRINGS: [&str; 8] = ["", "plain", "with \"quotes\"", "line\nbreak", "tab\there", "back\\slash", "ünïcödé ☃", "'single'"];
    let mut g = Graph::new();
    g.prefixes.insert("ex", Iri::new(EX).unwrap());
    let iri = |rng: &mut ChaCha8Rng| -> Term {
        let local = LOCALS.choose(rng).unwrap();
        match rng.gen_range(0..3) {
            0 => Term::iri(&format!("{EX}{local}")).unwrap(),
            1 => Term::iri(&format!("http://other.test/path/{local}")).unwrap(),
            _ => Term::iri(&format!("urn:test:{local}")).unwrap(),
        }
    };
    let target = rng.gen_range(0..=max);
    let mut attempts = 0;
    while g.len() < target && attempts < 200 {
        attempts += 1;
        if rng.gen_bool(0.1) && g.len() + 6 <= max {
            let n = rng.gen_range(0..=3);
            let members: Vec<Term> = (0..n).map(|_| iri(rng)).collect();
            let head = g.add_list(&members);
            let s = iri(rng);
            g.add(s, &ex("list"), head);
            continue;
        }
        let subject = if rng.gen_bool(0.3) { Term::blank(format!("b{}", rng.gen_range(0..4))).unwrap() } else { iri(rng) };
        let predicate = match iri(rng) {
            Term::Iri(i) => i,
            _ => unreachable!(),
        };
        let object = match rng.gen_range(0..9) {
            0..=2 => iri(rng),
            3 => Term::blank(format!("b{}", rng.gen_range(0..4))).unwrap(),
            4 => Term::Literal(Literal::string(*STRINGS.choose(rng).unwrap())),
            5 => Term::Literal(Literal::lang(*STRINGS.choose(rng).unwrap(), ["en", "en-GB", "nl"].choose(rng).unwrap()).unwrap()),
            6 => {
                let (lexical, datatype) = [("42", "integer"), ("-0.5", "decimal"), ("1.0E3", "double"), ("true", "boolean"), ("007", "integer")]
                    .choose(rng)
                    .copied()
                    .unwrap();
                Term::Literal(Literal::typed(lexical, Iri::new(format!("{XSD}{datatype}")).unwrap()))
            }
            7 => Term::Literal(Literal::typed("x y", Iri::new("http://dt.test/custom").unwrap())),
            _ => Term::Iri(Iri::new(vocab::RDF_TYPE).unwrap()),
        };
        g.add(subject, &predicate, object);
    }
    g
}
