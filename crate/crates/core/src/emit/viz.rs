use std::fmt::Write;

use serde_json::{json, Value};

use super::VizFormat;
use crate::schema::{CheckedSchema, ValueType};

struct Node {
    iri: String,
    label: String,
    value_set_root: bool,
    datatype_properties: usize,
}

struct Edge {
    source: String,
    target: String,
    kind: &'static str,
    predicate: Option<String>,
    cardinality: Option<String>,
}

fn collect(schema: &CheckedSchema) -> (Vec<Node>, Vec<Edge>) {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for class in schema.classes() {
        nodes.push(Node {
            iri: class.iri.as_str().to_owned(),
            label: class.label.clone().unwrap_or_else(|| class.iri.local_name().to_owned()),
            value_set_root: false,
            datatype_properties: class.own_properties.iter().filter(|p| p.value_type.is_datatype()).count(),
        });
        for def in &class.own_properties {
            if let ValueType::ClassRef(t) | ValueType::ValueSetRef(t) = &def.value_type {
                edges.push(Edge {
                    source: class.iri.as_str().to_owned(),
                    target: t.as_str().to_owned(),
                    kind: "property",
                    predicate: Some(def.predicate.as_str().to_owned()),
                    cardinality: Some(def.marked_token()),
                });
            }
        }
    }
    for class in schema.classes() {
        for parent in &class.parents {
            edges.push(Edge {
                source: class.iri.as_str().to_owned(),
                target: parent.as_str().to_owned(),
                kind: "subclass",
                predicate: None,
                cardinality: None,
            });
        }
    }
    for vs in schema.value_sets() {
        nodes.push(Node {
            iri: vs.root.as_str().to_owned(),
            label: vs.label.clone().unwrap_or_else(|| vs.root.local_name().to_owned()),
            value_set_root: true,
            datatype_properties: 0,
        });
    }
    nodes.sort_by(|a, b| a.iri.cmp(&b.iri));
    (nodes, edges)
}

/// Class diagram: a node per class and value-set root, an edge per
/// class- or value-set-valued property and per subclass link.
pub fn emit_viz(schema: &CheckedSchema, format: VizFormat) -> String {
    let (nodes, edges) = collect(schema);
    match format {
        VizFormat::CytoscapeJson => cytoscape(&nodes, &edges),
        VizFormat::GraphMl => graphml(&nodes, &edges),
    }
}

fn cytoscape(nodes: &[Node], edges: &[Edge]) -> String {
    let nodes: Vec<Value> = nodes
        .iter()
        .map(|n| {
            json!({"data": {
                "id": n.iri,
                "iri": n.iri,
                "label": n.label,
                "isValueSetRoot": n.value_set_root,
                "datatypeProperties": n.datatype_properties,
            }})
        })
        .collect();
    let edges: Vec<Value> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut data = json!({
                "id": format!("e{i}"),
                "source": e.source,
                "target": e.target,
                "kind": e.kind,
            });
            if let (Some(p), Some(c)) = (&e.predicate, &e.cardinality) {
                data["predicate"] = json!(p);
                data["cardinality"] = json!(c);
            }
            json!({ "data": data })
        })
        .collect();
    crate::canonical_json(&json!({"elements": {"nodes": nodes, "edges": edges}}))
}

fn xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

fn graphml(nodes: &[Node], edges: &[Edge]) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <key id=\"iri\" for=\"node\" attr.name=\"iri\" attr.type=\"string\"/>\n  \
         <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n  \
         <key id=\"isValueSetRoot\" for=\"node\" attr.name=\"isValueSetRoot\" attr.type=\"boolean\"/>\n  \
         <key id=\"datatypeProperties\" for=\"node\" attr.name=\"datatypeProperties\" attr.type=\"int\"/>\n  \
         <key id=\"kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n  \
         <key id=\"predicate\" for=\"edge\" attr.name=\"predicate\" attr.type=\"string\"/>\n  \
         <key id=\"cardinality\" for=\"edge\" attr.name=\"cardinality\" attr.type=\"string\"/>\n  \
         <graph id=\"schema\" edgedefault=\"directed\">\n",
    );
    for n in nodes {
        let _ = write!(
            out,
            "    <node id=\"{id}\">\n      <data key=\"iri\">{id}</data>\n      <data key=\"label\">{}</data>\n      \
             <data key=\"isValueSetRoot\">{}</data>\n      <data key=\"datatypeProperties\">{}</data>\n    </node>\n",
            xml(&n.label),
            n.value_set_root,
            n.datatype_properties,
            id = xml(&n.iri),
        );
    }
    for (i, e) in edges.iter().enumerate() {
        let _ = write!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\">\n      <data key=\"kind\">{}</data>\n",
            xml(&e.source),
            xml(&e.target),
            e.kind
        );
        if let (Some(p), Some(c)) = (&e.predicate, &e.cardinality) {
            let _ = write!(
                out,
                "      <data key=\"predicate\">{}</data>\n      <data key=\"cardinality\">{}</data>\n",
                xml(p),
                xml(c)
            );
        }
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
