use std::collections::BTreeMap;

use serde::Serialize;

use super::{accessor_name, FileMap};
use crate::canonical_json;
use crate::schema::{Cardinality, CheckedSchema, CompileError, ContainerKind, ErrorCode};

/// Language-neutral description of the accessors a generated API needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiDescriptor {
    pub classes: Vec<ApiClass>,
    pub value_sets: Vec<ApiValueSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiClass {
    pub iri: String,
    pub name: String,
    pub parents: Vec<String>,
    pub properties: Vec<ApiProperty>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiProperty {
    pub predicate: String,
    pub accessor_name: String,
    pub value_kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub cardinality: Cardinality,
    pub container: ContainerKind,
    pub nullable: bool,
    pub accessors: Vec<&'static str>,
    pub declared_in: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiValueSet {
    pub iri: String,
    pub name: String,
    pub members: Vec<String>,
}

/// Renders source files from a descriptor, e.g. one class file per language.
pub trait ApiTemplate {
    fn render(&self, api: &ApiDescriptor) -> Result<FileMap, CompileError>;
}

pub fn api_descriptor(schema: &CheckedSchema) -> Result<ApiDescriptor, Vec<CompileError>> {
    let mut errors = Vec::new();
    let mut classes = Vec::new();
    for class in schema.classes() {
        let mut seen: BTreeMap<String, &crate::rdf::Iri> = BTreeMap::new();
        let mut properties = Vec::new();
        for prop in schema.effective_properties(&class.iri).unwrap_or_default() {
            let def = &prop.def;
            let name = accessor_name(&def.predicate);
            if let Some(other) = seen.insert(name.clone(), &def.predicate) {
                errors.push(
                    CompileError::new(
                        ErrorCode::AccessorCollision,
                        format!("{other} and {} both map to accessor {name}", def.predicate),
                    )
                    .class(&class.iri)
                    .predicate(&def.predicate),
                );
            }
            let single = def.cardinality.max_is_one();
            properties.push(ApiProperty {
                predicate: def.predicate.as_str().to_owned(),
                accessor_name: name,
                value_kind: def.value_type.kind(),
                target: def.value_type.target().map(|t| t.as_str().to_owned()),
                cardinality: def.cardinality,
                container: def.container,
                nullable: single && def.cardinality.min() == 0,
                accessors: if single { vec!["get", "set"] } else { vec!["getAll", "add", "remove"] },
                declared_in: prop.declared_in.as_str().to_owned(),
            });
        }
        classes.push(ApiClass {
            iri: class.iri.as_str().to_owned(),
            name: accessor_name(&class.iri),
            parents: class.parents.iter().map(|p| p.as_str().to_owned()).collect(),
            properties,
        });
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let value_sets = schema
        .value_sets()
        .map(|vs| ApiValueSet {
            iri: vs.root.as_str().to_owned(),
            name: accessor_name(&vs.root),
            members: schema
                .valueset_members(&vs.root)
                .unwrap_or_default()
                .iter()
                .map(|m| m.as_str().to_owned())
                .collect(),
        })
        .collect();
    Ok(ApiDescriptor { classes, value_sets })
}

/// The descriptor as canonical JSON: sorted keys, two-space indent, LF.
pub fn emit_api_descriptor(schema: &CheckedSchema) -> Result<String, Vec<CompileError>> {
    Ok(canonical_json(&api_descriptor(schema)?))
}

pub fn render_api(schema: &CheckedSchema, template: &dyn ApiTemplate) -> Result<FileMap, Vec<CompileError>> {
    template.render(&api_descriptor(schema)?).map_err(|e| vec![e])
}
