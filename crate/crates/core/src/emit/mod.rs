//! Artifact generation from a [`CheckedSchema`]. Every emitter is a pure
//! function of the schema and produces byte-identical output for equal input.

mod api;
mod docs;
mod frame;
mod owl;
mod shex;
mod viz;

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::rdf::{serialize_turtle, Iri};
use crate::schema::{CheckedSchema, CompileError, ErrorCode};

pub use api::{api_descriptor, emit_api_descriptor, render_api, ApiClass, ApiDescriptor, ApiProperty, ApiTemplate, ApiValueSet};
pub use docs::emit_docs;
pub use frame::emit_jsonld_frame;
pub use owl::emit_owl;
pub use shex::emit_shex;
pub use viz::emit_viz;

/// Relative POSIX path to file content, iterated in path order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileMap {
    entries: BTreeMap<String, String>,
}

impl FileMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a file. Fails with `name-collision` if the path is taken.
    pub fn insert(&mut self, path: impl Into<String>, content: impl Into<String>) -> Result<(), CompileError> {
        let path = path.into();
        assert!(is_normalized_relative(&path), "not a normalized relative path: {path}");
        if self.entries.contains_key(&path) {
            return Err(CompileError::new(ErrorCode::NameCollision, format!("two artifacts map to {path}")));
        }
        self.entries.insert(path, content.into());
        Ok(())
    }

    /// Adds every file of `other` under `dir`.
    pub fn nest(&mut self, dir: &str, other: FileMap) -> Result<(), CompileError> {
        for (path, content) in other.entries {
            self.insert(format!("{dir}/{path}"), content)?;
        }
        Ok(())
    }

    pub fn get(&self, path: &str) -> Option<&str> {
        self.entries.get(path).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, c)| (p.as_str(), c.as_str()))
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn is_normalized_relative(path: &str) -> bool {
    !path.is_empty()
        && !path.starts_with('/')
        && !path.contains('\\')
        && path.split('/').all(|seg| !seg.is_empty() && seg != "." && seg != "..")
}

/// Identifier derived from the IRI's local name: characters outside
/// `[A-Za-z0-9_]` become `_`, and a leading digit gets a `_` prefix.
pub fn accessor_name(iri: &Iri) -> String {
    let mut name: String = iri
        .local_name()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
        name.insert(0, '_');
    }
    name
}

/// File stem used for a class or value-set page: the local name with
/// characters unsafe in paths replaced by `_`.
pub fn page_name(iri: &Iri) -> String {
    let name: String = iri
        .local_name()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '-') { c } else { '_' })
        .collect();
    if name.is_empty() {
        "_".to_owned()
    } else {
        name
    }
}

/// Page stem per IRI, failing on two IRIs sharing a stem.
fn page_names<'a>(iris: impl Iterator<Item = &'a Iri>) -> Result<BTreeMap<Iri, String>, Vec<CompileError>> {
    let mut by_name: BTreeMap<String, &Iri> = BTreeMap::new();
    let mut errors = Vec::new();
    let mut names = BTreeMap::new();
    for iri in iris {
        let name = page_name(iri);
        if let Some(other) = by_name.get(&name) {
            errors.push(
                CompileError::new(ErrorCode::NameCollision, format!("{other} and {iri} both map to page {name}")).class(iri),
            );
        } else {
            by_name.insert(name.clone(), iri);
        }
        names.insert(iri.clone(), name);
    }
    if errors.is_empty() {
        Ok(names)
    } else {
        Err(errors)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VizFormat {
    #[default]
    CytoscapeJson,
    GraphMl,
}

impl VizFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            VizFormat::CytoscapeJson => "viz.cyjs",
            VizFormat::GraphMl => "viz.graphml",
        }
    }
}

impl FromStr for VizFormat {
    type Err = CompileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cytoscape-json" => Ok(VizFormat::CytoscapeJson),
            "graphml" => Ok(VizFormat::GraphMl),
            other => Err(CompileError::new(
                ErrorCode::UnknownFormat,
                format!("unknown visualization format {other:?}; expected cytoscape-json or graphml"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitOptions {
    pub frame_depth: usize,
    pub viz_format: VizFormat,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            frame_depth: 1,
            viz_format: VizFormat::default(),
        }
    }
}

/// Every artifact of a full compile: `schema.shex`, `ontology.ttl`, `docs/`,
/// `frames/<Class>.jsonld`, the visualization and `api.json`.
pub fn emit_all(schema: &CheckedSchema, options: &EmitOptions) -> Result<FileMap, Vec<CompileError>> {
    let ((owl, docs), (frames, api)) = rayon::join(
        || (emit_owl(schema), emit_docs(schema)),
        || (emit_frames(schema, options.frame_depth), emit_api_descriptor(schema)),
    );
    let shex = emit_shex(schema);
    let viz = emit_viz(schema, options.viz_format);

    fn keep<T>(r: Result<T, Vec<CompileError>>, errors: &mut Vec<CompileError>) -> Option<T> {
        r.map_err(|e| errors.extend(e)).ok()
    }
    let mut errors = Vec::new();
    let (owl, docs) = (keep(owl, &mut errors), keep(docs, &mut errors));
    let (frames, api) = (keep(frames, &mut errors), keep(api, &mut errors));
    let (Some(owl), Some(docs), Some(frames), Some(api)) = (owl, docs, frames, api) else {
        errors.sort();
        errors.dedup();
        return Err(errors);
    };

    let mut files = FileMap::new();
    let single = |e| vec![e];
    files.insert("schema.shex", shex).map_err(single)?;
    files.insert("ontology.ttl", serialize_turtle(&owl)).map_err(single)?;
    files.nest("docs", docs).map_err(single)?;
    files.nest("frames", frames).map_err(single)?;
    files.insert(options.viz_format.file_name(), viz).map_err(single)?;
    files.insert("api.json", api).map_err(single)?;
    Ok(files)
}

/// One `<Class>.jsonld` frame per class.
pub fn emit_frames(schema: &CheckedSchema, depth: usize) -> Result<FileMap, Vec<CompileError>> {
    let names = page_names(schema.classes().map(|c| &c.iri))?;
    let mut files = FileMap::new();
    for (iri, name) in names {
        let frame = emit_jsonld_frame(schema, &iri, depth).map_err(|e| vec![e])?;
        files.insert(format!("{name}.jsonld"), frame).map_err(|e| vec![e])?;
    }
    Ok(files)
}
