//! The line-oriented property definition language carried by the
//! `propertyDefinitions` annotation:
//!
//! ```text
//! # optional description, one or more comment lines
//! prefix:predicate  target  cardinality
//! ```
//!
//! `target` is an XSD datatype, a class, the keyword `IRI`, or `@` followed by
//! a value-set root. Predicates and targets are CURIEs or `<IRI>`s.

use std::collections::BTreeSet;

use super::{parse_cardinality, CompileError, ErrorCode, PropertyDef, ValueType};
use crate::rdf::{ns, Iri, PrefixMap, RdfError};

pub fn parse_property_block(text: &str, prefixes: &PrefixMap) -> Result<Vec<PropertyDef>, Vec<CompileError>> {
    let mut defs = Vec::new();
    let mut errors = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            pending.clear();
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            pending.push(comment.strip_prefix(' ').unwrap_or(comment).to_owned());
            continue;
        }
        let description = (!pending.is_empty()).then(|| pending.join("\n"));
        pending.clear();
        match parse_line(trimmed, prefixes) {
            Ok((predicate, value_type, cardinality, container)) => {
                if !seen.insert(predicate.clone()) {
                    errors.push(
                        CompileError::new(
                            ErrorCode::DuplicatePredicate,
                            format!("predicate {predicate} defined more than once"),
                        )
                        .predicate(&predicate)
                        .line(line),
                    );
                    continue;
                }
                defs.push(PropertyDef {
                    predicate,
                    value_type,
                    cardinality,
                    container,
                    description,
                    source_line: line,
                });
            }
            Err(e) => errors.push(e.line(line)),
        }
    }
    if errors.is_empty() {
        Ok(defs)
    } else {
        Err(errors)
    }
}

type ParsedLine = (Iri, ValueType, super::Cardinality, super::ContainerKind);

fn parse_line(line: &str, prefixes: &PrefixMap) -> Result<ParsedLine, CompileError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let [predicate, target, cardinality] = fields[..] else {
        return Err(CompileError::new(
            ErrorCode::Syntax,
            format!("expected `predicate target cardinality`, found {} field(s)", fields.len()),
        ));
    };
    let predicate = resolve_name(predicate, prefixes)?;
    let value_type = if target == "IRI" {
        ValueType::ExternalIri
    } else if let Some(root) = target.strip_prefix('@') {
        ValueType::ValueSetRef(resolve_name(root, prefixes)?)
    } else {
        let iri = resolve_name(target, prefixes)?;
        if iri.as_str().starts_with(ns::XSD) {
            ValueType::Datatype(iri)
        } else {
            ValueType::ClassRef(iri)
        }
    };
    let (cardinality, container) = parse_cardinality(cardinality).map_err(|e| e.predicate(&predicate))?;
    Ok((predicate, value_type, cardinality, container))
}

fn resolve_name(name: &str, prefixes: &PrefixMap) -> Result<Iri, CompileError> {
    if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
        return Iri::new(inner).map_err(|_| CompileError::new(ErrorCode::Syntax, format!("invalid IRI <{inner}>")));
    }
    if !name.contains(':') {
        return Err(CompileError::new(
            ErrorCode::Syntax,
            format!("{name:?} is neither a prefixed name nor an <IRI>"),
        ));
    }
    prefixes.expand(name).map_err(|e| match e {
        RdfError::UnknownPrefix { prefix, .. } => {
            CompileError::new(ErrorCode::UnknownPrefix, format!("unknown prefix '{prefix}' in {name}"))
        }
        other => CompileError::new(ErrorCode::Syntax, other.to_string()),
    })
}

/// Writes definitions back in the same language; parsing the result with the
/// same prefixes yields the same definitions (source lines aside).
pub fn format_property_block(defs: &[PropertyDef], prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (i, def) in defs.iter().enumerate() {
        if i > 0 && def.description.is_some() {
            out.push('\n');
        }
        if let Some(desc) = &def.description {
            for line in desc.lines() {
                if line.is_empty() {
                    out.push_str("#\n");
                } else {
                    out.push_str(&format!("# {line}\n"));
                }
            }
        }
        let target = match &def.value_type {
            ValueType::ExternalIri => "IRI".to_owned(),
            ValueType::ValueSetRef(root) => format!("@{}", prefixes.render(root)),
            ValueType::Datatype(iri) | ValueType::ClassRef(iri) => prefixes.render(iri),
        };
        out.push_str(&format!(
            "{} {} {}\n",
            prefixes.render(&def.predicate),
            target,
            def.marked_token()
        ));
    }
    out
}
