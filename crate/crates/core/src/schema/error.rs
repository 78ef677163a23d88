use std::fmt;

use thiserror::Error;

use crate::rdf::Iri;
use crate::Severity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorCode {
    Syntax,
    UnknownPrefix,
    DuplicatePredicate,
    MalformedCardinality,
    DanglingReference,
    SubclassCycle,
    ContainerOnSingle,
    OverrideConflict,
    ValueSetOverlap,
    ConflictingGlobalProperty,
    NameCollision,
    AccessorCollision,
    UnknownClass,
    UnknownValueSet,
    UnknownFormat,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Syntax => "parse-error",
            ErrorCode::UnknownPrefix => "unknown-prefix",
            ErrorCode::DuplicatePredicate => "duplicate-predicate",
            ErrorCode::MalformedCardinality => "malformed-cardinality",
            ErrorCode::DanglingReference => "dangling-reference",
            ErrorCode::SubclassCycle => "subclass-cycle",
            ErrorCode::ContainerOnSingle => "container-on-single",
            ErrorCode::OverrideConflict => "override-conflict",
            ErrorCode::ValueSetOverlap => "valueset-overlap",
            ErrorCode::ConflictingGlobalProperty => "conflicting-global-property",
            ErrorCode::NameCollision => "name-collision",
            ErrorCode::AccessorCollision => "accessor-collision",
            ErrorCode::UnknownClass => "unknown-class",
            ErrorCode::UnknownValueSet => "unknown-value-set",
            ErrorCode::UnknownFormat => "unknown-format",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A diagnostic from compiling a definition or emitting an artifact.
///
/// Renders as `SEVERITY code class=<iri> [predicate=<iri>] [line=N]: message`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Error)]
pub struct CompileError {
    pub severity: Severity,
    pub code: ErrorCode,
    pub class: Option<Iri>,
    pub predicate: Option<Iri>,
    pub line: Option<usize>,
    pub message: String,
}

impl CompileError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        CompileError {
            severity: Severity::Error,
            code,
            class: None,
            predicate: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn class(mut self, class: &Iri) -> Self {
        self.class = Some(class.clone());
        self
    }

    pub fn predicate(mut self, predicate: &Iri) -> Self {
        self.predicate = Some(predicate.clone());
        self
    }

    pub fn line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for CompileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.severity, self.code)?;
        if let Some(c) = &self.class {
            write!(f, " class={c}")?;
        }
        if let Some(p) = &self.predicate {
            write!(f, " predicate={p}")?;
        }
        if let Some(l) = self.line {
            write!(f, " line={l}")?;
        }
        write!(f, ": {}", self.message)
    }
}
