use std::collections::BTreeMap;

use super::{Iri, RdfError};

/// Prefix label to namespace bindings. A namespace is bound to at most one label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `label` to `namespace`, replacing any previous binding of either.
    pub fn insert(&mut self, label: impl Into<String>, namespace: Iri) {
        let label = label.into();
        self.entries.retain(|l, ns| *l != label && *ns != namespace);
        self.entries.insert(label, namespace);
    }

    /// Binds only when neither the label nor the namespace is taken.
    pub fn insert_if_absent(&mut self, label: &str, namespace: &str) {
        if self.entries.contains_key(label) || self.entries.values().any(|ns| ns.as_str() == namespace) {
            return;
        }
        if let Ok(ns) = Iri::new(namespace) {
            self.entries.insert(label.to_owned(), ns);
        }
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.entries.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(l, ns)| (l.as_str(), ns))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Expands `prefix:local`. The error names the missing prefix.
    pub fn expand(&self, curie: &str) -> Result<Iri, RdfError> {
        let (prefix, local) = curie.split_once(':').ok_or_else(|| RdfError::Syntax {
            line: 0,
            column: 0,
            message: format!("{curie:?} is not a prefixed name"),
        })?;
        let ns = self.entries.get(prefix).ok_or_else(|| RdfError::UnknownPrefix {
            prefix: prefix.to_owned(),
            line: 0,
            column: 0,
        })?;
        Iri::new(format!("{}{}", ns.as_str(), local))
    }

    /// Shortest CURIE for `iri`: longest matching namespace, ties broken by label.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        self.entries
            .iter()
            .filter_map(|(label, ns)| {
                let local = iri.as_str().strip_prefix(ns.as_str())?;
                is_simple_local(local).then_some((ns.as_str().len(), label, local))
            })
            .min_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)))
            .map(|(_, label, local)| format!("{label}:{local}"))
    }

    /// `prefix:local` when compactable, `<iri>` otherwise.
    pub fn render(&self, iri: &Iri) -> String {
        self.compact(iri).unwrap_or_else(|| iri.to_string())
    }
}

/// Local parts that survive a Turtle round trip without escaping.
pub(crate) fn is_simple_local(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let first = local.chars().next().unwrap_or('.');
    let last = local.chars().last().unwrap_or('.');
    (first.is_ascii_alphanumeric() || first == '_')
        && last != '.'
        && local.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

pub(crate) fn is_valid_prefix_label(label: &str) -> bool {
    if label.is_empty() {
        return true;
    }
    let mut chars = label.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && !label.ends_with('.')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}
