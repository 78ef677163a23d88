use std::collections::BTreeMap;
use std::fmt::Write;

use super::{page_names, FileMap};
use crate::rdf::{Iri, PrefixMap};
use crate::schema::{CheckedSchema, ClassDef, CompileError, ValueSet, ValueType};

/// An mkdocs project: `mkdocs.yml` plus pages under `docs/`.
pub fn emit_docs(schema: &CheckedSchema) -> Result<FileMap, Vec<CompileError>> {
    let class_pages = page_names(schema.classes().map(|c| &c.iri));
    let set_pages = page_names(schema.value_sets().map(|v| &v.root));
    let (class_pages, set_pages) = match (class_pages, set_pages) {
        (Ok(c), Ok(s)) => (c, s),
        (c, s) => {
            let mut errors: Vec<CompileError> = c.err().into_iter().chain(s.err()).flatten().collect();
            errors.sort();
            return Err(errors);
        }
    };
    let site = Site {
        schema,
        prefixes: schema.prefixes(),
        class_pages,
        set_pages,
    };

    let mut files = FileMap::new();
    let one = |e| vec![e];
    files.insert("mkdocs.yml", site.config()).map_err(one)?;
    files.insert("docs/index.md", site.index()).map_err(one)?;
    for class in schema.classes() {
        files
            .insert(format!("docs/classes/{}.md", site.class_pages[&class.iri]), site.class_page(class))
            .map_err(one)?;
    }
    for vs in schema.value_sets() {
        files
            .insert(format!("docs/valuesets/{}.md", site.set_pages[&vs.root]), site.value_set_page(vs))
            .map_err(one)?;
    }
    Ok(files)
}

struct Site<'a> {
    schema: &'a CheckedSchema,
    prefixes: &'a PrefixMap,
    class_pages: BTreeMap<Iri, String>,
    set_pages: BTreeMap<Iri, String>,
}

fn title(label: Option<&String>, iri: &Iri) -> String {
    label.cloned().unwrap_or_else(|| iri.local_name().to_owned())
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', "<br>")
}

fn quote(s: &str) -> String {
    serde_json::Value::String(s.to_owned()).to_string()
}

impl Site<'_> {
    fn site_name(&self) -> String {
        match &self.schema.schema().ontology_iri {
            Some(iri) if !iri.local_name().is_empty() => iri.local_name().to_owned(),
            Some(iri) => iri.as_str().to_owned(),
            None => "Ontology".to_owned(),
        }
    }

    fn config(&self) -> String {
        let mut out = format!("site_name: {}\nnav:\n  - Home: index.md\n", quote(&self.site_name()));
        if !self.class_pages.is_empty() {
            out.push_str("  - Classes:\n");
            for class in self.schema.classes() {
                let _ = writeln!(
                    out,
                    "      - {}: classes/{}.md",
                    quote(&title(class.label.as_ref(), &class.iri)),
                    self.class_pages[&class.iri]
                );
            }
        }
        if !self.set_pages.is_empty() {
            out.push_str("  - Value sets:\n");
            for vs in self.schema.value_sets() {
                let _ = writeln!(
                    out,
                    "      - {}: valuesets/{}.md",
                    quote(&title(vs.label.as_ref(), &vs.root)),
                    self.set_pages[&vs.root]
                );
            }
        }
        out
    }

    fn index(&self) -> String {
        let mut out = format!("# {}\n\n", self.site_name());
        if let Some(iri) = &self.schema.schema().ontology_iri {
            let _ = writeln!(out, "Ontology `{iri}`.\n", iri = iri.as_str());
        }
        let index = self.prefixes.render(&self.schema.schema().vocab.index_predicate);
        let _ = write!(
            out,
            "## Reading the property tables\n\n\
             Each class page lists the properties a member of the class must or may have, \
             including those inherited from its ancestors. Inherited rows name the class that defines them.\n\n\
             | Multiplicity | Meaning |\n| --- | --- |\n\
             | `0..1` | optional, at most one value |\n\
             | `1..1` | exactly one value |\n\
             | `0..N` | optional, any number of values |\n\
             | `1..N` | at least one value |\n\n\
             A multiplicity written with a leading `=` stores the values as an **ordered list**: \
             the property points to one RDF collection (`rdf:first`/`rdf:rest`, ending in `rdf:nil`). \
             A leading `~` stores them as a **numbered list**: each value sits on its own entry node \
             holding the value under `rdf:value` and its 0-based position under `{index}`.\n"
        );
        if !self.class_pages.is_empty() {
            out.push_str("\n## Classes\n\n");
            for class in self.schema.classes() {
                let _ = write!(
                    out,
                    "- [{}](classes/{}.md)",
                    title(class.label.as_ref(), &class.iri),
                    self.class_pages[&class.iri]
                );
                if let Some(first) = class.description.as_deref().and_then(|d| d.lines().next()) {
                    let _ = write!(out, ": {first}");
                }
                out.push('\n');
            }
        }
        if !self.set_pages.is_empty() {
            out.push_str("\n## Value sets\n\n");
            for vs in self.schema.value_sets() {
                let _ = writeln!(
                    out,
                    "- [{}](valuesets/{}.md)",
                    title(vs.label.as_ref(), &vs.root),
                    self.set_pages[&vs.root]
                );
            }
        }
        out
    }

    fn class_link(&self, iri: &Iri, from_classes: bool) -> String {
        let dir = if from_classes { "" } else { "../classes/" };
        format!("[{}]({dir}{}.md)", self.prefixes.render(iri), self.class_pages[iri])
    }

    fn class_page(&self, class: &ClassDef) -> String {
        let mut out = format!("# {}\n\n`{}`\n\n", title(class.label.as_ref(), &class.iri), class.iri.as_str());
        if let Some(d) = &class.description {
            let _ = write!(out, "{d}\n\n");
        }
        if !class.parents.is_empty() {
            let links: Vec<String> = class.parents.iter().map(|p| self.class_link(p, true)).collect();
            let _ = write!(out, "**Subclass of:** {}\n\n", links.join(", "));
        }
        let children: Vec<String> = self
            .schema
            .classes()
            .filter(|c| c.parents.contains(&class.iri))
            .map(|c| self.class_link(&c.iri, true))
            .collect();
        if !children.is_empty() {
            let _ = write!(out, "**Subclasses:** {}\n\n", children.join(", "));
        }

        out.push_str("## Properties\n\n");
        let props = self.schema.effective_properties(&class.iri).unwrap_or_default();
        if props.is_empty() {
            out.push_str("This class defines no properties.\n\n");
        } else {
            out.push_str("| Predicate | Type | Multiplicity | Container | Description |\n| --- | --- | --- | --- | --- |\n");
            for prop in props {
                let def = &prop.def;
                let type_cell = match &def.value_type {
                    ValueType::Datatype(d) => format!("`{}`", self.prefixes.render(d)),
                    ValueType::ClassRef(c) => self.class_link(c, true),
                    ValueType::ExternalIri => "IRI".to_owned(),
                    ValueType::ValueSetRef(r) => {
                        format!("[{}](../valuesets/{}.md)", self.prefixes.render(r), self.set_pages[r])
                    }
                };
                let mut description = String::new();
                if prop.declared_in != class.iri {
                    description = format!("*Inherited from {}.*", self.class_link(&prop.declared_in, true));
                }
                if let Some(d) = &def.description {
                    if !description.is_empty() {
                        description.push(' ');
                    }
                    description.push_str(d);
                }
                let _ = writeln!(
                    out,
                    "| [{}]({}) | {} | {} | {} | {} |",
                    self.prefixes.render(&def.predicate),
                    def.predicate.as_str(),
                    type_cell,
                    def.cardinality.token(),
                    def.container.describe(),
                    cell(&description)
                );
            }
            out.push('\n');
        }
        out.push_str("[Back to index](../index.md)\n");
        out
    }

    fn value_set_page(&self, vs: &ValueSet) -> String {
        let mut out = format!("# {}\n\n`{}`\n\n", title(vs.label.as_ref(), &vs.root), vs.root.as_str());
        if let Some(d) = &vs.description {
            let _ = write!(out, "{d}\n\n");
        }
        out.push_str("## Members\n\n");
        if vs.members.is_empty() {
            out.push_str("This value set has no members.\n");
        }
        let mut children: BTreeMap<Option<&Iri>, Vec<&crate::schema::ValueSetMember>> = BTreeMap::new();
        for m in &vs.members {
            children.entry(m.parent.as_ref()).or_default().push(m);
        }
        for list in children.values_mut() {
            list.sort_by(|a, b| a.iri.cmp(&b.iri));
        }
        let mut stack: Vec<(&crate::schema::ValueSetMember, usize)> =
            children.get(&None).into_iter().flatten().rev().map(|m| (*m, 0)).collect();
        while let Some((m, depth)) = stack.pop() {
            let _ = write!(out, "{}- **{}** `{}`", "  ".repeat(depth), m.iri.local_name(), m.iri.as_str());
            if let Some(l) = &m.label {
                let _ = write!(out, ": {l}");
            }
            out.push('\n');
            for child in children.get(&Some(&m.iri)).into_iter().flatten().rev() {
                stack.push((child, depth + 1));
            }
        }

        let users: Vec<String> = self
            .schema
            .classes()
            .flat_map(|c| c.own_properties.iter().map(move |p| (c, p)))
            .filter(|(_, p)| p.value_type == ValueType::ValueSetRef(vs.root.clone()))
            .map(|(c, p)| format!("{} (`{}`)", self.class_link(&c.iri, false), self.prefixes.render(&p.predicate)))
            .collect();
        if !users.is_empty() {
            let _ = write!(out, "\n**Used by:** {}\n", users.join(", "));
        }
        out.push_str("\n[Back to index](../index.md)\n");
        out
    }
}
