use std::collections::BTreeMap;

use super::{is_absolute_iri, Graph, Iri, Literal, RdfError, Term, Triple};

/// Parses N-Triples. Blank node labels are renamed to `b0`, `b1`, … in order of
/// first appearance.
pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    let mut graph = Graph::new();
    let mut blanks = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut cur = LineCursor {
            chars: line.char_indices().peekable(),
            line: line_no,
            text: line,
            pushed_back: 0,
        };
        cur.skip_ws();
        if cur.at_end() || cur.peek() == Some('#') {
            continue;
        }
        let subject = match cur.term(&mut graph, &mut blanks)? {
            t @ (Term::Iri(_) | Term::Blank(_)) => t,
            Term::Literal(_) => return Err(cur.error("literal in subject position")),
        };
        cur.skip_ws();
        let predicate = match cur.term(&mut graph, &mut blanks)? {
            Term::Iri(iri) => iri,
            _ => return Err(cur.error("predicate must be an IRI")),
        };
        cur.skip_ws();
        let object = cur.term(&mut graph, &mut blanks)?;
        cur.skip_ws();
        if cur.next() != Some('.') {
            return Err(cur.error("expected '.'"));
        }
        cur.skip_ws();
        if !cur.at_end() && cur.peek() != Some('#') {
            return Err(cur.error("trailing characters after '.'"));
        }
        graph.insert(Triple {
            subject,
            predicate,
            object,
        });
    }
    Ok(graph)
}

/// One triple per line in canonical order.
pub fn write_ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for t in graph.triples() {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

struct LineCursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    text: &'a str,
    pushed_back: usize,
}

impl LineCursor<'_> {
    fn peek(&mut self) -> Option<char> {
        if self.pushed_back > 0 {
            return Some('.');
        }
        self.chars.peek().map(|&(_, c)| c)
    }

    fn next(&mut self) -> Option<char> {
        if self.pushed_back > 0 {
            self.pushed_back -= 1;
            return Some('.');
        }
        self.chars.next().map(|(_, c)| c)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn column(&mut self) -> usize {
        let offset = self.chars.peek().map_or(self.text.len(), |&(i, _)| i);
        self.text[..offset].chars().count() + 1
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.next();
        }
    }

    fn error(&mut self, message: &str) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.to_owned(),
        }
    }

    fn term(&mut self, graph: &mut Graph, blanks: &mut BTreeMap<String, Term>) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => self.iri().map(Term::Iri),
            Some('_') => {
                self.next();
                if self.next() != Some(':') {
                    return Err(self.error("expected ':' after '_'"));
                }
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                        label.push(c);
                        self.next();
                    } else {
                        break;
                    }
                }
                // a trailing '.' terminates the statement, not the label
                while label.ends_with('.') {
                    label.pop();
                    self.pushed_back += 1;
                }
                if label.is_empty() {
                    return Err(self.error("empty blank node label"));
                }
                Ok(blanks.entry(label).or_insert_with(|| graph.fresh_blank()).clone())
            }
            Some('"') => {
                self.next();
                let mut lexical = String::new();
                loop {
                    match self.next() {
                        None => return Err(self.error("unterminated string")),
                        Some('"') => break,
                        Some('\\') => lexical.push(self.escape()?),
                        Some(c) => lexical.push(c),
                    }
                }
                match self.peek() {
                    Some('@') => {
                        self.next();
                        let mut tag = String::new();
                        while let Some(c) = self.peek() {
                            if c.is_ascii_alphanumeric() || c == '-' {
                                tag.push(c);
                                self.next();
                            } else {
                                break;
                            }
                        }
                        Literal::lang(lexical, &tag)
                            .map(Term::Literal)
                            .map_err(|_| self.error("invalid language tag"))
                    }
                    Some('^') => {
                        self.next();
                        if self.next() != Some('^') {
                            return Err(self.error("expected '^^'"));
                        }
                        let dt = self.iri()?;
                        Ok(Term::Literal(Literal::typed(lexical, dt)))
                    }
                    _ => Ok(Term::Literal(Literal::string(lexical))),
                }
            }
            Some(_) => Err(self.error("expected IRI, blank node or literal")),
            None => Err(self.error("unexpected end of line")),
        }
    }

    fn iri(&mut self) -> Result<Iri, RdfError> {
        self.next(); // '<'
        let mut value = String::new();
        loop {
            match self.next() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => value.push(self.escape()?),
                Some(c) if c.is_whitespace() => return Err(self.error("whitespace in IRI")),
                Some(c) => value.push(c),
            }
        }
        if !is_absolute_iri(&value) {
            return Err(RdfError::RelativeIri {
                iri: value,
                line: self.line,
            });
        }
        Iri::new(value)
    }

    fn escape(&mut self) -> Result<char, RdfError> {
        let c = self.next().ok_or_else(|| self.error("dangling escape"))?;
        let width = match c {
            't' => return Ok('\t'),
            'b' => return Ok('\u{8}'),
            'n' => return Ok('\n'),
            'r' => return Ok('\r'),
            'f' => return Ok('\u{c}'),
            '"' | '\'' | '\\' => return Ok(c),
            'u' => 4,
            'U' => 8,
            _ => return Err(self.error("unknown escape")),
        };
        let mut hex = String::new();
        for _ in 0..width {
            hex.push(self.next().ok_or_else(|| self.error("short unicode escape"))?);
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error("invalid unicode escape"))
    }
}
