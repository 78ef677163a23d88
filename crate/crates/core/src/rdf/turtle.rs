//! Turtle reader for the subset ontology editors write: `@prefix`/`PREFIX`,
//! `a`, predicate-object lists, object lists, collections, blank node property
//! lists, typed and language-tagged literals, long strings, plus the numeric and
//! boolean shorthands. `@base`/`BASE` and relative IRIs are rejected.

use std::collections::BTreeMap;

use super::prefix::is_valid_prefix_label;
use super::{is_absolute_iri, vocab, Graph, Iri, Literal, RdfError, Term, Triple};

pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        graph: Graph::new(),
        namespaces: BTreeMap::new(),
        blanks: BTreeMap::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    Carets,
    Integer(String),
    Decimal(String),
    Double(String),
    Bool(bool),
    A,
    AtPrefix,
    SparqlPrefix,
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Token>, RdfError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '<' => Tok::IriRef(self.iri_ref()?),
                '"' | '\'' => Tok::Str(self.string()?),
                '@' => {
                    self.bump();
                    let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                    match word.as_str() {
                        "prefix" => Tok::AtPrefix,
                        "base" => return Err(self.err("@base is not supported; use absolute IRIs")),
                        "" => return Err(self.err("empty language tag")),
                        _ => Tok::LangTag(word),
                    }
                }
                '^' => {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.err("expected '^^'"));
                    }
                    Tok::Carets
                }
                '.' if !self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => {
                    self.bump();
                    Tok::Dot
                }
                ';' => {
                    self.bump();
                    Tok::Semicolon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '_' if self.peek_at(1) == Some(':') => {
                    self.bump();
                    self.bump();
                    let label = self.name_chars()?;
                    if label.is_empty() {
                        return Err(self.err("empty blank node label"));
                    }
                    Tok::Blank(label)
                }
                c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number()?,
                c if c.is_alphabetic() || c == ':' => self.word(line, column)?,
                other => return Err(self.err(format!("unexpected character {other:?}"))),
            };
            out.push(Token { tok, line, column });
        }
        Ok(out)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    /// Reads name characters; unescaped trailing dots are left for the `Dot` token.
    fn name_chars(&mut self) -> Result<String, RdfError> {
        let mut s = String::new();
        let mut raw_dots = 0;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%' | '\u{b7}') {
                raw_dots = if c == '.' { raw_dots + 1 } else { 0 };
                s.push(c);
                self.bump();
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => s.push(e),
                    _ => return Err(self.err("invalid escape in local name")),
                }
                raw_dots = 0;
            } else {
                break;
            }
        }
        s.truncate(s.len() - raw_dots);
        self.pos -= raw_dots;
        self.column -= raw_dots;
        Ok(s)
    }

    fn word(&mut self, line: usize, column: usize) -> Result<Tok, RdfError> {
        let prefix = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-'));
        if self.peek() == Some(':') {
            self.bump();
            if !is_valid_prefix_label(&prefix) {
                return Err(self.err(format!("invalid prefix label {prefix:?}")));
            }
            let local = self.name_chars()?;
            return Ok(Tok::PName { prefix, local });
        }
        match prefix.as_str() {
            "a" => Ok(Tok::A),
            "true" => Ok(Tok::Bool(true)),
            "false" => Ok(Tok::Bool(false)),
            w if w.eq_ignore_ascii_case("prefix") => Ok(Tok::SparqlPrefix),
            w if w.eq_ignore_ascii_case("base") => Err(RdfError::Syntax {
                line,
                column,
                message: "BASE is not supported; use absolute IRIs".into(),
            }),
            w => Err(RdfError::Syntax {
                line,
                column,
                message: format!("unexpected bare word {w:?}"),
            }),
        }
    }

    fn number(&mut self) -> Result<Tok, RdfError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut kind = 0; // 0 integer, 1 decimal, 2 double
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            s.push('.');
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
            kind = 1;
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            self.bump();
            s.push(e);
            if let Some(c @ ('+' | '-')) = self.peek() {
                s.push(c);
                self.bump();
            }
            let exp = self.take_while(|c| c.is_ascii_digit());
            if exp.is_empty() {
                return Err(self.err("malformed exponent"));
            }
            s.push_str(&exp);
            kind = 2;
        }
        if !s.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.err(format!("malformed number {s:?}")));
        }
        Ok(match kind {
            0 => Tok::Integer(s),
            1 => Tok::Decimal(s),
            _ => Tok::Double(s),
        })
    }

    fn iri_ref(&mut self) -> Result<String, RdfError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated IRI")),
                Some('>') => return Ok(s),
                Some('\\') => s.push(self.escape(true)?),
                Some(c) if c.is_whitespace() => return Err(self.err("whitespace in IRI")),
                Some(c) => s.push(c),
            }
        }
    }

    fn string(&mut self) -> Result<String, RdfError> {
        let quote = self.bump().unwrap_or('"');
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err("unterminated string")),
                Some('\\') => s.push(self.escape(false)?),
                Some(c) if c == quote && !long => return Ok(s),
                Some(c) if c == quote && self.peek() == Some(quote) && self.peek_at(1) == Some(quote) => {
                    // closing delimiter; quotes immediately before it belong to the content
                    while self.peek_at(2) == Some(quote) {
                        s.push(quote);
                        self.bump();
                    }
                    self.bump();
                    self.bump();
                    return Ok(s);
                }
                Some('\n' | '\r') if !long => return Err(self.err("newline in short string")),
                Some(c) => s.push(c),
            }
        }
    }

    fn escape(&mut self, unicode_only: bool) -> Result<char, RdfError> {
        let c = self.bump().ok_or_else(|| self.err("dangling escape"))?;
        let width = match c {
            'u' => 4,
            'U' => 8,
            _ if unicode_only => return Err(self.err("only \\u escapes are allowed in IRIs")),
            't' => return Ok('\t'),
            'b' => return Ok('\u{8}'),
            'n' => return Ok('\n'),
            'r' => return Ok('\r'),
            'f' => return Ok('\u{c}'),
            '"' | '\'' | '\\' => return Ok(c),
            _ => return Err(self.err(format!("unknown escape \\{c}"))),
        };
        let mut hex = String::new();
        for _ in 0..width {
            hex.push(self.bump().ok_or_else(|| self.err("short unicode escape"))?);
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err("invalid unicode escape"))
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    graph: Graph,
    namespaces: BTreeMap<String, String>,
    blanks: BTreeMap<String, Term>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err_here(&self, message: impl Into<String>) -> RdfError {
        let (line, column) = match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        };
        RdfError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), RdfError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn document(&mut self) -> Result<(), RdfError> {
        while let Some(tok) = self.peek() {
            match tok {
                Tok::AtPrefix => {
                    self.pos += 1;
                    self.prefix_decl()?;
                    self.expect(Tok::Dot, "'.' after @prefix")?;
                }
                Tok::SparqlPrefix => {
                    self.pos += 1;
                    self.prefix_decl()?;
                }
                _ => {
                    self.triples()?;
                    self.expect(Tok::Dot, "'.'")?;
                }
            }
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        let label = match self.next() {
            Some(Token {
                tok: Tok::PName { prefix, local },
                ..
            }) if local.is_empty() => prefix,
            _ => {
                self.pos -= 1;
                return Err(self.err_here("expected prefix label"));
            }
        };
        let ns = match self.next() {
            Some(Token {
                tok: Tok::IriRef(iri), line, ..
            }) => self.absolute(iri, line)?,
            _ => {
                self.pos -= 1;
                return Err(self.err_here("expected namespace IRI"));
            }
        };
        self.namespaces.insert(label.clone(), ns.as_str().to_owned());
        self.graph.prefixes.insert(label, ns);
        Ok(())
    }

    fn absolute(&self, iri: String, line: usize) -> Result<Iri, RdfError> {
        if is_absolute_iri(&iri) {
            Iri::new(iri)
        } else {
            Err(RdfError::RelativeIri { iri, line })
        }
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        if self.peek() == Some(&Tok::LBracket) {
            let subject = self.blank_property_list()?;
            if !matches!(self.peek(), Some(Tok::Dot)) {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = match self.peek() {
            Some(Tok::LParen) => self.collection()?,
            _ => {
                let t = self.term()?;
                if t.is_literal() {
                    return Err(self.err_at(self.pos - 1, "literal in subject position"));
                }
                t
            }
        };
        self.predicate_object_list(&subject)
    }

    fn err_at(&self, idx: usize, message: &str) -> RdfError {
        let t = &self.tokens[idx];
        RdfError::Syntax {
            line: t.line,
            column: t.column,
            message: message.to_owned(),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.graph.insert(Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek() != Some(&Tok::Semicolon) {
                return Ok(());
            }
            while self.peek() == Some(&Tok::Semicolon) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(Tok::Dot | Tok::RBracket) | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, RdfError> {
        if self.peek() == Some(&Tok::A) {
            self.pos += 1;
            return Ok(Iri::from_static(vocab::RDF_TYPE));
        }
        match self.term()? {
            Term::Iri(iri) => Ok(iri),
            _ => Err(self.err_at(self.pos - 1, "predicate must be an IRI")),
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some(Tok::LBracket) => self.blank_property_list(),
            Some(Tok::LParen) => self.collection(),
            _ => self.term(),
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, RdfError> {
        self.expect(Tok::LBracket, "'['")?;
        let node = self.graph.fresh_blank();
        if self.peek() != Some(&Tok::RBracket) {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, RdfError> {
        self.expect(Tok::LParen, "'('")?;
        let mut members = Vec::new();
        while self.peek() != Some(&Tok::RParen) {
            if self.peek().is_none() {
                return Err(self.err_here("unterminated collection"));
            }
            members.push(self.object()?);
        }
        self.pos += 1;
        Ok(self.graph.add_list(&members))
    }

    fn term(&mut self) -> Result<Term, RdfError> {
        let Some(token) = self.next() else {
            return Err(self.err_here("unexpected end of input"));
        };
        let Token { tok, line, column } = token;
        match tok {
            Tok::IriRef(iri) => self.absolute(iri, line).map(Term::Iri),
            Tok::PName { prefix, local } => self.expand(&prefix, &local, line, column).map(Term::Iri),
            Tok::Blank(label) => {
                let fresh = match self.blanks.get(&label) {
                    Some(t) => t.clone(),
                    None => {
                        let t = self.graph.fresh_blank();
                        self.blanks.insert(label, t.clone());
                        t
                    }
                };
                Ok(fresh)
            }
            Tok::Str(lexical) => match self.peek() {
                Some(Tok::LangTag(_)) => {
                    let Some(Token {
                        tok: Tok::LangTag(tag), ..
                    }) = self.next()
                    else {
                        unreachable!()
                    };
                    Literal::lang(lexical, &tag)
                        .map(Term::Literal)
                        .map_err(|e| self.err_at(self.pos - 1, &e.to_string()))
                }
                Some(Tok::Carets) => {
                    self.pos += 1;
                    match self.term()? {
                        Term::Iri(dt) => Ok(Term::Literal(Literal::typed(lexical, dt))),
                        _ => Err(self.err_at(self.pos - 1, "datatype must be an IRI")),
                    }
                }
                _ => Ok(Term::Literal(Literal::string(lexical))),
            },
            Tok::Integer(s) => Ok(typed(s, vocab::XSD_INTEGER)),
            Tok::Decimal(s) => Ok(typed(s, vocab::XSD_DECIMAL)),
            Tok::Double(s) => Ok(typed(s, vocab::XSD_DOUBLE)),
            Tok::Bool(b) => Ok(typed(b.to_string(), vocab::XSD_BOOLEAN)),
            other => Err(RdfError::Syntax {
                line,
                column,
                message: format!("unexpected {}", describe(&other)),
            }),
        }
    }

    fn expand(&self, prefix: &str, local: &str, line: usize, column: usize) -> Result<Iri, RdfError> {
        let ns = self.namespaces.get(prefix).ok_or_else(|| RdfError::UnknownPrefix {
            prefix: prefix.to_owned(),
            line,
            column,
        })?;
        Iri::new(format!("{ns}{local}")).map_err(|_| RdfError::Syntax {
            line,
            column,
            message: format!("{prefix}:{local} does not expand to a valid IRI"),
        })
    }
}

fn typed(lexical: String, datatype: &str) -> Term {
    Term::Literal(Literal::typed(lexical, Iri::from_static(datatype)))
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Dot => "'.'".into(),
        Tok::Semicolon => "';'".into(),
        Tok::Comma => "','".into(),
        Tok::LBracket => "'['".into(),
        Tok::RBracket => "']'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::A => "'a'".into(),
        Tok::Carets => "'^^'".into(),
        Tok::AtPrefix | Tok::SparqlPrefix => "prefix directive".into(),
        Tok::LangTag(t) => format!("language tag @{t}"),
        other => format!("{other:?}"),
    }
}
