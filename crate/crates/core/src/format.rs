//! Text format for knowledge bases.
//!
//! One entity per line, `id: literal, literal, ...`. A literal is an atom
//! name, optionally prefixed with `!` or `¬` for negation and optionally
//! followed by parenthesized ground arguments, as in `!rel(a, b)`.
//! Whitespace around separators is ignored, `#` starts a comment that runs
//! to the end of the line, and blank lines are skipped. An optional
//! `%version` directive may precede the entities:
//!
//! ```text
//! %version 1
//! # diagnoses
//! K1: fievre, toux, !maux_de_tete
//! K2: fievre, !toux, maux_de_tete
//! ```
//!
//! Duplicate literals on a line collapse silently (entities are sets);
//! duplicate entity ids are an error. `parse(serialize(kb))` returns `kb`
//! for every representable knowledge base.

use std::fmt::Write as _;

use thiserror::Error;

use crate::kb::{Atom, Entity, EntityId, KnowledgeBase, Literal, Polarity};

/// Version emitted by the serializer and assumed when a document carries no
/// `%version` directive.
pub const FORMAT_VERSION: &str = "1";

const RESERVED: [char; 7] = [',', ':', '(', ')', '!', '¬', '#'];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate entity id \"{id}\"")]
    DuplicateId { line: usize, id: EntityId },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("cannot serialize {kind} {text:?}: not expressible in the text format")]
    Unrepresentable { kind: &'static str, text: String },
}

/// One parsed entity line: source line number, id, literals in source order
/// (duplicates preserved).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocEntry {
    pub line: usize,
    pub id: EntityId,
    pub literals: Vec<Literal>,
}

/// A parsed document: the grammar-level view of a knowledge-base file,
/// before set semantics and id uniqueness are applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KbDocument {
    pub version: String,
    pub entries: Vec<DocEntry>,
}

impl KbDocument {
    /// Applies set semantics and id uniqueness, yielding the knowledge base.
    pub fn to_kb(&self) -> Result<KnowledgeBase, ParseError> {
        let mut entities: Vec<Entity> = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            if entities.iter().any(|e| e.id() == &entry.id) {
                return Err(ParseError::DuplicateId {
                    line: entry.line,
                    id: entry.id.clone(),
                });
            }
            entities.push(Entity::new(entry.id.clone(), entry.literals.iter().cloned()));
        }
        Ok(KnowledgeBase::new(entities).expect("ids checked above"))
    }
}

/// Parses a document into its grammar-level form.
pub fn parse_document(text: &str) -> Result<KbDocument, ParseError> {
    let mut version: Option<String> = None;
    let mut entries = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        if let Some(directive) = trimmed.strip_prefix('%') {
            let column = line.chars().count() - trimmed.chars().count() + 1;
            if !entries.is_empty() {
                return Err(syntax(line_no, column, "directive must precede entities"));
            }
            if version.is_some() {
                return Err(syntax(line_no, column, "duplicate %version directive"));
            }
            let value = directive
                .strip_prefix("version")
                .filter(|rest| rest.is_empty() || rest.starts_with(char::is_whitespace))
                .ok_or_else(|| syntax(line_no, column, "unknown directive, expected %version"))?
                .trim();
            if value.is_empty() {
                return Err(syntax(line_no, column, "missing version string"));
            }
            version = Some(value.to_string());
            continue;
        }
        let mut scanner = Scanner::new(line, line_no);
        entries.push(scanner.entity_line()?);
    }
    Ok(KbDocument {
        version: version.unwrap_or_else(|| FORMAT_VERSION.to_string()),
        entries,
    })
}

/// Parses a document all the way to a knowledge base.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    parse_document(text)?.to_kb()
}

/// Parses a single literal, requiring the whole input to be consumed.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let mut scanner = Scanner::new(text, 1);
    let literal = scanner.literal()?;
    scanner.expect_end()?;
    Ok(literal)
}

/// Parses a single atom (no polarity marker), whole input.
pub fn parse_atom(text: &str) -> Result<Atom, ParseError> {
    let literal = parse_literal(text)?;
    if literal.polarity() == Polarity::Negative {
        return Err(syntax(1, 1, "expected an atom, found a negated literal"));
    }
    Ok(literal.atom().clone())
}

/// Renders a knowledge base in the text format: a `%version` header, one
/// line per entity in knowledge-base order, literals in canonical order.
/// Fails if an id, atom name, or argument cannot be written in the grammar.
pub fn serialize_kb(kb: &KnowledgeBase) -> Result<String, FormatError> {
    let mut out = String::new();
    writeln!(out, "%version {FORMAT_VERSION}").expect("string write");
    for entity in kb.iter() {
        check_token("entity id", entity.id().as_str())?;
        write!(out, "{}:", entity.id()).expect("string write");
        for (i, literal) in entity.literals().iter().enumerate() {
            check_token("atom name", literal.atom().name())?;
            for arg in literal.atom().args() {
                check_token("argument", arg)?;
            }
            let sep = if i == 0 { " " } else { ", " };
            write!(out, "{sep}{literal}").expect("string write");
        }
        out.push('\n');
    }
    Ok(out)
}

fn check_token(kind: &'static str, text: &str) -> Result<(), FormatError> {
    if text.is_empty() || !text.chars().all(is_name_char) {
        return Err(FormatError::Unrepresentable {
            kind,
            text: text.to_string(),
        });
    }
    Ok(())
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && c != '%' && !RESERVED.contains(&c)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Scanner {
    fn new(text: &str, line: usize) -> Self {
        Scanner {
            chars: text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        syntax(self.line, self.column(), message)
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(format!("expected {what}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn entity_line(&mut self) -> Result<DocEntry, ParseError> {
        self.skip_ws();
        let id = self.name("an entity id")?;
        self.skip_ws();
        if !self.eat(':') {
            return Err(self.error("expected ':' after entity id"));
        }
        let mut literals = Vec::new();
        self.skip_ws();
        if self.peek().is_some() {
            literals.push(self.literal()?);
            self.skip_ws();
            while self.eat(',') {
                self.skip_ws();
                literals.push(self.literal()?);
                self.skip_ws();
            }
        }
        self.expect_end()?;
        Ok(DocEntry {
            line: self.line,
            id: EntityId::new(id),
            literals,
        })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.skip_ws();
        let polarity = if self.eat('!') || self.eat('¬') {
            Polarity::Negative
        } else {
            Polarity::Positive
        };
        self.skip_ws();
        let name_col = self.column();
        let name = self.name("an atom name")?;
        let mut args: Vec<String> = Vec::new();
        if self.eat('(') {
            self.skip_ws();
            if self.peek() != Some(')') {
                args.push(self.name("an argument")?);
                self.skip_ws();
                while self.eat(',') {
                    self.skip_ws();
                    args.push(self.name("an argument")?);
                    self.skip_ws();
                }
            }
            if !self.eat(')') {
                return Err(self.error("expected ')' to close the argument list"));
            }
        }
        let atom = Atom::new(name, args)
            .map_err(|e| syntax(self.line, name_col, e.to_string()))?;
        Ok(Literal::new(atom, polarity))
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }
}
