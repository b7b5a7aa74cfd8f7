//! Recursive-descent parser for terms and statements.
//!
//! ```text
//! stmt    := atom | atom ('&' atom)* '->' atom
//! goal    := stmt | atom ('|' atom)+
//! atom    := term ('=' | '!=' | '<') term
//! term    := factor | term BINOP factor      -- one operator per chain
//! factor  := primary | factor '\''
//! primary := IDENT | CONST | literal | '(' term ')'
//! literal := '{' tuple (',' tuple)* '}' | 'empty' '(' attrs ')' | 'full' '(' attrs ')'
//! ```

use crate::error::{Error, Result};
use crate::relation::{BinOp, ConstantKind};
use crate::term::ast::{Atom, Literal, Relationship, Statement, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Const(ConstantKind),
    Op(BinOp),
    Quote,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Ne,
    Lt,
    Amp,
    Arrow,
    Bar,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Const(k) => format!("`{k}`"),
            Tok::Op(op) => format!("`{}`", op.symbol()),
            Tok::Quote => "`'`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Bar => "`|`".into(),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax { position, message: message.into() }
}

/// Tokens paired with their 1-based column.
fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &input[start..i];
            let tok = if word == "v" {
                Tok::Op(BinOp::Join)
            } else if let Some(k) = ConstantKind::from_name(word) {
                Tok::Const(k)
            } else {
                Tok::Word(word.to_string())
            };
            out.push((tok, col));
            continue;
        }
        let (tok, len) = match c {
            b'^' => (Tok::Op(BinOp::Meet), 1),
            b'*' => (Tok::Op(BinOp::InnerJoin), 1),
            b'+' => (Tok::Op(BinOp::OuterUnion), 1),
            b'@' => (Tok::Op(BinOp::Cylindrify), 1),
            b'\'' => (Tok::Quote, 1),
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'{' => (Tok::LBrace, 1),
            b'}' => (Tok::RBrace, 1),
            b',' => (Tok::Comma, 1),
            b'=' => (Tok::Eq, 1),
            b'<' => (Tok::Lt, 1),
            b'&' => (Tok::Amp, 1),
            b'|' => (Tok::Bar, 1),
            b'!' if bytes.get(i + 1) == Some(&b'=') => (Tok::Ne, 2),
            b'-' if bytes.get(i + 1) == Some(&b'>') => (Tok::Arrow, 2),
            _ => {
                let ch = input[i..].chars().next().unwrap_or('?');
                return Err(syntax(col, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Self> {
        if input.trim().is_empty() {
            return Err(syntax(1, "empty input"));
        }
        let toks = lex(input)?;
        Ok(Parser { toks, pos: 0, end: input.len() + 1 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => syntax(self.column(), format!("expected {wanted}, found {}", t.describe())),
            None => syntax(self.column(), format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.factor()?;
        let mut chain: Option<BinOp> = None;
        while let Some(Tok::Op(op)) = self.peek() {
            let op = *op;
            if let Some(prev) = chain {
                if prev != op {
                    return Err(Error::MixedOperators {
                        position: self.column(),
                        first: prev.symbol(),
                        second: op.symbol(),
                    });
                }
            }
            chain = Some(op);
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Term::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term> {
        let mut t = self.primary()?;
        while self.peek() == Some(&Tok::Quote) {
            self.pos += 1;
            t = Term::complement(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term> {
        let col = self.column();
        match self.peek().cloned() {
            Some(Tok::Const(k)) => {
                self.pos += 1;
                Ok(Term::Const(k))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBrace) => self.tuples().map(Term::Literal),
            Some(Tok::Word(w)) if (w == "empty" || w == "full") && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::LParen) => {
                self.pos += 2;
                let attrs = self.attr_list()?;
                Ok(Term::Literal(if w == "empty" { Literal::Empty(attrs) } else { Literal::Full(attrs) }))
            }
            Some(Tok::Word(w)) => {
                let mut chars = w.chars();
                let first = chars.next().unwrap_or('_');
                if !first.is_ascii_lowercase() || !w.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
                    return Err(syntax(col, format!("`{w}` is not a variable (lowercase identifier) or constant")));
                }
                self.pos += 1;
                Ok(Term::Var(w))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// Attribute names up to and including the closing `)`.
    fn attr_list(&mut self) -> Result<Vec<String>> {
        let mut attrs = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(attrs);
        }
        loop {
            attrs.push(self.word("an attribute name")?);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => return Ok(attrs),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("`,` or `)`"));
                }
            }
        }
    }

    /// Any word usable as an attribute name or value. `v` lexes as the
    /// join operator and is accepted back here.
    fn word(&mut self, wanted: &str) -> Result<String> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(w)
            }
            Some(Tok::Op(BinOp::Join)) => {
                self.pos += 1;
                Ok("v".into())
            }
            Some(Tok::Const(k)) => {
                self.pos += 1;
                Ok(k.name().into())
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn tuples(&mut self) -> Result<Literal> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut tuples = Vec::new();
        loop {
            self.expect(Tok::LParen, "`(`")?;
            let mut pairs = Vec::new();
            if self.peek() == Some(&Tok::RParen) {
                self.pos += 1;
            } else {
                loop {
                    let attr = self.word("an attribute name")?;
                    self.expect(Tok::Eq, "`=`")?;
                    let value = self.word("a value")?;
                    pairs.push((attr, value));
                    match self.bump() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RParen) => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("`,` or `)`"));
                        }
                    }
                }
            }
            tuples.push(pairs);
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrace) => return Ok(Literal::Tuples(tuples)),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("`,` or `}`"));
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let lhs = self.term()?;
        let relationship = match self.peek() {
            Some(Tok::Eq) => Relationship::Equal,
            Some(Tok::Ne) => Relationship::NotEqual,
            Some(Tok::Lt) => Relationship::Below,
            _ => return Err(self.unexpected("`=`, `!=` or `<`")),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Atom { relationship, lhs, rhs })
    }

    fn statement(&mut self, allow_disjunction: bool) -> Result<Statement> {
        let first = self.atom()?;
        match self.peek() {
            None => Ok(Statement::Atom(first)),
            Some(Tok::Amp) | Some(Tok::Arrow) => {
                let mut premises = vec![first];
                while self.peek() == Some(&Tok::Amp) {
                    self.pos += 1;
                    premises.push(self.atom()?);
                }
                if self.peek() != Some(&Tok::Arrow) {
                    return Err(self.unexpected("`->` after implication premises"));
                }
                self.pos += 1;
                let conclusion = self.atom()?;
                if matches!(self.peek(), Some(Tok::Arrow) | Some(Tok::Amp)) {
                    return Err(syntax(self.column(), "implications must be Horn-shaped: premises -> one atom"));
                }
                Ok(Statement::Implication { premises, conclusion })
            }
            Some(Tok::Bar) if allow_disjunction => {
                let mut atoms = vec![first];
                while self.peek() == Some(&Tok::Bar) {
                    self.pos += 1;
                    atoms.push(self.atom()?);
                }
                Ok(Statement::Disjunction(atoms))
            }
            Some(Tok::Bar) => Err(syntax(self.column(), "disjunctions are only accepted as search goals")),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }
}

pub fn parse_term(input: &str) -> Result<Term> {
    let mut p = Parser::new(input)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_statement(input: &str) -> Result<Statement> {
    let mut p = Parser::new(input)?;
    let s = p.statement(false)?;
    p.finish()?;
    Ok(s)
}

/// Like [`parse_statement`], additionally admitting `atom | atom | ...`.
pub fn parse_goal(input: &str) -> Result<Statement> {
    let mut p = Parser::new(input)?;
    let s = p.statement(true)?;
    p.finish()?;
    Ok(s)
}

/// Parses a statement file: one statement per line, `#` starts a comment.
/// Returns each statement with its 1-based line number.
pub fn parse_statement_file(text: &str) -> Result<Vec<(usize, Statement)>> {
    parse_lines(text, parse_statement)
}

pub fn parse_goal_file(text: &str) -> Result<Vec<(usize, Statement)>> {
    parse_lines(text, parse_goal)
}

fn parse_lines(text: &str, parse: fn(&str) -> Result<Statement>) -> Result<Vec<(usize, Statement)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let s = parse(line).map_err(|e| match e {
            Error::Syntax { position, message } => Error::Syntax {
                position,
                message: format!("line {}: {message}", i + 1),
            },
            other => other,
        })?;
        out.push((i + 1, s));
    }
    Ok(out)
}
