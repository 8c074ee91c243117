//! ASP-Core concrete syntax: lexing, parsing, safety, printing, scrambling.
//!
//! Grammar (whitespace-insensitive, `%` comments to end of line):
//!
//! ```text
//! program   ::= rule*
//! rule      ::= head? (":-" body)? "."          -- head or body nonempty
//! head      ::= literal ("|" literal)*
//! body      ::= naf_lit ("," naf_lit)*
//! naf_lit   ::= "not" literal | literal          -- `not` followed by whitespace
//! literal   ::= "-"? atom                        -- no space after `-`
//! atom      ::= pred ("(" (term ("," term)*)? ")")?
//! term      ::= const | "-"? integer | string | Var | "_"
//! query     ::= naf_lit "?"
//! ```

mod lexer;
mod scramble;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{Atom, ClassicalLiteral, NafLiteral, Program, Query, Rule, Term};

use lexer::{Tok, Token};

pub use scramble::{scramble, ScrambleMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    SyntaxError,
    ArityConflict,
    UnsafeRule,
    IntegerOverflow,
    NonGroundQuery,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::SyntaxError => "syntax-error",
            DiagnosticKind::ArityConflict => "arity-conflict",
            DiagnosticKind::UnsafeRule => "unsafe-rule",
            DiagnosticKind::IntegerOverflow => "integer-overflow",
            DiagnosticKind::NonGroundQuery => "non-ground-query",
        })
    }
}

/// A positioned parse problem. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error, serde::Serialize, serde::Deserialize)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseDiagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub offending_variables: Option<Vec<String>>,
}

impl ParseDiagnostic {
    pub(crate) fn new(kind: DiagnosticKind, line: usize, column: usize, message: String) -> Self {
        ParseDiagnostic {
            kind,
            line,
            column,
            message,
            offending_variables: None,
        }
    }
}

/// Joins several diagnostics for display.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Diagnostics(pub Vec<ParseDiagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Safety {
    Safe,
    Unsafe(Vec<String>),
}

/// Reports the variables of `rule` that have no positive-naf body occurrence.
pub fn check_safety(rule: &Rule) -> Safety {
    let vars = rule.unsafe_variables();
    if vars.is_empty() {
        Safety::Safe
    } else {
        Safety::Unsafe(vars)
    }
}

/// Canonical concrete syntax, one rule per line.
pub fn print_program(program: &Program) -> String {
    program.to_string()
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    eof: (usize, usize),
}

type PResult<T> = Result<T, ParseDiagnostic>;

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], src: &str) -> Self {
        let line = src.lines().count().max(1);
        let column = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
        Parser {
            tokens,
            pos: 0,
            eof: (line, column),
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn position(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or(self.eof, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> ParseDiagnostic {
        let (line, column) = self.position();
        ParseDiagnostic::new(DiagnosticKind::SyntaxError, line, column, message.into())
    }

    fn unexpected(&self, wanted: &str) -> ParseDiagnostic {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, wanted: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn skip_past_dot(&mut self) {
        while let Some(t) = self.peek() {
            self.pos += 1;
            if *t == Tok::Dot {
                break;
            }
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let term = match self.peek() {
            Some(Tok::Lower(s)) => Term::Symbol(s.clone()),
            Some(Tok::Upper(s)) => Term::Var(s.clone()),
            Some(Tok::Underscore) => Term::Anonymous,
            Some(Tok::Str(s)) => Term::Str(s.clone()),
            Some(Tok::Int(v)) => Term::Int(self.int_value(*v, false)?),
            Some(Tok::Minus) => {
                let minus_end = self.tokens[self.pos].end;
                match self.tokens.get(self.pos + 1) {
                    Some(Token {
                        tok: Tok::Int(v),
                        start,
                        ..
                    }) if *start == minus_end => {
                        self.pos += 1;
                        Term::Int(self.int_value(*v, true)?)
                    }
                    _ => return Err(self.error("expected integer after `-` in term")),
                }
            }
            _ => return Err(self.unexpected("a term")),
        };
        self.pos += 1;
        Ok(term)
    }

    fn int_value(&self, magnitude: u64, negative: bool) -> PResult<i64> {
        let value = if negative {
            0i64.checked_sub_unsigned(magnitude)
        } else {
            i64::try_from(magnitude).ok()
        };
        value.ok_or_else(|| {
            let (line, column) = self.position();
            ParseDiagnostic::new(
                DiagnosticKind::IntegerOverflow,
                line,
                column,
                format!(
                    "integer `{}{magnitude}` does not fit in a signed 64-bit integer",
                    if negative { "-" } else { "" }
                ),
            )
        })
    }

    fn atom(&mut self) -> PResult<Atom> {
        let predicate = match self.peek() {
            Some(Tok::Lower(s)) => s.clone(),
            _ => return Err(self.unexpected("a predicate name")),
        };
        self.pos += 1;
        let mut terms = Vec::new();
        if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
            loop {
                terms.push(self.term()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(&Tok::Comma, "`,` or `)`")?;
            }
        }
        Ok(Atom { predicate, terms })
    }

    fn literal(&mut self) -> PResult<ClassicalLiteral> {
        if self.peek() == Some(&Tok::Minus) {
            let minus_end = self.tokens[self.pos].end;
            let adjacent = self
                .tokens
                .get(self.pos + 1)
                .is_some_and(|t| t.start == minus_end);
            if !adjacent {
                return Err(self.error("strong negation `-` must be directly followed by an atom"));
            }
            self.pos += 1;
            Ok(ClassicalLiteral::negative(self.atom()?))
        } else {
            Ok(ClassicalLiteral::positive(self.atom()?))
        }
    }

    fn naf_literal(&mut self) -> PResult<NafLiteral> {
        if self.eat(&Tok::Not) {
            Ok(NafLiteral::not(self.literal()?))
        } else {
            Ok(NafLiteral::pos(self.literal()?))
        }
    }

    fn rule(&mut self) -> PResult<Rule> {
        let mut head = Vec::new();
        if !matches!(self.peek(), Some(Tok::If)) {
            head.push(self.literal()?);
            while self.eat(&Tok::Bar) {
                head.push(self.literal()?);
            }
        }
        let mut body = Vec::new();
        if self.eat(&Tok::If) {
            body.push(self.naf_literal()?);
            while self.eat(&Tok::Comma) {
                body.push(self.naf_literal()?);
            }
        }
        self.expect(&Tok::Dot, "`.`")?;
        Ok(Rule { head, body })
    }
}

fn rewrite_anonymous(rule: &mut Rule) {
    let used: BTreeSet<String> = rule.variables().into_iter().collect();
    let mut next = 0usize;
    let mut fresh = || loop {
        let name = format!("_ANON{next}");
        next += 1;
        if !used.contains(&name) {
            return name;
        }
    };
    let terms = rule
        .head
        .iter_mut()
        .map(|l| &mut l.atom)
        .chain(rule.body.iter_mut().map(|l| &mut l.literal.atom))
        .flat_map(|a| a.terms.iter_mut());
    for t in terms {
        if *t == Term::Anonymous {
            *t = Term::Var(fresh());
        }
    }
}

/// Parses a program, collecting every diagnostic found.
///
/// `_` becomes a fresh `_ANONk` variable per occurrence. Arity conflicts
/// and unsafe rules are errors.
pub fn parse_program(source: &str) -> Result<Program, Diagnostics> {
    let tokens = lexer::tokenize(source).map_err(|d| Diagnostics(vec![d]))?;
    let mut parser = Parser::new(&tokens, source);
    let mut diagnostics = Vec::new();
    let mut rules = Vec::new();
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();

    while !parser.at_end() {
        let start = parser.position();
        match parser.rule() {
            Ok(mut rule) => {
                if rule.head.is_empty() && rule.body.is_empty() {
                    diagnostics.push(ParseDiagnostic::new(
                        DiagnosticKind::SyntaxError,
                        start.0,
                        start.1,
                        "empty rule".into(),
                    ));
                    continue;
                }
                rewrite_anonymous(&mut rule);
                for atom in rule.atoms() {
                    let arity = *arities
                        .entry(atom.predicate.clone())
                        .or_insert(atom.arity());
                    if arity != atom.arity() {
                        diagnostics.push(ParseDiagnostic::new(
                            DiagnosticKind::ArityConflict,
                            start.0,
                            start.1,
                            format!(
                                "predicate `{}` used with arity {} but previously with arity {arity}",
                                atom.predicate,
                                atom.arity()
                            ),
                        ));
                    }
                }
                if let Safety::Unsafe(vars) = check_safety(&rule) {
                    let mut d = ParseDiagnostic::new(
                        DiagnosticKind::UnsafeRule,
                        start.0,
                        start.1,
                        format!(
                            "variables {} do not occur in any positive body literal",
                            vars.join(", ")
                        ),
                    );
                    d.offending_variables = Some(vars);
                    diagnostics.push(d);
                }
                rules.push(rule);
            }
            Err(d) => {
                let fatal = d.kind == DiagnosticKind::IntegerOverflow;
                diagnostics.push(d);
                if fatal {
                    break;
                }
                parser.skip_past_dot();
            }
        }
    }

    if !diagnostics.is_empty() {
        return Err(Diagnostics(diagnostics));
    }
    Program::new(rules).map_err(|e| {
        Diagnostics(vec![ParseDiagnostic::new(
            DiagnosticKind::SyntaxError,
            1,
            1,
            e.to_string(),
        )])
    })
}

/// Parses `q?` where `q` is a ground naf-literal.
pub fn parse_query(source: &str) -> Result<Query, ParseDiagnostic> {
    let tokens = lexer::tokenize(source)?;
    let mut parser = Parser::new(&tokens, source);
    let start = parser.position();
    let literal = parser.naf_literal()?;
    parser.expect(&Tok::Question, "`?`")?;
    if !parser.at_end() {
        return Err(parser.error("unexpected input after `?`"));
    }
    let vars: Vec<String> = literal
        .literal
        .atom
        .terms
        .iter()
        .filter_map(|t| match t {
            Term::Var(v) => Some(v.clone()),
            Term::Anonymous => Some("_".into()),
            _ => None,
        })
        .collect();
    if !vars.is_empty() {
        let mut d = ParseDiagnostic::new(
            DiagnosticKind::NonGroundQuery,
            start.0,
            start.1,
            format!("query `{literal}?` contains variables"),
        );
        d.offending_variables = Some(vars);
        return Err(d);
    }
    Query::new(literal).map_err(|e| parser.error(e.to_string()))
}

/// Parses a single classical literal such as `-p(1,"x")`.
pub fn parse_literal(source: &str) -> Result<ClassicalLiteral, ParseDiagnostic> {
    let tokens = lexer::tokenize(source)?;
    let mut parser = Parser::new(&tokens, source);
    let lit = parser.literal()?;
    if !parser.at_end() {
        return Err(parser.error("unexpected input after literal"));
    }
    Ok(lit)
}

/// Parses a whitespace-separated list of ground classical literals (a
/// witness line).
pub fn parse_ground_literals(source: &str) -> Result<Vec<ClassicalLiteral>, ParseDiagnostic> {
    let tokens = lexer::tokenize(source)?;
    let mut parser = Parser::new(&tokens, source);
    let mut out = Vec::new();
    while !parser.at_end() {
        let lit = parser.literal()?;
        if !lit.is_ground() {
            return Err(parser.error(format!("witness literal `{lit}` is not ground")));
        }
        out.push(lit);
    }
    Ok(out)
}
