//! Abstract syntax and ground structures for ASP-Core programs.
//!
//! Every other module works on these types. They are plain owned values,
//! immutable once built, and `Send + Sync`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A term: a constant or a variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Lowercase-leading identifier, e.g. `a`, `node1`.
    Symbol(String),
    /// Double-quoted string constant (stored unescaped).
    Str(String),
    Int(i64),
    /// Uppercase-leading identifier (or a rewritten `_ANONk`).
    Var(String),
    /// `_`; the parser rewrites it to a fresh [`Term::Var`].
    Anonymous,
}

impl Term {
    pub fn symbol(name: impl Into<String>) -> Self {
        Term::Symbol(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Anonymous)
    }

    pub fn is_ground(&self) -> bool {
        !self.is_variable()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symbol(s) | Term::Var(s) => f.write_str(s),
            Term::Int(v) => write!(f, "{v}"),
            Term::Anonymous => f.write_str("_"),
            Term::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// A predicate applied to terms. Arity is the length of `terms`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, terms: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            terms,
        }
    }

    /// Arity-0 atom.
    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.terms.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `a` or `-a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassicalLiteral {
    pub atom: Atom,
    pub strongly_negated: bool,
}

impl ClassicalLiteral {
    pub fn positive(atom: Atom) -> Self {
        ClassicalLiteral {
            atom,
            strongly_negated: false,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        ClassicalLiteral {
            atom,
            strongly_negated: true,
        }
    }

    /// Flips strong negation: `p(1)` becomes `-p(1)` and back.
    pub fn complement(&self) -> Self {
        ClassicalLiteral {
            atom: self.atom.clone(),
            strongly_negated: !self.strongly_negated,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }
}

impl fmt::Display for ClassicalLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strongly_negated {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// `l` or `not l` for a classical literal `l`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NafLiteral {
    pub literal: ClassicalLiteral,
    pub naf_negated: bool,
}

impl NafLiteral {
    pub fn pos(literal: ClassicalLiteral) -> Self {
        NafLiteral {
            literal,
            naf_negated: false,
        }
    }

    pub fn not(literal: ClassicalLiteral) -> Self {
        NafLiteral {
            literal,
            naf_negated: true,
        }
    }
}

impl fmt::Display for NafLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naf_negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.literal)
    }
}

/// `h1 | ... | hn :- b1, ..., bm.` Head and body keep source order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Vec<ClassicalLiteral>,
    pub body: Vec<NafLiteral>,
}

impl Rule {
    pub fn new(head: Vec<ClassicalLiteral>, body: Vec<NafLiteral>) -> Self {
        Rule { head, body }
    }

    pub fn fact(literal: ClassicalLiteral) -> Self {
        Rule::new(vec![literal], Vec::new())
    }

    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.head.iter().all(ClassicalLiteral::is_ground)
            && self.body.iter().all(|l| l.literal.is_ground())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head
            .iter()
            .map(|l| &l.atom)
            .chain(self.body.iter().map(|l| &l.literal.atom))
    }

    /// Distinct variables in order of first occurrence (head first, then body).
    pub fn variables(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.atoms().flat_map(Atom::variables) {
            if seen.insert(v) {
                out.push(v.to_string());
            }
        }
        out
    }

    /// Variables with no occurrence in a positive body literal, in order of
    /// first occurrence.
    pub fn unsafe_variables(&self) -> Vec<String> {
        let bound: BTreeSet<&str> = self
            .body
            .iter()
            .filter(|l| !l.naf_negated)
            .flat_map(|l| l.literal.atom.variables())
            .collect();
        self.variables()
            .into_iter()
            .filter(|v| !bound.contains(v.as_str()))
            .collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("predicate {predicate} used with arities {first} and {second}")]
    ArityConflict {
        predicate: String,
        first: usize,
        second: usize,
    },
    #[error("rule `{rule}` is unsafe: variables {variables:?} occur in no positive body literal")]
    UnsafeRule {
        rule: String,
        variables: Vec<String>,
    },
    #[error("rule `{0}` has neither head nor body")]
    EmptyRule(String),
    #[error("literal `{0}` is not ground")]
    NonGround(String),
    #[error("interpretation contains both {0} and its complement")]
    Inconsistent(String),
}

/// Predicate name to arity.
pub type Signature = BTreeMap<String, usize>;

/// A finite set of safe rules with a consistent predicate signature.
///
/// Equality ignores rule order; rules are compared as a multiset.
#[derive(Clone, Debug, Default)]
pub struct Program {
    rules: Vec<Rule>,
    signature: Signature,
}

impl Program {
    /// Validates signature consistency and safety.
    pub fn new(rules: Vec<Rule>) -> Result<Self, ModelError> {
        let mut signature = Signature::new();
        for rule in &rules {
            if rule.head.is_empty() && rule.body.is_empty() {
                return Err(ModelError::EmptyRule(rule.to_string()));
            }
            for atom in rule.atoms() {
                record_arity(&mut signature, atom)?;
            }
            let unsafe_vars = rule.unsafe_variables();
            if !unsafe_vars.is_empty() {
                return Err(ModelError::UnsafeRule {
                    rule: rule.to_string(),
                    variables: unsafe_vars,
                });
            }
        }
        Ok(Program { rules, signature })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn into_rules(self) -> Vec<Rule> {
        self.rules
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    /// Concatenates programs (encoding plus instance), re-validating the
    /// combined signature.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a Program>) -> Result<Program, ModelError> {
        let rules = parts
            .into_iter()
            .flat_map(|p| p.rules.iter().cloned())
            .collect();
        Program::new(rules)
    }
}

fn record_arity(signature: &mut Signature, atom: &Atom) -> Result<(), ModelError> {
    match signature.get(&atom.predicate) {
        Some(&arity) if arity != atom.arity() => Err(ModelError::ArityConflict {
            predicate: atom.predicate.clone(),
            first: arity,
            second: atom.arity(),
        }),
        Some(_) => Ok(()),
        None => {
            signature.insert(atom.predicate.clone(), atom.arity());
            Ok(())
        }
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        if self.signature != other.signature || self.rules.len() != other.rules.len() {
            return false;
        }
        let mut a: Vec<&Rule> = self.rules.iter().collect();
        let mut b: Vec<&Rule> = other.rules.iter().collect();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for Program {}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// A ground query `q?` where `q` is a naf-literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    literal: NafLiteral,
}

impl Query {
    pub fn new(literal: NafLiteral) -> Result<Self, ModelError> {
        if !literal.literal.is_ground() {
            return Err(ModelError::NonGround(literal.to_string()));
        }
        Ok(Query { literal })
    }

    pub fn literal(&self) -> &NafLiteral {
        &self.literal
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}?", self.literal)
    }
}

/// A consistent set of ground classical literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    literals: BTreeSet<ClassicalLiteral>,
}

impl Interpretation {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Rejects non-ground literals and sets containing both `a` and `-a`.
    pub fn new(literals: impl IntoIterator<Item = ClassicalLiteral>) -> Result<Self, ModelError> {
        let literals: BTreeSet<ClassicalLiteral> = literals.into_iter().collect();
        for l in &literals {
            if !l.is_ground() {
                return Err(ModelError::NonGround(l.to_string()));
            }
            if !l.strongly_negated && literals.contains(&l.complement()) {
                return Err(ModelError::Inconsistent(l.to_string()));
            }
        }
        Ok(Interpretation { literals })
    }

    /// True iff no atom occurs with both polarities.
    pub fn is_consistent_set<'a>(literals: impl IntoIterator<Item = &'a ClassicalLiteral>) -> bool {
        let set: BTreeSet<&ClassicalLiteral> = literals.into_iter().collect();
        set.iter()
            .all(|l| l.strongly_negated || !set.contains(&l.complement()))
    }

    pub fn contains(&self, literal: &ClassicalLiteral) -> bool {
        self.literals.contains(literal)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassicalLiteral> {
        self.literals.iter()
    }

    pub fn literals(&self) -> &BTreeSet<ClassicalLiteral> {
        &self.literals
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.literals.is_subset(&other.literals)
    }

    /// Literals in canonical text form, sorted as strings.
    pub fn canonical_strings(&self) -> Vec<String> {
        let mut out: Vec<String> = self.literals.iter().map(ToString::to_string).collect();
        out.sort();
        out
    }
}

/// Space-separated canonical literals, sorted as strings; the witness line
/// of the solver output format.
impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_strings().join(" "))
    }
}

/// Sorts answer sets by their canonical literal strings.
pub fn sort_canonically(sets: &mut [Interpretation]) {
    sets.sort_by_cached_key(Interpretation::canonical_strings);
}
