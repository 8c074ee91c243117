//! Naive Herbrand instantiation.
//!
//! Every rule is instantiated with every total substitution of its variables
//! by constants of the Herbrand universe. No simplification is done here;
//! the solver prunes on its own.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{Atom, ClassicalLiteral, Program, Rule, Term};

pub const DEFAULT_RULE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("grounding needs {required} {what}, over the cap of {cap}")]
    LimitExceeded {
        what: &'static str,
        required: u128,
        cap: usize,
    },
}

/// The constants occurring in a program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HerbrandUniverse {
    pub constants: BTreeSet<Term>,
}

impl HerbrandUniverse {
    pub fn new(constants: impl IntoIterator<Item = Term>) -> Self {
        let constants = constants.into_iter().filter(Term::is_ground).collect();
        HerbrandUniverse { constants }
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }
}

/// `grnd(P)` together with the Herbrand base it ranges over.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<Rule>,
    pub base: BTreeSet<ClassicalLiteral>,
}

impl GroundProgram {
    /// Builds a ground program whose base is the two polarities of every
    /// atom mentioned in `rules`. Panics on non-ground rules.
    pub fn from_rules(rules: Vec<Rule>) -> Self {
        assert!(rules.iter().all(Rule::is_ground), "rules must be ground");
        let mut base = BTreeSet::new();
        for atom in rules.iter().flat_map(Rule::atoms) {
            base.insert(ClassicalLiteral::positive(atom.clone()));
            base.insert(ClassicalLiteral::negative(atom.clone()));
        }
        GroundProgram { rules, base }
    }
}

pub fn herbrand_universe(program: &Program) -> HerbrandUniverse {
    HerbrandUniverse::new(
        program
            .rules()
            .iter()
            .flat_map(Rule::atoms)
            .flat_map(|a| a.terms.iter().cloned()),
    )
}

fn checked_count(universe: usize, exponent: usize) -> u128 {
    (universe as u128)
        .checked_pow(exponent as u32)
        .unwrap_or(u128::MAX)
}

/// Both polarities of every atom buildable from the signature over `U_P`.
pub fn herbrand_base(program: &Program) -> BTreeSet<ClassicalLiteral> {
    herbrand_base_capped(program, usize::MAX).expect("uncapped")
}

fn herbrand_base_capped(
    program: &Program,
    cap: usize,
) -> Result<BTreeSet<ClassicalLiteral>, GroundError> {
    let universe: Vec<Term> = herbrand_universe(program).constants.into_iter().collect();
    let required: u128 = program
        .signature()
        .values()
        .map(|&arity| checked_count(universe.len(), arity).saturating_mul(2))
        .fold(0u128, u128::saturating_add);
    if required > cap as u128 {
        return Err(GroundError::LimitExceeded {
            what: "base literals",
            required,
            cap,
        });
    }
    let mut base = BTreeSet::new();
    for (predicate, &arity) in program.signature() {
        for_each_tuple(&universe, arity, |tuple| {
            let atom = Atom::new(predicate.clone(), tuple.to_vec());
            base.insert(ClassicalLiteral::negative(atom.clone()));
            base.insert(ClassicalLiteral::positive(atom));
        });
    }
    Ok(base)
}

/// Calls `f` on every tuple of length `arity` over `universe`, in
/// lexicographic order. Arity 0 yields the single empty tuple.
fn for_each_tuple(universe: &[Term], arity: usize, mut f: impl FnMut(&[Term])) {
    if arity > 0 && universe.is_empty() {
        return;
    }
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<Term> = idx.iter().map(|&i| universe[i].clone()).collect();
    loop {
        f(&tuple);
        // odometer increment
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < universe.len() {
                tuple[pos] = universe[idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            tuple[pos] = universe[0].clone();
        }
    }
}

fn substitute(rule: &Rule, vars: &[String], values: &[Term]) -> Rule {
    let subst = |t: &Term| match t {
        Term::Var(v) => {
            let i = vars
                .iter()
                .position(|x| x == v)
                .expect("variable collected");
            values[i].clone()
        }
        other => other.clone(),
    };
    let atom = |a: &Atom| Atom::new(a.predicate.clone(), a.terms.iter().map(subst).collect());
    let mut out = rule.clone();
    for h in &mut out.head {
        h.atom = atom(&h.atom);
    }
    for b in &mut out.body {
        b.literal.atom = atom(&b.literal.atom);
    }
    out
}

/// All ground instances of `rule` over `universe`, duplicates collapsed.
pub fn ground_rule(rule: &Rule, universe: &HerbrandUniverse) -> BTreeSet<Rule> {
    let vars = rule.variables();
    let constants: Vec<Term> = universe.constants.iter().cloned().collect();
    let mut out = BTreeSet::new();
    for_each_tuple(&constants, vars.len(), |values| {
        out.insert(substitute(rule, &vars, values));
    });
    out
}

/// Instantiates programs under a cap on the number of ground rules.
#[derive(Debug, Clone, Copy)]
pub struct Grounder {
    pub rule_cap: usize,
}

impl Default for Grounder {
    fn default() -> Self {
        Grounder {
            rule_cap: DEFAULT_RULE_CAP,
        }
    }
}

impl Grounder {
    pub fn with_rule_cap(rule_cap: usize) -> Self {
        Grounder { rule_cap }
    }

    pub fn ground(&self, program: &Program) -> Result<GroundProgram, GroundError> {
        let universe = herbrand_universe(program);
        let required = program
            .rules()
            .iter()
            .map(|r| checked_count(universe.len(), r.variables().len()))
            .fold(0u128, u128::saturating_add);
        if required > self.rule_cap as u128 {
            return Err(GroundError::LimitExceeded {
                what: "ground rules",
                required,
                cap: self.rule_cap,
            });
        }
        let mut rules = BTreeSet::new();
        for rule in program.rules() {
            rules.extend(ground_rule(rule, &universe));
        }
        let base = herbrand_base_capped(program, self.rule_cap.saturating_mul(2))?;
        Ok(GroundProgram {
            rules: rules.into_iter().collect(),
            base,
        })
    }
}

/// Grounds with the default cap.
pub fn ground_program(program: &Program) -> Result<GroundProgram, GroundError> {
    Grounder::default().ground(program)
}
