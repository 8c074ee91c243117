//! Random small safe programs, for testing the engine against the oracle and
//! for benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grounder::{GroundProgram, Grounder};
use crate::model::{Atom, ClassicalLiteral, NafLiteral, Program, Rule, Term};

#[derive(Debug, Clone, Copy)]
pub struct RandomConfig {
    pub max_predicates: usize,
    pub max_arity: usize,
    pub max_constants: usize,
    pub max_rules: usize,
    pub max_head: usize,
    pub max_body: usize,
    /// Probability that a literal is strongly negated.
    pub strong_negation: f64,
    /// Probability that a body literal is under `not`.
    pub naf: f64,
    /// Probability that a rule is a constraint.
    pub constraint: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_predicates: 3,
            max_arity: 2,
            max_constants: 3,
            max_rules: 6,
            max_head: 2,
            max_body: 3,
            strong_negation: 0.2,
            naf: 0.35,
            constraint: 0.15,
        }
    }
}

const PREDICATES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
const CONSTANTS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
const VARIABLES: [&str; 2] = ["X", "Y"];

struct Gen<'a, R> {
    rng: &'a mut R,
    cfg: &'a RandomConfig,
    preds: Vec<(&'static str, usize)>,
    consts: Vec<Term>,
}

impl<R: Rng> Gen<'_, R> {
    fn term(&mut self, vars: &[&str]) -> Term {
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            Term::var(*vars.choose(self.rng).unwrap())
        } else {
            self.consts.choose(self.rng).unwrap().clone()
        }
    }

    fn literal(&mut self, vars: &[&str]) -> ClassicalLiteral {
        let (name, arity) = *self.preds.choose(self.rng).unwrap();
        let terms = (0..arity).map(|_| self.term(vars)).collect();
        let atom = Atom::new(name, terms);
        if self.rng.gen_bool(self.cfg.strong_negation) {
            ClassicalLiteral::negative(atom)
        } else {
            ClassicalLiteral::positive(atom)
        }
    }

    fn rule(&mut self) -> Rule {
        let constraint = self.rng.gen_bool(self.cfg.constraint);
        let body_len = self
            .rng
            .gen_range(usize::from(constraint)..=self.cfg.max_body.max(1));
        let naf: Vec<bool> = (0..body_len)
            .map(|_| self.rng.gen_bool(self.cfg.naf))
            .collect();
        // positive literals may introduce variables; the rest may only reuse them
        let mut body = Vec::new();
        let mut bound: Vec<&str> = Vec::new();
        for _ in naf.iter().filter(|n| !**n) {
            let lit = self.literal(&VARIABLES);
            for v in lit.atom.variables() {
                if let Some(v) = VARIABLES.iter().find(|x| **x == v) {
                    if !bound.contains(v) {
                        bound.push(v);
                    }
                }
            }
            body.push(NafLiteral::pos(lit));
        }
        for _ in naf.iter().filter(|n| **n) {
            let lit = self.literal(&bound);
            body.push(NafLiteral::not(lit));
        }
        body.shuffle(self.rng);
        let head_len = if constraint {
            0
        } else {
            self.rng.gen_range(1..=self.cfg.max_head.max(1))
        };
        let head = (0..head_len).map(|_| self.literal(&bound)).collect();
        Rule::new(head, body)
    }
}

/// A safe program within the bounds of `cfg`.
pub fn random_program<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Program {
    let n_preds = rng.gen_range(1..=cfg.max_predicates.clamp(1, PREDICATES.len()));
    let preds = PREDICATES[..n_preds]
        .iter()
        .map(|&p| (p, rng.gen_range(0..=cfg.max_arity)))
        .collect();
    let n_consts = rng.gen_range(1..=cfg.max_constants.clamp(1, CONSTANTS.len()));
    let consts = CONSTANTS[..n_consts]
        .iter()
        .map(|&c| Term::symbol(c))
        .collect();
    let mut g = Gen {
        rng,
        cfg,
        preds,
        consts,
    };
    let n_rules = g.rng.gen_range(1..=cfg.max_rules.max(1));
    let rules = (0..n_rules).map(|_| g.rule()).collect();
    Program::new(rules).expect("generated rules are safe with consistent arities")
}

/// Draws programs until one grounds to at most `max_base` literals.
pub fn random_program_within<R: Rng>(
    rng: &mut R,
    cfg: &RandomConfig,
    max_base: usize,
) -> (Program, GroundProgram) {
    loop {
        let p = random_program(rng, cfg);
        if let Ok(g) = Grounder::default().ground(&p) {
            if g.base.len() <= max_base {
                return (p, g);
            }
        }
    }
}
