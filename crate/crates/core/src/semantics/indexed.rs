use std::collections::HashMap;

use crate::grounder::GroundProgram;
use crate::model::{ClassicalLiteral, Interpretation, Rule};

/// A ground rule over interned literal ids. `neg` holds the literals under
/// `not`.
#[derive(Debug, Clone)]
pub(crate) struct IRule {
    pub head: Vec<usize>,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

/// Ground rules with every literal interned.
#[derive(Debug, Clone, Default)]
pub(crate) struct Indexed {
    pub lits: Vec<ClassicalLiteral>,
    pub ids: HashMap<ClassicalLiteral, usize>,
    pub rules: Vec<IRule>,
}

impl Indexed {
    pub fn intern(&mut self, lit: &ClassicalLiteral) -> usize {
        if let Some(&id) = self.ids.get(lit) {
            return id;
        }
        let id = self.lits.len();
        self.lits.push(lit.clone());
        self.ids.insert(lit.clone(), id);
        id
    }

    pub fn from_rules<'a>(rules: impl IntoIterator<Item = &'a Rule>) -> Self {
        let mut idx = Indexed::default();
        for rule in rules {
            let head = rule.head.iter().map(|l| idx.intern(l)).collect();
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for b in &rule.body {
                let id = idx.intern(&b.literal);
                if b.naf_negated {
                    neg.push(id);
                } else {
                    pos.push(id);
                }
            }
            idx.rules.push(IRule { head, pos, neg });
        }
        idx
    }

    pub fn from_ground(g: &GroundProgram) -> Self {
        Self::from_rules(&g.rules)
    }

    /// Membership vector for `i`; literals of `i` unknown to the program
    /// are ignored.
    pub fn membership(&self, i: &Interpretation) -> Vec<bool> {
        let mut m = vec![false; self.lits.len()];
        for l in i.iter() {
            if let Some(&id) = self.ids.get(l) {
                m[id] = true;
            }
        }
        m
    }

    pub fn complement_of(&self, id: usize) -> Option<usize> {
        self.ids.get(&self.lits[id].complement()).copied()
    }
}
