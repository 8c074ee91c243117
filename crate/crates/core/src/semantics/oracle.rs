//! Exhaustive answer-set oracle.
//!
//! Walks every consistent subset of the Herbrand base and keeps those that
//! are minimal models of their own reduct, with minimality decided by trying
//! every strict subset. Shares no code with the search engine; it exists to
//! cross-check it.

use std::collections::BTreeMap;

use super::SemanticsError;
use crate::grounder::GroundProgram;
use crate::model::{sort_canonically, Atom, ClassicalLiteral, Interpretation};

pub const DEFAULT_ORACLE_CAP: usize = 20;

struct MaskRule {
    head: u64,
    pos: u64,
    neg: u64,
    /// a positive body literal outside the base can never hold
    dead: bool,
}

fn satisfied_by(rules: &[MaskRule], candidate: u64, n: u64) -> bool {
    rules
        .iter()
        .all(|r| r.dead || (r.neg & candidate) != 0 || (r.pos & !n) != 0 || (r.head & n) != 0)
}

/// Every answer set of `g`, by exhaustive enumeration over `g.base`.
pub fn brute_force_answer_sets(g: &GroundProgram) -> Result<Vec<Interpretation>, SemanticsError> {
    brute_force_answer_sets_capped(g, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_answer_sets_capped(
    g: &GroundProgram,
    cap: usize,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let cap = cap.min(63);
    if g.base.len() > cap {
        return Err(SemanticsError::OracleCapExceeded {
            base: g.base.len(),
            cap,
        });
    }
    let lits: Vec<&ClassicalLiteral> = g.base.iter().collect();
    let bit = |l: &ClassicalLiteral| lits.iter().position(|x| *x == l).map(|i| 1u64 << i);

    let rules: Vec<MaskRule> = g
        .rules
        .iter()
        .map(|r| {
            let mut m = MaskRule {
                head: 0,
                pos: 0,
                neg: 0,
                dead: false,
            };
            for h in &r.head {
                m.head |= bit(h).unwrap_or(0);
            }
            for b in &r.body {
                match (b.naf_negated, bit(&b.literal)) {
                    (false, Some(x)) => m.pos |= x,
                    (false, None) => m.dead = true,
                    (true, Some(x)) => m.neg |= x,
                    (true, None) => {}
                }
            }
            m
        })
        .collect();

    // choices per atom: absent, positive, negative (where present in base)
    let mut by_atom: BTreeMap<&Atom, Vec<u64>> = BTreeMap::new();
    for (i, l) in lits.iter().enumerate() {
        by_atom.entry(&l.atom).or_default().push(1u64 << i);
    }
    let choices: Vec<Vec<u64>> = by_atom
        .into_values()
        .map(|bits| std::iter::once(0).chain(bits).collect())
        .collect();

    let mut found = Vec::new();
    let mut digits = vec![0usize; choices.len()];
    loop {
        let candidate: u64 = digits
            .iter()
            .zip(&choices)
            .fold(0, |acc, (&d, c)| acc | c[d]);

        // model of the reduct, and no strict subset is
        if satisfied_by(&rules, candidate, candidate) {
            let mut minimal = true;
            let mut sub = candidate;
            while sub != 0 {
                sub = (sub - 1) & candidate;
                if satisfied_by(&rules, candidate, sub) {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                let set = (0..lits.len())
                    .filter(|i| candidate & (1u64 << i) != 0)
                    .map(|i| lits[i].clone());
                found.push(Interpretation::new(set).expect("one polarity per atom"));
            }
        }

        let mut pos = 0;
        loop {
            if pos == digits.len() {
                sort_canonically(&mut found);
                return Ok(found);
            }
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
