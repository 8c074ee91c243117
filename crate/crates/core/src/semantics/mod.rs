//! Satisfaction, reduct, answer sets, and cautious queries.
//!
//! Two independent routes compute answer sets: [`enumerate_answer_sets`]
//! (propagating search) and [`brute_force_answer_sets`] (exhaustive subset
//! scan). Tests hold them against each other.
//!
//! A cautious query over a program with no answer sets is *true*: the
//! universal quantification over `AS(P)` is vacuous.

mod indexed;
mod minimal;
mod oracle;
mod solver;

use thiserror::Error;

use crate::grounder::{GroundError, GroundProgram, Grounder};
use crate::model::{sort_canonically, Interpretation, NafLiteral, Program, Query, Rule};

use indexed::Indexed;
use minimal::{has_smaller_model, NafReading};

pub use oracle::{brute_force_answer_sets, brute_force_answer_sets_capped, DEFAULT_ORACLE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("oracle refuses a base of {base} literals (cap {cap})")]
    OracleCapExceeded { base: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// At least one answer set exists.
    Consistent,
    Inconsistent,
}

/// `AS(P)`, possibly truncated, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSetResult {
    pub status: Status,
    pub answer_sets: Vec<Interpretation>,
}

pub fn naf_literal_true(literal: &NafLiteral, i: &Interpretation) -> bool {
    i.contains(&literal.literal) != literal.naf_negated
}

/// Some head literal true or some body literal false.
pub fn rule_satisfied(rule: &Rule, i: &Interpretation) -> bool {
    rule.head.iter().any(|h| i.contains(h)) || rule.body.iter().any(|b| !naf_literal_true(b, i))
}

pub fn is_model(g: &GroundProgram, i: &Interpretation) -> bool {
    g.rules.iter().all(|r| rule_satisfied(r, i))
}

/// True iff no strict subset of `i` is a model of `g` (NAF read against the
/// subset). Assumes `i` is itself a model.
pub fn is_minimal_model(g: &GroundProgram, i: &Interpretation) -> bool {
    let idx = Indexed::from_ground(g);
    let member = idx.membership(i);
    minimal_against(&idx, i, &member, NafReading::Candidate)
}

fn minimal_against(idx: &Indexed, i: &Interpretation, member: &[bool], naf: NafReading) -> bool {
    // Literals of `i` the program never mentions can be dropped from any
    // model, so such an `i` is never minimal.
    let known = member.iter().filter(|&&m| m).count();
    if known < i.len() {
        return false;
    }
    !has_smaller_model(&idx.rules, member, naf)
}

/// Gelfond-Lifschitz reduct: delete rules with a false negative naf-literal,
/// then strip negative naf-literals from the rest.
pub fn reduct(g: &GroundProgram, i: &Interpretation) -> GroundProgram {
    let rules = g
        .rules
        .iter()
        .filter(|r| {
            r.body
                .iter()
                .all(|b| !b.naf_negated || naf_literal_true(b, i))
        })
        .map(|r| Rule {
            head: r.head.clone(),
            body: r.body.iter().filter(|b| !b.naf_negated).cloned().collect(),
        })
        .collect();
    GroundProgram {
        rules,
        base: g.base.clone(),
    }
}

/// `i` is an answer set of the ground program `g`.
pub fn is_answer_set_ground(g: &GroundProgram, i: &Interpretation) -> bool {
    if !i.iter().all(|l| g.base.contains(l)) {
        return false;
    }
    let r = reduct(g, i);
    if !is_model(&r, i) {
        return false;
    }
    let idx = Indexed::from_ground(&r);
    let member = idx.membership(i);
    minimal_against(&idx, i, &member, NafReading::Reduct)
}

/// Grounds `p`, then checks `i` against its reduct.
pub fn is_answer_set(p: &Program, i: &Interpretation) -> Result<bool, SemanticsError> {
    let g = Grounder::default().ground(p)?;
    Ok(is_answer_set_ground(&g, i))
}

/// Answer sets of a ground program in canonical order, each re-verified.
pub fn answer_sets_ground(g: &GroundProgram) -> Vec<Interpretation> {
    let mut sets = solver::answer_sets(g);
    sort_canonically(&mut sets);
    sets.dedup();
    debug_assert!(sets.iter().all(|s| is_answer_set_ground(g, s)));
    sets
}

/// `AS(p)` truncated to the first `limit` sets in canonical order.
pub fn enumerate_answer_sets(
    p: &Program,
    limit: Option<usize>,
) -> Result<AnswerSetResult, SemanticsError> {
    enumerate_with(&Grounder::default(), p, limit)
}

pub fn enumerate_with(
    grounder: &Grounder,
    p: &Program,
    limit: Option<usize>,
) -> Result<AnswerSetResult, SemanticsError> {
    let g = grounder.ground(p)?;
    let mut answer_sets = answer_sets_ground(&g);
    let status = if answer_sets.is_empty() {
        Status::Inconsistent
    } else {
        Status::Consistent
    };
    if let Some(limit) = limit {
        answer_sets.truncate(limit);
    }
    Ok(AnswerSetResult {
        status,
        answer_sets,
    })
}

/// Whether `q` holds in every answer set of `answer_sets`.
pub fn cautious_over(answer_sets: &[Interpretation], q: &Query) -> bool {
    answer_sets.iter().all(|a| naf_literal_true(q.literal(), a))
}

/// `q?` is true iff it holds in every answer set; vacuously true when there
/// are none.
pub fn cautious_entails(p: &Program, q: &Query) -> Result<bool, SemanticsError> {
    let result = enumerate_answer_sets(p, None)?;
    Ok(cautious_over(&result.answer_sets, q))
}
