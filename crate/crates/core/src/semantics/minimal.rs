//! Exact "is there a strictly smaller model?" test, phrased as a small
//! satisfiability problem over the literals of the candidate.

use super::indexed::IRule;

/// How `not l` is read when checking a subset `N` of the candidate `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NafReading {
    /// Against `I`: this is the reduct `P^I`.
    Reduct,
    /// Against `N` itself: plain model minimality of a program with NAF.
    Candidate,
}

type Lit = (usize, bool);

/// True iff some `N ⊊ I` satisfies every rule. `member[id]` says whether
/// literal `id` is in `I`.
pub(crate) fn has_smaller_model(rules: &[IRule], member: &[bool], naf: NafReading) -> bool {
    let vars: Vec<usize> = (0..member.len()).filter(|&i| member[i]).collect();
    if vars.is_empty() {
        return false;
    }
    let mut var_of = vec![usize::MAX; member.len()];
    for (v, &id) in vars.iter().enumerate() {
        var_of[id] = v;
    }

    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    'rules: for rule in rules {
        let mut clause = Vec::new();
        for &b in &rule.pos {
            if !member[b] {
                continue 'rules;
            }
            clause.push((var_of[b], false));
        }
        for &n in &rule.neg {
            if member[n] {
                match naf {
                    NafReading::Reduct => continue 'rules,
                    NafReading::Candidate => clause.push((var_of[n], true)),
                }
            }
        }
        for &h in &rule.head {
            if member[h] {
                clause.push((var_of[h], true));
            }
        }
        clause.sort_unstable();
        clause.dedup();
        if clause.is_empty() {
            return false;
        }
        clauses.push(clause);
    }
    // strictness: at least one literal of I left out
    clauses.push((0..vars.len()).map(|v| (v, false)).collect());

    let mut assign = vec![None; vars.len()];
    dpll(&clauses, &mut assign)
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    let ok = propagate(clauses, assign, &mut trail);
    let result = ok
        && match assign.iter().position(Option::is_none) {
            None => true,
            Some(v) => [false, true].into_iter().any(|value| {
                assign[v] = Some(value);
                let r = dpll(clauses, assign);
                assign[v] = None;
                r
            }),
        };
    for v in trail {
        assign[v] = None;
    }
    result
}

fn propagate(clauses: &[Vec<Lit>], assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &(v, sign) in clause {
                match assign[v] {
                    Some(x) if x == sign => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some((v, sign));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => return false,
                (1, Some((v, sign))) => {
                    assign[v] = Some(sign);
                    trail.push(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}
