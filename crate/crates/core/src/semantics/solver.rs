//! Backtracking enumeration of answer sets.
//!
//! 1. Literals outside the positive over-approximation (heads reachable when
//!    NAF is ignored) are false in every answer set and are removed.
//! 2. The remaining literals are assigned by depth-first search with
//!    propagation: rule satisfaction forwards and backwards, support (a true
//!    literal needs a rule whose body may hold and whose other head literals
//!    are not true), and consistency (`a` true forces `-a` false).
//! 3. Every total assignment is checked against the reduct for minimality.

use super::indexed::{IRule, Indexed};
use super::minimal::{has_smaller_model, NafReading};
use crate::grounder::GroundProgram;
use crate::model::Interpretation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Unknown,
    True,
    False,
}

struct Search {
    idx: Indexed,
    head_occ: Vec<Vec<usize>>,
    complement: Vec<Option<usize>>,
    found: Vec<Vec<usize>>,
}

/// Drops rules that can never fire and `not l` for literals that can never
/// hold.
fn simplify(full: Indexed) -> Indexed {
    let n = full.lits.len();
    let mut possible = vec![false; n];
    let mut missing: Vec<usize> = full.rules.iter().map(|r| r.pos.len()).collect();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ri, r) in full.rules.iter().enumerate() {
        for &b in &r.pos {
            watch[b].push(ri);
        }
    }
    let mut queue: Vec<usize> = (0..full.rules.len())
        .filter(|&ri| missing[ri] == 0)
        .collect();
    while let Some(ri) = queue.pop() {
        for &h in &full.rules[ri].head {
            if !possible[h] {
                possible[h] = true;
                for &other in &watch[h] {
                    missing[other] -= 1;
                    if missing[other] == 0 {
                        queue.push(other);
                    }
                }
            }
        }
    }

    let rules = full
        .rules
        .iter()
        .filter(|r| r.pos.iter().all(|&b| possible[b]))
        .map(|r| IRule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            neg: r.neg.iter().copied().filter(|&l| possible[l]).collect(),
        })
        .collect::<Vec<_>>();
    // re-intern so that only possible literals remain
    let mut out = Indexed::default();
    let mut remap = vec![usize::MAX; n];
    for (id, lit) in full.lits.iter().enumerate() {
        if possible[id] {
            remap[id] = out.intern(lit);
        }
    }
    out.rules = rules
        .into_iter()
        .map(|r| IRule {
            head: r.head.iter().map(|&h| remap[h]).collect(),
            pos: r.pos.iter().map(|&b| remap[b]).collect(),
            neg: r.neg.iter().map(|&l| remap[l]).collect(),
        })
        .collect();
    out
}

impl Search {
    fn new(g: &GroundProgram) -> Self {
        let idx = simplify(Indexed::from_ground(g));
        let mut head_occ = vec![Vec::new(); idx.lits.len()];
        for (ri, r) in idx.rules.iter().enumerate() {
            for &h in &r.head {
                head_occ[h].push(ri);
            }
        }
        let complement = (0..idx.lits.len())
            .map(|id| idx.complement_of(id))
            .collect();
        Search {
            idx,
            head_occ,
            complement,
            found: Vec::new(),
        }
    }

    fn body_false(r: &IRule, a: &[Val]) -> bool {
        r.pos.iter().any(|&b| a[b] == Val::False) || r.neg.iter().any(|&l| a[l] == Val::True)
    }

    fn set(a: &mut [Val], trail: &mut Vec<usize>, id: usize, v: Val) {
        a[id] = v;
        trail.push(id);
    }

    /// Returns false on conflict. Assigned ids are pushed to `trail`.
    fn propagate(&self, a: &mut [Val], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for r in &self.idx.rules {
                if Self::body_false(r, a) || r.head.iter().any(|&h| a[h] == Val::True) {
                    continue;
                }
                let open_heads: Vec<usize> = r
                    .head
                    .iter()
                    .copied()
                    .filter(|&h| a[h] == Val::Unknown)
                    .collect();
                let open_pos = r.pos.iter().copied().filter(|&b| a[b] == Val::Unknown);
                let open_neg = r.neg.iter().copied().filter(|&l| a[l] == Val::Unknown);
                let open_body: Vec<(usize, Val)> = open_pos
                    .map(|b| (b, Val::False))
                    .chain(open_neg.map(|l| (l, Val::True)))
                    .collect();
                match (open_body.len(), open_heads.len()) {
                    (0, 0) => return false,
                    (0, 1) => {
                        Self::set(a, trail, open_heads[0], Val::True);
                        changed = true;
                    }
                    (1, 0) => {
                        let (id, v) = open_body[0];
                        Self::set(a, trail, id, v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            for id in 0..a.len() {
                if a[id] == Val::False {
                    continue;
                }
                let supported = self.head_occ[id].iter().any(|&ri| {
                    let r = &self.idx.rules[ri];
                    !Self::body_false(r, a) && r.head.iter().all(|&h| h == id || a[h] != Val::True)
                });
                if !supported {
                    if a[id] == Val::True {
                        return false;
                    }
                    Self::set(a, trail, id, Val::False);
                    changed = true;
                    continue;
                }
                if a[id] == Val::True {
                    if let Some(c) = self.complement[id] {
                        match a[c] {
                            Val::True => return false,
                            Val::Unknown => {
                                Self::set(a, trail, c, Val::False);
                                changed = true;
                            }
                            Val::False => {}
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self, a: &mut Vec<Val>) {
        let mut trail = Vec::new();
        if self.propagate(a, &mut trail) {
            match a.iter().position(|&v| v == Val::Unknown) {
                Some(id) => {
                    for v in [Val::True, Val::False] {
                        a[id] = v;
                        self.search(a);
                        a[id] = Val::Unknown;
                    }
                }
                None => self.check_leaf(a),
            }
        }
        for id in trail {
            a[id] = Val::Unknown;
        }
    }

    fn check_leaf(&mut self, a: &[Val]) {
        let member: Vec<bool> = a.iter().map(|&v| v == Val::True).collect();
        let is_model = self.idx.rules.iter().all(|r| {
            r.head.iter().any(|&h| member[h])
                || r.pos.iter().any(|&b| !member[b])
                || r.neg.iter().any(|&l| member[l])
        });
        if is_model && !has_smaller_model(&self.idx.rules, &member, NafReading::Reduct) {
            self.found
                .push((0..member.len()).filter(|&i| member[i]).collect());
        }
    }
}

/// All answer sets of a ground program, in search order.
pub(crate) fn answer_sets(g: &GroundProgram) -> Vec<Interpretation> {
    let mut search = Search::new(g);
    let mut assignment = vec![Val::Unknown; search.idx.lits.len()];
    search.search(&mut assignment);
    let lits = &search.idx.lits;
    search
        .found
        .iter()
        .map(|ids| {
            Interpretation::new(ids.iter().map(|&i| lits[i].clone()))
                .expect("search keeps assignments consistent")
        })
        .collect()
}
