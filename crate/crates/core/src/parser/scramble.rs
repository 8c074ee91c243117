use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Atom, ClassicalLiteral, Interpretation, Program, Rule, Term};

/// Predicate renaming produced by [`scramble`]. Constants are never renamed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrambleMap {
    pub seed: u64,
    /// original name -> scrambled name
    pub predicate_renaming: BTreeMap<String, String>,
}

impl ScrambleMap {
    fn inverse(&self) -> BTreeMap<&str, &str> {
        self.predicate_renaming
            .iter()
            .map(|(k, v)| (v.as_str(), k.as_str()))
            .collect()
    }

    fn rename_with(lit: &ClassicalLiteral, f: impl Fn(&str) -> Option<String>) -> ClassicalLiteral {
        let predicate = f(&lit.atom.predicate).unwrap_or_else(|| lit.atom.predicate.clone());
        ClassicalLiteral {
            atom: Atom::new(predicate, lit.atom.terms.clone()),
            strongly_negated: lit.strongly_negated,
        }
    }

    /// Maps an interpretation of the original program into scrambled names.
    pub fn forward(&self, i: &Interpretation) -> Interpretation {
        let lits = i
            .iter()
            .map(|l| Self::rename_with(l, |p| self.predicate_renaming.get(p).cloned()));
        Interpretation::new(lits).expect("renaming preserves consistency")
    }

    /// Maps an interpretation of the scrambled program back to original names.
    pub fn backward(&self, i: &Interpretation) -> Interpretation {
        let inv = self.inverse();
        let lits = i
            .iter()
            .map(|l| Self::rename_with(l, |p| inv.get(p).map(|s| s.to_string())));
        Interpretation::new(lits).expect("renaming preserves consistency")
    }
}

/// Renames every predicate to an opaque `xN` name and every rule's variables
/// to `VN`, with the assignment drawn from `seed`. Deterministic per seed.
pub fn scramble(program: &Program, seed: u64) -> (Program, ScrambleMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut predicates: Vec<&String> = program.signature().keys().collect();
    predicates.shuffle(&mut rng);
    let predicate_renaming: BTreeMap<String, String> = predicates
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), format!("x{}", i + 1)))
        .collect();

    let rules = program
        .rules()
        .iter()
        .map(|rule| {
            let mut vars = rule.variables();
            vars.shuffle(&mut rng);
            let var_renaming: BTreeMap<String, String> = vars
                .into_iter()
                .enumerate()
                .map(|(i, v)| (v, format!("V{}", i + 1)))
                .collect();
            let atom = |a: &Atom| Atom {
                predicate: predicate_renaming[&a.predicate].clone(),
                terms: a
                    .terms
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => Term::Var(var_renaming[v].clone()),
                        other => other.clone(),
                    })
                    .collect(),
            };
            let mut out = rule.clone();
            for h in &mut out.head {
                h.atom = atom(&h.atom);
            }
            for b in &mut out.body {
                b.literal.atom = atom(&b.literal.atom);
            }
            out
        })
        .collect::<Vec<Rule>>();

    let scrambled = Program::new(rules).expect("renaming preserves signature and safety");
    (
        scrambled,
        ScrambleMap {
            seed,
            predicate_renaming,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    #[test]
    fn deterministic_per_seed() {
        let p = parse_program("p(1). q(X) :- p(X). r(X,Y) :- q(X), p(Y), not s.").unwrap();
        let (a, ma) = scramble(&p, 7);
        let (b, mb) = scramble(&p, 7);
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(ma, mb);
    }

    #[test]
    fn structure_preserved_names_opaque() {
        let p = parse_program("p(1). q(X):-p(X).").unwrap();
        let (s, map) = scramble(&p, 42);
        let sig: Vec<(String, usize)> =
            s.signature().iter().map(|(k, v)| (k.clone(), *v)).collect();
        assert_eq!(sig, vec![("x1".into(), 1), ("x2".into(), 1)]);
        assert!(s.rules()[0].is_fact());
        assert_eq!(s.rules()[1].head.len(), 1);
        assert_eq!(s.rules()[1].body.len(), 1);
        assert_eq!(
            s.rules()[1].to_string(),
            format!(
                "{}(V1) :- {}(V1).",
                map.predicate_renaming["q"], map.predicate_renaming["p"]
            )
        );
        // constants untouched
        assert_eq!(s.rules()[0].head[0].atom.terms, vec![Term::Int(1)]);
    }

    #[test]
    fn renaming_is_a_bijection() {
        let p = parse_program("a. b :- a. c | d :- b. e(1) :- not c.").unwrap();
        let (_, map) = scramble(&p, 3);
        let images: std::collections::BTreeSet<_> = map.predicate_renaming.values().collect();
        assert_eq!(images.len(), map.predicate_renaming.len());
    }
}
