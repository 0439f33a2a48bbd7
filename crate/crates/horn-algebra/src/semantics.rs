//! Least-model semantics.
//!
//! The one-step consequence operator `T_P` maps an interpretation `I` to the
//! heads of all rules whose bodies hold in `I`. Models are exactly the
//! prefixed points of `T_P`, supported models its fixed points, and the
//! least model is both the `⊆`-least model and the limit of iterating `T_P`
//! from the empty interpretation.
//!
//! Two programs are subsumption equivalent when their operators agree on
//! every interpretation; [`ss_equiv`] decides this by brute force, and
//! [`Program::ss_reduce`] computes a fast canonical form whose agreement
//! with the brute-force oracle is itself checked by the law suite rather
//! than assumed.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::syntax::{same_alphabet, Alphabet, Atom, Interpretation, Program};

/// Alphabets above this size refuse exhaustive enumeration of the 2^|A|
/// interpretations.
pub const ENUMERATION_LIMIT: usize = 20;

/// The stages `T_P^0, T_P^1, ...` of the bottom-up fixpoint computation.
///
/// `stages[0]` is empty, the sequence is monotone under inclusion, the last
/// two stages are equal, and there are at most `|A| + 2` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointTrace {
    pub stages: Vec<Interpretation>,
}

impl FixpointTrace {
    /// The stabilized stage, i.e. the least model.
    pub fn final_stage(&self) -> &Interpretation {
        self.stages.last().expect("trace has at least two stages")
    }

    /// The stage reached after `n` steps (the final one once stabilized).
    pub fn stage(&self, n: usize) -> &Interpretation {
        &self.stages[n.min(self.stages.len() - 1)]
    }
}

impl Program {
    /// One step of the consequence operator: the heads of all rules whose
    /// body is contained in `interpretation`.
    pub fn tp_step(&self, interpretation: &Interpretation) -> Result<Interpretation, Error> {
        same_alphabet(self.alphabet(), interpretation.alphabet())?;
        Ok(self.tp_step_unchecked(interpretation))
    }

    pub(crate) fn tp_step_unchecked(&self, interpretation: &Interpretation) -> Interpretation {
        let members: BTreeSet<Atom> = self
            .rules()
            .filter(|r| r.body_set().is_subset(interpretation.member_set()))
            .map(|r| r.head().clone())
            .collect();
        Interpretation::new(self.alphabet().clone(), members).expect("heads are in the alphabet")
    }

    /// The least model, computed by iterating `T_P` from the empty
    /// interpretation until it stabilizes, together with the trace of
    /// stages.
    pub fn least_model(&self) -> (Interpretation, FixpointTrace) {
        let mut stages = vec![Interpretation::empty(self.alphabet().clone())];
        loop {
            let next = self.tp_step_unchecked(stages.last().expect("nonempty"));
            let stable = Some(&next) == stages.last();
            stages.push(next);
            if stable {
                break;
            }
        }
        let trace = FixpointTrace { stages };
        (trace.final_stage().clone(), trace)
    }

    /// Brute-force least model: enumerates all interpretations, keeps the
    /// models, and returns the `⊆`-least one. Serves as the independent
    /// oracle for [`Program::least_model`].
    pub fn least_model_oracle(&self) -> Result<Interpretation, Error> {
        let models = self.models()?;
        let least = models
            .iter()
            .find(|candidate| {
                models
                    .iter()
                    .all(|other| candidate.member_set().is_subset(other.member_set()))
            })
            .cloned();
        // Horn programs always have a ⊆-least model (the full
        // interpretation is a model, and models are closed under
        // intersection).
        Ok(least.expect("a Horn program has a least model"))
    }

    /// Whether `interpretation` satisfies every rule, by the textbook
    /// entailment definition (body holds implies head holds). Equivalent to
    /// `tp_step(P, I) ⊆ I`; the equivalence is exercised in tests.
    pub fn is_model(&self, interpretation: &Interpretation) -> Result<bool, Error> {
        same_alphabet(self.alphabet(), interpretation.alphabet())?;
        Ok(self.rules().all(|r| {
            !r.body_set().is_subset(interpretation.member_set())
                || interpretation.contains(r.head())
        }))
    }

    /// All models, in canonical interpretation order.
    pub fn models(&self) -> Result<Vec<Interpretation>, Error> {
        let mut found = Vec::new();
        for i in all_interpretations(self.alphabet())? {
            if self.is_model(&i)? {
                found.push(i);
            }
        }
        Ok(found)
    }

    /// All fixed points of `T_P`, in canonical interpretation order.
    pub fn supported_models(&self) -> Result<Vec<Interpretation>, Error> {
        let mut found = Vec::new();
        for i in all_interpretations(self.alphabet())? {
            if self.tp_step_unchecked(&i) == i {
                found.push(i);
            }
        }
        Ok(found)
    }

    /// Removes every rule strictly subsumed by another rule with the same
    /// head (a rule `a :- B` is dropped when some distinct `a :- C` with
    /// `C ⊊ B` is present). The result is subsumption equivalent to the
    /// input and serves as a canonical form for subsumption equivalence.
    pub fn ss_reduce(&self) -> Program {
        let rules: BTreeSet<_> = self
            .rules()
            .filter(|r| {
                !self.rules().any(|other| {
                    other.head() == r.head()
                        && other.body_set().len() < r.body_set().len()
                        && other.body_set().is_subset(r.body_set())
                })
            })
            .cloned()
            .collect();
        Program::from_rules_unchecked(self.alphabet().clone(), rules)
    }

    /// The least `n` with `T_P^n(∅)` equal to the least model.
    pub fn index(&self) -> usize {
        let (lm, trace) = self.least_model();
        trace
            .stages
            .iter()
            .position(|stage| *stage == lm)
            .expect("the final stage is the least model")
    }

    /// The first stage `n >= 1` at which `atom` is derived, or `None` if it
    /// is not in the least model.
    pub fn atom_index(&self, atom: &Atom) -> Option<usize> {
        let (_, trace) = self.least_model();
        trace.stages.iter().position(|stage| stage.contains(atom))
    }
}

/// Enumerates all `2^|A|` interpretations over `alphabet`, smallest bitmask
/// first (so the empty interpretation leads). Fails on alphabets above
/// [`ENUMERATION_LIMIT`].
pub fn all_interpretations(alphabet: &Alphabet) -> Result<Vec<Interpretation>, Error> {
    if alphabet.len() > ENUMERATION_LIMIT {
        return Err(Error::AlphabetTooLarge {
            size: alphabet.len(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let atoms: Vec<&Atom> = alphabet.iter().collect();
    let mut result = Vec::with_capacity(1 << atoms.len());
    for mask in 0u64..(1u64 << atoms.len()) {
        let members = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| (*a).clone());
        result.push(
            Interpretation::new(alphabet.clone(), members).expect("members from the alphabet"),
        );
    }
    Ok(result)
}

/// `P ≦ss R`: one-step consequences of `P` are contained in those of `R`
/// on every interpretation.
pub fn ss_leq(p: &Program, r: &Program) -> Result<bool, Error> {
    same_alphabet(p.alphabet(), r.alphabet())?;
    for i in all_interpretations(p.alphabet())? {
        let left = p.tp_step_unchecked(&i);
        let right = r.tp_step_unchecked(&i);
        if !left.member_set().is_subset(right.member_set()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subsumption equivalence: `T_P` and `T_R` agree on every interpretation.
pub fn ss_equiv(p: &Program, r: &Program) -> Result<bool, Error> {
    Ok(ss_leq(p, r)? && ss_leq(r, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tests::{interp, program, program_over};

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    #[test]
    fn tp_step_fires_satisfied_bodies() {
        let p = program("a. b :- a.");
        let empty = Interpretation::empty(p.alphabet().clone());
        assert_eq!(p.tp_step(&empty).unwrap(), interp(&["a", "b"], &["a"]));

        let q = program_over("c :- a, b.", &["a", "b", "c"]);
        let just_a = interp(&["a", "b", "c"], &["a"]);
        assert!(q.tp_step(&just_a).unwrap().is_empty());
    }

    #[test]
    fn tp_step_rejects_foreign_interpretations() {
        let p = program("a.");
        let i = interp(&["a", "b"], &["a"]);
        assert!(matches!(p.tp_step(&i), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn least_model_chain() {
        let p = program("a. b :- a. c :- a, b.");
        let (lm, trace) = p.least_model();
        assert_eq!(lm, interp(&["a", "b", "c"], &["a", "b", "c"]));
        assert!(trace.stages.len() <= p.alphabet().len() + 2);
        assert_eq!(trace.stages[0], Interpretation::empty(p.alphabet().clone()));
        assert_eq!(trace.stages[trace.stages.len() - 1], lm);
        assert_eq!(trace.stages[trace.stages.len() - 2], lm);

        let no_facts = program("b :- a.");
        assert!(no_facts.least_model().0.is_empty());

        // The running minimalist example: d :- a, b, d never fires.
        let m = program("a. b. c :- a, b. d :- a, b, d.");
        assert_eq!(m.least_model().0, interp(&["a", "b", "c", "d"], &["a", "b", "c"]));
    }

    #[test]
    fn oracle_agrees_on_small_programs() {
        let p = program("a.");
        assert_eq!(p.least_model_oracle().unwrap(), p.least_model().0);

        let cyclic = program("a :- b. b :- a.");
        assert!(cyclic.least_model_oracle().unwrap().is_empty());
    }

    #[test]
    fn model_predicates() {
        let p = program("a.");
        let empty = Interpretation::empty(p.alphabet().clone());
        assert!(!p.is_model(&empty).unwrap());

        let q = program("a :- a.");
        let supported = q.supported_models().unwrap();
        assert_eq!(supported, vec![interp(&["a"], &[]), interp(&["a"], &["a"])]);

        let r = program_over("b :- a.", &["a", "b"]);
        assert_eq!(
            r.models().unwrap(),
            vec![
                interp(&["a", "b"], &[]),
                interp(&["a", "b"], &["b"]),
                interp(&["a", "b"], &["a", "b"]),
            ]
        );
    }

    #[test]
    fn is_model_matches_prefixed_point_characterization() {
        let p = program_over("a. c :- a, b. b :- c.", &["a", "b", "c"]);
        for i in all_interpretations(p.alphabet()).unwrap() {
            let via_tp = p
                .tp_step(&i)
                .unwrap()
                .member_set()
                .is_subset(i.member_set());
            assert_eq!(p.is_model(&i).unwrap(), via_tp);
        }
    }

    #[test]
    fn subsumption_equivalence() {
        let p = program("a :- b. a :- b, c.");
        let q = program_over("a :- b.", &["a", "b", "c"]);
        assert!(ss_equiv(&p, &q).unwrap());
        assert!(ss_equiv(&p, &p).unwrap());

        let empty = Program::empty(p.alphabet().clone());
        let r = program_over("a :- b, c.", &["a", "b", "c"]);
        assert!(!ss_equiv(&empty, &r).unwrap());
        // Witness: on {b, c} the right program derives a, the left nothing.
        let witness = interp(&["a", "b", "c"], &["b", "c"]);
        assert_ne!(
            empty.tp_step(&witness).unwrap(),
            r.tp_step(&witness).unwrap()
        );
    }

    #[test]
    fn ss_reduce_examples() {
        assert_eq!(
            program("a :- b. a :- b, c.").ss_reduce(),
            program_over("a :- b.", &["a", "b", "c"])
        );
        assert_eq!(
            program("a. a :- b.").ss_reduce(),
            program_over("a.", &["a", "b"])
        );
    }

    #[test]
    fn index_examples() {
        let i = interp(&["a", "b"], &["a"]).to_facts();
        assert_eq!(i.atom_index(&atom("a")), Some(1));
        assert_eq!(i.atom_index(&atom("b")), None);

        let m = program("a. b. c :- a, b. d :- a, b, d.");
        assert_eq!(m.index(), 2);

        assert_eq!(Program::empty(Alphabet::default()).index(), 0);
    }

    #[test]
    fn enumeration_guard() {
        let big = Alphabet::from_names((0..21).map(|i| format!("a{i}"))).unwrap();
        assert!(matches!(
            all_interpretations(&big),
            Err(Error::AlphabetTooLarge { .. })
        ));
    }
}
