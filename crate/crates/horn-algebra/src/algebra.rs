//! Sequential composition, star, omega, reducts, and the set-like body
//! operations.
//!
//! Composition `P ∘ R` resolves every body atom of a `P`-rule against the
//! rules of `R` and unions the chosen bodies; it is the program-level
//! counterpart of composing consequence operators. Iterating it yields the
//! powers `P^n` (left-nested, since composition is not associative), their
//! union is the Kleene star `P*`, and the facts of `P*` — the omega `P^ω` —
//! coincide with the least model.
//!
//! The body operations transform rule bodies pairwise per head:
//! body-union `⊔` unions the bodies of same-head rule pairs,
//! body-intersection `⊓` intersects them, body-complement `©` complements
//! each body within the alphabet, body-subtraction `⊟` subtracts,
//! the two symmetric differences combine those, and the body-power-set
//! replaces every rule by all of its sub-body weakenings. On programs with
//! several rules per head these deviate from the set-theoretic blueprint;
//! the counterexamples are preserved as negative fixtures in the law suite.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::syntax::{same_alphabet, Alphabet, Atom, Interpretation, Program, Rule};

/// Default cap on the number of rules a single composition may produce.
pub const DEFAULT_RULE_LIMIT: usize = 100_000;

impl Program {
    /// Sequential composition `P ∘ R` with the default rule limit.
    ///
    /// Facts of `P` pass through unchanged; a proper rule contributes one
    /// composed rule per choice of an `R`-rule for each body atom, and
    /// contributes nothing if some body atom has no rule in `R`.
    pub fn compose(&self, other: &Program) -> Result<Program, Error> {
        self.compose_with_limit(other, DEFAULT_RULE_LIMIT)
    }

    /// Composition with an explicit cap on produced rules. Intermediate
    /// results the size of the full program are legal, but blow-ups must
    /// fail loudly instead of exhausting memory.
    pub fn compose_with_limit(&self, other: &Program, limit: usize) -> Result<Program, Error> {
        same_alphabet(self.alphabet(), other.alphabet())?;
        let mut by_head: BTreeMap<&Atom, Vec<&Rule>> = BTreeMap::new();
        for rule in other.rules() {
            by_head.entry(rule.head()).or_default().push(rule);
        }

        let mut produced = 0usize;
        let mut count = |produced: &mut usize| -> Result<(), Error> {
            *produced += 1;
            if *produced > limit {
                Err(Error::RuleLimitExceeded { limit })
            } else {
                Ok(())
            }
        };

        let mut rules = BTreeSet::new();
        'rules: for rule in self.rules() {
            if rule.is_fact() {
                count(&mut produced)?;
                rules.insert(rule.clone());
                continue;
            }
            let mut choices: Vec<&[&Rule]> = Vec::with_capacity(rule.width());
            for atom in rule.body() {
                match by_head.get(atom) {
                    Some(options) => choices.push(options),
                    None => continue 'rules,
                }
            }
            // Odometer over the per-atom rule choices.
            let mut indices = vec![0usize; choices.len()];
            'combos: loop {
                count(&mut produced)?;
                let mut body = BTreeSet::new();
                for (slot, options) in indices.iter().zip(&choices) {
                    body.extend(options[*slot].body().cloned());
                }
                rules.insert(Rule::new(rule.head().clone(), body));
                let mut position = indices.len();
                while position > 0 {
                    position -= 1;
                    indices[position] += 1;
                    if indices[position] < choices[position].len() {
                        continue 'combos;
                    }
                    indices[position] = 0;
                }
                break;
            }
        }
        Ok(Program::from_rules_unchecked(self.alphabet().clone(), rules))
    }

    /// The left-nested power `P^n = ((P P) P) ... P`, with `P^0` the unit
    /// program.
    pub fn power(&self, n: usize) -> Result<Program, Error> {
        let mut acc = Program::unit(self.alphabet().clone());
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// The Kleene star `P* = ⋃_{n ≥ 0} P^n`.
    ///
    /// The power sequence over a finite rule universe is eventually
    /// periodic, so the union is taken over powers until the exact value of
    /// some `P^n` repeats. Cycle detection is on the power values, not on
    /// the accumulated union: the union stalling for one step would not
    /// prove that the tail adds nothing.
    pub fn star(&self) -> Result<Program, Error> {
        let mut seen: BTreeSet<Program> = BTreeSet::new();
        let mut acc = Program::empty(self.alphabet().clone());
        let mut current = Program::unit(self.alphabet().clone());
        while !seen.contains(&current) {
            acc = acc.union(&current)?;
            seen.insert(current.clone());
            current = current.compose(self)?;
        }
        Ok(acc)
    }

    /// The omega `P^ω`: the least model, algebraically the heads of
    /// `facts(P*)`. This is the fixpoint shortcut; [`Program::omega_via_star`]
    /// is the star-based route, kept as a cross-check.
    pub fn omega(&self) -> Interpretation {
        self.least_model().0
    }

    /// Computes `P^ω` literally as the facts of the Kleene star.
    pub fn omega_via_star(&self) -> Result<Interpretation, Error> {
        Ok(self.star()?.facts().heads())
    }

    /// The head-reduct `^I P`: rules whose head lies in `interpretation`.
    pub fn head_reduct(&self, interpretation: &Interpretation) -> Result<Program, Error> {
        same_alphabet(self.alphabet(), interpretation.alphabet())?;
        let rules = self
            .rules()
            .filter(|r| interpretation.contains(r.head()))
            .cloned()
            .collect();
        Ok(Program::from_rules_unchecked(self.alphabet().clone(), rules))
    }

    /// The body-reduct `P^I`: rules whose body is contained in
    /// `interpretation`.
    pub fn body_reduct(&self, interpretation: &Interpretation) -> Result<Program, Error> {
        same_alphabet(self.alphabet(), interpretation.alphabet())?;
        let rules = self
            .rules()
            .filter(|r| r.body_set().is_subset(interpretation.member_set()))
            .cloned()
            .collect();
        Ok(Program::from_rules_unchecked(self.alphabet().clone(), rules))
    }

    fn pairwise_body_op(
        &self,
        other: &Program,
        op: impl Fn(&BTreeSet<Atom>, &BTreeSet<Atom>) -> BTreeSet<Atom>,
    ) -> Result<Program, Error> {
        same_alphabet(self.alphabet(), other.alphabet())?;
        let mut rules = BTreeSet::new();
        for left in self.rules() {
            for right in other.rules() {
                if left.head() == right.head() {
                    rules.insert(Rule::new(
                        left.head().clone(),
                        op(left.body_set(), right.body_set()),
                    ));
                }
            }
        }
        Ok(Program::from_rules_unchecked(self.alphabet().clone(), rules))
    }

    /// Body-union `P ⊔ R = {a :- (B ∪ C) | a :- B ∈ P, a :- C ∈ R}`.
    pub fn body_union(&self, other: &Program) -> Result<Program, Error> {
        self.pairwise_body_op(other, |b, c| b.union(c).cloned().collect())
    }

    /// Body-intersection `P ⊓ R = {a :- (B ∩ C) | a :- B ∈ P, a :- C ∈ R}`.
    pub fn body_inter(&self, other: &Program) -> Result<Program, Error> {
        self.pairwise_body_op(other, |b, c| b.intersection(c).cloned().collect())
    }

    /// Body-subtraction `P ⊟ R = {a :- (B - C) | a :- B ∈ P, a :- C ∈ R}`.
    pub fn body_sub(&self, other: &Program) -> Result<Program, Error> {
        self.pairwise_body_op(other, |b, c| b.difference(c).cloned().collect())
    }

    /// Body-symmetric-difference
    /// `{a :- (B △ C) | a :- B ∈ P, a :- C ∈ R}`.
    pub fn body_symdiff(&self, other: &Program) -> Result<Program, Error> {
        self.pairwise_body_op(other, |b, c| b.symmetric_difference(c).cloned().collect())
    }

    /// The black variant `(P ⊟ R) ⊔ (R ⊟ P)`. Coincides with
    /// [`Program::body_symdiff`] on minimalist programs and contains it in
    /// general.
    pub fn black_symdiff(&self, other: &Program) -> Result<Program, Error> {
        self.body_sub(other)?.body_union(&other.body_sub(self)?)
    }

    /// Body-complement `P© = {a :- (A - B) | a :- B ∈ P}`, an involution.
    pub fn body_comp(&self) -> Program {
        let all: BTreeSet<Atom> = self.alphabet().iter().cloned().collect();
        let rules = self
            .rules()
            .map(|r| {
                Rule::new(
                    r.head().clone(),
                    all.difference(r.body_set()).cloned().collect::<BTreeSet<_>>(),
                )
            })
            .collect();
        Program::from_rules_unchecked(self.alphabet().clone(), rules)
    }

    /// Body-power-set `P^𝔭 = {a :- B | a :- C ∈ P, B ⊆ C}`: every rule
    /// weakened to all sub-bodies. Idempotent.
    pub fn body_powerset(&self) -> Program {
        let mut rules = BTreeSet::new();
        for rule in self.rules() {
            let body: Vec<&Atom> = rule.body().collect();
            for mask in 0u64..(1u64 << body.len()) {
                let sub = body
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, a)| (*a).clone());
                rules.insert(Rule::new(rule.head().clone(), sub));
            }
        }
        Program::from_rules_unchecked(self.alphabet().clone(), rules)
    }

    /// `P ⋉ R`: the rules of `P` whose body is disjoint from the body of
    /// some same-head rule of `R`.
    pub fn ltimes(&self, other: &Program) -> Result<Program, Error> {
        same_alphabet(self.alphabet(), other.alphabet())?;
        let rules = self
            .rules()
            .filter(|left| {
                other.rules().any(|right| {
                    left.head() == right.head()
                        && left.body_set().is_disjoint(right.body_set())
                })
            })
            .cloned()
            .collect();
        Ok(Program::from_rules_unchecked(self.alphabet().clone(), rules))
    }

    /// The bowtie `P ⋈ R = (P ⋉ R) ∪ (R ⋉ P)`, used to compute the facts
    /// of a body-intersection.
    pub fn bowtie(&self, other: &Program) -> Result<Program, Error> {
        self.ltimes(other)?.union(&other.ltimes(self)?)
    }
}

/// An additive mapping of interpretations over a source alphabet into
/// interpretations over a target alphabet, determined by the images of
/// singletons: `I• = ⋃_{a ∈ I} {a}•`.
///
/// Extended to programs it blows up every rule head into its image atoms
/// and maps bodies additively, yielding a homomorphism for both `∪` and `⊔`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupMap {
    source: Alphabet,
    target: Alphabet,
    image: BTreeMap<Atom, BTreeSet<Atom>>,
}

impl BlowupMap {
    /// Validates that every source atom has an image within the target
    /// alphabet. Images may overlap and may be empty; only additivity is
    /// forced by construction.
    pub fn new(
        source: Alphabet,
        target: Alphabet,
        image: BTreeMap<Atom, BTreeSet<Atom>>,
    ) -> Result<Self, Error> {
        for atom in source.iter() {
            let Some(atoms) = image.get(atom) else {
                return Err(Error::InvalidBlowupMap(format!(
                    "source atom `{atom}` has no image"
                )));
            };
            for target_atom in atoms {
                if !target.contains(target_atom) {
                    return Err(Error::InvalidBlowupMap(format!(
                        "image atom `{target_atom}` is not in the target alphabet"
                    )));
                }
            }
        }
        for atom in image.keys() {
            if !source.contains(atom) {
                return Err(Error::InvalidBlowupMap(format!(
                    "mapped atom `{atom}` is not in the source alphabet"
                )));
            }
        }
        Ok(BlowupMap {
            source,
            target,
            image,
        })
    }

    /// The identity map on `alphabet`.
    pub fn identity(alphabet: Alphabet) -> Self {
        let image = alphabet
            .iter()
            .map(|a| (a.clone(), BTreeSet::from([a.clone()])))
            .collect();
        BlowupMap {
            source: alphabet.clone(),
            target: alphabet,
            image,
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    fn image_set(&self, atoms: impl Iterator<Item = impl std::borrow::Borrow<Atom>>) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for atom in atoms {
            out.extend(self.image[atom.borrow()].iter().cloned());
        }
        out
    }

    /// The additive extension `I• = ⋃_{a ∈ I} {a}•`.
    pub fn image_of(&self, interpretation: &Interpretation) -> Result<Interpretation, Error> {
        same_alphabet(&self.source, interpretation.alphabet())?;
        let members = self.image_set(interpretation.iter());
        Ok(Interpretation::new(self.target.clone(), members)
            .expect("images lie in the target alphabet"))
    }

    /// The program extension
    /// `P• = {a' :- B• | a :- B ∈ P, a' ∈ {a}•}` over the target alphabet.
    pub fn extend(&self, program: &Program) -> Result<Program, Error> {
        same_alphabet(&self.source, program.alphabet())?;
        let mut rules = BTreeSet::new();
        for rule in program.rules() {
            let body = self.image_set(rule.body());
            for head in &self.image[rule.head()] {
                rules.insert(Rule::new(head.clone(), body.iter().cloned()));
            }
        }
        Ok(Program::from_rules_unchecked(self.target.clone(), rules))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tests::{interp, program, program_over};

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    #[test]
    fn composition_example() {
        let p = program("a. b :- a. c :- a, b.");
        let r = program_over("a. b :- a.", &["a", "b", "c"]);
        assert_eq!(
            p.compose(&r).unwrap(),
            program_over("a. b. c :- a.", &["a", "b", "c"])
        );
    }

    #[test]
    fn composition_unit_laws() {
        let p = program("a. b :- a. c :- a, b.");
        let unit = Program::unit(p.alphabet().clone());
        assert_eq!(p.compose(&unit).unwrap(), p);
        assert_eq!(unit.compose(&p).unwrap(), p);
    }

    #[test]
    fn composition_does_not_distribute_from_the_left() {
        let p = program_over("a :- b, c.", &["a", "b", "c"]);
        let b = program_over("b.", &["a", "b", "c"]);
        let c = program_over("c.", &["a", "b", "c"]);
        let combined = p.compose(&b.union(&c).unwrap()).unwrap();
        assert_eq!(combined, program_over("a.", &["a", "b", "c"]));
        let split = p.compose(&b).unwrap().union(&p.compose(&c).unwrap()).unwrap();
        assert!(split.is_empty());
    }

    #[test]
    fn composition_rule_limit() {
        let p = program("a :- b.");
        let r = program_over("b.", &["a", "b"]);
        assert!(matches!(
            p.compose_with_limit(&r, 0),
            Err(Error::RuleLimitExceeded { limit: 0 })
        ));
    }

    #[test]
    fn power_examples() {
        let p = program("a. b :- a. c :- a, b.");
        assert_eq!(p.power(0).unwrap(), Program::unit(p.alphabet().clone()));

        let i = interp(&["a", "b"], &["a"]).to_facts();
        assert_eq!(i.power(2).unwrap(), i);

        let k = program_over("b :- a.", &["a", "b"]);
        assert!(k.power(2).unwrap().is_empty());
    }

    #[test]
    fn star_examples() {
        let i = interp(&["a", "b"], &["a"]);
        let star = i.to_facts().star().unwrap();
        let unit = Program::unit(i.alphabet().clone());
        assert_eq!(star, unit.union(&i.to_facts()).unwrap());

        let empty = Program::empty(i.alphabet().clone());
        assert_eq!(empty.star().unwrap(), unit);

        let p = program("a. b :- a.");
        assert_eq!(
            p.star().unwrap(),
            program_over("a. b. a :- a. b :- a. b :- b.", &["a", "b"])
        );
    }

    #[test]
    fn omega_examples() {
        let i = interp(&["a", "b"], &["a"]);
        assert_eq!(i.to_facts().omega(), i);

        let k = program_over("b :- a.", &["a", "b"]);
        assert!(k.omega().is_empty());
        assert_eq!(k.omega_via_star().unwrap(), k.omega());
    }

    #[test]
    fn reduct_examples() {
        let p = program("a. b :- a.");
        let just_b = interp(&["a", "b"], &["b"]);
        assert_eq!(
            p.head_reduct(&just_b).unwrap(),
            program_over("b :- a.", &["a", "b"])
        );

        let q = program_over("c :- a, b.", &["a", "b", "c"]);
        let just_a = interp(&["a", "b", "c"], &["a"]);
        assert!(q.body_reduct(&just_a).unwrap().is_empty());

        // On interpretations the head-reduct is plain intersection.
        let i = interp(&["a", "b", "c"], &["a", "b"]);
        let j = interp(&["a", "b", "c"], &["b", "c"]);
        assert_eq!(
            i.to_facts().head_reduct(&j).unwrap(),
            i.intersection(&j).unwrap().to_facts()
        );
    }

    #[test]
    fn body_union_example() {
        let p = program("a. b :- a. b :- b. c :- a, b.");
        let r = program_over("b. b :- c.", &["a", "b", "c"]);
        assert_eq!(
            p.body_union(&r).unwrap(),
            program_over("b :- a. b :- b. b :- a, c. b :- b, c.", &["a", "b", "c"])
        );

        let unit = Interpretation::full(p.alphabet().clone()).to_facts();
        assert_eq!(p.body_union(&unit).unwrap(), p);

        let k = program("a :- b. a :- c.");
        assert_eq!(
            k.body_union(&k).unwrap(),
            program_over("a :- b. a :- c. a :- b, c.", &["a", "b", "c"])
        );
    }

    #[test]
    fn body_inter_examples() {
        let k = program("a :- b. a :- c.");
        assert_eq!(
            k.body_inter(&k).unwrap(),
            program_over("a. a :- b. a :- c.", &["a", "b", "c"])
        );

        let oplus = Program::oplus(&Interpretation::full(k.alphabet().clone()));
        assert_eq!(k.body_inter(&oplus).unwrap(), k);

        let i = interp(&["a", "b"], &["a"]);
        let j = interp(&["a", "b"], &["a", "b"]);
        assert_eq!(
            i.to_facts().body_inter(&j.to_facts()).unwrap(),
            i.intersection(&j).unwrap().to_facts()
        );
    }

    #[test]
    fn bowtie_examples() {
        let p = program_over("a :- b.", &["a", "b", "c"]);
        let r = program_over("a :- c.", &["a", "b", "c"]);
        assert_eq!(p.ltimes(&r).unwrap(), p);
        assert!(p.ltimes(&p).unwrap().is_empty());

        // Both routes to the facts of a body-intersection agree.
        let direct = p.body_inter(&r).unwrap().facts();
        let via_bowtie = p
            .body_union(&r)
            .unwrap()
            .facts()
            .union(&p.bowtie(&r).unwrap().heads().to_facts())
            .unwrap();
        assert_eq!(direct, program_over("a.", &["a", "b", "c"]));
        assert_eq!(via_bowtie, direct);
    }

    #[test]
    fn body_complement_example() {
        let p = program_over("a. b :- a. c :- a, b.", &["a", "b", "c"]);
        assert_eq!(
            p.body_comp(),
            program_over("a :- a, b, c. b :- b, c. c :- c.", &["a", "b", "c"])
        );
        assert_eq!(p.body_comp().body_comp(), p);
        assert!(Program::empty(p.alphabet().clone()).body_comp().is_empty());

        // A as facts complements to the oplus program.
        let all = Interpretation::full(p.alphabet().clone());
        assert_eq!(all.to_facts().body_comp(), Program::oplus(&all));
    }

    #[test]
    fn body_sub_examples() {
        let p = program("a. b :- a. c :- a, b.");
        let r = program_over("b :- a. c :- a.", &["a", "b", "c"]);
        assert_eq!(
            p.body_sub(&r).unwrap(),
            program_over("b. c :- b.", &["a", "b", "c"])
        );

        let m = program("c :- a. d :- a, b.");
        assert_eq!(
            m.body_sub(&m).unwrap(),
            m.heads().to_facts()
        );

        // Pairwise definition on a non-minimalist program.
        let k = program("a :- b. a :- c.");
        assert_eq!(
            k.body_sub(&k).unwrap(),
            program_over("a. a :- b. a :- c.", &["a", "b", "c"])
        );
    }

    #[test]
    fn symdiff_examples() {
        let p = program_over("a :- b. a :- c.", &["a", "b", "c", "d"]);
        let r = program_over("a :- b. a :- d.", &["a", "b", "c", "d"]);
        assert_eq!(
            p.body_symdiff(&r).unwrap(),
            program_over("a. a :- b, c. a :- b, d. a :- c, d.", &["a", "b", "c", "d"])
        );
        // The pairwise black variant additionally recovers single-atom
        // bodies (and keeps the fact-paired leftovers).
        let black = p.black_symdiff(&r).unwrap();
        assert_eq!(
            black,
            program_over(
                "a. a :- b. a :- c. a :- d. a :- b, c. a :- b, d. a :- c, d.",
                &["a", "b", "c", "d"]
            )
        );
        assert!(p.body_symdiff(&r).unwrap().is_subset_of(&black).unwrap());

        // Minimalist inputs: the two notions coincide.
        let m = program_over("a :- b.", &["a", "b", "c"]);
        let n = program_over("a :- c.", &["a", "b", "c"]);
        assert_eq!(m.body_symdiff(&n).unwrap(), m.black_symdiff(&n).unwrap());
    }

    #[test]
    fn body_powerset_examples() {
        let p = program("a. b :- a. c :- a, b.");
        assert_eq!(
            p.body_powerset(),
            program_over(
                "a. b. c. b :- a. c :- a. c :- b. c :- a, b.",
                &["a", "b", "c"]
            )
        );

        let i = interp(&["a", "b"], &["a"]);
        assert_eq!(i.to_facts().body_powerset(), i.to_facts());

        let all = Interpretation::full(i.alphabet().clone());
        assert_eq!(
            Program::oplus(&all).body_powerset(),
            Program::full(i.alphabet().clone())
        );
    }

    fn example_blowup() -> BlowupMap {
        let source = Alphabet::from_names(["a", "b"]).unwrap();
        let target = Alphabet::from_names(["ap", "bp", "cp"]).unwrap();
        let image = BTreeMap::from([
            (atom("a"), BTreeSet::from([atom("ap"), atom("cp")])),
            (atom("b"), BTreeSet::from([atom("bp")])),
        ]);
        BlowupMap::new(source, target, image).unwrap()
    }

    #[test]
    fn blowup_example() {
        let map = example_blowup();
        let p = program_over("a. b :- a, b.", &["a", "b"]);
        assert_eq!(
            map.extend(&p).unwrap(),
            program_over("ap. cp. bp :- ap, bp, cp.", &["ap", "bp", "cp"])
        );

        let identity = BlowupMap::identity(p.alphabet().clone());
        assert_eq!(identity.extend(&p).unwrap(), p);
    }

    #[test]
    fn blowup_is_a_bunion_homomorphism_on_the_example() {
        let map = example_blowup();
        let p = program_over("a. b :- a.", &["a", "b"]);
        let r = program_over("a. b :- b.", &["a", "b"]);
        let joined = map.extend(&p.body_union(&r).unwrap()).unwrap();
        let split = map
            .extend(&p)
            .unwrap()
            .body_union(&map.extend(&r).unwrap())
            .unwrap();
        assert_eq!(joined, split);
    }

    #[test]
    fn blowup_validation() {
        let source = Alphabet::from_names(["a", "b"]).unwrap();
        let target = Alphabet::from_names(["x"]).unwrap();
        let incomplete = BTreeMap::from([(atom("a"), BTreeSet::from([atom("x")]))]);
        assert!(matches!(
            BlowupMap::new(source.clone(), target.clone(), incomplete),
            Err(Error::InvalidBlowupMap(_))
        ));

        let escaping = BTreeMap::from([
            (atom("a"), BTreeSet::from([atom("y")])),
            (atom("b"), BTreeSet::new()),
        ]);
        assert!(matches!(
            BlowupMap::new(source, target, escaping),
            Err(Error::InvalidBlowupMap(_))
        ));
    }
}
