//! Atoms, alphabets, interpretations, rules, and programs.
//!
//! Everything here is an immutable value with a canonical order: atoms are
//! ordered lexicographically, rule bodies are duplicate-free sorted sets, and
//! a program's rules are ordered by head, then body size, then body. Two
//! programs are equal exactly when their alphabets and rule sets are equal.
//!
//! Programs carry an explicit [`Alphabet`] because several constructions
//! (body-complement, the full program, the diagonal program, ...) are
//! alphabet-relative: inferring the alphabet from the mentioned atoms would
//! silently change their meaning.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A propositional atom. The name matches `[a-z][a-zA-Z0-9_]*` and atoms
/// compare lexicographically by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, Error> {
        let name = name.into();
        if is_valid_atom_name(&name) {
            Ok(Atom(name))
        } else {
            Err(Error::InvalidAtomName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Atom::new(s)
    }
}

/// A finite, possibly empty set of atoms. Iteration is in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Alphabet {
    atoms: BTreeSet<Atom>,
}

impl Alphabet {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Alphabet {
            atoms: atoms.into_iter().collect(),
        }
    }

    /// Convenience constructor from name strings.
    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self, Error> {
        let atoms = names
            .into_iter()
            .map(|n| Atom::new(n.as_ref()))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(Alphabet { atoms })
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, "}}")
    }
}

/// A subset of an alphabet. Interpretations double as programs of facts,
/// see [`Interpretation::to_facts`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation {
    alphabet: Alphabet,
    members: BTreeSet<Atom>,
}

impl Interpretation {
    pub fn new(
        alphabet: Alphabet,
        members: impl IntoIterator<Item = Atom>,
    ) -> Result<Self, Error> {
        let members: BTreeSet<Atom> = members.into_iter().collect();
        for atom in &members {
            if !alphabet.contains(atom) {
                return Err(Error::AtomNotInAlphabet {
                    atom: atom.clone(),
                    context: "interpretation member".to_string(),
                });
            }
        }
        Ok(Interpretation { alphabet, members })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Interpretation {
            alphabet,
            members: BTreeSet::new(),
        }
    }

    /// The interpretation containing every atom of the alphabet.
    pub fn full(alphabet: Alphabet) -> Self {
        let members = alphabet.atoms.clone();
        Interpretation { alphabet, members }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.members.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.members.iter()
    }

    pub(crate) fn member_set(&self) -> &BTreeSet<Atom> {
        &self.members
    }

    pub fn union(&self, other: &Interpretation) -> Result<Interpretation, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(Interpretation {
            alphabet: self.alphabet.clone(),
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Interpretation) -> Result<Interpretation, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(Interpretation {
            alphabet: self.alphabet.clone(),
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    pub fn difference(&self, other: &Interpretation) -> Result<Interpretation, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(Interpretation {
            alphabet: self.alphabet.clone(),
            members: self.members.difference(&other.members).cloned().collect(),
        })
    }

    /// Complement with respect to the alphabet.
    pub fn complement(&self) -> Interpretation {
        let members = self
            .alphabet
            .iter()
            .filter(|a| !self.members.contains(a))
            .cloned()
            .collect();
        Interpretation {
            alphabet: self.alphabet.clone(),
            members,
        }
    }

    pub fn is_subset(&self, other: &Interpretation) -> Result<bool, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(self.members.is_subset(&other.members))
    }

    /// The program consisting of one fact per member.
    pub fn to_facts(&self) -> Program {
        let rules = self.members.iter().cloned().map(Rule::fact).collect();
        Program {
            alphabet: self.alphabet.clone(),
            rules,
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, atom) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, "}}")
    }
}

/// A Horn rule `head :- body` with a duplicate-free body. A rule with an
/// empty body is a fact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    head: Atom,
    body: BTreeSet<Atom>,
}

impl Rule {
    pub fn new(head: Atom, body: impl IntoIterator<Item = Atom>) -> Self {
        Rule {
            head,
            body: body.into_iter().collect(),
        }
    }

    pub fn fact(head: Atom) -> Self {
        Rule {
            head,
            body: BTreeSet::new(),
        }
    }

    pub fn head(&self) -> &Atom {
        &self.head
    }

    pub fn body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter()
    }

    pub(crate) fn body_set(&self) -> &BTreeSet<Atom> {
        &self.body
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Number of body atoms.
    pub fn width(&self) -> usize {
        self.body.len()
    }
}

// Canonical rule order: by head, then body size, then lexicographic body.
impl Ord for Rule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.head
            .cmp(&other.head)
            .then(self.body.len().cmp(&other.body.len()))
            .then_with(|| self.body.cmp(&other.body))
    }
}

impl PartialOrd for Rule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, atom) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{atom}")?;
            }
        }
        write!(f, ".")
    }
}

/// A finite set of rules over an explicit alphabet: the central algebraic
/// value of this crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Program {
    alphabet: Alphabet,
    rules: BTreeSet<Rule>,
}

impl Program {
    /// Builds a program, rejecting rules that mention atoms outside the
    /// alphabet. Duplicate rules and duplicate body atoms collapse.
    pub fn new(alphabet: Alphabet, rules: impl IntoIterator<Item = Rule>) -> Result<Self, Error> {
        let rules: BTreeSet<Rule> = rules.into_iter().collect();
        for rule in &rules {
            if !alphabet.contains(&rule.head) {
                return Err(Error::AtomNotInAlphabet {
                    atom: rule.head.clone(),
                    context: format!("head of rule `{rule}`"),
                });
            }
            for atom in &rule.body {
                if !alphabet.contains(atom) {
                    return Err(Error::AtomNotInAlphabet {
                        atom: atom.clone(),
                        context: format!("body of rule `{rule}`"),
                    });
                }
            }
        }
        Ok(Program { alphabet, rules })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Program {
            alphabet,
            rules: BTreeSet::new(),
        }
    }

    /// Internal constructor for operations whose results are valid by
    /// construction.
    pub(crate) fn from_rules_unchecked(alphabet: Alphabet, rules: BTreeSet<Rule>) -> Self {
        debug_assert!(rules.iter().all(|r| {
            alphabet.contains(&r.head) && r.body.iter().all(|a| alphabet.contains(a))
        }));
        Program { alphabet, rules }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    pub(crate) fn rule_set(&self) -> &BTreeSet<Rule> {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn contains(&self, rule: &Rule) -> bool {
        self.rules.contains(rule)
    }

    // ------------------------------------------------------------------
    // Canonical programs.
    // ------------------------------------------------------------------

    /// The unit program `{a :- a | a in A}`, neutral for composition.
    pub fn unit(alphabet: Alphabet) -> Self {
        let rules = alphabet
            .iter()
            .map(|a| Rule::new(a.clone(), [a.clone()]))
            .collect();
        Program { alphabet, rules }
    }

    /// The full program consisting of every rule `a :- B` with `B ⊆ A`.
    pub fn full(alphabet: Alphabet) -> Self {
        let atoms: Vec<&Atom> = alphabet.iter().collect();
        let mut rules = BTreeSet::new();
        for head in &atoms {
            for mask in 0u64..(1u64 << atoms.len()) {
                let body = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, a)| (*a).clone());
                rules.insert(Rule::new((*head).clone(), body));
            }
        }
        Program { alphabet, rules }
    }

    /// The minimalist program `{a :- ({a} ∪ I) | a in A}`. With `I = A`
    /// this is the neutral element of body-intersection.
    pub fn oplus(interpretation: &Interpretation) -> Self {
        let alphabet = interpretation.alphabet.clone();
        let rules = alphabet
            .iter()
            .map(|a| {
                let mut body = interpretation.members.clone();
                body.insert(a.clone());
                Rule {
                    head: a.clone(),
                    body,
                }
            })
            .collect();
        Program { alphabet, rules }
    }

    /// The diagonal program `{a :- (A - {a}) | a in A}`.
    pub fn diagonal(alphabet: Alphabet) -> Self {
        let rules = alphabet
            .iter()
            .map(|a| {
                let body: BTreeSet<Atom> =
                    alphabet.iter().filter(|b| *b != a).cloned().collect();
                Rule {
                    head: a.clone(),
                    body,
                }
            })
            .collect();
        Program { alphabet, rules }
    }

    /// The embedding `{a :- I | a in A}` of an interpretation into
    /// minimalist programs.
    pub fn square(interpretation: &Interpretation) -> Self {
        let alphabet = interpretation.alphabet.clone();
        let rules = alphabet
            .iter()
            .map(|a| Rule {
                head: a.clone(),
                body: interpretation.members.clone(),
            })
            .collect();
        Program { alphabet, rules }
    }

    // ------------------------------------------------------------------
    // Syntactic inspection.
    // ------------------------------------------------------------------

    /// The set of rule heads.
    pub fn heads(&self) -> Interpretation {
        let members = self.rules.iter().map(|r| r.head.clone()).collect();
        Interpretation {
            alphabet: self.alphabet.clone(),
            members,
        }
    }

    /// The union of all rule bodies.
    pub fn bodies(&self) -> Interpretation {
        let members = self
            .rules
            .iter()
            .flat_map(|r| r.body.iter().cloned())
            .collect();
        Interpretation {
            alphabet: self.alphabet.clone(),
            members,
        }
    }

    /// The sub-program of empty-body rules.
    pub fn facts(&self) -> Program {
        let rules = self.rules.iter().filter(|r| r.is_fact()).cloned().collect();
        Program {
            alphabet: self.alphabet.clone(),
            rules,
        }
    }

    /// The sub-program of rules with nonempty bodies.
    pub fn proper(&self) -> Program {
        let rules = self
            .rules
            .iter()
            .filter(|r| !r.is_fact())
            .cloned()
            .collect();
        Program {
            alphabet: self.alphabet.clone(),
            rules,
        }
    }

    /// The maximum body size over all rules; 0 for programs of facts.
    pub fn width(&self) -> usize {
        self.rules.iter().map(Rule::width).max().unwrap_or(0)
    }

    /// True when every rule has at most one body atom.
    pub fn is_krom(&self) -> bool {
        self.rules.iter().all(|r| r.width() <= 1)
    }

    /// True when there is at most one rule per head.
    pub fn is_minimalist(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.rules.iter().all(|r| seen.insert(&r.head))
    }

    /// Views a program of facts as an interpretation. Returns `None` if a
    /// proper rule is present.
    pub fn as_interpretation(&self) -> Option<Interpretation> {
        if self.rules.iter().any(|r| !r.is_fact()) {
            return None;
        }
        Some(self.heads())
    }

    // ------------------------------------------------------------------
    // Plain set operations on rule sets.
    // ------------------------------------------------------------------

    pub fn union(&self, other: &Program) -> Result<Program, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(Program {
            alphabet: self.alphabet.clone(),
            rules: self.rules.union(&other.rules).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Program) -> Result<Program, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(Program {
            alphabet: self.alphabet.clone(),
            rules: self.rules.intersection(&other.rules).cloned().collect(),
        })
    }

    pub fn difference(&self, other: &Program) -> Result<Program, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(Program {
            alphabet: self.alphabet.clone(),
            rules: self.rules.difference(&other.rules).cloned().collect(),
        })
    }

    /// Set-theoretic complement within the full program over the alphabet.
    pub fn set_complement(&self) -> Program {
        let full = Program::full(self.alphabet.clone());
        Program {
            alphabet: self.alphabet.clone(),
            rules: full.rules.difference(&self.rules).cloned().collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Program) -> Result<bool, Error> {
        same_alphabet(&self.alphabet, &other.alphabet)?;
        Ok(self.rules.is_subset(&other.rules))
    }
}

impl fmt::Display for Program {
    /// The canonical serialization: an `#alphabet` directive (omitted for
    /// the empty alphabet, which the grammar cannot express) followed by
    /// one clause per line in canonical rule order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.alphabet.is_empty() {
            write!(f, "#alphabet ")?;
            for (i, atom) in self.alphabet.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{atom}")?;
            }
            write!(f, ".")?;
            first = false;
        }
        for rule in &self.rules {
            if !first {
                writeln!(f)?;
            }
            write!(f, "{rule}")?;
            first = false;
        }
        Ok(())
    }
}

/// A bijection of an alphabet onto itself, inducing the permutation
/// program `{π(a) :- a | a in A}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMap {
    alphabet: Alphabet,
    map: BTreeMap<Atom, Atom>,
}

impl PermutationMap {
    /// Validates that `map` is total on the alphabet, injective, and onto.
    pub fn new(alphabet: Alphabet, map: BTreeMap<Atom, Atom>) -> Result<Self, Error> {
        for (from, to) in &map {
            if !alphabet.contains(from) || !alphabet.contains(to) {
                return Err(Error::NotAPermutation(format!(
                    "`{from} -> {to}` leaves the alphabet"
                )));
            }
        }
        if map.len() != alphabet.len() {
            return Err(Error::NotAPermutation(
                "mapping is not total on the alphabet".to_string(),
            ));
        }
        let image: BTreeSet<&Atom> = map.values().collect();
        if image.len() != alphabet.len() {
            return Err(Error::NotAPermutation(
                "mapping is not injective".to_string(),
            ));
        }
        Ok(PermutationMap { alphabet, map })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let map = alphabet.iter().map(|a| (a.clone(), a.clone())).collect();
        PermutationMap { alphabet, map }
    }

    /// Builds the cyclic permutation sending each atom of `cycle` to its
    /// successor (and the last back to the first); atoms outside the cycle
    /// are fixed.
    pub fn from_cycle(alphabet: Alphabet, cycle: &[Atom]) -> Result<Self, Error> {
        let mut map: BTreeMap<Atom, Atom> =
            alphabet.iter().map(|a| (a.clone(), a.clone())).collect();
        let distinct: BTreeSet<&Atom> = cycle.iter().collect();
        if distinct.len() != cycle.len() {
            return Err(Error::NotAPermutation(
                "cycle contains a repeated atom".to_string(),
            ));
        }
        for atom in cycle {
            if !alphabet.contains(atom) {
                return Err(Error::NotAPermutation(format!(
                    "cycle atom `{atom}` is not in the alphabet"
                )));
            }
        }
        for (i, atom) in cycle.iter().enumerate() {
            let next = &cycle[(i + 1) % cycle.len()];
            map.insert(atom.clone(), next.clone());
        }
        Ok(PermutationMap { alphabet, map })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn apply(&self, atom: &Atom) -> &Atom {
        &self.map[atom]
    }

    /// The permutation program `{π(a) :- a | a in A}`.
    pub fn to_program(&self) -> Program {
        let rules = self
            .map
            .iter()
            .map(|(from, to)| Rule::new(to.clone(), [from.clone()]))
            .collect();
        Program {
            alphabet: self.alphabet.clone(),
            rules,
        }
    }
}

pub(crate) fn same_alphabet(left: &Alphabet, right: &Alphabet) -> Result<(), Error> {
    if left == right {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}
