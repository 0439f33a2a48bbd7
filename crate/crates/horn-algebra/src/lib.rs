//! An algebra of propositional Horn logic programs.
//!
//! Programs are finite sets of rules `a :- b1, ..., bk` over an explicit
//! finite alphabet, treated as first-class algebraic values. The crate
//! provides:
//!
//! - the syntactic core: atoms, rules, programs, interpretations, and the
//!   canonical programs (unit, full, diagonal, permutation, ...) in
//!   [`syntax`];
//! - least-model semantics via the one-step consequence operator, plus
//!   subsumption equivalence and its brute-force oracle, in [`semantics`];
//! - sequential composition, Kleene star, omega, head/body reducts, and the
//!   set-like body operations (body-union, body-intersection,
//!   body-complement, body-subtraction, the symmetric differences, and the
//!   body-power-set) in [`algebra`];
//! - Krom decompositions with machine-checked guarantees in
//!   [`decomposition`]: every minimalist program of width `m` splits into
//!   `m` Krom programs whose least models intersect to the least model of
//!   the source, and arbitrary programs admit Krom covers approximating
//!   their least model;
//! - analogical proportions between programs, driven by program schemas, in
//!   [`analogy`];
//! - a text format, an expression language, and JSON import/export in
//!   [`textio`];
//! - a seeded, deterministic law suite exercising every identity and
//!   counterexample the operations are expected to satisfy, in [`lawsuite`].
//!
//! ```
//! use horn_algebra::textio::parse_program;
//!
//! let p = parse_program("a. b :- a. c :- a, b.", None)?;
//! let (lm, _) = p.least_model();
//! assert_eq!(lm.to_string(), "{a, b, c}");
//! # Ok::<(), horn_algebra::textio::ParseError>(())
//! ```
//!
//! A narrative guide with runnable examples lives in the `book/` directory
//! of the repository; its chapters are compiled as doc-tests via the
//! [`guide`] module.

pub mod algebra;
pub mod analogy;
pub mod decomposition;
mod error;
pub mod guide;
pub mod lawsuite;
pub mod semantics;
pub mod syntax;
pub mod textio;

pub use error::Error;
pub use syntax::{Alphabet, Atom, Interpretation, PermutationMap, Program, Rule};
