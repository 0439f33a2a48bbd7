use thiserror::Error;

use crate::syntax::Atom;

/// Errors raised by program construction and the algebraic operations.
///
/// Parsing has its own error type with source spans; see
/// [`crate::textio::ParseError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Atom names must match `[a-z][a-zA-Z0-9_]*`.
    #[error("invalid atom name `{0}` (expected [a-z][a-zA-Z0-9_]*)")]
    InvalidAtomName(String),

    /// An atom occurs in a rule or interpretation but is not declared
    /// in the alphabet.
    #[error("atom `{atom}` is not in the alphabet ({context})")]
    AtomNotInAlphabet { atom: Atom, context: String },

    /// Binary operations require both operands to share one alphabet.
    #[error("operands are defined over different alphabets")]
    AlphabetMismatch,

    /// Exhaustive enumeration of interpretations is capped: 2^|A| blows
    /// up and must fail loudly instead of hanging.
    #[error("alphabet has {size} atoms, above the enumeration limit of {limit}")]
    AlphabetTooLarge { size: usize, limit: usize },

    /// The exact Krom decomposition is only defined for minimalist
    /// programs (at most one rule per head).
    #[error("program is not minimalist: head `{0}` has more than one rule")]
    NotMinimalist(Atom),

    /// Sequential composition produced more rules than the configured cap.
    #[error("composition exceeded the rule limit of {limit}")]
    RuleLimitExceeded { limit: usize },

    /// A schema position that requires an interpretation received a
    /// program with proper rules.
    #[error("expected an interpretation (facts only), found proper rules")]
    NotInterpretation,

    /// A permutation map must be a bijection of the alphabet onto itself.
    #[error("mapping is not a permutation of the alphabet: {0}")]
    NotAPermutation(String),

    /// A blow-up map must assign an image inside the target alphabet to
    /// every source atom.
    #[error("invalid blow-up map: {0}")]
    InvalidBlowupMap(String),
}
