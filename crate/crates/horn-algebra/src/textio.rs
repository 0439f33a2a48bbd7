//! Text and JSON formats for programs, plus the expression language.
//!
//! The program grammar:
//!
//! ```text
//! file      := { directive | clause }
//! directive := "#alphabet" atom { "," atom } "."
//! clause    := atom [ ":-" atom { "," atom } ] "."
//! atom      := /[a-z][a-zA-Z0-9_]*/
//! ```
//!
//! `%` starts a comment running to the end of the line; whitespace is
//! insignificant. A `#alphabet` directive pins the alphabet; without one the
//! alphabet is the caller-supplied override, or else the set of mentioned
//! atoms. Interpretations have no separate syntax: they are programs
//! containing only facts.
//!
//! [`serialize_program`] emits the canonical form (directive first, clauses
//! in canonical order), so `parse ∘ serialize` is the identity on programs
//! and `serialize ∘ parse` canonicalizes any parseable text.
//!
//! Expressions are function calls over named programs, e.g.
//! `omega(compose(P, star(P)))`; see [`parse_expr`] for the operator table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analogy::SchemaExpr;
use crate::decomposition::{Decomposition, DecompositionMode};
use crate::syntax::{is_valid_atom_name, Alphabet, Atom, Interpretation, Program, Rule};

/// Position of a token in source text; line and column are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("atom `{0}` is not in the alphabet")]
    AtomNotInAlphabet(Atom),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{op}` takes {expected} argument(s), found {found}")]
    Arity {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("name `{0}` is not bound")]
    UnboundName(String),
    #[error("malformed JSON program: {0}")]
    JsonSchema(String),
}

impl ParseError {
    fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            kind: ParseErrorKind::Syntax(message.into()),
        }
    }
}

// ---------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Directive, // "#alphabet"
    Comma,
    Dot,
    Turnstile, // ":-"
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Directive => write!(f, "`#alphabet`"),
            Token::Comma => write!(f, "`,`"),
            Token::Dot => write!(f, "`.`"),
            Token::Turnstile => write!(f, "`:-`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            column: self.column,
            offset: self.pos,
        }
    }

    fn peek_byte(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek_byte()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(b)
    }

    fn skip_trivia(&mut self) {
        while let Some(b) = self.peek_byte() {
            if b.is_ascii_whitespace() {
                self.bump();
            } else if b == b'%' {
                while let Some(b) = self.peek_byte() {
                    if b == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn lex_ident(&mut self) -> String {
        let start = self.pos;
        while let Some(b) = self.peek_byte() {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    /// Next token for the program grammar (lowercase atoms only).
    fn next_program_token(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        self.skip_trivia();
        let span = self.span();
        let Some(b) = self.peek_byte() else {
            return Ok((Token::Eof, span));
        };
        match b {
            b'.' => {
                self.bump();
                Ok((Token::Dot, span))
            }
            b',' => {
                self.bump();
                Ok((Token::Comma, span))
            }
            b':' => {
                self.bump();
                if self.peek_byte() == Some(b'-') {
                    self.bump();
                    Ok((Token::Turnstile, span))
                } else {
                    Err(ParseError::syntax(span, "expected `:-`"))
                }
            }
            b'#' => {
                self.bump();
                let word = self.lex_ident();
                if word == "alphabet" {
                    Ok((Token::Directive, span))
                } else {
                    Err(ParseError::syntax(
                        span,
                        format!("unknown directive `#{word}`"),
                    ))
                }
            }
            b'a'..=b'z' => Ok((Token::Ident(self.lex_ident()), span)),
            other => Err(ParseError::syntax(
                span,
                format!("unexpected character `{}`", other as char),
            )),
        }
    }

    /// Next token for the expression grammar (identifiers may start with
    /// any letter or `_`, so the schema variable `X` lexes).
    fn next_expr_token(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        self.skip_trivia();
        let span = self.span();
        let Some(b) = self.peek_byte() else {
            return Ok((Token::Eof, span));
        };
        match b {
            b'(' => {
                self.bump();
                Ok((Token::LParen, span))
            }
            b')' => {
                self.bump();
                Ok((Token::RParen, span))
            }
            b',' => {
                self.bump();
                Ok((Token::Comma, span))
            }
            b if b.is_ascii_alphabetic() || b == b'_' => Ok((Token::Ident(self.lex_ident()), span)),
            other => Err(ParseError::syntax(
                span,
                format!("unexpected character `{}`", other as char),
            )),
        }
    }
}

// ---------------------------------------------------------------------
// Program parser
// ---------------------------------------------------------------------

struct ProgramParser<'a> {
    lexer: Lexer<'a>,
    lookahead: (Token, SourceSpan),
}

impl<'a> ProgramParser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let lookahead = lexer.next_program_token()?;
        Ok(ProgramParser { lexer, lookahead })
    }

    fn advance(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        let next = self.lexer.next_program_token()?;
        Ok(std::mem::replace(&mut self.lookahead, next))
    }

    fn expect_atom(&mut self) -> Result<(Atom, SourceSpan), ParseError> {
        let (token, span) = self.advance()?;
        match token {
            Token::Ident(name) => {
                // The lexer only produces lowercase-led identifiers here.
                debug_assert!(is_valid_atom_name(&name));
                Ok((Atom::new(name).expect("lexed atom"), span))
            }
            other => Err(ParseError::syntax(span, format!("expected an atom, found {other}"))),
        }
    }

    /// Parses `atom { "," atom } "."` and returns the atoms with spans.
    fn atom_list(&mut self) -> Result<Vec<(Atom, SourceSpan)>, ParseError> {
        let mut atoms = vec![self.expect_atom()?];
        loop {
            let (token, span) = self.advance()?;
            match token {
                Token::Comma => atoms.push(self.expect_atom()?),
                Token::Dot => return Ok(atoms),
                other => {
                    return Err(ParseError::syntax(
                        span,
                        format!("expected `,` or `.`, found {other}"),
                    ))
                }
            }
        }
    }
}

/// Parses the textual program format.
///
/// Alphabet resolution: a `#alphabet` directive wins; otherwise
/// `override_alphabet` if given; otherwise the set of mentioned atoms.
pub fn parse_program(
    text: &str,
    override_alphabet: Option<&Alphabet>,
) -> Result<Program, ParseError> {
    let mut parser = ProgramParser::new(text)?;
    let mut declared: Option<Vec<Atom>> = None;
    // (head, body, spans of every atom occurrence in source order)
    let mut clauses: Vec<(Atom, Vec<Atom>)> = Vec::new();
    let mut occurrences: Vec<(Atom, SourceSpan)> = Vec::new();

    loop {
        let (token, span) = parser.advance()?;
        match token {
            Token::Eof => break,
            Token::Directive => {
                let atoms = parser.atom_list()?;
                declared
                    .get_or_insert_with(Vec::new)
                    .extend(atoms.into_iter().map(|(a, _)| a));
            }
            Token::Ident(name) => {
                let head = Atom::new(name).expect("lexed atom");
                occurrences.push((head.clone(), span));
                let (token, span) = parser.advance()?;
                match token {
                    Token::Dot => clauses.push((head, Vec::new())),
                    Token::Turnstile => {
                        let body = parser.atom_list()?;
                        occurrences.extend(body.iter().cloned());
                        clauses.push((head, body.into_iter().map(|(a, _)| a).collect()));
                    }
                    other => {
                        return Err(ParseError::syntax(
                            span,
                            format!("expected `:-` or `.`, found {other}"),
                        ))
                    }
                }
            }
            other => {
                return Err(ParseError::syntax(
                    span,
                    format!("expected a clause or directive, found {other}"),
                ))
            }
        }
    }

    let alphabet = match (declared, override_alphabet) {
        (Some(atoms), _) => Alphabet::new(atoms),
        (None, Some(given)) => given.clone(),
        (None, None) => Alphabet::new(occurrences.iter().map(|(a, _)| a.clone())),
    };

    // Report the first out-of-alphabet occurrence in source order.
    for (atom, span) in &occurrences {
        if !alphabet.contains(atom) {
            return Err(ParseError {
                span: *span,
                kind: ParseErrorKind::AtomNotInAlphabet(atom.clone()),
            });
        }
    }

    let rules = clauses
        .into_iter()
        .map(|(head, body)| Rule::new(head, body));
    Ok(Program::new(alphabet, rules).expect("atoms validated against the alphabet"))
}

/// The canonical serialization; inverse of [`parse_program`].
pub fn serialize_program(program: &Program) -> String {
    program.to_string()
}

/// Formats an interpretation as one fact per line (the `lm` output format).
pub fn format_fact_lines(interpretation: &Interpretation) -> String {
    let lines: Vec<String> = interpretation.iter().map(|a| format!("{a}.")).collect();
    lines.join("\n")
}

// ---------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------

/// Parsed expression with unresolved names; see [`resolve_expr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    /// The schema variable `X`.
    Var(SourceSpan),
    /// A reference to a program bound by name.
    Ref(String, SourceSpan),
    /// An operator application, validated for name and arity.
    Call(String, Vec<ExprAst>, SourceSpan),
}

/// Operator table: name, arity.
const OPERATORS: &[(&str, usize)] = &[
    ("union", 2),
    ("inter", 2),
    ("diff", 2),
    ("compose", 2),
    ("star", 1),
    ("omega", 1),
    ("lm", 1),
    ("bunion", 2),
    ("binter", 2),
    ("bcomp", 1),
    ("bsub", 2),
    ("bsymdiff", 2),
    ("bbsymdiff", 2),
    ("bpow", 1),
    ("bor", 1),
    ("hred", 2),
    ("bred", 2),
    ("facts", 1),
    ("proper", 1),
    ("heads", 1),
];

fn operator_arity(name: &str) -> Option<usize> {
    OPERATORS
        .iter()
        .find(|(op, _)| *op == name)
        .map(|(_, arity)| *arity)
}

struct ExprParser<'a> {
    lexer: Lexer<'a>,
    lookahead: (Token, SourceSpan),
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let lookahead = lexer.next_expr_token()?;
        Ok(ExprParser { lexer, lookahead })
    }

    fn advance(&mut self) -> Result<(Token, SourceSpan), ParseError> {
        let next = self.lexer.next_expr_token()?;
        Ok(std::mem::replace(&mut self.lookahead, next))
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let (token, span) = self.advance()?;
        let name = match token {
            Token::Ident(name) => name,
            other => {
                return Err(ParseError::syntax(
                    span,
                    format!("expected an expression, found {other}"),
                ))
            }
        };
        if self.lookahead.0 != Token::LParen {
            return Ok(if name == "X" {
                ExprAst::Var(span)
            } else {
                ExprAst::Ref(name, span)
            });
        }
        self.advance()?; // consume `(`
        let mut args = vec![self.expr()?];
        loop {
            let (token, argspan) = self.advance()?;
            match token {
                Token::Comma => args.push(self.expr()?),
                Token::RParen => break,
                other => {
                    return Err(ParseError::syntax(
                        argspan,
                        format!("expected `,` or `)`, found {other}"),
                    ))
                }
            }
        }
        let Some(expected) = operator_arity(&name) else {
            return Err(ParseError {
                span,
                kind: ParseErrorKind::UnknownOperator(name),
            });
        };
        if args.len() != expected {
            return Err(ParseError {
                span,
                kind: ParseErrorKind::Arity {
                    op: name,
                    expected,
                    found: args.len(),
                },
            });
        }
        Ok(ExprAst::Call(name, args, span))
    }
}

/// Parses an expression such as `bunion(P, Q)` or `omega(compose(P, star(P)))`.
///
/// Operator names and arities are checked here; name resolution is a
/// separate step ([`resolve_expr`]) so callers can bind programs later. An
/// identifier in call position must be an operator; anywhere else it is a
/// reference (or the schema variable `X`).
pub fn parse_expr(text: &str) -> Result<ExprAst, ParseError> {
    let mut parser = ExprParser::new(text)?;
    let expr = parser.expr()?;
    let (token, span) = parser.advance()?;
    if token != Token::Eof {
        return Err(ParseError::syntax(
            span,
            format!("unexpected trailing {token}"),
        ));
    }
    Ok(expr)
}

/// Substitutes bound programs for references, producing an evaluable
/// [`SchemaExpr`]. `allow_var` controls whether the schema variable `X` may
/// occur (it may in analogy schemas, not in plain `eval` expressions).
pub fn resolve_expr(
    ast: &ExprAst,
    bindings: &BTreeMap<String, Program>,
    allow_var: bool,
) -> Result<SchemaExpr, ParseError> {
    let resolve = |e: &ExprAst| resolve_expr(e, bindings, allow_var);
    Ok(match ast {
        ExprAst::Var(span) => {
            if allow_var {
                SchemaExpr::Var
            } else {
                return Err(ParseError {
                    span: *span,
                    kind: ParseErrorKind::UnboundName("X".to_string()),
                });
            }
        }
        ExprAst::Ref(name, span) => match bindings.get(name) {
            Some(program) => SchemaExpr::Const(program.clone()),
            None => {
                return Err(ParseError {
                    span: *span,
                    kind: ParseErrorKind::UnboundName(name.clone()),
                })
            }
        },
        ExprAst::Call(name, args, _) => {
            let unary = |args: &[ExprAst]| resolve(&args[0]).map(Box::new);
            let pair = |args: &[ExprAst]| -> Result<_, ParseError> {
                Ok((Box::new(resolve(&args[0])?), Box::new(resolve(&args[1])?)))
            };
            match name.as_str() {
                "union" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::Union(l, r)
                }
                "inter" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::Inter(l, r)
                }
                "diff" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::SetDiff(l, r)
                }
                "compose" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::Compose(l, r)
                }
                "bunion" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::BodyUnion(l, r)
                }
                "binter" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::BodyInter(l, r)
                }
                "bsub" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::BodySub(l, r)
                }
                "bsymdiff" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::BodySymdiff(l, r)
                }
                "bbsymdiff" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::BlackSymdiff(l, r)
                }
                "hred" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::HeadReduct(l, r)
                }
                "bred" => {
                    let (l, r) = pair(args)?;
                    SchemaExpr::BodyReduct(l, r)
                }
                "star" => SchemaExpr::Star(unary(args)?),
                // `lm` and `omega` denote the same interpretation.
                "omega" | "lm" => SchemaExpr::Omega(unary(args)?),
                "bcomp" => SchemaExpr::BodyComp(unary(args)?),
                "bpow" => SchemaExpr::BodyPowerset(unary(args)?),
                "bor" => SchemaExpr::BodyOr(unary(args)?),
                "facts" => SchemaExpr::Facts(unary(args)?),
                "proper" => SchemaExpr::Proper(unary(args)?),
                "heads" => SchemaExpr::HeadsAsFacts(unary(args)?),
                _ => unreachable!("operator validated during parsing"),
            }
        }
    })
}

// ---------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonProgram {
    alphabet: Vec<String>,
    rules: Vec<JsonRule>,
}

#[derive(Serialize, Deserialize)]
struct JsonRule {
    head: String,
    body: Vec<String>,
}

#[derive(Serialize)]
struct JsonInterpretation {
    alphabet: Vec<String>,
    members: Vec<String>,
}

#[derive(Serialize)]
struct JsonDecomposition {
    mode: &'static str,
    source: JsonProgram,
    components: Vec<JsonProgram>,
}

fn json_program(program: &Program) -> JsonProgram {
    JsonProgram {
        alphabet: program.alphabet().iter().map(Atom::name).map(str::to_owned).collect(),
        rules: program
            .rules()
            .map(|r| JsonRule {
                head: r.head().name().to_owned(),
                body: r.body().map(Atom::name).map(str::to_owned).collect(),
            })
            .collect(),
    }
}

pub fn program_to_json(program: &Program) -> String {
    serde_json::to_string(&json_program(program)).expect("serialization cannot fail")
}

pub fn interpretation_to_json(interpretation: &Interpretation) -> String {
    let value = JsonInterpretation {
        alphabet: interpretation
            .alphabet()
            .iter()
            .map(Atom::name)
            .map(str::to_owned)
            .collect(),
        members: interpretation.iter().map(Atom::name).map(str::to_owned).collect(),
    };
    serde_json::to_string(&value).expect("serialization cannot fail")
}

pub fn decomposition_to_json(decomposition: &Decomposition) -> String {
    let value = JsonDecomposition {
        mode: match decomposition.mode {
            DecompositionMode::MinimalistExact => "minimalist-exact",
            DecompositionMode::GeneralCover => "general-cover",
        },
        source: json_program(&decomposition.source),
        components: decomposition.components.iter().map(json_program).collect(),
    };
    serde_json::to_string(&value).expect("serialization cannot fail")
}

fn json_schema_error(message: impl Into<String>) -> ParseError {
    ParseError {
        span: SourceSpan {
            line: 1,
            column: 1,
            offset: 0,
        },
        kind: ParseErrorKind::JsonSchema(message.into()),
    }
}

/// Imports a program from the JSON schema
/// `{"alphabet": [...], "rules": [{"head": ..., "body": [...]}]}`.
pub fn program_from_json(text: &str) -> Result<Program, ParseError> {
    let raw: JsonProgram =
        serde_json::from_str(text).map_err(|e| json_schema_error(e.to_string()))?;
    let alphabet =
        Alphabet::from_names(&raw.alphabet).map_err(|e| json_schema_error(e.to_string()))?;
    let mut rules = Vec::with_capacity(raw.rules.len());
    for rule in raw.rules {
        let head = Atom::new(rule.head).map_err(|e| json_schema_error(e.to_string()))?;
        let body = rule
            .body
            .into_iter()
            .map(Atom::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| json_schema_error(e.to_string()))?;
        rules.push(Rule::new(head, body));
    }
    Program::new(alphabet, rules).map_err(|e| json_schema_error(e.to_string()))
}
