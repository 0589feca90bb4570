//! Propositional and multivalued formula language.
//!
//! ```text
//! equiv   := implies ( "<->" implies )*
//! implies := or ( "->" implies )?                      right-associative
//! or      := xor ( ( "|" | "max" | "nor" ) xor )*
//! xor     := and ( "^" and )*
//! and     := unary ( ( "&" | "min" | "nand" ) unary )*
//! unary   := "!" unary | atom
//! atom    := ident | number | "(" equiv ")" | ( "min" | "max" ) "(" equiv "," equiv ")"
//! ```
//!
//! Formulas compile to diagonal observables by exhaustive classical evaluation.

use std::fmt;

use thiserror::Error;

use crate::basis::{self, MAX_DIM};
use crate::linop::DiagonalOperator;
use crate::observable::{Alphabet, LogicalObservable};

/// Most distinct variables a formula may use.
pub const MAX_VARIABLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Xor,
    Nand,
    Nor,
    Implies,
    Equiv,
    Min,
    Max,
}

impl BinaryOp {
    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Equiv => 1,
            BinaryOp::Implies => 2,
            BinaryOp::Or | BinaryOp::Max | BinaryOp::Nor => 3,
            BinaryOp::Xor => 4,
            BinaryOp::And | BinaryOp::Min | BinaryOp::Nand => 5,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::And => "&",
            BinaryOp::Or => "|",
            BinaryOp::Xor => "^",
            BinaryOp::Nand => "nand",
            BinaryOp::Nor => "nor",
            BinaryOp::Implies => "->",
            BinaryOp::Equiv => "<->",
            BinaryOp::Min => "min",
            BinaryOp::Max => "max",
        }
    }

    fn boolean_only(self) -> bool {
        matches!(self, BinaryOp::Xor | BinaryOp::Implies | BinaryOp::Equiv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Const(u32),
    Not(Box<Formula>),
    Binary(BinaryOp, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Self {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn binary(op: BinaryOp, lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Distinct variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Formula::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Formula::Const(_) => {}
            Formula::Not(inner) => inner.collect_vars(out),
            Formula::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Evaluates with integer letters `0..m`, looking variables up by name.
    pub fn eval_with(&self, m: u32, lookup: &dyn Fn(&str) -> Option<u32>) -> Result<u32, FormulaError> {
        let top = m - 1;
        Ok(match self {
            Formula::Var(v) => lookup(v).ok_or_else(|| FormulaError::UnboundVariable(v.clone()))?,
            Formula::Const(c) => {
                if *c >= m {
                    return Err(FormulaError::ConstantOutOfAlphabet { value: *c, m });
                }
                *c
            }
            Formula::Not(inner) => top - inner.eval_with(m, lookup)?,
            Formula::Binary(op, l, r) => {
                if m > 2 && op.boolean_only() {
                    return Err(FormulaError::BooleanOnly { op: op.symbol(), m });
                }
                let a = l.eval_with(m, lookup)?;
                let b = r.eval_with(m, lookup)?;
                match op {
                    BinaryOp::And | BinaryOp::Min => a.min(b),
                    BinaryOp::Or | BinaryOp::Max => a.max(b),
                    BinaryOp::Nand => top - a.min(b),
                    BinaryOp::Nor => top - a.max(b),
                    BinaryOp::Xor => u32::from(a != b),
                    BinaryOp::Implies => (1 - a).max(b),
                    BinaryOp::Equiv => u32::from(a == b),
                }
            }
        })
    }
}

/// Classical value of `ast` with `assignment[k]` bound to the `k`-th variable
/// in order of first appearance.
pub fn eval_classical(ast: &Formula, assignment: &[u32], m: u32) -> Result<u32, FormulaError> {
    if m < 2 {
        return Err(FormulaError::AlphabetTooSmall(m));
    }
    let vars = ast.variables();
    if assignment.len() != vars.len() {
        return Err(FormulaError::ArityMismatch { expected: vars.len(), found: assignment.len() });
    }
    if let Some(&bad) = assignment.iter().find(|&&x| x >= m) {
        return Err(FormulaError::ConstantOutOfAlphabet { value: bad, m });
    }
    let lookup = |name: &str| vars.iter().position(|v| v == name).map(|k| assignment[k]);
    ast.eval_with(m, &lookup)
}

/// Observable over `{0, …, m−1}` whose eigenvalue on each interpretation is
/// the formula's classical value. Variables are ordered by first appearance.
pub fn compile(ast: &Formula, m: u32) -> Result<LogicalObservable, FormulaError> {
    let vars = ast.variables();
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    compile_with_variables(ast, m, &names)
}

/// As [`compile`], with an explicit argument order. `variables` must cover
/// every variable of `ast` and may name extra, unused arguments.
pub fn compile_with_variables(ast: &Formula, m: u32, variables: &[&str]) -> Result<LogicalObservable, FormulaError> {
    if m < 2 {
        return Err(FormulaError::AlphabetTooSmall(m));
    }
    if let Some(missing) = ast.variables().into_iter().find(|v| !variables.contains(&v.as_str())) {
        return Err(FormulaError::UnboundVariable(missing));
    }
    let n = variables.len();
    if n == 0 {
        return Err(FormulaError::NoVariables);
    }
    let mm = m as usize;
    match basis::dimension(mm, n) {
        Some(dim) if n <= MAX_VARIABLES && dim <= MAX_DIM => {}
        _ => return Err(FormulaError::TooLarge { m, n }),
    }
    let diagonal = basis::tuples(mm, n)
        .map(|tuple| {
            let lookup = |name: &str| variables.iter().position(|v| *v == name).map(|k| tuple[k] as u32);
            ast.eval_with(m, &lookup).map(f64::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let op = DiagonalOperator::new(diagonal).expect("nonempty");
    let alphabet = Alphabet::integers(mm).expect("m ≥ 2");
    Ok(LogicalObservable::new(op, alphabet, n).expect("values are letters"))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("constant {value} is not a letter of the {m}-valued alphabet")]
    ConstantOutOfAlphabet { value: u32, m: u32 },
    #[error("`{op}` is only defined for two-valued logic (m = {m})")]
    BooleanOnly { op: &'static str, m: u32 },
    #[error("{m}^{n} interpretations exceed the limit of {MAX_DIM} (at most {MAX_VARIABLES} variables)")]
    TooLarge { m: u32, n: usize },
    #[error("alphabet size {0} is below 2")]
    AlphabetTooSmall(u32),
    #[error("formula has no variables")]
    NoVariables,
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: found {found}, expected one of: {}", expected.join(", "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u32),
    Bang,
    Amp,
    Caret,
    Pipe,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Comma,
    Min,
    Max,
    Nand,
    Nor,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Number(n) => write!(f, "constant `{n}`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DoubleArrow => write!(f, "`<->`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Min => write!(f, "`min`"),
            Tok::Max => write!(f, "`max`"),
            Tok::Nand => write!(f, "`nand`"),
            Tok::Nor => write!(f, "`nor`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let next = |k: usize| chars.get(i + k).copied();
        let (tok, len) = match c {
            '!' => (Tok::Bang, 1),
            '&' => (Tok::Amp, 1),
            '^' => (Tok::Caret, 1),
            '|' => (Tok::Pipe, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '-' if next(1) == Some('>') => (Tok::Arrow, 2),
            '<' if next(1) == Some('-') && next(2) == Some('>') => (Tok::DoubleArrow, 3),
            c if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let digits: String = chars[i..i + len].iter().collect();
                let value = digits.parse().map_err(|_| ParseError {
                    line,
                    column,
                    found: format!("constant `{digits}`"),
                    expected: vec!["a constant below 2^32".into()],
                })?;
                (Tok::Number(value), len)
            }
            c if c.is_ascii_alphabetic() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').count();
                let word: String = chars[i..i + len].iter().collect();
                let tok = match word.as_str() {
                    "min" => Tok::Min,
                    "max" => Tok::Max,
                    "nand" => Tok::Nand,
                    "nor" => Tok::Nor,
                    _ => Tok::Ident(word),
                };
                (tok, len)
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    found: format!("character `{other}`"),
                    expected: vec!["an operator, identifier, constant or parenthesis".into()],
                })
            }
        };
        out.push(Spanned { tok, line, column });
        i += len;
        column += len;
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            found: here.tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn equiv(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::binary(BinaryOp::Equiv, lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::binary(BinaryOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.xor()?;
        loop {
            let op = match self.peek() {
                Tok::Pipe => BinaryOp::Or,
                Tok::Max if *self.peek2() != Tok::LParen => BinaryOp::Max,
                Tok::Nor => BinaryOp::Nor,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.xor()?;
            lhs = Formula::binary(op, lhs, rhs);
        }
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::binary(BinaryOp::Xor, lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Amp => BinaryOp::And,
                Tok::Min if *self.peek2() != Tok::LParen => BinaryOp::Min,
                Tok::Nand => BinaryOp::Nand,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const ATOM: &[&str] = &["identifier", "constant", "`!`", "`(`", "`min(`", "`max(`"];
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::Number(n) => {
                self.bump();
                Ok(Formula::Const(n))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.equiv()?;
                self.expect(Tok::RParen, &["`)`", "binary operator"])?;
                Ok(inner)
            }
            tok @ (Tok::Min | Tok::Max) => {
                self.bump();
                let op = if tok == Tok::Min { BinaryOp::Min } else { BinaryOp::Max };
                self.expect(Tok::LParen, &["`(`"])?;
                let a = self.equiv()?;
                self.expect(Tok::Comma, &["`,`", "binary operator"])?;
                let b = self.equiv()?;
                self.expect(Tok::RParen, &["`)`", "binary operator"])?;
                Ok(Formula::binary(op, a, b))
            }
            _ => Err(self.error(ATOM)),
        }
    }
}

/// Parses a formula; see the module documentation for the grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.equiv()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["binary operator", "end of input"]));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

const NOT_PREC: u8 = 6;
const ATOM_PREC: u8 = 7;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Var(_) | Formula::Const(_) => ATOM_PREC,
        Formula::Binary(BinaryOp::Min | BinaryOp::Max, ..) => ATOM_PREC,
        Formula::Not(_) => NOT_PREC,
        Formula::Binary(op, ..) => op.precedence(),
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
    if prec(node) < min_prec {
        write!(f, "(")?;
        write!(f, "{node}")?;
        write!(f, ")")
    } else {
        write!(f, "{node}")
    }
}

/// Minimal-parenthesis form that parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Const(c) => write!(f, "{c}"),
            Formula::Not(inner) => {
                write!(f, "!")?;
                write_at(f, inner, NOT_PREC)
            }
            Formula::Binary(op @ (BinaryOp::Min | BinaryOp::Max), l, r) => {
                write!(f, "{}({l}, {r})", op.symbol())
            }
            Formula::Binary(op, l, r) => {
                let p = op.precedence();
                let (lp, rp) = if *op == BinaryOp::Implies { (p + 1, p) } else { (p, p + 1) };
                write_at(f, l, lp)?;
                write!(f, " {} ", op.symbol())?;
                write_at(f, r, rp)
            }
        }
    }
}
