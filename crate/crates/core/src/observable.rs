//! Truth tables and the diagonal logical observables built from them.

use std::fmt;

use crate::basis;
use crate::error::{Error, Result};
use crate::linop::{DiagonalOperator, IDENTITY_TOL};

/// Ordered, distinct truth values. The order fixes which letter each basis
/// digit stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    letters: Vec<f64>,
}

impl Alphabet {
    pub fn new(letters: Vec<f64>) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::InvalidAlphabet("need at least two letters".into()));
        }
        for (i, a) in letters.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::InvalidAlphabet(format!("letter {a} is not finite")));
            }
            if letters[..i].iter().any(|b| (a - b).abs() <= IDENTITY_TOL) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {a}")));
            }
        }
        Ok(Self { letters })
    }

    /// `{0, 1}`: false, true.
    pub fn boolean() -> Self {
        Self { letters: vec![0.0, 1.0] }
    }

    /// `{+1, −1}`: false ≡ +1, true ≡ −1.
    pub fn isometric() -> Self {
        Self { letters: vec![1.0, -1.0] }
    }

    /// `{0, 1, 2}`: no light, weak-level light, high-level light.
    pub fn ternary() -> Self {
        Self { letters: vec![0.0, 1.0, 2.0] }
    }

    /// `{+1, 0, −1}`: false, neutral, true (eigenvalues of `L_z/ħ`).
    pub fn angular() -> Self {
        Self { letters: vec![1.0, 0.0, -1.0] }
    }

    /// `{0, 1, …, m−1}`.
    pub fn integers(m: usize) -> Result<Self> {
        Self::new((0..m).map(|k| k as f64).collect())
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[f64] {
        &self.letters
    }

    pub fn letter(&self, position: usize) -> f64 {
        self.letters[position]
    }

    /// Position of `value` in the alphabet, within [`IDENTITY_TOL`].
    pub fn position(&self, value: f64) -> Option<usize> {
        self.letters.iter().position(|&l| (l - value).abs() <= IDENTITY_TOL)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.position(value).is_some()
    }

    /// Same letters regardless of order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.size() == other.size() && self.letters.iter().all(|&l| other.contains(l))
    }
}

/// Total function from `n`-tuples over an `m`-letter alphabet to alphabet
/// values, listed in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    alphabet: Alphabet,
    arity: usize,
    values: Vec<f64>,
}

impl TruthTable {
    pub fn new(alphabet: Alphabet, arity: usize, values: Vec<f64>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidTruthTable("arity must be at least 1".into()));
        }
        let dim = basis::dimension(alphabet.size(), arity)
            .ok_or_else(|| Error::InvalidTruthTable("dimension overflows".into()))?;
        if values.len() != dim {
            return Err(Error::InvalidTruthTable(format!("expected {dim} values, found {}", values.len())));
        }
        if let Some(&bad) = values.iter().find(|&&v| !alphabet.contains(v)) {
            return Err(Error::EigenvalueOutOfAlphabet(bad));
        }
        Ok(Self { alphabet, arity, values })
    }

    /// Tabulates `f` over every tuple of letter positions, in basis order.
    pub fn from_fn(alphabet: Alphabet, arity: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let values = basis::tuples(alphabet.size(), arity).map(|t| f(&t)).collect();
        Self::new(alphabet, arity, values)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn m(&self) -> usize {
        self.alphabet.size()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at a tuple of letter positions.
    pub fn value_at(&self, digits: &[usize]) -> Result<f64> {
        if digits.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: digits.len() });
        }
        Ok(self.values[basis::encode(self.m(), digits)?])
    }
}

/// Diagonal observable whose eigenvalues are the truth values of a connective
/// and whose eigenvectors are the interpretations.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalObservable {
    op: DiagonalOperator,
    alphabet: Alphabet,
    arity: usize,
}

impl LogicalObservable {
    /// Checks `dim = m^n` and that every eigenvalue is an alphabet letter.
    pub fn new(op: DiagonalOperator, alphabet: Alphabet, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidTruthTable("arity must be at least 1".into()));
        }
        let dim = basis::dimension(alphabet.size(), arity).ok_or(Error::EmptyDimension)?;
        if op.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: op.dim() });
        }
        if let Some(&bad) = op.diagonal().iter().find(|&&d| !alphabet.contains(d)) {
            return Err(Error::EigenvalueOutOfAlphabet(bad));
        }
        Ok(Self { op, alphabet, arity })
    }

    pub fn from_diagonal(diagonal: &[f64], alphabet: Alphabet, arity: usize) -> Result<Self> {
        Self::new(DiagonalOperator::new(diagonal.to_vec())?, alphabet, arity)
    }

    pub fn op(&self) -> &DiagonalOperator {
        &self.op
    }

    pub fn diagonal(&self) -> &[f64] {
        self.op.diagonal()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn m(&self) -> usize {
        self.alphabet.size()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `F² = F`.
    pub fn is_projective(&self) -> bool {
        self.op.is_idempotent()
    }

    /// Eigenvalue on the basis state of a tuple of letter positions.
    pub fn eigenvalue_at(&self, digits: &[usize]) -> Result<f64> {
        if digits.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: digits.len() });
        }
        Ok(self.diagonal()[basis::encode(self.m(), digits)?])
    }

    /// `−F`, with the alphabet negated letter by letter.
    pub fn negated(&self) -> LogicalObservable {
        let letters = self.alphabet.letters().iter().map(|l| -l).collect();
        LogicalObservable { op: self.op.scale(-1.0), alphabet: Alphabet { letters }, arity: self.arity }
    }

    /// Reads the diagonal back as a truth table.
    pub fn truth_table(&self) -> TruthTable {
        TruthTable { alphabet: self.alphabet.clone(), arity: self.arity, values: self.diagonal().to_vec() }
    }

    /// Diagonal as a bit string such as `0001`, when every entry is 0 or 1.
    pub fn bit_string(&self) -> Option<String> {
        self.diagonal()
            .iter()
            .map(|&d| match d {
                0.0 => Some('0'),
                1.0 => Some('1'),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for LogicalObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diag(")?;
        for (i, d) in self.diagonal().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Rank-1 projector `Π_index` on the `m^n`-dimensional interpretation space.
///
/// The eigenvalues 0 and 1 are read in the integer alphabet `{0, …, m−1}`.
pub fn rank1_projector(m: usize, n: usize, index: usize) -> Result<LogicalObservable> {
    let dim = basis::dimension(m, n).ok_or(Error::EmptyDimension)?;
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let mut diagonal = vec![0.0; dim];
    diagonal[index] = 1.0;
    LogicalObservable::new(DiagonalOperator::new(diagonal)?, Alphabet::integers(m)?, n)
}

/// `F = Σ_x f(x)·Π_x`, i.e. the diagonal carries the table in basis order.
pub fn observable_from_truth_table(table: &TruthTable) -> LogicalObservable {
    LogicalObservable {
        op: DiagonalOperator::new(table.values.clone()).expect("tables are nonempty"),
        alphabet: table.alphabet.clone(),
        arity: table.arity,
    }
}

/// Dictator on argument `k`: the eigenvalue is the letter of the `k`-th argument.
pub fn dictator(alphabet: &Alphabet, arity: usize, k: usize) -> Result<LogicalObservable> {
    if k >= arity {
        return Err(Error::IndexOutOfRange { index: k, dim: arity });
    }
    let table = TruthTable::from_fn(alphabet.clone(), arity, |t| alphabet.letter(t[k]))?;
    Ok(observable_from_truth_table(&table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank1_examples() {
        assert_eq!(rank1_projector(2, 1, 1).unwrap().diagonal(), &[0., 1.]);
        assert_eq!(rank1_projector(2, 2, 3).unwrap().diagonal(), &[0., 0., 0., 1.]);
        let p = rank1_projector(3, 1, 1).unwrap();
        assert_eq!(p.diagonal(), &[0., 1., 0.]);
        assert!(p.is_projective());
        assert!(matches!(rank1_projector(2, 2, 4), Err(Error::IndexOutOfRange { index: 4, dim: 4 })));
    }

    #[test]
    fn truth_table_examples() {
        let not = TruthTable::new(Alphabet::boolean(), 1, vec![1., 0.]).unwrap();
        assert_eq!(observable_from_truth_table(&not).diagonal(), &[1., 0.]);
        let and = TruthTable::new(Alphabet::boolean(), 2, vec![0., 0., 0., 1.]).unwrap();
        assert_eq!(observable_from_truth_table(&and).diagonal(), &[0., 0., 0., 1.]);
        let taut = TruthTable::new(Alphabet::boolean(), 1, vec![1., 1.]).unwrap();
        assert_eq!(observable_from_truth_table(&taut).diagonal(), &[1., 1.]);
    }

    #[test]
    fn truth_table_validation() {
        assert!(TruthTable::new(Alphabet::boolean(), 2, vec![0., 1.]).is_err());
        assert!(TruthTable::new(Alphabet::boolean(), 1, vec![0., 2.]).is_err());
        assert!(TruthTable::new(Alphabet::boolean(), 0, vec![0.]).is_err());
        assert!(Alphabet::new(vec![1.0, 1.0]).is_err());
        assert!(Alphabet::new(vec![1.0]).is_err());
    }

    #[test]
    fn dictators() {
        let b = Alphabet::boolean();
        assert_eq!(dictator(&b, 2, 0).unwrap().diagonal(), &[0., 0., 1., 1.]);
        assert_eq!(dictator(&b, 2, 1).unwrap().diagonal(), &[0., 1., 0., 1.]);
        let iso = Alphabet::isometric();
        assert_eq!(dictator(&iso, 2, 0).unwrap().diagonal(), &[1., 1., -1., -1.]);
        assert!(dictator(&b, 2, 2).is_err());
    }

    #[test]
    fn observable_rejects_foreign_eigenvalue() {
        let err = LogicalObservable::from_diagonal(&[0., 3.], Alphabet::boolean(), 1);
        assert_eq!(err, Err(Error::EigenvalueOutOfAlphabet(3.0)));
    }

    #[test]
    fn bit_string_and_display() {
        let f = LogicalObservable::from_diagonal(&[0., 1., 1., 1.], Alphabet::boolean(), 2).unwrap();
        assert_eq!(f.bit_string().as_deref(), Some("0111"));
        assert_eq!(f.to_string(), "diag(0,1,1,1)");
    }
}
