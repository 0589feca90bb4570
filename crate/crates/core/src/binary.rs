//! Two-valued connectives: the sixteen binary observables, the isometric
//! `{+1, −1}` form, and connective counting.

use crate::error::{Error, Result};
use crate::linop::{DiagonalOperator, IDENTITY_TOL};
use crate::observable::{dictator, Alphabet, LogicalObservable};

/// Canonical names for two-argument connectives, keyed by their diagonal read
/// in basis order `(0,0), (0,1), (1,0), (1,1)`.
pub const BINARY_NAMES: [(&str, &str); 16] = [
    ("0000", "FALSE"),
    ("0001", "AND"),
    ("0010", "A_AND_NOT_B"),
    ("0011", "A"),
    ("0100", "NOT_A_AND_B"),
    ("0101", "B"),
    ("0110", "XOR"),
    ("0111", "OR"),
    ("1000", "NOR"),
    ("1001", "EQUIV"),
    ("1010", "NOT_B"),
    ("1011", "IMPLIED_BY"),
    ("1100", "NOT_A"),
    ("1101", "IMPLIES"),
    ("1110", "NAND"),
    ("1111", "TRUE"),
];

/// Name of a four-bit diagonal, e.g. `"0001"` → `"AND"`.
pub fn connective_name(bits: &str) -> Option<&'static str> {
    BINARY_NAMES.iter().find(|(b, _)| *b == bits).map(|(_, n)| *n)
}

/// Bit string for a name (case-insensitive); a four-bit string is accepted as is.
pub fn connective_bits(name: &str) -> Option<&'static str> {
    let upper = name.to_ascii_uppercase();
    BINARY_NAMES.iter().find(|(b, n)| *n == upper || *b == upper).map(|(b, _)| *b)
}

/// Two-argument connective over `{0,1}` from its four-bit diagonal.
pub fn binary_connective(bits: &str) -> Result<LogicalObservable> {
    if bits.len() != 4 {
        return Err(Error::InvalidTruthTable(format!("`{bits}` is not a 4-bit string")));
    }
    let diagonal = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(0.0),
            '1' => Ok(1.0),
            _ => Err(Error::InvalidTruthTable(format!("`{bits}` is not a 4-bit string"))),
        })
        .collect::<Result<Vec<_>>>()?;
    LogicalObservable::from_diagonal(&diagonal, Alphabet::boolean(), 2)
}

/// The named connective, e.g. `AND` or `IMPLIES`.
pub fn named_connective(name: &str) -> Option<LogicalObservable> {
    connective_bits(name).map(|b| binary_connective(b).expect("table entries are valid"))
}

/// All 16 two-argument connectives, ordered by their diagonal read as a
/// binary number.
pub fn all_binary_connectives() -> Vec<LogicalObservable> {
    (0u8..16)
        .map(|k| {
            let bits = format!("{k:04b}");
            binary_connective(&bits).expect("four bits")
        })
        .collect()
}

/// The four one-argument connectives: contradiction, identity, negation, tautology.
pub fn unary_connectives() -> [LogicalObservable; 4] {
    let b = Alphabet::boolean;
    [
        LogicalObservable::from_diagonal(&[0., 0.], b(), 1).unwrap(),
        LogicalObservable::from_diagonal(&[0., 1.], b(), 1).unwrap(),
        LogicalObservable::from_diagonal(&[1., 0.], b(), 1).unwrap(),
        LogicalObservable::from_diagonal(&[1., 1.], b(), 1).unwrap(),
    ]
}

/// `G = I − 2F`: false (0) ↦ +1, true (1) ↦ −1.
pub fn to_isometric(f: &LogicalObservable) -> Result<LogicalObservable> {
    if !f.is_projective() || !f.alphabet().same_set(&Alphabet::boolean()) {
        return Err(Error::NotProjective);
    }
    let op = f.op().map(|d| 1.0 - 2.0 * d);
    LogicalObservable::new(op, Alphabet::isometric(), f.arity())
}

/// `F = (I − G)/2`, the inverse of [`to_isometric`].
pub fn from_isometric(g: &LogicalObservable) -> Result<LogicalObservable> {
    if let Some(&bad) = g.diagonal().iter().find(|&&d| (d - 1.0).abs() > IDENTITY_TOL && (d + 1.0).abs() > IDENTITY_TOL)
    {
        return Err(Error::EigenvalueOutOfAlphabet(bad));
    }
    let diagonal = g.diagonal().iter().map(|&d| if d > 0.0 { 0.0 } else { 1.0 }).collect();
    let dim = g.dim();
    let arity = arity_for(2, dim).ok_or(Error::DimensionMismatch { expected: 1 << g.arity(), found: dim })?;
    LogicalObservable::new(DiagonalOperator::new(diagonal)?, Alphabet::boolean(), arity)
}

fn arity_for(m: usize, dim: usize) -> Option<usize> {
    let mut n = 0;
    let mut d = 1;
    while d < dim {
        d *= m;
        n += 1;
    }
    (d == dim && n > 0).then_some(n)
}

/// `Z = diag(1,1,−1,−1)`: isometric dictator on the first of two arguments.
pub fn z_dictator() -> LogicalObservable {
    dictator(&Alphabet::isometric(), 2, 0).expect("valid dictator")
}

/// `Y = diag(1,−1,1,−1)`: isometric dictator on the second of two arguments.
pub fn y_dictator() -> LogicalObservable {
    dictator(&Alphabet::isometric(), 2, 1).expect("valid dictator")
}

/// Number of connectives `m^(m^n)` on `n` arguments over `m` values.
pub fn connective_count(m: u32, n: u32) -> Result<u128> {
    if m < 2 || n < 1 {
        return Err(Error::InvalidAlphabet(format!("need m ≥ 2 and n ≥ 1, got m={m}, n={n}")));
    }
    let overflow = Error::CountOverflow { m, n };
    let tuples = (m as u128).checked_pow(n).ok_or(overflow.clone())?;
    let exponent = u32::try_from(tuples).map_err(|_| overflow.clone())?;
    (m as u128).checked_pow(exponent).ok_or(overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::dictator;

    fn diag(d: &[f64]) -> Vec<f64> {
        d.to_vec()
    }

    #[test]
    fn sixteen_distinct_idempotent() {
        let all = all_binary_connectives();
        assert_eq!(all.len(), 16);
        let mut bits: Vec<_> = all.iter().map(|f| f.bit_string().unwrap()).collect();
        bits.sort();
        bits.dedup();
        assert_eq!(bits.len(), 16);
        assert!(all.iter().all(|f| f.is_projective()));
        let has = |d: &[f64]| all.iter().any(|f| f.diagonal() == d);
        assert!(has(&[0., 0., 0., 1.]));
        assert!(has(&[0., 1., 1., 1.]));
        assert!(has(&[0., 0., 0., 0.]));
        assert!(has(&[1., 1., 1., 1.]));
    }

    #[test]
    fn names_resolve() {
        assert_eq!(connective_bits("and"), Some("0001"));
        assert_eq!(connective_bits("IMPLIES"), Some("1101"));
        assert_eq!(connective_bits("0110"), Some("0110"));
        assert_eq!(connective_name("1001"), Some("EQUIV"));
        assert!(connective_bits("FOO").is_none());
        assert!(binary_connective("012").is_err());
    }

    #[test]
    fn isometric_examples() {
        let b = Alphabet::boolean();
        let a = dictator(&b, 2, 0).unwrap();
        assert_eq!(to_isometric(&a).unwrap().diagonal(), &diag(&[1., 1., -1., -1.])[..]);
        assert_eq!(to_isometric(&a).unwrap(), z_dictator());
        let bb = dictator(&b, 2, 1).unwrap();
        assert_eq!(to_isometric(&bb).unwrap(), y_dictator());
        let zero = binary_connective("0000").unwrap();
        assert_eq!(to_isometric(&zero).unwrap().diagonal(), &[1., 1., 1., 1.]);

        assert_eq!(from_isometric(&z_dictator()).unwrap().diagonal(), &[0., 0., 1., 1.]);
        let id4 = LogicalObservable::from_diagonal(&[1.; 4], Alphabet::isometric(), 2).unwrap();
        assert_eq!(from_isometric(&id4).unwrap().diagonal(), &[0.; 4]);
        assert_eq!(from_isometric(&id4.negated()).unwrap().diagonal(), &[1.; 4]);
    }

    #[test]
    fn isometric_errors() {
        let two = LogicalObservable::from_diagonal(&[0., 1., 2.], Alphabet::ternary(), 1).unwrap();
        assert_eq!(to_isometric(&two), Err(Error::NotProjective));
        assert!(matches!(from_isometric(&two), Err(Error::EigenvalueOutOfAlphabet(_))));
    }

    #[test]
    fn isometric_round_trip() {
        for f in all_binary_connectives() {
            let g = to_isometric(&f).unwrap();
            assert_eq!(from_isometric(&g).unwrap(), f);
            assert_eq!(to_isometric(&from_isometric(&g).unwrap()).unwrap(), g);
        }
    }

    #[test]
    fn counts() {
        assert_eq!(connective_count(2, 2).unwrap(), 16);
        assert_eq!(connective_count(3, 2).unwrap(), 19683);
        assert_eq!(connective_count(2, 1).unwrap(), 4);
        assert_eq!(connective_count(2, 6).unwrap(), 1u128 << 64);
        assert!(matches!(connective_count(2, 7), Err(Error::CountOverflow { .. })));
        assert!(connective_count(1, 2).is_err());
    }
}
