//! Basis index arithmetic for `n` arguments over an `m`-letter alphabet.
//!
//! Index of the tuple `(x_0, …, x_{n-1})` is `Σ_k x_k · m^(n-1-k)`: the leftmost
//! argument is the most significant digit.

use crate::error::{Error, Result};

/// Largest basis dimension accepted anywhere in the crate (3 letters, 4 arguments).
pub const MAX_DIM: usize = 81;

/// `m^n`, or `None` on overflow.
pub fn dimension(m: usize, n: usize) -> Option<usize> {
    m.checked_pow(u32::try_from(n).ok()?)
}

/// Basis index of a tuple of letter positions.
pub fn encode(m: usize, digits: &[usize]) -> Result<usize> {
    let mut index = 0usize;
    for &d in digits {
        if d >= m {
            return Err(Error::IndexOutOfRange { index: d, dim: m });
        }
        index = index * m + d;
    }
    Ok(index)
}

/// Letter positions of basis index `index`, most significant first.
pub fn decode(m: usize, n: usize, mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for slot in digits.iter_mut().rev() {
        *slot = index % m;
        index /= m;
    }
    digits
}

/// All tuples in basis order.
pub fn tuples(m: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let dim = dimension(m, n).unwrap_or(0);
    (0..dim).map(move |i| decode(m, n, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for m in 2..=3 {
            for n in 1..=4 {
                for (i, t) in tuples(m, n).enumerate() {
                    assert_eq!(encode(m, &t).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn leftmost_most_significant() {
        assert_eq!(decode(2, 2, 2), vec![1, 0]);
        assert_eq!(encode(3, &[1, 2]).unwrap(), 5);
        assert!(encode(2, &[2]).is_err());
    }
}
