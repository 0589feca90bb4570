//! Tri-valued logic in the `{+1, 0, −1}` and `{0, 1, 2}` alphabets, plus
//! multivariate polynomial interpolation of arbitrary m-valued connectives.
//!
//! Any diagonal observable on `n` arguments over `m` letters is a polynomial
//! in the `n` dictators with every exponent at most `m − 1`. The coefficients
//! come from solving the `m^n × m^n` evaluation system on all tuples.

use std::collections::BTreeMap;
use std::fmt;

use crate::basis;
use crate::error::{Error, Result};
use crate::linop::{check_dims, DiagonalOperator};
use crate::observable::{dictator, observable_from_truth_table, Alphabet, LogicalObservable, TruthTable};

/// `A = L_z/ħ = diag(+1, 0, −1)`: false, neutral, true.
pub fn angular_momentum_observable() -> LogicalObservable {
    LogicalObservable::from_diagonal(&[1.0, 0.0, -1.0], Alphabet::angular(), 1).expect("valid observable")
}

/// Projectors onto the `+1`, `0` and `−1` eigenspaces of a `{+1,0,−1}`-valued
/// observable, built from the operator polynomials
/// `Π₊₁ = ½A(A+I)`, `Π₀ = I − A²`, `Π₋₁ = ½A(A−I)`.
pub fn tri_projectors(a: &LogicalObservable) -> Result<(LogicalObservable, LogicalObservable, LogicalObservable)> {
    if let Some(&bad) = a.diagonal().iter().find(|&&d| d != 1.0 && d != 0.0 && d != -1.0) {
        return Err(Error::EigenvalueOutOfAlphabet(bad));
    }
    let op = a.op();
    let id = DiagonalOperator::identity(op.dim())?;
    let a2 = op.mul(op)?;
    let plus = op.mul(&op.add(&id)?)?.scale(0.5);
    let zero = id.sub(&a2)?;
    let minus = op.mul(&op.sub(&id)?)?.scale(0.5);
    let wrap = |p: DiagonalOperator| LogicalObservable::new(p.map(|d| d + 0.0), Alphabet::integers(a.m())?, a.arity());
    Ok((wrap(plus)?, wrap(zero)?, wrap(minus)?))
}

/// Two-argument dictators over `{0,1,2}`: `U` reads the left sensor, `V` the right.
pub fn dictators_3() -> (LogicalObservable, LogicalObservable) {
    let t = Alphabet::ternary();
    (dictator(&t, 2, 0).expect("valid dictator"), dictator(&t, 2, 1).expect("valid dictator"))
}

/// `Min` over `{0,1,2}`: `diag(0,0,0,0,1,1,0,1,2)`.
pub fn min3() -> LogicalObservable {
    ternary_binary(|u, v| u.min(v))
}

/// `Max` over `{0,1,2}`: `diag(0,1,2,1,1,2,2,2,2)`.
pub fn max3() -> LogicalObservable {
    ternary_binary(|u, v| u.max(v))
}

fn ternary_binary(f: impl Fn(usize, usize) -> usize) -> LogicalObservable {
    let t = Alphabet::ternary();
    let table = TruthTable::from_fn(t, 2, |x| f(x[0], x[1]) as f64).expect("valid table");
    observable_from_truth_table(&table)
}

/// Observable of an m-valued truth table. Same construction as the two-valued case.
pub fn observable_from_truth_table_m(table: &TruthTable) -> LogicalObservable {
    observable_from_truth_table(table)
}

/// Coefficients of a polynomial in `n` dictator variables, keyed by exponent
/// tuple. Exponents never exceed `m − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialExpansion {
    m: usize,
    n: usize,
    coefficients: BTreeMap<Vec<usize>, f64>,
}

impl PolynomialExpansion {
    pub fn new(m: usize, n: usize, coefficients: BTreeMap<Vec<usize>, f64>) -> Result<Self> {
        for exps in coefficients.keys() {
            if exps.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: exps.len() });
            }
            if let Some(&e) = exps.iter().find(|&&e| e >= m) {
                return Err(Error::IndexOutOfRange { index: e, dim: m });
            }
        }
        Ok(Self { m, n, coefficients })
    }

    /// The constant polynomial.
    pub fn constant(m: usize, n: usize, c: f64) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(vec![0; n], c);
        Self { m, n, coefficients }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Nonzero coefficients by exponent tuple.
    pub fn coefficients(&self) -> &BTreeMap<Vec<usize>, f64> {
        &self.coefficients
    }

    pub fn coefficient(&self, exponents: &[usize]) -> f64 {
        self.coefficients.get(exponents).copied().unwrap_or(0.0)
    }

    /// Value at a point given by the variables' values.
    pub fn evaluate_at(&self, point: &[f64]) -> f64 {
        self.coefficients.iter().map(|(exps, c)| c * monomial(point, exps)).sum()
    }

    /// Human-readable form with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        DisplayPoly { poly: self, names }
    }
}

struct DisplayPoly<'a> {
    poly: &'a PolynomialExpansion,
    names: &'a [&'a str],
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (exps, &c) in &self.poly.coefficients {
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    let name = self.names.get(k).copied().unwrap_or("x");
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            match (vars.is_empty(), mag == 1.0) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn monomial(point: &[f64], exps: &[usize]) -> f64 {
    point.iter().zip(exps).map(|(&x, &e)| x.powi(e as i32)).product()
}

/// Coefficients below this magnitude are dropped from solved expansions.
const COEFF_EPS: f64 = 1e-12;

/// Expands `f` as a polynomial in its argument dictators by solving the
/// evaluation system at every alphabet tuple.
pub fn interpolate_polynomial(f: &LogicalObservable) -> Result<PolynomialExpansion> {
    let m = f.m();
    let n = f.arity();
    let dim = f.dim();
    let letters = f.alphabet().letters();

    // rows: input tuples; columns: exponent tuples, both in basis order
    let points: Vec<Vec<f64>> = basis::tuples(m, n).map(|t| t.iter().map(|&d| letters[d]).collect()).collect();
    let exponents: Vec<Vec<usize>> = basis::tuples(m, n).collect();
    let mut system: Vec<Vec<f64>> = points.iter().map(|p| exponents.iter().map(|e| monomial(p, e)).collect()).collect();
    let mut rhs = f.diagonal().to_vec();
    let solution = solve_dense(&mut system, &mut rhs)?;
    debug_assert_eq!(solution.len(), dim);

    let coefficients = exponents.into_iter().zip(solution).filter(|(_, c)| c.abs() > COEFF_EPS).collect();
    PolynomialExpansion::new(m, n, coefficients)
}

/// Gaussian elimination with partial pivoting. Consumes the system in place.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("nonempty range");
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::SingularSystem);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Substitutes diagonal operators for the variables, with entrywise powers and
/// products.
pub fn evaluate_polynomial(p: &PolynomialExpansion, dictators: &[&LogicalObservable]) -> Result<DiagonalOperator> {
    check_dims(p.arity(), dictators.len())?;
    let dim = dictators.first().map(|d| d.dim()).ok_or(Error::EmptyDimension)?;
    for d in dictators {
        check_dims(dim, d.dim())?;
    }
    let diagonal = (0..dim)
        .map(|i| {
            let point: Vec<f64> = dictators.iter().map(|d| d.diagonal()[i]).collect();
            p.evaluate_at(&point)
        })
        .collect();
    DiagonalOperator::new(diagonal)
}
