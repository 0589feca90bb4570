//! Small dense complex linear algebra over the canonical interpretation basis.
//!
//! Every logical observable in this crate is diagonal in the canonical basis,
//! so operators store only their diagonal. A full Hermitian matrix exists only
//! for density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance for the normalization gate on states.
pub const NORM_TOL: f64 = 1e-9;
/// Lowest eigenvalue accepted for a positive semidefinite density matrix.
pub const PSD_TOL: f64 = 1e-10;

/// Amplitude vector over the canonical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    amplitudes: Vec<Complex64>,
}

impl ComplexVector {
    /// Wraps arbitrary amplitudes. No normalization is checked.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { amplitudes })
    }

    /// Wraps amplitudes that must already form a unit vector.
    pub fn state(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = Self::new(amplitudes)?;
        v.check_normalized()?;
        Ok(v)
    }

    /// Real-amplitude state.
    pub fn state_real(amplitudes: &[f64]) -> Result<Self> {
        Self::state(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Canonical basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    /// Probabilities `|ψ_i|²` over the basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Tensor product `self ⊗ other`; index `i·dim(other) + j`.
    pub fn kron(&self, other: &ComplexVector) -> ComplexVector {
        let amplitudes = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        ComplexVector { amplitudes }
    }

    /// Tensor product of a list of factors, leftmost most significant.
    pub fn kron_all<'a, I>(factors: I) -> Result<ComplexVector>
    where
        I: IntoIterator<Item = &'a ComplexVector>,
    {
        let mut iter = factors.into_iter();
        let first = iter.next().ok_or(Error::EmptyDimension)?.clone();
        Ok(iter.fold(first, |acc, f| acc.kron(f)))
    }
}

/// Real diagonal operator. Off-diagonal entries are zero by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    diagonal: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { diagonal })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn into_diagonal(self) -> Vec<f64> {
        self.diagonal
    }

    /// `d·d = d` entrywise within [`IDENTITY_TOL`].
    pub fn is_idempotent(&self) -> bool {
        self.diagonal.iter().all(|&d| (d * d - d).abs() <= IDENTITY_TOL)
    }

    /// Kronecker product; entry `i·dim(other) + j` holds `a_i·b_j`.
    pub fn kron(&self, other: &DiagonalOperator) -> DiagonalOperator {
        let diagonal = self.diagonal.iter().flat_map(|&a| other.diagonal.iter().map(move |&b| a * b)).collect();
        DiagonalOperator { diagonal }
    }

    /// Operator product, which for diagonals is the entrywise product.
    pub fn mul(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> DiagonalOperator {
        self.map(|d| d * factor)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DiagonalOperator {
        DiagonalOperator { diagonal: self.diagonal.iter().map(|&d| f(d)).collect() }
    }

    fn zip_with(&self, other: &DiagonalOperator, f: impl Fn(f64, f64) -> f64) -> Result<DiagonalOperator> {
        check_dims(self.dim(), other.dim())?;
        Ok(DiagonalOperator { diagonal: self.diagonal.iter().zip(&other.diagonal).map(|(&a, &b)| f(a, b)).collect() })
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    // row-major
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates a row-major `dim×dim` matrix.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        let rho = Self { dim, entries };
        rho.validate()?;
        Ok(rho)
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self::new(dim, entries)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let d = self.get(i, j) - self.get(j, i).conj();
                if d.norm() > IDENTITY_TOL {
                    return Err(Error::InvalidDensity("matrix is not Hermitian".into()));
                }
            }
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > IDENTITY_TOL || trace.im.abs() > IDENTITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {trace}, expected 1")));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Real spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Matrix square `ρ·ρ`, row-major.
    pub fn squared(&self) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out[i * n + j] += a * self.get(k, j);
                }
            }
        }
        out
    }

    /// `ρ² = ρ` entrywise within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.squared().iter().zip(&self.entries).all(|(a, b)| (a - b).norm() <= tol)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `a ⊗ b` for diagonal operators.
pub fn kron(a: &DiagonalOperator, b: &DiagonalOperator) -> DiagonalOperator {
    a.kron(b)
}

/// `ρ = |ψ⟩⟨ψ|`. Rejects states whose norm is off by more than [`NORM_TOL`].
pub fn density_from_state(psi: &ComplexVector) -> Result<DensityMatrix> {
    psi.check_normalized()?;
    let n = psi.dim();
    let amps = psi.amplitudes();
    let entries = (0..n).flat_map(|i| (0..n).map(move |j| amps[i] * amps[j].conj())).collect();
    Ok(DensityMatrix { dim: n, entries })
}

/// Born-rule mean value `⟨ψ|F|ψ⟩ = Σ_i |ψ_i|²·d_i`.
pub fn expectation(psi: &ComplexVector, f: &DiagonalOperator) -> Result<f64> {
    check_dims(f.dim(), psi.dim())?;
    psi.check_normalized()?;
    Ok(psi.amplitudes().iter().zip(f.diagonal()).map(|(a, &d)| a.norm_sqr() * d).sum())
}

/// `Tr(ρ·F) = Σ_i ρ_ii·d_i`.
pub fn expectation_rho(rho: &DensityMatrix, f: &DiagonalOperator) -> Result<f64> {
    check_dims(f.dim(), rho.dim())?;
    Ok(f.diagonal().iter().enumerate().map(|(i, &d)| rho.get(i, i).re * d).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn diag(d: &[f64]) -> DiagonalOperator {
        DiagonalOperator::new(d.to_vec()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&diag(&[0., 1.]), &diag(&[0., 1.])), diag(&[0., 0., 0., 1.]));
        assert_eq!(kron(&diag(&[0., 1.]), &diag(&[1., 1.])), diag(&[0., 0., 1., 1.]));
        assert_eq!(kron(&diag(&[1., 0.]), &diag(&[0., 1.])), diag(&[0., 1., 0., 0.]));
    }

    #[test]
    fn kron_index_layout() {
        let a = diag(&[2., 3., 5.]);
        let b = diag(&[7., 11.]);
        let k = kron(&a, &b);
        assert_eq!(k.dim(), 6);
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(k.diagonal()[i * 2 + j], a.diagonal()[i] * b.diagonal()[j]);
            }
        }
    }

    #[test]
    fn density_examples() {
        let rho = density_from_state(&ComplexVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(rho.entries(), &[c(1.), c(0.), c(0.), c(0.)]);

        let plus = ComplexVector::state_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let rho = density_from_state(&plus).unwrap();
        for e in rho.entries() {
            assert!((e - c(0.5)).norm() < 1e-15);
        }

        let bell = ComplexVector::state_real(&[FRAC_1_SQRT_2, 0., 0., FRAC_1_SQRT_2]).unwrap();
        let rho = density_from_state(&bell).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i == 0 || i == 3) && (j == 0 || j == 3) { 0.5 } else { 0.0 };
                assert!((rho.get(i, j) - c(want)).norm() < 1e-15);
            }
        }
        assert!(rho.is_pure(1e-10));
        assert!((rho.trace() - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn density_rejects_unnormalized() {
        let v = ComplexVector::new(vec![c(1.0), c(1.0)]).unwrap();
        assert!(matches!(density_from_state(&v), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn expectation_examples() {
        let and = diag(&[0., 0., 0., 1.]);
        let e11 = ComplexVector::basis(4, 3).unwrap();
        assert_eq!(expectation(&e11, &and).unwrap(), 1.0);

        let bell = ComplexVector::state_real(&[FRAC_1_SQRT_2, 0., 0., FRAC_1_SQRT_2]).unwrap();
        assert!((expectation(&bell, &and).unwrap() - 0.5).abs() < 1e-15);

        let alpha = PI / 3.0;
        let phi = ComplexVector::state_real(&[alpha.sin(), alpha.cos()]).unwrap();
        assert!((expectation(&phi, &diag(&[0., 1.])).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let e = ComplexVector::basis(2, 0).unwrap();
        assert!(matches!(expectation(&e, &diag(&[0., 0., 0., 1.])), Err(Error::DimensionMismatch { .. })));
        let rho = density_from_state(&e).unwrap();
        assert!(expectation_rho(&rho, &diag(&[1., 0., 0.])).is_err());
    }

    #[test]
    fn expectation_rho_examples() {
        let rho = density_from_state(&ComplexVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(expectation_rho(&rho, &diag(&[0., 1.])).unwrap(), 0.0);

        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(expectation_rho(&mixed, &diag(&[0., 1.])).unwrap(), 0.5);
        assert!(!mixed.is_pure(1e-10));

        // ρ_ii = (0, ½, ½, 0) against d = (1, 0, 0, 1)
        let psi = ComplexVector::state_real(&[0., FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.]).unwrap();
        let rho = density_from_state(&psi).unwrap();
        assert_eq!(expectation_rho(&rho, &diag(&[1., 0., 0., 1.])).unwrap(), 0.0);
    }

    #[test]
    fn density_validation() {
        let not_herm = vec![c(0.5), c(0.1), c(0.0), c(0.5)];
        assert!(DensityMatrix::new(2, not_herm).is_err());
        let bad_trace = vec![c(0.6), c(0.0), c(0.0), c(0.6)];
        assert!(DensityMatrix::new(2, bad_trace).is_err());
        let negative = vec![c(1.5), c(0.0), c(0.0), c(-0.5)];
        assert!(DensityMatrix::new(2, negative).is_err());
        let ok = vec![c(0.5), Complex64::new(0.0, 0.5), Complex64::new(0.0, -0.5), c(0.5)];
        assert!(DensityMatrix::new(2, ok).is_ok());
    }

    #[test]
    fn idempotence_flag() {
        assert!(diag(&[0., 1., 1., 0.]).is_idempotent());
        assert!(!diag(&[0., 2.]).is_idempotent());
    }
}
