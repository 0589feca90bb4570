//! Fuzzy truth from the Born rule.
//!
//! A scalar degree of truth `μ` becomes the qubit `(√(1−μ), √μ)`, whose mean
//! value on `Π₁` is `μ`. Any projective connective evaluated on a product of
//! such qubits gives the corresponding fuzzy membership.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linop::{expectation, ComplexVector, IDENTITY_TOL};
use crate::observable::LogicalObservable;

/// Bloch angles of a qubit, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitAngles {
    pub theta: f64,
    pub phi: f64,
}

impl QubitAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        use std::f64::consts::PI;
        if !(0.0..=PI).contains(&theta) {
            return Err(out_of_range("theta", theta, 0.0, PI));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(out_of_range("phi", phi, 0.0, 2.0 * PI));
        }
        Ok(Self { theta, phi })
    }

    /// `α = θ/2`.
    pub fn alpha(&self) -> f64 {
        self.theta / 2.0
    }

    /// `β = φ/2`.
    pub fn beta(&self) -> f64 {
        self.phi / 2.0
    }
}

/// Degree of truth in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Membership(f64);

impl Membership {
    /// Accepts values up to [`IDENTITY_TOL`] outside `[0, 1]` and clamps them.
    pub fn new(value: f64) -> Result<Self> {
        if !(-IDENTITY_TOL..=1.0 + IDENTITY_TOL).contains(&value) {
            return Err(out_of_range("membership", value, 0.0, 1.0));
        }
        Ok(Self(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Membership {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Membership> for f64 {
    fn from(m: Membership) -> f64 {
        m.0
    }
}

fn out_of_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Error {
    Error::OutOfRange { what, value, lo, hi }
}

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(out_of_range(what, value, 0.0, 1.0));
    }
    Ok(())
}

/// `|φ⟩ = sin α |0⟩ + e^{iβ} cos α |1⟩` with `α = θ/2`, `β = φ/2`.
pub fn qubit_from_angles(angles: QubitAngles) -> ComplexVector {
    let alpha = angles.alpha();
    let beta = angles.beta();
    let amplitudes = vec![Complex64::new(alpha.sin(), 0.0), Complex64::from_polar(alpha.cos(), beta)];
    ComplexVector::new(amplitudes).expect("two amplitudes")
}

/// Qubit `(√(1−μ), √μ)` whose `Π₁` mean value is `μ`.
pub fn fuzzify(mu: f64) -> Result<ComplexVector> {
    check_unit("mu", mu)?;
    ComplexVector::new(vec![Complex64::new((1.0 - mu).sqrt(), 0.0), Complex64::new(mu.sqrt(), 0.0)])
}

/// Born mean value of a projective observable on the tensor product of
/// `states` (a single joint state is also accepted).
pub fn membership(states: &[ComplexVector], f: &LogicalObservable) -> Result<Membership> {
    if !f.is_projective() {
        return Err(Error::NotProjective);
    }
    let joint = ComplexVector::kron_all(states)?;
    Membership::new(expectation(&joint, f.op())?)
}

/// Mean value of any diagonal observable on the product state, for graded
/// (non-projective) observables such as `Min` or `Max`.
pub fn graded_value(states: &[ComplexVector], f: &LogicalObservable) -> Result<f64> {
    let joint = ComplexVector::kron_all(states)?;
    expectation(&joint, f.op())
}

/// Membership of `a → b` on independent inputs: `1 − μ_a + μ_a·μ_b`.
pub fn implication_membership(mu_a: f64, mu_b: f64) -> Result<Membership> {
    let implies = crate::binary::named_connective("IMPLIES").expect("named connective");
    membership(&[fuzzify(mu_a)?, fuzzify(mu_b)?], &implies)
}

/// Motion decisions, listed by tie-break priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Forwards,
    Left,
    Right,
    Backwards,
}

impl Decision {
    pub const ALL: [Decision; 4] = [Decision::Forwards, Decision::Left, Decision::Right, Decision::Backwards];

    pub fn name(self) -> &'static str {
        match self {
            Decision::Forwards => "forwards",
            Decision::Left => "left",
            Decision::Right => "right",
            Decision::Backwards => "backwards",
        }
    }
}

impl std::str::FromStr for Decision {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Decision::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| format!("unknown decision `{s}`"))
    }
}

/// Decision with the largest membership. Ties go to the earlier entry in
/// [`Decision::ALL`].
pub fn decide(memberships: &[(Decision, Membership)]) -> Result<Decision> {
    memberships
        .iter()
        .min_by(|(da, ma), (db, mb)| mb.0.total_cmp(&ma.0).then(da.cmp(db)))
        .map(|(d, _)| *d)
        .ok_or(Error::NoDecisions)
}
