use super::entry::Entry;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Constraint a family of matrices is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Each matrix independently: nonnegative entries, columns summing to one.
    ColumnStochastic,
    /// Each matrix independently: `U^dagger U = I`.
    Unitary,
    /// The whole sequence is one Kraus collection: `sum E^dagger E = I`.
    Admissible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemberCheck {
    /// Index of the matrix in the input sequence (always 0 for admissible collections).
    pub index: usize,
    /// Largest constraint violation, rounded to `f64`.
    pub violation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub kind: FamilyKind,
    pub members: Vec<MemberCheck>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.members.iter().all(|m| m.pass)
    }

    pub fn max_violation(&self) -> f64 {
        self.members.iter().map(|m| m.violation).fold(0.0, f64::max)
    }

    /// Index of the first failing member, if any.
    pub fn first_failure(&self) -> Option<usize> {
        self.members.iter().find(|m| !m.pass).map(|m| m.index)
    }
}

/// Measures how far each matrix (or the whole collection) is from satisfying `kind`.
///
/// Exact backends require `tol == 0` and pass only on exact satisfaction;
/// tiny nonzero deviations are never rounded away.
pub fn validate_family<T: Entry>(
    kind: FamilyKind,
    matrices: &[Matrix<T>],
    tol: f64,
) -> Result<ValidationReport> {
    if matrices.is_empty() {
        return Err(Error::EmptyInput("validate_family needs at least one matrix"));
    }
    if T::EXACT && tol != 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::Domain(format!("tolerance must be nonnegative, got {tol}")));
    }
    let members = match kind {
        FamilyKind::ColumnStochastic => matrices
            .iter()
            .enumerate()
            .map(|(index, m)| {
                let (violation, exact_ok) = stochastic_violation(m);
                MemberCheck { index, violation, pass: judge::<T>(violation, exact_ok, tol) }
            })
            .collect(),
        FamilyKind::Unitary => matrices
            .iter()
            .enumerate()
            .map(|(index, m)| {
                if !m.is_square() {
                    return MemberCheck { index, violation: f64::INFINITY, pass: false };
                }
                let gram = m.adjoint().dot(m);
                let (violation, exact_ok) = identity_deviation(&gram);
                MemberCheck { index, violation, pass: judge::<T>(violation, exact_ok, tol) }
            })
            .collect(),
        FamilyKind::Admissible => {
            let n = matrices[0].cols();
            if matrices.iter().any(|m| m.cols() != n) {
                return Err(Error::DimensionMismatch(
                    "Kraus elements must share a column dimension".into(),
                ));
            }
            let mut sum = Matrix::<T>::zeros(n, n);
            for m in matrices {
                sum = sum.add(&m.adjoint().dot(m));
            }
            let (violation, exact_ok) = identity_deviation(&sum);
            vec![MemberCheck { index: 0, violation, pass: judge::<T>(violation, exact_ok, tol) }]
        }
    };
    Ok(ValidationReport { kind, members })
}

fn judge<T: Entry>(violation: f64, exact_ok: bool, tol: f64) -> bool {
    if T::EXACT {
        exact_ok
    } else {
        violation <= tol
    }
}

fn identity_deviation<T: Entry>(m: &Matrix<T>) -> (f64, bool) {
    let mut violation = 0.0f64;
    let mut exact_ok = true;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let target = if i == j { T::one() } else { T::zero() };
            let d = m.get(i, j).clone() - target;
            if !d.is_zero() {
                exact_ok = false;
                violation = violation.max(d.magnitude());
            }
        }
    }
    (violation, exact_ok)
}

fn stochastic_violation<T: Entry>(m: &Matrix<T>) -> (f64, bool) {
    let mut violation = 0.0f64;
    let mut exact_ok = m.is_square();
    if !m.is_square() {
        violation = f64::INFINITY;
    }
    for j in 0..m.cols() {
        let mut sum = T::zero();
        for i in 0..m.rows() {
            let x = m.get(i, j);
            if let Some(neg) = x.negativity() {
                exact_ok = false;
                violation = violation.max(neg);
            }
            sum = sum + x.clone();
        }
        let d = sum - T::one();
        if !d.is_zero() {
            exact_ok = false;
            violation = violation.max(d.magnitude());
        }
    }
    (violation, exact_ok)
}
