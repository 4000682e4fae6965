use num::BigRational;

use super::entry::{Entry, C64};
use super::matrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};

/// A single probability or amplitude, either exact or complex floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Complex(C64),
}

impl Scalar {
    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Rational(q) => q.to_c64(),
            Scalar::Complex(z) => *z,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Rational(_) => true,
            Scalar::Complex(z) => z.is_finite(),
        }
    }
}

/// A matrix whose scalar backend is only known at runtime (file input, CLI).
#[derive(Clone, Debug, PartialEq)]
pub enum DynMatrix {
    Rational(RMatrix),
    Complex(CMatrix),
}

impl DynMatrix {
    /// Builds a matrix from parsed scalars; all entries must share one variant.
    pub fn from_scalars(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.iter().all(Scalar::is_rational) {
            let data = entries
                .into_iter()
                .map(|s| match s {
                    Scalar::Rational(q) => q,
                    Scalar::Complex(_) => unreachable!(),
                })
                .collect();
            return Ok(DynMatrix::Rational(RMatrix::new(rows, cols, data)?));
        }
        if entries.iter().any(Scalar::is_rational) {
            return Err(Error::VariantMismatch);
        }
        let data: Vec<C64> = entries.iter().map(Scalar::to_c64).collect();
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::Invariant("complex entries must be finite".into()));
        }
        Ok(DynMatrix::Complex(CMatrix::new(rows, cols, data)?))
    }

    pub fn rows(&self) -> usize {
        match self {
            DynMatrix::Rational(m) => m.rows(),
            DynMatrix::Complex(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            DynMatrix::Rational(m) => m.cols(),
            DynMatrix::Complex(m) => m.cols(),
        }
    }

    /// Kronecker product; both operands must use the same backend.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (DynMatrix::Rational(a), DynMatrix::Rational(b)) => Ok(DynMatrix::Rational(a.kron(b))),
            (DynMatrix::Complex(a), DynMatrix::Complex(b)) => Ok(DynMatrix::Complex(a.kron(b))),
            _ => Err(Error::VariantMismatch),
        }
    }

    /// Promotes to the complex backend (rational entries are rounded).
    pub fn into_complex(self) -> CMatrix {
        match self {
            DynMatrix::Rational(m) => m.to_complex(),
            DynMatrix::Complex(m) => m,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::ratio;

    #[test]
    fn mixed_kron_is_rejected() {
        let a = DynMatrix::Rational(RMatrix::identity(2));
        let b = DynMatrix::Complex(CMatrix::identity(2));
        assert_eq!(a.kron(&b), Err(Error::VariantMismatch));
        assert!(a.kron(&a).is_ok());
    }

    #[test]
    fn mixed_entries_are_rejected() {
        let entries = vec![
            Scalar::Rational(ratio(1, 1)),
            Scalar::Complex(C64::new(0.0, 1.0)),
        ];
        assert_eq!(DynMatrix::from_scalars(1, 2, entries), Err(Error::VariantMismatch));
    }

    #[test]
    fn nonfinite_entries_are_rejected() {
        let entries = vec![Scalar::Complex(C64::new(f64::NAN, 0.0))];
        assert!(DynMatrix::from_scalars(1, 1, entries).is_err());
    }
}
