//! Numeric kernels: exact rational and complex matrices, Kronecker products,
//! family validation, orthonormal extension and unitary completion.

mod entry;
mod matrix;
mod orthonormal;
mod scalar;
mod validate;

pub use entry::{ratio, Entry, C64};
pub use matrix::{inner, norm, CMatrix, Matrix, RMatrix, SparseColumns};
pub use orthonormal::{orthonormal_extend, unitary_complete, OrthonormalExtension, ORTHO_TOL};
pub use scalar::{DynMatrix, Scalar};
pub use validate::{validate_family, FamilyKind, MemberCheck, ValidationReport};

/// Default tolerance for float validation of machine invariants.
pub const VALIDATION_TOL: f64 = 1e-9;

/// `a (x) b` for runtime-typed matrices.
pub fn kron(a: &DynMatrix, b: &DynMatrix) -> crate::Result<DynMatrix> {
    a.kron(b)
}
