//! Embedding of arbitrary square matrices into columns of unitaries.
//!
//! [`orthonormal_extend`] pads every member `A_s` of a family with an upper
//! unitriangular block `B_s` and a diagonal block `C_s` such that the columns
//! of `stack(A_s, B_s, C_s) / l` are orthonormal for one shared constant `l`.
//! [`unitary_complete`] then fills in the remaining columns.

use super::entry::C64;
use super::matrix::{inner, norm, CMatrix};
use crate::error::{Error, Result};

/// Internal tolerance for orthogonality solves.
pub const ORTHO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalExtension {
    /// Upper-triangular, unit-diagonal blocks, one per family member.
    pub b: Vec<CMatrix>,
    /// Diagonal blocks, one per family member.
    pub c: Vec<CMatrix>,
    /// Shared scaling constant.
    pub l: f64,
}

impl OrthonormalExtension {
    /// The `(3m) x m` matrix `stack(A_s, B_s, C_s) / l` for member `s`.
    pub fn isometry(&self, family: &[CMatrix], s: usize) -> CMatrix {
        let stacked = CMatrix::vstack(&[&family[s], &self.b[s], &self.c[s]])
            .expect("extension blocks share the family's dimension");
        stacked.scale(&C64::new(1.0 / self.l, 0.0))
    }

    /// Recomputes the `C` blocks for a larger constant `l' >= l`.
    ///
    /// Any `l'` at least the template's `l` still yields orthonormal columns.
    pub fn rescaled(&self, family: &[CMatrix], l: f64) -> Result<Self> {
        if l.is_nan() || l < self.l {
            return Err(Error::Domain(format!(
                "scaling constant {l} is below the template minimum {}",
                self.l
            )));
        }
        let c = family
            .iter()
            .zip(&self.b)
            .map(|(a, b)| diagonal_fill(a, b, l))
            .collect();
        Ok(Self { b: self.b.clone(), c, l })
    }
}

fn stacked_column_norm_sq(a: &CMatrix, b: &CMatrix, j: usize) -> f64 {
    let col_a = a.column(j);
    let col_b = b.column(j);
    col_a.iter().chain(&col_b).map(|z| z.norm_sqr()).sum()
}

fn diagonal_fill(a: &CMatrix, b: &CMatrix, l: f64) -> CMatrix {
    let m = a.cols();
    let mut c = CMatrix::zeros(m, m);
    for j in 0..m {
        let gap = l * l - stacked_column_norm_sq(a, b, j);
        // rounding residue of l * l is not a real gap
        let gap = if gap <= 8.0 * f64::EPSILON * l * l { 0.0 } else { gap };
        c.set(j, j, C64::new(gap.sqrt(), 0.0));
    }
    c
}

/// Builds the `B`, `C` blocks and the constant `l` for a family of `m x m` matrices.
///
/// `b[i][j]` (for `i < j`) is solved in increasing `(i, j)` order so that
/// columns `i` and `j` of `stack(A, B)` become orthogonal under the
/// conjugate-linear inner product.
pub fn orthonormal_extend(family: &[CMatrix]) -> Result<OrthonormalExtension> {
    let first = family.first().ok_or(Error::EmptyInput("orthonormal_extend needs a family"))?;
    let m = first.rows();
    if family.iter().any(|a| a.rows() != m || a.cols() != m) {
        return Err(Error::DimensionMismatch(format!(
            "orthonormal_extend needs square matrices of one dimension {m}"
        )));
    }
    let mut bs = Vec::with_capacity(family.len());
    let mut l = 0.0f64;
    for a in family {
        let cols: Vec<Vec<C64>> = (0..m).map(|j| a.column(j)).collect();
        let mut b = CMatrix::identity(m);
        for i in 0..m {
            for j in i + 1..m {
                let mut acc = inner(&cols[i], &cols[j]);
                for k in 0..i {
                    acc += b.get(k, i).conj() * b.get(k, j);
                }
                b.set(i, j, -acc);
            }
        }
        for j in 0..m {
            l = l.max(stacked_column_norm_sq(a, &b, j).sqrt());
        }
        bs.push(b);
    }
    let c = family.iter().zip(&bs).map(|(a, b)| diagonal_fill(a, b, l)).collect();
    Ok(OrthonormalExtension { b: bs, c, l })
}

/// Extends an isometry (orthonormal columns) to a unitary.
///
/// The first `m` columns of the result are `iso` bit-for-bit. Remaining
/// columns come from the standard basis, scanned in index order,
/// orthogonalized (twice) against everything accepted so far; candidates
/// with residual norm `<= tol` are discarded.
pub fn unitary_complete(iso: &CMatrix, tol: f64) -> Result<CMatrix> {
    let (rows, m) = (iso.rows(), iso.cols());
    if m > rows {
        return Err(Error::DimensionMismatch(format!(
            "isometry has more columns ({m}) than rows ({rows})"
        )));
    }
    let gram = iso.adjoint().dot(iso);
    let violation = gram.max_abs_diff(&CMatrix::identity(m));
    if violation > tol {
        return Err(Error::NotOrthonormal { violation, tol });
    }

    let mut basis: Vec<Vec<C64>> = (0..m).map(|j| iso.column(j)).collect();
    let needed = rows - m;
    let mut found = 0;
    for k in 0..rows {
        if found == needed {
            break;
        }
        let mut v = CMatrix::basis(rows, k);
        for _ in 0..2 {
            for q in &basis {
                let proj = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let r = norm(&v);
        if r <= tol {
            continue;
        }
        for vi in &mut v {
            *vi /= r;
        }
        basis.push(v);
        found += 1;
    }
    if found < needed {
        return Err(Error::Degenerate { found, needed });
    }

    let u = CMatrix::from_fn(rows, rows, |i, j| basis[j][i]);
    let violation = u.adjoint().dot(&u).max_abs_diff(&CMatrix::identity(rows));
    if violation > 10.0 * tol {
        return Err(Error::NotOrthonormal { violation, tol: 10.0 * tol });
    }
    Ok(u)
}
