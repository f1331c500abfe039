use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::dense::DenseMatrix;
use super::eigen::symmetric_eigen;

/// Relative cutoff below which eigenvalues count as zero.
pub const PINV_RTOL: f64 = 1e-10;

/// Pseudo-inverse of a symmetric matrix together with its numerical rank.
#[derive(Debug, Clone)]
pub struct SymmetricPinv<T> {
    pub pinv: DenseMatrix<T>,
    pub rank: usize,
    pub largest: T,
    /// Smallest eigenvalue magnitude that was kept.
    pub smallest_kept: T,
}

/// Moore-Penrose inverse of a symmetric matrix through its eigendecomposition.
///
/// Eigenvalues with magnitude at most `max(1e-10, n * eps) * |lambda|_max` are
/// dropped.
pub fn symmetric_pinv<T: Scalar>(a: &DenseMatrix<T>) -> Result<SymmetricPinv<T>> {
    let n = a.rows();
    let eig = symmetric_eigen(a)?;
    let largest = eig
        .values
        .iter()
        .fold(T::zero(), |m, &v| m.max(v.abs()));
    let rtol = T::of(PINV_RTOL).max(T::of_usize(n) * T::epsilon());
    let cutoff = rtol * largest;
    let kept: Vec<(usize, T)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() > cutoff)
        .map(|(j, &v)| (j, T::one() / v))
        .collect();
    let smallest_kept = kept
        .iter()
        .map(|&(j, _)| eig.values[j].abs())
        .fold(T::infinity(), T::min);
    if kept.iter().any(|(_, inv)| !inv.is_finite()) {
        return Err(Error::Pseudoinverse(format!(
            "non-finite reciprocal eigenvalue (largest {largest:e}, smallest kept {smallest_kept:e})"
        )));
    }

    let vecs = &eig.vectors;
    let mut data = vec![T::zero(); n * n];
    data.par_chunks_mut(n.max(1)).enumerate().for_each(|(r, row)| {
        for &(j, inv) in &kept {
            let coef = vecs.get(j, r) * inv;
            if coef == T::zero() {
                continue;
            }
            for (o, &v) in row.iter_mut().zip(vecs.row(j)) {
                *o = *o + coef * v;
            }
        }
    });
    let mut pinv = DenseMatrix::from_vec(n, n, data);
    pinv.symmetrize();
    Ok(SymmetricPinv {
        pinv,
        rank: kept.len(),
        largest,
        smallest_kept,
    })
}
