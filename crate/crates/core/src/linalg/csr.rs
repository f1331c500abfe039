use crate::scalar::Scalar;

use super::dense::DenseMatrix;

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn from_parts(
        rows: usize,
        cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<T>,
    ) -> Option<Self> {
        let ok = indptr.len() == rows + 1
            && indptr.first() == Some(&0)
            && indptr.windows(2).all(|w| w[0] <= w[1])
            && indptr[rows] == indices.len()
            && indices.len() == values.len()
            && indices.iter().all(|&c| c < cols);
        ok.then_some(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    /// Build from per-row `(column, value)` lists.
    pub fn from_rows(cols: usize, rows: impl IntoIterator<Item = Vec<(usize, T)>>) -> Self {
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            for (c, v) in row {
                assert!(c < cols, "column out of range");
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Self {
            rows: indptr.len() - 1,
            cols,
            indptr,
            indices,
            values,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "csr matvec dimension");
        (0..self.rows)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    /// `A^T y`.
    pub fn transpose_matvec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.rows, "csr transpose matvec dimension");
        let mut out = vec![T::zero(); self.cols];
        for (r, &yr) in y.iter().enumerate() {
            for (c, v) in self.row(r) {
                out[c] = out[c] + v * yr;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                m.set(r, c, m.get(r, c) + v);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_and_transpose_agree_with_dense() {
        let a = CsrMatrix::from_rows(3, vec![vec![(0, 1.0), (2, -1.0)], vec![(1, 2.0)]]);
        let d = a.to_dense();
        let x = [1.0, 2.0, 3.0];
        assert_eq!(a.matvec(&x), d.matvec(&x));
        assert_eq!(a.transpose_matvec(&[1.0, 1.0]), d.transpose().matvec(&[1.0, 1.0]));
        assert!(CsrMatrix::<f64>::from_parts(1, 1, vec![0, 2], vec![0], vec![1.0]).is_none());
    }
}
