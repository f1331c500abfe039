//! Dense and sparse matrices and symmetric pseudo-inverses.

mod csr;
mod dense;
mod eigen;
mod pinv;

pub use csr::CsrMatrix;
pub use dense::DenseMatrix;
pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use pinv::{symmetric_pinv, SymmetricPinv, PINV_RTOL};
