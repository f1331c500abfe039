use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameShape, NormalFormGame};
use crate::linalg::{symmetric_pinv, CsrMatrix, DenseMatrix};
use crate::scalar::Scalar;

use super::graph::{fiber_bases, Flow, PotentialFunction, ResponseGraph};

/// Default profile ceiling: admits 3 players x 12 actions, 4 players x 7
/// actions and 35 x 35.
pub const DEFAULT_MAX_PROFILES: usize = 2401;

/// Guard on the dense profile-by-profile pseudo-inverse held by the
/// operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShapeLimits {
    pub max_profiles: usize,
    /// Skip the ceiling entirely.
    pub allow_large: bool,
}

impl Default for ShapeLimits {
    fn default() -> Self {
        Self {
            max_profiles: DEFAULT_MAX_PROFILES,
            allow_large: false,
        }
    }
}

impl ShapeLimits {
    pub fn check(&self, shape: &GameShape) -> Result<()> {
        if self.allow_large || shape.total_profiles() <= self.max_profiles {
            return Ok(());
        }
        let bytes = (shape.total_profiles() as f64).powi(2) * 8.0;
        Err(Error::ShapeTooLarge {
            shape: shape.label(),
            reason: format!(
                "{} profiles exceeds the limit of {} (dense Laplacian inverse would take {:.1} MiB); \
                 raise the limit or allow large shapes",
                shape.total_profiles(),
                self.max_profiles,
                bytes / (1024.0 * 1024.0)
            ),
        })
    }
}

/// Precomputed operators for one game shape.
///
/// The potential-flow projection is never stored densely; it is applied as
/// `grad * L^+ * grad^T` with `L = grad^T grad` the response-graph Laplacian.
/// Use [`projection_matrix`](Self::projection_matrix) to materialize it.
#[derive(Debug)]
pub struct DecompositionOperators<T> {
    graph: ResponseGraph,
    laplacian_pinv: DenseMatrix<T>,
    laplacian_rank: usize,
    fiber_pinv: OnceLock<Vec<DenseMatrix<T>>>,
}

impl<T: Scalar> DecompositionOperators<T> {
    pub fn build(shape: &GameShape) -> Result<Self> {
        Self::build_with_limits(shape, ShapeLimits::default())
    }

    pub fn build_with_limits(shape: &GameShape, limits: ShapeLimits) -> Result<Self> {
        limits.check(shape)?;
        let graph = ResponseGraph::new(shape);
        let lap = laplacian(&graph);
        let p = symmetric_pinv(&lap)?;
        let expected_rank = graph.num_nodes() - 1;
        if p.rank != expected_rank {
            return Err(Error::Pseudoinverse(format!(
                "Laplacian of {} has numerical rank {} (expected {expected_rank}); \
                 largest eigenvalue {:e}, smallest kept {:e}",
                shape.label(),
                p.rank,
                p.largest,
                p.smallest_kept
            )));
        }
        Ok(Self {
            graph,
            laplacian_pinv: p.pinv,
            laplacian_rank: p.rank,
            fiber_pinv: OnceLock::new(),
        })
    }

    pub(crate) fn from_parts(graph: ResponseGraph, laplacian_pinv: DenseMatrix<T>) -> Self {
        let rank = graph.num_nodes() - 1;
        Self {
            graph,
            laplacian_pinv,
            laplacian_rank: rank,
            fiber_pinv: OnceLock::new(),
        }
    }

    pub fn shape(&self) -> &GameShape {
        self.graph.shape()
    }

    pub fn graph(&self) -> &ResponseGraph {
        &self.graph
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn laplacian_pinv(&self) -> &DenseMatrix<T> {
        &self.laplacian_pinv
    }

    pub fn laplacian_rank(&self) -> usize {
        self.laplacian_rank
    }

    pub fn gradient_matrix(&self) -> CsrMatrix<T> {
        self.graph.gradient_matrix()
    }

    pub fn deviation_matrix(&self) -> CsrMatrix<T> {
        self.graph.deviation_matrix()
    }

    pub fn deviation_flow(&self, g: &NormalFormGame<T>) -> Result<Flow<T>> {
        self.graph.deviation_flow(g)
    }

    /// Minimum-norm potential whose gradient is closest to `flow`.
    pub fn potential_of(&self, flow: &Flow<T>) -> PotentialFunction<T> {
        let div = self.graph.gradient_adjoint(&flow.values);
        PotentialFunction::new(self.laplacian_pinv.matvec(&div))
    }

    /// Orthogonal projection onto gradient flows.
    pub fn project_potential(&self, flow: &Flow<T>) -> Flow<T> {
        let phi = self.potential_of(flow);
        self.graph.gradient(&phi.values)
    }

    /// Number of entries a dense projection matrix would hold.
    pub fn projection_entries(&self) -> u128 {
        (self.num_edges() as u128).pow(2)
    }

    /// Dense `edges x edges` projection matrix.
    pub fn projection_matrix(&self) -> DenseMatrix<T> {
        let grad = self.graph.gradient_matrix::<T>().to_dense();
        let mut pi = grad
            .matmul(&self.laplacian_pinv)
            .matmul(&grad.transpose());
        pi.symmetrize();
        pi
    }

    /// Pseudo-inverse of the complete-graph Laplacian on each player's fiber.
    fn fiber_pinv(&self) -> &[DenseMatrix<T>] {
        self.fiber_pinv.get_or_init(|| {
            self.shape()
                .actions()
                .iter()
                .map(|&m| {
                    let lap = DenseMatrix::from_fn(m, m, |r, c| {
                        if r == c {
                            T::of_usize(m - 1)
                        } else {
                            -T::one()
                        }
                    });
                    symmetric_pinv(&lap)
                        .expect("complete-graph Laplacian is well conditioned")
                        .pinv
                })
                .collect()
        })
    }

    /// `D^+ f`, player-major over `players * profiles`.
    pub fn deviation_pinv_apply(&self, flow: &Flow<T>) -> Vec<T> {
        assert_eq!(flow.len(), self.num_edges(), "flow length");
        let shape = self.shape();
        let a = shape.total_profiles();
        let mut out = vec![T::zero(); shape.num_players() * a];
        let mut gathered = Vec::new();
        for (i, p) in self.fiber_pinv().iter().enumerate() {
            let y = self.graph.deviation_adjoint_player(&flow.values, i);
            let m = shape.num_actions(i);
            let stride = shape.stride(i);
            for base in fiber_bases(shape, i) {
                gathered.clear();
                gathered.extend((0..m).map(|k| y[base + k * stride]));
                let z = p.matvec(&gathered);
                for (k, v) in z.into_iter().enumerate() {
                    out[i * a + base + k * stride] = v;
                }
            }
        }
        out
    }

    /// Dense `(players * profiles) x edges` matrix of `D^+`.
    pub fn deviation_pinv_matrix(&self) -> DenseMatrix<T> {
        let e = self.num_edges();
        let rows = self.shape().num_players() * self.shape().total_profiles();
        let mut out = DenseMatrix::zeros(rows, e);
        let mut unit = Flow::zeros(e);
        for c in 0..e {
            unit.values[c] = T::one();
            for (r, v) in self.deviation_pinv_apply(&unit).into_iter().enumerate() {
                out.set(r, c, v);
            }
            unit.values[c] = T::zero();
        }
        out
    }
}

/// Dense response-graph Laplacian `grad^T grad`.
pub(crate) fn laplacian<T: Scalar>(graph: &ResponseGraph) -> DenseMatrix<T> {
    let n = graph.num_nodes();
    let degree: usize = graph.shape().actions().iter().map(|m| m - 1).sum();
    let mut lap = DenseMatrix::zeros(n, n);
    for v in 0..n {
        lap.set(v, v, T::of_usize(degree));
    }
    for e in graph.edges() {
        lap.set(e.source, e.target, -T::one());
        lap.set(e.target, e.source, -T::one());
    }
    lap
}
