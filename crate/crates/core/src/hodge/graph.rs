use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameShape, NormalFormGame};
use crate::linalg::CsrMatrix;
use crate::scalar::{norm2, Scalar};

/// One unilateral deviation: `player` switches from a lower to a higher action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub player: usize,
    pub source: usize,
    pub target: usize,
}

/// Nodes are pure profiles, edges are unilateral deviations.
///
/// Edges are ordered by player, then by opponent profile (in profile-index
/// order with the player's own digit removed), then by action pair `(k, l)`
/// with `k < l` lexicographically. Every edge points from the lower to the
/// higher action of the deviating player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseGraph {
    shape: GameShape,
    edges: Vec<Edge>,
    player_offsets: Vec<usize>,
}

impl ResponseGraph {
    pub fn new(shape: &GameShape) -> Self {
        let n = shape.num_players();
        let mut edges = Vec::with_capacity(shape.total_edges());
        let mut player_offsets = Vec::with_capacity(n + 1);
        for i in 0..n {
            player_offsets.push(edges.len());
            let m = shape.num_actions(i);
            let stride = shape.stride(i);
            for base in fiber_bases(shape, i) {
                for k in 0..m {
                    for l in k + 1..m {
                        edges.push(Edge {
                            player: i,
                            source: base + k * stride,
                            target: base + l * stride,
                        });
                    }
                }
            }
        }
        player_offsets.push(edges.len());
        debug_assert_eq!(edges.len(), shape.total_edges());
        Self {
            shape: shape.clone(),
            edges,
            player_offsets,
        }
    }

    pub fn shape(&self) -> &GameShape {
        &self.shape
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.shape.total_profiles()
    }

    /// Range of edge indices belonging to `player`.
    pub fn player_edges(&self, player: usize) -> std::ops::Range<usize> {
        self.player_offsets[player]..self.player_offsets[player + 1]
    }

    /// `(Du)_e = u_i(target) - u_i(source)` for the deviating player `i`.
    pub fn deviation_flow<T: Scalar>(&self, g: &NormalFormGame<T>) -> Result<Flow<T>> {
        check_shape(&self.shape, g.shape())?;
        Ok(Flow::new(
            self.edges
                .iter()
                .map(|e| g.payoff(e.player, e.target) - g.payoff(e.player, e.source))
                .collect(),
        ))
    }

    /// Gradient of a node function, `phi(target) - phi(source)` per edge.
    pub fn gradient<T: Scalar>(&self, phi: &[T]) -> Flow<T> {
        assert_eq!(phi.len(), self.num_nodes(), "potential length");
        Flow::new(
            self.edges
                .iter()
                .map(|e| phi[e.target] - phi[e.source])
                .collect(),
        )
    }

    /// Adjoint of [`gradient`](Self::gradient): net inflow per node.
    pub fn gradient_adjoint<T: Scalar>(&self, flow: &[T]) -> Vec<T> {
        assert_eq!(flow.len(), self.num_edges(), "flow length");
        let mut out = vec![T::zero(); self.num_nodes()];
        for (e, &f) in self.edges.iter().zip(flow) {
            out[e.target] = out[e.target] + f;
            out[e.source] = out[e.source] - f;
        }
        out
    }

    /// Adjoint of the deviation map restricted to `player`'s edges, as a node
    /// vector for that player.
    pub fn deviation_adjoint_player<T: Scalar>(&self, flow: &[T], player: usize) -> Vec<T> {
        assert_eq!(flow.len(), self.num_edges(), "flow length");
        let mut out = vec![T::zero(); self.num_nodes()];
        let range = self.player_edges(player);
        for (e, &f) in self.edges[range.clone()].iter().zip(&flow[range]) {
            out[e.target] = out[e.target] + f;
            out[e.source] = out[e.source] - f;
        }
        out
    }

    /// Sparse gradient map, `edges x profiles`.
    pub fn gradient_matrix<T: Scalar>(&self) -> CsrMatrix<T> {
        CsrMatrix::from_rows(
            self.num_nodes(),
            self.edges
                .iter()
                .map(|e| vec![(e.source, -T::one()), (e.target, T::one())]),
        )
    }

    /// Sparse deviation map, `edges x (players * profiles)`, columns
    /// player-major.
    pub fn deviation_matrix<T: Scalar>(&self) -> CsrMatrix<T> {
        let a = self.num_nodes();
        CsrMatrix::from_rows(
            self.shape.num_players() * a,
            self.edges.iter().map(|e| {
                vec![
                    (e.player * a + e.source, -T::one()),
                    (e.player * a + e.target, T::one()),
                ]
            }),
        )
    }
}

pub fn build_response_graph(shape: &GameShape) -> ResponseGraph {
    ResponseGraph::new(shape)
}

/// Profiles where `player` plays action 0, in profile-index order. Each one
/// starts the fiber of profiles that differ only in that player's action.
pub(crate) fn fiber_bases(shape: &GameShape, player: usize) -> impl Iterator<Item = usize> + '_ {
    let stride = shape.stride(player);
    let block = stride * shape.num_actions(player);
    (0..shape.total_profiles())
        .step_by(block)
        .flat_map(move |hi| (0..stride).map(move |lo| hi + lo))
}

pub(crate) fn check_shape(expected: &GameShape, found: &GameShape) -> Result<()> {
    if expected != found {
        return Err(Error::ShapeMismatch {
            expected: expected.label(),
            found: found.label(),
        });
    }
    Ok(())
}

/// Real value per response-graph edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Flow<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> Flow<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![T::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> T {
        norm2(&self.values)
    }

    pub fn dot(&self, other: &Self) -> T {
        crate::scalar::dot(&self.values, &other.values)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(self.values.iter().map(|&a| a * c).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|x| x.is_finite())
    }
}

/// Real value per pure profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PotentialFunction<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> PotentialFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
