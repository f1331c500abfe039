//! Independent oracles shared by the integration tests. Nothing here calls
//! into the decomposition code; flows and Laplacians are rebuilt from the
//! edge list and checked with nalgebra.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use potlab::econ::EconKind;
use potlab::game::{GameShape, NormalFormGame, PureProfile};
use potlab::hodge::ResponseGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SHAPES: [&[usize]; 5] = [&[2, 2], &[2, 3], &[3, 3], &[2, 2, 2], &[3, 3, 3]];

pub fn shape(a: &[usize]) -> GameShape {
    GameShape::new(a.to_vec()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_game(shape: &GameShape, rng: &mut ChaCha8Rng) -> NormalFormGame<f64> {
    let a = shape.total_profiles();
    let payoffs = (0..shape.num_players()).map(|_| uniform_vec(rng, a)).collect();
    NormalFormGame::new(shape.clone(), payoffs).unwrap()
}

/// Payoffs that depend only on the opponents' actions.
pub fn non_strategic_game(shape: &GameShape, rng: &mut ChaCha8Rng) -> NormalFormGame<f64> {
    let a = shape.total_profiles();
    let payoffs = (0..shape.num_players())
        .map(|i| {
            let base = uniform_vec(rng, a);
            (0..a).map(|p| base[shape.with_action(p, i, 0)]).collect()
        })
        .collect();
    NormalFormGame::new(shape.clone(), payoffs).unwrap()
}

/// `u_i(a) = phi(a) + c_i(a_-i)`.
pub fn potential_game(shape: &GameShape, rng: &mut ChaCha8Rng) -> (Vec<f64>, NormalFormGame<f64>) {
    let phi = uniform_vec(rng, shape.total_profiles());
    let offsets = non_strategic_game(shape, rng);
    let payoffs = (0..shape.num_players())
        .map(|i| phi.iter().zip(offsets.payoffs(i)).map(|(a, b)| a + b).collect())
        .collect();
    (phi, NormalFormGame::new(shape.clone(), payoffs).unwrap())
}

/// Deviation flow straight from the definition.
pub fn deviation_flow(graph: &ResponseGraph, g: &NormalFormGame<f64>) -> Vec<f64> {
    graph
        .edges()
        .iter()
        .map(|e| g.payoff(e.player, e.target) - g.payoff(e.player, e.source))
        .collect()
}

pub fn gradient_dense(graph: &ResponseGraph) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(graph.num_edges(), graph.num_nodes());
    for (k, e) in graph.edges().iter().enumerate() {
        m[(k, e.target)] = 1.0;
        m[(k, e.source)] = -1.0;
    }
    m
}

/// Orthogonal projection onto the column space of the gradient via SVD.
pub fn projection_oracle(graph: &ResponseGraph) -> DMatrix<f64> {
    let grad = gradient_dense(graph);
    let pinv = grad.clone().pseudo_inverse(1e-10).unwrap();
    &grad * pinv
}

/// Least-squares residual of `grad phi = flow`.
pub fn gradient_residual(graph: &ResponseGraph, flow: &[f64]) -> Vec<f64> {
    let grad = gradient_dense(graph);
    let f = DVector::from_column_slice(flow);
    let svd = grad.clone().svd(true, true);
    let phi = svd.solve(&f, 1e-10).unwrap();
    (f - grad * phi).iter().copied().collect()
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Pseudo-inverse of the Hamming-graph Laplacian from its spectral
/// decomposition: `sum over nonempty player sets S of Q_S / sum_{i in S} m_i`,
/// where `Q_S` is the tensor product of centering maps on `S` and averaging
/// maps elsewhere.
pub fn laplacian_pinv_spectral(shape: &GameShape) -> DMatrix<f64> {
    let n = shape.num_players();
    let a = shape.total_profiles();
    let mut out = DMatrix::zeros(a, a);
    for mask in 1u32..(1 << n) {
        let mut q = DMatrix::from_element(1, 1, 1.0);
        let mut weight = 0.0;
        for i in 0..n {
            let m = shape.num_actions(i);
            let avg = DMatrix::from_element(m, m, 1.0 / m as f64);
            let factor = if mask & (1 << i) != 0 {
                weight += m as f64;
                DMatrix::identity(m, m) - avg
            } else {
                avg
            };
            q = kron(&q, &factor);
        }
        out += q / weight;
    }
    out
}

/// Game whose deviation flow is exactly `flow`, rebuilt fiber by fiber with
/// zero-mean payoffs on every own-action fiber. `flow` must be a gradient on
/// each fiber.
pub fn game_from_flow(graph: &ResponseGraph, flow: &[f64]) -> NormalFormGame<f64> {
    let shape = graph.shape();
    let a = shape.total_profiles();
    let mut payoffs = vec![vec![0.0; a]; shape.num_players()];
    for (k, e) in graph.edges().iter().enumerate() {
        let m = shape.num_actions(e.player) as f64;
        payoffs[e.player][e.target] += flow[k] / m;
        payoffs[e.player][e.source] -= flow[k] / m;
    }
    NormalFormGame::new(shape.clone(), payoffs).unwrap()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Naive scan: a profile is an equilibrium when no player has a better own
/// action, strict when every other own action is worse.
pub fn naive_equilibria(g: &NormalFormGame<f64>) -> (Vec<PureProfile>, Vec<PureProfile>) {
    let s = g.shape();
    let (m0, m1) = (s.num_actions(0), s.num_actions(1));
    let u = |i: usize, a: usize, b: usize| g.payoff(i, s.index_of(&[a, b]).unwrap());
    let (mut weak, mut strict) = (Vec::new(), Vec::new());
    for a in 0..m0 {
        for b in 0..m1 {
            let row_ok = (0..m0).all(|k| u(0, k, b) <= u(0, a, b));
            let col_ok = (0..m1).all(|k| u(1, a, k) <= u(1, a, b));
            if row_ok && col_ok {
                weak.push(PureProfile(vec![a, b]));
                let row_strict = (0..m0).filter(|&k| k != a).all(|k| u(0, k, b) < u(0, a, b));
                let col_strict = (0..m1).filter(|&k| k != b).all(|k| u(1, a, k) < u(1, a, b));
                if row_strict && col_strict {
                    strict.push(PureProfile(vec![a, b]));
                }
            }
        }
    }
    (weak, strict)
}

/// Ex-post payoff written out from the auction rules.
pub fn rule_payoff(kind: EconKind, bids: &[f64], values: &[f64], i: usize) -> f64 {
    let n = bids.len();
    if kind == EconKind::Tullock {
        let total: f64 = bids.iter().sum();
        return if total == 0.0 {
            values[i] / n as f64
        } else {
            values[i] * bids[i] / total - bids[i]
        };
    }
    let top = bids.iter().cloned().fold(f64::MIN, f64::max);
    let winners = bids.iter().filter(|&&b| b == top).count();
    let share = if bids[i] == top { 1.0 / winners as f64 } else { 0.0 };
    let other = (0..n).filter(|&j| j != i).map(|j| bids[j]).fold(f64::MIN, f64::max);
    match kind {
        EconKind::Fpsb => share * (values[i] - bids[i]),
        EconKind::Spsb => share * (values[i] - other),
        EconKind::AllPay => share * values[i] - bids[i],
        EconKind::WarOfAttrition => share * (values[i] - other) - (1.0 - share) * bids[i],
        EconKind::Tullock => unreachable!(),
    }
}

/// All nondecreasing maps from `v` types to `a` actions, lexicographic.
pub fn monotone_maps(v: usize, a: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for code in 0..a.pow(v as u32) {
        let map: Vec<usize> = (0..v).rev().map(|k| (code / a.pow(k as u32)) % a).collect();
        if map.windows(2).all(|w| w[0] <= w[1]) {
            out.push(map);
        }
    }
    out
}
