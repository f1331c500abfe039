mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use potlab::econ::{build_econ_game, EconGameSpec, EconKind};
use potlab::game::{standard, NormalFormGame};
use potlab::hodge::{
    alpha_blend, decompose_flows, decompose_payoffs, potentialness, DecompositionOperators,
    PotentialnessOutcome,
};
use proptest::prelude::*;

fn ops(a: &[usize]) -> DecompositionOperators<f64> {
    DecompositionOperators::build(&shape(a)).unwrap()
}

fn to_dmatrix(m: &potlab::linalg::DenseMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

#[test]
fn laplacian_pinv_matches_spectral_closed_form() {
    for a in [&[2, 2][..], &[2, 3], &[3, 3], &[2, 2, 2], &[3, 3, 3], &[2, 3, 4], &[2, 2, 2, 2]] {
        let o = ops(a);
        let oracle = laplacian_pinv_spectral(o.shape());
        let got = to_dmatrix(o.laplacian_pinv());
        let err = (got - &oracle).abs().max();
        assert!(err < 1e-10, "{a:?}: {err}");
        assert_eq!(o.laplacian_rank(), o.shape().total_profiles() - 1);
    }
}

#[test]
fn projection_matches_svd_oracle() {
    for a in [&[2, 2][..], &[2, 3], &[3, 3], &[2, 2, 2]] {
        let o = ops(a);
        let oracle = projection_oracle(o.graph());
        let got = to_dmatrix(&o.projection_matrix());
        let err = (got - oracle).abs().max();
        assert!(err < 1e-10, "{a:?}: {err}");
    }
}

#[test]
fn deviation_flow_matches_definition() {
    let mut r = rng(1);
    for a in SUITE_SHAPES {
        let o = ops(a);
        let g = random_game(o.shape(), &mut r);
        let got = o.deviation_flow(&g).unwrap();
        assert_eq!(got.values, deviation_flow(o.graph(), &g));
    }
}

#[test]
fn projection_symmetric_and_idempotent() {
    for a in SUITE_SHAPES {
        let o = ops(a);
        let pi = to_dmatrix(&o.projection_matrix());
        assert!((&pi - pi.transpose()).abs().max() <= 1e-9, "{a:?}");
        assert!((&pi * &pi - &pi).abs().max() <= 1e-8, "{a:?}");
    }
}

#[test]
fn projection_fixes_gradients_and_kills_their_complement() {
    let mut r = rng(2);
    for a in SUITE_SHAPES {
        let o = ops(a);
        let graph = o.graph();
        for _ in 0..100 {
            let phi = uniform_vec(&mut r, graph.num_nodes());
            let grad = graph.gradient(&phi);
            let proj = o.project_potential(&grad);
            assert!(max_abs_diff(&proj.values, &grad.values) <= 1e-8 * grad.norm().max(1.0));

            let h = gradient_residual(graph, &uniform_vec(&mut r, graph.num_edges()));
            let ph = o.project_potential(&potlab::hodge::Flow::new(h.clone()));
            assert!(ph.norm() <= 1e-8 * norm(&h).max(1.0), "{a:?}");
        }
    }
}

/// The full property suite on 100 random games per shape.
#[test]
fn decomposition_property_suite() {
    for (s, a) in SUITE_SHAPES.iter().enumerate() {
        let o = ops(a);
        let shape = o.shape().clone();
        let graph = o.graph();
        let mut r = rng(100 + s as u64);
        for _ in 0..100 {
            let g = random_game(&shape, &mut r);
            let dec = decompose_payoffs(&o, &g).unwrap();
            let c = dec.components.as_ref().unwrap();
            let u = g.stacked();
            let scale = norm(&u);

            let resum = add(&add(&c.potential.stacked(), &c.harmonic.stacked()), &c.non_strategic.stacked());
            assert!(max_abs_diff(&resum, &u) <= 1e-9 * scale);

            let dn = deviation_flow(graph, &c.non_strategic);
            assert!(norm(&dn) <= 1e-9 * scale);

            let du = deviation_flow(graph, &g);
            let (p, h) = (dec.potential_flow.norm(), dec.harmonic_flow.norm());
            let total = norm(&du).powi(2);
            assert!((p * p + h * h - total).abs() <= 1e-8 * total);
            assert!(dec.potential_flow.dot(&dec.harmonic_flow).abs() <= 1e-8 * total);
            let resplit = add(&dec.potential_flow.values, &dec.harmonic_flow.values);
            assert!(max_abs_diff(&resplit, &du) <= 1e-10 * norm(&du));

            let dp = deviation_flow(graph, &c.potential);
            let dh = deviation_flow(graph, &c.harmonic);
            assert!(max_abs_diff(&dp, &dec.potential_flow.values) <= 1e-8 * norm(&du));
            assert!(max_abs_diff(&dh, &dec.harmonic_flow.values) <= 1e-8 * norm(&du));

            check_component_structure(&c.non_strategic, &c.potential, &c.harmonic, scale);

            let value = dec.potentialness.value().unwrap();
            assert!((0.0..=1.0).contains(&value));
            assert!((value - p / (p + h)).abs() <= 1e-12);
        }
    }
}

fn check_component_structure(
    non_strategic: &NormalFormGame<f64>,
    potential: &NormalFormGame<f64>,
    harmonic: &NormalFormGame<f64>,
    scale: f64,
) {
    let shape = non_strategic.shape();
    for i in 0..shape.num_players() {
        for p in 0..shape.total_profiles() {
            if shape.action_of(p, i) != 0 {
                continue;
            }
            let base = non_strategic.payoff(i, p);
            let mut sums = [0.0; 2];
            for k in 0..shape.num_actions(i) {
                let q = shape.with_action(p, i, k);
                assert!((non_strategic.payoff(i, q) - base).abs() <= 1e-9 * scale);
                sums[0] += potential.payoff(i, q);
                sums[1] += harmonic.payoff(i, q);
            }
            assert!(sums[0].abs() <= 1e-9 * scale && sums[1].abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn constructed_potential_games_score_one() {
    let mut r = rng(3);
    for a in SUITE_SHAPES {
        let o = ops(a);
        for _ in 0..100 {
            let (phi, g) = potential_game(o.shape(), &mut r);
            let dec = decompose_payoffs(&o, &g).unwrap();
            assert!((dec.potentialness.value().unwrap() - 1.0).abs() <= 1e-8);
            let c = dec.components.unwrap();
            assert!(norm(&c.harmonic.stacked()) <= 1e-8 * norm(&g.stacked()));
            // recovered potential differs from phi by a constant
            let rec = o.potential_of(&dec.deviation_flow).values;
            let shift = rec[0] - phi[0];
            let centered: Vec<f64> = rec.iter().map(|x| x - shift).collect();
            assert!(max_abs_diff(&centered, &phi) <= 1e-8);
        }
    }
}

#[test]
fn constructed_harmonic_games_score_zero() {
    let mut r = rng(4);
    for a in SUITE_SHAPES {
        let o = ops(a);
        let graph = o.graph();
        for _ in 0..100 {
            let du = deviation_flow(graph, &random_game(o.shape(), &mut r));
            let harmonic = gradient_residual(graph, &du);
            let g = game_from_flow(graph, &harmonic);
            assert!(max_abs_diff(&deviation_flow(graph, &g), &harmonic) <= 1e-10);
            let p = potentialness(&o, &g).unwrap().value().unwrap();
            assert!(p.abs() <= 1e-8, "{a:?}: {p}");
        }
    }
}

/// Score 1 exactly when `grad phi = Du` is solvable, 0 exactly when the
/// projection vanishes.
#[test]
fn trichotomy_against_least_squares() {
    let mut r = rng(5);
    for a in SUITE_SHAPES {
        let o = ops(a);
        let graph = o.graph();
        for _ in 0..20 {
            let g = random_game(o.shape(), &mut r);
            let du = deviation_flow(graph, &g);
            let residual = norm(&gradient_residual(graph, &du));
            let p = potentialness(&o, &g).unwrap().value().unwrap();
            assert!(residual > 1e-6 && p < 1.0 - 1e-6 && p > 1e-6);
        }
    }
}

#[test]
fn textbook_values() {
    let o = ops(&[2, 2]);
    let p = |g| potentialness(&o, &g).unwrap().value().unwrap();
    assert!(p(standard::matching_pennies()).abs() < 1e-9);
    assert!((p(standard::prisoners_dilemma()) - 1.0).abs() < 1e-9);
    let s = potentialness(&ops(&[3, 3]), &standard::shapley()).unwrap().value().unwrap();
    assert!((s - 0.36).abs() < 0.01);
}

#[test]
fn shapley_components_resum_exactly() {
    let o = ops(&[3, 3]);
    let g = standard::shapley::<f64>();
    let c = decompose_payoffs(&o, &g).unwrap().components.unwrap();
    let resum = add(&add(&c.potential.stacked(), &c.harmonic.stacked()), &c.non_strategic.stacked());
    assert!(max_abs_diff(&resum, &g.stacked()) < 1e-12);
}

#[test]
fn zero_game_is_non_strategic() {
    let o = ops(&[2, 3]);
    let g = NormalFormGame::<f64>::zeros(o.shape().clone());
    let dec = decompose_payoffs(&o, &g).unwrap();
    assert_eq!(dec.potentialness, PotentialnessOutcome::NonStrategic);
    let c = dec.components.unwrap();
    for part in [&c.potential, &c.harmonic, &c.non_strategic] {
        assert!(part.stacked().iter().all(|&x| x == 0.0));
    }
}

#[test]
fn first_and_second_price_share_harmonic_flow() {
    for values in [vec![1.0, 1.0], vec![0.75, 1.0]] {
        for m in 5..=25 {
            let o = ops(&[m, m]);
            let flow = |kind| {
                let spec = EconGameSpec::symmetric_grid(kind, values.clone(), m).unwrap();
                decompose_flows(&o, &build_econ_game(&spec).unwrap()).unwrap().harmonic_flow
            };
            let (f, s) = (flow(EconKind::Fpsb), flow(EconKind::Spsb));
            let diff = f.sub(&s).norm();
            assert!(diff <= 1e-8 * f.norm(), "m={m} v={values:?}: {diff}");
        }
    }
}

#[test]
fn alpha_blend_endpoints_and_monotonicity() {
    let mut r = rng(6);
    for a in [&[2, 2][..], &[3, 3], &[2, 2, 2]] {
        let o = ops(a);
        for _ in 0..10 {
            let g = random_game(o.shape(), &mut r);
            let dec = decompose_payoffs(&o, &g).unwrap();
            let mut last = -1.0;
            for k in 0..=20 {
                let alpha = k as f64 / 20.0;
                let blended = alpha_blend(&dec, alpha).unwrap();
                let p = potentialness(&o, &blended).unwrap().value().unwrap();
                if k == 0 {
                    assert!(p.abs() < 1e-8);
                }
                if k == 20 {
                    assert!((p - 1.0).abs() < 1e-8);
                }
                assert!(p >= last - 1e-12);
                last = p;
            }
        }
        assert!(alpha_blend(&decompose_payoffs(&o, &random_game(o.shape(), &mut r)).unwrap(), 1.5).is_err());
    }
}

/// Blend at one half on matching pennies, rescored from the blended game's
/// own decomposition.
#[test]
fn alpha_half_recomputed_from_scratch() {
    let o = ops(&[2, 2]);
    let mp = standard::matching_pennies::<f64>();
    let dec = decompose_payoffs(&o, &mp).unwrap();
    let blended = alpha_blend(&dec, 0.5).unwrap();
    let expected = dec.harmonic_flow.scale(0.5);
    let got = deviation_flow(o.graph(), &blended);
    assert!(max_abs_diff(&got, &expected.values) < 1e-12);
    let fp = dec.potential_flow.scale(0.5).norm();
    let fh = expected.norm();
    let independent = fp / (fp + fh);
    let p = potentialness(&o, &blended).unwrap().value().unwrap();
    assert!((p - independent).abs() < 1e-9);
}

#[test]
fn projection_sizes_match_scaling_claims() {
    let e = |a: &[usize]| shape(a).total_edges() as u128;
    assert_eq!(e(&[5, 5]).pow(2), 10_000);
    let four = e(&[5, 5, 5, 5]).pow(2);
    assert!((10_000_000..100_000_000).contains(&four));
    let o = ops(&[5, 5]);
    assert_eq!(o.projection_entries(), 10_000);
}

fn game_strategy(a: &'static [usize]) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let s = shape(a);
    let n = s.num_players();
    let total = s.total_profiles();
    let v = prop::collection::vec(prop::collection::vec(-10.0f64..10.0, total), n);
    (v.clone(), v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_invariance((u, _) in game_strategy(&[3, 3]), c in 1e-3f64..1e3) {
        let o = ops(&[3, 3]);
        let g = NormalFormGame::new(shape(&[3, 3]), u).unwrap();
        let p = potentialness(&o, &g).unwrap().value().unwrap();
        let q = potentialness(&o, &g.scaled(c)).unwrap().value().unwrap();
        prop_assert!((p - q).abs() <= 1e-10);
    }

    #[test]
    fn non_strategic_invariance((u, w) in game_strategy(&[2, 2, 2])) {
        let s = shape(&[2, 2, 2]);
        let o = ops(&[2, 2, 2]);
        let g = NormalFormGame::new(s.clone(), u).unwrap();
        // make w own-action independent
        let w: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..s.total_profiles()).map(|p| w[i][s.with_action(p, i, 0)]).collect())
            .collect();
        let offset = NormalFormGame::new(s.clone(), w).unwrap();
        let shifted = g.combine(1.0, &offset, 1.0).unwrap();
        let p = potentialness(&o, &g).unwrap().value().unwrap();
        let q = potentialness(&o, &shifted).unwrap().value().unwrap();
        prop_assert!((p - q).abs() <= 1e-10);
        prop_assert!(potentialness(&o, &offset).unwrap().is_non_strategic());
    }

    #[test]
    fn potentialness_in_unit_interval((u, _) in game_strategy(&[2, 3])) {
        let g = NormalFormGame::new(shape(&[2, 3]), u).unwrap();
        if let Some(p) = potentialness(&ops(&[2, 3]), &g).unwrap().value() {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn pythagoras_holds((u, _) in game_strategy(&[3, 3])) {
        let o = ops(&[3, 3]);
        let g = NormalFormGame::new(shape(&[3, 3]), u).unwrap();
        let dec = decompose_flows(&o, &g).unwrap();
        let du = DVector::from_vec(dec.deviation_flow.values.clone());
        let lhs = dec.potential_flow.norm().powi(2) + dec.harmonic_flow.norm().powi(2);
        prop_assert!((lhs - du.norm_squared()).abs() <= 1e-8 * du.norm_squared());
    }
}
