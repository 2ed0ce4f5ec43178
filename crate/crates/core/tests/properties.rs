use std::f64::consts::{PI, TAU};

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrws::coin::*;
use qrws::dense::*;
use qrws::walk::*;

fn random_state(m: usize, rng: &mut impl Rng) -> WalkState {
    let amps: Vec<Complex64> = (0..(m << m))
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    WalkState::from_amplitudes(m, amps.into_iter().map(|z| z / norm).collect()).unwrap()
}

#[test]
fn coin_unitarity_and_structure_on_grid() {
    for m in [2, 4, 7] {
        for i in 0..32 {
            for j in 0..32 {
                let phi = PhaseAngle::new(TAU * i as f64 / 32.0);
                let zeta = PhaseAngle::new(TAU * j as f64 / 32.0);
                let coin = traversing_coin(phi, zeta, m).unwrap();
                assert!(coin.unitarity_defect() <= 1e-12);
                let dense = coin.to_dense();
                for r in 0..m {
                    for c in 0..m {
                        let want = if r == c { dense[(0, 0)] } else { dense[(0, 1)] };
                        assert_eq!(dense[(r, c)], want);
                    }
                }
            }
        }
    }
}

#[test]
fn mark_free_relation_is_sinusoidal_shifted_by_pi() {
    for alpha in [0.0, -1.0 / TAU, 0.42] {
        for i in 0..512 {
            let phi = PhaseAngle::new(TAU * i as f64 / 512.0);
            let z_sin = PhaseRelation::sinusoidal(alpha).eval(phi).radians();
            let z_free = PhaseRelation::mark_free(alpha).eval(phi).radians();
            let d = reduce_angle(z_sin - PI - z_free);
            assert!(d.min(TAU - d) <= 1e-12, "alpha={alpha} i={i}");
        }
    }
}

#[test]
fn conditional_coins_match_dense_block_product() {
    let m = 4;
    let cfg = WalkConfig::new(CoinParams::grover(m));
    let (unmarked, marked) = cfg.coins().unwrap();
    let mut state = uniform_initial_state(m).unwrap();
    let input = DVector::from_column_slice(state.amplitudes());
    apply_conditional_coins(&mut state, &unmarked, &marked, 0).unwrap();
    let expected = coin_matrix(&cfg).unwrap() * input;
    for (got, want) in state.amplitudes().iter().zip(expected.iter()) {
        assert!((got - want).norm() <= 1e-13);
    }
}

#[test]
fn dense_power_reproduces_grover_run() {
    let cfg = WalkConfig::new(CoinParams::grover(4));
    let fast = success_probability(&cfg).unwrap();
    let dense = dense_success_probability(&cfg).unwrap();
    assert!((fast - dense).abs() <= 1e-12);
    assert!(fast > 0.3 && fast < 0.5);
}

#[test]
fn no_walk_stays_near_uniform() {
    let cfg = WalkConfig::new(CoinParams::new(0.0, 0.0, 0.0, 4));
    let p = success_probability(&cfg).unwrap();
    let dense = dense_success_probability(&cfg).unwrap();
    assert!((p - dense).abs() <= 1e-12);
    assert!((0.5 / 16.0..=2.0 / 16.0).contains(&p), "p = {p}");
}

#[test]
fn global_phase_leaves_probability_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in [2, 4, 5] {
        for _ in 0..10 {
            let phi = PhaseAngle::new(rng.gen::<f64>() * TAU);
            let zeta = PhaseAngle::new(rng.gen::<f64>() * TAU);
            let omega = PhaseAngle::new(rng.gen::<f64>() * TAU);
            let gamma = Complex64::from_polar(1.0, rng.gen::<f64>() * TAU);
            let c0 = traversing_coin(phi, zeta, m).unwrap();
            let c1 = marking_coin(omega, m).unwrap();
            let k = iteration_count(m).unwrap();
            let a = evolve(m, &c0, &c1, 0, k).unwrap().node_distribution()[0];
            let b = evolve(m, &c0.scaled(gamma), &c1.scaled(gamma), 0, k)
                .unwrap()
                .node_distribution()[0];
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn marked_node_symmetry() {
    let coin = CoinParams::new(2.1, 0.7, 1.3, 3);
    let p0 = success_probability(&WalkConfig::new(coin)).unwrap();
    for marked in 1..8 {
        let p = success_probability(&WalkConfig::new(coin).with_marked(marked)).unwrap();
        assert!((p - p0).abs() <= 1e-12, "marked {marked}");
    }
}

#[test]
fn reduced_circuit_pairings() {
    // identity marking with e^{iζ}M at the mark-free ζ, and identity marking
    // with alt_traversing_coin at the sinusoidal ζ, both reproduce the
    // standard circuit at ω = 0 with the sinusoidal ζ
    for m in [3, 4] {
        let k = iteration_count(m).unwrap();
        let id = CoinMatrix::identity(m).unwrap();
        for i in 0..16 {
            let phi = PhaseAngle::new(TAU * i as f64 / 16.0);
            let z_sin = PhaseRelation::sinusoidal(0.1).eval(phi);
            let z_free = PhaseRelation::mark_free(0.1).eval(phi);
            let standard = success_probability(&WalkConfig::new(CoinParams {
                phi,
                zeta: z_sin,
                omega: PhaseAngle::ZERO,
                m,
            }))
            .unwrap();
            let reduced = success_probability(
                &WalkConfig::new(CoinParams {
                    phi,
                    zeta: z_free,
                    omega: PhaseAngle::ZERO,
                    m,
                })
                .with_circuit(Circuit::Alternative),
            )
            .unwrap();
            let alt = evolve(m, &alt_traversing_coin(phi, z_sin, m).unwrap(), &id, 0, k)
                .unwrap()
                .node_distribution()[0];
            assert!((standard - reduced).abs() <= 1e-12);
            assert!((standard - alt).abs() <= 1e-12);
        }
    }
}

#[test]
fn norm_preserved_over_long_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in [2, 4, 7] {
        let k = 2 * iteration_count(m).unwrap();
        for _ in 0..100 {
            let coin = CoinParams::new(
                rng.gen::<f64>() * TAU,
                rng.gen::<f64>() * TAU,
                rng.gen::<f64>() * TAU,
                m,
            );
            let (c0, c1) = WalkConfig::new(coin).coins().unwrap();
            let state = evolve(m, &c0, &c1, 0, k).unwrap();
            assert!((state.norm() - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn step_unitary_small_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in [2, 3, 4] {
        let coin = CoinParams::new(
            rng.gen::<f64>() * TAU,
            rng.gen::<f64>() * TAU,
            rng.gen::<f64>() * TAU,
            m,
        );
        let u = build_full_step_unitary(&WalkConfig::new(coin)).unwrap();
        assert!(unitarity_defect(&u) <= 1e-12);
        let alt =
            build_full_step_unitary(&WalkConfig::new(coin).with_circuit(Circuit::Alternative))
                .unwrap();
        assert!(unitarity_defect(&alt) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coin_is_unitary(phi in 0.0..TAU, zeta in 0.0..TAU, m in 1usize..9) {
        let coin = traversing_coin(PhaseAngle::new(phi), PhaseAngle::new(zeta), m).unwrap();
        prop_assert!(coin.unitarity_defect() <= 1e-12);
    }

    #[test]
    fn alt_coin_is_shifted_traversing_coin(phi in 0.0..TAU, zeta in 0.0..TAU, m in 1usize..9) {
        let phi = PhaseAngle::new(phi);
        let zeta = PhaseAngle::new(zeta);
        let alt = alt_traversing_coin(phi, zeta, m).unwrap();
        let std = traversing_coin(phi, PhaseAngle::new(zeta.radians() - PI), m).unwrap();
        prop_assert!((alt.diag - std.diag).norm() <= 1e-15);
        prop_assert!((alt.offdiag - std.offdiag).norm() <= 1e-15);
    }

    #[test]
    fn coin_is_two_pi_periodic(phi in 0.0..TAU, zeta in 0.0..TAU, m in 1usize..9) {
        let a = traversing_coin(PhaseAngle::new(phi), PhaseAngle::new(zeta), m).unwrap();
        let b = traversing_coin(PhaseAngle::new(phi + TAU), PhaseAngle::new(zeta), m).unwrap();
        prop_assert!((a.diag - b.diag).norm() <= 1e-12);
        prop_assert!((a.offdiag - b.offdiag).norm() <= 1e-12);
    }

    #[test]
    fn relation_is_periodic(phi in -20.0f64..20.0, alpha in -1.0f64..1.0, omega in 0.0..TAU) {
        for rel in [PhaseRelation::sinusoidal(alpha), PhaseRelation::sinusoidal_omega(alpha, PhaseAngle::new(omega)), PhaseRelation::mark_free(alpha)] {
            let a = rel.eval(PhaseAngle::new(phi)).radians();
            let b = rel.eval(PhaseAngle::new(phi + TAU)).radians();
            let d = reduce_angle(a - b);
            prop_assert!(d.min(TAU - d) <= 1e-9);
        }
    }

    #[test]
    fn reduced_angle_is_canonical(x in -1e6f64..1e6) {
        let r = reduce_angle(x);
        prop_assert!((0.0..TAU).contains(&r));
    }

    #[test]
    fn shift_is_an_involution(seed in any::<u64>(), m in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let original = random_state(m, &mut rng);
        let mut state = original.clone();
        apply_shift(&mut state);
        apply_shift(&mut state);
        prop_assert_eq!(state, original);
    }

    #[test]
    fn fast_path_matches_dense(phi in 0.0..TAU, zeta in 0.0..TAU, omega in 0.0..TAU, m in 2usize..5) {
        let cfg = WalkConfig::new(CoinParams::new(phi, zeta, omega, m));
        let fast = success_probability(&cfg).unwrap();
        let dense = dense_success_probability(&cfg).unwrap();
        prop_assert!((fast - dense).abs() <= 1e-12);
    }
}
