//! The `verify` subcommand: runs the invariant suite at a chosen dimension
//! and reports the worst deviation of each check against its tolerance.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use qrws::coin::{traversing_coin, CoinParams, PhaseAngle, PhaseRelation};
use qrws::dense::dense_success_probability;
use qrws::landscape::{check_phase_equivalence, sample_rng};
use qrws::walk::{
    apply_shift, evolve, iteration_count, success_probability, Circuit, WalkConfig, WalkState,
};
use qrws::Result;

pub struct Check {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

const ALGEBRAIC: f64 = 1e-12;
const NORM: f64 = 1e-10;

/// Largest dimension at which every marked node is tried.
const SYMMETRY_MAX_M: usize = 8;

fn random_coin(rng: &mut impl Rng, m: usize) -> CoinParams {
    CoinParams::new(
        rng.gen::<f64>() * TAU,
        rng.gen::<f64>() * TAU,
        rng.gen::<f64>() * TAU,
        m,
    )
}

pub fn run_checks(m: usize, samples: usize, seed: u64) -> Result<Vec<Check>> {
    WalkConfig::new(CoinParams::grover(m)).validate()?;
    let samples = samples.max(1);
    let mut rng = sample_rng(seed);
    let mut checks = Vec::new();

    let mut unitarity: f64 = 0.0;
    for i in 0..32 {
        for j in 0..32 {
            let coin = traversing_coin(
                PhaseAngle::new(TAU * i as f64 / 32.0),
                PhaseAngle::new(TAU * j as f64 / 32.0),
                m,
            )?;
            unitarity = unitarity.max(coin.unitarity_defect());
        }
    }
    checks.push(Check {
        name: "coin_unitarity",
        max_deviation: unitarity,
        tolerance: ALGEBRAIC,
    });

    let amps = (0..(m << m))
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let original = WalkState::from_amplitudes(m, amps)?;
    let mut state = original.clone();
    apply_shift(&mut state);
    apply_shift(&mut state);
    let involution = original
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "shift_involution",
        max_deviation: involution,
        tolerance: 0.0,
    });

    let k = 2 * iteration_count(m)?;
    let mut drift: f64 = 0.0;
    for _ in 0..samples {
        let (c0, c1) = WalkConfig::new(random_coin(&mut rng, m)).coins()?;
        drift = drift.max((evolve(m, &c0, &c1, 0, k)?.norm() - 1.0).abs());
    }
    checks.push(Check {
        name: "norm_preservation",
        max_deviation: drift,
        tolerance: NORM,
    });

    let mut oracle: f64 = 0.0;
    for small in 2..=4 {
        for _ in 0..samples.min(20) {
            let cfg = WalkConfig::new(random_coin(&mut rng, small));
            oracle =
                oracle.max((success_probability(&cfg)? - dense_success_probability(&cfg)?).abs());
        }
    }
    checks.push(Check {
        name: "oracle_equivalence",
        max_deviation: oracle,
        tolerance: ALGEBRAIC,
    });

    checks.push(Check {
        name: "phase_equivalence",
        max_deviation: check_phase_equivalence(m, samples, seed)?,
        tolerance: ALGEBRAIC,
    });

    let mut circuit: f64 = 0.0;
    for i in 0..64 {
        let phi = PhaseAngle::new(TAU * i as f64 / 64.0);
        for alpha in [0.0, -1.0 / TAU] {
            let standard = CoinParams {
                phi,
                zeta: PhaseRelation::sinusoidal(alpha).eval(phi),
                omega: PhaseAngle::ZERO,
                m,
            };
            let reduced = CoinParams {
                zeta: PhaseRelation::mark_free(alpha).eval(phi),
                ..standard
            };
            let a = success_probability(&WalkConfig::new(standard))?;
            let b =
                success_probability(&WalkConfig::new(reduced).with_circuit(Circuit::Alternative))?;
            circuit = circuit.max((a - b).abs());
        }
    }
    checks.push(Check {
        name: "circuit_equivalence",
        max_deviation: circuit,
        tolerance: ALGEBRAIC,
    });

    let mut global: f64 = 0.0;
    let kk = iteration_count(m)?;
    for _ in 0..samples.min(20) {
        let (c0, c1) = WalkConfig::new(random_coin(&mut rng, m)).coins()?;
        let gamma = Complex64::from_polar(1.0, rng.gen::<f64>() * TAU);
        let a = evolve(m, &c0, &c1, 0, kk)?.node_distribution()[0];
        let b = evolve(m, &c0.scaled(gamma), &c1.scaled(gamma), 0, kk)?.node_distribution()[0];
        global = global.max((a - b).abs());
    }
    checks.push(Check {
        name: "global_phase_invariance",
        max_deviation: global,
        tolerance: ALGEBRAIC,
    });

    let sym_m = if m <= SYMMETRY_MAX_M { m } else { 3 };
    let coin = random_coin(&mut rng, sym_m);
    let p0 = success_probability(&WalkConfig::new(coin))?;
    let mut symmetry: f64 = 0.0;
    for marked in 1..(1usize << sym_m) {
        let p = success_probability(&WalkConfig::new(coin).with_marked(marked))?;
        symmetry = symmetry.max((p - p0).abs());
    }
    checks.push(Check {
        name: "marked_node_symmetry",
        max_deviation: symmetry,
        tolerance: ALGEBRAIC,
    });

    Ok(checks)
}
