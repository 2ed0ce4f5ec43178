//! State-vector simulation of the coined walk search on the `m`-cube.
//!
//! Amplitudes are stored direction-major: index `d·2^m + x` holds the
//! amplitude of direction `d` at node `x`. The shift then flips bit `d`
//! inside the `d`-th block, and a coin fiber is the stride-`2^m` column
//! through node `x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::{
    alt_traversing_coin, marking_coin, traversing_coin, CoinMatrix, CoinParams, PhaseAngle,
};
use crate::error::{Error, Result};

/// Norm drift tolerated inside a run before it is reported as an error.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Largest hypercube dimension the engine accepts; `m·2^m` amplitudes
/// must stay addressable and reasonably sized.
pub const MAX_DIMENSION: usize = 24;

/// `⌈(π/2)·√(2^{m−1})⌉`, the single-solution iteration count.
pub fn iteration_count(m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidDimension {
            m,
            reason: "hypercube dimension must be at least 1",
        });
    }
    let k = (PI / 2.0 * 2f64.powi(m as i32 - 1).sqrt()).ceil();
    Ok(k as usize)
}

fn check_walk_dim(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidDimension {
            m,
            reason: "a walk needs a hypercube of dimension at least 2",
        });
    }
    if m > MAX_DIMENSION {
        return Err(Error::InvalidDimension {
            m,
            reason: "hypercube dimension too large to simulate",
        });
    }
    Ok(())
}

/// Joint amplitude vector over `(direction, node)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    m: usize,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    /// The state `|d, x⟩`.
    pub fn basis(m: usize, direction: usize, node: usize) -> Result<Self> {
        check_walk_dim(m)?;
        let nodes = 1usize << m;
        if direction >= m || node >= nodes {
            return Err(Error::InvalidParameter(format!(
                "basis state ({direction}, {node}) out of range for m = {m}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); m * nodes];
        amplitudes[direction * nodes + node] = Complex64::new(1.0, 0.0);
        Ok(WalkState { m, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be `m·2^m`. Not normalized.
    pub fn from_amplitudes(m: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_walk_dim(m)?;
        let len = m << m;
        if amplitudes.len() != len {
            return Err(Error::InvalidParameter(format!(
                "expected {len} amplitudes for m = {m}, got {}",
                amplitudes.len()
            )));
        }
        Ok(WalkState { m, amplitudes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> usize {
        1 << self.m
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    #[inline]
    pub fn index(&self, direction: usize, node: usize) -> usize {
        direction * self.nodes() + node
    }

    pub fn amplitude(&self, direction: usize, node: usize) -> Complex64 {
        self.amplitudes[self.index(direction, node)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Probability of measuring each node, summed over directions.
    pub fn node_distribution(&self) -> Vec<f64> {
        let nodes = self.nodes();
        let mut dist = vec![0.0; nodes];
        for block in self.amplitudes.chunks_exact(nodes) {
            for (p, z) in dist.iter_mut().zip(block) {
                *p += z.norm_sqr();
            }
        }
        dist
    }
}

/// Equal-weight superposition over every direction and node.
pub fn uniform_initial_state(m: usize) -> Result<WalkState> {
    check_walk_dim(m)?;
    let len = m << m;
    let amp = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
    Ok(WalkState {
        m,
        amplitudes: vec![amp; len],
    })
}

/// `S|d, x⟩ = |d, x ⊕ 2^d⟩`, in place.
pub fn apply_shift(state: &mut WalkState) {
    let nodes = state.nodes();
    for (d, block) in state.amplitudes.chunks_exact_mut(nodes).enumerate() {
        let bit = 1usize << d;
        for x in 0..nodes {
            if x & bit == 0 {
                block.swap(x, x | bit);
            }
        }
    }
}

/// Applies `unmarked_coin` to the coin fiber of every node except `marked`,
/// which gets `marked_coin`.
pub fn apply_conditional_coins(
    state: &mut WalkState,
    unmarked_coin: &CoinMatrix,
    marked_coin: &CoinMatrix,
    marked: usize,
) -> Result<()> {
    let m = state.m;
    let nodes = state.nodes();
    for coin in [unmarked_coin, marked_coin] {
        if coin.dim != m {
            return Err(Error::DimensionMismatch {
                coin: coin.dim,
                state: m,
            });
        }
    }
    if marked >= nodes {
        return Err(Error::MarkedOutOfRange { marked, nodes });
    }

    let mut sums = vec![Complex64::new(0.0, 0.0); nodes];
    for block in state.amplitudes.chunks_exact(nodes) {
        for (s, z) in sums.iter_mut().zip(block) {
            *s += z;
        }
    }

    let unmarked_scale = unmarked_coin.diag - unmarked_coin.offdiag;
    let marked_scale = marked_coin.diag - marked_coin.offdiag;
    for block in state.amplitudes.chunks_exact_mut(nodes) {
        for (x, (z, s)) in block.iter_mut().zip(&sums).enumerate() {
            *z = if x == marked {
                marked_scale * *z + marked_coin.offdiag * s
            } else {
                unmarked_scale * *z + unmarked_coin.offdiag * s
            };
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Circuit {
    /// Traversing coin on unmarked nodes, marking coin `−e^{iω}I` on the
    /// marked node.
    #[default]
    Standard,
    /// Marking-coin-free circuit: the marked node's fiber is left alone.
    #[serde(rename = "alt")]
    Alternative,
}

impl Circuit {
    pub fn name(self) -> &'static str {
        match self {
            Circuit::Standard => "standard",
            Circuit::Alternative => "alt",
        }
    }
}

impl std::str::FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Circuit::Standard),
            "alt" | "alternative" => Ok(Circuit::Alternative),
            other => Err(Error::InvalidParameter(format!(
                "unknown circuit `{other}` (expected standard or alt)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub coin: CoinParams,
    pub circuit: Circuit,
    pub marked: usize,
    /// Defaults to [`iteration_count`] when `None`.
    pub iterations: Option<usize>,
}

impl WalkConfig {
    pub fn new(coin: CoinParams) -> Self {
        WalkConfig {
            coin,
            circuit: Circuit::Standard,
            marked: 0,
            iterations: None,
        }
    }

    pub fn with_circuit(mut self, circuit: Circuit) -> Self {
        self.circuit = circuit;
        self
    }

    pub fn with_marked(mut self, marked: usize) -> Self {
        self.marked = marked;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = Some(iterations);
        self
    }

    pub fn m(&self) -> usize {
        self.coin.m
    }

    pub fn validate(&self) -> Result<()> {
        check_walk_dim(self.m())?;
        let nodes = 1usize << self.m();
        if self.marked >= nodes {
            return Err(Error::MarkedOutOfRange {
                marked: self.marked,
                nodes,
            });
        }
        Ok(())
    }

    pub fn resolved_iterations(&self) -> Result<usize> {
        match self.iterations {
            Some(k) => Ok(k),
            None => iteration_count(self.m()),
        }
    }

    /// The `(unmarked, marked)` coin pair this configuration applies.
    pub fn coins(&self) -> Result<(CoinMatrix, CoinMatrix)> {
        let CoinParams {
            phi,
            zeta,
            omega,
            m,
        } = self.coin;
        match self.circuit {
            Circuit::Standard => Ok((traversing_coin(phi, zeta, m)?, marking_coin(omega, m)?)),
            // ζ here is the mark-free phase, so the walk coin is e^{iζ}M(φ);
            // alt_traversing_coin takes the phase relative to π
            Circuit::Alternative => Ok((
                alt_traversing_coin(phi, PhaseAngle::new(zeta.radians() + PI), m)?,
                CoinMatrix::identity(m)?,
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub success_probability: f64,
    pub node_distribution: Vec<f64>,
    pub iterations_used: usize,
}

/// Runs `iterations` search steps from the uniform state with an explicit
/// coin pair and returns the final state.
pub fn evolve(
    m: usize,
    unmarked_coin: &CoinMatrix,
    marked_coin: &CoinMatrix,
    marked: usize,
    iterations: usize,
) -> Result<WalkState> {
    let mut state = uniform_initial_state(m)?;
    for step in 1..=iterations {
        apply_conditional_coins(&mut state, unmarked_coin, marked_coin, marked)?;
        apply_shift(&mut state);
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift { norm, step });
        }
    }
    Ok(state)
}

pub fn qrws_run(config: &WalkConfig) -> Result<RunResult> {
    config.validate()?;
    let iterations = config.resolved_iterations()?;
    let (unmarked, marked) = config.coins()?;
    let state = evolve(config.m(), &unmarked, &marked, config.marked, iterations)?;
    let node_distribution = state.node_distribution();
    Ok(RunResult {
        success_probability: node_distribution[config.marked],
        node_distribution,
        iterations_used: iterations,
    })
}

/// Success probability only.
pub fn success_probability(config: &WalkConfig) -> Result<f64> {
    qrws_run(config).map(|r| r.success_probability)
}
