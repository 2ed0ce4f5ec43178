//! Phase-landscape sampling, robustness curves and the plateau-width metric.
//!
//! Work items (lattice points, random samples, curve points, α candidates)
//! are evaluated in parallel but always returned in index order, and each
//! item is computed by a single sequential run, so output does not depend
//! on scheduling.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coin::{reduce_angle, CoinParams, PhaseAngle, PhaseRelation, RelationKind};
use crate::error::{Error, Result};
use crate::walk::{iteration_count, success_probability, Circuit, WalkConfig};

/// Default relative cutoff for the plateau width.
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 0.9;
/// Default φ resolution of a robustness curve.
pub const DEFAULT_CURVE_POINTS: usize = 512;
/// Default lattice side for landscape sweeps.
pub const DEFAULT_GRID_SIDE: usize = 33;
/// Step of the coarse α scan.
pub const ALPHA_SCAN_STEP: f64 = 0.01;
/// Bracket width at which golden-section refinement stops.
pub const ALPHA_TOLERANCE: f64 = 1e-4;

/// Random generator behind every seeded sampler: ChaCha with 8 rounds,
/// seeded through `SeedableRng::seed_from_u64`. Its stream is fixed across
/// platforms and releases of `rand_chacha` 0.3.
pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeSample {
    pub phi: PhaseAngle,
    pub zeta: PhaseAngle,
    pub omega: PhaseAngle,
    pub m: usize,
    pub k: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum SampleMode {
    /// `n_phi × n_zeta` evenly spaced lattice over `[0, 2π)²`, φ-major.
    Grid { n_phi: usize, n_zeta: usize },
    /// `n_samples` uniform draws of `(φ, ζ)`.
    Random { n_samples: usize, seed: u64 },
}

fn lattice(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| TAU * i as f64 / n as f64)
}

fn evaluate_all<T: Sync>(
    items: &[T],
    f: impl Fn(&T) -> Result<f64> + Sync + Send,
) -> Result<Vec<f64>> {
    items.par_iter().map(f).collect()
}

pub fn sample_landscape(
    m: usize,
    omega: PhaseAngle,
    mode: SampleMode,
) -> Result<Vec<LandscapeSample>> {
    WalkConfig::new(CoinParams::new(0.0, 0.0, omega.radians(), m)).validate()?;
    let k = iteration_count(m)?;

    let points: Vec<(PhaseAngle, PhaseAngle)> = match mode {
        SampleMode::Grid { n_phi, n_zeta } => {
            if n_phi == 0 || n_zeta == 0 {
                return Err(Error::InvalidParameter(
                    "grid sides must be at least 1".into(),
                ));
            }
            lattice(n_phi)
                .flat_map(|phi| {
                    lattice(n_zeta).map(move |zeta| (PhaseAngle::new(phi), PhaseAngle::new(zeta)))
                })
                .collect()
        }
        SampleMode::Random { n_samples, seed } => {
            if n_samples == 0 {
                return Err(Error::InvalidParameter(
                    "sample count must be at least 1".into(),
                ));
            }
            let mut rng = sample_rng(seed);
            (0..n_samples)
                .map(|_| {
                    let phi = rng.gen::<f64>() * TAU;
                    let zeta = rng.gen::<f64>() * TAU;
                    (PhaseAngle::new(phi), PhaseAngle::new(zeta))
                })
                .collect()
        }
    };

    let probabilities = evaluate_all(&points, |&(phi, zeta)| {
        let coin = CoinParams {
            phi,
            zeta,
            omega,
            m,
        };
        success_probability(&WalkConfig::new(coin))
    })?;

    Ok(points
        .into_iter()
        .zip(probabilities)
        .map(|((phi, zeta), p)| LandscapeSample {
            phi,
            zeta,
            omega,
            m,
            k,
            p,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Raw grid value on `[0, 2π]`; not reduced, so the last point is `2π`.
    pub phi: f64,
    pub zeta: PhaseAngle,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCurve {
    pub m: usize,
    pub omega: PhaseAngle,
    pub relation: PhaseRelation,
    pub circuit: Circuit,
    pub points: Vec<CurvePoint>,
}

/// `p(φ, ζ(φ))` on `n_phi` evenly spaced points of `[0, 2π]` through the
/// standard circuit with marking phase `omega`.
pub fn probability_curve(
    m: usize,
    omega: PhaseAngle,
    relation: PhaseRelation,
    n_phi: usize,
) -> Result<ProbabilityCurve> {
    probability_curve_on(m, omega, relation, Circuit::Standard, n_phi)
}

pub fn probability_curve_on(
    m: usize,
    omega: PhaseAngle,
    relation: PhaseRelation,
    circuit: Circuit,
    n_phi: usize,
) -> Result<ProbabilityCurve> {
    if n_phi < 2 {
        return Err(Error::InvalidParameter(
            "a curve needs at least 2 points".into(),
        ));
    }
    let phis: Vec<f64> = (0..n_phi)
        .map(|i| TAU * i as f64 / (n_phi - 1) as f64)
        .collect();
    let zetas: Vec<PhaseAngle> = phis
        .iter()
        .map(|&phi| relation.eval(PhaseAngle::new(phi)))
        .collect();

    let probabilities = evaluate_all(&(0..n_phi).collect::<Vec<_>>(), |&i| {
        let coin = CoinParams {
            phi: PhaseAngle::new(phis[i]),
            zeta: zetas[i],
            omega,
            m,
        };
        success_probability(&WalkConfig::new(coin).with_circuit(circuit))
    })?;

    let points = phis
        .into_iter()
        .zip(zetas)
        .zip(probabilities)
        .map(|((phi, zeta), p)| CurvePoint { phi, zeta, p })
        .collect();
    Ok(ProbabilityCurve {
        m,
        omega,
        relation,
        circuit,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// Cutoff is `value · p_max`.
    RelativeToMax,
    /// Cutoff is `value`.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthThreshold {
    pub mode: ThresholdMode,
    pub value: f64,
}

impl Default for WidthThreshold {
    fn default() -> Self {
        WidthThreshold {
            mode: ThresholdMode::RelativeToMax,
            value: DEFAULT_RELATIVE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub alpha: f64,
    pub width: f64,
    pub p_max: f64,
    pub phi_max: PhaseAngle,
    pub threshold_mode: ThresholdMode,
    pub threshold_value: f64,
    pub cutoff: f64,
    pub grid_spacing: f64,
}

/// Measure of `{φ : p(φ) ≥ cutoff}` on the curve's grid, taken as the
/// number of qualifying points times the grid spacing.
///
/// When the grid closes on itself (last φ is the first plus 2π) the
/// duplicated endpoint is counted once.
pub fn robustness_width(
    curve: &ProbabilityCurve,
    threshold: WidthThreshold,
) -> Result<RobustnessReport> {
    let points = &curve.points;
    let first = points.first().ok_or(Error::EmptyCurve)?;
    let last = points[points.len() - 1];

    let (spacing, counted) = if points.len() == 1 {
        (TAU, points.len())
    } else {
        let span = last.phi - first.phi;
        let spacing = span / (points.len() - 1) as f64;
        if (span - TAU).abs() <= 1e-9 {
            (spacing, points.len() - 1)
        } else {
            (spacing, points.len())
        }
    };

    let mut best = first;
    for pt in &points[1..] {
        if pt.p > best.p {
            best = pt;
        }
    }

    let cutoff = match threshold.mode {
        ThresholdMode::RelativeToMax => threshold.value * best.p,
        ThresholdMode::Absolute => threshold.value,
    };
    let qualifying = points[..counted].iter().filter(|pt| pt.p >= cutoff).count();
    let width = (qualifying as f64 * spacing).min(TAU);

    Ok(RobustnessReport {
        alpha: curve.relation.alpha,
        width,
        p_max: best.p,
        phi_max: PhaseAngle::new(best.phi),
        threshold_mode: threshold.mode,
        threshold_value: threshold.value,
        cutoff,
        grid_spacing: spacing,
    })
}

/// Circuit used when optimizing a relation family; the marking-coin-free
/// relation only makes sense on the reduced circuit.
pub fn family_circuit(kind: RelationKind) -> Circuit {
    match kind {
        RelationKind::MarkFree => Circuit::Alternative,
        _ => Circuit::Standard,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSearch {
    pub m: usize,
    pub omega: PhaseAngle,
    pub family: RelationKind,
    pub alpha_range: (f64, f64),
    pub n_phi: usize,
    pub threshold: WidthThreshold,
}

impl AlphaSearch {
    pub fn new(m: usize, omega: PhaseAngle, family: RelationKind) -> Self {
        AlphaSearch {
            m,
            omega,
            family,
            alpha_range: (-1.0, 1.0),
            n_phi: DEFAULT_CURVE_POINTS,
            threshold: WidthThreshold::default(),
        }
    }

    pub fn relation(&self, alpha: f64) -> PhaseRelation {
        PhaseRelation {
            kind: self.family,
            alpha,
            omega: self.omega,
        }
    }

    pub fn evaluate(&self, alpha: f64) -> Result<RobustnessReport> {
        let curve = probability_curve_on(
            self.m,
            self.omega,
            self.relation(alpha),
            family_circuit(self.family),
            self.n_phi,
        )?;
        robustness_width(&curve, self.threshold)
    }
}

/// `a` beats `b` on width, then on smaller `|α|`, then on smaller `α`.
fn better(a: &RobustnessReport, b: &RobustnessReport) -> bool {
    if a.width != b.width {
        return a.width > b.width;
    }
    if a.alpha.abs() != b.alpha.abs() {
        return a.alpha.abs() < b.alpha.abs();
    }
    a.alpha < b.alpha
}

/// Golden-section maximization of `f` on `[lo, hi]` until the bracket is
/// no wider than `tol`. Returns the midpoint of the final bracket.
fn golden_section_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximizes the plateau width over `α`: a coarse scan with step
/// [`ALPHA_SCAN_STEP`] followed by golden-section refinement on the
/// bracket around the best scan point.
pub fn optimize_alpha(search: &AlphaSearch) -> Result<RobustnessReport> {
    let (lo, hi) = search.alpha_range;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "bad alpha range [{lo}, {hi}]"
        )));
    }
    if search.family == RelationKind::ConstantPi {
        return Err(Error::InvalidParameter(
            "the constant relation has no alpha".into(),
        ));
    }

    let steps = ((hi - lo) / ALPHA_SCAN_STEP + 1e-9).floor() as usize;
    let mut candidates: Vec<f64> = (0..=steps)
        .map(|i| lo + i as f64 * ALPHA_SCAN_STEP)
        .collect();
    if hi - candidates[candidates.len() - 1] > 1e-12 {
        candidates.push(hi);
    }

    let reports: Vec<RobustnessReport> = candidates
        .par_iter()
        .map(|&alpha| search.evaluate(alpha))
        .collect::<Result<_>>()?;

    let mut best = reports[0];
    for r in &reports[1..] {
        if better(r, &best) {
            best = *r;
        }
    }
    if candidates.len() == 1 {
        return Ok(best);
    }

    let bracket_lo = (best.alpha - ALPHA_SCAN_STEP).max(lo);
    let bracket_hi = (best.alpha + ALPHA_SCAN_STEP).min(hi);
    let refined = golden_section_max(
        |alpha| search.evaluate(alpha).map(|r| r.width),
        bracket_lo,
        bracket_hi,
        ALPHA_TOLERANCE,
    )?;
    let refined = search.evaluate(refined)?;
    if refined.width > best.width {
        best = refined;
    }
    Ok(best)
}

/// Max over seeded samples of `|p(φ, ζ, ω) − p(φ, ζ − ω, 0)|`.
pub fn check_phase_equivalence(m: usize, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    let mut rng = sample_rng(seed);
    let triples: Vec<(f64, f64, f64)> = (0..n_samples)
        .map(|_| {
            (
                rng.gen::<f64>() * TAU,
                rng.gen::<f64>() * TAU,
                rng.gen::<f64>() * TAU,
            )
        })
        .collect();
    let deviations = evaluate_all(&triples, |&(phi, zeta, omega)| {
        phase_equivalence_deviation(m, phi, zeta, omega)
    })?;
    Ok(deviations.into_iter().fold(0.0, f64::max))
}

/// `|p(φ, ζ, ω) − p(φ, ζ − ω, 0)|` for one triple.
pub fn phase_equivalence_deviation(m: usize, phi: f64, zeta: f64, omega: f64) -> Result<f64> {
    let shifted = success_probability(&WalkConfig::new(CoinParams::new(phi, zeta, omega, m)))?;
    let reference = success_probability(&WalkConfig::new(CoinParams::new(
        phi,
        reduce_angle(zeta - omega),
        0.0,
        m,
    )))?;
    Ok((shifted - reference).abs())
}

/// Compares a lattice sweep at `omega` with the `ω = 0` sweep shifted by
/// `omega` along ζ. `omega` must be a whole number of ζ lattice steps.
/// Returns the pointwise max deviation.
pub fn translation_deviation(
    m: usize,
    omega: PhaseAngle,
    n_phi: usize,
    n_zeta: usize,
) -> Result<f64> {
    let steps = omega.radians() / (TAU / n_zeta as f64);
    let shift = steps.round();
    if (steps - shift).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "omega {} is not on the {n_zeta}-point zeta lattice",
            omega.radians()
        )));
    }
    let shift = shift as usize % n_zeta;
    let mode = SampleMode::Grid { n_phi, n_zeta };
    let moved = sample_landscape(m, omega, mode)?;
    let base = sample_landscape(m, PhaseAngle::ZERO, mode)?;

    let mut worst: f64 = 0.0;
    for i in 0..n_phi {
        for j in 0..n_zeta {
            let source = (j + n_zeta - shift) % n_zeta;
            let d = (moved[i * n_zeta + j].p - base[i * n_zeta + source].p).abs();
            worst = worst.max(d);
        }
    }
    Ok(worst)
}
