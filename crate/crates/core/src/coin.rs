//! Walk and marking coins built from a generalized Householder reflection
//! about the equal-weight superposition, plus the phase relations that tie
//! the additional phase to the reflection angle.
//!
//! Every coin used by the search has the form `a` on the diagonal and `b`
//! everywhere else, so it is stored as that pair and applied in O(m).

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An angle in radians, held in canonical form on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct PhaseAngle(f64);

impl PhaseAngle {
    pub const ZERO: PhaseAngle = PhaseAngle(0.0);
    pub const PI: PhaseAngle = PhaseAngle(PI);

    pub fn new(radians: f64) -> Self {
        PhaseAngle(reduce_angle(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `e^{iθ}`
    pub fn unit(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

impl From<f64> for PhaseAngle {
    fn from(radians: f64) -> Self {
        PhaseAngle::new(radians)
    }
}

impl From<PhaseAngle> for f64 {
    fn from(angle: PhaseAngle) -> Self {
        angle.0
    }
}

impl fmt::Display for PhaseAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Maps any finite real onto `[0, 2π)`.
pub fn reduce_angle(radians: f64) -> f64 {
    let r = radians.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Phases of both coins plus the coin (and hypercube) dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    pub phi: PhaseAngle,
    pub zeta: PhaseAngle,
    pub omega: PhaseAngle,
    pub m: usize,
}

impl CoinParams {
    pub fn new(phi: f64, zeta: f64, omega: f64, m: usize) -> Self {
        CoinParams {
            phi: PhaseAngle::new(phi),
            zeta: PhaseAngle::new(zeta),
            omega: PhaseAngle::new(omega),
            m,
        }
    }

    /// The Grover point `φ = ζ = π`, `ω = 0`.
    pub fn grover(m: usize) -> Self {
        CoinParams::new(PI, PI, 0.0, m)
    }
}

/// An `m × m` coin with `diag` on the main diagonal and `offdiag` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinMatrix {
    pub dim: usize,
    pub diag: Complex64,
    pub offdiag: Complex64,
}

impl CoinMatrix {
    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(CoinMatrix {
            dim,
            diag: Complex64::new(1.0, 0.0),
            offdiag: Complex64::new(0.0, 0.0),
        })
    }

    /// Multiplies both stored values by `factor`.
    pub fn scaled(self, factor: Complex64) -> Self {
        CoinMatrix {
            dim: self.dim,
            diag: self.diag * factor,
            offdiag: self.offdiag * factor,
        }
    }

    /// Applies the coin in place to one coin fiber of length `dim`.
    ///
    /// Uses `C v = (a - b) v + b Σv`.
    #[inline]
    pub fn apply(&self, fiber: &mut [Complex64]) {
        debug_assert_eq!(fiber.len(), self.dim);
        let sum: Complex64 = fiber.iter().sum();
        let shift = self.offdiag * sum;
        let scale = self.diag - self.offdiag;
        for v in fiber.iter_mut() {
            *v = scale * *v + shift;
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            if i == j {
                self.diag
            } else {
                self.offdiag
            }
        })
    }

    /// Max-norm of `C†C − I` for the densely materialized coin.
    pub fn unitarity_defect(&self) -> f64 {
        let dense = self.to_dense();
        let product = dense.adjoint() * &dense;
        let identity = DMatrix::<Complex64>::identity(self.dim, self.dim);
        (product - identity)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn check_dim(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidDimension {
            m,
            reason: "coin dimension must be at least 1",
        });
    }
    Ok(())
}

/// `M(φ) = I − (1 − e^{iφ}) |χ⟩⟨χ|` with `|χ⟩` the equal-weight superposition.
pub fn householder_reflection(phi: PhaseAngle, m: usize) -> Result<CoinMatrix> {
    check_dim(m)?;
    let weight = (Complex64::new(1.0, 0.0) - phi.unit()) / m as f64;
    Ok(CoinMatrix {
        dim: m,
        diag: Complex64::new(1.0, 0.0) - weight,
        offdiag: -weight,
    })
}

/// `e^{iζ} M(φ)`, the traversing coin applied at unmarked nodes.
pub fn traversing_coin(phi: PhaseAngle, zeta: PhaseAngle, m: usize) -> Result<CoinMatrix> {
    Ok(householder_reflection(phi, m)?.scaled(zeta.unit()))
}

/// `−e^{iω} I`; reduces to `−I` at `ω = 0` and to `I` at `ω = π`.
pub fn marking_coin(omega: PhaseAngle, m: usize) -> Result<CoinMatrix> {
    check_dim(m)?;
    Ok(CoinMatrix {
        dim: m,
        diag: -omega.unit(),
        offdiag: Complex64::new(0.0, 0.0),
    })
}

/// `e^{i(ζ−π)} M(φ)`, the walk coin of the reduced circuit whose marking
/// coin is the identity. Equal to `traversing_coin(φ, ζ − π)`.
pub fn alt_traversing_coin(phi: PhaseAngle, zeta: PhaseAngle, m: usize) -> Result<CoinMatrix> {
    traversing_coin(phi, PhaseAngle::new(zeta.radians() - PI), m)
}

/// Shape of a phase relation `ζ(φ)`. Serialized with the same tokens the
/// command line accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// `ζ = π`
    #[serde(rename = "const-pi")]
    ConstantPi,
    /// `ζ = −2φ + π + α sin 2φ`
    #[serde(rename = "eq6")]
    Sinusoidal,
    /// `ζ = −2φ + ω + π + α sin 2φ`; keeps `ζ − ω` on the `ω = 0` relation.
    #[serde(rename = "eq12")]
    SinusoidalOmega,
    /// `ζ = −2φ + α sin 2φ`, for the circuit without a marking coin.
    #[serde(rename = "eq14")]
    MarkFree,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::ConstantPi => "const-pi",
            RelationKind::Sinusoidal => "eq6",
            RelationKind::SinusoidalOmega => "eq12",
            RelationKind::MarkFree => "eq14",
        }
    }
}

impl std::str::FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const-pi" => Ok(RelationKind::ConstantPi),
            "eq6" | "sinusoidal" => Ok(RelationKind::Sinusoidal),
            "eq12" | "sinusoidal-omega" => Ok(RelationKind::SinusoidalOmega),
            "eq14" | "mark-free" => Ok(RelationKind::MarkFree),
            other => Err(Error::InvalidParameter(format!(
                "unknown relation `{other}` (expected const-pi, eq6, eq12 or eq14)"
            ))),
        }
    }
}

/// A rule `ζ(φ)` for the additional phase of the traversing coin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRelation {
    pub kind: RelationKind,
    pub alpha: f64,
    pub omega: PhaseAngle,
}

impl PhaseRelation {
    pub fn constant_pi() -> Self {
        PhaseRelation {
            kind: RelationKind::ConstantPi,
            alpha: 0.0,
            omega: PhaseAngle::ZERO,
        }
    }

    pub fn sinusoidal(alpha: f64) -> Self {
        PhaseRelation {
            kind: RelationKind::Sinusoidal,
            alpha,
            omega: PhaseAngle::ZERO,
        }
    }

    pub fn sinusoidal_omega(alpha: f64, omega: PhaseAngle) -> Self {
        PhaseRelation {
            kind: RelationKind::SinusoidalOmega,
            alpha,
            omega,
        }
    }

    pub fn mark_free(alpha: f64) -> Self {
        PhaseRelation {
            kind: RelationKind::MarkFree,
            alpha,
            omega: PhaseAngle::ZERO,
        }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        PhaseRelation { alpha, ..self }
    }

    pub fn eval(&self, phi: PhaseAngle) -> PhaseAngle {
        eval_phase_relation(self, phi)
    }
}

pub fn eval_phase_relation(relation: &PhaseRelation, phi: PhaseAngle) -> PhaseAngle {
    let phi = phi.radians();
    let wobble = relation.alpha * (2.0 * phi).sin();
    match relation.kind {
        RelationKind::ConstantPi => PhaseAngle::PI,
        RelationKind::Sinusoidal => PhaseAngle::new(-2.0 * phi + PI + wobble),
        RelationKind::SinusoidalOmega => {
            PhaseAngle::new(-2.0 * phi + relation.omega.radians() + PI + wobble)
        }
        RelationKind::MarkFree => PhaseAngle::new(-2.0 * phi + wobble),
    }
}
