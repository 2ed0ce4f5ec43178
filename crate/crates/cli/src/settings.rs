//! Command-line flags and their JSON-config mirror.
//!
//! [`Settings`] is parsed both by clap (flags) and by serde (`--config`
//! files); keys are the flag names without the leading dashes. Flags
//! override file values.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use qrws::coin::RelationKind;
use qrws::walk::Circuit;

/// An angle as typed by the user, kept verbatim so configs round-trip.
///
/// Accepts decimal radians (`1.25`, `-0.5`) or multiples of π such as
/// `pi`, `-pi/2`, `3pi/2`, `2*pi`, `0.5pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Angle {
    token: String,
    radians: f64,
}

impl Angle {
    pub fn radians(&self) -> f64 {
        self.radians
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle must be finite, got `{s}`"))
    }
}

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.trim().to_ascii_lowercase().replace('π', "pi");
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let Some(at) = s.find("pi") else {
        return parse_number(&s);
    };
    let (head, tail) = (&s[..at], &s[at + 2..]);

    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => parse_number(h)?,
    };
    let denominator = match tail {
        "" => 1.0,
        t => {
            let d = t
                .strip_prefix('/')
                .ok_or_else(|| format!("unexpected `{t}` after pi in `{text}`"))?;
            let d = parse_number(d)?;
            if d == 0.0 {
                return Err(format!("zero denominator in `{text}`"));
            }
            d
        }
    };
    Ok(coefficient * PI / denominator)
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Angle {
            token: s.trim().to_string(),
            radians: parse_angle(s)?,
        })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token)
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.token)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an angle in radians or a string such as \"pi/2\"")
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Angle, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Angle, E> {
                // shortest round-trip text keeps the exact value
                v.to_string().parse().map_err(E::custom)
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Angle, E> {
                v.to_string().parse().map_err(E::custom)
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Angle, E> {
                v.to_string().parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Grid,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    Relative,
    Absolute,
}

/// Every tunable of every subcommand. Irrelevant keys are ignored by a
/// given subcommand.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Hypercube (and coin) dimension.
    #[arg(long = "m")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,

    /// Householder reflection phase.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Angle>,

    /// Additional phase of the traversing coin.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Angle>,

    /// Marking coin phase.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Angle>,

    /// Amplitude of the sin 2φ term in the phase relation.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,

    /// Phase relation: const-pi, eq6, eq12 or eq14.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationKind>,

    /// Circuit: standard or alt (no marking coin).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<Circuit>,

    /// Index of the marked node.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked: Option<usize>,

    /// Number of search iterations (defaults to the optimal count for m).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,

    /// Seed for random sampling.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Include the full node distribution in `run` output.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<bool>,

    /// Sweep mode: grid or random.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SweepKind>,

    /// Number of φ points (curve grid or sweep lattice side).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_phi: Option<usize>,

    /// Number of ζ lattice points in a grid sweep.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_zeta: Option<usize>,

    /// Sample count for random sweeps and verification.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Plateau cutoff mode: relative (to p_max) or absolute.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_mode: Option<ThresholdKind>,

    /// Plateau cutoff value.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,

    /// Lower end of the α search range.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_min: Option<f64>,

    /// Upper end of the α search range.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,

    /// Curve CSV (`phi,zeta,p`) to measure instead of simulating one.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    /// Significant digits for emitted reals.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($field:ident),* $(,)?) => {
        Settings { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Settings {
    /// Values from `self`, overridden by any that are set in `flags`.
    pub fn overlaid_with(self, flags: Settings) -> Settings {
        overlay!(self, flags;
            m, phi, zeta, omega, alpha, relation, circuit, marked, iterations, seed, out,
            distribution, mode, n_phi, n_zeta, samples, threshold_mode, threshold,
            alpha_min, alpha_max, input, precision,
        )
    }

    pub fn from_json(text: &str) -> Result<Settings, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("settings serialize")
    }
}

fn angle(token: &str) -> Angle {
    token.parse().expect("built-in angle token")
}

/// Fills unset keys relevant to `command` with their defaults.
pub fn with_defaults(mut s: Settings, command: &str) -> Settings {
    s.precision.get_or_insert(17);
    s.m.get_or_insert(4);
    match command {
        "run" => {
            s.phi.get_or_insert_with(|| angle("pi"));
            s.zeta.get_or_insert_with(|| angle("pi"));
            s.omega.get_or_insert_with(|| angle("0"));
            s.circuit.get_or_insert(Circuit::Standard);
            s.marked.get_or_insert(0);
            s.distribution.get_or_insert(false);
        }
        "sweep" => {
            s.omega.get_or_insert_with(|| angle("0"));
            match *s.mode.get_or_insert(SweepKind::Grid) {
                SweepKind::Grid => {
                    s.n_phi.get_or_insert(qrws::landscape::DEFAULT_GRID_SIDE);
                    s.n_zeta.get_or_insert(qrws::landscape::DEFAULT_GRID_SIDE);
                }
                SweepKind::Random => {
                    s.samples.get_or_insert(1000);
                    s.seed.get_or_insert(1);
                }
            }
        }
        "curve" | "width" => {
            s.omega.get_or_insert_with(|| angle("0"));
            s.relation.get_or_insert(RelationKind::ConstantPi);
            s.alpha.get_or_insert(0.0);
            s.circuit.get_or_insert(Circuit::Standard);
            s.n_phi.get_or_insert(qrws::landscape::DEFAULT_CURVE_POINTS);
            if command == "width" {
                s.threshold_mode.get_or_insert(ThresholdKind::Relative);
                s.threshold
                    .get_or_insert(qrws::landscape::DEFAULT_RELATIVE_THRESHOLD);
            }
        }
        "optimize-alpha" => {
            s.omega.get_or_insert_with(|| angle("0"));
            s.relation.get_or_insert(RelationKind::Sinusoidal);
            s.alpha_min.get_or_insert(-1.0);
            s.alpha_max.get_or_insert(1.0);
            s.n_phi.get_or_insert(qrws::landscape::DEFAULT_CURVE_POINTS);
            s.threshold_mode.get_or_insert(ThresholdKind::Relative);
            s.threshold
                .get_or_insert(qrws::landscape::DEFAULT_RELATIVE_THRESHOLD);
        }
        "verify" => {
            s.samples.get_or_insert(50);
            s.seed.get_or_insert(7);
        }
        _ => {}
    }
    s
}
