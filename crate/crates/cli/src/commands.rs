use std::f64::consts::TAU;
use std::path::Path;

use qrws::coin::{CoinParams, PhaseAngle, PhaseRelation, RelationKind};
use qrws::landscape::{
    optimize_alpha, probability_curve_on, robustness_width, sample_landscape, AlphaSearch,
    CurvePoint, ProbabilityCurve, RobustnessReport, SampleMode, ThresholdMode, WidthThreshold,
};
use qrws::walk::{qrws_run, WalkConfig};

use crate::output::{csv_text, emit, format_real, JsonObject};
use crate::settings::{Settings, SweepKind, ThresholdKind};
use crate::CliError;

fn angle_of(a: &Option<crate::settings::Angle>) -> f64 {
    a.as_ref().map(|a| a.radians()).unwrap_or(0.0)
}

fn write(settings: &Settings, bytes: Vec<u8>) -> Result<(), CliError> {
    emit(settings.out.as_deref(), &bytes)
        .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn json_bytes(obj: &JsonObject) -> Vec<u8> {
    let mut text = obj.render();
    text.push('\n');
    text.into_bytes()
}

fn digits(s: &Settings) -> usize {
    s.precision.unwrap_or(17)
}

pub fn run(s: &Settings) -> Result<(), CliError> {
    let m = s.m.unwrap_or(4);
    let coin = CoinParams::new(angle_of(&s.phi), angle_of(&s.zeta), angle_of(&s.omega), m);
    let mut config = WalkConfig::new(coin)
        .with_circuit(s.circuit.unwrap_or_default())
        .with_marked(s.marked.unwrap_or(0));
    config.iterations = s.iterations;
    let result = qrws_run(&config)?;

    let mut obj = JsonObject::new(digits(s));
    obj.int("m", m as u64)
        .int("k", result.iterations_used as u64)
        .real("phi", coin.phi.radians())
        .real("zeta", coin.zeta.radians())
        .real("omega", coin.omega.radians())
        .string("circuit", config.circuit.name())
        .int("marked", config.marked as u64)
        .real("p", result.success_probability);
    if s.distribution.unwrap_or(false) {
        obj.reals("distribution", &result.node_distribution);
    }
    write(s, json_bytes(&obj))
}

pub fn sweep(s: &Settings) -> Result<(), CliError> {
    let m = s.m.unwrap_or(4);
    let omega = PhaseAngle::new(angle_of(&s.omega));
    let mode = match s.mode.unwrap_or(SweepKind::Grid) {
        SweepKind::Grid => SampleMode::Grid {
            n_phi: s.n_phi.unwrap_or(qrws::landscape::DEFAULT_GRID_SIDE),
            n_zeta: s.n_zeta.unwrap_or(qrws::landscape::DEFAULT_GRID_SIDE),
        },
        SweepKind::Random => SampleMode::Random {
            n_samples: s.samples.unwrap_or(1000),
            seed: s.seed.unwrap_or(1),
        },
    };
    let samples = sample_landscape(m, omega, mode)?;
    let d = digits(s);
    let rows = samples.iter().map(|x| {
        vec![
            format_real(x.phi.radians(), d),
            format_real(x.zeta.radians(), d),
            format_real(x.omega.radians(), d),
            x.m.to_string(),
            x.k.to_string(),
            format_real(x.p, d),
        ]
    });
    let bytes = csv_text(&["phi", "zeta", "omega", "m", "k", "p"], rows)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    write(s, bytes)
}

fn relation_of(s: &Settings, default: RelationKind) -> PhaseRelation {
    PhaseRelation {
        kind: s.relation.unwrap_or(default),
        alpha: s.alpha.unwrap_or(0.0),
        omega: PhaseAngle::new(angle_of(&s.omega)),
    }
}

fn simulate_curve(s: &Settings) -> Result<ProbabilityCurve, CliError> {
    Ok(probability_curve_on(
        s.m.unwrap_or(4),
        PhaseAngle::new(angle_of(&s.omega)),
        relation_of(s, RelationKind::ConstantPi),
        s.circuit.unwrap_or_default(),
        s.n_phi.unwrap_or(qrws::landscape::DEFAULT_CURVE_POINTS),
    )?)
}

pub fn curve(s: &Settings) -> Result<(), CliError> {
    let curve = simulate_curve(s)?;
    let d = digits(s);
    let rows = curve.points.iter().map(|pt| {
        vec![
            format_real(pt.phi, d),
            format_real(pt.zeta.radians(), d),
            format_real(pt.p, d),
        ]
    });
    let bytes =
        csv_text(&["phi", "zeta", "p"], rows).map_err(|e| CliError::Usage(e.to_string()))?;
    write(s, bytes)
}

/// Reads a `phi,zeta,p` curve file.
pub fn read_curve_points(path: &Path) -> Result<Vec<CurvePoint>, CliError> {
    let bad = |e: &dyn std::fmt::Display| {
        CliError::Usage(format!("cannot read curve {}: {e}", path.display()))
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(&e))?;
    let header = reader.headers().map_err(|e| bad(&e))?.clone();
    if header.iter().collect::<Vec<_>>() != ["phi", "zeta", "p"] {
        return Err(bad(&"expected header `phi,zeta,p`"));
    }
    let mut points: Vec<CurvePoint> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(&e))?;
        let field = |i: usize| -> Result<f64, CliError> {
            record[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| bad(&format!("line {}: {e}", points.len() + 2)))
        };
        points.push(CurvePoint {
            phi: field(0)?,
            zeta: PhaseAngle::new(field(1)?),
            p: field(2)?,
        });
    }
    if points.windows(2).any(|w| w[1].phi <= w[0].phi) {
        return Err(bad(&"phi values must be strictly increasing"));
    }
    if points.iter().any(|pt| pt.phi < 0.0 || pt.phi > TAU + 1e-9) {
        return Err(bad(&"phi values must lie in [0, 2π]"));
    }
    Ok(points)
}

fn threshold_of(s: &Settings) -> WidthThreshold {
    WidthThreshold {
        mode: match s.threshold_mode.unwrap_or(ThresholdKind::Relative) {
            ThresholdKind::Relative => ThresholdMode::RelativeToMax,
            ThresholdKind::Absolute => ThresholdMode::Absolute,
        },
        value: s
            .threshold
            .unwrap_or(qrws::landscape::DEFAULT_RELATIVE_THRESHOLD),
    }
}

fn report_json(
    s: &Settings,
    relation: &PhaseRelation,
    n_points: usize,
    r: &RobustnessReport,
) -> JsonObject {
    let mut obj = JsonObject::new(digits(s));
    obj.int("m", s.m.unwrap_or(4) as u64)
        .real("omega", angle_of(&s.omega))
        .string("relation", relation.kind.name())
        .int("n_phi", n_points as u64)
        .real("alpha", r.alpha)
        .real("width", r.width)
        .real("p_max", r.p_max)
        .real("phi_max", r.phi_max.radians())
        .string(
            "threshold_mode",
            match r.threshold_mode {
                ThresholdMode::RelativeToMax => "relative",
                ThresholdMode::Absolute => "absolute",
            },
        )
        .real("threshold_value", r.threshold_value)
        .real("cutoff", r.cutoff)
        .real("grid_spacing", r.grid_spacing);
    obj
}

pub fn width(s: &Settings) -> Result<(), CliError> {
    let curve = match &s.input {
        Some(path) => ProbabilityCurve {
            m: s.m.unwrap_or(4),
            omega: PhaseAngle::new(angle_of(&s.omega)),
            relation: relation_of(s, RelationKind::ConstantPi),
            circuit: s.circuit.unwrap_or_default(),
            points: read_curve_points(path)?,
        },
        None => simulate_curve(s)?,
    };
    let report = robustness_width(&curve, threshold_of(s))?;
    write(
        s,
        json_bytes(&report_json(
            s,
            &curve.relation,
            curve.points.len(),
            &report,
        )),
    )
}

pub fn optimize(s: &Settings) -> Result<(), CliError> {
    let family = s.relation.unwrap_or(RelationKind::Sinusoidal);
    let mut search = AlphaSearch::new(
        s.m.unwrap_or(4),
        PhaseAngle::new(angle_of(&s.omega)),
        family,
    );
    search.alpha_range = (s.alpha_min.unwrap_or(-1.0), s.alpha_max.unwrap_or(1.0));
    search.n_phi = s.n_phi.unwrap_or(qrws::landscape::DEFAULT_CURVE_POINTS);
    search.threshold = threshold_of(s);
    let report = optimize_alpha(&search)?;
    let mut obj = report_json(s, &search.relation(report.alpha), search.n_phi, &report);
    obj.real("alpha_min", search.alpha_range.0)
        .real("alpha_max", search.alpha_range.1);
    write(s, json_bytes(&obj))
}
