//! Experiment drivers: config parsing, charging runs, duration sweeps,
//! self-discharge families, and deterministic CSV emission.
//!
//! A line-oriented `key = value` config selects the physics (spectrum,
//! noise, protocol) and the run controls (grid, integrator steps). The same
//! resolved config always produces byte-identical CSV: fixed step counts,
//! fixed 12-significant-digit formatting, and rows emitted in grid order
//! even when sweep points run on a worker pool.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::discharge::{discharge_curve, DischargeCurve, DischargeError};
use crate::linalg::{DensityMatrix, LinalgError};
use crate::lindblad::{
    default_step_count, evolve, EvolutionTrace, EvolveOptions, LindbladError, NoiseRates,
};
use crate::model::{Direction, ModelError, Protocol, Ramp, Spectrum};
use crate::observables::{charging_power, max_power};

/// Sample count of every self-discharge curve.
pub const DISCHARGE_SAMPLES: usize = 201;

/// Where a config assignment came from, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConfigSource {
    /// 1-based line of the config text.
    Line(usize),
    /// 1-based position in the override list.
    Override(usize),
}

impl fmt::Display for ConfigSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigSource::Line(n) => write!(f, "line {n}"),
            ConfigSource::Override(n) => write!(f, "override {n}"),
        }
    }
}

/// Errors raised while parsing or resolving a config.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{at}: expected `key = value`, got `{content}`")]
    Syntax { at: ConfigSource, content: String },
    #[error("{at}: unknown key `{key}`")]
    UnknownKey { at: ConfigSource, key: String },
    #[error("{at}: duplicate key `{key}`")]
    DuplicateKey { at: ConfigSource, key: String },
    #[error("{at}: invalid value for `{key}`: {message}")]
    InvalidValue {
        at: ConfigSource,
        key: String,
        message: String,
    },
    #[error("{at}: `{key}` conflicts with the `{preset}` preset, which fixes it")]
    PresetConflict {
        at: ConfigSource,
        key: String,
        preset: String,
    },
    #[error("{at}: unknown preset `{value}` (available: transmon)")]
    UnknownPreset { at: ConfigSource, value: String },
}

/// Errors raised while building a sweep grid.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("sweep bounds must be positive, finite, and ordered, got [{tau_min}, {tau_max}]")]
    InvalidBounds { tau_min: f64, tau_max: f64 },
    #[error("a sweep needs at least one point")]
    NoPoints,
}

/// Spacing rule of a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingKind {
    Linear,
    Log,
}

impl SpacingKind {
    fn name(&self) -> &'static str {
        match self {
            SpacingKind::Linear => "linear",
            SpacingKind::Log => "log",
        }
    }
}

/// Charging-duration grid of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    tau_min: f64,
    tau_max: f64,
    points: usize,
    spacing: SpacingKind,
}

impl SweepGrid {
    pub fn new(
        tau_min: f64,
        tau_max: f64,
        points: usize,
        spacing: SpacingKind,
    ) -> Result<Self, GridError> {
        let ordered =
            tau_min.is_finite() && tau_max.is_finite() && tau_min > 0.0 && tau_min <= tau_max;
        if !ordered {
            return Err(GridError::InvalidBounds { tau_min, tau_max });
        }
        if points == 0 {
            return Err(GridError::NoPoints);
        }
        Ok(Self {
            tau_min,
            tau_max,
            points,
            spacing,
        })
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> SpacingKind {
        self.spacing
    }

    /// Grid values in ascending order; the bounds are hit exactly.
    pub fn taus(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.tau_min];
        }
        (0..self.points)
            .map(|k| {
                if k == 0 {
                    self.tau_min
                } else if k == self.points - 1 {
                    self.tau_max
                } else {
                    let s = k as f64 / (self.points - 1) as f64;
                    match self.spacing {
                        SpacingKind::Linear => self.tau_min + (self.tau_max - self.tau_min) * s,
                        SpacingKind::Log => {
                            let ln_min = self.tau_min.ln();
                            (ln_min + (self.tau_max.ln() - ln_min) * s).exp()
                        }
                    }
                }
            })
            .collect()
    }
}

/// Fully resolved experiment parameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    spectrum: Spectrum,
    rates: NoiseRates,
    direction: Direction,
    ramp: Ramp,
    omega0: f64,
    tau: f64,
    hold: f64,
    grid: SweepGrid,
    steps: Option<usize>,
    sample_stride: Option<usize>,
    gap_ratios: Vec<f64>,
    tmax: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            spectrum: Spectrum::transmon(),
            rates: NoiseRates::none(),
            direction: Direction::Stable,
            ramp: Ramp::Linear,
            omega0: 1.0,
            tau: 10.0,
            hold: 0.0,
            grid: SweepGrid::new(1.0, 1000.0, 40, SpacingKind::Log).expect("default grid is valid"),
            steps: None,
            sample_stride: None,
            gap_ratios: vec![0.5, 0.95, 2.0],
            tmax: 5.0,
        }
    }
}

impl ExperimentConfig {
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn rates(&self) -> &NoiseRates {
        &self.rates
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn ramp(&self) -> Ramp {
        self.ramp
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn hold(&self) -> f64 {
        self.hold
    }

    pub fn grid(&self) -> &SweepGrid {
        &self.grid
    }

    /// Explicit RK4 step count, if one was configured.
    pub fn steps(&self) -> Option<usize> {
        self.steps
    }

    /// Explicit sample stride, if one was configured.
    pub fn sample_stride(&self) -> Option<usize> {
        self.sample_stride
    }

    pub fn gap_ratios(&self) -> &[f64] {
        &self.gap_ratios
    }

    pub fn tmax(&self) -> f64 {
        self.tmax
    }

    /// The single-run protocol described by the config.
    pub fn protocol(&self) -> Result<Protocol, ModelError> {
        self.protocol_for_tau(self.tau)
    }

    /// The config's protocol with the ramp duration replaced.
    pub fn protocol_for_tau(&self, tau: f64) -> Result<Protocol, ModelError> {
        Protocol::new(self.omega0, tau, self.ramp, self.direction, self.hold)
    }

    /// Configured step count, or the resolution rule for this duration.
    pub fn steps_for(&self, duration: f64) -> usize {
        self.steps
            .unwrap_or_else(|| default_step_count(self.omega0, duration))
    }

    /// Configured sample stride, or roughly 2000 samples per run.
    pub fn stride_for(&self, steps: usize) -> usize {
        self.sample_stride.unwrap_or_else(|| (steps / 2000).max(1))
    }

    /// Every key with its resolved value, in canonical order. Presets are
    /// expanded, so equivalent configs render identically.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let auto = |v: Option<usize>| v.map_or_else(|| "auto".to_string(), |n| n.to_string());
        let ratios = self
            .gap_ratios
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",");
        vec![
            ("omega1", self.spectrum.omega1().to_string()),
            ("omega2", self.spectrum.omega2().to_string()),
            ("omega3", self.spectrum.omega3().to_string()),
            ("gamma21", self.rates.decay_21().to_string()),
            ("gamma32", self.rates.decay_32().to_string()),
            ("gamma31", self.rates.decay_31().to_string()),
            ("deph2", self.rates.dephasing_2().to_string()),
            ("deph3", self.rates.dephasing_3().to_string()),
            ("direction", direction_name(self.direction).to_string()),
            ("ramp", ramp_name(self.ramp).to_string()),
            ("omega0", self.omega0.to_string()),
            ("tau", self.tau.to_string()),
            ("tau_min", self.grid.tau_min().to_string()),
            ("tau_max", self.grid.tau_max().to_string()),
            ("tau_points", self.grid.points().to_string()),
            ("spacing", self.grid.spacing().name().to_string()),
            ("hold", self.hold.to_string()),
            ("steps", auto(self.steps)),
            ("sample_stride", auto(self.sample_stride)),
            ("gap_ratios", ratios),
            ("tmax", self.tmax.to_string()),
        ]
    }
}

fn direction_name(direction: Direction) -> &'static str {
    match direction {
        Direction::Stable => "stable",
        Direction::Unstable => "unstable",
    }
}

fn ramp_name(ramp: Ramp) -> &'static str {
    match ramp {
        Ramp::Linear => "linear",
        Ramp::Smoothstep => "smoothstep",
    }
}

const KEYS: [&str; 22] = [
    "preset",
    "omega1",
    "omega2",
    "omega3",
    "gamma21",
    "gamma32",
    "gamma31",
    "deph2",
    "deph3",
    "direction",
    "ramp",
    "omega0",
    "tau",
    "tau_min",
    "tau_max",
    "tau_points",
    "spacing",
    "hold",
    "steps",
    "sample_stride",
    "gap_ratios",
    "tmax",
];

/// Keys a preset pins down; setting them alongside `preset` is an error.
/// The noise knob `gamma21` and the weak direct channel `gamma31` stay free.
const PRESET_FIXED_KEYS: [&str; 6] = ["omega1", "omega2", "omega3", "gamma32", "deph2", "deph3"];

#[derive(Debug, Clone)]
struct Assignment {
    key: &'static str,
    value: String,
    source: ConfigSource,
}

fn split_assignment(text: &str, source: ConfigSource) -> Result<Option<Assignment>, ConfigError> {
    let uncommented = match text.find('#') {
        Some(pos) => &text[..pos],
        None => text,
    };
    let trimmed = uncommented.trim();
    if trimmed.is_empty() {
        return Ok(None);
    }
    let (raw_key, raw_value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
        at: source,
        content: trimmed.to_string(),
    })?;
    let key = raw_key.trim();
    let key = KEYS
        .iter()
        .find(|k| **k == key)
        .copied()
        .ok_or_else(|| ConfigError::UnknownKey {
            at: source,
            key: key.to_string(),
        })?;
    Ok(Some(Assignment {
        key,
        value: raw_value.trim().to_string(),
        source,
    }))
}

/// Parse config text into a fully resolved [`ExperimentConfig`].
///
/// The format is UTF-8 lines of `key = value`; `#` starts a comment
/// anywhere in a line; blank lines are skipped; unknown and duplicate keys
/// are errors; missing keys take their documented defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_with_overrides::<&str>(text, &[])
}

/// Like [`parse_config`], with `key=value` overrides applied on top of the
/// text in the order given. Overrides replace file values silently; a
/// malformed or unknown override is an error.
pub fn parse_config_with_overrides<S: AsRef<str>>(
    text: &str,
    overrides: &[S],
) -> Result<ExperimentConfig, ConfigError> {
    let mut assignments = Vec::new();
    let mut seen: HashMap<&'static str, ConfigSource> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let source = ConfigSource::Line(i + 1);
        if let Some(assignment) = split_assignment(line, source)? {
            if seen.insert(assignment.key, source).is_some() {
                return Err(ConfigError::DuplicateKey {
                    at: source,
                    key: assignment.key.to_string(),
                });
            }
            assignments.push(assignment);
        }
    }
    for (i, entry) in overrides.iter().enumerate() {
        let source = ConfigSource::Override(i + 1);
        let assignment =
            split_assignment(entry.as_ref(), source)?.ok_or_else(|| ConfigError::Syntax {
                at: source,
                content: entry.as_ref().to_string(),
            })?;
        assignments.push(assignment);
    }
    resolve(assignments)
}

fn parse_f64(assignment: &Assignment) -> Result<f64, ConfigError> {
    let invalid = |message: String| ConfigError::InvalidValue {
        at: assignment.source,
        key: assignment.key.to_string(),
        message,
    };
    let value: f64 = assignment
        .value
        .parse()
        .map_err(|_| invalid(format!("`{}` is not a number", assignment.value)))?;
    if !value.is_finite() {
        return Err(invalid("must be finite".to_string()));
    }
    Ok(value)
}

fn parse_f64_where(
    assignment: &Assignment,
    requirement: &str,
    accept: impl Fn(f64) -> bool,
) -> Result<f64, ConfigError> {
    let value = parse_f64(assignment)?;
    if !accept(value) {
        return Err(ConfigError::InvalidValue {
            at: assignment.source,
            key: assignment.key.to_string(),
            message: format!("must be {requirement}, got {value}"),
        });
    }
    Ok(value)
}

fn parse_count(assignment: &Assignment) -> Result<usize, ConfigError> {
    let invalid = |message: String| ConfigError::InvalidValue {
        at: assignment.source,
        key: assignment.key.to_string(),
        message,
    };
    let value: usize = assignment
        .value
        .parse()
        .map_err(|_| invalid(format!("`{}` is not a positive integer", assignment.value)))?;
    if value == 0 {
        return Err(invalid("must be at least 1".to_string()));
    }
    Ok(value)
}

fn parse_choice<T: Copy>(assignment: &Assignment, choices: &[(&str, T)]) -> Result<T, ConfigError> {
    choices
        .iter()
        .find(|(name, _)| *name == assignment.value)
        .map(|(_, v)| *v)
        .ok_or_else(|| ConfigError::InvalidValue {
            at: assignment.source,
            key: assignment.key.to_string(),
            message: format!(
                "`{}` is not one of {}",
                assignment.value,
                choices
                    .iter()
                    .map(|(name, _)| format!("`{name}`"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        })
}

fn parse_ratio_list(assignment: &Assignment) -> Result<Vec<f64>, ConfigError> {
    let invalid = |message: String| ConfigError::InvalidValue {
        at: assignment.source,
        key: assignment.key.to_string(),
        message,
    };
    let mut ratios = Vec::new();
    for part in assignment.value.split(',') {
        let part = part.trim();
        let ratio: f64 = part
            .parse()
            .map_err(|_| invalid(format!("`{part}` is not a number")))?;
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(invalid(format!("gap ratios must be positive, got {ratio}")));
        }
        ratios.push(ratio);
    }
    if ratios.is_empty() {
        return Err(invalid("the list is empty".to_string()));
    }
    Ok(ratios)
}

fn resolve(assignments: Vec<Assignment>) -> Result<ExperimentConfig, ConfigError> {
    // The preset acts order-independently: scan for it first so a preset
    // declared on a later line still conflicts with earlier explicit keys.
    let preset = assignments.iter().rfind(|a| a.key == "preset").cloned();
    if let Some(preset) = &preset {
        if preset.value != "transmon" {
            return Err(ConfigError::UnknownPreset {
                at: preset.source,
                value: preset.value.clone(),
            });
        }
        if let Some(conflict) = assignments
            .iter()
            .find(|a| PRESET_FIXED_KEYS.contains(&a.key))
        {
            return Err(ConfigError::PresetConflict {
                at: conflict.source,
                key: conflict.key.to_string(),
                preset: preset.value.clone(),
            });
        }
    }

    let mut omega = (0.0, 1.0, 1.95);
    let mut decay = (0.0, 0.0, 0.0);
    let mut dephasing = (0.0, 0.0);
    let mut bounds = (1.0, 1000.0);
    let mut points = 40usize;
    let mut spacing = SpacingKind::Log;
    let mut config = ExperimentConfig::default();
    let mut sources: HashMap<&'static str, ConfigSource> = HashMap::new();

    // Later assignments replace earlier ones, so overrides win.
    for a in &assignments {
        sources.insert(a.key, a.source);
        match a.key {
            "preset" => {}
            "omega1" => omega.0 = parse_f64(a)?,
            "omega2" => omega.1 = parse_f64(a)?,
            "omega3" => omega.2 = parse_f64(a)?,
            "gamma21" => decay.0 = parse_f64_where(a, "a non-negative rate", |v| v >= 0.0)?,
            "gamma32" => decay.1 = parse_f64_where(a, "a non-negative rate", |v| v >= 0.0)?,
            "gamma31" => decay.2 = parse_f64_where(a, "a non-negative rate", |v| v >= 0.0)?,
            "deph2" => dephasing.0 = parse_f64_where(a, "a non-negative rate", |v| v >= 0.0)?,
            "deph3" => dephasing.1 = parse_f64_where(a, "a non-negative rate", |v| v >= 0.0)?,
            "direction" => {
                config.direction = parse_choice(
                    a,
                    &[
                        ("stable", Direction::Stable),
                        ("unstable", Direction::Unstable),
                    ],
                )?
            }
            "ramp" => {
                config.ramp = parse_choice(
                    a,
                    &[("linear", Ramp::Linear), ("smoothstep", Ramp::Smoothstep)],
                )?
            }
            "omega0" => config.omega0 = parse_f64_where(a, "positive", |v| v > 0.0)?,
            "tau" => config.tau = parse_f64_where(a, "positive", |v| v > 0.0)?,
            "tau_min" => bounds.0 = parse_f64_where(a, "positive", |v| v > 0.0)?,
            "tau_max" => bounds.1 = parse_f64_where(a, "positive", |v| v > 0.0)?,
            "tau_points" => points = parse_count(a)?,
            "spacing" => {
                spacing = parse_choice(
                    a,
                    &[("linear", SpacingKind::Linear), ("log", SpacingKind::Log)],
                )?
            }
            "hold" => config.hold = parse_f64_where(a, "non-negative", |v| v >= 0.0)?,
            "steps" => config.steps = Some(parse_count(a)?),
            "sample_stride" => config.sample_stride = Some(parse_count(a)?),
            "gap_ratios" => config.gap_ratios = parse_ratio_list(a)?,
            "tmax" => config.tmax = parse_f64_where(a, "positive", |v| v > 0.0)?,
            _ => unreachable!("split_assignment only admits known keys"),
        }
    }

    // Cross-key validation reports at the latest line that shaped the value.
    let blame = |keys: &[&str], sources: &HashMap<&'static str, ConfigSource>| {
        keys.iter()
            .filter_map(|k| sources.get(k))
            .max()
            .copied()
            .unwrap_or(ConfigSource::Line(1))
    };

    if preset.is_some() {
        config.spectrum = Spectrum::transmon();
        config.rates = NoiseRates::transmon(decay.0)
            .and_then(|r| r.with_decay_31(decay.2))
            .map_err(|e| ConfigError::InvalidValue {
                at: blame(&["gamma21", "gamma31"], &sources),
                key: "gamma21".to_string(),
                message: e.to_string(),
            })?;
    } else {
        config.spectrum =
            Spectrum::new(omega.0, omega.1, omega.2).map_err(|e| ConfigError::InvalidValue {
                at: blame(&["omega1", "omega2", "omega3"], &sources),
                key: "omega1/omega2/omega3".to_string(),
                message: e.to_string(),
            })?;
        config.rates = NoiseRates::new(decay.0, decay.1, decay.2, dephasing.0, dephasing.1)
            .map_err(|e| ConfigError::InvalidValue {
                at: blame(
                    &["gamma21", "gamma32", "gamma31", "deph2", "deph3"],
                    &sources,
                ),
                key: "gamma21/gamma32/gamma31/deph2/deph3".to_string(),
                message: e.to_string(),
            })?;
    }
    config.grid = SweepGrid::new(bounds.0, bounds.1, points, spacing).map_err(|e| {
        ConfigError::InvalidValue {
            at: blame(&["tau_min", "tau_max", "tau_points"], &sources),
            key: "tau_min/tau_max".to_string(),
            message: e.to_string(),
        }
    })?;
    Ok(config)
}

/// Errors from running an experiment on a valid config.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lindblad(#[from] LindbladError),
    #[error(transparent)]
    Discharge(#[from] DischargeError),
    #[error("could not build the worker pool: {0}")]
    WorkerPool(String),
}

/// Integrate one charging run from the ground state and return its trace.
pub fn run_charge(config: &ExperimentConfig) -> Result<EvolutionTrace, ExperimentError> {
    let protocol = config.protocol()?;
    let duration = protocol.total_duration();
    let steps = config.steps_for(duration);
    let options = EvolveOptions::new(duration, steps, config.stride_for(steps));
    let initial = DensityMatrix::pure(1)?;
    Ok(evolve(
        &initial,
        Some(&protocol),
        config.rates(),
        config.spectrum(),
        &options,
    )?)
}

/// One completed sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub tau: f64,
    /// Stored work at the end of the run.
    pub ergotropy: f64,
    /// Stored work over the capacity of the spectrum.
    pub ergotropy_ratio: f64,
    /// Stored work per unit charging time.
    pub power: f64,
    /// Power over the quantum-speed-limit maximum.
    pub power_ratio: f64,
    /// Largest intermediate-level occupation along the trajectory.
    pub max_p2: f64,
    /// Largest `|tr(rho) - 1|` along the trajectory.
    pub trace_error_max: f64,
}

/// A sweep point that failed; the sweep carries on past it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPointFailure {
    pub tau: f64,
    pub message: String,
}

fn sweep_point(config: &ExperimentConfig, tau: f64) -> Result<SweepPoint, SweepPointFailure> {
    let fail = |message: String| SweepPointFailure { tau, message };
    let protocol = config
        .protocol_for_tau(tau)
        .map_err(|e| fail(e.to_string()))?;
    let duration = protocol.total_duration();
    let steps = config.steps_for(duration);
    let options = EvolveOptions::new(duration, steps, config.stride_for(steps));
    let initial = DensityMatrix::pure(1).map_err(|e| fail(e.to_string()))?;
    let trace = evolve(
        &initial,
        Some(&protocol),
        config.rates(),
        config.spectrum(),
        &options,
    )
    .map_err(|e| fail(e.to_string()))?;
    let last = trace.last();
    let power = charging_power(last.ergotropy, tau).map_err(|e| fail(e.to_string()))?;
    let max_p2 = trace.max_population(2).map_err(|e| fail(e.to_string()))?;
    Ok(SweepPoint {
        tau,
        ergotropy: last.ergotropy,
        ergotropy_ratio: last.ergotropy / config.spectrum().max_ergotropy(),
        power,
        power_ratio: power / max_power(config.spectrum()),
        max_p2,
        trace_error_max: trace.max_trace_error(),
    })
}

/// Run one charging evolution per grid point, in parallel, and return the
/// outcomes in ascending grid order. `workers` caps the pool size; `None`
/// (or zero) lets the pool pick. A failed point becomes an `Err` row and
/// the remaining points still run.
pub fn run_sweep(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<Result<SweepPoint, SweepPointFailure>>, ExperimentError> {
    let taus = config.grid().taus();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| ExperimentError::WorkerPool(e.to_string()))?;
    Ok(pool.install(|| {
        taus.par_iter()
            .map(|&tau| sweep_point(config, tau))
            .collect()
    }))
}

/// Self-discharge of one gap-ratio variant of the battery.
#[derive(Debug, Clone)]
pub struct GapRatioCurve {
    /// Upper-to-lower gap ratio of the spectrum `(0, 1, 1 + ratio)`.
    pub gap_ratio: f64,
    pub curve: DischargeCurve,
}

/// Evaluate the closed-form discharge of a fully charged battery for every
/// configured gap ratio, sampling `gamma21 * t` in `[0, tmax]`.
pub fn run_self_discharge(
    config: &ExperimentConfig,
) -> Result<Vec<GapRatioCurve>, ExperimentError> {
    config
        .gap_ratios()
        .iter()
        .map(|&gap_ratio| {
            let spectrum = Spectrum::new(0.0, 1.0, 1.0 + gap_ratio)?;
            let curve =
                discharge_curve(&spectrum, config.rates(), config.tmax(), DISCHARGE_SAMPLES)?;
            Ok(GapRatioCurve { gap_ratio, curve })
        })
        .collect()
}

/// Scientific notation with 12 significant digits, the fixed CSV format.
pub fn format_sci(value: f64) -> String {
    format!("{value:.11e}")
}

/// Per-timestep CSV of a charging trace.
pub fn write_charge_csv<W: Write + ?Sized>(out: &mut W, trace: &EvolutionTrace) -> io::Result<()> {
    writeln!(out, "t,P1,P2,P3,ergotropy,trace_error")?;
    for s in trace.samples() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sci(s.t),
            format_sci(s.populations[0]),
            format_sci(s.populations[1]),
            format_sci(s.populations[2]),
            format_sci(s.ergotropy),
            format_sci(s.trace_error),
        )?;
    }
    Ok(())
}

/// Per-duration CSV of a sweep; failed points render as literal `error`
/// cells after their grid value.
pub fn write_sweep_csv<W: Write + ?Sized>(
    out: &mut W,
    rows: &[Result<SweepPoint, SweepPointFailure>],
) -> io::Result<()> {
    writeln!(
        out,
        "tau,ergotropy,ergotropy_ratio,power,power_ratio,max_P2,trace_error_max"
    )?;
    for row in rows {
        match row {
            Ok(p) => writeln!(
                out,
                "{},{},{},{},{},{},{}",
                format_sci(p.tau),
                format_sci(p.ergotropy),
                format_sci(p.ergotropy_ratio),
                format_sci(p.power),
                format_sci(p.power_ratio),
                format_sci(p.max_p2),
                format_sci(p.trace_error_max),
            )?,
            Err(f) => writeln!(
                out,
                "{},error,error,error,error,error,error",
                format_sci(f.tau)
            )?,
        }
    }
    Ok(())
}

/// CSV of a family of self-discharge curves, one block per gap ratio.
pub fn write_discharge_csv<W: Write + ?Sized>(
    out: &mut W,
    curves: &[GapRatioCurve],
) -> io::Result<()> {
    writeln!(
        out,
        "gamma21_t,gap_ratio,P2,P3,ergotropy,ergotropy_normalized"
    )?;
    for family in curves {
        for s in family.curve.samples() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                format_sci(s.scaled_time),
                format_sci(family.gap_ratio),
                format_sci(s.p2),
                format_sci(s.p3),
                format_sci(s.ergotropy),
                format_sci(s.normalized),
            )?;
        }
    }
    Ok(())
}
