//! TOML run configuration.
//!
//! Every table rejects unknown keys. Speeds are fractions of `c`, angles are
//! in degrees and everything else is SI.

use std::path::{Path, PathBuf};

use abflux_core::holonomy::Coupling;
use abflux_core::scenarios::{CapacitorScenario, SolenoidScenario};
use abflux_core::synthetic::{Polynomial, PolynomialGauge};
use abflux_core::{
    CapacitorConfig, EmConfiguration, Event, QuadratureSpec, SolenoidConfig, Worldline, WorldlinePair, SPEED_OF_LIGHT,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub scenario: ScenarioConfig,
    /// Frames to evaluate, as v/c along x or a named frame. Empty means the rest frame only.
    #[serde(default)]
    pub boosts: Vec<BoostSpec>,
    #[serde(default)]
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub output: OutputConfig,
    /// Treat a nonzero field on a worldline as an error instead of a warning.
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioConfig {
    Solenoid(SolenoidParams),
    Capacitor(CapacitorParams),
    CustomGauge(CustomGaugeParams),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolenoidParams {
    pub b0: f64,
    pub radius: f64,
    pub square_half_side: f64,
    /// Average packet speed over c.
    pub packet_speed: f64,
    pub center_offset: [f64; 2],
    pub leg_split: [f64; 2],
    pub c: f64,
    pub q_over_hbar: f64,
}

impl Default for SolenoidParams {
    fn default() -> Self {
        let s = SolenoidScenario::default();
        Self {
            b0: s.solenoid.b0,
            radius: s.solenoid.radius,
            square_half_side: s.square_half_side,
            packet_speed: s.packet_speed / s.c,
            center_offset: s.center_offset,
            leg_split: s.leg_split,
            c: s.c,
            q_over_hbar: 1.0,
        }
    }
}

impl SolenoidParams {
    pub fn scenario(&self) -> SolenoidScenario {
        SolenoidScenario {
            solenoid: SolenoidConfig::new(self.b0, self.radius),
            square_half_side: self.square_half_side,
            packet_speed: self.packet_speed * self.c,
            center_offset: self.center_offset,
            leg_split: self.leg_split,
            c: self.c,
            coupling: Coupling::new(self.q_over_hbar, 1.0),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacitorParams {
    pub e: f64,
    pub theta_deg: f64,
    pub chord_length: f64,
    pub t_start: f64,
    pub duration: f64,
    /// Cosine taper on each pulse edge, s.
    pub ramp: f64,
    pub margin: f64,
    pub split_offset: f64,
    pub approach_time: f64,
    pub hold_padding: f64,
    pub drift_speed: f64,
    pub c: f64,
    pub q_over_hbar: f64,
}

impl Default for CapacitorParams {
    fn default() -> Self {
        let s = CapacitorScenario::default();
        let cap = &s.capacitor;
        Self {
            e: cap.e_mag,
            theta_deg: cap.theta.to_degrees(),
            chord_length: cap.chord_length,
            t_start: cap.t_start,
            duration: cap.duration,
            ramp: cap.ramp,
            margin: s.margin,
            split_offset: s.split_offset,
            approach_time: s.approach_time,
            hold_padding: s.hold_padding,
            drift_speed: s.drift_speed,
            c: s.c,
            q_over_hbar: 1.0,
        }
    }
}

impl CapacitorParams {
    pub fn scenario(&self) -> CapacitorScenario {
        CapacitorScenario {
            capacitor: CapacitorConfig {
                ramp: self.ramp,
                ..CapacitorConfig::new(self.e, self.theta_deg.to_radians(), self.chord_length, self.t_start, self.duration)
            },
            margin: self.margin,
            split_offset: self.split_offset,
            approach_time: self.approach_time,
            hold_padding: self.hold_padding,
            drift_speed: self.drift_speed,
            c: self.c,
            coupling: Coupling::new(self.q_over_hbar, 1.0),
        }
    }
}

/// One monomial `coeff · tᵃ xᵇ yᶜ zᵈ` with `powers = [a, b, c, d]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: f64,
    pub powers: [u32; 4],
}

fn polynomial(terms: &[Term]) -> Polynomial<4> {
    Polynomial::new(terms.iter().map(|t| (t.powers, t.coeff)).collect())
}

/// A polynomial gauge and two explicit worldlines given as `[t, x, y, z]` vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomGaugeParams {
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "one")]
    pub q_over_hbar: f64,
    #[serde(default)]
    pub v: Vec<Term>,
    #[serde(default)]
    pub ax: Vec<Term>,
    #[serde(default)]
    pub ay: Vec<Term>,
    #[serde(default)]
    pub az: Vec<Term>,
    pub path_a: Vec<[f64; 4]>,
    pub path_b: Vec<[f64; 4]>,
}

fn default_c() -> f64 {
    SPEED_OF_LIGHT
}

fn one() -> f64 {
    1.0
}

impl CustomGaugeParams {
    pub fn gauge(&self) -> PolynomialGauge {
        PolynomialGauge { v: polynomial(&self.v), a: [polynomial(&self.ax), polynomial(&self.ay), polynomial(&self.az)] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedBoost {
    /// The frame moving with the packets along the first leg of the solenoid square.
    SolenoidSpecial,
    /// The frame in which the capacitor's electric flux vanishes.
    CapacitorNullElectric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoostSpec {
    Beta(f64),
    Named(NamedBoost),
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    /// Straight chords between the packets at equal time in each frame.
    #[default]
    EqualTimeRuled,
    /// The equal-time ruled surface pushed out by `sin(πu)sin(πs)·bulge`,
    /// with `bulge = [c·dt, dx, dy, dz]` in metres.
    Bulged { bulge: [f64; 4] },
    /// A bilinear mesh of rest-frame events `[t, x, y, z]`, carried into each frame.
    Mesh {
        nodes: Vec<Vec<[f64; 4]>>,
        #[serde(default = "boundary_tol")]
        boundary_tol: f64,
    },
}

fn boundary_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// A scenario ready to evaluate.
pub struct Built {
    pub pair: WorldlinePair,
    pub cfg: EmConfiguration,
    pub coupling: Coupling,
    pub c: f64,
}

fn cfg_err(path: &'static str) -> impl Fn(abflux_core::Error) -> CliError {
    move |e| CliError::Config { path: path.into(), msg: e.to_string() }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = toml::Deserializer::new(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let msg = inner.message().trim().to_string();
            CliError::Config { path: if path == "." { "(root)".into() } else { path }, msg }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |path: &str, msg: String| Err(CliError::Config { path: path.into(), msg });
        if self.schema_version != SCHEMA_VERSION {
            return bad("schema_version", format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        for (i, b) in self.boosts.iter().enumerate() {
            match (b, &self.scenario) {
                (BoostSpec::Beta(v), _) if !(v.abs() < 1.0) => {
                    return bad(&format!("boosts[{i}]"), format!("|v/c| = {v} is not below 1"));
                }
                (BoostSpec::Named(NamedBoost::SolenoidSpecial), ScenarioConfig::Solenoid(_))
                | (BoostSpec::Named(NamedBoost::CapacitorNullElectric), ScenarioConfig::Capacitor(_))
                | (BoostSpec::Beta(_), _) => {}
                (BoostSpec::Named(n), _) => {
                    return bad(&format!("boosts[{i}]"), format!("{n:?} does not apply to this scenario kind"));
                }
            }
        }
        if let SurfaceConfig::Mesh { boundary_tol, .. } = &self.surface {
            if !(*boundary_tol > 0.0) {
                return bad("surface.boundary_tol", "must be positive".into());
            }
        }
        let q = &self.quadrature;
        if !(q.tol > 0.0) || q.base_order == 0 || q.initial_panels.0 == 0 || q.initial_panels.1 == 0 {
            return bad("quadrature", "tol, base_order and initial_panels must be positive".into());
        }
        Ok(())
    }

    /// Builds the rest-frame worldlines and configuration.
    pub fn build(&self) -> Result<Built, CliError> {
        match &self.scenario {
            ScenarioConfig::Solenoid(p) => {
                let s = p.scenario();
                let (pair, cfg) = abflux_core::scenarios::build_solenoid_scenario(&s).map_err(cfg_err("scenario"))?;
                Ok(Built { pair, cfg, coupling: s.coupling, c: s.c })
            }
            ScenarioConfig::Capacitor(p) => {
                let s = p.scenario();
                let (pair, cfg) = abflux_core::scenarios::build_capacitor_scenario(&s).map_err(cfg_err("scenario"))?;
                Ok(Built { pair, cfg, coupling: s.coupling, c: s.c })
            }
            ScenarioConfig::CustomGauge(p) => {
                let line = |v: &[[f64; 4]], path: &'static str| {
                    Worldline::new(v.iter().map(|e| Event::new(e[0], e[1], e[2], e[3])).collect(), p.c).map_err(cfg_err(path))
                };
                let pair = WorldlinePair::new(line(&p.path_a, "scenario.path_a")?, line(&p.path_b, "scenario.path_b")?)
                    .map_err(cfg_err("scenario"))?;
                Ok(Built { pair, cfg: p.gauge().configuration(), coupling: Coupling::new(p.q_over_hbar, 1.0), c: p.c })
            }
        }
    }
}
