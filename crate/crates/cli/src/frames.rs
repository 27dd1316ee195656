//! Evaluating a configured interferometer in a list of frames.

use std::f64::consts::TAU;
use std::sync::Arc;
use std::time::Instant;

use abflux_core::holonomy::{potential_phase, reduced_flux, PathCheck};
use abflux_core::scenarios::{
    capacitor_null_electric_boost, capacitor_references, solenoid_references, solenoid_special_frame,
};
use abflux_core::spacetime::{BoostedSurface, BulgedSurface, MeshSurface};
use abflux_core::{
    boosted_configuration, ruled_surface_equal_time, Boost, Event, SpacetimeSurface, Tangent, ThreeVec,
    WorldlinePair,
};
use serde::Serialize;

use crate::config::{BoostSpec, Built, NamedBoost, RunConfig, ScenarioConfig, SurfaceConfig};
use crate::error::CliError;

/// One frame of a run. Column order here is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub v_over_c: f64,
    pub gamma: f64,
    pub phase_magnetic: f64,
    pub phase_electric: f64,
    pub phase_total: f64,
    /// Closed-form total where one exists, NaN for custom gauges.
    pub analytic_total: f64,
    pub abs_err: f64,
    pub panels_used: usize,
    pub wall_time_ms: f64,
    pub phase_total_mod_2pi: f64,
    /// The potential route in the same frame.
    pub phase_potential: f64,
}

pub const COLUMNS: [&str; 11] = [
    "v_over_c",
    "gamma",
    "phase_magnetic",
    "phase_electric",
    "phase_total",
    "analytic_total",
    "abs_err",
    "panels_used",
    "wall_time_ms",
    "phase_total_mod_2pi",
    "phase_potential",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    /// Largest `|total − first total| / |first total|` across rows.
    pub max_invariance_residual: f64,
    /// Largest `|flux total − potential total|` across rows.
    pub max_route_residual: f64,
}

pub fn summarize(rows: &[SweepRow]) -> Summary {
    let first = rows.first().map_or(0.0, |r| r.phase_total);
    let scale = if first == 0.0 { 1.0 } else { first.abs() };
    Summary {
        max_invariance_residual: rows.iter().map(|r| (r.phase_total - first).abs() / scale).fold(0.0, f64::max),
        max_route_residual: rows.iter().map(|r| (r.phase_total - r.phase_potential).abs()).fold(0.0, f64::max),
    }
}

/// v/c for each configured boost, with named frames resolved.
pub fn resolve_boosts(config: &RunConfig) -> Result<Vec<f64>, CliError> {
    if config.boosts.is_empty() {
        return Ok(vec![0.0]);
    }
    config
        .boosts
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let named = |r: abflux_core::Result<Boost>| {
                r.map(|b| b.velocity().x / b.c())
                    .map_err(|e| CliError::Config { path: format!("boosts[{i}]"), msg: e.to_string() })
            };
            match (b, &config.scenario) {
                (BoostSpec::Beta(v), _) => Ok(*v),
                (BoostSpec::Named(NamedBoost::SolenoidSpecial), ScenarioConfig::Solenoid(p)) => {
                    named(solenoid_special_frame(&p.scenario()))
                }
                (BoostSpec::Named(NamedBoost::CapacitorNullElectric), ScenarioConfig::Capacitor(p)) => {
                    named(capacitor_null_electric_boost(&p.scenario()))
                }
                (BoostSpec::Named(n), _) => {
                    Err(CliError::Config { path: format!("boosts[{i}]"), msg: format!("{n:?} does not apply here") })
                }
            }
        })
        .collect()
}

fn event(v: &[f64; 4]) -> Event {
    Event::new(v[0], v[1], v[2], v[3])
}

/// The surface to integrate over in the frame of `boost`.
fn surface(
    config: &RunConfig,
    built: &Built,
    pair: &WorldlinePair,
    boost: &Boost,
) -> Result<Arc<dyn SpacetimeSurface>, CliError> {
    Ok(match &config.surface {
        SurfaceConfig::EqualTimeRuled => Arc::new(ruled_surface_equal_time(pair)),
        SurfaceConfig::Bulged { bulge } => {
            let d = Tangent { t: bulge[0] / built.c, pos: ThreeVec::new(bulge[1], bulge[2], bulge[3]) };
            Arc::new(BulgedSurface::new(Arc::new(ruled_surface_equal_time(pair)), d))
        }
        SurfaceConfig::Mesh { nodes, boundary_tol } => {
            let bad = |e: abflux_core::Error| CliError::Config { path: "surface.nodes".into(), msg: e.to_string() };
            let mesh = MeshSurface::new(nodes.iter().map(|row| row.iter().map(event).collect()).collect()).map_err(bad)?;
            mesh.check_boundary(&built.pair, *boundary_tol).map_err(bad)?;
            Arc::new(BoostedSurface::new(Arc::new(mesh), *boost))
        }
    })
}

fn analytic_total(config: &RunConfig, boost: &Boost) -> f64 {
    let r = match &config.scenario {
        ScenarioConfig::Solenoid(p) => solenoid_references(&p.scenario(), boost),
        ScenarioConfig::Capacitor(p) => capacitor_references(&p.scenario(), boost),
        ScenarioConfig::CustomGauge(_) => return f64::NAN,
    };
    r.map_or(f64::NAN, |r| r.phi_sprime)
}

/// Computes both routes in each frame, in order.
pub fn evaluate(config: &RunConfig, built: &Built, betas: &[f64], timing: bool) -> Result<Vec<SweepRow>, CliError> {
    let check = if config.strict { PathCheck::Strict } else { PathCheck::Warn };
    let spec = &config.quadrature;
    betas
        .iter()
        .map(|&beta| {
            let start = Instant::now();
            let numerical = |e| CliError::Numerical { beta, source: e };
            let boost = Boost::along_x(beta, built.c).map_err(|e| CliError::Config {
                path: "boosts".into(),
                msg: e.to_string(),
            })?;
            let pair = built.pair.boosted(&boost).map_err(numerical)?;
            let cfg = boosted_configuration(&built.cfg, &boost);
            let srf = surface(config, built, &pair, &boost)?;
            let reduced = reduced_flux(srf.as_ref(), &cfg, spec).map_err(numerical)?;
            let flux = reduced.to_phase(&built.coupling);
            let phase_potential = potential_phase(&pair, &cfg, &built.coupling, spec, check).map_err(numerical)?;
            let analytic = analytic_total(config, &boost);
            log::info!("v/c = {beta}: total {:.12e} rad", flux.total);
            Ok(SweepRow {
                v_over_c: beta,
                gamma: boost.gamma(),
                phase_magnetic: flux.magnetic,
                phase_electric: flux.electric,
                phase_total: flux.total,
                analytic_total: analytic,
                abs_err: (flux.total - analytic).abs(),
                panels_used: reduced.panels,
                wall_time_ms: if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 },
                phase_total_mod_2pi: flux.total.rem_euclid(TAU),
                phase_potential,
            })
        })
        .collect()
}

/// `steps` evenly spaced values from `from` to `to`, both included.
pub fn sweep_grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n)
            .map(|i| {
                let w = i as f64 / (n - 1) as f64;
                from * (1.0 - w) + to * w
            })
            .collect(),
    }
}
