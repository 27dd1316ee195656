//! The two routes to the phase difference, and the consistency checks tying
//! them together.
//!
//! Sign conventions. The potential 1-form is `α = −V dt + A·dx`, so the
//! phase accumulated along a worldline is `(q/ħ)∫α`. The loop runs forward
//! along `a` and back along `b`:
//!
//! ```text
//! φ = −(q/ħ) [ ∫_a (V dt − A·dx) − ∫_b (V dt − A·dx) ]
//! ```
//!
//! A surface `σ(u, s)` with `σ(·,0) = a` and `σ(·,1) = b` has boundary `a − b`
//! when `(u, s)` carries the orientation `du∧ds`. Pulling `dα` back gives
//!
//! ```text
//! dα(σ_u, σ_s) = B·(x_u × x_s) − E·(t_u x_s − t_s x_u)
//! ```
//!
//! whose first term is the magnetic flux and second the electric flux. With
//! path `a` running counterclockwise around a solenoid this makes the
//! rest-frame phase `+qB0πr²/ħ`. The opposite global sign would be just as
//! consistent with Stokes' theorem; [`ORIENTATION`] pins the choice in one place.

use std::sync::Arc;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::em::{EmConfiguration, PotentialSample};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, integrate_unit_square, level_roots, AdaptiveOptions, GaussRule, Level2d};
use crate::quadrature::QuadratureSpec;
use crate::spacetime::{surface_jacobian, Event, SpacetimeSurface, Tangent, ThreeVec, Worldline, WorldlinePair, DEFAULT_FD_STEP};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Global sign relating the `du∧ds` orientation of the parameter square to
/// the loop `a − b`.
pub const ORIENTATION: f64 = 1.0;

/// Points per worldline at which the field is sampled by [`PathCheck`].
pub const PATH_CHECK_SAMPLES: usize = 512;

/// Charge and reduced Planck constant. Only the ratio `q/ħ` enters a phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub q: f64,
    pub hbar: f64,
}

impl Coupling {
    pub fn new(q: f64, hbar: f64) -> Self {
        Self { q, hbar }
    }

    /// `q/ħ = 1`, for unit-free comparisons.
    pub fn unit() -> Self {
        Self { q: 1.0, hbar: 1.0 }
    }

    /// A particle with charge `q` coulombs and the CODATA ħ.
    pub fn charge(q: f64) -> Self {
        Self { q, hbar: HBAR }
    }

    pub fn ratio(&self) -> f64 {
        self.q / self.hbar
    }
}

impl Default for Coupling {
    fn default() -> Self {
        Self::charge(ELEMENTARY_CHARGE)
    }
}

/// A flux-route phase split by field type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDecomposition {
    /// Radians.
    pub magnetic: f64,
    /// Radians.
    pub electric: f64,
    /// `magnetic + electric`, radians.
    pub total: f64,
    /// The flux before multiplying by `q/ħ`, V·s.
    pub reduced_flux: f64,
    pub charge: f64,
}

/// Magnetic and electric flux through a surface, before the `q/ħ` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedFlux {
    pub magnetic: f64,
    pub electric: f64,
    /// Estimated absolute quadrature error of the sum.
    pub error: f64,
    pub panels: usize,
}

impl ReducedFlux {
    pub fn total(&self) -> f64 {
        self.magnetic + self.electric
    }

    pub fn to_phase(&self, coupling: &Coupling) -> PhaseDecomposition {
        let k = coupling.ratio();
        let (magnetic, electric) = (k * self.magnetic, k * self.electric);
        PhaseDecomposition { magnetic, electric, total: magnetic + electric, reduced_flux: self.total(), charge: coupling.q }
    }
}

/// What to do when the field is found to be nonzero on a worldline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathCheck {
    Off,
    #[default]
    Warn,
    Strict,
}

/// Agreement between the loop integral of a 1-form and the surface integral
/// of its exterior derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesReport {
    pub loop_value: f64,
    pub surface_value: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub panels_used: usize,
}

impl StokesReport {
    pub fn new(loop_value: f64, surface_value: f64, panels_used: usize) -> Self {
        let abs_err = (loop_value - surface_value).abs();
        let scale = loop_value.abs().max(surface_value.abs());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        Self { loop_value, surface_value, abs_err, rel_err, panels_used }
    }
}

fn line_options(spec: &QuadratureSpec) -> AdaptiveOptions {
    AdaptiveOptions::new(spec.initial_panels.0, spec.tol, spec.max_depth)
}

fn check_path(w: &Worldline, cfg: &EmConfiguration, label: char, check: PathCheck) -> Result<()> {
    if check == PathCheck::Off {
        return Ok(());
    }
    let n = PATH_CHECK_SAMPLES;
    let taus = (0..=n).map(|i| i as f64 / n as f64).chain(w.knot_params());
    for tau in taus {
        let e = w.at(tau);
        if !cfg.field(&e).is_null() {
            match check {
                PathCheck::Strict => return Err(Error::FieldOnPath { path: label, t: e.t }),
                _ => {
                    log::warn!("nonzero field on path {label} at t = {:e}", e.t);
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// `∫ (V dt − A·dx)` along one worldline, split at its vertices and at every
/// crossing of a configuration interface.
pub fn worldline_action(w: &Worldline, cfg: &EmConfiguration, spec: &QuadratureSpec) -> Result<(f64, f64, usize)> {
    spec.validate()?;
    let rule = GaussRule::new(spec.base_order)?;
    let mut breaks = w.knot_params();
    let samples = spec.initial_panels.0 * spec.base_order;
    for g in cfg.interfaces() {
        breaks.extend(level_roots(&|tau| g(&w.at(tau)), 0.0, 1.0, samples));
    }
    let span = w.tf() - w.t0();
    let integrand = |tau: f64| -> Result<[f64; 1]> {
        let t = w.time_at(tau);
        let e = Event::at(t, w.position_at_time(t));
        let p = cfg.potential(&e);
        let vel = w.velocity_at_time(t);
        Ok([(p.v - p.a.dot(&vel)) * span])
    };
    let r = adaptive(&integrand, 0.0, 1.0, &breaks, &rule, &line_options(spec))?;
    Ok((r.value[0], r.error, r.panels))
}

/// `∮α = −[∫_a(V dt − A·dx) − ∫_b(V dt − A·dx)]` around the loop `a − b`,
/// in V·s. Returns the value, an error estimate and the panel count.
pub fn loop_integral(pair: &WorldlinePair, cfg: &EmConfiguration, spec: &QuadratureSpec) -> Result<(f64, f64, usize)> {
    let (sa, ea, na) = worldline_action(&pair.a, cfg, spec)?;
    let (sb, eb, nb) = worldline_action(&pair.b, cfg, spec)?;
    Ok((-(sa - sb), ea + eb, na + nb))
}

/// The phase from the potential route, in radians.
pub fn potential_phase(
    pair: &WorldlinePair,
    cfg: &EmConfiguration,
    coupling: &Coupling,
    spec: &QuadratureSpec,
    check: PathCheck,
) -> Result<f64> {
    check_path(&pair.a, cfg, 'a', check)?;
    check_path(&pair.b, cfg, 'b', check)?;
    Ok(coupling.ratio() * loop_integral(pair, cfg, spec)?.0)
}

/// `(magnetic, electric)` density of the pulled-back field 2-form at `(u, s)`.
pub fn flux_density<S: SpacetimeSurface + ?Sized>(srf: &S, cfg: &EmConfiguration, u: f64, s: f64) -> [f64; 2] {
    let e = srf.point(u, s);
    let (du, ds) = surface_jacobian(srf, u, s, DEFAULT_FD_STEP);
    let f = cfg.field(&e);
    let magnetic = f.b.dot(&du.pos.cross(&ds.pos));
    let electric = -f.e.dot(&(ds.pos * du.t - du.pos * ds.t));
    [ORIENTATION * magnetic, ORIENTATION * electric]
}

/// Magnetic and electric flux of the configuration's field through `srf`.
pub fn reduced_flux<S: SpacetimeSurface + ?Sized>(
    srf: &S,
    cfg: &EmConfiguration,
    spec: &QuadratureSpec,
) -> Result<ReducedFlux> {
    let pulled: Vec<Box<dyn Fn(f64, f64) -> f64 + Sync + '_>> = cfg
        .interfaces()
        .iter()
        .map(|g| Box::new(move |u: f64, s: f64| g(&srf.point(u, s))) as Box<dyn Fn(f64, f64) -> f64 + Sync>)
        .collect();
    let levels: Vec<Level2d<'_>> = pulled.iter().map(|b| b.as_ref() as Level2d<'_>).collect();
    let r = integrate_unit_square(&|u, s| flux_density(srf, cfg, u, s), &levels, &srf.u_breaks(), &srf.s_breaks(), spec)?;
    Ok(ReducedFlux { magnetic: r.value[0], electric: r.value[1], error: r.error, panels: r.panels })
}

/// The phase from the flux route, split into magnetic and electric parts.
pub fn flux_phase<S: SpacetimeSurface + ?Sized>(
    srf: &S,
    cfg: &EmConfiguration,
    coupling: &Coupling,
    spec: &QuadratureSpec,
) -> Result<PhaseDecomposition> {
    Ok(reduced_flux(srf, cfg, spec)?.to_phase(coupling))
}

/// `α(σ_x)` along one edge of the parameter square, `x ∈ [0, 1]`.
fn edge_integral<S: SpacetimeSurface + ?Sized>(
    srf: &S,
    cfg: &EmConfiguration,
    spec: &QuadratureSpec,
    edge: impl Fn(f64) -> (f64, f64) + Sync,
    along_u: bool,
    breaks: &[f64],
) -> Result<(f64, usize)> {
    let rule = GaussRule::new(spec.base_order)?;
    let mut cuts = breaks.to_vec();
    let samples = spec.initial_panels.0 * spec.base_order;
    for g in cfg.interfaces() {
        cuts.extend(level_roots(
            &|x| {
                let (u, s) = edge(x);
                g(&srf.point(u, s))
            },
            0.0,
            1.0,
            samples,
        ));
    }
    let integrand = |x: f64| -> Result<[f64; 1]> {
        let (u, s) = edge(x);
        let (du, ds) = surface_jacobian(srf, u, s, DEFAULT_FD_STEP);
        let d = if along_u { du } else { ds };
        Ok([one_form(&cfg.potential(&srf.point(u, s)), &d)])
    };
    let r = adaptive(&integrand, 0.0, 1.0, &cuts, &rule, &line_options(spec))?;
    Ok((r.value[0], r.panels))
}

fn one_form(p: &PotentialSample, d: &Tangent) -> f64 {
    -p.v * d.t + p.a.dot(&d.pos)
}

/// Compares `∮_{∂σ} α` with `∫_σ dα` for the configuration's potential and
/// field. The loop runs along all four edges of the parameter square, so
/// the surface need not have degenerate seams.
pub fn stokes_check<S: SpacetimeSurface + ?Sized>(
    srf: &S,
    cfg: &EmConfiguration,
    spec: &QuadratureSpec,
) -> Result<StokesReport> {
    let ub = srf.u_breaks();
    let sb = srf.s_breaks();
    let rev = |v: &[f64]| v.iter().map(|x| 1.0 - x).collect::<Vec<_>>();
    let (bottom, n0) = edge_integral(srf, cfg, spec, |x| (x, 0.0), true, &ub)?;
    let (right, n1) = edge_integral(srf, cfg, spec, |x| (1.0, x), false, &sb)?;
    let (top, n2) = edge_integral(srf, cfg, spec, |x| (1.0 - x, 1.0), true, &rev(&ub))?;
    let (left, n3) = edge_integral(srf, cfg, spec, |x| (0.0, 1.0 - x), false, &rev(&sb))?;
    // the reversed edges are traversed with x increasing, so the tangent flips
    let loop_value = ORIENTATION * (bottom + right - top - left);
    let flux = reduced_flux(srf, cfg, spec)?;
    Ok(StokesReport::new(loop_value, flux.total(), n0 + n1 + n2 + n3 + flux.panels))
}

pub type ScalarFn = Arc<dyn Fn(&Event) -> f64 + Send + Sync>;
/// `(∂χ/∂t, ∇χ)`.
pub type GradientFn = Arc<dyn Fn(&Event) -> (f64, ThreeVec) + Send + Sync>;

/// A scalar gauge function `χ(t, x)`, with an optional closed-form gradient.
#[derive(Clone)]
pub struct GaugeFunction {
    value: ScalarFn,
    gradient: Option<GradientFn>,
    dt: f64,
    dx: f64,
}

impl std::fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaugeFunction")
            .field("analytic_gradient", &self.gradient.is_some())
            .field("dt", &self.dt)
            .field("dx", &self.dx)
            .finish()
    }
}

impl GaugeFunction {
    /// Differentiated by central differences with steps of `1e-6` s and m.
    pub fn new(value: impl Fn(&Event) -> f64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), gradient: None, dt: 1e-6, dx: 1e-6 }
    }

    pub fn with_gradient(mut self, gradient: impl Fn(&Event) -> (f64, ThreeVec) + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_fd_steps(mut self, dt: f64, dx: f64) -> Self {
        self.dt = dt;
        self.dx = dx;
        self
    }

    pub fn value(&self, e: &Event) -> f64 {
        (self.value)(e)
    }

    pub fn gradient(&self, e: &Event) -> (f64, ThreeVec) {
        if let Some(g) = &self.gradient {
            return g(e);
        }
        let chi = |t: f64, pos: ThreeVec| (self.value)(&Event::at(t, pos));
        let dchi_dt = (chi(e.t + self.dt, e.pos) - chi(e.t - self.dt, e.pos)) / (2.0 * self.dt);
        let mut grad = ThreeVec::zeros();
        for j in 0..3 {
            let mut step = ThreeVec::zeros();
            step[j] = self.dx;
            grad[j] = (chi(e.t, e.pos + step) - chi(e.t, e.pos - step)) / (2.0 * self.dx);
        }
        (dchi_dt, grad)
    }
}

/// The same field in a new gauge: `V → V − ∂χ/∂t`, `A → A + ∇χ`.
pub fn gauge_shift(cfg: &EmConfiguration, chi: &GaugeFunction) -> EmConfiguration {
    let base = cfg.potential_fn().clone();
    let chi = chi.clone();
    cfg.with_potential(
        format!("{} (gauge shifted)", cfg.name()),
        Arc::new(move |e: &Event| {
            let p = base(e);
            let (dt, grad) = chi.gradient(e);
            PotentialSample { v: p.v - dt, a: p.a + grad }
        }),
    )
}

/// A smooth vector field on ordinary space.
pub trait VectorField3: Sync {
    fn value(&self, x: &ThreeVec) -> ThreeVec;

    /// `J[i][j] = ∂F_i/∂x_j`; central differences unless overridden.
    fn jacobian(&self, x: &ThreeVec) -> Matrix3<f64> {
        let h = 1e-5 * x.amax().max(1.0);
        let mut j = Matrix3::zeros();
        for k in 0..3 {
            let mut step = ThreeVec::zeros();
            step[k] = h;
            let d = (self.value(&(x + step)) - self.value(&(x - step))) / (2.0 * h);
            j.set_column(k, &d);
        }
        j
    }

    fn divergence(&self, x: &ThreeVec) -> f64 {
        self.jacobian(x).trace()
    }

    fn curl(&self, x: &ThreeVec) -> ThreeVec {
        let j = self.jacobian(x);
        ThreeVec::new(j[(2, 1)] - j[(1, 2)], j[(0, 2)] - j[(2, 0)], j[(1, 0)] - j[(0, 1)])
    }
}

impl<F: Fn(&ThreeVec) -> ThreeVec + Sync> VectorField3 for F {
    fn value(&self, x: &ThreeVec) -> ThreeVec {
        self(x)
    }
}

/// A parametric patch `r(u, v)` over the unit square in ordinary space.
pub trait Patch3: Sync {
    fn point(&self, u: f64, v: f64) -> ThreeVec;
    fn tangents(&self, u: f64, v: f64) -> (ThreeVec, ThreeVec);
}

/// Region and kind of a three-dimensional Stokes check.
pub enum Check3d<'a> {
    /// `∮ F·da` over the boundary of the box `[lo, hi]` vs `∫ ∇·F dV`.
    Divergence { lo: ThreeVec, hi: ThreeVec },
    /// `∮ F·dx` around the patch boundary vs `∫ (∇×F)·da`.
    Curl { patch: &'a dyn Patch3 },
}

/// Fixed tensor-product Gauss-Legendre integration over `[0,1]^D`.
fn tensor_gauss<const D: usize>(rule: &GaussRule, panels: usize, f: &dyn Fn([f64; D]) -> f64) -> f64 {
    let h = 1.0 / panels as f64;
    let pts: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let a = p as f64 * h;
            rule.nodes()
                .iter()
                .zip(rule.weights())
                .map(move |(x, w)| (a + 0.5 * h * (x + 1.0), 0.5 * h * w))
        })
        .collect();
    let m = pts.len();
    let mut idx = [0usize; D];
    let mut sum = 0.0;
    loop {
        let mut x = [0.0; D];
        let mut w = 1.0;
        for d in 0..D {
            x[d] = pts[idx[d]].0;
            w *= pts[idx[d]].1;
        }
        sum += w * f(x);
        let mut d = 0;
        loop {
            if d == D {
                return sum;
            }
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Ordinary-space instances of the same theorem: Gauss's divergence theorem
/// on a box and the Kelvin-Stokes theorem on a parametric patch.
///
/// Both sides use composite Gauss-Legendre with `spec.initial_panels.0`
/// panels of `spec.base_order` points per axis, which integrates polynomial
/// fields exactly once the order is high enough.
pub fn stokes_check_3d(check: &Check3d<'_>, field: &dyn VectorField3, spec: &QuadratureSpec) -> Result<StokesReport> {
    spec.validate()?;
    let rule = GaussRule::new(spec.base_order)?;
    let n = spec.initial_panels.0;
    match check {
        Check3d::Divergence { lo, hi } => {
            let ext = hi - lo;
            if ext.iter().any(|e| !(*e > 0.0)) {
                return Err(Error::Geometry("box must have positive extent on every axis".into()));
            }
            let vol = ext.x * ext.y * ext.z;
            let at = |x: [f64; 3]| lo + ext.component_mul(&ThreeVec::new(x[0], x[1], x[2]));
            let volume = vol * tensor_gauss::<3>(&rule, n, &|x| field.divergence(&at(x)));
            let mut boundary = 0.0;
            for axis in 0..3 {
                let (p, q) = ((axis + 1) % 3, (axis + 2) % 3);
                let face_area = ext[p] * ext[q];
                for (side, sign) in [(0.0, -1.0), (1.0, 1.0)] {
                    let flux = tensor_gauss::<2>(&rule, n, &|y| {
                        let mut x = [0.0; 3];
                        x[axis] = side;
                        x[p] = y[0];
                        x[q] = y[1];
                        field.value(&at(x))[axis]
                    });
                    boundary += sign * face_area * flux;
                }
            }
            Ok(StokesReport::new(boundary, volume, 7 * n.pow(2)))
        }
        Check3d::Curl { patch } => {
            let surface = tensor_gauss::<2>(&rule, n, &|x| {
                let (ru, rv) = patch.tangents(x[0], x[1]);
                field.curl(&patch.point(x[0], x[1])).dot(&ru.cross(&rv))
            });
            let edge = |p: &dyn Fn(f64) -> (f64, f64), along_u: bool| {
                tensor_gauss::<1>(&rule, n, &|x| {
                    let (u, v) = p(x[0]);
                    let (ru, rv) = patch.tangents(u, v);
                    field.value(&patch.point(u, v)).dot(if along_u { &ru } else { &rv })
                })
            };
            let loop_value = edge(&|x| (x, 0.0), true) + edge(&|x| (1.0, x), false)
                - edge(&|x| (x, 1.0), true)
                - edge(&|x| (0.0, x), false);
            Ok(StokesReport::new(loop_value, surface, n * n + 4 * n))
        }
    }
}
