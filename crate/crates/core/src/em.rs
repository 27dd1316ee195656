//! Field and gauge-potential models for the solenoid and the pulsed
//! capacitor, and their views from boosted frames.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::{Boost, Event, ThreeVec};

/// Electric (V/m) and magnetic (T) field at an event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub e: ThreeVec,
    pub b: ThreeVec,
}

impl FieldSample {
    pub fn zero() -> Self {
        Self { e: ThreeVec::zeros(), b: ThreeVec::zeros() }
    }

    pub fn is_null(&self) -> bool {
        self.e == ThreeVec::zeros() && self.b == ThreeVec::zeros()
    }

    /// `E·B`, a Lorentz invariant.
    pub fn dot_invariant(&self) -> f64 {
        self.e.dot(&self.b)
    }

    /// `|E|² − c²|B|²`, a Lorentz invariant.
    pub fn square_invariant(&self, c: f64) -> f64 {
        self.e.norm_squared() - c * c * self.b.norm_squared()
    }
}

/// Scalar potential `V` (V) and vector potential `A` (V·s/m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    pub v: f64,
    pub a: ThreeVec,
}

impl PotentialSample {
    pub fn zero() -> Self {
        Self { v: 0.0, a: ThreeVec::zeros() }
    }
}

/// Coarse location of an event relative to the field-carrying region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Inside,
    Outside,
    BoundaryAdjacent,
}

pub type FieldFn = Arc<dyn Fn(&Event) -> FieldSample + Send + Sync>;
pub type PotentialFn = Arc<dyn Fn(&Event) -> PotentialSample + Send + Sync>;
pub type LevelFn = Arc<dyn Fn(&Event) -> f64 + Send + Sync>;

/// Events with `|level| < BOUNDARY_BAND` are labelled boundary-adjacent.
pub const BOUNDARY_BAND: f64 = 1e-12;

/// A field together with a gauge potential that generates it.
///
/// `interfaces` are scalar level functions whose zero sets carry every
/// discontinuity of the field (and of its first derivatives); the flux
/// quadrature splits its panels at their roots.
#[derive(Clone)]
pub struct EmConfiguration {
    name: String,
    field: FieldFn,
    potential: PotentialFn,
    interfaces: Vec<LevelFn>,
}

impl fmt::Debug for EmConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmConfiguration")
            .field("name", &self.name)
            .field("interfaces", &self.interfaces.len())
            .finish()
    }
}

impl EmConfiguration {
    pub fn new(name: impl Into<String>, field: FieldFn, potential: PotentialFn) -> Self {
        Self { name: name.into(), field, potential, interfaces: Vec::new() }
    }

    pub fn with_interfaces(mut self, interfaces: Vec<LevelFn>) -> Self {
        self.interfaces = interfaces;
        self
    }

    /// Zero field, zero potential.
    pub fn vacuum() -> Self {
        Self::new(
            "vacuum",
            Arc::new(|_: &Event| FieldSample::zero()),
            Arc::new(|_: &Event| PotentialSample::zero()),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self, e: &Event) -> FieldSample {
        (self.field)(e)
    }

    pub fn potential(&self, e: &Event) -> PotentialSample {
        (self.potential)(e)
    }

    pub fn interfaces(&self) -> &[LevelFn] {
        &self.interfaces
    }

    pub fn potential_fn(&self) -> &PotentialFn {
        &self.potential
    }

    pub fn field_fn(&self) -> &FieldFn {
        &self.field
    }

    pub(crate) fn with_potential(&self, name: String, potential: PotentialFn) -> Self {
        Self { name, field: self.field.clone(), potential, interfaces: self.interfaces.clone() }
    }

    pub fn region_hint(&self, e: &Event) -> Region {
        if self.interfaces.iter().any(|g| g(e).abs() < BOUNDARY_BAND) {
            Region::BoundaryAdjacent
        } else if self.field(e).is_null() {
            Region::Outside
        } else {
            Region::Inside
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolenoidConfig {
    /// Interior field magnitude (T).
    pub b0: f64,
    /// Radius (m).
    pub radius: f64,
    pub axis_point: ThreeVec,
    /// Axis direction; normalized on use.
    pub axis_dir: ThreeVec,
}

impl SolenoidConfig {
    /// An infinite solenoid along the z-axis through the origin.
    pub fn new(b0: f64, radius: f64) -> Self {
        Self { b0, radius, axis_point: ThreeVec::zeros(), axis_dir: ThreeVec::z() }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.b0.is_finite() {
            return Err(Error::NonFinite("solenoid field"));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidParameter(format!("solenoid radius must be positive, got {}", self.radius)));
        }
        if !(self.axis_dir.norm() > 0.0 && self.axis_dir.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidParameter("solenoid axis direction must be nonzero".into()));
        }
        Ok(())
    }

    /// Magnetic flux through the cross section, `B0 π r²`.
    pub fn flux(&self) -> f64 {
        self.b0 * PI * self.radius * self.radius
    }
}

/// Field `B0` along the axis inside `ρ < r`, zero outside, no electric field.
/// Symmetric gauge: `A_φ = B0ρ/2` inside, `B0r²/(2ρ)` outside, `V = 0`.
pub fn solenoid_configuration(cfg: &SolenoidConfig) -> Result<EmConfiguration> {
    cfg.validate()?;
    let axis = cfg.axis_dir.normalize();
    let p0 = cfg.axis_point;
    let (b0, r) = (cfg.b0, cfg.radius);
    let r2 = r * r;
    let radial = move |e: &Event| {
        let d = e.pos - p0;
        d - axis * axis.dot(&d)
    };
    let field: FieldFn = Arc::new(move |e: &Event| {
        if radial(e).norm_squared() < r2 {
            FieldSample { e: ThreeVec::zeros(), b: axis * b0 }
        } else {
            FieldSample::zero()
        }
    });
    let potential: PotentialFn = Arc::new(move |e: &Event| {
        let rho = radial(e);
        let rho2 = rho.norm_squared();
        let scale = if rho2 < r2 { 0.5 * b0 } else { 0.5 * b0 * r2 / rho2 };
        PotentialSample { v: 0.0, a: axis.cross(&rho) * scale }
    });
    let level: LevelFn = Arc::new(move |e: &Event| (radial(e).norm_squared() - r2) / r2);
    Ok(EmConfiguration::new("solenoid", field, potential).with_interfaces(vec![level]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacitorConfig {
    /// Field magnitude inside the slab during the pulse (V/m).
    pub e_mag: f64,
    /// Tilt of the field out of the x-axis towards z (rad).
    pub theta: f64,
    /// Mid-plane point of the slab.
    pub center: ThreeVec,
    /// Plate separation (m).
    pub gap: f64,
    /// Pulse start (s).
    pub t_start: f64,
    /// Pulse duration (s).
    pub duration: f64,
    /// Length of the packet chord inside the slab (m).
    pub chord_length: f64,
    /// Width of an optional cosine taper on each pulse edge (s); zero for a rectangular pulse.
    pub ramp: f64,
}

impl CapacitorConfig {
    /// A slab centred at the origin with `gap = L cos 2θ`.
    pub fn new(e_mag: f64, theta: f64, chord_length: f64, t_start: f64, duration: f64) -> Self {
        Self {
            e_mag,
            theta,
            center: ThreeVec::zeros(),
            gap: chord_length * (2.0 * theta).cos(),
            t_start,
            duration,
            chord_length,
            ramp: 0.0,
        }
    }

    /// Field direction `sinθ ẑ + cosθ x̂`; the plates are normal to it.
    pub fn normal(&self) -> ThreeVec {
        ThreeVec::new(self.theta.cos(), 0.0, self.theta.sin())
    }

    /// Direction of the packet chord: angle θ to x̂ on the other side from the field.
    pub fn chord_dir(&self) -> ThreeVec {
        ThreeVec::new(self.theta.cos(), 0.0, -self.theta.sin())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.e_mag.is_finite() {
            return Err(Error::NonFinite("capacitor field"));
        }
        if !(0.0..PI / 4.0).contains(&self.theta) {
            return Err(Error::Domain(format!("capacitor tilt must satisfy 0 <= θ < π/4, got {}", self.theta)));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::InvalidParameter(format!("pulse duration must be positive, got {}", self.duration)));
        }
        if !(self.ramp >= 0.0 && self.ramp < self.duration) {
            return Err(Error::InvalidParameter(format!("pulse ramp must lie in [0, T), got {}", self.ramp)));
        }
        if !(self.chord_length.is_finite() && self.chord_length > 0.0) {
            return Err(Error::InvalidParameter("chord length must be positive".into()));
        }
        let expected = self.chord_length * (2.0 * self.theta).cos();
        if (self.gap - expected).abs() > 1e-12 * self.chord_length {
            return Err(Error::Geometry(format!("gap {} does not equal L cos 2θ = {}", self.gap, expected)));
        }
        Ok(())
    }

    /// Pulse envelope in `[0, 1]`.
    pub fn envelope(&self, t: f64) -> f64 {
        let (t0, t1, w) = (self.t_start, self.t_start + self.duration, self.ramp);
        if w == 0.0 {
            return if (t0..=t1).contains(&t) { 1.0 } else { 0.0 };
        }
        let taper = |x: f64| 0.5 * (1.0 - (PI * x).cos());
        if t <= t0 - 0.5 * w || t >= t1 + 0.5 * w {
            0.0
        } else if t < t0 + 0.5 * w {
            taper((t - (t0 - 0.5 * w)) / w)
        } else if t > t1 - 0.5 * w {
            taper(((t1 + 0.5 * w) - t) / w)
        } else {
            1.0
        }
    }
}

/// Uniform field `E(sinθ ẑ + cosθ x̂)` inside the slab during the pulse.
/// Gauge: `A = 0`, `V` piecewise linear across the gap (zero on the
/// reference side, `−E d` beyond), scaled by the pulse envelope.
pub fn capacitor_configuration(cfg: &CapacitorConfig) -> Result<EmConfiguration> {
    cfg.validate()?;
    let n = cfg.normal();
    let c0 = cfg.center;
    let half = 0.5 * cfg.gap;
    let e_mag = cfg.e_mag;
    let pulse = cfg.clone();
    let coord = move |e: &Event| n.dot(&(e.pos - c0));

    let env = pulse.clone();
    let field: FieldFn = Arc::new(move |e: &Event| {
        let xi = coord(e);
        let w = env.envelope(e.t);
        if w > 0.0 && xi > -half && xi < half {
            FieldSample { e: n * (e_mag * w), b: ThreeVec::zeros() }
        } else {
            FieldSample::zero()
        }
    });
    let env = pulse.clone();
    let potential: PotentialFn = Arc::new(move |e: &Event| {
        let w = env.envelope(e.t);
        let xi = coord(e).clamp(-half, half);
        PotentialSample { v: -e_mag * w * (xi + half), a: ThreeVec::zeros() }
    });

    let d = cfg.gap;
    let mut interfaces: Vec<LevelFn> = vec![
        Arc::new(move |e: &Event| (coord(e) + half) / d),
        Arc::new(move |e: &Event| (coord(e) - half) / d),
    ];
    let (t0, t1, w, tau) = (cfg.t_start, cfg.t_start + cfg.duration, cfg.ramp, cfg.duration);
    let edges: Vec<f64> = if w == 0.0 {
        vec![t0, t1]
    } else {
        vec![t0 - 0.5 * w, t0 + 0.5 * w, t1 - 0.5 * w, t1 + 0.5 * w]
    };
    for edge in edges {
        interfaces.push(Arc::new(move |e: &Event| (e.t - edge) / tau));
    }
    Ok(EmConfiguration::new("capacitor", field, potential).with_interfaces(interfaces))
}

/// Field transformation into the boosted frame:
/// `E'∥ = E∥`, `E'⊥ = γ(E⊥ + v×B)`, `B'∥ = B∥`, `B'⊥ = γ(B⊥ − v×E/c²)`.
pub fn boost_field(f: &FieldSample, b: &Boost) -> FieldSample {
    let speed = b.speed();
    if speed == 0.0 {
        return *f;
    }
    let v = b.velocity();
    let n = v / speed;
    let gamma = b.gamma();
    let c2 = b.c() * b.c();
    let e_par = n * n.dot(&f.e);
    let b_par = n * n.dot(&f.b);
    FieldSample {
        e: e_par + (f.e - e_par + v.cross(&f.b)) * gamma,
        b: b_par + (f.b - b_par - v.cross(&f.e) / c2) * gamma,
    }
}

/// Four-vector transformation of `(V/c, A)`:
/// `V' = γ(V − v·A)`, `A'∥ = γ(A∥ − vV/c²)`, `A'⊥ = A⊥`.
pub fn boost_potential(p: &PotentialSample, b: &Boost) -> PotentialSample {
    let speed = b.speed();
    if speed == 0.0 {
        return *p;
    }
    let v = b.velocity();
    let n = v / speed;
    let gamma = b.gamma();
    let c2 = b.c() * b.c();
    let a_par = n.dot(&p.a);
    let a_par_new = gamma * (a_par - speed * p.v / c2);
    PotentialSample { v: gamma * (p.v - v.dot(&p.a)), a: p.a + n * (a_par_new - a_par) }
}

/// The configuration as seen from the boosted frame: the rest-frame
/// functions are evaluated at the inverse-boosted event and transformed.
pub fn boosted_configuration(cfg: &EmConfiguration, b: &Boost) -> EmConfiguration {
    if b.is_identity() {
        return cfg.clone();
    }
    let inv = b.inverse();
    let boost = *b;
    let field = cfg.field.clone();
    let potential = cfg.potential.clone();
    let interfaces = cfg
        .interfaces
        .iter()
        .map(|g| {
            let g = g.clone();
            Arc::new(move |e: &Event| g(&inv.event(e))) as LevelFn
        })
        .collect();
    EmConfiguration {
        name: format!("{} (boosted, v = {:?})", cfg.name, b.velocity().as_slice()),
        field: Arc::new(move |e: &Event| boost_field(&field(&inv.event(e)), &boost)),
        potential: Arc::new(move |e: &Event| boost_potential(&potential(&inv.event(e)), &boost)),
        interfaces,
    }
}

/// Central finite-difference fields `(−∇V − ∂A/∂t, ∇×A)` from the potential.
pub fn fields_from_potential(cfg: &EmConfiguration, e: &Event, dt: f64, dx: f64) -> FieldSample {
    let p = |t: f64, pos: ThreeVec| cfg.potential(&Event { t, pos });
    let mut grad_v = ThreeVec::zeros();
    let mut jac = [[0.0; 3]; 3]; // jac[i][j] = ∂A_i/∂x_j
    for j in 0..3 {
        let mut step = ThreeVec::zeros();
        step[j] = dx;
        let hi = p(e.t, e.pos + step);
        let lo = p(e.t, e.pos - step);
        grad_v[j] = (hi.v - lo.v) / (2.0 * dx);
        for (i, row) in jac.iter_mut().enumerate() {
            row[j] = (hi.a[i] - lo.a[i]) / (2.0 * dx);
        }
    }
    let da_dt = (p(e.t + dt, e.pos).a - p(e.t - dt, e.pos).a) / (2.0 * dt);
    let curl = ThreeVec::new(jac[2][1] - jac[1][2], jac[0][2] - jac[2][0], jac[1][0] - jac[0][1]);
    FieldSample { e: -grad_v - da_dt, b: curl }
}
