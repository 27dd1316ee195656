//! Events, Lorentz boosts, worldlines and parametric spacetime surfaces.
//!
//! Coordinates are SI with an explicit speed of light carried by every
//! [`Boost`] and [`Worldline`], so tests can work in units where `c = 1`.

mod surface;
mod worldline;

pub use surface::{
    finite_difference_tangents, ruled_surface_equal_time, surface_jacobian, BoostedSurface, BulgedSurface, MeshSurface,
    PlanarSurface, RuledSurface, SpacetimeSurface, DEFAULT_FD_STEP,
};
pub use worldline::{boost_worldline, Worldline, WorldlinePair};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ThreeVec = nalgebra::Vector3<f64>;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A point in spacetime: frame time `t` (s) and position `pos` (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub pos: ThreeVec,
}

impl Event {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, pos: ThreeVec::new(x, y, z) }
    }

    pub fn at(t: f64, pos: ThreeVec) -> Self {
        Self { t, pos }
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.pos.iter().all(|c| c.is_finite())
    }

    /// `self - other` as a tangent vector.
    pub fn displacement_from(&self, other: &Event) -> Tangent {
        Tangent { t: self.t - other.t, pos: self.pos - other.pos }
    }

    pub fn offset(&self, d: &Tangent, scale: f64) -> Event {
        Event { t: self.t + scale * d.t, pos: self.pos + d.pos * scale }
    }

    /// Affine interpolation `(1 - w) * self + w * other`.
    pub fn lerp(&self, other: &Event, w: f64) -> Event {
        Event {
            t: (1.0 - w) * self.t + w * other.t,
            pos: self.pos * (1.0 - w) + other.pos * w,
        }
    }

    /// `c²Δt² − |Δx|²` between two events.
    pub fn interval_sq(&self, other: &Event, c: f64) -> f64 {
        let dt = self.t - other.t;
        let dx = self.pos - other.pos;
        c * c * dt * dt - dx.norm_squared()
    }
}

/// A spacetime displacement / tangent vector `(dt; dx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangent {
    pub t: f64,
    pub pos: ThreeVec,
}

impl Tangent {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, pos: ThreeVec::new(x, y, z) }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn scaled(&self, k: f64) -> Tangent {
        Tangent { t: self.t * k, pos: self.pos * k }
    }

    pub fn plus(&self, other: &Tangent) -> Tangent {
        Tangent { t: self.t + other.t, pos: self.pos + other.pos }
    }

    /// Largest absolute component, with the time component weighted by `c`.
    pub fn max_abs(&self, c: f64) -> f64 {
        self.pos.iter().fold((self.t * c).abs(), |m, v| m.max(v.abs()))
    }
}

/// A pure Lorentz boost to the frame moving with velocity `velocity`
/// relative to the current one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boost {
    velocity: ThreeVec,
    c: f64,
}

impl Boost {
    pub fn new(velocity: ThreeVec, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("speed of light must be positive, got {c}")));
        }
        if !velocity.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("boost velocity"));
        }
        let speed = velocity.norm();
        if speed >= c {
            return Err(Error::InvalidBoost { speed, c });
        }
        Ok(Self { velocity, c })
    }

    /// Boost along x̂ with speed `beta * c`.
    pub fn along_x(beta: f64, c: f64) -> Result<Self> {
        Self::new(ThreeVec::new(beta * c, 0.0, 0.0), c)
    }

    pub fn identity(c: f64) -> Self {
        Self { velocity: ThreeVec::zeros(), c }
    }

    pub fn velocity(&self) -> ThreeVec {
        self.velocity
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    pub fn beta(&self) -> f64 {
        self.speed() / self.c
    }

    pub fn gamma(&self) -> f64 {
        let b = self.beta();
        1.0 / (1.0 - b * b).sqrt()
    }

    pub fn is_identity(&self) -> bool {
        self.velocity == ThreeVec::zeros()
    }

    /// The boost back to the original frame.
    pub fn inverse(&self) -> Boost {
        Boost { velocity: -self.velocity, c: self.c }
    }

    /// Transforms `(t, x)` with the parallel/perpendicular split relative to `v`:
    /// `t' = γ(t − v·x/c²)`, `x'∥ = γ(x∥ − v t)`, `x'⊥ = x⊥`.
    fn apply(&self, t: f64, pos: &ThreeVec) -> (f64, ThreeVec) {
        let speed = self.speed();
        if speed == 0.0 {
            return (t, *pos);
        }
        let dir = self.velocity / speed;
        let gamma = self.gamma();
        let par = dir.dot(pos);
        let t_new = gamma * (t - speed * par / (self.c * self.c));
        let par_new = gamma * (par - speed * t);
        (t_new, pos + dir * (par_new - par))
    }

    pub fn event(&self, e: &Event) -> Event {
        let (t, pos) = self.apply(e.t, &e.pos);
        Event { t, pos }
    }

    /// Boosts are linear, so tangent vectors transform like events.
    pub fn tangent(&self, d: &Tangent) -> Tangent {
        let (t, pos) = self.apply(d.t, &d.pos);
        Tangent { t, pos }
    }

    /// Velocity of a particle in the boosted frame given its velocity `u` here.
    pub fn velocity_of(&self, u: &ThreeVec) -> ThreeVec {
        let d = self.tangent(&Tangent { t: 1.0, pos: *u });
        d.pos / d.t
    }
}

/// Coordinates of `e` in the frame moving with the boost's velocity.
pub fn boost_event(e: &Event, b: &Boost) -> Event {
    b.event(e)
}
