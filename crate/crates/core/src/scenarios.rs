//! The two canonical interferometers, their closed-form reference values,
//! and the boosts in which one of the two flux contributions vanishes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::em::{capacitor_configuration, solenoid_configuration, CapacitorConfig, EmConfiguration, SolenoidConfig};
use crate::error::{Error, Result};
use crate::holonomy::Coupling;
use crate::spacetime::{Boost, Event, ThreeVec, Worldline, WorldlinePair, SPEED_OF_LIGHT};

/// A square interferometer in the plane `z = 0` around a solenoid on the z-axis.
///
/// Both packets leave the corner `(−h, −h)` together at `t = 0`. Packet `a`
/// runs along `y = −h` then `x = +h`, packet `b` along `x = −h` then
/// `y = +h`, and they meet at `(h, h)`. The average speed is
/// `packet_speed`; `leg_split` gives the fraction of the total time each
/// packet spends on its first leg.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolenoidScenario {
    pub solenoid: SolenoidConfig,
    pub square_half_side: f64,
    pub packet_speed: f64,
    /// Square centre relative to the solenoid axis, in the xy-plane.
    pub center_offset: [f64; 2],
    pub leg_split: [f64; 2],
    pub c: f64,
    pub coupling: Coupling,
}

impl Default for SolenoidScenario {
    fn default() -> Self {
        Self {
            solenoid: SolenoidConfig::new(1.0, 0.1),
            square_half_side: 0.5,
            packet_speed: 0.5 * SPEED_OF_LIGHT,
            center_offset: [0.0, 0.0],
            leg_split: [0.5, 0.5],
            c: SPEED_OF_LIGHT,
            coupling: Coupling::unit(),
        }
    }
}

impl SolenoidScenario {
    /// Time from split to recombination.
    pub fn duration(&self) -> f64 {
        4.0 * self.square_half_side / self.packet_speed
    }

    fn corners(&self) -> [ThreeVec; 4] {
        let h = self.square_half_side;
        let [cx, cy] = self.center_offset;
        [
            ThreeVec::new(cx - h, cy - h, 0.0),
            ThreeVec::new(cx + h, cy - h, 0.0),
            ThreeVec::new(cx - h, cy + h, 0.0),
            ThreeVec::new(cx + h, cy + h, 0.0),
        ]
    }

    /// Whether the square winds once around the solenoid axis.
    pub fn encloses_solenoid(&self) -> bool {
        let h = self.square_half_side;
        let [cx, cy] = self.center_offset;
        let p = self.solenoid.axis_point;
        (p.x - cx).abs() < h && (p.y - cy).abs() < h
    }

    pub fn validate(&self) -> Result<()> {
        self.solenoid.validate()?;
        if self.solenoid.axis_dir.normalize() != ThreeVec::z() {
            return Err(Error::Geometry("the square interferometer needs a solenoid along ẑ".into()));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::InvalidParameter(format!("speed of light must be positive, got {}", self.c)));
        }
        if !(self.square_half_side.is_finite() && self.square_half_side > 0.0) {
            return Err(Error::InvalidParameter("square half side must be positive".into()));
        }
        if !(self.packet_speed > 0.0 && self.packet_speed < self.c) {
            return Err(Error::InvalidParameter(format!(
                "packet speed must lie in (0, c), got {}",
                self.packet_speed
            )));
        }
        if self.leg_split.iter().any(|f| !(*f > 0.0 && *f < 1.0)) {
            return Err(Error::InvalidParameter("leg split fractions must lie in (0, 1)".into()));
        }
        // every side must stay clear of the solenoid
        let [p00, p10, p01, p11] = self.corners();
        let axis = self.solenoid.axis_point;
        let r = self.solenoid.radius;
        for (p, q) in [(p00, p10), (p10, p11), (p00, p01), (p01, p11)] {
            if segment_distance_xy(&axis, &p, &q) <= r {
                return Err(Error::Geometry(format!(
                    "a side of the square from ({}, {}) to ({}, {}) passes through the solenoid",
                    p.x, p.y, q.x, q.y
                )));
            }
        }
        Ok(())
    }
}

fn segment_distance_xy(x: &ThreeVec, p: &ThreeVec, q: &ThreeVec) -> f64 {
    let flat = |v: &ThreeVec| ThreeVec::new(v.x, v.y, 0.0);
    let (x, p, q) = (flat(x), flat(p), flat(q));
    let d = q - p;
    let w = ((x - p).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (x - (p + d * w)).norm()
}

/// The worldline pair and the solenoid configuration.
pub fn build_solenoid_scenario(s: &SolenoidScenario) -> Result<(WorldlinePair, EmConfiguration)> {
    s.validate()?;
    let [p00, p10, p01, p11] = s.corners();
    let total = s.duration();
    let a = Worldline::new(
        vec![Event::at(0.0, p00), Event::at(s.leg_split[0] * total, p10), Event::at(total, p11)],
        s.c,
    )?;
    let b = Worldline::new(
        vec![Event::at(0.0, p00), Event::at(s.leg_split[1] * total, p01), Event::at(total, p11)],
        s.c,
    )?;
    Ok((WorldlinePair::new(a, b)?, solenoid_configuration(&s.solenoid)?))
}

/// The frame moving with the packets on their x-directed legs.
pub fn solenoid_special_frame(s: &SolenoidScenario) -> Result<Boost> {
    Boost::new(ThreeVec::new(s.packet_speed, 0.0, 0.0), s.c)
}

/// Closed-form values for comparison with the numerical routes.
///
/// `Option` fields are `None` where a quantity is undefined for the given
/// boost (for instance a crossing time at `v = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    /// Phase in the rest frame, rad.
    pub phi_s: f64,
    /// Magnetic part in the boosted frame, rad.
    pub phi_magnetic_sprime: f64,
    /// Electric part in the boosted frame, rad.
    pub phi_electric_sprime: f64,
    /// Total in the boosted frame, rad.
    pub phi_sprime: f64,
    pub gamma: f64,
    /// Time for the moving solenoid to cross the packet chord, s.
    pub delta_t_prime: Option<f64>,
    /// Electric field amplitude inside the moving solenoid, V/m.
    pub e_prime0: Option<f64>,
    /// Magnetic field amplitude inside the moving capacitor, T.
    pub b_prime: Option<f64>,
    /// Boost speed at which the electric flux vanishes, m/s.
    pub v_null_electric: Option<f64>,
    /// Area swept by the chord inside the moving capacitor, m².
    pub swept_area: Option<f64>,
}

fn along_x(b: &Boost) -> Result<f64> {
    let v = b.velocity();
    if v.y != 0.0 || v.z != 0.0 {
        return Err(Error::InvalidParameter("reference values are defined for boosts along x̂".into()));
    }
    Ok(v.x)
}

/// Solenoid reference values.
///
/// The boosted parts refer to the rest-frame ruled surface carried into the
/// boosted frame. On that surface frame time obeys `t = (x + y + 2h)/u`, so
/// `∬dt∧dy = πr²/u`, and the magnetic and electric fluxes are
/// `γ²B0πr²(1 − v/u)` and `γ²B0πr²(v/u − v²/c²)`.
pub fn solenoid_references(s: &SolenoidScenario, b: &Boost) -> Result<ReferenceValues> {
    let v = along_x(b)?;
    let k = s.coupling.ratio();
    let (b0, r, u, c) = (s.solenoid.b0, s.solenoid.radius, s.packet_speed, s.c);
    let phi_s = if s.encloses_solenoid() { k * b0 * PI * r * r } else { 0.0 };
    let gamma = b.gamma();
    let g2 = gamma * gamma;
    let magnetic = g2 * phi_s * (1.0 - v / u);
    let electric = g2 * phi_s * (v / u - v * v / (c * c));
    let (delta_t_prime, e_prime0, phi_sprime) = if v != 0.0 {
        let dt = 2.0 * r / (v.abs() * gamma);
        let e0 = -gamma * v * b0;
        let phi = if s.encloses_solenoid() { -k * e0 * PI * 2.0 * r * dt / 4.0 * v.signum() } else { 0.0 };
        (Some(dt), Some(e0), phi)
    } else {
        (None, Some(0.0), phi_s)
    };
    Ok(ReferenceValues {
        phi_s,
        phi_magnetic_sprime: magnetic,
        phi_electric_sprime: electric,
        phi_sprime,
        gamma,
        delta_t_prime,
        e_prime0,
        b_prime: None,
        v_null_electric: None,
        swept_area: None,
    })
}

/// Two packets held on opposite sides of a tilted parallel-plate capacitor
/// while it is pulsed.
///
/// The chord between the held packets crosses the slab along
/// `L̂ = cosθ x̂ − sinθ ẑ`, extending `margin` beyond the chord segment
/// inside the slab on each side. The packets split from a common point at
/// `split_offset` along ŷ from the slab centre, reach their holding
/// positions `approach_time` later, stay there from
/// `t_start − hold_padding` until `t_start + T + hold_padding`, and return
/// to recombine. While held they may drift along ŷ at `drift_speed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacitorScenario {
    pub capacitor: CapacitorConfig,
    pub margin: f64,
    pub split_offset: f64,
    pub approach_time: f64,
    pub hold_padding: f64,
    pub drift_speed: f64,
    pub c: f64,
    pub coupling: Coupling,
}

impl Default for CapacitorScenario {
    fn default() -> Self {
        Self {
            capacitor: CapacitorConfig::new(1.0, PI / 6.0, 1.0, 0.0, 1.0),
            margin: 0.25,
            split_offset: 0.25,
            approach_time: 0.5,
            hold_padding: 0.5,
            drift_speed: 0.0,
            c: SPEED_OF_LIGHT,
            coupling: Coupling::unit(),
        }
    }
}

impl CapacitorScenario {
    /// A scenario with the given field, tilt, chord length and pulse, other settings at their defaults.
    pub fn new(e_mag: f64, theta: f64, chord_length: f64, duration: f64) -> Self {
        Self { capacitor: CapacitorConfig::new(e_mag, theta, chord_length, 0.0, duration), ..Self::default() }
    }

    /// Held packet positions at the start of the hold, `(x_a, x_b)`.
    pub fn packet_positions(&self) -> (ThreeVec, ThreeVec) {
        let cap = &self.capacitor;
        let reach = 0.5 * cap.chord_length + self.margin;
        (cap.center - cap.chord_dir() * reach, cap.center + cap.chord_dir() * reach)
    }

    pub fn hold_interval(&self) -> (f64, f64) {
        let cap = &self.capacitor;
        (cap.t_start - self.hold_padding, cap.t_start + cap.duration + self.hold_padding)
    }

    pub fn validate(&self) -> Result<()> {
        self.capacitor.validate()?;
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::InvalidParameter(format!("speed of light must be positive, got {}", self.c)));
        }
        if !(self.margin > 0.0) {
            return Err(Error::Geometry("held packets must sit strictly outside the slab (margin > 0)".into()));
        }
        if !(self.approach_time > 0.0) {
            return Err(Error::InvalidParameter("approach time must be positive".into()));
        }
        let half_ramp = 0.5 * self.capacitor.ramp;
        if !(self.hold_padding > half_ramp) {
            return Err(Error::Geometry("the pulse must switch on and off while the packets are held".into()));
        }
        if !(self.drift_speed.abs() < self.c) || !self.split_offset.is_finite() {
            return Err(Error::InvalidParameter("drift speed must be below c and the split offset finite".into()));
        }
        Ok(())
    }
}

/// The worldline pair and the pulsed capacitor configuration.
pub fn build_capacitor_scenario(s: &CapacitorScenario) -> Result<(WorldlinePair, EmConfiguration)> {
    s.validate()?;
    let (xa, xb) = s.packet_positions();
    let (h0, h1) = s.hold_interval();
    let drift = ThreeVec::y() * (s.drift_speed * (h1 - h0));
    let split = s.capacitor.center + ThreeVec::y() * s.split_offset;
    let meet = split + drift;
    let (t_split, t_meet) = (h0 - s.approach_time, h1 + s.approach_time);
    let path = |x: ThreeVec| {
        Worldline::new(
            vec![
                Event::at(t_split, split),
                Event::at(h0, x),
                Event::at(h1, x + drift),
                Event::at(t_meet, meet),
            ],
            s.c,
        )
    };
    Ok((WorldlinePair::new(path(xa)?, path(xb)?)?, capacitor_configuration(&s.capacitor)?))
}

/// The boost along x̂ with `γ = cot θ`, where `E′·L′ = 0`.
pub fn capacitor_null_electric_boost(s: &CapacitorScenario) -> Result<Boost> {
    let theta = s.capacitor.theta;
    if !(theta > 0.0 && theta < PI / 4.0) {
        return Err(Error::Domain(format!(
            "a subluminal null-electric boost needs 0 < θ < π/4, got θ = {theta}"
        )));
    }
    let tan = theta.tan();
    Boost::new(ThreeVec::new(s.c * (1.0 - tan * tan).sqrt(), 0.0, 0.0), s.c)
}

/// Capacitor reference values. The boosted parts refer to the equal-time
/// ruled surface of the boosted frame while the packets are held.
pub fn capacitor_references(s: &CapacitorScenario, b: &Boost) -> Result<ReferenceValues> {
    let v = along_x(b)?;
    let k = s.coupling.ratio();
    let cap = &s.capacitor;
    let (e, l, t, theta, c) = (cap.e_mag, cap.chord_length, cap.duration, cap.theta, s.c);
    let flux = k * e * l * t;
    let gamma = b.gamma();
    let (sin2, cos2) = (theta.sin().powi(2), theta.cos().powi(2));
    let magnetic = -flux * (gamma * gamma - 1.0) * sin2;
    let electric = -flux * (cos2 - gamma * gamma * sin2);
    let v_null = capacitor_null_electric_boost(s).ok().map(|bn| bn.speed());
    Ok(ReferenceValues {
        phi_s: -flux * (2.0 * theta).cos(),
        phi_magnetic_sprime: magnetic,
        phi_electric_sprime: electric,
        phi_sprime: magnetic + electric,
        gamma,
        delta_t_prime: None,
        e_prime0: None,
        b_prime: Some(gamma * v * e * theta.sin() / (c * c)),
        v_null_electric: v_null,
        swept_area: Some(v.abs() * gamma * t * l * theta.sin()),
    })
}
