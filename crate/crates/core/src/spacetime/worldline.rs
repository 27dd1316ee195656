use serde::{Deserialize, Serialize};

use super::{Boost, Event, ThreeVec};
use crate::error::{Error, Result};

/// A piecewise-linear particle trajectory through spacetime.
///
/// The curve parameter `τ ∈ [0, 1]` is uniform in frame time, so
/// `t(τ) = t₀ + τ (t_f − t₀)` and re-expressing the worldline in another
/// frame keeps `τ` valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Worldline {
    vertices: Vec<Event>,
    c: f64,
}

impl Worldline {
    pub fn new(vertices: Vec<Event>, c: f64) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidParameter("a worldline needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("worldline vertex"));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            let dt = w[1].t - w[0].t;
            if dt <= 0.0 {
                return Err(Error::NonMonotoneTime { index: i + 1, t_prev: w[0].t, t_next: w[1].t });
            }
            let speed = (w[1].pos - w[0].pos).norm() / dt;
            if speed >= c {
                return Err(Error::Superluminal { index: i, speed, c });
            }
        }
        Ok(Self { vertices, c })
    }

    pub fn vertices(&self) -> &[Event] {
        &self.vertices
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn start(&self) -> Event {
        self.vertices[0]
    }

    pub fn end(&self) -> Event {
        *self.vertices.last().unwrap()
    }

    pub fn t0(&self) -> f64 {
        self.start().t
    }

    pub fn tf(&self) -> f64 {
        self.end().t
    }

    pub fn time_at(&self, tau: f64) -> f64 {
        let (t0, tf) = (self.t0(), self.tf());
        if tau <= 0.0 {
            t0
        } else if tau >= 1.0 {
            tf
        } else {
            t0 + tau * (tf - t0)
        }
    }

    /// The event at curve parameter `τ`.
    pub fn at(&self, tau: f64) -> Event {
        self.at_time(self.time_at(tau))
    }

    fn segment_index(&self, t: f64) -> usize {
        let n = self.vertices.len();
        // first vertex strictly after t, minus one
        let k = self.vertices.partition_point(|v| v.t <= t);
        k.clamp(1, n - 1) - 1
    }

    /// Position at frame time `t`, clamped to the worldline's time span.
    pub fn position_at_time(&self, t: f64) -> ThreeVec {
        if t <= self.t0() {
            return self.start().pos;
        }
        if t >= self.tf() {
            return self.end().pos;
        }
        let i = self.segment_index(t);
        let (p, q) = (&self.vertices[i], &self.vertices[i + 1]);
        if t == p.t {
            return p.pos;
        }
        let w = (t - p.t) / (q.t - p.t);
        p.pos + (q.pos - p.pos) * w
    }

    pub fn at_time(&self, t: f64) -> Event {
        Event { t: t.clamp(self.t0(), self.tf()), pos: self.position_at_time(t) }
    }

    /// `d pos / dt` on the segment containing `t` (the later one at a vertex).
    pub fn velocity_at_time(&self, t: f64) -> ThreeVec {
        let i = self.segment_index(t);
        let (p, q) = (&self.vertices[i], &self.vertices[i + 1]);
        (q.pos - p.pos) / (q.t - p.t)
    }

    /// Interior vertex times.
    pub fn knot_times(&self) -> Vec<f64> {
        let n = self.vertices.len();
        self.vertices[1..n - 1].iter().map(|v| v.t).collect()
    }

    /// Interior vertex positions in `τ`.
    pub fn knot_params(&self) -> Vec<f64> {
        let (t0, tf) = (self.t0(), self.tf());
        self.knot_times().into_iter().map(|t| (t - t0) / (tf - t0)).collect()
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Event, &Event)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn max_speed(&self) -> f64 {
        self.segments()
            .map(|(p, q)| (q.pos - p.pos).norm() / (q.t - p.t))
            .fold(0.0, f64::max)
    }
}

/// The same worldline expressed in the boosted frame.
///
/// Boosts map straight segments to straight segments, so transforming the
/// vertices is exact; `τ` is re-derived from the new frame time.
pub fn boost_worldline(w: &Worldline, b: &Boost) -> Result<Worldline> {
    let vertices: Vec<Event> = w.vertices.iter().map(|e| b.event(e)).collect();
    for (i, pair) in vertices.windows(2).enumerate() {
        if pair[1].t <= pair[0].t {
            return Err(Error::NonMonotoneTime { index: i + 1, t_prev: pair[0].t, t_next: pair[1].t });
        }
    }
    Worldline::new(vertices, b.c())
}

/// Two worldlines sharing the split event and the recombination event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldlinePair {
    pub a: Worldline,
    pub b: Worldline,
}

impl WorldlinePair {
    pub fn new(a: Worldline, b: Worldline) -> Result<Self> {
        if a.start() != b.start() {
            return Err(Error::InvalidPair(format!(
                "split events differ: {:?} vs {:?}",
                a.start(),
                b.start()
            )));
        }
        if a.end() != b.end() {
            return Err(Error::InvalidPair(format!(
                "recombination events differ: {:?} vs {:?}",
                a.end(),
                b.end()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn t0(&self) -> f64 {
        self.a.t0()
    }

    pub fn tf(&self) -> f64 {
        self.a.tf()
    }

    pub fn c(&self) -> f64 {
        self.a.c()
    }

    /// Path `b` becomes path `a`; every phase changes sign.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn boosted(&self, boost: &Boost) -> Result<Self> {
        Self::new(boost_worldline(&self.a, boost)?, boost_worldline(&self.b, boost)?)
    }
}
