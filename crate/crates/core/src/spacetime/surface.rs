use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

use super::{Boost, Event, Tangent, WorldlinePair};
use crate::error::{Error, Result};

/// Default finite-difference step in parameter units.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// A parametric map from the unit square `(u, s) ∈ [0,1]²` into spacetime.
///
/// Surfaces bounded by a [`WorldlinePair`] satisfy `σ(u,0) = a(u)`,
/// `σ(u,1) = b(u)` and have constant seam edges `σ(0,·)`, `σ(1,·)`.
pub trait SpacetimeSurface: Debug + Send + Sync {
    fn point(&self, u: f64, s: f64) -> Event;

    /// `(∂σ/∂u, ∂σ/∂s)` in closed form, when the surface knows it.
    fn analytic_tangents(&self, _u: f64, _s: f64) -> Option<(Tangent, Tangent)> {
        None
    }

    /// Interior `u` values where the map is only piecewise smooth.
    fn u_breaks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Interior `s` values where the map is only piecewise smooth.
    fn s_breaks(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl<T: SpacetimeSurface + ?Sized> SpacetimeSurface for Arc<T> {
    fn point(&self, u: f64, s: f64) -> Event {
        (**self).point(u, s)
    }
    fn analytic_tangents(&self, u: f64, s: f64) -> Option<(Tangent, Tangent)> {
        (**self).analytic_tangents(u, s)
    }
    fn u_breaks(&self) -> Vec<f64> {
        (**self).u_breaks()
    }
    fn s_breaks(&self) -> Vec<f64> {
        (**self).s_breaks()
    }
}

fn fd_axis(f: impl Fn(f64) -> Event, x: f64, h: f64) -> Tangent {
    if x - h < 0.0 {
        let (f0, f1, f2) = (f(x), f(x + h), f(x + 2.0 * h));
        // second-order forward stencil
        let d1 = f1.displacement_from(&f0).scaled(4.0);
        let d2 = f2.displacement_from(&f0);
        Tangent { t: d1.t - d2.t, pos: d1.pos - d2.pos }.scaled(1.0 / (2.0 * h))
    } else if x + h > 1.0 {
        let (f0, f1, f2) = (f(x), f(x - h), f(x - 2.0 * h));
        let d1 = f1.displacement_from(&f0).scaled(4.0);
        let d2 = f2.displacement_from(&f0);
        Tangent { t: d1.t - d2.t, pos: d1.pos - d2.pos }.scaled(-1.0 / (2.0 * h))
    } else {
        f(x + h).displacement_from(&f(x - h)).scaled(1.0 / (2.0 * h))
    }
}

/// Central finite-difference tangents, one-sided at the parameter boundary.
pub fn finite_difference_tangents<S: SpacetimeSurface + ?Sized>(
    srf: &S,
    u: f64,
    s: f64,
    h: f64,
) -> (Tangent, Tangent) {
    (fd_axis(|x| srf.point(x, s), u, h), fd_axis(|x| srf.point(u, x), s, h))
}

/// `(∂σ/∂u, ∂σ/∂s)`: the analytic tangents when available, else finite differences with step `h`.
pub fn surface_jacobian<S: SpacetimeSurface + ?Sized>(
    srf: &S,
    u: f64,
    s: f64,
    h: f64,
) -> (Tangent, Tangent) {
    srf.analytic_tangents(u, s)
        .unwrap_or_else(|| finite_difference_tangents(srf, u, s, h))
}

fn merge_breaks(mut v: Vec<f64>) -> Vec<f64> {
    v.retain(|x| *x > 0.0 && *x < 1.0);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// The surface swept by the straight spatial chord joining the two packets
/// at each instant of frame time.
#[derive(Debug, Clone)]
pub struct RuledSurface {
    pair: WorldlinePair,
}

impl RuledSurface {
    pub fn pair(&self) -> &WorldlinePair {
        &self.pair
    }
}

/// Builds the equal-time ruled surface `σ(u,s) = (t(u), (1−s)·x_a(t) + s·x_b(t))`.
pub fn ruled_surface_equal_time(pair: &WorldlinePair) -> RuledSurface {
    RuledSurface { pair: pair.clone() }
}

impl SpacetimeSurface for RuledSurface {
    fn point(&self, u: f64, s: f64) -> Event {
        let t = self.pair.a.time_at(u);
        let pa = self.pair.a.position_at_time(t);
        let pb = self.pair.b.position_at_time(t);
        Event { t, pos: pa * (1.0 - s) + pb * s }
    }

    fn analytic_tangents(&self, u: f64, s: f64) -> Option<(Tangent, Tangent)> {
        let span = self.pair.tf() - self.pair.t0();
        let t = self.pair.a.time_at(u);
        let va = self.pair.a.velocity_at_time(t);
        let vb = self.pair.b.velocity_at_time(t);
        let du = Tangent { t: span, pos: (va * (1.0 - s) + vb * s) * span };
        let ds = Tangent {
            t: 0.0,
            pos: self.pair.b.position_at_time(t) - self.pair.a.position_at_time(t),
        };
        Some((du, ds))
    }

    fn u_breaks(&self) -> Vec<f64> {
        let mut v = self.pair.a.knot_params();
        v.extend(self.pair.b.knot_params());
        merge_breaks(v)
    }
}

/// A base surface displaced by `sin(πu)·sin(πs)·bulge`, which leaves the
/// boundary untouched.
#[derive(Debug, Clone)]
pub struct BulgedSurface {
    base: Arc<dyn SpacetimeSurface>,
    bulge: Tangent,
}

impl BulgedSurface {
    pub fn new(base: Arc<dyn SpacetimeSurface>, bulge: Tangent) -> Self {
        Self { base, bulge }
    }
}

impl SpacetimeSurface for BulgedSurface {
    fn point(&self, u: f64, s: f64) -> Event {
        let w = (PI * u).sin() * (PI * s).sin();
        self.base.point(u, s).offset(&self.bulge, w)
    }

    fn analytic_tangents(&self, u: f64, s: f64) -> Option<(Tangent, Tangent)> {
        let (du, ds) = self.base.analytic_tangents(u, s)?;
        let wu = PI * (PI * u).cos() * (PI * s).sin();
        let ws = PI * (PI * u).sin() * (PI * s).cos();
        Some((du.plus(&self.bulge.scaled(wu)), ds.plus(&self.bulge.scaled(ws))))
    }

    fn u_breaks(&self) -> Vec<f64> {
        self.base.u_breaks()
    }

    fn s_breaks(&self) -> Vec<f64> {
        self.base.s_breaks()
    }
}

/// A surface re-expressed in a boosted frame; the parametrization is kept.
#[derive(Debug, Clone)]
pub struct BoostedSurface {
    base: Arc<dyn SpacetimeSurface>,
    boost: Boost,
}

impl BoostedSurface {
    pub fn new(base: Arc<dyn SpacetimeSurface>, boost: Boost) -> Self {
        Self { base, boost }
    }
}

impl SpacetimeSurface for BoostedSurface {
    fn point(&self, u: f64, s: f64) -> Event {
        self.boost.event(&self.base.point(u, s))
    }

    fn analytic_tangents(&self, u: f64, s: f64) -> Option<(Tangent, Tangent)> {
        let (du, ds) = self.base.analytic_tangents(u, s)?;
        Some((self.boost.tangent(&du), self.boost.tangent(&ds)))
    }

    fn u_breaks(&self) -> Vec<f64> {
        self.base.u_breaks()
    }

    fn s_breaks(&self) -> Vec<f64> {
        self.base.s_breaks()
    }
}

/// The affine patch `origin + u·span_u + s·span_s`.
#[derive(Debug, Clone)]
pub struct PlanarSurface {
    pub origin: Event,
    pub span_u: Tangent,
    pub span_s: Tangent,
}

impl SpacetimeSurface for PlanarSurface {
    fn point(&self, u: f64, s: f64) -> Event {
        self.origin.offset(&self.span_u, u).offset(&self.span_s, s)
    }

    fn analytic_tangents(&self, _u: f64, _s: f64) -> Option<(Tangent, Tangent)> {
        Some((self.span_u, self.span_s))
    }
}

/// Bilinear interpolation of a grid of events on a uniform `(u, s)` lattice.
///
/// `nodes[i][j]` sits at `u = i / (n_u − 1)`, `s = j / (n_s − 1)`.
#[derive(Debug, Clone)]
pub struct MeshSurface {
    nodes: Vec<Vec<Event>>,
}

impl MeshSurface {
    pub fn new(nodes: Vec<Vec<Event>>) -> Result<Self> {
        let nu = nodes.len();
        if nu < 2 {
            return Err(Error::Geometry("mesh needs at least two rows in u".into()));
        }
        let ns = nodes[0].len();
        if ns < 2 || nodes.iter().any(|r| r.len() != ns) {
            return Err(Error::Geometry("mesh rows must share a length of at least two".into()));
        }
        if nodes.iter().flatten().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("mesh node"));
        }
        Ok(Self { nodes })
    }

    /// Checks the boundary against a worldline pair at every mesh node, to a
    /// relative tolerance `rel_tol` measured against the mesh extent.
    pub fn check_boundary(&self, pair: &WorldlinePair, rel_tol: f64) -> Result<()> {
        let c = pair.c();
        let nu = self.nodes.len();
        let ns = self.nodes[0].len();
        let scale = self
            .nodes
            .iter()
            .flatten()
            .map(|e| e.displacement_from(&self.nodes[0][0]).max_abs(c))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let close = |x: &Event, y: &Event| x.displacement_from(y).max_abs(c) <= rel_tol * scale;
        for i in 0..nu {
            let u = i as f64 / (nu - 1) as f64;
            if !close(&self.nodes[i][0], &pair.a.at(u)) || !close(&self.nodes[i][ns - 1], &pair.b.at(u)) {
                return Err(Error::Geometry(format!("mesh boundary row {i} is off the worldlines")));
            }
        }
        for j in 0..ns {
            if !close(&self.nodes[0][j], &pair.a.start()) || !close(&self.nodes[nu - 1][j], &pair.a.end()) {
                return Err(Error::Geometry(format!("mesh seam column {j} is not degenerate")));
            }
        }
        Ok(())
    }

    fn cell(&self, x: f64, n: usize) -> (usize, f64) {
        let scaled = x.clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (scaled.floor() as usize).min(n - 2);
        (i, scaled - i as f64)
    }
}

impl SpacetimeSurface for MeshSurface {
    fn point(&self, u: f64, s: f64) -> Event {
        let (i, fu) = self.cell(u, self.nodes.len());
        let (j, fs) = self.cell(s, self.nodes[0].len());
        let lo = self.nodes[i][j].lerp(&self.nodes[i][j + 1], fs);
        let hi = self.nodes[i + 1][j].lerp(&self.nodes[i + 1][j + 1], fs);
        lo.lerp(&hi, fu)
    }

    fn analytic_tangents(&self, u: f64, s: f64) -> Option<(Tangent, Tangent)> {
        let nu = self.nodes.len();
        let ns = self.nodes[0].len();
        let (i, fu) = self.cell(u, nu);
        let (j, fs) = self.cell(s, ns);
        let n = &self.nodes;
        let lo = n[i][j].lerp(&n[i][j + 1], fs);
        let hi = n[i + 1][j].lerp(&n[i + 1][j + 1], fs);
        let left = n[i][j].lerp(&n[i + 1][j], fu);
        let right = n[i][j + 1].lerp(&n[i + 1][j + 1], fu);
        Some((
            hi.displacement_from(&lo).scaled((nu - 1) as f64),
            right.displacement_from(&left).scaled((ns - 1) as f64),
        ))
    }

    fn u_breaks(&self) -> Vec<f64> {
        let nu = self.nodes.len();
        (1..nu - 1).map(|i| i as f64 / (nu - 1) as f64).collect()
    }

    fn s_breaks(&self) -> Vec<f64> {
        let ns = self.nodes[0].len();
        (1..ns - 1).map(|j| j as f64 / (ns - 1) as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::Worldline;

    fn square_pair() -> WorldlinePair {
        let a = Worldline::new(
            vec![Event::new(0.0, -1.0, -1.0, 0.0), Event::new(4.0, 1.0, -1.0, 0.0), Event::new(8.0, 1.0, 1.0, 0.0)],
            1.0,
        )
        .unwrap();
        let b = Worldline::new(
            vec![Event::new(0.0, -1.0, -1.0, 0.0), Event::new(4.0, -1.0, 1.0, 0.0), Event::new(8.0, 1.0, 1.0, 0.0)],
            1.0,
        )
        .unwrap();
        WorldlinePair::new(a, b).unwrap()
    }

    #[test]
    fn planar_jacobian_is_exact() {
        let p = PlanarSurface {
            origin: Event::origin(),
            span_u: Tangent::new(3.0, 0.0, 0.0, 0.0),
            span_s: Tangent::new(0.0, 2.0, 0.0, 0.0),
        };
        let (du, ds) = surface_jacobian(&p, 0.3, 0.7, DEFAULT_FD_STEP);
        assert_eq!(du, Tangent::new(3.0, 0.0, 0.0, 0.0));
        assert_eq!(ds, Tangent::new(0.0, 2.0, 0.0, 0.0));
        let (fu, fs) = finite_difference_tangents(&p, 0.0, 1.0, 1e-3);
        assert!((fu.t - 3.0).abs() < 1e-12 && (fs.pos.x - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ruled_surface_boundary_is_exact() {
        let pair = square_pair();
        let srf = ruled_surface_equal_time(&pair);
        for k in 0..=40 {
            let u = k as f64 / 40.0;
            assert_eq!(srf.point(u, 0.0), pair.a.at(u));
            assert_eq!(srf.point(u, 1.0), pair.b.at(u));
        }
        assert_eq!(srf.point(0.0, 0.4), pair.a.start());
        assert_eq!(srf.point(1.0, 0.9), pair.a.end());
        assert_eq!(srf.u_breaks(), vec![0.5]);
    }

    #[test]
    fn degenerate_pair_gives_zero_chords() {
        let pair = WorldlinePair::new(square_pair().a, square_pair().a).unwrap();
        let srf = ruled_surface_equal_time(&pair);
        let (_, ds) = surface_jacobian(&srf, 0.3, 0.5, DEFAULT_FD_STEP);
        assert_eq!(ds, Tangent::zero());
    }

    #[test]
    fn seam_has_zero_s_tangent() {
        let srf = ruled_surface_equal_time(&square_pair());
        let (_, ds) = surface_jacobian(&srf, 0.0, 0.5, DEFAULT_FD_STEP);
        assert_eq!(ds, Tangent::zero());
        let (_, fd) = finite_difference_tangents(&srf, 1.0, 0.5, DEFAULT_FD_STEP);
        assert!(fd.max_abs(1.0) < 1e-9);
    }

    #[test]
    fn bulge_keeps_boundary() {
        let base: Arc<dyn SpacetimeSurface> = Arc::new(ruled_surface_equal_time(&square_pair()));
        let bulged = BulgedSurface::new(base.clone(), Tangent::new(0.5, 0.0, 0.0, 0.3));
        for k in 0..=10 {
            let u = k as f64 / 10.0;
            let d0 = bulged.point(u, 0.0).displacement_from(&base.point(u, 0.0));
            let d1 = bulged.point(u, 1.0).displacement_from(&base.point(u, 1.0));
            assert!(d0.max_abs(1.0) < 1e-15 && d1.max_abs(1.0) < 1e-15);
        }
        let (du, ds) = bulged.analytic_tangents(0.3, 0.6).unwrap();
        let (fu, fs) = finite_difference_tangents(&bulged, 0.3, 0.6, 1e-6);
        assert!(du.plus(&fu.scaled(-1.0)).max_abs(1.0) < 1e-7);
        assert!(ds.plus(&fs.scaled(-1.0)).max_abs(1.0) < 1e-7);
    }

    #[test]
    fn mesh_reproduces_ruled_surface_at_nodes() {
        let pair = square_pair();
        let srf = ruled_surface_equal_time(&pair);
        let nodes: Vec<Vec<Event>> = (0..=4)
            .map(|i| (0..=2).map(|j| srf.point(i as f64 / 4.0, j as f64 / 2.0)).collect())
            .collect();
        let mesh = MeshSurface::new(nodes).unwrap();
        mesh.check_boundary(&pair, 1e-12).unwrap();
        let p = mesh.point(0.3, 0.7);
        let q = srf.point(0.3, 0.7);
        assert!(p.displacement_from(&q).max_abs(1.0) < 1e-12);
    }
}
