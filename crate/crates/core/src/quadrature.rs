//! Composite and adaptive Gauss-Legendre quadrature in one and two
//! dimensions, with panel splitting at the roots of level functions that
//! mark discontinuities of the integrand.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of the outer tolerance granted to each inner (s-direction) integral.
pub const INNER_TOL_FRACTION: f64 = 1e-2;

/// Hard cap on leaf panels in one adaptive integral.
pub const MAX_PANELS: usize = 200_000;

/// Leaf budget for each inner integral of [`integrate_unit_square`].
pub const INNER_MAX_PANELS: usize = 2_048;

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("Gauss-Legendre order must be at least 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Abscissae mapped to `[a, b]`.
    pub fn mapped_nodes(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().map(move |x| mid + half * x)
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let sum: f64 = self.mapped_nodes(a, b).zip(&self.weights).map(|(x, w)| w * f(x)).sum();
        half * sum
    }

    /// Composite rule over `panels` equal sub-intervals.
    pub fn integrate_composite(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                let hi = if k + 1 == panels { b } else { lo + h };
                self.integrate(&f, lo, hi)
            })
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn bisect(h: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, mut ha: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let hm = h(m);
        if hm == 0.0 {
            return m;
        }
        if (hm < 0.0) == (ha < 0.0) {
            a = m;
            ha = hm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Minimizes `sign * h` on `[a, b]` by golden-section search.
fn golden_min(h: &dyn Fn(f64) -> f64, sign: f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let g = |x: f64| sign * h(x);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..80 {
        if g1 < 0.0 {
            return (x1, g1 * sign);
        }
        if g2 < 0.0 {
            return (x2, g2 * sign);
        }
        if g1 < g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - INV_PHI * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + INV_PHI * (b - a);
            g2 = g(x2);
        }
        if b - a <= 1e-15 * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
    }
    if g1 < g2 {
        (x1, g1 * sign)
    } else {
        (x2, g2 * sign)
    }
}

/// Zeros of a level function on `[lo, hi]`.
///
/// Sign changes between `samples + 1` uniform samples are bisected to
/// machine precision. Sampled local extrema that stay on one side of zero
/// are refined by golden-section search, so a region that slips between
/// two samples (a near-tangent crossing) still yields its pair of roots.
pub fn level_roots(h: &dyn Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let m = samples.max(2);
    let xs: Vec<f64> = (0..=m).map(|i| lo + (hi - lo) * i as f64 / m as f64).collect();
    let hs: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
    let mut roots = Vec::new();
    for i in 0..m {
        let (a, b) = (hs[i], hs[i + 1]);
        if a == 0.0 {
            if i > 0 {
                roots.push(xs[i]);
            }
        } else if b != 0.0 && (a < 0.0) != (b < 0.0) {
            roots.push(bisect(h, xs[i], xs[i + 1], a));
        }
    }

    let mut probe = |a: f64, b: f64, sign: f64| {
        let (x, hx) = golden_min(h, sign, a, b);
        if sign * hx < 0.0 {
            roots.push(bisect(h, a, x, h(a)));
            roots.push(bisect(h, x, b, hx));
        }
    };
    for i in 1..m {
        let (p, q, r) = (hs[i - 1], hs[i], hs[i + 1]);
        let same_side = (p > 0.0 && q > 0.0 && r > 0.0) || (p < 0.0 && q < 0.0 && r < 0.0);
        if same_side && (q - p) * (r - q) < 0.0 && q.abs() < p.abs().min(r.abs()) {
            probe(xs[i - 1], xs[i + 1], q.signum());
        }
    }
    // extrema hiding in the two end intervals
    if hs[0] * hs[1] > 0.0 && hs[0].abs() < hs[1].abs() {
        probe(xs[0], xs[1], hs[0].signum());
    }
    if hs[m] * hs[m - 1] > 0.0 && hs[m].abs() < hs[m - 1].abs() {
        probe(xs[m - 1], xs[m], hs[m].signum());
    }

    roots.retain(|x| *x > lo && *x < hi);
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Settings for the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Gauss-Legendre points per panel per axis.
    pub base_order: usize,
    /// Initial panels along `(u, s)`.
    pub initial_panels: (usize, usize),
    /// Target absolute error on the result.
    pub tol: f64,
    /// Bisection depth limit below each initial panel.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { base_order: 4, initial_panels: (16, 16), tol: 1e-9, max_depth: 18 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base_order < 2 {
            return Err(Error::InvalidParameter(format!("base_order must be >= 2, got {}", self.base_order)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.initial_panels.0 == 0 || self.initial_panels.1 == 0 {
            return Err(Error::InvalidParameter("initial_panels must be nonzero".into()));
        }
        Ok(())
    }
}

/// Result of an adaptive integral over `N` simultaneous integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    depth: u32,
    coarse: [f64; N],
    left: [f64; N],
    right: [f64; N],
}

impl<const N: usize> Panel<N> {
    fn value(&self) -> [f64; N] {
        std::array::from_fn(|k| self.left[k] + self.right[k])
    }

    fn error(&self) -> f64 {
        (0..N).map(|k| (self.left[k] + self.right[k] - self.coarse[k]).abs()).sum()
    }
}

#[derive(PartialEq)]
struct HeapKey(f64, usize);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Options for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub initial_panels: usize,
    pub tol: f64,
    pub max_depth: u32,
    pub max_panels: usize,
    pub parallel: bool,
}

impl AdaptiveOptions {
    pub fn new(initial_panels: usize, tol: f64, max_depth: u32) -> Self {
        Self { initial_panels, tol, max_depth, max_panels: MAX_PANELS, parallel: false }
    }
}

/// Splits `[lo, hi]` at `breaks` and into roughly `panels` pieces overall.
fn initial_intervals(lo: f64, hi: f64, breaks: &[f64], panels: usize) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|x| *x > lo && *x < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![lo];
    edges.extend(cuts);
    edges.push(hi);
    let width = hi - lo;
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let k = ((panels as f64) * (b - a) / width).ceil().max(1.0) as usize;
        let h = (b - a) / k as f64;
        for j in 0..k {
            let x0 = a + j as f64 * h;
            let x1 = if j + 1 == k { b } else { a + (j + 1) as f64 * h };
            out.push((x0, x1));
        }
    }
    out
}

fn gauss_batch<const N: usize, F>(
    f: &F,
    rule: &GaussRule,
    intervals: &[(f64, f64)],
    parallel: bool,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    let n = rule.order();
    let xs: Vec<f64> = intervals.iter().flat_map(|&(a, b)| rule.mapped_nodes(a, b).collect::<Vec<_>>()).collect();
    let ys: Vec<[f64; N]> = if parallel && xs.len() > n {
        xs.par_iter().map(|&x| f(x)).collect::<Result<_>>()?
    } else {
        xs.iter().map(|&x| f(x)).collect::<Result<_>>()?
    };
    Ok(intervals
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let half = 0.5 * (b - a);
            let mut acc = [0.0; N];
            for (j, w) in rule.weights().iter().enumerate() {
                let y = &ys[i * n + j];
                for k in 0..N {
                    acc[k] += w * y[k];
                }
            }
            acc.map(|v| v * half)
        })
        .collect())
}

/// Globally adaptive Gauss-Legendre integration of `N` integrands at once.
///
/// The panel with the largest estimated error (fine vs coarse rule) is
/// bisected until the summed estimate drops below `tol`. Panels at
/// `max_depth` are frozen. The final sum runs in left-to-right panel order.
pub fn adaptive<const N: usize, F>(
    f: &F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    rule: &GaussRule,
    opts: &AdaptiveOptions,
) -> Result<Integral<N>>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    let (r, met) = refine(f, lo, hi, breaks, rule, opts)?;
    if !met {
        return Err(Error::ToleranceNotMet {
            estimated_error: r.error,
            tol: opts.tol,
            panels: r.panels,
            max_depth: opts.max_depth,
        });
    }
    Ok(r)
}

/// Like [`adaptive`], but returns the best estimate with its error when the
/// tolerance cannot be met within the depth and panel limits.
pub fn adaptive_best_effort<const N: usize, F>(
    f: &F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    rule: &GaussRule,
    opts: &AdaptiveOptions,
) -> Result<Integral<N>>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    Ok(refine(f, lo, hi, breaks, rule, opts)?.0)
}

fn refine<const N: usize, F>(
    f: &F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    rule: &GaussRule,
    opts: &AdaptiveOptions,
) -> Result<(Integral<N>, bool)>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    if hi <= lo {
        return Ok((Integral { value: [0.0; N], error: 0.0, panels: 0 }, true));
    }
    let base = initial_intervals(lo, hi, breaks, opts.initial_panels);
    let mut requests = Vec::with_capacity(3 * base.len());
    for &(a, b) in &base {
        let m = 0.5 * (a + b);
        requests.extend([(a, b), (a, m), (m, b)]);
    }
    let vals = gauss_batch(f, rule, &requests, opts.parallel)?;
    let mut panels: Vec<Panel<N>> = base
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Panel {
            a,
            b,
            depth: 0,
            coarse: vals[3 * i],
            left: vals[3 * i + 1],
            right: vals[3 * i + 2],
        })
        .collect();
    let mut alive = vec![true; panels.len()];
    let mut heap: BinaryHeap<HeapKey> =
        panels.iter().enumerate().map(|(i, p)| HeapKey(p.error(), i)).collect();

    let total = |panels: &[Panel<N>], alive: &[bool]| -> (f64, f64) {
        let mut err = 0.0;
        let mut mag = 0.0;
        for (p, _) in panels.iter().zip(alive).filter(|(_, a)| **a) {
            err += p.error();
            mag += p.value().iter().map(|v| v.abs()).sum::<f64>();
        }
        (err, mag)
    };
    let mut leaf_count = panels.len();
    let (mut err, mut mag) = total(&panels, &alive);

    let met = loop {
        let floor = 64.0 * f64::EPSILON * mag;
        if err <= opts.tol.max(floor) {
            break true;
        }
        let Some(HeapKey(_, idx)) = heap.pop() else {
            // every remaining panel is frozen at max depth
            let (e, m) = total(&panels, &alive);
            break e <= opts.tol.max(64.0 * f64::EPSILON * m);
        };
        let p = panels[idx];
        if p.depth >= opts.max_depth {
            continue;
        }
        if leaf_count >= opts.max_panels {
            break false;
        }
        let m = 0.5 * (p.a + p.b);
        let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
        let v = gauss_batch(f, rule, &[(p.a, lm), (lm, m), (m, rm), (rm, p.b)], opts.parallel)?;
        let children = [
            Panel { a: p.a, b: m, depth: p.depth + 1, coarse: p.left, left: v[0], right: v[1] },
            Panel { a: m, b: p.b, depth: p.depth + 1, coarse: p.right, left: v[2], right: v[3] },
        ];
        alive[idx] = false;
        err -= p.error();
        mag -= p.value().iter().map(|x| x.abs()).sum::<f64>();
        for c in children {
            err += c.error();
            mag += c.value().iter().map(|x| x.abs()).sum::<f64>();
            heap.push(HeapKey(c.error(), panels.len()));
            panels.push(c);
            alive.push(true);
        }
        leaf_count += 1;
        if err <= opts.tol {
            // re-sum to shed accumulated drift before deciding
            (err, mag) = total(&panels, &alive);
        }
    };

    let mut leaves: Vec<&Panel<N>> = panels.iter().zip(&alive).filter(|(_, a)| **a).map(|(p, _)| p).collect();
    leaves.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = [0.0; N];
    let mut error = 0.0;
    for p in &leaves {
        let v = p.value();
        for k in 0..N {
            value[k] += v[k];
        }
        error += p.error();
    }
    Ok((Integral { value, error, panels: leaves.len() }, met))
}

/// A level function on the parameter square.
pub type Level2d<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);

/// Iterated adaptive integration over the unit square.
///
/// For every outer node `u`, the inner integral over `s` is split at
/// `s_breaks` and at the roots of every level function along the line.
/// The outer integral is split at `u_breaks` and at level-function roots
/// along sampled lines of constant `s`, which catches discontinuities that
/// run parallel to the `s` direction (for instance a pulse edge on an
/// equal-time surface).
/// Values of `u` where the number of roots of `g(u, ·)` on `[0, 1]` changes.
///
/// These are the tangency points of the level set. The inner integral has a
/// square-root singularity there and often vanishes on one side, which can
/// fool the outer error estimate if the point is not a panel edge.
fn topology_changes(g: Level2d<'_>, u_samples: usize, s_samples: usize) -> Vec<f64> {
    let count = |u: f64| level_roots(&|s| g(u, s), 0.0, 1.0, s_samples).len();
    let n = u_samples.max(2);
    let mut out = Vec::new();
    let mut prev = (0.0, count(0.0));
    for i in 1..=n {
        let u = i as f64 / n as f64;
        let k = count(u);
        if k != prev.1 {
            let (mut a, mut b) = (prev.0, u);
            let ka = prev.1;
            while b - a > 4.0 * f64::EPSILON {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if count(m) == ka {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev = (u, k);
    }
    out
}

pub fn integrate_unit_square<const N: usize, F>(
    f: &F,
    levels: &[Level2d<'_>],
    u_breaks: &[f64],
    s_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral<N>>
where
    F: Fn(f64, f64) -> [f64; N] + Sync,
{
    spec.validate()?;
    let rule = GaussRule::new(spec.base_order)?;
    let (nu, ns) = spec.initial_panels;
    let inner_samples = ns * spec.base_order;
    let outer_samples = nu * spec.base_order;
    let inner_opts = AdaptiveOptions {
        initial_panels: ns,
        tol: spec.tol * INNER_TOL_FRACTION,
        max_depth: spec.max_depth,
        max_panels: INNER_MAX_PANELS,
        parallel: false,
    };
    let inner_panels = AtomicUsize::new(0);

    let inner = |u: f64| -> Result<[f64; N]> {
        let mut breaks: Vec<f64> = s_breaks.to_vec();
        for g in levels {
            breaks.extend(level_roots(&|s| g(u, s), 0.0, 1.0, inner_samples));
        }
        let r = adaptive_best_effort(&|s: f64| Ok(f(u, s)), 0.0, 1.0, &breaks, &rule, &inner_opts)?;
        inner_panels.fetch_add(r.panels, AtomicOrdering::Relaxed);
        Ok(r.value)
    };

    let mut outer_breaks: Vec<f64> = u_breaks.to_vec();
    for g in levels {
        for j in 0..=ns {
            let s = j as f64 / ns as f64;
            outer_breaks.extend(level_roots(&|u| g(u, s), 0.0, 1.0, outer_samples));
        }
        outer_breaks.extend(topology_changes(*g, outer_samples, inner_samples));
    }
    let outer_opts = AdaptiveOptions { parallel: true, ..AdaptiveOptions::new(nu, spec.tol, spec.max_depth) };
    let mut r = adaptive(&inner, 0.0, 1.0, &outer_breaks, &rule, &outer_opts)?;
    r.panels += inner_panels.load(AtomicOrdering::Relaxed);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_rule_is_exact_to_degree_2n_minus_1() {
        for n in 1..=12 {
            let rule = GaussRule::new(n).unwrap();
            let wsum: f64 = rule.weights().iter().sum();
            assert_relative_eq!(wsum, 2.0, max_relative = 1e-14);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got = rule.integrate(|x| x.powi(k as i32), -1.0, 1.0);
                assert!((got - exact).abs() < 1e-14, "n={n} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn known_three_point_rule() {
        let r = GaussRule::new(3).unwrap();
        assert_relative_eq!(r.nodes()[2], (0.6f64).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.weights()[1], 8.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn roots_of_linear_and_quadratic_levels() {
        let r = level_roots(&|x| x - 0.3, 0.0, 1.0, 8);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.3).abs() < 1e-15);
        // narrow dip between two samples
        let r = level_roots(&|x| (x - 0.51) * (x - 0.52), 0.0, 1.0, 4);
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0] - 0.51).abs() < 1e-14 && (r[1] - 0.52).abs() < 1e-14);
        // dip inside an end interval
        let r = level_roots(&|x| (x - 0.01) * (x - 0.02), 0.0, 1.0, 4);
        assert_eq!(r.len(), 2, "{r:?}");
        assert!(level_roots(&|x| x * x + 1.0, -1.0, 1.0, 16).is_empty());
    }

    #[test]
    fn adaptive_resolves_a_jump_at_a_break() {
        let rule = GaussRule::new(4).unwrap();
        let opts = AdaptiveOptions::new(4, 1e-13, 30);
        let f = |x: f64| Ok([if x < 1.0 / 3.0 { 1.0 } else { 2.0 }]);
        let r = adaptive(&f, 0.0, 1.0, &[1.0 / 3.0], &rule, &opts).unwrap();
        assert!((r.value[0] - 5.0 / 3.0).abs() < 1e-14);
        assert!(r.panels <= 8);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let rule = GaussRule::new(4).unwrap();
        let opts = AdaptiveOptions::new(4, 1e-12, 40);
        let r = adaptive(&|x: f64| Ok([x.sqrt()]), 0.0, 1.0, &[], &rule, &opts).unwrap();
        assert!((r.value[0] - 2.0 / 3.0).abs() < 1e-12, "{}", r.value[0]);
    }

    #[test]
    fn reports_tolerance_not_met() {
        let rule = GaussRule::new(2).unwrap();
        let opts = AdaptiveOptions::new(1, 1e-14, 3);
        let f = |x: f64| Ok([(40.0 * x).sin()]);
        assert!(matches!(adaptive(&f, 0.0, 1.0, &[], &rule, &opts), Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn disk_area_by_level_splitting() {
        // indicator of a disk of radius 0.2 centred at (0.45, 0.55)
        let g = |u: f64, s: f64| ((u - 0.45).powi(2) + (s - 0.55).powi(2) - 0.04) / 0.04;
        let f = |u: f64, s: f64| [if g(u, s) < 0.0 { 1.0 } else { 0.0 }];
        let spec = QuadratureSpec { tol: 1e-12, ..QuadratureSpec::default() };
        let r = integrate_unit_square(&f, &[&g], &[], &[], &spec).unwrap();
        let exact = std::f64::consts::PI * 0.04;
        assert!((r.value[0] - exact).abs() < 1e-11, "{} vs {}", r.value[0], exact);
    }
}
