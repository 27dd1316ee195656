//! Random smooth test data: polynomial gauges, gauge functions, vector
//! fields, patches and worldline pairs, all drawn from a seeded ChaCha
//! stream so a seed reproduces the same case everywhere.

use std::sync::Arc;

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::em::{EmConfiguration, FieldFn, FieldSample, PotentialFn, PotentialSample};
use crate::error::Result;
use crate::holonomy::{GaugeFunction, Patch3, VectorField3};
use crate::spacetime::{Event, ThreeVec, Worldline, WorldlinePair};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A polynomial in `D` real variables, stored as `(exponents, coefficient)` terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial<const D: usize> {
    terms: Vec<([u32; D], f64)>,
}

fn monomials<const D: usize>(degree: u32) -> Vec<[u32; D]> {
    let mut out = vec![[0u32; D]];
    for d in 0..D {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for k in 0..=(degree - used) {
                let mut e = *m;
                e[d] = k;
                next.push(e);
            }
        }
        out = next;
    }
    out
}

impl<const D: usize> Polynomial<D> {
    pub fn new(terms: Vec<([u32; D], f64)>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: vec![([0; D], c)] }
    }

    /// Every monomial of total degree `≤ degree`, with coefficients uniform in `[−scale, scale]`.
    pub fn random<R: Rng>(rng: &mut R, degree: u32, scale: f64) -> Self {
        let terms = monomials::<D>(degree).into_iter().map(|e| (e, rng.gen_range(-scale..=scale))).collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[([u32; D], f64)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64; D]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32)))
            .sum()
    }

    /// `∂/∂x_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = *e;
                e2[var] -= 1;
                (e2, c * e[var] as f64)
            })
            .collect();
        Self { terms }
    }
}

/// A smooth gauge `(V, A)` with polynomial components in `(t, x, y, z)`.
/// Fields follow exactly from the derivative polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialGauge {
    pub v: Polynomial<4>,
    pub a: [Polynomial<4>; 3],
}

fn coords(e: &Event) -> [f64; 4] {
    [e.t, e.pos.x, e.pos.y, e.pos.z]
}

impl PolynomialGauge {
    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        Self {
            v: Polynomial::random(rng, degree, 1.0),
            a: std::array::from_fn(|_| Polynomial::random(rng, degree, 1.0)),
        }
    }

    pub fn configuration(&self) -> EmConfiguration {
        let v = self.v.clone();
        let a = self.a.clone();
        let potential: PotentialFn = Arc::new(move |e: &Event| {
            let x = coords(e);
            PotentialSample { v: v.eval(&x), a: ThreeVec::new(a[0].eval(&x), a[1].eval(&x), a[2].eval(&x)) }
        });
        let grad_v: [Polynomial<4>; 3] = std::array::from_fn(|i| self.v.derivative(i + 1));
        let da_dt: [Polynomial<4>; 3] = std::array::from_fn(|i| self.a[i].derivative(0));
        // d[i][j] = ∂A_i/∂x_j
        let d: [[Polynomial<4>; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| self.a[i].derivative(j + 1)));
        let field: FieldFn = Arc::new(move |ev: &Event| {
            let x = coords(ev);
            let e = ThreeVec::from_fn(|i, _| -grad_v[i].eval(&x) - da_dt[i].eval(&x));
            let b = ThreeVec::new(
                d[2][1].eval(&x) - d[1][2].eval(&x),
                d[0][2].eval(&x) - d[2][0].eval(&x),
                d[1][0].eval(&x) - d[0][1].eval(&x),
            );
            FieldSample { e, b }
        });
        EmConfiguration::new("polynomial gauge", field, potential)
    }
}

/// `χ(t, x) = p(c·t, x, y, z)` with its exact gradient.
pub fn polynomial_gauge_function(p: Polynomial<4>, c: f64) -> GaugeFunction {
    let grad: [Polynomial<4>; 4] = std::array::from_fn(|i| p.derivative(i));
    let at = move |e: &Event| [c * e.t, e.pos.x, e.pos.y, e.pos.z];
    let value = p.clone();
    GaugeFunction::new(move |e: &Event| value.eval(&at(e))).with_gradient(move |e: &Event| {
        let x = at(e);
        (c * grad[0].eval(&x), ThreeVec::new(grad[1].eval(&x), grad[2].eval(&x), grad[3].eval(&x)))
    })
}

/// A vector field with polynomial components in `(x, y, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialField {
    pub components: [Polynomial<3>; 3],
}

impl PolynomialField {
    pub fn random<R: Rng>(rng: &mut R, degree: u32) -> Self {
        Self { components: std::array::from_fn(|_| Polynomial::random(rng, degree, 1.0)) }
    }
}

impl VectorField3 for PolynomialField {
    fn value(&self, x: &ThreeVec) -> ThreeVec {
        let p = [x.x, x.y, x.z];
        ThreeVec::from_fn(|i, _| self.components[i].eval(&p))
    }

    fn jacobian(&self, x: &ThreeVec) -> Matrix3<f64> {
        let p = [x.x, x.y, x.z];
        Matrix3::from_fn(|i, j| self.components[i].derivative(j).eval(&p))
    }
}

/// `r(u, v) = Σ c_ij uⁱ vʲ` for `i, j ≤ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadraticPatch {
    pub coeffs: [[ThreeVec; 3]; 3],
}

impl BiquadraticPatch {
    /// A unit square in the xy-plane, randomly warped.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut coeffs = [[ThreeVec::zeros(); 3]; 3];
        coeffs[1][0] = ThreeVec::x();
        coeffs[0][1] = ThreeVec::y();
        for row in coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c += ThreeVec::from_fn(|_, _| rng.gen_range(-0.3..=0.3));
            }
        }
        Self { coeffs }
    }
}

impl Patch3 for BiquadraticPatch {
    fn point(&self, u: f64, v: f64) -> ThreeVec {
        let (pu, pv) = ([1.0, u, u * u], [1.0, v, v * v]);
        let mut r = ThreeVec::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r += self.coeffs[i][j] * (pu[i] * pv[j]);
            }
        }
        r
    }

    fn tangents(&self, u: f64, v: f64) -> (ThreeVec, ThreeVec) {
        let (pu, pv) = ([1.0, u, u * u], [1.0, v, v * v]);
        let (du, dv) = ([0.0, 1.0, 2.0 * u], [0.0, 1.0, 2.0 * v]);
        let mut ru = ThreeVec::zeros();
        let mut rv = ThreeVec::zeros();
        for i in 0..3 {
            for j in 0..3 {
                ru += self.coeffs[i][j] * (du[i] * pv[j]);
                rv += self.coeffs[i][j] * (pu[i] * dv[j]);
            }
        }
        (ru, rv)
    }
}

fn random_worldline<R: Rng>(rng: &mut R, start: Event, end: Event, c: f64) -> Result<Worldline> {
    loop {
        let n = rng.gen_range(1..=3);
        let mut ts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..0.9)).collect();
        ts.sort_by(f64::total_cmp);
        let mut vertices = vec![start];
        for w in ts {
            let base = start.lerp(&end, w);
            let jitter = ThreeVec::from_fn(|_, _| rng.gen_range(-0.25..=0.25));
            vertices.push(Event::at(base.t, base.pos + jitter));
        }
        vertices.push(end);
        if let Ok(w) = Worldline::new(vertices, c) {
            return Ok(w);
        }
    }
}

/// Two random piecewise-linear worldlines from a shared split event to a
/// shared recombination event, with `c = 1`.
pub fn random_worldline_pair<R: Rng>(rng: &mut R) -> Result<WorldlinePair> {
    let c = 1.0;
    let start = Event::at(rng.gen_range(-0.5..=0.5), ThreeVec::from_fn(|_, _| rng.gen_range(-0.5..=0.5)));
    let span = rng.gen_range(1.0..=2.0);
    let drift = ThreeVec::from_fn(|_, _| rng.gen_range(-0.2..=0.2)) * span;
    let end = Event::at(start.t + span, start.pos + drift);
    let a = random_worldline(rng, start, end, c)?;
    let b = random_worldline(rng, start, end, c)?;
    WorldlinePair::new(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn monomial_count_matches_binomial() {
        // C(3 + 4, 4) = 35 monomials of degree ≤ 3 in four variables
        assert_eq!(monomials::<4>(3).len(), 35);
        assert_eq!(monomials::<3>(2).len(), 10);
    }

    #[test]
    fn derivative_of_known_polynomial() {
        // p = 3 x² y − 2 y + 5
        let p = Polynomial::<2>::new(vec![([2, 1], 3.0), ([0, 1], -2.0), ([0, 0], 5.0)]);
        let px = p.derivative(0);
        let py = p.derivative(1);
        assert_relative_eq!(px.eval(&[2.0, 3.0]), 36.0);
        assert_relative_eq!(py.eval(&[2.0, 3.0]), 10.0);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn same_seed_same_case() {
        let a = PolynomialGauge::random(&mut rng(7), 3);
        let b = PolynomialGauge::random(&mut rng(7), 3);
        assert_eq!(a, b);
        let p = random_worldline_pair(&mut rng(7)).unwrap();
        let q = random_worldline_pair(&mut rng(7)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn polynomial_gauge_fields_are_source_free() {
        // ∇·B = 0 holds identically for B = ∇×A
        let cfg = PolynomialGauge::random(&mut rng(3), 3).configuration();
        let h = 1e-4;
        let e = Event::new(0.2, 0.1, -0.3, 0.4);
        let mut div = 0.0;
        for j in 0..3 {
            let mut d = ThreeVec::zeros();
            d[j] = h;
            let hi = cfg.field(&Event::at(e.t, e.pos + d)).b[j];
            let lo = cfg.field(&Event::at(e.t, e.pos - d)).b[j];
            div += (hi - lo) / (2.0 * h);
        }
        assert!(div.abs() < 1e-7, "div B = {div}");
    }
}
