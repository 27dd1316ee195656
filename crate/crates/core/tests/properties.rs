use std::f64::consts::PI;
use std::sync::Arc;

use abflux_core::em::{fields_from_potential, solenoid_configuration, SolenoidConfig};
use abflux_core::holonomy::{flux_phase, gauge_shift, potential_phase, Coupling, PathCheck};
use abflux_core::quadrature::GaussRule;
use abflux_core::scenarios::{
    capacitor_null_electric_boost, capacitor_references, solenoid_references, CapacitorScenario, SolenoidScenario,
};
use abflux_core::spacetime::{finite_difference_tangents, BulgedSurface, SpacetimeSurface};
use abflux_core::synthetic::{polynomial_gauge_function, random_worldline_pair, rng, Polynomial, PolynomialGauge};
use abflux_core::{
    boost_field, boost_potential, boosted_configuration, ruled_surface_equal_time, Boost, CapacitorConfig, Event,
    FieldSample, PotentialSample, QuadratureSpec, Tangent, ThreeVec,
};
use approx::assert_relative_eq;
use nalgebra::{Matrix4, Vector4};
use proptest::prelude::*;

fn vec3(r: f64) -> impl Strategy<Value = ThreeVec> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| ThreeVec::new(x, y, z))
}

fn event(r: f64) -> impl Strategy<Value = Event> {
    (-r..r, vec3(r)).prop_map(|(t, p)| Event::at(t, p))
}

/// Subluminal velocity with c = 1.
fn velocity() -> impl Strategy<Value = ThreeVec> {
    (vec3(1.0), 0.0..0.95f64).prop_filter_map("zero direction", |(d, speed)| {
        let n = d.norm();
        (n > 1e-3).then(|| d / n * speed)
    })
}

fn field() -> impl Strategy<Value = FieldSample> {
    (vec3(2.0), vec3(2.0)).prop_map(|(e, b)| FieldSample { e, b })
}

/// The textbook boost matrix acting on `(ct, x, y, z)`.
fn boost_matrix(v: &ThreeVec, c: f64) -> Matrix4<f64> {
    let beta = v / c;
    let b2 = beta.norm_squared();
    let g = 1.0 / (1.0 - b2).sqrt();
    let mut m = Matrix4::identity();
    m[(0, 0)] = g;
    for i in 0..3 {
        m[(0, i + 1)] = -g * beta[i];
        m[(i + 1, 0)] = -g * beta[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] += if b2 > 0.0 { (g - 1.0) * beta[i] * beta[j] / b2 } else { 0.0 };
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boost_matches_matrix_form(v in velocity(), ev in event(3.0)) {
        let c = 1.0;
        let b = Boost::new(v, c).unwrap();
        let got = b.event(&ev);
        let want = boost_matrix(&v, c) * Vector4::new(c * ev.t, ev.pos.x, ev.pos.y, ev.pos.z);
        prop_assert!((got.t * c - want[0]).abs() < 1e-12 * (1.0 + want.amax()));
        for i in 0..3 {
            prop_assert!((got.pos[i] - want[i + 1]).abs() < 1e-12 * (1.0 + want.amax()));
        }
    }

    #[test]
    fn boost_round_trip(v in velocity(), ev in event(3.0)) {
        let b = Boost::new(v, 1.0).unwrap();
        let back = b.inverse().event(&b.event(&ev));
        prop_assert!((back.t - ev.t).abs() < 1e-12 * (1.0 + ev.t.abs()) * b.gamma().powi(2));
        prop_assert!((back.pos - ev.pos).norm() < 1e-12 * (1.0 + ev.pos.norm()) * b.gamma().powi(2));
    }

    #[test]
    fn interval_is_invariant(v in velocity(), p in event(3.0), q in event(3.0)) {
        let b = Boost::new(v, 1.0).unwrap();
        let before = p.interval_sq(&q, 1.0);
        let after = b.event(&p).interval_sq(&b.event(&q), 1.0);
        let scale = 1.0 + (p.t - q.t).powi(2) + (p.pos - q.pos).norm_squared();
        prop_assert!((before - after).abs() < 1e-11 * scale * b.gamma().powi(2));
    }

    #[test]
    fn collinear_boosts_compose_by_velocity_addition(b1 in -0.9..0.9f64, b2 in -0.9..0.9f64, ev in event(2.0)) {
        let one = Boost::along_x(b1, 1.0).unwrap();
        let two = Boost::along_x(b2, 1.0).unwrap();
        let both = Boost::along_x((b1 + b2) / (1.0 + b1 * b2), 1.0).unwrap();
        let seq = two.event(&one.event(&ev));
        let direct = both.event(&ev);
        let tol = 1e-11 * (1.0 + ev.t.abs() + ev.pos.norm()) * both.gamma().powi(2);
        prop_assert!((seq.t - direct.t).abs() < tol);
        prop_assert!((seq.pos - direct.pos).norm() < tol);
    }

    #[test]
    fn field_invariants_survive_boosts(v in velocity(), f in field()) {
        let b = Boost::new(v, 1.0).unwrap();
        let g = boost_field(&f, &b);
        let g2 = b.gamma().powi(2);
        prop_assert!((g.dot_invariant() - f.dot_invariant()).abs() < 1e-11 * g2 * (1.0 + f.e.norm_squared() + f.b.norm_squared()));
        prop_assert!((g.square_invariant(1.0) - f.square_invariant(1.0)).abs() < 1e-11 * g2 * (1.0 + f.e.norm_squared() + f.b.norm_squared()));
    }

    #[test]
    fn potential_is_a_four_vector(v in velocity(), a in vec3(2.0), phi in -2.0..2.0f64) {
        let b = Boost::new(v, 1.0).unwrap();
        let p = PotentialSample { v: phi, a };
        let q = boost_potential(&p, &b);
        let norm = |p: &PotentialSample| p.v * p.v - p.a.norm_squared();
        prop_assert!((norm(&p) - norm(&q)).abs() < 1e-11 * b.gamma().powi(2) * (1.0 + phi * phi + a.norm_squared()));
        // same transformation law as (ct, x)
        let as_event = b.event(&Event::at(phi, a));
        prop_assert!((as_event.t - q.v).abs() < 1e-12 * (1.0 + q.v.abs()));
        prop_assert!((as_event.pos - q.a).norm() < 1e-12 * (1.0 + q.a.norm()));
    }

    #[test]
    fn double_boost_round_trip_of_fields(v in velocity(), f in field()) {
        let b = Boost::new(v, 1.0).unwrap();
        let back = boost_field(&boost_field(&f, &b), &b.inverse());
        let tol = 1e-11 * b.gamma().powi(2) * (1.0 + f.e.norm() + f.b.norm());
        prop_assert!((back.e - f.e).norm() < tol);
        prop_assert!((back.b - f.b).norm() < tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn solenoid_reference_identities(b0 in 0.1..10.0f64, r in 0.01..0.4f64, u in 0.05..0.95f64, beta in -0.95..0.95f64) {
        let mut s = SolenoidScenario::default();
        s.solenoid = SolenoidConfig::new(b0, r);
        s.packet_speed = u * s.c;
        let b = Boost::along_x(beta, s.c).unwrap();
        let refs = solenoid_references(&s, &b).unwrap();
        prop_assert!((refs.phi_magnetic_sprime + refs.phi_electric_sprime - refs.phi_s).abs() <= 1e-12 * refs.phi_s.abs() * refs.gamma.powi(2) / u);
        prop_assert!((refs.phi_sprime - refs.phi_s).abs() <= 1e-13 * refs.phi_s.abs());
    }

    #[test]
    fn capacitor_reference_identities(e in 0.1..10.0f64, l in 0.1..5.0f64, t in 0.1..5.0f64, theta in 0.01..0.78f64) {
        let mut s = CapacitorScenario::default();
        s.capacitor = CapacitorConfig::new(e, theta, l, 0.0, t);
        let bn = capacitor_null_electric_boost(&s).unwrap();
        let refs = capacitor_references(&s, &bn).unwrap();
        let scale = e * l * t;
        prop_assert!(refs.phi_electric_sprime.abs() <= 1e-12 * scale * refs.gamma.powi(2));
        prop_assert!((refs.phi_magnetic_sprime - refs.phi_s).abs() <= 1e-12 * scale * refs.gamma.powi(2));
        prop_assert!((refs.phi_sprime - refs.phi_s).abs() <= 1e-12 * scale * refs.gamma.powi(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Both routes agree on smooth random gauges and random loops.
    #[test]
    fn routes_agree_on_random_gauges(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = PolynomialGauge::random(&mut r, 2).configuration();
        let pair = random_worldline_pair(&mut r).unwrap();
        let spec = QuadratureSpec { tol: 1e-11, ..Default::default() };
        let k = Coupling::unit();
        let pot = potential_phase(&pair, &cfg, &k, &spec, PathCheck::Off).unwrap();
        let flux = flux_phase(&ruled_surface_equal_time(&pair), &cfg, &k, &spec).unwrap();
        prop_assert!((pot - flux.total).abs() <= 1e-8f64.max(10.0 * spec.tol), "{pot} vs {}", flux.total);
        let swapped = potential_phase(&pair.swapped(), &cfg, &k, &spec, PathCheck::Off).unwrap();
        prop_assert_eq!(swapped, -pot);
    }

    #[test]
    fn potential_route_is_gauge_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = PolynomialGauge::random(&mut r, 2).configuration();
        let pair = random_worldline_pair(&mut r).unwrap();
        let chi = polynomial_gauge_function(Polynomial::random(&mut r, 3, 1.0), 1.0);
        let spec = QuadratureSpec { tol: 1e-12, ..Default::default() };
        let k = Coupling::unit();
        let before = potential_phase(&pair, &cfg, &k, &spec, PathCheck::Off).unwrap();
        let after = potential_phase(&pair, &gauge_shift(&cfg, &chi), &k, &spec, PathCheck::Off).unwrap();
        prop_assert!((before - after).abs() <= 1e-9);
    }

    #[test]
    fn flux_total_is_frame_independent_for_random_gauges(seed in any::<u64>(), beta in -0.9..0.9f64) {
        let mut r = rng(seed);
        let cfg = PolynomialGauge::random(&mut r, 2).configuration();
        let pair = random_worldline_pair(&mut r).unwrap();
        let spec = QuadratureSpec { tol: 1e-11, ..Default::default() };
        let k = Coupling::unit();
        let rest = flux_phase(&ruled_surface_equal_time(&pair), &cfg, &k, &spec).unwrap().total;
        let b = Boost::along_x(beta, 1.0).unwrap();
        let moved = flux_phase(
            &ruled_surface_equal_time(&pair.boosted(&b).unwrap()),
            &boosted_configuration(&cfg, &b),
            &k,
            &spec,
        )
        .unwrap()
        .total;
        prop_assert!((rest - moved).abs() <= 1e-8 * (1.0 + rest.abs()), "{rest} vs {moved}");
    }
}

#[test]
fn boosted_potential_generates_boosted_field() {
    let cfg = solenoid_configuration(&SolenoidConfig::new(1.0, 0.1)).unwrap();
    let b = Boost::along_x(0.6, 1.0).unwrap();
    let moved = boosted_configuration(&cfg, &b);
    // a point inside the moving solenoid, away from its surface
    let e = b.event(&Event::new(0.3, 0.02, -0.01, 0.0));
    let from_potential = fields_from_potential(&moved, &e, 1e-5, 1e-5);
    let direct = moved.field(&e);
    assert!((from_potential.e - direct.e).norm() < 1e-6, "{:?} vs {:?}", from_potential.e, direct.e);
    assert!((from_potential.b - direct.b).norm() < 1e-6, "{:?} vs {:?}", from_potential.b, direct.b);
}

#[test]
fn finite_difference_tangents_are_second_order() {
    let pair = random_worldline_pair(&mut rng(11)).unwrap();
    let base: Arc<dyn SpacetimeSurface> = Arc::new(ruled_surface_equal_time(&pair));
    let srf = BulgedSurface::new(base, Tangent::new(0.3, 0.2, -0.1, 0.4));
    // stay inside one smooth cell of the piecewise-linear worldlines
    let kinks = pair.a.knot_params().into_iter().chain(pair.b.knot_params()).collect::<Vec<_>>();
    let u = (1..200).map(|i| i as f64 / 200.0).find(|u| kinks.iter().all(|k| (k - u).abs() > 0.02)).unwrap();
    let s = 0.37;
    let (eu, es) = srf.analytic_tangents(u, s).unwrap();
    let err = |h: f64| {
        let (du, ds) = finite_difference_tangents(&srf, u, s, h);
        let d = |x: &Tangent, y: &Tangent| (x.t - y.t).abs() + (x.pos - y.pos).norm();
        d(&du, &eu) + d(&ds, &es)
    };
    let (e1, e2) = (err(4e-3), err(2e-3));
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() < 0.2, "observed order {order} ({e1:e} -> {e2:e})");
}

#[test]
fn composite_gauss_converges_at_order_2n() {
    let f = |x: f64| (3.0 * x).exp() * (5.0 * x).cos();
    // ∫₀¹ e^{3x} cos 5x dx
    let exact = ((3.0f64).exp() * (3.0 * (5.0f64).cos() + 5.0 * (5.0f64).sin()) - 3.0) / 34.0;
    for n in [2usize, 3, 4] {
        let rule = GaussRule::new(n).unwrap();
        let e1 = (rule.integrate_composite(f, 0.0, 1.0, 8) - exact).abs();
        let e2 = (rule.integrate_composite(f, 0.0, 1.0, 16) - exact).abs();
        let order = (e1 / e2).log2();
        assert!(order > 2.0 * n as f64 - 0.3, "order {order} for {n} points");
    }
}

#[test]
fn adaptive_reaches_tolerance_on_the_solenoid_indicator() {
    let cfg = solenoid_configuration(&SolenoidConfig::new(1.0, 0.1)).unwrap();
    let s = SolenoidScenario { c: 1.0, packet_speed: 0.5, ..Default::default() };
    let (pair, _) = abflux_core::scenarios::build_solenoid_scenario(&s).unwrap();
    for tol in [1e-6, 1e-9, 1e-12] {
        let spec = QuadratureSpec { tol, ..Default::default() };
        let f = flux_phase(&ruled_surface_equal_time(&pair), &cfg, &Coupling::unit(), &spec).unwrap();
        assert!((f.total - PI * 0.01).abs() <= tol.max(1e-15), "tol {tol}: error {:e}", (f.total - PI * 0.01).abs());
    }
}

#[test]
fn degenerate_surface_has_no_flux() {
    let s = SolenoidScenario::default();
    let (pair, cfg) = abflux_core::scenarios::build_solenoid_scenario(&s).unwrap();
    let same = abflux_core::WorldlinePair::new(pair.a.clone(), pair.a.clone()).unwrap();
    let f = flux_phase(&ruled_surface_equal_time(&same), &cfg, &Coupling::unit(), &QuadratureSpec::default()).unwrap();
    assert_eq!((f.magnetic, f.electric, f.total), (0.0, 0.0, 0.0));
    assert_relative_eq!(potential_phase(&same, &cfg, &Coupling::unit(), &QuadratureSpec::default(), PathCheck::Strict).unwrap(), 0.0);
}
