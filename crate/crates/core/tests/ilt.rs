//! Bromwich quadratures against elementary transform pairs, the hairpin
//! contour against the straight line, and time-domain reconstructions.

use num_complex::Complex64 as C;
use taillab_core::ilt::*;
use taillab_core::jost::Frequency;
use taillab_core::numerics::gk;
use taillab_core::potential::PotentialSpec;
use taillab_core::resolvent::{free_g0, GridFunction};
use taillab_core::Result;

fn uniform(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|i| a + h * i as f64).collect()
}

fn gaussian(c: f64, s: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x| (-(x - c) * (x - c) / (2.0 * s * s)).exp()
}

#[test]
fn elementary_pairs_with_cycle_rule() {
    let line = VerticalLine::cycle();
    let one = C::new(1.0, 0.0);
    let f = |e: C| -> Result<C> { Ok(one / (e + 1.0)) };
    let v = bromwich(&f, 2.0, &line, true).unwrap();
    assert!((v.re - (-2.0f64).exp()).abs() < 1e-4 * (-2.0f64).exp(), "{v}");
    let f = |e: C| -> Result<C> { Ok(one / (e * e)) };
    let v = bromwich(&f, 3.0, &line, true).unwrap();
    assert!((v.re - 3.0).abs() < 1e-4 * 3.0, "{v}");
    let f = |e: C| -> Result<C> { Ok((e + 1.0).powf(-0.5) * std::f64::consts::PI.sqrt()) };
    let exact = (-5.0f64).exp() / 5.0f64.sqrt();
    let v = bromwich(&f, 5.0, &line, true).unwrap();
    assert!((v.re - exact).abs() < 1e-4 * exact, "{v} vs {exact}");
    // the two-sided evaluation agrees and is real
    let v2 = bromwich(&f, 5.0, &line, false).unwrap();
    assert!((v2.re - exact).abs() < 1e-4 * exact && v2.im.abs() < 1e-8);
}

#[test]
fn result_is_independent_of_the_line() {
    let one = C::new(1.0, 0.0);
    let f = |e: C| -> Result<C> { Ok(one / ((e + 1.0) * (e + 1.0))) };
    let exact = 4.0 * (-4.0f64).exp();
    for c in [0.05, 0.1, 0.5] {
        let line = VerticalLine { shift: Some(c), ..VerticalLine::cycle() };
        let v = bromwich(&f, 4.0, &line, true).unwrap();
        assert!((v.re - exact).abs() < 1e-6 * exact, "c={c}: {v}");
    }
}

#[test]
fn shared_node_trapezoid_on_gaussian_transform() {
    // (1/2πi)∫ e^{εt + ε²/2} dε = e^{−t²/2}/√(2π) on every vertical line.
    let f = |e: C| -> Result<C> { Ok((e * e * 0.5).exp()) };
    let ts = [0.5, 1.0, 2.0, 3.0];
    for c in [0.1, 1.0] {
        let line = VerticalLine { shift: Some(c), tol: 1e-12, ..VerticalLine::default() };
        let v = bromwich_many(&f, &ts, &line, true, &Sequential).unwrap();
        for (t, v) in ts.iter().zip(&v) {
            let exact = (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
            assert!((v.re - exact).abs() < 1e-9, "c={c} t={t}: {} vs {exact}", v.re);
        }
    }
}

#[test]
fn non_decaying_sampler_is_reported() {
    let f = |_e: C| -> Result<C> { Ok(C::new(1.0, 0.0)) };
    let line = VerticalLine { max_nodes: 1024, ..VerticalLine::default() };
    assert!(bromwich_many(&f, &[1.0], &line, true, &Sequential).is_err());
    assert!(bromwich(&f, 1.0, &VerticalLine { min_nodes: 10, ..line }, true).is_err());
    assert!(bromwich(&f, -1.0, &line, true).is_err());
}

#[test]
fn hairpin_matches_the_straight_line() {
    let model = ModelTerm::log_term(1.0, 2, 0.0, 4);
    let hp = deformed_cut_integral(&model, 50.0, &Hairpin::default()).unwrap();
    let f = move |e: C| -> Result<C> { Ok(model.eval(e)) };
    let line = bromwich(&f, 50.0, &VerticalLine::cycle(), true).unwrap();
    assert!((hp.value - line.re).abs() < 1e-6 * hp.value.abs(), "{} vs {}", hp.value, line.re);
    // high-precision reference value of the same inverse transform
    let reference = -2.08034369671489e-5;
    assert!((hp.value - reference).abs() < 1e-8 * reference.abs(), "{}", hp.value);
    assert!(hp.legs.abs() < 1e-4 * hp.value.abs());
    let late = deformed_cut_integral(&model, 1000.0, &Hairpin::default()).unwrap();
    assert!((late.value + 2.02424242548e-9).abs() < 1e-8 * 2.02424242548e-9, "{}", late.value);
}

#[test]
fn watson_trend_and_sign() {
    let model = ModelTerm::log_term(1.0, 2, 0.0, 4);
    let mut prev = f64::INFINITY;
    for t in [50.0, 200.0, 1000.0, 5000.0] {
        let hp = deformed_cut_integral(&model, t, &Hairpin::default()).unwrap();
        assert!(hp.value < 0.0 && hp.watson < 0.0);
        let rel = (hp.value / hp.watson - 1.0).abs();
        assert!(rel < prev, "t={t}: {rel}");
        prev = rel;
    }
    assert!(prev < 3e-3);
    assert_eq!(watson_leading(1.0, 3, 1.0), 6.0);
    assert_eq!(watson_leading(2.0, 1, 2.0), 0.5);
}

#[test]
fn regularising_exponent_does_not_matter_late() {
    for p in [2u32, 3] {
        let a = deformed_cut_integral(&ModelTerm::log_term(1.0, p, 1.0, p + 2), 2000.0, &Hairpin::default()).unwrap();
        let b = deformed_cut_integral(&ModelTerm::log_term(1.0, p, 1.0, p + 3), 2000.0, &Hairpin::default()).unwrap();
        assert!((a.value / b.value - 1.0).abs() < 5e-3, "p={p}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn hairpin_rejects_non_integrable_branch_point_and_reduces_depth() {
    let bad = ModelTerm { coefficient: 1.0, power: 0, log: true, scale: 1.0, exponent: 2 };
    assert!(deformed_cut_integral(&bad, 10.0, &Hairpin::default()).is_err());
    let far = ModelTerm::log_term(1.0, 2, 10.0, 4);
    let hp = deformed_cut_integral(&far, 100.0, &Hairpin::default()).unwrap();
    assert!((hp.depth - 0.5 / 101.0f64.sqrt()).abs() < 1e-15);
    let f = move |e: C| -> Result<C> { Ok(far.eval(e)) };
    let line = bromwich(&f, 100.0, &VerticalLine::cycle(), true).unwrap();
    assert!((hp.value - line.re).abs() < 1e-5 * hp.value.abs(), "{} vs {}", hp.value, line.re);
}

#[test]
fn free_kernel_time_domain_identity() {
    let fx = gaussian(1.0, 0.5);
    let data = GridFunction::sample(uniform(-10.0, 10.0, 0.01), fx).unwrap();
    let i0 = data.node(0.0).unwrap();
    let sampler = |e: C| -> Result<C> { Ok(free_g0(Frequency::new(e)?, &data).values()[i0]) };
    let t = 5.0;
    let v = bromwich(&sampler, t, &VerticalLine { tol: 1e-9, ..VerticalLine::cycle() }, true).unwrap();
    let exact = -0.5 * gk::integrate(|s: f64| (-(t - s)).exp() * (fx(s) + fx(-s)), 0.0, t, Default::default()).unwrap();
    assert!((v.re - exact).abs() < 1e-4 * exact.abs(), "{} vs {exact}", v.re);
}

#[test]
fn free_wave_reconstruction_is_dalembert() {
    let f1 = gaussian(1.0, 0.5);
    let grid = uniform(-6.0, 8.0, 0.01);
    let psi1 = GridFunction::sample(grid.clone(), f1).unwrap();
    let psi0 = GridFunction::zeros(grid).unwrap();
    let ts = [1.0, 3.0];
    let opts = ReconstructOptions { line: VerticalLine { tol: 1e-6, ..VerticalLine::default() }, ..Default::default() };
    let v = reconstruct_time_solution(&PotentialSpec::zero(), &psi0, &psi1, 0.0, &ts, &opts, &Sequential).unwrap();
    for (t, v) in ts.iter().zip(&v) {
        let exact = 0.5 * gk::integrate(f1, -t, *t, Default::default()).unwrap();
        assert!((v.re - exact).abs() < 1e-5, "t={t}: {} vs {exact}", v.re);
    }
}

#[test]
fn reconstruction_with_potential_is_real() {
    let spec = PotentialSpec::pure(3, 1.0, 1.0, 2.0, -2.0).unwrap();
    let grid = uniform(-6.0, 8.0, 0.02);
    let psi1 = GridFunction::sample(grid.clone(), gaussian(1.0, 0.5)).unwrap();
    let psi0 = GridFunction::sample(grid, gaussian(-0.5, 0.5)).unwrap();
    let line = VerticalLine { tol: 1e-6, ..VerticalLine::default() };
    let opts = ReconstructOptions { assume_real: false, line, ..Default::default() };
    let v = reconstruct_time_solution(&spec, &psi0, &psi1, 0.0, &[2.0], &opts, &Sequential).unwrap();
    assert!(v[0].im.abs() < 1e-6, "{}", v[0]);
    assert!(v[0].re.abs() > 1e-2);
}
