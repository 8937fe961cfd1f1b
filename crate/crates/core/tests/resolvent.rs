//! Green operator against closed forms, stencil residuals and algebraic identities.

use num_complex::Complex64 as C;
use taillab_core::jost::Frequency;
use taillab_core::numerics::gk;
use taillab_core::potential::PotentialSpec;
use taillab_core::resolvent::{
    fit_log_singularity, free_g0, free_g1, green_apply, psi_hat, GridFunction, ResolventConfig,
};

fn spec3() -> PotentialSpec {
    PotentialSpec::pure(3, 1.0, 1.0, 2.0, -2.0).unwrap()
}

fn uniform(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|i| a + h * i as f64).collect()
}

fn gaussian(c: f64, s: f64) -> impl Fn(f64) -> f64 {
    move |x| (-(x - c) * (x - c) / (2.0 * s * s)).exp()
}

fn data(c: f64) -> GridFunction {
    GridFunction::sample(uniform(-6.0, 8.0, 0.01), gaussian(c, 0.5)).unwrap()
}

#[test]
fn free_space_matches_closed_form_kernel() {
    let f = gaussian(1.0, 0.5);
    let gf = GridFunction::sample(uniform(-6.0, 8.0, 0.005), &f).unwrap();
    let cfg = ResolventConfig::default();
    for e in [C::new(0.3, 0.0), C::new(1.0, 2.0), C::new(10.0, -3.0), C::new(0.0, 1.5)] {
        let eps = Frequency::new(e).unwrap();
        let u = green_apply(&PotentialSpec::zero(), eps, &gf, &cfg).unwrap();
        for &x in &[-2.0, 0.0, 0.73, 1.0, 3.5] {
            let i = gf.node(x).unwrap();
            let opts = gk::GkOptions { abs_tol: 1e-15, rel_tol: 1e-13, ..Default::default() };
            let left = gk::integrate(|u: f64| (-e * (x - u)).exp() * f(u), -6.0, x, opts).unwrap();
            let right = gk::integrate(|u: f64| (-e * (u - x)).exp() * f(u), x, 8.0, opts).unwrap();
            let exact = -(left + right) / (e * 2.0);
            assert!((u.values()[i] - exact).norm() < 1e-8 * exact.norm().max(1e-3), "ε={e} x={x}: {} vs {exact}", u.values()[i]);
        }
    }
}

#[test]
fn zero_data_gives_zero() {
    let z = GridFunction::zeros(uniform(-3.0, 3.0, 0.1)).unwrap();
    let cfg = ResolventConfig::default();
    let eps = Frequency::real(1.0).unwrap();
    let u = green_apply(&spec3(), eps, &z, &cfg).unwrap();
    assert!(u.sup_norm() == 0.0);
    assert!(free_g0(eps, &z).sup_norm() == 0.0 && free_g1(eps, &z).sup_norm() == 0.0);
    let r = psi_hat(&spec3(), eps, &z, &z, false, &cfg).unwrap();
    assert!(r.psi_hat.sup_norm() == 0.0);
}

#[test]
fn ode_residual_over_twelve_frequencies() {
    let v = spec3();
    let cfg = ResolventConfig::default();
    let psi1 = data(1.0);
    let psi0 = data(-0.5);
    let mut worst: f64 = 0.0;
    for k in 0..12 {
        let r = 1e-2 * 1e3f64.powf(k as f64 / 11.0);
        let th = [0.0, 0.7, -1.2, 1.5][k % 4];
        let eps = Frequency::new(C::from_polar(r, th)).unwrap();
        let res = psi_hat(&v, eps, &psi0, &psi1, false, &cfg).unwrap();
        worst = worst.max(res.residual);
    }
    assert!(worst < 1e-6, "worst residual {worst}");
}

#[test]
fn linearity_conjugation_and_decomposition() {
    let v = spec3();
    let cfg = ResolventConfig::default();
    let f = data(1.0);
    let g = data(-1.0);
    let eps = Frequency::new(C::new(0.4, 0.8)).unwrap();
    let (a, b) = (C::new(0.3, -1.1), C::new(2.0, 0.5));
    let lhs = green_apply(&v, eps, &f.combine(a, &g, b).unwrap(), &cfg).unwrap();
    let gf = green_apply(&v, eps, &f, &cfg).unwrap();
    let gg = green_apply(&v, eps, &g, &cfg).unwrap();
    let rhs = gf.combine(a, &gg, b).unwrap();
    let scale = rhs.sup_norm();
    for (p, q) in lhs.values().iter().zip(rhs.values()) {
        assert!((p - q).norm() < 1e-10 * scale);
    }
    let gc = green_apply(&v, eps.conj(), &f, &cfg).unwrap();
    for (p, q) in gf.values().iter().zip(gc.values()) {
        assert!((p.conj() - q).norm() < 1e-10 * scale);
    }
    // ψ̂ = 𝒢(ψ₁) + ε𝒢(ψ₀)
    let r = psi_hat(&v, eps, &g, &f, true, &cfg).unwrap();
    let sum = gf.combine(C::new(1.0, 0.0), &gg, eps.value()).unwrap();
    for (p, q) in r.psi_hat.values().iter().zip(sum.values()) {
        assert!((p - q).norm() < 1e-10 * sum.sup_norm());
    }
    let parts = r.parts.unwrap();
    let back = parts.free_part.combine(C::new(1.0, 0.0), &parts.remainder, C::new(1.0, 0.0)).unwrap();
    for (p, q) in back.values().iter().zip(r.psi_hat.values()) {
        assert!((p - q).norm() < 1e-12 * sum.sup_norm());
    }
}

#[test]
fn free_g0_bound_and_free_kernels() {
    let f = data(0.5);
    for e in [0.1, 1.0, 5.0] {
        let eps = Frequency::real(e).unwrap();
        let g0 = free_g0(eps, &f);
        assert!(g0.sup_norm() <= f.moment(0) / (2.0 * (1.0 + e)) * (1.0 + 1e-9));
        // 𝒢₀ and 𝒢₁ share A₀; their sum is −A₀/(1+ε), checked at the data peak.
        let g1 = free_g1(eps, &f);
        let i = f.node(0.5).unwrap();
        let a0 = gk::integrate(|u: f64| (-e * (u - 0.5)).exp() * gaussian(0.5, 0.5)(u), 0.5, 8.0, Default::default()).unwrap();
        assert!(((g0.values()[i] + g1.values()[i]).re + a0 / (1.0 + e)).abs() < 1e-9);
    }
}

#[test]
fn moments_of_a_gaussian() {
    let f = GridFunction::sample(uniform(-8.0, 8.0, 0.01), gaussian(0.0, 1.0)).unwrap();
    assert!((f.moment(0) - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-6);
    assert!(f.moment(4) > f.moment(2) && f.moment(2) > f.moment(0));
}

#[test]
fn small_eps_singular_part_fit() {
    // (ψ̂ − 𝒢₀(ψ₁))(x₀; ε) for real ε ∈ [1e-2, 1e-1] against c ε^{m−1} ln ε + smooth.
    let v = spec3();
    let cfg = ResolventConfig::default();
    let psi1 = data(1.0);
    let psi0 = GridFunction::zeros(psi1.grid().to_vec()).unwrap();
    let i0 = psi1.node(0.0).unwrap();
    let samples: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let e = 1e-2 * 10f64.powf(k as f64 / 9.0);
            let r = psi_hat(&v, Frequency::real(e).unwrap(), &psi0, &psi1, true, &cfg).unwrap();
            (e, r.parts.unwrap().remainder.values()[i0].re)
        })
        .collect();
    let fit = fit_log_singularity(&samples, 2, 4).unwrap();
    assert!(fit.fit.relative_residual() < 0.1, "fit residual {}", fit.fit.relative_residual());
    assert!(fit.coefficient.is_finite() && fit.coefficient != 0.0);
}
