//! Jost solutions, Wronskian and spectral scan against independent oracles.

use num_complex::Complex64 as C;
use taillab_core::jost::{
    check_spectral_assumptions, extend_to_line, solve_s, wronskian_at, Frequency, JostConfig, JostPair, SpectralOptions,
    SpectralStatus,
};
use taillab_core::numerics::ode::{self, OdeOptions};
use taillab_core::potential::{PotentialSpec, Side};

fn spec3() -> PotentialSpec {
    PotentialSpec::pure(3, 1.0, 1.0, 2.0, -2.0).unwrap()
}

fn uniform(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|i| a + h * i as f64).collect()
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

#[test]
fn free_space_jost_solutions_are_plain_exponentials() {
    let v = PotentialSpec::zero();
    let cfg = JostConfig::default();
    let eps = Frequency::new(C::new(0.7, -1.3)).unwrap();
    let grid = uniform(-5.0, 5.0, 0.1);
    let pair = JostPair::solve(&v, eps, &grid, &cfg).unwrap();
    for (i, &x) in grid.iter().enumerate() {
        let ex = (-eps.value() * x).exp();
        assert!((pair.plus.y[i] - ex).norm() <= 1e-14 * ex.norm(), "x={x}");
        assert_eq!(pair.plus.s[i], C::new(0.0, 0.0));
    }
    let w = pair.wronskian().unwrap();
    assert!((w.value - eps.value() * 2.0).norm() < 1e-14);
}

#[test]
fn continuation_satisfies_the_ode_on_the_full_line() {
    let v = spec3();
    let cfg = JostConfig::default();
    let eps = Frequency::new(C::new(0.5, 0.3)).unwrap();
    let grid = uniform(-10.0, 10.0, 0.01);
    let tail = solve_s(&v, eps, Side::Plus, &grid, &cfg).unwrap();
    assert!(tail.scaled_residual(&v) < 1e-7, "tail residual {}", tail.scaled_residual(&v));
    assert!(tail.tail_magnitude() < cfg.tol_tail);
    let full = extend_to_line(&tail, &v, &grid, &cfg).unwrap();
    let r = full.y_residual(&v);
    assert!(r < 1e-7, "literal residual {r}");
    // Matching at the start of the solved tail: copied values are exact.
    let k = grid.iter().position(|&x| (x - tail.grid[0]).abs() < 1e-12);
    if let Some(k) = k {
        let j0 = 0;
        assert!((full.y[k] - tail.y[j0]).norm() <= 1e-10 * tail.y[j0].norm());
        assert!((full.y_prime[k] - tail.y_prime[j0]).norm() <= 1e-10 * tail.y_prime[j0].norm());
    }
}

#[test]
fn picard_tail_agrees_with_direct_integration_inward() {
    // Independent route: integrate f'' = 2εf' + V f inward from X = 4000/|ε|
    // starting from the leading far-field behaviour s ≈ v X^{1−m}/(2ε(m−1)).
    let v = spec3();
    let cfg = JostConfig::default();
    let e = C::new(0.25, 0.1);
    let eps = Frequency::new(e).unwrap();
    let probes = [2.5, 5.0, 20.0];
    let tail = solve_s(&v, eps, Side::Plus, &probes, &cfg).unwrap();
    let x_far = 4000.0 / e.norm();
    let lead = C::new(1.0, 0.0) / (e * 4.0 * x_far * x_far);
    let y0 = [C::new(1.0, 0.0) + lead, -lead * (2.0 / x_far)];
    let targets: Vec<f64> = probes.iter().rev().copied().collect();
    let opts = OdeOptions { rtol: 1e-12, atol: 1e-16, h_max: 20.0, ..OdeOptions::default() };
    let sol = ode::integrate(|x, y| [y[1], e * 2.0 * y[1] + y[0] * v.evaluate(x)], x_far, y0, &targets, opts).unwrap();
    for (k, &x) in targets.iter().enumerate() {
        let i = tail.grid.iter().position(|&g| (g - x).abs() < 1e-12).unwrap();
        let s_ode = sol[k][0] - C::new(1.0, 0.0);
        assert!((tail.s[i] - s_ode).norm() < 1e-8 * s_ode.norm().max(1e-6), "x={x}: {} vs {}", tail.s[i], s_ode);
    }
}

#[test]
fn wronskian_is_constant_in_x() {
    let v = spec3();
    let cfg = JostConfig::default();
    let grid = uniform(-8.0, 8.0, 0.02);
    for e in [C::new(0.05, 0.0), C::new(0.3, 1.7), C::new(2.0, -0.5), C::new(0.0, 3.0)] {
        let pair = JostPair::solve(&v, Frequency::new(e).unwrap(), &grid, &cfg).unwrap();
        let w = pair.wronskian().unwrap();
        assert!(w.relative_spread() < 1e-6, "ε={e}: spread {}", w.relative_spread());
    }
}

#[test]
fn conjugate_symmetry() {
    let v = spec3();
    let cfg = JostConfig::default();
    let grid = uniform(-6.0, 6.0, 0.05);
    let e = Frequency::new(C::new(0.4, 0.9)).unwrap();
    let a = JostPair::solve(&v, e, &grid, &cfg).unwrap();
    let b = JostPair::solve(&v, e.conj(), &grid, &cfg).unwrap();
    for i in 0..grid.len() {
        assert!((a.plus.y[i].conj() - b.plus.y[i]).norm() <= 1e-10 * a.plus.y[i].norm());
        assert!((a.minus.y[i].conj() - b.minus.y[i]).norm() <= 1e-10 * a.minus.y[i].norm());
    }
}

#[test]
fn wronskian_is_analytic_cauchy_mean() {
    let v = spec3();
    let cfg = JostConfig::default();
    let centre = C::new(0.8, 0.6);
    let radius = 0.2;
    let n = 32;
    let mut mean = C::new(0.0, 0.0);
    for k in 0..n {
        let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let z = centre + C::from_polar(radius, th);
        mean += wronskian_at(&v, Frequency::new(z).unwrap(), &cfg).unwrap();
    }
    mean /= n as f64;
    let w0 = wronskian_at(&v, Frequency::new(centre).unwrap(), &cfg).unwrap();
    assert!((mean - w0).norm() < 1e-6 * w0.norm(), "mean {mean} vs centre {w0}");
}

#[test]
fn wronskian_minus_free_part_stays_bounded() {
    let v = spec3();
    let cfg = JostConfig::default();
    let q: Vec<f64> = [2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&e| (wronskian_at(&v, Frequency::real(e).unwrap(), &cfg).unwrap() - C::new(2.0 * e, 0.0)).norm())
        .collect();
    let max = q.iter().cloned().fold(0.0, f64::max);
    assert!(max < 1.0, "q3 values {q:?}");
    // Non-increasing trend: large-ε Born limit ∫V/… shrinks.
    assert!(q[3] <= q[0] * 1.05, "{q:?}");
}

#[test]
fn tail_decay_bound_shape() {
    let v = spec3();
    let cfg = JostConfig::default();
    let mut worst: f64 = 0.0;
    let mut best = f64::INFINITY;
    for e in [C::new(0.01, 0.0), C::new(0.1, 0.5), C::new(1.0, 0.0), C::new(0.0, 4.0)] {
        let sol = solve_s(&v, Frequency::new(e).unwrap(), Side::Plus, &[], &cfg).unwrap();
        for (i, &x) in sol.grid.iter().enumerate() {
            let w = sol.s[i].norm() * (e.norm() * bracket(x) + 1.0) * bracket(x);
            worst = worst.max(w);
            best = best.min(w);
        }
    }
    assert!(worst < 1.0, "weighted |s| up to {worst}");
    // ε = 1, x = 20 against the constant measured at x = 40
    let sol = solve_s(&v, Frequency::real(1.0).unwrap(), Side::Plus, &[20.0, 40.0], &cfg).unwrap();
    let at = |x: f64| sol.s[sol.grid.iter().position(|&g| (g - x).abs() < 1e-12).unwrap()].norm();
    let c = at(40.0) * (bracket(40.0) + 1.0) * bracket(40.0);
    assert!(at(20.0) <= 1.2 * c / ((bracket(20.0) + 1.0) * bracket(20.0)));
}

#[test]
fn spectral_scan_classifications() {
    let opts = SpectralOptions { scan_points: 24, ..SpectralOptions::default() };
    match check_spectral_assumptions(&PotentialSpec::zero(), &opts).unwrap() {
        SpectralStatus::Resonance { .. } => {}
        other => panic!("free space: {other:?}"),
    }
    match check_spectral_assumptions(&spec3(), &opts).unwrap() {
        SpectralStatus::Ok { w0 } => assert!(w0.abs() > 1e-3),
        other => panic!("repulsive: {other:?}"),
    }
}

/// Lowest eigenvalue of −d²/dx² + V on [−L, L] (Dirichlet) by Sturm-sequence bisection.
fn lowest_eigenvalue(v: &PotentialSpec, l: f64, h: f64) -> f64 {
    let n = (2.0 * l / h) as usize - 1;
    let diag: Vec<f64> = (1..=n).map(|i| 2.0 / (h * h) + v.evaluate(-l + h * i as f64)).collect();
    let off = -1.0 / (h * h);
    let count_below = |lam: f64| {
        let mut c = 0;
        let mut d = diag[0] - lam;
        if d < 0.0 {
            c += 1;
        }
        for i in 1..n {
            d = diag[i] - lam - off * off / if d == 0.0 { 1e-300 } else { d };
            if d < 0.0 {
                c += 1;
            }
        }
        c
    };
    let (mut a, mut b) = (-100.0, 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if count_below(mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

#[test]
fn deep_well_bound_state_matches_finite_difference_eigenvalue() {
    let well = PotentialSpec::builder(3).tails(1.0, 1.0).cutoffs(1.0, -1.0).depth(-10.0).build().unwrap();
    let opts = SpectralOptions { scan_points: 40, ..SpectralOptions::default() };
    let eps0 = match check_spectral_assumptions(&well, &opts).unwrap() {
        SpectralStatus::BoundState { eps0 } => eps0,
        other => panic!("deep well: {other:?}"),
    };
    let lam = lowest_eigenvalue(&well, 25.0, 0.005);
    assert!(lam < 0.0);
    assert!((eps0 - (-lam).sqrt()).abs() < 2e-3 * eps0, "ε₀ = {eps0}, FD √(−λ) = {}", (-lam).sqrt());
}
