//! Leapfrog and Duhamel oracles, their invariants, and the decay fits.

use taillab_core::numerics::gk;
use taillab_core::potential::PotentialSpec;
use taillab_core::timedomain::*;

fn spec3() -> PotentialSpec {
    PotentialSpec::pure(3, 1.0, 1.0, 2.0, -2.0).unwrap()
}

fn bump(centre: f64, width: f64, slot: Slot) -> InitialData {
    InitialData::new(Profile::Bump { centre, width }, slot).unwrap()
}

fn gaussian(centre: f64, width: f64, slot: Slot) -> InitialData {
    InitialData::new(Profile::Gaussian { centre, width }, slot).unwrap()
}

fn cfg(l: f64, h: f64, t: f64, rec: &[f64]) -> SimulationConfig {
    SimulationConfig { half_width: l, h, courant: 0.5, t_final: t, recorders: rec.to_vec(), record_every: 1 }
}

fn run_to(spec: &PotentialSpec, data: &InitialData, c: &SimulationConfig) -> Leapfrog {
    let mut lf = Leapfrog::new(spec, data, c).unwrap();
    for _ in 1..c.steps() {
        lf.step();
    }
    lf
}

#[test]
fn free_bump_splits_into_two_half_bumps() {
    let data = bump(0.0, 2.0, Slot::Psi0);
    let c = cfg(8.0, 0.0025, 5.0, &[]);
    let lf = run_to(&PotentialSpec::zero(), &data, &c);
    assert!((lf.time() - 5.0).abs() < 1e-12);
    let mut worst: f64 = 0.0;
    for (x, u) in lf.grid().iter().zip(lf.field()) {
        let exact = 0.5 * (data.psi0(x - 5.0) + data.psi0(x + 5.0));
        worst = worst.max((u - exact).abs());
    }
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn second_order_self_convergence() {
    let data = gaussian(1.0, 0.5, Slot::Psi1);
    let at = |h: f64| {
        let s = leapfrog_solve(&spec3(), &data, &cfg(20.0, h, 3.0, &[0.0])).unwrap();
        *s.values[0].last().unwrap()
    };
    let (a, b, c) = (at(0.04), at(0.02), at(0.01));
    let ratio = (a - b) / (b - c);
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn energy_is_conserved_for_repulsive_potential() {
    let data = gaussian(1.0, 0.5, Slot::Psi1);
    let mut c = cfg(110.0, 0.05, 100.0, &[0.0]);
    c.record_every = 20;
    let s = leapfrog_solve(&spec3(), &data, &c).unwrap();
    assert!(s.energy_drift() < 1e-4, "{}", s.energy_drift());
    assert!(s.energy[0] > 0.0);
}

#[test]
fn time_reversal_recovers_the_data() {
    let data = gaussian(0.5, 0.5, Slot::Psi0);
    let c = cfg(30.0, 0.02, 20.0, &[]);
    let mut lf = Leapfrog::new(&spec3(), &data, &c).unwrap();
    let n = c.steps();
    for _ in 1..n {
        lf.step();
    }
    lf.reverse();
    for _ in 1..n {
        lf.step();
    }
    assert!(lf.time().abs() < 1e-12);
    let worst = lf.grid().iter().zip(lf.field()).map(|(x, u)| (u - data.psi0(*x)).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn light_cone_is_respected() {
    let data = bump(0.0, 1.0, Slot::Psi1);
    let t = 6.0;
    let lf = run_to(&spec3(), &data, &cfg(20.0, 0.02, t, &[]));
    let outside = lf
        .grid()
        .iter()
        .zip(lf.field())
        .filter(|(x, _)| x.abs() > 1.0 + t + 0.5)
        .map(|(_, u)| u.abs())
        .fold(0.0, f64::max);
    assert!(outside < 1e-12, "{outside}");
}

#[test]
fn configuration_is_validated() {
    let data = bump(0.0, 1.0, Slot::Psi1);
    let mut c = cfg(20.0, 0.05, 10.0, &[0.0]);
    c.courant = 1.0;
    assert!(leapfrog_solve(&spec3(), &data, &c).is_err());
    let c = cfg(10.0, 0.05, 10.0, &[0.0]);
    assert!(leapfrog_solve(&spec3(), &data, &c).is_err());
    let c = cfg(20.0, 0.05, 5.0, &[0.013]);
    assert!(leapfrog_solve(&spec3(), &data, &c).is_err());
}

#[test]
fn duhamel_free_space_is_dalembert_in_one_iteration() {
    let data = gaussian(1.0, 0.5, Slot::Psi1);
    let dc = DuhamelConfig { t_final: 3.0, step: 0.01, ..Default::default() };
    let r = duhamel_solve(&PotentialSpec::zero(), &data, &dc).unwrap();
    assert_eq!(r.iterations, 1);
    let last = *r.series.values[0].last().unwrap();
    let exact = 0.5 * gk::integrate(|s: f64| data.psi1(s), -3.0, 3.0, Default::default()).unwrap();
    assert!((last - exact).abs() < 1e-12, "{last} vs {exact}");
}

#[test]
fn duhamel_agrees_with_leapfrog_and_contracts() {
    let data = gaussian(1.0, 0.5, Slot::Psi1);
    let dc = DuhamelConfig { t_final: 10.0, step: 0.01, ..Default::default() };
    let r = duhamel_solve(&spec3(), &data, &dc).unwrap();
    let mut c = cfg(30.0, 0.005, 10.0, &[0.0]);
    c.record_every = 2;
    let lf = leapfrog_solve(&spec3(), &data, &c).unwrap();
    for t in [2.0, 5.0, 10.0] {
        let d = r.series.values[0][(t / 0.01_f64).round() as usize];
        let i = lf.times.iter().position(|&s| (s - t).abs() < 1e-9).unwrap();
        let l = lf.values[0][i];
        assert!((d - l).abs() < 1e-3, "t={t}: {d} vs {l}");
    }
    let v = r.v_sup;
    for nu in [1.1 * (2.0 * v).sqrt(), 2.2 * (2.0 * v).powf(0.25), 2.2 * (2.0 * v).sqrt()] {
        let bound = r.contraction_bound(nu);
        for q in r.contraction_ratios(nu, 1e-13) {
            assert!(q <= bound, "ν={nu}: ratio {q} > {bound}");
        }
    }
    assert!(r.iterations > 3);
    let tight = DuhamelConfig { max_iter: 2, ..dc };
    assert!(duhamel_solve(&spec3(), &data, &tight).is_err());
}

#[test]
fn decay_fit_exact_power_law() {
    let s: Vec<(f64, f64)> = (1..=1000).map(|i| i as f64).map(|t| (t, 7.0 * t.powi(-3))).collect();
    let r = decay_fit(0.0, &s, (50.0, 500.0), None).unwrap();
    assert!((r.exponent - 3.0).abs() < 1e-6 && r.stderr < 1e-6);
    assert!((r.amplitude - 7.0).abs() < 1e-6, "{}", r.amplitude);
    assert_eq!(r.rounded_exponent, 3);
    assert!(r.local_exponent.iter().filter(|p| p.0 > 10.0).all(|p| (p.1 - 3.0).abs() < 1e-6));
}

#[test]
fn decay_fit_with_correction_tightens_to_the_right() {
    let s: Vec<(f64, f64)> = (1..=5000).map(|i| i as f64).map(|t| (t, t.powi(-3) * (1.0 + 5.0 / t))).collect();
    // −d ln ψ/d ln t = 3 + 5/(t+5): the fit lies slightly above 3.
    let a = decay_fit(0.0, &s, (50.0, 500.0), None).unwrap();
    let b = decay_fit(0.0, &s, (500.0, 5000.0), None).unwrap();
    assert!(a.exponent > 3.0 && a.exponent < 3.1, "{}", a.exponent);
    assert!(b.exponent < a.exponent && b.exponent > 3.0);
}

#[test]
fn decay_fit_rejects_sign_changes_and_bad_windows() {
    let s: Vec<(f64, f64)> = (1..=500).map(|i| i as f64).map(|t| (t, t.powi(-3) * (t / 7.0).cos())).collect();
    assert!(decay_fit(0.0, &s, (50.0, 400.0), None).is_err());
    let s: Vec<(f64, f64)> = (1..=500).map(|i| i as f64).map(|t| (t, t.powi(-3))).collect();
    assert!(decay_fit(0.0, &s, (50.0, 600.0), None).is_err());
}

#[test]
fn sine_evolution_decays_like_t_minus_m() {
    let data = gaussian(1.0, 0.5, Slot::Psi1);
    let mut c = cfg(260.0, 0.05, 240.0, &[0.0]);
    c.record_every = 4;
    let s = leapfrog_solve(&spec3(), &data, &c).unwrap();
    let r = decay_fit(0.0, &s.samples(0), (50.0, 240.0), None).unwrap();
    assert!((r.exponent - 3.0).abs() < 0.2, "{}", r.exponent);
    assert!(r.amplitude != 0.0);
}

#[test]
fn initial_data_slots_and_supports() {
    let d = gaussian(2.0, 0.5, Slot::Psi0);
    assert_eq!(d.psi1(2.0), 0.0);
    assert_eq!(d.psi0(2.0), 1.0);
    assert_eq!(d.support(), (-2.0, 6.0));
    let sum = Profile::Sum(vec![
        GaussianComponent { weight: 1.0, centre: 0.0, width: 0.5 },
        GaussianComponent { weight: 2.0, centre: 3.0, width: 0.25 },
    ]);
    assert_eq!(sum.support(), (-4.0, 5.0));
    assert!(InitialData::new(Profile::Bump { centre: 0.0, width: -1.0 }, Slot::Psi1).is_err());
    let (p0, p1) = d.grid_functions(&[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(p0.values()[1].re, 1.0);
    assert_eq!(p1.sup_norm(), 0.0);
}
