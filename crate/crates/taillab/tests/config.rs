//! Config grammar, validation and resolution.

use taillab::config::{DataKind, ExperimentConfig, FamilyKind, Stage};
use taillab::data::random_profile;
use taillab::pool::{threads_from, RayonMap};
use taillab::Failure;
use taillab_core::ilt::NodeMap;
use taillab_core::timedomain::{Profile, Slot};
use taillab_core::Complex64 as C;

const BASE: &str = "\
# comment
output_dir = out

[potential]
m = 3
x_plus = 2
x_minus = -2

[initial_data]
kind = gaussian
center = 1
width = 0.5

[pipeline]
stages = decay, simulate

[numeric]
t_final = 400
h = 0.05
";

fn with(extra: &str) -> String {
    format!("{BASE}{extra}")
}

fn validation(text: &str) -> String {
    match ExperimentConfig::parse(text) {
        Err(Failure::Validation(m)) => m,
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn base_config_resolves_defaults() {
    let c = ExperimentConfig::parse(BASE).unwrap();
    assert_eq!(c.pipeline, vec![Stage::Simulate, Stage::Decay]);
    assert_eq!(c.potential.family, FamilyKind::Pure);
    assert_eq!((c.potential.v_plus, c.potential.v_minus), (1.0, 1.0));
    assert_eq!(c.initial_data.kind, DataKind::Gaussian);
    assert_eq!(c.initial_data.which, Slot::Psi1);
    assert_eq!(c.fit_window(), (50.0, 200.0));
    assert_eq!(c.amplitude_window(), (100.0, 200.0));
    // support [−3, 5] + T + 10, rounded up to the grid
    assert!((c.half_width().unwrap() - 415.0).abs() < 1e-9);
    assert_eq!(c.output_dir.to_str(), Some("out"));
}

#[test]
fn resolved_config_is_a_fixed_point() {
    let c = ExperimentConfig::parse(&with("fit_window = 60, 300\n")).unwrap();
    let r = c.resolved();
    assert!(r.contains("fit_window = 60.0, 300.0"));
    assert!(r.contains("depth = "));
    let again = ExperimentConfig::parse(&r).unwrap();
    assert_eq!(again.resolved(), r);
}

#[test]
fn grammar_errors_name_the_line() {
    assert!(validation(&with("bogus = 1\n")).contains("unknown key `bogus`"));
    assert!(validation(&with("[extra]\n")).contains("unknown section"));
    assert!(validation(&with("h = 0.1\n")).contains("duplicate key"));
    assert!(validation(&with("x0 0\n")).contains("expected `key = value`"));
    assert!(validation(&with("courant = fast\n")).contains("not a finite number"));
    let m = validation(&BASE.replace("m = 3", "m = three"));
    assert!(m.starts_with("line 5:"), "{m}");
}

#[test]
fn empty_pipeline_is_rejected() {
    assert!(validation(&BASE.replace("stages = decay, simulate", "stages =")).contains("empty"));
    assert!(validation(&BASE.replace("stages = decay, simulate", "stages = simulate, plot")).contains("unknown stage"));
}

#[test]
fn stages_need_their_numeric_keys() {
    assert!(validation(&BASE.replace("t_final = 400\n", "")).contains("t_final"));
    assert!(validation(&BASE.replace("stages = decay, simulate", "stages = decay")).contains("simulate"));
    assert!(validation(&BASE.replace("stages = decay, simulate", "stages = ilt")).contains("ilt_times"));
    assert!(validation(&BASE.replace("stages = decay, simulate", "stages = series")).contains("series_x"));
    assert!(validation(&with("fit_window = 50, 500\n")).contains("fit_window"));
    assert!(validation(&with("fit_window = 300, 50\n")).contains("t_lo < t_hi"));
    let sum = BASE.replace("m = 3", "m = 3\nfamily = sum\nsum_terms = 3:1, 4.5:-0.25").replace("stages = decay, simulate", "stages = series");
    assert!(validation(&format!("{sum}series_x = 20\nseries_eps = 0.02\n")).contains("pure"));
}

#[test]
fn potential_and_data_are_validated() {
    assert!(validation(&BASE.replace("m = 3", "m = 2")).contains("potential"));
    assert!(validation(&BASE.replace("m = 3", "m = 3\nfamily = sum")).contains("sum_terms"));
    assert!(validation(&BASE.replace("m = 3", "m = 3\nfamily = correction")).contains("correction_exponent"));
    assert!(validation(&BASE.replace("width = 0.5", "width = -1")).contains("initial_data"));
    assert!(validation(&BASE.replace("kind = gaussian", "kind = gaussian\nseed = 3")).contains("seed"));
    assert!(validation(&BASE.replace("output_dir = out\n", "")).contains("output_dir"));
    let both = BASE.replace("[potential]", "[output]\ndir = other\n\n[potential]");
    assert!(validation(&both).contains("either"));
    let sum = BASE.replace("m = 3", "m = 3\nfamily = sum\nsum_terms = 3:1, 4.5:-0.25");
    let c = ExperimentConfig::parse(&sum).unwrap();
    assert_eq!(c.potential.sum_terms, vec![(3.0, 1.0), (4.5, -0.25)]);
    assert!(validation(&BASE.replace("m = 3", "m = 3\nfamily = sum\nsum_terms = 3;1")).contains("alpha:coeff"));
}

#[test]
fn subcommand_stage_sets_are_validated() {
    let c = ExperimentConfig::parse(BASE).unwrap();
    let s = c.with_stages(&[Stage::Spectral]).unwrap();
    assert_eq!(s.pipeline, vec![Stage::Spectral]);
    let no_t = ExperimentConfig::parse(&BASE.replace("stages = decay, simulate", "stages = spectral").replace("t_final = 400\n", "")).unwrap();
    assert!(no_t.with_stages(&[Stage::Spectral, Stage::Simulate, Stage::Decay]).is_err());
}

#[test]
fn random_profiles_are_seeded() {
    let a = random_profile(7, 0.0, 1.0);
    assert_eq!(a, random_profile(7, 0.0, 1.0));
    assert_ne!(a, random_profile(8, 0.0, 1.0));
    for seed in 0..20 {
        let Profile::Sum(comps) = random_profile(seed, 2.0, 1.5) else { panic!("not a sum") };
        assert_eq!(comps.len(), 3);
        for c in comps {
            assert!(c.weight > 0.0 && (0.4..=0.8).contains(&c.width) && (c.centre - 2.0).abs() <= 1.5);
        }
    }
    let c = ExperimentConfig::parse(&BASE.replace("kind = gaussian", "kind = random\nseed = 11")).unwrap();
    assert!(c.initial_data.build().unwrap().psi1(2.0) > 0.0 || c.initial_data.build().unwrap().psi1(0.0) > 0.0);
}

#[test]
fn thread_cap_parsing_and_ordered_map() {
    assert_eq!(threads_from(None).unwrap(), None);
    assert_eq!(threads_from(Some(" 3 ")).unwrap(), Some(3));
    assert!(threads_from(Some("0")).is_err());
    assert!(threads_from(Some("many")).is_err());
    let pool = RayonMap::with_cap(Some(2)).unwrap();
    assert!(pool.threads() >= 1 && pool.threads() <= 2);
    let nodes: Vec<C> = (0..100).map(|i| C::new(i as f64, 1.0)).collect();
    let out = pool.map_nodes(&nodes, &|z| Ok(z * z)).unwrap();
    assert!(out.iter().zip(&nodes).all(|(o, z)| *o == z * z));
}

#[test]
fn failure_exit_codes() {
    assert_eq!(Failure::validation("x").exit_code(), 2);
    assert_eq!(Failure::Spectral("x".into()).exit_code(), 3);
    assert_eq!(Failure::numeric("x").exit_code(), 4);
    let f: Failure = taillab_core::Error::SmallWronskian(1e-12).into();
    assert_eq!(f.exit_code(), 3);
}
