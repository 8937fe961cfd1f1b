//! Seeded random initial data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taillab_core::timedomain::{GaussianComponent, Profile};

/// Number of Gaussians in a random profile.
pub const RANDOM_COMPONENTS: usize = 3;

/// Sum of three Gaussians with positive weights in `[0.5, 1.5]`, widths
/// `σ ∈ [0.4, 0.8]` and centres uniform in `center ± width`. The same seed
/// always gives the same profile.
pub fn random_profile(seed: u64, center: f64, width: f64) -> Profile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = width.abs();
    let comps = (0..RANDOM_COMPONENTS)
        .map(|_| {
            let weight = rng.gen_range(0.5..=1.5);
            let offset = if spread > 0.0 { rng.gen_range(-spread..=spread) } else { 0.0 };
            let sigma = rng.gen_range(0.4..=0.8);
            GaussianComponent { weight, centre: center + offset, width: sigma }
        })
        .collect();
    Profile::Sum(comps)
}
