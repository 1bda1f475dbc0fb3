use formanet_core::record::{Education, Gender, Socioeconomic, StudentProfile, MAX_AGE, MIN_AGE};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed of participant `index` under `master`: SplitMix64 of the pair, so
/// earlier participants keep their seeds when `n` grows.
pub fn participant_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent uniform draws of every profile field.
pub fn sample_profile(seed: u64) -> StudentProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StudentProfile {
        gender: *Gender::ALL.choose(&mut rng).expect("non-empty"),
        age: rng.random_range(MIN_AGE..=MAX_AGE),
        education: *Education::ALL.choose(&mut rng).expect("non-empty"),
        socioeconomic: *Socioeconomic::ALL.choose(&mut rng).expect("non-empty"),
        rng_seed: seed,
    }
}
