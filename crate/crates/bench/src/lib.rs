//! Seeded synthetic inputs for the benchmarks.

use pe_rank_core::RankInstance;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A reference of `len` words over a `vocab`-word vocabulary and a noisy
/// copy of it: about 20% of words substituted and one block moved.
pub fn sentence_pair(seed: u64, len: usize, vocab: usize) -> (Vec<String>, Vec<String>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let word = |i: usize| format!("w{i}");
    let refr: Vec<String> = (0..len).map(|_| word(rng.gen_range(0..vocab))).collect();
    let mut hyp: Vec<String> = refr
        .iter()
        .map(|w| if rng.gen_bool(0.2) { word(rng.gen_range(0..vocab)) } else { w.clone() })
        .collect();
    if len >= 4 {
        let start = rng.gen_range(0..len - 3);
        let block: Vec<String> = hyp.drain(start..start + 3).collect();
        let dest = rng.gen_range(0..=hyp.len());
        hyp.splice(dest..dest, block);
    }
    (hyp, refr)
}

/// A randomly ordered ranking of `n` segments with times in [10, 120) seconds
/// and lengths in 5..=40 words.
pub fn rank_instance(seed: u64, n: usize) -> RankInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut ids: Vec<String> = (0..n).map(|i| format!("seg{i}")).collect();
    ids.shuffle(&mut rng);
    let times = (0..n).map(|_| rng.gen_range(10.0..120.0)).collect();
    let lengths = (0..n).map(|_| rng.gen_range(5..=40)).collect();
    RankInstance::new(ids, times, lengths).expect("generated instance is valid")
}

/// Two correlated score vectors with many ties.
pub fn score_vectors(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..100) as f64).collect();
    let y = x.iter().map(|v| (v + rng.gen_range(-30.0..30.0)).round()).collect();
    (x, y)
}
