use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ThresholdSet;
use crate::seeds;

const CHUNKS: u64 = 64;

/// Block aggregates normalized to `r* = 1`, one entry per staircase block
/// `(I, J)` with `I + J <= K + 1`, listed row by row.
#[derive(Clone, Debug)]
pub struct BlockSample {
    pub u00: f64,
    pub r00: f64,
    pub u: Vec<f64>,
    pub r: Vec<f64>,
}

fn staircase(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| (1..=k + 1 - i).map(move |j| (i, j))).collect()
}

fn price_range(t: &ThresholdSet, i: usize, j: usize) -> (f64, f64) {
    match (i, j) {
        (1, _) => (t.b(j), f64::INFINITY),
        (_, 1) => (t.b(i), f64::INFINITY),
        _ => (t.b(i) + t.b(j), t.b(i - 1) + t.b(j - 1)),
    }
}

/// Best candidate value relative to `r*` for one block configuration.
pub fn sample_ratio(t: &ThresholdSet, s: &BlockSample) -> f64 {
    let k = t.k();
    let blocks = staircase(k);
    (1..=k)
        .map(|step| {
            let mut num = s.u00 * s.r00;
            let mut den = s.u00;
            for (idx, &(i, j)) in blocks.iter().enumerate() {
                if i <= step && j <= k + 1 - step {
                    num += s.u[idx] * s.r[idx];
                    den += s.u[idx];
                }
            }
            num / den
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn draw(t: &ThresholdSet, rng: &mut ChaCha8Rng) -> BlockSample {
    let blocks = staircase(t.k());
    let mut u = Vec::with_capacity(blocks.len());
    let mut r = Vec::with_capacity(blocks.len());
    for &(i, j) in &blocks {
        let w = if rng.random_bool(0.5) { 10f64.powf(rng.random_range(-3.0..3.0)) } else { 0.0 };
        let (lo, hi) = price_range(t, i, j);
        let top = if hi.is_finite() { hi } else { lo + 1.0 };
        let price = match rng.random_range(0..3) {
            0 => lo,
            1 => top,
            _ => rng.random_range(lo..=top),
        };
        u.push(w);
        r.push(price);
    }
    let mut u00 = 10f64.powf(rng.random_range(-3.0..3.0));
    // the LP value identity fixes r00; shrink the half blocks if it would go negative
    let excess: f64 = u.iter().zip(&r).map(|(w, p)| 0.5 * w * (p - 1.0)).sum();
    let mut r00 = (u00 - excess) / u00;
    if r00 < 0.0 {
        let scale = u00 / excess;
        for w in &mut u {
            *w *= scale;
        }
        r00 = 0.0;
    }
    if !r00.is_finite() {
        u00 = 1.0;
        r00 = 1.0;
        u.iter_mut().for_each(|w| *w = 0.0);
    }
    // blocks enter candidates with full weight, the LP value with half
    BlockSample { u00, r00, u, r }
}

/// Sampled upper bound on the worst candidate ratio over block configurations
/// consistent with the LP value identity and the price bands.
pub fn beta_upper_sample(t: &ThresholdSet, samples: usize, seed: u64) -> f64 {
    let per = samples.div_ceil(CHUNKS as usize);
    (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, &[c]));
            let mut best = f64::INFINITY;
            let lo = c as usize * per;
            let hi = ((c as usize + 1) * per).min(samples);
            for _ in lo..hi {
                best = best.min(sample_ratio(t, &draw(t, &mut rng)));
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}
