use rayon::prelude::*;

use super::certificate::check_certificate;
use super::{DualCertificate, ThresholdSet};
use crate::error::{Error, Result};

const MARGIN: f64 = 1e-12;
const V_MAX: f64 = 2.0;

/// Largest `beta'` the block inequalities allow for fixed `b` and `v`.
///
/// Each inequality reads `c + (1 - c) / S >= beta'` for some constant `c`
/// and partial sum `S`. Returns `None` when a constraint free of `beta'` fails.
pub fn beta_prime_max(b: &[f64], v: &[f64]) -> Option<f64> {
    let k = b.len();
    let mut prefix = Vec::with_capacity(k + 1);
    prefix.push(0.0);
    for &x in v {
        prefix.push(prefix.last().unwrap() + x);
    }
    let sum = |lo: usize, hi: usize| if lo > hi { 0.0 } else { prefix[hi] - prefix[lo - 1] };
    let bb = |t: usize| if t == 0 { 1.0 } else { b[t - 1] };
    let mut best = 1.0f64;
    let mut bound = |c: f64, s: f64| -> bool {
        if s > 0.0 {
            best = best.min(c + (1.0 - c) / s);
            true
        } else {
            1.0 - c >= -1e-12
        }
    };
    if !bound(0.0, sum(1, k) / 2.0) {
        return None;
    }
    for j in 1..=k {
        if !bound(bb(j), sum(1, k + 1 - j)) || !bound(bb(j), sum(j, k)) {
            return None;
        }
    }
    for i in 2..=k {
        for j in 2..=k {
            let s = sum(i, k + 1 - j);
            let c = if s >= 1.0 { bb(i) + bb(j) } else { bb(i - 1) + bb(j - 1) };
            if !bound(c, s) {
                return None;
            }
        }
    }
    Some(best)
}

fn symmetric_v(k: usize, free: &[f64]) -> Vec<f64> {
    let mut v = vec![1.0; k];
    for (idx, &a) in free.iter().enumerate() {
        v[idx + 1] = a;
        v[k - 2 - idx] = a;
    }
    v
}

fn score(b: &[f64], free: &[f64]) -> f64 {
    beta_prime_max(b, &symmetric_v(b.len(), free)).unwrap_or(f64::NEG_INFINITY)
}

/// Coarse scan (for one or two free weights) followed by a pattern search
/// that also tries diagonal moves, so ridges between two binding rows are followed.
fn optimize_free(b: &[f64], dims: usize) -> (Vec<f64>, f64) {
    let mut x = vec![0.2; dims];
    let mut best = score(b, &x);
    if dims == 0 {
        return (x, best);
    }
    if dims <= 2 {
        let (steps, h) = if dims == 1 { (20usize, 0.1) } else { (10, 0.1) };
        let total = (steps + 1).pow(dims as u32);
        for code in 0..total {
            let mut c = code;
            let cand: Vec<f64> = (0..dims)
                .map(|_| {
                    let t = c % (steps + 1);
                    c /= steps + 1;
                    t as f64 * h
                })
                .collect();
            let s = score(b, &cand);
            if s > best {
                best = s;
                x = cand;
            }
        }
    }
    let dirs: Vec<Vec<f64>> = (0..3usize.pow(dims as u32))
        .map(|mut c| {
            (0..dims)
                .map(|_| {
                    let d = (c % 3) as f64 - 1.0;
                    c /= 3;
                    d
                })
                .collect::<Vec<f64>>()
        })
        .filter(|d| d.iter().any(|&t| t != 0.0))
        .collect();
    let mut h = 0.05;
    while h > 1e-10 {
        let mut moved = false;
        for d in &dirs {
            let cand: Vec<f64> =
                x.iter().zip(d).map(|(a, t)| (a + t * h).clamp(0.0, V_MAX)).collect();
            let s = score(b, &cand);
            if s > best {
                best = s;
                x = cand;
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    (x, best)
}

/// Best certificate for fixed thresholds, with `v` symmetric and `v_1 = v_K = 1`.
pub fn certificate_for(t: &ThresholdSet) -> Option<(DualCertificate, f64)> {
    let k = t.k();
    if k < 2 {
        return None;
    }
    let b = t.values().to_vec();
    let (free, bmax) = optimize_free(&b, (k - 1) / 2);
    if !bmax.is_finite() || bmax <= MARGIN {
        return None;
    }
    let cert = DualCertificate {
        k,
        beta_prime: (bmax - MARGIN).min(1.0 - MARGIN),
        b,
        v: symmetric_v(k, &free),
    };
    let ratio = check_certificate(&cert).ratio?;
    Some((cert, ratio))
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub certificate: DualCertificate,
    pub ratio: f64,
    /// Threshold vectors handed to the dual optimizer.
    pub evaluated: usize,
}

/// Grid points `s_1 >= ... >= s_K = 0` with `s_k + s_{K-k} <= g` and
/// `min_k s_k + s_{K+1-k} > floor * g`.
fn enumerate(k: usize, g: usize, floor: f64) -> Vec<Vec<usize>> {
    let need = floor * g as f64;
    let mut out = Vec::new();
    let mut s = Vec::with_capacity(k);
    fn rec(s: &mut Vec<usize>, k: usize, g: usize, need: f64, out: &mut Vec<Vec<usize>>) {
        let d = s.len();
        // every later entry is at most the last one placed
        let cap = s.last().copied().unwrap_or(g);
        for a in 0..d {
            let b = k - 1 - a;
            if b >= d && b > a && ((s[a] + cap) as f64) <= need {
                return;
            }
        }
        if d == k - 1 {
            s.push(0);
            let pairs_ok = (1..k).all(|i| s[i - 1] + s[k - i - 1] <= g);
            let band_ok = (0..k).all(|i| ((s[i] + s[k - 1 - i]) as f64) > need);
            if pairs_ok && band_ok {
                out.push(s.clone());
            }
            s.pop();
            return;
        }
        for v in (0..=cap).rev() {
            // threshold pairs are (a, k-2-a) in 0-based positions
            if d + 2 <= k {
                let partner = k - 2 - d;
                let sum = if partner < d { s[partner] + v } else if partner == d { 2 * v } else { 0 };
                if sum > g {
                    continue;
                }
            }
            s.push(v);
            rec(s, k, g, need, out);
            s.pop();
        }
    }
    rec(&mut s, k, g, need, &mut out);
    out
}

fn search_grid(k: usize, g: usize, floor: f64) -> Option<(DualCertificate, f64, usize)> {
    let pts = enumerate(k, g, floor);
    let n = pts.len();
    let found: Vec<Option<(DualCertificate, f64)>> = pts
        .par_iter()
        .map(|s| {
            let b: Vec<f64> = s.iter().map(|&x| x as f64 / g as f64).collect();
            ThresholdSet::new(b).ok().and_then(|t| certificate_for(&t))
        })
        .collect();
    let mut best: Option<(DualCertificate, f64)> = None;
    for (c, r) in found.into_iter().flatten() {
        if best.as_ref().is_none_or(|(_, br)| r > *br) {
            best = Some((c, r));
        }
    }
    best.map(|(c, r)| (c, r, n))
}

/// Exhaustive search over thresholds on a grid of spacing `step`.
pub fn grid_search_thresholds(k: usize, step: f64) -> Result<SearchResult> {
    if k < 2 {
        return Err(Error::UnsupportedK(k));
    }
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidInput(format!("grid step {step} must lie in (0,1]")));
    }
    let g = (1.0 / step).round().max(1.0) as usize;
    let coarse = (1..=g.min(20)).rev().find(|d| g % d == 0).unwrap_or(1);
    let mut evaluated = 0;
    let mut floor = 0.0;
    let mut best = None;
    if coarse < g {
        if let Some((c, r, n)) = search_grid(k, coarse, 0.0) {
            evaluated += n;
            floor = r;
            best = Some((c, r));
        }
    }
    if let Some((c, r, n)) = search_grid(k, g, floor) {
        evaluated += n;
        if best.as_ref().is_none_or(|(_, br)| r > *br) {
            best = Some((c, r));
        }
    }
    let (certificate, ratio) = best.ok_or(Error::NoCertificate)?;
    Ok(SearchResult { certificate, ratio, evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rounding::preset_thresholds;

    #[test]
    fn preset_thresholds_recover_their_bound() {
        let (t, c) = preset_thresholds(4).unwrap();
        let (found, r) = certificate_for(&t).unwrap();
        assert!(r >= c.beta_prime - 1e-6, "{r}");
        assert!(check_certificate(&found).passed());
    }

    #[test]
    fn small_k() {
        assert!(matches!(grid_search_thresholds(1, 0.1), Err(Error::UnsupportedK(1))));
        let r2 = grid_search_thresholds(2, 0.1).unwrap();
        assert!(r2.ratio <= 0.5 + 1e-9);
        let r4 = grid_search_thresholds(4, 0.05).unwrap();
        assert!(r4.ratio > r2.ratio);
        assert!(check_certificate(&r4.certificate).passed());
    }
}
