#![allow(dead_code)]

use mvmnl::instance::{gen_random, Dist, Instance};
use mvmnl::lp::{solve_lp, ScaledLpSolution};
use mvmnl::Assortment;

pub fn weights(choice: u8) -> Dist {
    match choice % 4 {
        0 => Dist::Uniform { lo: 0.0, hi: 1.0 },
        1 => Dist::Uniform { lo: 0.0, hi: 10.0 },
        2 => Dist::Uniform { lo: 0.0, hi: 100.0 },
        _ => Dist::Exponential { rate: 0.05 },
    }
}

pub fn instance(n: usize, m: usize, seed: u64, choice: u8) -> Instance {
    gen_random(n, m, seed, Dist::default(), weights(choice))
}

/// First non-integral instance at or after `seed`.
pub fn nonintegral(n: usize, m: usize, seed: u64) -> (Instance, ScaledLpSolution) {
    let heavy = Dist::Uniform { lo: 0.0, hi: 100.0 };
    (seed..)
        .map(|s| gen_random(n, m, s, Dist::default(), heavy))
        .find_map(|inst| {
            let sol = solve_lp(&inst).unwrap();
            (!sol.is_integral()).then_some((inst, sol))
        })
        .unwrap()
}

/// Revenue straight from the definition, over explicit index lists.
pub fn revenue_naive(
    p: &[f64],
    q: &[f64],
    u: &[Vec<f64>],
    xs: &[usize],
    ys: &[usize],
) -> f64 {
    let rows: Vec<usize> = std::iter::once(0).chain(xs.iter().copied()).collect();
    let cols: Vec<usize> = std::iter::once(0).chain(ys.iter().copied()).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for &i in &rows {
        for &j in &cols {
            num += u[i][j] * (p[i] + q[j]);
            den += u[i][j];
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Best revenue over every assortment, by plain enumeration.
pub fn optimum_naive(inst: &Instance) -> f64 {
    let (n, m) = (inst.n(), inst.m());
    let mut best: f64 = 0.0;
    for mask in 0u64..(1 << (n + m)) {
        let a = Assortment {
            x: (0..n).map(|k| mask >> k & 1 == 1).collect(),
            y: (0..m).map(|k| mask >> (n + k) & 1 == 1).collect(),
        };
        best = best.max(inst.revenue(&a).unwrap());
    }
    best
}
