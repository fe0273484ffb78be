use rayon::prelude::*;

use super::ThresholdSet;
use crate::error::{Error, Result};
use crate::instance::{Assortment, Instance};
use crate::lp::{Label, ScaledLpSolution};

/// Products of a half-integral solution split by label and price band.
///
/// Block `(0, 0)` collects bundles between integral products (the outside
/// option included). Block `(I, J)` with `I, J >= 1` collects bundles whose
/// row sits in band `I` (band 1 for integral rows) and column in band `J`.
#[derive(Clone, Debug)]
pub struct BlockPartition {
    pub k: usize,
    pub r_star: f64,
    /// Category-1 products labeled one.
    pub n1: Vec<usize>,
    /// Category-1 products labeled one half.
    pub n2: Vec<usize>,
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    /// `cutoff_x[k-1]` is the number of category-1 products priced at least `b_k r*`.
    pub cutoff_x: Vec<usize>,
    pub cutoff_y: Vec<usize>,
    /// Band of each half-labeled product (index 0 unused, 0 for integral products).
    pub band_x: Vec<usize>,
    pub band_y: Vec<usize>,
    stats: Vec<BlockStats>,
    uncovered: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, Default)]
struct BlockStats {
    u: f64,
    ur: f64,
    u_lp: f64,
    ur_lp: f64,
}

impl BlockPartition {
    fn at(&self, i: usize, j: usize) -> &BlockStats {
        &self.stats[i * (self.k + 1) + j]
    }

    /// Total preference weight of block `(I, J)`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.at(i, j).u
    }

    /// Weighted mean price of block `(I, J)`, 0 when empty.
    pub fn mean_price(&self, i: usize, j: usize) -> f64 {
        let s = self.at(i, j);
        if s.u > 0.0 {
            s.ur / s.u
        } else {
            0.0
        }
    }

    /// Weight of the bundles in `(I, J)` that the LP solution uses.
    pub fn lp_weight(&self, i: usize, j: usize) -> f64 {
        self.at(i, j).u_lp
    }

    pub fn lp_mean_price(&self, i: usize, j: usize) -> f64 {
        let s = self.at(i, j);
        if s.u_lp > 0.0 {
            s.ur_lp / s.u_lp
        } else {
            0.0
        }
    }

    /// Bundles used by the LP solution that fall outside every candidate.
    pub fn uncovered(&self) -> &[(usize, usize)] {
        &self.uncovered
    }

    /// LP value rebuilt from block aggregates; equals `r*` when coverage holds.
    pub fn lp_value(&self) -> f64 {
        let s00 = self.at(0, 0);
        let (mut num, mut den) = (s00.ur, s00.u);
        for i in 1..=self.k {
            for j in 1..=self.k {
                let s = self.at(i, j);
                num += 0.5 * s.ur_lp;
                den += 0.5 * s.u_lp;
            }
        }
        num / den
    }

    /// Blocks whose LP-used mean price leaves the range implied by the bands.
    pub fn band_violations(&self, t: &ThresholdSet, tol: f64) -> Vec<(usize, usize)> {
        let r = self.r_star;
        let slack = tol * r.max(1.0);
        let mut out = Vec::new();
        for i in 1..=self.k {
            for j in 1..=self.k {
                if self.lp_weight(i, j) <= 0.0 {
                    continue;
                }
                let rp = self.lp_mean_price(i, j);
                let (lo, hi) = match (i, j) {
                    (1, 1) => (t.b(1) * r, f64::INFINITY),
                    (1, _) => (t.b(j) * r, f64::INFINITY),
                    (_, 1) => (t.b(i) * r, f64::INFINITY),
                    _ => ((t.b(i) + t.b(j)) * r, (t.b(i - 1) + t.b(j - 1)) * r),
                };
                if rp < lo - slack || rp > hi + slack {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn cutoffs(prices: &[f64], t: &ThresholdSet, r: f64) -> Vec<usize> {
    (1..=t.k())
        .map(|k| prices[1..].iter().take_while(|&&p| p >= t.b(k) * r).count())
        .collect()
}

fn band(idx: usize, cut: &[usize]) -> usize {
    cut.iter().position(|&c| idx <= c).map_or(cut.len(), |k| k + 1)
}

fn check_dims(inst: &Instance, sol: &ScaledLpSolution) -> Result<()> {
    if sol.n != inst.n() {
        return Err(Error::DimensionMismatch { expected: format!("n={}", inst.n()), got: format!("n={}", sol.n) });
    }
    if sol.m != inst.m() {
        return Err(Error::DimensionMismatch { expected: format!("m={}", inst.m()), got: format!("m={}", sol.m) });
    }
    Ok(())
}

/// Splits a non-integral half-integral solution into label/band blocks.
pub fn partition_blocks(
    inst: &Instance,
    sol: &ScaledLpSolution,
    t: &ThresholdSet,
) -> Result<BlockPartition> {
    check_dims(inst, sol)?;
    if sol.is_integral() {
        return Err(Error::IntegralSolution);
    }
    let (n, m, k) = (inst.n(), inst.m(), t.k());
    let r = sol.r_star;
    let pick = |labels: &[Label], want: Label| -> Vec<usize> {
        (1..=labels.len()).filter(|&i| labels[i - 1] == want).collect()
    };
    let (n1, n2) = (pick(&sol.lx, Label::One), pick(&sol.lx, Label::Half));
    let (m1, m2) = (pick(&sol.ly, Label::One), pick(&sol.ly, Label::Half));
    let cutoff_x = cutoffs(inst.p(), t, r);
    let cutoff_y = cutoffs(inst.q(), t, r);
    let mut band_x = vec![0; n + 1];
    for &i in &n2 {
        band_x[i] = band(i, &cutoff_x);
    }
    let mut band_y = vec![0; m + 1];
    for &j in &m2 {
        band_y[j] = band(j, &cutoff_y);
    }

    // row class: None = excluded, Some(0) = integral, Some(b) = half in band b
    let row_class = |i: usize| -> Option<usize> {
        if i == 0 {
            return Some(0);
        }
        match sol.lx[i - 1] {
            Label::Zero => None,
            Label::One => Some(0),
            Label::Half => Some(band_x[i]),
        }
    };
    let col_class = |j: usize| -> Option<usize> {
        if j == 0 {
            return Some(0);
        }
        match sol.ly[j - 1] {
            Label::Zero => None,
            Label::One => Some(0),
            Label::Half => Some(band_y[j]),
        }
    };
    let lp_value = |i: usize, j: usize| -> f64 {
        match (i, j) {
            (0, 0) => 1.0,
            (i, 0) => sol.x[i - 1],
            (0, j) => sol.y[j - 1],
            (i, j) => sol.z(i, j),
        }
    };

    let mut stats = vec![BlockStats::default(); (k + 1) * (k + 1)];
    let mut uncovered = Vec::new();
    for i in 0..=n {
        let Some(ci) = row_class(i) else { continue };
        for j in 0..=m {
            let Some(cj) = col_class(j) else { continue };
            let (bi, bj) = match (ci, cj) {
                (0, 0) => (0, 0),
                (0, b) => (1, b),
                (a, 0) => (a, 1),
                (a, b) => (a, b),
            };
            let u = inst.u(i, j);
            let price = inst.p()[i] + inst.q()[j];
            let s = &mut stats[bi * (k + 1) + bj];
            s.u += u;
            s.ur += u * price;
            if lp_value(i, j) > 0.0 {
                s.u_lp += u;
                s.ur_lp += u * price;
                if bi > 0 && bi + bj > k + 1 && u > 0.0 {
                    uncovered.push((i, j));
                }
            }
        }
    }
    Ok(BlockPartition {
        k,
        r_star: r,
        n1,
        n2,
        m1,
        m2,
        cutoff_x,
        cutoff_y,
        band_x,
        band_y,
        stats,
        uncovered,
    })
}

/// The `K` candidate assortments, one per staircase step.
pub fn candidate_assortments(part: &BlockPartition, n: usize, m: usize) -> Vec<Assortment> {
    let k = part.k;
    (1..=k)
        .map(|step| {
            let mut a = Assortment::empty(n, m);
            for &i in &part.n1 {
                a.x[i - 1] = true;
            }
            for &i in &part.n2 {
                a.x[i - 1] = i <= part.cutoff_x[step - 1];
            }
            for &j in &part.m1 {
                a.y[j - 1] = true;
            }
            for &j in &part.m2 {
                a.y[j - 1] = j <= part.cutoff_y[k - step];
            }
            a
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RoundResult {
    pub assortment: Assortment,
    pub value: f64,
    /// Winning candidate (1-based); `None` when the LP was already integral.
    pub step: Option<usize>,
    pub candidate_values: Vec<f64>,
}

/// Best of the candidate assortments, or the support of an integral solution.
pub fn round_best(inst: &Instance, sol: &ScaledLpSolution, t: &ThresholdSet) -> Result<RoundResult> {
    check_dims(inst, sol)?;
    if sol.is_integral() {
        let a = sol.support();
        let value = inst.revenue_unchecked(&a);
        return Ok(RoundResult { assortment: a, value, step: None, candidate_values: vec![value] });
    }
    let part = partition_blocks(inst, sol, t)?;
    let cands = candidate_assortments(&part, inst.n(), inst.m());
    let values: Vec<f64> = cands.par_iter().map(|a| inst.revenue_unchecked(a)).collect();
    let mut best = 0;
    for (idx, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = idx;
        }
    }
    Ok(RoundResult {
        assortment: cands[best].clone(),
        value: values[best],
        step: Some(best + 1),
        candidate_values: values,
    })
}
