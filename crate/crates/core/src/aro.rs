//! Adjusted-revenue-ordered assortments and the 0.5-approximation built on them.

use serde::Serialize;

use crate::instance::{Assortment, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroedCategory {
    /// Category-2 prices set to zero.
    ZeroQ,
    /// Category-1 prices set to zero.
    ZeroP,
}

#[derive(Clone, Debug)]
pub struct SingleCategoryResult {
    pub assortment: Assortment,
    pub value: f64,
    pub which: ZeroedCategory,
}

#[derive(Clone, Debug)]
pub struct AroResult {
    pub assortment: Assortment,
    /// Revenue under the original prices.
    pub value: f64,
    pub pi_p: f64,
    pub pi_q: f64,
}

/// Exact optimum when every `q_j = 0`: scans `x` = top-`k` by price and `y`
/// = top-`l` by adjusted revenue, `(n+1)(m+1)` candidates in all.
pub fn solve_zero_q(inst: &Instance) -> SingleCategoryResult {
    let (n, m) = (inst.n(), inst.m());
    let p = inst.p();
    let mut col_num = vec![0.0; m + 1];
    let mut col_den: Vec<f64> = (0..=m).map(|j| inst.u(0, j)).collect();
    let mut best = (f64::NEG_INFINITY, 0usize, Vec::new());
    let mut order: Vec<usize> = (1..=m).collect();
    for k in 0..=n {
        if k > 0 {
            for j in 0..=m {
                col_num[j] += inst.u(k, j) * p[k];
                col_den[j] += inst.u(k, j);
            }
        }
        let adjusted = |j: usize| if col_den[j] > 0.0 { col_num[j] / col_den[j] } else { 0.0 };
        order.sort_by(|&a, &b| adjusted(b).total_cmp(&adjusted(a)).then(a.cmp(&b)));
        let (mut num, mut den) = (col_num[0], col_den[0]);
        for l in 0..=m {
            if l > 0 {
                num += col_num[order[l - 1]];
                den += col_den[order[l - 1]];
            }
            let v = num / den;
            if v > best.0 {
                best = (v, k, order[..l].to_vec());
            }
        }
    }
    let (_, k, ys) = best;
    let xs: Vec<usize> = (1..=k).collect();
    let assortment = Assortment::from_indices(n, m, &xs, &ys).expect("indices in range");
    let value = inst.zero_q().revenue_unchecked(&assortment);
    SingleCategoryResult { assortment, value, which: ZeroedCategory::ZeroQ }
}

/// Exact optimum when every `p_i = 0`, by symmetry.
pub fn solve_zero_p(inst: &Instance) -> SingleCategoryResult {
    let r = solve_zero_q(&inst.transpose());
    SingleCategoryResult {
        assortment: r.assortment.transpose(),
        value: r.value,
        which: ZeroedCategory::ZeroP,
    }
}

/// Picks the better of the two zeroed solutions and reports its revenue
/// under the original prices.
pub fn aro_best(inst: &Instance) -> AroResult {
    let rp = solve_zero_q(inst);
    let rq = solve_zero_p(inst);
    let chosen = if rp.value >= rq.value { &rp } else { &rq };
    let value = inst.revenue_unchecked(&chosen.assortment);
    AroResult { assortment: chosen.assortment.clone(), value, pi_p: rp.value, pi_q: rq.value }
}
