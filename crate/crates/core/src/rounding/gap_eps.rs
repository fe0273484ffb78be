use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Assortment, Instance};
use crate::lp::{Label, ScaledLpSolution};
use crate::oracle::RatioTable;

/// Default limit on enumerated block subsets.
pub const DEFAULT_CAP: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct GapEpsResult {
    pub assortment: Assortment,
    pub value: f64,
    /// Number of enumerated product groups across both categories.
    pub blocks: usize,
    /// Products priced at or above `r*` but labeled zero by the LP.
    pub forced_zero: usize,
}

enum Class {
    In,
    Out,
    Group(u8, usize),
}

/// Splits products into forced-in, excluded and `(label, band)` groups.
fn classify(prices: &[f64], labels: &[Label], r: f64, eps: f64, k: usize) -> (Vec<Class>, usize) {
    let mut conflicts = 0;
    let classes = (1..prices.len())
        .map(|i| {
            let p = prices[i];
            if p >= r {
                if labels[i - 1] == Label::Zero {
                    conflicts += 1;
                }
                return Class::In;
            }
            let tag = match labels[i - 1] {
                Label::Zero => return Class::Out,
                Label::One => 0,
                Label::Half => 1,
            };
            let band = (1..=k)
                .find(|&b| {
                    let lo = if b == k { 0.0 } else { (1.0 - b as f64 * eps) * r };
                    p >= lo
                })
                .unwrap_or(k);
            Class::Group(tag, band)
        })
        .collect();
    (classes, conflicts)
}

/// Maps each product to a table row: 0 for forced-in, `None` for excluded.
fn index_groups(classes: &[Class]) -> (Vec<Option<usize>>, usize) {
    let mut keys = BTreeMap::new();
    for c in classes {
        if let Class::Group(t, b) = c {
            keys.entry((*t, *b)).or_insert(0);
        }
    }
    for (idx, v) in keys.values_mut().enumerate() {
        *v = idx + 1;
    }
    let rows = classes
        .iter()
        .map(|c| match c {
            Class::In => Some(0),
            Class::Out => None,
            Class::Group(t, b) => Some(keys[&(*t, *b)]),
        })
        .collect();
    (rows, keys.len())
}

/// Enumerates unions of price-band groups of a half-integral solution.
///
/// Requires `1/eps` to be an integer; fails with `CapExceeded` when the
/// number of group subsets exceeds `cap`.
pub fn gap_eps_solve(
    inst: &Instance,
    sol: &ScaledLpSolution,
    eps: f64,
    cap: u64,
) -> Result<GapEpsResult> {
    if !(eps.is_finite() && eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let k = (1.0 / eps).round();
    if (k * eps - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidEpsilon(eps));
    }
    let k = k as usize;
    if sol.n != inst.n() {
        return Err(Error::DimensionMismatch { expected: format!("n={}", inst.n()), got: format!("n={}", sol.n) });
    }
    if sol.m != inst.m() {
        return Err(Error::DimensionMismatch { expected: format!("m={}", inst.m()), got: format!("m={}", sol.m) });
    }
    if sol.is_integral() {
        let a = sol.support();
        let value = inst.revenue_unchecked(&a);
        return Ok(GapEpsResult { assortment: a, value, blocks: 0, forced_zero: 0 });
    }
    let r = sol.r_star;
    let (cx, fx) = classify(inst.p(), &sol.lx, r, eps, k);
    let (cy, fy) = classify(inst.q(), &sol.ly, r, eps, k);
    let (row, gx) = index_groups(&cx);
    let (col, gy) = index_groups(&cy);
    let blocks = gx + gy;
    if blocks >= 63 || (1u64 << blocks) > cap {
        return Err(Error::CapExceeded { blocks, cap });
    }
    let mut table = RatioTable::new(gx + 1, gy + 1);
    let row_of = |i: usize| if i == 0 { Some(0) } else { row[i - 1] };
    let col_of = |j: usize| if j == 0 { Some(0) } else { col[j - 1] };
    for i in 0..=inst.n() {
        let Some(a) = row_of(i) else { continue };
        for j in 0..=inst.m() {
            let Some(b) = col_of(j) else { continue };
            let u = inst.u(i, j);
            table.add(a, b, u, u * (inst.p()[i] + inst.q()[j]));
        }
    }
    let (sx, sy, _) = table.maximize(gx, gy);
    let pick = |g: &[Option<usize>], sel: &[bool]| -> Vec<bool> {
        g.iter().map(|r| matches!(r, Some(0)) || matches!(r, Some(a) if *a > 0 && sel[a - 1])).collect()
    };
    let assortment = Assortment { x: pick(&row, &sx), y: pick(&col, &sy) };
    let value = inst.revenue_unchecked(&assortment);
    Ok(GapEpsResult { assortment, value, blocks, forced_zero: fx + fy })
}
