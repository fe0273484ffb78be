//! Exhaustive solvers used as ground truth.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Assortment, GeneralPriceInstance, Instance};

/// Default cap on the number of enumerated product bits.
pub const DEFAULT_BUDGET: usize = 24;

const RESYNC: u64 = 4096;

/// Ratio objective over row/column selections: `sum v x y / sum w x y`, with
/// row 0 and column 0 always selected.
#[derive(Clone, Debug)]
pub struct RatioTable {
    rows: usize,
    cols: usize,
    w: Vec<f64>,
    v: Vec<f64>,
}

impl RatioTable {
    /// `rows`/`cols` include the always-on index 0.
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, w: vec![0.0; rows * cols], v: vec![0.0; rows * cols] }
    }

    pub fn add(&mut self, i: usize, j: usize, weight: f64, value: f64) {
        self.w[i * self.cols + j] += weight;
        self.v[i * self.cols + j] += value;
    }

    fn from_instance(inst: &Instance) -> Self {
        let mut t = Self::new(inst.n() + 1, inst.m() + 1);
        for i in 0..=inst.n() {
            for j in 0..=inst.m() {
                let u = inst.u(i, j);
                t.add(i, j, u, u * (inst.p()[i] + inst.q()[j]));
            }
        }
        t
    }

    fn from_general(inst: &GeneralPriceInstance) -> Self {
        let mut t = Self::new(inst.n() + 1, inst.m() + 1);
        for i in 0..=inst.n() {
            for j in 0..=inst.m() {
                let u = inst.u(i, j);
                t.add(i, j, u, u * inst.r(i, j));
            }
        }
        t
    }

    fn transposed(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.add(j, i, self.w[i * self.cols + j], self.v[i * self.cols + j]);
            }
        }
        t
    }

    /// Ratio for explicit selections; 0 when the denominator vanishes.
    pub fn value(&self, x: &[bool], y: &[bool]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..self.rows {
            if i > 0 && !x[i - 1] {
                continue;
            }
            for j in 0..self.cols {
                if j > 0 && !y[j - 1] {
                    continue;
                }
                num += self.v[i * self.cols + j];
                den += self.w[i * self.cols + j];
            }
        }
        ratio(num, den)
    }

    /// Maximizes over all selections with at most `cap_x` rows and `cap_y`
    /// columns beyond index 0. Ties go to the lexicographically smallest bit
    /// pattern `(x_1..x_a, y_1..y_b)` with `x_1` most significant.
    pub fn maximize(&self, cap_x: usize, cap_y: usize) -> (Vec<bool>, Vec<bool>, f64) {
        let a = self.rows - 1;
        let b = self.cols - 1;
        if a > b {
            let (y, x, v) = self.transposed().maximize_oriented(cap_y, cap_x, true);
            return (x, y, v);
        }
        self.maximize_oriented(cap_x, cap_y, false)
    }

    /// Enumerates outer masks over rows and an inner Gray code over columns.
    /// `swapped` means rows are the caller's second category, which changes
    /// only the tie key.
    fn maximize_oriented(&self, cap_r: usize, cap_c: usize, swapped: bool) -> (Vec<bool>, Vec<bool>, f64) {
        let a = self.rows - 1;
        let b = self.cols - 1;
        let total_outer: u64 = 1 << a;
        let chunk = (total_outer / 64).max(1);
        let starts: Vec<u64> = (0..total_outer).step_by(chunk as usize).collect();
        let results: Vec<Best> = starts
            .par_iter()
            .map(|&s| self.scan_outer(s, (s + chunk).min(total_outer), cap_r, cap_c, swapped))
            .collect();
        let mut best = Best::none();
        for r in results {
            best.offer(r.value, r.key, r.rmask, r.cmask);
        }
        let x = (0..a).map(|k| best.rmask >> k & 1 == 1).collect();
        let y = (0..b).map(|k| best.cmask >> k & 1 == 1).collect();
        (x, y, best.value)
    }

    fn tie_key(&self, rmask: u64, cmask: u64, swapped: bool) -> u64 {
        let a = self.rows - 1;
        let b = self.cols - 1;
        // Caller order: category 1 bits first, each with index 1 most significant.
        let rev = |mask: u64, len: usize| -> u64 {
            let mut out = 0u64;
            for k in 0..len {
                if mask >> k & 1 == 1 {
                    out |= 1 << (len - 1 - k);
                }
            }
            out
        };
        if swapped {
            (rev(cmask, b) << a) | rev(rmask, a)
        } else {
            (rev(rmask, a) << b) | rev(cmask, b)
        }
    }

    fn scan_outer(&self, lo: u64, hi: u64, cap_r: usize, cap_c: usize, swapped: bool) -> Best {
        let b = self.cols - 1;
        let mut best = Best::none();
        let mut cw = vec![0.0; self.cols];
        let mut cv = vec![0.0; self.cols];
        for rmask in lo..hi {
            if rmask.count_ones() as usize > cap_r {
                continue;
            }
            cw.iter_mut().for_each(|x| *x = 0.0);
            cv.iter_mut().for_each(|x| *x = 0.0);
            for i in 0..self.rows {
                if i > 0 && rmask >> (i - 1) & 1 == 0 {
                    continue;
                }
                let base = i * self.cols;
                for j in 0..self.cols {
                    cw[j] += self.w[base + j];
                    cv[j] += self.v[base + j];
                }
            }
            let (mut num, mut den) = (cv[0], cw[0]);
            let mut cmask = 0u64;
            let mut pop = 0usize;
            let total: u64 = 1 << b;
            best.offer(ratio(num, den), self.tie_key(rmask, 0, swapped), rmask, 0);
            for step in 1..total {
                let bit = step.trailing_zeros() as usize;
                cmask ^= 1 << bit;
                if cmask >> bit & 1 == 1 {
                    num += cv[bit + 1];
                    den += cw[bit + 1];
                    pop += 1;
                } else {
                    num -= cv[bit + 1];
                    den -= cw[bit + 1];
                    pop -= 1;
                }
                if step % RESYNC == 0 {
                    num = cv[0];
                    den = cw[0];
                    for j in 0..b {
                        if cmask >> j & 1 == 1 {
                            num += cv[j + 1];
                            den += cw[j + 1];
                        }
                    }
                }
                if pop <= cap_c {
                    let val = ratio(num, den);
                    if val >= best.value - tie_tol(best.value) {
                        best.offer(val, self.tie_key(rmask, cmask, swapped), rmask, cmask);
                    }
                }
            }
        }
        best
    }
}

#[inline]
fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

#[inline]
fn tie_tol(v: f64) -> f64 {
    1e-12 * v.abs().max(1.0)
}

struct Best {
    value: f64,
    key: u64,
    rmask: u64,
    cmask: u64,
}

impl Best {
    fn none() -> Self {
        Self { value: f64::NEG_INFINITY, key: u64::MAX, rmask: 0, cmask: 0 }
    }

    fn offer(&mut self, value: f64, key: u64, rmask: u64, cmask: u64) {
        let better = if self.value == f64::NEG_INFINITY {
            true
        } else if value > self.value + tie_tol(self.value) {
            true
        } else {
            value >= self.value - tie_tol(self.value) && key < self.key
        };
        if better {
            *self = Self { value, key, rmask, cmask };
        }
    }
}

fn check_budget(bits: usize, budget: usize) -> Result<()> {
    if bits > budget || bits > 62 {
        return Err(Error::BudgetExceeded { size: bits, budget });
    }
    Ok(())
}

/// Exact optimum by enumerating all `2^(n+m)` assortments.
pub fn brute_force(inst: &Instance) -> Result<(Assortment, f64)> {
    brute_force_with_budget(inst, DEFAULT_BUDGET)
}

pub fn brute_force_with_budget(inst: &Instance, budget: usize) -> Result<(Assortment, f64)> {
    brute_force_capacitated_with_budget(inst, inst.n(), inst.m(), budget)
}

/// Exact optimum subject to `|x| <= k1` and `|y| <= k2`.
pub fn brute_force_capacitated(inst: &Instance, k1: i64, k2: i64) -> Result<(Assortment, f64)> {
    if k1 < 0 || k2 < 0 {
        return Err(Error::InvalidInput("capacities must be nonnegative".into()));
    }
    brute_force_capacitated_with_budget(inst, k1 as usize, k2 as usize, DEFAULT_BUDGET)
}

fn brute_force_capacitated_with_budget(
    inst: &Instance,
    k1: usize,
    k2: usize,
    budget: usize,
) -> Result<(Assortment, f64)> {
    check_budget(inst.n() + inst.m(), budget)?;
    let (x, y, v) = RatioTable::from_instance(inst).maximize(k1, k2);
    Ok((Assortment { x, y }, v))
}

/// Exact optimum of a general-price instance.
pub fn brute_force_general(inst: &GeneralPriceInstance) -> Result<(Assortment, f64)> {
    check_budget(inst.n() + inst.m(), DEFAULT_BUDGET)?;
    let (x, y, v) = RatioTable::from_general(inst).maximize(inst.n(), inst.m());
    Ok((Assortment { x, y }, v))
}

/// A DAG given in topological order: every edge `(i, j, w)` has `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedDigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, u64)>,
}

impl WeightedDigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, u64)>) -> Result<Self> {
        for &(i, j, w) in &edges {
            if i == 0 || j > n || i >= j {
                return Err(Error::InvalidInput(format!(
                    "edge ({i},{j}) must satisfy 1 <= i < j <= {n}"
                )));
            }
            if w == 0 {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) has zero weight")));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn scaled(&self, factor: u64) -> Self {
        Self { n: self.n, edges: self.edges.iter().map(|&(i, j, w)| (i, j, w * factor)).collect() }
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Weight of edges leaving the set encoded by `mask` (bit `k` is vertex `k + 1`).
    pub fn cut_weight(&self, mask: u64) -> u64 {
        self.edges
            .iter()
            .filter(|&&(i, j, _)| mask >> (i - 1) & 1 == 1 && mask >> (j - 1) & 1 == 0)
            .map(|e| e.2)
            .sum()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            n: usize,
            edges: Vec<(usize, usize, u64)>,
        }
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let f: File = serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        Self::new(f.n, f.edges).map_err(|e| Error::parse(path, e.to_string()))
    }
}

/// Maximum directed cut by enumeration. Returns the 1-based source set.
pub fn max_dicut_brute(g: &WeightedDigraph) -> Result<(Vec<usize>, u64)> {
    check_budget(g.n, DEFAULT_BUDGET)?;
    let mut best = (0u64, 0u64);
    for mask in 0..(1u64 << g.n) {
        let c = g.cut_weight(mask);
        if c > best.1 {
            best = (mask, c);
        }
    }
    let set = (0..g.n).filter(|k| best.0 >> k & 1 == 1).map(|k| k + 1).collect();
    Ok((set, best.1))
}

/// Undirected bipartite graph with 1-based vertices on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(i, j) in &edges {
            if i == 0 || i > left || j == 0 || j > right {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) out of range")));
            }
        }
        let before = edges.len();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != before {
            return Err(Error::InvalidInput("duplicate edges".into()));
        }
        Ok(Self { left, right, edges })
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Edges with both endpoints in the given 1-based vertex sets.
    pub fn edges_within(&self, ls: &[usize], rs: &[usize]) -> usize {
        self.edges.iter().filter(|(i, j)| ls.contains(i) && rs.contains(j)).count()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            left: usize,
            right: usize,
            edges: Vec<(usize, usize)>,
        }
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let f: File = serde_json::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        Self::new(f.left, f.right, f.edges).map_err(|e| Error::parse(path, e.to_string()))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

fn masks_with_popcount(len: usize, k: usize) -> impl Iterator<Item = u64> {
    (0..(1u64 << len)).filter(move |m| m.count_ones() as usize == k)
}

/// Densest `kappa x kappa` subgraph by enumeration.
pub fn bdks_brute(g: &BipartiteGraph, kappa: usize) -> Result<(Vec<usize>, Vec<usize>, usize)> {
    if kappa > g.left || kappa > g.right {
        return Err(Error::InvalidInput(format!(
            "kappa = {kappa} exceeds a side of size {} or {}",
            g.left, g.right
        )));
    }
    let work = binomial(g.left, kappa) * binomial(g.right, kappa);
    if work > 1e6 || g.left > 62 || g.right > 62 {
        return Err(Error::BudgetExceeded { size: work as usize, budget: 1_000_000 });
    }
    let mut adj = vec![0u64; g.right];
    for &(i, j) in &g.edges {
        adj[j - 1] |= 1 << (i - 1);
    }
    let mut best = (0u64, 0u64, 0usize);
    let mut first = true;
    for lm in masks_with_popcount(g.left, kappa) {
        for rm in masks_with_popcount(g.right, kappa) {
            let e: usize = (0..g.right)
                .filter(|&j| rm >> j & 1 == 1)
                .map(|j| (adj[j] & lm).count_ones() as usize)
                .sum();
            if first || e > best.2 {
                best = (lm, rm, e);
                first = false;
            }
        }
    }
    let side = |mask: u64, len: usize| (0..len).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
    Ok((side(best.0, g.left), side(best.1, g.right), best.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_random, Dist};

    fn naive(inst: &Instance) -> f64 {
        let (n, m) = (inst.n(), inst.m());
        let mut best = f64::NEG_INFINITY;
        for mask in 0..(1u32 << (n + m)) {
            let a = Assortment {
                x: (0..n).map(|k| mask >> k & 1 == 1).collect(),
                y: (0..m).map(|k| mask >> (n + k) & 1 == 1).collect(),
            };
            best = best.max(inst.revenue(&a).unwrap());
        }
        best
    }

    #[test]
    fn e1_optimum() {
        let inst =
            Instance::new(vec![0.0, 3.0], vec![0.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 2.0]])
                .unwrap();
        let (a, v) = brute_force(&inst).unwrap();
        assert_eq!(a.x_indices(), vec![1]);
        assert_eq!(a.y_indices(), vec![1]);
        assert!((v - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_weights_pick_empty() {
        let mut u = vec![vec![0.0; 4]; 3];
        u[0][0] = 1.0;
        let inst = Instance::new(vec![0.0, 2.0, 1.0], vec![0.0, 3.0, 2.0, 1.0], u).unwrap();
        let (a, v) = brute_force(&inst).unwrap();
        assert_eq!(a, Assortment::empty(2, 3));
        assert_eq!(v, 0.0);
    }

    #[test]
    fn matches_naive_enumeration() {
        for seed in 0..20 {
            let (n, m) = (1 + seed as usize % 4, 1 + (seed as usize / 4) % 4);
            let inst = gen_random(n, m, seed, Dist::default(), Dist::default());
            let (a, v) = brute_force(&inst).unwrap();
            assert!((v - naive(&inst)).abs() < 1e-12);
            assert!((inst.revenue(&a).unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_guard() {
        let inst = gen_random(13, 12, 1, Dist::default(), Dist::default());
        assert!(matches!(brute_force(&inst), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn capacitated_extremes() {
        let inst = gen_random(3, 3, 5, Dist::default(), Dist::default());
        let (_, full) = brute_force(&inst).unwrap();
        let (_, cap) = brute_force_capacitated(&inst, 3, 3).unwrap();
        assert_eq!(full, cap);
        let (a, zero) = brute_force_capacitated(&inst, 0, 0).unwrap();
        assert_eq!(zero, 0.0);
        assert_eq!(a, Assortment::empty(3, 3));
        assert!(brute_force_capacitated(&inst, -1, 0).is_err());
    }

    #[test]
    fn dicut_examples() {
        let g = WeightedDigraph::new(2, vec![(1, 2, 1)]).unwrap();
        assert_eq!(max_dicut_brute(&g).unwrap(), (vec![1], 1));
        let g = WeightedDigraph::new(3, vec![(1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(max_dicut_brute(&g).unwrap().1, 1);
        let g = WeightedDigraph::new(3, vec![]).unwrap();
        assert_eq!(max_dicut_brute(&g).unwrap(), (vec![], 0));
        assert!(WeightedDigraph::new(3, vec![(2, 1, 1)]).is_err());
    }

    #[test]
    fn bdks_examples() {
        let all: Vec<_> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
        let g = BipartiteGraph::new(3, 3, all).unwrap();
        assert_eq!(bdks_brute(&g, 2).unwrap().2, 4);
        let g = BipartiteGraph::new(3, 3, vec![]).unwrap();
        assert_eq!(bdks_brute(&g, 2).unwrap().2, 0);
        let g = BipartiteGraph::new(2, 2, vec![(1, 1), (1, 2), (2, 1), (2, 2)]).unwrap();
        assert_eq!(bdks_brute(&g, 1).unwrap().2, 1);
        assert!(bdks_brute(&g, 3).is_err());
    }
}
