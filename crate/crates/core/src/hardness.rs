//! Instance generators built from hardness reductions and worst-case families.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instance::{normalize, GeneralPriceInstance, Instance, SortPermutation};
use crate::oracle::{BipartiteGraph, WeightedDigraph};

/// Instance produced by a reduction.
#[derive(Clone, Debug)]
pub enum Produced {
    Standard(Instance),
    General(GeneralPriceInstance),
}

/// Provenance of a generated instance.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionRecord {
    pub reduction: String,
    pub source: Value,
    /// Decision threshold on the produced instance, when the reduction has one.
    pub threshold: Option<f64>,
    pub params: Value,
    #[serde(skip)]
    pub instance: Produced,
}

impl ReductionRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

/// Output of [`reduce_max_dicut`].
#[derive(Clone, Debug)]
pub struct MaxDicutReduction {
    pub instance: Instance,
    /// Maps normalized product indices back to graph vertices.
    pub perm: SortPermutation,
    pub scale: u64,
    pub scaled_t: u64,
    pub scaled_graph: WeightedDigraph,
}

/// Maps a weighted DAG and threshold `t` to an instance whose optimum reaches
/// the scaled threshold exactly when some directed cut does.
///
/// Weights and `t` are multiplied by the least integer making `t >= 2n`.
pub fn reduce_max_dicut(g: &WeightedDigraph, t: u64) -> Result<MaxDicutReduction> {
    if t == 0 {
        return Err(Error::InvalidInput("threshold must be positive".into()));
    }
    let n = g.n;
    if n == 0 {
        return Err(Error::InvalidInput("graph needs at least one vertex".into()));
    }
    let scale = (2 * n as u64).div_ceil(t).max(1);
    let gs = g.scaled(scale);
    let ts = t * scale;
    let s = gs.total_weight() as f64;
    let tf = ts as f64;
    let p: Vec<f64> = (1..=n).map(|i| tf - 0.5 - i as f64).collect();
    let q: Vec<f64> = (1..=n).map(|j| j as f64).collect();
    let mut u = vec![vec![0.0; n + 1]; n + 1];
    u[0][0] = 1.0;
    for (i, row) in u.iter_mut().enumerate().skip(1) {
        row[i] = 2.0 * (s + 1.0);
    }
    for &(i, j, w) in &gs.edges {
        u[i][j] += w as f64 / (j as f64 - i as f64 - 0.5);
    }
    let (instance, perm) = normalize(&p, &q, &u)?;
    Ok(MaxDicutReduction { instance, perm, scale, scaled_t: ts, scaled_graph: gs })
}

/// The 4x4 family whose LP optimum approaches `4/3` of the true optimum.
pub fn gap_instance(big_m: f64) -> Result<Instance> {
    if !(big_m.is_finite() && big_m > 1.0) {
        return Err(Error::InvalidInput(format!("M = {big_m} must exceed 1")));
    }
    let prices = vec![0.0, 0.75 * big_m, 0.75, 0.375, 0.0];
    let mut u = vec![vec![0.0; 5]; 5];
    u[0][0] = 1.0;
    u[1][4] = 1.0 / big_m;
    u[4][1] = 1.0 / big_m;
    u[2][3] = 2.0;
    u[3][2] = 2.0;
    for (i, j) in [(2, 4), (3, 3), (3, 4), (4, 2), (4, 3), (4, 4)] {
        u[i][j] = big_m;
    }
    Instance::new(prices.clone(), prices, u)
}

/// The 3x3 family on which the adjusted-revenue-ordered heuristic loses half.
pub fn aro_worstcase(big_m: f64) -> Result<Instance> {
    if !(big_m.is_finite() && big_m > 2.0) {
        return Err(Error::InvalidInput(format!("M = {big_m} must exceed 2")));
    }
    let eps = 2.0 / big_m;
    let prices = vec![0.0, 1.0 + eps, 1.0, 0.0];
    let mut u = vec![vec![0.0; 4]; 4];
    u[0][0] = 1.0;
    u[2][2] = big_m;
    u[1][3] = big_m;
    u[3][1] = big_m;
    Instance::new(prices.clone(), prices, u)
}

/// Capacitated instance whose optimum tracks the densest `kappa x kappa` subgraph.
/// Returns the instance and the two capacities.
pub fn reduce_bdks_capacitated(g: &BipartiteGraph, kappa: usize) -> Result<(Instance, usize, usize)> {
    if kappa > g.left.min(g.right) {
        return Err(Error::InvalidInput(format!(
            "kappa = {kappa} exceeds min side {}",
            g.left.min(g.right)
        )));
    }
    let gsize = (g.left + g.right) as f64;
    let w = gsize.powi(-3);
    let mut u = vec![vec![0.0; g.right + 1]; g.left + 1];
    u[0][0] = 1.0;
    for &(i, j) in &g.edges {
        u[i][j] = w;
    }
    let half = |len: usize| (0..=len).map(|k| if k == 0 { 0.0 } else { 0.5 }).collect();
    let inst = Instance::new(half(g.left), half(g.right), u)?;
    Ok((inst, kappa, kappa))
}

/// Uncapacitated general-price instance tied to the densest `kappa x kappa` subgraph.
pub fn reduce_bdks_generalprice(g: &BipartiteGraph, kappa: usize) -> Result<GeneralPriceInstance> {
    if kappa == 0 {
        return Err(Error::InvalidInput("kappa must be at least 1".into()));
    }
    let k = kappa as f64;
    let (a, b) = (g.left, g.right);
    let mut u = vec![vec![0.0; b + 1]; a + 1];
    let mut r = vec![vec![0.0; b + 1]; a + 1];
    u[0][0] = 1.0;
    for row in u.iter_mut().skip(1) {
        row[0] = 1.0 / k;
    }
    for j in 1..=b {
        u[0][j] = 1.0 / k;
    }
    for i in 1..=a {
        for j in 1..=b {
            u[i][j] = 1.0 / (k * k);
        }
    }
    for &(i, j) in &g.edges {
        r[i][j] = 1.0;
    }
    GeneralPriceInstance::new(u, r)
}

fn digraph_json(g: &WeightedDigraph) -> Value {
    json!({ "n": g.n, "edges": g.edges })
}

fn bipartite_json(g: &BipartiteGraph) -> Value {
    json!({ "left": g.left, "right": g.right, "edges": g.edges })
}

/// Record for a Max-DiCut reduction.
pub fn max_dicut_record(g: &WeightedDigraph, t: u64) -> Result<ReductionRecord> {
    let red = reduce_max_dicut(g, t)?;
    Ok(ReductionRecord {
        reduction: "maxdicut".into(),
        source: digraph_json(g),
        threshold: Some(red.scaled_t as f64),
        params: json!({
            "t": t,
            "scale": red.scale,
            "perm1": red.perm.perm1,
            "perm2": red.perm.perm2,
        }),
        instance: Produced::Standard(red.instance),
    })
}

pub fn bdks_capacitated_record(g: &BipartiteGraph, kappa: usize) -> Result<ReductionRecord> {
    let (inst, k1, k2) = reduce_bdks_capacitated(g, kappa)?;
    Ok(ReductionRecord {
        reduction: "bdks-cap".into(),
        source: bipartite_json(g),
        threshold: None,
        params: json!({ "kappa": kappa, "k1": k1, "k2": k2 }),
        instance: Produced::Standard(inst),
    })
}

pub fn bdks_generalprice_record(g: &BipartiteGraph, kappa: usize) -> Result<ReductionRecord> {
    let inst = reduce_bdks_generalprice(g, kappa)?;
    Ok(ReductionRecord {
        reduction: "bdks-gp".into(),
        source: bipartite_json(g),
        threshold: None,
        params: json!({ "kappa": kappa }),
        instance: Produced::General(inst),
    })
}

pub fn gap_record(big_m: f64) -> Result<ReductionRecord> {
    Ok(ReductionRecord {
        reduction: "gap".into(),
        source: Value::Null,
        threshold: None,
        params: json!({ "M": big_m }),
        instance: Produced::Standard(gap_instance(big_m)?),
    })
}

pub fn aro_worst_record(big_m: f64) -> Result<ReductionRecord> {
    Ok(ReductionRecord {
        reduction: "aro-worst".into(),
        source: Value::Null,
        threshold: None,
        params: json!({ "M": big_m, "eps": 2.0 / big_m }),
        instance: Produced::Standard(aro_worstcase(big_m)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Assortment;
    use crate::oracle::{brute_force, brute_force_general};

    #[test]
    fn single_edge_reduction() {
        let g = WeightedDigraph::new(2, vec![(1, 2, 1)]).unwrap();
        let red = reduce_max_dicut(&g, 1).unwrap();
        assert_eq!(red.scale, 4);
        assert_eq!(red.scaled_t, 4);
        let inst = &red.instance;
        assert_eq!(inst.p(), &[0.0, 2.5, 1.5]);
        assert_eq!(inst.q(), &[0.0, 2.0, 1.0]);
        // columns reversed by sorting: original j=2 is now column 1
        assert_eq!(inst.u(1, 2), 10.0);
        assert_eq!(inst.u(2, 1), 10.0);
        assert_eq!(inst.u(1, 1), 8.0);
        let (a, v) = brute_force(inst).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let orig = red.perm.to_original(&a);
        assert_eq!((orig.x_indices(), orig.y_indices()), (vec![1], vec![2]));
    }

    #[test]
    fn edgeless_reduction_stays_below_t() {
        let g = WeightedDigraph::new(3, vec![]).unwrap();
        let red = reduce_max_dicut(&g, 1).unwrap();
        let (_, v) = brute_force(&red.instance).unwrap();
        assert!(v < red.scaled_t as f64);
    }

    #[test]
    fn aro_worst_optimum() {
        let inst = aro_worstcase(10.0).unwrap();
        let (_, v) = brute_force(&inst).unwrap();
        assert!((v - 20.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn bdks_single_edge() {
        let g = BipartiteGraph::new(1, 1, vec![(1, 1)]).unwrap();
        let gp = reduce_bdks_generalprice(&g, 1).unwrap();
        let (_, v) = brute_force_general(&gp).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        let empty = BipartiteGraph::new(2, 2, vec![]).unwrap();
        let (_, v) = brute_force_general(&reduce_bdks_generalprice(&empty, 1).unwrap()).unwrap();
        assert_eq!(v, 0.0);
        let (inst, _, _) = reduce_bdks_capacitated(&empty, 1).unwrap();
        assert_eq!(inst.revenue(&Assortment::full(2, 2)).unwrap(), 0.0);
    }
}
