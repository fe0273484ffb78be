//! LP relaxation of the assortment problem: model construction, vertex
//! solution with half-integral classification, and randomized rounding.

mod flow;
mod simplex;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Assortment, Instance};

use flow::{roof_dual, QuadraticForm};
use simplex::DenseProblem;

/// Classification tolerance for scaled values.
pub const TAU: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Zero,
    Half,
    One,
}

impl Label {
    pub fn value(self) -> f64 {
        match self {
            Label::Zero => 0.0,
            Label::Half => 0.5,
            Label::One => 1.0,
        }
    }

    pub fn classify(v: f64) -> Option<Label> {
        [Label::Zero, Label::Half, Label::One].into_iter().find(|l| (v - l.value()).abs() <= TAU)
    }
}

/// The relaxation over variables `w`, `x_i`, `y_j` and `z_ij` for the pairs
/// with positive weight.
#[derive(Clone, Debug)]
pub struct LpModel {
    inst: Instance,
    pairs: Vec<(usize, usize)>,
}

/// Builds the relaxation. Pairs with zero weight get no `z` variable; the
/// bounds `x_i <= w`, `y_j <= w` are kept explicitly.
pub fn build_lp(inst: &Instance) -> LpModel {
    let mut pairs = Vec::new();
    for i in 1..=inst.n() {
        for j in 1..=inst.m() {
            if inst.u(i, j) > 0.0 {
                pairs.push((i, j));
            }
        }
    }
    LpModel { inst: inst.clone(), pairs }
}

impl LpModel {
    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn num_vars(&self) -> usize {
        1 + self.inst.n() + self.inst.m() + self.pairs.len()
    }

    /// Pair rows plus the equality row; the `x <= w`, `y <= w` bounds are
    /// counted separately.
    pub fn num_constraints(&self) -> usize {
        3 * self.pairs.len() + 1
    }

    pub fn var_w(&self) -> usize {
        0
    }

    pub fn var_x(&self, i: usize) -> usize {
        i
    }

    pub fn var_y(&self, j: usize) -> usize {
        self.inst.n() + j
    }

    pub fn var_z(&self, k: usize) -> usize {
        1 + self.inst.n() + self.inst.m() + k
    }

    pub fn var_name(&self, v: usize) -> String {
        let (n, m) = (self.inst.n(), self.inst.m());
        if v == 0 {
            "w".into()
        } else if v <= n {
            format!("x{v}")
        } else if v <= n + m {
            format!("y{}", v - n)
        } else {
            let (i, j) = self.pairs[v - 1 - n - m];
            format!("z{i}_{j}")
        }
    }

    pub fn objective(&self) -> Vec<f64> {
        let inst = &self.inst;
        let mut c = vec![0.0; self.num_vars()];
        for i in 1..=inst.n() {
            c[self.var_x(i)] = inst.u(i, 0) * inst.p()[i];
        }
        for j in 1..=inst.m() {
            c[self.var_y(j)] = inst.u(0, j) * inst.q()[j];
        }
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            c[self.var_z(k)] = inst.u(i, j) * (inst.p()[i] + inst.q()[j]);
        }
        c
    }

    /// Coefficients of the normalization row (right-hand side 1).
    pub fn equality_row(&self) -> Vec<f64> {
        let inst = &self.inst;
        let mut a = vec![0.0; self.num_vars()];
        a[0] = 1.0;
        for i in 1..=inst.n() {
            a[self.var_x(i)] = inst.u(i, 0);
        }
        for j in 1..=inst.m() {
            a[self.var_y(j)] = inst.u(0, j);
        }
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            a[self.var_z(k)] = inst.u(i, j);
        }
        a
    }

    /// Rows of the form `a.v <= 0`: for each pair `z <= x`, `z <= y`,
    /// `x + y - w - z <= 0`, then `x_i <= w` and `y_j <= w`.
    pub fn inequality_rows(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = Vec::with_capacity(3 * self.pairs.len() + self.inst.n() + self.inst.m());
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            let (z, x, y) = (self.var_z(k), self.var_x(i), self.var_y(j));
            rows.push(vec![(z, 1.0), (x, -1.0)]);
            rows.push(vec![(z, 1.0), (y, -1.0)]);
            rows.push(vec![(x, 1.0), (y, 1.0), (0, -1.0), (z, -1.0)]);
        }
        for i in 1..=self.inst.n() {
            rows.push(vec![(self.var_x(i), 1.0), (0, -1.0)]);
        }
        for j in 1..=self.inst.m() {
            rows.push(vec![(self.var_y(j), 1.0), (0, -1.0)]);
        }
        rows
    }

    /// Human-readable dump in LP file syntax.
    pub fn to_lp_text(&self) -> String {
        let term = |(v, a): (usize, f64)| {
            let sign = if a < 0.0 { "-" } else { "+" };
            format!("{sign} {} {}", a.abs(), self.var_name(v))
        };
        let line = |coeffs: Vec<(usize, f64)>| {
            coeffs.into_iter().filter(|c| c.1 != 0.0).map(term).collect::<Vec<_>>().join(" ")
        };
        let mut s = String::from("Maximize\n obj: ");
        s += &line(self.objective().into_iter().enumerate().collect());
        s += "\nSubject To\n norm: ";
        s += &line(self.equality_row().into_iter().enumerate().collect());
        s += " = 1\n";
        for (k, row) in self.inequality_rows().into_iter().enumerate() {
            let _ = writeln!(s, " c{k}: {} <= 0", line(row));
        }
        s += "End\n";
        s
    }

    fn coeffs_at(&self, r: f64) -> Coeffs {
        let inst = &self.inst;
        Coeffs {
            a: (1..=inst.n()).map(|i| inst.u(i, 0) * (inst.p()[i] - r)).collect(),
            b: (1..=inst.m()).map(|j| inst.u(0, j) * (inst.q()[j] - r)).collect(),
            c: self
                .pairs
                .iter()
                .map(|&(i, j)| inst.u(i, j) * (inst.p()[i] + inst.q()[j] - r))
                .collect(),
        }
    }

    /// Numerator and denominator of the scaled objective.
    fn ratio_parts(&self, x: &[f64], y: &[f64], z: &[f64]) -> (f64, f64) {
        let inst = &self.inst;
        let (mut num, mut den) = (0.0, 1.0);
        for i in 1..=inst.n() {
            num += inst.u(i, 0) * inst.p()[i] * x[i - 1];
            den += inst.u(i, 0) * x[i - 1];
        }
        for j in 1..=inst.m() {
            num += inst.u(0, j) * inst.q()[j] * y[j - 1];
            den += inst.u(0, j) * y[j - 1];
        }
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            let u = inst.u(i, j);
            num += u * (inst.p()[i] + inst.q()[j]) * z[k];
            den += u * z[k];
        }
        (num, den)
    }

    /// Best `z` for fixed `x`, `y` at price level `r`.
    fn best_z(&self, x: &[f64], y: &[f64], r: f64) -> Vec<f64> {
        let inst = &self.inst;
        self.pairs
            .iter()
            .map(|&(i, j)| {
                let (xi, yj) = (x[i - 1], y[j - 1]);
                if inst.p()[i] + inst.q()[j] - r > 0.0 {
                    xi.min(yj)
                } else {
                    (xi + yj - 1.0).max(0.0)
                }
            })
            .collect()
    }

    fn total_weight(&self) -> f64 {
        let inst = &self.inst;
        let mut t = 0.0;
        for i in 0..=inst.n() {
            for j in 0..=inst.m() {
                t += inst.u(i, j);
            }
        }
        t
    }
}

struct Coeffs {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

/// How a solution was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveRoute {
    /// Parametric max-flow on the implication network.
    Flow,
    /// Dense lexicographic simplex.
    Simplex,
}

/// Vertex solution divided by `w`, with every variable labeled.
#[derive(Clone, Debug)]
pub struct ScaledLpSolution {
    pub n: usize,
    pub m: usize,
    pub w: f64,
    pub r_star: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Dense `n x m` row-major; zero for dropped pairs.
    z: Vec<f64>,
    pub lx: Vec<Label>,
    pub ly: Vec<Label>,
    lz: Vec<Label>,
    pub route: SolveRoute,
}

impl ScaledLpSolution {
    pub fn z(&self, i: usize, j: usize) -> f64 {
        self.z[(i - 1) * self.m + (j - 1)]
    }

    pub fn z_label(&self, i: usize, j: usize) -> Label {
        self.lz[(i - 1) * self.m + (j - 1)]
    }

    pub fn is_integral(&self) -> bool {
        !self.lx.iter().chain(&self.ly).chain(&self.lz).any(|&l| l == Label::Half)
    }

    /// Products labeled one.
    pub fn support(&self) -> Assortment {
        Assortment {
            x: self.lx.iter().map(|&l| l == Label::One).collect(),
            y: self.ly.iter().map(|&l| l == Label::One).collect(),
        }
    }

    /// Largest violation of the unscaled constraints.
    pub fn max_violation(&self, model: &LpModel) -> f64 {
        let mut raw = vec![0.0; model.num_vars()];
        raw[0] = self.w;
        for i in 1..=self.n {
            raw[model.var_x(i)] = self.x[i - 1] * self.w;
        }
        for j in 1..=self.m {
            raw[model.var_y(j)] = self.y[j - 1] * self.w;
        }
        for (k, &(i, j)) in model.pairs.iter().enumerate() {
            raw[model.var_z(k)] = self.z(i, j) * self.w;
        }
        let eq: f64 = model.equality_row().iter().zip(&raw).map(|(a, v)| a * v).sum();
        let mut worst = (eq - 1.0).abs();
        for row in model.inequality_rows() {
            let s: f64 = row.iter().map(|&(v, a)| a * raw[v]).sum();
            worst = worst.max(s);
        }
        for &v in &raw {
            worst = worst.max(-v);
        }
        worst
    }

    /// Objective of the unscaled solution.
    pub fn raw_objective(&self, model: &LpModel) -> f64 {
        let c = model.objective();
        let mut v = 0.0;
        for i in 1..=self.n {
            v += c[model.var_x(i)] * self.x[i - 1] * self.w;
        }
        for j in 1..=self.m {
            v += c[model.var_y(j)] * self.y[j - 1] * self.w;
        }
        for (k, &(i, j)) in model.pairs.iter().enumerate() {
            v += c[model.var_z(k)] * self.z(i, j) * self.w;
        }
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut z = serde_json::Map::new();
        let mut lz = serde_json::Map::new();
        for i in 1..=self.n {
            for j in 1..=self.m {
                if self.z(i, j) != 0.0 {
                    z.insert(format!("{i},{j}"), self.z(i, j).into());
                    lz.insert(format!("{i},{j}"), serde_json::to_value(self.z_label(i, j)).unwrap());
                }
            }
        }
        serde_json::json!({
            "w": self.w,
            "r_star": self.r_star,
            "x": self.x,
            "y": self.y,
            "z": z,
            "labels": { "x": self.lx, "y": self.ly, "z": lz },
        })
    }
}

/// Pairs `(i, j)` with both products half and positive weight whose `z`
/// label contradicts the sign of `p_i + q_j - r*` outside the tie band.
pub fn sign_pattern_violations(inst: &Instance, sol: &ScaledLpSolution) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=inst.n() {
        for j in 1..=inst.m() {
            if sol.lx[i - 1] != Label::Half || sol.ly[j - 1] != Label::Half || inst.u(i, j) <= 0.0 {
                continue;
            }
            let s = inst.p()[i] + inst.q()[j];
            let l = sol.z_label(i, j);
            if (s > sol.r_star * (1.0 + TAU) && l != Label::Half)
                || (s < sol.r_star * (1.0 - TAU) && l != Label::Zero)
            {
                out.push((i, j));
            }
        }
    }
    out
}

fn assemble(model: &LpModel, x: Vec<f64>, y: Vec<f64>, zp: &[f64], route: SolveRoute) -> Result<ScaledLpSolution> {
    let (n, m) = (model.inst.n(), model.inst.m());
    let classify = |v: f64, what: &str| {
        Label::classify(v).ok_or_else(|| Error::VertexClassificationFailed(format!("{what} = {v}")))
    };
    let lx = x.iter().enumerate().map(|(k, &v)| classify(v, &format!("x{}", k + 1))).collect::<Result<Vec<_>>>()?;
    let ly = y.iter().enumerate().map(|(k, &v)| classify(v, &format!("y{}", k + 1))).collect::<Result<Vec<_>>>()?;
    let mut lz = vec![Label::Zero; n * m];
    let mut z = vec![0.0; n * m];
    let mut snapped = Vec::with_capacity(zp.len());
    for (k, &(i, j)) in model.pairs.iter().enumerate() {
        let l = classify(zp[k], &format!("z{i}_{j}"))?;
        lz[(i - 1) * m + (j - 1)] = l;
        z[(i - 1) * m + (j - 1)] = l.value();
        snapped.push(l.value());
    }
    let x: Vec<f64> = lx.iter().map(|l| l.value()).collect();
    let y: Vec<f64> = ly.iter().map(|l| l.value()).collect();
    let (num, den) = model.ratio_parts(&x, &y, &snapped);
    Ok(ScaledLpSolution { n, m, w: 1.0 / den, r_star: num / den, x, y, z, lx, ly, lz, route })
}

/// Solves the relaxation to a half-integral optimum. The parametric flow
/// route is tried first; if its optimality certificate fails, the dense
/// simplex is used instead.
pub fn solve_vertex(model: &LpModel) -> Result<ScaledLpSolution> {
    if let Some((x, y, z)) = flow_route(model) {
        if let Ok(sol) = assemble(model, x, y, &z, SolveRoute::Flow) {
            return Ok(sol);
        }
    }
    solve_vertex_simplex(model)
}

/// Solves the relaxation with the dense simplex only.
pub fn solve_vertex_simplex(model: &LpModel) -> Result<ScaledLpSolution> {
    let prob = DenseProblem {
        nvars: model.num_vars(),
        objective: model.objective(),
        equality: model.equality_row(),
        rows: model.inequality_rows(),
        anchor: model.var_w(),
    };
    let v = simplex::solve(&prob)
        .ok_or_else(|| Error::VertexClassificationFailed("simplex iteration limit".into()))?;
    let w = v[0];
    if w <= 0.0 {
        return Err(Error::VertexClassificationFailed(format!("w = {w}")));
    }
    let (n, m) = (model.inst.n(), model.inst.m());
    let x = (1..=n).map(|i| v[model.var_x(i)] / w).collect();
    let y = (1..=m).map(|j| v[model.var_y(j)] / w).collect();
    let z: Vec<f64> = (0..model.pairs.len()).map(|k| v[model.var_z(k)] / w).collect();
    assemble(model, x, y, &z, SolveRoute::Simplex)
}

/// Convenience: build and solve.
pub fn solve_lp(inst: &Instance) -> Result<ScaledLpSolution> {
    solve_vertex(&build_lp(inst))
}

fn form_at(model: &LpModel, r: f64) -> QuadraticForm {
    let co = model.coeffs_at(r);
    let n = model.inst.n();
    let h = co.a.iter().chain(&co.b).map(|v| -v).collect();
    let terms = model
        .pairs
        .iter()
        .zip(&co.c)
        .filter(|(_, &c)| c != 0.0)
        .map(|(&(i, j), &c)| (i - 1, n + j - 1, -c))
        .collect();
    QuadraticForm { h, terms }
}

/// Maximum of `N - r D` over the relaxation, with its half-integral maximizer.
fn parametric_step(model: &LpModel, r: f64) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>, f64)> {
    let n = model.inst.n();
    let rd = roof_dual(&form_at(model, r))?;
    let x = rd.values[..n].to_vec();
    let y = rd.values[n..].to_vec();
    let z = model.best_z(&x, &y, r);
    Some((x, y, z, -rd.bound - r))
}

fn flow_route(model: &LpModel) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let (n, m) = (model.inst.n(), model.inst.m());
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; m];
    let mut z = vec![0.0; model.pairs.len()];
    let mut r = 0.0;
    for _ in 0..200 {
        let (nx, ny, nz, _) = parametric_step(model, r)?;
        let (num, den) = model.ratio_parts(&nx, &ny, &nz);
        let next = num / den;
        if next <= r + 1e-15 * r.abs().max(1.0) {
            break;
        }
        (x, y, z, r) = (nx, ny, nz, next);
    }
    purify(model, &mut x, &mut y, &mut z, r);
    let (num, den) = model.ratio_parts(&x, &y, &z);
    let r = num / den;
    let (.., gap) = parametric_step(model, r)?;
    let tol = 1e-9 * r.abs().max(1.0) * model.total_weight();
    (gap <= tol).then_some((x, y, z))
}

/// Rounds half variables to 0 (then 1) whenever the ratio does not drop.
fn purify(model: &LpModel, x: &mut [f64], y: &mut [f64], z: &mut Vec<f64>, r: f64) {
    let floor = r - 1e-12 * r.abs().max(1.0);
    let n = x.len();
    let total = n + y.len();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..total {
            let cur = if v < n { x[v] } else { y[v - n] };
            if cur != 0.5 {
                continue;
            }
            for cand in [0.0, 1.0] {
                let (mut tx, mut ty) = (x.to_vec(), y.to_vec());
                if v < n {
                    tx[v] = cand;
                } else {
                    ty[v - n] = cand;
                }
                let tz = model.best_z(&tx, &ty, r);
                let (num, den) = model.ratio_parts(&tx, &ty, &tz);
                if num / den >= floor {
                    x.copy_from_slice(&tx);
                    y.copy_from_slice(&ty);
                    *z = tz;
                    changed = true;
                    break;
                }
            }
        }
    }
}

/// Keeps one-labeled products, drops zero-labeled ones, and includes each
/// half-labeled product independently with probability 1/2.
pub fn random_round(sol: &ScaledLpSolution, seed: u64) -> Assortment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |l: &Label| match l {
        Label::Zero => false,
        Label::One => true,
        Label::Half => rng.random_bool(0.5),
    };
    let x = sol.lx.iter().map(&mut pick).collect();
    let y = sol.ly.iter().map(&mut pick).collect();
    Assortment { x, y }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_random, Dist};

    fn e1() -> Instance {
        Instance::new(vec![0.0, 3.0], vec![0.0, 1.0], vec![vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap()
    }

    #[test]
    fn e1_model_shape() {
        let model = build_lp(&e1());
        assert_eq!(model.num_vars(), 4);
        assert_eq!(model.num_constraints(), 4);
        assert_eq!(model.equality_row(), vec![1.0, 0.0, 0.0, 2.0]);
        assert_eq!(model.objective(), vec![0.0, 0.0, 0.0, 8.0]);
        assert_eq!(model.inequality_rows().len(), 5);
        assert!(model.to_lp_text().contains("norm: + 1 w + 2 z1_1 = 1"));
    }

    #[test]
    fn e1_solution() {
        for sol in [solve_lp(&e1()).unwrap(), solve_vertex_simplex(&build_lp(&e1())).unwrap()] {
            assert!((sol.w - 1.0 / 3.0).abs() < 1e-12);
            assert!((sol.r_star - 8.0 / 3.0).abs() < 1e-12);
            assert_eq!((sol.x[0], sol.y[0], sol.z(1, 1)), (1.0, 1.0, 1.0));
            assert!(sol.is_integral());
        }
    }

    #[test]
    fn degenerate_instance_is_empty() {
        let mut u = vec![vec![0.0; 3]; 3];
        u[0][0] = 1.0;
        let inst = Instance::new(vec![0.0; 3], vec![0.0; 3], u).unwrap();
        let sol = solve_lp(&inst).unwrap();
        assert_eq!(sol.w, 1.0);
        assert_eq!(sol.r_star, 0.0);
        assert!(sol.is_integral());
    }

    #[test]
    fn flow_and_simplex_agree() {
        for seed in 0..30 {
            let inst = gen_random(5, 4, seed, Dist::default(), Dist::default());
            let model = build_lp(&inst);
            let a = solve_vertex(&model).unwrap();
            let b = solve_vertex_simplex(&model).unwrap();
            assert_eq!(a.route, SolveRoute::Flow);
            assert!((a.r_star - b.r_star).abs() < 1e-9 * a.r_star.max(1.0), "seed {seed}");
            assert!(a.max_violation(&model) < 1e-8);
            assert!(b.max_violation(&model) < 1e-8);
            assert!((a.raw_objective(&model) - a.r_star).abs() < 1e-9 * a.r_star.max(1.0));
        }
    }

    #[test]
    fn random_round_respects_labels() {
        let sol = solve_lp(&e1()).unwrap();
        assert_eq!(random_round(&sol, 3), sol.support());
    }
}
