//! Roof-dual lower bound of a quadratic pseudo-Boolean function via max-flow
//! on its implication network, with a half-integral minimizer.

use std::collections::VecDeque;

/// `sum_v h[v] x_v + sum (a, b, c) c x_a x_b` over `x in {0,1}^V`.
pub(crate) struct QuadraticForm {
    pub h: Vec<f64>,
    pub terms: Vec<(usize, usize, f64)>,
}

pub(crate) struct RoofDual {
    /// Minimizer of the continuous relaxation, each entry in {0, 1/2, 1}.
    pub values: Vec<f64>,
    /// Minimum of the relaxation.
    pub bound: f64,
}

const SOURCE: usize = 0;
const SINK: usize = 1;

fn pos(v: usize) -> usize {
    2 + 2 * v
}

fn neg(v: usize) -> usize {
    3 + 2 * v
}

struct Network {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    res: Vec<f64>,
    cap: Vec<f64>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self { head: vec![Vec::new(); nodes], to: Vec::new(), res: Vec::new(), cap: Vec::new() }
    }

    fn arc(&mut self, u: usize, v: usize, c: f64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.res.push(c);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.res.push(0.0);
        self.cap.push(0.0);
    }

    /// Adds `u -> v` and its mirror `comp(v) -> comp(u)`, each with capacity `c`.
    fn mirrored(&mut self, u: usize, v: usize, c: f64) {
        self.arc(u, v, c);
        self.arc(v ^ 1, u ^ 1, c);
    }

    fn levels(&self, eps: f64) -> Vec<i32> {
        let mut level = vec![-1; self.head.len()];
        level[SOURCE] = 0;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if level[v] < 0 && self.res[e] > eps {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, limit: f64, level: &[i32], it: &mut [usize], eps: f64) -> f64 {
        if u == SINK {
            return limit;
        }
        while it[u] < self.head[u].len() {
            let e = self.head[u][it[u]];
            let v = self.to[e];
            if self.res[e] > eps && level[v] == level[u] + 1 {
                let got = self.augment(v, limit.min(self.res[e]), level, it, eps);
                if got > 0.0 {
                    self.res[e] -= got;
                    self.res[e ^ 1] += got;
                    return got;
                }
            }
            it[u] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, eps: f64) -> f64 {
        let mut total = 0.0;
        loop {
            let level = self.levels(eps);
            if level[SINK] < 0 {
                return total;
            }
            let mut it = vec![0; self.head.len()];
            loop {
                let f = self.augment(SOURCE, f64::INFINITY, &level, &mut it, eps);
                if f <= 0.0 {
                    break;
                }
                total += f;
            }
        }
    }

    /// Averages the flow on each arc with its mirror; arcs are stored in
    /// groups of four (arc, reverse, mirror, mirror reverse).
    fn symmetrize(&mut self) {
        for k in (0..self.to.len()).step_by(4) {
            let fa = self.cap[k] - self.res[k];
            let fb = self.cap[k + 2] - self.res[k + 2];
            let f = 0.5 * (fa + fb);
            self.res[k] = self.cap[k] - f;
            self.res[k + 1] = f;
            self.res[k + 2] = self.cap[k + 2] - f;
            self.res[k + 3] = f;
        }
    }
}

pub(crate) fn roof_dual(form: &QuadraticForm) -> Option<RoofDual> {
    let nv = form.h.len();
    let mut lin = form.h.clone();
    let mut constant = 0.0;
    let mut quad = Vec::with_capacity(form.terms.len());
    for &(a, b, c) in &form.terms {
        if c > 0.0 {
            quad.push((pos(a), pos(b), c));
        } else if c < 0.0 {
            lin[a] += c;
            quad.push((pos(a), neg(b), -c));
        }
    }
    let mut net = Network::new(2 * nv + 2);
    let mut max_cap: f64 = 0.0;
    for (v, &c) in lin.iter().enumerate() {
        let (lit, c) = if c > 0.0 {
            (pos(v), c)
        } else if c < 0.0 {
            constant += c;
            (neg(v), -c)
        } else {
            continue;
        };
        net.mirrored(SOURCE, lit ^ 1, 0.5 * c);
        max_cap = max_cap.max(c);
    }
    for &(a, b, c) in &quad {
        net.mirrored(a, b ^ 1, 0.5 * c);
        max_cap = max_cap.max(c);
    }
    let eps = 1e-13 * max_cap.max(f64::MIN_POSITIVE);
    let flow = net.max_flow(eps);
    net.symmetrize();
    let reach = {
        let mut seen = vec![false; net.head.len()];
        seen[SOURCE] = true;
        let mut queue = VecDeque::from([SOURCE]);
        while let Some(u) = queue.pop_front() {
            for &e in &net.head[u] {
                let v = net.to[e];
                if !seen[v] && net.res[e] > 8.0 * eps {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    };
    if reach[SINK] {
        return None;
    }
    let mut values = Vec::with_capacity(nv);
    for v in 0..nv {
        values.push(match (reach[pos(v)], reach[neg(v)]) {
            (true, false) => 1.0,
            (false, true) => 0.0,
            (false, false) => 0.5,
            (true, true) => return None,
        });
    }
    Some(RoofDual { values, bound: constant + flow })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relaxed_value(form: &QuadraticForm, x: &[f64]) -> f64 {
        let mut v: f64 = form.h.iter().zip(x).map(|(h, x)| h * x).sum();
        for &(a, b, c) in &form.terms {
            let z = if c > 0.0 { (x[a] + x[b] - 1.0).max(0.0) } else { x[a].min(x[b]) };
            v += c * z;
        }
        v
    }

    fn brute(form: &QuadraticForm) -> f64 {
        let nv = form.h.len();
        (0..1u32 << nv)
            .map(|mask| {
                let x: Vec<f64> = (0..nv).map(|k| (mask >> k & 1) as f64).collect();
                relaxed_value(form, &x)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn small_form_matches_enumeration() {
        let form = QuadraticForm { h: vec![1.0, -2.0, 0.5], terms: vec![(0, 1, -3.0), (1, 2, 1.0)] };
        let rd = roof_dual(&form).unwrap();
        assert!((rd.bound - brute(&form)).abs() < 1e-12);
        assert!((relaxed_value(&form, &rd.values) - rd.bound).abs() < 1e-12);
    }

    #[test]
    fn frustrated_triangle_is_half() {
        // x0 x1 + x1 x2 + x0 x2 - 0.8 (x0 + x1 + x2)
        let form = QuadraticForm {
            h: vec![-0.8; 3],
            terms: vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)],
        };
        let rd = roof_dual(&form).unwrap();
        assert!(rd.bound < brute(&form) - 1e-3);
        assert_eq!(rd.values, vec![0.5; 3]);
        assert!((relaxed_value(&form, &rd.values) - rd.bound).abs() < 1e-12);
    }
}
