//! Dense tableau simplex for `max c.v` subject to `A v <= 0`, `e.v = 1`,
//! `v >= 0`, started from the basis made of all slacks plus one structural
//! variable pivoted into the equality row. Dantzig pricing with a
//! lexicographic ratio test, so it stops at a basic optimum.

const PIVOT_TOL: f64 = 1e-9;
const LEX_TOL: f64 = 1e-12;

pub(crate) struct DenseProblem {
    pub nvars: usize,
    pub objective: Vec<f64>,
    pub equality: Vec<f64>,
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Variable with coefficient 1 in the equality row and only
    /// nonpositive coefficients in `rows`.
    pub anchor: usize,
}

struct Tableau {
    width: usize,
    data: Vec<f64>,
    reduced: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for c in 0..w {
            self.data[pr * w + c] *= inv;
        }
        self.data[pr * w + pc] = 1.0;
        let prow: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        let nz: Vec<usize> = (0..w).filter(|&c| prow[c] != 0.0).collect();
        for r in 0..self.basis.len() {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[r * w..(r + 1) * w];
            for &c in &nz {
                row[c] -= f * prow[c];
            }
            row[pc] = 0.0;
        }
        let f = self.reduced[pc];
        if f != 0.0 {
            for &c in &nz {
                self.reduced[c] -= f * prow[c];
            }
            self.reduced[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }
}

/// Returns the optimal basic solution, or `None` if the iteration limit is hit.
pub(crate) fn solve(prob: &DenseProblem) -> Option<Vec<f64>> {
    let nv = prob.nvars;
    let nr = prob.rows.len();
    let width = nv + nr + 1;
    let mut data = vec![0.0; (nr + 1) * width];
    for (k, row) in prob.rows.iter().enumerate() {
        for &(c, a) in row {
            data[k * width + c] += a;
        }
        data[k * width + nv + k] = 1.0;
    }
    for (c, &a) in prob.equality.iter().enumerate() {
        data[nr * width + c] = a;
    }
    data[nr * width + width - 1] = 1.0;
    let mut reduced = vec![0.0; width];
    reduced[..nv].copy_from_slice(&prob.objective);
    let basis = (0..nr).map(|k| nv + k).chain(std::iter::once(prob.anchor)).collect();
    let mut t = Tableau { width, data, reduced, basis };
    t.pivot(nr, prob.anchor);

    let lex_cols: Vec<usize> = std::iter::once(prob.anchor).chain(nv..nv + nr).collect();
    let limit = 50 * (width + nr);
    for _ in 0..limit {
        let mut enter = None;
        let mut best = PIVOT_TOL;
        for c in 0..width - 1 {
            if t.reduced[c] > best {
                best = t.reduced[c];
                enter = Some(c);
            }
        }
        let Some(pc) = enter else {
            let mut v = vec![0.0; nv];
            for (r, &b) in t.basis.iter().enumerate() {
                if b < nv {
                    v[b] = t.rhs(r);
                }
            }
            return Some(v);
        };
        let mut cands: Vec<usize> = (0..=nr).filter(|&r| t.at(r, pc) > PIVOT_TOL).collect();
        if cands.is_empty() {
            return None;
        }
        let key = |r: usize, c: usize| t.at(r, c) / t.at(r, pc);
        let keys = std::iter::once(width - 1).chain(lex_cols.iter().copied());
        for c in keys {
            if cands.len() == 1 {
                break;
            }
            let lo = cands.iter().map(|&r| key(r, c)).fold(f64::INFINITY, f64::min);
            cands.retain(|&r| key(r, c) <= lo + LEX_TOL * (1.0 + lo.abs()));
        }
        t.pivot(cands[0], pc);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_fractional_program() {
        // max 3x subject to w + 2x = 1, x - w <= 0: optimum x = w = 1/3.
        let prob = DenseProblem {
            nvars: 2,
            objective: vec![0.0, 3.0],
            equality: vec![1.0, 2.0],
            rows: vec![vec![(1, 1.0), (0, -1.0)]],
            anchor: 0,
        };
        let v = solve(&prob).unwrap();
        assert!((v[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((v[1] - 1.0 / 3.0).abs() < 1e-12);
    }
}
