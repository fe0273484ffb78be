//! Instances, assortments and revenue evaluation.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A two-category instance. Index 0 of each category is the no-purchase option.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n: usize,
    m: usize,
    p: Vec<f64>,
    q: Vec<f64>,
    u: Vec<f64>,
}

/// Offered products. `x[i - 1]` tells whether product `i` of category 1 is offered.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assortment {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

/// An instance whose bundle prices are arbitrary instead of additive.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralPriceInstance {
    n: usize,
    m: usize,
    u: Vec<f64>,
    r: Vec<f64>,
}

/// Maps normalized product indices back to the caller's labels.
/// `perm1[k]` is the original label of normalized product `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortPermutation {
    pub perm1: Vec<usize>,
    pub perm2: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape(String),
    PriceNotZero { category: u8 },
    NegativePrice { category: u8, index: usize },
    NonFinitePrice { category: u8, index: usize },
    PriceNotNonincreasing { category: u8, index: usize },
    WeightInvalid { i: usize, j: usize },
    OriginWeight,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |c: &u8| if *c == 1 { "p" } else { "q" };
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::PriceNotZero { category } => {
                write!(f, "{}[0] must equal 0", name(category))
            }
            Violation::NegativePrice { category, index } => {
                write!(f, "{} negative at index {index}", name(category))
            }
            Violation::NonFinitePrice { category, index } => {
                write!(f, "{} not finite at index {index}", name(category))
            }
            Violation::PriceNotNonincreasing { category, index } => {
                write!(f, "{} not nonincreasing at index {index}", name(category))
            }
            Violation::WeightInvalid { i, j } => {
                write!(f, "u[{i}][{j}] must be finite and nonnegative")
            }
            Violation::OriginWeight => write!(f, "u00 must equal 1"),
        }
    }
}

fn check_prices(v: &[f64], category: u8, out: &mut Vec<Violation>) {
    if v.first().copied() != Some(0.0) {
        out.push(Violation::PriceNotZero { category });
    }
    for (k, &x) in v.iter().enumerate().skip(1) {
        if !x.is_finite() {
            out.push(Violation::NonFinitePrice { category, index: k });
        } else if x < 0.0 {
            out.push(Violation::NegativePrice { category, index: k });
        }
        if k >= 2 && x > v[k - 1] {
            out.push(Violation::PriceNotNonincreasing { category, index: k });
        }
    }
}

impl Instance {
    /// Builds an instance from full price vectors (with the leading zero) and a
    /// row-major weight matrix, rejecting anything that fails `validate`.
    pub fn new(p: Vec<f64>, q: Vec<f64>, u: Vec<Vec<f64>>) -> Result<Self> {
        let inst = Self::from_parts_unchecked(p, q, u)?;
        let report = inst.validate();
        if report.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Validation(report))
        }
    }

    /// Builds without checking the price/weight invariants (only the shape).
    pub fn from_parts_unchecked(p: Vec<f64>, q: Vec<f64>, u: Vec<Vec<f64>>) -> Result<Self> {
        if p.is_empty() || q.is_empty() {
            return Err(Error::InvalidInput("price vectors must include index 0".into()));
        }
        let n = p.len() - 1;
        let m = q.len() - 1;
        if u.len() != n + 1 || u.iter().any(|row| row.len() != m + 1) {
            return Err(Error::DimensionMismatch {
                expected: format!("u of shape {}x{}", n + 1, m + 1),
                got: format!(
                    "{} rows with lengths {:?}",
                    u.len(),
                    u.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            });
        }
        let u = u.into_iter().flatten().collect();
        Ok(Self { n, m, p, q, u })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    #[inline]
    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.u[i * (self.m + 1) + j]
    }

    pub fn u_rows(&self) -> Vec<Vec<f64>> {
        self.u.chunks(self.m + 1).map(<[f64]>::to_vec).collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 || self.m == 0 {
            out.push(Violation::Shape("n and m must be positive".into()));
        }
        check_prices(&self.p, 1, &mut out);
        check_prices(&self.q, 2, &mut out);
        for i in 0..=self.n {
            for j in 0..=self.m {
                let w = self.u(i, j);
                if !w.is_finite() || w < 0.0 {
                    out.push(Violation::WeightInvalid { i, j });
                }
            }
        }
        if self.u(0, 0) != 1.0 {
            out.push(Violation::OriginWeight);
        }
        out
    }

    pub fn check_assortment(&self, a: &Assortment) -> Result<()> {
        if a.x.len() != self.n || a.y.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: format!("assortment over {}x{}", self.n, self.m),
                got: format!("{}x{}", a.x.len(), a.y.len()),
            });
        }
        Ok(())
    }

    /// Expected revenue of an assortment.
    pub fn revenue(&self, a: &Assortment) -> Result<f64> {
        self.check_assortment(a)?;
        Ok(self.revenue_unchecked(a))
    }

    pub(crate) fn revenue_unchecked(&self, a: &Assortment) -> f64 {
        let rows = a.rows();
        let cols = a.cols();
        let (mut num, mut den) = (0.0, 0.0);
        for &i in &rows {
            for &j in &cols {
                let w = self.u(i, j);
                num += w * (self.p[i] + self.q[j]);
                den += w;
            }
        }
        num / den
    }

    /// Same instance with every price multiplied by `factor`.
    pub fn scale_prices(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.p.iter_mut().for_each(|v| *v *= factor);
        out.q.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// Copy with category-2 prices set to zero.
    pub fn zero_q(&self) -> Self {
        let mut out = self.clone();
        out.q.iter_mut().for_each(|v| *v = 0.0);
        out
    }

    /// Copy with category-1 prices set to zero.
    pub fn zero_p(&self) -> Self {
        let mut out = self.clone();
        out.p.iter_mut().for_each(|v| *v = 0.0);
        out
    }

    /// Swaps the roles of the two categories.
    pub fn transpose(&self) -> Self {
        let mut u = vec![0.0; self.u.len()];
        for i in 0..=self.n {
            for j in 0..=self.m {
                u[j * (self.n + 1) + i] = self.u(i, j);
            }
        }
        Self { n: self.m, m: self.n, p: self.q.clone(), q: self.p.clone(), u }
    }

    /// The additive-price instance viewed as a general-price instance.
    pub fn to_general(&self) -> GeneralPriceInstance {
        let mut r = vec![0.0; self.u.len()];
        for i in 0..=self.n {
            for j in 0..=self.m {
                r[i * (self.m + 1) + j] = self.p[i] + self.q[j];
            }
        }
        GeneralPriceInstance { n: self.n, m: self.m, u: self.u.clone(), r }
    }
}

impl Assortment {
    pub fn empty(n: usize, m: usize) -> Self {
        Self { x: vec![false; n], y: vec![false; m] }
    }

    pub fn full(n: usize, m: usize) -> Self {
        Self { x: vec![true; n], y: vec![true; m] }
    }

    /// Builds from 1-based product indices.
    pub fn from_indices(n: usize, m: usize, xs: &[usize], ys: &[usize]) -> Result<Self> {
        let mut a = Self::empty(n, m);
        for &i in xs {
            if i == 0 || i > n {
                return Err(Error::InvalidInput(format!("category-1 index {i} out of 1..={n}")));
            }
            a.x[i - 1] = true;
        }
        for &j in ys {
            if j == 0 || j > m {
                return Err(Error::InvalidInput(format!("category-2 index {j} out of 1..={m}")));
            }
            a.y[j - 1] = true;
        }
        Ok(a)
    }

    /// 1-based indices of offered category-1 products.
    pub fn x_indices(&self) -> Vec<usize> {
        self.x.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k + 1).collect()
    }

    pub fn y_indices(&self) -> Vec<usize> {
        self.y.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k + 1).collect()
    }

    /// Row indices in play, including the no-purchase row 0.
    pub fn rows(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.x_indices()).collect()
    }

    pub fn cols(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.y_indices()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "x": self.x_indices(), "y": self.y_indices() })
    }
}

impl fmt::Display for Assortment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={:?} y={:?}", self.x_indices(), self.y_indices())
    }
}

impl GeneralPriceInstance {
    pub fn new(u: Vec<Vec<f64>>, r: Vec<Vec<f64>>) -> Result<Self> {
        let n = u.len().checked_sub(1).ok_or_else(|| Error::InvalidInput("empty u".into()))?;
        let m = u[0].len().checked_sub(1).ok_or_else(|| Error::InvalidInput("empty u".into()))?;
        let shape_ok = |a: &Vec<Vec<f64>>| a.len() == n + 1 && a.iter().all(|row| row.len() == m + 1);
        if !shape_ok(&u) || !shape_ok(&r) {
            return Err(Error::DimensionMismatch {
                expected: format!("u and r of shape {}x{}", n + 1, m + 1),
                got: format!("u {}x?, r {}x?", u.len(), r.len()),
            });
        }
        let inst = Self {
            n,
            m,
            u: u.into_iter().flatten().collect(),
            r: r.into_iter().flatten().collect(),
        };
        let report = inst.validate();
        if report.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Validation(report))
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 || self.m == 0 {
            out.push(Violation::Shape("n and m must be positive".into()));
        }
        for i in 0..=self.n {
            for j in 0..=self.m {
                let w = self.u(i, j);
                let r = self.r(i, j);
                if !w.is_finite() || w < 0.0 || !r.is_finite() || r < 0.0 {
                    out.push(Violation::WeightInvalid { i, j });
                }
            }
        }
        if self.u(0, 0) != 1.0 {
            out.push(Violation::OriginWeight);
        }
        if self.r(0, 0) != 0.0 {
            out.push(Violation::Shape("r00 must equal 0".into()));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.u[i * (self.m + 1) + j]
    }

    #[inline]
    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.r[i * (self.m + 1) + j]
    }

    pub fn revenue(&self, a: &Assortment) -> Result<f64> {
        if a.x.len() != self.n || a.y.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: format!("assortment over {}x{}", self.n, self.m),
                got: format!("{}x{}", a.x.len(), a.y.len()),
            });
        }
        let (mut num, mut den) = (0.0, 0.0);
        for &i in &a.rows() {
            for &j in &a.cols() {
                num += self.u(i, j) * self.r(i, j);
                den += self.u(i, j);
            }
        }
        Ok(num / den)
    }

    pub fn u_rows(&self) -> Vec<Vec<f64>> {
        self.u.chunks(self.m + 1).map(<[f64]>::to_vec).collect()
    }

    pub fn r_rows(&self) -> Vec<Vec<f64>> {
        self.r.chunks(self.m + 1).map(<[f64]>::to_vec).collect()
    }
}

impl SortPermutation {
    pub fn identity(n: usize, m: usize) -> Self {
        Self { perm1: (1..=n).collect(), perm2: (1..=m).collect() }
    }

    /// Translates an assortment over normalized labels to original labels.
    pub fn to_original(&self, a: &Assortment) -> Assortment {
        let mut out = Assortment::empty(a.x.len(), a.y.len());
        for (k, &b) in a.x.iter().enumerate() {
            out.x[self.perm1[k] - 1] = b;
        }
        for (k, &b) in a.y.iter().enumerate() {
            out.y[self.perm2[k] - 1] = b;
        }
        out
    }

    /// Translates an assortment over original labels to normalized labels.
    pub fn from_original(&self, a: &Assortment) -> Assortment {
        let mut out = Assortment::empty(a.x.len(), a.y.len());
        for (k, &orig) in self.perm1.iter().enumerate() {
            out.x[k] = a.x[orig - 1];
        }
        for (k, &orig) in self.perm2.iter().enumerate() {
            out.y[k] = a.y[orig - 1];
        }
        out
    }
}

fn descending_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    idx
}

/// Sorts raw prices in descending order (stable on ties) and permutes the
/// weight matrix accordingly. `p_raw` and `q_raw` exclude the no-purchase
/// entries; `u_raw` is the full `(n+1) x (m+1)` matrix with `u_raw[0][0] = 1`.
pub fn normalize(
    p_raw: &[f64],
    q_raw: &[f64],
    u_raw: &[Vec<f64>],
) -> Result<(Instance, SortPermutation)> {
    let n = p_raw.len();
    let m = q_raw.len();
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("both categories need at least one product".into()));
    }
    if u_raw.len() != n + 1 || u_raw.iter().any(|r| r.len() != m + 1) {
        return Err(Error::DimensionMismatch {
            expected: format!("u of shape {}x{}", n + 1, m + 1),
            got: format!("{} rows", u_raw.len()),
        });
    }
    let bad = |x: f64| !x.is_finite() || x < 0.0;
    if let Some(k) = p_raw.iter().position(|&x| bad(x)) {
        return Err(Error::InvalidInput(format!("p[{}] is negative or non-finite", k + 1)));
    }
    if let Some(k) = q_raw.iter().position(|&x| bad(x)) {
        return Err(Error::InvalidInput(format!("q[{}] is negative or non-finite", k + 1)));
    }
    for (i, row) in u_raw.iter().enumerate() {
        if let Some(j) = row.iter().position(|&x| bad(x)) {
            return Err(Error::InvalidInput(format!("u[{i}][{j}] is negative or non-finite")));
        }
    }
    if u_raw[0][0] != 1.0 {
        return Err(Error::InvalidInput("u00 must equal 1".into()));
    }
    let o1 = descending_order(p_raw);
    let o2 = descending_order(q_raw);
    let mut p = vec![0.0];
    p.extend(o1.iter().map(|&k| p_raw[k]));
    let mut q = vec![0.0];
    q.extend(o2.iter().map(|&k| q_raw[k]));
    let row_src: Vec<usize> = std::iter::once(0).chain(o1.iter().map(|k| k + 1)).collect();
    let col_src: Vec<usize> = std::iter::once(0).chain(o2.iter().map(|k| k + 1)).collect();
    let u = row_src
        .iter()
        .map(|&i| col_src.iter().map(|&j| u_raw[i][j]).collect())
        .collect();
    let inst = Instance::new(p, q, u)?;
    let perm = SortPermutation {
        perm1: o1.iter().map(|k| k + 1).collect(),
        perm2: o2.iter().map(|k| k + 1).collect(),
    };
    Ok((inst, perm))
}

/// Sampling law for prices or weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dist {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    LogUniform { lo: f64, hi: f64 },
}

impl Default for Dist {
    fn default() -> Self {
        Dist::Uniform { lo: 0.0, hi: 1.0 }
    }
}

impl Dist {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Dist::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Dist::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            Dist::LogUniform { lo, hi } => {
                (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
            }
        }
    }
}

impl FromStr for Dist {
    type Err = Error;

    /// Accepts `uniform`, `uniform:LO:HI`, `exp`, `exp:RATE`, `loguniform:LO:HI`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |k: usize| -> Result<f64> {
            parts[k]
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number in distribution '{s}'")))
        };
        let d = match (parts[0], parts.len()) {
            ("uniform", 1) => Dist::default(),
            ("uniform", 3) => Dist::Uniform { lo: num(1)?, hi: num(2)? },
            ("exp", 1) => Dist::Exponential { rate: 1.0 },
            ("exp", 2) => Dist::Exponential { rate: num(1)? },
            ("loguniform", 3) => Dist::LogUniform { lo: num(1)?, hi: num(2)? },
            _ => return Err(Error::InvalidInput(format!("unknown distribution '{s}'"))),
        };
        let ok = match d {
            Dist::Uniform { lo, hi } => lo >= 0.0 && hi >= lo && hi.is_finite(),
            Dist::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            Dist::LogUniform { lo, hi } => lo > 0.0 && hi >= lo && hi.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidInput(format!("invalid parameters in distribution '{s}'")));
        }
        Ok(d)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            Dist::Exponential { rate } => write!(f, "exp:{rate}"),
            Dist::LogUniform { lo, hi } => write!(f, "loguniform:{lo}:{hi}"),
        }
    }
}

/// Random instance: prices i.i.d. then sorted descending, every weight other
/// than `u00` i.i.d.
pub fn gen_random(n: usize, m: usize, seed: u64, price_dist: Dist, weight_dist: Dist) -> Instance {
    assert!(n >= 1 && m >= 1, "n and m must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<f64> = (0..n).map(|_| price_dist.sample(&mut rng)).collect();
    let mut q: Vec<f64> = (0..m).map(|_| price_dist.sample(&mut rng)).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    q.sort_by(|a, b| b.total_cmp(a));
    p.insert(0, 0.0);
    q.insert(0, 0.0);
    let mut u = vec![0.0; (n + 1) * (m + 1)];
    for (k, w) in u.iter_mut().enumerate() {
        *w = if k == 0 { 1.0 } else { weight_dist.sample(&mut rng) };
    }
    Instance { n, m, p, q, u }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    m: usize,
    p: Vec<f64>,
    q: Vec<f64>,
    u: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct GeneralFile {
    n: usize,
    m: usize,
    u: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct AssortmentFile {
    x: Vec<usize>,
    y: Vec<usize>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn instance_from_json(text: &str, path: &Path) -> Result<Instance> {
    let f: InstanceFile = serde_json::from_str(text).map_err(|e| Error::parse(path, e.to_string()))?;
    if f.p.len() != f.n || f.q.len() != f.m {
        return Err(Error::parse(
            path,
            format!("field \"p\" needs n={} entries and \"q\" needs m={} entries", f.n, f.m),
        ));
    }
    if f.u.len() != f.n + 1 || f.u.iter().any(|r| r.len() != f.m + 1) {
        return Err(Error::parse(
            path,
            format!("field \"u\" must be a {}x{} array", f.n + 1, f.m + 1),
        ));
    }
    let p = std::iter::once(0.0).chain(f.p).collect();
    let q = std::iter::once(0.0).chain(f.q).collect();
    Instance::new(p, q, f.u)
}

pub fn instance_to_json(inst: &Instance, meta: Option<serde_json::Value>) -> String {
    let f = InstanceFile {
        n: inst.n,
        m: inst.m,
        p: inst.p[1..].to_vec(),
        q: inst.q[1..].to_vec(),
        u: inst.u_rows(),
        meta,
    };
    serde_json::to_string_pretty(&f).expect("instance serializes")
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    instance_from_json(&read_text(path)?, path)
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &instance_to_json(inst, None))
}

pub fn write_instance_with_meta(
    inst: &Instance,
    meta: serde_json::Value,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_text(path.as_ref(), &instance_to_json(inst, Some(meta)))
}

pub fn general_to_json(inst: &GeneralPriceInstance, meta: Option<serde_json::Value>) -> String {
    let f = GeneralFile { n: inst.n, m: inst.m, u: inst.u_rows(), r: inst.r_rows(), meta };
    serde_json::to_string_pretty(&f).expect("instance serializes")
}

pub fn read_general_instance(path: impl AsRef<Path>) -> Result<GeneralPriceInstance> {
    let path = path.as_ref();
    let f: GeneralFile =
        serde_json::from_str(&read_text(path)?).map_err(|e| Error::parse(path, e.to_string()))?;
    if f.u.len() != f.n + 1 || f.r.len() != f.n + 1 {
        return Err(Error::parse(path, "fields \"u\" and \"r\" need n+1 rows"));
    }
    GeneralPriceInstance::new(f.u, f.r)
}

pub fn write_general_instance(
    inst: &GeneralPriceInstance,
    meta: Option<serde_json::Value>,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_text(path.as_ref(), &general_to_json(inst, meta))
}

pub fn read_assortment(path: impl AsRef<Path>, n: usize, m: usize) -> Result<Assortment> {
    let path = path.as_ref();
    let f: AssortmentFile =
        serde_json::from_str(&read_text(path)?).map_err(|e| Error::parse(path, e.to_string()))?;
    Assortment::from_indices(n, m, &f.x, &f.y)
}
