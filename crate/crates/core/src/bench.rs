//! Seeded batch experiments comparing the LP-based methods with ARO.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::aro::aro_best;
use crate::error::{Error, Result};
use crate::instance::{gen_random, Dist, Instance};
use crate::lp::{random_round, solve_lp, ScaledLpSolution};
use crate::rounding::{gap_eps_solve, preset_thresholds, round_best, ThresholdSet, DEFAULT_CAP};
use crate::seeds;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Aro,
    K4,
    K6,
    GapEps,
    Rr,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Aro, Method::K4, Method::K6, Method::GapEps, Method::Rr];

    pub fn name(self) -> &'static str {
        match self {
            Method::Aro => "aro",
            Method::K4 => "k4",
            Method::K6 => "k6",
            Method::GapEps => "gapeps",
            Method::Rr => "rr",
        }
    }

    /// Whether the method rounds the LP solution (its alpha is averaged over
    /// non-integral rows only).
    pub fn uses_lp(self) -> bool {
        self != Method::Aro
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub eps: f64,
    pub methods: Vec<Method>,
    pub price_dist: Dist,
    pub weight_dist: Dist,
    pub cap: u64,
    /// Record wall times; with `false` every time column is 0 and output is reproducible byte for byte.
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sizes: vec![25],
            replicates: 500,
            seed: 1,
            eps: 0.1,
            methods: Method::ALL.to_vec(),
            price_dist: Dist::default(),
            weight_dist: Dist::Uniform { lo: 0.0, hi: 10.0 },
            cap: DEFAULT_CAP,
            timing: true,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidInput("replicates must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::InvalidInput("sizes must be positive".into()));
        }
        let k = (1.0 / self.eps).round();
        if !(self.eps > 0.0 && self.eps <= 1.0 && (k * self.eps - 1.0).abs() <= 1e-9) {
            return Err(Error::InvalidEpsilon(self.eps));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidInput("no methods selected".into()));
        }
        Ok(())
    }
}

/// One method's outcome on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodOutcome {
    pub value: Option<f64>,
    pub alpha: Option<f64>,
    pub time: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub r_star: Option<f64>,
    pub lp_integral: Option<bool>,
    pub lp_time: f64,
    /// In the order of the configured methods.
    pub outcomes: Vec<MethodOutcome>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MethodSummary {
    pub mean_alpha: Option<f64>,
    pub min_alpha: Option<f64>,
    /// Rows contributing to the alpha statistics.
    pub rows: usize,
    pub mean_time: f64,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeSummary {
    pub size: usize,
    pub replicates: usize,
    pub lp_failures: usize,
    pub nonintegral: usize,
    pub nonintegral_fraction: f64,
    pub mean_lp_time: f64,
    pub methods: BTreeMap<String, MethodSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub methods: Vec<String>,
    pub sizes: BTreeMap<String, SizeSummary>,
}

struct Solvers {
    k4: ThresholdSet,
    k6: ThresholdSet,
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, if timing { start.elapsed().as_secs_f64() } else { 0.0 })
}

fn run_method(
    method: Method,
    inst: &Instance,
    sol: Option<&ScaledLpSolution>,
    cfg: &ExperimentConfig,
    solvers: &Solvers,
    rr_seed: u64,
) -> MethodOutcome {
    let (res, time): (Result<f64>, f64) = timed(cfg.timing, || {
        if method == Method::Aro {
            return Ok(aro_best(inst).value);
        }
        let sol = sol.ok_or_else(|| Error::InvalidInput("LP solve failed".into()))?;
        match method {
            Method::K4 => round_best(inst, sol, &solvers.k4).map(|r| r.value),
            Method::K6 => round_best(inst, sol, &solvers.k6).map(|r| r.value),
            Method::GapEps => gap_eps_solve(inst, sol, cfg.eps, cfg.cap).map(|r| r.value),
            Method::Rr => inst.revenue(&random_round(sol, rr_seed)),
            Method::Aro => unreachable!(),
        }
    });
    match res {
        Ok(value) => {
            let alpha = sol.map(|s| if s.r_star > 0.0 { value / s.r_star } else { 1.0 });
            MethodOutcome { value: Some(value), alpha, time, error: None }
        }
        Err(e) => MethodOutcome { value: None, alpha: None, time, error: Some(e.to_string()) },
    }
}

fn run_one(cfg: &ExperimentConfig, solvers: &Solvers, size: usize, rep: usize) -> ResultRow {
    let seed = seeds::derive(cfg.seed, &[size as u64, rep as u64]);
    let inst = gen_random(size, size, seed, cfg.price_dist, cfg.weight_dist);
    let (sol, lp_time) = timed(cfg.timing, || solve_lp(&inst));
    let sol = sol.ok();
    let rr_seed = seeds::derive(seed, &[u64::MAX]);
    let outcomes = cfg
        .methods
        .iter()
        .map(|&m| run_method(m, &inst, sol.as_ref(), cfg, solvers, rr_seed))
        .collect();
    ResultRow {
        instance_id: format!("{size}x{size}-{rep}"),
        n: size,
        m: size,
        seed,
        r_star: sol.as_ref().map(|s| s.r_star),
        lp_integral: sol.as_ref().map(|s| s.is_integral()),
        lp_time,
        outcomes,
    }
}

/// Runs every replicate of every size and summarizes per size.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Vec<ResultRow>, Summary)> {
    cfg.validate()?;
    let solvers = Solvers { k4: preset_thresholds(4)?.0, k6: preset_thresholds(6)?.0 };
    let jobs: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&s| (0..cfg.replicates).map(move |r| (s, r)))
        .collect();
    let mut rows: Vec<(usize, usize, ResultRow)> = jobs
        .par_iter()
        .map(|&(s, r)| (s, r, run_one(cfg, &solvers, s, r)))
        .collect();
    rows.sort_by_key(|(s, r, _)| (*s, *r));
    let rows: Vec<ResultRow> = rows.into_iter().map(|t| t.2).collect();
    let summary = summarize(&cfg.methods, &rows);
    Ok((rows, summary))
}

/// Per-size statistics; LP-based methods are averaged over non-integral rows, ARO over all rows.
pub fn summarize(methods: &[Method], rows: &[ResultRow]) -> Summary {
    let mut by_size: BTreeMap<usize, Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        by_size.entry(r.n).or_default().push(r);
    }
    let mut sizes = BTreeMap::new();
    for (size, rs) in by_size {
        let solved: Vec<&&ResultRow> = rs.iter().filter(|r| r.lp_integral.is_some()).collect();
        let nonint = solved.iter().filter(|r| r.lp_integral == Some(false)).count();
        let mut per = BTreeMap::new();
        for (k, &m) in methods.iter().enumerate() {
            let mut s = MethodSummary::default();
            let mut total_time = 0.0;
            let mut alphas = Vec::new();
            for r in &rs {
                let o = &r.outcomes[k];
                total_time += o.time;
                if o.error.is_some() {
                    s.failures += 1;
                }
                let counted = !m.uses_lp() || r.lp_integral == Some(false);
                if let (true, Some(a)) = (counted, o.alpha) {
                    alphas.push(a);
                }
            }
            s.rows = alphas.len();
            if !alphas.is_empty() {
                s.mean_alpha = Some(alphas.iter().sum::<f64>() / alphas.len() as f64);
                s.min_alpha = Some(alphas.iter().copied().fold(f64::INFINITY, f64::min));
            }
            s.mean_time = total_time / rs.len() as f64;
            per.insert(m.name().to_string(), s);
        }
        sizes.insert(
            size.to_string(),
            SizeSummary {
                size,
                replicates: rs.len(),
                lp_failures: rs.len() - solved.len(),
                nonintegral: nonint,
                nonintegral_fraction: if solved.is_empty() {
                    0.0
                } else {
                    nonint as f64 / solved.len() as f64
                },
                mean_lp_time: rs.iter().map(|r| r.lp_time).sum::<f64>() / rs.len() as f64,
                methods: per,
            },
        );
    }
    Summary { methods: methods.iter().map(|m| m.name().to_string()).collect(), sizes }
}

fn header(methods: &[String]) -> Vec<String> {
    let mut h: Vec<String> =
        ["instance_id", "n", "m", "seed", "r_star", "lp_integral"].map(String::from).to_vec();
    for m in methods {
        h.push(format!("value_{m}"));
        h.push(format!("alpha_{m}"));
        h.push(format!("time_{m}"));
    }
    h
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Human-readable per-size table.
pub fn summary_table(summary: &Summary) -> String {
    let mut s = String::new();
    for sz in summary.sizes.values() {
        let _ = writeln!(
            s,
            "size {0}x{0}: {1} replicates, non-integral LP {2} ({3:.2}%), mean LP time {4:.4}s",
            sz.size,
            sz.replicates,
            sz.nonintegral,
            100.0 * sz.nonintegral_fraction,
            sz.mean_lp_time
        );
        let _ = writeln!(s, "  {:<8} {:>10} {:>10} {:>6} {:>12} {:>8}", "method", "mean_a", "min_a", "rows", "mean_time", "fails");
        for m in &summary.methods {
            let ms = &sz.methods[m];
            let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
            let _ = writeln!(
                s,
                "  {:<8} {:>10} {:>10} {:>6} {:>12.6} {:>8}",
                m,
                f(ms.mean_alpha),
                f(ms.min_alpha),
                ms.rows,
                ms.mean_time,
                ms.failures
            );
        }
    }
    s
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

/// Writes the CSV at `path`, plus `<stem>.summary.json` and `<stem>.summary.txt` beside it.
pub fn write_results(rows: &[ResultRow], summary: &Summary, path: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header(&summary.methods)).map_err(|e| csv_err(path, e))?;
    for r in rows {
        let mut rec = vec![
            r.instance_id.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.seed.to_string(),
            opt(r.r_star),
            opt(r.lp_integral),
        ];
        for o in &r.outcomes {
            rec.push(opt(o.value));
            rec.push(opt(o.alpha));
            rec.push(o.time.to_string());
        }
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    let json_path = sibling(path, ".summary.json");
    let text = serde_json::to_string_pretty(summary).expect("summary serializes");
    fs::write(&json_path, text).map_err(|e| Error::io(&json_path, e))?;
    let txt_path = sibling(path, ".summary.txt");
    fs::write(&txt_path, summary_table(summary)).map_err(|e| Error::io(&txt_path, e))?;
    Ok(vec![path.to_path_buf(), json_path, txt_path])
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::parse(path, e.to_string())
}

/// Reads a results CSV back; method columns are inferred from the header.
pub fn read_results(path: impl AsRef<Path>) -> Result<(Vec<String>, Vec<ResultRow>)> {
    let path = path.as_ref();
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let head = rd.headers().map_err(|e| csv_err(path, e))?.clone();
    let methods: Vec<String> =
        head.iter().filter_map(|h| h.strip_prefix("value_")).map(String::from).collect();
    if header(&methods) != head.iter().collect::<Vec<_>>() {
        return Err(Error::parse(path, "unexpected CSV header"));
    }
    let bad = |what: &str| Error::parse(path, format!("bad {what}"));
    let num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad("number"))
        }
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let outcomes = (0..methods.len())
            .map(|k| {
                let base = 6 + 3 * k;
                Ok(MethodOutcome {
                    value: num(&rec[base])?,
                    alpha: num(&rec[base + 1])?,
                    time: num(&rec[base + 2])?.unwrap_or(0.0),
                    error: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(ResultRow {
            instance_id: rec[0].to_string(),
            n: rec[1].parse().map_err(|_| bad("n"))?,
            m: rec[2].parse().map_err(|_| bad("m"))?,
            seed: rec[3].parse().map_err(|_| bad("seed"))?,
            r_star: num(&rec[4])?,
            lp_integral: match &rec[5] {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("lp_integral"))?),
            },
            lp_time: 0.0,
            outcomes,
        });
    }
    Ok((methods, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig { sizes: vec![4, 5], replicates: 6, timing: false, ..Default::default() }
    }

    #[test]
    fn rows_sorted_and_bounded() {
        let (rows, summary) = run_experiment(&small()).unwrap();
        assert_eq!(rows.len(), 12);
        assert_eq!(rows[0].instance_id, "4x4-0");
        assert_eq!(rows[11].instance_id, "5x5-5");
        for r in &rows {
            for o in &r.outcomes {
                let a = o.alpha.unwrap();
                assert!((0.0..=1.0 + 1e-9).contains(&a), "{a}");
            }
        }
        assert_eq!(summary.sizes.len(), 2);
    }

    #[test]
    fn config_validation() {
        let mut c = small();
        c.eps = 0.3;
        assert!(matches!(c.validate(), Err(Error::InvalidEpsilon(_))));
        c.eps = 0.25;
        c.replicates = 0;
        assert!(c.validate().is_err());
        assert_eq!("gapeps".parse::<Method>().unwrap(), Method::GapEps);
        assert!("foo".parse::<Method>().is_err());
    }
}
