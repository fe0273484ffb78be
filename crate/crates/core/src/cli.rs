//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::aro::aro_best;
use crate::bench::{run_experiment, summary_table, write_results, ExperimentConfig, Method};
use crate::error::{Error, Result};
use crate::hardness::{
    aro_worst_record, bdks_capacitated_record, bdks_generalprice_record, gap_record,
    max_dicut_record, Produced,
};
use crate::instance::{
    gen_random, read_instance, write_general_instance, write_instance_with_meta, Dist,
};
use crate::lp::{build_lp, random_round, solve_lp};
use crate::oracle::{brute_force, BipartiteGraph, WeightedDigraph};
use crate::rounding::{
    check_certificate, gap_eps_solve, grid_search_thresholds, preset_thresholds, round_best,
    DualCertificate, DEFAULT_CAP,
};

#[derive(Parser, Debug)]
#[command(name = "mvmnl", version, about = "Two-category multivariate MNL assortment toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "uniform:0:1")]
        price_dist: Dist,
        #[arg(long, default_value = "uniform:0:1")]
        weight_dist: Dist,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance with one method.
    Solve {
        #[arg(long, value_enum)]
        method: SolveMethod,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Seed for the random-rounding baseline.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the LP model in text form.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
        /// Write the scaled LP solution as JSON.
        #[arg(long)]
        lp_json: Option<PathBuf>,
    },
    /// Run a seeded batch experiment.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "25")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_value = "aro,k4,k6,gapeps,rr")]
        methods: Vec<Method>,
        #[arg(long, default_value = "uniform:0:1")]
        price_dist: Dist,
        #[arg(long, default_value = "uniform:0:10")]
        weight_dist: Dist,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Write zeros in the time columns so reruns give identical files.
        #[arg(long)]
        no_timing: bool,
    },
    /// Check a dual certificate file.
    VerifyCertificate { file: PathBuf },
    /// Grid search over threshold vectors.
    SearchThresholds {
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an instance from a reduction or a worst-case family.
    Reduce {
        #[arg(long, value_enum)]
        from: Reduction,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        kappa: Option<usize>,
        /// Parameter M of the gap and ARO families.
        #[arg(long = "M", alias = "big-m")]
        big_m: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMethod {
    Lp,
    Brute,
    Aro,
    K4,
    K6,
    Gapeps,
    Rr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reduction {
    Maxdicut,
    BdksCap,
    BdksGp,
    Gap,
    AroWorst,
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 on a
/// usage error, 2 on a solver or validation failure.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required for this reduction")))
}

fn sidecar(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.record.json"))
}

fn run(cmd: Command, out: &mut impl Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::InvalidInput(e.to_string());
    match cmd {
        Command::Gen { n, m, seed, price_dist, weight_dist, out: path } => {
            if n == 0 || m == 0 {
                return Err(Error::InvalidInput("n and m must be positive".into()));
            }
            let inst = gen_random(n, m, seed, price_dist, weight_dist);
            let meta = json!({
                "seed": seed,
                "price_dist": price_dist.to_string(),
                "weight_dist": weight_dist.to_string(),
            });
            write_instance_with_meta(&inst, meta, &path)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
        }
        Command::Solve { method, instance, eps, cap, seed, dump_lp, lp_json } => {
            let inst = read_instance(&instance)?;
            if let Some(p) = dump_lp {
                std::fs::write(&p, build_lp(&inst).to_lp_text()).map_err(|e| Error::io(&p, e))?;
            }
            let sol = solve_lp(&inst)?;
            if let Some(p) = lp_json {
                let text = serde_json::to_string_pretty(&sol.to_json()).expect("json");
                std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
            }
            let (assortment, value) = match method {
                SolveMethod::Lp => {
                    let a = sol.support();
                    let v = inst.revenue(&a)?;
                    (a, v)
                }
                SolveMethod::Brute => brute_force(&inst)?,
                SolveMethod::Aro => {
                    let r = aro_best(&inst);
                    (r.assortment, r.value)
                }
                SolveMethod::K4 | SolveMethod::K6 => {
                    let k = if matches!(method, SolveMethod::K4) { 4 } else { 6 };
                    let r = round_best(&inst, &sol, &preset_thresholds(k)?.0)?;
                    (r.assortment, r.value)
                }
                SolveMethod::Gapeps => {
                    let r = gap_eps_solve(&inst, &sol, eps, cap)?;
                    (r.assortment, r.value)
                }
                SolveMethod::Rr => {
                    let a = random_round(&sol, seed);
                    let v = inst.revenue(&a)?;
                    (a, v)
                }
            };
            let alpha = if sol.r_star > 0.0 { value / sol.r_star } else { 1.0 };
            let report = json!({
                "assortment": assortment.to_json(),
                "value": value,
                "alpha": alpha,
                "r_star": sol.r_star,
                "lp_integral": sol.is_integral(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("json")).map_err(io)?;
        }
        Command::Bench {
            sizes,
            reps,
            seed,
            eps,
            methods,
            price_dist,
            weight_dist,
            out: path,
            cap,
            no_timing,
        } => {
            let cfg = ExperimentConfig {
                sizes,
                replicates: reps,
                seed,
                eps,
                methods,
                price_dist,
                weight_dist,
                cap,
                timing: !no_timing,
                out: Some(path.clone()),
            };
            let (rows, summary) = run_experiment(&cfg)?;
            let files = write_results(&rows, &summary, &path)?;
            write!(out, "{}", summary_table(&summary)).map_err(io)?;
            for f in files {
                writeln!(out, "wrote {}", f.display()).map_err(io)?;
            }
        }
        Command::VerifyCertificate { file } => {
            let cert = DualCertificate::read(&file)?;
            let report = check_certificate(&cert);
            match report.ratio {
                Some(r) => writeln!(out, "PASS ratio={r:.6}").map_err(io)?,
                None => {
                    writeln!(out, "FAIL").map_err(io)?;
                    for v in &report.violations {
                        writeln!(out, "  {v}").map_err(io)?;
                    }
                    return Ok(2);
                }
            }
        }
        Command::SearchThresholds { k, step, out: path } => {
            let res = grid_search_thresholds(k, step)?;
            writeln!(out, "ratio={:.6} evaluated={}", res.ratio, res.evaluated).map_err(io)?;
            writeln!(out, "{}", res.certificate.to_json()).map_err(io)?;
            if let Some(p) = path {
                res.certificate.write(&p)?;
            }
        }
        Command::Reduce { from, graph, t, kappa, big_m, out: path } => {
            let record = match from {
                Reduction::Maxdicut => {
                    let g = WeightedDigraph::read(need(graph, "graph")?)?;
                    max_dicut_record(&g, need(t, "t")?)?
                }
                Reduction::BdksCap => {
                    let g = BipartiteGraph::read(need(graph, "graph")?)?;
                    bdks_capacitated_record(&g, need(kappa, "kappa")?)?
                }
                Reduction::BdksGp => {
                    let g = BipartiteGraph::read(need(graph, "graph")?)?;
                    bdks_generalprice_record(&g, need(kappa, "kappa")?)?
                }
                Reduction::Gap => gap_record(need(big_m, "M")?)?,
                Reduction::AroWorst => aro_worst_record(need(big_m, "M")?)?,
            };
            let meta = json!({ "reduction": record.reduction });
            match &record.instance {
                Produced::Standard(inst) => write_instance_with_meta(inst, meta, &path)?,
                Produced::General(inst) => write_general_instance(inst, Some(meta), &path)?,
            }
            let side = sidecar(&path);
            std::fs::write(&side, record.to_json()).map_err(|e| Error::io(&side, e))?;
            writeln!(out, "wrote {} and {}", path.display(), side.display()).map_err(io)?;
        }
    }
    Ok(0)
}
