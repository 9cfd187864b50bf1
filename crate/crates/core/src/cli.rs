//! Command-line front end. Tables go out as CSV, everything else as JSON;
//! every artifact carries the seed it was produced with.

use crate::combinat::{
    boarding_time, digit_words_experiment, parse_digit_stream, patience_piles, standardize_weak_lis,
    weak_lis_length, word_limit_cdf, Permutation, Word,
};
use crate::ensembles::{edge_statistic, sample_many, EnsembleSpec};
use crate::error::{Error, Result};
use crate::growth::{
    arctic_statistic, bus_arrivals, jacobi_exponents, sample_aztec, standardize_walker,
    walker_ensemble, WalkerVariant,
};
use crate::kernels::{gap_probability, number_variance, spacing_cdf, spacing_density};
use crate::rng::par_draws;
use crate::specfun::table::{fmt_num, DistributionTable, GridSpec};
use crate::specfun::painleve::solve_painleve_ii;
use crate::specfun::tracy_widom::{
    default_solution, tracy_widom_default, tw_values, DEFAULT_S_START, DEFAULT_TOL,
};
use crate::stats::{ks_distance_lattice, mean, variance};
use crate::verify::{self, Tier, VerifyConfig};
use crate::zeta::{load_zeros, zeta_report, ZetaOptions};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub const SCHEMA: &str = "rmtlab/1";

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "RMTLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rmtlab", version, about = "Random matrix laws and the combinatorial models that share them")]
pub struct Cli {
    /// Master seed; every random draw derives from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tracy–Widom F1, F2, F4 as CSV.
    TwTable(GridArgs),
    /// Sine-kernel gap probability E(0; (-x, x)).
    Gap(RangeArgs),
    /// Nearest-neighbour spacing density and CDF.
    Spacing(RangeArgs),
    /// Sine-kernel number variance.
    Numvar(RangeArgs),
    /// Gaussian ensemble draws: largest eigenvalue and edge statistic.
    SampleEnsemble {
        #[arg(long, default_value_t = 2)]
        beta: u8,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        /// Append the full spectrum to each row.
        #[arg(long)]
        full: bool,
    },
    /// Patience sorting of uniform permutations.
    Patience(McArgs),
    /// Airplane boarding times of uniform queues.
    Boarding(McArgs),
    /// Longest weakly increasing subsequences of random words.
    Words {
        #[arg(long)]
        k: u8,
        #[arg(long)]
        wordlen: usize,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
    },
    /// The word statistic over a file of digits.
    Digits {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        base: u8,
        #[arg(long)]
        wordlen: usize,
    },
    /// Vicious walkers in the random-turns model.
    Walkers {
        /// `one` or `return`.
        #[arg(long)]
        variant: WalkerVariant,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
    },
    /// Aztec diamond tilings and the frozen boundary.
    Aztec {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        draws: usize,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        alpha: f64,
        /// Write every tiling, one domino per line.
        #[arg(long)]
        emit_tilings: Option<PathBuf>,
    },
    /// Non-intersecting Poisson buses.
    Bus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        horizon: f64,
        #[arg(long)]
        route: usize,
        /// Observation site (defaults to mid-route).
        #[arg(long)]
        x: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
    },
    /// Zeta zeros against the sine-kernel predictions.
    Zeta {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        skip: usize,
        /// Bin edges as `start:stop:step`.
        #[arg(long, default_value = "0:3:0.25")]
        bins: String,
    },
    /// Runs the checks of one tier.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 3.0)]
    pub max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, group = "tier")]
    pub quick: bool,
    #[arg(long, group = "tier")]
    pub desk: bool,
    #[arg(long, group = "tier")]
    pub deep: bool,
    /// Limit override `KEY=VALUE`, e.g. `c5.ks_f2=0.05`.
    #[arg(long = "threshold", value_name = "KEY=VALUE")]
    pub thresholds: Vec<String>,
    /// Run only these checks.
    #[arg(long = "only", value_name = "ID")]
    pub only: Vec<String>,
    #[arg(long)]
    pub zeta_file: Option<PathBuf>,
}

/// Contents of `--config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub zeta_file: Option<PathBuf>,
    #[serde(default)]
    pub thresholds: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Process exit status: 0 success, 1 error, 2 a check missed its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success,
    Error,
    ThresholdFailure,
}

impl Exit {
    pub fn code(self) -> u8 {
        match self {
            Exit::Success => 0,
            Exit::Error => 1,
            Exit::ThresholdFailure => 2,
        }
    }
}

/// Sets the global worker count from the config or `RMTLAB_THREADS`.
pub fn init_threads(cfg: &RunConfig) -> Result<()> {
    let env = std::env::var(THREADS_ENV).ok();
    let n = match (env, cfg.threads) {
        (Some(v), _) => Some(v.parse::<usize>().map_err(|_| {
            Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))
        })?),
        (None, t) => t,
    };
    if let Some(n) = n.filter(|&n| n > 0) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn write_out(out: &Option<PathBuf>, stdout: &mut dyn Write, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(Error::from),
    }
}

fn json_body(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn csv_header(command: &str, seed: u64, columns: &str) -> String {
    format!("# {SCHEMA} {command} seed={seed}\n{columns}\n")
}

fn range_points(max: f64, step: f64) -> Result<Vec<f64>> {
    Ok(GridSpec::new(0.0, max, step)?.points())
}

/// Edges from `start:stop:step`.
pub fn parse_bins(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Config(format!("bins '{spec}' must look like start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    Ok(GridSpec::new(v[0], v[1], v[2]).map_err(|_| bad())?.points())
}

fn lattice_summary(l: &[usize], n: usize, table: &DistributionTable) -> Result<serde_json::Value> {
    let z: Vec<f64> = l.iter().map(|&v| standardize_walker(v, n)).collect();
    let ks = ks_distance_lattice(&z, table, standardize_walker(0, n), (n as f64).powf(-1.0 / 6.0))?;
    Ok(json!({
        "mean": mean(&z),
        "variance": variance(&z),
        "reference": table.label.to_string(),
        "ks": ks,
    }))
}

/// Parses arguments, runs, and maps the result onto an exit status.
pub fn main_with(args: impl IntoIterator<Item = String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { Exit::Error } else { Exit::Success };
        }
    };
    match run(cli, stdout, stderr) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            Exit::Error
        }
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Exit> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    init_threads(&cfg)?;
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let out = &cli.out;
    match cli.command {
        Command::TwTable(g) => {
            let grid = GridSpec::new(g.t_min, g.t_max, g.step)?;
            let sol = if grid.t_min >= -10.0 && grid.t_max <= DEFAULT_S_START {
                default_solution()?
            } else if grid.t_min >= -10.0 && grid.t_max <= 12.0 {
                Arc::new(solve_painleve_ii(grid.t_max.max(DEFAULT_S_START), grid.t_min.min(0.0), DEFAULT_TOL)?)
            } else {
                return Err(Error::Range(format!("grid [{}, {}] outside [-10, 12]", grid.t_min, grid.t_max)));
            };
            let mut s = csv_header("tw-table", seed, "t,F1,F2,F4");
            for t in grid.points() {
                let (f1, f2, f4) = tw_values(&sol, t.min(sol.s_start()))?;
                s.push_str(&format!("{},{},{},{}\n", fmt_num(t), fmt_num(f1), fmt_num(f2), fmt_num(f4)));
            }
            write_out(out, stdout, &s)?;
        }
        Command::Gap(r) => {
            let mut s = csv_header("gap", seed, "x,E");
            for x in range_points(r.max, r.step)? {
                s.push_str(&format!("{},{}\n", fmt_num(x), fmt_num(gap_probability(x)?)));
            }
            write_out(out, stdout, &s)?;
        }
        Command::Spacing(r) => {
            let t = spacing_cdf(r.max, r.step)?;
            // density step: a divisor of the output step inside [1e-3, 1e-2]
            let h = (r.step / (r.step / 0.01).ceil()).clamp(1e-3, 1e-2);
            let dens = spacing_density(r.max, h)?;
            let mut s = csv_header("spacing", seed, "u,p,F");
            for i in 0..t.len() {
                let u = t.t(i);
                s.push_str(&format!("{},{},{}\n", fmt_num(u), fmt_num(dens.eval(u)), fmt_num(t.cdf[i])));
            }
            write_out(out, stdout, &s)?;
        }
        Command::Numvar(r) => {
            let mut s = csv_header("numvar", seed, "s,sigma2");
            for x in range_points(r.max, r.step)? {
                // an empty window holds no eigenvalues
                let v = if x == 0.0 { 0.0 } else { number_variance(x)? };
                s.push_str(&format!("{},{}\n", fmt_num(x), fmt_num(v)));
            }
            write_out(out, stdout, &s)?;
        }
        Command::SampleEnsemble { beta, n, draws, full } => {
            let spec = EnsembleSpec::new(beta, n)?;
            let spectra = sample_many(spec, seed, draws)?;
            let mut s = csv_header("sample-ensemble", seed, "draw,lambda_max,edge_statistic");
            if full {
                s.pop();
                for i in 1..=n {
                    s.push_str(&format!(",lambda_{i}"));
                }
                s.push('\n');
            }
            for (i, sp) in spectra.iter().enumerate() {
                let top = sp.values[sp.values.len() - 1];
                s.push_str(&format!("{i},{},{}", fmt_num(top), fmt_num(edge_statistic(sp))));
                if full {
                    for v in &sp.values {
                        s.push(',');
                        s.push_str(&fmt_num(*v));
                    }
                }
                s.push('\n');
            }
            write_out(out, stdout, &s)?;
        }
        Command::Patience(a) => {
            let l = par_draws(seed, a.draws, |rng, _| patience_piles(&Permutation::random(a.n, rng)));
            let summary = lattice_summary(&l, a.n, &*tracy_widom_default(2)?)?;
            let body = json!({
                "schema": SCHEMA, "command": "patience", "seed": seed,
                "n": a.n, "draws": a.draws, "standardized": summary, "piles": l,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Boarding(a) => {
            let b = par_draws(seed, a.draws, |rng, _| boarding_time(&Permutation::random(a.n, rng)))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let summary = lattice_summary(&b, a.n, &*tracy_widom_default(2)?)?;
            let body = json!({
                "schema": SCHEMA, "command": "boarding", "seed": seed,
                "n": a.n, "draws": a.draws, "standardized": summary, "boarding_times": b,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Words { k, wordlen, draws } => {
            let l = par_draws(seed, draws, |rng, _| weak_lis_length(&Word::random(wordlen, k, rng)));
            let z: Vec<f64> = l.iter().map(|&v| standardize_weak_lis(v, wordlen, k as usize)).collect();
            let ks = word_ks(&z, wordlen, k)?;
            let body = json!({
                "schema": SCHEMA, "command": "words", "seed": seed,
                "k": k, "wordlen": wordlen, "draws": draws,
                "mean": mean(&z), "variance": variance(&z), "ks_limit": ks, "lengths": l,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Digits { file, base, wordlen } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let digits = parse_digit_stream(&text)?;
            let sample = digit_words_experiment(&digits, base, wordlen)?;
            let ks = word_ks(&sample.values, wordlen, base)?;
            let body = json!({
                "schema": SCHEMA, "command": "digits", "seed": seed,
                "file": file.display().to_string(), "base": base, "wordlen": wordlen,
                "words": sample.len(), "mean": mean(&sample.values), "ks_limit": ks,
                "standardized": sample.values,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Walkers { variant, n, draws } => {
            let r = walker_ensemble(variant, n, draws, seed)?;
            let beta = match variant {
                WalkerVariant::OneSided => 1,
                WalkerVariant::Returning => 2,
            };
            let summary = lattice_summary(&r.d, n, &*tracy_widom_default(beta)?)?;
            let body = json!({
                "schema": SCHEMA, "command": "walkers", "seed": seed,
                "variant": r.variant, "n": n, "draws": draws, "standardized": summary, "d": r.d,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Aztec { n, draws, alpha, emit_tilings } => {
            let tilings = par_draws(seed, draws, |rng, _| sample_aztec(n, rng))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            if let Some(p) = &emit_tilings {
                let mut s = format!("# {SCHEMA} aztec n={n} seed={seed}\n");
                for (i, t) in tilings.iter().enumerate() {
                    s.push_str(&format!("# tiling {i}\n"));
                    s.push_str(&t.to_lines());
                }
                std::fs::write(p, s).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            }
            let d = if n >= crate::growth::ARCTIC_MIN_ORDER {
                Some(tilings.iter().map(|t| arctic_statistic(t, alpha)).collect::<Result<Vec<_>>>()?)
            } else {
                let _ = writeln!(stderr, "order {n} too small for the boundary statistic; tilings only");
                None
            };
            let body = json!({
                "schema": SCHEMA, "command": "aztec", "seed": seed,
                "n": n, "draws": draws, "alpha": alpha,
                "boundary_mean": d.as_ref().map(|v| mean(v)),
                "boundary_sd": d.as_ref().filter(|v| v.len() > 1).map(|v| variance(v).sqrt()),
                "boundary": d,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Bus { n, horizon, route, x, draws } => {
            let x = x.unwrap_or((route + 2 - n) / 2).max(1);
            let arrivals = bus_arrivals(n, horizon, route, x, draws, seed)?;
            let (a, b) = jacobi_exponents(n, route, x)?;
            let means: Vec<f64> = (0..n).map(|j| mean(&arrivals.iter().map(|v| v[j]).collect::<Vec<_>>())).collect();
            let body = json!({
                "schema": SCHEMA, "command": "bus", "seed": seed,
                "n": n, "horizon": horizon, "route": route, "x": x, "draws": draws,
                "jacobi_exponents": [a, b], "coordinate_means": means, "arrivals": arrivals,
            });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Zeta { file, skip, bins } => {
            let z = load_zeros(&file)?;
            let r = zeta_report(&z, &ZetaOptions { skip, edges: parse_bins(&bins)?, seed, ..ZetaOptions::default() })?;
            let body = json!({ "schema": SCHEMA, "command": "zeta", "seed": seed, "report": r });
            write_out(out, stdout, &json_body(&body))?;
        }
        Command::Verify(v) => return run_verify(v, &cfg, seed, out, stdout, stderr),
    }
    Ok(Exit::Success)
}

fn word_ks(z: &[f64], wordlen: usize, k: u8) -> Result<Option<f64>> {
    if !(2..=4).contains(&k) {
        return Ok(None);
    }
    let table = word_limit_cdf(k as usize, GridSpec::new(-1.0, 8.0, 0.01)?)?;
    let scale = (2.0 * wordlen as f64 / k as f64).sqrt();
    let origin = standardize_weak_lis(0, wordlen, k as usize);
    Ok(Some(ks_distance_lattice(z, &table, origin, 1.0 / scale)?))
}

fn run_verify(
    v: VerifyArgs,
    cfg: &RunConfig,
    seed: u64,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Exit> {
    let tier = if v.quick {
        Tier::Quick
    } else if v.deep {
        Tier::Deep
    } else {
        Tier::Desk
    };
    let mut thresholds = cfg.thresholds.clone();
    for kv in &v.thresholds {
        let (k, val) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("threshold '{kv}' must be KEY=VALUE")))?;
        let val: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("threshold '{kv}' has a non-numeric value")))?;
        thresholds.insert(k.trim().to_string(), val);
    }
    let vc = VerifyConfig { seed, thresholds, zeta_file: v.zeta_file.or_else(|| cfg.zeta_file.clone()) };
    let mut outcomes = Vec::new();
    for c in verify::criteria(tier) {
        if !v.only.is_empty() && !v.only.iter().any(|id| id == c.id) {
            continue;
        }
        let o = verify::run_one(c, &vc, tier);
        let _ = writeln!(stderr, "{} ({:.1} s)", o.line(), o.seconds);
        outcomes.push(o);
    }
    let report = verify::VerifyReport { schema: verify::SCHEMA.into(), tier, seed, outcomes };
    let body = serde_json::to_string_pretty(&report).expect("serializable report") + "\n";
    write_out(out, stdout, &body)?;
    if report.errored() {
        return Ok(Exit::Error);
    }
    let failed: Vec<&str> = report.failed().iter().map(|o| o.id.as_str()).collect();
    if !failed.is_empty() {
        let _ = writeln!(stderr, "failed: {}", failed.join(", "));
        return Ok(Exit::ThresholdFailure);
    }
    Ok(Exit::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Exit, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let all = std::iter::once("rmtlab").chain(args.iter().copied()).map(String::from);
        let x = main_with(all, &mut out, &mut err);
        (x, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn quick_verify_exits_zero() {
        let (x, out, err) = run_args(&["verify", "--quick"]);
        assert_eq!(x, Exit::Success, "{err}");
        let r: verify::VerifyReport = serde_json::from_str(&out).unwrap();
        assert_eq!(r.tier, Tier::Quick);
    }

    #[test]
    fn impossible_threshold_exits_two_and_names_the_check() {
        let (x, _, err) = run_args(&["verify", "--desk", "--only", "c1", "--threshold", "c1.max_abs_diff=1e-20"]);
        assert_eq!(x, Exit::ThresholdFailure);
        assert!(err.contains("failed: c1"), "{err}");
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = run_args(&["--seed", "9", "walkers", "--variant", "return", "--n", "200", "--draws", "60"]);
        let b = run_args(&["--seed", "9", "walkers", "--variant", "return", "--n", "200", "--draws", "60"]);
        assert_eq!(a.0, Exit::Success, "{}", a.2);
        assert_eq!(a.1, b.1);
        let c = run_args(&["--seed", "10", "walkers", "--variant", "return", "--n", "200", "--draws", "60"]);
        assert_ne!(a.1, c.1);
        assert!(a.1.contains("\"seed\": 9"));
    }

    #[test]
    fn csv_tables_record_the_seed() {
        let (x, out, _) = run_args(&["--seed", "3", "numvar", "--max", "1", "--step", "0.5"]);
        assert_eq!(x, Exit::Success);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "# rmtlab/1 numvar seed=3");
        assert_eq!(lines[1], "s,sigma2");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[2], "0,0");
    }

    #[test]
    fn tw_table_columns() {
        let (x, out, _) = run_args(&["tw-table", "--t-min", "-2", "--t-max", "0", "--step", "1"]);
        assert_eq!(x, Exit::Success);
        let row: Vec<f64> = out.lines().nth(4).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row[0], 0.0);
        assert!(row[1] < row[2] && row[2] < row[3]);
    }

    #[test]
    fn bad_input_exits_one() {
        assert_eq!(run_args(&["walkers", "--variant", "sideways", "--n", "5"]).0, Exit::Error);
        assert_eq!(run_args(&["sample-ensemble", "--beta", "3", "--n", "10"]).0, Exit::Error);
        assert_eq!(run_args(&["zeta", "--file", "/nonexistent/zeros.txt"]).0, Exit::Error);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(toml::from_str::<RunConfig>("seed = 1\nsede = 2\n").is_err());
        let c: RunConfig = toml::from_str("seed = 4\n[thresholds]\n\"c5.ks_f2\" = 0.05\n").unwrap();
        assert_eq!(c.seed, Some(4));
        assert_eq!(c.thresholds["c5.ks_f2"], 0.05);
    }

    #[test]
    fn example_config_loads() {
        let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/rmtlab.example.toml");
        let c = RunConfig::load(&p).unwrap();
        assert_eq!(c.seed, Some(0));
        assert_eq!(c.thresholds["c13.spacing_ks"], 0.05);
    }

    #[test]
    fn spacing_density_column_at_coarse_step() {
        let (x, out, err) = run_args(&["spacing", "--max", "1", "--step", "0.05"]);
        assert_eq!(x, Exit::Success, "{err}");
        let rows: Vec<Vec<f64>> =
            out.lines().skip(2).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
        assert!(rows[0][1].abs() < 1e-6);
        // small-u behaviour p(u) ~ (pi^2 / 3) u^2
        let p = rows[1][1];
        assert!((p / (std::f64::consts::PI.powi(2) / 3.0 * 0.0025) - 1.0).abs() < 0.01, "{p}");
    }

    #[test]
    fn bins_parse() {
        assert_eq!(parse_bins("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_bins("0:1").is_err());
        assert!(parse_bins("1:0:0.5").is_err());
    }
}
