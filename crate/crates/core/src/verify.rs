//! End-to-end checks behind `rmtlab verify` and the acceptance test.
//!
//! Every check records a measured value, its limit and which side of the
//! limit passes. Limits live here and nowhere else; callers may override
//! them by key (`c5.ks_f2 = 0.05`).

use crate::combinat::{
    boarding_time, exact_word_law, involution_counts, lis_length, patience_piles, rsk_first_rows,
    sample_involution, weak_lis_length, word_limit_value, Permutation, Word,
};
use crate::ensembles::{edge_statistic, sample_many, unfold_bulk, EnsembleSpec};
use crate::error::{Error, Result};
use crate::growth::{
    arctic_statistic, bus_arrivals, enumerate_aztec, enumerate_walks, jacobi_exponents,
    jacobi_metropolis, replay_walk, sample_aztec, standardize_walker, walk_from_tableau,
    walker_ensemble, WalkerVariant,
};
use crate::kernels::{
    airy_det, number_variance, pair_correlation_integral, spacing_cdf_default,
};
use crate::rng::{par_draws, stream, subseed};
use crate::specfun::table::{DistributionTable, GridSpec};
use crate::specfun::tracy_widom::{default_solution, tracy_widom_default, tw_values};
use crate::stats::{
    chi_square_p_value, chi_square_statistic, ks_distance, ks_distance_lattice, ks_two_sample,
    mean, number_variance_estimate, pair_correlation, pooled_spacings, total_variation, variance,
};
use crate::zeta::{load_zeros, zeta_report, ZetaOptions};
use num_traits::ToPrimitive;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::time::Instant;

pub const SCHEMA: &str = "rmtlab.verify/1";

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Deep runs multiply upper limits by this factor and draw counts by
/// [`DEEP_DRAW_FACTOR`].
pub const DEEP_TIGHTEN: f64 = 0.75;
pub const DEEP_DRAW_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Quick,
    Desk,
    Deep,
}

impl std::str::FromStr for Tier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Tier::Quick),
            "desk" => Ok(Tier::Desk),
            "deep" => Ok(Tier::Deep),
            _ => Err(Error::Config(format!("unknown tier '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub key: String,
    pub value: f64,
    pub limit: f64,
    pub sense: Sense,
    pub passed: bool,
}

fn short(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else if v.abs() < 1e-3 {
        format!("{v:.3e}")
    } else {
        format!("{v:.6}")
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let op = match self.sense {
            Sense::AtMost => "<=",
            Sense::AtLeast => ">=",
        };
        write!(f, "{}={} ({op} {})", self.key, short(self.value), short(self.limit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: String,
    pub title: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub note: Option<String>,
    /// Wall time; kept out of reports so they stay reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

impl Outcome {
    /// One line: `PASS c5 patience vs F2: c5.ks_f2=... (<= 0.06)`.
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Error => "ERROR",
        };
        let mut s = format!("{tag} {} {}", self.id, self.title);
        let parts: Vec<String> = self.checks.iter().map(|c| c.to_string()).collect();
        if !parts.is_empty() {
            s.push_str(": ");
            s.push_str(&parts.join(", "));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!(" [{n}]"));
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replacement limits keyed by check name.
    #[serde(default)]
    pub thresholds: BTreeMap<String, f64>,
    /// Zero table for the zeta criterion; skipped when absent.
    #[serde(default)]
    pub zeta_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub tier: Tier,
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
}

impl VerifyReport {
    pub fn errored(&self) -> bool {
        self.outcomes.iter().any(|o| o.status == Status::Error)
    }

    pub fn failed(&self) -> Vec<&Outcome> {
        self.outcomes.iter().filter(|o| o.status == Status::Fail).collect()
    }
}

/// A runnable check: id, title, runtime budget in seconds, body.
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub budget_secs: f64,
    run: fn(&mut Ctx) -> Result<()>,
}

pub struct Ctx<'a> {
    cfg: &'a VerifyConfig,
    tier: Tier,
    id: &'static str,
    checks: Vec<Check>,
    note: Option<String>,
    skipped: bool,
}

impl Ctx<'_> {
    fn seed(&self, tag: &str) -> u64 {
        subseed(self.cfg.seed, &format!("{}/{tag}", self.id))
    }

    fn draws(&self, n: usize) -> usize {
        if self.tier == Tier::Deep {
            n * DEEP_DRAW_FACTOR
        } else {
            n
        }
    }

    fn push(&mut self, name: &str, value: f64, limit: f64, sense: Sense) {
        let key = format!("{}.{name}", self.id);
        let mut limit = limit;
        if self.tier == Tier::Deep && sense == Sense::AtMost {
            limit *= DEEP_TIGHTEN;
        }
        if let Some(&l) = self.cfg.thresholds.get(&key) {
            limit = l;
        }
        let passed = match sense {
            Sense::AtMost => value <= limit,
            Sense::AtLeast => value >= limit,
        };
        self.checks.push(Check { key, value, limit, sense, passed });
    }

    fn at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, limit, Sense::AtMost);
    }

    fn at_least(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, limit, Sense::AtLeast);
    }

    /// Exact agreement: the number of mismatches must be zero.
    fn exact(&mut self, name: &str, mismatches: usize) {
        self.push(name, mismatches as f64, 0.0, Sense::AtMost);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.note = Some(s.into());
    }
}

pub fn run_one(c: &Criterion, cfg: &VerifyConfig, tier: Tier) -> Outcome {
    let start = Instant::now();
    let mut ctx = Ctx { cfg, tier, id: c.id, checks: Vec::new(), note: None, skipped: false };
    let res = (c.run)(&mut ctx);
    let status = match &res {
        Err(_) => Status::Error,
        Ok(()) if ctx.skipped => Status::Skip,
        Ok(()) if ctx.checks.iter().all(|k| k.passed) => Status::Pass,
        Ok(()) => Status::Fail,
    };
    let note = match res {
        Err(e) => Some(e.to_string()),
        Ok(()) => ctx.note,
    };
    Outcome {
        id: c.id.into(),
        title: c.title.into(),
        status,
        checks: ctx.checks,
        note,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn criteria(tier: Tier) -> &'static [Criterion] {
    match tier {
        Tier::Quick => QUICK,
        Tier::Desk | Tier::Deep => DESK,
    }
}

/// Runs every criterion of the tier in order, calling `progress` after each.
pub fn run_tier(cfg: &VerifyConfig, tier: Tier, mut progress: impl FnMut(&Outcome)) -> VerifyReport {
    let outcomes = criteria(tier)
        .iter()
        .map(|c| {
            let o = run_one(c, cfg, tier);
            progress(&o);
            o
        })
        .collect();
    VerifyReport { schema: SCHEMA.into(), tier, seed: cfg.seed, outcomes }
}

pub fn find(id: &str) -> Option<&'static Criterion> {
    QUICK.iter().chain(DESK.iter()).find(|c| c.id == id)
}

// ---------------------------------------------------------------------------
// helpers

/// `(l - 2 sqrt(n)) / n^{1/6}` for integer statistics, with the lattice
/// the standardized values live on.
fn edge_scaled(l: &[usize], n: usize) -> (Vec<f64>, f64, f64) {
    let z: Vec<f64> = l.iter().map(|&v| standardize_walker(v, n)).collect();
    let origin = standardize_walker(0, n);
    let spacing = (n as f64).powf(-1.0 / 6.0);
    (z, origin, spacing)
}

fn standardized_tw(beta: u8) -> Result<DistributionTable> {
    tracy_widom_default(beta)?.standardized(GridSpec::new(-8.0, 8.0, 0.005)?)
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

fn involution_numbers(n: usize) -> Vec<u64> {
    involution_counts(n).iter().map(|c| c.to_u64().expect("small count")).collect()
}

// ---------------------------------------------------------------------------
// quick tier

const QUICK: &[Criterion] = &[
    Criterion { id: "q1", title: "worked patience and boarding example", budget_secs: 1.0, run: q1 },
    Criterion { id: "q2", title: "Aztec counts for n <= 3", budget_secs: 1.0, run: q2 },
    Criterion { id: "q3", title: "walk counts and the figure walk", budget_secs: 1.0, run: q3 },
    Criterion { id: "q4", title: "same seed gives the same draws", budget_secs: 2.0, run: q4 },
    Criterion { id: "q5", title: "F2 table is a distribution", budget_secs: 5.0, run: q5 },
];

fn q1(c: &mut Ctx) -> Result<()> {
    let p = Permutation::new(vec![3, 4, 1, 5, 6, 2])?;
    let got = [patience_piles(&p), lis_length(&p), rsk_first_rows(&p).0, boarding_time(&p)?];
    c.exact("mismatches", got.iter().filter(|&&v| v != 4).count());
    Ok(())
}

fn q2(c: &mut Ctx) -> Result<()> {
    let bad = (1..=3usize)
        .filter(|&n| enumerate_aztec(n).map(|t| t.len()).ok() != Some(1 << (n * (n + 1) / 2)))
        .count();
    c.exact("mismatches", bad);
    Ok(())
}

fn q3(c: &mut Ctx) -> Result<()> {
    let inv = involution_numbers(6);
    let mut bad = 0;
    for (n, &want) in inv.iter().enumerate().skip(1) {
        if enumerate_walks(WalkerVariant::OneSided, n)? != want {
            bad += 1;
        }
    }
    let walk = walk_from_tableau(&[vec![1, 3], vec![2], vec![4]])?;
    if replay_walk(WalkerVariant::OneSided, &walk)? != 2 {
        bad += 1;
    }
    c.exact("mismatches", bad);
    Ok(())
}

fn q4(c: &mut Ctx) -> Result<()> {
    let spec = EnsembleSpec::new(2, 20)?;
    let a = sample_many(spec, c.seed("gue"), 8)?;
    let b = sample_many(spec, c.seed("gue"), 8)?;
    let w1 = walker_ensemble(WalkerVariant::Returning, 100, 16, c.seed("walk"))?;
    let w2 = walker_ensemble(WalkerVariant::Returning, 100, 16, c.seed("walk"))?;
    c.exact("mismatches", usize::from(a != b) + usize::from(w1 != w2));
    Ok(())
}

fn q5(c: &mut Ctx) -> Result<()> {
    let t = tracy_widom_default(2)?;
    c.at_most("left_tail", t.cdf[0], 1e-10);
    c.at_most("right_gap", 1.0 - t.cdf[t.len() - 1], 1e-10);
    Ok(())
}

// ---------------------------------------------------------------------------
// desk tier

const DESK: &[Criterion] = &[
    Criterion { id: "c1", title: "F2 from Painleve II vs Airy determinant", budget_secs: 30.0, run: c1 },
    Criterion { id: "c2", title: "F2 mean and variance", budget_secs: 10.0, run: c2 },
    Criterion { id: "c3", title: "sine-kernel number variance at s = 50", budget_secs: 5.0, run: c3 },
    Criterion { id: "c4", title: "identity chain on S7", budget_secs: 10.0, run: c4 },
    Criterion { id: "c5", title: "patience sorting vs F2", budget_secs: 120.0, run: c5 },
    Criterion { id: "c6", title: "GUE largest eigenvalue vs F2", budget_secs: 600.0, run: c6 },
    Criterion { id: "c7", title: "GUE bulk statistics", budget_secs: 600.0, run: c7 },
    Criterion { id: "c8", title: "involution rows vs F1 and F4", budget_secs: 180.0, run: c8 },
    Criterion { id: "c9", title: "vicious walkers", budget_secs: 180.0, run: c9 },
    Criterion { id: "c10", title: "Aztec diamond", budget_secs: 1200.0, run: c10 },
    Criterion { id: "c11", title: "random words with two letters", budget_secs: 120.0, run: c11 },
    Criterion { id: "c12", title: "bus arrivals vs Jacobi ensemble", budget_secs: 300.0, run: c12 },
    Criterion { id: "c13", title: "zeta zeros vs sine kernel", budget_secs: 120.0, run: c13 },
];

fn c1(c: &mut Ctx) -> Result<()> {
    let sol = default_solution()?;
    let mut worst: f64 = 0.0;
    for t in [-6.0, -4.0, -2.0, 0.0, 2.0, 4.0] {
        let (_, f2, _) = tw_values(&sol, t)?;
        worst = worst.max((f2 - airy_det(t)?).abs());
    }
    c.at_most("max_abs_diff", worst, 1e-6);
    Ok(())
}

fn c2(c: &mut Ctx) -> Result<()> {
    let t = tracy_widom_default(2)?;
    c.at_most("mean_err", (t.mean() + 1.7711).abs(), 0.005);
    c.at_most("var_err", (t.variance() - 0.8132).abs(), 0.005);
    Ok(())
}

fn c3(c: &mut Ctx) -> Result<()> {
    let pi = std::f64::consts::PI;
    let asym = ((100.0 * pi).ln() + EULER_GAMMA + 1.0) / (pi * pi);
    c.at_most("abs_err", (number_variance(50.0)? - asym).abs(), 0.02);
    Ok(())
}

fn c4(c: &mut Ctx) -> Result<()> {
    let mut v: Vec<u32> = (1..=7).collect();
    let (mut seen, mut bad) = (0usize, 0usize);
    loop {
        let p = Permutation::new(v.clone())?;
        let l = lis_length(&p);
        // boarding_time itself fails if the shadow-line count disagrees
        let ok = matches!(boarding_time(&p), Ok(b) if b == l)
            && patience_piles(&p) == l
            && rsk_first_rows(&p).0 == l;
        bad += usize::from(!ok);
        seen += 1;
        if !next_permutation(&mut v) {
            break;
        }
    }
    c.exact("mismatches", bad);
    c.exact("missing", 5040usize.abs_diff(seen));
    Ok(())
}

fn c5(c: &mut Ctx) -> Result<()> {
    let n = 4096;
    let draws = c.draws(20_000);
    let l = par_draws(c.seed("n4096"), draws, |rng, _| patience_piles(&Permutation::random(n, rng)));
    let (z, origin, spacing) = edge_scaled(&l, n);
    let ks = ks_distance_lattice(&z, &*tracy_widom_default(2)?, origin, spacing)?;
    c.at_most("ks_f2", ks, 0.06);
    let q = par_draws(c.seed("n52"), draws, |rng, _| patience_piles(&Permutation::random(52, rng)) as f64);
    c.at_most("mean52_err", (mean(&q) - 12.0).abs(), 0.5);
    Ok(())
}

fn c6(c: &mut Ctx) -> Result<()> {
    let spec = EnsembleSpec::new(2, 200)?;
    let sp = sample_many(spec, c.seed("gue"), c.draws(5000))?;
    let s: Vec<f64> = sp.iter().map(edge_statistic).collect();
    c.at_most("ks_f2", ks_distance(&s, &*tracy_widom_default(2)?)?, 0.05);
    Ok(())
}

fn c7(c: &mut Ctx) -> Result<()> {
    let spec = EnsembleSpec::new(2, 400)?;
    let sp = sample_many(spec, c.seed("gue"), c.draws(200))?;
    let pts = sp
        .iter()
        .map(|s| unfold_bulk(s, 0.25).map(|u| u.values))
        .collect::<Result<Vec<_>>>()?;
    let spacings = pooled_spacings(&pts);
    c.at_most("ks_spacing", ks_distance(&spacings, &*spacing_cdf_default()?)?, 0.05);

    let edges: Vec<f64> = (0..=12).map(|k| 0.25 * k as f64).collect();
    let est = pair_correlation(&pts, &edges, None)?;
    let mut worst: f64 = 0.0;
    for (&(a, b), &o) in est.bins.iter().zip(&est.counts) {
        worst = worst.max((o - pair_correlation_integral(a, b)?).abs());
    }
    c.at_most("pair_max_delta", worst, 0.05);

    let s_values: Vec<f64> = (1..=10).map(f64::from).collect();
    let est = number_variance_estimate(&pts, &s_values, 50, &mut stream(c.seed("numvar"), 0))?;
    let mut rel: f64 = 0.0;
    for (&s, &v) in s_values.iter().zip(&est) {
        rel = rel.max((v / number_variance(s)? - 1.0).abs());
    }
    c.at_most("numvar_rel_err", rel, 0.10);
    Ok(())
}

fn c8(c: &mut Ctx) -> Result<()> {
    let n = 4096;
    let rows = par_draws(c.seed("inv"), c.draws(20_000), |rng, _| rsk_first_rows(&sample_involution(n, rng)));
    let r1: Vec<usize> = rows.iter().map(|r| r.0).collect();
    let r2: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let (z1, o, h) = edge_scaled(&r1, n);
    c.at_most("ks_row1_f1", ks_distance_lattice(&z1, &*tracy_widom_default(1)?, o, h)?, 0.07);
    let (z2, o, h) = edge_scaled(&r2, n);
    c.at_most("ks_row2_f4", ks_distance_lattice(&z2, &*tracy_widom_default(4)?, o, h)?, 0.09);
    Ok(())
}

fn c9(c: &mut Ctx) -> Result<()> {
    let inv = involution_numbers(6);
    let mut bad = 0;
    for (n, &want) in inv.iter().enumerate().skip(1) {
        bad += usize::from(enumerate_walks(WalkerVariant::OneSided, n)? != want);
    }
    c.exact("count_mismatches", bad);
    let n = 4096;
    let draws = c.draws(20_000);
    let one = walker_ensemble(WalkerVariant::OneSided, n, draws, c.seed("one"))?;
    let (z, o, h) = edge_scaled(&one.d, n);
    c.at_most("ks_one_sided_f1", ks_distance_lattice(&z, &*tracy_widom_default(1)?, o, h)?, 0.07);
    let ret = walker_ensemble(WalkerVariant::Returning, n, draws, c.seed("return"))?;
    let (z, o, h) = edge_scaled(&ret.d, n);
    c.at_most("ks_returning_f2", ks_distance_lattice(&z, &*tracy_widom_default(2)?, o, h)?, 0.06);
    Ok(())
}

fn c10(c: &mut Ctx) -> Result<()> {
    let bad = (1..=3usize)
        .filter(|&n| enumerate_aztec(n).map(|t| t.len()).ok() != Some(1 << (n * (n + 1) / 2)))
        .count();
    c.exact("count_mismatches", bad);

    let all = enumerate_aztec(2)?;
    let index: HashMap<_, usize> = all.iter().enumerate().map(|(i, t)| (t.key(), i)).collect();
    let draws = c.draws(100_000);
    let keys = par_draws(c.seed("n2"), draws, |rng, _| sample_aztec(2, rng).map(|t| t.key()));
    let mut counts = vec![0u64; all.len()];
    for k in keys {
        let i = index.get(&k?).ok_or_else(|| Error::Logic("sampled tiling not in the enumeration".into()))?;
        counts[*i] += 1;
    }
    let expected = vec![draws as f64 / all.len() as f64; all.len()];
    let p = chi_square_p_value(chi_square_statistic(&counts, &expected)?, all.len() - 1)?;
    c.at_least("chi2_p", p, 1e-3);

    let n = 256;
    let d = par_draws(c.seed("n256"), c.draws(2000), |rng, _| {
        arctic_statistic(&sample_aztec(n, rng)?, 0.5)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (m, s) = (mean(&d), variance(&d).sqrt());
    let z: Vec<f64> = d.iter().map(|v| (v - m) / s).collect();
    // the frozen edge moves in steps of 2 cells along the diagonal
    let step = std::f64::consts::SQRT_2 / n as f64 / s;
    let ks = ks_distance_lattice(&z, &standardized_tw(2)?, z[0], step)?;
    c.at_most("ks_standardized_f2", ks, 0.10);
    c.note(format!("mean offset {m:.4}, sd {s:.4}"));
    Ok(())
}

fn c11(c: &mut Ctx) -> Result<()> {
    let (k, n) = (2u8, 12usize);
    let exact = exact_word_law(k, n)?;
    let mut p = vec![0.0; n + 1];
    for (v, prob) in exact {
        // invert the standardization back to the integer length
        let l = (v * (2.0 * n as f64 / k as f64).sqrt() + n as f64 / k as f64).round() as usize;
        p[l] += prob;
    }
    let draws = c.draws(100_000);
    let l = par_draws(c.seed("words"), draws, |rng, _| weak_lis_length(&Word::random(n, k, rng)));
    let mut q = vec![0.0; n + 1];
    for v in l {
        q[v] += 1.0 / draws as f64;
    }
    c.at_most("tv_exact_vs_mc", total_variation(&p, &q), 0.02);

    // independent route: Gaussian pairs projected onto the trace-zero line,
    // weighted by the squared Vandermonde factor (self-normalizing, E = 1)
    let s_values = [0.5, 1.0, 1.5];
    let chunks = 64;
    let per = c.draws(500_000);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    let sums = par_draws(c.seed("mc"), chunks, |rng, _| {
        let mut acc = [0.0; 3];
        for _ in 0..per {
            let t = 0.5 * (normal.sample(rng) - normal.sample(rng));
            let w = 4.0 * t * t;
            for (a, &s) in acc.iter_mut().zip(&s_values) {
                if t.abs() <= s {
                    *a += w;
                }
            }
        }
        acc
    });
    let total = (chunks * per) as f64;
    let mut worst: f64 = 0.0;
    for (i, &s) in s_values.iter().enumerate() {
        let mc = sums.iter().map(|a| a[i]).sum::<f64>() / total;
        worst = worst.max((mc - word_limit_value(k as usize, s)?).abs());
    }
    c.at_most("quadrature_vs_mc", worst, 1e-3);
    Ok(())
}

fn c12(c: &mut Ctx) -> Result<()> {
    let (n, horizon, route, x) = (3, 10.0, 8, 4);
    let draws = c.draws(10_000);
    let bus = bus_arrivals(n, horizon, route, x, draws, c.seed("bus"))?;
    let (a, b) = jacobi_exponents(n, route, x)?;
    let mc = jacobi_metropolis(n, a, b, draws, 200, c.seed("mcmc"))?;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let p: Vec<f64> = bus.iter().map(|v| v[j]).collect();
        let q: Vec<f64> = mc.iter().map(|v| v[j]).collect();
        worst = worst.max(ks_two_sample(&p, &q)?);
    }
    c.at_most("max_coordinate_ks", worst, 0.08);
    Ok(())
}

fn c13(c: &mut Ctx) -> Result<()> {
    let Some(path) = c.cfg.zeta_file.clone() else {
        c.skipped = true;
        c.note("no zero table configured");
        return Ok(());
    };
    let z = load_zeros(&path)?;
    let r = zeta_report(&z, &ZetaOptions { seed: c.seed("shuffle"), ..ZetaOptions::default() })?;
    c.at_most("pair_max_delta", r.max_delta, 0.05);
    c.at_most("spacing_ks", r.spacing_ks, 0.05);
    c.note(format!("{} zeros used, control delta {:.4}", r.zeros_used, r.control_max_delta));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_tier_passes() {
        let r = run_tier(&VerifyConfig::default(), Tier::Quick, |_| {});
        for o in &r.outcomes {
            assert_eq!(o.status, Status::Pass, "{}", o.line());
        }
    }

    #[test]
    fn override_turns_a_pass_into_a_fail() {
        let mut cfg = VerifyConfig::default();
        cfg.thresholds.insert("c1.max_abs_diff".into(), 1e-18);
        let o = run_one(find("c1").unwrap(), &cfg, Tier::Desk);
        assert_eq!(o.status, Status::Fail);
        assert!(o.line().starts_with("FAIL c1"));
    }

    #[test]
    fn missing_zero_table_is_skipped() {
        let o = run_one(find("c13").unwrap(), &VerifyConfig::default(), Tier::Desk);
        assert_eq!(o.status, Status::Skip);
    }

    #[test]
    fn permutations_of_four() {
        let mut v = vec![1, 2, 3, 4];
        let mut k = 1;
        while next_permutation(&mut v) {
            k += 1;
        }
        assert_eq!(k, 24);
        assert_eq!(v, vec![4, 3, 2, 1]);
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = run_tier(&VerifyConfig::default(), Tier::Quick, |_| {});
        let s = serde_json::to_string(&r).unwrap();
        let back: VerifyReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.outcomes.len(), r.outcomes.len());
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
