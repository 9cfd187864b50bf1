//! Estimators and goodness-of-fit statistics.

use crate::error::{range_err, Error, Result};
use crate::rng::StreamRng;
use crate::specfun::table::DistributionTable;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// A sample of observations with a description of where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    pub values: Vec<f64>,
    pub meta: SampleMeta,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub model: String,
    pub params: Vec<(String, f64)>,
    pub seed: Option<u64>,
}

impl EmpiricalSample {
    pub fn new(values: Vec<f64>, model: &str) -> Self {
        Self { values, meta: SampleMeta { model: model.into(), ..Default::default() } }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.meta.params.push((name.into(), value));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.meta.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Smallest sample accepted by the KS routines.
pub const KS_MIN_SAMPLE: usize = 50;

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(range_err("sample contains non-finite values"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn check_ks_input(v: &[f64], table: &DistributionTable) -> Result<()> {
    if v.len() < KS_MIN_SAMPLE {
        return Err(Error::InsufficientData(format!(
            "KS needs at least {KS_MIN_SAMPLE} observations, got {}",
            v.len()
        )));
    }
    let (lo, hi) = (v[0], v[v.len() - 1]);
    if lo < table.t_min || hi > table.t_max {
        return Err(range_err(format!(
            "sample range [{lo}, {hi}] not covered by the {} grid [{}, {}]",
            table.label, table.t_min, table.t_max
        )));
    }
    Ok(())
}

/// Sup-distance between the empirical CDF of `values` and the
/// interpolated reference CDF.
pub fn ks_distance(values: &[f64], table: &DistributionTable) -> Result<f64> {
    let v = sorted(values)?;
    check_ks_input(&v, table)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let f = table.eval(v[i]);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    Ok(d)
}

/// KS distance for a statistic supported on the lattice
/// `origin + k * spacing`: the empirical and reference CDFs are compared at
/// the lattice points only, where both are defined without the jump
/// ambiguity of a step function against a continuous law.
pub fn ks_distance_lattice(
    values: &[f64],
    table: &DistributionTable,
    origin: f64,
    spacing: f64,
) -> Result<f64> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(range_err(format!("lattice spacing {spacing} must be positive")));
    }
    let v = sorted(values)?;
    check_ks_input(&v, table)?;
    let n = v.len() as f64;
    let k_lo = ((v[0] - origin) / spacing).round() as i64;
    let k_hi = ((v[v.len() - 1] - origin) / spacing).round() as i64;
    let mut d: f64 = 0.0;
    let mut idx = 0;
    for k in k_lo..=k_hi {
        let a = origin + k as f64 * spacing;
        // tolerate rounding in how the sample was mapped onto the lattice
        let cut = a + 1e-9 * spacing;
        while idx < v.len() && v[idx] <= cut {
            idx += 1;
        }
        let f = table.eval(a.clamp(table.t_min, table.t_max));
        d = d.max((idx as f64 / n - f).abs());
    }
    Ok(d)
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("two-sample KS needs nonempty samples".into()));
    }
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Unbiased sample variance.
pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// A sample mapped to mean 0 and sd 1, with the map `z = (x - shift) / scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardized {
    pub sample: EmpiricalSample,
    pub shift: f64,
    pub scale: f64,
}

impl Standardized {
    pub fn invert(&self, z: f64) -> f64 {
        z * self.scale + self.shift
    }
}

pub fn standardize(s: &EmpiricalSample) -> Result<Standardized> {
    if s.len() < 2 {
        return Err(Error::InsufficientData("standardizing needs at least 2 values".into()));
    }
    let shift = mean(&s.values);
    let scale = variance(&s.values).sqrt();
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Numerical("sample has zero spread".into()));
    }
    let mut out = s.clone();
    out.values = s.values.iter().map(|x| (x - shift) / scale).collect();
    out.meta.params.push(("shift".into(), shift));
    out.meta.params.push(("scale".into(), scale));
    Ok(Standardized { sample: out, shift, scale })
}

/// Ordered-pair counts per bin, normalized by the number of points in the
/// window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelationEstimate {
    pub bins: Vec<(f64, f64)>,
    pub counts: Vec<f64>,
    pub window: f64,
    pub points: usize,
    pub pairs: Vec<u64>,
}

/// Half-width of the default window: a quarter of the sample span.
pub fn default_window(points: &[f64]) -> f64 {
    let (lo, hi) = span(points);
    0.25 * (hi - lo)
}

fn span(points: &[f64]) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// Pair-correlation estimate pooled over realizations of unfolded points.
/// In each realization the window is `|x - c| <= window` around the span
/// midpoint `c`; ordered pairs `(i, j)`, `i != j`, with `x_i - x_j` in
/// `[e_k, e_{k+1})` and both points in the window are counted.
pub fn pair_correlation(
    realizations: &[Vec<f64>],
    edges: &[f64],
    window: Option<f64>,
) -> Result<PairCorrelationEstimate> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(range_err("bin edges must be strictly increasing with at least two entries"));
    }
    let reach = edges[0].abs().max(edges[edges.len() - 1].abs());
    let mut pairs = vec![0u64; edges.len() - 1];
    let mut total = 0usize;
    let mut used_window = f64::NAN;
    for pts in realizations {
        if pts.len() < 2 {
            return Err(Error::InsufficientData("realization with fewer than 2 points".into()));
        }
        let (lo, hi) = span(pts);
        let t = window.unwrap_or(0.25 * (hi - lo));
        if !(t > 0.0) || 2.0 * t > hi - lo {
            return Err(range_err(format!(
                "window half-width {t} exceeds half the data span {}",
                0.5 * (hi - lo)
            )));
        }
        used_window = t;
        let c = 0.5 * (lo + hi);
        let mut w: Vec<f64> = pts.iter().copied().filter(|x| (x - c).abs() <= t).collect();
        w.sort_by(f64::total_cmp);
        total += w.len();
        let mut bump = |d: f64| {
            let k = edges.partition_point(|&e| e <= d);
            if k >= 1 && k < edges.len() {
                pairs[k - 1] += 1;
            }
        };
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let d = w[j] - w[i];
                if d >= reach {
                    break;
                }
                bump(d);
                bump(-d);
            }
        }
    }
    if total == 0 {
        return Err(Error::InsufficientData("no points inside the window".into()));
    }
    Ok(PairCorrelationEstimate {
        bins: edges.windows(2).map(|w| (w[0], w[1])).collect(),
        counts: pairs.iter().map(|&p| p as f64 / total as f64).collect(),
        window: used_window,
        points: total,
        pairs,
    })
}

/// Consecutive differences of sorted points.
pub fn spacing_histogram(s: &EmpiricalSample) -> Result<EmpiricalSample> {
    if s.len() < 2 {
        return Err(Error::InsufficientData("spacings need at least 2 points".into()));
    }
    if s.values.windows(2).any(|w| w[1] < w[0]) {
        return Err(range_err("spacings need sorted input"));
    }
    let mut out = EmpiricalSample::new(s.values.windows(2).map(|w| w[1] - w[0]).collect(), "spacings");
    out.meta.params = s.meta.params.clone();
    out.meta.seed = s.meta.seed;
    Ok(out)
}

/// Spacings pooled over realizations.
pub fn pooled_spacings(realizations: &[Vec<f64>]) -> Vec<f64> {
    realizations.iter().flat_map(|r| r.windows(2).map(|w| w[1] - w[0])).collect()
}

/// Empirical number variance: for each length `s`, `windows` intervals
/// `[x, x + s)` per realization with `x` uniform over the admissible range;
/// the variance of the pooled counts.
pub fn number_variance_estimate(
    realizations: &[Vec<f64>],
    s_values: &[f64],
    windows: usize,
    rng: &mut StreamRng,
) -> Result<Vec<f64>> {
    if realizations.is_empty() || windows == 0 {
        return Err(Error::InsufficientData("no realizations or windows".into()));
    }
    let sorted: Vec<Vec<f64>> = realizations.iter().map(|r| sorted(r)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let mut counts = Vec::with_capacity(windows * sorted.len());
        for r in &sorted {
            let (lo, hi) = (r[0], r[r.len() - 1]);
            if !(s > 0.0) || s >= hi - lo {
                return Err(range_err(format!("interval length {s} outside (0, {})", hi - lo)));
            }
            for _ in 0..windows {
                let x = rng.gen_range(lo..hi - s);
                let a = r.partition_point(|&v| v < x);
                let b = r.partition_point(|&v| v < x + s);
                counts.push((b - a) as f64);
            }
        }
        out.push(variance(&counts).max(0.0));
    }
    Ok(out)
}

/// Pearson statistic `sum (O - E)^2 / E`.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(range_err("observed and expected counts differ in length"));
    }
    if expected.iter().any(|&e| !(e > 0.0)) {
        return Err(range_err("expected counts must be positive"));
    }
    Ok(observed.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum())
}

/// Upper tail probability of the chi-square law with `dof` degrees of freedom.
pub fn chi_square_p_value(stat: f64, dof: usize) -> Result<f64> {
    let law = ChiSquared::new(dof as f64).map_err(|e| range_err(e.to_string()))?;
    Ok(law.sf(stat))
}

/// Total-variation distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::specfun::table::{GridSpec, Law};
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    fn uniform_table() -> DistributionTable {
        let g = GridSpec::new(0.0, 1.0, 0.001).unwrap();
        DistributionTable::new(Law::Standardized, g, g.points()).unwrap()
    }

    #[test]
    fn inverse_cdf_sample_is_close() {
        let t = crate::specfun::tracy_widom_default(2).unwrap();
        let mut rng = stream(3, 0);
        let v: Vec<f64> = (0..100_000).map(|_| t.quantile(rng.gen::<f64>()).unwrap()).collect();
        assert!(ks_distance(&v, &t).unwrap() <= 0.01);
    }

    #[test]
    fn disjoint_point_masses() {
        let a = vec![0.0; 60];
        let b = vec![1.0; 60];
        assert_eq!(ks_two_sample(&a, &b).unwrap(), 1.0);
        let t = uniform_table();
        let near_one = vec![1.0; 60];
        assert!((ks_distance(&near_one, &t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_rejects_small_or_uncovered_samples() {
        let t = uniform_table();
        assert!(matches!(ks_distance(&[0.5; 10], &t), Err(Error::InsufficientData(_))));
        let mut v = vec![0.5; 60];
        v.push(1.5);
        assert!(matches!(ks_distance(&v, &t), Err(Error::Range(_))));
    }

    #[test]
    fn lattice_ks_sees_no_jump_gap() {
        // a perfect discretization of the uniform law at spacing 0.1
        let t = uniform_table();
        let v: Vec<f64> = (0..1000).map(|i| ((i / 100 + 1) as f64) * 0.1).collect();
        assert!(ks_distance_lattice(&v, &t, 0.0, 0.1).unwrap() < 1e-9);
        assert!(ks_distance(&v, &t).unwrap() > 0.09);
    }

    #[test]
    fn ks_is_invariant_under_monotone_maps() {
        let t = uniform_table();
        let mut rng = stream(4, 0);
        let v: Vec<f64> = (0..500).map(|_| rng.gen::<f64>()).collect();
        let d = ks_distance(&v, &t).unwrap();
        // x -> 3x + 2 applied to the sample and to the grid
        let g = GridSpec::new(2.0, 5.0, 0.003).unwrap();
        let moved = DistributionTable::new(Law::Standardized, g, t.cdf.clone()).unwrap();
        let w: Vec<f64> = v.iter().map(|x| 3.0 * x + 2.0).collect();
        assert!((d - ks_distance(&w, &moved).unwrap()).abs() < 1e-9);
        // x -> x^2 + x against F(y) = (sqrt(1 + 4y) - 1) / 2 on a fine grid
        let g = GridSpec::new(0.0, 2.0, 1e-4).unwrap();
        let sq = DistributionTable::new(
            Law::Standardized,
            g,
            g.points().into_iter().map(|y| (((1.0 + 4.0 * y).sqrt() - 1.0) / 2.0).min(1.0)).collect(),
        )
        .unwrap();
        let w: Vec<f64> = v.iter().map(|x| x * x + x).collect();
        assert!((d - ks_distance(&w, &sq).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn standardize_round_trip() {
        let s = EmpiricalSample::new(vec![1.0, 4.0, 2.0, 8.0, 5.0], "t");
        let z = standardize(&s).unwrap();
        assert!(mean(&z.sample.values).abs() < 1e-14);
        assert!((variance(&z.sample.values) - 1.0).abs() < 1e-14);
        for (a, b) in s.values.iter().zip(&z.sample.values) {
            assert!((z.invert(*b) - a).abs() < 1e-12);
        }
        let again = standardize(&z.sample).unwrap();
        for (a, b) in z.sample.values.iter().zip(&again.sample.values) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(standardize(&EmpiricalSample::new(vec![2.0; 4], "c")).is_err());
    }

    #[test]
    fn poisson_pair_correlation_is_flat() {
        let mut rng = stream(8, 0);
        let pts: Vec<f64> = (0..100_000).map(|_| rng.gen::<f64>() * 100_000.0).collect();
        let edges: Vec<f64> = (0..=8).map(|k| -2.0 + 0.5 * k as f64).collect();
        let est = pair_correlation(&[pts], &edges, None).unwrap();
        for c in &est.counts {
            assert!((c - 0.5).abs() <= 0.025, "{c}");
        }
    }

    #[test]
    fn pair_correlation_bins_add_and_shift() {
        let mut rng = stream(9, 0);
        let pts: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>() * 2000.0).collect();
        let a = pair_correlation(&[pts.clone()], &[0.0, 0.7, 1.5], Some(400.0)).unwrap();
        let b = pair_correlation(&[pts.clone()], &[0.0, 1.5], Some(400.0)).unwrap();
        assert_eq!(a.pairs[0] + a.pairs[1], b.pairs[0]);
        let shifted: Vec<f64> = pts.iter().map(|x| x + 0.5).collect();
        let c = pair_correlation(&[shifted], &[0.0, 0.7, 1.5], Some(400.0)).unwrap();
        assert_eq!((a.points, &a.pairs), (c.points, &c.pairs));
        assert!(pair_correlation(&[pts], &[0.0, 1.0], Some(1500.0)).is_err());
    }

    #[test]
    fn arithmetic_spacings() {
        let s = EmpiricalSample::new((0..50).map(|i| i as f64).collect(), "grid");
        assert!(spacing_histogram(&s).unwrap().values.iter().all(|&d| d == 1.0));
    }

    #[test]
    fn poisson_number_variance() {
        let mut rng = stream(10, 0);
        let reals: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let mut v: Vec<f64> = (0..1000).map(|_| rng.gen::<f64>() * 1000.0).collect();
                v.sort_by(f64::total_cmp);
                v
            })
            .collect();
        let s_vals = [1.0, 5.0, 10.0];
        let v = number_variance_estimate(&reals, &s_vals, 100, &mut stream(10, 1)).unwrap();
        for (s, est) in s_vals.iter().zip(&v) {
            assert!((est / s - 1.0).abs() < 0.05, "{s}: {est}");
        }
    }

    #[test]
    fn chi_square_helpers() {
        let stat = chi_square_statistic(&[10, 10], &[10.0, 10.0]).unwrap();
        assert_eq!(stat, 0.0);
        assert!((chi_square_p_value(3.841458820694124, 1).unwrap() - 0.05).abs() < 1e-9);
        assert!((total_variation(&[0.5, 0.5], &[1.0]) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn estimators_are_deterministic(v in proptest::collection::vec(0.0f64..1.0, 50..200)) {
            let t = uniform_table();
            prop_assert_eq!(ks_distance(&v, &t).unwrap(), ks_distance(&v, &t).unwrap());
            let d = ks_distance(&v, &t).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }
}
