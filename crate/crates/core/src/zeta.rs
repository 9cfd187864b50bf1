//! Riemann zeta zero tables: loading, unfolding, and comparison with the
//! sine-kernel statistics.

use crate::error::{range_err, Error, Result};
use crate::kernels::{pair_correlation_integral, spacing_cdf_default};
use crate::rng::stream;
use crate::stats::{ks_distance, pair_correlation, EmpiricalSample};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};
use std::path::Path;

/// Imaginary parts of nontrivial zeros, strictly ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    pub gammas: Vec<f64>,
    pub source: String,
}

impl ZeroTable {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }
}

/// One number per line; blank lines and lines starting with `#` skipped.
pub fn parse_zeros(text: &str, source: &str) -> Result<ZeroTable> {
    let mut gammas: Vec<f64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse { line: lineno, msg: format!("not a number: '{line}'") })?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parse { line: lineno, msg: format!("zero height {v} must be positive") });
        }
        if let Some(&prev) = gammas.last() {
            if v <= prev {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("{v} does not exceed the previous value {prev}"),
                });
            }
        }
        gammas.push(v);
    }
    if gammas.is_empty() {
        return Err(Error::InsufficientData(format!("zero table '{source}' is empty")));
    }
    Ok(ZeroTable { gammas, source: source.into() })
}

pub fn load_zeros(path: &Path) -> Result<ZeroTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_zeros(&text, &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unfolding {
    /// `γ log γ / 2π`
    Montgomery,
    /// Smooth zero-counting function
    /// `(γ / 2π) log(γ / 2πe) + 7/8`.
    Counting,
}

fn check_heights(z: &ZeroTable) -> Result<()> {
    match z.gammas.first() {
        Some(&g) if g > E => Ok(()),
        Some(&g) => Err(range_err(format!("unfolding needs zeros above e, found {g}"))),
        None => Err(Error::InsufficientData("empty zero table".into())),
    }
}

/// `γ̃_j = γ_j log γ_j / 2π`. Mean spacing tends to 1 only slowly: at
/// height `γ` it is about `(log γ + 1) / log(γ / 2π)`.
pub fn unfold_zeros(z: &ZeroTable) -> Result<EmpiricalSample> {
    unfold_with(z, Unfolding::Montgomery)
}

pub fn unfold_with(z: &ZeroTable, how: Unfolding) -> Result<EmpiricalSample> {
    check_heights(z)?;
    let f = |g: f64| match how {
        Unfolding::Montgomery => g * g.ln() / (2.0 * PI),
        Unfolding::Counting => g / (2.0 * PI) * (g / (2.0 * PI * E)).ln() + 0.875,
    };
    let label = match how {
        Unfolding::Montgomery => "zeta_montgomery",
        Unfolding::Counting => "zeta_counting",
    };
    Ok(EmpiricalSample::new(z.gammas.iter().map(|&g| f(g)).collect(), label))
}

/// Minimum table size for a report.
pub const REPORT_MIN_ZEROS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaOptions {
    pub skip: usize,
    pub edges: Vec<f64>,
    pub unfolding: Unfolding,
    pub seed: u64,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        Self {
            skip: 1000,
            edges: (0..=12).map(|k| 0.25 * k as f64).collect(),
            unfolding: Unfolding::Counting,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub source: String,
    pub zeros_used: usize,
    pub skip: usize,
    pub unfolding: Unfolding,
    pub seed: u64,
    pub mean_spacing: f64,
    pub bins: Vec<(f64, f64)>,
    pub observed: Vec<f64>,
    pub expected: Vec<f64>,
    pub deltas: Vec<f64>,
    pub max_delta: f64,
    pub spacing_ks: f64,
    /// Largest bin deviation after shuffling the spacings.
    pub control_max_delta: f64,
}

fn max_delta(points: &[f64], edges: &[f64], expected: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let est = pair_correlation(&[points.to_vec()], edges, None)?;
    let deltas: Vec<f64> = est.counts.iter().zip(expected).map(|(o, e)| o - e).collect();
    let worst = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok((est.counts, deltas, worst))
}

/// Pair correlation per bin and nearest-neighbour spacings against the
/// sine-kernel predictions, plus a shuffled-spacings control.
pub fn zeta_report(z: &ZeroTable, opts: &ZetaOptions) -> Result<ZetaReport> {
    if z.len() < REPORT_MIN_ZEROS {
        return Err(Error::InsufficientData(format!(
            "zeta report needs at least {REPORT_MIN_ZEROS} zeros, got {}",
            z.len()
        )));
    }
    if opts.skip + 2 >= z.len() {
        return Err(range_err(format!("skipping {} of {} zeros leaves too few", opts.skip, z.len())));
    }
    let all = unfold_with(z, opts.unfolding)?;
    let pts = &all.values[opts.skip..];
    let spacings: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    let mean_spacing = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let expected = opts
        .edges
        .windows(2)
        .map(|w| pair_correlation_integral(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    let (observed, deltas, worst) = max_delta(pts, &opts.edges, &expected)?;
    let table = spacing_cdf_default()?;
    let spacing_ks = ks_distance(&spacings, &table)?;
    let mut shuffled = spacings.clone();
    shuffled.shuffle(&mut stream(opts.seed, 0));
    let mut acc = pts[0];
    let mut control = Vec::with_capacity(pts.len());
    control.push(acc);
    for s in &shuffled {
        acc += s;
        control.push(acc);
    }
    let (_, _, control_worst) = max_delta(&control, &opts.edges, &expected)?;
    Ok(ZetaReport {
        source: z.source.clone(),
        zeros_used: pts.len(),
        skip: opts.skip,
        unfolding: opts.unfolding,
        seed: opts.seed,
        mean_spacing,
        bins: opts.edges.windows(2).map(|w| (w[0], w[1])).collect(),
        observed,
        expected,
        deltas,
        max_delta: worst,
        spacing_ks,
        control_max_delta: control_worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> ZeroTable {
        let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeta_zeros.txt");
        load_zeros(&p).unwrap()
    }

    #[test]
    fn parses_small_tables() {
        let z = parse_zeros("# first zeros\n14.1347\n21.0220\n\n25.0109\n", "inline").unwrap();
        assert_eq!(z.gammas, vec![14.1347, 21.0220, 25.0109]);
        assert!(matches!(parse_zeros("# nothing\n", "e"), Err(Error::InsufficientData(_))));
        assert_eq!(
            parse_zeros("14.1\n21.0\n20.5\n", "d").unwrap_err(),
            Error::Parse { line: 3, msg: "20.5 does not exceed the previous value 21".into() }
        );
        assert!(matches!(parse_zeros("14.1\nabc\n", "x"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn unfolding_formulas() {
        let z = ZeroTable { gammas: vec![14.134725142, 21.022039639], source: "t".into() };
        let u = unfold_zeros(&z).unwrap();
        for (g, v) in z.gammas.iter().zip(&u.values) {
            assert!((v - g * g.ln() / (2.0 * PI)).abs() < 1e-12);
        }
        assert!((u.values[0] - 5.958_398).abs() < 1e-6);
        let low = ZeroTable { gammas: vec![2.0, 14.0], source: "t".into() };
        assert!(unfold_zeros(&low).is_err());
    }

    #[test]
    fn fixture_is_a_zero_table() {
        let z = fixture();
        assert_eq!(z.len(), 11562);
        assert!((z.gammas[0] - 14.134725142).abs() < 1e-8);
        let u = unfold_zeros(&z).unwrap();
        assert!(u.values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn counting_unfolding_has_unit_spacing_and_montgomery_lags() {
        let z = fixture();
        let block = |how| {
            let u = unfold_with(&z, how).unwrap().values;
            let b = &u[u.len() - 10_000..];
            (b[b.len() - 1] - b[0]) / (b.len() - 1) as f64
        };
        let c = block(Unfolding::Counting);
        assert!((0.95..=1.05).contains(&c), "{c}");
        // the asymptotic formula is still ~40% off at these heights
        let m = block(Unfolding::Montgomery);
        assert!(m > 1.3, "{m}");
    }

    #[test]
    fn report_matches_gue_and_beats_the_control() {
        let z = fixture();
        let opts = ZetaOptions::default();
        let r = zeta_report(&z, &opts).unwrap();
        assert!(r.max_delta < 0.05, "{:?}", r.deltas);
        assert!(r.spacing_ks < 0.05, "{}", r.spacing_ks);
        // 11.5k zeros leave per-bin noise near 0.02, so only strict degradation is checked here
        for seed in 0..4 {
            let c = zeta_report(&z, &ZetaOptions { seed, ..opts.clone() }).unwrap();
            assert!(c.control_max_delta > 1.4 * r.max_delta, "{} vs {}", c.control_max_delta, r.max_delta);
        }
        assert_eq!(r, zeta_report(&z, &opts).unwrap());
        let small = ZeroTable { gammas: z.gammas[..5000].to_vec(), source: "s".into() };
        assert!(matches!(zeta_report(&small, &opts), Err(Error::InsufficientData(_))));
    }
}
