use crate::error::{range_err, Error, Result};
use serde::{Deserialize, Serialize};

/// Which law a table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    F1,
    F2,
    F4,
    Gap,
    Spacing,
    /// Limit law of the standardized longest weakly increasing subsequence
    /// of a random word over `k` letters.
    Word(u8),
    Standardized,
}

impl std::fmt::Display for Law {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Law::F1 => write!(f, "F1"),
            Law::F2 => write!(f, "F2"),
            Law::F4 => write!(f, "F4"),
            Law::Gap => write!(f, "gap"),
            Law::Spacing => write!(f, "spacing"),
            Law::Word(k) => write!(f, "word{k}"),
            Law::Standardized => write!(f, "standardized"),
        }
    }
}

/// Uniform grid `t_min, t_min + step, ..., t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { t_min: -10.0, t_max: 8.0, step: 0.005 }
    }
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        if !(t_min < t_max && step > 0.0 && step.is_finite()) {
            return Err(range_err(format!("invalid grid [{t_min}, {t_max}] step {step}")));
        }
        Ok(Self { t_min, t_max, step })
    }

    pub fn len(&self) -> usize {
        ((self.t_max - self.t_min) / self.step + 1e-9).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// Tabulated CDF on a uniform grid with piecewise-linear (hence monotone)
/// interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub label: Law,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub cdf: Vec<f64>,
}

impl DistributionTable {
    /// Builds a table, checking the values form a CDF. Decreases below
    /// `1e-13` are rounding and get flattened.
    pub fn new(label: Law, grid: GridSpec, mut cdf: Vec<f64>) -> Result<Self> {
        if cdf.len() != grid.len() || cdf.len() < 2 {
            return Err(Error::Logic(format!(
                "table has {} values for a grid of {} points",
                cdf.len(),
                grid.len()
            )));
        }
        for i in 1..cdf.len() {
            if cdf[i] < cdf[i - 1] && cdf[i] >= cdf[i - 1] - 1e-13 {
                cdf[i] = cdf[i - 1];
            }
        }
        for (i, w) in cdf.windows(2).enumerate() {
            if !(w[1] >= w[0]) {
                return Err(Error::Numerical(format!(
                    "{label} table decreases at t = {}",
                    grid.point(i + 1)
                )));
            }
        }
        if !(cdf[0] >= -1e-12 && cdf[cdf.len() - 1] <= 1.0 + 1e-12) {
            return Err(Error::Numerical(format!("{label} table leaves [0, 1]")));
        }
        let cdf = cdf.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(Self { label, t_min: grid.t_min, t_max: grid.t_max, step: grid.step, cdf })
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec { t_min: self.t_min, t_max: self.t_max, step: self.step }
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.step
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// `F(t)`, clamped to the end values outside the grid.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.t_min {
            return self.cdf[0];
        }
        if t >= self.t_max {
            return self.cdf[self.cdf.len() - 1];
        }
        let x = (t - self.t_min) / self.step;
        let i = (x.floor() as usize).min(self.cdf.len() - 2);
        let f = x - i as f64;
        self.cdf[i] + f * (self.cdf[i + 1] - self.cdf[i])
    }

    /// Density by centered differences at grid point `i` (one-sided at the ends).
    pub fn density_at(&self, i: usize) -> f64 {
        let n = self.cdf.len();
        if i == 0 {
            (self.cdf[1] - self.cdf[0]) / self.step
        } else if i == n - 1 {
            (self.cdf[n - 1] - self.cdf[n - 2]) / self.step
        } else {
            (self.cdf[i + 1] - self.cdf[i - 1]) / (2.0 * self.step)
        }
    }

    /// Density interpolated linearly between grid points.
    pub fn density(&self, t: f64) -> f64 {
        if !self.covers(t) {
            return 0.0;
        }
        let x = (t - self.t_min) / self.step;
        let i = (x.floor() as usize).min(self.cdf.len() - 2);
        let f = x - i as f64;
        (1.0 - f) * self.density_at(i) + f * self.density_at(i + 1)
    }

    /// Total mass carried by the grid, `F(t_max) - F(t_min)`.
    pub fn mass(&self) -> f64 {
        self.cdf[self.cdf.len() - 1] - self.cdf[0]
    }

    /// `E[g(X)]` as a Stieltjes sum over cell midpoints, normalized by the
    /// mass on the grid.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.cdf.len() - 1 {
            let mid = self.t_min + (i as f64 + 0.5) * self.step;
            acc += g(mid) * (self.cdf[i + 1] - self.cdf[i]);
        }
        acc / self.mass()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|t| t)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        // midpoint rule adds step^2/12 for a piecewise-uniform density
        self.expect(|t| (t - m) * (t - m)) - self.step * self.step / 12.0
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Smallest `t` with `F(t) >= p` under linear interpolation.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(range_err(format!("probability {p} outside [0, 1]")));
        }
        if p <= self.cdf[0] {
            return Ok(self.t_min);
        }
        let last = self.cdf.len() - 1;
        if p > self.cdf[last] {
            return Err(range_err(format!(
                "probability {p} above table maximum {}",
                self.cdf[last]
            )));
        }
        let i = self.cdf.partition_point(|&v| v < p);
        let (a, b) = (self.cdf[i - 1], self.cdf[i]);
        let f = if b > a { (p - a) / (b - a) } else { 1.0 };
        Ok(self.t(i - 1) + f * self.step)
    }

    /// The law of `(X - mean) / sd` resampled on `grid`.
    pub fn standardized(&self, grid: GridSpec) -> Result<DistributionTable> {
        let (m, s) = (self.mean(), self.sd());
        let cdf = grid.points().iter().map(|&z| self.eval(m + s * z)).collect();
        DistributionTable::new(Law::Standardized, grid, cdf)
    }

    /// CSV body rows `t,F`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,F\n");
        for (i, v) in self.cdf.iter().enumerate() {
            s.push_str(&format!("{},{}\n", fmt_num(self.t(i)), fmt_num(*v)));
        }
        s
    }
}

/// Shortest decimal that round-trips, with `-0` folded to `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn logistic() -> DistributionTable {
        let g = GridSpec::new(-40.0, 40.0, 0.01).unwrap();
        let cdf = g.points().iter().map(|t| 1.0 / (1.0 + (-t).exp())).collect();
        DistributionTable::new(Law::Standardized, g, cdf).unwrap()
    }

    #[test]
    fn moments_of_logistic() {
        let t = logistic();
        assert!(t.mean().abs() < 1e-9);
        let v = std::f64::consts::PI.powi(2) / 3.0;
        assert!((t.variance() - v).abs() < 1e-6);
    }

    #[test]
    fn density_integrates_to_mass() {
        let t = logistic();
        let s: f64 = (0..t.len()).map(|i| t.density_at(i)).sum::<f64>() * t.step;
        assert!((s - 1.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_decreasing_values() {
        let g = GridSpec::new(0.0, 1.0, 0.5).unwrap();
        assert!(DistributionTable::new(Law::F2, g, vec![0.0, 0.6, 0.5]).is_err());
        assert!(DistributionTable::new(Law::F2, g, vec![0.0, 0.5]).is_err());
    }

    #[test]
    fn default_grid_has_3601_points() {
        assert_eq!(GridSpec::default().len(), 3601);
    }

    proptest! {
        #[test]
        fn interpolation_is_monotone(a in -50.0f64..50.0, d in 0.0f64..10.0) {
            let t = logistic();
            prop_assert!(t.eval(a) <= t.eval(a + d));
        }

        #[test]
        fn quantile_inverts_eval(p in 0.001f64..0.999) {
            let t = logistic();
            let q = t.quantile(p).unwrap();
            prop_assert!((t.eval(q) - p).abs() < 1e-12);
        }
    }
}
