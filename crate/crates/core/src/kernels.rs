//! Sine- and Airy-kernel Fredholm determinants and the bulk statistics
//! derived from them.

use crate::error::{range_err, Error, Result};
use crate::linalg::{determinant, symmetric_eigenvalues, Matrix};
use crate::quadrature::{integrate_adaptive, GaussLegendre};
use crate::specfun::airy::airy_pair;
use crate::specfun::table::{DistributionTable, GridSpec, Law};
use std::f64::consts::PI;

/// Largest quadrature order tried before giving up.
pub const ORDER_CAP: usize = 512;
/// Doubling the order must move the determinant by less than this.
pub const CONVERGENCE_TOL: f64 = 1e-8;
/// Below this separation the Airy kernel uses its diagonal value.
const AIRY_NEAR_DIAGONAL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Sine,
    Airy,
}

/// A kernel restricted to `(a, b)`; `b` may be `+inf` for the Airy kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOperator {
    pub kind: KernelKind,
    pub a: f64,
    pub b: f64,
    pub quadrature_order: usize,
}

impl KernelOperator {
    pub fn sine(a: f64, b: f64, quadrature_order: usize) -> Self {
        Self { kind: KernelKind::Sine, a, b, quadrature_order }
    }

    /// Airy kernel on `(t, inf)`.
    pub fn airy(t: f64, quadrature_order: usize) -> Self {
        Self { kind: KernelKind::Airy, a: t, b: f64::INFINITY, quadrature_order }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a <= self.b) || self.a.is_nan() {
            return Err(range_err(format!("empty or reversed interval ({}, {})", self.a, self.b)));
        }
        if self.quadrature_order < 8 {
            return Err(range_err(format!(
                "quadrature order {} below 8",
                self.quadrature_order
            )));
        }
        if self.kind == KernelKind::Sine && !self.b.is_finite() {
            return Err(range_err("sine kernel needs a finite interval"));
        }
        Ok(())
    }

    /// Nodes and weights on the interval, with the map
    /// `x = a + u / (1 - u)` folded in for a semi-infinite interval.
    fn nodes(&self, order: usize) -> (Vec<f64>, Vec<f64>) {
        let g = GaussLegendre::cached(order);
        if self.b.is_finite() {
            g.on_interval(self.a, self.b)
        } else {
            let (u, w) = g.on_interval(0.0, 1.0);
            let x = u.iter().map(|u| self.a + u / (1.0 - u)).collect();
            let w = u.iter().zip(&w).map(|(u, w)| w / ((1.0 - u) * (1.0 - u))).collect();
            (x, w)
        }
    }

    /// Symmetric Nyström matrix `W^{1/2} K W^{1/2}` at the given order.
    pub fn matrix(&self, order: usize) -> Matrix<f64> {
        let (x, w) = self.nodes(order);
        let n = x.len();
        let sw: Vec<f64> = w.iter().map(|w| w.sqrt()).collect();
        let mut m = Matrix::zeros(n);
        match self.kind {
            KernelKind::Sine => {
                for i in 0..n {
                    for j in 0..=i {
                        let k = sine_kernel(x[i] - x[j]) * sw[i] * sw[j];
                        m.set(i, j, k);
                        m.set(j, i, k);
                    }
                }
            }
            KernelKind::Airy => {
                let ai: Vec<(f64, f64)> = x.iter().map(|&x| airy_pair(x)).collect();
                for i in 0..n {
                    for j in 0..=i {
                        let d = x[i] - x[j];
                        let k = if d.abs() < AIRY_NEAR_DIAGONAL {
                            airy_diagonal(0.5 * (x[i] + x[j]))
                        } else {
                            (ai[i].0 * ai[j].1 - ai[i].1 * ai[j].0) / d
                        };
                        let k = k * sw[i] * sw[j];
                        m.set(i, j, k);
                        m.set(j, i, k);
                    }
                }
            }
        }
        m
    }

    /// `det(I - W^{1/2} K W^{1/2})` at a fixed order.
    pub fn det_at_order(&self, order: usize) -> f64 {
        if self.a == self.b {
            return 1.0;
        }
        let mut m = self.matrix(order);
        let n = m.n;
        for v in m.data.iter_mut() {
            *v = -*v;
        }
        for i in 0..n {
            m.data[i * n + i] += 1.0;
        }
        determinant(m)
    }

    /// Eigenvalues of the discretized operator.
    pub fn spectrum(&self, order: usize) -> Result<Vec<f64>> {
        symmetric_eigenvalues(self.matrix(order))
    }
}

/// `sin(pi d) / (pi d)`
pub fn sine_kernel(d: f64) -> f64 {
    let x = PI * d;
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `K_Ai(x, x) = Ai'(x)^2 - x Ai(x)^2`
pub fn airy_diagonal(x: f64) -> f64 {
    let (a, ap) = airy_pair(x);
    ap * ap - x * a * a
}

/// Converged Fredholm determinant: the order is doubled from
/// `op.quadrature_order` until two successive values agree to
/// [`CONVERGENCE_TOL`].
pub fn fredholm_det(op: &KernelOperator) -> Result<f64> {
    op.validate()?;
    if op.a == op.b {
        return Ok(1.0);
    }
    let mut order = op.quadrature_order;
    let mut prev = op.det_at_order(order);
    while order * 2 <= ORDER_CAP {
        order *= 2;
        let next = op.det_at_order(order);
        if (next - prev).abs() < CONVERGENCE_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy(format!(
        "Fredholm determinant on ({}, {}) not converged at order {ORDER_CAP}",
        op.a, op.b
    )))
}

/// Starting order for a sine-kernel interval of length `len`.
fn sine_order(len: f64) -> usize {
    (16 + (2.0 * len).ceil() as usize).min(ORDER_CAP / 2)
}

/// Probability of no sine-process points in `(-x, x)`.
pub fn gap_probability(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(range_err(format!("gap half-width {x} must be positive")));
    }
    fredholm_det(&KernelOperator::sine(-x, x, sine_order(2.0 * x)))
}

/// `det(I - K_Ai)` on `(t, inf)`, i.e. F2(t).
pub fn airy_det(t: f64) -> Result<f64> {
    fredholm_det(&KernelOperator::airy(t, 32))
}

/// Nearest-neighbour spacing density of the sine process.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingDensity {
    pub grid: Vec<f64>,
    pub p: Vec<f64>,
}

impl SpacingDensity {
    /// Trapezoid `∫ g(u) p(u) du` over the grid.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        let mut s = 0.0;
        for i in 0..self.grid.len() - 1 {
            let h = self.grid[i + 1] - self.grid[i];
            s += 0.5 * h * (g(self.grid[i]) * self.p[i] + g(self.grid[i + 1]) * self.p[i + 1]);
        }
        s
    }

    /// Linear interpolation on the grid; 0 outside it.
    pub fn eval(&self, u: f64) -> f64 {
        let (g, n) = (&self.grid, self.grid.len());
        if n == 0 || u < g[0] || u > g[n - 1] {
            return 0.0;
        }
        let h = g[1] - g[0];
        let i = (((u - g[0]) / h).floor() as usize).min(n - 2);
        let w = (u - g[i]) / h;
        (1.0 - w) * self.p[i] + w * self.p[i + 1]
    }
}

/// `D(u)` = probability of an empty interval of length `u`, evaluated at a
/// fixed order so that differences are smooth in `u`.
fn empty_interval(u: f64, order: usize) -> f64 {
    if u <= 0.0 {
        return 1.0;
    }
    KernelOperator::sine(0.0, u, order).det_at_order(order)
}

fn spacing_order(u_max: f64) -> Result<usize> {
    // certify the fixed order at the longest interval
    let order = sine_order(u_max + 0.1).max(32);
    let op = KernelOperator::sine(0.0, u_max + 0.1, order);
    let a = op.det_at_order(order);
    let b = op.det_at_order(2 * order);
    if (a - b).abs() > 1e-13 {
        return Err(Error::Accuracy(format!("spacing determinant unresolved at order {order}")));
    }
    Ok(order)
}

/// `p(u) = D''(u)` by second central differences with step `h` and `h/2`,
/// combined by Richardson extrapolation. At `u = 0` the one-sided second
/// difference is used.
pub fn spacing_density(u_max: f64, h: f64) -> Result<SpacingDensity> {
    if !(u_max > 0.0 && u_max <= 5.0) {
        return Err(range_err(format!("u_max = {u_max} must lie in (0, 5]")));
    }
    if !(1e-3..=1e-2).contains(&h) {
        return Err(range_err(format!("h = {h} must lie in [1e-3, 1e-2]")));
    }
    let order = spacing_order(u_max)?;
    let n = (u_max / h).round() as usize;
    let q = 0.5 * h;
    // D at multiples of h/2 from 0 to u_max + h
    let dvals: Vec<f64> = (0..=2 * n + 2).map(|k| empty_interval(k as f64 * q, order)).collect();
    let d = |k: usize| dvals[k];
    let mut grid = Vec::with_capacity(n + 1);
    let mut p = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let c = 2 * i;
        let v = if i == 0 {
            // forward differences: O(h) error, same extrapolation
            let c1 = (d(0) - 2.0 * d(2) + d(4)) / (h * h);
            let f1 = (d(0) - 2.0 * d(1) + d(2)) / (q * q);
            2.0 * f1 - c1
        } else {
            let c1 = (d(c - 2) - 2.0 * d(c) + d(c + 2)) / (h * h);
            let f1 = (d(c - 1) - 2.0 * d(c) + d(c + 1)) / (q * q);
            (4.0 * f1 - c1) / 3.0
        };
        if v < -1e-3 {
            return Err(Error::Numerical(format!("negative spacing density {v} at u = {}", i as f64 * h)));
        }
        grid.push(i as f64 * h);
        p.push(v.max(0.0));
    }
    Ok(SpacingDensity { grid, p })
}

/// Spacing CDF `1 + D'(u)` tabulated on `[0, u_max]`.
pub fn spacing_cdf(u_max: f64, step: f64) -> Result<DistributionTable> {
    if !(u_max > 0.0 && u_max <= 6.0) {
        return Err(range_err(format!("u_max = {u_max} must lie in (0, 6]")));
    }
    let order = spacing_order(u_max)?;
    let grid = GridSpec::new(0.0, u_max, step)?;
    let e = 1e-4;
    let cdf = grid
        .points()
        .iter()
        .map(|&u| {
            if u == 0.0 {
                0.0
            } else {
                let dp = (empty_interval(u + e, order) - empty_interval((u - e).max(0.0), order))
                    / (u + e - (u - e).max(0.0));
                (1.0 + dp).clamp(0.0, 1.0)
            }
        })
        .collect::<Vec<_>>();
    // central differences can wobble by rounding near the flat ends
    let mut mono = cdf;
    for i in 1..mono.len() {
        if mono[i] < mono[i - 1] {
            mono[i] = mono[i - 1];
        }
    }
    DistributionTable::new(Law::Spacing, grid, mono)
}

/// Spacing CDF on `[0, 5]` with step `0.005`, computed once.
pub fn spacing_cdf_default() -> Result<std::sync::Arc<DistributionTable>> {
    static T: std::sync::OnceLock<Result<std::sync::Arc<DistributionTable>>> = std::sync::OnceLock::new();
    T.get_or_init(|| spacing_cdf(5.0, 0.005).map(std::sync::Arc::new)).clone()
}

/// Sine-process number variance for an interval of length `s`:
/// `(1/pi^2) ∫_0^{2 pi s} (1 - cos u)/u du + (2s/pi) ∫_{pi s}^inf (sin u / u)^2 du`.
pub fn number_variance(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(range_err(format!("interval length {s} must be positive")));
    }
    let first = integrate_adaptive(
        |u: f64| {
            if u < 1e-8 {
                0.5 * u
            } else {
                let h = (0.5 * u).sin();
                2.0 * h * h / u
            }
        },
        0.0,
        2.0 * PI * s,
        1e-15,
        1e-13,
    )?;
    // ∫_{pi s}^inf sinc^2 = pi/2 - ∫_0^{pi s} sinc^2
    let head = integrate_adaptive(
        |u: f64| {
            let k = sine_kernel(u / PI);
            k * k
        },
        0.0,
        PI * s,
        1e-15,
        1e-14,
    )?;
    Ok(first / (PI * PI) + 2.0 * s / PI * (0.5 * PI - head))
}

/// `∫_a^b 1 - (sin(pi r)/(pi r))^2 dr`
pub fn pair_correlation_integral(a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return Err(range_err(format!("need a < b, got ({a}, {b})")));
    }
    integrate_adaptive(pair_correlation_density, a, b, 1e-14, 1e-12)
}

/// `1 - (sin(pi r)/(pi r))^2`, with a series near the origin.
pub fn pair_correlation_density(r: f64) -> f64 {
    let x = PI * r;
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 / 3.0 - 2.0 * x2 * x2 / 45.0
    } else {
        let k = x.sin() / x;
        1.0 - k * k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_interval_gives_one() {
        assert_eq!(fredholm_det(&KernelOperator::sine(1.0, 1.0, 16)).unwrap(), 1.0);
    }

    #[test]
    fn small_interval_is_linear() {
        let v = gap_probability(1e-3).unwrap();
        assert!(v >= 1.0 - 2.1e-3 && v <= 1.0 - 1.9e-3, "{v}");
    }

    #[test]
    fn gap_is_decreasing() {
        let (a, b, c) = (
            gap_probability(0.5).unwrap(),
            gap_probability(1.0).unwrap(),
            gap_probability(2.0).unwrap(),
        );
        assert!(a > b && b > c && c > 0.0);
    }

    #[test]
    fn gap_regression() {
        // reference from an independent Nystrom determinant in double precision
        let v = gap_probability(1.0).unwrap();
        let hi = KernelOperator::sine(-1.0, 1.0, 128).det_at_order(128);
        assert!((v - hi).abs() < 1e-12);
        assert!((v - GAP_ONE).abs() < 1e-10, "{v:.15}");
    }

    const GAP_ONE: f64 = 0.003497325149168;

    #[test]
    fn kernel_spectra_lie_in_unit_interval() {
        for op in [KernelOperator::sine(-2.0, 2.0, 40), KernelOperator::airy(-4.0, 64)] {
            for v in op.spectrum(op.quadrature_order).unwrap() {
                assert!((-1e-10..=1.0 + 1e-10).contains(&v), "{v}");
            }
        }
    }

    #[test]
    fn airy_det_converges() {
        for t in [-6.0, -2.0, 0.0, 3.0] {
            let op = KernelOperator::airy(t, 64);
            let a = op.det_at_order(128);
            let b = op.det_at_order(256);
            assert!((a - b).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn spacing_density_properties() {
        let sd = spacing_density(5.0, 5e-3).unwrap();
        assert!(sd.p[0] <= 1e-3);
        assert!((sd.integrate(|_| 1.0) - 1.0).abs() < 1e-3);
        assert!((sd.integrate(|u| u) - 1.0).abs() < 2e-3);
        assert!(sd.p.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn spacing_cdf_is_a_cdf() {
        let t = spacing_cdf(5.0, 0.01).unwrap();
        assert_eq!(t.cdf[0], 0.0);
        assert!(t.cdf[t.len() - 1] > 0.9999);
        assert!((t.eval(1.0) - 0.5).abs() < 0.15);
    }

    #[test]
    fn number_variance_limits() {
        assert!(number_variance(1e-3).unwrap() < 2e-3);
        let euler = 0.577_215_664_901_532_9;
        let v = number_variance(50.0).unwrap();
        let approx = ((100.0 * PI).ln() + euler + 1.0) / (PI * PI);
        assert!((v - approx).abs() <= 0.02);
        for s in [1.0, 5.0, 20.0] {
            assert!(number_variance(2.0 * s).unwrap() > number_variance(s).unwrap());
        }
    }

    #[test]
    fn pair_correlation_integral_values() {
        let eps = 1e-2;
        let r = pair_correlation_integral(-eps, eps).unwrap();
        // leading term (2 pi^2 / 9) eps^3
        assert!(r <= 2.2 * eps.powi(3) && r > 2.1 * eps.powi(3), "{r}");
        let t = 50.0;
        let v = pair_correlation_integral(-t, t).unwrap() / (2.0 * t);
        assert!((0.98..=1.0).contains(&v));
    }

    proptest! {
        #[test]
        fn pair_correlation_is_additive(a in -5.0f64..5.0, d1 in 0.01f64..3.0, d2 in 0.01f64..3.0) {
            let (b, c) = (a + d1, a + d1 + d2);
            let lhs = pair_correlation_integral(a, b).unwrap() + pair_correlation_integral(b, c).unwrap();
            let rhs = pair_correlation_integral(a, c).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
