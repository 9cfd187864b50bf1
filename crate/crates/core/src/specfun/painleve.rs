//! The Hastings–McLeod solution of Painlevé II, `u'' = 2u^3 + s u`,
//! `u(s) ~ Ai(s)` as `s -> +inf`, together with the tail integrals
//! `I(s) = ∫_s^∞ u` and `J(s) = ∫_s^∞ (t - s) u(t)^2 dt`.
//!
//! The ODE is integrated backwards from `s_start` with Airy initial data.
//! Backwards integration is unstable on the negative axis (perturbations grow
//! like `exp(c |s|^{3/2})`), so below [`S_MATCH`] `u` is taken from the
//! large-`|s|` expansion `u ~ sqrt(-s/2) (1 - 1/(8 s^3) - ...)` and only the
//! tail integrals keep being integrated.

use super::airy::{airy, airy_pair};
use super::ode::DormandPrince;
use crate::error::{range_err, Error, Result};
use crate::quadrature::integrate_adaptive;

/// Output grid spacing.
pub const GRID_STEP: f64 = 0.005;
/// Below this point `u` comes from the asymptotic expansion.
pub const S_MATCH: f64 = -6.0;
/// Blow-up threshold for the integrated solution.
pub const BLOW_UP: f64 = 1e6;

/// Coefficients `a_k` of `u = sqrt(t/2) Σ a_k t^{-3k}`, `t = -s`.
const NEG_SERIES: [f64; 12] = [
    1.0,
    -1.0 / 8.0,
    -73.0 / 128.0,
    -10657.0 / 1024.0,
    -13912277.0 / 32768.0,
    -8045883943.0 / 262144.0,
    -14518451390349.0 / 4194304.0,
    -18847128706420641.0 / 33554432.0,
    -266287398541797779277.0 / 2147483648.0,
    -614077537500104697967243.0 / 17179869184.0,
    -3583820408994355704357070999.0 / 274877906944.0,
    -12909064475999593160583566233991.0 / 2199023255552.0,
];

/// Sampled Hastings–McLeod solution on a descending grid.
#[derive(Debug, Clone)]
pub struct PainleveSolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    /// `I(s) = ∫_s^∞ u`
    pub tail_integral_u: Vec<f64>,
    /// `J(s) = ∫_s^∞ (t - s) u^2`
    pub tail_integral_q: Vec<f64>,
    /// `Q(s) = ∫_s^∞ u^2 = -J'(s)`
    pub tail_integral_u2: Vec<f64>,
    /// First grid index whose `u` comes from the asymptotic expansion, if any.
    pub matched_from: Option<usize>,
    pub tol: f64,
}

/// Interpolated values at an arbitrary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PainlevePoint {
    pub s: f64,
    pub u: f64,
    pub u_prime: f64,
    pub i: f64,
    pub j: f64,
}

/// `(u, u')` from the large-`|s|` expansion, truncated at its smallest term.
pub fn asymptotic_negative(s: f64) -> (f64, f64) {
    let t = -s;
    let x = 1.0 / (t * t * t);
    let mut sum = 0.0;
    let mut dsum = 0.0;
    let mut xk = 1.0;
    let mut last = f64::INFINITY;
    for (k, &a) in NEG_SERIES.iter().enumerate() {
        let term = a * xk;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        sum += term;
        dsum += term * (0.5 - 3.0 * k as f64);
        xk *= x;
    }
    let r = (0.5 * t).sqrt();
    (r * sum, -r / t * dsum)
}

fn rhs(s: f64, y: &[f64; 5]) -> [f64; 5] {
    let (u, v, q) = (y[0], y[1], y[3]);
    [v, 2.0 * u * u * u + s * u, -u, -u * u, -q]
}

/// Solves for the Hastings–McLeod solution on `[s_end, s_start]`.
pub fn solve_painleve_ii(s_start: f64, s_end: f64, tol: f64) -> Result<PainleveSolution> {
    if !(6.0..=12.0).contains(&s_start) {
        return Err(range_err(format!("s_start = {s_start} must lie in [6, 12]")));
    }
    if !(s_end >= -10.0 && s_end < s_start) {
        return Err(range_err(format!(
            "s_end = {s_end} must satisfy -10 <= s_end < s_start"
        )));
    }
    if !(tol >= 1e-12) {
        return Err(range_err(format!("tol = {tol} below 1e-12")));
    }

    let n = ((s_start - s_end) / GRID_STEP - 1e-9).ceil() as usize;
    let h = (s_start - s_end) / n as f64;
    let grid: Vec<f64> = (0..=n)
        .map(|i| if i == n { s_end } else { s_start - i as f64 * h })
        .collect();

    let a = airy(s_start)?;
    let (ai, aip, s0) = (a.ai, a.ai_prime, s_start);
    let i0 = integrate_adaptive(|x| airy_pair(x).0, s0, s0 + 30.0, 1e-300, 1e-15)?;
    let q0 = aip * aip - s0 * ai * ai;
    let j0 = (2.0 * s0 * s0 * ai * ai - 2.0 * s0 * aip * aip - ai * aip) / 3.0;

    let mut out = PainleveSolution {
        grid: grid.clone(),
        u: Vec::with_capacity(n + 1),
        u_prime: Vec::with_capacity(n + 1),
        tail_integral_u: Vec::with_capacity(n + 1),
        tail_integral_q: Vec::with_capacity(n + 1),
        tail_integral_u2: Vec::with_capacity(n + 1),
        matched_from: None,
        tol,
    };
    let push = |o: &mut PainleveSolution, y: &[f64; 5]| {
        o.u.push(y[0]);
        o.u_prime.push(y[1]);
        o.tail_integral_u.push(y[2]);
        o.tail_integral_u2.push(y[3]);
        o.tail_integral_q.push(y[4]);
    };

    let mut y = [ai, aip, i0, q0, j0];
    push(&mut out, &y);
    // relative error control; the tiny absolute floor only guards 0/0
    let mut dp = DormandPrince::new(tol, tol * 1e-20, 0.05);
    let mut k = 1;
    while k <= n && grid[k] >= S_MATCH {
        dp.advance(&rhs, grid[k - 1], grid[k], &mut y).map_err(|e| {
            Error::Instability(format!("integration failed near s = {}: {e}", grid[k - 1]))
        })?;
        if !(y[0].abs() <= BLOW_UP) {
            return Err(Error::Instability(format!(
                "|u| exceeded {BLOW_UP:e} at s = {}",
                grid[k]
            )));
        }
        push(&mut out, &y);
        k += 1;
    }

    if k <= n {
        out.matched_from = Some(k);
        let tails = |s: f64, z: &[f64; 3]| {
            let u = asymptotic_negative(s).0;
            [-u, -u * u, -z[1]]
        };
        let mut z = [y[2], y[3], y[4]];
        let mut prev = grid[k - 1];
        let mut dp = DormandPrince::new(tol, tol * 1e-20, GRID_STEP);
        while k <= n {
            dp.advance(&tails, prev, grid[k], &mut z)?;
            let (u, v) = asymptotic_negative(grid[k]);
            push(&mut out, &[u, v, z[0], z[1], z[2]]);
            prev = grid[k];
            k += 1;
        }
    }
    Ok(out)
}

impl PainleveSolution {
    pub fn s_start(&self) -> f64 {
        self.grid[0]
    }

    pub fn s_end(&self) -> f64 {
        *self.grid.last().expect("nonempty grid")
    }

    pub fn covers(&self, s: f64) -> bool {
        s <= self.s_start() && s >= self.s_end()
    }

    /// Cubic Hermite interpolation; each stored quantity is paired with its
    /// exact derivative (`u'`, `u''` from the ODE, `I' = -u`, `J' = -Q`).
    pub fn at(&self, s: f64) -> Result<PainlevePoint> {
        if !self.covers(s) {
            return Err(range_err(format!(
                "s = {s} outside solution range [{}, {}]",
                self.s_end(),
                self.s_start()
            )));
        }
        let n = self.grid.len() - 1;
        // grid is descending and uniform except possibly for the last cell
        let h0 = self.grid[0] - self.grid[1];
        let mut i = (((self.grid[0] - s) / h0).floor() as usize).min(n - 1);
        while i > 0 && self.grid[i] < s {
            i -= 1;
        }
        while i < n - 1 && self.grid[i + 1] > s {
            i += 1;
        }
        let (sa, sb) = (self.grid[i], self.grid[i + 1]);
        let h = sb - sa;
        let t = (s - sa) / h;
        let herm = |fa: f64, da: f64, fb: f64, db: f64| {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * fa
                + (t3 - 2.0 * t2 + t) * h * da
                + (-2.0 * t3 + 3.0 * t2) * fb
                + (t3 - t2) * h * db
        };
        let upp = |k: usize| {
            let u = self.u[k];
            2.0 * u * u * u + self.grid[k] * u
        };
        let (ua, ub) = (self.u[i], self.u[i + 1]);
        let (va, vb) = (self.u_prime[i], self.u_prime[i + 1]);
        Ok(PainlevePoint {
            s,
            u: herm(ua, va, ub, vb),
            u_prime: herm(va, upp(i), vb, upp(i + 1)),
            i: herm(self.tail_integral_u[i], -ua, self.tail_integral_u[i + 1], -ub),
            j: herm(
                self.tail_integral_q[i],
                -self.tail_integral_u2[i],
                self.tail_integral_q[i + 1],
                -self.tail_integral_u2[i + 1],
            ),
        })
    }

    /// `|u'' - 2u^3 - s u|` per grid point, with `u''` a fourth-order central
    /// difference of the stored `u'`. Points within two cells of either end
    /// or of the matching point are reported as NaN.
    pub fn ode_residuals(&self) -> Vec<f64> {
        let n = self.grid.len();
        let h = self.grid[0] - self.grid[1];
        let mut r = vec![f64::NAN; n];
        for k in 2..n.saturating_sub(3) {
            if let Some(m) = self.matched_from {
                if k + 2 >= m && k <= m + 2 {
                    continue;
                }
            }
            let d = &self.u_prime;
            // descending grid: d/ds = -d/d(index)/h
            let upp = -(-d[k + 2] + 8.0 * d[k + 1] - 8.0 * d[k - 1] + d[k - 2]) / (12.0 * h);
            let u = self.u[k];
            r[k] = (upp - 2.0 * u * u * u - self.grid[k] * u).abs();
        }
        r
    }

    /// Largest residual over the integrated (non-asymptotic) part of the grid.
    pub fn max_integrated_residual(&self) -> f64 {
        let end = self.matched_from.unwrap_or(self.grid.len());
        self.ode_residuals()[..end]
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0, |a, &b| a.max(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // (s, u, u', I, J), 30-digit shooting with the same Airy tail data
    const REFERENCE: &[(f64, f64, f64, f64, f64)] = &[
        (8.0, 4.6922076160992319e-8, -1.3414392979067868e-7, 1.6090849759132707e-8, 6.5335632069316117e-17),
        (6.0, 9.9476943602911328e-6, -2.4765200397326338e-5, 3.8816280948239135e-6, 3.8172326590167446e-12),
        (4.0, 0.00095156389893065876, -0.0019586412549620923, 0.00044068795456962119, 4.9579122762355157e-8),
        (2.0, 0.03492814926459572, -0.053110086787895976, 0.0208013720722183, 0.0001124526242501791),
        (1.0, 0.13564354350447159, -0.16055871475984102, 0.097099068514963338, 0.0024976784541430824),
        (0.0, 0.36706155154807843, -0.29537210544755005, 0.33696069793055139, 0.031105985306312354),
        (-1.0, 0.68806036460511808, -0.32319461366918249, 0.86226209127054341, 0.21416616639263137),
        (-2.0, 0.98339134972780534, -0.26310931141617436, 1.7031533834386429, 0.88376511530913842),
        (-3.0, 1.2179531462532537, -0.21022824898163312, 2.8082358185088742, 2.521742189048549),
        (-4.0, 1.411176929362394, -0.17890232996761866, 4.1253947811314034, 5.6423430520304652),
        (-5.0, 1.579487087847008, -0.15899137786918179, 5.6223787118239548, 10.753991955511331),
        (-5.5, 1.6570270024124154, -0.15136528343610605, 6.4316659969017019, 14.213924763730538),
        (-6.0, 1.7310249588317787, -0.14477828425728859, 7.2788161392365617, 18.360287043737965),
        (-7.0, 1.8701372759107146, -0.1338819675687076, 9.0803037793943579, 28.96297322390965),
        (-8.0, 1.9995071978114653, -0.12515576647817781, 11.015852335113266, 43.063044340605608),
    ];

    fn solution() -> PainleveSolution {
        solve_painleve_ii(8.0, -10.0, 1e-12).unwrap()
    }

    #[test]
    fn matches_high_precision_reference() {
        let sol = solution();
        for &(s, u, up, i, j) in REFERENCE {
            let p = sol.at(s).unwrap();
            let tol_u = if s < -5.0 { 1e-7 } else { 1e-9 };
            assert!((p.u - u).abs() <= tol_u * u.abs().max(1e-3), "u({s}) = {} vs {u}", p.u);
            assert!((p.u_prime - up).abs() <= 1e-6 * up.abs().max(1e-3), "u'({s})");
            assert!((p.i - i).abs() <= 1e-8 * i.abs().max(1e-3), "I({s}) = {} vs {i}", p.i);
            assert!((p.j - j).abs() <= 1e-8 * j.abs().max(1e-3), "J({s}) = {} vs {j}", p.j);
        }
    }

    #[test]
    fn starts_on_airy_data() {
        let sol = solution();
        assert_eq!(sol.u[0], airy(8.0).unwrap().ai);
        assert_eq!(sol.grid.len(), 3601);
        assert_eq!(sol.s_end(), -10.0);
    }

    #[test]
    fn residual_is_small_where_integrated() {
        let sol = solution();
        let r = sol.max_integrated_residual();
        assert!(r <= 100.0 * sol.tol, "residual {r:e}");
    }

    #[test]
    fn tail_integrals_are_monotone() {
        let sol = solution();
        // grid descends, so I and J must be nondecreasing along it
        for w in sol.tail_integral_u.windows(2) {
            assert!(w[1] >= w[0] && w[0] >= 0.0);
        }
        for w in sol.tail_integral_q.windows(2) {
            assert!(w[1] >= w[0] && w[0] >= 0.0);
        }
        assert!(sol.u.iter().all(|&u| u > 0.0));
    }

    #[test]
    fn asymptotic_expansion_is_continuous_with_integration() {
        let sol = solution();
        let m = sol.matched_from.unwrap();
        let (ua, _) = asymptotic_negative(sol.grid[m - 1]);
        assert!((ua - sol.u[m - 1]).abs() < 1e-7);
    }

    #[test]
    fn tolerance_refinement_is_consistent() {
        let a = solve_painleve_ii(8.0, -6.0, 1e-10).unwrap();
        let b = solve_painleve_ii(8.0, -6.0, 1e-12).unwrap();
        let pa = a.at(-2.0).unwrap();
        let pb = b.at(-2.0).unwrap();
        assert!((pa.u - pb.u).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(solve_painleve_ii(5.0, 0.0, 1e-10).is_err());
        assert!(solve_painleve_ii(8.0, -11.0, 1e-10).is_err());
        assert!(solve_painleve_ii(8.0, 9.0, 1e-10).is_err());
        assert!(solve_painleve_ii(8.0, 0.0, 1e-14).is_err());
        assert!(solution().at(8.5).is_err());
    }
}
