use super::painleve::{solve_painleve_ii, PainleveSolution};
use super::table::{DistributionTable, GridSpec, Law};
use crate::error::{range_err, Result};
use std::sync::{Arc, OnceLock};

/// Integration tolerance used for the shared solution.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Starting point of the shared solution.
pub const DEFAULT_S_START: f64 = 8.0;

/// Hastings–McLeod solution on `[-10, 8]`, computed once per process.
pub fn default_solution() -> Result<Arc<PainleveSolution>> {
    static SOL: OnceLock<std::result::Result<Arc<PainleveSolution>, crate::error::Error>> =
        OnceLock::new();
    SOL.get_or_init(|| solve_painleve_ii(DEFAULT_S_START, -10.0, DEFAULT_TOL).map(Arc::new))
        .clone()
}

/// `(F1, F2, F4)` at `t` from the solution.
pub fn tw_values(sol: &PainleveSolution, t: f64) -> Result<(f64, f64, f64)> {
    let p = sol.at(t)?;
    let f2 = (-p.j).exp();
    let r = f2.sqrt();
    let half = 0.5 * p.i;
    Ok((r * (-half).exp(), f2, r * half.cosh()))
}

/// Tracy–Widom CDF table for `beta` in {1, 2, 4}.
pub fn tracy_widom(beta: u8, grid: GridSpec) -> Result<DistributionTable> {
    let law = match beta {
        1 => Law::F1,
        2 => Law::F2,
        4 => Law::F4,
        _ => return Err(range_err(format!("beta = {beta} not in {{1, 2, 4}}"))),
    };
    let sol = if grid.t_min >= -10.0 && grid.t_max <= DEFAULT_S_START {
        default_solution()?
    } else if grid.t_max <= 12.0 && grid.t_min >= -10.0 {
        Arc::new(solve_painleve_ii(grid.t_max.max(DEFAULT_S_START), grid.t_min.min(0.0), DEFAULT_TOL)?)
    } else {
        return Err(range_err(format!(
            "grid [{}, {}] extends beyond the Painleve solution range [-10, 12]",
            grid.t_min, grid.t_max
        )));
    };
    let mut cdf = Vec::with_capacity(grid.len());
    for t in grid.points() {
        let (f1, f2, f4) = tw_values(&sol, t.min(sol.s_start()))?;
        cdf.push(match beta {
            1 => f1,
            2 => f2,
            _ => f4,
        });
    }
    DistributionTable::new(law, grid, cdf)
}

/// Default-grid table for `beta`, cached.
pub fn tracy_widom_default(beta: u8) -> Result<Arc<DistributionTable>> {
    type Slot = OnceLock<std::result::Result<Arc<DistributionTable>, crate::error::Error>>;
    static T1: Slot = OnceLock::new();
    static T2: Slot = OnceLock::new();
    static T4: Slot = OnceLock::new();
    let slot = match beta {
        1 => &T1,
        2 => &T2,
        4 => &T4,
        _ => return Err(range_err(format!("beta = {beta} not in {{1, 2, 4}}"))),
    };
    slot.get_or_init(|| tracy_widom(beta, GridSpec::default()).map(Arc::new))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_moments() {
        let t = tracy_widom_default(2).unwrap();
        assert!((t.mean() + 1.7711).abs() < 5e-3, "mean {}", t.mean());
        assert!((t.variance() - 0.8132).abs() < 5e-3, "var {}", t.variance());
        // tighter regression against the value from an independent
        // determinant-based quadrature
        assert!((t.mean() + 1.771086807).abs() < 1e-6);
        assert!((t.variance() - 0.813194792).abs() < 1e-6);
    }

    #[test]
    fn beta_one_and_four_moments() {
        let t1 = tracy_widom_default(1).unwrap();
        let t4 = tracy_widom_default(4).unwrap();
        let t2 = tracy_widom_default(2).unwrap();
        assert!(t1.mean() > t2.mean() && t4.mean() < t2.mean());
        assert!((t1.mean() + 1.2065335745).abs() < 1e-5, "{}", t1.mean());
        assert!((t1.variance() - 1.6077810345).abs() < 1e-5, "{}", t1.variance());
        // F4 in the sqrt(2)-unscaled convention
        assert!((t4.mean() + 3.2624).abs() < 1e-3, "{}", t4.mean());
        assert!((t4.variance() - 1.0355).abs() < 1e-3, "{}", t4.variance());
    }

    #[test]
    fn tables_satisfy_range_limits() {
        for beta in [1, 2, 4] {
            let t = tracy_widom_default(beta).unwrap();
            assert!(t.cdf[0] < 1e-6, "beta {beta}");
            assert!(t.cdf[t.len() - 1] > 1.0 - 1e-6, "beta {beta}");
            let s: f64 = (0..t.len()).map(|i| t.density_at(i)).sum::<f64>() * t.step;
            assert!((s - 1.0).abs() < 1e-4, "beta {beta}: {s}");
        }
        let t2 = tracy_widom_default(2).unwrap();
        assert!(t2.eval(4.0) > 0.999);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(tracy_widom(3, GridSpec::default()).is_err());
        assert!(tracy_widom(2, GridSpec::new(-12.0, 0.0, 0.01).unwrap()).is_err());
        assert!(tracy_widom(2, GridSpec::new(-5.0, 13.0, 0.01).unwrap()).is_err());
    }
}
