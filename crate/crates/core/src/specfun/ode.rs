//! Dormand–Prince 5(4) embedded Runge–Kutta with step-size control.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive integrator state: the step size carries over between calls so
/// that integrating across a fine output grid stays cheap.
pub(crate) struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    h: f64,
    pub steps: usize,
}

impl DormandPrince {
    pub fn new(rtol: f64, atol: f64, h0: f64) -> Self {
        Self { rtol, atol, h: h0, steps: 0 }
    }

    /// Advances `y` from `x0` to `x1` (either direction).
    pub fn advance<const N: usize, F>(&mut self, f: &F, x0: f64, x1: f64, y: &mut [f64; N]) -> Result<()>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let dir = (x1 - x0).signum();
        let mut x = x0;
        let mut h = self.h.abs().min((x1 - x0).abs()) * dir;
        let mut k = [[0.0; N]; 7];
        let mut guard = 0usize;
        while (x1 - x) * dir > 0.0 {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::Numerical("ODE step count exceeded".into()));
            }
            let mut truncated = false;
            if (x + h - x1) * dir > 0.0 {
                h = x1 - x;
                truncated = true;
            }
            k[0] = f(x, y);
            for s in 1..7 {
                let mut ys = *y;
                for (i, v) in ys.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for j in 0..s {
                        acc += A[s][j] * k[j][i];
                    }
                    *v += h * acc;
                }
                k[s] = f(x + C[s] * h, &ys);
            }
            let mut y5 = *y;
            let mut err = 0.0f64;
            for i in 0..N {
                let mut s5 = 0.0;
                let mut s4 = 0.0;
                for s in 0..7 {
                    s5 += B5[s] * k[s][i];
                    s4 += B4[s] * k[s][i];
                }
                y5[i] = y[i] + h * s5;
                let sc = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
                let e = (h * (s5 - s4)) / sc;
                err = err.max(e.abs());
            }
            if !err.is_finite() {
                return Err(Error::Numerical(format!("non-finite ODE state near x = {x}")));
            }
            if err <= 1.0 {
                x += h;
                *y = y5;
                self.steps += 1;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                let full = h * fac;
                // a step clipped to the output point says nothing about the
                // natural step size, so it is not carried over
                if !truncated {
                    self.h = full;
                }
                h = full;
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h.abs() < 1e-14 * x.abs().max(1.0) {
                    return Err(Error::Numerical(format!("ODE step size underflow at x = {x}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_harmonic_oscillator() {
        let f = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut y = [0.0, 1.0];
        let mut dp = DormandPrince::new(1e-12, 1e-14, 0.1);
        dp.advance(&f, 0.0, 10.0, &mut y).unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        dp.advance(&f, 10.0, 0.0, &mut y).unwrap();
        assert!(y[0].abs() < 1e-9 && (y[1] - 1.0).abs() < 1e-9);
    }
}
