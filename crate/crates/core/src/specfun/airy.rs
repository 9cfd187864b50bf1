//! The Airy function Ai and its derivative.
//!
//! Three regimes are combined:
//! * `-4.5 <= x <= 2`: Maclaurin series around the origin.
//! * `|x| >= 9`: Poincaré asymptotic expansions (oscillatory for `x < 0`,
//!   exponentially small for `x > 0`).
//! * the gaps `(-9, -4.5)` and `(2, 9)`: Taylor expansion of `y'' = x y`
//!   about tabulated anchors. Negative anchors are propagated from the
//!   Maclaurin value at `-4.5`; positive anchors are propagated backwards
//!   from the asymptotic value at `9`, the stable direction for the
//!   recessive solution.

use crate::error::{range_err, Result};
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

/// Ai(0)
pub const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004_183_176_4;
/// -Ai'(0)
pub const AIP0_NEG: f64 = 0.258_819_403_792_806_798_405_183_560_189_203_963_5;

/// Lower end of the certified argument range.
pub const CERTIFIED_MIN: f64 = -20.0;
/// Upper end of the certified argument range.
pub const CERTIFIED_MAX: f64 = 12.0;

const MACLAURIN_NEG: f64 = -4.5;
const MACLAURIN_POS: f64 = 2.0;
const ASYMPTOTIC_ABS: f64 = 9.0;
const ANCHOR_STEP: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub x: f64,
    pub ai: f64,
    pub ai_prime: f64,
}

/// Ai and Ai' with absolute error below 1e-10 on `[-20, 12]`.
pub fn airy(x: f64) -> Result<AiryValue> {
    if !(CERTIFIED_MIN..=CERTIFIED_MAX).contains(&x) {
        return Err(range_err(format!(
            "airy argument {x} outside certified range [{CERTIFIED_MIN}, {CERTIFIED_MAX}]"
        )));
    }
    let (ai, ai_prime) = airy_pair(x);
    Ok(AiryValue { x, ai, ai_prime })
}

/// `(Ai(x), Ai'(x))` for any finite `x`, without range checking. Used by
/// kernels that sample far into the decaying tail.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x >= ASYMPTOTIC_ABS {
        if x > 105.0 {
            return (0.0, 0.0);
        }
        asymptotic_positive(x)
    } else if x <= -ASYMPTOTIC_ABS {
        asymptotic_negative(-x)
    } else if (MACLAURIN_NEG..=MACLAURIN_POS).contains(&x) {
        maclaurin(x)
    } else {
        from_anchor(x)
    }
}

/// Maclaurin series `Ai = c1 f - c2 g`.
pub(crate) fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f, g and their derivatives, summed term by term
    let mut f = 1.0;
    let mut g = x;
    let mut fp = 0.0;
    let mut gp = 1.0;
    let mut tf = 1.0;
    let mut tg = x;
    let mut tfp = 0.5 * x * x;
    let mut tgp = 1.0;
    fp += tfp;
    for k in 0..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tgp *= x3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 1 {
            tfp *= x3 / (3.0 * kf * (3.0 * kf + 2.0));
            fp += tfp;
        }
        let scale = f.abs().max(g.abs()).max(1.0);
        if k > 2
            && tf.abs() < 1e-18 * scale
            && tg.abs() < 1e-18 * scale
            && tfp.abs() < 1e-18 * scale.max(fp.abs())
            && tgp.abs() < 1e-18 * scale.max(gp.abs())
        {
            break;
        }
    }
    (AI0 * f - AIP0_NEG * g, AI0 * fp - AIP0_NEG * gp)
}

/// Coefficients u_k of the Airy asymptotic series and the companion v_k.
fn asymptotic_coefficients() -> &'static ([f64; 40], [f64; 40]) {
    static COEF: OnceLock<([f64; 40], [f64; 40])> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut u = [0.0; 40];
        let mut v = [0.0; 40];
        u[0] = 1.0;
        v[0] = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// Sums `sum_k sign_k c_k / z^k` stopping at the smallest term.
fn truncated_series(coef: &[f64], z: f64, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for (k, &c) in coef.iter().enumerate() {
        let term = c / zk;
        if term.abs() > last {
            break;
        }
        let sgn = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        sum += sgn * term;
        last = term.abs();
        if last < 1e-17 * sum.abs() {
            break;
        }
        zk *= z;
    }
    sum
}

pub(crate) fn asymptotic_positive(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let e = (-zeta).exp();
    let x4 = x.sqrt().sqrt();
    let su = truncated_series(u, zeta, true);
    let sv = truncated_series(v, zeta, true);
    let norm = 0.5 / PI.sqrt();
    (norm * e / x4 * su, -norm * x4 * e * sv)
}

/// Asymptotics of `Ai(-y)`, `Ai'(-y)` for large positive `y`.
pub(crate) fn asymptotic_negative(y: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let even = |c: &[f64; 40]| -> (f64, f64) {
        // returns (sum (-1)^k c_{2k}/z^{2k}, sum (-1)^k c_{2k+1}/z^{2k+1})
        let mut se = 0.0;
        let mut so = 0.0;
        let mut last = f64::INFINITY;
        let mut zk = 1.0;
        for k in 0..c.len() {
            let term = c[k] / zk;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let sgn = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                se += sgn * term;
            } else {
                so += sgn * term;
            }
            if last < 1e-17 {
                break;
            }
            zk *= zeta;
        }
        (se, so)
    };
    let (ue, uo) = even(u);
    let (ve, vo) = even(v);
    let phase = zeta + FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let y4 = y.sqrt().sqrt();
    let rp = 1.0 / PI.sqrt();
    let ai = rp / y4 * (s * ue - c * uo);
    let aip = -rp * y4 * (c * ve + s * vo);
    (ai, aip)
}

/// One Taylor step of `y'' = x y` from `x0` by `h`.
pub(crate) fn taylor_step(x0: f64, y0: f64, yp0: f64, h: f64) -> (f64, f64) {
    let mut a = [0.0f64; 80];
    a[0] = y0;
    a[1] = yp0;
    a[2] = 0.5 * x0 * y0;
    let mut y = a[0] + a[1] * h + a[2] * h * h;
    let mut yp = a[1] + 2.0 * a[2] * h;
    let mut hk = h * h; // h^k for k = 2
    let mut small = 0;
    for k in 3..80 {
        // (k)(k-1) a_k = x0 a_{k-2} + a_{k-3}
        a[k] = (x0 * a[k - 2] + a[k - 3]) / ((k * (k - 1)) as f64);
        let d = k as f64 * a[k] * hk;
        hk *= h;
        let t = a[k] * hk;
        y += t;
        yp += d;
        let scale = y.abs().max(yp.abs()).max(1e-300);
        if t.abs() < 1e-19 * scale && d.abs() < 1e-19 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (y, yp)
}

struct Anchors {
    neg: Vec<(f64, f64, f64)>,
    pos: Vec<(f64, f64, f64)>,
}

fn anchors() -> &'static Anchors {
    static A: OnceLock<Anchors> = OnceLock::new();
    A.get_or_init(|| {
        let n_neg = ((ASYMPTOTIC_ABS + MACLAURIN_NEG) / ANCHOR_STEP).round() as usize;
        let mut neg = Vec::with_capacity(n_neg + 1);
        let (mut y, mut yp) = maclaurin(MACLAURIN_NEG);
        let mut x = MACLAURIN_NEG;
        neg.push((x, y, yp));
        for i in 1..=n_neg {
            let xn = MACLAURIN_NEG - i as f64 * ANCHOR_STEP;
            (y, yp) = taylor_step(x, y, yp, xn - x);
            x = xn;
            neg.push((x, y, yp));
        }
        let n_pos = ((ASYMPTOTIC_ABS - MACLAURIN_POS) / ANCHOR_STEP).round() as usize;
        let mut pos = Vec::with_capacity(n_pos + 1);
        let (mut y, mut yp) = asymptotic_positive(ASYMPTOTIC_ABS);
        let mut x = ASYMPTOTIC_ABS;
        pos.push((x, y, yp));
        for i in 1..=n_pos {
            let xn = ASYMPTOTIC_ABS - i as f64 * ANCHOR_STEP;
            (y, yp) = taylor_step(x, y, yp, xn - x);
            x = xn;
            pos.push((x, y, yp));
        }
        Anchors { neg, pos }
    })
}

fn from_anchor(x: f64) -> (f64, f64) {
    let a = anchors();
    let (x0, y0, yp0) = if x < 0.0 {
        let i = ((MACLAURIN_NEG - x) / ANCHOR_STEP).round() as usize;
        a.neg[i.min(a.neg.len() - 1)]
    } else {
        let i = ((ASYMPTOTIC_ABS - x) / ANCHOR_STEP).round() as usize;
        a.pos[i.min(a.pos.len() - 1)]
    };
    taylor_step(x0, y0, yp0, x - x0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (x, Ai, Ai') from a 30-digit reference evaluation
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-20.0, -0.17640612707798469, 0.89286285673647124),
        (-15.5, -0.16644795409041977, 0.9049379354302122),
        (-9.5, 0.3191032477191282, -0.10809531881187124),
        (-9.0, -0.022133721547341404, -0.97566398092633159),
        (-7.3, 0.33577037051514728, -0.18009580448329366),
        (-6.0, -0.32914517362982311, 0.34593548728134289),
        (-4.5, 0.29215278105595947, -0.5233625323157477),
        (-2.0, 0.22740742820168558, 0.61825902074169104),
        (0.0, 0.35502805388781724, -0.2588194037928068),
        (1.0, 0.13529241631288142, -0.15914744129679321),
        (2.0, 0.034924130423274379, -0.053090384433653632),
        (3.7, 0.0017455720006099785, -0.0034669407490276271),
        (4.5, 0.00033025032351430898, -0.00071786656755750889),
        (6.0, 9.9476943602528896e-6, -2.4765200397034955e-5),
        (8.0, 4.6922076160992316e-8, -1.3414392979067866e-7),
        (9.0, 2.4711684308724898e-9, -7.4806413896589464e-9),
        (11.5, 7.8142901839628543e-13, -2.6666799675045314e-12),
        (12.0, 1.3931846888753608e-13, -4.8547365549853085e-13),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, ai, aip) in REFERENCE {
            let v = airy(x).unwrap();
            assert!((v.ai - ai).abs() < 1e-12, "Ai({x}) = {} vs {ai}", v.ai);
            assert!((v.ai_prime - aip).abs() < 1e-12, "Ai'({x}) = {} vs {aip}", v.ai_prime);
        }
    }

    #[test]
    fn relative_accuracy_on_positive_axis() {
        for &(x, ai, aip) in REFERENCE.iter().filter(|r| r.0 > 2.0) {
            let (a, ap) = airy_pair(x);
            assert!(((a - ai) / ai).abs() < 1e-12, "x={x}");
            assert!(((ap - aip) / aip).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn origin_values() {
        let v = airy(0.0).unwrap();
        assert!((v.ai - 0.3550280539).abs() < 1e-10);
        assert!((v.ai_prime + 0.2588194038).abs() < 1e-10);
    }

    #[test]
    fn positive_axis_decay() {
        let a7 = airy(7.0).unwrap().ai;
        let a8 = airy(8.0).unwrap().ai;
        assert!(a8 > 0.0 && a8 / a7 < 1.0);
        let mut prev = f64::INFINITY;
        for i in 0..=120 {
            let a = airy(i as f64 * 0.1).unwrap().ai;
            assert!(a > 0.0 && a < prev);
            prev = a;
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        let f = |x: f64| airy(x).unwrap().ai;
        let x = 1.0;
        let second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        assert!((second - x * f(x)).abs() <= 1e-5);
        for &x in &[-15.0, -8.0, -3.0, 5.0, 10.0] {
            let second = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert!((second - x * f(x)).abs() <= 1e-4, "x={x}");
        }
    }

    #[test]
    fn regime_switchovers_agree() {
        // each boundary is evaluated by both neighbouring methods
        let (m, mp) = maclaurin(MACLAURIN_NEG - 1e-9);
        let (t, tp) = from_anchor(MACLAURIN_NEG - 1e-9);
        assert!((m - t).abs() < 1e-11 && (mp - tp).abs() < 1e-11, "{m} {t} {mp} {tp}");
        let (m, mp) = maclaurin(MACLAURIN_POS);
        let (t, tp) = from_anchor(MACLAURIN_POS + 1e-12);
        assert!((m - t).abs() < 1e-11 && (mp - tp).abs() < 1e-11, "{m} {t} {mp} {tp}");
        let (m, mp) = asymptotic_negative(ASYMPTOTIC_ABS);
        let (t, tp) = from_anchor(-ASYMPTOTIC_ABS + 1e-12);
        assert!((m - t).abs() < 1e-11 && (mp - tp).abs() < 1e-11, "{m} {t} {mp} {tp}");
        let (m, mp) = maclaurin(-6.0);
        let (t, tp) = from_anchor(-6.0);
        assert!((m - t).abs() < 1e-11 && (mp - tp).abs() < 1e-11, "{m} {t} {mp} {tp}");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(airy(12.5).is_err());
        assert!(airy(-20.5).is_err());
        assert!(airy(f64::NAN).is_err());
    }

    #[test]
    fn wronskian_with_bi_free_identity() {
        // Ai'(x)^2 - x Ai(x)^2 = integral_x^inf Ai^2 must be positive and decreasing
        let q = |x: f64| {
            let (a, ap) = airy_pair(x);
            ap * ap - x * a * a
        };
        let mut prev = f64::INFINITY;
        for i in -40..40 {
            let v = q(i as f64 * 0.25);
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }
}
