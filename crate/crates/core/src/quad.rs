//! Double-exponential quadrature.
//!
//! Two transplanted trapezoid rules with level doubling and node reuse:
//!
//! * [`tanh_sinh`] for finite intervals, robust to integrable endpoint
//!   singularities because nodes cluster doubly exponentially at both ends;
//! * [`exp_sinh`] for half-lines `[a, inf)`, with logarithmic clustering at
//!   `a` and doubly-exponential reach toward infinity, which copes with power
//!   behaviour at the finite end and power-times-exponential decay at the far
//!   end.
//!
//! Halving the step reuses all previous evaluations; the difference between
//! consecutive levels serves as the error estimate.  The estimate is reliable
//! for integrands analytic on the open interval, which is the only kind the
//! rest of the crate feeds in.

// The trait supplies the float methods in no-std builds; the test harness
// links std, whose inherent methods shadow it.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::{c, Complex};

/// Tolerances and level bounds for the adaptive loop.
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    /// Stop when the level-to-level change is below `abs_tol + rel_tol * |I|`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// First level has step `1`, each level halves it.
    pub max_levels: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-12, abs_tol: 1e-300, max_levels: 10 }
    }
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureResult {
    pub value: Complex,
    /// Difference between the last two levels (zero only in trivial cases).
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const HALF_PI: f64 = core::f64::consts::FRAC_PI_2;

/// Largest `(pi/2) sinh t` we exponentiate; beyond this weights under/overflow.
const MAX_EXPONENT: f64 = 700.0;

/// `integral_a^b f`, endpoints may be integrably singular.
pub fn tanh_sinh<F: FnMut(f64) -> Complex>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> QuadratureResult {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let rad = 0.5 * (hi - lo);
    let mut evaluations = 0usize;

    // Nodes are anchored to the nearer endpoint: the distance
    // rad * (1 - |tanh u|) = 2 rad / (e^{2|u|} + 1) is computed directly, so
    // points exponentially close to a singular endpoint keep full relative
    // accuracy (the naive mid + rad tanh u cancels catastrophically there).
    let eval_node = |t: f64, f: &mut F, evals: &mut usize| -> Option<Complex> {
        let u = HALF_PI * t.sinh();
        if u.abs() > MAX_EXPONENT {
            return None;
        }
        let ch = u.cosh();
        let w = HALF_PI * t.cosh() / (ch * ch); // d x / d t, up to rad
        if !w.is_finite() || w < 1e-320 {
            return None;
        }
        let delta = rad * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let x = if t >= 0.0 { hi - delta } else { lo + delta };
        if x <= lo || x >= hi {
            return None; // rounded onto an endpoint; weight is negligible there
        }
        *evals += 1;
        Some(f(x) * w)
    };

    let mut h = 1.0f64;
    let mut sum = eval_node(0.0, &mut f, &mut evaluations).unwrap_or_else(|| c(0.0, 0.0));
    // level 0: whole-number nodes
    let mut k = 1.0f64;
    loop {
        let mut contrib = c(0.0, 0.0);
        let mut alive = false;
        if let Some(v) = eval_node(k * h, &mut f, &mut evaluations) {
            contrib += v;
            alive = true;
        }
        if let Some(v) = eval_node(-k * h, &mut f, &mut evaluations) {
            contrib += v;
            alive = true;
        }
        sum += contrib;
        if !alive {
            break;
        }
        k += 1.0;
    }
    let mut value = sum * h * rad * sign;
    let mut error_estimate = f64::INFINITY;
    let mut converged = false;

    for _level in 1..=opts.max_levels {
        h *= 0.5;
        // new nodes are odd multiples of the halved step
        let mut new_sum = c(0.0, 0.0);
        let mut k = 1.0f64;
        loop {
            let mut alive = false;
            if let Some(v) = eval_node(k * h, &mut f, &mut evaluations) {
                new_sum += v;
                alive = true;
            }
            if let Some(v) = eval_node(-k * h, &mut f, &mut evaluations) {
                new_sum += v;
                alive = true;
            }
            if !alive {
                break;
            }
            k += 2.0;
        }
        sum += new_sum;
        let next = sum * h * rad * sign;
        error_estimate = (next - value).norm();
        value = next;
        if error_estimate <= opts.abs_tol + opts.rel_tol * value.norm() {
            converged = true;
            break;
        }
    }

    QuadratureResult { value, error_estimate, evaluations, converged }
}

/// `integral_a^inf f`; the finite endpoint may be integrably singular.
pub fn exp_sinh<F: FnMut(f64) -> Complex>(mut f: F, a: f64, opts: &QuadOptions) -> QuadratureResult {
    let mut evaluations = 0usize;

    let eval_node = |t: f64, f: &mut F, evals: &mut usize| -> Option<Complex> {
        let u = HALF_PI * t.sinh();
        if u.abs() > MAX_EXPONENT {
            return None;
        }
        let r = u.exp(); // x - a
        let w = HALF_PI * t.cosh() * r;
        if !(w.is_finite()) || w < 1e-320 {
            return None;
        }
        let x = a + r;
        if x <= a {
            return None;
        }
        *evals += 1;
        let v = f(x) * w;
        if !v.re.is_finite() || !v.im.is_finite() {
            return None; // integrand decayed past representability
        }
        Some(v)
    };

    let mut h = 1.0f64;
    let mut sum = eval_node(0.0, &mut f, &mut evaluations).unwrap_or_else(|| c(0.0, 0.0));
    let mut k = 1.0f64;
    loop {
        let mut alive = false;
        if let Some(v) = eval_node(k * h, &mut f, &mut evaluations) {
            sum += v;
            alive = true;
        }
        if let Some(v) = eval_node(-k * h, &mut f, &mut evaluations) {
            sum += v;
            alive = true;
        }
        if !alive {
            break;
        }
        k += 1.0;
    }
    let mut value = sum * h;
    let mut error_estimate = f64::INFINITY;
    let mut converged = false;

    for _level in 1..=opts.max_levels {
        h *= 0.5;
        let mut k = 1.0f64;
        loop {
            let mut alive = false;
            if let Some(v) = eval_node(k * h, &mut f, &mut evaluations) {
                sum += v;
                alive = true;
            }
            if let Some(v) = eval_node(-k * h, &mut f, &mut evaluations) {
                sum += v;
                alive = true;
            }
            if !alive {
                break;
            }
            k += 2.0;
        }
        let next = sum * h;
        error_estimate = (next - value).norm();
        value = next;
        if error_estimate <= opts.abs_tol + opts.rel_tol * value.norm() {
            converged = true;
            break;
        }
    }

    QuadratureResult { value, error_estimate, evaluations, converged }
}
