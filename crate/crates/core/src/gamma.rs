//! Complex log-gamma, digamma, and trigamma.
//!
//! All three use the same scheme: an asymptotic (Stirling-type) expansion with
//! Bernoulli coefficients, valid once `|z|` is large enough, combined with the
//! recurrence to shift small arguments up and the reflection formula for
//! `Re z < 1/2`.  With terms through `B_20` and a shift radius of 12 the
//! expansion error sits well below 1e-15 relative, so accuracy is limited by
//! accumulated rounding in the shift (a few ulps per step).
//!
//! `log_gamma` is analytic on the cut plane minus poles but its imaginary part
//! is only determined up to the branch inherited from the reflection term;
//! consumers that need `Gamma` itself should exponentiate, which removes the
//! ambiguity.  Arguments at or very near the poles `0, -1, -2, ...` produce
//! huge or non-finite values rather than an error; callers keep away from them.

// The trait supplies the float methods in no-std builds; the test harness
// links std, whose inherent methods shadow it.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::{c, Complex};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `B_{2n}` for `n = 1..=10`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Arguments are shifted until `|z| >= SHIFT_RADIUS` before the expansion.
const SHIFT_RADIUS: f64 = 12.0;

const LOG_2PI_HALF: f64 = 0.918_938_533_204_672_7; // log(2*pi)/2

/// Stable `log(sin(pi z))` (up to a multiple of `2 pi i`), factored so the
/// exponentials never overflow for large `|Im z|`.
fn log_sin_pi(z: Complex) -> Complex {
    let w = z * core::f64::consts::PI;
    let i = c(0.0, 1.0);
    if w.im >= 0.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        (i / 2.0).ln() - i * w + (c(1.0, 0.0) - (i * w * 2.0).exp()).ln()
    } else {
        (-i / 2.0).ln() + i * w + (c(1.0, 0.0) - (-i * w * 2.0).exp()).ln()
    }
}

/// Stable `pi * cot(pi z)`.
fn pi_cot_pi(z: Complex) -> Complex {
    let w = z * core::f64::consts::PI;
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let t = if w.im >= 0.0 {
        let e = (i * w * 2.0).exp(); // |e| <= 1
        i * (e + one) / (e - one)
    } else {
        let e = (-i * w * 2.0).exp();
        i * (one + e) / (one - e)
    };
    t * core::f64::consts::PI
}

fn stirling_log_gamma(z: Complex) -> Complex {
    let lz = z.ln();
    let mut acc = (z - 0.5) * lz - z + LOG_2PI_HALF;
    let z2 = z * z;
    let mut pow = z; // z^{2n-1}
    for (n, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (n as f64 + 1.0);
        acc += *b / (m * (m - 1.0)) / pow;
        pow *= z2;
    }
    acc
}

/// `log Gamma(z)`; see the module notes on branch and poles.
pub fn log_gamma(z: Complex) -> Complex {
    if z.re < 0.5 {
        // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        return core::f64::consts::PI.ln() - log_sin_pi(z) - log_gamma(c(1.0, 0.0) - z);
    }
    let mut shift = c(0.0, 0.0);
    let mut w = z;
    while w.norm() < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling_log_gamma(w) - shift
}

/// `Gamma(z) = exp(log Gamma(z))`.
pub fn gamma(z: Complex) -> Complex {
    log_gamma(z).exp()
}

fn asymptotic_digamma(z: Complex) -> Complex {
    let mut acc = z.ln() - 0.5 / z;
    let z2 = z * z;
    let mut pow = z2; // z^{2n}
    for (n, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (n as f64 + 1.0);
        acc -= *b / m / pow;
        pow *= z2;
    }
    acc
}

/// `psi(z) = (log Gamma)'(z)`.
pub fn digamma(z: Complex) -> Complex {
    if z.re < 0.5 {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma(c(1.0, 0.0) - z) - pi_cot_pi(z);
    }
    let mut shift = c(0.0, 0.0);
    let mut w = z;
    while w.norm() < SHIFT_RADIUS {
        shift += 1.0 / w;
        w += 1.0;
    }
    asymptotic_digamma(w) - shift
}

fn asymptotic_trigamma(z: Complex) -> Complex {
    let mut acc = 1.0 / z + 0.5 / (z * z);
    let z2 = z * z;
    let mut pow = z2 * z; // z^{2n+1}
    for b in BERNOULLI.iter() {
        acc += *b / pow;
        pow *= z2;
    }
    acc
}

/// `psi'(z)`, the derivative of the digamma function.
pub fn trigamma(z: Complex) -> Complex {
    if z.re < 0.5 {
        // psi'(z) = -psi'(1 - z) + pi^2 / sin^2(pi z)
        let s = (z * core::f64::consts::PI).sin();
        let pi2 = core::f64::consts::PI * core::f64::consts::PI;
        return -trigamma(c(1.0, 0.0) - z) + pi2 / (s * s);
    }
    let mut shift = c(0.0, 0.0);
    let mut w = z;
    while w.norm() < SHIFT_RADIUS {
        shift += 1.0 / (w * w);
        w += 1.0;
    }
    asymptotic_trigamma(w) + shift
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = core::f64::consts::PI;

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1.0)
    }

    /// Off-pole sample grid covering all quadrants out to |Re|, |Im| ~ 20.
    fn grid() -> impl Iterator<Item = Complex> {
        const RES: [f64; 8] = [-19.3, -10.7, -3.3, -0.4, 0.6, 2.5, 7.8, 19.2];
        const IMS: [f64; 7] = [-20.0, -7.1, -0.8, 0.0, 0.9, 6.4, 20.0];
        RES.iter().flat_map(|&re| IMS.iter().map(move |&im| c(re, im)))
    }

    #[test]
    fn gamma_special_values() {
        assert!(rel(gamma(c(0.5, 0.0)), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(1.0, 0.0)), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(1.5, 0.0)), c(PI.sqrt() / 2.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(5.0, 0.0)), c(24.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(12.5, 0.0)), c(PI.sqrt() * 0.5 * 1.5 * 2.5 * 3.5 * 4.5 * 5.5 * 6.5 * 7.5 * 8.5 * 9.5 * 10.5 * 11.5, 0.0)) < 1e-13);
    }

    #[test]
    fn recurrence_ratio_on_grid() {
        // Gamma(z + 1) = z Gamma(z), tested branch-free as an exponentiated ratio.
        for z in grid() {
            let d = log_gamma(z + 1.0) - log_gamma(z) - z.ln();
            assert!((d.exp() - 1.0).norm() < 1e-12, "recurrence at {z}: residual {}", (d.exp() - 1.0).norm());
        }
    }

    #[test]
    fn reflection_ratio() {
        // Gamma(z) Gamma(1 - z) sin(pi z) = pi
        for z in [c(0.3, 0.0), c(0.2, 5.0), c(-2.4, -7.0), c(6.7, 2.2), c(-0.3, 17.0)] {
            let d = log_gamma(z) + log_gamma(c(1.0, 0.0) - z) + log_sin_pi(z) - c(PI.ln(), 0.0);
            assert!((d.exp() - 1.0).norm() < 1e-12, "reflection at {z}");
        }
    }

    #[test]
    fn duplication_ratio() {
        // Gamma(2z) = 2^{2z-1} / sqrt(pi) * Gamma(z) Gamma(z + 1/2)
        for z in [c(0.7, 0.0), c(1.3, 2.0), c(4.2, -9.0), c(0.9, 18.0)] {
            let lhs = log_gamma(z * 2.0);
            let rhs = (z * 2.0 - 1.0) * 2f64.ln() - 0.5 * PI.ln() + log_gamma(z)
                + log_gamma(z + 0.5);
            assert!(((lhs - rhs).exp() - 1.0).norm() < 1e-12, "duplication at {z}");
        }
    }

    #[test]
    fn digamma_special_values_and_recurrence() {
        assert!((digamma(c(1.0, 0.0)) - c(-EULER_GAMMA, 0.0)).norm() < 1e-13);
        assert!((digamma(c(0.5, 0.0)) - c(-EULER_GAMMA - 2.0 * 2f64.ln(), 0.0)).norm() < 1e-13);
        assert!((digamma(c(2.0, 0.0)) - c(1.0 - EULER_GAMMA, 0.0)).norm() < 1e-13);
        for z in grid() {
            let d = digamma(z + 1.0) - digamma(z) - 1.0 / z;
            assert!(d.norm() < 1e-11 * digamma(z).norm().max(1.0), "digamma recurrence at {z}");
        }
    }

    #[test]
    fn digamma_is_derivative_of_log_gamma() {
        let h = 1e-5;
        for z in [c(1.7, 0.3), c(3.2, -4.0), c(0.8, 9.0), c(-2.6, 1.4)] {
            let num = (log_gamma(z + h) - log_gamma(z - h)) / (2.0 * h);
            assert!(rel(num, digamma(z)) < 1e-8, "digamma vs numeric at {z}");
        }
    }

    #[test]
    fn trigamma_special_values_and_recurrence() {
        assert!((trigamma(c(1.0, 0.0)) - c(PI * PI / 6.0, 0.0)).norm() < 1e-12);
        assert!((trigamma(c(0.5, 0.0)) - c(PI * PI / 2.0, 0.0)).norm() < 1e-12);
        for z in grid() {
            let d = trigamma(z + 1.0) - trigamma(z) + 1.0 / (z * z);
            assert!(d.norm() < 1e-11 * trigamma(z).norm().max(1.0), "trigamma recurrence at {z}");
        }
    }

    #[test]
    fn trigamma_is_derivative_of_digamma() {
        let h = 1e-5;
        for z in [c(1.7, 0.3), c(3.2, -4.0), c(0.8, 9.0), c(-2.6, 1.4)] {
            let num = (digamma(z + h) - digamma(z - h)) / (2.0 * h);
            assert!(rel(num, trigamma(z)) < 1e-8, "trigamma vs numeric at {z}");
        }
    }
}
