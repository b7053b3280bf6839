//! Acceptance gate: twelve end-to-end checks, one test per criterion, each
//! with pinned tolerances.  Together they tie every closed form in the
//! library to an independent route: direct quadrature, truncated series,
//! fundamental-domain integration, reflection identities, finite-difference
//! ladders, and large-level trend envelopes.

use rayon::prelude::*;

use regl4_core::bessel::{bessel_k, bessel_moment};
use regl4_core::characters::{
    characters, first_even_primitive, CharacterDecomposition, DirichletCharacter,
};
use regl4_core::eisenstein::{
    fe_partner, fourier_coefficient, functional_equation_residual, scattering_phi,
};
use regl4_core::i2::{
    f_at_zero, f_at_zero_closed, f_derivative, f_extrapolated, grh_diagnostics,
    i2_asymptotic_report, i2_constant_term, laurent_fit, I2Scenario, XiLaurentData,
};
use regl4_core::lfun::riemann_zeta;
use regl4_core::quad::{exp_sinh, QuadOptions};
use regl4_core::regprod::{
    dirichlet_factorization_check, product_moderate_pairs, regularized_pairing_oracle,
    triple_product_closed, triple_product_unfolded_auto, EisensteinSurface, ProductSurface,
    TripleProductParams,
};
use regl4_core::{c, Complex};

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(1e-30)
}

/// Decomposition for a level: principal at one, first even primitive above.
fn dec(level: u64, q1: u64) -> CharacterDecomposition {
    let chi = if level == 1 {
        DirichletCharacter::principal(1)
    } else {
        first_even_primitive(level).expect("even primitive character exists")
    };
    CharacterDecomposition::new(&chi, q1).expect("valid split")
}

fn scenario(level: u64, t: f64) -> I2Scenario {
    I2Scenario::new(&dec(level, 1), t).expect("valid scenario")
}

/// The scenario grid shared by the zero-deformation, pole-cancellation, and
/// two-route constant-term checks.
fn scenario_grid() -> Vec<(u64, f64)> {
    let mut grid = Vec::new();
    for level in [5u64, 13, 15, 17] {
        for t in [0.5f64, 1.0, 2.0] {
            grid.push((level, t));
        }
    }
    grid
}

/// Closed Gamma-quotient for the Bessel-pair moment against direct
/// integration over the half-line: at least twenty parameter triples inside
/// the convergence strip, relative error at most 1e-8.
#[test]
fn a01_bessel_pair_moment_matches_direct_quadrature() {
    let w1s = [c(0.6, 0.0), c(0.55, 0.35), c(0.5, 1.0)];
    let w2s = [c(0.52, 0.0), c(0.7, -0.25), c(0.45, 0.6)];
    let w3s = [c(1.6, 0.0), c(2.0, 0.3), c(2.4, -0.5)];
    let opts = QuadOptions { rel_tol: 1e-11, abs_tol: 1e-14, ..QuadOptions::default() };
    let two_pi = 2.0 * std::f64::consts::PI;
    let started = std::time::Instant::now();
    let mut tested = 0usize;
    for w1 in w1s {
        for w2 in w2s {
            for w3 in w3s {
                let nu1 = w1 - c(0.5, 0.0);
                let nu2 = w2 - c(0.5, 0.0);
                // Strip condition: every sign combination must stay positive.
                let in_strip = [1.0f64, -1.0].iter().all(|&e1| {
                    [1.0f64, -1.0]
                        .iter()
                        .all(|&e2| (w3 + nu1 * e1 + nu2 * e2).re > 0.05)
                });
                if !in_strip {
                    continue;
                }
                let closed = bessel_moment(w1, w2, w3).unwrap();
                let quad = exp_sinh(
                    |y| {
                        // Below 1e-12 the integrand decays like a positive
                        // power, above 12 like e^{-4 pi y}; both tails sit
                        // under 1e-19, far inside the absolute tolerance.
                        if !(1e-12..=12.0).contains(&y) {
                            return c(0.0, 0.0);
                        }
                        let k1 = bessel_k(nu1, two_pi * y).unwrap_or_default();
                        let k2 = bessel_k(nu2, two_pi * y).unwrap_or_default();
                        ((w3 - c(1.0, 0.0)) * y.ln()).exp() * k1 * k2
                    },
                    0.0,
                    &opts,
                );
                assert!(quad.converged, "quadrature stalled at {w1} {w2} {w3}");
                let err = rel(quad.value, closed);
                assert!(err <= 1e-8, "triple {w1} {w2} {w3}: relative error {err:.3e}");
                tested += 1;
            }
        }
    }
    assert!(tested >= 20, "only {tested} in-strip triples");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "budget exceeded: {elapsed:.1}s");
}

/// The coefficient series factors into four L-functions over a zeta value at
/// every level, including the classical divisor-squared case at level one.
#[test]
fn a02_coefficient_series_factors_into_l_products() {
    let started = std::time::Instant::now();
    let points = [
        (c(0.7, 0.0), c(0.9, 0.0), c(3.7, 0.0)),
        (c(0.8, 0.0), c(0.9, 0.0), c(3.8, 0.0)),
        (c(0.6, 0.2), c(0.9, -0.1), c(3.9, 0.5)),
        (c(0.55, 0.0), c(0.85, 0.0), c(4.2, 0.0)),
        (c(0.75, 0.4), c(0.95, 0.0), c(3.9, -0.3)),
    ];
    for (level, q1) in [(1u64, 1u64), (5, 1), (13, 1), (15, 1), (15, 3)] {
        let d = dec(level, q1);
        for &(w1, w2, w3) in &points {
            let p = TripleProductParams::new(&d, w1, w2, w3).unwrap();
            let residual = dirichlet_factorization_check(&p, 200_000).unwrap();
            assert!(
                residual <= 1e-7,
                "N={level} q1={q1} at ({w1},{w2},{w3}): residual {residual:.3e}"
            );
        }
    }

    // Classical case: sum of d(n)^2 n^{-s} equals zeta(s)^4 / zeta(2s).
    let n_max = 200_000usize;
    let mut divisors = vec![0u32; n_max + 1];
    for d in 1..=n_max {
        for m in (d..=n_max).step_by(d) {
            divisors[m] += 1;
        }
    }
    let s = c(3.0, 0.0);
    let mut series = c(0.0, 0.0);
    for n in 1..=n_max {
        let dn = divisors[n] as f64;
        series += c(dn * dn, 0.0) * (-s * (n as f64).ln()).exp();
    }
    let z1 = riemann_zeta(s).unwrap()[0];
    let z2 = riemann_zeta(s * 2.0).unwrap()[0];
    let closed = z1.powu(4) / z2;
    let err = rel(series, closed);
    assert!(err <= 1e-7, "divisor-squared series: relative error {err:.3e}");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "budget exceeded: {elapsed:.1}s");
}

/// The closed pairing formula against both independent routes: truncated
/// coefficient series with a certified tail, and direct integration over the
/// fundamental domain at level one.
#[test]
fn a03_closed_pairing_equals_series_and_domain_integral() {
    let started = std::time::Instant::now();
    let points = [
        (c(0.7, 0.0), c(0.9, 0.0), c(3.7, 0.0)),
        (c(0.6, 0.2), c(0.9, -0.1), c(3.9, 0.5)),
        (c(0.75, 0.4), c(0.95, 0.0), c(3.9, -0.3)),
    ];
    for (level, q1) in [(1u64, 1u64), (5, 1), (13, 1), (15, 1), (15, 3)] {
        let d = dec(level, q1);
        for &(w1, w2, w3) in &points {
            let p = TripleProductParams::new(&d, w1, w2, w3).unwrap();
            let closed = triple_product_closed(&p).unwrap();
            let series = triple_product_unfolded_auto(&p, 1e-9).unwrap();
            let err = rel(series.value, closed);
            assert!(
                err <= 1e-7,
                "N={level} q1={q1} at ({w1},{w2},{w3}): closed vs series {err:.3e}"
            );
        }
    }

    // Fundamental-domain route, level one, outside certified series reach.
    let (w1, w2, w3) = (c(0.7, 0.0), c(0.9, 0.0), c(2.5, 0.0));
    let p = TripleProductParams::new(&dec(1, 1), w1, w2, w3).unwrap();
    let closed = triple_product_closed(&p).unwrap();
    let mut f = ProductSurface::new(
        EisensteinSurface::new(w1).unwrap(),
        EisensteinSurface::new(w2).unwrap(),
    );
    let moderate = product_moderate_pairs(w1, w2).unwrap();
    let opts = QuadOptions { rel_tol: 1e-10, abs_tol: 1e-12, ..QuadOptions::default() };
    let oracle = regularized_pairing_oracle(&mut f, &moderate, w3, &opts).unwrap();
    let err = (oracle.value - closed).norm() / (1.0 + closed.norm());
    assert!(err <= 1e-5, "closed vs domain integral: {err:.3e}");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "budget exceeded: {elapsed:.1}s");
}

/// Reflection identities: the divisor-sum coefficients are exactly invariant
/// under the reflected pair, and the full expansions agree as functions.
#[test]
fn a04_reflection_identities_hold_at_coefficient_and_series_level() {
    let s = c(0.7, 0.3);
    for level in [5u64, 13, 15] {
        let d = dec(level, 1);
        let partner = fe_partner(&d).unwrap();
        for n in (-100i64..=100).filter(|&n| n != 0) {
            let a = fourier_coefficient(n, s, &d).unwrap();
            let b = fourier_coefficient(n, c(1.0, 0.0) - s, &partner).unwrap();
            assert!(
                (a - b).norm() <= 1e-12,
                "N={level} n={n}: coefficient reflection gap {:.3e}",
                (a - b).norm()
            );
        }
        let r = functional_equation_residual(c(0.2, 1.5), c(0.6, 1.1), &d).unwrap();
        assert!(r <= 1e-8, "N={level}: series reflection residual {r:.3e}");
    }
}

/// The regularized integral of a double product of completed series at level
/// one vanishes: the domain integration annihilates every such pair.
#[test]
fn a05_double_product_regularized_integral_vanishes() {
    let opts = QuadOptions { rel_tol: 1e-10, abs_tol: 1e-12, ..QuadOptions::default() };
    for (v, w3) in [
        (c(0.6, 0.0), c(2.1, 0.0)),
        (c(0.55, 0.2), c(2.4, 0.0)),
        (c(0.6, 0.0), c(2.6, 0.3)),
    ] {
        let mut f = EisensteinSurface::new(v).unwrap();
        let moderate = f.moderate_pairs();
        let out = regularized_pairing_oracle(&mut f, &moderate, w3, &opts).unwrap();
        assert!(
            out.value.norm() <= 1e-6,
            "pair ({v}, {w3}): integral {} should vanish",
            out.value
        );
    }
}

/// All four path factors meet at one value at zero deformation: equal to
/// 1/(xi(2) * index of the level subgroup) by formula, and recovered by
/// extrapolation of the deformed factors.
#[test]
fn a06_path_factors_share_the_common_value_at_zero() {
    let failures: Vec<String> = scenario_grid()
        .par_iter()
        .flat_map(|&(level, t)| {
            let scen = scenario(level, t);
            let closed = c(f_at_zero_closed(level), 0.0);
            let mut bad = Vec::new();
            for j in 1..=4usize {
                let direct = f_at_zero(j, &scen).unwrap();
                let gap = (direct - closed).norm();
                if gap > 1e-10 {
                    bad.push(format!("N={level} T={t} j={j}: formula gap {gap:.3e}"));
                }
                let extrap = f_extrapolated(j, &scen).unwrap();
                let egap = (extrap - closed).norm();
                if egap > 1e-7 {
                    bad.push(format!("N={level} T={t} j={j}: extrapolation gap {egap:.3e}"));
                }
            }
            bad
        })
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

/// The assembled expansion has no singular part: both fitted pole
/// coefficients are at noise level relative to the constant term, on every
/// scenario of the shared grid.
#[test]
fn a07_singular_coefficients_cancel_in_the_fit() {
    let failures: Vec<String> = scenario_grid()
        .par_iter()
        .filter_map(|&(level, t)| {
            let scen = scenario(level, t);
            let fit = laurent_fit(&scen).unwrap();
            let bound = 1e-4 * fit.c0.norm();
            let worst = fit.c_minus2.norm().max(fit.c_minus1.norm());
            if worst > bound {
                Some(format!(
                    "N={level} T={t}: singular parts {:.3e}/{:.3e} vs bound {bound:.3e}",
                    fit.c_minus2.norm(),
                    fit.c_minus1.norm()
                ))
            } else {
                None
            }
        })
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

/// The constant term by two unrelated routes: stencil derivatives assembled
/// with the pole data, and a direct Laurent fit on the grid.  Relative
/// agreement at 1e-5 on every scenario.
#[test]
fn a08_constant_term_agrees_between_derivative_and_fit_routes() {
    let xi_data = XiLaurentData::measured();
    let failures: Vec<String> = scenario_grid()
        .par_iter()
        .filter_map(|&(level, t)| {
            let started = std::time::Instant::now();
            let scen = scenario(level, t);
            let stencil = i2_constant_term(&scen, &xi_data).unwrap();
            let fit = laurent_fit(&scen).unwrap();
            let err = rel(fit.c0, stencil);
            let elapsed = started.elapsed().as_secs_f64();
            if elapsed >= 120.0 {
                return Some(format!("N={level} T={t}: budget exceeded, {elapsed:.1}s"));
            }
            if err > 1e-5 {
                Some(format!(
                    "N={level} T={t}: routes disagree {err:.3e} (stencil {stencil}, fit {})",
                    fit.c0
                ))
            } else {
                None
            }
        })
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

/// First-derivative closed forms hold at 1e-5 for all four factors.  For the
/// first two, the printed displays agree with the derivation; for the last
/// two they differ in one local term, and the numeric route sides with the
/// derivation — the gap to each reading is printed as an audit.  Second
/// derivatives are audited the same way, not gated.
#[test]
fn a09_first_derivative_displays_match_and_second_order_audit_reports() {
    for (level, t) in [(5u64, 1.0f64), (13, 1.0), (13, 2.0), (15, 0.5)] {
        let scen = scenario(level, t);
        for j in 1..=4usize {
            let rep = f_derivative(j, 1, &scen).unwrap();
            let scale = rep.derived.norm().max(1.0);
            let err = (rep.value - rep.derived).norm() / scale;
            assert!(err <= 1e-5, "N={level} T={t} j={j}: first derivative {err:.3e}");
            if j <= 2 {
                let printed_gap = (rep.printed - rep.derived).norm() / scale;
                assert!(
                    printed_gap <= 1e-12,
                    "N={level} T={t} j={j}: display should equal derivation, gap {printed_gap:.3e}"
                );
            } else {
                println!(
                    "first-derivative audit N={level} T={t} j={j}: numeric {:.6} derived {:.6} printed {:.6}",
                    rep.value.re, rep.derived.re, rep.printed.re
                );
            }
        }
        for j in 1..=4usize {
            let rep = f_derivative(j, 2, &scen).unwrap();
            let scale = rep.derived.norm().max(1.0);
            let to_derived = (rep.value - rep.derived).norm() / scale;
            let to_printed = (rep.value - rep.printed).norm() / scale;
            assert!(
                to_derived <= 1e-4,
                "N={level} T={t} j={j}: second derivative vs derivation {to_derived:.3e}"
            );
            println!(
                "second-derivative audit N={level} T={t} j={j}: |numeric-derived| {to_derived:.3e}, \
                 |numeric-printed| {to_printed:.3e}, ladder {:.3e}",
                rep.ladder_gap
            );
        }
    }
}

/// Prime-level sweep at height one: at every odd prime level up to 101 the
/// remainder beyond the two main terms stays inside fifty times the
/// lower-order envelope; the normalized leading ratio is reported as a trend.
#[test]
fn a10_prime_level_sweep_stays_inside_the_envelope() {
    let started = std::time::Instant::now();
    let primes: [u64; 24] = [
        5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
        97, 101,
    ];
    let reports: Vec<_> = primes
        .par_iter()
        .map(|&p| {
            let scen = scenario(p, 1.0);
            i2_asymptotic_report(&scen).unwrap()
        })
        .collect();
    for rep in &reports {
        assert!(
            rep.ratio.is_finite() && rep.ratio <= 50.0,
            "N={}: remainder/envelope ratio {:.2}",
            rep.level,
            rep.ratio
        );
        println!(
            "level {:>3}: constant {:>12.6}, remainder/envelope {:>7.3}, leading ratio {:>8.4}",
            rep.level, rep.normalized, rep.ratio, rep.leading_ratio
        );
    }
    // Trend report only: the leading ratio drifts toward its limit far too
    // slowly to gate on at desk scale.
    let first = reports.first().unwrap().leading_ratio;
    let last = reports.last().unwrap().leading_ratio;
    println!("leading-ratio trend across the sweep: {first:.4} -> {last:.4}");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "budget exceeded: {elapsed:.1}s");
}

/// The scattering coefficient has modulus one on the critical line for every
/// even primitive pair at every level up to 30, across a grid of heights.
#[test]
fn a11_scattering_coefficient_is_unitary_on_the_critical_line() {
    // Level one first: the coefficient is a ratio of reflected completed
    // zeta values, conjugate on the critical line.
    let triv = CharacterDecomposition::new(&DirichletCharacter::principal(1), 1).unwrap();
    for n in 2..=30u64 {
        for chi in characters(n) {
            if !chi.is_primitive() || !chi.is_even() {
                continue;
            }
            for q1 in (1..=n).filter(|q| n % q == 0) {
                if regl4_core::arith::gcd(q1, n / q1) != 1 {
                    continue;
                }
                let d = CharacterDecomposition::new(&chi, q1).unwrap();
                for t in [0.0f64, 0.4, 1.1, 2.3, 3.7] {
                    let phi = scattering_phi(c(0.5, t), &d).unwrap();
                    assert!(
                        (phi.norm() - 1.0).abs() <= 1e-9,
                        "N={n} q1={q1} t={t}: |phi| = {}",
                        phi.norm()
                    );
                }
            }
        }
    }
    // t = 0 is excluded at level one: the coefficient's completed zeta
    // values sit exactly on the pole there.
    for t in [0.4f64, 1.1, 2.3, 3.7] {
        let phi = scattering_phi(c(0.5, t), &triv).unwrap();
        assert!((phi.norm() - 1.0).abs() <= 1e-9, "level 1 t={t}: |phi| = {}", phi.norm());
    }
}

/// Zero-distribution diagnostics: ratio reports stay finite at three levels,
/// and the distance between the logarithmic derivative and the smoothed
/// prime sum shrinks as the cutoff grows.
#[test]
fn a12_zero_distribution_diagnostics_trend_with_the_cutoff() {
    for level in [5u64, 13, 101] {
        let scen = scenario(level, 1.0);
        let mut residuals = Vec::new();
        for cutoff in [1e2, 1e3, 1e4] {
            let rep = grh_diagnostics(&scen, cutoff).unwrap();
            assert!(
                rep.first_ratio.is_finite() && rep.second_ratio.is_finite(),
                "N={level} cutoff {cutoff}: non-finite ratios"
            );
            residuals.push(rep.prime_sum_residual);
            println!(
                "level {level} cutoff {cutoff:>7}: first ratio {:.4}, second ratio {:.4}, \
                 prime-sum residual {:.3e}",
                rep.first_ratio, rep.second_ratio, rep.prime_sum_residual
            );
        }
        assert!(
            residuals[2] < residuals[0],
            "N={level}: residual should shrink across the cutoffs, got {residuals:?}"
        );
    }
}
