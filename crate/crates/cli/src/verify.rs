//! Verification suites: each module of the kernel crate gets a short list of
//! named checks with pinned tolerances, reported one line per check.

use regl4_core::characters::{
    characters, conductor_by_scan, first_even_primitive, gauss_sum, quadratic_character,
    CharacterDecomposition, DirichletCharacter,
};
use regl4_core::bessel::{bessel_k, bessel_moment};
use regl4_core::eisenstein::{
    fe_partner, fourier_coefficient, functional_equation_residual, scattering_phi,
    slash_identity_check, CuspSide,
};
use regl4_core::gamma::{digamma, gamma};
use regl4_core::i2::{
    f_at_zero, f_at_zero_closed, f_derivative, i2_asymptotic_report, i2_constant_term,
    laurent_fit, XiLaurentData,
};
use regl4_core::lfun::{
    completed_l, completed_zeta, completed_zeta_laurent, dirichlet_l, dirichlet_series_partial,
    euler_product_partial, root_number,
};
use regl4_core::quad::{exp_sinh, QuadOptions};
use regl4_core::regprod::{
    dirichlet_factorization_check, product_moderate_pairs, regularized_pairing_oracle,
    triple_product_closed, triple_product_unfolded_auto, EisensteinSurface, ProductSurface,
    TripleProductParams,
};
use regl4_core::c;

use crate::config::RunConfig;
use crate::{from_core, CliError};

/// One named check: a residual against a pinned tolerance, with a short
/// anchor phrase saying what fact is being tested.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

fn check(name: &'static str, anchor: &'static str, residual: f64, tolerance: f64) -> Check {
    Check { name, anchor, residual, tolerance }
}

/// Report text plus the failure count.
pub struct VerifyOutcome {
    pub report: String,
    pub failed: usize,
}

const SUITES: [&str; 6] = ["characters", "special", "lfun", "eisenstein", "regprod", "i2"];

/// Runs one suite (or `all`) and formats one line per check.
pub fn run(suite: &str, cfg: &RunConfig) -> Result<VerifyOutcome, CliError> {
    let selected: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite `{other}`; expected all, characters, special, lfun, eisenstein, \
                 regprod, or i2"
            )))
        }
    };
    let mut report = String::new();
    let mut failed = 0;
    let mut total = 0;
    for name in selected {
        let checks = match name {
            "characters" => characters_suite()?,
            "special" => special_suite()?,
            "lfun" => lfun_suite()?,
            "eisenstein" => eisenstein_suite()?,
            "regprod" => regprod_suite()?,
            "i2" => i2_suite(cfg)?,
            _ => unreachable!(),
        };
        for ch in checks {
            total += 1;
            let verdict = if ch.pass() { "PASS" } else { "FAIL" };
            if !ch.pass() {
                failed += 1;
            }
            report.push_str(&format!(
                "{verdict} {name}/{}: residual {:.3e} within {:.1e} [{}]\n",
                ch.name, ch.residual, ch.tolerance, ch.anchor
            ));
        }
    }
    report.push_str(&format!("verify: {}/{} checks passed\n", total - failed, total));
    Ok(VerifyOutcome { report, failed })
}

fn characters_suite() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();

    let chi13 = first_even_primitive(13)
        .ok_or_else(|| CliError::Usage("no even primitive character mod 13".into()))?;
    let tau13 = gauss_sum(&chi13);
    out.push(check(
        "gauss-modulus",
        "a primitive character's sum has absolute value sqrt(modulus)",
        (tau13.norm() - 13f64.sqrt()).abs(),
        1e-10,
    ));

    let chi5 = quadratic_character(5).map_err(from_core)?;
    out.push(check(
        "gauss-quadratic-5",
        "for the even quadratic character mod 5, tau = sqrt(5)",
        (gauss_sum(&chi5) - c(5f64.sqrt(), 0.0)).norm(),
        1e-12,
    ));

    let chi15 = first_even_primitive(15)
        .ok_or_else(|| CliError::Usage("no even primitive character mod 15".into()))?;
    let dec = CharacterDecomposition::new(&chi15, 3).map_err(from_core)?;
    let mut worst = 0.0f64;
    for k in 1..15i64 {
        if regl4_core::arith::gcd(k as u64, 15) != 1 {
            continue;
        }
        let lhs = dec.chi.eval(k);
        let rhs = dec.chi1.eval(k) * dec.chi2.eval(k).conj();
        worst = worst.max((lhs - rhs).norm());
    }
    out.push(check(
        "decomposition-product",
        "a split character is the product of its coprime components",
        worst,
        1e-12,
    ));

    let mut mismatches = 0u32;
    for modulus in [5u64, 12, 13, 15] {
        for chi in characters(modulus) {
            if conductor_by_scan(&chi) != chi.conductor() {
                mismatches += 1;
            }
        }
    }
    out.push(check(
        "conductor-scan",
        "the stored conductor matches a brute-force periodicity scan",
        mismatches as f64,
        0.5,
    ));

    let even = characters(13).iter().filter(|chi| chi.is_even()).count();
    out.push(check(
        "parity-count-13",
        "exactly half of the characters mod an odd prime are even",
        (even as f64 - 6.0).abs(),
        0.5,
    ));

    Ok(out)
}

fn special_suite() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();

    let nu = c(0.3, 0.2);
    let a = bessel_k(nu, 1.7).map_err(from_core)?;
    let b = bessel_k(-nu, 1.7).map_err(from_core)?;
    out.push(check(
        "bessel-order-symmetry",
        "the decaying Bessel function is even in its order",
        (a - b).norm(),
        1e-12,
    ));

    // The Bessel-pair moment against direct integration over the half-line.
    for (name, w1, w2, w3) in [
        ("bessel-moment-real", c(0.6, 0.0), c(0.55, 0.0), c(2.0, 0.0)),
        ("bessel-moment-complex", c(0.6, 0.4), c(0.55, -0.3), c(2.2, 0.5)),
    ] {
        let closed = bessel_moment(w1, w2, w3).map_err(from_core)?;
        let opts = QuadOptions { rel_tol: 1e-11, abs_tol: 1e-14, ..QuadOptions::default() };
        let two_pi = 2.0 * core::f64::consts::PI;
        let nu1 = w1 - c(0.5, 0.0);
        let nu2 = w2 - c(0.5, 0.0);
        let quad = exp_sinh(
            |y| {
                // Outside this window the integrand is below 1e-19 (power decay
                // at zero, e^{-4 pi y} decay at infinity), so it is cut rather
                // than handed to the Bessel evaluator in its worst regime.
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
        out.push(check(
            name,
            "gamma-quotient closed form equals the half-line integral",
            (closed - quad.value).norm() / closed.norm().max(1e-30),
            1e-8,
        ));
    }

    let z = c(0.3, 0.7);
    let pi = core::f64::consts::PI;
    let reflection = gamma(z) * gamma(c(1.0, 0.0) - z) * (pi * z).sin() / pi - c(1.0, 0.0);
    out.push(check(
        "gamma-reflection",
        "product across the reflection equals pi over the sine",
        reflection.norm(),
        1e-12,
    ));

    let dup = gamma(z) * gamma(z + c(0.5, 0.0))
        / ((c(1.0, 0.0) - z * 2.0) * core::f64::consts::LN_2).exp()
        / pi.sqrt()
        / gamma(z * 2.0)
        - c(1.0, 0.0);
    out.push(check(
        "gamma-duplication",
        "the half-step product collapses to the doubled argument",
        dup.norm(),
        1e-12,
    ));

    let rec = digamma(z + c(1.0, 0.0)) - digamma(z) - 1.0 / z;
    out.push(check(
        "digamma-recurrence",
        "successive arguments differ by the reciprocal",
        rec.norm(),
        1e-12,
    ));

    Ok(out)
}

fn lfun_suite() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();

    out.push(check(
        "xi-at-two",
        "xi(2) = pi/6",
        (completed_zeta(c(2.0, 0.0)).map_err(from_core)?
            - c(core::f64::consts::PI / 6.0, 0.0))
        .norm(),
        1e-14,
    ));

    let chi = quadratic_character(5).map_err(from_core)?;
    let s = c(0.3, 0.7);
    let lhs = completed_l(s, &chi).map_err(from_core)?[0];
    let rhs = root_number(&chi).map_err(from_core)?
        * completed_l(c(1.0, 0.0) - s.conj(), &chi).map_err(from_core)?[0].conj();
    out.push(check(
        "completed-functional-equation",
        "the completed value at s is the root number times the reflected conjugate",
        (lhs - rhs).norm() / lhs.norm().max(1e-30),
        1e-10,
    ));

    let chi13 = first_even_primitive(13)
        .ok_or_else(|| CliError::Usage("no even primitive character mod 13".into()))?;
    let s = c(2.5, 1.0);
    let full = dirichlet_l(s, &chi13).map_err(from_core)?[0];
    let partial = dirichlet_series_partial(s, &chi13, 200_000);
    out.push(check(
        "series-partial",
        "the analytic value matches a long partial sum in the convergent region",
        (full - partial).norm(),
        1e-7,
    ));

    let s = c(3.0, 0.0);
    let full = dirichlet_l(s, &chi13).map_err(from_core)?[0];
    let euler = euler_product_partial(s, &chi13, 10_000);
    out.push(check(
        "euler-product",
        "the analytic value matches a truncated product over primes",
        (full - euler).norm(),
        1e-6,
    ));

    let laurent = completed_zeta_laurent();
    out.push(check(
        "pole-expansion",
        "the fitted expansion around the pole reproduces a unit residue",
        laurent.residual,
        1e-9,
    ));

    Ok(out)
}

fn eisenstein_suite() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();

    let chi = quadratic_character(5).map_err(from_core)?;
    let dec = CharacterDecomposition::new(&chi, 1).map_err(from_core)?;
    let partner = fe_partner(&dec).map_err(from_core)?;
    let s = c(0.7, 0.3);
    let mut worst = 0.0f64;
    for n in (-20i64..=20).filter(|&n| n != 0) {
        let a = fourier_coefficient(n, s, &dec).map_err(from_core)?;
        let b = fourier_coefficient(n, c(1.0, 0.0) - s, &partner).map_err(from_core)?;
        worst = worst.max((a - b).norm());
    }
    out.push(check(
        "coefficient-reflection",
        "divisor-sum coefficients are invariant under the reflected pair",
        worst,
        1e-12,
    ));

    out.push(check(
        "series-functional-equation",
        "the full expansions at s and the reflected pair at 1-s coincide",
        functional_equation_residual(c(0.2, 1.3), c(0.6, 1.1), &dec).map_err(from_core)?,
        1e-8,
    ));

    let phi = scattering_phi(c(0.5, 0.7), &dec).map_err(from_core)?;
    out.push(check(
        "scattering-unitarity",
        "the scattering coefficient has modulus one on the critical line",
        (phi.norm() - 1.0).abs(),
        1e-9,
    ));

    out.push(check(
        "cusp-pullback",
        "slashing by the scaling matrix lands on the scaled companion series",
        slash_identity_check(c(0.15, 1.1), c(1.6, 0.0), &dec, CuspSide::Q2).map_err(from_core)?,
        1e-6,
    ));

    Ok(out)
}

fn regprod_suite() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();

    let trivial = DirichletCharacter::principal(1);
    let dec1 = CharacterDecomposition::new(&trivial, 1).map_err(from_core)?;
    let p1 = TripleProductParams::new(&dec1, c(0.7, 0.0), c(0.9, 0.0), c(3.7, 0.0))
        .map_err(from_core)?;
    let closed1 = triple_product_closed(&p1).map_err(from_core)?;
    let series1 = triple_product_unfolded_auto(&p1, 1e-9).map_err(from_core)?;
    out.push(check(
        "closed-vs-series-level-1",
        "closed form equals the coefficient series inside its strip",
        (closed1 - series1.value).norm() / closed1.norm().max(1e-30),
        1e-7,
    ));

    let chi5 = quadratic_character(5).map_err(from_core)?;
    let dec5 = CharacterDecomposition::new(&chi5, 1).map_err(from_core)?;
    let p5 = TripleProductParams::new(&dec5, c(0.8, 0.0), c(0.9, 0.0), c(3.8, 0.0))
        .map_err(from_core)?;
    let closed5 = triple_product_closed(&p5).map_err(from_core)?;
    let series5 = triple_product_unfolded_auto(&p5, 1e-9).map_err(from_core)?;
    out.push(check(
        "closed-vs-series-level-5",
        "closed form equals the coefficient series inside its strip",
        (closed5 - series5.value).norm() / closed5.norm().max(1e-30),
        1e-7,
    ));

    out.push(check(
        "coefficient-factorization",
        "the coefficient series factors into four L-functions over a zeta value",
        dirichlet_factorization_check(&p5, 200_000).map_err(from_core)?,
        1e-7,
    ));

    let w1 = c(0.7, 0.0);
    let w2 = c(0.9, 0.0);
    let w3 = c(2.5, 0.0);
    let p = TripleProductParams::new(&dec1, w1, w2, w3).map_err(from_core)?;
    let closed = triple_product_closed(&p).map_err(from_core)?;
    let mut f = ProductSurface::new(
        EisensteinSurface::new(w1).map_err(from_core)?,
        EisensteinSurface::new(w2).map_err(from_core)?,
    );
    let moderate = product_moderate_pairs(w1, w2).map_err(from_core)?;
    let opts = QuadOptions { rel_tol: 1e-10, abs_tol: 1e-12, ..QuadOptions::default() };
    let oracle = regularized_pairing_oracle(&mut f, &moderate, w3, &opts).map_err(from_core)?;
    out.push(check(
        "closed-vs-domain-integral",
        "closed form equals the direct fundamental-domain pairing",
        (oracle.value - closed).norm() / (1.0 + closed.norm()),
        1e-5,
    ));

    Ok(out)
}

fn i2_suite(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let level = cfg.levels.first().copied().unwrap_or(5);
    let scen = cfg.scenario(level)?;
    let mut out = Vec::new();

    let f0 = f_at_zero(1, &scen).map_err(from_core)?;
    out.push(check(
        "common-value",
        "all four path factors meet at 6/(pi * index of the level subgroup)",
        (f0 - c(f_at_zero_closed(scen.level()), 0.0)).norm(),
        1e-10,
    ));

    let fit = laurent_fit(&scen).map_err(from_core)?;
    let c0_norm = fit.c0.norm().max(1e-30);
    out.push(check(
        "pole-cancellation",
        "the assembled expansion has no singular part",
        fit.c_minus2.norm().max(fit.c_minus1.norm()) / c0_norm,
        1e-4,
    ));

    let xi_data = XiLaurentData::measured();
    let stencil = i2_constant_term(&scen, &xi_data).map_err(from_core)?;
    out.push(check(
        "constant-two-routes",
        "stencil assembly and grid fit give the same constant term",
        (fit.c0 - stencil).norm() / stencil.norm().max(1e-30),
        1e-5,
    ));

    let mut worst = 0.0f64;
    for j in 1..=4 {
        let rep = f_derivative(j, 1, &scen).map_err(from_core)?;
        worst = worst.max((rep.value - rep.derived).norm() / rep.derived.norm().max(1.0));
    }
    out.push(check(
        "first-derivatives",
        "numeric slopes of the path factors match their closed forms",
        worst,
        1e-5,
    ));

    let rep = i2_asymptotic_report(&scen).map_err(from_core)?;
    out.push(check(
        "large-level-envelope",
        "the remainder beyond the main terms stays inside the padded envelope",
        rep.ratio,
        50.0,
    ));

    Ok(out)
}
