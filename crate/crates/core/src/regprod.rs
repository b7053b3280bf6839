//! Regularized pairings of products of completed Eisenstein series against a
//! third series.
//!
//! The central object is the pairing of `E*(., w1) E*-bar(., w2)` against the
//! unit-normalized series at `w3`, which has a closed form as a ratio of
//! completed L-functions, an unfolded Dirichlet-series form with a certified
//! divisor-bound tail, and an Euler-product factorization of the underlying
//! coefficient series.  A fourth, fully independent route integrates the
//! product directly over the level-one fundamental domain and removes the
//! non-decaying power terms by exact counterterms; it serves as the oracle
//! for the other routes, including at parameters where the series diverges.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

// The trait supplies the float methods in no-std builds; the test harness
// links std, whose inherent methods shadow it.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::arith::factorize;
use crate::bessel::{bessel_k, bessel_moment};
use crate::characters::{level_prime_product, CharacterDecomposition, DirichletCharacter};
use crate::eisenstein::{fourier_coefficient, fourier_tail_bound, pair_with_trivial_first};
use crate::lfun::{completed_l, completed_zeta, dirichlet_l, riemann_zeta};
use crate::quad::{tanh_sinh, QuadOptions};
use crate::{c, Complex, Error, Result};

const PI: f64 = core::f64::consts::PI;

fn cpow(base: f64, w: Complex) -> Complex {
    (w * base.ln()).exp()
}

/// Completed L-function value, with the modulus-one case handled by the
/// completed zeta function.
fn lam(arg: Complex, chi: &DirichletCharacter) -> Result<Complex> {
    if chi.modulus() == 1 {
        completed_zeta(arg)
    } else {
        Ok(completed_l(arg, chi)?[0])
    }
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// Parameters of the triple pairing: a primitive-pair decomposition for the
/// two conjugate factors and the three spectral values.
#[derive(Clone, Debug)]
pub struct TripleProductParams {
    pub dec: CharacterDecomposition,
    pub w1: Complex,
    pub w2: Complex,
    pub w3: Complex,
}

impl TripleProductParams {
    /// Rejects the degenerate configurations: coincident or reflected first
    /// two parameters (the coefficient series collapses there) and the third
    /// parameter at its poles.
    pub fn new(
        dec: &CharacterDecomposition,
        w1: Complex,
        w2: Complex,
        w3: Complex,
    ) -> Result<Self> {
        if (w1 - w2).norm() < 1e-9 {
            return Err(Error::Domain { what: "first two parameters must differ" });
        }
        if (w1 + w2 - c(1.0, 0.0)).norm() < 1e-9 {
            return Err(Error::Domain { what: "first two parameters must not be reflections" });
        }
        if w3.norm() < 1e-9 || (w3 - c(1.0, 0.0)).norm() < 1e-9 {
            return Err(Error::Domain { what: "third parameter sits on a pole" });
        }
        Ok(TripleProductParams { dec: dec.clone(), w1, w2, w3 })
    }

    /// Real part of the effective Dirichlet-series exponent: the series
    /// converges absolutely when this exceeds one.
    pub fn effective_sigma(&self) -> f64 {
        self.w3.re - (self.w1.re - 0.5).abs() - (self.w2.re - 0.5).abs()
    }

    /// The same parameters with the first two relabeled.
    pub fn swapped(&self) -> TripleProductParams {
        TripleProductParams { dec: self.dec.clone(), w1: self.w2, w2: self.w1, w3: self.w3 }
    }
}

// ---------------------------------------------------------------------------
// Closed form
// ---------------------------------------------------------------------------

/// Closed form of the regularized pairing:
///
/// `N^{-w3} q1 (q2/N)^{w1+w2} / xi(2 w3)
///  * prod_{p | N} (1 - p^{w1+w2-w3-1}) / (1 - p^{-2 w3})
///  * xi(w1+w2+w3-1) Lambda(w1-w2+w3, psi) Lambda(-w1+w2+w3, psi-bar)
///  * xi(-w1-w2+w3+1)`
///
/// with `psi` the product character of the pair.  Valid by continuation
/// wherever no factor sits on a pole; errors propagate from the factors.
pub fn triple_product_closed(p: &TripleProductParams) -> Result<Complex> {
    let (w1, w2, w3) = (p.w1, p.w2, p.w3);
    let n = p.dec.chi.modulus();
    let psi = p.dec.product();
    let psi_bar = psi.conj();
    let pref = cpow(n as f64, -w3)
        * p.dec.q1 as f64
        * cpow(p.dec.q2 as f64 / n as f64, w1 + w2);
    let level = level_prime_product(n, w1 + w2 - w3 - 1.0, -w3 * 2.0)?;
    let xi_norm = completed_zeta(w3 * 2.0)?;
    let f1 = completed_zeta(w1 + w2 + w3 - 1.0)?;
    let f2 = lam(w1 - w2 + w3, &psi)?;
    let f3 = lam(-w1 + w2 + w3, &psi_bar)?;
    let f4 = completed_zeta(-w1 - w2 + w3 + 1.0)?;
    Ok(pref * level * f1 * f2 * f3 * f4 / xi_norm)
}

// ---------------------------------------------------------------------------
// Coefficient tables and the unfolded series
// ---------------------------------------------------------------------------

/// Divisor-sum coefficients `lambda_{1,psi}(n, w) = sum_{b | n} conj(psi)(b)
/// (b^2/n)^{w - 1/2}` for all `n <= n_max`, filled multiplicatively from
/// prime powers through a smallest-prime-factor sieve.
fn lambda_table(psi: &DirichletCharacter, w: Complex, n_max: usize) -> Vec<Complex> {
    let nu = w - c(0.5, 0.0);
    let psi_bar = psi.conj();
    let mut spf = alloc::vec![0u32; n_max + 1];
    let mut i = 2usize;
    while i * i <= n_max {
        if spf[i] == 0 {
            let mut j = i * i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        i += 1;
    }
    let mut out = alloc::vec![c(0.0, 0.0); n_max + 1];
    if n_max >= 1 {
        out[1] = c(1.0, 0.0);
    }
    for m in 2..=n_max {
        let p = if spf[m] == 0 { m } else { spf[m] as usize };
        let mut pe = p;
        let mut rest = m / p;
        while rest % p == 0 {
            pe *= p;
            rest /= p;
        }
        if rest > 1 {
            out[m] = out[pe] * out[rest];
            continue;
        }
        // m is a prime power p^e: direct sum over divisor exponents.
        let e = (pe as f64).ln() / (p as f64).ln();
        let e = e.round() as i64;
        let chi_p = psi_bar.eval(p as i64);
        let step = cpow(p as f64, nu * 2.0);
        let base = cpow(p as f64, -nu * e as f64);
        let mut term = base;
        let mut acc = c(0.0, 0.0);
        for j in 0..=e {
            acc += term;
            let _ = j;
            term *= chi_p * step;
        }
        out[m] = acc;
    }
    out
}

/// Certified bound on `sum_{n > m} d4(n) n^{-sigma}` for `sigma > 1`, via
/// partial summation against `sum_{n <= x} d4(n) <= x (1 + ln x)^3`.
pub fn divisor4_tail(m: f64, sigma: f64) -> f64 {
    let beta = sigma - 1.0;
    if beta <= 0.0 {
        return f64::INFINITY;
    }
    let u = 1.0 + m.ln();
    sigma
        * m.powf(-beta)
        * (u * u * u / beta + 3.0 * u * u / (beta * beta) + 6.0 * u / (beta * beta * beta)
            + 6.0 / (beta * beta * beta * beta))
}

/// Result of a truncated unfolded evaluation.
#[derive(Clone, Copy, Debug)]
pub struct UnfoldedTriple {
    pub value: Complex,
    /// Certified bound on the discarded tail of the coefficient series,
    /// including the outer prefactor.
    pub tail_bound: f64,
    pub n_used: u64,
}

fn unfolded_prefactor(p: &TripleProductParams) -> Result<Complex> {
    let n = p.dec.chi.modulus();
    Ok(c(8.0 * p.dec.q1 as f64, 0.0)
        * cpow(p.dec.q2 as f64 / n as f64, p.w1 + p.w2)
        * bessel_moment(p.w1, p.w2, p.w3)?)
}

/// Unfolded form: the outer prefactor times the Bessel-kernel moment times
/// the coefficient Dirichlet series truncated at `n_max`, with a certified
/// divisor-bound tail.  Requires the absolute-convergence strip.
pub fn triple_product_unfolded(p: &TripleProductParams, n_max: u64) -> Result<UnfoldedTriple> {
    let sigma = p.effective_sigma();
    if sigma <= 1.0 {
        return Err(Error::Domain {
            what: "unfolded series requires the absolute-convergence strip",
        });
    }
    if n_max == 0 {
        return Err(Error::Domain { what: "series truncation must be positive" });
    }
    let pref = unfolded_prefactor(p)?;
    let psi = p.dec.product();
    let psi_bar = psi.conj();
    let la = lambda_table(&psi, p.w1, n_max as usize);
    let lb = lambda_table(&psi_bar, p.w2, n_max as usize);
    let mut series = c(0.0, 0.0);
    for n in 1..=n_max as usize {
        series += la[n] * lb[n] * cpow(n as f64, -p.w3);
    }
    let tail = pref.norm() * divisor4_tail(n_max as f64, sigma);
    Ok(UnfoldedTriple { value: pref * series, tail_bound: tail, n_used: n_max })
}

/// Doubles the truncation until the certified tail falls below
/// `tol * max(1, |value|)`, starting from a thousand terms.
pub fn triple_product_unfolded_auto(p: &TripleProductParams, tol: f64) -> Result<UnfoldedTriple> {
    let mut n_max = 1000u64;
    loop {
        let out = triple_product_unfolded(p, n_max)?;
        if out.tail_bound <= tol * out.value.norm().max(1.0) {
            return Ok(out);
        }
        if n_max >= 400_000 {
            return Err(Error::InsufficientTruncation {
                what: "unfolded series tail certificate",
                bound: out.tail_bound,
            });
        }
        n_max *= 2;
    }
}

/// Residual of the Euler-product factorization of the coefficient series:
/// the partial sum up to `n_max` against
///
/// `zeta(w1+w2+w3-1) L(w1-w2+w3, psi) L(-w1+w2+w3, psi-bar)
///  * L(-w1-w2+w3+1, chi0_N) / L(2 w3, chi0_N)`
///
/// where `chi0_N` is the principal character mod `N` (its L-function is the
/// zeta function with the level's Euler factors removed).
pub fn dirichlet_factorization_check(p: &TripleProductParams, n_max: u64) -> Result<f64> {
    if p.effective_sigma() <= 1.0 {
        return Err(Error::Domain {
            what: "factorization check requires the absolute-convergence strip",
        });
    }
    let n = p.dec.chi.modulus();
    let psi = p.dec.product();
    let psi_bar = psi.conj();
    let la = lambda_table(&psi, p.w1, n_max as usize);
    let lb = lambda_table(&psi_bar, p.w2, n_max as usize);
    let mut partial = c(0.0, 0.0);
    for k in 1..=n_max as usize {
        partial += la[k] * lb[k] * cpow(k as f64, -p.w3);
    }
    let principal_l = |s: Complex| -> Result<Complex> {
        let mut v = riemann_zeta(s)?[0];
        for (q, _) in factorize(n) {
            v *= c(1.0, 0.0) - cpow(q as f64, -s);
        }
        Ok(v)
    };
    let zeta1 = riemann_zeta(p.w1 + p.w2 + p.w3 - 1.0)?[0];
    let l2 = if n == 1 {
        riemann_zeta(p.w1 - p.w2 + p.w3)?[0]
    } else {
        dirichlet_l(p.w1 - p.w2 + p.w3, &psi)?[0]
    };
    let l3 = if n == 1 {
        riemann_zeta(-p.w1 + p.w2 + p.w3)?[0]
    } else {
        dirichlet_l(-p.w1 + p.w2 + p.w3, &psi_bar)?[0]
    };
    let l4 = principal_l(-p.w1 - p.w2 + p.w3 + 1.0)?;
    let l5 = principal_l(p.w3 * 2.0)?;
    let closed = zeta1 * l2 * l3 * l4 / l5;
    Ok((partial - closed).norm())
}

// ---------------------------------------------------------------------------
// Fourier-mode surfaces
// ---------------------------------------------------------------------------

/// Horizontal Fourier data of a period-one surface at a fixed height: the
/// coefficient of `e(n x)` sits at `coef[n + half_width]`.
#[derive(Clone, Debug)]
pub struct ModeStack {
    pub half_width: usize,
    pub coef: Vec<Complex>,
}

impl ModeStack {
    pub fn new(half_width: usize) -> Self {
        ModeStack { half_width, coef: alloc::vec![c(0.0, 0.0); 2 * half_width + 1] }
    }

    pub fn mode(&self, n: i64) -> Complex {
        let idx = n + self.half_width as i64;
        if idx < 0 || idx >= self.coef.len() as i64 {
            c(0.0, 0.0)
        } else {
            self.coef[idx as usize]
        }
    }

    pub fn set_mode(&mut self, n: i64, v: Complex) {
        let idx = (n + self.half_width as i64) as usize;
        self.coef[idx] = v;
    }

    pub fn zero_mode(&self) -> Complex {
        self.coef[self.half_width]
    }

    pub fn eval(&self, x: f64) -> Complex {
        let mut acc = c(0.0, 0.0);
        for (k, v) in self.coef.iter().enumerate() {
            let n = k as i64 - self.half_width as i64;
            let t = 2.0 * PI * n as f64 * x;
            acc += *v * c(t.cos(), t.sin());
        }
        acc
    }

    /// Full mode convolution of two stacks.
    pub fn product(&self, other: &ModeStack) -> ModeStack {
        let m = self.half_width + other.half_width;
        let mut out = ModeStack::new(m);
        for (i, a) in self.coef.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let na = i as i64 - self.half_width as i64;
            for (j, b) in other.coef.iter().enumerate() {
                let nb = j as i64 - other.half_width as i64;
                let idx = (na + nb + m as i64) as usize;
                out.coef[idx] += *a * *b;
            }
        }
        out
    }

    pub fn scaled(&self, factor: Complex) -> ModeStack {
        ModeStack {
            half_width: self.half_width,
            coef: self.coef.iter().map(|v| *v * factor).collect(),
        }
    }
}

/// A surface on the upper half-plane described by its horizontal Fourier
/// stacks; implementations may cache per-height work.
pub trait FourierSurface {
    fn stack_at(&mut self, y: f64) -> Result<ModeStack>;
}

/// The level-one completed series at a fixed parameter, as a surface.
pub struct EisensteinSurface {
    pub w: Complex,
    xi_a: Complex,
    xi_b: Complex,
    dec: CharacterDecomposition,
    lambdas: Vec<Complex>,
    cache: BTreeMap<u64, ModeStack>,
}

impl EisensteinSurface {
    pub fn new(w: Complex) -> Result<Self> {
        let trivial = DirichletCharacter::principal(1);
        let dec = pair_with_trivial_first(&trivial)?;
        Ok(EisensteinSurface {
            w,
            xi_a: completed_zeta(w * 2.0)?,
            xi_b: completed_zeta(w * 2.0 - 1.0)?,
            dec,
            lambdas: alloc::vec![c(0.0, 0.0)],
            cache: BTreeMap::new(),
        })
    }

    /// Constant-term description `(coefficient, exponent)` pairs.
    pub fn moderate_pairs(&self) -> Vec<(Complex, Complex)> {
        alloc::vec![(self.xi_a, self.w), (self.xi_b, c(1.0, 0.0) - self.w)]
    }

    fn lambda(&mut self, n: usize) -> Result<Complex> {
        while self.lambdas.len() <= n {
            let m = self.lambdas.len();
            self.lambdas.push(fourier_coefficient(m as i64, self.w, &self.dec)?);
        }
        Ok(self.lambdas[n])
    }
}

impl FourierSurface for EisensteinSurface {
    fn stack_at(&mut self, y: f64) -> Result<ModeStack> {
        if let Some(st) = self.cache.get(&y.to_bits()) {
            return Ok(st.clone());
        }
        let mut m = 4u32;
        while fourier_tail_bound(y, self.w, m) > 1e-17 {
            m *= 2;
            if m > 1 << 20 {
                return Err(Error::InsufficientTruncation {
                    what: "surface mode cutoff",
                    bound: fourier_tail_bound(y, self.w, m),
                });
            }
        }
        let nu = self.w - c(0.5, 0.0);
        let mut st = ModeStack::new(m as usize);
        st.set_mode(0, self.xi_a * cpow(y, self.w) + self.xi_b * cpow(y, c(1.0, 0.0) - self.w));
        for n in 1..=m as usize {
            let xarg = 2.0 * PI * n as f64 * y;
            if xarg > 600.0 {
                break;
            }
            let v = self.lambda(n)? * bessel_k(nu, xarg)? * 2.0 * y.sqrt();
            st.set_mode(n as i64, v);
            st.set_mode(-(n as i64), v);
        }
        self.cache.insert(y.to_bits(), st.clone());
        Ok(st)
    }
}

/// Pointwise product of two surfaces.
pub struct ProductSurface<A: FourierSurface, B: FourierSurface> {
    pub a: A,
    pub b: B,
    cache: BTreeMap<u64, ModeStack>,
}

impl<A: FourierSurface, B: FourierSurface> ProductSurface<A, B> {
    pub fn new(a: A, b: B) -> Self {
        ProductSurface { a, b, cache: BTreeMap::new() }
    }
}

impl<A: FourierSurface, B: FourierSurface> FourierSurface for ProductSurface<A, B> {
    fn stack_at(&mut self, y: f64) -> Result<ModeStack> {
        if let Some(st) = self.cache.get(&y.to_bits()) {
            return Ok(st.clone());
        }
        let st = self.a.stack_at(y)?.product(&self.b.stack_at(y)?);
        self.cache.insert(y.to_bits(), st.clone());
        Ok(st)
    }
}

/// A surface times a constant.
pub struct ScaledSurface<S: FourierSurface> {
    pub inner: S,
    pub factor: Complex,
}

impl<S: FourierSurface> FourierSurface for ScaledSurface<S> {
    fn stack_at(&mut self, y: f64) -> Result<ModeStack> {
        Ok(self.inner.stack_at(y)?.scaled(self.factor))
    }
}

/// The `(coefficient, exponent)` pairs of the product of two level-one
/// constant terms: the moderate part of a product surface.
pub fn product_moderate_pairs(w1: Complex, w2: Complex) -> Result<Vec<(Complex, Complex)>> {
    let a1 = completed_zeta(w1 * 2.0)?;
    let a2 = completed_zeta(w1 * 2.0 - 1.0)?;
    let b1 = completed_zeta(w2 * 2.0)?;
    let b2 = completed_zeta(w2 * 2.0 - 1.0)?;
    let one = c(1.0, 0.0);
    Ok(alloc::vec![
        (a1 * b1, w1 + w2),
        (a1 * b2, one + w1 - w2),
        (a2 * b1, one - w1 + w2),
        (a2 * b2, one * 2.0 - w1 - w2),
    ])
}

// ---------------------------------------------------------------------------
// Fundamental-domain pairing oracle
// ---------------------------------------------------------------------------

/// Outcome of the direct fundamental-domain pairing.
#[derive(Clone, Copy, Debug)]
pub struct OracleResult {
    pub value: Complex,
    pub quadrature_error: f64,
    pub tail_bound: f64,
}

/// Regularized pairing of a surface against the unit-normalized level-one
/// series at `w3`, computed directly on the fundamental domain.
///
/// The domain splits into the wedge below height one, integrated exactly in
/// `x` mode by mode, and the cylinder above it, where the integrand's zero
/// mode is corrected by the power terms `P(y)` built from the surface's
/// declared moderate part and the series' constant term.  The regularized
/// contribution of each discarded power `y^alpha` on the cylinder is the
/// continued value `1/(1 - alpha)`, added back exactly.  The declared
/// moderate part is checked against the surface's zero mode at a height where
/// everything else has decayed; a mismatch is a domain error.
pub fn regularized_pairing_oracle<S: FourierSurface>(
    f: &mut S,
    moderate: &[(Complex, Complex)],
    w3: Complex,
    opts: &QuadOptions,
) -> Result<OracleResult> {
    let mut g = EisensteinSurface::new(w3)?;
    let g_pairs = g.moderate_pairs();
    // Counterterms: one per pair of power exponents, each kept away from the
    // vanishing denominator.
    let mut counter = c(0.0, 0.0);
    for &(a, e) in moderate {
        for &(b, fexp) in &g_pairs {
            let alpha = e + fexp;
            if (alpha.re - 1.0).abs() < 0.05 {
                return Err(Error::Singular {
                    what: "regularized power integral too close to its pole",
                });
            }
            counter += a * b / (c(1.0, 0.0) - alpha);
        }
    }
    let poly = |y: f64, pairs: &[(Complex, Complex)]| -> Complex {
        let mut acc = c(0.0, 0.0);
        for &(coefc, e) in pairs {
            acc += coefc * cpow(y, e);
        }
        acc
    };
    // Honesty check on the declared moderate part at a height where the
    // exponentially small modes are far below the tolerance in use.
    {
        let probe = 4.0;
        let zm = f.stack_at(probe)?.zero_mode();
        let pw = poly(probe, moderate);
        if (zm - pw).norm() > 1e-8 * (1.0 + pw.norm()) {
            return Err(Error::Domain {
                what: "declared moderate part disagrees with the surface zero mode",
            });
        }
    }

    let mut err: Option<Error> = None;
    // Wedge below height one: x-integral done exactly per mode.
    let wedge = tanh_sinh(
        |y| {
            let st = match f.stack_at(y).and_then(|sf| Ok(sf.product(&g.stack_at(y)?))) {
                Ok(st) => st,
                Err(e) => {
                    if err.is_none() {
                        err = Some(e);
                    }
                    return c(0.0, 0.0);
                }
            };
            let x0 = (1.0 - y * y).max(0.0).sqrt();
            let mut acc = st.zero_mode() * (1.0 - 2.0 * x0);
            for n in 1..=st.half_width as i64 {
                let weight = -(2.0 * PI * n as f64 * x0).sin() / (PI * n as f64);
                acc += (st.mode(n) + st.mode(-n)) * weight;
            }
            acc / (y * y)
        },
        3f64.sqrt() / 2.0,
        1.0,
        opts,
    );
    if let Some(e) = err {
        return Err(e);
    }
    if !wedge.converged {
        return Err(Error::NonConvergence {
            what: "wedge integral of the pairing oracle",
            achieved: wedge.error_estimate,
        });
    }

    // Cylinder above height one: zero mode with the power part removed.
    let y_hi = 6.0;
    let mut err2: Option<Error> = None;
    let mut at_top = c(0.0, 0.0);
    let cyl = tanh_sinh(
        |y| {
            let zm = match f.stack_at(y).and_then(|sf| Ok(sf.product(&g.stack_at(y)?))) {
                Ok(st) => st.zero_mode(),
                Err(e) => {
                    if err2.is_none() {
                        err2 = Some(e);
                    }
                    return c(0.0, 0.0);
                }
            };
            let mut power = c(0.0, 0.0);
            for &(a, e) in moderate {
                for &(b, fexp) in &g_pairs {
                    power += a * b * cpow(y, e + fexp);
                }
            }
            let v = (zm - power) / (y * y);
            if y == y_hi {
                at_top = v;
            }
            v
        },
        1.0,
        y_hi,
        opts,
    );
    if let Some(e) = err2 {
        return Err(e);
    }
    if !cyl.converged {
        return Err(Error::NonConvergence {
            what: "cylinder integral of the pairing oracle",
            achieved: cyl.error_estimate,
        });
    }
    // Beyond y_hi the subtracted zero mode decays at least like the first
    // cross mode, exp(-4 pi y).
    let tail = at_top.norm() / (4.0 * PI) * 2.0 + 1e-300;

    let xi_norm = completed_zeta(w3 * 2.0)?;
    Ok(OracleResult {
        value: (wedge.value + cyl.value + counter) / xi_norm,
        quadrature_error: (wedge.error_estimate + cyl.error_estimate) / xi_norm.norm(),
        tail_bound: tail / xi_norm.norm(),
    })
}
