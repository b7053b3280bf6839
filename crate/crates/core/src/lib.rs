//! Numerical kernels for the level-aspect fourth-moment verification suite.
//!
//! The crate is `no_std` + `alloc`: every routine is a pure function of its
//! arguments (no globals, no IO), so the whole surface is thread-safe by
//! construction.  Scalar and complex transcendentals come from `libm` through
//! `num-traits`/`num-complex`, which keeps results identical across hosts.
//!
//! Module map (roughly in dependency order):
//!
//! * [`arith`] — integer utilities: factorization, sieves, gcd.
//! * [`characters`] — Dirichlet characters in Conrey labelling, Gauss sums,
//!   coprime-modulus decompositions, level products over `p | N`.
//! * [`gamma`] — complex log-gamma, digamma, trigamma.
//! * [`quad`] — double-exponential quadrature (finite and half-line).
//! * [`bessel`] — modified Bessel `K_nu` of complex order and the closed-form
//!   Mellin moment of a product of two `K`'s.
//! * [`lfun`] — Hurwitz zeta with s-derivatives, Dirichlet L-functions,
//!   completed L-functions, Laurent data of the completed zeta at `s = 1`,
//!   truncated explicit-formula prime sums.
//! * [`eisenstein`] — Fourier and lattice evaluators for completed
//!   two-character Eisenstein series, scattering entries, cusp data.
//! * [`regprod`] — regularized triple products: closed form, unfolded Dirichlet
//!   series with certified tails, and the slow direct-integration oracle.
//! * [`i2`] — the deformed fourth-moment pipeline: H/F factors, xi assembly,
//!   Laurent fits, the constant term, and asymptotic/GRH diagnostic reports.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod bessel;
pub mod characters;
pub mod eisenstein;
pub mod gamma;
pub mod i2;
pub mod lfun;
pub mod quad;
pub mod regprod;

mod error;

pub use error::{Error, Result};

/// Complex double used across the crate.
pub type Complex = num_complex::Complex<f64>;

/// Shorthand constructor.
#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
