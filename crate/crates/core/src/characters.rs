//! Dirichlet characters with exact root-of-unity values.
//!
//! A character mod `q` is stored by its Conrey index `n`: for each prime power
//! `p^k || q` fix a generator of the unit group (the two-generator `-1, 5`
//! convention at powers of two) and let discrete logarithms of `n` and of the
//! argument pair up in the exponent.  This gives a canonical bijection between
//! units `n mod q` and characters mod `q` that is compatible with restriction
//! to coprime factors of `q`, which is what the coprime-modulus decomposition
//! below relies on.
//!
//! Values are kept as exact angles `e(num/den)` so that Gauss sums and
//! orthogonality tests are exact up to a single rounding at materialization.

use alloc::vec;
use alloc::vec::Vec;
// The trait supplies the float methods in no-std builds; the test harness
// links std, whose inherent methods shadow it.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::arith::{crt, divisors, factorize, gcd, mod_inv, primitive_root};
use crate::{c, Complex, Error, Result};

/// An exact angle `e(num/den) = exp(2*pi*i*num/den)` with `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Angle {
    pub num: u64,
    pub den: u64,
}

impl Angle {
    /// Reduce `num/den` modulo 1 to lowest terms (`den >= 1`).
    pub fn new(num: i128, den: u128) -> Self {
        debug_assert!(den > 0);
        let d = den as i128;
        let n = num.rem_euclid(d);
        let g = gcd(n as u64, den as u64).max(1);
        Angle { num: n as u64 / g, den: den as u64 / g }
    }

    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    pub fn add(self, o: Angle) -> Angle {
        let den = (self.den as u128) * (o.den as u128) / gcd(self.den, o.den) as u128;
        let num = self.num as u128 * (den / self.den as u128)
            + o.num as u128 * (den / o.den as u128);
        Angle::new(num as i128, den)
    }

    pub fn conj(self) -> Angle {
        Angle::new(-(self.num as i128), self.den as u128)
    }

    /// Materialize as a unit complex number.
    pub fn to_complex(self) -> Complex {
        if self.num == 0 {
            return c(1.0, 0.0);
        }
        // 2*num/den is exact in f64 for our denominators; one rounding in sin/cos.
        let t = core::f64::consts::PI * (2.0 * self.num as f64 / self.den as f64);
        let (s, co) = t.sin_cos();
        c(co, s)
    }
}

/// A Dirichlet character mod `q`, identified by its Conrey index.
///
/// The full value table over residues mod `q` is built once at construction
/// and immutable afterwards, so shared references are safe across threads.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    conductor: u64,
    order: u64,
    parity: i8,
    values: Vec<Option<Angle>>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Discrete-log data for one prime-power factor.
enum Comp {
    /// Odd `p^k`: cyclic with generator `g`; `dlog[x]` defined on units.
    Odd { m: u64, phi: u64, dlog: Vec<u32>, a: u64 },
    /// `2^1`: trivial.
    Two,
    /// `2^2`: `x = (-1)^eps`; store the index's eps.
    Four { eps: u8 },
    /// `2^k, k >= 3`: `x = (-1)^eps * 5^a`; tables for both exponents.
    TwoPow { m: u64, half: u64, eps: Vec<u8>, five: Vec<u32>, e: u8, a: u64 },
}

impl DirichletCharacter {
    /// Character mod `modulus` with Conrey index `index` (must be a unit).
    pub fn new(modulus: u64, index: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Domain { what: "character modulus must be positive" });
        }
        let index = if modulus == 1 { 1 } else { index % modulus };
        if gcd(index.max(1), modulus) != 1 || (index == 0 && modulus > 1) {
            return Err(Error::Domain { what: "Conrey index must be coprime to the modulus" });
        }

        let mut comps: Vec<Comp> = Vec::new();
        let mut conductor = 1u64;
        let mut order = 1u64;
        let mut parity = 1i8;

        for (p, k) in factorize(modulus) {
            if p == 2 {
                match k {
                    1 => comps.push(Comp::Two),
                    2 => {
                        let eps = if index % 4 == 3 { 1 } else { 0 };
                        if eps == 1 {
                            conductor *= 4;
                            order = lcm(order, 2);
                            parity = -parity;
                        }
                        comps.push(Comp::Four { eps });
                    }
                    _ => {
                        let m = 2u64.pow(k);
                        let half = m / 4;
                        let mut eps = vec![0u8; m as usize];
                        let mut five = vec![0u32; m as usize];
                        let mut x = 1u64;
                        for a in 0..half {
                            eps[x as usize] = 0;
                            five[x as usize] = a as u32;
                            let y = (m - x) % m; // -x
                            eps[y as usize] = 1;
                            five[y as usize] = a as u32;
                            x = x * 5 % m;
                        }
                        let e = eps[(index % m) as usize];
                        let a = five[(index % m) as usize] as u64;
                        let ord5 = if a == 0 { 1 } else { half / gcd(a, half) };
                        // conductor of the 2-part
                        let cond2 = if a == 0 {
                            if e == 0 { 1 } else { 4 }
                        } else {
                            4 * ord5
                        };
                        conductor *= cond2;
                        order = lcm(order, lcm(if e == 1 { 2 } else { 1 }, ord5));
                        if e == 1 {
                            parity = -parity;
                        }
                        comps.push(Comp::TwoPow { m, half, eps, five, e, a });
                    }
                }
            } else {
                let m = p.pow(k);
                let phi = m / p * (p - 1);
                let g = primitive_root(p, k);
                let mut dlog = vec![u32::MAX; m as usize];
                let mut x = 1u64;
                for t in 0..phi {
                    dlog[x as usize] = t as u32;
                    x = x * g % m;
                }
                let a = dlog[(index % m) as usize] as u64;
                if a != 0 {
                    let d = phi / gcd(a, phi);
                    // conductor exponent: 1 + v_p(d)
                    let mut cond = p;
                    let mut dd = d;
                    while dd % p == 0 {
                        cond *= p;
                        dd /= p;
                    }
                    conductor *= cond;
                    order = lcm(order, d);
                    if a % 2 == 1 {
                        parity = -parity;
                    }
                }
                comps.push(Comp::Odd { m, phi, dlog, a });
            }
        }

        // Value table.
        let mut values: Vec<Option<Angle>> = vec![None; modulus as usize];
        'res: for x in 0..modulus {
            if modulus > 1 && gcd(x, modulus) != 1 {
                continue;
            }
            let mut ang = Angle::ZERO;
            for comp in &comps {
                match comp {
                    Comp::Two => {}
                    Comp::Four { eps } => {
                        let ex = if x % 4 == 3 { 1u64 } else { 0 };
                        ang = ang.add(Angle::new((*eps as u64 * ex) as i128, 2));
                    }
                    Comp::TwoPow { m, half, eps, five, e, a } => {
                        let xi = (x % m) as usize;
                        let ee = (*e as u64) * (eps[xi] as u64);
                        let aa = *a * five[xi] as u64;
                        ang = ang.add(Angle::new(ee as i128, 2));
                        ang = ang.add(Angle::new(aa as i128, *half as u128));
                    }
                    Comp::Odd { m, phi, dlog, a } => {
                        let b = dlog[(x % m) as usize];
                        if b == u32::MAX {
                            continue 'res;
                        }
                        ang = ang.add(Angle::new((*a * b as u64) as i128, *phi as u128));
                    }
                }
            }
            values[x as usize] = Some(ang);
        }

        Ok(DirichletCharacter { modulus, index, conductor, order, parity, values })
    }

    /// The principal character mod `modulus`.
    pub fn principal(modulus: u64) -> Self {
        Self::new(modulus, 1).expect("index 1 is always a unit")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.index == 1 || self.modulus == 1
    }

    /// `+1` for even (`chi(-1) = 1`), `-1` for odd.
    pub fn parity(&self) -> i8 {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == 1
    }

    /// Order in the character group.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// True when all values are real (order divides 2).
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// Exact angle of `chi(m)`, or `None` when `gcd(m, q) > 1`.
    pub fn angle_at(&self, m: i64) -> Option<Angle> {
        let x = m.rem_euclid(self.modulus as i64) as usize;
        self.values[x]
    }

    /// `chi(m)` as a complex number (zero on non-units).
    pub fn eval(&self, m: i64) -> Complex {
        match self.angle_at(m) {
            Some(a) => a.to_complex(),
            None => c(0.0, 0.0),
        }
    }

    /// The conjugate character (Conrey index inverse).
    pub fn conj(&self) -> Self {
        if self.modulus == 1 {
            return self.clone();
        }
        Self::new(self.modulus, mod_inv(self.index, self.modulus))
            .expect("inverse index is a unit")
    }

    /// Product with a character to a coprime modulus (result mod `q1*q2`).
    pub fn mul_coprime(&self, other: &Self) -> Result<Self> {
        if gcd(self.modulus, other.modulus) != 1 {
            return Err(Error::Domain { what: "mul_coprime requires coprime moduli" });
        }
        let q = self.modulus * other.modulus;
        let n = crt(
            self.index % self.modulus.max(1),
            self.modulus,
            other.index % other.modulus.max(1),
            other.modulus,
        );
        Self::new(q, if q == 1 { 1 } else { n })
    }
}

/// All characters mod `q`, ordered by ascending Conrey index.
pub fn characters(modulus: u64) -> Vec<DirichletCharacter> {
    if modulus == 1 {
        return vec![DirichletCharacter::principal(1)];
    }
    (1..=modulus)
        .filter(|n| gcd(*n, modulus) == 1)
        .map(|n| DirichletCharacter::new(modulus, n).expect("unit index"))
        .collect()
}

/// A factorization `chi = chi1 * conj(chi2)` with `chi1` primitive mod `q1`,
/// `chi2` primitive mod `q2 = N/q1`, `gcd(q1, q2) = 1`.
#[derive(Clone, Debug)]
pub struct CharacterDecomposition {
    pub chi: DirichletCharacter,
    pub chi1: DirichletCharacter,
    pub chi2: DirichletCharacter,
    pub q1: u64,
    pub q2: u64,
}

impl CharacterDecomposition {
    /// Split a primitive character mod `N` along the coprime factor `q1 | N`.
    pub fn new(chi: &DirichletCharacter, q1: u64) -> Result<Self> {
        let n = chi.modulus();
        if !chi.is_primitive() {
            return Err(Error::Domain { what: "decomposition requires a primitive character" });
        }
        if q1 == 0 || n % q1 != 0 {
            return Err(Error::Domain { what: "q1 must divide the modulus" });
        }
        let q2 = n / q1;
        if gcd(q1, q2) != 1 {
            return Err(Error::Domain { what: "q1 and N/q1 must be coprime" });
        }
        let idx = chi.index();
        let chi1 = DirichletCharacter::new(q1, if q1 == 1 { 1 } else { idx % q1 })?;
        let conj2 = DirichletCharacter::new(q2, if q2 == 1 { 1 } else { idx % q2 })?;
        let chi2 = conj2.conj();
        debug_assert!(chi1.is_primitive() && chi2.is_primitive());
        Ok(CharacterDecomposition { chi: chi.clone(), chi1, chi2, q1, q2 })
    }

    /// The product `chi1 * chi2` (primitive mod `N`), the twisting character of
    /// the slashed series at the companion cusp.
    pub fn product(&self) -> DirichletCharacter {
        self.chi1.mul_coprime(&self.chi2).expect("coprime by construction")
    }
}

/// Gauss sum `tau(chi) = sum_{a mod q} chi(a) e(a/q)`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex {
    let q = chi.modulus();
    let mut acc = c(0.0, 0.0);
    for a in 0..q {
        if let Some(ang) = chi.angle_at(a as i64) {
            acc += ang.add(Angle::new(a as i128, q.max(1) as u128)).to_complex();
        }
    }
    if q == 1 {
        acc = c(1.0, 0.0);
    }
    acc
}

/// `nu(N) = N * prod_{p | N} (1 + 1/p)`, the index of the Hecke congruence
/// subgroup of level `N` in the full modular group.  Exact integer.
pub fn index_nu(n: u64) -> u64 {
    factorize(n).into_iter().map(|(p, k)| p.pow(k - 1) * (p + 1)).product::<u64>().max(1)
}

/// `prod_{p | N} (1 - p^u) / (1 - p^v)` for complex exponents.
///
/// Errors when some denominator factor vanishes (within 1e-12).
pub fn level_prime_product(n: u64, u: Complex, v: Complex) -> Result<Complex> {
    let mut acc = c(1.0, 0.0);
    for (p, _) in factorize(n) {
        let lp = (p as f64).ln();
        let pu = (u * lp).exp();
        let pv = (v * lp).exp();
        let den = c(1.0, 0.0) - pv;
        if den.norm() < 1e-12 {
            return Err(Error::Singular { what: "level prime product denominator 1 - p^v vanishes" });
        }
        acc *= (c(1.0, 0.0) - pu) / den;
    }
    Ok(acc)
}

/// Kernel selector for [`level_log_sum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelLogKind {
    /// `sum log p / (p + 1)`
    LogOverPPlusOne,
    /// `sum log p / (p - 1)`
    LogOverPMinusOne,
    /// `sum p log^2 p / (p + 1)^2`
    PLogSqOverPPlusOneSq,
    /// `sum p log^2 p / (p - 1)^2`
    PLogSqOverPMinusOneSq,
    /// `sum log p / p`
    LogOverP,
}

/// Sum of the selected kernel over the distinct primes dividing `N`.
pub fn level_log_sum(n: u64, kind: LevelLogKind) -> f64 {
    factorize(n)
        .into_iter()
        .map(|(p, _)| {
            let pf = p as f64;
            let l = pf.ln();
            match kind {
                LevelLogKind::LogOverPPlusOne => l / (pf + 1.0),
                LevelLogKind::LogOverPMinusOne => l / (pf - 1.0),
                LevelLogKind::PLogSqOverPPlusOneSq => pf * l * l / ((pf + 1.0) * (pf + 1.0)),
                LevelLogKind::PLogSqOverPMinusOneSq => pf * l * l / ((pf - 1.0) * (pf - 1.0)),
                LevelLogKind::LogOverP => l / pf,
            }
        })
        .sum()
}

/// Smallest Conrey index whose character mod `N` is primitive and even, if any.
pub fn first_even_primitive(modulus: u64) -> Option<DirichletCharacter> {
    characters(modulus).into_iter().find(|ch| ch.is_primitive() && ch.is_even())
}

/// The real (quadratic) primitive character mod `N` when it is unique.
pub fn quadratic_character(modulus: u64) -> Result<DirichletCharacter> {
    let mut found: Vec<DirichletCharacter> =
        characters(modulus).into_iter().filter(|ch| ch.is_primitive() && ch.order() == 2).collect();
    match found.len() {
        1 => Ok(found.pop().expect("len checked")),
        0 => Err(Error::Domain { what: "no primitive quadratic character at this modulus" }),
        _ => Err(Error::Domain { what: "primitive quadratic character is not unique at this modulus" }),
    }
}

/// Brute-force conductor: smallest `f | q` with `chi(a) = 1` whenever
/// `a = 1 (mod f)` and `gcd(a, q) = 1`.  Test oracle; quadratic in `q`.
pub fn conductor_by_scan(chi: &DirichletCharacter) -> u64 {
    let q = chi.modulus();
    'f: for f in divisors(q) {
        for a in 0..q {
            let ang = match chi.angle_at(a as i64) {
                Some(ang) => ang,
                None => continue, // not a unit
            };
            if a % f != 1 % f {
                continue;
            }
            if ang != Angle::ZERO {
                continue 'f;
            }
        }
        return f;
    }
    q
}
