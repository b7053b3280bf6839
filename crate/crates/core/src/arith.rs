//! Integer utilities: gcd/inverse, factorization, sieves, discrete logs.
//!
//! Everything here works at "desk scale" (moduli up to a few thousand, sieve
//! limits up to a few million), so plain trial division and dense tables are
//! the right tools; nothing is asymptotically clever.

use alloc::vec;
use alloc::vec::Vec;

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular exponentiation `b^e mod m` (m > 0).
pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
        b = 0; // silence unused warning path; b already folded into bb
    }
    let _ = b;
    acc as u64
}

/// Inverse of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mod_inv(a: u64, m: u64) -> u64 {
    // Extended Euclid on signed 128-bit; m is small so this is overkill-safe.
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let t = t0 - q * t1;
        t0 = t1;
        t1 = t;
    }
    debug_assert!(r0 == 1, "mod_inv of non-unit");
    t0.rem_euclid(m as i128) as u64
}

/// Prime factorization as `(p, multiplicity)` pairs, p ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0u32;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Euler phi.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| p.pow(k - 1) * (p - 1))
        .product::<u64>()
        .max(1)
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let f = factorize(n);
    let mut out = vec![1u64];
    for (p, k) in f {
        let len = out.len();
        let mut pe = 1u64;
        for _ in 0..k {
            pe *= p;
            for i in 0..len {
                let v = out[i] * pe;
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Primes below `limit` by Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_comp = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !is_comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                is_comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for `1..=limit` (`spf[1] = 1`).
///
/// Used to evaluate multiplicative coefficient arrays in one linear pass.
pub fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    if limit >= 1 {
        spf[1] = 1;
    }
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Smallest generator of the cyclic group `(Z/p^k)^*` for odd prime `p`.
pub fn primitive_root(p: u64, k: u32) -> u64 {
    debug_assert!(p % 2 == 1, "primitive_root expects an odd prime");
    let m = p.pow(k);
    let phi = p.pow(k - 1) * (p - 1);
    let fac = factorize(phi);
    'cand: for g in 2..m {
        if gcd(g, m) != 1 {
            continue;
        }
        for &(q, _) in &fac {
            if mod_pow(g, phi / q, m) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("cyclic group without generator")
}

/// Combine residues `x ≡ a (mod m)` and `x ≡ b (mod n)` for coprime `m, n`.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    // x = a + m * t with t ≡ (b - a) / m (mod n)
    let am = a % m;
    let bn = b % n;
    let minv = mod_inv(m % n, n);
    let diff = (bn + n - am % n) % n;
    let t = (diff as u128 * minv as u128 % n as u128) as u64;
    (am as u128 + m as u128 * t as u128) as u64 % (m as u128 * n as u128) as u64
}
