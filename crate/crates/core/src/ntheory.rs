//! Exact 64-bit integer arithmetic: primality, factoring, residue symbols,
//! modular square roots and a segmented sieve over arithmetic progressions.
//!
//! Everything here works on `u64`/`i64` with `u128` intermediates. Results
//! are deterministic: Miller-Rabin uses a witness set that is complete for
//! the whole 64-bit range, and Pollard rho walks a fixed seed sequence.

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Default number of integers covered by one sieve segment.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// Trial division bound used by [`factor`] before switching to Pollard rho.
pub const TRIAL_DIVISION_BOUND: u64 = 1 << 10;

// First twelve primes: a complete Miller-Rabin witness set for n < 3.3e24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce a signed value into `[0, m)`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x as u128 * x as u128 > n as u128 {
        x -= 1;
    }
    while (x as u128 + 1) * (x as u128 + 1) <= n as u128 {
        x += 1;
    }
    x
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Deterministic Miller-Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a|n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        bail!(
            Argument,
            "jacobi symbol needs an odd positive modulus, got {n}"
        );
    }
    Ok(jacobi_unchecked(reduce_signed(a, n), n))
}

fn jacobi_unchecked(mut a: u64, mut n: u64) -> i8 {
    let mut sign = 1i8;
    a %= n;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(d|n)`, extending Jacobi to all integers `n` with the
/// usual conventions at `2`, `-1` and `0`.
pub fn kronecker(d: i64, n: i64) -> i8 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut sign = 1i8;
    if n < 0 && d < 0 {
        sign = -1;
    }
    let mut m = n.unsigned_abs();
    let tz = m.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        m >>= tz;
    }
    if m == 1 {
        return sign;
    }
    sign * jacobi_unchecked(reduce_signed(d, m), m)
}

/// The smaller square root of `d` modulo the odd prime `p`.
///
/// The other root is `p - r`; callers that label prime ideals use the
/// returned root as the "plus" choice.
pub fn sqrt_mod_p(d: i64, p: u64) -> Result<u64> {
    if p < 3 || p % 2 == 0 {
        bail!(Argument, "sqrt_mod_p needs an odd prime, got {p}");
    }
    if kronecker(d, p as i64) != 1 {
        bail!(Domain, "{d} is not a nonzero quadratic residue modulo {p}");
    }
    let a = reduce_signed(d, p);
    let r = tonelli_shanks(a, p);
    Ok(r.min(p - r))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let s = q.trailing_zeros();
    q >>= s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    pub value: u64,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega_big(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Build from a list of primes with repetition; the caller guarantees primality.
    pub fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let value = primes.iter().product();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        FactoredInteger { value, factors }
    }

    /// Euler's totient of the value.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Complete factorization: trial division below [`TRIAL_DIVISION_BOUND`],
/// then Pollard-Brent rho on the cofactor with primality certification.
pub fn factor(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factor needs a positive integer");
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p < TRIAL_DIVISION_BOUND && p * p <= m {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        split_into(m, &mut primes);
    }
    FactoredInteger::from_primes(primes)
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if is_square(n) {
        let r = isqrt(n);
        split_into(r, out);
        split_into(r, out);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// A nontrivial factor of the composite `n`, found by Brent's variant of
/// Pollard rho. Seeds are tried in a fixed order so runs are reproducible.
pub fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1..u64::MAX {
        if let Some(d) = brent_attempt(n, 2, c) {
            return d;
        }
    }
    unreachable!("pollard rho exhausted every seed for {n}")
}

fn brent_attempt(n: u64, x0: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
    let mut y = x0;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factor(n).factors.iter().all(|&(_, e)| e == 1)
}

/// Product of the primes dividing `n` to an odd power.
pub fn squarefree_kernel(n: u64) -> u64 {
    factor(n)
        .factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product()
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).phi()
}

/// Multiplicative order of `a` modulo `m`, given the factorization of the
/// group exponent bound `group_order` (typically `phi(m)`).
pub fn multiplicative_order(a: u64, m: u64, group_order: &FactoredInteger) -> u64 {
    let mut order = group_order.value;
    for &(p, e) in &group_order.factors {
        for _ in 0..e {
            if pow_mod(a, order / p, m) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

/// Smallest primitive root modulo `m`, when `(Z/mZ)^x` is cyclic.
pub fn smallest_primitive_root(m: u64) -> Option<u64> {
    if m == 2 {
        return Some(1);
    }
    let phi = factor(euler_phi(m));
    (2..m).find(|&g| gcd(g, m) == 1 && multiplicative_order(g, m, &phi) == phi.value)
}

/// Configuration for the segmented sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    pub segment_size: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }
}

/// Primes `p` in `[lo, hi]` with `p = residue (mod modulus)`, ascending.
pub fn segmented_primes(lo: u64, hi: u64, residue: u64, modulus: u64) -> Result<SegmentedPrimes> {
    SegmentedPrimes::new(lo, hi, residue, modulus, SieveConfig::default())
}

/// Lazy iterator over a segmented sieve of Eratosthenes restricted to one
/// residue class. Memory is one segment plus the base primes up to `sqrt(hi)`.
#[derive(Debug, Clone)]
pub struct SegmentedPrimes {
    hi: u64,
    residue: u64,
    modulus: u64,
    segment_size: u64,
    base_primes: Vec<u64>,
    next_start: u64,
    buffer: Vec<u64>,
    pos: usize,
    composite: Vec<bool>,
}

impl SegmentedPrimes {
    pub fn new(lo: u64, hi: u64, residue: u64, modulus: u64, config: SieveConfig) -> Result<Self> {
        if modulus == 0 {
            bail!(Argument, "modulus must be positive");
        }
        if gcd(residue % modulus, modulus) != 1 {
            bail!(
                Argument,
                "residue {residue} is not coprime to modulus {modulus}"
            );
        }
        if config.segment_size == 0 {
            bail!(Argument, "segment size must be positive");
        }
        let lo = lo.max(2);
        Ok(SegmentedPrimes {
            hi,
            residue: residue % modulus,
            modulus,
            segment_size: config.segment_size as u64,
            base_primes: small_primes(isqrt(hi)),
            next_start: lo,
            buffer: Vec::new(),
            pos: 0,
            composite: Vec::new(),
        })
    }

    fn fill_segment(&mut self) -> bool {
        while self.next_start <= self.hi {
            let start = self.next_start;
            let end = start.saturating_add(self.segment_size - 1).min(self.hi);
            self.next_start = end.saturating_add(1);
            if end == u64::MAX {
                self.hi = end - 1;
                self.next_start = end;
            }
            let len = (end - start + 1) as usize;
            self.composite.clear();
            self.composite.resize(len, false);
            for &p in &self.base_primes {
                let sq = p * p;
                if sq > end {
                    break;
                }
                let first = if sq >= start {
                    sq
                } else {
                    start.div_ceil(p) * p
                };
                let mut k = (first - start) as usize;
                while k < len {
                    self.composite[k] = true;
                    k += p as usize;
                }
            }
            self.buffer.clear();
            self.pos = 0;
            // Walk only the members of the progression inside the segment.
            let offset = (self.residue + self.modulus - start % self.modulus) % self.modulus;
            let mut k = offset;
            while k < len as u64 {
                let n = start + k;
                if n >= 2 && !self.composite[k as usize] {
                    self.buffer.push(n);
                }
                k += self.modulus;
            }
            if !self.buffer.is_empty() {
                return true;
            }
        }
        false
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos >= self.buffer.len() && !self.fill_segment() {
            return None;
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// All primes `<= limit` by a plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}
