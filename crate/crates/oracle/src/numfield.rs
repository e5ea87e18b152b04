//! Real quadratic and biquadratic fields with class numbers computed from
//! ideals: a factor base of prime ideals up to (at least) the Minkowski
//! bound, and relations from smooth elements of small height.
//!
//! Elements are stored in the basis `e_S = sqrt(r_S)`, where `r_S` is the
//! squarefree part of the product of the generators indexed by `S`, with
//! coordinates scaled by 4. The ring of integers sits between
//! `Z[e_S]` and `(1/4) Z[e_S]`, and is found coset by coset.

use crate::arith::{gcd, legendre, primes_upto, sqrt_mod};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::lattice::{determinant, from_triangular, Lattice};

pub struct Field {
    n: usize,
    radicands: Vec<i128>,
    table: Vec<(usize, i128)>,
    omega_rows: Vec<Vec<i128>>,
    omega: Lattice,
    structure: Vec<Vec<Vec<i128>>>,
    one: Vec<i128>,
    discriminant: i128,
    reduced: Vec<Vec<i128>>,
}

impl Field {
    /// `Q(sqrt g_1, ..., sqrt g_k)` for multiplicatively independent
    /// squarefree `g_i > 1`.
    pub fn new(gens: &[u64]) -> Field {
        let k = gens.len();
        let n = 1usize << k;
        let mut radicands = vec![1i128; n];
        for s in 1..n {
            let mut r = 1i128;
            for (i, &g) in gens.iter().enumerate() {
                if s >> i & 1 == 1 {
                    let g = g as i128;
                    let c = gcd(r as u64, g as u64) as i128;
                    r = (r / c) * (g / c);
                }
            }
            radicands[s] = r;
        }
        for s in 1..n {
            assert!(radicands[s] > 1, "generators are not independent");
            assert!(
                !radicands[..s].contains(&radicands[s]),
                "generators are not independent"
            );
        }
        let mut table = vec![(0, 0); n * n];
        for s in 0..n {
            for t in 0..n {
                let c = gcd(radicands[s] as u64, radicands[t] as u64) as i128;
                debug_assert_eq!(radicands[s] * radicands[t], c * c * radicands[s ^ t]);
                table[s * n + t] = (s ^ t, c);
            }
        }
        let mut field = Field {
            n,
            radicands,
            table,
            omega_rows: Vec::new(),
            omega: Lattice::new(n),
            structure: Vec::new(),
            one: Vec::new(),
            discriminant: 0,
            reduced: Vec::new(),
        };
        field.find_maximal_order();
        field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn radicands(&self) -> &[i128] {
        &self.radicands
    }

    pub fn discriminant(&self) -> i128 {
        self.discriminant
    }

    pub fn minkowski_bound(&self) -> f64 {
        let n = self.n as f64;
        let fact: f64 = (1..=self.n).map(|i| i as f64).product();
        fact / n.powi(self.n as i32) * (self.discriminant as f64).sqrt()
    }

    /// Product of elements given in quarter coordinates, in quarter coordinates.
    fn mul_quarter(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0i128; n];
        for s in 0..n {
            if a[s] == 0 {
                continue;
            }
            for t in 0..n {
                let (u, c) = self.table[s * n + t];
                out[u] += a[s] * b[t] * c;
            }
        }
        for x in &mut out {
            assert_eq!(*x % 4, 0, "product left the maximal order");
            *x /= 4;
        }
        out
    }

    /// Whether `v / 4` (in the `e_S` basis) is an algebraic integer, read
    /// off the characteristic polynomial of multiplication by it.
    fn is_integral_quarter(&self, v: &[i128]) -> bool {
        let n = self.n;
        let mut a = vec![vec![0i128; n]; n];
        for s in 0..n {
            for t in 0..n {
                let (u, c) = self.table[t * n + s];
                a[s][u] += v[t] * c;
            }
        }
        let coeffs = charpoly(&a);
        (1..=n).all(|k| coeffs[n - k] % 4i128.pow(k as u32) == 0)
    }

    fn find_maximal_order(&mut self) {
        let n = self.n;
        let mut lattice = Lattice::with_multiple(n, 4);
        let mut v = vec![0i128; n];
        loop {
            if self.is_integral_quarter(&v) {
                lattice.insert(&v);
            }
            // next vector in {0,1,2,3}^n
            let mut i = 0;
            while i < n {
                v[i] += 1;
                if v[i] < 4 {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        self.omega_rows = lattice.basis();
        self.omega = from_triangular(self.omega_rows.clone());
        self.structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let q = self.mul_quarter(&self.omega_rows[i], &self.omega_rows[j]);
                        self.from_quarter(&q)
                    })
                    .collect()
            })
            .collect();
        let mut one = vec![0i128; n];
        one[0] = 4;
        self.one = self.from_quarter(&one);
        let gram: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self.trace(&self.structure[i][j])).collect())
            .collect();
        self.discriminant = determinant(&gram);
        self.reduced = lll(&gram);
    }

    fn from_quarter(&self, q: &[i128]) -> Vec<i128> {
        self.omega.solve(q).expect("element is not integral")
    }

    fn to_quarter(&self, x: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; self.n];
        for (i, &c) in x.iter().enumerate() {
            for (o, w) in out.iter_mut().zip(&self.omega_rows[i]) {
                *o += c * w;
            }
        }
        out
    }

    pub fn one(&self) -> &[i128] {
        &self.one
    }

    pub fn mul(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0i128; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let xy = x[i] * y[j];
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    *o += xy * s;
                }
            }
        }
        out
    }

    pub fn trace(&self, x: &[i128]) -> i128 {
        self.n as i128 * self.to_quarter(x)[0] / 4
    }

    pub fn norm(&self, x: &[i128]) -> i128 {
        let n = self.n;
        let m: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                let mut row = vec![0i128; n];
                for j in 0..n {
                    if x[j] != 0 {
                        for (r, s) in row.iter_mut().zip(&self.structure[j][i]) {
                            *r += x[j] * s;
                        }
                    }
                }
                row
            })
            .collect();
        determinant(&m)
    }

    /// Coordinates (in the integral basis) of `sum c_i w_i` for the
    /// reduced basis `w_i`.
    pub fn from_reduced(&self, c: &[i64]) -> Vec<i128> {
        let mut out = vec![0i128; self.n];
        for (i, &ci) in c.iter().enumerate() {
            for (o, u) in out.iter_mut().zip(&self.reduced[i]) {
                *o += ci as i128 * u;
            }
        }
        out
    }

    /// All prime ideals above `p`.
    pub fn primes_above(&self, p: u64) -> Vec<PrimeIdeal> {
        let fq = Fq::new(p);
        let maps = if p == 2 {
            self.maps_brute(&fq)
        } else {
            self.maps_from_roots(&fq)
        };
        let mut seen: Vec<Vec<Vec<i128>>> = Vec::new();
        let mut out = Vec::new();
        for images in maps {
            let (kernel, f) = kernel_lattice(&images, p, self.n);
            let key = kernel.basis();
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let beta = self.inverse_multiplier(&kernel, p);
            out.push(PrimeIdeal {
                p,
                f,
                e: 0,
                norm: (p as i128).pow(f),
                beta,
            });
        }
        let p_elem: Vec<i128> = self.one.iter().map(|&x| x * p as i128).collect();
        let mut total = 0;
        for ideal in &mut out {
            ideal.e = ideal.valuation(self, &p_elem, self.n as u32);
            total += ideal.e * ideal.f;
        }
        assert_eq!(
            total as usize, self.n,
            "prime decomposition of {p} is incomplete"
        );
        out
    }

    /// Some `beta` in `p P^-1` but not in `p O_K`: multiplication by
    /// `beta / p` lowers the valuation at `P` by one and keeps every other
    /// valuation nonnegative.
    fn inverse_multiplier(&self, ideal: &Lattice, p: u64) -> Vec<i128> {
        let n = self.n;
        // beta * b = 0 (mod p) for every basis element b of P, linear in beta
        let mut rows = Vec::new();
        for b in ideal.basis() {
            let products: Vec<Vec<i128>> = (0..n)
                .map(|i| {
                    let mut w = vec![0i128; n];
                    w[i] = 1;
                    self.mul(&w, &b)
                })
                .collect();
            for k in 0..n {
                rows.push(
                    (0..n)
                        .map(|i| products[i][k].rem_euclid(p as i128) as u64)
                        .collect(),
                );
            }
        }
        let (null, _) = nullspace_mod_p(rows, n, p);
        null.into_iter()
            .next()
            .expect("p P^-1 is larger than p O_K")
            .into_iter()
            .map(|x| x as i128)
            .collect()
    }

    /// Ring maps to `F_q` from compatible square roots of the radicands.
    fn maps_from_roots(&self, fq: &Fq) -> Vec<Vec<(u64, u64)>> {
        let n = self.n;
        let p = fq.p;
        let roots: Vec<Vec<(u64, u64)>> = self.radicands.iter().map(|&r| fq.sqrt(r)).collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        loop {
            let phi: Vec<(u64, u64)> = (0..n)
                .map(|s| if s == 0 { (1, 0) } else { roots[s][choice[s]] })
                .collect();
            let consistent = (0..n).all(|s| {
                (0..n).all(|t| {
                    let (u, c) = self.table[s * n + t];
                    fq.mul(phi[s], phi[t]) == fq.scale(phi[u], c)
                })
            });
            if consistent {
                let inv4 = crate::arith::pow_mod(4, p - 2, p);
                out.push(
                    self.omega_rows
                        .iter()
                        .map(|w| {
                            let mut acc = (0, 0);
                            for (s, &ws) in w.iter().enumerate() {
                                acc = fq.add(acc, fq.scale(phi[s], ws));
                            }
                            fq.scale(acc, inv4 as i128)
                        })
                        .collect(),
                );
            }
            let mut i = 1;
            while i < n {
                choice[i] += 1;
                if choice[i] < roots[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i >= n {
                break;
            }
        }
        out
    }

    /// Ring maps to `F_q` found by trying every image of the integral basis.
    fn maps_brute(&self, fq: &Fq) -> Vec<Vec<(u64, u64)>> {
        let n = self.n;
        let q = fq.p * fq.p;
        let elems: Vec<(u64, u64)> = (0..q).map(|i| (i % fq.p, i / fq.p)).collect();
        let apply = |images: &[(u64, u64)], x: &[i128]| {
            x.iter()
                .zip(images)
                .fold((0, 0), |acc, (&c, &g)| fq.add(acc, fq.scale(g, c)))
        };
        let mut out = Vec::new();
        let total = (q as usize).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let images: Vec<(u64, u64)> = (0..n)
                .map(|_| {
                    let e = elems[c % q as usize];
                    c /= q as usize;
                    e
                })
                .collect();
            if apply(&images, &self.one) != (1, 0) {
                continue;
            }
            let hom = (0..n).all(|i| {
                (i..n)
                    .all(|j| fq.mul(images[i], images[j]) == apply(&images, &self.structure[i][j]))
            });
            if hom {
                out.push(images);
            }
        }
        out
    }
}

/// A prime ideal `P` above `p`.
pub struct PrimeIdeal {
    pub p: u64,
    pub f: u32,
    pub e: u32,
    norm: i128,
    beta: Vec<i128>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> i128 {
        self.norm
    }

    /// `min(v_P(x), cap)` for nonzero `x`.
    ///
    /// `x beta^k / p^k` is integral exactly when `v_P(x) >= k`, and only its
    /// residue modulo `p^(cap + 1 - k)` is needed to decide the next step.
    pub fn valuation(&self, field: &Field, x: &[i128], cap: u32) -> u32 {
        let p = self.p as i128;
        let mut modulus = p.pow(cap + 1);
        let mut y: Vec<i128> = x.iter().map(|c| c.rem_euclid(modulus)).collect();
        let mut k = 0;
        while k < cap {
            let z = field.mul(&y, &self.beta);
            if z.iter().any(|c| c % p != 0) {
                break;
            }
            modulus /= p;
            y = z.iter().map(|c| (c / p).rem_euclid(modulus)).collect();
            k += 1;
        }
        k
    }
}

/// `F_p[t] / (t^2 - alpha t - beta)`, irreducible.
struct Fq {
    p: u64,
    alpha: u64,
    beta: u64,
}

impl Fq {
    fn new(p: u64) -> Fq {
        if p == 2 {
            Fq {
                p,
                alpha: 1,
                beta: 1,
            }
        } else {
            let nr = (2..p).find(|&a| legendre(a as i64, p) == -1).unwrap();
            Fq {
                p,
                alpha: 0,
                beta: nr,
            }
        }
    }

    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        ((a.0 + b.0) % self.p, (a.1 + b.1) % self.p)
    }

    fn scale(&self, a: (u64, u64), c: i128) -> (u64, u64) {
        let c = c.rem_euclid(self.p as i128) as u64;
        (a.0 * c % self.p, a.1 * c % self.p)
    }

    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        let hi = a.1 * b.1 % p;
        (
            (a.0 * b.0 + hi * self.beta) % p,
            (a.0 * b.1 + a.1 * b.0 + hi * self.alpha) % p,
        )
    }

    /// Square roots of `r` in this field (odd `p`).
    fn sqrt(&self, r: i128) -> Vec<(u64, u64)> {
        let p = self.p;
        let r = r.rem_euclid(p as i128) as i64;
        if r == 0 {
            return vec![(0, 0)];
        }
        if let Some(s) = sqrt_mod(r, p) {
            return vec![(s, 0), (p - s, 0)];
        }
        // r / beta is a square in F_p, and t^2 = beta
        let inv = crate::arith::pow_mod(self.beta, p - 2, p);
        let s = sqrt_mod((r as u64 * inv % p) as i64, p).unwrap();
        vec![(0, s), (0, p - s)]
    }
}

/// Basis of the null space of `m` (rows of length `n`) over `F_p`, and the rank.
fn nullspace_mod_p(mut m: Vec<Vec<u64>>, n: usize, p: u64) -> (Vec<Vec<u64>>, usize) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m.len() {
            break;
        }
        let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let inv = crate::arith::pow_mod(m[row][col], p - 2, p);
        for x in &mut m[row] {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..n {
                    m[r][c] = (m[r][c] + p - factor * m[row][c] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let null = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][free]) % p;
            }
            v
        })
        .collect();
    (null, pivots.len())
}

/// Kernel of `x -> sum x_i g_i` from `Z^n` to `F_q`, with the residue degree.
fn kernel_lattice(images: &[(u64, u64)], p: u64, n: usize) -> (Lattice, u32) {
    let m = vec![
        images.iter().map(|g| g.0).collect(),
        images.iter().map(|g| g.1).collect(),
    ];
    let (null, rank) = nullspace_mod_p(m, n, p);
    let mut lattice = Lattice::with_multiple(n, p as i128);
    for v in null {
        lattice.insert(&v.into_iter().map(|x| x as i128).collect::<Vec<_>>());
    }
    (lattice, rank as u32)
}

/// Characteristic polynomial coefficients, `out[k]` multiplying `x^k`.
fn charpoly(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let tr: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(tr % k as i128, 0);
        coeffs[n - k] = -tr / k as i128;
    }
    coeffs
}

fn matmul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// LLL reduction for the positive definite Gram matrix `gram`; returns the
/// rows of the unimodular transformation.
fn lll(gram: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = gram.len();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect();
    let inner = |u: &[Vec<i128>], i: usize, j: usize| -> f64 {
        let mut s = 0f64;
        for a in 0..n {
            for b in 0..n {
                s += (u[i][a] * gram[a][b] * u[j][b]) as f64;
            }
        }
        s
    };
    let gso = |u: &[Vec<i128>]| {
        let mut mu = vec![vec![0f64; n]; n];
        let mut bstar = vec![0f64; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = inner(u, i, j);
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * bstar[k];
                }
                mu[i][j] = s / bstar[j];
            }
            let mut s = inner(u, i, i);
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * bstar[k];
            }
            bstar[i] = s;
        }
        (mu, bstar)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&u);
            let q = mu[k][j].round() as i128;
            if q != 0 {
                let uj = u[j].clone();
                for (x, y) in u[k].iter_mut().zip(&uj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, bstar) = gso(&u);
        if bstar[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            u.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    u
}

/// Outcome of a class number computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassNumberRun {
    pub h: u64,
    pub factor_base: usize,
    pub relations: usize,
    pub bound: u64,
    pub radius: i64,
}

/// Class number from the relation lattice on prime ideals of norm `<= B`,
/// `B = max(Minkowski bound, min_bound)`.
///
/// Relations come from every element whose coordinates over an LLL-reduced
/// integral basis have maximum absolute value `r`, for `r = 1, 2, ...`. The
/// scan stops after `margin` further shells beyond the first radius at which
/// the relations have full rank. The index of the relation lattice is always
/// a multiple of `h`, and equals `h` once the relations found generate all
/// of them.
pub fn class_number(field: &Field, margin: i64, min_bound: u64) -> ClassNumberRun {
    let n = field.degree();
    let bound = (field.minkowski_bound().ceil() as u64).max(min_bound);
    let primes = primes_upto(bound);
    let mut ideals: Vec<PrimeIdeal> = Vec::new();
    let mut above: Vec<Vec<usize>> = Vec::new();
    for &p in &primes {
        let ps = field.primes_above(p);
        let start = ideals.len();
        ideals.extend(ps);
        above.push((start..ideals.len()).collect());
    }
    let m = ideals.len();
    let mut rel: Lattice<BigInt> = Lattice::new(m);
    for idx in &above {
        let mut v = vec![BigInt::from(0); m];
        for &i in idx {
            v[i] = BigInt::from(ideals[i].e);
        }
        rel.insert(&v);
    }
    let relation = |alpha: &[i128]| -> Option<Vec<BigInt>> {
        let mut norm = field.norm(alpha).unsigned_abs();
        let mut exps = Vec::new();
        for (pi, &p) in primes.iter().enumerate() {
            let p = p as u128;
            let mut k = 0u32;
            while norm % p == 0 {
                norm /= p;
                k += 1;
            }
            if k > 0 {
                exps.push((pi, k));
            }
            if norm == 1 {
                break;
            }
        }
        if norm != 1 {
            return None;
        }
        let mut v = vec![BigInt::from(0); m];
        for (pi, k) in exps {
            let idx = &above[pi];
            let mut left = k;
            for (pos, &i) in idx.iter().enumerate() {
                let f = ideals[i].f;
                let val = if pos + 1 == idx.len() {
                    assert_eq!(left % f, 0);
                    left / f
                } else {
                    ideals[i].valuation(field, alpha, left / f)
                };
                left -= val * f;
                v[i] = BigInt::from(val);
            }
        }
        Some(v)
    };
    let mut relations = 0;
    let mut stop_at = None;
    let mut r = 0i64;
    while stop_at.map_or(true, |s| r < s) {
        r += 1;
        let mut c = vec![-r; n];
        loop {
            let on_shell = c.iter().any(|x| x.abs() == r);
            let first_nonzero = c.iter().find(|&&x| x != 0);
            if on_shell && matches!(first_nonzero, Some(&x) if x > 0) {
                let alpha = field.from_reduced(&c);
                if let Some(v) = relation(&alpha) {
                    rel.insert(&v);
                    relations += 1;
                }
            }
            let mut i = 0;
            while i < n {
                c[i] += 1;
                if c[i] <= r {
                    break;
                }
                c[i] = -r;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        if stop_at.is_none() && rel.rank() == m {
            stop_at = Some(r + margin);
        }
        assert!(r < 64, "no full set of relations within radius 64");
    }
    let h = rel.index().expect("full rank was reached");
    ClassNumberRun {
        h: h.to_u64().expect("class number fits in 64 bits"),
        factor_base: m,
        relations,
        bound,
        radius: r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(Field::new(&[2]).discriminant(), 8);
        assert_eq!(Field::new(&[5]).discriminant(), 5);
        assert_eq!(Field::new(&[3]).discriminant(), 12);
        assert_eq!(Field::new(&[2, 3]).discriminant(), 8 * 12 * 24);
        assert_eq!(Field::new(&[5, 13]).discriminant(), 5 * 13 * 65);
        assert_eq!(Field::new(&[3, 7]).discriminant(), 12 * 28 * 21);
        assert_eq!(Field::new(&[6, 10]).discriminant(), 24 * 40 * 60);
    }

    #[test]
    fn prime_decompositions() {
        let k = Field::new(&[2, 3]);
        let fe = |p| {
            let mut v: Vec<_> = k.primes_above(p).iter().map(|q| (q.e, q.f)).collect();
            v.sort();
            v
        };
        assert_eq!(fe(2), vec![(4, 1)]);
        assert_eq!(fe(3), vec![(2, 2)]);
        assert_eq!(fe(5), vec![(1, 2), (1, 2)]);
        assert_eq!(fe(23), vec![(1, 1), (1, 1), (1, 1), (1, 1)]);
        let k = Field::new(&[5, 13]);
        let mut v: Vec<_> = k.primes_above(2).iter().map(|q| (q.e, q.f)).collect();
        v.sort();
        assert_eq!(v, vec![(1, 2), (1, 2)]);
    }

    #[test]
    fn quadratic_class_numbers() {
        for (d, h) in [(2, 1), (5, 1), (10, 2), (15, 2), (79, 3), (229, 3), (82, 4)] {
            assert_eq!(class_number(&Field::new(&[d]), 20, 30).h, h, "d = {d}");
        }
    }

    #[test]
    fn biquadratic_class_numbers() {
        assert_eq!(class_number(&Field::new(&[2, 3]), 3, 30).h, 1);
        assert_eq!(class_number(&Field::new(&[2, 5]), 3, 30).h, 1);
        assert_eq!(class_number(&Field::new(&[5, 21]), 3, 30).h, 1);
        assert_eq!(class_number(&Field::new(&[2, 35]), 3, 30).h, 2);
    }
}
