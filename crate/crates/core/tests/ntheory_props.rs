use euclid_core::ntheory::{
    factor, is_prime, jacobi, kronecker, pollard_brent, pow_mod, sqrt_mod_p, FactoredInteger,
};
use euclid_oracle::arith;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn primality_matches_sieve_below_a_million() {
    let limit = 1_000_000u64;
    let primes = arith::primes_upto(limit - 1);
    let mut flags = vec![false; limit as usize];
    for p in primes {
        flags[p as usize] = true;
    }
    for n in 0..limit {
        assert_eq!(is_prime(n), flags[n as usize], "n = {n}");
    }
}

#[test]
fn jacobi_is_multiplicative_exhaustively() {
    for n in (1..=1000u64).step_by(2) {
        let table: Vec<i8> = (0..n).map(|a| jacobi(a as i64, n).unwrap()).collect();
        for a in 0..n {
            assert_eq!(jacobi((a + n) as i64, n).unwrap(), table[a as usize]);
            for b in a..n {
                assert_eq!(
                    table[a as usize] * table[b as usize],
                    table[(a * b % n) as usize],
                    "({a}/{n}) ({b}/{n})"
                );
            }
        }
    }
}

#[test]
fn euler_criterion_below_a_thousand() {
    for p in arith::primes_upto(1000).into_iter().filter(|&p| p > 2) {
        for a in 1..p {
            let e = pow_mod(a, (p - 1) / 2, p);
            let expected = if e == 1 { 1 } else { -1 };
            assert!(e == 1 || e == p - 1);
            assert_eq!(jacobi(a as i64, p).unwrap(), expected, "({a}/{p})");
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs, written independently of
/// the library.
fn strong_probable_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let small = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if let Some(&p) = small.iter().find(|&&p| n % p == 0) {
        return n == p;
    }
    let mul = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    small.iter().all(|&a| {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            return true;
        }
        (1..s).any(|_| {
            x = mul(x, x);
            x == n - 1
        })
    })
}

fn assert_factorization(n: u64, f: &FactoredInteger) {
    let mut product = 1u128;
    for &(p, e) in &f.factors {
        let prime = if p < 1 << 32 {
            arith::is_prime(p)
        } else {
            strong_probable_prime(p)
        };
        assert!(prime, "{p} listed as a factor of {n}");
        product *= (p as u128).pow(e);
    }
    assert_eq!(product, n as u128);
    assert_eq!(f.value, n);
}

#[test]
fn factor_reassembles() {
    for n in 1..100_000u64 {
        assert_factorization(n, &factor(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for _ in 0..1000 {
        let n = rng.gen_range(1u64 << 59..1u64 << 60);
        assert_factorization(n, &factor(n));
    }
}

proptest! {
    #[test]
    fn sqrt_mod_squares_back(d in -10_000i64..10_000, k in 1usize..1200) {
        let p = arith::primes_upto(10_000)[k];
        match sqrt_mod_p(d, p) {
            Ok(r) => {
                prop_assert!(r <= p - r, "smaller root expected");
                prop_assert_eq!((r as u128 * r as u128 % p as u128) as i64, d.rem_euclid(p as i64));
            }
            Err(_) => prop_assert!(arith::legendre(d, p) != 1),
        }
    }

    #[test]
    fn kronecker_matches_oracle(d in -5_000i64..5_000, n in -5_000i64..5_000) {
        prop_assert_eq!(kronecker(d, n), arith::kronecker(d, n));
    }

    #[test]
    fn pollard_brent_finds_a_proper_factor(a in 3u64..1_000_000, b in 3u64..1_000_000) {
        let n = (a | 1) * (b | 1);
        let d = pollard_brent(n);
        prop_assert!(d > 1 && d < n && n % d == 0, "{} of {}", d, n);
    }
}
