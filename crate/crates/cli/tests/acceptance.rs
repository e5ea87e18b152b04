//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.
//!
//! Independent oracles come from `euclid-oracle` or are written out inline;
//! the library under test is only ever compared against them.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use euclid_core::charfield::{build_basis, field_for_q_rs, multiquadratic_field};
use euclid_core::kuroda::{class_number_biquadratic, class_number_real_biquadratic};
use euclid_core::ntheory::{factor, lcm};
use euclid_core::primroot::{subgroup_surjective, unit_image, RootChoice};
use euclid_core::quadfield::{class_number_quadratic, conductor_quadratic, fundamental_unit};
use euclid_core::residues::{admissible_residues_single, heath_brown_coprime};
use euclid_core::sieve::{count_j, CountOptions, SieveWindow};
use euclid_core::Error;
use euclid_oracle::arith::{self, gcd, is_squarefree};
use euclid_oracle::{numfield, pell};

/// Outcome of one criterion: pass flag and a one-line summary.
struct Outcome {
    pass: bool,
    detail: String,
    /// A failure whose exact shape is recorded and expected.
    documented: bool,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            pass: true,
            detail: detail.into(),
            documented: false,
        }
    }
}

type Check = fn() -> Outcome;

fn squarefree_upto(n: u64) -> impl Iterator<Item = u64> {
    (2..=n).filter(|&d| is_squarefree(d))
}

fn quadratic_conductor(d: u64) -> u64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

fn odd_primes_upto(n: u64) -> Vec<u64> {
    arith::primes_upto(n)
        .into_iter()
        .filter(|&p| p > 2)
        .collect()
}

fn c1_conductors() -> Outcome {
    let mut n = 0;
    for d in squarefree_upto(10_000) {
        let got = conductor_quadratic(d as i64).unwrap();
        assert_eq!(got, quadratic_conductor(d), "d = {d}");
        n += 1;
    }
    Outcome::pass(format!("{n} squarefree d"))
}

fn c2_class_numbers() -> Outcome {
    let mut n = 0;
    for d in squarefree_upto(500) {
        let oracle = numfield::class_number(&numfield::Field::new(&[d]), 20, 30);
        assert_eq!(class_number_quadratic(d).unwrap().h, oracle.h, "d = {d}");
        n += 1;
    }
    Outcome::pass(format!("{n} fields agree with ideal enumeration"))
}

fn c3_units() -> Outcome {
    let mut n = 0;
    for d in squarefree_upto(200) {
        let u = fundamental_unit(d).unwrap();
        let scale: i128 = if u.halved { 4 } else { 1 };
        let lhs = (u.x as i128).pow(2) - d as i128 * (u.y as i128).pow(2);
        assert_eq!(lhs, scale * u.norm as i128, "Pell identity, d = {d}");
        match pell::fundamental_unit(d, u.y.min(10_000) + 1) {
            Some(b) => assert_eq!(
                (b.x, b.y, b.halved, b.norm),
                (u.x as u128, u.y as u128, u.halved, u.norm),
                "d = {d}"
            ),
            None => assert!(u.y > 10_000, "d = {d}"),
        }
        n += 1;
    }
    Outcome::pass(format!("{n} units satisfy Pell and are minimal"))
}

fn c4_kuroda() -> Outcome {
    let mut fields = BTreeSet::new();
    let sqf: Vec<u64> = squarefree_upto(600).collect();
    for (i, &m) in sqf.iter().enumerate() {
        for &n in &sqf[i + 1..] {
            let g = gcd(m, n);
            let k = (m / g) * (n / g);
            let f = [m, n, k]
                .iter()
                .map(|&d| quadratic_conductor(d))
                .fold(1, lcm);
            if f <= 600 {
                let mut t = [m, n, k];
                t.sort();
                fields.insert(t);
            }
        }
    }
    for &[a, b, c] in &fields {
        let kuroda = class_number_real_biquadratic(a, b).unwrap();
        assert_eq!(kuroda.radicands[2], c);
        let oracle = numfield::class_number(&numfield::Field::new(&[a, b]), 2, 30);
        assert_eq!(kuroda.class_number, oracle.h, "Q(sqrt {a}, sqrt {b})");
    }
    Outcome::pass(format!("{} biquadratic fields", fields.len()))
}

/// Congruence case of a triple: `(q, r, s) mod 4`.
fn case(q: u64, r: u64, s: u64) -> (u64, u64, u64) {
    (q % 4, r % 4, s % 4)
}

fn c5_residues() -> Outcome {
    let primes = odd_primes_upto(30);
    let mut empty = Vec::new();
    let mut nonempty = 0;
    let mut cases: BTreeMap<(u64, u64, u64), usize> = BTreeMap::new();
    let mut out_of_range = Vec::new();
    for &q in &primes {
        for (i, &r) in primes.iter().enumerate() {
            for &s in &primes[i + 1..] {
                if q == r || q == s {
                    continue;
                }
                let h = match class_number_biquadratic(q, r, s) {
                    Ok(data) => data.class_number,
                    Err(Error::Overflow(_)) => {
                        out_of_range.push((q, r, s));
                        continue;
                    }
                    Err(e) => panic!("({q}, {r}, {s}): {e}"),
                };
                if h != 2 {
                    continue;
                }
                *cases.entry(case(q, r, s)).or_default() += 1;
                let f = [q, r * s, q * r * s]
                    .iter()
                    .map(|&d| quadratic_conductor(d))
                    .fold(16, lcm);
                let basis = build_basis(f).unwrap();
                let k = field_for_q_rs(q, r, s, &basis).unwrap();
                let l = multiquadratic_field(&[q as i64, r as i64, s as i64], &basis).unwrap();
                let residues = admissible_residues_single(&k, &l, f).unwrap();
                // independent recheck of the smallest residue
                if let Some(first) = residues.first() {
                    let a = first.a;
                    let chi = |d: u64| arith::kronecker(4 * d as i64, a as i64);
                    assert!(chi(q) == 1 && chi(r * s) == 1, "({q}, {r}, {s}): a = {a}");
                    assert!(chi(r) == -1, "({q}, {r}, {s}): a = {a} fixes sqrt {r}");
                    assert!(a % 2 == 1 && gcd((a - 1) / 2, f) == 1);
                    nonempty += 1;
                } else {
                    empty.push((q, r, s));
                }
            }
        }
    }
    // every residue case must be represented
    for rs in [(1, 1), (3, 3), (1, 3), (3, 1)] {
        assert!(
            cases.keys().any(|&(_, r, s)| (r, s) == rs),
            "no h = 2 triple with (r, s) = {rs:?} mod 4"
        );
    }
    for q4 in [1, 3] {
        assert!(cases.keys().any(|&(q, _, _)| q == q4));
    }
    // Documented failure: an admissible a is 3 mod 4 and 2 mod 3, so it fixes
    // sqrt 3 and cannot act nontrivially on the field when 3 is in {r, s}.
    let expected: Vec<_> = empty
        .iter()
        .filter(|&&(_, r, s)| r == 3 || s == 3)
        .collect();
    assert_eq!(
        expected.len(),
        empty.len(),
        "empty residue sets outside the r = 3 / s = 3 family: {empty:?}"
    );
    let detail = format!(
        "{nonempty} nonempty, {} empty (all with 3 in {{r, s}}): {}; {} triples beyond 64-bit units: {:?}; cases {:?}",
        empty.len(),
        empty
            .iter()
            .map(|(q, r, s)| format!("({q},{r},{s})"))
            .collect::<Vec<_>>()
            .join(" "),
        out_of_range.len(),
        out_of_range,
        cases
    );
    Outcome {
        pass: empty.is_empty(),
        detail,
        documented: true,
    }
}

fn c6_heath_brown() -> Outcome {
    let mut n = 0;
    for f in [1680u64, 16 * 105, 16 * 165] {
        let odd_primes: Vec<u64> = arith::factor(f)
            .into_iter()
            .map(|(l, _)| l)
            .filter(|&l| l > 2)
            .collect();
        for a in 1..f {
            if gcd(a, f) != 1 {
                continue;
            }
            let rhs = a % 4 == 3 && odd_primes.iter().all(|&l| a % l != 1);
            assert_eq!(heath_brown_coprime(a, f), rhs, "a = {a}, f = {f}");
            n += 1;
        }
    }
    Outcome::pass(format!("{n} units checked"))
}

/// Admissible `(a, f)` for `Q(sqrt 3, sqrt 35)` inside `Q(sqrt 3, sqrt 5, sqrt 7)`.
fn reference_residue() -> (u64, u64) {
    let f = 1680;
    let basis = build_basis(f).unwrap();
    let k = field_for_q_rs(3, 5, 7, &basis).unwrap();
    let h = multiquadratic_field(&[3, 5, 7], &basis).unwrap();
    let a = admissible_residues_single(&k, &h, f).unwrap()[0].a;
    (a, f)
}

/// `base^(n/d) > q` exactly, via `base^n > q^d`.
fn pow_exceeds(q: u64, base: u64, n: u32, d: u32) -> bool {
    BigUint::from(q).pow(d) > BigUint::from(base).pow(n)
}

/// Naive classification of `(p - 1)/2` under the default window at `x`.
fn naive_accepts(p: u64, x: u64) -> Option<Vec<u64>> {
    let m = (p - 1) / 2;
    let fm = arith::factor(m);
    let primes: Vec<u64> = fm
        .iter()
        .flat_map(|&(q, e)| std::iter::repeat(q).take(e as usize))
        .collect();
    match primes.len() {
        1 => Some(primes),
        2 => {
            let q1 = primes[0];
            // x^(7/25) < q1 < x^(9/20)
            let above = pow_exceeds(q1, x, 7, 25);
            let below = BigUint::from(q1).pow(20) < BigUint::from(x).pow(9);
            (above && below).then_some(primes)
        }
        _ => None,
    }
}

fn c7_sieve_audit() -> Outcome {
    let (a, f) = reference_residue();
    let window = SieveWindow::default();
    let keep = CountOptions {
        keep_samples: true,
        ..CountOptions::default()
    };
    let big = count_j(a, f, 1_000_000, &window, keep).unwrap();
    let samples = big.samples.as_ref().unwrap();
    assert_eq!(samples.len() as u64, big.count);
    for s in samples {
        assert!(arith::is_prime(s.p), "{} is not prime", s.p);
        assert_eq!(s.p % f, a);
        assert_eq!(
            naive_accepts(s.p, 1_000_000),
            Some(s.factors.clone()),
            "p = {}",
            s.p
        );
    }
    let small = count_j(a, f, 100_000, &window, CountOptions::default()).unwrap();
    let naive = arith::primes_in_progression(1, 100_000, a, f)
        .into_iter()
        .filter(|&p| naive_accepts(p, 100_000).is_some())
        .count() as u64;
    assert_eq!(small.count, naive, "naive recount at X = 10^5");
    Outcome::pass(format!(
        "a = {a}, f = {f}: {} audited at 10^6, count {} = naive at 10^5",
        samples.len(),
        naive
    ))
}

fn c8_density() -> Outcome {
    let (a, f) = reference_residue();
    let window = SieveWindow::default();
    let values: Vec<(u64, f64)> = [100_000u64, 1_000_000, 10_000_000]
        .iter()
        .map(|&x| {
            let j = count_j(a, f, x, &window, CountOptions::default()).unwrap();
            (x, j.normalized)
        })
        .collect();
    let base = values[0].1;
    let ratios: Vec<f64> = values.iter().map(|&(_, v)| v / base).collect();
    let pass = base > 0.0 && ratios.iter().all(|&r| r >= 0.1);
    Outcome {
        pass,
        detail: format!(
            "a = {a}, f = {f}: normalized {:?}, ratios {:?} (threshold 0.1)",
            values, ratios
        ),
        documented: false,
    }
}

const UNIT_RADICANDS: [u64; 8] = [2, 3, 5, 7, 13, 21, 35, 94];

fn c9_primitivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    for p in odd_primes_upto(10_000) {
        let fp = factor(p - 1);
        let mut sets: Vec<Vec<u64>> = Vec::new();
        for &d in &UNIT_RADICANDS {
            if d % p == 0 || arith::legendre(d as i64, p) != 1 {
                continue;
            }
            let u = fundamental_unit(d).unwrap();
            let v = unit_image(&u, d, p, RootChoice::Plus).unwrap().value;
            sets.push(vec![v]);
            sets.push(vec![p - 1, v]);
        }
        for len in 1..=3 {
            sets.push((0..len).map(|_| rng.gen_range(1..p)).collect());
        }
        for images in sets {
            let naive = arith::subgroup_size(&images, p) as u64 == p - 1;
            assert_eq!(
                subgroup_surjective(&images, p, &fp),
                naive,
                "p = {p}, {images:?}"
            );
            compared += 1;
        }
    }
    let mut conjugates = 0;
    for &d in &UNIT_RADICANDS {
        let u = fundamental_unit(d).unwrap();
        let mut found = 0;
        while found < 1000 {
            let p = rng.gen_range(1_000u64..1_000_000_000) | 1;
            if !arith::is_prime(p) || d % p == 0 || arith::legendre(d as i64, p) != 1 {
                continue;
            }
            let plus = unit_image(&u, d, p, RootChoice::Plus).unwrap().value;
            let minus = unit_image(&u, d, p, RootChoice::Minus).unwrap().value;
            let norm = if u.norm == 1 { 1 } else { p - 1 };
            assert_eq!(
                (plus as u128 * minus as u128 % p as u128) as u64,
                norm,
                "d = {d}, p = {p}"
            );
            found += 1;
        }
        conjugates += found;
    }
    Outcome::pass(format!(
        "{compared} image sets vs naive order, {conjugates} conjugate identities"
    ))
}

fn euclid(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_euclid"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().expect("exit code"))
}

fn c10_end_to_end() -> Outcome {
    let (first, code) = euclid(&["search", "--bound", "30"]);
    assert_eq!(code, 0);
    let (second, _) = euclid(&["search", "--bound", "30"]);
    assert!(first == second, "search output differs between runs");
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&first).unwrap();
    let certified: Vec<_> = rows
        .iter()
        .filter(|r| r["verdict"]["status"] == "CERTIFIED")
        .collect();
    assert!(!certified.is_empty());
    assert!(certified.iter().all(|r| r["class_number"] == 2));

    let (cert, code) = euclid(&["certify", "biquadratic", "--q", "3", "--r", "5", "--s", "7"]);
    assert_eq!(code, 0);
    let (again, _) = euclid(&["certify", "biquadratic", "--q", "3", "--r", "5", "--s", "7"]);
    assert!(cert == again);
    let parsed: serde_json::Value = serde_json::from_slice(&cert).unwrap();
    assert_eq!(parsed["schema"], 1);
    assert_eq!(
        euclid(&["certify", "biquadratic", "--q", "5", "--r", "3", "--s", "7"]).1,
        2
    );
    assert_eq!(euclid(&["unit", "--d", "4"]).1, 3);
    assert_eq!(euclid(&["search", "--bound", "30", "--no-such-flag"]).1, 64);
    Outcome::pass(format!(
        "{} triples, {} CERTIFIED, byte-identical reruns, exit codes 0/2/3/64",
        rows.len(),
        certified.len()
    ))
}

fn main() {
    let criteria: [(u32, &str, Duration, Check); 10] = [
        (
            1,
            "conductor formula",
            Duration::from_secs(1),
            c1_conductors,
        ),
        (
            2,
            "class number oracle",
            Duration::from_secs(60),
            c2_class_numbers,
        ),
        (3, "fundamental units", Duration::from_secs(10), c3_units),
        (
            4,
            "Kuroda class numbers",
            Duration::from_secs(600),
            c4_kuroda,
        ),
        (
            5,
            "admissible residues for h = 2",
            Duration::from_secs(300),
            c5_residues,
        ),
        (
            6,
            "Heath-Brown predicate",
            Duration::from_secs(1),
            c6_heath_brown,
        ),
        (7, "sieve audit", Duration::from_secs(120), c7_sieve_audit),
        (
            8,
            "density regression",
            Duration::from_secs(1800),
            c8_density,
        ),
        (
            9,
            "primitivity checks",
            Duration::from_secs(30),
            c9_primitivity,
        ),
        (
            10,
            "end to end search",
            Duration::from_secs(600),
            c10_end_to_end,
        ),
    ];
    let mut unexpected = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome {
                pass: false,
                detail: format!("panicked: {msg}"),
                documented: false,
            }
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = outcome.pass && in_time;
        let label = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {label} {name}: {} [{:.2?}, budget {:?}]",
            outcome.detail, elapsed, budget
        );
        if !pass && !(outcome.documented && in_time) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
