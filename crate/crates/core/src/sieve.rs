//! Counting primes `p = a (mod f)` for which `(p - 1)/2` is a prime or a
//! product `q1 q2` of two primes with `q1` in a window `(X^b, X^c)`.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfield::AbelianFieldSpec;
use crate::error::{bail, Result};
use crate::ntheory::{factor, gcd, is_prime, SegmentedPrimes, SieveConfig};

/// Exponents of the sieve window. `epsilon` selects the interval
/// `(X^(1 - epsilon), X]`; `epsilon = 1` counts all of `(1, X]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveWindow {
    #[serde(with = "ratio_string")]
    pub b: Ratio<u64>,
    #[serde(with = "ratio_string")]
    pub c: Ratio<u64>,
    #[serde(with = "ratio_string")]
    pub epsilon: Ratio<u64>,
}

impl Default for SieveWindow {
    fn default() -> Self {
        SieveWindow {
            b: Ratio::new(7, 25),
            c: Ratio::new(9, 20),
            epsilon: Ratio::one(),
        }
    }
}

impl SieveWindow {
    pub fn new(b: Ratio<u64>, c: Ratio<u64>, epsilon: Ratio<u64>) -> Result<Self> {
        let quarter = Ratio::new(1, 4);
        let half = Ratio::new(1, 2);
        if !(quarter < b && b < c && c < half) {
            bail!(
                Argument,
                "window needs 1/4 < b < c < 1/2, got b = {b}, c = {c}"
            );
        }
        if epsilon > Ratio::one() {
            bail!(Argument, "epsilon = {epsilon} exceeds 1");
        }
        Ok(SieveWindow { b, c, epsilon })
    }

    /// `q1` bounds for the global window at `X`.
    pub fn bounds(&self, x: u64) -> WindowBounds {
        WindowBounds {
            above: floor_pow(x, self.b),
            below: Some(ceil_pow(x, self.c)),
        }
    }

    /// Bounds `p^b < q1 < p^(c / (1 - epsilon))` of the per-prime window.
    /// The upper bound disappears when `epsilon = 1`.
    pub fn per_prime_bounds(&self, p: u64) -> WindowBounds {
        let below = (self.epsilon < Ratio::one())
            .then(|| ceil_pow(p, self.c / (Ratio::one() - self.epsilon)));
        WindowBounds {
            above: floor_pow(p, self.b),
            below,
        }
    }

    /// Exclusive lower end `floor(X^(1 - epsilon))` of the counting interval.
    pub fn interval_start(&self, x: u64) -> u64 {
        floor_pow(x, Ratio::one() - self.epsilon)
    }
}

/// Parse `"7/25"`, `"0.28"` or `"1"` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let s = s.trim();
    let bad = || crate::Error::Argument(format!("cannot parse {s:?} as a non-negative rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty()) || frac.len() > 18 {
        return Err(bad());
    }
    let digits = |t: &str| t.is_empty() || t.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || !digits(frac) {
        return Err(bad());
    }
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let den = 10u64.pow(frac.len() as u32);
    let frac: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let num = int
        .checked_mul(den)
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(bad)?;
    Ok(Ratio::new(num, den))
}

mod ratio_string {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

fn root_floor(x: u64, r: Ratio<u64>) -> (u64, bool) {
    let (n, d) = (*r.numer(), *r.denom());
    if n == 0 {
        return (1, true);
    }
    let power = BigUint::from(x).pow(n as u32);
    let root = power.nth_root(d as u32);
    let exact = root.pow(d as u32) == power;
    let root = u64::try_from(root).unwrap_or(u64::MAX);
    (root, exact)
}

/// `floor(x^r)`, exactly.
pub fn floor_pow(x: u64, r: Ratio<u64>) -> u64 {
    root_floor(x, r).0
}

/// `ceil(x^r)`, exactly.
pub fn ceil_pow(x: u64, r: Ratio<u64>) -> u64 {
    match root_floor(x, r) {
        (v, true) => v,
        (v, false) => v.saturating_add(1),
    }
}

/// Integer form of `X^b < q1 < X^c`: `above < q1 < below`, where
/// `above = floor(X^b)` and `below = ceil(X^c)`. No upper bound when `below`
/// is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowBounds {
    pub above: u64,
    pub below: Option<u64>,
}

impl WindowBounds {
    pub fn contains(&self, q: u64) -> bool {
        q > self.above && self.below.map_or(true, |c| q < c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Prime,
    WindowedSemiprime,
    Reject,
}

impl Classification {
    pub fn accepted(self) -> bool {
        self != Classification::Reject
    }
}

/// Classification of `m = (p - 1)/2` together with its prime factors when
/// accepted (`[m]` or `[q1, q2]`, ascending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shifted {
    pub classification: Classification,
    pub factors: Vec<u64>,
}

impl Shifted {
    fn reject() -> Self {
        Shifted {
            classification: Classification::Reject,
            factors: Vec::new(),
        }
    }
}

/// Classify `(p - 1)/2` for odd `p` against explicit window bounds.
pub fn classify_with_bounds(p: u64, bounds: &WindowBounds) -> Shifted {
    let m = p / 2;
    if m < 2 {
        return Shifted::reject();
    }
    if is_prime(m) {
        return Shifted {
            classification: Classification::Prime,
            factors: vec![m],
        };
    }
    // any prime factor at most X^b rules out an admissible q1
    let mut q = 2;
    while q <= bounds.above && q * q <= m {
        if m % q == 0 {
            return Shifted::reject();
        }
        q += if q == 2 { 1 } else { 2 };
    }
    let fm = factor(m);
    if fm.omega_big() != 2 {
        return Shifted::reject();
    }
    let primes: Vec<u64> = fm
        .factors
        .iter()
        .flat_map(|&(q, e)| std::iter::repeat(q).take(e as usize))
        .collect();
    if bounds.contains(primes[0]) {
        Shifted {
            classification: Classification::WindowedSemiprime,
            factors: primes,
        }
    } else {
        Shifted::reject()
    }
}

/// Classify `(p - 1)/2` against the window `(X^b, X^c)` at scale `x`.
pub fn classify_shifted(p: u64, x: u64, window: &SieveWindow) -> Shifted {
    classify_with_bounds(p, &window.bounds(x))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub prime: u64,
    pub windowed_semiprime: u64,
    pub rejected: u64,
}

impl Breakdown {
    fn add(&mut self, c: Classification) {
        match c {
            Classification::Prime => self.prime += 1,
            Classification::WindowedSemiprime => self.windowed_semiprime += 1,
            Classification::Reject => self.rejected += 1,
        }
    }

    fn merge(&mut self, o: &Breakdown) {
        self.prime += o.prime;
        self.windowed_semiprime += o.windowed_semiprime;
        self.rejected += o.rejected;
    }

    pub fn accepted(&self) -> u64 {
        self.prime + self.windowed_semiprime
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub p: u64,
    pub classification: Classification,
    pub factors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JCount {
    pub a: u64,
    pub f: u64,
    pub x: u64,
    pub window: SieveWindow,
    /// Primes are counted in `(interval_start, x]`.
    pub interval_start: u64,
    pub count: u64,
    pub breakdown: Breakdown,
    /// `count * (ln x)^2 / x`.
    pub normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<Vec<Sample>>,
}

pub fn normalized_density(count: u64, x: u64) -> f64 {
    if x < 2 {
        return 0.0;
    }
    let l = (x as f64).ln();
    count as f64 * l * l / x as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CountOptions {
    pub keep_samples: bool,
    pub sieve: SieveConfig,
}

/// Contiguous pieces of `[lo, hi]` processed by separate workers.
fn chunks(lo: u64, hi: u64, size: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = start.saturating_add(size - 1).min(hi);
        out.push((start, end));
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

/// Visit every prime `p = a (mod f)` in `[lo, hi]`, classify it with
/// `bounds(p)`, and collect results in increasing order of `p`.
fn scan<B>(
    a: u64,
    f: u64,
    lo: u64,
    hi: u64,
    config: SieveConfig,
    bounds: B,
    keep: bool,
) -> Result<(Breakdown, Vec<Sample>)>
where
    B: Fn(u64) -> WindowBounds + Sync,
{
    if lo > hi {
        return Ok((Breakdown::default(), Vec::new()));
    }
    let pieces = chunks(lo, hi, config.segment_size as u64 * 4);
    let parts: Vec<(Breakdown, Vec<Sample>)> = pieces
        .into_par_iter()
        .map(|(s, e)| {
            let mut b = Breakdown::default();
            let mut samples = Vec::new();
            for p in SegmentedPrimes::new(s, e, a, f, config)? {
                if p == 2 {
                    continue;
                }
                let sh = classify_with_bounds(p, &bounds(p));
                b.add(sh.classification);
                if keep && sh.classification.accepted() {
                    samples.push(Sample {
                        p,
                        classification: sh.classification,
                        factors: sh.factors,
                    });
                }
            }
            Ok((b, samples))
        })
        .collect::<Result<_>>()?;
    let mut total = Breakdown::default();
    let mut samples = Vec::new();
    for (b, s) in parts {
        total.merge(&b);
        samples.extend(s);
    }
    Ok((total, samples))
}

fn check_residue(a: u64, f: u64) -> Result<()> {
    if f == 0 {
        bail!(Argument, "modulus must be positive");
    }
    if gcd(a % f, f) != 1 {
        bail!(Argument, "residue {a} is not coprime to {f}");
    }
    Ok(())
}

/// Count primes `p = a (mod f)` in `(X^(1 - epsilon), X]` whose `(p - 1)/2`
/// is a prime or a windowed semiprime.
pub fn count_j(
    a: u64,
    f: u64,
    x: u64,
    window: &SieveWindow,
    options: CountOptions,
) -> Result<JCount> {
    check_residue(a, f)?;
    let start = window.interval_start(x);
    let bounds = window.bounds(x);
    let (breakdown, samples) = scan(
        a,
        f,
        start.saturating_add(1),
        x,
        options.sieve,
        |_| bounds,
        options.keep_samples,
    )?;
    let count = breakdown.accepted();
    Ok(JCount {
        a: a % f,
        f,
        x,
        window: *window,
        interval_start: start,
        count,
        breakdown,
        normalized: normalized_density(count, x),
        samples: options.keep_samples.then_some(samples),
    })
}

/// Counts at each `x` in `xs`, ascending.
pub fn count_j_grid(
    a: u64,
    f: u64,
    xs: &[u64],
    window: &SieveWindow,
    options: CountOptions,
) -> Result<Vec<JCount>> {
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    xs.iter()
        .map(|&x| count_j(a, f, x, window, options))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[JCount], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| crate::Error::Resource(format!("csv output failed: {e}"));
    w.write_record([
        "x",
        "count",
        "normalized",
        "prime",
        "windowed_semiprime",
        "rejected",
    ])
    .map_err(io)?;
    for r in rows {
        w.write_record([
            r.x.to_string(),
            r.count.to_string(),
            format!("{:.6}", r.normalized),
            r.breakdown.prime.to_string(),
            r.breakdown.windowed_semiprime.to_string(),
            r.breakdown.rejected.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| crate::Error::Resource(format!("csv output failed: {e}")))?;
    Ok(())
}

/// Which window `enumerate_m_epsilon` applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowMode {
    /// `p^b < q1 < p^(c / (1 - epsilon))` for each prime, over `(1, X]`.
    PerPrime,
    /// The counting window `(X^b, X^c)` over `(X^(1 - epsilon), X]`.
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MEntry {
    pub p: u64,
    /// Number of prime ideals of norm `p`.
    pub ideal_count: usize,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MEpsilon {
    pub window_mode: WindowMode,
    pub x: u64,
    pub entries: Vec<MEntry>,
}

impl MEpsilon {
    pub fn ideal_total(&self) -> usize {
        self.entries.iter().map(|e| e.ideal_count).sum()
    }
}

/// Degree-one primes of `K` above accepted `p = a (mod f)`, `p <= x`. Every
/// such `p` splits completely, so each contributes `[K : Q]` ideals.
pub fn enumerate_m_epsilon(
    a: u64,
    f: u64,
    x: u64,
    window: &SieveWindow,
    k: &AbelianFieldSpec,
    mode: WindowMode,
    config: SieveConfig,
) -> Result<MEpsilon> {
    check_residue(a, f)?;
    let m = k.basis().modulus();
    if f % m != 0 {
        bail!(Argument, "field modulus {m} does not divide {f}");
    }
    if !k.fixed_by(a % m) {
        bail!(
            Precondition,
            "primes congruent to {a} mod {f} do not split completely in {}",
            k.label
        );
    }
    let (samples, start) = match mode {
        WindowMode::PerPrime => {
            let w = *window;
            (
                scan(a, f, 2, x, config, move |p| w.per_prime_bounds(p), true)?.1,
                1,
            )
        }
        WindowMode::Global => {
            let start = window.interval_start(x);
            let bounds = window.bounds(x);
            (
                scan(a, f, start.saturating_add(1), x, config, |_| bounds, true)?.1,
                start,
            )
        }
    };
    debug_assert!(samples.iter().all(|s| s.p > start));
    let degree = k.degree();
    Ok(MEpsilon {
        window_mode: mode,
        x,
        entries: samples
            .into_iter()
            .map(|s| MEntry {
                p: s.p,
                ideal_count: degree,
                classification: s.classification,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        let r = Ratio::new;
        assert!(SieveWindow::new(r(7, 25), r(9, 20), r(1, 1)).is_ok());
        assert!(SieveWindow::new(r(1, 4), r(9, 20), r(0, 1)).is_err());
        assert!(SieveWindow::new(r(9, 20), r(7, 25), r(0, 1)).is_err());
        assert!(SieveWindow::new(r(7, 25), r(9, 20), r(3, 2)).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_ratio("0.28").unwrap(), Ratio::new(7, 25));
        assert_eq!(parse_ratio("9/20").unwrap(), Ratio::new(9, 20));
        assert_eq!(parse_ratio("1").unwrap(), Ratio::new(1, 1));
        assert_eq!(parse_ratio(".5").unwrap(), Ratio::new(1, 2));
        for bad in ["", "x", "1/0", "-0.3", "0.2.1", "."] {
            assert!(parse_ratio(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_powers() {
        assert_eq!(floor_pow(1_000_000, Ratio::new(1, 2)), 1000);
        assert_eq!(ceil_pow(1_000_000, Ratio::new(1, 2)), 1000);
        assert_eq!(floor_pow(1_000_001, Ratio::new(1, 2)), 1000);
        assert_eq!(ceil_pow(1_000_001, Ratio::new(1, 2)), 1001);
        // 10^5^(7/25) = 10^1.4 = 25.1...
        assert_eq!(floor_pow(100_000, Ratio::new(7, 25)), 25);
        assert_eq!(floor_pow(12345, Ratio::new(0, 1)), 1);
    }

    #[test]
    fn classification_examples() {
        let w = SieveWindow::default();
        assert_eq!(
            classify_shifted(7, 100, &w).classification,
            Classification::Prime
        );
        assert_eq!(
            classify_shifted(29, 100, &w).classification,
            Classification::Reject
        );
        assert_eq!(
            classify_shifted(3, 100, &w).classification,
            Classification::Reject
        );
        // X = 10^6: window (47.8.., 501.1..); m = 53 * 67, p = 2m + 1 = 7103
        assert!(is_prime(7103));
        let s = classify_shifted(7103, 1_000_000, &w);
        assert_eq!(s.classification, Classification::WindowedSemiprime);
        assert_eq!(s.factors, vec![53, 67]);
        // m = 47 * 67 has q1 = 47 just below the window
        assert!(is_prime(6299));
        assert_eq!(
            classify_shifted(6299, 1_000_000, &w).classification,
            Classification::Reject
        );
    }

    #[test]
    fn counts_and_samples() {
        let w = SieveWindow::default();
        let opts = CountOptions {
            keep_samples: true,
            sieve: SieveConfig { segment_size: 1000 },
        };
        let j = count_j(3, 16, 100_000, &w, opts).unwrap();
        assert!(j.count > 0 && j.normalized > 0.0);
        assert_eq!(j.samples.as_ref().unwrap().len() as u64, j.count);
        let big = count_j(3, 16, 100_000, &w, CountOptions::default()).unwrap();
        assert_eq!(big.count, j.count);
        assert_eq!(big.breakdown, j.breakdown);
        assert!(count_j(2, 16, 1000, &w, opts).is_err());
        assert_eq!(count_j(3, 16, 2, &w, opts).unwrap().count, 0);
    }

    #[test]
    fn csv_output() {
        let w = SieveWindow::default();
        let rows = count_j_grid(3, 16, &[1000, 100], &w, CountOptions::default()).unwrap();
        assert_eq!(rows[0].x, 100);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,count,normalized,prime,windowed_semiprime,rejected\n100,"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn window_round_trips_through_json() {
        let w = SieveWindow::default();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"b":"7/25","c":"9/20","epsilon":"1"}"#);
        assert_eq!(serde_json::from_str::<SieveWindow>(&s).unwrap(), w);
    }
}
