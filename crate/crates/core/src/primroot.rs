//! Images of quadratic units modulo degree-one primes and the resulting
//! surjectivity statistics for real biquadratic fields.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfield::AbelianFieldSpec;
use crate::error::{bail, Result};
use crate::kuroda::BiquadClassData;
use crate::ntheory::{
    gcd, inv_mod, is_prime, mul_mod, pow_mod, sqrt_mod_p, FactoredInteger, SieveConfig,
};
use crate::quadfield::FundamentalUnit;
use crate::residues::heath_brown_coprime;
use crate::sieve::{count_j, normalized_density, Classification, CountOptions, SieveWindow};

/// Which square root of `d` modulo `p` stands for `sqrt d`: the smaller one
/// (`Plus`) or its negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootChoice {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitImage {
    pub d: u64,
    pub p: u64,
    pub root_choice: RootChoice,
    pub value: u64,
}

/// `(x + y r) / den mod p` for a chosen square root `r` of `d`.
fn image_at_root(u: &FundamentalUnit, r: u64, p: u64) -> u64 {
    let v = (u.x % p + mul_mod(u.y % p, r, p)) % p;
    if u.halved {
        mul_mod(v, (p + 1) / 2, p)
    } else {
        v
    }
}

/// Image of the unit under the residue map of the prime above `p` selected
/// by `root_choice`.
pub fn unit_image(
    u: &FundamentalUnit,
    d: u64,
    p: u64,
    root_choice: RootChoice,
) -> Result<UnitImage> {
    if u.d != d {
        bail!(Argument, "unit belongs to Q(sqrt {}), not Q(sqrt {d})", u.d);
    }
    if p < 3 || !is_prime(p) {
        bail!(Argument, "{p} is not an odd prime");
    }
    if d % p == 0 {
        bail!(Domain, "{p} ramifies in Q(sqrt {d})");
    }
    let r = sqrt_mod_p(d as i64, p)
        .map_err(|_| crate::Error::Domain(format!("{p} is inert in Q(sqrt {d})")))?;
    let r = match root_choice {
        RootChoice::Plus => r,
        RootChoice::Minus => p - r,
    };
    Ok(UnitImage {
        d,
        p,
        root_choice,
        value: image_at_root(u, r, p),
    })
}

/// Whether `images` generate `(Z/pZ)^x`: for every prime `q | p - 1` some
/// image is not a `q`-th power.
pub fn subgroup_surjective(images: &[u64], p: u64, p_minus_1: &FactoredInteger) -> bool {
    debug_assert_eq!(p_minus_1.value, p - 1);
    if images.is_empty() {
        return false;
    }
    p_minus_1.primes().all(|q| {
        let e = (p - 1) / q;
        images.iter().any(|&g| g % p != 0 && pow_mod(g, e, p) != 1)
    })
}

/// The six units `+-e1, +-e2, +-e3` in a fixed order.
pub const ETA_LABELS: [&str; 6] = ["+e1", "-e1", "+e2", "-e2", "+e3", "-e3"];

/// One prime ideal above `p`, labelled by the signs of the square roots of
/// the first two radicands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSample {
    pub p: u64,
    pub residue: u64,
    pub ideal: [i8; 2],
    /// `<-1, e1, e2, e3>` maps onto `(O_K/P)^x`.
    pub surjective: bool,
    /// Some single `+-e_i` is a primitive root modulo `P`.
    pub single_eta: bool,
    /// The primitive `+-e_i` if any, else the joint generators when surjective.
    pub witnesses: Vec<String>,
    pub nontrivial_class: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaCount {
    /// Prime ideals modulo which this unit is a primitive root.
    pub ideals: u64,
    /// Primes with at least one such ideal above them.
    pub primes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub x: u64,
    /// Sieve-accepted primes over all residues.
    pub primes: u64,
    pub prime_ideals: u64,
    pub joint_surjective_ideals: u64,
    pub joint_surjective_primes: u64,
    pub single_eta_ideals: u64,
    pub single_eta_primes: u64,
    pub per_eta: BTreeMap<String, EtaCount>,
    pub best_eta: Option<String>,
    pub normalized_joint: f64,
    pub normalized_best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthStatistics {
    pub radicands: [u64; 3],
    pub residues: Vec<u64>,
    pub f: u64,
    pub window: SieveWindow,
    pub rows: Vec<GrowthRow>,
    /// Per-ideal log at the largest `x`, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<Vec<GrowthSample>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GrowthOptions {
    pub keep_samples: bool,
    pub sieve: SieveConfig,
}

/// Images of `e1, e2, e3` modulo the four primes above a completely split
/// `p`, indexed by sign pattern `(+,+), (+,-), (-,+), (-,-)`.
pub fn biquadratic_unit_images(data: &BiquadClassData, p: u64) -> Result<[([i8; 2], [u64; 3]); 4]> {
    let [d1, d2, _] = data.radicands;
    let s1 = sqrt_mod_p(d1 as i64, p)?;
    let s2 = sqrt_mod_p(d2 as i64, p)?;
    let g = gcd(d1, d2);
    let g_inv = inv_mod(g % p, p)
        .ok_or_else(|| crate::Error::Domain(format!("{p} divides gcd({d1}, {d2})")))?;
    let mut out = [([0i8; 2], [0u64; 3]); 4];
    for (i, (a, b)) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)]
        .into_iter()
        .enumerate()
    {
        let r1 = if a > 0 { s1 } else { p - s1 };
        let r2 = if b > 0 { s2 } else { p - s2 };
        // sqrt d3 = sqrt d1 sqrt d2 / g
        let r3 = mul_mod(mul_mod(r1, r2, p), g_inv, p);
        out[i] = (
            [a, b],
            [
                image_at_root(&data.units[0], r1, p),
                image_at_root(&data.units[1], r2, p),
                image_at_root(&data.units[2], r3, p),
            ],
        );
    }
    Ok(out)
}

struct PrimeOutcome {
    samples: Vec<GrowthSample>,
}

fn analyse_prime(
    data: &BiquadClassData,
    p: u64,
    residue: u64,
    p_minus_1: &FactoredInteger,
) -> Result<PrimeOutcome> {
    let mut samples = Vec::with_capacity(4);
    for (ideal, [v1, v2, v3]) in biquadratic_unit_images(data, p)? {
        let etas = [v1, p - v1, v2, p - v2, v3, p - v3];
        let primitive: Vec<String> = etas
            .iter()
            .zip(ETA_LABELS)
            .filter(|(&v, _)| subgroup_surjective(&[v], p, p_minus_1))
            .map(|(_, l)| l.to_string())
            .collect();
        let surjective = subgroup_surjective(&[p - 1, v1, v2, v3], p, p_minus_1);
        let single_eta = !primitive.is_empty();
        let witnesses = if single_eta {
            primitive
        } else if surjective {
            ["-1", "+e1", "+e2", "+e3"].map(String::from).to_vec()
        } else {
            Vec::new()
        };
        samples.push(GrowthSample {
            p,
            residue,
            ideal,
            surjective,
            single_eta,
            witnesses,
            nontrivial_class: true,
        });
    }
    Ok(PrimeOutcome { samples })
}

fn aggregate(x: u64, outcomes: &[PrimeOutcome]) -> GrowthRow {
    let mut per_eta: BTreeMap<String, EtaCount> = ETA_LABELS
        .iter()
        .map(|l| (l.to_string(), EtaCount::default()))
        .collect();
    let mut row = GrowthRow {
        x,
        primes: outcomes.len() as u64,
        prime_ideals: 0,
        joint_surjective_ideals: 0,
        joint_surjective_primes: 0,
        single_eta_ideals: 0,
        single_eta_primes: 0,
        per_eta: BTreeMap::new(),
        best_eta: None,
        normalized_joint: 0.0,
        normalized_best: 0.0,
    };
    for o in outcomes {
        row.prime_ideals += o.samples.len() as u64;
        let joint = o.samples.iter().filter(|s| s.surjective).count() as u64;
        let single = o.samples.iter().filter(|s| s.single_eta).count() as u64;
        row.joint_surjective_ideals += joint;
        row.single_eta_ideals += single;
        row.joint_surjective_primes += (joint > 0) as u64;
        row.single_eta_primes += (single > 0) as u64;
        for label in ETA_LABELS {
            let hits = o
                .samples
                .iter()
                .filter(|s| s.single_eta && s.witnesses.iter().any(|w| w == label))
                .count() as u64;
            let c = per_eta.get_mut(label).expect("label present");
            c.ideals += hits;
            c.primes += (hits > 0) as u64;
        }
    }
    let best = ETA_LABELS.iter().map(|l| (l, per_eta[*l].primes)).fold(
        None,
        |acc: Option<(&&str, u64)>, cur| match acc {
            Some(a) if a.1 >= cur.1 => Some(a),
            _ => Some(cur),
        },
    );
    if let Some((label, n)) = best {
        if n > 0 {
            row.best_eta = Some(label.to_string());
            row.normalized_best = normalized_density(n, x);
        }
    }
    row.normalized_joint = normalized_density(row.joint_surjective_primes, x);
    row.per_eta = per_eta;
    row
}

fn p_minus_1_from(classification: Classification, factors: &[u64]) -> Option<FactoredInteger> {
    match classification {
        Classification::Reject => None,
        _ => {
            let mut primes = factors.to_vec();
            primes.push(2);
            Some(FactoredInteger::from_primes(primes))
        }
    }
}

/// Unit primitivity statistics over sieve-accepted primes `p = a (mod f)`,
/// `p <= x`, for each `x` in `xs` and each admissible residue `a`.
pub fn growth_statistics(
    data: &BiquadClassData,
    k: &AbelianFieldSpec,
    h: &AbelianFieldSpec,
    residues: &[u64],
    f: u64,
    xs: &[u64],
    window: &SieveWindow,
    options: GrowthOptions,
) -> Result<GrowthStatistics> {
    if residues.is_empty() {
        bail!(Argument, "no residues given");
    }
    if k.basis().modulus() != f || h.basis().modulus() != f {
        bail!(Argument, "fields are not given modulo {f}");
    }
    for &a in residues {
        if !(heath_brown_coprime(a, f) && k.fixed_by(a) && !h.fixed_by(a)) {
            bail!(
                Precondition,
                "{a} mod {f} is not an admissible residue for {} inside {}",
                k.label,
                h.label
            );
        }
    }
    let mut residues = residues.to_vec();
    residues.sort_unstable();
    residues.dedup();
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut rows = Vec::new();
    let mut samples = None;
    for (i, &x) in xs.iter().enumerate() {
        let mut outcomes = Vec::new();
        for &a in &residues {
            let j = count_j(
                a,
                f,
                x,
                window,
                CountOptions {
                    keep_samples: true,
                    sieve: options.sieve,
                },
            )?;
            let primes = j.samples.unwrap_or_default();
            let part: Vec<PrimeOutcome> = primes
                .par_iter()
                .map(|s| {
                    let pm1 = p_minus_1_from(s.classification, &s.factors)
                        .expect("accepted sample has a factorization");
                    analyse_prime(data, s.p, a, &pm1)
                })
                .collect::<Result<_>>()?;
            outcomes.extend(part);
        }
        outcomes.sort_by_key(|o| o.samples[0].p);
        rows.push(aggregate(x, &outcomes));
        if options.keep_samples && i + 1 == xs.len() {
            samples = Some(outcomes.into_iter().flat_map(|o| o.samples).collect());
        }
    }
    Ok(GrowthStatistics {
        radicands: data.radicands,
        residues,
        f,
        window: *window,
        rows,
        samples,
    })
}

/// Per-ideal CSV log: `p, residue, ideal, surjective, single_eta, witnesses`.
pub fn write_growth_csv<W: Write>(samples: &[GrowthSample], out: W) -> Result<()> {
    let err = |e: csv::Error| crate::Error::Resource(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p",
        "residue",
        "ideal",
        "surjective",
        "single_eta",
        "witnesses",
    ])
    .map_err(err)?;
    for s in samples {
        let sign = |v: i8| if v > 0 { '+' } else { '-' };
        w.write_record([
            s.p.to_string(),
            s.residue.to_string(),
            format!("{}{}", sign(s.ideal[0]), sign(s.ideal[1])),
            s.surjective.to_string(),
            s.single_eta.to_string(),
            s.witnesses.join(" "),
        ])
        .map_err(err)?;
    }
    w.flush()
        .map_err(|e| crate::Error::Resource(format!("csv output failed: {e}")))?;
    Ok(())
}
