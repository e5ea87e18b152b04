//! Certificates: every hypothesis of the Euclidean ideal class criteria is
//! checked computationally and recorded with its evidence.
//!
//! A `CERTIFIED` verdict means that all listed hypotheses were verified. No
//! Euclidean algorithm is constructed.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfield::{
    build_basis, compositum, cubic_field, cubic_residue_character, field_for_q_rs,
    genus_field_quadratic, genus_hilbert_biquadratic, multiquadratic_field, AbelianFieldSpec,
    DirichletCharacter, FieldSpecJson, UnitGroupBasis,
};
use crate::error::{bail, Error, Result};
use crate::kuroda::{class_number_biquadratic, BiquadClassData};
use crate::ntheory::{is_prime, is_squarefree, lcm, SieveConfig};
use crate::primroot::{growth_statistics, GrowthOptions, GrowthStatistics};
use crate::quadfield::{class_number_quadratic, conductor_quadratic};
use crate::residues::{
    admissible_residues_multi, admissible_residues_single, check_cyclic_gal_H_over_K,
    check_intersection_hypothesis, AdmissibleResidue,
};
use crate::sieve::{count_j, CountOptions, JCount, Sample, SieveWindow};

pub const SCHEMA_VERSION: u32 = 1;

/// Number of residues listed explicitly in a certificate.
pub const LISTED_RESIDUES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Biquadratic,
    TwoCubic,
    ThreeQuadratic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Certified,
    HypothesisFailed { failed: Vec<String> },
    OutOfRange { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified => "CERTIFIED",
            Verdict::HypothesisFailed { .. } => "HYPOTHESIS_FAILED",
            Verdict::OutOfRange { .. } => "OUT_OF_RANGE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Computed,
    Asserted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub hypothesis: String,
    pub passed: bool,
    /// Where in the certificate the supporting data lives, plus a short summary.
    pub evidence: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub label: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub radicands: Vec<u64>,
    pub degree: usize,
    pub conductor: u64,
    pub characters: FieldSpecJson,
}

impl FieldDescription {
    fn of(field: &AbelianFieldSpec, radicands: Vec<u64>) -> Self {
        FieldDescription {
            label: field.label.clone(),
            radicands,
            degree: field.degree(),
            conductor: field.conductor(),
            characters: field.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldClassData {
    pub label: String,
    pub class_number: u64,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub biquadratic: Option<BiquadClassData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSummary {
    pub f: u64,
    pub count: usize,
    pub smallest: Option<u64>,
    /// The first [`LISTED_RESIDUES`] residues in ascending order.
    pub listed: Vec<AdmissibleResidue>,
}

impl ResidueSummary {
    fn new(f: u64, all: Vec<AdmissibleResidue>) -> Self {
        ResidueSummary {
            f,
            count: all.len(),
            smallest: all.first().map(|r| r.a),
            listed: all.into_iter().take(LISTED_RESIDUES).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub kind: CertificateKind,
    pub fields: Vec<FieldDescription>,
    pub f: Option<u64>,
    pub class_data: Vec<FieldClassData>,
    pub hilbert_fields: Vec<FieldDescription>,
    pub residues: Option<ResidueSummary>,
    /// Counts for the smallest admissible residue over the configured grid.
    pub sieve: Vec<JCount>,
    /// Evenly spaced accepted primes at the largest `X`, for audits.
    pub sieve_samples: Vec<Sample>,
    pub growth: Option<GrowthStatistics>,
    pub checklist: Vec<CheckEntry>,
    pub verdict: Verdict,
}

impl Certificate {
    fn new(kind: CertificateKind) -> Self {
        Certificate {
            schema: SCHEMA_VERSION,
            kind,
            fields: Vec::new(),
            f: None,
            class_data: Vec::new(),
            hilbert_fields: Vec::new(),
            residues: None,
            sieve: Vec::new(),
            sieve_samples: Vec::new(),
            growth: None,
            checklist: Vec::new(),
            verdict: Verdict::Certified,
        }
    }

    fn check(
        &mut self,
        id: &str,
        hypothesis: &str,
        passed: bool,
        evidence: String,
        provenance: Provenance,
    ) -> bool {
        self.checklist.push(CheckEntry {
            id: id.to_string(),
            hypothesis: hypothesis.to_string(),
            passed,
            evidence,
            provenance,
        });
        passed
    }

    /// Set the verdict from the checklist.
    fn conclude(mut self) -> Self {
        let failed: Vec<String> = self
            .checklist
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id.clone())
            .collect();
        self.verdict = if failed.is_empty() {
            Verdict::Certified
        } else {
            Verdict::HypothesisFailed { failed }
        };
        self
    }

    fn out_of_range(mut self, e: &Error) -> Self {
        self.verdict = Verdict::OutOfRange {
            reason: e.to_string(),
        };
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Certificate = serde_json::from_str(s)
            .map_err(|e| Error::Argument(format!("malformed certificate: {e}")))?;
        if c.schema != SCHEMA_VERSION {
            bail!(Argument, "unsupported certificate schema {}", c.schema);
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyConfig {
    pub window: SieveWindow,
    pub xs: Vec<u64>,
    pub sieve: SieveConfig,
    pub growth: bool,
    pub sample_cap: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            window: SieveWindow::default(),
            xs: vec![100_000, 1_000_000],
            sieve: SieveConfig::default(),
            growth: true,
            sample_cap: 256,
        }
    }
}

fn is_range_error(e: &Error) -> bool {
    matches!(e, Error::Overflow(_) | Error::Resource(_))
}

fn spread<T: Clone>(items: &[T], cap: usize) -> Vec<T> {
    if items.len() <= cap {
        return items.to_vec();
    }
    (0..cap)
        .map(|i| items[i * items.len() / cap].clone())
        .collect()
}

/// Sieve counts at every grid point for residue `a`, plus audit samples.
fn run_sieve(a: u64, f: u64, config: &CertifyConfig) -> Result<(Vec<JCount>, Vec<Sample>)> {
    let mut xs = config.xs.clone();
    xs.sort_unstable();
    xs.dedup();
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let last = i + 1 == xs.len();
        let mut j = count_j(
            a,
            f,
            x,
            &config.window,
            CountOptions {
                keep_samples: last,
                sieve: config.sieve,
            },
        )?;
        if let Some(s) = j.samples.take() {
            samples = spread(&s, config.sample_cap);
        }
        rows.push(j);
    }
    Ok((rows, samples))
}

fn check_triple(q: u64, r: u64, s: u64) -> Result<()> {
    for p in [q, r, s] {
        if p == 2 || !is_prime(p) {
            bail!(Argument, "{p} is not an odd prime");
        }
    }
    if q == r || q == s || r == s {
        bail!(Argument, "primes ({q}, {r}, {s}) are not distinct");
    }
    Ok(())
}

/// Certificate for `K = Q(sqrt q, sqrt rs)` having a Euclidean ideal class
/// via the class number two criterion.
pub fn certify_biquadratic(q: u64, r: u64, s: u64, config: &CertifyConfig) -> Result<Certificate> {
    check_triple(q, r, s)?;
    let mut cert = Certificate::new(CertificateKind::Biquadratic);
    cert.check(
        "distinct_odd_primes",
        "q, r, s are distinct odd primes",
        true,
        format!("input ({q}, {r}, {s})"),
        Provenance::Computed,
    );
    match biquadratic_pipeline(&mut cert, q, r, s, config) {
        Ok(()) => Ok(cert.conclude()),
        Err(e) if is_range_error(&e) => Ok(cert.out_of_range(&e)),
        Err(e) => Err(e),
    }
}

fn biquadratic_pipeline(
    cert: &mut Certificate,
    q: u64,
    r: u64,
    s: u64,
    config: &CertifyConfig,
) -> Result<()> {
    let rs = r
        .checked_mul(s)
        .ok_or_else(|| Error::Overflow(format!("{r} * {s} does not fit in 64 bits")))?;
    let qrs = q
        .checked_mul(rs)
        .ok_or_else(|| Error::Overflow(format!("{q} * {rs} does not fit in 64 bits")))?;
    let fk = [q, rs, qrs]
        .iter()
        .map(|&d| conductor_quadratic(d as i64))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1, lcm);
    let f = lcm(16, fk);
    cert.f = Some(f);
    let basis = build_basis(f)?;
    let k = field_for_q_rs(q, r, s, &basis)?;
    cert.fields.push(FieldDescription::of(&k, vec![q, rs, qrs]));
    cert.check(
        "totally_real_quartic",
        "K is a totally real abelian quartic field",
        k.degree() == 4 && k.is_real(),
        format!("fields[0]: degree {}, conductor {fk}", k.degree()),
        Provenance::Computed,
    );

    let data = class_number_biquadratic(q, r, s)?;
    let h = data.class_number;
    cert.class_data.push(FieldClassData {
        label: k.label.clone(),
        class_number: h,
        provenance: Provenance::Computed,
        biquadratic: Some(data.clone()),
    });
    let [h1, h2, h3] = data.subfield_class_numbers;
    if !cert.check(
        "class_number_two",
        "K has class number 2",
        h == 2,
        format!(
            "class_data[0]: h = {} * {h1} * {h2} * {h3} / 4 = {h}",
            data.unit_index
        ),
        Provenance::Computed,
    ) {
        return Ok(());
    }

    let hk = match genus_hilbert_biquadratic(q, r, s, h, &basis) {
        Ok(hk) => hk,
        Err(Error::Hypothesis(msg)) => {
            cert.check(
                "hilbert_field_abelian",
                "the Hilbert class field of K is abelian over Q",
                false,
                msg,
                Provenance::Computed,
            );
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    cert.hilbert_fields
        .push(FieldDescription::of(&hk, vec![q, r, s]));
    cert.check(
        "hilbert_field_abelian",
        "the Hilbert class field of K is abelian over Q",
        true,
        format!(
            "hilbert_fields[0]: {} is unramified over K of relative degree {h}",
            hk.label
        ),
        Provenance::Computed,
    );

    let residues = admissible_residues_single(&k, &hk, f)?;
    let summary = ResidueSummary::new(f, residues);
    let smallest = summary.smallest;
    let count = summary.count;
    cert.residues = Some(summary);
    if !cert.check(
        "admissible_residue_exists",
        "some a mod f splits K completely, acts nontrivially on H(K) and has gcd((a-1)/2, f) = 1",
        smallest.is_some(),
        format!("residues: {count} admissible residues mod {f}"),
        Provenance::Computed,
    ) {
        return Ok(());
    }
    let a = smallest.expect("checked above");
    let (rows, samples) = run_sieve(a, f, config)?;
    cert.sieve = rows;
    cert.sieve_samples = samples;
    if config.growth {
        cert.growth = Some(growth_statistics(
            &data,
            &k,
            &hk,
            &[a],
            f,
            &config.xs,
            &config.window,
            GrowthOptions {
                keep_samples: false,
                sieve: config.sieve,
            },
        )?);
    }
    Ok(())
}

/// User-supplied data for an abelian cubic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicInput {
    #[serde(default)]
    pub label: String,
    pub conductor: u64,
    /// Exponents of a cubic character over the basis modulo `conductor`.
    /// When absent, `conductor` must be a prime `= 1 (mod 3)` and the cubic
    /// residue character is used.
    #[serde(default)]
    pub character: Option<Vec<u64>>,
    pub class_number: u64,
    /// Generators of `X(H(K))`; may be omitted when the class number is 1.
    #[serde(default)]
    pub hilbert_field: Option<FieldSpecJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiInput {
    ThreeQuadratic { radicands: Vec<u64> },
    TwoCubic { fields: Vec<CubicInput> },
}

struct MultiField {
    k: AbelianFieldSpec,
    h: AbelianFieldSpec,
    radicands: Vec<u64>,
    class: FieldClassData,
    /// Failed validation of the Hilbert class field, if any.
    hilbert_problem: Option<String>,
}

/// Parse a serialized field and embed it modulo `target`.
pub fn field_from_json(
    json: &FieldSpecJson,
    target: &Arc<UnitGroupBasis>,
) -> Result<AbelianFieldSpec> {
    if json.modulus < 3 {
        return Ok(AbelianFieldSpec::rationals(target.clone()));
    }
    let own = build_basis(json.modulus)?;
    AbelianFieldSpec::from_json(json, own)?.lift_to(target)
}

fn cubic_character(input: &CubicInput, basis: &Arc<UnitGroupBasis>) -> Result<DirichletCharacter> {
    match &input.character {
        None => cubic_residue_character(input.conductor, basis),
        Some(exponents) => {
            if input.conductor < 3 {
                bail!(Argument, "cubic conductor {} is too small", input.conductor);
            }
            let own = build_basis(input.conductor)?;
            if exponents.len() != own.rank() {
                bail!(
                    Argument,
                    "character needs {} exponents modulo {}, got {}",
                    own.rank(),
                    input.conductor,
                    exponents.len()
                );
            }
            own.lift_character(
                &DirichletCharacter {
                    exponents: exponents.clone(),
                },
                basis,
            )
        }
    }
}

fn multi_fields(input: &MultiInput, basis: &Arc<UnitGroupBasis>) -> Result<Vec<MultiField>> {
    match input {
        MultiInput::ThreeQuadratic { radicands } => radicands
            .iter()
            .map(|&d| {
                let k = multiquadratic_field(&[d as i64], basis)?;
                let h = class_number_quadratic(d)?.h;
                let class = FieldClassData {
                    label: k.label.clone(),
                    class_number: h,
                    provenance: Provenance::Computed,
                    biquadratic: None,
                };
                let (hf, problem) = match genus_field_quadratic(d, basis) {
                    Ok(g) => (g, None),
                    Err(Error::Hypothesis(msg)) => (k.genus_field(), Some(msg)),
                    Err(e) => return Err(e),
                };
                Ok(MultiField {
                    k,
                    h: hf,
                    radicands: vec![d],
                    class,
                    hilbert_problem: problem,
                })
            })
            .collect(),
        MultiInput::TwoCubic { fields } => fields
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let label = if c.label.is_empty() {
                    format!("K{}", i + 1)
                } else {
                    c.label.clone()
                };
                let chi = cubic_character(c, basis)?;
                let k = cubic_field(&chi, c.conductor, basis, label.clone())?;
                let h = match &c.hilbert_field {
                    Some(json) => {
                        let mut h = field_from_json(json, basis)?;
                        h.label = format!("H({label})");
                        h
                    }
                    None if c.class_number == 1 => k.clone(),
                    None => bail!(
                        Argument,
                        "{label} has class number {} but no Hilbert class field was supplied",
                        c.class_number
                    ),
                };
                let problem = if !h.is_unramified_over(&k) {
                    Some(format!(
                        "{} is not an unramified real extension of {label}",
                        h.label
                    ))
                } else if (h.degree() / k.degree()) as u64 != c.class_number {
                    Some(format!(
                        "[{} : {label}] = {} differs from the class number {}",
                        h.label,
                        h.degree() / k.degree(),
                        c.class_number
                    ))
                } else {
                    None
                };
                Ok(MultiField {
                    k,
                    h,
                    radicands: Vec::new(),
                    class: FieldClassData {
                        label,
                        class_number: c.class_number,
                        provenance: Provenance::Asserted,
                        biquadratic: None,
                    },
                    hilbert_problem: problem,
                })
            })
            .collect(),
    }
}

fn multi_modulus(input: &MultiInput) -> Result<(CertificateKind, u64)> {
    match input {
        MultiInput::ThreeQuadratic { radicands } => {
            if radicands.len() != 3 {
                bail!(
                    Argument,
                    "three_quadratic needs exactly 3 fields, got {}",
                    radicands.len()
                );
            }
            let mut seen = radicands.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != 3 {
                bail!(Argument, "quadratic fields {radicands:?} are not distinct");
            }
            let mut f = 16;
            for &d in radicands {
                if d < 2 || !is_squarefree(d) || d > i64::MAX as u64 {
                    bail!(Argument, "radicand {d} is not a squarefree integer > 1");
                }
                f = lcm(f, conductor_quadratic(d as i64)?);
            }
            Ok((CertificateKind::ThreeQuadratic, f))
        }
        MultiInput::TwoCubic { fields } => {
            if fields.len() != 2 {
                bail!(
                    Argument,
                    "two_cubic needs exactly 2 fields, got {}",
                    fields.len()
                );
            }
            if fields.iter().any(|c| c.class_number == 0) {
                bail!(Argument, "class numbers must be positive");
            }
            Ok((
                CertificateKind::TwoCubic,
                fields.iter().fold(16, |f, c| lcm(f, c.conductor)),
            ))
        }
    }
}

/// Certificate for the multi-field criteria: at least one of the fields has
/// a Euclidean ideal class when every hypothesis passes.
pub fn certify_multi(input: &MultiInput, config: &CertifyConfig) -> Result<Certificate> {
    let (kind, f) = multi_modulus(input)?;
    let mut cert = Certificate::new(kind);
    match multi_pipeline(&mut cert, input, f, config) {
        Ok(()) => Ok(cert.conclude()),
        Err(e) if is_range_error(&e) => Ok(cert.out_of_range(&e)),
        Err(e) => Err(e),
    }
}

fn multi_pipeline(
    cert: &mut Certificate,
    input: &MultiInput,
    f: u64,
    config: &CertifyConfig,
) -> Result<()> {
    cert.f = Some(f);
    let basis = build_basis(f)?;
    let fields = multi_fields(input, &basis)?;
    for (i, a) in fields.iter().enumerate() {
        if fields[..i].iter().any(|b| b.k == a.k) {
            bail!(Argument, "field {} is repeated", a.class.label);
        }
    }
    for m in &fields {
        cert.fields
            .push(FieldDescription::of(&m.k, m.radicands.clone()));
        cert.hilbert_fields
            .push(FieldDescription::of(&m.h, Vec::new()));
        cert.class_data.push(m.class.clone());
    }
    let mut ok = true;
    for (i, m) in fields.iter().enumerate() {
        let provenance = m.class.provenance;
        ok &= cert.check(
            &format!("hilbert_field_abelian_{}", i + 1),
            &format!("H({}) is abelian over Q", m.class.label),
            m.hilbert_problem.is_none(),
            m.hilbert_problem.clone().unwrap_or_else(|| {
                format!(
                    "hilbert_fields[{i}]: degree {} over Q, class number {}",
                    m.h.degree(),
                    m.class.class_number
                )
            }),
            provenance,
        );
        if kind_needs_cyclic_class_group(cert.kind) {
            let cyclic = check_cyclic_gal_H_over_K(&m.h, &m.k)?;
            ok &= cert.check(
                &format!("class_group_cyclic_{}", i + 1),
                &format!("the class group of {} is cyclic", m.class.label),
                cyclic,
                format!("hilbert_fields[{i}]: Gal(H/K) cyclic = {cyclic}"),
                provenance,
            );
        }
    }
    if !ok {
        return Ok(());
    }
    let mut k = fields[0].k.clone();
    let mut h = fields[0].h.clone();
    for m in &fields[1..] {
        k = compositum(&k, &m.k)?;
        h = compositum(&h, &m.h)?;
    }
    let cyclic = check_cyclic_gal_H_over_K(&h, &k)?;
    cert.check(
        "gal_h_over_k_cyclic",
        "Gal(H/K) is cyclic for the composita H and K",
        cyclic,
        format!("[H : K] = {}", h.degree() / k.degree()),
        Provenance::Computed,
    );
    let pairs: Vec<(AbelianFieldSpec, AbelianFieldSpec)> =
        fields.iter().map(|m| (m.k.clone(), m.h.clone())).collect();
    let report = check_intersection_hypothesis(&pairs)?;
    cert.check(
        "intersection_hypothesis",
        "H(K_i) ∩ K_j = K_i ∩ K_j = H(K_j) ∩ K_i for all pairs",
        report.holds,
        if report.holds {
            "all pairs agree".to_string()
        } else {
            format!(
                "failing pairs (degrees of the three intersections): {}",
                report
                    .failing_pairs
                    .iter()
                    .map(|p| format!("({}, {}) {:?}", p.i + 1, p.j + 1, p.degrees))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        },
        Provenance::Computed,
    );
    let residues = admissible_residues_multi(&pairs, f)?;
    let summary = ResidueSummary::new(f, residues);
    let smallest = summary.smallest;
    let count = summary.count;
    cert.residues = Some(summary);
    cert.check(
        "admissible_residue_exists",
        "some a mod f splits K completely, generates every Gal(H(K_i)/K_i) and has gcd((a-1)/2, f) = 1",
        smallest.is_some(),
        format!("residues: {count} admissible residues mod {f}"),
        Provenance::Computed,
    );
    if let Some(a) = smallest {
        let (rows, samples) = run_sieve(a, f, config)?;
        cert.sieve = rows;
        cert.sieve_samples = samples;
    }
    Ok(())
}

fn kind_needs_cyclic_class_group(kind: CertificateKind) -> bool {
    kind == CertificateKind::TwoCubic
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub q: u64,
    pub r: u64,
    pub s: u64,
    pub f: Option<u64>,
    pub class_number: Option<u64>,
    pub residue_count: Option<usize>,
    pub smallest_residue: Option<u64>,
    pub verdict: Verdict,
}

impl SearchSummary {
    pub fn of(q: u64, r: u64, s: u64, cert: &Certificate) -> Self {
        SearchSummary {
            q,
            r,
            s,
            f: cert.f,
            class_number: cert.class_data.first().map(|c| c.class_number),
            residue_count: cert.residues.as_ref().map(|r| r.count),
            smallest_residue: cert.residues.as_ref().and_then(|r| r.smallest),
            verdict: cert.verdict.clone(),
        }
    }
}

/// Triples `(q, r, s)` of distinct odd primes `<= bound` with `r < s`, in
/// lexicographic order.
pub fn search_triples(bound: u64) -> Vec<(u64, u64, u64)> {
    let primes: Vec<u64> = (3..=bound).filter(|&p| is_prime(p)).collect();
    let mut out = Vec::new();
    for &q in &primes {
        for (i, &r) in primes.iter().enumerate() {
            for &s in &primes[i + 1..] {
                if q != r && q != s {
                    out.push((q, r, s));
                }
            }
        }
    }
    out
}

/// Certify every triple up to `bound`, in deterministic order.
pub fn search_biquadratic(bound: u64, config: &CertifyConfig) -> Result<Vec<SearchSummary>> {
    if bound < 5 {
        bail!(Argument, "search bound must be at least 5, got {bound}");
    }
    search_triples(bound)
        .into_par_iter()
        .map(|(q, r, s)| {
            let cert = certify_biquadratic(q, r, s, config)?;
            Ok(SearchSummary::of(q, r, s, &cert))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> CertifyConfig {
        CertifyConfig {
            xs: vec![20_000, 50_000],
            ..CertifyConfig::default()
        }
    }

    #[test]
    fn certified_triple() {
        let c = certify_biquadratic(3, 5, 7, &quick()).unwrap();
        assert_eq!(c.verdict, Verdict::Certified);
        assert_eq!(c.f, Some(1680));
        assert_eq!(c.residues.as_ref().unwrap().count, 16);
        assert!(c.checklist.iter().all(|e| e.passed));
        assert_eq!(c.sieve.len(), 2);
        assert!(c.growth.is_some());
    }

    #[test]
    fn class_number_one_fails() {
        let c = certify_biquadratic(5, 3, 7, &quick()).unwrap();
        assert_eq!(
            c.verdict,
            Verdict::HypothesisFailed {
                failed: vec!["class_number_two".into()]
            }
        );
        assert!(c.residues.is_none());
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            certify_biquadratic(3, 3, 5, &quick()),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            certify_biquadratic(2, 3, 5, &quick()),
            Err(Error::Argument(_))
        ));
        assert!(search_biquadratic(4, &quick()).is_err());
    }

    #[test]
    fn out_of_range_triple() {
        let c = certify_biquadratic(19, 23, 29, &quick()).unwrap();
        assert!(matches!(c.verdict, Verdict::OutOfRange { .. }));
    }

    #[test]
    fn round_trip() {
        let c = certify_biquadratic(3, 5, 7, &quick()).unwrap();
        let text = c.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn three_quadratic_coprime() {
        let input = MultiInput::ThreeQuadratic {
            radicands: vec![2, 5, 13],
        };
        let c = certify_multi(&input, &quick()).unwrap();
        assert_eq!(c.f, Some(1040));
        assert_eq!(c.verdict, Verdict::Certified, "{:#?}", c.checklist);
        let single = MultiInput::ThreeQuadratic { radicands: vec![2] };
        assert!(certify_multi(&single, &quick()).is_err());
    }

    #[test]
    fn cubic_pair_sharing_genus_field() {
        let genus = FieldSpecJson {
            modulus: 91,
            characters: vec![vec![2, 0], vec![0, 4]],
            label: String::new(),
        };
        let cubic = |label: &str, chi: Vec<u64>| CubicInput {
            label: label.into(),
            conductor: 91,
            character: Some(chi),
            class_number: 3,
            hilbert_field: Some(genus.clone()),
        };
        let input = MultiInput::TwoCubic {
            fields: vec![cubic("K1", vec![2, 4]), cubic("K2", vec![2, 8])],
        };
        let c = certify_multi(&input, &quick()).unwrap();
        assert_eq!(c.kind, CertificateKind::TwoCubic);
        match &c.verdict {
            Verdict::HypothesisFailed { failed } => {
                assert!(
                    failed.contains(&"intersection_hypothesis".to_string()),
                    "{failed:?}"
                )
            }
            v => panic!("unexpected verdict {v:?}"),
        }
        assert!(c.checklist.iter().any(|e| e.id == "hilbert_field_abelian_1"
            && e.passed
            && e.provenance == Provenance::Asserted));
    }

    #[test]
    fn search_enumeration() {
        assert_eq!(search_triples(7), vec![(3, 5, 7), (5, 3, 7), (7, 3, 5)]);
        assert_eq!(search_triples(11).len(), 4 * 3);
    }
}
