//! Abelian number fields as groups of Dirichlet characters.
//!
//! A field `K` inside `Q(zeta_f)` is identified with its character group
//! `X(K)`; the Galois group `Gal(Q(zeta_f)/K)` is then the common kernel of
//! `X(K)` in `(Z/fZ)^x`. Intersections and composita of fields become
//! intersections and generated subgroups of character groups.
//!
//! Characters are exponent vectors over a fixed decomposition of
//! `(Z/fZ)^x` into cyclic factors, one per odd prime power plus `{-1, 5}` for
//! the 2-part, and are evaluated through discrete-log tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::ntheory::{
    factor, gcd, inv_mod, is_prime, kronecker, lcm, mul_mod, smallest_primitive_root,
};
use crate::quadfield::{class_number_quadratic, fundamental_discriminant};

/// Default bound on `phi(f)` for discrete-log tables.
pub const DEFAULT_TABLE_LIMIT: u64 = 100_000_000;

/// An element `exp(2 pi i numerator / denominator)` of the roots of unity,
/// kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub numerator: u64,
    pub denominator: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity {
        numerator: 0,
        denominator: 1,
    };

    pub fn new(numerator: u64, denominator: u64) -> Self {
        let n = numerator % denominator;
        let g = gcd(n, denominator);
        RootOfUnity {
            numerator: n / g,
            denominator: denominator / g,
        }
    }

    pub fn is_one(&self) -> bool {
        self.numerator == 0
    }

    /// Multiplicative order as a root of unity.
    pub fn order(&self) -> u64 {
        self.denominator
    }

    /// `+1` or `-1` for real values, `None` otherwise.
    pub fn as_sign(&self) -> Option<i8> {
        match self.denominator {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn from_sign(sign: i8) -> Self {
        if sign == 1 {
            Self::ONE
        } else {
            RootOfUnity::new(1, 2)
        }
    }
}

/// One cyclic factor of `(Z/fZ)^x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Generator as a residue modulo `f`, congruent to 1 at every other prime.
    pub generator: u64,
    pub order: u64,
    pub prime: u64,
    pub prime_power: u64,
}

#[derive(Debug, Clone)]
struct PrimePart {
    prime: u64,
    prime_power: u64,
    first: usize,
    count: usize,
    /// residue mod prime_power -> packed exponent index, `u32::MAX` for non-units
    table: Vec<u32>,
    /// order of the second (5-generated) component for the 2-adic packing
    inner_order: u64,
}

/// `(Z/fZ)^x` with a fixed cyclic decomposition and discrete-log tables.
#[derive(Debug, Clone)]
pub struct UnitGroupBasis {
    modulus: u64,
    components: Vec<Component>,
    parts: Vec<PrimePart>,
    exponent: u64,
    phi: u64,
}

impl PartialEq for UnitGroupBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl Eq for UnitGroupBasis {}

/// CRT basis for modulus `f >= 3` with the default table bound.
pub fn build_basis(f: u64) -> Result<Arc<UnitGroupBasis>> {
    UnitGroupBasis::with_limit(f, DEFAULT_TABLE_LIMIT).map(Arc::new)
}

impl UnitGroupBasis {
    pub fn with_limit(f: u64, table_limit: u64) -> Result<Self> {
        if f < 3 {
            bail!(Argument, "modulus must be at least 3, got {f}");
        }
        let fac = factor(f);
        let phi = fac.phi();
        if phi > table_limit {
            bail!(
                Resource,
                "phi({f}) = {phi} exceeds the discrete-log table bound {table_limit}"
            );
        }
        let mut components = Vec::new();
        let mut parts = Vec::new();
        for &(p, e) in &fac.factors {
            let pk = p.pow(e);
            let cofactor = f / pk;
            // residue congruent to `local` mod pk and to 1 mod the cofactor
            let lift = |local: u64| -> u64 {
                if cofactor == 1 {
                    return local % f;
                }
                let inv = inv_mod(cofactor % pk, pk).expect("coprime CRT factors");
                let t = mul_mod((local + pk - 1) % pk, inv, pk);
                (1 + cofactor as u128 * t as u128) as u64 % f
            };
            let first = components.len();
            let mut table = vec![u32::MAX; pk as usize];
            let mut inner_order = 1;
            if p == 2 {
                if e == 1 {
                    // (Z/2Z)^x is trivial
                    table[1] = 0;
                } else if e == 2 {
                    components.push(Component {
                        generator: lift(3),
                        order: 2,
                        prime: 2,
                        prime_power: 4,
                    });
                    table[1] = 0;
                    table[3] = 1;
                } else {
                    inner_order = pk / 4;
                    components.push(Component {
                        generator: lift(pk - 1),
                        order: 2,
                        prime: 2,
                        prime_power: pk,
                    });
                    components.push(Component {
                        generator: lift(5),
                        order: inner_order,
                        prime: 2,
                        prime_power: pk,
                    });
                    let mut x = 1u64;
                    for e2 in 0..inner_order {
                        table[x as usize] = e2 as u32;
                        table[(pk - x) as usize] = (inner_order + e2) as u32;
                        x = x * 5 % pk;
                    }
                }
            } else {
                let g = smallest_primitive_root(pk).expect("odd prime powers are cyclic");
                let order = pk / p * (p - 1);
                components.push(Component {
                    generator: lift(g),
                    order,
                    prime: p,
                    prime_power: pk,
                });
                let mut x = 1u64;
                for k in 0..order {
                    table[x as usize] = k as u32;
                    x = mul_mod(x, g, pk);
                }
            }
            parts.push(PrimePart {
                prime: p,
                prime_power: pk,
                first,
                count: components.len() - first,
                table,
                inner_order,
            });
        }
        let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        Ok(UnitGroupBasis {
            modulus: f,
            components,
            parts,
            exponent,
            phi,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Exponent of the group, the lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    /// Discrete logarithm of `a` over the basis, written into `out`.
    /// Returns `false` when `gcd(a, f) != 1`.
    pub fn dlog_into(&self, a: u64, out: &mut [u64]) -> bool {
        for part in &self.parts {
            let idx = part.table[(a % part.prime_power) as usize];
            if idx == u32::MAX {
                return false;
            }
            let idx = idx as u64;
            match part.count {
                0 => {}
                1 => out[part.first] = idx,
                _ => {
                    out[part.first] = idx / part.inner_order;
                    out[part.first + 1] = idx % part.inner_order;
                }
            }
        }
        true
    }

    pub fn dlog(&self, a: u64) -> Option<Vec<u64>> {
        let mut out = vec![0; self.rank()];
        self.dlog_into(a, &mut out).then_some(out)
    }

    /// Residue with the given exponent vector.
    pub fn element(&self, exponents: &[u64]) -> u64 {
        self.components
            .iter()
            .zip(exponents)
            .fold(1u64, |acc, (c, &e)| {
                mul_mod(
                    acc,
                    crate::ntheory::pow_mod(c.generator, e, self.modulus),
                    self.modulus,
                )
            })
    }

    pub fn trivial_character(&self) -> DirichletCharacter {
        DirichletCharacter {
            exponents: vec![0; self.rank()],
        }
    }

    fn check(&self, chi: &DirichletCharacter) {
        debug_assert_eq!(chi.exponents.len(), self.rank());
    }

    /// Per-component weights `c_i * (N / order_i) mod N` with `N` the group
    /// exponent, so that `chi(a) = zeta_N^(sum w_i e_i)`.
    pub fn weights(&self, chi: &DirichletCharacter) -> Vec<u64> {
        self.check(chi);
        self.components
            .iter()
            .zip(&chi.exponents)
            .map(|(c, &x)| x % c.order * (self.exponent / c.order))
            .collect()
    }

    pub fn eval_exponents(&self, weights: &[u64], dlog: &[u64]) -> u64 {
        let n = self.exponent as u128;
        (weights
            .iter()
            .zip(dlog)
            .map(|(&w, &e)| w as u128 * e as u128 % n)
            .sum::<u128>()
            % n) as u64
    }

    /// `chi(a)`, or `None` when `a` is not a unit mod `f`.
    pub fn eval(&self, chi: &DirichletCharacter, a: u64) -> Option<RootOfUnity> {
        let dlog = self.dlog(a)?;
        let k = self.eval_exponents(&self.weights(chi), &dlog);
        Some(RootOfUnity::new(k, self.exponent))
    }

    pub fn mul(&self, chi: &DirichletCharacter, psi: &DirichletCharacter) -> DirichletCharacter {
        DirichletCharacter {
            exponents: self
                .components
                .iter()
                .zip(chi.exponents.iter().zip(&psi.exponents))
                .map(|(c, (&x, &y))| (x + y) % c.order)
                .collect(),
        }
    }

    pub fn pow(&self, chi: &DirichletCharacter, k: u64) -> DirichletCharacter {
        DirichletCharacter {
            exponents: self
                .components
                .iter()
                .zip(&chi.exponents)
                .map(|(c, &x)| ((x as u128 * k as u128) % c.order as u128) as u64)
                .collect(),
        }
    }

    pub fn order(&self, chi: &DirichletCharacter) -> u64 {
        self.components
            .iter()
            .zip(&chi.exponents)
            .fold(1, |acc, (c, &x)| {
                lcm(acc, c.order / gcd(c.order, x % c.order))
            })
    }

    /// The character whose value at each basis generator is `value(generator)`.
    /// Fails if a prescribed value has order not dividing the generator's order.
    pub fn character_from_generator_values(
        &self,
        mut value: impl FnMut(&Component) -> RootOfUnity,
    ) -> Result<DirichletCharacter> {
        let mut exponents = Vec::with_capacity(self.rank());
        for c in &self.components {
            let v = value(c);
            if c.order % v.denominator != 0 {
                bail!(
                    Argument,
                    "value of order {} at a generator of order {}",
                    v.denominator,
                    c.order
                );
            }
            exponents.push(v.numerator * (c.order / v.denominator));
        }
        Ok(DirichletCharacter { exponents })
    }

    /// Restriction of `chi` to the `p`-part of the group (the local component).
    pub fn local_component(&self, chi: &DirichletCharacter, p: u64) -> DirichletCharacter {
        DirichletCharacter {
            exponents: self
                .components
                .iter()
                .zip(&chi.exponents)
                .map(|(c, &x)| if c.prime == p { x } else { 0 })
                .collect(),
        }
    }

    pub fn primes(&self) -> Vec<u64> {
        self.parts.iter().map(|p| p.prime).collect()
    }

    /// Conductor of a single character, as the product of local conductors.
    pub fn conductor(&self, chi: &DirichletCharacter) -> u64 {
        let mut cond = 1u64;
        for part in &self.parts {
            let local = &chi.exponents[part.first..part.first + part.count];
            let comps = &self.components[part.first..part.first + part.count];
            if local.iter().all(|&x| x == 0) {
                continue;
            }
            let p = part.prime;
            if p == 2 {
                if part.count == 1 || local[1] == 0 {
                    cond *= 4;
                } else {
                    // the 5-part has order 2^t; conductor 2^(t+2)
                    let ord = comps[1].order / gcd(comps[1].order, local[1]);
                    cond *= 4 * ord;
                }
            } else {
                let ord = comps[0].order / gcd(comps[0].order, local[0]);
                // smallest j >= 1 with ord | phi(p^j)
                let mut pj = p;
                while (pj / p * (p - 1)) % ord != 0 {
                    pj *= p;
                }
                cond *= pj;
            }
        }
        cond
    }

    /// Express `chi` defined on `self` as a character of a basis whose
    /// modulus is a multiple of ours.
    pub fn lift_character(
        &self,
        chi: &DirichletCharacter,
        target: &UnitGroupBasis,
    ) -> Result<DirichletCharacter> {
        if target.modulus % self.modulus != 0 {
            bail!(
                Argument,
                "cannot lift a character mod {} to modulus {}",
                self.modulus,
                target.modulus
            );
        }
        target.character_from_generator_values(|c| {
            self.eval(chi, c.generator % self.modulus)
                .expect("generators stay units modulo a divisor")
        })
    }
}

/// A Dirichlet character as an exponent vector over a [`UnitGroupBasis`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirichletCharacter {
    pub exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&x| x == 0)
    }
}

/// Kronecker character `a -> (D|a)` of a fundamental discriminant `D`.
pub fn quadratic_character(disc: i64, basis: &UnitGroupBasis) -> Result<DirichletCharacter> {
    if disc == 1 {
        return Ok(basis.trivial_character());
    }
    if basis.modulus() % disc.unsigned_abs() != 0 {
        bail!(
            Argument,
            "conductor {} does not divide the modulus {}",
            disc.unsigned_abs(),
            basis.modulus()
        );
    }
    if !is_fundamental_discriminant(disc) {
        bail!(Argument, "{disc} is not a fundamental discriminant");
    }
    basis.character_from_generator_values(|c| {
        RootOfUnity::from_sign(kronecker(disc, c.generator as i64))
    })
}

pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 1 {
        return true;
    }
    match disc.rem_euclid(4) {
        1 => crate::ntheory::is_squarefree(disc.unsigned_abs()),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && crate::ntheory::is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Unique factorization of a fundamental discriminant into prime
/// discriminants `p* = (-1)^((p-1)/2) p` and `-4, 8, -8` at 2.
pub fn prime_discriminant_factorization(disc: i64) -> Result<Vec<i64>> {
    if !is_fundamental_discriminant(disc) {
        bail!(Argument, "{disc} is not a fundamental discriminant");
    }
    let mut out = Vec::new();
    let odd_part = factor(disc.unsigned_abs());
    let mut product = 1i64;
    for (p, _) in odd_part.factors.iter().copied().filter(|&(p, _)| p != 2) {
        let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        product *= p_star;
        out.push(p_star);
    }
    if disc % 4 == 0 {
        let two = disc / product;
        debug_assert!(matches!(two, -4 | 8 | -8));
        out.insert(0, two);
    }
    Ok(out)
}

/// An abelian field as its character group inside `Q(zeta_f)`.
#[derive(Debug, Clone)]
pub struct AbelianFieldSpec {
    basis: Arc<UnitGroupBasis>,
    characters: Vec<DirichletCharacter>,
    pub label: String,
}

impl PartialEq for AbelianFieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.characters == other.characters
    }
}

impl Eq for AbelianFieldSpec {}

/// Serialized form `{modulus, characters: [[exponents]], label}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub modulus: u64,
    pub characters: Vec<Vec<u64>>,
    #[serde(default)]
    pub label: String,
}

impl AbelianFieldSpec {
    /// The subgroup generated by `generators`.
    pub fn generated_by(
        basis: Arc<UnitGroupBasis>,
        generators: &[DirichletCharacter],
        label: impl Into<String>,
    ) -> Self {
        let mut group: BTreeSet<DirichletCharacter> = BTreeSet::new();
        group.insert(basis.trivial_character());
        for g in generators {
            if group.contains(g) {
                continue;
            }
            // new group = union of cosets g^k * group
            let current: Vec<_> = group.iter().cloned().collect();
            let mut power = g.clone();
            while !group.contains(&power) {
                for h in &current {
                    group.insert(basis.mul(&power, h));
                }
                power = basis.mul(&power, g);
            }
        }
        AbelianFieldSpec {
            basis,
            characters: group.into_iter().collect(),
            label: label.into(),
        }
    }

    pub fn rationals(basis: Arc<UnitGroupBasis>) -> Self {
        Self::generated_by(basis, &[], "Q")
    }

    pub fn basis(&self) -> &Arc<UnitGroupBasis> {
        &self.basis
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    /// `[K : Q] = |X(K)|`.
    pub fn degree(&self) -> usize {
        self.characters.len()
    }

    pub fn contains_character(&self, chi: &DirichletCharacter) -> bool {
        self.characters.binary_search(chi).is_ok()
    }

    /// `other` is a subfield of `self`, i.e. `X(other) ⊆ X(self)`.
    pub fn contains_field(&self, other: &AbelianFieldSpec) -> bool {
        self.basis == other.basis && other.characters.iter().all(|c| self.contains_character(c))
    }

    fn same_basis(&self, other: &AbelianFieldSpec) -> Result<()> {
        if self.basis != other.basis {
            bail!(
                Argument,
                "fields live in different ambient moduli ({} vs {})",
                self.basis.modulus(),
                other.basis.modulus()
            );
        }
        Ok(())
    }

    /// Weights for fast evaluation of every character in the group.
    pub fn weight_table(&self) -> Vec<Vec<u64>> {
        self.characters
            .iter()
            .map(|c| self.basis.weights(c))
            .collect()
    }

    /// Whether `sigma_a` fixes the field, i.e. `chi(a) = 1` for all `chi`.
    /// Equivalently, primes `p = a (mod f)` split completely.
    pub fn fixed_by(&self, a: u64) -> bool {
        let Some(dlog) = self.basis.dlog(a) else {
            return false;
        };
        self.weight_table()
            .iter()
            .all(|w| self.basis.eval_exponents(w, &dlog) == 0)
    }

    /// The subgroup `Gal(Q(zeta_f)/K)` of `(Z/fZ)^x`, as sorted residues.
    pub fn kernel(&self) -> Vec<u64> {
        let weights = self.weight_table();
        let mut dlog = vec![0; self.basis.rank()];
        (1..self.basis.modulus())
            .filter(|&a| {
                self.basis.dlog_into(a, &mut dlog)
                    && weights
                        .iter()
                        .all(|w| self.basis.eval_exponents(w, &dlog) == 0)
            })
            .collect()
    }

    /// Totally real iff every character is even.
    pub fn is_real(&self) -> bool {
        let minus_one = self.basis.modulus() - 1;
        self.characters
            .iter()
            .all(|c| self.basis.eval(c, minus_one) == Some(RootOfUnity::ONE))
    }

    /// Conductor of the field: lcm of its character conductors.
    pub fn conductor(&self) -> u64 {
        self.characters
            .iter()
            .fold(1, |acc, c| lcm(acc, self.basis.conductor(c)))
    }

    /// Ramification index of `p`: the size of the group of local components at `p`.
    pub fn ramification_index(&self, p: u64) -> usize {
        self.characters
            .iter()
            .map(|c| self.basis.local_component(c, p))
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// `self / base` is unramified at every finite prime and at infinity.
    pub fn is_unramified_over(&self, base: &AbelianFieldSpec) -> bool {
        self.contains_field(base)
            && (!base.is_real() || self.is_real())
            && self
                .basis
                .primes()
                .into_iter()
                .all(|p| self.ramification_index(p) == base.ramification_index(p))
    }

    /// Largest abelian extension of `Q` in `Q(zeta_f)` unramified over `self`
    /// at all finite primes: generated by the local components of `X(K)`.
    pub fn narrow_genus_field(&self) -> AbelianFieldSpec {
        let mut gens = Vec::new();
        for p in self.basis.primes() {
            for c in &self.characters {
                gens.push(self.basis.local_component(c, p));
            }
        }
        gens.sort();
        gens.dedup();
        Self::generated_by(
            self.basis.clone(),
            &gens,
            format!("narrow genus field of {}", self.label),
        )
    }

    /// Genus field in the wide sense: the largest subfield of `H(K)` that is
    /// abelian over `Q`. For real `K` these are the even characters of the
    /// narrow genus group.
    pub fn genus_field(&self) -> AbelianFieldSpec {
        let narrow = self.narrow_genus_field();
        if !self.is_real() {
            return narrow;
        }
        let minus_one = self.basis.modulus() - 1;
        let even: Vec<_> = narrow
            .characters
            .iter()
            .filter(|c| self.basis.eval(c, minus_one) == Some(RootOfUnity::ONE))
            .cloned()
            .collect();
        AbelianFieldSpec {
            basis: self.basis.clone(),
            characters: even,
            label: format!("genus field of {}", self.label),
        }
    }

    pub fn to_json(&self) -> FieldSpecJson {
        FieldSpecJson {
            modulus: self.basis.modulus(),
            characters: self
                .characters
                .iter()
                .map(|c| c.exponents.clone())
                .collect(),
            label: self.label.clone(),
        }
    }

    /// Parse a serialized spec; the listed characters are closed under
    /// multiplication if they are only generators.
    pub fn from_json(json: &FieldSpecJson, basis: Arc<UnitGroupBasis>) -> Result<Self> {
        if json.modulus != basis.modulus() {
            bail!(
                Argument,
                "field modulus {} differs from basis modulus {}",
                json.modulus,
                basis.modulus()
            );
        }
        let mut gens = Vec::new();
        for ex in &json.characters {
            if ex.len() != basis.rank() {
                bail!(
                    Argument,
                    "character {ex:?} has {} exponents, basis has rank {}",
                    ex.len(),
                    basis.rank()
                );
            }
            if ex
                .iter()
                .zip(basis.components())
                .any(|(&x, c)| x >= c.order)
            {
                bail!(Argument, "character {ex:?} has an exponent out of range");
            }
            gens.push(DirichletCharacter {
                exponents: ex.clone(),
            });
        }
        Ok(Self::generated_by(basis, &gens, json.label.clone()))
    }

    /// Re-embed into a larger ambient modulus.
    pub fn lift_to(&self, target: &Arc<UnitGroupBasis>) -> Result<AbelianFieldSpec> {
        let gens = self
            .characters
            .iter()
            .map(|c| self.basis.lift_character(c, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::generated_by(
            target.clone(),
            &gens,
            self.label.clone(),
        ))
    }
}

/// `X(A) ∩ X(B)`, the character group of `A ∩ B`.
pub fn intersect(a: &AbelianFieldSpec, b: &AbelianFieldSpec) -> Result<AbelianFieldSpec> {
    a.same_basis(b)?;
    Ok(AbelianFieldSpec {
        basis: a.basis.clone(),
        characters: a
            .characters
            .iter()
            .filter(|c| b.contains_character(c))
            .cloned()
            .collect(),
        label: format!("({}) ∩ ({})", a.label, b.label),
    })
}

/// The subgroup generated by `X(A) ∪ X(B)`, the character group of `AB`.
pub fn compositum(a: &AbelianFieldSpec, b: &AbelianFieldSpec) -> Result<AbelianFieldSpec> {
    a.same_basis(b)?;
    let gens: Vec<_> = a.characters.iter().chain(&b.characters).cloned().collect();
    Ok(AbelianFieldSpec::generated_by(
        a.basis.clone(),
        &gens,
        format!("({})({})", a.label, b.label),
    ))
}

/// `Q(sqrt d_1, ..., sqrt d_k)` for squarefree `d_i`.
pub fn multiquadratic_field(
    radicands: &[i64],
    basis: &Arc<UnitGroupBasis>,
) -> Result<AbelianFieldSpec> {
    let gens = radicands
        .iter()
        .map(|&d| quadratic_character(fundamental_discriminant(d)?, basis))
        .collect::<Result<Vec<_>>>()?;
    let label = format!(
        "Q({})",
        radicands
            .iter()
            .map(|d| format!("√{d}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(AbelianFieldSpec::generated_by(basis.clone(), &gens, label))
}

/// `Q(sqrt d1, sqrt d2)` with its four characters `1, chi_D1, chi_D2, chi_D1 chi_D2`.
pub fn field_for_biquadratic(
    d1: i64,
    d2: i64,
    basis: &Arc<UnitGroupBasis>,
) -> Result<AbelianFieldSpec> {
    let field = multiquadratic_field(&[d1, d2], basis)?;
    if field.degree() != 4 {
        bail!(
            Argument,
            "Q(√{d1}, √{d2}) is degenerate (degree {})",
            field.degree()
        );
    }
    Ok(field)
}

fn check_distinct_odd_primes(q: u64, r: u64, s: u64) -> Result<()> {
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

/// `K = Q(sqrt q, sqrt rs)`.
pub fn field_for_q_rs(
    q: u64,
    r: u64,
    s: u64,
    basis: &Arc<UnitGroupBasis>,
) -> Result<AbelianFieldSpec> {
    check_distinct_odd_primes(q, r, s)?;
    let mut k = field_for_biquadratic(q as i64, (r * s) as i64, basis)?;
    k.label = format!("Q(√{q}, √{})", r * s);
    Ok(k)
}

/// Hilbert class field of `K = Q(sqrt q, sqrt rs)` when `h(K) = 2`: the
/// field `Q(sqrt q, sqrt r, sqrt s)`, accepted only after checking that it
/// is unramified over `K` (so that degree counting forces equality).
pub fn genus_hilbert_biquadratic(
    q: u64,
    r: u64,
    s: u64,
    class_number: u64,
    basis: &Arc<UnitGroupBasis>,
) -> Result<AbelianFieldSpec> {
    check_distinct_odd_primes(q, r, s)?;
    if class_number != 2 {
        bail!(
            Hypothesis,
            "class number of Q(√{q}, √{}) is {class_number}, not 2",
            r * s
        );
    }
    let k = field_for_q_rs(q, r, s, basis)?;
    let h = multiquadratic_field(&[q as i64, r as i64, s as i64], basis)?;
    if !h.is_unramified_over(&k) {
        let bad: Vec<_> = basis
            .primes()
            .into_iter()
            .filter(|&p| h.ramification_index(p) != k.ramification_index(p))
            .collect();
        bail!(
            Hypothesis,
            "{} is ramified over {} at {bad:?}, so it is not the Hilbert class field",
            h.label,
            k.label
        );
    }
    Ok(h)
}

/// Hilbert class field of a real quadratic field whose Hilbert class field is
/// abelian over `Q`, i.e. equal to the genus field. Fails when the genus
/// field is too small to account for the whole class group.
pub fn genus_field_quadratic(d: u64, basis: &Arc<UnitGroupBasis>) -> Result<AbelianFieldSpec> {
    let h = class_number_quadratic(d)?.h;
    let k = multiquadratic_field(&[d as i64], basis)?;
    let genus = k.genus_field();
    let relative = (genus.degree() / k.degree()) as u64;
    if relative != h {
        bail!(
            Hypothesis,
            "Q(√{d}) has class number {h} but its genus field has relative degree {relative}; \
             the Hilbert class field is not abelian over Q"
        );
    }
    let mut genus = genus;
    genus.label = format!("H(Q(√{d}))");
    Ok(genus)
}

/// Diagnostics for `sigma_a` restricted to `H` with `K ⊆ H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientOrders {
    pub order_of_restriction: u64,
    pub quotient_order: u64,
    pub quotient_is_cyclic: bool,
}

impl QuotientOrders {
    /// `sigma_a|_H` generates `Gal(H/K)`.
    pub fn generates(&self) -> bool {
        self.order_of_restriction == self.quotient_order
    }
}

/// Whether the quotient `X(H)/X(K)` (dual to `Gal(H/K)`) is cyclic.
pub fn quotient_is_cyclic(h: &AbelianFieldSpec, k: &AbelianFieldSpec) -> Result<bool> {
    if !h.contains_field(k) {
        bail!(Argument, "{} is not a subfield of {}", k.label, h.label);
    }
    let quotient_order = h.degree() / k.degree();
    let basis = &h.basis;
    // coset enumeration: order of chi in the quotient is the least k with chi^k in X(K)
    let max_order = h
        .characters
        .iter()
        .map(|chi| {
            let mut power = chi.clone();
            let mut n = 1;
            while !k.contains_character(&power) {
                power = basis.mul(&power, chi);
                n += 1;
            }
            n
        })
        .max()
        .unwrap_or(1);
    Ok(max_order == quotient_order)
}

pub fn quotient_cyclic_generator_orders(
    h: &AbelianFieldSpec,
    k: &AbelianFieldSpec,
    a: u64,
) -> Result<QuotientOrders> {
    let quotient_is_cyclic = quotient_is_cyclic(h, k)?;
    let basis = &h.basis;
    let Some(dlog) = basis.dlog(a) else {
        bail!(Precondition, "{a} is not a unit modulo {}", basis.modulus());
    };
    if !k
        .weight_table()
        .iter()
        .all(|w| basis.eval_exponents(w, &dlog) == 0)
    {
        bail!(
            Precondition,
            "sigma_{a} does not fix {}, so its restriction is not in Gal(H/K)",
            k.label
        );
    }
    Ok(QuotientOrders {
        order_of_restriction: restriction_order(h, &h.weight_table(), &dlog),
        quotient_order: (h.degree() / k.degree()) as u64,
        quotient_is_cyclic,
    })
}

/// Order of `sigma_a|_H`: the lcm of the orders of `chi(a)` over `X(H)`.
pub(crate) fn restriction_order(h: &AbelianFieldSpec, weights: &[Vec<u64>], dlog: &[u64]) -> u64 {
    let n = h.basis.exponent();
    weights.iter().fold(1, |acc, w| {
        let k = h.basis.eval_exponents(w, dlog);
        lcm(acc, n / gcd(n, k))
    })
}

/// Cubic field cut out by the character of order 3 mod the prime `q = 1 (mod 3)`
/// sending the smallest primitive root to `exp(2 pi i / 3)`.
pub fn cubic_residue_character(q: u64, basis: &Arc<UnitGroupBasis>) -> Result<DirichletCharacter> {
    if !is_prime(q) || q % 3 != 1 {
        bail!(Argument, "{q} is not a prime congruent to 1 mod 3");
    }
    let local = UnitGroupBasis::with_limit(q, DEFAULT_TABLE_LIMIT)?;
    let chi = local.character_from_generator_values(|_| RootOfUnity::new(1, 3))?;
    local.lift_character(&chi, basis)
}

/// Validate a user-supplied cubic character: order 3, even, given conductor.
pub fn cubic_field(
    chi: &DirichletCharacter,
    expected_conductor: u64,
    basis: &Arc<UnitGroupBasis>,
    label: impl Into<String>,
) -> Result<AbelianFieldSpec> {
    if chi.exponents.len() != basis.rank() {
        bail!(Argument, "character has wrong length for the basis");
    }
    let order = basis.order(chi);
    if order != 3 {
        bail!(
            Argument,
            "cubic field character has order {order}, expected 3"
        );
    }
    let conductor = basis.conductor(chi);
    if conductor != expected_conductor {
        bail!(
            Argument,
            "cubic character has conductor {conductor}, expected {expected_conductor}"
        );
    }
    let field = AbelianFieldSpec::generated_by(basis.clone(), std::slice::from_ref(chi), label);
    if !field.is_real() {
        bail!(Argument, "cubic character is odd");
    }
    Ok(field)
}

/// Summary of how the prime-power parts of `f` contribute, keyed by prime.
pub fn component_summary(basis: &UnitGroupBasis) -> BTreeMap<u64, Vec<u64>> {
    let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for c in basis.components() {
        out.entry(c.prime).or_default().push(c.order);
    }
    out
}
