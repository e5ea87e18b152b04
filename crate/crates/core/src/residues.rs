//! Residues `a mod f` whose Frobenius splits `K` completely but acts
//! nontrivially on a larger field `H`, subject to the Heath-Brown condition
//! `gcd((a - 1)/2, f) = 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfield::{
    compositum, intersect, quotient_is_cyclic, restriction_order, AbelianFieldSpec, QuotientOrders,
};
use crate::error::{bail, Result};
use crate::ntheory::gcd;

/// `a` is odd and `gcd((a - 1)/2, f) = 1`.
pub fn heath_brown_coprime(a: u64, f: u64) -> bool {
    a % 2 == 1 && gcd((a - 1) / 2, f) == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFlags {
    pub splits_in_k: bool,
    /// Not applicable (`None`) in multi-field mode.
    pub nonsplit_in_h: Option<bool>,
    pub heath_brown_coprime: bool,
    /// Only meaningful in multi-field mode; `true` in single mode.
    pub generates_quotient: bool,
}

impl ResidueFlags {
    pub fn admissible(&self) -> bool {
        self.splits_in_k
            && self.nonsplit_in_h != Some(false)
            && self.heath_brown_coprime
            && self.generates_quotient
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleResidue {
    pub a: u64,
    pub flags: ResidueFlags,
    pub per_field_orders: Vec<QuotientOrders>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub f: u64,
    pub residues: Vec<AdmissibleResidue>,
}

impl ResidueReport {
    pub fn smallest(&self) -> Option<u64> {
        self.residues.first().map(|r| r.a)
    }
}

fn check_modulus(field: &AbelianFieldSpec, f: u64) -> Result<()> {
    let m = field.basis().modulus();
    if m != f {
        bail!(Argument, "field {} lives modulo {m}, not {f}", field.label);
    }
    if f % 16 != 0 {
        bail!(Argument, "modulus {f} is not divisible by 16");
    }
    Ok(())
}

/// Every `a < f` with `sigma_a` trivial on `K`, nontrivial on `H`, and
/// satisfying [`heath_brown_coprime`]. Ascending.
pub fn admissible_residues_single(
    k: &AbelianFieldSpec,
    h: &AbelianFieldSpec,
    f: u64,
) -> Result<Vec<AdmissibleResidue>> {
    check_modulus(k, f)?;
    check_modulus(h, f)?;
    if !h.contains_field(k) {
        bail!(Argument, "{} is not a subfield of {}", k.label, h.label);
    }
    let quotient_order = (h.degree() / k.degree()) as u64;
    let cyclic = quotient_is_cyclic(h, k)?;
    let basis = h.basis().clone();
    let kw = k.weight_table();
    let hw = h.weight_table();
    let rank = basis.rank();
    Ok((1..f)
        .into_par_iter()
        .filter(|&a| heath_brown_coprime(a, f))
        .map_init(
            || vec![0u64; rank],
            |dlog, a| {
                if !basis.dlog_into(a, dlog) {
                    return None;
                }
                if !kw.iter().all(|w| basis.eval_exponents(w, dlog) == 0) {
                    return None;
                }
                let order = restriction_order(h, &hw, dlog);
                (order > 1).then(|| AdmissibleResidue {
                    a,
                    flags: ResidueFlags {
                        splits_in_k: true,
                        nonsplit_in_h: Some(true),
                        heath_brown_coprime: true,
                        generates_quotient: true,
                    },
                    per_field_orders: vec![QuotientOrders {
                        order_of_restriction: order,
                        quotient_order,
                        quotient_is_cyclic: cyclic,
                    }],
                })
            },
        )
        .flatten()
        .collect())
}

fn compositum_all(fields: &[&AbelianFieldSpec]) -> Result<AbelianFieldSpec> {
    let mut acc = fields[0].clone();
    for f in &fields[1..] {
        acc = compositum(&acc, f)?;
    }
    Ok(acc)
}

fn check_pairs(fields: &[(AbelianFieldSpec, AbelianFieldSpec)], f: Option<u64>) -> Result<()> {
    if fields.is_empty() {
        bail!(Argument, "no fields given");
    }
    for (k, h) in fields {
        if let Some(f) = f {
            check_modulus(k, f)?;
            check_modulus(h, f)?;
        } else if k.basis() != fields[0].0.basis() || h.basis() != fields[0].0.basis() {
            bail!(Argument, "fields do not share a common modulus");
        }
        if !h.contains_field(k) {
            bail!(Argument, "{} is not a subfield of {}", k.label, h.label);
        }
    }
    Ok(())
}

/// Residues splitting the compositum of the `K_i` completely whose Frobenius
/// generates every `Gal(H_i/K_i)`, subject to [`heath_brown_coprime`].
///
/// With one field this agrees with [`admissible_residues_single`] whenever
/// `[H : K]` is prime.
pub fn admissible_residues_multi(
    fields: &[(AbelianFieldSpec, AbelianFieldSpec)],
    f: u64,
) -> Result<Vec<AdmissibleResidue>> {
    check_pairs(fields, Some(f))?;
    let ks: Vec<&AbelianFieldSpec> = fields.iter().map(|(k, _)| k).collect();
    let k = compositum_all(&ks)?;
    let basis = k.basis().clone();
    let kw = k.weight_table();
    let per_field: Vec<(Vec<Vec<u64>>, u64, bool)> = fields
        .iter()
        .map(|(ki, hi)| {
            Ok((
                hi.weight_table(),
                (hi.degree() / ki.degree()) as u64,
                quotient_is_cyclic(hi, ki)?,
            ))
        })
        .collect::<Result<_>>()?;
    let rank = basis.rank();
    Ok((1..f)
        .into_par_iter()
        .filter(|&a| heath_brown_coprime(a, f))
        .map_init(
            || vec![0u64; rank],
            |dlog, a| {
                if !basis.dlog_into(a, dlog) {
                    return None;
                }
                if !kw.iter().all(|w| basis.eval_exponents(w, dlog) == 0) {
                    return None;
                }
                let mut orders = Vec::with_capacity(fields.len());
                for ((_, hi), (hw, quotient_order, cyclic)) in fields.iter().zip(&per_field) {
                    let o = QuotientOrders {
                        order_of_restriction: restriction_order(hi, hw, dlog),
                        quotient_order: *quotient_order,
                        quotient_is_cyclic: *cyclic,
                    };
                    if !o.generates() {
                        return None;
                    }
                    orders.push(o);
                }
                Some(AdmissibleResidue {
                    a,
                    flags: ResidueFlags {
                        splits_in_k: true,
                        nonsplit_in_h: None,
                        heath_brown_coprime: true,
                        generates_quotient: true,
                    },
                    per_field_orders: orders,
                })
            },
        )
        .flatten()
        .collect())
}

/// A pair `(i, j)` violating `H_i ∩ K_j = K_i ∩ K_j = H_j ∩ K_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionFailure {
    pub i: usize,
    pub j: usize,
    /// Degrees of `H_i ∩ K_j`, `K_i ∩ K_j`, `H_j ∩ K_i`.
    pub degrees: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub holds: bool,
    pub failing_pairs: Vec<IntersectionFailure>,
}

pub fn check_intersection_hypothesis(
    fields: &[(AbelianFieldSpec, AbelianFieldSpec)],
) -> Result<IntersectionReport> {
    check_pairs(fields, None)?;
    let mut failing_pairs = Vec::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let (ki, hi) = &fields[i];
            let (kj, hj) = &fields[j];
            let a = intersect(hi, kj)?;
            let b = intersect(ki, kj)?;
            let c = intersect(hj, ki)?;
            if a != b || b != c {
                failing_pairs.push(IntersectionFailure {
                    i,
                    j,
                    degrees: [a.degree(), b.degree(), c.degree()],
                });
            }
        }
    }
    Ok(IntersectionReport {
        holds: failing_pairs.is_empty(),
        failing_pairs,
    })
}

/// Whether `Gal(H/K)` is cyclic.
#[allow(non_snake_case)]
pub fn check_cyclic_gal_H_over_K(h: &AbelianFieldSpec, k: &AbelianFieldSpec) -> Result<bool> {
    quotient_is_cyclic(h, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfield::{build_basis, field_for_biquadratic, multiquadratic_field};

    #[test]
    fn heath_brown_examples() {
        assert!(!heath_brown_coprime(1, 1680));
        assert!(heath_brown_coprime(3, 16 * 105));
        assert!(!heath_brown_coprime(2, 16));
        assert!(!heath_brown_coprime(5, 16));
    }

    #[test]
    fn single_field_example() {
        let f = 1680;
        let basis = build_basis(f).unwrap();
        let k = field_for_biquadratic(3, 35, &basis).unwrap();
        let h = multiquadratic_field(&[3, 5, 7], &basis).unwrap();
        let res = admissible_residues_single(&k, &h, f).unwrap();
        assert_eq!(res.len(), 16);
        for r in &res {
            assert_eq!(r.a % 4, 3);
            assert!(k.fixed_by(r.a) && !h.fixed_by(r.a));
            assert!(r.flags.admissible());
        }
        assert!(admissible_residues_single(&k, &k, f).unwrap().is_empty());
        assert!(admissible_residues_single(&h, &k, f).is_err());
    }

    #[test]
    fn sqrt3_outside_k_blocks_every_residue() {
        // a = 3 (mod 4) and a = 2 (mod 3) force sigma_a to fix sqrt 3
        let f = 1680;
        let basis = build_basis(f).unwrap();
        let k = field_for_biquadratic(5, 21, &basis).unwrap();
        let h = multiquadratic_field(&[5, 3, 7], &basis).unwrap();
        assert!(admissible_residues_single(&k, &h, f).unwrap().is_empty());
    }

    #[test]
    fn multi_with_class_number_one_fields() {
        let f = 16 * 5 * 13;
        let basis = build_basis(f).unwrap();
        let fields: Vec<_> = [2, 5, 13]
            .iter()
            .map(|&d| {
                let k = multiquadratic_field(&[d], &basis).unwrap();
                (k.clone(), k)
            })
            .collect();
        let res = admissible_residues_multi(&fields, f).unwrap();
        assert!(!res.is_empty());
        let k = multiquadratic_field(&[2, 5, 13], &basis).unwrap();
        let expected: Vec<u64> = (1..f)
            .filter(|&a| heath_brown_coprime(a, f) && k.fixed_by(a))
            .collect();
        assert_eq!(res.iter().map(|r| r.a).collect::<Vec<_>>(), expected);
        let report = check_intersection_hypothesis(&fields).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn incompatible_requirements() {
        let f = 16 * 15;
        let basis = build_basis(f).unwrap();
        let k = multiquadratic_field(&[3], &basis).unwrap();
        let h = multiquadratic_field(&[3, 5], &basis).unwrap();
        // K_2 = H_1 forces sigma_a to fix H_1 while generating Gal(H_1/K_1)
        let fields = vec![(k.clone(), h.clone()), (h.clone(), h.clone())];
        assert!(admissible_residues_multi(&fields, f).unwrap().is_empty());
        let report = check_intersection_hypothesis(&fields).unwrap();
        assert!(!report.holds);
        assert_eq!(report.failing_pairs[0].degrees, [4, 2, 2]);
    }

    #[test]
    fn cyclicity() {
        let basis = build_basis(240).unwrap();
        let q = AbelianFieldSpec::rationals(basis.clone());
        let v4 = multiquadratic_field(&[3, 5], &basis).unwrap();
        assert!(!check_cyclic_gal_H_over_K(&v4, &q).unwrap());
        assert!(check_cyclic_gal_H_over_K(&v4, &v4).unwrap());
        let k = multiquadratic_field(&[3], &basis).unwrap();
        assert!(check_cyclic_gal_H_over_K(&v4, &k).unwrap());
        assert!(check_cyclic_gal_H_over_K(&k, &v4).is_err());
    }
}
