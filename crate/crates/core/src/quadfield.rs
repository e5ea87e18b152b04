//! Real quadratic fields `Q(sqrt d)`: conductor, fundamental unit, class
//! number and splitting of rational primes.
//!
//! Class numbers come from counting cycles of reduced indefinite binary
//! quadratic forms under the rho operator (this gives the narrow class
//! number), then halving when the fundamental unit has norm `+1`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{bail, Error, Result};
use crate::ntheory::{gcd, is_prime, is_squarefree, isqrt, kronecker, reduce_signed};

fn check_squarefree(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        bail!(Argument, "d = {d} does not define a quadratic field");
    }
    if d == -1 {
        return Ok(());
    }
    if !is_squarefree(d.unsigned_abs()) {
        bail!(Argument, "d = {d} is not squarefree");
    }
    Ok(())
}

/// Discriminant of `Q(sqrt d)`: `d` when `d = 1 (mod 4)`, otherwise `4d`.
pub fn fundamental_discriminant(d: i64) -> Result<i64> {
    check_squarefree(d)?;
    if d.rem_euclid(4) == 1 {
        Ok(d)
    } else {
        d.checked_mul(4)
            .ok_or_else(|| Error::Overflow(format!("discriminant of {d}")))
    }
}

/// Conductor of `Q(sqrt d)`, i.e. `|disc|`.
pub fn conductor_quadratic(d: i64) -> Result<u64> {
    Ok(fundamental_discriminant(d)?.unsigned_abs())
}

/// Fundamental unit `> 1` of the maximal order of `Q(sqrt d)`.
///
/// When `halved` is set the unit is `(x + y sqrt d) / 2` with `x, y` odd and
/// `x^2 - d y^2 = 4 norm`; otherwise it is `x + y sqrt d` with
/// `x^2 - d y^2 = norm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalUnit {
    pub d: u64,
    pub x: u64,
    pub y: u64,
    pub halved: bool,
    pub norm: i8,
}

impl FundamentalUnit {
    /// `x^2 - d y^2` evaluated exactly.
    pub fn pell_value(&self) -> Option<i128> {
        let x2 = (self.x as u128).checked_mul(self.x as u128)?;
        let dy2 = (self.y as u128)
            .checked_mul(self.y as u128)?
            .checked_mul(self.d as u128)?;
        let diff = x2 as i128 - dy2 as i128;
        // both sides are < 2^128 and close to each other, so the cast is exact
        (x2 < (1u128 << 127) && dy2 < (1u128 << 127)).then_some(diff)
    }

    pub fn satisfies_pell(&self) -> bool {
        let scale = if self.halved { 4 } else { 1 };
        self.pell_value() == Some(scale * self.norm as i128)
    }

    /// Denominator of the representation (`2` when halved).
    pub fn denominator(&self) -> u64 {
        if self.halved {
            2
        } else {
            1
        }
    }
}

/// Minimal solution of the unit equation for `Q(sqrt d)` via the periodic
/// continued fraction of a reduced quadratic irrational.
///
/// For `d = 1 (mod 4)` the expansion starts at `(b + sqrt d)/2` with `b` the
/// largest odd integer below `sqrt d`, otherwise at `floor(sqrt d) + sqrt d`.
/// Both are reduced, so the expansion is purely periodic and the unit is
/// `B_{l-1} alpha_0 + B_{l-2}` after one period of length `l`.
pub fn fundamental_unit(d: u64) -> Result<FundamentalUnit> {
    if d < 2 || d > i64::MAX as u64 {
        bail!(Argument, "fundamental_unit needs d > 1, got {d}");
    }
    check_squarefree(d as i64)?;
    let s = isqrt(d);
    let (p0, q0) = if d % 4 == 1 {
        let b = if s % 2 == 1 { s } else { s - 1 };
        (b, 2u64)
    } else {
        (s, 1u64)
    };
    let overflow = || Error::Overflow(format!("fundamental unit of Q(sqrt {d}) exceeds 64 bits"));

    let (mut p, mut q) = (p0 as u128, q0 as u128);
    let (mut b_prev2, mut b_prev1) = (1u128, 0u128);
    let mut period = 0u64;
    let d128 = d as u128;
    loop {
        let a = (p + s as u128) / q;
        let b = a
            .checked_mul(b_prev1)
            .and_then(|v| v.checked_add(b_prev2))
            .ok_or_else(overflow)?;
        if b > u64::MAX as u128 {
            return Err(overflow());
        }
        (b_prev2, b_prev1) = (b_prev1, b);
        period += 1;
        let p_next = a * q - p;
        let q_next = (d128 - p_next * p_next) / q;
        (p, q) = (p_next, q_next);
        if p == p0 as u128 && q == q0 as u128 {
            break;
        }
    }
    let y = b_prev1;
    let x = y
        .checked_mul(p0 as u128)
        .and_then(|v| v.checked_add(q0 as u128 * b_prev2))
        .ok_or_else(overflow)?;
    let (mut x, mut y, mut halved) = (x, y, q0 == 2);
    if halved && x % 2 == 0 && y % 2 == 0 {
        x /= 2;
        y /= 2;
        halved = false;
    }
    if x > u64::MAX as u128 {
        return Err(overflow());
    }
    let unit = FundamentalUnit {
        d,
        x: x as u64,
        y: y as u64,
        halved,
        norm: if period % 2 == 0 { 1 } else { -1 },
    };
    if unit.pell_value().is_none() {
        return Err(overflow());
    }
    debug_assert!(unit.satisfies_pell(), "{unit:?}");
    Ok(unit)
}

/// Indefinite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndefiniteForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl IndefiniteForm {
    pub fn discriminant(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    /// `0 < b < sqrt D` and `sqrt D - b < 2|a| < sqrt D + b`, tested exactly.
    pub fn is_reduced(&self) -> bool {
        let disc = self.discriminant();
        let b = self.b as i128;
        let t = 2 * (self.a as i128).abs();
        b > 0 && b * b < disc && (t + b) * (t + b) > disc && (t <= b || (t - b) * (t - b) < disc)
    }

    /// One step of the reduction cycle: `(a, b, c) -> (c, b', (b'^2 - D)/4c)`
    /// with `b' = -b (mod 2c)` and `sqrt D - 2|c| < b' < sqrt D`.
    pub fn rho(&self) -> IndefiniteForm {
        let disc = self.discriminant();
        let s = isqrt_i128(disc);
        let t = 2 * (self.c as i128).abs();
        let lower = s + 1 - t;
        let b = lower + (-(self.b as i128) - lower).rem_euclid(t);
        let c = (b * b - disc) / (4 * self.c as i128);
        IndefiniteForm {
            a: self.c,
            b: b as i64,
            c: c as i64,
        }
    }
}

fn isqrt_i128(n: i128) -> i128 {
    crate::ntheory::isqrt_u128(n as u128) as i128
}

/// All primitive reduced forms of a positive non-square discriminant.
pub fn reduced_forms(disc: u64) -> Result<Vec<IndefiniteForm>> {
    if disc % 4 == 2 || disc % 4 == 3 {
        bail!(Argument, "{disc} is not a discriminant");
    }
    if crate::ntheory::is_square(disc) {
        bail!(Argument, "discriminant {disc} is a perfect square");
    }
    let s = isqrt(disc) as i64;
    let disc_i = disc as i64;
    let mut forms = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let ac = (b * b - disc_i) / 4; // negative
        let m = -ac;
        let mut a = 1;
        while a <= s {
            if m % a == 0 {
                let c = m / a;
                for (fa, fc) in [(a, -c), (-a, c)] {
                    let f = IndefiniteForm { a: fa, b, c: fc };
                    if gcd(gcd(a as u64, b as u64), c as u64) == 1 && f.is_reduced() {
                        forms.push(f);
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(forms)
}

/// Partition the reduced forms of discriminant `disc` into rho-cycles.
pub fn form_cycles(disc: u64) -> Result<Vec<Vec<IndefiniteForm>>> {
    let forms = reduced_forms(disc)?;
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut g = f;
        while seen.insert(g) {
            cycle.push(g);
            g = g.rho();
        }
        debug_assert_eq!(g, f, "rho orbit must close on its start");
        cycles.push(cycle);
    }
    Ok(cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumbers {
    pub h: u64,
    pub h_narrow: u64,
}

/// Wide and narrow class numbers of `Q(sqrt d)`, `d > 1` squarefree.
pub fn class_number_quadratic(d: u64) -> Result<ClassNumbers> {
    let unit = fundamental_unit(d)?;
    class_numbers_with_unit(&unit)
}

fn class_numbers_with_unit(unit: &FundamentalUnit) -> Result<ClassNumbers> {
    let disc = fundamental_discriminant(unit.d as i64)? as u64;
    let h_narrow = form_cycles(disc)?.len() as u64;
    let h = if unit.norm == -1 {
        h_narrow
    } else {
        h_narrow / 2
    };
    Ok(ClassNumbers { h, h_narrow })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Decomposition type of the prime `p` in `Q(sqrt d)`.
pub fn splitting(p: u64, d: i64) -> Result<Splitting> {
    if !is_prime(p) {
        bail!(Argument, "{p} is not prime");
    }
    let disc = fundamental_discriminant(d)?;
    Ok(if reduce_signed(disc, p) == 0 {
        Splitting::Ramified
    } else if kronecker(disc, p as i64) == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    })
}

/// Everything the certifier needs about one real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadFieldData {
    pub d: u64,
    pub discriminant: i64,
    pub conductor: u64,
    pub class_number: u64,
    pub narrow_class_number: u64,
    pub fundamental_unit: FundamentalUnit,
}

impl QuadFieldData {
    pub fn new(d: u64) -> Result<Self> {
        let unit = fundamental_unit(d)?;
        let ClassNumbers { h, h_narrow } = class_numbers_with_unit(&unit)?;
        let discriminant = fundamental_discriminant(d as i64)?;
        Ok(QuadFieldData {
            d,
            discriminant,
            conductor: discriminant.unsigned_abs(),
            class_number: h,
            narrow_class_number: h_narrow,
            fundamental_unit: unit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductors() {
        assert_eq!(conductor_quadratic(5).unwrap(), 5);
        assert_eq!(conductor_quadratic(2).unwrap(), 8);
        assert_eq!(conductor_quadratic(3).unwrap(), 12);
        assert_eq!(conductor_quadratic(-3).unwrap(), 3);
        assert_eq!(conductor_quadratic(-1).unwrap(), 4);
        assert!(conductor_quadratic(12).is_err());
        assert!(conductor_quadratic(1).is_err());
    }

    #[test]
    fn unit_examples() {
        let u = fundamental_unit(2).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (1, 1, false, -1));
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (1, 1, true, -1));
        let u = fundamental_unit(3).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (2, 1, false, 1));
        // 4 + sqrt 17 lives in Z[sqrt 17] although 17 = 1 mod 4
        let u = fundamental_unit(17).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (4, 1, false, -1));
        let u = fundamental_unit(94).unwrap();
        assert_eq!((u.x, u.y, u.norm), (2143295, 221064, 1));
    }

    #[test]
    fn oversized_unit_is_rejected() {
        // the unit of Q(sqrt 12673) needs far more than 64 bits
        let big = (2..20_000u64)
            .filter(|&d| is_squarefree(d))
            .find(|&d| fundamental_unit(d).is_err())
            .unwrap();
        assert!(matches!(fundamental_unit(big), Err(Error::Overflow(_))));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number_quadratic(5).unwrap().h, 1);
        assert_eq!(class_number_quadratic(10).unwrap().h, 2);
        assert_eq!(class_number_quadratic(2).unwrap().h, 1);
        assert_eq!(class_number_quadratic(79).unwrap().h, 3);
        assert_eq!(class_number_quadratic(229).unwrap().h, 3);
        let c = class_number_quadratic(3).unwrap();
        assert_eq!((c.h, c.h_narrow), (1, 2));
    }

    #[test]
    fn rho_preserves_reduction() {
        for disc in [5u64, 8, 12, 40, 120, 1020] {
            for f in reduced_forms(disc).unwrap() {
                let g = f.rho();
                assert!(g.is_reduced(), "{f:?} -> {g:?}");
                assert_eq!(g.discriminant(), disc as i128);
            }
        }
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting(11, 5).unwrap(), Splitting::Split);
        assert_eq!(splitting(5, 5).unwrap(), Splitting::Ramified);
        assert_eq!(splitting(3, 5).unwrap(), Splitting::Inert);
        assert_eq!(splitting(2, 3).unwrap(), Splitting::Ramified);
        assert_eq!(splitting(2, 17).unwrap(), Splitting::Split);
        assert!(splitting(9, 5).is_err());
    }
}
