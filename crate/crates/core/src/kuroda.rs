//! Class numbers of real biquadratic fields `Q(sqrt d1, sqrt d2)` from the
//! three quadratic subfields and the unit index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::ntheory::{gcd, is_prime, is_squarefree};
use crate::quadfield::{class_number_quadratic, fundamental_unit, FundamentalUnit};

type Q = BigRational;

/// Class data of a real biquadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiquadClassData {
    /// `d1, d2, d3` with `d3 = d1 d2 / gcd(d1, d2)^2`.
    pub radicands: [u64; 3],
    pub subfield_class_numbers: [u64; 3],
    pub units: [FundamentalUnit; 3],
    pub unit_index: u8,
    pub class_number: u64,
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// `s + t sqrt(a)` in a real quadratic field.
#[derive(Debug, Clone, PartialEq)]
struct Quad {
    s: Q,
    t: Q,
}

impl Quad {
    fn rational(s: Q) -> Self {
        Quad { s, t: Q::zero() }
    }

    fn zero() -> Self {
        Quad::rational(Q::zero())
    }

    fn is_zero(&self) -> bool {
        self.s.is_zero() && self.t.is_zero()
    }

    fn add(&self, o: &Quad) -> Quad {
        Quad {
            s: &self.s + &o.s,
            t: &self.t + &o.t,
        }
    }

    fn scale(&self, c: &Q) -> Quad {
        Quad {
            s: &self.s * c,
            t: &self.t * c,
        }
    }

    fn mul(&self, o: &Quad, a: &Q) -> Quad {
        Quad {
            s: &self.s * &o.s + a * &self.t * &o.t,
            t: &self.s * &o.t + &self.t * &o.s,
        }
    }

    /// A square root inside `Q(sqrt a)`, if there is one.
    fn sqrt(&self, a: &Q) -> Option<Quad> {
        if self.t.is_zero() {
            if let Some(r) = rational_sqrt(&self.s) {
                return Some(Quad::rational(r));
            }
            // s = (r sqrt a)^2 with r = sqrt(s a) / a
            return rational_sqrt(&(&self.s * a)).map(|r| Quad {
                s: Q::zero(),
                t: r / a,
            });
        }
        let n = rational_sqrt(&(&self.s * &self.s - a * &self.t * &self.t))?;
        let two = Q::from_integer(BigInt::from(2));
        for g in [n.clone(), -n] {
            if let Some(u) = rational_sqrt(&((&self.s + &g) / &two)) {
                if !u.is_zero() {
                    let v = &self.t / (&two * &u);
                    return Some(Quad { s: u, t: v });
                }
            }
        }
        None
    }
}

/// `alpha + beta sqrt(b)` with `alpha, beta` in `Q(sqrt a)`.
#[derive(Debug, Clone, PartialEq)]
struct Biquad {
    alpha: Quad,
    beta: Quad,
}

struct Tower {
    a: Q,
    b: Q,
}

impl Tower {
    fn mul(&self, x: &Biquad, y: &Biquad) -> Biquad {
        let bb = Quad::rational(self.b.clone());
        Biquad {
            alpha: x
                .alpha
                .mul(&y.alpha, &self.a)
                .add(&x.beta.mul(&y.beta, &self.a).mul(&bb, &self.a)),
            beta: x
                .alpha
                .mul(&y.beta, &self.a)
                .add(&x.beta.mul(&y.alpha, &self.a)),
        }
    }

    /// Square test by descent: `alpha + beta sqrt b` is a square iff its
    /// relative norm is a square `gamma^2` in `Q(sqrt a)` and one of
    /// `(alpha +- gamma) / 2` is a square there as well.
    fn is_square(&self, z: &Biquad) -> bool {
        if z.beta.is_zero() {
            return z.alpha.sqrt(&self.a).is_some()
                || z.alpha.scale(&self.b).sqrt(&self.a).is_some();
        }
        let norm = z
            .alpha
            .mul(&z.alpha, &self.a)
            .add(&z.beta.mul(&z.beta, &self.a).scale(&-self.b.clone()));
        let Some(gamma) = norm.sqrt(&self.a) else {
            return false;
        };
        let half = Q::new(BigInt::one(), BigInt::from(2));
        [gamma.clone(), gamma.scale(&-Q::one())]
            .iter()
            .any(|g| z.alpha.add(g).scale(&half).sqrt(&self.a).is_some())
    }
}

fn unit_value(u: &FundamentalUnit) -> (Q, Q) {
    let den = BigInt::from(u.denominator());
    (
        Q::new(BigInt::from(u.x), den.clone()),
        Q::new(BigInt::from(u.y), den),
    )
}

fn third_radicand(d1: u64, d2: u64) -> u64 {
    let g = gcd(d1, d2);
    (d1 / g) * (d2 / g)
}

/// Index `[E_K : <-1, e1, e2, e3>]`, counted as the number of products
/// `e1^a e2^b e3^c` (`a, b, c` in `{0, 1}`) that are squares in `K`.
pub fn unit_index(d1: u64, d2: u64, d3: u64, units: &[FundamentalUnit; 3]) -> Result<u8> {
    if third_radicand(d1, d2) != d3 {
        bail!(
            Argument,
            "{d3} is not the third radicand of Q(sqrt {d1}, sqrt {d2})"
        );
    }
    for (u, d) in units.iter().zip([d1, d2, d3]) {
        if u.d != d {
            bail!(
                Argument,
                "unit for Q(sqrt {}) given in place of Q(sqrt {d})",
                u.d
            );
        }
    }
    let g = gcd(d1, d2);
    let tower = Tower {
        a: Q::from_integer(BigInt::from(d1)),
        b: Q::from_integer(BigInt::from(d2)),
    };
    let (x1, y1) = unit_value(&units[0]);
    let (x2, y2) = unit_value(&units[1]);
    let (x3, y3) = unit_value(&units[2]);
    // sqrt d3 = sqrt d1 sqrt d2 / g
    let g = Q::from_integer(BigInt::from(g));
    let eps = [
        Biquad {
            alpha: Quad { s: x1, t: y1 },
            beta: Quad::zero(),
        },
        Biquad {
            alpha: Quad::rational(x2),
            beta: Quad::rational(y2),
        },
        Biquad {
            alpha: Quad::rational(x3),
            beta: Quad {
                s: Q::zero(),
                t: y3 / g,
            },
        },
    ];
    let one = Biquad {
        alpha: Quad::rational(Q::one()),
        beta: Quad::zero(),
    };
    let mut squares = 0u8;
    for mask in 0..8u8 {
        let mut z = one.clone();
        for (i, e) in eps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                z = tower.mul(&z, e);
            }
        }
        if tower.is_square(&z) {
            squares += 1;
        }
    }
    if !matches!(squares, 1 | 2 | 4) {
        bail!(
            Domain,
            "unit index {squares} of Q(sqrt {d1}, sqrt {d2}) is not 1, 2 or 4"
        );
    }
    Ok(squares)
}

/// Class number of `Q(sqrt d1, sqrt d2)` for distinct squarefree `d1, d2 > 1`.
pub fn class_number_real_biquadratic(d1: u64, d2: u64) -> Result<BiquadClassData> {
    for d in [d1, d2] {
        if d < 2 || !is_squarefree(d) {
            bail!(Argument, "radicand {d} is not a squarefree integer > 1");
        }
    }
    if d1 == d2 {
        bail!(Argument, "Q(sqrt {d1}, sqrt {d2}) is not biquadratic");
    }
    let d3 = third_radicand(d1, d2);
    let radicands = [d1, d2, d3];
    let units = [
        fundamental_unit(d1)?,
        fundamental_unit(d2)?,
        fundamental_unit(d3)?,
    ];
    let hs = [
        class_number_quadratic(d1)?.h,
        class_number_quadratic(d2)?.h,
        class_number_quadratic(d3)?.h,
    ];
    let q = unit_index(d1, d2, d3, &units)?;
    let product = q as u64 * hs[0] * hs[1] * hs[2];
    let (h, rem) = product.div_rem(&4);
    if rem != 0 || h == 0 {
        bail!(
            Domain,
            "Kuroda quotient {product}/4 for Q(sqrt {d1}, sqrt {d2}) is not a positive integer"
        );
    }
    Ok(BiquadClassData {
        radicands,
        subfield_class_numbers: hs,
        units,
        unit_index: q,
        class_number: h,
    })
}

/// Class number of `Q(sqrt q, sqrt rs)` for distinct odd primes.
pub fn class_number_biquadratic(q: u64, r: u64, s: u64) -> Result<BiquadClassData> {
    for p in [q, r, s] {
        if p == 2 || !is_prime(p) {
            bail!(Argument, "{p} is not an odd prime");
        }
    }
    if q == r || q == s || r == s {
        bail!(Argument, "primes ({q}, {r}, {s}) are not distinct");
    }
    let rs = r
        .checked_mul(s)
        .ok_or_else(|| crate::Error::Overflow(format!("{r} * {s} does not fit in 64 bits")))?;
    class_number_real_biquadratic(q, rs)
}
