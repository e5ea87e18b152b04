//! Fundamental units by scanning `y` upward.

use crate::arith::isqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unit {
    pub x: u128,
    pub y: u128,
    /// the unit is `(x + y sqrt d) / 2`
    pub halved: bool,
    pub norm: i8,
}

fn square_root(n: u128) -> Option<u128> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Smallest unit `> 1` of the maximal order of `Q(sqrt d)`, provided its
/// reported `y` is below `limit`.
///
/// Every unit is `(X + Y sqrt d) / 2` with `X^2 - d Y^2 = +-4`, and the
/// fundamental one has the least `Y > 0`.
pub fn fundamental_unit(d: u64, limit: u64) -> Option<Unit> {
    let d = d as u128;
    let one_mod_four = d % 4 == 1;
    let scan = if one_mod_four { 2 * limit } else { limit } as u128;
    for y in 1..scan {
        let big_y = if one_mod_four { y } else { 2 * y };
        let t = d * big_y * big_y;
        for (norm, n) in [(-1i8, t.checked_sub(4)), (1, Some(t + 4))] {
            let Some(n) = n else { continue };
            if let Some(x) = square_root(n) {
                if x == 0 {
                    continue;
                }
                let unit = if x % 2 == 0 && big_y % 2 == 0 {
                    Unit {
                        x: x / 2,
                        y: big_y / 2,
                        halved: false,
                        norm,
                    }
                } else {
                    Unit {
                        x,
                        y: big_y,
                        halved: true,
                        norm,
                    }
                };
                return (unit.y < limit as u128).then_some(unit);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_units() {
        let u = fundamental_unit(2, 100).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (1, 1, false, -1));
        let u = fundamental_unit(5, 100).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (1, 1, true, -1));
        let u = fundamental_unit(3, 100).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (2, 1, false, 1));
        let u = fundamental_unit(21, 100).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (5, 1, true, 1));
        let u = fundamental_unit(17, 100).unwrap();
        assert_eq!((u.x, u.y, u.halved, u.norm), (4, 1, false, -1));
    }
}
