//! Full-rank integer lattices in Hermite normal form, built row by row.

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, Signed};

/// Entry type of a lattice: machine integers for ideals, big integers for
/// relation lattices whose entries grow before the rank is full.
pub trait Entry:
    Clone + PartialEq + std::fmt::Debug + Integer + Signed + CheckedMul + CheckedAdd + From<i64>
{
}

impl<T> Entry for T where
    T: Clone + PartialEq + std::fmt::Debug + Integer + Signed + CheckedMul + CheckedAdd + From<i64>
{
}

/// Sublattice of `Z^n` spanned by the inserted vectors.
///
/// Rows are kept upper triangular with positive pivots. Once the lattice
/// has full rank with index `D`, every `D e_i` lies in it, so all entries
/// are reduced modulo `D` from then on.
#[derive(Debug, Clone)]
pub struct Lattice<T = i128> {
    n: usize,
    rows: Vec<Option<Vec<T>>>,
    modulus: Option<T>,
}

fn ext_gcd<T: Entry>(a: T, b: T) -> (T, T, T) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = r0 - q.clone() * r1.clone();
        let s2 = s0 - q.clone() * s1.clone();
        let t2 = t0 - q * t1.clone();
        (r0, r1) = (r1, r2);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn combine<T: Entry>(x: &T, u: &[T], y: &T, v: &[T]) -> Vec<T> {
    u.iter()
        .zip(v)
        .map(|(a, b)| {
            x.checked_mul(a)
                .and_then(|p| y.checked_mul(b).and_then(|q| p.checked_add(&q)))
                .expect("lattice entry overflow")
        })
        .collect()
}

impl<T: Entry> Lattice<T> {
    pub fn new(n: usize) -> Self {
        Lattice {
            n,
            rows: vec![None; n],
            modulus: None,
        }
    }

    /// The lattice `m Z^n`, to which further vectors can be added.
    pub fn with_multiple(n: usize, m: T) -> Self {
        let mut l = Lattice::new(n);
        for i in 0..n {
            let mut v = vec![T::zero(); n];
            v[i] = m.clone();
            l.insert(&v);
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    /// Index in `Z^n`, if the rank is full.
    pub fn index(&self) -> Option<T> {
        let mut d = T::one();
        for (j, r) in self.rows.iter().enumerate() {
            d = d.checked_mul(&r.as_ref()?[j])?;
        }
        Some(d)
    }

    fn reduce(&self, v: &mut [T], from: usize) {
        if let Some(m) = &self.modulus {
            for x in &mut v[from..] {
                *x = x.mod_floor(m);
            }
        }
    }

    pub fn insert(&mut self, v: &[T]) {
        assert_eq!(v.len(), self.n);
        let mut v = v.to_vec();
        self.reduce(&mut v, 0);
        for j in 0..self.n {
            if v[j].is_zero() {
                continue;
            }
            match self.rows[j].take() {
                None => {
                    if v[j].is_negative() {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    self.reduce(&mut v, j + 1);
                    self.rows[j] = Some(v);
                    self.modulus = self.index().or(self.modulus.take());
                    return;
                }
                Some(r) => {
                    let (g, s, t) = ext_gcd(r[j].clone(), v[j].clone());
                    let a = r[j].clone() / g.clone();
                    let b = v[j].clone() / g;
                    let mut new_row = combine(&s, &r, &t, &v);
                    let mut rest = combine(&a, &v, &-b, &r);
                    debug_assert!(rest[j].is_zero());
                    self.reduce(&mut new_row, j + 1);
                    self.reduce(&mut rest, 0);
                    self.rows[j] = Some(new_row);
                    v = rest;
                }
            }
        }
        self.modulus = self.index().or(self.modulus.take());
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v, 0);
        for j in 0..self.n {
            if v[j].is_zero() {
                continue;
            }
            let Some(r) = &self.rows[j] else {
                return false;
            };
            if !v[j].is_multiple_of(&r[j]) {
                return false;
            }
            let q = v[j].clone() / r[j].clone();
            v = combine(&T::one(), &v, &-q, r);
            self.reduce(&mut v, j + 1);
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Coefficients of `v` in the row basis, if `v` lies in the lattice.
    /// Only meaningful for lattices built with [`from_triangular`].
    pub fn solve(&self, v: &[T]) -> Option<Vec<T>> {
        let mut v = v.to_vec();
        let mut coeffs = vec![T::zero(); self.n];
        for j in 0..self.n {
            if v[j].is_zero() {
                continue;
            }
            let r = self.rows[j].as_ref()?;
            if !v[j].is_multiple_of(&r[j]) {
                return None;
            }
            let q = v[j].clone() / r[j].clone();
            v = combine(&T::one(), &v, &-q.clone(), r);
            coeffs[j] = q;
        }
        v.iter().all(|x| x.is_zero()).then_some(coeffs)
    }

    /// Canonical basis: rows reduced so that entries above each pivot lie in
    /// `[0, pivot)`. Requires full rank.
    pub fn basis(&self) -> Vec<Vec<T>> {
        let mut rows: Vec<Vec<T>> = self
            .rows
            .iter()
            .map(|r| r.clone().expect("lattice is not of full rank"))
            .collect();
        for i in (0..self.n).rev() {
            for k in i + 1..self.n {
                let q = rows[i][k].div_floor(&rows[k][k]);
                if !q.is_zero() {
                    let rk = rows[k].clone();
                    rows[i] = combine(&T::one(), &rows[i], &-q, &rk);
                }
            }
        }
        rows
    }
}

/// A lattice whose rows are exactly the given triangular basis, with no
/// modular reduction, so that [`Lattice::solve`] returns true coordinates.
pub fn from_triangular<T: Entry>(rows: Vec<Vec<T>>) -> Lattice<T> {
    let n = rows.len();
    Lattice {
        n,
        rows: rows.into_iter().map(Some).collect(),
        modulus: None,
    }
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}
