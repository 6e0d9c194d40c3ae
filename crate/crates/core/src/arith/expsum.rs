//! Cubic exponential sums
//!
//! ```text
//! S_q(a, b) = sum_{x mod q, gcd(x, q) = 1} e_q(a x^3 + b x^2)
//! T_q(a, b) = sum_{x mod q}                e_q(a x^3 + b x^2)
//! ```
//!
//! evaluated in double precision from a table of `q`-th roots of unity.

use super::{factorize, reduce_mod};
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::TAU;

/// Precomputed roots of unity, cubes and squares modulo `q`.
#[derive(Clone, Debug)]
pub struct ExpSumTable {
    q: u64,
    roots: Vec<Complex64>,
    cubes: Vec<u64>,
    squares: Vec<u64>,
    units: Vec<bool>,
}

impl ExpSumTable {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        let roots = (0..q)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / q as f64))
            .collect();
        let cubes = (0..q)
            .map(|x| ((x as u128).pow(3) % q as u128) as u64)
            .collect();
        let squares = (0..q)
            .map(|x| ((x as u128).pow(2) % q as u128) as u64)
            .collect();
        let units = (0..q).map(|x| x.gcd(&q) == 1).collect();
        ExpSumTable {
            q,
            roots,
            cubes,
            squares,
            units,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `e_q(n)` for any integer `n`.
    pub fn e(&self, n: i128) -> Complex64 {
        self.roots[reduce_mod(n, self.q) as usize]
    }

    fn sum(&self, a: i64, b: i64, restricted: bool) -> Complex64 {
        let q = self.q as u128;
        let a = reduce_mod(a as i128, self.q) as u128;
        let b = reduce_mod(b as i128, self.q) as u128;
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..self.q as usize {
            if restricted && !self.units[x] {
                continue;
            }
            let k = (a * self.cubes[x] as u128 + b * self.squares[x] as u128) % q;
            acc += self.roots[k as usize];
        }
        acc
    }

    pub fn s(&self, a: i64, b: i64) -> Complex64 {
        self.sum(a, b, true)
    }

    pub fn t(&self, a: i64, b: i64) -> Complex64 {
        self.sum(a, b, false)
    }

    /// `max |S_q(a, 0)|` over units `a`.
    ///
    /// `S_q(a u^3, 0) = S_q(a, 0)` for every unit `u`, so one representative
    /// per coset of the unit cubes suffices.
    pub fn max_abs_s_pure_cubic(&self) -> f64 {
        let q = self.q as usize;
        let unit_cubes: Vec<u64> = (0..q)
            .filter(|&x| self.units[x])
            .map(|x| self.cubes[x])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut seen = vec![false; q];
        let mut best: f64 = 0.0;
        for a in 0..q {
            if !self.units[a] || seen[a] {
                continue;
            }
            for &c in &unit_cubes {
                seen[(a as u128 * c as u128 % q as u128) as usize] = true;
            }
            best = best.max(self.s(a as i64, 0).norm());
        }
        best
    }
}

/// `S_q(a, b)` by direct summation.
pub fn s_q(a: i64, b: i64, q: u64) -> Complex64 {
    ExpSumTable::new(q).s(a, b)
}

/// `T_q(a, b)` by direct summation.
pub fn t_q(a: i64, b: i64, q: u64) -> Complex64 {
    ExpSumTable::new(q).t(a, b)
}

/// `2 p^{l/2} gcd(b, p^l)` for a prime power `q = p^l`.
pub fn lv_bound(q: u64, b: i64) -> f64 {
    2.0 * (q as f64).sqrt() * (b.unsigned_abs().gcd(&q)) as f64
}

/// Largest defect `|S_{uv} - S_u(v^2 a, v b) S_v(u^2 a, u b)|` (and the same
/// for `T`) over the supplied `(a, b)` pairs.
pub fn multiplicativity_defect(u: u64, v: u64, pairs: &[(i64, i64)]) -> f64 {
    assert_eq!(u.gcd(&v), 1, "moduli must be coprime");
    let (tu, tv, tuv) = (ExpSumTable::new(u), ExpSumTable::new(v), ExpSumTable::new(u * v));
    let (u_, v_) = (u as i64, v as i64);
    let mut worst: f64 = 0.0;
    for &(a, b) in pairs {
        let s = tuv.s(a, b) - tu.s(v_ * v_ * a, v_ * b) * tv.s(u_ * u_ * a, u_ * b);
        let t = tuv.t(a, b) - tu.t(v_ * v_ * a, v_ * b) * tv.t(u_ * u_ * a, u_ * b);
        worst = worst.max(s.norm()).max(t.norm());
    }
    worst
}

/// Largest ratio `|T_{p^l}(a, b)| / (2 p^{l/2} gcd(b, p^l))` over all residue
/// pairs with `gcd(a, b, p) = 1`, or `None` when `q` is not a prime power.
pub fn lv_worst_ratio(q: u64) -> Option<f64> {
    let f = factorize(q);
    if f.factors().len() != 1 {
        return None;
    }
    let p = f.factors()[0].0;
    let table = ExpSumTable::new(q);
    let mut worst: f64 = 0.0;
    for a in 0..q as i64 {
        for b in 0..q as i64 {
            if (a as u64).is_multiple_of(p) && (b as u64).is_multiple_of(p) {
                continue;
            }
            worst = worst.max(table.t(a, b).norm() / lv_bound(q, b));
        }
    }
    Some(worst)
}
