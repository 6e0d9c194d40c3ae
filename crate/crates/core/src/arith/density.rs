//! The density `theta(xi)` and the main-term function
//!
//! ```text
//! Delta(n) = n^{1/6} sum_{xi^(2,3,4,3,4,5,6) = n} theta(xi) / (xi_1 xi_2 ... xi_6).
//! ```

use super::{factorize, phi_star};
use crate::enumerate::region_xis;
use crate::region::g3;
use crate::torsor::{Xi, HEIGHT_EXPONENTS};
use crate::Rational;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;

/// `theta(xi)`, zero outside the set `F`.
pub fn theta(xi: &Xi) -> Rational {
    if !xi.in_f() {
        return Rational::zero();
    }
    let [x1, x2, x3, xl, x4, x5, x6] = xi.as_array();
    let g = x6.gcd(&((x1 as u128 * x2 as u128 * x3 as u128 % x6 as u128) as u64));
    phi_star_of(&[x2, x3, xl, x4, x5, x6]) * phi_star_of(&[x4, x5, x6]) * phi_star_of(&[x1, x3])
        / phi_star(g)
}

/// `phi_star` of the product of `vals`, without forming the product.
fn phi_star_of(vals: &[u64]) -> Rational {
    let mut primes: Vec<u64> = vals
        .iter()
        .flat_map(|&v| factorize(v).primes().collect::<Vec<_>>())
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes.into_iter().fold(Rational::from_integer(1), |acc, p| {
        acc * Rational::new(p as i128 - 1, p as i128)
    })
}

fn delta_recurse(rest: u64, idx: usize, coords: &mut [u64; 7], acc: &mut Rational) {
    // coordinates are filled from xi_6 down to xi_1
    if idx == usize::MAX {
        if rest == 1 {
            let xi = Xi::new(*coords);
            let th = theta(&xi);
            if !th.is_zero() {
                let prod: i128 = coords.iter().map(|&c| c as i128).product();
                *acc += th / Rational::from_integer(prod);
            }
        }
        return;
    }
    let e = HEIGHT_EXPONENTS[idx];
    let mut x: u64 = 1;
    while let Some(pw) = x.checked_pow(e).filter(|&pw| pw <= rest) {
        if rest.is_multiple_of(pw) {
            coords[idx] = x;
            delta_recurse(rest / pw, idx.wrapping_sub(1), coords, acc);
        }
        x += 1;
    }
    coords[idx] = 1;
}

/// `n^{-1/6} Delta(n)` as an exact rational.
pub fn delta_exact(n: u64) -> Rational {
    assert!(n >= 1, "Delta is defined for n >= 1");
    let mut acc = Rational::zero();
    let mut coords = [1u64; 7];
    delta_recurse(n, 6, &mut coords, &mut acc);
    acc
}

pub fn delta(n: u64) -> f64 {
    let r = delta_exact(n);
    (n as f64).powf(1.0 / 6.0) * (*r.numer() as f64 / *r.denom() as f64)
}

/// `(n, n^{-1/6} Delta(n))` for every `n <= x` with `Delta(n) != 0`.
pub fn delta_table(x: u64) -> BTreeMap<u64, f64> {
    let mut table = BTreeMap::new();
    for xi in region_xis(x) {
        let th = theta(&xi);
        if th.is_zero() {
            continue;
        }
        let prod: f64 = xi.as_array().iter().map(|&c| c as f64).product();
        let w = *th.numer() as f64 / *th.denom() as f64 / prod;
        *table.entry(xi.height_monomial() as u64).or_insert(0.0) += w;
    }
    table
}

/// `M(x) = sum_{n <= x} Delta(n)`.
pub fn delta_partial_sums(x: u64) -> f64 {
    delta_table(x)
        .iter()
        .map(|(&n, &w)| (n as f64).powf(1.0 / 6.0) * w)
        .sum()
}

/// `2 B^{5/6} sum_{n <= B} Delta(n) g3(sqrt(n / B))`.
pub fn main_term_sum(b: u64) -> f64 {
    assert!(b >= 1, "bound must be positive");
    let bf = b as f64;
    let s: f64 = delta_table(b)
        .iter()
        .map(|(&n, &w)| {
            let nf = n as f64;
            nf.powf(1.0 / 6.0) * w * g3((nf / bf).sqrt()).expect("n <= B")
        })
        .sum();
    2.0 * bf.powf(5.0 / 6.0) * s
}
