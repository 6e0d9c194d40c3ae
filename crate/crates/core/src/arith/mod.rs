//! Number-theoretic kernels.
//!
//! Integer helpers (factorisation, Moebius, sieves, modular arithmetic) live
//! here; the exactly testable arithmetic objects have their own submodules.

pub mod density;
pub mod euler;
pub mod expsum;
pub mod sawtooth;
pub mod zeta;

use crate::Rational;
use num_integer::{Integer, Roots};

pub use density::{delta, delta_partial_sums, main_term_sum, theta};
pub use euler::{local_factor_brute, local_factor_closed};
pub use zeta::zeta_minus_one;
pub use expsum::{s_q, t_q, ExpSumTable};
pub use sawtooth::{count_in_class, psi, r_term};
pub use zeta::{e1_shifted, e2_shifted, zeta_real};

/// Errors raised by the real-valued kernels.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ArithError {
    #[error("{what} is undefined at {value}")]
    Domain { what: &'static str, value: f64 },
}

/// Prime factorisation, sorted by prime, exponents at least one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p`, zero when `p` does not divide.
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    fn push(&mut self, p: u64) {
        match self.factors.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => self.factors[i].1 += 1,
            Err(i) => self.factors.insert(i, (p, 1)),
        }
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Factorises `n >= 1`: trial division up to `10^6`, Pollard rho above.
pub fn factorize(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize(0)");
    let mut f = Factorization::default();
    while n.is_multiple_of(2) {
        f.push(2);
        n /= 2;
    }
    let mut d = 3;
    while d <= TRIAL_LIMIT && d * d <= n {
        while n.is_multiple_of(d) {
            f.push(d);
            n /= d;
        }
        d += 2;
    }
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                f.push(m);
            } else {
                let d = pollard_rho(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    f
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed value into `[0, m)`.
pub fn reduce_mod(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let step = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = step(x);
            y = step(step(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Moebius function.
pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if !f.is_squarefree() {
        0
    } else if f.factors().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `prod_{p | n} (1 - 1/p)`.
pub fn phi_star(n: u64) -> Rational {
    factorize(n)
        .primes()
        .fold(Rational::from_integer(1), |acc, p| {
            acc * Rational::new(p as i128 - 1, p as i128)
        })
}

/// `prod_{p | n} (1 + 1/p)^{-1}`.
pub fn phi_prime(n: u64) -> Rational {
    factorize(n)
        .primes()
        .fold(Rational::from_integer(1), |acc, p| {
            acc * Rational::new(p as i128, p as i128 + 1)
        })
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).is_squarefree()
}

/// Primes up to and including `n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Moebius values `mu(0..=n)` by a linear sieve (`mu(0)` is unused and zero).
pub fn mobius_sieve(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    if n == 0 {
        mu[0] = 0;
        return mu;
    }
    mu[0] = 0;
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            is_comp[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Number of coprime pairs `(a, b)` with `1 <= a, b <= y`.
pub fn q_coprime(y: u64) -> u64 {
    let mu = mobius_sieve(y as usize);
    let s: i128 = (1..=y)
        .map(|d| {
            let m = y / d;
            mu[d as usize] as i128 * (m as i128) * (m as i128)
        })
        .sum();
    s as u64
}

/// Smallest `s >= 1` with `n | s^3`.
pub fn cube_step(n: u64) -> u64 {
    factorize(n)
        .factors()
        .iter()
        .map(|&(p, e)| p.pow(e.div_ceil(3)))
        .product()
}

pub fn floor_sqrt(n: u64) -> u64 {
    n.sqrt()
}

pub fn floor_cbrt_u64(n: u64) -> u64 {
    n.cbrt()
}

/// `floor(x^{1/3})` for any signed `x`.
pub fn floor_cbrt(x: i128) -> i128 {
    let mut r = x.cbrt();
    while r * r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// `ceil(x^{1/3})` for any signed `x`.
pub fn ceil_cbrt(x: i128) -> i128 {
    -floor_cbrt(-x)
}

/// `gcd(a, b)` with `gcd(0, b) = |b|`.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// True when `gcd(a, x) = 1` for every `x` in `others`.
pub fn coprime_to_all(a: u64, others: &[u64]) -> bool {
    others.iter().all(|&x| a.gcd(&x) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_roundtrip() {
        for n in 1..3000u64 {
            let f = factorize(n);
            assert_eq!(f.product(), n as u128);
            assert!(f.primes().all(is_prime));
        }
        let big = 1_000_003u64 * 999_983;
        let f = factorize(big);
        assert_eq!(f.factors(), &[(999_983, 1), (1_000_003, 1)]);
        let f = factorize(1_000_003u64 * 1_000_003 * 4);
        assert_eq!(f.factors(), &[(2, 2), (1_000_003, 2)]);
    }

    #[test]
    fn multiplicative_helpers() {
        assert_eq!(phi_star(1), Rational::from_integer(1));
        assert_eq!(phi_star(12), Rational::new(1, 3));
        assert_eq!(phi_prime(6), Rational::new(1, 2));
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        let mu = mobius_sieve(200);
        for n in 1..=200u64 {
            assert_eq!(mu[n as usize], mobius(n), "n = {n}");
        }
    }

    #[test]
    fn coprime_pairs() {
        assert_eq!(q_coprime(0), 0);
        assert_eq!(q_coprime(1), 1);
        assert_eq!(q_coprime(2), 3);
        assert_eq!(q_coprime(100), 6087);
        for y in 0..40u64 {
            let brute = (1..=y)
                .flat_map(|a| (1..=y).map(move |b| (a, b)))
                .filter(|&(a, b)| a.gcd(&b) == 1)
                .count() as u64;
            assert_eq!(q_coprime(y), brute);
        }
    }

    #[test]
    fn q_coprime_density() {
        for y in [100u64, 1000, 10_000] {
            let ratio = q_coprime(y) as f64 * std::f64::consts::PI.powi(2) / 6.0 / (y * y) as f64;
            assert!((ratio - 1.0).abs() <= 3.0 / y as f64, "y = {y}, ratio = {ratio}");
        }
    }

    #[test]
    fn integer_roots() {
        for x in -3000i128..3000 {
            let f = floor_cbrt(x);
            assert!(f * f * f <= x && (f + 1).pow(3) > x);
            let c = ceil_cbrt(x);
            assert!(c * c * c >= x && (c - 1).pow(3) < x);
        }
        let big = 10i128.pow(30) + 7;
        assert_eq!(floor_cbrt(big), 10i128.pow(10));
        assert_eq!(ceil_cbrt(-big), -(10i128.pow(10)));
    }

    #[test]
    fn cube_steps() {
        assert_eq!(cube_step(1), 1);
        assert_eq!(cube_step(8), 2);
        assert_eq!(cube_step(12), 6);
        assert_eq!(cube_step(16), 4);
        for n in 1..500u64 {
            let s = cube_step(n);
            assert_eq!((s * s * s) % n, 0);
            assert!((1..s).all(|t| (t * t * t) % n != 0));
        }
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(reduce_mod(-3, 7), 4);
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
