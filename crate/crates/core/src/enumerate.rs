//! Counting `E(B)` in torsor coordinates.
//!
//! `xi` runs over `F` with `xi^(2,3,4,3,4,5,6) <= B`. For each `xi`, `tau_1`
//! runs over `[X1 g1(alpha), X1]` and `tau_2` over
//! `(X2 g21(tau_1/X1), X2 g22(tau_1/X1, alpha)]`, both widened by a few units
//! of slack. A candidate is accepted only after exact integer checks: `q0`
//! divides `tau_2^2 xi_2 + tau_1^3 xi_1^2 xi_3`, the quotient `tau_l` is
//! nonzero, all coprimality conditions hold, and every coordinate of the
//! image is at most `B`.
//!
//! `tau_2` is either scanned directly or stepped through the residue classes
//! mod `q0` solving `xi_2 tau_2^2 = -tau_1^3 xi_1^2 xi_3`.

use crate::arith::{factorize, inv_mod, is_prime, mul_mod, pow_mod, reduce_mod};
use crate::par::map_reduce;
use crate::region::{g1, g21, g22, region_params};
use crate::surface::{family_counts, CountReport, Method};
use crate::torsor::{coprime_to_product, ExponentVector, Scheme, TorsorPoint, Xi, HEIGHT_EXPONENTS};
use crate::{Execution, MAX_BOUND};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error("{c} is not a unit modulo {p}")]
    NonUnitInput { c: i128, p: u64 },
    #[error("gcd(tau1 xi1 xi2 xi3, q0) != 1")]
    PreconditionViolated,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

fn tonelli_shanks(c: u64, p: u64) -> Option<u64> {
    if p == 2 {
        return Some(c % 2);
    }
    if pow_mod(c, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut cc = pow_mod(z, q, p);
    let mut t = pow_mod(c, q, p);
    let mut r = pow_mod(c, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(cc, 1 << (m - i - 1), p);
        m = i;
        cc = mul_mod(b, b, p);
        t = mul_mod(t, cc, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// All `x mod p^k` with `x^2 = c`, sorted.
pub fn sqrt_mod_prime_power(c: i128, p: u64, k: u32) -> Result<Vec<u64>, EnumError> {
    if !is_prime(p) {
        return Err(EnumError::NotPrime(p));
    }
    assert!(k >= 1, "exponent must be positive");
    if c.rem_euclid(p as i128) == 0 {
        return Err(EnumError::NonUnitInput { c, p });
    }
    let m = p.checked_pow(k).expect("prime power overflows u64");
    let cm = reduce_mod(c, m);
    let mut roots = if p == 2 {
        if k <= 3 {
            (1..m).step_by(2).filter(|&x| x * x % m == cm).collect()
        } else if cm % 8 != 1 {
            Vec::new()
        } else {
            let mut x: u64 = 1;
            for j in 3..k {
                let mj = 1u64 << (j + 1);
                if mul_mod(x, x, mj) != cm % mj {
                    x += 1 << (j - 1);
                }
            }
            let half = m / 2;
            vec![x, m - x, (x + half) % m, (m - x + half) % m]
        }
    } else {
        match tonelli_shanks(cm % p, p) {
            None => Vec::new(),
            Some(mut r) => {
                let mut pj = p;
                for _ in 1..k {
                    let next = pj * p;
                    // Newton step r -= (r^2 - c) / (2r) mod p^{j+1}
                    let f = (mul_mod(r, r, next) + next - cm % next) % next;
                    let inv = inv_mod(2 * r % next, next).expect("2r is a unit");
                    r = (r + next - mul_mod(f, inv, next)) % next;
                    pj = next;
                }
                vec![r, m - r]
            }
        }
    };
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

/// All `tau_2 mod q0` with `xi_2 tau_2^2 = -tau_1^3 xi_1^2 xi_3 (mod q0)`, sorted.
pub fn solve_tau2_congruence(xi: &Xi, tau1: i64, q0: u64) -> Result<Vec<u64>, EnumError> {
    assert!(q0 >= 1, "modulus must be positive");
    if !coprime_to_product(q0, &[tau1.unsigned_abs(), xi.xi1(), xi.xi2(), xi.xi3()]) {
        return Err(EnumError::PreconditionViolated);
    }
    if q0 == 1 {
        return Ok(vec![0]);
    }
    let mut sols: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for &(p, k) in factorize(q0).factors() {
        let pk = p.pow(k);
        let t = reduce_mod(tau1 as i128, pk);
        let rhs = mul_mod(
            mul_mod(pow_mod(t, 3, pk), pow_mod(xi.xi1() % pk, 2, pk), pk),
            xi.xi3() % pk,
            pk,
        );
        let inv2 = inv_mod(xi.xi2() % pk, pk).expect("xi2 is a unit");
        let c = mul_mod((pk - rhs) % pk, inv2, pk);
        let roots = sqrt_mod_prime_power(c as i128, p, k)?;
        if roots.is_empty() {
            return Ok(Vec::new());
        }
        // combine x = a mod modulus with y = r mod pk
        let inv_m = inv_mod(modulus % pk, pk).expect("coprime moduli");
        let next = modulus * pk;
        let mut combined = Vec::with_capacity(sols.len() * roots.len());
        for &a in &sols {
            for &r in &roots {
                let diff = (r + pk - a % pk) % pk;
                let h = mul_mod(diff, inv_m, pk);
                combined.push((a as u128 + modulus as u128 * h as u128) as u64 % next);
            }
        }
        sols = combined;
        modulus = next;
    }
    sols.sort_unstable();
    Ok(sols)
}

/// How `tau_2` candidates are generated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Scan every `tau_2` in the interval.
    Direct,
    /// Step through the solutions of the congruence mod `q0`.
    Residue,
    /// Residue stepping when `q0 > 16` and the interval is longer than `4 q0`.
    #[default]
    Auto,
}

impl Strategy {
    pub fn method(self) -> Method {
        match self {
            Strategy::Direct => Method::TorsorDirect,
            Strategy::Residue => Method::TorsorResidue,
            Strategy::Auto => Method::TorsorAuto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumConfig {
    pub strategy: Strategy,
    /// Integer widening of every floating-point loop bound.
    pub slack: i64,
    pub execution: Execution,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            strategy: Strategy::Auto,
            slack: 1,
            execution: Execution::Parallel,
        }
    }
}

impl EnumConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        EnumConfig {
            strategy,
            ..Self::default()
        }
    }
}

fn ipow(x: u64, e: u32) -> Option<u64> {
    x.checked_pow(e)
}

/// Every `xi` in `F` with `xi^(2,3,4,3,4,5,6) <= B`, looping
/// `xi_6, xi_5, xi_4, xi_3, xi_l, xi_2, xi_1` from the outside in.
pub fn region_xis(b: u64) -> Vec<Xi> {
    let mut out = Vec::new();
    // loop order is coordinate indices 6, 5, 4, 2, 3, 1, 0
    const ORDER: [usize; 7] = [6, 5, 4, 2, 3, 1, 0];
    fn rec(rest: u64, depth: usize, coords: &mut [u64; 7], out: &mut Vec<Xi>) {
        if depth == 7 {
            let xi = Xi::new(*coords);
            if xi.in_f() {
                out.push(xi);
            }
            return;
        }
        let idx = ORDER[depth];
        let e = HEIGHT_EXPONENTS[idx];
        let mut x = 1u64;
        while let Some(pw) = ipow(x, e).filter(|&pw| pw <= rest) {
            coords[idx] = x;
            rec(rest / pw, depth + 1, coords, out);
            x += 1;
        }
        coords[idx] = 1;
    }
    let mut coords = [1u64; 7];
    rec(b, 0, &mut coords, &mut out);
    out
}

/// Per-`xi` data of the inner loops.
struct XiCtx {
    xi: Xi,
    q0: u64,
    /// `xi_1^2 xi_3`.
    c1: i128,
    /// `x0 = m0 tau_2`.
    m0: u64,
    alpha: f64,
    x1: f64,
    x2: f64,
    tau1_lo: i64,
    tau1_hi: i64,
}

impl XiCtx {
    fn new(xi: Xi, b: u64, slack: i64) -> Self {
        let p = region_params(&xi, b).expect("xi inside the region");
        let m0 = ExponentVector::X0.eval(&xi).expect("x0 monomial <= B") as u64;
        let m3 = ExponentVector::X3.eval(&xi).expect("x3 monomial <= B") as u64;
        let t_max = (b / m3) as i64;
        let lo = (p.x1 * g1(p.alpha).expect("alpha in (0, 1]")).ceil() as i64 - slack;
        let hi = p.x1.floor() as i64 + slack;
        XiCtx {
            xi,
            q0: xi.q0() as u64,
            c1: (xi.xi1() as i128).pow(2) * xi.xi3() as i128,
            m0,
            alpha: p.alpha,
            x1: p.x1,
            x2: p.x2,
            tau1_lo: lo.max(-t_max),
            tau1_hi: hi.min(t_max),
        }
    }
}

const TAU1_BLOCK: i64 = 2048;

/// Runs `visit` on every accepted `(tau_1, tau_2, tau_l)` for one `tau_1` block.
fn scan_block<F: FnMut(i64, i64, i64)>(
    ctx: &XiCtx,
    b: u64,
    cfg: &EnumConfig,
    tau1_range: (i64, i64),
    mut visit: F,
) {
    let xi = &ctx.xi;
    let [x1, x2, x3, xl, x4, x5, x6] = xi.as_array();
    let bi = b as i128;
    let q0 = ctx.q0 as i128;
    let tau2_cap = (b / ctx.m0) as i64;
    for tau1 in tau1_range.0..=tau1_range.1 {
        if tau1 == 0 || !coprime_to_product(tau1.unsigned_abs(), &[x2, x3, xl, x4, x5, x6]) {
            continue;
        }
        let u = tau1 as f64 / ctx.x1;
        let lo_f = (ctx.x2 * g21(u, ctx.alpha)).floor();
        let hi_f = (ctx.x2 * g22(u, ctx.alpha)).floor();
        let lo = (lo_f as i64 + 1 - cfg.slack).max(1);
        let hi = (hi_f as i64 + cfg.slack).min(tau2_cap);
        if lo > hi {
            continue;
        }
        let a = (tau1 as i128).pow(3) * ctx.c1;
        let mut accept = |tau2: i64| {
            let num = (tau2 as i128).pow(2) * x2 as i128 + a;
            if num % q0 != 0 {
                return;
            }
            let tau_l = -num / q0;
            if tau_l == 0 || tau_l.abs() > bi {
                return;
            }
            let tau_l = tau_l as i64;
            if coprime_to_product(tau2 as u64, &[x1, x3])
                && coprime_to_product(tau_l.unsigned_abs(), &[x4, x5, x6])
            {
                visit(tau1, tau2, tau_l);
            }
        };
        let len = (hi - lo + 1) as u64;
        let residue = match cfg.strategy {
            Strategy::Direct => false,
            Strategy::Residue => true,
            Strategy::Auto => ctx.q0 > 16 && len > 4 * ctx.q0,
        };
        if residue {
            let roots = solve_tau2_congruence(xi, tau1, ctx.q0).expect("coprimality guaranteed by F");
            let q = ctx.q0 as i64;
            for r in roots {
                let mut t = lo + (r as i64 - lo).rem_euclid(q);
                while t <= hi {
                    accept(t);
                    t += q;
                }
            }
        } else {
            for tau2 in lo..=hi {
                accept(tau2);
            }
        }
    }
}

fn work_units(ctxs: &[XiCtx]) -> Vec<(usize, i64, i64)> {
    let mut units = Vec::new();
    for (i, c) in ctxs.iter().enumerate() {
        let mut lo = c.tau1_lo;
        while lo <= c.tau1_hi {
            let hi = (lo + TAU1_BLOCK - 1).min(c.tau1_hi);
            units.push((i, lo, hi));
            lo = hi + 1;
        }
    }
    units
}

fn contexts(b: u64, cfg: &EnumConfig) -> Vec<XiCtx> {
    assert!(b >= 1, "height bound must be positive");
    assert!(b <= MAX_BOUND, "height bound exceeds {MAX_BOUND}");
    assert!(cfg.slack >= 0, "slack must be non-negative");
    region_xis(b)
        .into_iter()
        .map(|xi| XiCtx::new(xi, b, cfg.slack))
        .collect()
}

/// `#E(B)` with the default configuration and the given strategy.
pub fn count_e_torsor(b: u64, strategy: Strategy) -> u64 {
    count_e_torsor_with(b, &EnumConfig::with_strategy(strategy))
}

pub fn count_e_torsor_with(b: u64, cfg: &EnumConfig) -> u64 {
    let ctxs = contexts(b, cfg);
    let units = work_units(&ctxs);
    map_reduce(&units, cfg.execution, |&(i, lo, hi)| {
        let mut n = 0u64;
        scan_block(&ctxs[i], b, cfg, (lo, hi), |_, _, _| n += 1);
        n
    })
}

/// Every accepted torsor point (scheme `T2`), ordered by `xi` then `tau`.
pub fn torsor_points(b: u64, cfg: &EnumConfig) -> Vec<TorsorPoint> {
    let ctxs = contexts(b, cfg);
    let units = work_units(&ctxs);
    let mut pts: Vec<TorsorPoint> = crate::par::map_collect(&units, cfg.execution, |&(i, lo, hi)| {
        let mut v = Vec::new();
        scan_block(&ctxs[i], b, cfg, (lo, hi), |tau1, tau2, tau_l| {
            v.push(TorsorPoint {
                xi: ctxs[i].xi,
                tau1,
                tau2,
                tau_l,
                scheme: Scheme::T2,
            })
        });
        v
    })
    .into_iter()
    .flatten()
    .collect();
    pts.sort_by_key(|t| (t.xi, t.tau1, t.tau2));
    pts
}

/// `N(B) = 2 #E(B) + family counts`, with `#E(B)` from the torsor.
pub fn count_total(b: u64, strategy: Strategy) -> CountReport {
    count_total_with(b, &EnumConfig::with_strategy(strategy))
}

pub fn count_total_with(b: u64, cfg: &EnumConfig) -> CountReport {
    let start = Instant::now();
    let e = count_e_torsor_with(b, cfg);
    let fam = family_counts(b);
    CountReport {
        b,
        e_count: e,
        conic_count: fam.conic,
        x0zero_count: fam.x0zero,
        x1zero_count: fam.x1zero,
        total: 2 * e + fam.sum(),
        method: cfg.strategy.method(),
        elapsed: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn brute_sqrt(c: i128, m: u64) -> Vec<u64> {
        (0..m).filter(|&x| (x as i128 * x as i128 - c).rem_euclid(m as i128) == 0).collect()
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod_prime_power(2, 7, 1).unwrap(), vec![3, 4]);
        assert_eq!(sqrt_mod_prime_power(1, 2, 3).unwrap(), vec![1, 3, 5, 7]);
        assert!(sqrt_mod_prime_power(3, 5, 1).unwrap().is_empty());
        assert!(matches!(sqrt_mod_prime_power(10, 5, 2), Err(EnumError::NonUnitInput { .. })));
    }

    #[test]
    fn sqrt_against_brute_force() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for k in 1..=5 {
                let m = p.pow(k);
                if m > 5000 {
                    continue;
                }
                for c in (-40i128..200).filter(|c| c.rem_euclid(p as i128) != 0) {
                    assert_eq!(sqrt_mod_prime_power(c, p, k).unwrap(), brute_sqrt(c, m), "c={c} p^k={p}^{k}");
                }
            }
        }
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(solve_tau2_congruence(&Xi::ones(), 1, 1).unwrap(), vec![0]);
        assert!(solve_tau2_congruence(&Xi::ones(), 1, 8).unwrap().is_empty());
        let xi = Xi::new([1, 1, 1, 1, 1, 5, 1]);
        assert_eq!(solve_tau2_congruence(&xi, 1, 5).unwrap(), vec![2, 3]);
        assert_eq!(
            solve_tau2_congruence(&Xi::new([2, 1, 1, 1, 1, 1, 1]), 1, 4),
            Err(EnumError::PreconditionViolated)
        );
    }

    #[test]
    fn congruence_against_brute_force() {
        let xi = Xi::new([1, 3, 1, 1, 1, 1, 1]);
        for q0 in [5u64, 8, 9, 20, 40, 49, 77, 100, 125, 243] {
            for tau1 in [-7i64, -1, 1, 2, 11, 13] {
                if tau1.unsigned_abs().gcd(&q0) != 1 || q0 % 3 == 0 {
                    continue;
                }
                let brute: Vec<u64> = (0..q0)
                    .filter(|&t| {
                        let v = 3 * (t as i128).pow(2) + (tau1 as i128).pow(3);
                        v.rem_euclid(q0 as i128) == 0
                    })
                    .collect();
                assert_eq!(solve_tau2_congruence(&xi, tau1, q0).unwrap(), brute);
            }
        }
    }

    #[test]
    fn small_counts() {
        for s in [Strategy::Direct, Strategy::Residue, Strategy::Auto] {
            assert_eq!(count_e_torsor(1, s), 0);
            assert_eq!(count_e_torsor(2, s), 1);
            assert_eq!(count_total(1, s).total, 6);
            assert_eq!(count_total(2, s).total, 8);
        }
    }

    #[test]
    fn region_xis_respect_bound() {
        let xs = region_xis(500);
        assert!(xs.iter().all(|x| x.height_monomial() <= 500 && x.in_f()));
        assert!(xs.contains(&Xi::ones()));
        assert!(xs.contains(&Xi::new([1, 2, 1, 1, 1, 1, 1])));
    }
}
