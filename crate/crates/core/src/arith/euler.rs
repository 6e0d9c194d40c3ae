//! Local Euler factors of the Dirichlet series `sum_n Delta(n) n^{-s}`.
//!
//! The `p`-part of the series at `s + 1/6` is
//!
//! ```text
//! F_p = sum_{e in N^7} theta(p^e) p^{-sum_i e_i (lambda_i s + 1)},
//! lambda = (2, 3, 4, 3, 4, 5, 6),
//! ```
//!
//! which has a closed form as a rational function of `p^s`.

use super::ArithError;
use crate::torsor::HEIGHT_EXPONENTS;

/// `theta(xi)` for `xi = (p^{e_1}, ..., p^{e_6})`, as a function of the
/// exponents only (coordinate order `1, 2, 3, l, 4, 5, 6`).
pub fn theta_prime_power(p: u64, e: &[u32; 7]) -> f64 {
    let [e1, e2, e3, el, e4, e5, e6] = *e;
    let pos = |x: u32| x > 0;
    if e2 + e3 + e4 + e5 > 1 {
        return 0.0;
    }
    if pos(e1) && pos(e2 + el + e4 + e5) {
        return 0.0;
    }
    if pos(el) && pos(e2 + e3) {
        return 0.0;
    }
    let c = 1.0 - 1.0 / p as f64;
    let phi = |x: u32| if x > 0 { c } else { 1.0 };
    let num = phi(e2 + e3 + el + e4 + e5 + e6) * phi(e4 + e5 + e6) * phi(e1 + e3);
    let den = phi(e6.min(e1 + e2 + e3));
    num / den
}

fn check_domain(p: u64, s: f64) -> Result<(), ArithError> {
    if p < 2 {
        return Err(ArithError::Domain { what: "local factor prime", value: p as f64 });
    }
    if s.is_nan() || s <= -1.0 / 6.0 || !s.is_finite() {
        return Err(ArithError::Domain { what: "local factor", value: s });
    }
    Ok(())
}

/// Closed form of the local factor, valid for `s > -1/6`.
pub fn local_factor_closed(p: u64, s: f64) -> Result<f64, ArithError> {
    check_domain(p, s)?;
    let pf = p as f64;
    let pw = |a: f64| pf.powf(a * s + 1.0);
    let (p2, p3, p4, p5, p6) = (pw(2.0), pw(3.0), pw(4.0), pw(5.0), pw(6.0));
    let c = 1.0 - 1.0 / pf;
    let bracket = p2 / (p2 - 1.0)
        + p2 * p6 / (p4 * (p2 - 1.0))
        + p6 / (c * p3)
        + 1.0 / (p3 - 1.0)
        + p3 * p6 / (p4 * (p3 - 1.0))
        + p3 * p6 / (p5 * (p3 - 1.0));
    Ok(1.0 + c * c / (p6 - 1.0) * bracket + c / (p2 - 1.0) + c / (p3 - 1.0))
}

/// Truncated Dirichlet sum over all exponent vectors in `[0, cap]^7`.
///
/// Vectors with two positive exponents among `xi_2, xi_3, xi_4, xi_5`, or one
/// of them above 1, are skipped since `theta` vanishes there.
pub fn local_factor_brute(p: u64, s: f64, cap: u32) -> Result<f64, ArithError> {
    check_domain(p, s)?;
    let pf = p as f64;
    let w: Vec<f64> = HEIGHT_EXPONENTS
        .iter()
        .map(|&l| pf.powf(-(l as f64 * s + 1.0)))
        .collect();
    let pows = |i: usize| -> Vec<f64> {
        let mut v = Vec::with_capacity(cap as usize + 1);
        let mut x = 1.0;
        for _ in 0..=cap {
            v.push(x);
            x *= w[i];
        }
        v
    };
    let table: Vec<Vec<f64>> = (0..7).map(pows).collect();
    let small = cap.min(1);
    let mut total = 0.0;
    for e1 in 0..=cap {
        for e2 in 0..=small {
            for e3 in 0..=small {
                for el in 0..=cap {
                    for e4 in 0..=small {
                        for e5 in 0..=small {
                            if e2 + e3 + e4 + e5 > 1 {
                                continue;
                            }
                            for e6 in 0..=cap {
                                let e = [e1, e2, e3, el, e4, e5, e6];
                                let th = theta_prime_power(p, &e);
                                if th == 0.0 {
                                    continue;
                                }
                                let weight: f64 = e
                                    .iter()
                                    .enumerate()
                                    .map(|(i, &k)| table[i][k as usize])
                                    .product();
                                total += th * weight;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::density::theta;
    use crate::torsor::Xi;

    #[test]
    fn theta_exponent_form_matches_integer_form() {
        for p in [2u64, 3, 5] {
            for code in 0..3u32.pow(7) {
                let mut e = [0u32; 7];
                let mut c = code;
                for slot in e.iter_mut() {
                    *slot = c % 3;
                    c /= 3;
                }
                let xi = Xi::new(e.map(|k| p.pow(k)));
                let exact = theta(&xi);
                let approx = *exact.numer() as f64 / *exact.denom() as f64;
                assert!((theta_prime_power(p, &e) - approx).abs() < 1e-15, "p={p} e={e:?}");
            }
        }
    }

    #[test]
    fn closed_form_values() {
        assert!((local_factor_closed(2, 1.0).unwrap() - 1.160_236_220_472_441).abs() < 1e-12);
        assert!((local_factor_closed(5, 2.0).unwrap() - 1.000_277_231_178_2).abs() < 1e-12);
        assert!((local_factor_closed(1_000_003, 0.5).unwrap() - 1.0).abs() < 1e-6);
        assert!(local_factor_closed(2, -0.2).is_err());
    }

    #[test]
    fn closed_form_matches_truncated_sum() {
        for p in [2u64, 3, 5, 7, 11] {
            for s in [0.5, 1.0, 2.0] {
                let c = local_factor_closed(p, s).unwrap();
                let b = local_factor_brute(p, s, 20).unwrap();
                assert!((c - b).abs() < 1e-8, "p={p} s={s}: {c} vs {b}");
            }
        }
    }
}
