//! The conjectural leading constant
//!
//! ```text
//! c = alpha * beta * omega_inf * prod_p (1 - 1/p)^7 (1 + 7/p + 1/p^2),
//! alpha = 1/(6! * 2*3*4*3*4*5*6) = 1/6220800,  beta = 1,
//! ```
//!
//! and comparison of exact counts against `c B (log B)^6`.

use crate::arith::{mobius_sieve, primes_up_to, zeta_minus_one};
use crate::arith::density::main_term_sum;
use crate::region::{omega_inf_3d, omega_inf_g3};
use crate::surface::CountReport;
use crate::torsor::HEIGHT_EXPONENTS;
use crate::Rational;
use serde::{Serialize, Serializer};

/// `beta` of the split surface.
pub const BETA: u32 = 1;

/// Highest power in the series correction of the Euler-product tail.
const TAIL_TERMS: usize = 12;

/// `1 / (6! * prod lambda_i)`.
pub fn alpha_const() -> Rational {
    let prod: i128 = HEIGHT_EXPONENTS.iter().map(|&l| l as i128).product();
    Rational::new(1, 720 * prod)
}

/// `1 + 7/p + 1/p^2`.
pub fn omega_p(p: u64) -> Rational {
    let p = p as i128;
    Rational::new(p * p + 7 * p + 1, p * p)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `log((1 - 1/p)^7 (1 + 7/p + 1/p^2))`.
fn log_factor(p: f64) -> f64 {
    let x = 1.0 / p;
    7.0 * (-x).ln_1p() + (x * (7.0 + x)).ln_1p()
}

/// Coefficients `c_k` of `log((1 - x)^7 (1 + 7x + x^2)) = sum_k c_k x^k`.
fn log_series(n: usize) -> Vec<f64> {
    // power sums s_k of the roots of y^2 + 7y + 1
    let mut s = vec![2.0, -7.0];
    while s.len() <= n {
        let k = s.len();
        s.push(-7.0 * s[k - 1] - s[k - 2]);
    }
    (0..=n)
        .map(|k| if k == 0 { 0.0 } else { -(7.0 + s[k]) / k as f64 })
        .collect()
}

/// `P(k) = sum_p p^{-k} = sum_n mu(n)/n log zeta(nk)`, `k >= 2`.
pub fn prime_zeta(k: u32) -> f64 {
    assert!(k >= 2, "prime zeta needs k >= 2");
    let n_max = (64 / k as usize).max(2) + 2;
    let mu = mobius_sieve(n_max);
    let mut acc = CompensatedSum::default();
    for n in 1..=n_max {
        if mu[n] == 0 {
            continue;
        }
        let z = zeta_minus_one((n as u32 * k) as f64).expect("argument > 1");
        acc.add(mu[n] as f64 / n as f64 * z.ln_1p());
    }
    acc.value()
}

/// Truncated Euler product with a series correction for `p > P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerProduct {
    pub prime_limit: u64,
    /// Product over `p <= P`.
    pub partial: f64,
    /// `partial` times the corrected tail `prod_{p > P}`.
    pub value: f64,
    /// Bound on `|value - full product|`.
    pub tail_bound: f64,
    /// Bound on `|partial - full product|`.
    pub partial_tail_bound: f64,
}

/// `prod_p (1 - 1/p)^7 (1 + 7/p + 1/p^2)` over `p <= P` and its corrected value.
///
/// For `p > P` the logarithm of each factor is expanded as `sum_k c_k p^{-k}`.
/// A term `k <= 12` is summed through prime zeta values when its tail exceeds
/// the cancellation error of `P(k) - sum_{p <= P} p^{-k}`; otherwise, and for
/// `k > 12`, it is bounded by `|c_k| P^{1-k} / (k - 1)`.
pub fn euler_product(prime_limit: u64) -> EulerProduct {
    assert!(prime_limit >= 100, "prime limit must be at least 100");
    let primes = primes_up_to(prime_limit);
    let mut log_partial = CompensatedSum::default();
    for &p in &primes {
        log_partial.add(log_factor(p as f64));
    }
    let pf = prime_limit as f64;
    let c = log_series(TAIL_TERMS + 40);
    let mut log_tail = CompensatedSum::default();
    let mut truncation = 0.0;
    let mut rounding = 64.0 * f64::EPSILON * (log_partial.value().abs() + 1.0);
    for k in 2..=TAIL_TERMS {
        // sum_{p > P} p^{-k} lies in [0, bound]; the prime-zeta difference
        // carries an absolute error of about `noise`
        let bound = pf.powi(1 - k as i32) / (k as f64 - 1.0);
        let pz = prime_zeta(k as u32);
        let noise = 16.0 * f64::EPSILON * pz;
        if bound <= noise {
            truncation += c[k].abs() * bound;
            continue;
        }
        let mut head = CompensatedSum::default();
        for &p in primes.iter().rev() {
            head.add((p as f64).powi(-(k as i32)));
        }
        log_tail.add(c[k] * (pz - head.value()));
        rounding += c[k].abs() * noise;
    }
    truncation += (TAIL_TERMS + 1..c.len())
        .map(|k| c[k].abs() * pf.powi(1 - k as i32) / (k as f64 - 1.0))
        .sum::<f64>();
    let lp = log_partial.value();
    let lt = log_tail.value();
    let partial = lp.exp();
    let value = (lp + lt).exp();
    let tail_bound = value * ((truncation + rounding).exp_m1());
    EulerProduct {
        prime_limit,
        partial,
        value,
        tail_bound,
        partial_tail_bound: (partial - value).abs() + tail_bound,
    }
}

fn rational_string<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Every ingredient of the leading constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    #[serde(serialize_with = "rational_string")]
    pub alpha: Rational,
    pub beta: u32,
    /// `12 * integral_0^1 g3(v^3) dv`.
    pub omega_inf: f64,
    /// The same density as a weighted area.
    pub omega_inf_3d: f64,
    /// `omega_inf / omega_inf_3d`.
    pub omega_agreement: f64,
    pub euler_product: f64,
    pub euler_partial: f64,
    pub euler_tail_bound: f64,
    pub leading_coeff: f64,
    pub prime_limit: u64,
    pub quad_tolerance: f64,
}

/// Assembles the constant from both density computations and the Euler
/// product up to `prime_limit`.
pub fn leading_coefficient(prime_limit: u64, quad_tolerance: f64) -> ConstantReport {
    assert!(quad_tolerance > 0.0 && quad_tolerance < 1.0, "tolerance must lie in (0, 1)");
    let omega = omega_inf_g3(quad_tolerance);
    let omega_3d = omega_inf_3d(quad_tolerance);
    let e = euler_product(prime_limit);
    let alpha = alpha_const();
    let alpha_f = *alpha.numer() as f64 / *alpha.denom() as f64;
    ConstantReport {
        alpha,
        beta: BETA,
        omega_inf: omega,
        omega_inf_3d: omega_3d,
        omega_agreement: omega / omega_3d,
        euler_product: e.value,
        euler_partial: e.partial,
        euler_tail_bound: e.tail_bound,
        leading_coeff: alpha_f * BETA as f64 * omega * e.value,
        prime_limit,
        quad_tolerance,
    }
}

/// One row of [`fit_report`]. Not an asymptotic test: the five lower-order
/// coefficients of the degree-6 polynomial are unknown.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitRow {
    pub b: u64,
    pub n: u64,
    pub e_count: u64,
    /// `c B (log B)^6`.
    pub predicted: f64,
    /// `n / predicted`.
    pub ratio: f64,
    /// `main_term_sum(B) / 2`, when requested.
    pub main_term_half: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("need at least two counts, got {0}")]
    TooFewPoints(usize),
}

/// `c B (log B)^6`.
pub fn predicted(leading_coeff: f64, b: u64) -> f64 {
    let bf = b as f64;
    leading_coeff * bf * bf.ln().powi(6)
}

/// Rows `N(B)`, `c B (log B)^6` and their ratio, optionally with the
/// comparison `#E(B)` against half the main-term sum.
pub fn fit_report(
    counts: &[CountReport],
    leading_coeff: f64,
    with_main_term: bool,
) -> Result<Vec<FitRow>, FitError> {
    if counts.len() < 2 {
        return Err(FitError::TooFewPoints(counts.len()));
    }
    Ok(counts
        .iter()
        .map(|r| {
            let pred = predicted(leading_coeff, r.b);
            FitRow {
                b: r.b,
                n: r.total,
                e_count: r.e_count,
                predicted: pred,
                ratio: r.total as f64 / pred,
                main_term_half: with_main_term.then(|| main_term_sum(r.b) / 2.0),
            }
        })
        .collect())
}
