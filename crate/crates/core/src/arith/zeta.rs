//! Real Riemann zeta values and the two zeta products attached to the
//! height zeta function.

use super::ArithError;

const EM_TERMS: usize = 20;

/// `B_{2k}` for `k = 1..=10`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `zeta(s) - 1` for real `s > 1`.
///
/// Partial sum up to `N = 20` with an Euler-Maclaurin tail; accurate to a few
/// ulps of `zeta(s)` and keeps full relative precision for large `s`.
pub fn zeta_minus_one(s: f64) -> Result<f64, ArithError> {
    if s.is_nan() || s <= 1.0 || !s.is_finite() {
        return Err(ArithError::Domain { what: "zeta", value: s });
    }
    let n = EM_TERMS as f64;
    let mut head = 0.0;
    for k in (2..EM_TERMS).rev() {
        head += (k as f64).powf(-s);
    }
    let n_s = n.powf(-s);
    let mut tail = n * n_s / (s - 1.0) + 0.5 * n_s;
    // rising factorial s (s+1) ... (s+2k-2) / (2k)! times N^{-s-2k+1}
    let mut coeff = s / n * n_s;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k + 1;
        if k > 1 {
            let j = (2 * k - 3) as f64;
            coeff *= (s + j) * (s + j + 1.0) / (n * n);
            fact *= ((2 * k - 1) * (2 * k)) as f64;
        }
        tail += b / fact * coeff;
    }
    Ok(head + tail)
}

/// `zeta(s)` for real `s > 1`.
pub fn zeta_real(s: f64) -> Result<f64, ArithError> {
    zeta_minus_one(s).map(|z| 1.0 + z)
}

fn zeta_product(s: f64, terms: &[(f64, f64, i32)]) -> Result<f64, ArithError> {
    terms.iter().try_fold(1.0, |acc, &(a, c, e)| {
        Ok(acc * zeta_real(a * s + c)?.powi(e))
    })
}

/// `E1(s + 1) = zeta(2s+1) zeta(3s+1)^2 zeta(4s+1)^2 zeta(5s+1) zeta(6s+1)`.
pub fn e1_shifted(s: f64) -> Result<f64, ArithError> {
    zeta_product(
        s,
        &[(2.0, 1.0, 1), (3.0, 1.0, 2), (4.0, 1.0, 2), (5.0, 1.0, 1), (6.0, 1.0, 1)],
    )
}

/// `E2(s + 1) = zeta(13s+3)^5 zeta(14s+3)^2 /
/// (zeta(7s+2)^4 zeta(8s+2)^4 zeta(9s+2)^2 zeta(10s+2) zeta(19s+4)^2)`.
pub fn e2_shifted(s: f64) -> Result<f64, ArithError> {
    zeta_product(
        s,
        &[
            (13.0, 3.0, 5),
            (14.0, 3.0, 2),
            (7.0, 2.0, -4),
            (8.0, 2.0, -4),
            (9.0, 2.0, -2),
            (10.0, 2.0, -1),
            (19.0, 4.0, -2),
        ],
    )
}
