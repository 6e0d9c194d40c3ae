//! The real height region.
//!
//! For `0 < v <= 1` the section of the region at `(u, v)` is
//! `{t in [0, 1/v] : |t^2 + u^3| <= 1}`, nonempty exactly for
//! `g1(v) <= u <= 1`, where
//!
//! ```text
//! g1(v)    = -(min{1/v^4, 1 + 1/v^2})^{1/3}
//! g21(u)   = sqrt(max{0, -1 - u^3})
//! g22(u,v) = min{1/v, sqrt(1 - u^3)}
//! g2(u,v)  = g22 - g21          (its length)
//! g3(v)    = integral of g2(u, v) over g1(v) <= u <= 1.
//! ```
//!
//! The archimedean density is computed twice: as a weighted area in the
//! `(t, u)` plane ([`omega_inf_3d`]) and as `12 * integral_0^1 g3(v^3) dv`
//! ([`omega_inf_g3`]).

use crate::quad::{integrate_pieces, QuadConfig, QuadResult};
use crate::torsor::Xi;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum RegionError {
    #[error("{what} is undefined at {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("xi^(2,3,4,3,4,5,6) exceeds the height bound")]
    OutOfRegion,
}

fn check_v(what: &'static str, v: f64) -> Result<(), RegionError> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(RegionError::Domain { what, value: v })
    }
}

fn g1_raw(v: f64) -> f64 {
    let v2 = v * v;
    -(1.0 / (v2 * v2)).min(1.0 + 1.0 / v2).cbrt()
}

/// Lower end of the `u`-support, for `0 < v <= 1`.
pub fn g1(v: f64) -> Result<f64, RegionError> {
    check_v("g1", v)?;
    Ok(g1_raw(v))
}

pub fn g21(u: f64, _v: f64) -> f64 {
    (-1.0 - u * u * u).max(0.0).sqrt()
}

pub fn g22(u: f64, v: f64) -> f64 {
    (1.0 / v).min((1.0 - u * u * u).max(0.0).sqrt())
}

/// Length of the `t`-section; zero off `g1(v) <= u <= 1`, `0 <= v <= 1`.
pub fn g2(u: f64, v: f64) -> f64 {
    if !(0.0..=1.0).contains(&v) || u > 1.0 {
        return 0.0;
    }
    if v > 0.0 {
        let lo = g1_raw(v);
        if u < lo {
            return 0.0;
        }
        if u == lo {
            // edges from the defining minimum, not from the rounded cube of u
            let inv_v2 = 1.0 / (v * v);
            let lower = if inv_v2 * inv_v2 <= 1.0 + inv_v2 {
                (inv_v2 * inv_v2 - 1.0).max(0.0).sqrt()
            } else {
                1.0 / v
            };
            return (g22(u, v) - lower).max(0.0);
        }
    }
    let lower = g21(u, v);
    let upper = (1.0 - u * u * u).max(0.0).sqrt();
    if lower > 0.0 && upper * v <= 1.0 {
        // both edges on the curves t^2 = -1 - u^3, 1 - u^3
        return 2.0 / (upper + lower);
    }
    (g22(u, v) - lower).max(0.0)
}

/// `u` where `sqrt(1 - u^3) = 1/v`; at or below `-1` once `v <= 2^{-1/2}`.
fn u_cap(v: f64) -> f64 {
    -(1.0 / (v * v) - 1.0).cbrt()
}

/// Measure of the `t`-section, with its two edges located by bisection on
/// the monotone function `t -> t^2 + u^3`.
pub fn g2_numeric(u: f64, v: f64) -> f64 {
    let top = 1.0 / v;
    let h = |t: f64| t * t + u * u * u;
    // smallest t with h(t) >= level, within [0, top]
    let first_at_least = |level: f64| -> Option<f64> {
        if h(0.0) >= level {
            return Some(0.0);
        }
        if h(top) < level {
            return None;
        }
        let (mut lo, mut hi) = (0.0, top);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h(mid) >= level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    };
    let Some(t_lo) = first_at_least(-1.0) else {
        return 0.0;
    };
    let t_hi = match first_at_least(f64::from_bits(1.0f64.to_bits() + 1)) {
        Some(t) => t,
        None => top,
    };
    (t_hi - t_lo).max(0.0)
}

/// Points where `g2(., v)` is not smooth, with geometrically spaced
/// splitting points along the long negative tail.
fn u_breaks(v: f64) -> Vec<f64> {
    let lo = g1_raw(v);
    let mut b = vec![-1.0, 0.0, lo];
    let uc = u_cap(v);
    if uc.is_finite() {
        b.push(uc);
    }
    let mut x = -2.0;
    while x > lo {
        b.push(x);
        x *= 2.0;
    }
    b
}

/// `g3(v)` with an explicit quadrature configuration.
pub fn g3_with(v: f64, cfg: QuadConfig) -> Result<QuadResult, RegionError> {
    check_v("g3", v)?;
    let lo = g1_raw(v);
    Ok(integrate_pieces(|u| g2(u, v), lo, 1.0, &u_breaks(v), cfg))
}

/// `g3(v)` to absolute tolerance `1e-8`.
pub fn g3(v: f64) -> Result<f64, RegionError> {
    g3_with(v, QuadConfig::abs(1e-8)).map(|r| r.value)
}

/// `d/du g2(u, v)` by a five-point stencil kept clear of the breakpoints.
pub fn d1_g2_numeric(u: f64, v: f64) -> f64 {
    let dist = u_breaks(v)
        .into_iter()
        .chain([1.0])
        .map(|b| (u - b).abs())
        .fold(f64::INFINITY, f64::min);
    let h = (1e-4f64).min(dist / 8.0);
    if h == 0.0 {
        return 0.0;
    }
    let f = |x: f64| g2(x, v);
    (f(u - 2.0 * h) - 8.0 * f(u - h) + 8.0 * f(u + h) - f(u + 2.0 * h)) / (12.0 * h)
}

/// `integral of D1 g2(u, v) du` over the support.
pub fn integral_d1_g2(v: f64, tol: f64) -> Result<f64, RegionError> {
    check_v("integral_d1_g2", v)?;
    let r = integrate_pieces(|u| d1_g2_numeric(u, v), g1_raw(v), 1.0, &u_breaks(v), QuadConfig::abs(tol));
    Ok(r.value)
}

/// `integral of |D1 g2(u, v)| du` over the support.
pub fn integral_abs_d1_g2(v: f64, tol: f64) -> Result<f64, RegionError> {
    check_v("integral_abs_d1_g2", v)?;
    let r = integrate_pieces(
        |u| d1_g2_numeric(u, v).abs(),
        g1_raw(v),
        1.0,
        &u_breaks(v),
        QuadConfig::abs(tol),
    );
    Ok(r.value)
}

const TAIL_EXPONENT: i32 = 40;

/// `12 * vol{(t, u, v) : |t^2 + u^3| <= 1, 0 <= t v^3 <= 1, 0 <= v <= 1, |u v^4| <= 1}`.
///
/// The `v`-extent over a point `(t, u)` is `min{1, t^{-1/3}, |u|^{-1/4}}`; the
/// remaining area integral runs `u` over `[-2^40, 1]` and, for `u < -1`, the
/// section in the variable `s = t^2 + u^3 in [-1, 1]`.
pub fn omega_inf_3d(tol: f64) -> f64 {
    let inner = QuadConfig::abs(tol * 1e-3);
    let section = |u: f64| -> f64 {
        let u3 = u * u * u;
        let cap_u = if u == 0.0 { 1.0 } else { u.abs().powf(-0.25).min(1.0) };
        let weight = |t: f64| cap_u.min(if t > 0.0 { t.cbrt().recip() } else { 1.0 });
        // kinks where t^{-1/3} crosses 1 and |u|^{-1/4}
        let t_kinks = [1.0, cap_u.powi(-3)];
        if u >= -1.0 {
            let t_hi = (1.0 - u3).max(0.0).sqrt();
            return integrate_pieces(weight, 0.0, t_hi, &t_kinks, inner).value;
        }
        // t = sqrt(s - u^3) for s = t^2 + u^3 in [-1, 1]; no cancellation
        // between the two edges when |u| is large
        let integrand = |s: f64| {
            let t = (s - u3).sqrt();
            weight(t) / (2.0 * t)
        };
        let s_kinks = t_kinks.map(|t| t * t + u3);
        integrate_pieces(integrand, -1.0, 1.0, &s_kinks, inner).value
    };
    // t_lo meets the kinks t = 1 and t = |u|^{3/4}
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let mut breaks = vec![-1.0, 0.0, -(2f64.cbrt()), -golden.powf(2.0 / 3.0)];
    let mut x = -2.0;
    for _ in 1..TAIL_EXPONENT {
        breaks.push(x);
        x *= 2.0;
    }
    let lo = -(2.0f64).powi(TAIL_EXPONENT);
    12.0 * integrate_pieces(section, lo, 1.0, &breaks, QuadConfig::abs(tol / 12.0)).value
}

/// Golden-ratio threshold `v^2 = (sqrt 5 - 1)/2` where `g1` changes branch.
fn g1_switch() -> f64 {
    ((5f64.sqrt() - 1.0) / 2.0).sqrt()
}

/// `12 * integral_0^1 g3(v^3) dv`, nested adaptive quadrature.
pub fn omega_inf_g3(tol: f64) -> f64 {
    let inner = QuadConfig::abs(tol * 1e-2);
    let f = |v: f64| g3_with(v * v * v, inner).map(|r| r.value).unwrap_or(0.0);
    let breaks = [g1_switch().cbrt(), (0.5f64).sqrt().cbrt()];
    let r = integrate_pieces(f, 0.0, 1.0, &breaks, QuadConfig::abs(tol / 12.0));
    12.0 * r.value
}

/// Loop-bounding parameters for a fixed `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionParams {
    pub b: u64,
    /// `sqrt(xi^(2,3,4,3,4,5,6) / B)`.
    pub alpha: f64,
    /// `(B q0 / (xi_1^2 xi_3))^{1/3}`.
    pub x1: f64,
    /// `(B q0 / xi_2)^{1/2}`.
    pub x2: f64,
}

/// `(alpha, X1, X2)` for `xi` and `B`.
///
/// These floats only bound loops; acceptance of points is always decided by
/// exact integer arithmetic.
pub fn region_params(xi: &Xi, b: u64) -> Result<RegionParams, RegionError> {
    let m = xi.height_monomial();
    if m > b as u128 {
        return Err(RegionError::OutOfRegion);
    }
    let bf = b as f64;
    let q0 = xi.q0() as f64;
    let (x1, x2, x3) = (xi.xi1() as f64, xi.xi2() as f64, xi.xi3() as f64);
    Ok(RegionParams {
        b,
        alpha: (m as f64 / bf).sqrt(),
        x1: (bf * q0 / (x1 * x1 * x3)).cbrt(),
        x2: (bf * q0 / x2).sqrt(),
    })
}
