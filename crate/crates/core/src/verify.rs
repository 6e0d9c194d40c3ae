//! Property checks shared by the test suites and the `verify` command.
//!
//! Each check returns a [`PropertyResult`] carrying up to
//! [`MAX_COUNTEREXAMPLES`] offending inputs. Results do not depend on the
//! execution mode or the thread count.

use crate::enumerate::{count_total_with, torsor_points, EnumConfig, Strategy};
use crate::region::{g1, g2, g2_numeric, integral_d1_g2};
use crate::surface::{count_naive_with, enumerate_e, family_counts};
use crate::torsor::{lift_t1, phi_t1_to_t2, phi_t2_to_t1, psi, validate};
use crate::Execution;
use serde::Serialize;
use std::collections::BTreeSet;

pub const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub counterexamples: Vec<String>,
}

impl PropertyResult {
    fn from_failures(name: &'static str, checked: u64, failures: Vec<String>) -> Self {
        PropertyResult {
            name,
            passed: failures.is_empty(),
            checked,
            counterexamples: failures.into_iter().take(MAX_COUNTEREXAMPLES).collect(),
        }
    }
}

/// `psi(Phi(lift_t1(p))) = p`, the lifted point validates as `T1`, its image as
/// `T2`, and `Phi^{-1}` undoes `Phi`, for every `p` in `E(B)`.
pub fn check_round_trip(b: u64, exec: Execution) -> PropertyResult {
    let pts = enumerate_e(b, exec);
    let failures: Vec<String> = crate::par::map_collect(&pts, exec, |p| {
        let t1 = match lift_t1(p) {
            Ok(t) => t,
            Err(e) => return Some(format!("{p}: lift failed: {e}")),
        };
        let t2 = match phi_t1_to_t2(&t1) {
            Ok(t) => t,
            Err(e) => return Some(format!("{p}: {t1}: Phi failed: {e}")),
        };
        let v = validate(&t2);
        if !v.is_empty() {
            return Some(format!("{p}: {t2}: violates {v:?}"));
        }
        match psi(&t2) {
            Ok(q) if q == *p => {}
            Ok(q) => return Some(format!("{p}: {t2} maps to {q}")),
            Err(e) => return Some(format!("{p}: {t2}: psi failed: {e}")),
        }
        match phi_t2_to_t1(&t2) {
            Ok(back) if back == t1 => None,
            Ok(back) => Some(format!("{p}: Phi^-1 gives {back}, expected {t1}")),
            Err(e) => Some(format!("{p}: {t2}: Phi^-1 failed: {e}")),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    PropertyResult::from_failures("bijection_round_trip", pts.len() as u64, failures)
}

/// Distinct points of `E(B)` lift to distinct `T2` points.
pub fn check_injectivity(b: u64, exec: Execution) -> PropertyResult {
    let pts = enumerate_e(b, exec);
    let mut seen = BTreeSet::new();
    let mut failures = Vec::new();
    for p in &pts {
        if let Ok(t2) = lift_t1(p).and_then(|t| phi_t1_to_t2(&t)) {
            if !seen.insert((t2.xi, t2.tau1, t2.tau2, t2.tau_l)) {
                failures.push(format!("{p}: duplicate lift {t2}"));
            }
        }
    }
    PropertyResult::from_failures("lift_injective", pts.len() as u64, failures)
}

/// The torsor count equals the naive count for every `1 <= B' <= B`, for the
/// direct and the residue strategy.
pub fn check_naive_vs_torsor(b: u64, exec: Execution) -> PropertyResult {
    let bs: Vec<u64> = (1..=b).collect();
    let failures: Vec<String> = crate::par::map_collect(&bs, exec, |&bb| {
        let naive = count_naive_with(bb, Execution::Sequential);
        let mut out = Vec::new();
        for s in [Strategy::Direct, Strategy::Residue] {
            let cfg = EnumConfig {
                strategy: s,
                execution: Execution::Sequential,
                ..EnumConfig::default()
            };
            let t = count_total_with(bb, &cfg);
            if t.total != naive.total || t.e_count != naive.e_count {
                out.push(format!(
                    "B={bb} {s:?}: torsor total {} (E {}), naive total {} (E {})",
                    t.total, t.e_count, naive.total, naive.e_count
                ));
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();
    PropertyResult::from_failures("naive_equals_torsor", b, failures)
}

/// Closed-form family sizes equal the naive per-family tallies, `B' <= B`.
pub fn check_families(b: u64, exec: Execution) -> PropertyResult {
    let bs: Vec<u64> = (1..=b).collect();
    let failures: Vec<String> = crate::par::map_collect(&bs, exec, |&bb| {
        let r = count_naive_with(bb, Execution::Sequential);
        let f = family_counts(bb);
        let got = [r.conic_count, r.x0zero_count, r.x1zero_count];
        let want = [f.conic, f.x0zero, f.x1zero];
        if got != want || !r.is_consistent() {
            Some(format!("B={bb}: naive families {got:?}, closed form {want:?}, total {}", r.total))
        } else {
            None
        }
    })
    .into_iter()
    .flatten()
    .collect();
    PropertyResult::from_failures("family_counts", b, failures)
}

/// `psi` of the enumerated torsor points is exactly `E(B)`, and every
/// accepted torsor point validates as `T2`.
pub fn check_enumerated_points(b: u64, exec: Execution) -> PropertyResult {
    let cfg = EnumConfig {
        execution: exec,
        ..EnumConfig::default()
    };
    let tps = torsor_points(b, &cfg);
    let mut failures = Vec::new();
    let mut images = BTreeSet::new();
    for t in &tps {
        let v = validate(t);
        if !v.is_empty() {
            failures.push(format!("{t}: violates {v:?}"));
        }
        match psi(t) {
            Ok(p) => {
                if !images.insert(p) {
                    failures.push(format!("{t}: image {p} repeated"));
                }
            }
            Err(e) => failures.push(format!("{t}: psi failed: {e}")),
        }
    }
    let naive: BTreeSet<_> = enumerate_e(b, exec).into_iter().collect();
    for p in naive.difference(&images) {
        failures.push(format!("{p}: missed by the enumerator"));
    }
    for p in images.difference(&naive) {
        failures.push(format!("{p}: produced by the enumerator but not in E(B)"));
    }
    PropertyResult::from_failures("enumerated_images", tps.len() as u64, failures)
}

/// Closed-form `g2` against the bisection oracle on an `n x n` grid of the
/// support, tolerance `1e-9`.
pub fn check_g2_grid(n: usize, exec: Execution) -> PropertyResult {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let failures: Vec<String> = crate::par::map_collect(&cells, exec, |&(i, j)| {
        let v = (i as f64 + 0.5) / n as f64;
        let lo = g1(v).expect("v in (0, 1]");
        let u = lo + (1.0 - lo) * (j as f64 + 0.5) / n as f64;
        let (a, b) = (g2(u, v), g2_numeric(u, v));
        ((a - b).abs() > 1e-9).then(|| format!("(u, v) = ({u}, {v}): closed {a}, numeric {b}"))
    })
    .into_iter()
    .flatten()
    .collect();
    PropertyResult::from_failures("g2_closed_form", cells.len() as u64, failures)
}

/// `g2(g1(v), v) = 0` for `v <= 2^{-1/2}`.
pub fn check_g2_vanishes(n: usize) -> PropertyResult {
    let failures: Vec<String> = (1..=n)
        .filter_map(|i| {
            let v = 0.5f64.sqrt() * i as f64 / n as f64;
            let x = g2(g1(v).expect("v in (0, 1]"), v);
            (x != 0.0).then(|| format!("v = {v}: g2(g1(v), v) = {x}"))
        })
        .collect();
    PropertyResult::from_failures("g2_vanishes_at_g1", n as u64, failures)
}

/// `integral D1 g2(u, v) du = -g2(g1(v), v)` to `1e-5`.
pub fn check_d1_integral(vs: &[f64], exec: Execution) -> PropertyResult {
    let failures: Vec<String> = crate::par::map_collect(vs, exec, |&v| {
        let lhs = integral_d1_g2(v, 1e-8).expect("v in (0, 1]");
        let rhs = -g2(g1(v).expect("v in (0, 1]"), v);
        ((lhs - rhs).abs() > 1e-5).then(|| format!("v = {v}: integral {lhs}, expected {rhs}"))
    })
    .into_iter()
    .flatten()
    .collect();
    PropertyResult::from_failures("d1_g2_integral", vs.len() as u64, failures)
}

/// Sample points for the derivative identity, including values past the
/// branch change of `g1` where `g2(g1(v), v) > 0`.
pub fn d1_sample_points() -> Vec<f64> {
    vec![0.05, 0.2, 0.35, 0.5, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0]
}

/// Every property at bound `B`.
pub fn run_all(b: u64, exec: Execution) -> Vec<PropertyResult> {
    vec![
        check_round_trip(b, exec),
        check_injectivity(b, exec),
        check_naive_vs_torsor(b, exec),
        check_families(b, exec),
        check_enumerated_points(b, exec),
        check_g2_grid(40, exec),
        check_g2_vanishes(200),
        check_d1_integral(&d1_sample_points(), exec),
    ]
}
