use e6count::arith::euler::{local_factor_brute, local_factor_closed};
use e6count::peyre::{alpha_const, euler_product, fit_report, leading_coefficient, omega_p, FitError};
use e6count::surface::count_mod_p;
use e6count::{count_total, Rational, Strategy};

#[test]
fn alpha_denominator() {
    assert_eq!(*alpha_const().denom(), 6_220_800);
    assert_eq!(*alpha_const().numer(), 1);
}

#[test]
fn euler_partials_decrease_within_the_reported_tails() {
    let limits = [100u64, 1000, 10_000, 100_000];
    let e: Vec<_> = limits.iter().map(|&p| euler_product(p)).collect();
    for w in e.windows(2) {
        assert!(w[1].partial < w[0].partial);
        assert!(w[0].partial - w[1].partial <= w[0].partial_tail_bound);
        assert!((w[0].value - w[1].value).abs() <= w[0].tail_bound + w[1].tail_bound);
    }
    assert!((e[2].value - e[3].value).abs() < 1e-6);
    // 40-digit evaluation: partial product to 1000 times the prime-zeta tail series
    let reference = 0.001_317_641_154_853_178;
    for x in &e {
        assert!((x.value - reference).abs() <= x.tail_bound, "P = {}", x.prime_limit);
    }
    assert!(e[3].tail_bound <= 1e-8);
}

#[test]
fn leading_coefficient_is_deterministic() {
    let a = leading_coefficient(10_000, 1e-8);
    let b = leading_coefficient(10_000, 1e-8);
    assert_eq!(a, b);
    assert!((a.omega_agreement - 1.0).abs() < 1e-3);
}

#[test]
fn point_counts_mod_p() {
    for p in [2u64, 3, 5, 7, 11, 13, 17] {
        assert_eq!(count_mod_p(p), p * p + p + 1, "p = {p}");
        assert_eq!(omega_p(p), Rational::new((p * p + 7 * p + 1) as i128, (p * p) as i128));
    }
}

#[test]
fn local_factor_identity() {
    for p in [2u64, 3, 5, 7, 11] {
        for s in [0.5, 1.0, 2.0] {
            let c = local_factor_closed(p, s).unwrap();
            let b = local_factor_brute(p, s, 40).unwrap();
            assert!((c - b).abs() <= 1e-6, "p = {p}, s = {s}");
        }
    }
}

#[test]
fn fit_rows() {
    let c = leading_coefficient(10_000, 1e-8).leading_coeff;
    let counts: Vec<_> = [100u64, 1000, 10_000].iter().map(|&b| count_total(b, Strategy::Auto)).collect();
    let rows = fit_report(&counts, c, true).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
    assert!(rows.windows(2).all(|w| w[1].ratio < w[0].ratio));
    assert!(rows.iter().all(|r| r.main_term_half.is_some_and(|m| m > 0.0)));
    assert_eq!(fit_report(&counts[..1], c, false), Err(FitError::TooFewPoints(1)));
}
