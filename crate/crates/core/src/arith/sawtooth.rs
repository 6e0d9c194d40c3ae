//! Counting integers of a residue class in a real interval.
//!
//! For `t1 <= t2` and `q > 0`,
//!
//! ```text
//! #{t1 < n <= t2 : n = a mod q} = (t2 - t1)/q + psi((t1 - a)/q) - psi((t2 - a)/q)
//! ```
//!
//! with the sawtooth `psi(t) = {t} - 1/2`.

/// `psi(t) = t - floor(t) - 1/2`.
pub fn psi(t: f64) -> f64 {
    t - t.floor() - 0.5
}

/// `#{t1 < n <= t2 : n = a mod q}` from floors.
pub fn count_in_class(t1: f64, t2: f64, a: i64, q: u64) -> i64 {
    assert!(q > 0, "modulus must be positive");
    assert!(t2 >= t1, "empty interval orientation");
    let q = q as f64;
    let a = a as f64;
    ((t2 - a) / q).floor() as i64 - ((t1 - a) / q).floor() as i64
}

/// The remainder term `psi((t1 - a)/q) - psi((t2 - a)/q)`.
pub fn r_term(t1: f64, t2: f64, a: i64, q: u64) -> f64 {
    let q = q as f64;
    let a = a as f64;
    psi((t1 - a) / q) - psi((t2 - a) / q)
}

/// Difference between the two sides of the identity.
pub fn identity_defect(t1: f64, t2: f64, a: i64, q: u64) -> f64 {
    let lhs = count_in_class(t1, t2, a, q) as f64;
    let rhs = (t2 - t1) / q as f64 + r_term(t1, t2, a, q);
    (lhs - rhs).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(t1: f64, t2: f64, a: i64, q: u64) -> i64 {
        let lo = t1.floor() as i64 - 1;
        let hi = t2.ceil() as i64 + 1;
        (lo..=hi)
            .filter(|&n| (n as f64) > t1 && (n as f64) <= t2 && (n - a).rem_euclid(q as i64) == 0)
            .count() as i64
    }

    #[test]
    fn examples() {
        assert_eq!(count_in_class(0.0, 10.0, 3, 4), 2);
        assert!((10.0 / 4.0 + r_term(0.0, 10.0, 3, 4) - 2.0).abs() < 1e-12);
        for q in 1..20u64 {
            for a in 1..=q as i64 {
                assert_eq!(count_in_class(0.0, q as f64, a, q), 1);
            }
        }
        assert!((psi(0.75) - 0.25).abs() < 1e-15);
        assert!((psi(-0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn against_loop() {
        for q in 1..9u64 {
            for a in -5..10i64 {
                for i in 0..40 {
                    let t1 = -7.3 + 0.37 * i as f64;
                    let t2 = t1 + 0.91 * (i % 13) as f64;
                    assert_eq!(count_in_class(t1, t2, a, q), brute(t1, t2, a, q));
                    assert!(identity_defect(t1, t2, a, q) < 1e-9);
                }
            }
        }
    }
}
