use e6count::enumerate::{count_e_torsor_with, EnumError, region_xis, solve_tau2_congruence, sqrt_mod_prime_power, torsor_points};
use e6count::surface::enumerate_e;
use e6count::torsor::{psi, validate};
use e6count::{count_e_torsor, count_naive, count_total, EnumConfig, Execution, Strategy};
use proptest::prelude::*;
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn xis() -> &'static [e6count::Xi] {
    static XIS: OnceLock<Vec<e6count::Xi>> = OnceLock::new();
    XIS.get_or_init(|| region_xis(200_000))
}

fn cfg(strategy: Strategy, slack: i64, execution: Execution) -> EnumConfig {
    EnumConfig {
        strategy,
        slack,
        execution,
    }
}

#[test]
fn strategies_agree_up_to_1000() {
    for b in 1..=1000 {
        let d = count_e_torsor(b, Strategy::Direct);
        assert_eq!(d, count_e_torsor(b, Strategy::Residue), "B = {b}");
        assert_eq!(d, count_e_torsor(b, Strategy::Auto), "B = {b}");
    }
}

#[test]
fn known_small_totals() {
    assert_eq!(count_total(1, Strategy::Auto).total, 6);
    assert_eq!(count_total(2, Strategy::Auto).total, 8);
    for b in [500, 1000] {
        assert_eq!(count_total(b, Strategy::Auto).total, count_naive(b).total);
    }
}

#[test]
fn accepted_points_validate_and_cover_e() {
    for b in [1, 2, 50, 200, 500] {
        let tps = torsor_points(b, &EnumConfig::default());
        let mut images = BTreeSet::new();
        for t in &tps {
            assert!(validate(t).is_empty(), "{t}: {:?}", validate(t));
            assert!(images.insert(psi(t).unwrap()), "{t}");
        }
        let naive: BTreeSet<_> = enumerate_e(b, Execution::Sequential).into_iter().collect();
        assert_eq!(images, naive, "B = {b}");
    }
}

#[test]
fn thread_counts_do_not_change_counts() {
    for threads in [1, 2, 4] {
        let n = e6count::with_threads(threads, || count_total(3000, Strategy::Residue).total);
        assert_eq!(n, count_total(3000, Strategy::Direct).total);
    }
}

#[test]
fn region_xis_satisfy_the_height_bound() {
    let b = 5000;
    let xis = region_xis(b);
    assert!(xis.iter().all(|x| x.height_monomial() <= b as u128 && x.in_f()));
    let unique: BTreeSet<_> = xis.iter().collect();
    assert_eq!(unique.len(), xis.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wider_slack_never_changes_the_count(b in 1u64..2500, s in 0usize..3) {
        let strategy = [Strategy::Direct, Strategy::Residue, Strategy::Auto][s];
        let base = count_e_torsor_with(b, &cfg(strategy, 1, Execution::Sequential));
        for slack in 2..=3 {
            prop_assert_eq!(count_e_torsor_with(b, &cfg(strategy, slack, Execution::Parallel)), base);
        }
    }

    #[test]
    fn strategies_agree(b in 1000u64..6000) {
        prop_assert_eq!(count_e_torsor(b, Strategy::Direct), count_e_torsor(b, Strategy::Residue));
    }

    #[test]
    fn square_roots_are_roots(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), k in 1u32..6, c in 1i64..10_000) {
        let q = p.pow(k);
        if c % p as i64 != 0 {
            let roots = sqrt_mod_prime_power(c as i128, p, k).unwrap();
            let brute: Vec<u64> = (0..q).filter(|x| (x * x) % q == c as u64 % q).collect();
            prop_assert_eq!(roots, brute);
        }
    }

    #[test]
    fn congruence_roots_match_brute_force(i in 0usize..10_000, tau1 in -60i64..60) {
        let xi = xis()[i % xis().len()];
        let q0 = xi.q0() as u64;
        match solve_tau2_congruence(&xi, tau1, q0) {
            Err(EnumError::PreconditionViolated) => {}
            Err(e) => prop_assert!(false, "{e}"),
            Ok(got) => {
                let c1 = (xi.xi1() as i128).pow(2) * xi.xi3() as i128;
                let brute: Vec<u64> = (0..q0)
                    .filter(|&t| ((t as i128).pow(2) * xi.xi2() as i128 + (tau1 as i128).pow(3) * c1).rem_euclid(q0 as i128) == 0)
                    .collect();
                prop_assert_eq!(got, brute);
            }
        }
    }
}
