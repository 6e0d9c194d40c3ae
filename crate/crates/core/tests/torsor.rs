use e6count::enumerate::torsor_points;
use e6count::surface::enumerate_e;
use e6count::torsor::{
    lift_t1, phi_t1_to_t2, phi_t2_to_t1, psi, torsor_residual, transfer_t1_to_t2, transfer_t2_to_t1, validate,
};
use e6count::{EnumConfig, Execution, Scheme, SurfacePoint, TorsorPoint};
use num_traits::Zero;
use proptest::prelude::*;
use std::sync::OnceLock;

const B: u64 = 500;

fn points() -> &'static [SurfacePoint] {
    static PTS: OnceLock<Vec<SurfacePoint>> = OnceLock::new();
    PTS.get_or_init(|| enumerate_e(B, Execution::default()))
}

fn t2_points() -> &'static [TorsorPoint] {
    static PTS: OnceLock<Vec<TorsorPoint>> = OnceLock::new();
    PTS.get_or_init(|| torsor_points(B, &EnumConfig::default()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lift_is_a_valid_t1_point(i in 0usize..10_000) {
        let p = points()[i % points().len()];
        let t = lift_t1(&p).unwrap();
        prop_assert_eq!(t.scheme, Scheme::T1);
        prop_assert!(torsor_residual(&t).is_zero());
        prop_assert!(validate(&t).is_empty(), "{}: {:?}", t, validate(&t));
        prop_assert_eq!(psi(&t).unwrap(), p);
    }

    #[test]
    fn phi_keeps_the_image(i in 0usize..10_000) {
        let p = points()[i % points().len()];
        let t1 = lift_t1(&p).unwrap();
        let t2 = phi_t1_to_t2(&t1).unwrap();
        prop_assert!(validate(&t2).is_empty());
        prop_assert_eq!(psi(&t2).unwrap(), psi(&t1).unwrap());
        prop_assert_eq!(phi_t2_to_t1(&t2).unwrap(), t1);
    }

    #[test]
    fn phi_inverts_on_enumerated_t2_points(i in 0usize..10_000) {
        let t2 = t2_points()[i % t2_points().len()];
        let t1 = phi_t2_to_t1(&t2).unwrap();
        prop_assert!(validate(&t1).is_empty());
        prop_assert_eq!(phi_t1_to_t2(&t1).unwrap(), t2);
        prop_assert_eq!(psi(&t1).unwrap(), psi(&t2).unwrap());
    }

    #[test]
    fn exponent_transfer_round_trips(m1m3 in 0usize..3, m6 in 0u32..12, n1 in 0u32..24) {
        let (m1, m3) = [(0, 0), (1, 0), (0, 1)][m1m3];
        let e = (m1, m3, m6, n1);
        let (_, f) = transfer_t1_to_t2(e).unwrap();
        prop_assert_eq!(transfer_t2_to_t1(f).unwrap().1, e);
    }
}

#[test]
fn every_point_of_e500_round_trips() {
    for p in points() {
        let t2 = phi_t1_to_t2(&lift_t1(p).unwrap()).unwrap();
        assert!(validate(&t2).is_empty(), "{p}");
        assert_eq!(psi(&t2).unwrap(), *p);
    }
}

#[test]
fn lifts_are_injective() {
    let mut seen = std::collections::BTreeSet::new();
    for p in points() {
        let t2 = phi_t1_to_t2(&lift_t1(p).unwrap()).unwrap();
        assert!(seen.insert((t2.xi, t2.tau1, t2.tau2, t2.tau_l)), "{p}");
    }
}
