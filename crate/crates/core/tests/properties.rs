mod common;

use common::{hilb_by_sigma, naive_mul, random_mukai, random_qz, random_series};
use k3_pairs::invariants::{conjectural_j, hilb_euler, HilbTable};
use k3_pairs::lattice::{apply_isometry, mukai_pairing, CurveClass, HodgeIsometry};
use k3_pairs::series::{pow_binomial, MultiSeries, Truncation};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn window(seed: u64) -> (ChaCha8Rng, Truncation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = rand::Rng::gen_range(&mut rng, 1..=4);
    let z = rand::Rng::gen_range(&mut rng, 1..=4);
    (rng, Truncation::symmetric(y, z).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_log_roundtrip(seed in any::<u64>()) {
        let (mut rng, t) = window(seed);
        let f = random_series(&mut rng, t, 6, false);
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f.clone());
        let g = MultiSeries::one(t).add(&f).unwrap();
        prop_assert_eq!(g.log().unwrap().exp().unwrap(), g);
    }

    #[test]
    fn product_matches_schoolbook(seed in any::<u64>()) {
        let (mut rng, t) = window(seed);
        let a = random_series(&mut rng, t, 8, true);
        let b = random_series(&mut rng, t, 8, true);
        prop_assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }

    #[test]
    fn product_is_commutative_and_associative(seed in any::<u64>()) {
        let (mut rng, t) = window(seed);
        let a = random_series(&mut rng, t, 5, true);
        let b = random_series(&mut rng, t, 5, true);
        let c = random_series(&mut rng, t, 5, true);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        // A z-window can drop a partial product that a later factor would
        // bring back, so widen it until nothing falls out.
        let t0 = Truncation::symmetric(t.y_max, 12).unwrap();
        let (a, b, c) = (a.restrict(t0), b.restrict(t0), c.restrict(t0));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn binomial_factors_invert(a in 0i64..=3, b in 0i64..=3, z in -2i64..=2, e in -30i64..=30, sign in prop::sample::select(vec![1i64, -1])) {
        prop_assume!(a + b > 0);
        let t = Truncation::symmetric(6, 12).unwrap();
        let class = CurveClass::new(a, b);
        let up = pow_binomial(t, class, z, sign, &BigInt::from(e)).unwrap();
        let down = pow_binomial(t, class, z, sign, &BigInt::from(-e)).unwrap();
        prop_assert_eq!(up.mul(&down).unwrap(), MultiSeries::one(t));
    }

    #[test]
    fn qz_width_bound_is_stable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_qz(&mut rng);
        let b = random_qz(&mut rng);
        prop_assert!(a.satisfies_width_bound() && b.satisfies_width_bound());
        prop_assert!(a.mul(&b).satisfies_width_bound());
        prop_assert!(a.invert().unwrap().satisfies_width_bound());
    }

    #[test]
    fn j_is_isometry_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_mukai(&mut rng, 4);
        let w = random_mukai(&mut rng, 4);
        let j = conjectural_j(v).unwrap();
        prop_assert_eq!(conjectural_j(v.neg()).unwrap(), j.clone());
        for g in HodgeIsometry::generators() {
            let gv = apply_isometry(&g, v).unwrap();
            let gw = apply_isometry(&g, w).unwrap();
            prop_assert_eq!(mukai_pairing(gv, gw), mukai_pairing(v, w));
            prop_assert_eq!(gv.divisibility().unwrap(), v.divisibility().unwrap());
            prop_assert_eq!(conjectural_j(gv).unwrap(), j.clone());
        }
    }
}

#[test]
fn eta_kernel_matches_sigma_recurrence() {
    let oracle = hilb_by_sigma(200);
    assert_eq!(HilbTable::new(200).values(), &oracle[..]);
    assert_eq!(hilb_euler(200), oracle[200]);
}

#[test]
fn composed_isometries_preserve_j() {
    let g = HodgeIsometry::Composition(HodgeIsometry::generators());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let v = random_mukai(&mut rng, 3);
        let gv = apply_isometry(&g, v).unwrap();
        assert_eq!(conjectural_j(gv).unwrap(), conjectural_j(v).unwrap());
    }
}
