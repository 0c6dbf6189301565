//! Property tests for the crate's structural invariants.

use landau1d_core::certificates::build_partition;
use landau1d_core::interactions::{pair_coefficients, slater_pair_coefficients};
use landau1d_core::potentials::{eval_vm, eval_vm_field, vm_envelope};
use landau1d_core::QuadratureSpec;
use proptest::prelude::*;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vm_even_and_inside_envelope(m in 0u32..30, x in -15.0f64..15.0) {
        let v = eval_vm(m, x, &quad()).unwrap();
        let v_neg = eval_vm(m, -x, &quad()).unwrap();
        prop_assert_eq!(v, v_neg);
        let env = vm_envelope(m, x);
        prop_assert!(v > env.lower);
        if let Some(upper) = env.upper {
            prop_assert!(v < upper);
        }
    }

    #[test]
    fn vm_field_scaling(m in 0u32..6, b in 0.1f64..100.0, x in 0.0f64..5.0) {
        let q = quad();
        let lhs = eval_vm_field(m, b, x, &q).unwrap();
        let rhs = b.sqrt() * eval_vm(m, b.sqrt() * x, &q).unwrap();
        let tol = 2.0 * q.rel_tol * rhs.abs();
        prop_assert!((lhs - rhs).abs() <= tol.max(1e-13));
    }

    #[test]
    fn pair_coefficients_convex_and_symmetric(m1 in 0u32..12, m2 in 0u32..12) {
        let c = pair_coefficients(m1, m2).unwrap();
        let sum: f64 = c.weights().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(c.weights().iter().all(|w| *w >= 0.0));
        let swapped = pair_coefficients(m2, m1).unwrap();
        prop_assert_eq!(c.weights(), swapped.weights());
    }

    #[test]
    fn slater_coefficients_convex_odd(j in 0u32..12, k in 0u32..12) {
        prop_assume!(j != k);
        let c = slater_pair_coefficients(j, k).unwrap();
        let sum: f64 = c.weights().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        for (idx, w) in c.weights().iter().enumerate() {
            prop_assert!(*w >= 0.0);
            if idx % 2 == 0 {
                prop_assert_eq!(*w, 0.0);
            }
        }
    }

    #[test]
    fn partition_normalized_at_random_points(
        n in 2usize..24,
        seed in any::<u64>(),
    ) {
        let part = build_partition(n, 1.5, 0.8).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..32 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let s: f64 = part.values(&x).iter().map(|g| g * g).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
