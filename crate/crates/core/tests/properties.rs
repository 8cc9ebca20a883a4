//! Property tests for the structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use opsim_core::linalg::{numerical_radius, Operator};
use opsim_core::sequences::{abel_swap_check, AlphaSeq};

fn small_complex() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn small_matrix(max_n: usize) -> impl Strategy<Value = Operator> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(small_complex(), n * n)
            .prop_map(move |data| Operator::new(n, n, data).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // The numerical radius pinches the operator norm within a factor 2.
    #[test]
    fn radius_norm_sandwich(a in small_matrix(5)) {
        let omega = numerical_radius(&a).unwrap();
        let norm = a.op_norm();
        prop_assert!(omega <= norm + 1e-8);
        prop_assert!(norm <= 2.0 * omega + 1e-8);
    }

    // The weighted double sum rearranges exactly for any finite table.
    #[test]
    fn abel_rearrangement_exact(table in proptest::collection::vec(-2.0f64..2.0, 1..40)) {
        let alpha = AlphaSeq::explicit(&table).unwrap();
        let chk = abel_swap_check(&alpha, table.len());
        prop_assert!(chk.defect <= 1e-12 * chk.lhs.max(1.0));
    }

    // Matrix JSON writes shortest round-trip decimals: parse(write(x)) == x.
    #[test]
    fn matrix_json_bit_exact(a in small_matrix(4)) {
        let s = serde_json::to_string(&a).unwrap();
        let b: Operator = serde_json::from_str(&s).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    // Induced p-norm brackets stay ordered.
    #[test]
    fn pnorm_bracket_ordered(a in small_matrix(4), p in 1.1f64..6.0) {
        let (lo, hi) = opsim_core::linalg::induced_pnorm_bracket(&a, p, 32, 7).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }
}
