mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity_is_width(m in sparse_matrix()) {
        rank_nullity(&m)?;
    }

    #[test]
    fn scaled_tau_passes_iff_cube_root_of_unity(l in 0i64..7) {
        scaled_tau_detection(l)?;
    }

    #[test]
    fn cocycles_are_exactly_the_associative_extensions((a, c, exact) in cochain_case()) {
        cocycle_iff_associative(&a, &c, exact)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sigma_is_an_involution((m, f) in resolution_case()) {
        sigma_squared(m, f)?;
    }

    #[test]
    fn iota_difference_commutes_with_differentials((m, f) in resolution_case()) {
        iota_difference_is_chain_map(m, f)?;
    }

    #[test]
    fn b_does_not_depend_on_the_homotopy((m, f) in resolution_case()) {
        homotopy_independence(m, f)?;
    }
}
