mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rationals_form_a_ring(t in (rational(), rational(), rational())) { q_ring(t)?; }

    #[test]
    fn polynomials_form_a_ring(t in (qpoly(), qpoly(), qpoly())) { poly_ring(t)?; }

    #[test]
    fn parameter_fractions_form_a_field(t in (scalar(), scalar(), scalar())) { scalar_field(t)?; }

    #[test]
    fn normal_form_is_idempotent(t in (scalar(), param_poly())) { scalar_normal_form(t)?; }

    #[test]
    fn factored_fractions_form_a_ring(t in (frac(), frac(), frac())) { frac_ring(t)?; }

    #[test]
    fn rank_plus_nullity_is_width(m in matrix()) { rank_nullity(m)?; }

    #[test]
    fn conjugation_is_an_involution(p in partition()) { conjugation(p)?; }
}
