//! Algebraic invariants over randomly generated exact data.

use g2kit::exterior::masks_of_degree;
use g2kit::identities::flat_g2;
use g2kit::models::samples::{random_ansaetze, torsion_consistency};
use g2kit::models::su2su2::{su2su2_coframe, StandardForms};
use g2kit::models::InvariantAnsatz;
use g2kit::{FormExpr, QuadNum, ScalarExpr};
use proptest::prelude::*;

fn quad() -> impl Strategy<Value = QuadNum> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| QuadNum::from_frac(a, b) + QuadNum::from_frac(c, d) * QuadNum::sqrt_d())
}

/// A form of degree `deg` on `n` generators with small rational coefficients.
fn form(n: usize, deg: usize) -> impl Strategy<Value = FormExpr> {
    let masks = masks_of_degree(n, deg);
    prop::collection::vec(-3i64..=3, masks.len())
        .prop_map(move |cs| FormExpr::from_comps(n, deg, masks.iter().copied().zip(cs.into_iter().map(ScalarExpr::int))))
}

fn sign(p: usize, q: usize) -> i64 {
    if p * q % 2 == 0 { 1 } else { -1 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quad_field_laws(a in quad(), b in quad(), c in quad()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn quad_sign_matches_float(a in quad()) {
        let f = a.to_f64();
        prop_assume!(f.abs() > 1e-9);
        prop_assert_eq!(a.signum(), if f > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn wedge_is_graded_commutative(
        (p, q, a, b) in (1usize..=3, 1usize..=3).prop_flat_map(|(p, q)| (Just(p), Just(q), form(7, p), form(7, q)))
    ) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_int(sign(p, q)));
    }

    #[test]
    fn wedge_is_associative(a in form(7, 1), b in form(7, 2), c in form(7, 2)) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The structure equations of the `SU(2)²` frame satisfy `d² = 0` and the
    /// graded Leibniz rule on arbitrary constant-coefficient forms.
    #[test]
    fn frame_derivative_is_a_differential(a in form(7, 1), b in form(7, 2), c in form(7, 3)) {
        let f = su2su2_coframe().unwrap();
        for x in [&a, &b, &c] {
            prop_assert!(f.d(&f.d(x)).is_zero());
        }
        let lhs = f.d(&a.wedge(&b));
        let rhs = f.d(&a).wedge(&b).sub(&a.wedge(&f.d(&b)));
        prop_assert_eq!(lhs, rhs);
    }

    /// On the flat `G₂` metric, `∗∗ = 1` in odd dimension and `|α|² vol = α∧∗α`.
    #[test]
    fn hodge_star_is_an_isometric_involution(k in 1usize..=3, cs in prop::collection::vec(-3i64..=3, 35)) {
        let g = flat_g2().unwrap();
        let masks = masks_of_degree(7, k);
        let a = FormExpr::from_comps(7, k, masks.iter().copied().zip(cs.into_iter().map(ScalarExpr::int)));
        let star = g.metric.hodge(&a, 1).unwrap();
        prop_assert_eq!(g.metric.hodge(&star, 1).unwrap(), a.clone());
        let n = g.metric.norm_sq(&a).unwrap();
        prop_assert_eq!(a.wedge(&star), g.metric.vol().scale(&n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Every seeded member of the ansatz decomposes its exterior derivatives
    /// exactly into the four torsion components.
    #[test]
    fn random_structures_reassemble(seed in any::<u64>()) {
        let std = StandardForms::new();
        let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
        let a = &random_ansaetze(seed, 1)[0];
        prop_assert!(a.is_lorentz());
        let c = torsion_consistency(a, &frame, &std).unwrap();
        prop_assert!(c.holds(), "{:?}", c);
    }
}
