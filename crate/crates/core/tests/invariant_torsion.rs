//! The invariant torsion formula against direct extraction from `φ`.

use g2kit::models::su2su2::{su2su2_coframe, StandardForms};
use g2kit::models::{bryant_salamon_standard, sheared_samples, InvariantAnsatz};
use g2kit::structures::*;
use g2kit::{QuadNum, ScalarExpr};

fn formula(b: &CircleBundleData, coeffs: &InvariantCoefficients) -> TorsionG2 {
    let curv = decompose_2form_su3(&b.dtheta(), &b.su3).unwrap();
    assert_eq!(curv.reassemble(&b.su3).unwrap(), b.dtheta());
    let st = su3_torsion(&b.su3).unwrap();
    invariant_torsion_formula(b, &curv, &st, coeffs).unwrap()
}

fn boosted() -> InvariantAnsatz {
    let q = ScalarExpr::frac;
    let z = || q(0, 1);
    InvariantAnsatz {
        lambda: q(1, 1),
        mu: q(1, 2),
        a: [
            [q(5, 4), z(), z(), q(3, 4)],
            [z(), q(1, 1), z(), z()],
            [z(), z(), q(1, 1), z()],
            [q(3, 4), z(), z(), q(5, 4)],
        ],
        alpha: ScalarExpr::t_pow(-3).scale(&QuadNum::from_int(2)),
        k: q(1, 1),
    }
}

#[test]
fn corrected_formula_matches_on_sheared_models() {
    let samples = sheared_samples();
    assert!(samples.len() >= 10);
    for m in &samples {
        let b = m.build().unwrap();
        let direct = g2_torsion(&b.g2().unwrap()).unwrap();
        let f = formula(&b, &InvariantCoefficients::corrected());
        assert!(torsion_mismatch(&direct, &f).is_empty(), "{:?}", m);
    }
}

#[test]
fn printed_formula_is_off_on_sheared_models() {
    let b = sheared_samples()[1].build().unwrap();
    let direct = g2_torsion(&b.g2().unwrap()).unwrap();
    let f = formula(&b, &InvariantCoefficients::printed());
    assert_eq!(torsion_mismatch(&direct, &f), ["tau1", "tau7", "tau14", "tau27"]);
}

#[test]
fn corrected_formula_matches_on_invariant_ansatz() {
    let std = StandardForms::new();
    let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
    for a in [boosted(), bryant_salamon_standard(1).unwrap()] {
        let b = a.circle_bundle(&frame, &std).unwrap();
        let direct = g2_torsion(&b.g2().unwrap()).unwrap();
        let f = formula(&b, &InvariantCoefficients::corrected());
        assert!(torsion_mismatch(&direct, &f).is_empty());
    }
}

#[test]
fn corrections_are_localized() {
    let d = InvariantCoefficients::printed().diff(&InvariantCoefficients::corrected());
    assert_eq!(
        d,
        [
            "tau14_v1_omega",
            "tau1_v1hat",
            "tau27_star_v12",
            "tau27_theta_v1hat_omega",
            "tau27_v1hat_re",
            "tau7_v1_theta",
            "y"
        ]
    );
}

#[test]
fn closed_and_coclosed_criteria() {
    let std = StandardForms::new();
    let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
    let b = bryant_salamon_standard(1).unwrap().circle_bundle(&frame, &std).unwrap();
    let r = check_closed_coclosed(&b).unwrap();
    assert!(r.closed && r.coclosed);
    let b = boosted().circle_bundle(&frame, &std).unwrap();
    let g2 = b.g2().unwrap();
    let r = check_closed_coclosed(&b).unwrap();
    assert_eq!((r.closed, r.coclosed), (g2.dphi().is_zero(), g2.dpsi().is_zero()));
    for m in sheared_samples() {
        let b = m.build().unwrap();
        let g2 = b.g2().unwrap();
        let r = check_closed_coclosed(&b).unwrap();
        assert_eq!((r.closed, r.coclosed), (g2.dphi().is_zero(), g2.dpsi().is_zero()));
    }
}
