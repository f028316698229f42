//! G2, SU(3) and SU(2)-structures with torsion extraction.

pub mod circle;
pub mod g2;
pub mod su2;
pub mod su3;

pub use g2::{
    conformal_torsion_law, conformal_transform, g2_torsion, membership_residuals, reassembly_residuals,
    torsion_from_derivatives, G2Structure, NumTorsion, Torsion, TorsionEntry, TorsionG2,
};
pub use su3::{
    decompose_2form_linear, decompose_2form_su3, decompose_3form_su3, su3_torsion, su3_torsion_from, two_form_matrix,
    LinearSplit, SU3Structure, SU3Torsion, ThetaCurvature, ThreeFormParts,
};
pub use su2::{check_su2_structure, AxiomCheck, SU2Report, SU2Structure};
pub use circle::{check_closed_coclosed, invariant_torsion_formula, torsion_mismatch, CircleBundleData, ClosedCoclosed, InvariantCoefficients};
