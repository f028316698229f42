//! Seeded random members of the invariant ansatz with exact rational data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exterior::Coframe;
use crate::models::ansatz::InvariantAnsatz;
use crate::models::su2su2::StandardForms;
use crate::scalar::{QuadNum, ScalarExpr};
use crate::structures::{
    decompose_2form_su3, g2_torsion, invariant_torsion_formula, membership_residuals, reassembly_residuals, su3_torsion,
    torsion_mismatch, InvariantCoefficients,
};

type Matrix = [[ScalarExpr; 4]; 4];

fn identity() -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { ScalarExpr::one() } else { ScalarExpr::zero() }))
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(ScalarExpr::zero(), |acc, m| &acc + &(&a[i][m] * &b[m][j])))
    })
}

/// Rational point `u ↦ ((1−u²), 2u)/(1+u²)` of the unit circle, or of the
/// hyperbola `((1+v²), 2v)/(1−v²)` when `hyperbolic`.
fn rational_point(u: (i64, i64), hyperbolic: bool) -> (ScalarExpr, ScalarExpr) {
    let (p, q) = u;
    let (p2, q2) = (p * p, q * q);
    if hyperbolic {
        (ScalarExpr::frac(q2 + p2, q2 - p2), ScalarExpr::frac(2 * p * q, q2 - p2))
    } else {
        (ScalarExpr::frac(q2 - p2, q2 + p2), ScalarExpr::frac(2 * p * q, q2 + p2))
    }
}

/// Rotation in the spatial plane `(i, j)` or boost in `(0, j)`.
fn plane(i: usize, j: usize, u: (i64, i64)) -> Matrix {
    let boost = i == 0;
    let (c, s) = rational_point(u, boost);
    let mut m = identity();
    m[i][i] = c.clone();
    m[j][j] = c;
    m[i][j] = if boost { s.clone() } else { s.scale(&QuadNum::from_int(-1)) };
    m[j][i] = s;
    m
}

fn small_ratio(rng: &mut ChaCha8Rng) -> (i64, i64) {
    (rng.gen_range(-3..=3), rng.gen_range(4..=7))
}

fn positive(rng: &mut ChaCha8Rng) -> ScalarExpr {
    ScalarExpr::frac(rng.gen_range(1..=8), rng.gen_range(1..=4))
}

/// A product of three rational rotations and two rational boosts; it
/// satisfies `AQAᵀ = Q` exactly.
pub fn random_lorentz(rng: &mut ChaCha8Rng) -> Matrix {
    let mut a = identity();
    for (i, j) in [(1, 2), (0, 1), (2, 3), (0, 3), (1, 3)] {
        a = mul(&a, &plane(i, j, small_ratio(rng)));
    }
    a
}

/// Random `λ, μ > 0`, Lorentz `A`, `α = c·tᵐ` and `k ≠ 0`.
pub fn random_ansatz(rng: &mut ChaCha8Rng) -> InvariantAnsatz {
    let k = loop {
        let k = rng.gen_range(-4..=4);
        if k != 0 {
            break ScalarExpr::frac(k, 2);
        }
    };
    let alpha = ScalarExpr::t_pow(rng.gen_range(-3..=1)).scale(&QuadNum::from_frac(rng.gen_range(-3..=3), 2));
    InvariantAnsatz { lambda: positive(rng), mu: positive(rng), a: random_lorentz(rng), alpha, k }
}

pub fn random_ansaetze(seed: u64, n: usize) -> Vec<InvariantAnsatz> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_ansatz(&mut rng)).collect()
}

/// `λ, μ, k, α` as free parameters over a fixed rational Lorentz `A`.
pub fn parametric_ansatz(a: Matrix) -> InvariantAnsatz {
    let p = ScalarExpr::param;
    InvariantAnsatz { lambda: p("lambda"), mu: p("mu"), a, alpha: p("alpha"), k: p("k") }
}

pub fn parametric_ansaetze(seed: u64, n: usize) -> Vec<InvariantAnsatz> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| parametric_ansatz(random_lorentz(&mut rng))).collect()
}

/// Exact consistency of the direct torsion of one structure.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionConsistency {
    /// `dφ = τ₁ψ + 3τ₇∧φ + ∗τ₂₇` and `dψ = 4τ₇∧ψ + ∗τ₁₄`.
    pub reassembly: bool,
    /// `τ₁₄∧φ = −∗τ₁₄`, `τ₂₇∧φ = 0`, `τ₂₇∧ψ = 0`.
    pub membership: bool,
    /// Components where the corrected invariant formula differs.
    pub formula_mismatch: Vec<&'static str>,
}

impl TorsionConsistency {
    pub fn holds(&self) -> bool {
        self.reassembly && self.membership && self.formula_mismatch.is_empty()
    }
}

pub fn torsion_consistency(a: &InvariantAnsatz, frame: &Coframe, std: &StandardForms) -> Result<TorsionConsistency> {
    let b = a.circle_bundle(frame, std)?;
    let g = a.g2(frame, std)?;
    let tau = g2_torsion(&g)?;
    let (r1, r2) = reassembly_residuals(&g.phi, &g.psi, &g.dphi(), &g.dpsi(), &g.metric, &tau)?;
    let m = membership_residuals(&g.phi, &g.psi, &g.metric, &tau)?;
    let curv = decompose_2form_su3(&b.dtheta(), &b.su3)?;
    let st = su3_torsion(&b.su3)?;
    let f = invariant_torsion_formula(&b, &curv, &st, &InvariantCoefficients::corrected())?;
    Ok(TorsionConsistency {
        reassembly: r1.is_zero() && r2.is_zero(),
        membership: m.iter().all(|x| x.is_zero()),
        formula_mismatch: torsion_mismatch(&tau, &f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::su2su2::su2su2_coframe;

    #[test]
    fn random_matrices_are_lorentz_and_seeded() {
        let a = random_ansaetze(7, 5);
        assert!(a.iter().all(|x| x.is_lorentz()));
        assert_eq!(format!("{:?}", a), format!("{:?}", random_ansaetze(7, 5)));
    }

    #[test]
    fn parametric_samples_are_consistent() {
        let std = StandardForms::new();
        let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
        for a in parametric_ansaetze(1, 2) {
            let c = torsion_consistency(&a, &frame, &std).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }
}
