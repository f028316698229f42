//! The nearly-hypo model on `ℝ⁺ × SU(2) × SU(2)`.
//!
//! Labels, in order: `dt`, `u+`, `u-`, `v1`, `w1`, `v2`, `w2`. Each `SU(2)`
//! factor carries left-invariant forms `(u, v, w)` dual to a basis with
//! `[E_i, E_j] = 2E_k` cyclically; the diagonal combinations are
//! `u± = (u₁ ± u₂)/2`.

use crate::error::{Error, Result};
use crate::exterior::{mask_of, Coframe, FormExpr, Mask};
use crate::scalar::{QuadNum, ScalarExpr};
use crate::structures::SU2Structure;

pub const LABELS: [&str; 7] = ["dt", "u+", "u-", "v1", "w1", "v2", "w2"];
pub const DT: usize = 0;
pub const U_PLUS: usize = 1;
pub const U_MINUS: usize = 2;

/// `diag(1, −1, −1, −1)`: `ω_a ∧ ω_b = −2 Q_ab v` on the standard forms.
pub const LORENTZ_Q: [i64; 4] = [1, -1, -1, -1];

/// Labels of the 5-dimensional link.
pub fn link_mask() -> Mask {
    mask_of(&[U_MINUS, 3, 4, 5, 6])
}

/// Labels of the 6-dimensional cone (everything but `u+`).
pub fn basic_mask() -> Mask {
    mask_of(&[DT, U_MINUS, 3, 4, 5, 6])
}

fn e(i: usize) -> FormExpr {
    FormExpr::basis(LABELS.len(), &[i])
}

/// `de^a = −ε Σ_{b,c} C^a_{bc} e^b ∧ e^c` for both factors, rewritten in the
/// `u±` basis.
fn maurer_cartan_rules(eps: &QuadNum) -> Vec<FormExpr> {
    let n = LABELS.len();
    let s = ScalarExpr::constant(eps.clone()).scale(&QuadNum::from_int(-4));
    let u = [e(U_PLUS).add(&e(U_MINUS)), e(U_PLUS).sub(&e(U_MINUS))];
    let copy = |c: usize| [u[c].clone(), e(3 + 2 * c), e(4 + 2 * c)];
    let d_copy = |c: usize| {
        let [a, b, w] = copy(c);
        [b.wedge(&w).scale(&s), w.wedge(&a).scale(&s), a.wedge(&b).scale(&s)]
    };
    let [du1, dv1, dw1] = d_copy(0);
    let [du2, dv2, dw2] = d_copy(1);
    let half = ScalarExpr::frac(1, 2);
    vec![
        FormExpr::zero(n, 2),
        du1.add(&du2).scale(&half),
        du1.sub(&du2).scale(&half),
        dv1,
        dw1,
        dv2,
        dw2,
    ]
}

/// Frame with an explicit Maurer–Cartan scale.
pub fn su2su2_coframe_with_scale(eps: QuadNum) -> Result<Coframe> {
    let labels = LABELS.iter().map(|s| s.to_string()).collect();
    Coframe::new(labels, maurer_cartan_rules(&eps), Some(DT), eps)
}

/// Frame with the scale fixed by `dη = 2ω₁` on the standard forms.
///
/// The scale is computed, not assumed: build at `ε = 1`, read off
/// `dη = c ω₁`, and rescale to `ε = 2/c`.
pub fn su2su2_coframe() -> Result<Coframe> {
    let raw = su2su2_coframe_with_scale(QuadNum::one())?;
    let std = StandardForms::new();
    let d_eta = raw.d_fixed_t(&std.eta);
    let (m, w) = std.omega[1].iter().next().map(|(m, c)| (*m, c.clone())).expect("ω₁ is nonzero");
    let c = d_eta.get(m).try_div(&w)?;
    if d_eta != std.omega[1].scale(&c) {
        return Err(Error::Residual { what: "dη ∥ ω₁ calibration".into(), residual: d_eta.to_string() });
    }
    let c = c.as_constant().ok_or_else(|| Error::Invalid("non-constant calibration ratio".into()))?;
    let eps = QuadNum::from_int(2).checked_mul(&c.inverse()?)?;
    let frame = su2su2_coframe_with_scale(eps)?;
    let se = std.sasaki_einstein(&frame)?;
    if let Some(r) = se.sasaki_einstein_residuals().iter().find(|r| !r.is_zero()) {
        return Err(Error::Residual { what: "Sasaki–Einstein calibration".into(), residual: r.to_string() });
    }
    Ok(frame)
}

/// The homogeneous Sasaki–Einstein forms and their companions.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardForms {
    pub eta: FormExpr,
    /// `ω₀, ω₁, ω₂, ω₃`; `ω₀` is the anti-self-dual partner.
    pub omega: [FormExpr; 4],
    pub theta: FormExpr,
}

impl Default for StandardForms {
    fn default() -> Self {
        Self::new()
    }
}

impl StandardForms {
    pub fn new() -> Self {
        let c = |n, d| ScalarExpr::frac(n, d);
        let (v1, w1, v2, w2) = (e(3), e(4), e(5), e(6));
        StandardForms {
            eta: e(U_MINUS).scale(&c(4, 3)),
            omega: [
                v1.wedge(&w1).add(&v2.wedge(&w2)).scale(&c(2, 3)),
                v1.wedge(&w1).sub(&v2.wedge(&w2)).scale(&c(-2, 3)),
                v1.wedge(&v2).add(&w1.wedge(&w2)).scale(&c(2, 3)),
                v1.wedge(&w2).sub(&w1.wedge(&v2)).scale(&c(2, 3)),
            ],
            theta: e(U_PLUS).scale(&c(4, 3)),
        }
    }

    pub fn sasaki_einstein(&self, frame: &Coframe) -> Result<SU2Structure> {
        let [_, a, b, c] = self.omega.clone();
        SU2Structure::new(frame.clone(), self.eta.clone(), [a, b, c], link_mask())
    }

    /// `ω_a ∧ ω_b + 2 Q_ab v`; all sixteen vanish.
    pub fn lorentz_pairing_residuals(&self) -> Vec<FormExpr> {
        let v = self.omega[1].wedge(&self.omega[1]).scale(&ScalarExpr::frac(1, 2));
        let mut out = Vec::with_capacity(16);
        for a in 0..4 {
            for b in 0..4 {
                let q = if a == b { LORENTZ_Q[a] } else { 0 };
                out.push(self.omega[a].wedge(&self.omega[b]).add(&v.scale_int(2 * q)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ParamEnv;
    use crate::structures::check_su2_structure;

    #[test]
    fn calibrated_scale_is_one_half() {
        let f = su2su2_coframe().unwrap();
        assert_eq!(*f.mc_scale(), QuadNum::from_frac(1, 2));
        assert!(f.d_squared_residuals().is_empty());
    }

    #[test]
    fn unit_scale_breaks_sasaki_einstein() {
        let f = su2su2_coframe_with_scale(QuadNum::one()).unwrap();
        let se = StandardForms::new().sasaki_einstein(&f).unwrap();
        assert!(!se.sasaki_einstein_residuals()[0].is_zero());
    }

    #[test]
    fn standard_structure_axioms() {
        let f = su2su2_coframe().unwrap();
        let std = StandardForms::new();
        let se = std.sasaki_einstein(&f).unwrap();
        let rep = check_su2_structure(&se, 1.0, &ParamEnv::new()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failed());
        let g = se.g_h().unwrap();
        assert_eq!(g[3][3], ScalarExpr::frac(2, 3));
        assert!(g[3][4].is_zero());
        assert!(std.lorentz_pairing_residuals().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn companion_forms() {
        let f = su2su2_coframe().unwrap();
        let std = StandardForms::new();
        assert_eq!(f.d_fixed_t(&std.theta), std.omega[0].scale_int(-2));
    }
}
