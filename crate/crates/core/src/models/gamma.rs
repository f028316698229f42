//! The co-closed family `θ_γ = γt⁻³η^se + kθ^se` over the nearly-Kähler link.

use serde::Serialize;

use crate::error::Result;
use crate::exterior::FormExpr;
use crate::models::ansatz::InvariantAnsatz;
use crate::models::constraints::{derive_constraints, equation_residuals, Condition};
use crate::models::solutions::bryant_salamon_standard;
use crate::models::su2su2::{su2su2_coframe, StandardForms};
use crate::scalar::{QuadNum, ScalarExpr};
use crate::structures::G2Structure;

/// Parameter name of the family.
pub const GAMMA: &str = "gamma";

/// Bryant–Salamon data with `α = γt⁻³`.
pub fn gamma_ansatz(gamma: &ScalarExpr, sign: i32) -> Result<InvariantAnsatz> {
    let mut a = bryant_salamon_standard(sign)?;
    a.alpha = gamma * &ScalarExpr::t_pow(-3);
    Ok(a)
}

/// `φ_γ` with `k = +½`.
pub fn gamma_family(gamma: &ScalarExpr) -> Result<G2Structure> {
    let std = StandardForms::new();
    gamma_ansatz(gamma, 1)?.g2(&su2su2_coframe()?, &std)
}

/// `2√3/3`, the coefficient in `φ_γ − φ₀ = (2√3γ/3)ω₁∧η`.
pub fn difference_coeff() -> QuadNum {
    QuadNum::surd_frac(2, 3)
}

/// Status of each equation set on the family, and of the difference forms.
#[derive(Clone, Debug, Serialize)]
pub struct GammaChecks {
    pub gamma: String,
    pub static_coclosed: bool,
    pub evolution_coclosed: bool,
    pub evolution_closed: bool,
    /// Not part of the family's defining equations; fails for `γ ≠ 0`.
    pub static_closed: bool,
    pub dpsi_zero: bool,
    pub dphi_zero: bool,
    /// `−2λ/μ` at the Bryant–Salamon values.
    pub ode_rate: String,
    pub ode_reduces: bool,
    /// The closed evolution equation with symbolic `α` is equivalent to `tα̇ + 3α = 0`.
    pub ode_from_evolution: bool,
    pub alpha_solves: bool,
    pub phi_difference: bool,
    /// `ψ_γ − ψ₀ = d((2√3γ/3) ln t · ω₃∧η)`.
    pub psi_difference_log_potential: bool,
    /// `ψ_γ − ψ₀ = d((2√3γ/3) t · ω₃∧η)`.
    pub psi_difference_linear_potential: bool,
}

fn all_zero(v: &[(&'static str, FormExpr)], prefix: &str) -> bool {
    v.iter().filter(|(s, _)| s.starts_with(prefix)).all(|(_, f)| f.is_zero())
}

/// `ψ_γ − ψ₀` and `φ_γ − φ₀` on the `k = +½` branch.
pub fn differences(gamma: &ScalarExpr) -> Result<(FormExpr, FormExpr)> {
    let g = gamma_family(gamma)?;
    let g0 = gamma_family(&ScalarExpr::zero())?;
    Ok((g.phi.sub(&g0.phi), g.psi.sub(&g0.psi)))
}

pub fn gamma_checks(gamma: &ScalarExpr) -> Result<GammaChecks> {
    let std = StandardForms::new();
    let base = su2su2_coframe()?;
    let a = gamma_ansatz(gamma, 1)?;
    let closed = equation_residuals(Condition::Closed, &a, &base, &std);
    let coclosed = equation_residuals(Condition::Coclosed, &a, &base, &std);
    let g = a.g2(&base, &std)?;

    let rate = (&(&a.lambda * &a.mu.inverse()?) * &ScalarExpr::int(-2))
        .as_constant()
        .ok_or_else(|| crate::Error::Invalid("λ/μ is not constant".into()))?;
    let ode = |alpha: &ScalarExpr| &alpha.deriv() - &(&(alpha * &ScalarExpr::t_pow(-1)) * &ScalarExpr::int(-3));

    // α free, everything else fixed at Bryant–Salamon
    let mut sym = a.clone();
    sym.alpha = ScalarExpr::param("alpha");
    let frame = InvariantAnsatz::frame(&base);
    let rels: Vec<ScalarExpr> = derive_constraints(Condition::Closed, &sym, &frame, &std)
        .into_iter()
        .filter(|r| r.source.starts_with("evolution"))
        .map(|r| r.expr)
        .collect();
    let target = &(&ScalarExpr::param("alphadot") * &ScalarExpr::t()) + &ScalarExpr::param("alpha").scale(&QuadNum::from_int(3));
    let ode_from_evolution = rels.len() == 1 && rels[0] == target.monic();

    let (dphi, dpsi) = differences(gamma)?;
    let su2 = a.su2(&base, &std)?;
    let [w1, _, w3] = &su2.omegas;
    let c = gamma.scale(&difference_coeff());
    let w3eta = w3.wedge(&su2.eta);
    let log_pot = base.d(&w3eta.scale(&(&c * &ScalarExpr::log_t())));
    let lin_pot = base.d(&w3eta.scale(&(&c * &ScalarExpr::t())));

    Ok(GammaChecks {
        gamma: gamma.to_string(),
        static_coclosed: all_zero(&coclosed, "static"),
        evolution_coclosed: all_zero(&coclosed, "evolution"),
        evolution_closed: all_zero(&closed, "evolution"),
        static_closed: all_zero(&closed, "static"),
        dpsi_zero: g.dpsi().is_zero(),
        dphi_zero: g.dphi().is_zero(),
        ode_rate: rate.to_string(),
        ode_reduces: rate == QuadNum::from_int(-3),
        ode_from_evolution,
        alpha_solves: ode(&a.alpha).is_zero(),
        phi_difference: dphi.sub(&w1.wedge(&su2.eta).scale(&c)).is_zero(),
        psi_difference_log_potential: dpsi.sub(&log_pot).is_zero(),
        psi_difference_linear_potential: dpsi.sub(&lin_pot).is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_family_checks() {
        let c = gamma_checks(&ScalarExpr::param(GAMMA)).unwrap();
        assert!(c.static_coclosed && c.evolution_coclosed && c.evolution_closed);
        assert!(!c.static_closed);
        assert!(c.dpsi_zero && !c.dphi_zero);
        assert!(c.ode_reduces && c.ode_from_evolution && c.alpha_solves);
        assert!(c.phi_difference);
        assert!(!c.psi_difference_log_potential);
        assert!(c.psi_difference_linear_potential);
    }

    #[test]
    fn gamma_zero_is_torsion_free() {
        let g = gamma_family(&ScalarExpr::zero()).unwrap();
        assert!(g.dphi().is_zero() && g.dpsi().is_zero());
    }
}
