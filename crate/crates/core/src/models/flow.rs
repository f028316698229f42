//! Hypo-evolution `dη = ∂ₜω₁`, `dω₂ = −∂ₜ(ω₃∧η)`, `dω₃ = ∂ₜ(ω₂∧η)` in the invariant basis.
//!
//! The state is `(B₁, C₂, C₃)` with `ω₁ = Σ B₁ⱼ ω_j^se` and `ωᵢ∧η = Σ Cᵢⱼ ω_j^se∧η^se`;
//! `η = aη^se` is recovered from `ω₂² = ω₁²`, i.e. `a² = ⟨C₂, C₂⟩_Q / ⟨B₁, B₁⟩_Q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{Coframe, FormExpr};
use crate::models::su2su2::{link_mask, StandardForms, LORENTZ_Q};
use crate::scalar::ParamEnv;

/// One sample of a trajectory.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub step: f64,
    /// `η = eta · η^se`.
    pub eta: f64,
    /// Rows `ω₁, ω₂, ω₃` in the basis `ω_j^se`.
    pub omegas: [[f64; 4]; 3],
    /// `|dω₁|, |d(ω₂∧η)|, |d(ω₃∧η)|` as largest coefficients.
    pub residuals: [f64; 3],
}

/// The linear data of the evolution on a fixed invariant frame.
#[derive(Clone, Debug)]
pub struct HypoSystem {
    /// `dη^se = Σ e_j ω_j^se`.
    d_eta: [f64; 4],
    /// `dω_j^se = Σ_k D_jk ω_k^se∧η^se`.
    d_omega: [[f64; 4]; 4],
    /// `d(ω_j^se)` and `d(ω_j^se∧η^se)` for the hypo residuals.
    d2: Vec<crate::exterior::NumForm>,
    d3: Vec<crate::exterior::NumForm>,
    /// Step is rejected once a hypo residual exceeds this.
    pub threshold: f64,
}

fn q(j: usize) -> f64 {
    LORENTZ_Q[j] as f64
}

fn pair(x: &[f64; 4], y: &[f64; 4]) -> f64 {
    (0..4).map(|j| q(j) * x[j] * y[j]).sum()
}

/// Coefficients of `beta` against `basis` using `basis_j ∧ dual_k = δ_jk n_j`,
/// with the remainder checked to vanish.
fn coords(beta: &FormExpr, basis: &[FormExpr; 4], dual: &[FormExpr; 4]) -> Result<[f64; 4]> {
    let env = ParamEnv::new();
    let mut c = [0.0; 4];
    let mut rest = beta.clone();
    for j in 0..4 {
        let n = basis[j].wedge(&dual[j]).get(link_mask());
        let x = beta.wedge(&dual[j]).get(link_mask()).try_div(&n)?;
        rest = rest.sub(&basis[j].scale(&x));
        c[j] = x.eval(1.0, &env)?;
    }
    if !rest.is_zero() {
        return Err(Error::Invalid(format!("{beta} leaves the invariant span: {rest}")));
    }
    Ok(c)
}

impl HypoSystem {
    pub fn new(frame: &Coframe, std: &StandardForms) -> Result<Self> {
        let d = |a: &FormExpr| frame.d_fixed_t(a);
        let w = &std.omega;
        let w_eta: [FormExpr; 4] = std::array::from_fn(|j| w[j].wedge(&std.eta));
        let d_eta = coords(&d(&std.eta), w, &w_eta)?;
        let mut d_omega = [[0.0; 4]; 4];
        for j in 0..4 {
            d_omega[j] = coords(&d(&w[j]), &w_eta, w)?;
        }
        let env = ParamEnv::new();
        Ok(HypoSystem {
            d_eta,
            d_omega,
            d2: w.iter().map(|x| d(x).eval(1.0, &env)).collect::<Result<_>>()?,
            d3: w_eta.iter().map(|x| d(x).eval(1.0, &env)).collect::<Result<_>>()?,
            threshold: 1e-6,
        })
    }

    fn eta_of(&self, y: &[[f64; 4]; 3]) -> Result<f64> {
        let r = pair(&y[1], &y[1]) / pair(&y[0], &y[0]);
        if !(r > 0.0) {
            return Err(Error::Invalid("ω₁ and ω₂∧η lost the SU(2) normalization".into()));
        }
        Ok(r.sqrt())
    }

    /// `ẏ` for `y = (B₁, C₂, C₃)`.
    fn rhs(&self, y: &[[f64; 4]; 3]) -> Result<[[f64; 4]; 3]> {
        let a = self.eta_of(y)?;
        let mut out = [[0.0; 4]; 3];
        for k in 0..4 {
            out[0][k] = a * self.d_eta[k];
            for j in 0..4 {
                // ∂ₜ(ω₂∧η) = dω₃, ∂ₜ(ω₃∧η) = −dω₂
                out[1][k] += y[2][j] / a * self.d_omega[j][k];
                out[2][k] -= y[1][j] / a * self.d_omega[j][k];
            }
        }
        Ok(out)
    }

    fn residuals(&self, y: &[[f64; 4]; 3]) -> [f64; 3] {
        let comb = |forms: &[crate::exterior::NumForm], c: &[f64; 4]| {
            let mut acc = forms[0].scale(&c[0]);
            for j in 1..4 {
                acc = acc.add(&forms[j].scale(&c[j]));
            }
            acc.max_abs()
        };
        [comb(&self.d2, &y[0]), comb(&self.d3, &y[1]), comb(&self.d3, &y[2])]
    }

    fn state(&self, t: f64, step: f64, y: &[[f64; 4]; 3]) -> Result<FlowState> {
        let a = self.eta_of(y)?;
        let omegas = [y[0], y[1].map(|c| c / a), y[2].map(|c| c / a)];
        Ok(FlowState { t, step, eta: a, omegas, residuals: self.residuals(y) })
    }

    /// Integrate from `(eta, omegas)` at `t0` to `t1` with the classical fourth-order
    /// Runge–Kutta method; the last step is shortened to land on `t1`.
    pub fn flow(&self, eta: f64, omegas: [[f64; 4]; 3], t0: f64, t1: f64, step: f64) -> Result<Vec<FlowState>> {
        if !(step > 0.0) || t1 < t0 {
            return Err(Error::Invalid("need step > 0 and t1 ≥ t0".into()));
        }
        let mut y = [omegas[0], omegas[1].map(|c| c * eta), omegas[2].map(|c| c * eta)];
        let mut t = t0;
        let mut out = vec![self.state(t, step, &y)?];
        let axpy = |y: &[[f64; 4]; 3], h: f64, k: &[[f64; 4]; 3]| -> [[f64; 4]; 3] {
            std::array::from_fn(|i| std::array::from_fn(|j| y[i][j] + h * k[i][j]))
        };
        while t1 - t > 1e-12 * step {
            let h = step.min(t1 - t);
            let k1 = self.rhs(&y)?;
            let k2 = self.rhs(&axpy(&y, h / 2.0, &k1))?;
            let k3 = self.rhs(&axpy(&y, h / 2.0, &k2))?;
            let k4 = self.rhs(&axpy(&y, h, &k3))?;
            y = std::array::from_fn(|i| {
                std::array::from_fn(|j| y[i][j] + h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]))
            });
            t += h;
            let s = self.state(t, h, &y)?;
            if let Some(r) = s.residuals.iter().find(|r| **r > self.threshold) {
                return Err(Error::StepRejected { t, residual: *r });
            }
            out.push(s);
        }
        Ok(out)
    }
}

/// Largest deviation of a state from the cone `(tη^se, t²ω_i^se)` started at `(t0 η^se, t0² ω_i^se)`.
pub fn cone_error(s: &FlowState) -> f64 {
    let mut e = (s.eta - s.t).abs();
    for (i, row) in s.omegas.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            let expect = if j == i + 1 { s.t * s.t } else { 0.0 };
            e = e.max((c - expect).abs());
        }
    }
    e
}

/// Sasaki–Einstein data at `t0`: `η = t0 η^se`, `ωᵢ = t0² ω_i^se`.
pub fn sasaki_einstein_initial(t0: f64) -> (f64, [[f64; 4]; 3]) {
    let mut w = [[0.0; 4]; 3];
    for (i, row) in w.iter_mut().enumerate() {
        row[i + 1] = t0 * t0;
    }
    (t0, w)
}

/// `t, eta, ω₁₀ … ω₃₃, residuals…`, one row per state.
pub fn trajectory_csv(traj: &[FlowState]) -> String {
    let mut s = String::from("t,eta");
    for i in 1..=3 {
        for j in 0..4 {
            s += &format!(",omega{i}_{j}");
        }
    }
    s += ",res_domega1,res_d_omega2_eta,res_d_omega3_eta\n";
    for st in traj {
        s += &format!("{:e},{:e}", st.t, st.eta);
        for row in &st.omegas {
            for c in row {
                s += &format!(",{c:e}");
            }
        }
        for r in &st.residuals {
            s += &format!(",{r:e}");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::su2su2::{su2su2_coframe, su2su2_coframe_with_scale};
    use crate::scalar::QuadNum;

    #[test]
    fn sasaki_einstein_flows_to_the_cone() {
        let sys = HypoSystem::new(&su2su2_coframe().unwrap(), &StandardForms::new()).unwrap();
        let (eta, w) = sasaki_einstein_initial(1.0);
        let traj = sys.flow(eta, w, 1.0, 2.0, 1e-2).unwrap();
        let last = traj.last().unwrap();
        assert!((last.t - 2.0).abs() < 1e-12);
        assert!(cone_error(last) < 1e-8, "{}", cone_error(last));
    }

    #[test]
    fn flat_frame_is_stationary() {
        let sys = HypoSystem::new(&su2su2_coframe_with_scale(QuadNum::zero()).unwrap(), &StandardForms::new()).unwrap();
        let (eta, w) = sasaki_einstein_initial(1.0);
        let traj = sys.flow(eta, w, 1.0, 2.0, 0.25).unwrap();
        assert_eq!(traj.last().unwrap().omegas, w);
        assert_eq!(traj.last().unwrap().eta, eta);
    }
}
