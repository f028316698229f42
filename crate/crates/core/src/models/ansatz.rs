//! The `SU(2)²`-invariant ansatz over the cone `ℝ⁺ × SU(2)²/ΔU(1)`.

use crate::error::{Error, Result};
use crate::exterior::{Coframe, FormExpr, MetricExpr};
use crate::models::su2su2::{basic_mask, link_mask, StandardForms, LORENTZ_Q, DT, U_PLUS};
use crate::scalar::ScalarExpr;
use crate::structures::{CircleBundleData, G2Structure, SU2Structure, SU3Structure};

/// `η = λη⁰`, `ωᵢ = μ Σⱼ A_ij ω⁰ⱼ` (rows 1..3 of `A`), `θ = αη⁰ + kθ⁰`.
///
/// Row 0 of `A` does not enter the forms; it completes `A` to a Lorentz matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantAnsatz {
    pub lambda: ScalarExpr,
    pub mu: ScalarExpr,
    pub a: [[ScalarExpr; 4]; 4],
    pub alpha: ScalarExpr,
    pub k: ScalarExpr,
}

/// Name of the parameter holding `A_ij`.
pub fn a_name(i: usize, j: usize) -> String {
    format!("A{i}{j}")
}

impl InvariantAnsatz {
    /// Every quantity a free parameter; `alpha` varies with `t` at rate `alphadot`.
    pub fn symbolic() -> Self {
        let p = ScalarExpr::param;
        InvariantAnsatz {
            lambda: p("lambda"),
            mu: p("mu"),
            a: std::array::from_fn(|i| std::array::from_fn(|j| p(&a_name(i, j)))),
            alpha: p("alpha"),
            k: p("k"),
        }
    }

    /// The frame on which `alpha` is differentiable.
    pub fn frame(base: &Coframe) -> Coframe {
        base.clone().with_rate("alpha", ScalarExpr::param("alphadot"))
    }

    /// Entries of `AᵀQA − Q` and `AQAᵀ − Q` on and above the diagonal.
    pub fn lorentz_residuals(&self) -> Vec<ScalarExpr> {
        let q = |i: usize| ScalarExpr::int(LORENTZ_Q[i]);
        let mut out = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                let mut left = ScalarExpr::zero();
                let mut right = ScalarExpr::zero();
                for m in 0..4 {
                    left += &(&q(m) * &(&self.a[m][i] * &self.a[m][j]));
                    right += &(&q(m) * &(&self.a[i][m] * &self.a[j][m]));
                }
                if i == j {
                    left -= &q(i);
                    right -= &q(i);
                }
                out.push(left);
                out.push(right);
            }
        }
        out
    }

    /// Entries of `AQAᵀ − Q` on and above the diagonal; for a square matrix
    /// these generate the same conditions as `AᵀQA = Q`.
    pub fn lorentz_relations(&self) -> Vec<ScalarExpr> {
        self.lorentz_residuals().into_iter().skip(1).step_by(2).collect()
    }

    pub fn is_lorentz(&self) -> bool {
        self.lorentz_residuals().iter().all(|r| r.is_zero())
    }

    pub fn eta(&self, std: &StandardForms) -> FormExpr {
        std.eta.scale(&self.lambda)
    }

    pub fn omegas(&self, std: &StandardForms) -> [FormExpr; 3] {
        std::array::from_fn(|i| {
            let row = &self.a[i + 1];
            let mut w = FormExpr::zero(std.eta.dim(), 2);
            for (c, o) in row.iter().zip(&std.omega) {
                w = w.add(&o.scale(c));
            }
            w.scale(&self.mu)
        })
    }

    pub fn theta(&self, std: &StandardForms) -> FormExpr {
        std.eta.scale(&self.alpha).add(&std.theta.scale(&self.k))
    }

    /// `2(αω⁰₁ − kω⁰₀) + α̇ dt∧η⁰`, the expected value of `dθ`.
    pub fn dtheta_expected(&self, frame: &Coframe, std: &StandardForms) -> FormExpr {
        let dt = FormExpr::basis(frame.dim(), &[DT]);
        let alphadot = self.alpha.deriv_with(frame.rates());
        std.omega[1]
            .scale(&self.alpha)
            .sub(&std.omega[0].scale(&self.k))
            .scale_int(2)
            .add(&dt.wedge(&std.eta).scale(&alphadot))
    }

    pub fn su2(&self, frame: &Coframe, std: &StandardForms) -> Result<SU2Structure> {
        SU2Structure::new(frame.clone(), self.eta(std), self.omegas(std), link_mask())
    }

    /// The cone structure `ω = t dt∧η + t²ω₁`, `Υ = t²(ω₂ + iω₃)∧(dt + itη)`.
    pub fn cone_su3(&self, frame: &Coframe, std: &StandardForms) -> Result<SU3Structure> {
        let su2 = self.su2(frame, std)?;
        let n = frame.dim();
        let t = ScalarExpr::t();
        let t2 = t.pow(2);
        let dt = FormExpr::basis(n, &[DT]);
        let eta = &su2.eta;
        let [w1, w2, w3] = &su2.omegas;
        let omega = dt.wedge(eta).scale(&t).add(&w1.scale(&t2));
        let te = eta.scale(&t);
        let re = w2.wedge(&dt).sub(&w3.wedge(&te)).scale(&t2);
        let im = w3.wedge(&dt).add(&w2.wedge(&te)).scale(&t2);
        let g5 = su2.metric()?;
        let mut g = vec![vec![ScalarExpr::zero(); n]; n];
        for (i, row) in g5.matrix().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                g[i][j] = &t2 * x;
            }
        }
        g[DT][DT] = ScalarExpr::one();
        let vol = omega.pow_wedge(3).scale(&ScalarExpr::frac(1, 6)).top_coeff();
        let metric = MetricExpr::with_volume(n, basic_mask(), g, vol)?;
        SU3Structure::new(frame.clone(), omega, re, im, metric)
    }

    /// `ξ = (3/4k) U₊`, the generator of the circle action.
    pub fn xi(&self, n: usize) -> Result<Vec<ScalarExpr>> {
        let mut xi = vec![ScalarExpr::zero(); n];
        xi[U_PLUS] = self.k.inverse()?.scale(&crate::scalar::QuadNum::from_frac(3, 4));
        Ok(xi)
    }

    pub fn circle_bundle(&self, frame: &Coframe, std: &StandardForms) -> Result<CircleBundleData> {
        let su3 = self.cone_su3(frame, std)?;
        let xi = self.xi(frame.dim())?;
        CircleBundleData::new(su3, self.theta(std), ScalarExpr::t(), xi)
    }

    pub fn g2(&self, frame: &Coframe, std: &StandardForms) -> Result<G2Structure> {
        if !self.is_lorentz() {
            return Err(Error::Lorentz(format!("{:?}", self.lorentz_residuals().iter().find(|r| !r.is_zero()))));
        }
        self.circle_bundle(frame, std)?.g2()
    }
}
