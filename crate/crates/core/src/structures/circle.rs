//! Circle-invariant G2-structures `φ = tθ∧ω + ReΥ` over a basic SU(3)-structure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{indices_of, FormExpr, MetricExpr};
use crate::scalar::ScalarExpr;
use crate::structures::g2::{G2Structure, Torsion, TorsionG2};
use crate::structures::su3::{SU3Structure, SU3Torsion, ThetaCurvature};

/// Basic data of a circle-invariant G2-structure.
#[derive(Clone, Debug)]
pub struct CircleBundleData {
    /// Orbit length `t = |ξ|`.
    pub t: ScalarExpr,
    pub theta: FormExpr,
    pub xi: Vec<ScalarExpr>,
    pub su3: SU3Structure,
}

impl CircleBundleData {
    pub fn new(su3: SU3Structure, theta: FormExpr, t: ScalarExpr, xi: Vec<ScalarExpr>) -> Result<Self> {
        let one = theta.contract(&xi)?.get(0);
        if !one.is_one() {
            return Err(Error::Residual { what: "θ(ξ) − 1".into(), residual: (&one - &ScalarExpr::one()).to_string() });
        }
        for a in [&su3.omega, &su3.re_ups, &su3.im_ups] {
            let r = a.contract(&xi)?;
            if !r.is_zero() {
                return Err(Error::NotBasic(format!("ξ⌟ of a basic form is {r}")));
            }
        }
        Ok(CircleBundleData { t, theta, xi, su3 })
    }

    pub fn dim(&self) -> usize {
        self.su3.dim()
    }

    pub fn t_theta(&self) -> FormExpr {
        self.theta.scale(&self.t)
    }

    pub fn phi(&self) -> FormExpr {
        self.t_theta().wedge(&self.su3.omega).add(&self.su3.re_ups)
    }

    /// `½ω² − tθ∧ImΥ`.
    pub fn psi(&self) -> FormExpr {
        let w = &self.su3.omega;
        w.wedge(w).scale_expr(&ScalarExpr::frac(1, 2)).sub(&self.t_theta().wedge(&self.su3.im_ups))
    }

    /// `g_φ = g + t²θ²`, oriented by `tθ ∧ vol₆`.
    pub fn metric(&self) -> Result<MetricExpr> {
        let n = self.dim();
        let th = self.theta.one_form_coeffs();
        let t2 = self.t.pow(2);
        let mut g = self.su3.metric.matrix().to_vec();
        for (i, row) in g.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x += &(&t2 * &(&th[i] * &th[j]));
            }
        }
        let support = self.su3.support() | self.theta.support();
        let vol = self.t_theta().wedge(&self.su3.vol()).top_coeff();
        if indices_of(support).len() != 7 {
            return Err(Error::Invalid("θ must complete the basic block to seven labels".into()));
        }
        MetricExpr::with_volume(n, support, g, vol)
    }

    pub fn g2(&self) -> Result<G2Structure> {
        G2Structure::with_psi(self.su3.frame.clone(), self.phi(), self.psi(), self.metric()?)
    }

    pub fn dtheta(&self) -> FormExpr {
        self.su3.frame.d(&self.theta)
    }

    /// `d ln t` as a basic 1-form.
    pub fn dlog_t(&self) -> Result<FormExpr> {
        let n = self.dim();
        Ok(self.su3.frame.d(&FormExpr::scalar(n, self.t.clone())).scale(&self.t.inverse()?))
    }
}

/// Residuals of the four closed/co-closed conditions.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClosedCoclosed {
    pub closed: bool,
    pub coclosed: bool,
    /// `(condition, residual form)` in the order `d(tω)`, `dReΥ + t dθ∧ω`,
    /// `d(t ImΥ)`, `dω∧ω − t dθ∧ImΥ`.
    pub residuals: Vec<(String, String)>,
}

pub fn check_closed_coclosed(b: &CircleBundleData) -> Result<ClosedCoclosed> {
    let f = &b.su3.frame;
    let s = &b.su3;
    let dth = b.dtheta();
    let r = [
        ("d(tω) = 0", f.d(&s.omega.scale(&b.t))),
        ("dReΥ = −t dθ∧ω", f.d(&s.re_ups).add(&dth.wedge(&s.omega).scale(&b.t))),
        ("d(t ImΥ) = 0", f.d(&s.im_ups.scale(&b.t))),
        ("dω∧ω = t dθ∧ImΥ", f.d(&s.omega).wedge(&s.omega).sub(&dth.wedge(&s.im_ups).scale(&b.t))),
    ];
    Ok(ClosedCoclosed {
        closed: r[0].1.is_zero() && r[1].1.is_zero(),
        coclosed: r[2].1.is_zero() && r[3].1.is_zero(),
        residuals: r.iter().map(|(n, f)| (n.to_string(), f.to_string())).collect(),
    })
}

/// Numeric coefficients of the invariant torsion formula.
///
/// `y[0]`, `y[1]`, `y[2]` are the 1-forms entering `τ₇`, `τ₁₄`, `τ₂₇`, as
/// combinations `a·tJX + b·υ₆ + c·υ̂₆ + e·d ln t`; the other fields multiply
/// the named terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantCoefficients {
    pub tau1_lambda: (i64, i64),
    pub tau1_v1hat: (i64, i64),
    pub y: [[(i64, i64); 4]; 3],
    pub tau7_v1_theta: (i64, i64),
    pub tau7_y1: (i64, i64),
    pub tau14_theta_jy2: (i64, i64),
    pub tau14_v1_omega: (i64, i64),
    pub tau14_y2_re: (i64, i64),
    pub tau14_v8hat: (i64, i64),
    pub tau27_theta_lambda_omega: (i64, i64),
    pub tau27_theta_v1hat_omega: (i64, i64),
    pub tau27_theta_jy3_re: (i64, i64),
    pub tau27_theta_v8: (i64, i64),
    pub tau27_theta_sigma: (i64, i64),
    pub tau27_jy3_omega: (i64, i64),
    pub tau27_v1hat_re: (i64, i64),
    pub tau27_lambda_re: (i64, i64),
    pub tau27_star_v12: (i64, i64),
}

impl InvariantCoefficients {
    /// The formula as printed in the literature. It disagrees with direct
    /// extraction; kept for comparison.
    pub fn printed() -> Self {
        InvariantCoefficients {
            tau1_lambda: (6, 7),
            tau1_v1hat: (0, 1),
            y: [
                [(1, 1), (1, 1), (-1, 1), (1, 1)],
                [(-2, 1), (2, 1), (1, 1), (1, 1)],
                [(1, 1), (-1, 1), (-1, 1), (-1, 1)],
            ],
            tau7_v1_theta: (1, 1),
            tau7_y1: (-1, 6),
            tau14_theta_jy2: (2, 3),
            tau14_v1_omega: (-8, 1),
            tau14_y2_re: (1, 3),
            tau14_v8hat: (-1, 1),
            tau27_theta_lambda_omega: (8, 7),
            tau27_theta_v1hat_omega: (4, 1),
            tau27_theta_jy3_re: (-1, 2),
            tau27_theta_v8: (-1, 1),
            tau27_theta_sigma: (-1, 1),
            tau27_jy3_omega: (-1, 2),
            tau27_v1hat_re: (-3, 1),
            tau27_lambda_re: (-6, 7),
            tau27_star_v12: (1, 1),
        }
    }

    /// Coefficients agreeing with direct extraction for the SU(3) torsion
    /// conventions of [`su3_torsion`](crate::structures::su3_torsion).
    pub fn corrected() -> Self {
        InvariantCoefficients {
            tau1_v1hat: (24, 7),
            y: [
                [(1, 1), (-1, 1), (-1, 1), (-1, 1)],
                [(2, 1), (-2, 1), (1, 1), (1, 1)],
                [(1, 1), (1, 1), (-1, 1), (1, 1)],
            ],
            tau7_v1_theta: (-1, 1),
            tau14_v1_omega: (0, 1),
            tau27_theta_v1hat_omega: (4, 7),
            tau27_v1hat_re: (-3, 7),
            tau27_star_v12: (-1, 1),
            ..Self::printed()
        }
    }

    /// Field names whose values differ between two coefficient sets.
    pub fn diff(&self, other: &Self) -> Vec<String> {
        let a = serde_json::to_value(self).unwrap_or_default();
        let b = serde_json::to_value(other).unwrap_or_default();
        let (Some(a), Some(b)) = (a.as_object(), b.as_object()) else { return Vec::new() };
        a.iter().filter(|(k, v)| b.get(*k) != Some(v)).map(|(k, _)| k.clone()).collect()
    }
}

fn c(p: (i64, i64)) -> ScalarExpr {
    ScalarExpr::frac(p.0, p.1)
}

/// Evaluate the invariant formula for `(τ₁, τ₇, τ₁₄, τ₂₇)` from basic data.
pub fn invariant_torsion_formula(
    b: &CircleBundleData,
    curv: &ThetaCurvature,
    st: &SU3Torsion,
    coeffs: &InvariantCoefficients,
) -> Result<TorsionG2> {
    let s = &b.su3;
    let t = &b.t;
    let tt = b.t_theta();
    let jx = s.metric.flat(&s.j_vec(&curv.x));
    let tjx = jx.scale(t);
    let dlog = b.dlog_t()?;
    let ys: Vec<FormExpr> = coeffs
        .y
        .iter()
        .map(|r| {
            tjx.scale(&c(r[0]))
                .add(&st.v6.scale(&c(r[1])))
                .add(&st.v6hat.scale(&c(r[2])))
                .add(&dlog.scale(&c(r[3])))
        })
        .collect();
    let contract_re = |y: &FormExpr| s.re_ups.contract(&s.metric.sharp(y));
    let t_lambda = t * &curv.lambda;

    let tau1 = &(&c(coeffs.tau1_lambda) * &t_lambda) + &(&c(coeffs.tau1_v1hat) * &st.v1hat);
    let tau7 = tt
        .scale(&(&st.v1 * &c(coeffs.tau7_v1_theta)))
        .add(&ys[0].scale(&c(coeffs.tau7_y1)));
    let tau14 = tt
        .wedge(&s.j_form(&ys[1]))
        .scale(&c(coeffs.tau14_theta_jy2))
        .add(&s.omega.scale(&(&st.v1 * &c(coeffs.tau14_v1_omega))))
        .add(&contract_re(&ys[1])?.scale(&c(coeffs.tau14_y2_re)))
        .add(&st.v8hat.scale(&c(coeffs.tau14_v8hat)));
    let jy3 = s.j_form(&ys[2]);
    let inner = s
        .omega
        .scale(&(&(&t_lambda * &c(coeffs.tau27_theta_lambda_omega)) + &(&st.v1hat * &c(coeffs.tau27_theta_v1hat_omega))))
        .add(&contract_re(&jy3)?.scale(&c(coeffs.tau27_theta_jy3_re)))
        .add(&st.v8.scale(&c(coeffs.tau27_theta_v8)))
        .add(&curv.sigma.scale(&(t * &c(coeffs.tau27_theta_sigma))));
    let tau27 = tt
        .wedge(&inner)
        .add(&jy3.wedge(&s.omega).scale(&c(coeffs.tau27_jy3_omega)))
        .add(&s.re_ups.scale(&(&(&st.v1hat * &c(coeffs.tau27_v1hat_re)) + &(&t_lambda * &c(coeffs.tau27_lambda_re)))))
        .add(&s.star(&st.v12)?.scale(&c(coeffs.tau27_star_v12)));
    Ok(Torsion { tau1, tau7, tau14, tau27 })
}

/// Components on which two multiplets differ.
pub fn torsion_mismatch(a: &TorsionG2, b: &TorsionG2) -> Vec<&'static str> {
    let d = a.sub(b);
    let mut out = Vec::new();
    if !d.tau1.is_zero() {
        out.push("tau1");
    }
    if !d.tau7.is_zero() {
        out.push("tau7");
    }
    if !d.tau14.is_zero() {
        out.push("tau14");
    }
    if !d.tau27.is_zero() {
        out.push("tau27");
    }
    out
}
