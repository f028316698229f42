//! G2-structures and their torsion multiplet.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{phi_bilinear, Coeff, Coframe, Form, FormExpr, Metric, MetricExpr, NumForm, NumMetric};
use crate::scalar::{ParamEnv, QuadNum, ScalarExpr};

fn frac<C: Coeff>(n: i64, d: i64) -> C {
    C::from_quad(&QuadNum::from_frac(n, d))
}

/// `(τ₁, τ₇, τ₁₄, τ₂₇)` with `dφ = τ₁ψ + 3τ₇∧φ + ∗τ₂₇` and `dψ = 4τ₇∧ψ + ∗τ₁₄`.
#[derive(Clone, Debug, PartialEq)]
pub struct Torsion<C: Coeff> {
    pub tau1: C,
    pub tau7: Form<C>,
    pub tau14: Form<C>,
    pub tau27: Form<C>,
}

pub type TorsionG2 = Torsion<ScalarExpr>;
pub type NumTorsion = Torsion<f64>;

impl<C: Coeff> Torsion<C> {
    pub fn is_zero(&self) -> bool {
        self.tau1.is_zero() && self.tau7.is_zero() && self.tau14.is_zero() && self.tau27.is_zero()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Torsion {
            tau1: self.tau1.sub(&other.tau1),
            tau7: self.tau7.sub(&other.tau7),
            tau14: self.tau14.sub(&other.tau14),
            tau27: self.tau27.sub(&other.tau27),
        }
    }

    /// Squared pointwise norms `(|τ₁|², |τ₇|², |τ₁₄|², |τ₂₇|²)`.
    pub fn norms_sq(&self, g: &Metric<C>) -> Result<[C; 4]> {
        Ok([
            self.tau1.mul(&self.tau1),
            g.norm_sq(&self.tau7)?,
            g.norm_sq(&self.tau14)?,
            g.norm_sq(&self.tau27)?,
        ])
    }
}

impl TorsionG2 {
    pub fn eval(&self, t: f64, env: &ParamEnv) -> Result<NumTorsion> {
        Ok(Torsion {
            tau1: self.tau1.eval(t, env)?,
            tau7: self.tau7.eval(t, env)?,
            tau14: self.tau14.eval(t, env)?,
            tau27: self.tau27.eval(t, env)?,
        })
    }

    pub fn report(&self, g: &MetricExpr) -> Result<Vec<TorsionEntry>> {
        let norms = self.norms_sq(g)?;
        let exprs = [self.tau1.to_string(), self.tau7.to_string(), self.tau14.to_string(), self.tau27.to_string()];
        let zero = [self.tau1.is_zero(), self.tau7.is_zero(), self.tau14.is_zero(), self.tau27.is_zero()];
        Ok(["tau1", "tau7", "tau14", "tau27"]
            .iter()
            .enumerate()
            .map(|(i, name)| TorsionEntry {
                component: name.to_string(),
                expression: exprs[i].clone(),
                norm_sq: norms[i].to_string(),
                is_zero: zero[i],
            })
            .collect())
    }
}

/// One row of a torsion report.
#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct TorsionEntry {
    pub component: String,
    pub expression: String,
    pub norm_sq: String,
    pub is_zero: bool,
}

/// Torsion from `φ, ψ` and their exterior derivatives.
pub fn torsion_from_derivatives<C: Coeff>(
    phi: &Form<C>,
    psi: &Form<C>,
    dphi: &Form<C>,
    dpsi: &Form<C>,
    g: &Metric<C>,
) -> Result<Torsion<C>> {
    let star = |a: &Form<C>| g.hodge(a, 1);
    let tau1 = star(&dphi.wedge(phi))?.get(0).mul(&frac(1, 7));
    let tau7 = star(&star(dphi)?.wedge(phi))?.scale(&frac(-1, 12));
    let codiff = star(dpsi)?.neg();
    let tau14 = star(&dpsi.scale_int(2).add(&codiff.wedge(phi)))?.scale(&frac(1, 3));
    let rest = dphi.sub(&psi.scale(&tau1)).sub(&tau7.wedge(phi).scale_int(3));
    let tau27 = star(&rest)?;
    Ok(Torsion { tau1, tau7, tau14, tau27 })
}

/// `(dφ − τ₁ψ − 3τ₇∧φ − ∗τ₂₇, dψ − 4τ₇∧ψ − ∗τ₁₄)`.
pub fn reassembly_residuals<C: Coeff>(
    phi: &Form<C>,
    psi: &Form<C>,
    dphi: &Form<C>,
    dpsi: &Form<C>,
    g: &Metric<C>,
    tau: &Torsion<C>,
) -> Result<(Form<C>, Form<C>)> {
    let r1 = dphi
        .sub(&psi.scale(&tau.tau1))
        .sub(&tau.tau7.wedge(phi).scale_int(3))
        .sub(&g.hodge(&tau.tau27, 1)?);
    let r2 = dpsi.sub(&tau.tau7.wedge(psi).scale_int(4)).sub(&g.hodge(&tau.tau14, 1)?);
    Ok((r1, r2))
}

/// `(τ₁₄∧φ + ∗τ₁₄, τ₂₇∧φ, τ₂₇∧ψ)`, all zero for a genuine multiplet.
pub fn membership_residuals<C: Coeff>(
    phi: &Form<C>,
    psi: &Form<C>,
    g: &Metric<C>,
    tau: &Torsion<C>,
) -> Result<[Form<C>; 3]> {
    Ok([
        tau.tau14.wedge(phi).add(&g.hodge(&tau.tau14, 1)?),
        tau.tau27.wedge(phi),
        tau.tau27.wedge(psi),
    ])
}

/// A G2-structure on a 7-label coframe with its exact metric.
///
/// The metric's volume coefficient carries the orientation induced by `φ`.
#[derive(Clone, Debug)]
pub struct G2Structure {
    pub frame: Coframe,
    pub phi: FormExpr,
    pub psi: FormExpr,
    pub metric: MetricExpr,
}

impl G2Structure {
    /// Validates `g_ij vol = (1/6)(E_i⌟φ)∧(E_j⌟φ)∧φ` and computes `ψ = ∗φ`.
    pub fn new(frame: Coframe, phi: FormExpr, metric: MetricExpr) -> Result<Self> {
        if frame.dim() != 7 || phi.dim() != 7 || phi.degree() != 3 {
            return Err(Error::Invalid("a G2-structure needs a 3-form on seven labels".into()));
        }
        let b = phi_bilinear(&phi)?;
        for (i, row) in b.iter().enumerate() {
            for (j, bij) in row.iter().enumerate() {
                let expect = &metric.matrix()[i][j] * metric.vol_coeff();
                if *bij != expect {
                    return Err(Error::Residual {
                        what: format!("metric of φ at ({i},{j})"),
                        residual: (bij - &expect).to_string(),
                    });
                }
            }
        }
        let psi = metric.hodge(&phi, 1)?;
        let s = G2Structure { frame, phi, psi, metric };
        let r = s.phi.wedge(&s.psi).sub(&s.metric.vol().scale_int(7));
        if !r.is_zero() {
            return Err(Error::Residual { what: "φ∧ψ − 7vol".into(), residual: r.to_string() });
        }
        Ok(s)
    }

    /// As [`G2Structure::new`], additionally checking a prescribed 4-form against `∗φ`.
    pub fn with_psi(frame: Coframe, phi: FormExpr, psi: FormExpr, metric: MetricExpr) -> Result<Self> {
        let s = Self::new(frame, phi, metric)?;
        let r = s.psi.sub(&psi);
        if !r.is_zero() {
            return Err(Error::Residual { what: "ψ − ∗φ".into(), residual: r.to_string() });
        }
        Ok(s)
    }

    pub fn dphi(&self) -> FormExpr {
        self.frame.d(&self.phi)
    }

    pub fn dpsi(&self) -> FormExpr {
        self.frame.d(&self.psi)
    }

    pub fn vol(&self) -> FormExpr {
        self.metric.vol()
    }

    /// Largest entrywise gap between the exact metric and the one recovered
    /// numerically from `φ` at a sample.
    pub fn numeric_metric_gap(&self, t: f64, env: &ParamEnv) -> Result<f64> {
        let phi = self.phi.eval(t, env)?;
        let g = crate::exterior::metric_from_phi_numeric(&phi)?;
        let exact = self.metric.eval(t, env)?;
        let orientation_gap = (g.vol_coeff() - exact.vol_coeff()).abs() / exact.vol_coeff().abs();
        Ok(g.max_abs_diff(&exact).max(orientation_gap))
    }

    pub fn eval(&self, t: f64, env: &ParamEnv) -> Result<(NumForm, NumForm, NumMetric)> {
        Ok((self.phi.eval(t, env)?, self.psi.eval(t, env)?, self.metric.eval(t, env)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coframe": self.frame.to_spec(),
            "phi": self.phi.to_string(),
            "psi": self.psi.to_string(),
            "metric": self.metric.matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "vol": self.metric.vol_coeff().to_string(),
        })
    }
}

/// Torsion of an exact structure; the reassembly identities are enforced.
pub fn g2_torsion(s: &G2Structure) -> Result<TorsionG2> {
    let (dphi, dpsi) = (s.dphi(), s.dpsi());
    let tau = torsion_from_derivatives(&s.phi, &s.psi, &dphi, &dpsi, &s.metric)?;
    let (r1, r2) = reassembly_residuals(&s.phi, &s.psi, &dphi, &dpsi, &s.metric, &tau)?;
    if !r1.is_zero() {
        return Err(Error::Residual { what: "dφ reassembly".into(), residual: r1.to_string() });
    }
    if !r2.is_zero() {
        return Err(Error::Residual { what: "dψ reassembly".into(), residual: r2.to_string() });
    }
    Ok(tau)
}

fn positive_unit(f: &ScalarExpr) -> Result<()> {
    let ok = f.is_unit() && f.terms().all(|(_, c)| c.signum() > 0);
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("conformal factor `{f}` is not a positive unit monomial")))
    }
}

/// `φ̃ = f³φ`, `ψ̃ = f⁴ψ`, `g̃ = f²g`.
pub fn conformal_transform(s: &G2Structure, f: &ScalarExpr) -> Result<G2Structure> {
    positive_unit(f)?;
    let f2 = f.pow(2);
    let metric = s.metric.scaled(&f2, &f.pow(7))?;
    G2Structure::with_psi(s.frame.clone(), s.phi.scale(&f.pow(3)), s.psi.scale(&f.pow(4)), metric)
}

/// The multiplet predicted for `conformal_transform(s, f)` from the torsion of `s`.
pub fn conformal_torsion_law(frame: &Coframe, tau: &TorsionG2, f: &ScalarExpr) -> Result<TorsionG2> {
    positive_unit(f)?;
    let finv = f.inverse()?;
    let dlog = frame.d(&FormExpr::scalar(frame.dim(), f.clone())).scale(&finv);
    Ok(Torsion {
        tau1: &tau.tau1 * &finv,
        tau7: tau.tau7.add(&dlog),
        tau14: tau.tau14.scale(f),
        tau27: tau.tau27.scale(&f.pow(2)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{full_mask, CoframeSpec};

    fn flat() -> G2Structure {
        let spec = CoframeSpec {
            labels: (1..=7).map(|i| format!("x{i}")).collect(),
            d_rules: Default::default(),
            radial: Some("x1".into()),
            mc_scale: "1".into(),
        };
        let frame = Coframe::from_spec(&spec).unwrap();
        let phi = frame
            .parse("e[1,2,3] + e[1,4,5] + e[1,6,7] + e[2,4,6] - e[2,5,7] - e[3,4,7] - e[3,5,6]", 3)
            .unwrap();
        let metric = MetricExpr::diagonal(7, full_mask(7), &vec![ScalarExpr::one(); 7]).unwrap();
        G2Structure::new(frame, phi, metric).unwrap()
    }

    #[test]
    fn flat_structure_is_torsion_free() {
        let s = flat();
        assert!(g2_torsion(&s).unwrap().is_zero());
        assert_eq!(s.phi.wedge(&s.psi), s.vol().scale_int(7));
    }

    #[test]
    fn wrong_metric_is_rejected() {
        let s = flat();
        let mut d = vec![ScalarExpr::one(); 7];
        d[2] = ScalarExpr::int(4);
        let g = MetricExpr::diagonal(7, full_mask(7), &d).unwrap();
        assert!(G2Structure::new(s.frame.clone(), s.phi.clone(), g).is_err());
    }

    #[test]
    fn radial_rescaling_follows_conformal_law() {
        let s = flat();
        let f = ScalarExpr::t();
        let sf = conformal_transform(&s, &f).unwrap();
        let tau = g2_torsion(&sf).unwrap();
        let law = conformal_torsion_law(&s.frame, &g2_torsion(&s).unwrap(), &f).unwrap();
        assert_eq!(tau, law);
        assert_eq!(tau.tau7, s.frame.form(&[0], ScalarExpr::t_pow(-1)));
    }

    #[test]
    fn nonpositive_factor_is_rejected() {
        assert!(conformal_transform(&flat(), &ScalarExpr::int(-2)).is_err());
        assert!(conformal_transform(&flat(), &(ScalarExpr::one() + ScalarExpr::t())).is_err());
    }
}
