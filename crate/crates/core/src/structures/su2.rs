//! SU(2)-structures `(η, ω₁, ω₂, ω₃)` on a five-label block.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{indices_of, minor, Coframe, FormExpr, Mask, MetricExpr};
use crate::scalar::{ParamEnv, ScalarExpr};

#[derive(Clone, Debug)]
pub struct SU2Structure {
    pub frame: Coframe,
    pub eta: FormExpr,
    pub omegas: [FormExpr; 3],
    /// Labels spanned by the 5-manifold.
    pub link: Mask,
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub pass: bool,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SU2Report {
    pub checks: Vec<AxiomCheck>,
}

impl SU2Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.axiom.as_str()).collect()
    }
}

impl SU2Structure {
    pub fn new(frame: Coframe, eta: FormExpr, omegas: [FormExpr; 3], link: Mask) -> Result<Self> {
        if link.count_ones() != 5 {
            return Err(Error::Invalid("an SU(2)-structure needs five labels".into()));
        }
        for f in std::iter::once(&eta).chain(omegas.iter()) {
            if f.support() & !link != 0 {
                return Err(Error::NotBasic(f.to_string()));
            }
        }
        Ok(SU2Structure { frame, eta, omegas, link })
    }

    /// Labels carrying the horizontal distribution `ker η`.
    pub fn horizontal(&self) -> Mask {
        self.omegas.iter().fold(0, |m, w| m | w.support())
    }

    /// `v = ½ω₁²`.
    pub fn v(&self) -> FormExpr {
        self.omegas[0].wedge(&self.omegas[0]).scale_expr(&ScalarExpr::frac(1, 2))
    }

    /// Reeb vector: `η(ξ) = 1`, `ξ⌟ωᵢ = 0`.
    pub fn reeb(&self) -> Result<Vec<ScalarExpr>> {
        let rest = indices_of(self.link & !self.horizontal());
        let [r] = rest[..] else {
            return Err(Error::Invalid("the 2-forms must leave exactly one label free".into()));
        };
        let mut xi = vec![ScalarExpr::zero(); self.frame.dim()];
        xi[r] = self.eta.get(1 << r).inverse()?;
        Ok(xi)
    }

    /// `g_H(X, Y) v = ω₁ ∧ (X⌟ω₂) ∧ (Y⌟ω₃)` on the horizontal labels.
    pub fn g_h(&self) -> Result<Vec<Vec<ScalarExpr>>> {
        let n = self.frame.dim();
        let vinv = self.v().top_coeff().inverse()?;
        let h = indices_of(self.horizontal());
        let mut g = vec![vec![ScalarExpr::zero(); n]; n];
        for &a in &h {
            let xa = self.omegas[1].contract_basis(a)?;
            let left = self.omegas[0].wedge(&xa);
            for &b in &h {
                let yb = self.omegas[2].contract_basis(b)?;
                g[a][b] = &left.wedge(&yb).top_coeff() * &vinv;
            }
        }
        Ok(g)
    }

    /// `g = g_H + η²` on the link, oriented by `η ∧ v`.
    pub fn metric(&self) -> Result<MetricExpr> {
        let mut g = self.g_h()?;
        let e = self.eta.one_form_coeffs();
        for (i, row) in g.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x += &(&e[i] * &e[j]);
            }
        }
        let vol = self.eta.wedge(&self.v()).top_coeff();
        MetricExpr::with_volume(self.frame.dim(), self.link, g, vol)
    }

    /// `(dη − 2ω₁, dω₂ + 3ω₃∧η, dω₃ − 3ω₂∧η)` along the link.
    pub fn sasaki_einstein_residuals(&self) -> [FormExpr; 3] {
        let d = |a: &FormExpr| self.frame.d_fixed_t(a);
        let [w1, w2, w3] = &self.omegas;
        [
            d(&self.eta).sub(&w1.scale_int(2)),
            d(w2).add(&w3.wedge(&self.eta).scale_int(3)),
            d(w3).sub(&w2.wedge(&self.eta).scale_int(3)),
        ]
    }

    /// `(dω₁, d(ω₂∧η), d(ω₃∧η))` along the link.
    pub fn hypo_residuals(&self) -> [FormExpr; 3] {
        let d = |a: &FormExpr| self.frame.d_fixed_t(a);
        let [w1, w2, w3] = &self.omegas;
        [d(w1), d(&w2.wedge(&self.eta)), d(&w3.wedge(&self.eta))]
    }

    pub fn scaled(&self, eta_factor: &ScalarExpr, omega_factor: &ScalarExpr) -> Self {
        SU2Structure {
            frame: self.frame.clone(),
            eta: self.eta.scale(eta_factor),
            omegas: self.omegas.clone().map(|w| w.scale(omega_factor)),
            link: self.link,
        }
    }
}

fn check(axiom: impl Into<String>, r: &FormExpr) -> AxiomCheck {
    AxiomCheck { axiom: axiom.into(), pass: r.is_zero(), residual: r.to_string() }
}

/// Algebraic axioms of an SU(2)-structure; positivity is tested at `(t, env)`.
pub fn check_su2_structure(s: &SU2Structure, t: f64, env: &ParamEnv) -> Result<SU2Report> {
    let mut checks = Vec::new();
    let v = s.v();
    for i in 0..3 {
        for j in i..3 {
            let expect = if i == j { v.scale_int(2) } else { FormExpr::zero(v.dim(), 4) };
            let r = s.omegas[i].wedge(&s.omegas[j]).sub(&expect);
            checks.push(check(format!("ω{}∧ω{} = 2δv", i + 1, j + 1), &r));
        }
    }
    let top = s.eta.wedge(&v);
    checks.push(AxiomCheck { axiom: "v∧η ≠ 0".into(), pass: !top.is_zero(), residual: top.to_string() });
    match s.reeb() {
        Ok(xi) => {
            for (i, w) in s.omegas.iter().enumerate() {
                checks.push(check(format!("ξ⌟ω{}", i + 1), &w.contract(&xi)?));
            }
            let e = s.eta.contract(&xi)?.get(0);
            let r = FormExpr::scalar(s.frame.dim(), &e - &ScalarExpr::one());
            checks.push(check("η(ξ) = 1", &r));
        }
        Err(e) => checks.push(AxiomCheck { axiom: "Reeb field".into(), pass: false, residual: e.to_string() }),
    }
    let g = s.g_h()?;
    let h = indices_of(s.horizontal());
    let mut asym = ScalarExpr::zero();
    for &a in &h {
        for &b in &h {
            if g[a][b] != g[b][a] {
                asym = &g[a][b] - &g[b][a];
            }
        }
    }
    checks.push(AxiomCheck { axiom: "g_H symmetric".into(), pass: asym.is_zero(), residual: asym.to_string() });
    let gn: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x.eval(t, env)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let minors: Vec<f64> = (1..=h.len()).map(|k| minor(&gn, &h[..k], &h[..k])).collect();
    let positive = minors.iter().all(|m| *m > 0.0);
    checks.push(AxiomCheck {
        axiom: "orientation (g_H positive)".into(),
        pass: positive,
        residual: format!("{minors:?}"),
    });
    Ok(SU2Report { checks })
}
