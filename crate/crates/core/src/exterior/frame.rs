//! Coframes with exterior-derivative rules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::form::{indices_of, Coeff, Form, FormExpr, Mask, NumForm};
use crate::parse::{parse_form, parse_scalar};
use crate::scalar::{ParamEnv, QuadNum, ScalarExpr};

/// A labelled basis of 1-forms `e^1 … e^n` with `d e^i` given as 2-forms.
///
/// Coefficients may depend on the radial variable `t`, which is bound to the
/// `radial` label: `d f = f'(t) e^radial` for scalar functions.
#[derive(Clone, Debug)]
pub struct Coframe {
    labels: Vec<String>,
    d_rules: Vec<FormExpr>,
    radial: Option<usize>,
    mc_scale: QuadNum,
    /// `d(e^I)` for every basis monomial.
    d_basis: Vec<FormExpr>,
    /// `t`-derivatives of parameters that stand for functions of `t`.
    rates: BTreeMap<String, ScalarExpr>,
}

/// Serialized coframe definition.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoframeSpec {
    pub labels: Vec<String>,
    /// Printed 2-forms keyed by label; missing labels are closed.
    pub d_rules: BTreeMap<String, String>,
    #[serde(default)]
    pub radial: Option<String>,
    #[serde(default = "default_scale")]
    pub mc_scale: String,
}

fn default_scale() -> String {
    "1".into()
}

/// `d` of a basis monomial from the 1-form rules, by the Leibniz rule.
fn d_monomial<C: Coeff>(n: usize, mask: Mask, rules: &[Form<C>]) -> Form<C> {
    let idx = indices_of(mask);
    let mut out = Form::zero(n, idx.len() + 1);
    for (pos, &i) in idx.iter().enumerate() {
        if rules[i].is_zero() {
            continue;
        }
        let before = Form::basis(n, &idx[..pos]);
        let after = Form::basis(n, &idx[pos + 1..]);
        let term = before.wedge(&rules[i]).wedge(&after);
        out = if pos % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// Exterior derivative treating all coefficients as constants.
pub fn d_constant<C: Coeff>(a: &Form<C>, rules: &[Form<C>]) -> Form<C> {
    let n = a.dim();
    if a.degree() == n {
        return Form::zero(n, n);
    }
    let mut out = Form::zero(n, a.degree() + 1);
    for (m, c) in a.iter() {
        out = out.add(&d_monomial(n, *m, rules).scale(c));
    }
    out
}

impl Coframe {
    pub fn new(labels: Vec<String>, d_rules: Vec<FormExpr>, radial: Option<usize>, mc_scale: QuadNum) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > 8 {
            return Err(Error::InvalidCoframe(format!("{n} labels (1..=8 supported)")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidCoframe(format!("duplicate label `{l}`")));
            }
        }
        if d_rules.len() != n {
            return Err(Error::InvalidCoframe("one rule per label required".into()));
        }
        for (l, r) in labels.iter().zip(&d_rules) {
            if r.dim() != n || r.degree() != 2 {
                return Err(Error::InvalidCoframe(format!("rule for `{l}` is not a 2-form on {n} labels")));
            }
        }
        if let Some(r) = radial {
            if r >= n || !d_rules[r].is_zero() {
                return Err(Error::InvalidCoframe("radial label must exist and be closed".into()));
            }
        }
        let mut frame = Coframe { labels, d_rules, radial, mc_scale, d_basis: Vec::new(), rates: BTreeMap::new() };
        frame.d_basis = (0..(1u16 << n))
            .map(|m| {
                if m.count_ones() as usize == n {
                    FormExpr::zero(n, n)
                } else {
                    d_monomial(n, m as Mask, &frame.d_rules)
                }
            })
            .collect();
        let bad = frame.d_squared_residuals();
        if let Some((l, r)) = bad.into_iter().next() {
            return Err(Error::InvalidCoframe(format!("d(d {l}) = {r} ≠ 0")));
        }
        Ok(frame)
    }

    pub fn from_spec(spec: &CoframeSpec) -> Result<Self> {
        let n = spec.labels.len();
        let mut rules = Vec::with_capacity(n);
        for l in &spec.labels {
            rules.push(match spec.d_rules.get(l) {
                Some(s) => parse_form(s, n, 2)?,
                None => FormExpr::zero(n, 2),
            });
        }
        for k in spec.d_rules.keys() {
            if !spec.labels.contains(k) {
                return Err(Error::InvalidCoframe(format!("rule for unknown label `{k}`")));
            }
        }
        let radial = match &spec.radial {
            Some(r) => Some(
                spec.labels
                    .iter()
                    .position(|l| l == r)
                    .ok_or_else(|| Error::InvalidCoframe(format!("unknown radial label `{r}`")))?,
            ),
            None => None,
        };
        let scale = parse_scalar(&spec.mc_scale)?
            .as_constant()
            .ok_or_else(|| Error::InvalidCoframe("mc_scale must be a constant".into()))?;
        Self::new(spec.labels.clone(), rules, radial, scale)
    }

    pub fn to_spec(&self) -> CoframeSpec {
        CoframeSpec {
            labels: self.labels.clone(),
            d_rules: self
                .labels
                .iter()
                .zip(&self.d_rules)
                .filter(|(_, r)| !r.is_zero())
                .map(|(l, r)| (l.clone(), r.to_string()))
                .collect(),
            radial: self.radial.map(|r| self.labels[r].clone()),
            mc_scale: self.mc_scale.to_string(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("coframe spec serializes")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn radial(&self) -> Option<usize> {
        self.radial
    }

    pub fn mc_scale(&self) -> &QuadNum {
        &self.mc_scale
    }

    pub fn rule(&self, i: usize) -> &FormExpr {
        &self.d_rules[i]
    }

    /// `c · e^{indices}` on this frame.
    pub fn form(&self, indices: &[usize], c: ScalarExpr) -> FormExpr {
        FormExpr::monomial(self.dim(), indices, c)
    }

    /// Basis form by label names.
    pub fn e(&self, labels: &[&str]) -> FormExpr {
        let idx: Vec<usize> = labels.iter().map(|l| self.index(l).unwrap_or_else(|| panic!("no label `{l}`"))).collect();
        FormExpr::basis(self.dim(), &idx)
    }

    pub fn parse(&self, src: &str, degree: usize) -> Result<FormExpr> {
        parse_form(src, self.dim(), degree)
    }

    /// Declare the parameter `name` to be a function of `t` with derivative `rate`.
    pub fn with_rate(mut self, name: &str, rate: ScalarExpr) -> Self {
        self.rates.insert(name.to_string(), rate);
        self
    }

    pub fn rates(&self) -> &BTreeMap<String, ScalarExpr> {
        &self.rates
    }

    /// `∂_t` of the coefficients.
    pub fn time_deriv(&self, a: &FormExpr) -> FormExpr {
        a.map(|c| c.deriv_with(&self.rates))
    }

    /// `d(f e^I) = f' e^radial ∧ e^I + f d(e^I)`.
    pub fn d(&self, a: &FormExpr) -> FormExpr {
        let mut out = self.d_fixed_t(a);
        if let Some(r) = self.radial {
            if a.degree() < self.dim() {
                let dr = FormExpr::basis(self.dim(), &[r]);
                out = out.add(&dr.wedge(&self.time_deriv(a)));
            }
        }
        out
    }

    /// `d` with coefficients frozen, i.e. the exterior derivative along a level set of `t`.
    pub fn d_fixed_t(&self, a: &FormExpr) -> FormExpr {
        let n = self.dim();
        assert_eq!(a.dim(), n, "form lives on a different coframe");
        if a.degree() == n {
            return FormExpr::zero(n, n);
        }
        let mut out = FormExpr::zero(n, a.degree() + 1);
        for (m, c) in a.iter() {
            out = out.add(&self.d_basis[*m as usize].scale(c));
        }
        out
    }

    /// Pairs `(label, d(d e^i))` that fail to vanish.
    pub fn d_squared_residuals(&self) -> Vec<(String, FormExpr)> {
        self.labels
            .iter()
            .zip(&self.d_rules)
            .filter_map(|(l, r)| {
                let dd = self.d(r);
                (!dd.is_zero()).then(|| (l.clone(), dd))
            })
            .collect()
    }

    /// Rules evaluated at a sample point.
    pub fn numeric_rules(&self, t: f64, env: &ParamEnv) -> Result<Vec<NumForm>> {
        self.d_rules.iter().map(|r| r.eval(t, env)).collect()
    }

    /// Frame with the same labels and rules but a different radial binding.
    pub fn with_radial(&self, radial: Option<usize>) -> Result<Self> {
        let mut f = Self::new(self.labels.clone(), self.d_rules.clone(), radial, self.mc_scale.clone())?;
        f.rates = self.rates.clone();
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> Coframe {
        let spec = CoframeSpec {
            labels: vec!["x".into(), "y".into(), "z".into()],
            d_rules: [("z".to_string(), "e[1,2]".to_string())].into(),
            radial: Some("x".into()),
            mc_scale: "1".into(),
        };
        Coframe::from_spec(&spec).unwrap()
    }

    #[test]
    fn leibniz_with_radial_variable() {
        let f = heisenberg();
        // d(t² e^z) = 2t dx∧e^z + t² dx∧dy
        let a = f.form(&[2], ScalarExpr::t_pow(2));
        let expect = f.form(&[0, 2], ScalarExpr::int(2) * ScalarExpr::t()).add(&f.form(&[0, 1], ScalarExpr::t_pow(2)));
        assert_eq!(f.d(&a), expect);
        assert!(f.d(&f.e(&["x"])).is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let f = heisenberg();
        let g = Coframe::from_json(&f.to_json()).unwrap();
        assert_eq!(g.to_spec(), f.to_spec());
    }

    #[test]
    fn rejects_non_jacobi_rules() {
        // dw = x∧y, dx = z∧w gives d(dw) = z∧w∧y
        let bad = CoframeSpec {
            labels: vec!["x".into(), "y".into(), "z".into(), "w".into()],
            d_rules: [("w".to_string(), "e[1,2]".to_string()), ("x".to_string(), "e[3,4]".to_string())].into(),
            radial: None,
            mc_scale: "1".into(),
        };
        assert!(matches!(Coframe::from_spec(&bad), Err(Error::InvalidCoframe(_))));
    }
}
