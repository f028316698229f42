//! Numeric evaluation: metric of a 3-form and finite-difference `d`.

use crate::error::{Error, Result};
use crate::exterior::form::{Coeff, Form, NumForm};
use crate::exterior::frame::d_constant;
use crate::exterior::metric::{full_mask, minor, NumMetric};
use crate::scalar::QuadNum;

/// `B_ij` with `(1/6)(E_i⌟φ)∧(E_j⌟φ)∧φ = B_ij e^{1…n}`.
pub fn phi_bilinear<C: Coeff>(phi: &Form<C>) -> Result<Vec<Vec<C>>> {
    let n = phi.dim();
    let sixth = C::from_quad(&QuadNum::from_frac(1, 6));
    let cs: Vec<Form<C>> = (0..n).map(|i| phi.contract_basis(i)).collect::<Result<_>>()?;
    let mut b = vec![vec![C::zero(); n]; n];
    for i in 0..n {
        let left = cs[i].wedge(phi);
        for j in i..n {
            let v = cs[j].wedge(&left).top_coeff().mul(&sixth);
            b[i][j] = v.clone();
            b[j][i] = v;
        }
    }
    Ok(b)
}

/// Metric and oriented volume induced by a 3-form in seven dimensions.
///
/// The orientation is the one in which `B` is positive definite; the returned
/// volume coefficient carries its sign.
pub fn metric_from_phi_numeric(phi: &NumForm) -> Result<NumMetric> {
    let n = phi.dim();
    if n != 7 || phi.degree() != 3 {
        return Err(Error::Invalid("expected a 3-form on seven labels".into()));
    }
    let mut b = phi_bilinear(phi)?;
    let o = if b[0][0] < 0.0 { -1.0 } else { 1.0 };
    for row in &mut b {
        for x in row.iter_mut() {
            *x *= o;
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    let det = minor(&b, &idx, &idx);
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::NotPositive);
    }
    let s = det.powf(-1.0 / 9.0);
    let g: Vec<Vec<f64>> = b.iter().map(|r| r.iter().map(|x| x * s).collect()).collect();
    let m = NumMetric::new(n, full_mask(n), g).map_err(|_| Error::NotPositive)?;
    if !m.is_positive_definite() {
        return Err(Error::NotPositive);
    }
    let vol = o * *m.vol_coeff();
    NumMetric::with_volume_tol(n, full_mask(n), m.matrix().to_vec(), vol)
}

/// Exterior derivative of a `t`-dependent numeric form: constant-coefficient
/// `d` on the rules plus `dt ∧ ∂_t` by a five-point stencil.
pub fn d_numeric(
    form_at: &dyn Fn(f64) -> Result<NumForm>,
    t: f64,
    step: f64,
    rules: &[NumForm],
    radial: usize,
) -> Result<NumForm> {
    let a = form_at(t)?;
    let n = a.dim();
    let mut out = d_constant(&a, rules);
    let fm2 = form_at(t - 2.0 * step)?;
    let fm1 = form_at(t - step)?;
    let fp1 = form_at(t + step)?;
    let fp2 = form_at(t + 2.0 * step)?;
    let deriv = fm2
        .sub(&fp2)
        .add(&fp1.sub(&fm1).scale(&8.0))
        .scale(&(1.0 / (12.0 * step)));
    if a.degree() < n {
        out = out.add(&Form::basis(n, &[radial]).wedge(&deriv));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `e123 + e145 + e167 + e246 − e257 − e347 − e356`
    pub(crate) fn flat_phi() -> NumForm {
        let terms: [(&[usize], f64); 7] = [
            (&[0, 1, 2], 1.0),
            (&[0, 3, 4], 1.0),
            (&[0, 5, 6], 1.0),
            (&[1, 3, 5], 1.0),
            (&[1, 4, 6], -1.0),
            (&[2, 3, 6], -1.0),
            (&[2, 4, 5], -1.0),
        ];
        terms.iter().fold(NumForm::zero(7, 3), |acc, (i, c)| acc.add(&NumForm::monomial(7, i, *c)))
    }

    #[test]
    fn flat_model_is_identity() {
        let g = metric_from_phi_numeric(&flat_phi()).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g.matrix()[i][j] - e).abs() < 1e-12);
            }
        }
        let psi = g.hodge(&flat_phi(), 1).unwrap();
        assert!((flat_phi().wedge(&psi).top_coeff() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_law() {
        let c = 1.7;
        let g = metric_from_phi_numeric(&flat_phi().scale(&(c * c * c))).unwrap();
        assert!((g.matrix()[3][3] - c * c).abs() < 1e-12);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let phi = NumForm::monomial(7, &[0, 1, 2], 1.0);
        assert!(matches!(metric_from_phi_numeric(&phi), Err(Error::NotPositive)));
    }

    #[test]
    fn stencil_derivative() {
        let rules = vec![NumForm::zero(2, 2); 2];
        let f = |t: f64| Ok(NumForm::monomial(2, &[1], t.powi(3)));
        let d = d_numeric(&f, 2.0, 1e-3, &rules, 0).unwrap();
        assert!((d.comp(&[0, 1]) - 12.0).abs() < 1e-9);
    }
}
