//! Decay of `φ_γ − φ₀` and `ψ_γ − ψ₀` at the vertex and at infinity.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{indices_of, minor, FormExpr, NumForm};
use crate::models::gamma::{gamma_ansatz, gamma_family, GAMMA};
use crate::models::su2su2::{su2su2_coframe, StandardForms};
use crate::scalar::{Limit, ParamEnv, ScalarExpr};
use crate::structures::CircleBundleData;

/// Largest admissible gap between a fitted slope and the exact exponent.
pub const SLOPE_TOL: f64 = 0.05;
/// Dyadic samples `2⁰ … 2^±12`.
pub const DYADIC_SAMPLES: i32 = 13;

/// Least-squares line through `(log₂ t, log₂ |·|)`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn fit_loglog(samples: &[(f64, f64)]) -> Fit {
    let pts: Vec<(f64, f64)> = samples.iter().map(|(t, y)| (t.log2(), y.log2())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts.iter().map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Fit { slope, intercept, max_residual }
}

/// Leading behaviour of one norm in both limits.
#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub quantity: String,
    /// The difference vanishes identically.
    pub zero: bool,
    /// `(t-power, ln t-power)` of the norm.
    pub exponent_at_zero: Option<(i32, u32)>,
    pub exponent_at_infinity: Option<(i32, u32)>,
    pub exact_norm_sq: String,
    pub fit_at_zero: Option<Fit>,
    pub fit_at_infinity: Option<Fit>,
    /// `(t, |·|)` at `2⁻¹² … 2¹²`, ascending; empty for `γ = 0`.
    pub samples: Vec<(f64, f64)>,
    /// Rate against the cone at infinity.
    pub nu: Option<i32>,
    /// A fit disagrees with its exact exponent by more than [`SLOPE_TOL`].
    pub flagged: bool,
}

impl RateReport {
    pub fn agrees(&self) -> bool {
        !self.flagged
    }
}

fn halve((e, l): (i32, u32)) -> Result<(i32, u32)> {
    if e % 2 != 0 || l % 2 != 0 {
        return Err(Error::Invalid(format!("norm² exponent ({e}, {l}) is not a square")));
    }
    Ok((e / 2, l / 2))
}

fn slope_gap(fit: &Option<Fit>, exp: Option<(i32, u32)>) -> bool {
    match (fit, exp) {
        (Some(f), Some((e, 0))) => (f.slope - e as f64).abs() > SLOPE_TOL,
        _ => false,
    }
}

/// Orthonormal coframe `{Cholesky rows of g₆, tθ}` of the circle-bundle metric at `t`,
/// as rows over the labels; returns its inverse.
fn adapted_inverse(b: &CircleBundleData, t: f64, env: &ParamEnv) -> Result<DMatrix<f64>> {
    let n = b.dim();
    let g6 = b.su3.metric.eval(t, env)?;
    let idx = indices_of(b.su3.support());
    let m = DMatrix::from_fn(idx.len(), idx.len(), |i, j| g6.matrix()[idx[i]][idx[j]]);
    let chol = m.cholesky().ok_or_else(|| Error::Invalid(format!("g₆ not positive at t = {t}")))?;
    let l = chol.l();
    let mut p = DMatrix::zeros(n, n);
    for (a, _) in idx.iter().enumerate() {
        for (j, &lj) in idx.iter().enumerate() {
            p[(a, lj)] = l[(j, a)];
        }
    }
    let theta = b.t_theta().eval(t, env)?.one_form_coeffs();
    for (j, c) in theta.iter().enumerate() {
        p[(n - 1, j)] = *c;
    }
    p.try_inverse().ok_or_else(|| Error::Invalid("adapted coframe is degenerate".into()))
}

/// `|a|` computed by rewriting `a` in an orthonormal coframe `f = P e`, `e = P⁻¹ f`.
pub fn norm_in_coframe(a: &NumForm, q: &DMatrix<f64>) -> f64 {
    let n = a.dim();
    let qv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect();
    let mut sum = 0.0;
    for target in 0u16..(1 << n) {
        if target.count_ones() as usize != a.degree() {
            continue;
        }
        let cols = indices_of(target as u8);
        let c: f64 = a.iter().map(|(m, v)| v * minor(&qv, &indices_of(*m), &cols)).sum();
        sum += c * c;
    }
    sum.sqrt()
}

/// Exact and numeric decay of `|φ_γ − φ₀|` and `|ψ_γ − ψ₀|` in the metric of `φ_γ`.
///
/// The exact exponents use a symbolic `γ`; the fits use `γ = gamma_value`.
pub fn decay_rates(gamma_value: f64) -> Result<[RateReport; 2]> {
    let std = StandardForms::new();
    let frame = su2su2_coframe()?;
    let sym = ScalarExpr::param(GAMMA);
    let zero = gamma_value == 0.0;
    let g = gamma_family(&sym)?;
    let g0 = gamma_family(&ScalarExpr::zero())?;
    let bundle = gamma_ansatz(&sym, 1)?.circle_bundle(&frame, &std)?;
    let env: ParamEnv = [(GAMMA.to_string(), gamma_value)].into();
    let diffs: [(&str, FormExpr); 2] = [("|φ_γ − φ₀|", g.phi.sub(&g0.phi)), ("|ψ_γ − ψ₀|", g.psi.sub(&g0.psi))];
    let mut out = Vec::new();
    for (name, diff) in diffs {
        let n2 = g.metric.norm_sq(&diff)?;
        let exp = |l| -> Result<Option<(i32, u32)>> {
            if zero || n2.is_zero() {
                Ok(None)
            } else {
                Ok(Some(halve(n2.leading_exponent(l)?)?))
            }
        };
        let (e0, einf) = (exp(Limit::AtZero)?, exp(Limit::AtInfinity)?);
        let side = |sign: i32| -> Result<Vec<(f64, f64)>> {
            if zero {
                return Ok(Vec::new());
            }
            let mut s = Vec::new();
            for i in 0..DYADIC_SAMPLES {
                let t = 2f64.powi(sign * i);
                let q = adapted_inverse(&bundle, t, &env)?;
                s.push((t, norm_in_coframe(&diff.eval(t, &env)?, &q)));
            }
            Ok(s)
        };
        let (s0, sinf) = (side(-1)?, side(1)?);
        let fit = |s: &[(f64, f64)]| (!s.is_empty()).then(|| fit_loglog(s));
        let (f0, finf) = (fit(&s0), fit(&sinf));
        // 2⁻¹² … 2⁻¹ then 2⁰ … 2¹²
        let samples: Vec<(f64, f64)> = s0.iter().skip(1).rev().chain(sinf.iter()).copied().collect();
        let flagged = slope_gap(&f0, e0) || slope_gap(&finf, einf);
        out.push(RateReport {
            quantity: name.to_string(),
            zero: zero || n2.is_zero(),
            exponent_at_zero: e0,
            exponent_at_infinity: einf,
            exact_norm_sq: n2.to_string(),
            fit_at_zero: f0,
            fit_at_infinity: finf,
            samples,
            nu: einf.map(|e| e.0),
            flagged,
        });
    }
    let [a, b]: [RateReport; 2] = out.try_into().map_err(|_| Error::Invalid("two reports".into()))?;
    Ok([a, b])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_power_law() {
        let s: Vec<(f64, f64)> = (0..13).map(|i| (2f64.powi(i), 5.0 * 2f64.powi(-3 * i))).collect();
        let f = fit_loglog(&s);
        assert!((f.slope + 3.0).abs() < 1e-12 && f.max_residual < 1e-9);
    }
}
