//! The sine-cone `dt² + sin²t g_nk` over the nearly-Kähler link, on the numeric path.
//!
//! With `dω = 3ReΥ`, `dImΥ = −2ω²` on the link,
//! `φ = s²dt∧ω + s³(cos t ReΥ + sin t ImΥ)` and `ψ = ½s⁴ω² − s³dt∧(cos t ImΥ − sin t ReΥ)`,
//! `s = sin t`, is nearly parallel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::metric::num_norm;
use crate::exterior::{metric_from_phi_numeric, FormExpr, MetricExpr, NumForm};
use crate::models::solutions::bryant_salamon_standard;
use crate::models::su2su2::{su2su2_coframe, StandardForms, DT};
use crate::scalar::{ParamEnv, ScalarExpr};
use crate::structures::{su3_torsion, torsion_from_derivatives, SU3Structure};

/// Grid `πi/64`, `i = 1 … 63`: 64 intervals on `(0, π)`.
pub const SINE_GRID: usize = 64;

pub fn sine_grid() -> Vec<f64> {
    sine_grid_with(SINE_GRID)
}

/// Interior points `πi/n`, `i = 1 … n−1`.
pub fn sine_grid_with(n: usize) -> Vec<f64> {
    (1..n).map(|i| std::f64::consts::PI * i as f64 / n as f64).collect()
}

/// The unit level set of the Bryant–Salamon cone: `φ = t²dt∧ω + t³ReΥ`, `ψ = ½t⁴ω² − t³dt∧ImΥ`.
pub fn nearly_kahler_link() -> Result<SU3Structure> {
    let std = StandardForms::new();
    let frame = su2su2_coframe()?;
    let g2 = bryant_salamon_standard(1)?.g2(&frame, &std)?;
    let t = |k: i32| ScalarExpr::t_pow(k);
    let omega = g2.phi.contract_basis(DT)?.scale(&t(-2));
    let dt = FormExpr::basis(frame.dim(), &[DT]);
    let re = g2.phi.sub(&dt.wedge(&omega).scale(&t(2))).scale(&t(-3));
    let im = g2.psi.contract_basis(DT)?.scale(&t(-3)).neg();
    let mask = !(1u8 << DT) & 0x7f;
    let n = frame.dim();
    let g: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|i| (0..n).map(|j| if i == DT || j == DT { ScalarExpr::zero() } else { &g2.metric.matrix()[i][j] * &t(-2) }).collect())
        .collect();
    let vol = omega.pow_wedge(3).scale(&ScalarExpr::frac(1, 6)).get(mask);
    let metric = MetricExpr::with_volume(n, mask, g, vol)?;
    for f in [&omega, &re, &im] {
        if f.iter().any(|(_, c)| c.depends_on_t()) {
            return Err(Error::Invalid(format!("link form {f} is not homogeneous")));
        }
    }
    SU3Structure::new(frame, omega, re, im, metric)
}

/// `υ₁` of a link whose only SU(3) torsion is `υ₁ = 1`, i.e. `dω = 3ReΥ`, `dImΥ = −2ω²`.
pub fn check_nearly_kahler(link: &SU3Structure) -> Result<()> {
    let tor = su3_torsion(link)?;
    let rest = [&tor.v6, &tor.v6hat, &tor.v8, &tor.v8hat, &tor.v12];
    if !tor.v1.is_one() || !tor.v1hat.is_zero() || rest.iter().any(|f| !f.is_zero()) {
        return Err(Error::Invalid(format!("link is not nearly-Kähler with υ₁ = 1 (υ₁ = {})", tor.v1)));
    }
    Ok(())
}

/// Torsion and metric diagnostics at one `t`.
#[derive(Clone, Debug, Serialize)]
pub struct SineConeSample {
    pub t: f64,
    pub tau1: f64,
    /// `|τ₇|, |τ₁₄|, |τ₂₇|`.
    pub norms: [f64; 3],
    /// Largest gap between `∗φ` and the closed-form `ψ`.
    pub psi_gap: f64,
    /// Largest gap between the metric of `φ` and `dt² + sin²t g_nk`.
    pub metric_gap: f64,
}

/// The sine-cone on `sine_grid()`; errors if the link is not nearly-Kähler.
pub fn sine_cone(link: &SU3Structure, grid: &[f64]) -> Result<Vec<SineConeSample>> {
    check_nearly_kahler(link)?;
    let env = ParamEnv::new();
    let n = link.frame.dim();
    let dt = FormExpr::basis(n, &[DT]);
    let ev = |f: &FormExpr| f.eval(1.0, &env);
    let d = |f: &FormExpr| ev(&link.frame.d(f));
    let (w, re, im) = (&link.omega, &link.re_ups, &link.im_ups);
    let w2 = w.wedge(w);
    // φ: coefficients of dt∧ω, ReΥ, ImΥ; ψ: of ω², dt∧ImΥ, dt∧ReΥ
    let phi_b = [ev(&dt.wedge(w))?, ev(re)?, ev(im)?];
    let phi_db = [d(&dt.wedge(w))?, d(re)?, d(im)?];
    let psi_b = [ev(&w2)?, ev(&dt.wedge(im))?, ev(&dt.wedge(re))?];
    let psi_db = [d(&w2)?, d(&dt.wedge(im))?, d(&dt.wedge(re))?];
    let dt_n = ev(&dt)?;
    let g_nk = link.metric.eval(1.0, &env)?;
    let mut out = Vec::new();
    for &t in grid {
        let (s, c) = t.sin_cos();
        let f_phi = [(s * s, 2.0 * s * c), (s.powi(3) * c, 3.0 * s * s * c * c - s.powi(4)), (s.powi(4), 4.0 * s.powi(3) * c)];
        let f_psi = [
            (0.5 * s.powi(4), 2.0 * s.powi(3) * c),
            (-s.powi(3) * c, s.powi(4) - 3.0 * s * s * c * c),
            (s.powi(4), 4.0 * s.powi(3) * c),
        ];
        let build = |b: &[NumForm; 3], db: &[NumForm; 3], f: &[(f64, f64); 3]| {
            let mut form = b[0].scale(&f[0].0);
            let mut dform = db[0].scale(&f[0].0).add(&dt_n.wedge(&b[0]).scale(&f[0].1));
            for k in 1..3 {
                form = form.add(&b[k].scale(&f[k].0));
                dform = dform.add(&db[k].scale(&f[k].0)).add(&dt_n.wedge(&b[k]).scale(&f[k].1));
            }
            (form, dform)
        };
        let (phi, dphi) = build(&phi_b, &phi_db, &f_phi);
        let (psi, dpsi) = build(&psi_b, &psi_db, &f_psi);
        let g = metric_from_phi_numeric(&phi)?;
        let star_phi = g.hodge(&phi, 1)?;
        let tau = torsion_from_derivatives(&phi, &star_phi, &dphi, &dpsi, &g)?;
        let mut metric_gap: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == DT && j == DT { 1.0 } else { s * s * g_nk.matrix()[i][j] };
                metric_gap = metric_gap.max((g.matrix()[i][j] - expect).abs());
            }
        }
        out.push(SineConeSample {
            t,
            tau1: tau.tau1,
            norms: [num_norm(&g, &tau.tau7)?, num_norm(&g, &tau.tau14)?, num_norm(&g, &tau.tau27)?],
            psi_gap: star_phi.sub(&psi).max_abs(),
            metric_gap,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_cone_is_nearly_parallel() {
        let link = nearly_kahler_link().unwrap();
        let samples = sine_cone(&link, &sine_grid()).unwrap();
        let tau1 = samples[0].tau1;
        for s in &samples {
            assert!(s.norms.iter().all(|x| *x < 1e-9), "{s:?}");
            assert!((s.tau1 - tau1).abs() < 1e-9 && s.psi_gap < 1e-12 && s.metric_gap < 1e-12, "{s:?}");
        }
    }
}
