//! Circle bundles over a flat contact Calabi–Yau model with variable fibre length.
//!
//! Labels `θ, e¹ … e⁶` with `dθ = ω = e¹²+e³⁴+e⁵⁶` and closed `eⁱ`; the radial
//! variable `r` is bound to `e¹`, so `h = h(r)` has `ξ(h) = 0` and `(dh)⊥ = h′e¹`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::metric::num_norm;
use crate::exterior::{metric_from_phi_numeric, Coframe, FormExpr, MetricExpr, NumForm};
use crate::scalar::{Limit, ParamEnv, QuadNum, ScalarExpr};
use crate::structures::{conformal_transform, g2_torsion, G2Structure, SU3Structure, TorsionG2};

pub const THETA: usize = 0;
pub const RADIAL: usize = 1;
/// Every label but `θ`.
pub const TRANSVERSE: u8 = 0b111_1110;

pub fn ccy_frame() -> Result<Coframe> {
    let n = 7;
    let labels = ["theta", "e1", "e2", "e3", "e4", "e5", "e6"].map(String::from).to_vec();
    let mut rules = vec![FormExpr::zero(n, 2); n];
    rules[THETA] = transverse_omega();
    Coframe::new(labels, rules, Some(RADIAL), QuadNum::one())
}

fn transverse_omega() -> FormExpr {
    let b = |i, j| FormExpr::basis(7, &[i, j]);
    b(1, 2).add(&b(3, 4)).add(&b(5, 6))
}

/// The transverse data `(ω, Υ = (e¹+ie²)(e³+ie⁴)(e⁵+ie⁶))` and the fibre length `h`.
#[derive(Clone, Debug)]
pub struct CCYData {
    pub frame: Coframe,
    pub h: ScalarExpr,
    pub cy: SU3Structure,
    pub theta: FormExpr,
}

fn positive_monomial(h: &ScalarExpr) -> Result<()> {
    if h.is_unit() && h.terms().all(|(m, c)| c.signum() > 0 && m.log == 0) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("h = {h} must be a positive monomial in r")))
    }
}

impl CCYData {
    pub fn new(h: ScalarExpr) -> Result<Self> {
        positive_monomial(&h)?;
        let frame = ccy_frame()?;
        let b = |idx: &[usize]| FormExpr::basis(7, idx);
        // Re/Im of (e¹+ie²)(e³+ie⁴)(e⁵+ie⁶)
        let re = b(&[1, 3, 5]).sub(&b(&[1, 4, 6])).sub(&b(&[2, 3, 6])).sub(&b(&[2, 4, 5]));
        let im = b(&[1, 3, 6]).add(&b(&[1, 4, 5])).add(&b(&[2, 3, 5])).sub(&b(&[2, 4, 6]));
        let id: Vec<Vec<ScalarExpr>> =
            (0..7).map(|i| (0..7).map(|j| if i == j && i != THETA { ScalarExpr::one() } else { ScalarExpr::zero() }).collect()).collect();
        let metric = MetricExpr::with_volume(7, TRANSVERSE, id, ScalarExpr::one())?;
        let cy = SU3Structure::new(frame.clone(), transverse_omega(), re, im, metric)?;
        Ok(CCYData { frame, h, cy, theta: FormExpr::basis(7, &[THETA]) })
    }

    pub fn phi(&self) -> FormExpr {
        self.theta.wedge(&self.cy.omega).scale(&self.h).add(&self.cy.re_ups)
    }

    pub fn psi(&self) -> FormExpr {
        let w = &self.cy.omega;
        w.wedge(w).scale(&ScalarExpr::frac(1, 2)).sub(&self.theta.wedge(&self.cy.im_ups).scale(&self.h))
    }

    /// `g = g_CY + h²θ²`.
    pub fn metric(&self) -> Result<MetricExpr> {
        let mut g = self.cy.metric.matrix().to_vec();
        g[THETA][THETA] = self.h.pow(2);
        MetricExpr::with_volume(7, 0x7f, g, self.h.clone())
    }

    pub fn g2(&self) -> Result<G2Structure> {
        G2Structure::with_psi(self.frame.clone(), self.phi(), self.psi(), self.metric()?)
    }

    pub fn dh(&self) -> FormExpr {
        self.frame.d(&FormExpr::scalar(7, self.h.clone()))
    }

    /// `∇⊥h`; the transverse metric is the identity.
    pub fn grad_h(&self) -> Vec<ScalarExpr> {
        self.dh().one_form_coeffs()
    }
}

pub fn ccy_structure(h: &ScalarExpr) -> Result<G2Structure> {
    CCYData::new(h.clone())?.g2()
}

/// Which transcription of the closed forms to use.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `τ₁₄ = (∇h⌟ReΥ + hθ∧(J∇h)♭)/(3h)`,
    /// `τ₂₇ = (J∇h)♭∧ω/h + (8/7)h²θ∧ω − ½((J∇h)⌟ReΥ)∧θ + (6/7)hReΥ`.
    Printed,
    /// `τ₁₄ = (∇h⌟ReΥ + 2hθ∧(J∇h)♭)/(3h)`,
    /// `τ₂₇ = −(J∇h)♭∧ω/(2h) + (8/7)h²θ∧ω − ½((J∇h)⌟ReΥ)∧θ − (6/7)hReΥ`.
    Corrected,
}

/// `τ₁ = 6h/7`, `τ₇ = (∇⊥h)♭/(6h)` and `τ₁₄`, `τ₂₇` per `variant`.
pub fn ccy_closed_forms(c: &CCYData, variant: Variant) -> Result<TorsionG2> {
    let (j14, j27, re27) = match variant {
        Variant::Printed => (1, ScalarExpr::one(), 1),
        Variant::Corrected => (2, ScalarExpr::frac(-1, 2), -1),
    };
    let h = &c.h;
    let hinv = h.inverse()?;
    let grad = c.grad_h();
    let jgrad = c.cy.j_vec(&grad);
    let jflat = c.cy.metric.flat(&jgrad);
    let re = &c.cy.re_ups;
    let w = &c.cy.omega;
    let tau14 = re
        .contract(&grad)?
        .add(&c.theta.wedge(&jflat).scale(&h.scale(&QuadNum::from_int(j14))))
        .scale(&(&hinv * &ScalarExpr::frac(1, 3)));
    let tau27 = jflat
        .wedge(w)
        .scale(&(&hinv * &j27))
        .add(&c.theta.wedge(w).scale(&(&h.pow(2) * &ScalarExpr::frac(8, 7))))
        .sub(&re.contract(&jgrad)?.wedge(&c.theta).scale(&ScalarExpr::frac(1, 2)))
        .add(&re.scale(&(h * &ScalarExpr::frac(6 * re27, 7))));
    Ok(TorsionG2 {
        tau1: h * &ScalarExpr::frac(6, 7),
        tau7: c.dh().scale(&(&hinv * &ScalarExpr::frac(1, 6))),
        tau14,
        tau27,
    })
}

/// Squared norms `(36/49)h²`, `|∇⊥h|²/(36h²)`, `a|∇⊥h|²/h²`, `b|∇⊥h|²/h² + (48/7)h²`
/// with `(a, b) = (1/3, 6)` printed and `(2/3, 1)` corrected.
pub fn ccy_norm_formulas(c: &CCYData, variant: Variant) -> Result<[ScalarExpr; 4]> {
    let (a, b) = match variant {
        Variant::Printed => (ScalarExpr::frac(1, 3), ScalarExpr::int(6)),
        Variant::Corrected => (ScalarExpr::frac(2, 3), ScalarExpr::one()),
    };
    let h2 = c.h.pow(2);
    let g2 = c.cy.metric.norm_sq(&c.dh())?;
    let q = &g2 * &h2.inverse()?;
    Ok([
        &h2 * &ScalarExpr::frac(36, 49),
        &q * &ScalarExpr::frac(1, 36),
        &q * &a,
        &(&q * &b) + &(&h2 * &ScalarExpr::frac(48, 7)),
    ])
}

const NAMES: [&str; 4] = ["tau1", "tau7", "tau14", "tau27"];

/// Direct torsion against the closed forms and the norm formulas.
#[derive(Clone, Debug, Serialize)]
pub struct CCYTorsionReport {
    pub h: String,
    pub variant: Variant,
    pub direct_norms_sq: [String; 4],
    pub formula_norms_sq: [String; 4],
    /// Components where the direct torsion differs from the closed form.
    pub component_mismatch: Vec<String>,
    /// Squared norms where the direct value differs from the formula.
    pub norm_mismatch: Vec<String>,
}

pub fn ccy_torsion(h: &ScalarExpr, variant: Variant) -> Result<(TorsionG2, CCYTorsionReport)> {
    let c = CCYData::new(h.clone())?;
    let s = c.g2()?;
    let tau = g2_torsion(&s)?;
    let closed = ccy_closed_forms(&c, variant)?;
    let direct = tau.norms_sq(&s.metric)?;
    let formula = ccy_norm_formulas(&c, variant)?;
    let diff = tau.sub(&closed);
    let zero = [diff.tau1.is_zero(), diff.tau7.is_zero(), diff.tau14.is_zero(), diff.tau27.is_zero()];
    let report = CCYTorsionReport {
        h: h.to_string(),
        variant,
        direct_norms_sq: direct.clone().map(|x| x.to_string()),
        formula_norms_sq: formula.clone().map(|x| x.to_string()),
        component_mismatch: (0..4).filter(|i| !zero[*i]).map(|i| NAMES[i].to_string()).collect(),
        norm_mismatch: (0..4).filter(|i| direct[*i] != formula[*i]).map(|i| NAMES[i].to_string()).collect(),
    };
    Ok((tau, report))
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Unbounded,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub r: f64,
    pub d_star_phi_norm: f64,
    pub r_times_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoGoReport {
    pub h: String,
    /// `|d∗φ|²` as an exact expression (monomial `h` only).
    pub exact_norm: String,
    /// `|d∗φ|² / |d ln h|²`.
    pub ratio_to_dlog_sq: Option<String>,
    /// Leading `(r-power, ln r-power)` of `|d∗φ|` at `r → 0`.
    pub exponent_at_zero: Option<(i32, u32)>,
    pub grid: Vec<GridPoint>,
    pub verdict: Verdict,
}

/// Dyadic grid `2⁰ … 2⁻¹²`.
pub fn no_go_grid() -> Vec<f64> {
    (0..13).map(|i| 2f64.powi(-i)).collect()
}

/// `|d∗φ|` at `r` on the numeric path from `h(r)` and `h′(r)`: the metric comes from `φ`
/// and `d∗φ = −h′e¹∧θ∧ImΥ − h dθ∧ImΥ`.
pub fn d_star_phi_numeric(h: f64, dh: f64) -> Result<f64> {
    let c = CCYData::new(ScalarExpr::one())?;
    let env = ParamEnv::new();
    let ev = |f: &FormExpr| f.eval(1.0, &env);
    let theta_im = c.theta.wedge(&c.cy.im_ups);
    let phi: NumForm = ev(&c.theta.wedge(&c.cy.omega))?.scale(&h).add(&ev(&c.cy.re_ups)?);
    let e1 = ev(&FormExpr::basis(7, &[RADIAL]))?;
    let dpsi = e1.wedge(&ev(&theta_im)?).scale(&-dh).sub(&ev(&c.frame.d_fixed_t(&theta_im))?.scale(&h));
    let g = metric_from_phi_numeric(&phi)?;
    num_norm(&g, &dpsi)
}

fn halve((e, l): (i32, u32)) -> (i32, u32) {
    (e / 2, l / 2)
}

/// `|d∗φ|` for a positive monomial `h`, exactly and on [`no_go_grid`].
pub fn no_go_check(h: &ScalarExpr) -> Result<NoGoReport> {
    let c = CCYData::new(h.clone())?;
    let s = c.g2()?;
    let n2 = s.metric.norm_sq(&s.dpsi())?;
    let dlog = c.dh().scale(&h.inverse()?);
    let dlog2 = s.metric.norm_sq(&dlog)?;
    let ratio = if dlog2.is_zero() { None } else { Some(n2.try_div(&dlog2)?.to_string()) };
    let exponent_at_zero = if n2.is_zero() { None } else { Some(halve(n2.leading_exponent(Limit::AtZero)?)) };
    let env = ParamEnv::new();
    let dh = h.deriv();
    let mut grid = Vec::new();
    for r in no_go_grid() {
        let v = d_star_phi_numeric(h.eval(r, &env)?, dh.eval(r, &env)?)?;
        grid.push(GridPoint { r, d_star_phi_norm: v, r_times_norm: r * v });
    }
    let verdict = match exponent_at_zero {
        Some((e, _)) if e < 0 => Verdict::Unbounded,
        _ => Verdict::Bounded,
    };
    Ok(NoGoReport { h: h.to_string(), exact_norm: n2.to_string(), ratio_to_dlog_sq: ratio, exponent_at_zero, grid, verdict })
}

/// Grid report for a sampled positive `h`: `sup |d ln h|` over shrinking windows.
pub fn no_go_sampled(h: &dyn Fn(f64) -> f64, dh: &dyn Fn(f64) -> f64, grid: &[f64]) -> Result<(Vec<GridPoint>, Vec<f64>)> {
    let mut pts = Vec::new();
    let mut dlog = Vec::new();
    for &r in grid {
        let (hv, dv) = (h(r), dh(r));
        if !(hv > 0.0) {
            return Err(Error::Invalid(format!("h({r}) = {hv} is not positive")));
        }
        let v = d_star_phi_numeric(hv, dv)?;
        pts.push(GridPoint { r, d_star_phi_norm: v, r_times_norm: r * v });
        dlog.push((dv / hv).abs());
    }
    Ok((pts, dlog))
}

/// Leading `r`-exponent of `|τ̃₇|_g̃` at zero after `φ ↦ f³φ`, `f = r^m`, for `h = r^k`;
/// also expressed in the `g̃`-distance `r̃ ∝ r^{m+1}`. `None` when `τ̃₇` vanishes.
pub fn conformal_tau7_exponent(k: i32, m: i32) -> Result<Option<(i32, f64)>> {
    if m == -1 {
        return Err(Error::Invalid("f = r⁻¹ collapses the distance r̃".into()));
    }
    let s = ccy_structure(&ScalarExpr::t_pow(k))?;
    let f = ScalarExpr::t_pow(m);
    let st = conformal_transform(&s, &f)?;
    let n2 = st.metric.norm_sq(&g2_torsion(&st)?.tau7)?;
    if n2.is_zero() {
        return Ok(None);
    }
    let (e, _) = halve(n2.leading_exponent(Limit::AtZero)?);
    Ok(Some((e, e as f64 / (m + 1) as f64)))
}

/// Volume density `r⁵h` of `dr² + r²g₅ + h²θ²` and the ball volume `∫₀^R r⁵h dr`,
/// sampled at `R = 2⁻ⁱ` by the composite Simpson rule.
pub fn ball_volume_samples(h: &dyn Fn(f64) -> f64) -> Vec<(f64, f64, f64)> {
    no_go_grid()
        .into_iter()
        .map(|big_r| {
            let n = 2000;
            let dx = big_r / n as f64;
            let f = |x: f64| x.powi(5) * h(x);
            let mut s = f(0.0) + f(big_r);
            for i in 1..n {
                s += f(i as f64 * dx) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            (big_r, f(big_r), s * dx / 3.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_h_is_coclosed() {
        let s = ccy_structure(&ScalarExpr::int(2)).unwrap();
        assert!(s.dpsi().is_zero());
        assert!(!s.dphi().is_zero());
    }

    #[test]
    fn derivatives_match_display() {
        let c = CCYData::new(ScalarExpr::t_pow(2)).unwrap();
        let s = c.g2().unwrap();
        let dh = c.dh();
        let w = &c.cy.omega;
        let dphi = dh.wedge(&c.theta).wedge(w).add(&w.wedge(w).scale(&c.h));
        let dpsi = dh.wedge(&c.theta).wedge(&c.cy.im_ups).neg();
        assert_eq!(s.dphi(), dphi);
        assert_eq!(s.dpsi(), dpsi);
    }

    #[test]
    fn corrected_closed_forms_match_direct_torsion() {
        for k in 0..4 {
            let (_, r) = ccy_torsion(&ScalarExpr::t_pow(k), Variant::Corrected).unwrap();
            assert!(r.component_mismatch.is_empty() && r.norm_mismatch.is_empty(), "{r:?}");
        }
        let (_, r) = ccy_torsion(&ScalarExpr::t(), Variant::Printed).unwrap();
        assert_eq!(r.component_mismatch, ["tau14", "tau27"]);
    }

    #[test]
    fn numeric_and_exact_d_star_phi_agree() {
        let r = no_go_check(&ScalarExpr::t_pow(3)).unwrap();
        let n2: ScalarExpr = crate::parse_scalar(&r.exact_norm).unwrap();
        for p in &r.grid {
            let exact = n2.eval(p.r, &ParamEnv::new()).unwrap().sqrt();
            assert!((p.d_star_phi_norm - exact).abs() <= 1e-10 * exact.max(1.0));
        }
    }

    #[test]
    fn d_star_phi_is_twice_d_log_h() {
        for k in 1..4 {
            let r = no_go_check(&ScalarExpr::t_pow(k)).unwrap();
            assert_eq!(r.ratio_to_dlog_sq.as_deref(), Some("2"));
            assert_eq!((r.exponent_at_zero, r.verdict), (Some((-1, 0)), Verdict::Unbounded));
            let target = 2f64.sqrt() * k as f64;
            assert!(r.grid.iter().all(|p| (p.r_times_norm - target).abs() < 1e-10), "{r:?}");
        }
    }

    #[test]
    fn conformal_rescaling_keeps_rate_minus_one() {
        for (k, m) in [(1, 1), (2, -2), (3, 2)] {
            let (_, in_tilde) = conformal_tau7_exponent(k, m).unwrap().unwrap();
            assert!((in_tilde + 1.0).abs() < 1e-12, "{k} {m}");
        }
        assert!(conformal_tau7_exponent(2, -1).is_err());
    }

    #[test]
    fn ball_volume_scales_with_exponent_eight() {
        for (r, density, vol) in ball_volume_samples(&|x| x * x) {
            assert!((density - r.powi(7)).abs() <= 1e-12 * r.powi(7));
            assert!((vol - r.powi(8) / 8.0).abs() <= 1e-9 * r.powi(8));
        }
    }
}
