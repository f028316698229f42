//! SU(3)-structures on a six-label block, their form decompositions and torsion.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exterior::{indices_of, masks_of_degree, Coframe, FormExpr, Mask, MetricExpr, NumForm};
use crate::scalar::{ParamEnv, QuadNum, ScalarExpr};

fn q(n: i64, d: i64) -> ScalarExpr {
    ScalarExpr::frac(n, d)
}

fn residual(what: &str, r: &FormExpr) -> Result<()> {
    if r.is_zero() {
        Ok(())
    } else {
        Err(Error::Residual { what: what.into(), residual: r.to_string() })
    }
}

/// `(ω, Υ)` on the labels of `metric.support()`, possibly inside a larger coframe.
#[derive(Clone, Debug)]
pub struct SU3Structure {
    pub frame: Coframe,
    pub omega: FormExpr,
    pub re_ups: FormExpr,
    pub im_ups: FormExpr,
    pub metric: MetricExpr,
    /// `J[k][i]`: the `k`-th component of `J E_i`.
    pub j: Vec<Vec<ScalarExpr>>,
}

impl SU3Structure {
    /// Checks `ω∧Υ = 0`, `ω³/6 = ReΥ∧ImΥ/4 = vol`, `∗ReΥ = ImΥ`, `J² = −1` and `g = ω(·, J·)`.
    pub fn new(frame: Coframe, omega: FormExpr, re_ups: FormExpr, im_ups: FormExpr, metric: MetricExpr) -> Result<Self> {
        if metric.rank() != 6 {
            return Err(Error::Invalid("an SU(3)-structure needs a rank-6 metric block".into()));
        }
        let n = frame.dim();
        let vol = metric.vol();
        residual("ω∧ReΥ", &omega.wedge(&re_ups))?;
        residual("ω∧ImΥ", &omega.wedge(&im_ups))?;
        residual("ω³/6 − vol", &omega.pow_wedge(3).scale_expr(&q(1, 6)).sub(&vol))?;
        residual("ReΥ∧ImΥ/4 − vol", &re_ups.wedge(&im_ups).scale_expr(&q(1, 4)).sub(&vol))?;
        residual("∗ReΥ − ImΥ", &metric.hodge(&re_ups, 1)?.sub(&im_ups))?;

        let support = indices_of(metric.support());
        let om = two_form_matrix(&omega);
        let ginv = metric.inverse_matrix();
        let mut j = vec![vec![ScalarExpr::zero(); n]; n];
        for &k in &support {
            for &i in &support {
                let mut acc = ScalarExpr::zero();
                for &l in &support {
                    acc += &(&ginv[k][l] * &om[i][l]);
                }
                j[k][i] = acc;
            }
        }
        for &a in &support {
            for &b in &support {
                let mut jj = ScalarExpr::zero();
                let mut gg = ScalarExpr::zero();
                for &c in &support {
                    jj += &(&j[a][c] * &j[c][b]);
                    gg += &(&om[a][c] * &j[c][b]);
                }
                let id = if a == b { ScalarExpr::one() } else { ScalarExpr::zero() };
                if jj != -&id {
                    return Err(Error::Residual { what: format!("J² + 1 at ({a},{b})"), residual: (&jj + &id).to_string() });
                }
                if gg != metric.matrix()[a][b] {
                    return Err(Error::Residual { what: format!("g − ω(·,J·) at ({a},{b})"), residual: (&gg - &metric.matrix()[a][b]).to_string() });
                }
            }
        }
        Ok(SU3Structure { frame, omega, re_ups, im_ups, metric, j })
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn support(&self) -> Mask {
        self.metric.support()
    }

    pub fn star(&self, a: &FormExpr) -> Result<FormExpr> {
        self.metric.hodge(a, 1)
    }

    pub fn j_vec(&self, x: &[ScalarExpr]) -> Vec<ScalarExpr> {
        self.j
            .iter()
            .map(|row| row.iter().zip(x).fold(ScalarExpr::zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// `J` on 1-forms through the metric: `Jα = (J α♯)♭`.
    pub fn j_form(&self, a: &FormExpr) -> FormExpr {
        self.metric.flat(&self.j_vec(&self.metric.sharp(a)))
    }

    pub fn vol(&self) -> FormExpr {
        self.metric.vol()
    }

    fn check_basic(&self, a: &FormExpr) -> Result<()> {
        if a.support() & !self.support() != 0 {
            return Err(Error::NotBasic(a.to_string()));
        }
        Ok(())
    }
}

/// `m[i][j] = β(E_i, E_j)`.
pub fn two_form_matrix(b: &FormExpr) -> Vec<Vec<ScalarExpr>> {
    let n = b.dim();
    let mut m = vec![vec![ScalarExpr::zero(); n]; n];
    for (mask, c) in b.iter() {
        let idx = indices_of(*mask);
        m[idx[0]][idx[1]] = c.clone();
        m[idx[1]][idx[0]] = -c;
    }
    m
}

/// `β = X⌟ReΥ + λω + σ` with `σ ∈ Ω²₈`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaCurvature {
    pub x: Vec<ScalarExpr>,
    pub lambda: ScalarExpr,
    pub sigma: FormExpr,
}

impl ThetaCurvature {
    pub fn reassemble(&self, s: &SU3Structure) -> Result<FormExpr> {
        Ok(s.re_ups.contract(&self.x)?.add(&s.omega.scale(&self.lambda)).add(&self.sigma))
    }
}

/// Type decomposition of a basic 2-form.
pub fn decompose_2form_su3(beta: &FormExpr, s: &SU3Structure) -> Result<ThetaCurvature> {
    if beta.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, got: beta.degree() });
    }
    s.check_basic(beta)?;
    let lambda = &s.metric.inner(beta, &s.omega)? * &q(1, 3);
    // β∧ReΥ = X♭∧ω² and ∗(X♭∧ω²) = 2JX
    let jx = s.star(&beta.wedge(&s.re_ups))?.scale(&q(1, 2));
    let x = s.metric.sharp(&s.j_form(&jx).neg());
    let sigma = beta.sub(&s.re_ups.contract(&x)?).sub(&s.omega.scale(&lambda));
    let w2 = s.omega.wedge(&s.omega);
    residual("σ∧ω²", &sigma.wedge(&w2))?;
    residual("σ∧ReΥ", &sigma.wedge(&s.re_ups))?;
    residual("σ∧ImΥ", &sigma.wedge(&s.im_ups))?;
    Ok(ThetaCurvature { x, lambda, sigma })
}

/// `β = f₁ReΥ + f₂ImΥ + Y∧ω + γ` with `γ ∈ Ω³₁₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeFormParts {
    pub f1: ScalarExpr,
    pub f2: ScalarExpr,
    pub y: FormExpr,
    pub gamma12: FormExpr,
}

pub fn decompose_3form_su3(beta: &FormExpr, s: &SU3Structure) -> Result<ThreeFormParts> {
    if beta.degree() != 3 {
        return Err(Error::DegreeMismatch { expected: 3, got: beta.degree() });
    }
    s.check_basic(beta)?;
    let f1 = &s.star(&beta.wedge(&s.im_ups))?.get(0) * &q(1, 4);
    let f2 = &s.star(&beta.wedge(&s.re_ups))?.get(0) * &q(-1, 4);
    let y = s.j_form(&s.star(&beta.wedge(&s.omega))?).scale_expr(&q(-1, 2));
    let gamma12 = beta
        .sub(&s.re_ups.scale(&f1))
        .sub(&s.im_ups.scale(&f2))
        .sub(&y.wedge(&s.omega));
    residual("γ∧ω", &gamma12.wedge(&s.omega))?;
    residual("γ∧ReΥ", &gamma12.wedge(&s.re_ups))?;
    residual("γ∧ImΥ", &gamma12.wedge(&s.im_ups))?;
    Ok(ThreeFormParts { f1, f2, y, gamma12 })
}

/// `(υ₁, υ̂₁, υ₆, υ̂₆, υ₈, υ̂₈, υ₁₂)`; the 1-form parts are stored as 1-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct SU3Torsion {
    pub v1: ScalarExpr,
    pub v1hat: ScalarExpr,
    pub v6: FormExpr,
    pub v6hat: FormExpr,
    pub v8: FormExpr,
    pub v8hat: FormExpr,
    pub v12: FormExpr,
}

impl SU3Torsion {
    pub fn is_zero(&self) -> bool {
        self.v1.is_zero()
            && self.v1hat.is_zero()
            && self.v6.is_zero()
            && self.v6hat.is_zero()
            && self.v8.is_zero()
            && self.v8hat.is_zero()
            && self.v12.is_zero()
    }

    /// `(dω, dReΥ, dImΥ)` rebuilt from the multiplet.
    pub fn reassemble(&self, s: &SU3Structure) -> (FormExpr, FormExpr, FormExpr) {
        let w = &s.omega;
        let w2 = w.wedge(w);
        let dw = s
            .re_ups
            .scale(&(&self.v1 * &ScalarExpr::int(3)))
            .add(&s.im_ups.scale(&(&self.v1hat * &ScalarExpr::int(3))))
            .add(&self.v12)
            .add(&self.v6.wedge(w));
        let dre = w2
            .scale(&(&self.v1hat * &ScalarExpr::int(2)))
            .add(&self.v6hat.wedge(&s.re_ups))
            .add(&self.v8.wedge(w));
        let dim = w2
            .scale(&(&self.v1 * &ScalarExpr::int(-2)))
            .add(&self.v6hat.wedge(&s.im_ups))
            .add(&self.v8hat.wedge(w));
        (dw, dre, dim)
    }
}

/// SU(3) torsion from `dω, dReΥ, dImΥ` computed on the structure's frame.
pub fn su3_torsion(s: &SU3Structure) -> Result<SU3Torsion> {
    let d = |a: &FormExpr| s.frame.d(a);
    su3_torsion_from(s, &d(&s.omega), &d(&s.re_ups), &d(&s.im_ups))
}

/// SU(3) torsion from prescribed derivatives (which must be basic).
pub fn su3_torsion_from(s: &SU3Structure, dw: &FormExpr, dre: &FormExpr, dim: &FormExpr) -> Result<SU3Torsion> {
    let p = decompose_3form_su3(dw, s)?;
    // ∗(Y∧ReΥ) = (JY)⌟ReΥ, ∗(Y∧ImΥ) = Y⌟ReΥ, ∗ω² = 2ω, ∗(σ∧ω) = −σ on Ω²₈
    let re = decompose_2form_su3(&s.star(dre)?, s)?;
    let im = decompose_2form_su3(&s.star(dim)?, s)?;
    let v6hat = s.j_form(&s.metric.flat(&re.x)).neg();
    let tor = SU3Torsion {
        v1: &p.f1 * &q(1, 3),
        v1hat: &p.f2 * &q(1, 3),
        v6: p.y,
        v6hat,
        v8: re.sigma.neg(),
        v8hat: im.sigma.neg(),
        v12: p.gamma12,
    };
    let (rw, rre, rim) = tor.reassemble(s);
    residual("dω reassembly", &rw.sub(dw))?;
    residual("dReΥ reassembly", &rre.sub(dre))?;
    residual("dImΥ reassembly", &rim.sub(dim))?;
    Ok(tor)
}

/// Independent route for the 2-form splitting: least squares against spanning
/// sets of `Ω²₆`, `Ω²₁` and the kernel defining `Ω²₈`, at a numeric sample.
pub fn decompose_2form_linear(beta: &FormExpr, s: &SU3Structure, t: f64, env: &ParamEnv) -> Result<LinearSplit> {
    let masks2: Vec<Mask> = masks_of_degree(s.dim(), 2).into_iter().filter(|m| m & !s.support() == 0).collect();
    let masks5: Vec<Mask> = masks_of_degree(s.dim(), 5).into_iter().filter(|m| m & !s.support() == 0).collect();
    let w = s.omega.eval(t, env)?;
    let re = s.re_ups.eval(t, env)?;
    let im = s.im_ups.eval(t, env)?;
    let w2 = w.wedge(&w);
    let col = |f: &NumForm, masks: &[Mask]| -> Vec<f64> { masks.iter().map(|m| f.get(*m)).collect() };

    // Ω²₈ = ker(σ ↦ (σ∧ω², σ∧ReΥ, σ∧ImΥ))
    let mut cons = DMatrix::<f64>::zeros(1 + 2 * masks5.len(), masks2.len());
    for (c, m) in masks2.iter().enumerate() {
        let e = NumForm::from_comps(s.dim(), 2, [(*m, 1.0)]);
        let mut rows = vec![e.wedge(&w2).top_coeff_or_zero()];
        rows.extend(col(&e.wedge(&re), &masks5));
        rows.extend(col(&e.wedge(&im), &masks5));
        for (r, v) in rows.into_iter().enumerate() {
            cons[(r, c)] = v;
        }
    }
    let ctc = cons.transpose() * &cons;
    let eig = ctc.symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(1.0);
    let kernel: Vec<Vec<f64>> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i].abs() <= 1e-10 * scale)
        .map(|i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();

    let support = indices_of(s.support());
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &k in &support {
        basis.push(col(&re.contract_basis(k)?, &masks2));
    }
    basis.push(col(&w, &masks2));
    let n6 = support.len();
    basis.extend(kernel.iter().cloned());
    let a = DMatrix::from_fn(masks2.len(), basis.len(), |r, c| basis[c][r]);
    let b = DVector::from_vec(col(&beta.eval(t, env)?, &masks2));
    let sol = a.clone().svd(true, true).solve(&b, 1e-12).map_err(|e| Error::Invalid(e.to_string()))?;
    let gap = (&a * &sol - &b).amax();
    // Frame components of X in the support, and λ
    let mut x = vec![0.0; s.dim()];
    for (i, &k) in support.iter().enumerate() {
        x[k] = sol[i];
    }
    Ok(LinearSplit { x, lambda: sol[n6], omega8_dim: kernel.len(), gap })
}

/// Result of [`decompose_2form_linear`].
#[derive(Clone, Debug)]
pub struct LinearSplit {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub omega8_dim: usize,
    pub gap: f64,
}

trait TopOrZero {
    fn top_coeff_or_zero(&self) -> f64;
}

impl TopOrZero for NumForm {
    fn top_coeff_or_zero(&self) -> f64 {
        self.iter().next().map_or(0.0, |(_, c)| *c)
    }
}

/// Constant `QuadNum` helper for callers building structures.
pub fn qn(n: i64, d: i64) -> QuadNum {
    QuadNum::from_frac(n, d)
}
