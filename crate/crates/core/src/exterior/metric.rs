//! Metrics on a block of coframe labels, with Hodge star and norms.
//!
//! A metric is supported on a subset `S` of the labels (all of them for a
//! 7-dimensional structure, six of them for the basic SU(3) block). Forms
//! passed to [`Metric::hodge`] must only have legs in `S`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exterior::form::{indices_of, mask_of, masks_of_degree, wedge_sign, Coeff, Form, FormExpr, Mask, NumForm};
use crate::scalar::{ParamEnv, ScalarExpr};

/// Determinant of the submatrix `rows × cols` by Laplace expansion with
/// memoisation over column subsets. Zero entries are skipped.
pub fn minor<C: Coeff>(m: &[Vec<C>], rows: &[usize], cols: &[usize]) -> C {
    let k = rows.len();
    debug_assert_eq!(k, cols.len());
    if k == 0 {
        return C::one();
    }
    // memo[s] = det(rows[..|s|] × {cols[j] : j ∈ s})
    let mut memo: Vec<Option<C>> = vec![None; 1 << k];
    memo[0] = Some(C::one());
    for s in 1usize..(1 << k) {
        let j = s.count_ones() as usize;
        let r = rows[j - 1];
        let mut acc = C::zero();
        for c in 0..k {
            if s & (1 << c) == 0 {
                continue;
            }
            let entry = &m[r][cols[c]];
            if entry.is_zero() {
                continue;
            }
            let rest = memo[s & !(1 << c)].as_ref().expect("smaller subsets first");
            if rest.is_zero() {
                continue;
            }
            let above = (s >> (c + 1)).count_ones();
            let term = entry.mul(rest);
            acc = if above % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        memo[s] = Some(acc);
    }
    memo[(1 << k) - 1].take().expect("full subset")
}

#[derive(Debug)]
pub struct Metric<C: Coeff> {
    n: usize,
    support: Mask,
    g: Vec<Vec<C>>,
    inv: Vec<Vec<C>>,
    det: C,
    /// `vol = vol_coeff · e^S`, with `vol_coeff² = det`.
    vol_coeff: C,
    /// `Λᵏ(g⁻¹)` minors, filled on first use.
    lambda: Vec<OnceLock<Vec<Vec<C>>>>,
}

impl<C: Coeff> Clone for Metric<C> {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            support: self.support,
            g: self.g.clone(),
            inv: self.inv.clone(),
            det: self.det.clone(),
            vol_coeff: self.vol_coeff.clone(),
            lambda: (0..self.lambda.len()).map(|_| OnceLock::new()).collect(),
        }
    }
}

pub type MetricExpr = Metric<ScalarExpr>;
pub type NumMetric = Metric<f64>;

impl<C: Coeff> Metric<C> {
    /// Metric with the positive square root of its determinant as volume coefficient.
    pub fn new(n: usize, support: Mask, g: Vec<Vec<C>>) -> Result<Self> {
        Self::build(n, support, g, None)
    }

    /// Metric with a prescribed volume coefficient, checked against the determinant.
    pub fn with_volume(n: usize, support: Mask, g: Vec<Vec<C>>, vol_coeff: C) -> Result<Self> {
        Self::build(n, support, g, Some(vol_coeff))
    }

    /// Metric supported on every label.
    pub fn full(g: Vec<Vec<C>>) -> Result<Self> {
        let n = g.len();
        Self::new(n, full_mask(n), g)
    }

    pub fn diagonal(n: usize, support: Mask, diag: &[C]) -> Result<Self> {
        let mut g = vec![vec![C::zero(); n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = diag[i].clone();
        }
        Self::new(n, support, g)
    }

    fn build(n: usize, support: Mask, g: Vec<Vec<C>>, vol: Option<C>) -> Result<Self> {
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("metric must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let inside = support & (1 << i) != 0 && support & (1 << j) != 0;
                if !inside && !g[i][j].is_zero() {
                    return Err(Error::Invalid(format!("metric entry ({i},{j}) outside the support")));
                }
                if g[i][j] != g[j][i] {
                    return Err(Error::Invalid(format!("metric is not symmetric at ({i},{j})")));
                }
            }
        }
        let s = indices_of(support);
        let det = minor(&g, &s, &s);
        let det_inv = det.inverse().map_err(|_| Error::NonUnitDeterminant(format!("{det:?}")))?;
        let mut inv = vec![vec![C::zero(); n]; n];
        for (a, &i) in s.iter().enumerate() {
            for (b, &j) in s.iter().enumerate() {
                // adj[i][j] = (−1)^{a+b} det(g without row j, col i)
                let rows: Vec<usize> = s.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = s.iter().copied().filter(|&c| c != i).collect();
                let m = minor(&g, &rows, &cols).mul(&det_inv);
                inv[i][j] = if (a + b) % 2 == 0 { m } else { m.neg() };
            }
        }
        let vol_coeff = match vol {
            Some(v) => {
                if !v.mul(&v).approx_eq(&det) {
                    return Err(Error::Invalid("volume coefficient squared differs from the determinant".into()));
                }
                v
            }
            None => det.sqrt().map_err(|_| Error::NoExactSqrt(format!("{det:?}")))?,
        };
        Ok(Self {
            n,
            support,
            g,
            inv,
            det,
            vol_coeff,
            lambda: (0..=s.len()).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> Mask {
        self.support
    }

    /// Number of labels in the support.
    pub fn rank(&self) -> usize {
        self.support.count_ones() as usize
    }

    pub fn matrix(&self) -> &[Vec<C>] {
        &self.g
    }

    pub fn inverse_matrix(&self) -> &[Vec<C>] {
        &self.inv
    }

    pub fn det(&self) -> &C {
        &self.det
    }

    pub fn vol_coeff(&self) -> &C {
        &self.vol_coeff
    }

    /// Riemannian volume form `vol_coeff · e^S`.
    pub fn vol(&self) -> Form<C> {
        Form::monomial(self.n, &indices_of(self.support), self.vol_coeff.clone())
    }

    fn check_basic(&self, a: &Form<C>) -> Result<()> {
        let extra = a.support() & !self.support;
        if extra != 0 {
            return Err(Error::NotBasic(format!("legs {:?} outside the metric block", indices_of(extra))));
        }
        Ok(())
    }

    fn lambda_k(&self, k: usize) -> &Vec<Vec<C>> {
        self.lambda[k].get_or_init(|| {
            let masks = self.block_masks(k);
            masks
                .iter()
                .map(|&i| {
                    let ri = indices_of(i);
                    masks.iter().map(|&j| minor(&self.inv, &ri, &indices_of(j))).collect()
                })
                .collect()
        })
    }

    fn block_masks(&self, k: usize) -> Vec<Mask> {
        masks_of_degree(self.n, k).into_iter().filter(|m| m & !self.support == 0).collect()
    }

    /// Components `a^I = Σ_K Λᵏ(g⁻¹)_{IK} a_K` for the masks of the block.
    fn raise(&self, a: &Form<C>) -> Vec<(Mask, C)> {
        let k = a.degree();
        let masks = self.block_masks(k);
        let lam = self.lambda_k(k);
        let mut out = Vec::new();
        for (p, &i) in masks.iter().enumerate() {
            let mut acc = C::zero();
            for (q, &j) in masks.iter().enumerate() {
                let l = &lam[p][q];
                if l.is_zero() {
                    continue;
                }
                let aj = a.get(j);
                if aj.is_zero() {
                    continue;
                }
                acc = acc.add(&l.mul(&aj));
            }
            if !acc.is_zero() {
                out.push((i, acc));
            }
        }
        out
    }

    /// `∗a` with `a ∧ ∗b = ⟨a, b⟩ · orientation · vol`.
    pub fn hodge(&self, a: &Form<C>, orientation: i32) -> Result<Form<C>> {
        self.check_basic(a)?;
        let m = self.rank();
        let k = a.degree();
        let scale = if orientation < 0 { self.vol_coeff.neg() } else { self.vol_coeff.clone() };
        let mut comps = Vec::new();
        for (i, ai) in self.raise(a) {
            let rest = self.support & !i;
            let sign = wedge_sign(i, rest);
            let c = ai.mul(&scale);
            comps.push((rest, if sign > 0 { c } else { c.neg() }));
        }
        Ok(Form::from_comps(self.n, m - k, comps))
    }

    /// Pointwise inner product of two forms of equal degree.
    pub fn inner(&self, a: &Form<C>, b: &Form<C>) -> Result<C> {
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch { expected: a.degree(), got: b.degree() });
        }
        self.check_basic(a)?;
        self.check_basic(b)?;
        let mut acc = C::zero();
        for (i, ai) in self.raise(a) {
            let bi = b.get(i);
            if !bi.is_zero() {
                acc = acc.add(&ai.mul(&bi));
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self, a: &Form<C>) -> Result<C> {
        self.inner(a, a)
    }

    /// Index-lowering of a vector.
    pub fn flat(&self, v: &[C]) -> Form<C> {
        Form::from_one_form_coeffs(&mat_vec(&self.g, v))
    }

    /// Index-raising of a 1-form.
    pub fn sharp(&self, a: &Form<C>) -> Vec<C> {
        mat_vec(&self.inv, &a.one_form_coeffs())
    }

    pub fn vec_inner(&self, x: &[C], y: &[C]) -> C {
        let gy = mat_vec(&self.g, y);
        x.iter().zip(&gy).fold(C::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    /// Interior product with the metric dual of a 1-form.
    pub fn contract_dual(&self, one_form: &Form<C>, a: &Form<C>) -> Result<Form<C>> {
        a.contract(&self.sharp(one_form))
    }

    /// Same metric scaled by `c` (volume coefficient scales by `c^{rank/2}`).
    pub fn scaled(&self, c: &C, vol_factor: &C) -> Result<Self> {
        let g = self.g.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect();
        Self::with_volume(self.n, self.support, g, self.vol_coeff.mul(vol_factor))
    }
}

impl MetricExpr {
    pub fn eval(&self, t: f64, env: &ParamEnv) -> Result<NumMetric> {
        let ev = |m: &[Vec<ScalarExpr>]| -> Result<Vec<Vec<f64>>> {
            m.iter().map(|r| r.iter().map(|x| x.eval(t, env)).collect()).collect()
        };
        let g = ev(&self.g)?;
        let vol = self.vol_coeff.eval(t, env)?;
        NumMetric::with_volume_tol(self.n, self.support, g, vol)
    }

    pub fn substitute_all(&self, subs: &std::collections::BTreeMap<String, ScalarExpr>) -> Result<MetricExpr> {
        let g = self
            .g
            .iter()
            .map(|r| r.iter().map(|x| x.substitute_all(subs)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MetricExpr::with_volume(self.n, self.support, g, self.vol_coeff.substitute_all(subs)?)
    }
}

impl NumMetric {
    /// Numeric metric whose volume coefficient is only checked to relative precision.
    pub fn with_volume_tol(n: usize, support: Mask, g: Vec<Vec<f64>>, vol: f64) -> Result<Self> {
        let mut m = Self::new(n, support, g)?;
        if ((m.vol_coeff - vol.abs()) / m.vol_coeff).abs() > 1e-8 {
            return Err(Error::Invalid("volume coefficient squared differs from the determinant".into()));
        }
        m.vol_coeff = vol;
        Ok(m)
    }

    /// Positive definiteness via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let s = indices_of(self.support);
        (1..=s.len()).all(|k| minor(&self.g, &s[..k], &s[..k]) > 0.0)
    }

    pub fn max_abs_diff(&self, other: &NumMetric) -> f64 {
        self.g
            .iter()
            .flatten()
            .zip(other.g.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn full_mask(n: usize) -> Mask {
    mask_of(&(0..n).collect::<Vec<_>>())
}

fn mat_vec<C: Coeff>(m: &[Vec<C>], v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(C::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc.add(&a.mul(b)) })
        })
        .collect()
}

/// Norm of a numeric form, `√⟨a, a⟩`.
pub fn num_norm(g: &NumMetric, a: &NumForm) -> Result<f64> {
    Ok(g.norm_sq(a)?.max(0.0).sqrt())
}

/// `FormExpr` convenience: `⟨a, b⟩` as an exact scalar.
pub fn inner_expr(g: &MetricExpr, a: &FormExpr, b: &FormExpr) -> Result<ScalarExpr> {
    g.inner(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(n: usize) -> MetricExpr {
        MetricExpr::diagonal(n, full_mask(n), &vec![ScalarExpr::one(); n]).unwrap()
    }

    #[test]
    fn star_of_one_and_vol() {
        let g = euclid(4);
        let one = FormExpr::scalar(4, ScalarExpr::one());
        let vol = g.hodge(&one, 1).unwrap();
        assert_eq!(vol, FormExpr::basis(4, &[0, 1, 2, 3]));
        assert_eq!(g.hodge(&vol, 1).unwrap(), one);
    }

    #[test]
    fn weighted_star() {
        // g = diag(t², 1, 1): ∗e¹ = t⁻¹ e²³ and |e¹|² = t⁻²
        let t2 = ScalarExpr::t_pow(2);
        let g = MetricExpr::diagonal(3, full_mask(3), &[t2, ScalarExpr::one(), ScalarExpr::one()]).unwrap();
        let e1 = FormExpr::basis(3, &[0]);
        assert_eq!(g.hodge(&e1, 1).unwrap(), FormExpr::monomial(3, &[1, 2], ScalarExpr::t_pow(-1)));
        assert_eq!(g.norm_sq(&e1).unwrap(), ScalarExpr::t_pow(-2));
    }

    #[test]
    fn off_diagonal_inverse() {
        let one = ScalarExpr::one;
        let g = vec![vec![ScalarExpr::int(2), one()], vec![one(), one()]];
        let m = MetricExpr::full(g).unwrap();
        assert_eq!(m.inverse_matrix()[0][1], ScalarExpr::int(-1));
        assert_eq!(m.inverse_matrix()[1][1], ScalarExpr::int(2));
    }

    #[test]
    fn non_basic_form_is_rejected() {
        let g = MetricExpr::diagonal(3, 0b110, &[ScalarExpr::zero(), ScalarExpr::one(), ScalarExpr::one()]).unwrap();
        assert!(matches!(g.hodge(&FormExpr::basis(3, &[0]), 1), Err(Error::NotBasic(_))));
        assert_eq!(g.hodge(&FormExpr::basis(3, &[1]), 1).unwrap(), FormExpr::basis(3, &[2]));
    }

    #[test]
    fn non_unit_determinant_errors() {
        let g = vec![vec![ScalarExpr::one() + ScalarExpr::t()]];
        assert!(matches!(MetricExpr::full(g), Err(Error::NonUnitDeterminant(_))));
    }
}
