//! Sparse graded forms over a coframe of at most eight 1-forms.
//!
//! A basis monomial `e^{i1} ∧ … ∧ e^{ik}` (with `i1 < … < ik`) is stored as a
//! bitmask. The same container serves the exact path (`ScalarExpr`
//! coefficients) and the numeric path (`f64` coefficients).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{ParamEnv, QuadNum, ScalarExpr};

/// Coefficient ring for forms and metrics.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_quad(q: &QuadNum) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn sqrt(&self) -> Result<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_quad(&QuadNum::from_int(n))
    }

    /// Equality up to the ring's working precision.
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

impl Coeff for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }
    fn one() -> Self {
        ScalarExpr::one()
    }
    fn from_quad(q: &QuadNum) -> Self {
        ScalarExpr::constant(q.clone())
    }
    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        ScalarExpr::inverse(self)
    }
    fn sqrt(&self) -> Result<Self> {
        ScalarExpr::sqrt(self).ok_or_else(|| Error::NoExactSqrt(self.to_string()))
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_quad(q: &QuadNum) -> Self {
        q.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        if *self == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-10 * (1.0 + self.abs().max(other.abs()))
    }
    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            Err(Error::NoExactSqrt(self.to_string()))
        } else {
            Ok(f64::sqrt(*self))
        }
    }
}

/// Bitmask of a sorted index set.
pub type Mask = u8;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `e^I ∧ e^J` relative to `e^{I∪J}` for disjoint `I`, `J`.
pub fn wedge_sign(i: Mask, j: Mask) -> i32 {
    let mut inversions = 0;
    for b in indices_of(j) {
        inversions += (i >> (b + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All masks of `k` indices out of `n`, in increasing order.
pub fn masks_of_degree(n: usize, k: usize) -> Vec<Mask> {
    (0..(1u16 << n)).filter(|m| m.count_ones() as usize == k).map(|m| m as Mask).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<C> {
    n: usize,
    deg: usize,
    comps: BTreeMap<Mask, C>,
}

/// Exact differential form.
pub type FormExpr = Form<ScalarExpr>;
/// Numeric form at a sample point.
pub type NumForm = Form<f64>;

impl<C: Coeff> Form<C> {
    pub fn zero(n: usize, deg: usize) -> Self {
        assert!(n <= 8 && deg <= n, "form of degree {deg} on {n} labels");
        Form { n, deg, comps: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: C) -> Self {
        let mut f = Self::zero(n, 0);
        f.insert(0, c);
        f
    }

    /// `c · e^{i1} ∧ … ∧ e^{ik}` for arbitrary (not necessarily sorted) indices.
    pub fn monomial(n: usize, indices: &[usize], c: C) -> Self {
        let mut f = Self::zero(n, indices.len());
        let mut sorted = indices.to_vec();
        // parity-tracked insertion sort
        let mut sign = 1;
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return f;
        }
        assert!(sorted.iter().all(|&i| i < n), "index out of range");
        let c = if sign < 0 { c.neg() } else { c };
        f.insert(mask_of(&sorted), c);
        f
    }

    pub fn basis(n: usize, indices: &[usize]) -> Self {
        Self::monomial(n, indices, C::one())
    }

    pub fn from_comps(n: usize, deg: usize, comps: impl IntoIterator<Item = (Mask, C)>) -> Self {
        let mut f = Self::zero(n, deg);
        for (m, c) in comps {
            assert_eq!(m.count_ones() as usize, deg);
            f.add_to(m, &c);
        }
        f
    }

    fn insert(&mut self, m: Mask, c: C) {
        if !c.is_zero() {
            self.comps.insert(m, c);
        }
    }

    fn add_to(&mut self, m: Mask, c: &C) {
        if c.is_zero() {
            return;
        }
        let v = match self.comps.get(&m) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if v.is_zero() {
            self.comps.remove(&m);
        } else {
            self.comps.insert(m, v);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn get(&self, m: Mask) -> C {
        self.comps.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn comp(&self, indices: &[usize]) -> C {
        self.get(mask_of(indices))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mask, &C)> {
        self.comps.iter()
    }

    pub fn nnz(&self) -> usize {
        self.comps.len()
    }

    /// Union of the index sets of all components.
    pub fn support(&self) -> Mask {
        self.comps.keys().fold(0, |a, m| a | m)
    }

    /// The coefficient of a top-degree form, or of a 0-form.
    pub fn top_coeff(&self) -> C {
        if self.deg == 0 {
            self.get(0)
        } else {
            self.comps.values().next().cloned().unwrap_or_else(C::zero)
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.n, other.n, "forms over different coframes");
        assert_eq!(self.deg, other.deg, "adding forms of degree {} and {}", self.deg, other.deg);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.comps {
            out.add_to(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.deg);
        }
        self.map(|v| v.mul(c))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&C::from_int(k))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.n, self.deg);
        for (m, c) in &self.comps {
            out.insert(*m, f(c));
        }
        out
    }

    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Form<D>> {
        let mut out = Form::<D>::zero(self.n, self.deg);
        for (m, c) in &self.comps {
            out.insert(*m, f(c)?);
        }
        Ok(out)
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.n, other.n, "forms over different coframes");
        if self.deg + other.deg > self.n {
            return Err(Error::DegreeOverflow(self.deg, other.deg, self.n));
        }
        let mut out = Self::zero(self.n, self.deg + other.deg);
        for (ma, ca) in &self.comps {
            for (mb, cb) in &other.comps {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.mul(cb);
                let c = if wedge_sign(*ma, *mb) < 0 { c.neg() } else { c };
                out.add_to(ma | mb, &c);
            }
        }
        Ok(out)
    }

    /// Wedge product. Panics on degree overflow; see [`Form::try_wedge`].
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge degree overflow")
    }

    pub fn pow_wedge(&self, k: usize) -> Self {
        let mut acc = Self::scalar(self.n, C::one());
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Interior product with the `k`-th frame vector.
    pub fn contract_basis(&self, k: usize) -> Result<Self> {
        if self.deg == 0 {
            return Err(Error::ContractDegreeZero);
        }
        let bit = 1u8 << k;
        let mut out = Self::zero(self.n, self.deg - 1);
        for (m, c) in &self.comps {
            if m & bit == 0 {
                continue;
            }
            let below = (m & (bit - 1)).count_ones();
            let c = if below % 2 == 1 { c.neg() } else { c.clone() };
            out.add_to(m & !bit, &c);
        }
        Ok(out)
    }

    /// Interior product with the vector whose frame components are `v`.
    pub fn contract(&self, v: &[C]) -> Result<Self> {
        assert_eq!(v.len(), self.n);
        if self.deg == 0 {
            return Err(Error::ContractDegreeZero);
        }
        let mut out = Self::zero(self.n, self.deg - 1);
        for (k, vk) in v.iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            out = out.add(&self.contract_basis(k)?.scale(vk));
        }
        Ok(out)
    }

    /// Evaluate a 2-form on a pair of vectors, with `(α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X)`.
    pub fn eval2(&self, x: &[C], y: &[C]) -> Result<C> {
        assert_eq!(self.deg, 2);
        Ok(self.contract(x)?.contract(y)?.get(0))
    }

    /// Components of a 1-form as a vector of length `n`.
    pub fn one_form_coeffs(&self) -> Vec<C> {
        assert_eq!(self.deg, 1);
        (0..self.n).map(|i| self.get(1 << i)).collect()
    }

    pub fn from_one_form_coeffs(v: &[C]) -> Self {
        Self::from_comps(v.len(), 1, v.iter().enumerate().map(|(i, c)| (1u8 << i, c.clone())))
    }
}

impl FormExpr {
    pub fn eval(&self, t: f64, env: &ParamEnv) -> Result<NumForm> {
        self.try_map(|c| c.eval(t, env))
    }

    /// Map every coefficient through `d/dt`.
    pub fn coeff_deriv(&self) -> FormExpr {
        self.map(|c| c.deriv())
    }

    pub fn scale_expr(&self, c: &ScalarExpr) -> FormExpr {
        self.scale(c)
    }

    pub fn substitute(&self, name: &str, value: &ScalarExpr) -> Result<FormExpr> {
        self.try_map(|c| c.substitute(name, value))
    }

    pub fn substitute_all(&self, subs: &BTreeMap<String, ScalarExpr>) -> Result<FormExpr> {
        self.try_map(|c| c.substitute_all(subs))
    }
}

impl NumForm {
    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.comps.values().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn as_vec(&self) -> Vec<(Mask, f64)> {
        self.comps.iter().map(|(m, c)| (*m, *c)).collect()
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let idx: Vec<String> = indices_of(*m).iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({c}) * e[{}]", idx.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Form<f64>;

    #[test]
    fn repeated_index_vanishes() {
        let e1 = F::basis(3, &[0]);
        assert!(e1.wedge(&e1).is_zero());
    }

    #[test]
    fn graded_commutativity() {
        let a = F::basis(4, &[0]);
        let b = F::basis(4, &[1, 2]);
        let c = F::basis(4, &[3]);
        assert_eq!(a.wedge(&b), b.wedge(&a));
        assert_eq!(a.wedge(&c), c.wedge(&a).neg());
        assert_eq!(F::monomial(4, &[2, 0, 1], 1.0), F::basis(4, &[0, 1, 2]));
        assert_eq!(F::monomial(4, &[1, 0], 1.0), F::basis(4, &[0, 1]).neg());
    }

    #[test]
    fn overflow_is_an_error() {
        let a = F::basis(3, &[0, 1]);
        assert!(matches!(a.try_wedge(&a), Err(Error::DegreeOverflow(2, 2, 3))));
    }

    #[test]
    fn contraction_examples() {
        let e12 = F::basis(3, &[0, 1]);
        assert_eq!(e12.contract_basis(0).unwrap(), F::basis(3, &[1]));
        assert_eq!(e12.contract_basis(1).unwrap(), F::basis(3, &[0]).neg());
        assert!(F::scalar(3, 2.0).contract_basis(0).is_err());
        assert_eq!(e12.eval2(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), 1.0);
    }
}
