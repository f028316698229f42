//! Exact scalar functions: finite sums of `c · p^e · t^k · (ln t)^m` with
//! quadratic-field coefficients and commuting formal parameters `p`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::QuadNum;

/// Values bound to formal parameters for numeric evaluation.
pub type ParamEnv = BTreeMap<String, f64>;

/// Which end of `(0, ∞)` a leading-term query looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    AtZero,
    AtInfinity,
}

/// `t^t_exp · (ln t)^log · Π p^e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub t_exp: i32,
    pub log: u32,
    /// Sorted by name, no zero exponents.
    pub params: Vec<(Arc<str>, i32)>,
}

impl Monomial {
    fn mul(&self, other: &Monomial) -> Monomial {
        let mut params: Vec<(Arc<str>, i32)> = Vec::with_capacity(self.params.len() + other.params.len());
        let (mut i, mut j) = (0, 0);
        while i < self.params.len() || j < other.params.len() {
            match (self.params.get(i), other.params.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    if a.1 + b.1 != 0 {
                        params.push((a.0.clone(), a.1 + b.1));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    params.push(a.clone());
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    params.push(b.clone());
                    j += 1;
                }
                (Some(a), None) => {
                    params.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    params.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial { t_exp: self.t_exp + other.t_exp, log: self.log + other.log, params }
    }

    pub fn param_exp(&self, name: &str) -> i32 {
        self.params.iter().find(|(p, _)| &**p == name).map_or(0, |(_, e)| *e)
    }

    fn without_param(&self, name: &str) -> Monomial {
        Monomial {
            t_exp: self.t_exp,
            log: self.log,
            params: self.params.iter().filter(|(p, _)| &**p != name).cloned().collect(),
        }
    }

    fn is_one(&self) -> bool {
        self.t_exp == 0 && self.log == 0 && self.params.is_empty()
    }
}

/// An exact scalar expression. Canonical: sorted terms, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ScalarExpr {
    terms: BTreeMap<Monomial, QuadNum>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::default()
    }

    pub fn one() -> Self {
        Self::constant(QuadNum::one())
    }

    pub fn constant(c: QuadNum) -> Self {
        Self::term(c, Monomial::default())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(QuadNum::from_int(n))
    }

    pub fn frac(n: i64, m: i64) -> Self {
        Self::constant(QuadNum::from_frac(n, m))
    }

    /// `c · t^k`.
    pub fn t_pow(k: i32) -> Self {
        Self::term(QuadNum::one(), Monomial { t_exp: k, ..Default::default() })
    }

    pub fn t() -> Self {
        Self::t_pow(1)
    }

    pub fn log_t() -> Self {
        Self::term(QuadNum::one(), Monomial { log: 1, ..Default::default() })
    }

    pub fn param(name: &str) -> Self {
        Self::param_pow(name, 1)
    }

    pub fn param_pow(name: &str, e: i32) -> Self {
        if e == 0 {
            return Self::one();
        }
        Self::term(QuadNum::one(), Monomial { params: vec![(Arc::from(name), e)], ..Default::default() })
    }

    pub fn term(c: QuadNum, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ScalarExpr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QuadNum)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the expression has no `t`, `ln t` or parameters.
    pub fn as_constant(&self) -> Option<QuadNum> {
        match self.terms.len() {
            0 => Some(QuadNum::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &QuadNum) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    fn add_term(&mut self, m: Monomial, c: QuadNum) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `d/dt`, with `d(ln t)/dt = 1/t`.
    pub fn deriv(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.t_exp != 0 {
                let mm = Monomial { t_exp: m.t_exp - 1, ..m.clone() };
                out.add_term(mm, c * &QuadNum::from_int(m.t_exp as i64));
            }
            if m.log > 0 {
                let mm = Monomial { t_exp: m.t_exp - 1, log: m.log - 1, params: m.params.clone() };
                out.add_term(mm, c * &QuadNum::from_int(m.log as i64));
            }
        }
        out
    }

    /// `d/dt` where the parameters listed in `rates` are functions of `t` with
    /// the given derivatives.
    pub fn deriv_with(&self, rates: &BTreeMap<String, ScalarExpr>) -> Self {
        let mut out = self.deriv();
        if rates.is_empty() {
            return out;
        }
        for (m, c) in &self.terms {
            for (p, e) in &m.params {
                let Some(rate) = rates.get(&**p) else { continue };
                let rest = Self::term(c * &QuadNum::from_int(*e as i64), m.without_param(p));
                out += &(&(&rest * &Self::param_pow(p, e - 1)) * rate);
            }
        }
        out
    }

    /// A unit is a single term `c · t^k · Π p^e` with `c ≠ 0` and no log factor.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().all(|m| m.log == 0)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(if self.is_zero() { Error::DivisionByZero } else { Error::NonUnit(self.to_string()) });
        }
        let (m, c) = self.terms.iter().next().expect("unit has one term");
        let inv = Monomial {
            t_exp: -m.t_exp,
            log: 0,
            params: m.params.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        };
        Ok(Self::term(c.inverse()?, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Exact square root of a unit monomial with even exponents. Parameters are
    /// taken to be positive.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !self.is_unit() {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if m.t_exp % 2 != 0 || m.params.iter().any(|(_, e)| e % 2 != 0) {
            return None;
        }
        let root = c.sqrt()?;
        Some(Self::term(
            root,
            Monomial {
                t_exp: m.t_exp / 2,
                log: 0,
                params: m.params.iter().map(|(p, e)| (p.clone(), e / 2)).collect(),
            },
        ))
    }

    /// Exponent pair `(t-power, log-power)` of the dominant term.
    pub fn leading_exponent(&self, limit: Limit) -> Result<(i32, u32)> {
        let keys = self.terms.keys().map(|m| (m.t_exp, m.log));
        let best = match limit {
            Limit::AtInfinity => keys.max(),
            // smaller t-power dominates; at equal power the larger |ln t|^m does
            Limit::AtZero => keys.min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1))),
        };
        best.ok_or(Error::NoLeadingTerm)
    }

    pub fn eval(&self, t: f64, env: &ParamEnv) -> Result<f64> {
        let lt = t.ln();
        let mut s = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64() * t.powi(m.t_exp) * lt.powi(m.log as i32);
            for (p, e) in &m.params {
                let x = env.get(&**p).ok_or_else(|| Error::UnboundParameter(p.to_string()))?;
                v *= x.powi(*e);
            }
            s += v;
        }
        Ok(s)
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.params.iter().map(|(p, _)| p.to_string())).collect()
    }

    pub fn depends_on_t(&self) -> bool {
        self.terms.keys().any(|m| m.t_exp != 0 || m.log != 0)
    }

    /// Replace the parameter `name` by `value`. Negative powers of `name`
    /// require `value` to be a unit.
    pub fn substitute(&self, name: &str, value: &ScalarExpr) -> Result<Self> {
        let mut out = Self::zero();
        let mut inv: Option<ScalarExpr> = None;
        for (m, c) in &self.terms {
            let e = m.param_exp(name);
            let base = Self::term(c.clone(), m.without_param(name));
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                if inv.is_none() {
                    inv = Some(value.inverse()?);
                }
                inv.as_ref().expect("set above").pow((-e) as u32)
            };
            out += &(&base * &factor);
        }
        Ok(out)
    }

    pub fn substitute_all(&self, subs: &BTreeMap<String, ScalarExpr>) -> Result<Self> {
        let mut out = self.clone();
        for (k, v) in subs {
            out = out.substitute(k, v)?;
        }
        Ok(out)
    }

    /// Highest power of `name` appearing.
    pub fn degree_in(&self, name: &str) -> i32 {
        self.terms.keys().map(|m| m.param_exp(name)).max().unwrap_or(0)
    }

    /// Coefficient of `name^e` (as an expression in the remaining symbols).
    pub fn coeff_of(&self, name: &str, e: i32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.param_exp(name) == e {
                out.add_term(m.without_param(name), c.clone());
            }
        }
        out
    }

    /// Divide out the content so that the first term has coefficient 1. Used to
    /// compare relations up to a nonzero constant factor.
    pub fn monic(&self) -> Self {
        match self.terms.values().next() {
            Some(c) => self.scale(&c.inverse().expect("nonzero coefficient")),
            None => Self::zero(),
        }
    }

    /// Divide by the largest monomial dividing every term (non-negative exponents only).
    pub fn strip_monomial_content(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut t_min = i32::MAX;
        let mut p_min: Option<BTreeMap<Arc<str>, i32>> = None;
        for m in self.terms.keys() {
            t_min = t_min.min(m.t_exp);
            let here: BTreeMap<Arc<str>, i32> = m.params.iter().cloned().collect();
            p_min = Some(match p_min {
                None => here,
                Some(prev) => prev
                    .into_iter()
                    .filter_map(|(p, e)| here.get(&p).map(|h| (p, e.min(*h))))
                    .collect(),
            });
        }
        let params = p_min.unwrap_or_default().into_iter().filter(|(_, e)| *e > 0).collect();
        let content = Self::term(QuadNum::one(), Monomial { t_exp: t_min, log: 0, params });
        self.try_div(&content).expect("monomial content is a unit")
    }
}

impl From<QuadNum> for ScalarExpr {
    fn from(c: QuadNum) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl AddAssign<&ScalarExpr> for ScalarExpr {
    fn add_assign(&mut self, rhs: &ScalarExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&ScalarExpr> for ScalarExpr {
    fn sub_assign(&mut self, rhs: &ScalarExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> Self {
        ScalarExpr { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -self.clone()
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coef = c.to_string();
            if coef.starts_with('-') {
                write!(f, "({coef})")?;
            } else {
                write!(f, "{coef}")?;
            }
            if m.t_exp != 0 {
                write!(f, "*t^{}", m.t_exp)?;
            }
            if m.log != 0 {
                write!(f, "*log(t)^{}", m.log)?;
            }
            for (p, e) in &m.params {
                write!(f, "*{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Serialized as its printed form.
impl serde::Serialize for ScalarExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> ScalarExpr {
        x.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = ScalarExpr::constant(QuadNum::surd_frac(1, 3));
        let b = ScalarExpr::constant(QuadNum::surd_frac(1, 2));
        assert_eq!(&a * &b, ScalarExpr::frac(1, 2));
        let g = &ScalarExpr::param("g") * &ScalarExpr::t_pow(-3);
        assert_eq!(&g * &ScalarExpr::t_pow(3), ScalarExpr::param("g"));
        let x = &ScalarExpr::frac(2, 3) + &ScalarExpr::t_pow(-1);
        let y = &ScalarExpr::frac(1, 3) - &ScalarExpr::t_pow(-1);
        assert_eq!(&x + &y, ScalarExpr::one());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ScalarExpr::log_t().deriv(), ScalarExpr::t_pow(-1));
        assert_eq!(s("g*t^-3").deriv(), s("-3*g*t^-4"));
        assert_eq!(s("t^2*log(t)").deriv(), s("2*t*log(t) + t"));
    }

    #[test]
    fn leading_exponent_examples() {
        assert_eq!(s("g*t^-3").leading_exponent(Limit::AtInfinity).unwrap(), (-3, 0));
        let f = s("t^-1 + t^-4");
        assert_eq!(f.leading_exponent(Limit::AtInfinity).unwrap(), (-1, 0));
        assert_eq!(f.leading_exponent(Limit::AtZero).unwrap(), (-4, 0));
        assert_eq!(s("t^-4*log(t)").leading_exponent(Limit::AtInfinity).unwrap(), (-4, 1));
        assert_eq!(ScalarExpr::zero().leading_exponent(Limit::AtZero), Err(Error::NoLeadingTerm));
    }

    #[test]
    fn division_only_by_units() {
        let u = s("3*t^2*k^2");
        assert_eq!(&u.inverse().unwrap() * &u, ScalarExpr::one());
        assert!(matches!(s("1 + t").inverse(), Err(Error::NonUnit(_))));
        assert!(matches!(s("log(t)").inverse(), Err(Error::NonUnit(_))));
        assert_eq!(s("4/3*t^4*k^2").sqrt().unwrap(), s("2/3*s*t^2*k"));
    }

    #[test]
    fn substitution() {
        let e = s("lambda^-1*A33 + mu");
        let r = e.substitute("lambda", &s("1/2*s")).unwrap();
        assert_eq!(r, s("2/3*s*A33 + mu"));
    }
}
