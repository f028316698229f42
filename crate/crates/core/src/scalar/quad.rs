//! Elements `a + b·√d` of a real quadratic field with exact rational parts.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default radicand; every constant the models need lives in ℚ(√3).
pub const DEFAULT_D: u32 = 3;

/// `a + b·√d`.
///
/// Rational values (`b = 0`) belong to every ring, so they combine freely with
/// elements of any `d`. Two genuinely irrational values with different radicands
/// cannot be combined; the arithmetic operators panic in that case and the
/// `checked_*` methods return [`Error::RingMismatch`].
#[derive(Clone, Debug)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn rat(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

impl QuadNum {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Self {
        assert!(d >= 2 && is_square_free(d), "radicand {d} must be square-free and > 1");
        QuadNum { a, b, d }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadNum { a, b: BigRational::zero(), d: DEFAULT_D }
    }

    pub fn from_frac(n: i64, m: i64) -> Self {
        Self::rational(rat(n, m))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_frac(n, 1)
    }

    /// `√d` in the default ring.
    pub fn sqrt_d() -> Self {
        Self::surd(DEFAULT_D)
    }

    pub fn surd(d: u32) -> Self {
        QuadNum::new(BigRational::zero(), BigRational::one(), d)
    }

    /// `(p/q)·√d` in the default ring.
    pub fn surd_frac(p: i64, q: i64) -> Self {
        QuadNum::new(BigRational::zero(), rat(p, q), DEFAULT_D)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> Result<u32> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(Error::RingMismatch(self.d, other.d)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        Ok(QuadNum { a: &self.a + &other.a, b: &self.b + &other.b, d })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        Ok(QuadNum {
            a: &self.a * &other.a + &self.b * &other.b * dd,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        })
    }

    /// `a − b√d`.
    pub fn conj(&self) -> Self {
        QuadNum { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> BigRational {
        let dd = BigRational::from_integer(BigInt::from(self.d));
        &self.a * &self.a - &self.b * &self.b * dd
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadNum { a: c.a / &n, b: c.b / n, d: self.d })
    }

    pub fn signum(&self) -> i32 {
        match self.cmp_zero() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact sign of the real number `a + b√d`.
    pub fn cmp_zero(&self) -> Ordering {
        let sa = self.a.signum();
        let sb = self.b.signum();
        let zero = BigRational::zero();
        if sb == zero {
            return self.a.cmp(&zero);
        }
        if sa == zero || sa == sb {
            return self.b.cmp(&zero);
        }
        // opposite signs: compare a² with d b²
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        match lhs.cmp(&rhs) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => self.a.cmp(&zero),
            Ordering::Less => self.b.cmp(&zero),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact square root inside the same field, if one exists. Picks the
    /// positive root.
    pub fn sqrt(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::rational(r));
            }
            // a = d·q² → √a = q√d
            let dd = BigRational::from_integer(BigInt::from(self.d));
            let q2 = &self.a / &dd;
            return rational_sqrt(&q2).map(|q| QuadNum { a: BigRational::zero(), b: q, d: self.d });
        }
        // (x + y√d)² = a + b√d → x² + d y² = a, 2xy = b
        // x² = (a ± √(a² − d b²)) / 2
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for cand in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if cand.is_positive() {
                if let Some(x) = rational_sqrt(&cand) {
                    let y = &self.b / (&two * &x);
                    let r = QuadNum { a: x, b: y, d: self.d };
                    let r = if r.signum() < 0 { -r } else { r };
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

fn is_square_free(d: u32) -> bool {
    let mut p = 2u32;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = int_sqrt(q.numer())?;
    let m = int_sqrt(q.denom())?;
    Some(BigRational::new(n, m))
}

impl PartialEq for QuadNum {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadNum {}

impl Hash for QuadNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        if !self.b.is_zero() {
            self.d.hash(state);
        }
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordering by real value.
impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).cmp_zero()
    }
}

impl Add for QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("quadratic ring mismatch")
    }
}

impl Sub for QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("quadratic ring mismatch")
    }
}

impl Div for QuadNum {
    type Output = QuadNum;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero")
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> Self {
        QuadNum { a: -self.a, b: -self.b, d: self.d }
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        self.checked_add(rhs).expect("quadratic ring mismatch")
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        self.checked_mul(rhs).expect("quadratic ring mismatch")
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `a`, `b*s` or `(a + b*s)`, with `s` standing for √d.
impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.a)),
            (true, false) => write!(f, "{}*s", fmt_rat(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "({} - {}*s)", fmt_rat(&self.a), fmt_rat(&-self.b.clone()))
                } else {
                    write!(f, "({} + {}*s)", fmt_rat(&self.a), fmt_rat(&self.b))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_surds() {
        let x = QuadNum::surd_frac(1, 3);
        let y = QuadNum::surd_frac(1, 2);
        assert_eq!(x * y, QuadNum::from_frac(1, 2));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = QuadNum::new(rat(2, 3), rat(-5, 7), 3);
        assert_eq!(x.clone() * x.inverse().unwrap(), QuadNum::one());
        assert!(QuadNum::zero().inverse().is_err());
    }

    #[test]
    fn sign_and_sqrt() {
        // 2 - √3 > 0, 1 - √3 < 0
        assert_eq!(QuadNum::new(rat(2, 1), rat(-1, 1), 3).signum(), 1);
        assert_eq!(QuadNum::new(rat(1, 1), rat(-1, 1), 3).signum(), -1);
        // (1 + √3)² = 4 + 2√3
        let r = QuadNum::new(rat(4, 1), rat(2, 1), 3).sqrt().unwrap();
        assert_eq!(r, QuadNum::new(rat(1, 1), rat(1, 1), 3));
        assert_eq!(QuadNum::from_int(3).sqrt().unwrap(), QuadNum::sqrt_d());
        assert_eq!(QuadNum::from_frac(3, 4).sqrt().unwrap(), QuadNum::surd_frac(1, 2));
        assert!(QuadNum::from_int(2).sqrt().is_none());
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let a = QuadNum::surd(3);
        let b = QuadNum::surd(5);
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(3, 5))));
        // rationals are shared
        assert!(a.checked_add(&QuadNum::from_int(1)).is_ok());
    }
}
