//! Exact scalars: rationals with an inline small representation and a
//! big-integer fallback, and Gaussian rationals built on top of them.
//!
//! Every `Q` is stored in canonical form: a reduced fraction with positive
//! denominator, kept in `Small` whenever numerator and denominator fit in
//! `i64` (excluding `i64::MIN`), so derived equality and hashing are exact.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseQError {
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

#[derive(Clone, Debug)]
pub enum Q {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Q {
    fn from_i128(n: i128, d: i128) -> Q {
        debug_assert!(d != 0);
        if n == 0 {
            return Q::Small(0, 1);
        }
        // Magnitudes here are below 2^127 because inputs come from i64 pairs.
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if fits(n) && fits(d) {
            Q::Small(n as i64, d as i64)
        } else {
            Q::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Q::Small(n, d),
            _ => Q::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_i128(n as i128, d as i128)
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Q {
        assert!(!d.is_zero(), "zero denominator");
        Q::from_big(BigRational::new(n, d))
    }

    pub fn int(n: i64) -> Q {
        Q::new(n, 1)
    }

    pub fn zero() -> Q {
        Q::Small(0, 1)
    }

    pub fn one() -> Q {
        Q::Small(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(b) => b.denom().clone(),
        }
    }

    /// Integer value, when the rational is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Q::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Q::Small(n, _) => n.signum() as i32,
            Q::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Q {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Q::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Q::Big(b) => Q::from_big(b.recip()),
        }
    }

    pub fn pow(&self, e: i32) -> Q {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut out = Q::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Q::Small(n, d) => *n as f64 / *d as f64,
            Q::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact square root when both numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Q> {
        if self.signum() < 0 {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &rn * &rn == n && &rd * &rd == d {
            Some(Q::from_bigints(rn, rd))
        } else {
            None
        }
    }

    /// Best rational approximation with denominator at most `max_den`.
    pub fn approximate(x: f64, max_den: i64) -> Option<Q> {
        if !x.is_finite() || x.abs() > 1e15 {
            return None;
        }
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut v = x;
        for _ in 0..64 {
            let a = v.floor();
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = v - a;
            if frac.abs() < 1e-12 {
                break;
            }
            v = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        Some(Q::from_i128(h1, k1))
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            (Q::Big(x), Q::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Q::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl FromStr for Q {
    type Err = ParseQError;
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| ParseQError::Malformed(s.to_string()))?;
        let d: BigInt = d.parse().map_err(|_| ParseQError::Malformed(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseQError::ZeroDenominator(s.to_string()));
        }
        Ok(Q::from_bigints(n, d))
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::int(n as i64)
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Q::from_i128(*a as i128 + *c as i128, 1);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128(a * d + c * b, b * d)
            }
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128(a * d - c * b, b * d)
            }
            _ => Q::from_big(self.to_big() - o.to_big()),
        }
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::zero(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128((*a as i128) * (*c as i128), (*b as i128) * (*d as i128))
            }
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, o: &Q) -> Q {
        assert!(!o.is_zero(), "division by zero");
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128((*a as i128) * (*d as i128), (*b as i128) * (*c as i128))
            }
            _ => Q::from_big(self.to_big() / o.to_big()),
        }
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(n, d) => Q::Small(-n, *d),
            Q::Big(b) => Q::from_big(-(**b).clone()),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, o: &'a $ty) -> $ty { (&self).$m(o) }
        }
        impl<'a> $tr<$ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty { self.$m(&o) }
        }
    )*};
}

forward_owned!(Q, Add add, Sub sub, Mul mul, Div div);

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, o: &Q) {
        *self = &*self + o;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, o: &Q) {
        *self = &*self - o;
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, o: &Q) {
        *self = &*self * o;
    }
}

impl Zero for Q {
    fn zero() -> Q {
        Q::zero()
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Q {
        Q::one()
    }
}

impl std::iter::Sum for Q {
    fn sum<I: Iterator<Item = Q>>(it: I) -> Q {
        it.fold(Q::zero(), |a, b| a + b)
    }
}

impl serde::Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Q {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct C {
    pub re: Q,
    pub im: Q,
}

impl C {
    pub fn new(re: Q, im: Q) -> C {
        C { re, im }
    }

    pub fn real(re: Q) -> C {
        C { re, im: Q::zero() }
    }

    pub fn int(n: i64) -> C {
        C::real(Q::int(n))
    }

    pub fn zero() -> C {
        C::real(Q::zero())
    }

    pub fn one() -> C {
        C::real(Q::one())
    }

    pub fn i() -> C {
        C { re: Q::zero(), im: Q::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> C {
        C { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> C {
        let n = self.norm_sqr();
        C { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn scale(&self, q: &Q) -> C {
        C { re: &self.re * q, im: &self.im * q }
    }

    /// Multiplication by the imaginary unit.
    pub fn mul_i(&self) -> C {
        C { re: -&self.im, im: self.re.clone() }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Exact square root in Q(i) when one exists.
    pub fn sqrt_exact(&self) -> Option<C> {
        if self.im.is_zero() {
            if self.re.signum() >= 0 {
                return self.re.sqrt_exact().map(C::real);
            }
            return (-&self.re).sqrt_exact().map(|r| C::new(Q::zero(), r));
        }
        let modulus = self.norm_sqr().sqrt_exact()?;
        let x2 = (&self.re + &modulus) / Q::int(2);
        let x = x2.sqrt_exact()?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / &(&x * &Q::int(2));
        Some(C::new(x, y))
    }

    pub fn pow(&self, e: u32) -> C {
        let mut out = C::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl From<Q> for C {
    fn from(q: Q) -> C {
        C::real(q)
    }
}

impl fmt::Display for C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.signum() < 0 {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a C> for &'a C {
    type Output = C;
    fn add(self, o: &C) -> C {
        C { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a C> for &'a C {
    type Output = C;
    fn sub(self, o: &C) -> C {
        C { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a C> for &'a C {
    type Output = C;
    fn mul(self, o: &C) -> C {
        if self.im.is_zero() && o.im.is_zero() {
            return C::real(&self.re * &o.re);
        }
        C {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl<'a> Div<&'a C> for &'a C {
    type Output = C;
    fn div(self, o: &C) -> C {
        if o.im.is_zero() {
            return C { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv()
    }
}

impl Neg for &C {
    type Output = C;
    fn neg(self) -> C {
        C { re: -&self.re, im: -&self.im }
    }
}

impl Neg for C {
    type Output = C;
    fn neg(self) -> C {
        -&self
    }
}

forward_owned!(C, Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&C> for C {
    fn add_assign(&mut self, o: &C) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&C> for C {
    fn sub_assign(&mut self, o: &C) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl std::iter::Sum for C {
    fn sum<I: Iterator<Item = C>>(it: I) -> C {
        it.fold(C::zero(), |a, b| a + b)
    }
}

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Shorthand for the Gaussian rational `a + b·i` with integer parts.
pub fn c(a: i64, b: i64) -> C {
    C::new(Q::int(a), Q::int(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(-3, -6), q(1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
        assert_eq!("6/8".parse::<Q>().unwrap(), q(3, 4));
        assert!("1/0".parse::<Q>().is_err());
        assert!("x".parse::<Q>().is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Q::int(i64::MAX);
        let s = &big + &big;
        assert!(matches!(s, Q::Big(_)));
        let back = &s - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Q::Small(_, _)));
        let p = &big * &big;
        assert_eq!(&p / &big, big);
    }

    #[test]
    fn gaussian_arithmetic() {
        let z = c(1, 2);
        let w = c(3, -1);
        assert_eq!(&z * &w, c(5, 5));
        assert_eq!(&(&z * &w) / &w, z);
        assert_eq!(C::i().mul_i(), C::int(-1));
        assert_eq!(c(-4, 0).sqrt_exact(), Some(c(0, 2)));
        assert_eq!(c(3, 4).sqrt_exact(), Some(c(2, 1)));
        assert_eq!(c(2, 0).sqrt_exact(), None);
    }

    #[test]
    fn approximation() {
        assert_eq!(Q::approximate(0.4999999999, 1000), Some(q(1, 2)));
        assert_eq!(Q::approximate(-1.3333333333, 1000), Some(q(-4, 3)));
    }

    proptest! {
        #[test]
        fn field_laws(a in -1_000_000i64..1_000_000, b in 1i64..1000, c_ in -1_000_000i64..1_000_000, d in 1i64..1000) {
            let x = q(a, b);
            let y = q(c_, d);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(&x * &y, &y * &x);
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            let bx = x.to_big();
            let by = y.to_big();
            prop_assert_eq!((&x * &y).to_big(), bx.clone() * by.clone());
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        }

        #[test]
        fn big_path_agrees(a in any::<i64>(), b in 1i64..i64::MAX, c_ in any::<i64>()) {
            prop_assume!(a != i64::MIN && c_ != i64::MIN);
            let x = q(a, b);
            let y = Q::int(c_);
            prop_assert_eq!((&x * &y).to_big(), x.to_big() * y.to_big());
            prop_assert_eq!((&x + &y).to_big(), x.to_big() + y.to_big());
        }
    }
}
