//! Exact rational numbers and the extended cost type.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"`, integers, and plain or exponent decimals (`"0.25"`, `"1e-3"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact binary expansion of a finite float.
pub fn from_f64(value: f64) -> Rational {
    Rational::from_float(value).unwrap_or_else(Rational::zero)
}

/// Rounds to the dyadic grid `2^-bits`; used where float data must enter an exact solver.
pub fn from_f64_dyadic(value: f64, bits: i32) -> Rational {
    let scaled = (value * 2f64.powi(bits)).round();
    let numer = BigInt::from(scaled as i128);
    Rational::new(numer, num::pow(BigInt::from(2), bits as usize))
}

/// Formats a float with `digits` significant digits, trimming trailing zeros.
pub fn format_sig(value: f64, digits: usize) -> String {
    if !value.is_finite() {
        return if value > 0.0 { "inf".into() } else { value.to_string() };
    }
    if value == 0.0 {
        return "0".into();
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).clamp(0, 40) as usize;
    let mut s = format!("{value:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// A principal cost: a nonnegative rational or an explicit infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostValue {
    Finite(Rational),
    Infinite,
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue::Finite(Rational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        CostValue::Finite(int(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            CostValue::Finite(v) => Some(v),
            CostValue::Infinite => None,
        }
    }

    /// `weight * self` for a nonnegative weight; zero weight on infinity is zero.
    pub fn scale(&self, weight: &Rational) -> CostValue {
        if weight.is_zero() {
            return CostValue::zero();
        }
        match self {
            CostValue::Finite(v) => CostValue::Finite(v * weight),
            CostValue::Infinite => CostValue::Infinite,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            CostValue::Finite(v) => to_f64(v),
            CostValue::Infinite => f64::INFINITY,
        }
    }
}

impl Default for CostValue {
    fn default() -> Self {
        CostValue::zero()
    }
}

impl From<Rational> for CostValue {
    fn from(value: Rational) -> Self {
        CostValue::Finite(value)
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.cmp(b),
            (CostValue::Finite(_), CostValue::Infinite) => Ordering::Less,
            (CostValue::Infinite, CostValue::Finite(_)) => Ordering::Greater,
            (CostValue::Infinite, CostValue::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Infinite,
        }
    }
}

impl<'a> Add<&'a CostValue> for CostValue {
    type Output = CostValue;

    fn add(self, rhs: &'a CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Infinite,
        }
    }
}

impl AddAssign<&CostValue> for CostValue {
    fn add_assign(&mut self, rhs: &CostValue) {
        match (&mut *self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => *a += b,
            _ => *self = CostValue::Infinite,
        }
    }
}

impl Sum for CostValue {
    fn sum<I: Iterator<Item = CostValue>>(iter: I) -> Self {
        iter.fold(CostValue::zero(), |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a CostValue> for CostValue {
    fn sum<I: Iterator<Item = &'a CostValue>>(iter: I) -> Self {
        let mut acc = CostValue::zero();
        for v in iter {
            acc += v;
            if acc.is_infinite() {
                break;
            }
        }
        acc
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(v) => f.write_str(&format_rational(v)),
            CostValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for CostValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(CostValue::Infinite),
            other => parse_rational(other).map(CostValue::Finite),
        }
    }
}

pub fn one() -> Rational {
    Rational::one()
}
