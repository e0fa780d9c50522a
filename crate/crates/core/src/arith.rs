//! Exact rational helpers and a small interval type for quantities that
//! involve irrational angles.
//!
//! `[a]`, `E(a)`, `φ(a)` and `{a}` follow the usual floor / ceiling /
//! non-integrality / fractional-part conventions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `[a]`: greatest integer not above `a`.
pub fn floor_q(a: &Q) -> BigInt {
    a.numer().div_floor(a.denom())
}

/// `E(a)`: least integer not below `a`.
pub fn ceil_q(a: &Q) -> BigInt {
    -((-a.numer()).div_floor(a.denom()))
}

/// `φ(a) = E(a) - [a]`: 0 on integers, 1 elsewhere.
pub fn phi_q(a: &Q) -> i64 {
    if a.is_integer() {
        0
    } else {
        1
    }
}

/// `{a} = a - [a]`.
pub fn frac_q(a: &Q) -> Q {
    a - Q::from_integer(floor_q(a))
}

pub fn big_to_i64(b: &BigInt) -> Result<i64> {
    b.to_i64()
        .ok_or_else(|| invalid(format!("integer {b} does not fit in 64 bits")))
}

pub fn ten_pow(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Parses `"p/q"`, an integer, or a plain / scientific decimal into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| invalid(format!("bad numerator in `{s}`")))?;
        let d: BigInt = d.trim().parse().map_err(|_| invalid(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(n, d));
    }
    parse_decimal(s).map(|(v, _)| v)
}

/// Parses a decimal string, returning the value and the number of digits
/// after the decimal point (after applying any exponent).
pub fn parse_decimal(s: &str) -> Result<(Q, u32)> {
    let s = s.trim();
    let bad = || invalid(format!("bad decimal `{s}`"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let scale = frac_part.len() as i64 - exp;
    let mut v = if scale >= 0 {
        Q::new(n, ten_pow(scale as u32))
    } else {
        Q::from_integer(n * ten_pow((-scale) as u32))
    };
    if neg {
        v = -v;
    }
    Ok((v, scale.max(0) as u32))
}

pub fn format_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Decimal rendering of `v` truncated toward zero to `digits` places.
pub fn format_decimal(v: &Q, digits: u32) -> String {
    let scaled = (v * Q::from_integer(ten_pow(digits))).trunc().to_integer();
    let neg = v.is_negative();
    let mut s = scaled.abs().to_string();
    if digits == 0 {
        return if neg { format!("-{s}") } else { s };
    }
    while s.len() <= digits as usize {
        s.insert(0, '0');
    }
    let split = s.len() - digits as usize;
    let out = format!("{}.{}", &s[..split], &s[split..]);
    if neg && !scaled.is_zero() {
        format!("-{out}")
    } else {
        out
    }
}

pub fn to_f64(v: &Q) -> f64 {
    // numer/denom can both overflow f64 for 60-digit decimals.
    match (v.numer().to_f64(), v.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = v.denom().bits().saturating_sub(60);
            let n = v.numer() >> shift;
            let d = v.denom() >> shift;
            n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
        }
    }
}

/// A closed interval `[lo, hi]` with rational endpoints. Degenerate intervals
/// are exact values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    lo: Q,
    hi: Q,
}

impl Real {
    pub fn exact(v: Q) -> Self {
        Real { lo: v.clone(), hi: v }
    }

    pub fn int(n: i64) -> Self {
        Real::exact(qi(n))
    }

    pub fn interval(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Real { lo, hi }
    }

    pub fn around(mid: &Q, radius: &Q) -> Self {
        Real { lo: mid - radius, hi: mid + radius }
    }

    pub fn zero() -> Self {
        Real::exact(Q::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Q> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn lo(&self) -> &Q {
        &self.lo
    }

    pub fn hi(&self) -> &Q {
        &self.hi
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn radius(&self) -> Q {
        (&self.hi - &self.lo) / qi(2)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn contains(&self, v: &Q) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, o: &Real) -> Real {
        Real { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Real) -> Real {
        Real { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn add_q(&self, v: &Q) -> Real {
        Real { lo: &self.lo + v, hi: &self.hi + v }
    }

    pub fn neg(&self) -> Real {
        Real { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn scale(&self, k: &Q) -> Real {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Real { lo: a, hi: b }
        } else {
            Real { lo: b, hi: a }
        }
    }

    pub fn scale_int(&self, k: i64) -> Real {
        self.scale(&qi(k))
    }

    pub fn mul(&self, o: &Real) -> Real {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Real { lo, hi }
    }

    pub fn recip(&self) -> Result<Real> {
        if self.contains(&Q::zero()) {
            return Err(Error::PrecisionExhausted("reciprocal of an interval containing 0".into()));
        }
        Ok(Real { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, o: &Real) -> Result<Real> {
        Ok(self.mul(&o.recip()?))
    }

    /// Sign, decided only when the interval excludes 0 or is exactly 0.
    pub fn sign(&self) -> Result<Ordering> {
        if self.lo.is_positive() {
            Ok(Ordering::Greater)
        } else if self.hi.is_negative() {
            Ok(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Ok(Ordering::Equal)
        } else {
            Err(Error::PrecisionExhausted(format!("sign of {self} undecided")))
        }
    }

    pub fn cmp_q(&self, v: &Q) -> Result<Ordering> {
        self.add_q(&-v).sign()
    }

    pub fn floor(&self) -> Result<BigInt> {
        let a = floor_q(&self.lo);
        let b = floor_q(&self.hi);
        if a == b {
            Ok(a)
        } else {
            Err(Error::PrecisionExhausted(format!("floor of {self} undecided")))
        }
    }

    /// `{x}` as an interval; fails when the interval straddles an integer.
    pub fn frac(&self) -> Result<Real> {
        let f = Q::from_integer(self.floor()?);
        Ok(Real { lo: &self.lo - &f, hi: &self.hi - &f })
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_value() {
            Some(v) => write!(f, "{}", format_rational(v)),
            None => write!(f, "{}", real_decimal(self)),
        }
    }
}

/// Decimal string for an inexact value, with as many digits as its radius
/// supports.
pub fn real_decimal(r: &Real) -> String {
    let rad = to_f64(&r.radius()).abs();
    let digits = if rad > 0.0 { (-rad.log10()).floor().clamp(1.0, 80.0) as u32 } else { 30 };
    format_decimal(&r.mid(), digits)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_ceil_phi_frac() {
        let a = q(7, 3);
        assert_eq!(floor_q(&a), BigInt::from(2));
        assert_eq!(ceil_q(&a), BigInt::from(3));
        assert_eq!(phi_q(&a), 1);
        assert_eq!(frac_q(&a), q(1, 3));
        let b = q(-7, 3);
        assert_eq!(floor_q(&b), BigInt::from(-3));
        assert_eq!(ceil_q(&b), BigInt::from(-2));
        assert_eq!(frac_q(&b), q(2, 3));
        assert_eq!(phi_q(&qi(4)), 0);
        assert_eq!(ceil_q(&qi(4)), BigInt::from(4));
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("0.125").unwrap(), (q(1, 8), 3));
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E1").unwrap(), qi(25));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&q(-5, 4), 2), "-1.25");
        assert_eq!(format_decimal(&q(1, 200), 2), "0.00");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }

    #[test]
    fn interval_floor_undecided_on_straddle() {
        let r = Real::around(&qi(3), &q(1, 100));
        assert!(matches!(r.floor(), Err(Error::PrecisionExhausted(_))));
        let s = Real::around(&q(7, 2), &q(1, 100));
        assert_eq!(s.floor().unwrap(), BigInt::from(3));
        assert_eq!(s.frac().unwrap().mid(), q(1, 2));
    }

    #[test]
    fn interval_arithmetic_contains_products() {
        let a = Real::interval(q(-1, 2), q(1, 3));
        let b = Real::interval(q(2, 1), q(3, 1));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &q(-3, 2));
        assert_eq!(p.hi(), &qi(1));
        assert!(a.recip().is_err());
        assert_eq!(b.recip().unwrap().lo(), &q(1, 3));
    }
}
