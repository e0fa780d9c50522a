//! Angles measured in turns (`θ/2π ∈ (0,1)`) and points on the unit circle.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{ceil_q, floor_q, format_decimal, q, qi, to_f64, Q, Real};
use crate::error::{invalid, Error, Result};

/// Denominator bound used when a gap to nearby rationals is computed.
pub const DEFAULT_GAP_DENOMINATOR: i64 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct IrrationalAngle {
    approx: Q,
    err: Q,
    gap: Q,
}

impl IrrationalAngle {
    pub fn approx(&self) -> &Q {
        &self.approx
    }

    pub fn err(&self) -> &Q {
        &self.err
    }

    pub fn gap(&self) -> &Q {
        &self.gap
    }

    fn scaled(&self, m: u64) -> Real {
        let mq = qi(m as i64);
        Real::around(&(&self.approx * &mq), &(&self.err * &mq))
    }
}

/// A turn fraction in `(0, 1)`: exact `p/q` in lowest terms, or an irrational
/// marker carrying an approximation, its error radius, and a declared gap to
/// rationals of small denominator.
#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    Rational { p: i64, q: i64 },
    Irrational(IrrationalAngle),
}

impl Angle {
    pub fn rational(p: i64, den: i64) -> Result<Angle> {
        if den == 0 {
            return Err(invalid("angle with zero denominator"));
        }
        let (mut p, mut den) = if den < 0 { (-p, -den) } else { (p, den) };
        let g = p.gcd(&den);
        p /= g;
        den /= g;
        if p <= 0 || p >= den {
            return Err(invalid(format!("rational angle {p}/{den} is not in (0,1)")));
        }
        Ok(Angle::Rational { p, q: den })
    }

    pub fn irrational(approx: Q, err: Q, gap: Q) -> Result<Angle> {
        if !gap.is_positive() {
            return Err(invalid("irrational angle needs a positive gap"));
        }
        if !err.is_positive() || err.clone() * qi(4) >= gap {
            return Err(invalid(format!(
                "irrational angle error bound {} must be positive and below gap/4",
                crate::arith::format_rational(&err)
            )));
        }
        if &approx - &err <= Q::zero() || &approx + &err >= qi(1) {
            return Err(invalid("irrational angle is not inside (0,1)"));
        }
        Ok(Angle::Irrational(IrrationalAngle { approx, err, gap }))
    }

    /// Irrational marker whose gap is computed against all `p/q` with
    /// `q <= max_den`.
    pub fn irrational_with_computed_gap(approx: Q, err: Q, max_den: i64) -> Result<Angle> {
        let gap = rational_gap(&approx, max_den) - &err;
        if !gap.is_positive() {
            return Err(Error::PrecisionExhausted(
                "value is indistinguishable from a rational of small denominator".into(),
            ));
        }
        Angle::irrational(approx, err, gap)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Angle::Rational { .. })
    }

    pub fn is_half(&self) -> bool {
        matches!(self, Angle::Rational { p: 1, q: 2 })
    }

    pub fn value(&self) -> Real {
        match self {
            Angle::Rational { p, q: d } => Real::exact(q(*p, *d)),
            Angle::Irrational(a) => Real::around(&a.approx, &a.err),
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self {
            Angle::Rational { p, q: d } => Some(q(*p, *d)),
            Angle::Irrational(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::Rational { p, q } => *p as f64 / *q as f64,
            Angle::Irrational(a) => to_f64(&a.approx),
        }
    }

    /// The conjugate point `1 - a`.
    pub fn conj(&self) -> Angle {
        match self {
            Angle::Rational { p, q } => Angle::Rational { p: q - p, q: *q },
            Angle::Irrational(a) => Angle::Irrational(IrrationalAngle {
                approx: qi(1) - &a.approx,
                err: a.err.clone(),
                gap: a.gap.clone(),
            }),
        }
    }

    /// Whether two angles denote the same point. Irrational markers agree
    /// when their error intervals overlap; a rational never equals an
    /// irrational marker.
    pub fn same_point(&self, other: &Angle) -> bool {
        match (self, other) {
            (Angle::Rational { p, q }, Angle::Rational { p: p2, q: q2 }) => p == p2 && q == q2,
            (Angle::Irrational(a), Angle::Irrational(b)) => {
                (&a.approx - &b.approx).abs() <= &a.err + &b.err
            }
            _ => false,
        }
    }

    pub fn mul_is_integer(&self, m: u64) -> bool {
        match self {
            Angle::Rational { p: _, q } => m % (*q as u64) == 0,
            Angle::Irrational(_) => false,
        }
    }

    /// `[m a]`.
    pub fn floor_mul(&self, m: u64) -> Result<i64> {
        match self {
            Angle::Rational { p, q } => {
                let num = m as i128 * *p as i128;
                Ok(num.div_euclid(*q as i128) as i64)
            }
            Angle::Irrational(a) => {
                let f = a.scaled(m).floor().map_err(|_| {
                    Error::PrecisionExhausted(format!(
                        "cannot decide [{m}·a] for irrational angle ≈ {}",
                        format_decimal(&a.approx, 20)
                    ))
                })?;
                crate::arith::big_to_i64(&f)
            }
        }
    }

    /// `E(m a)`.
    pub fn ceil_mul(&self, m: u64) -> Result<i64> {
        let f = self.floor_mul(m)?;
        Ok(if self.mul_is_integer(m) { f } else { f + 1 })
    }

    /// `φ(m a)`.
    pub fn phi_mul(&self, m: u64) -> i64 {
        if self.mul_is_integer(m) {
            0
        } else {
            1
        }
    }

    /// `{m a}` as an interval (exact for rational angles).
    pub fn frac_mul(&self, m: u64) -> Result<Real> {
        match self {
            Angle::Rational { p, q: d } => {
                let num = (m as i128 * *p as i128).rem_euclid(*d as i128) as i64;
                Ok(Real::exact(q(num, *d)))
            }
            Angle::Irrational(a) => a.scaled(m).frac(),
        }
    }

    /// The angle of the `k`-th power, or `None` when `k a` is an integer.
    pub fn times(&self, k: u64) -> Option<Angle> {
        match self {
            Angle::Rational { p, q } => {
                let num = (k as i128 * *p as i128).rem_euclid(*q as i128) as i64;
                if num == 0 {
                    None
                } else {
                    Angle::rational(num, *q).ok()
                }
            }
            Angle::Irrational(a) => {
                let kq = qi(k as i64);
                let scaled = &a.approx * &kq;
                let approx = &scaled - Q::from_integer(floor_q(&scaled));
                let err = &a.err * &kq;
                let gap = (rational_gap(&approx, 100) - &err).max(&err * qi(5));
                Some(Angle::Irrational(IrrationalAngle { approx, err, gap }))
            }
        }
    }

    pub fn denominator(&self) -> Option<i64> {
        match self {
            Angle::Rational { q, .. } => Some(*q),
            Angle::Irrational(_) => None,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational { p, q } => write!(f, "{p}/{q}"),
            Angle::Irrational(a) => write!(f, "~{}", format_decimal(&a.approx, 12)),
        }
    }
}

/// Distance from `x` to the nearest `p/q` with `1 <= q <= max_den`.
pub fn rational_gap(x: &Q, max_den: i64) -> Q {
    // Stern–Brocot descent keeping Farey neighbours p/b <= x < r/d
    let base = floor_q(x);
    if &Q::from_integer(base.clone()) == x {
        return qi(0);
    }
    let (mut p, mut b) = (base.clone(), 1i64);
    let (mut r, mut d) = (base + BigInt::from(1), 1i64);
    let max_den = max_den.max(1);
    while b + d <= max_den {
        let mediant = Q::new(&p + &r, BigInt::from(b + d));
        if &mediant == x {
            return qi(0);
        }
        let below = x * qi(b) - Q::from_integer(p.clone());
        let above = Q::from_integer(r.clone()) - x * qi(d);
        if x < &mediant {
            // largest k with (r + kp)/(d + kb) still above x
            let k = (ceil_q(&(&above / &below)) - BigInt::from(1)).min(BigInt::from((max_den - d) / b));
            r += &p * &k;
            d += b * i64::try_from(k).unwrap_or(1);
        } else {
            let k = (ceil_q(&(&below / &above)) - BigInt::from(1)).min(BigInt::from((max_den - b) / d));
            p += &r * &k;
            b += d * i64::try_from(k).unwrap_or(1);
        }
    }
    let lo = x - Q::new(p, BigInt::from(b));
    let hi = Q::new(r, BigInt::from(d)) - x;
    lo.min(hi)
}

/// A point `ω` on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitPoint {
    One,
    MinusOne,
    /// `e^{2πi a}` with `a ∈ (0,1)`, `a ≠ 1/2`.
    Turn(Angle),
}

impl UnitPoint {
    pub fn from_turn(a: Angle) -> UnitPoint {
        if a.is_half() {
            UnitPoint::MinusOne
        } else {
            UnitPoint::Turn(a)
        }
    }

    /// Builds the point `re + i·im`; both parts are exact rationals.
    pub fn from_complex(re: &Q, im: &Q, digits: u32) -> Result<UnitPoint> {
        if re * re + im * im != qi(1) {
            return Err(Error::NotOnUnitCircle);
        }
        if im.is_zero() {
            return Ok(if re.is_positive() { UnitPoint::One } else { UnitPoint::MinusOne });
        }
        let known = [(q(0, 1), 4i64), (q(1, 2), 6), (q(-1, 2), 3)];
        let base = known
            .iter()
            .find(|(c, _)| c == re)
            .map(|(_, den)| Angle::rational(1, *den))
            .transpose()?;
        let upper = match base {
            Some(a) => a,
            None => {
                let approx = crate::hiprec::acos_turns(re, digits)?;
                let err = Q::new(BigInt::from(1), crate::arith::ten_pow(digits));
                Angle::irrational_with_computed_gap(approx, err, DEFAULT_GAP_DENOMINATOR)?
            }
        };
        Ok(UnitPoint::Turn(if im.is_positive() { upper } else { upper.conj() }))
    }

    pub fn conj(&self) -> UnitPoint {
        match self {
            UnitPoint::Turn(a) => UnitPoint::Turn(a.conj()),
            other => other.clone(),
        }
    }

    pub fn same(&self, other: &UnitPoint) -> bool {
        match (self, other) {
            (UnitPoint::One, UnitPoint::One) | (UnitPoint::MinusOne, UnitPoint::MinusOne) => true,
            (UnitPoint::Turn(a), UnitPoint::Turn(b)) => a.same_point(b),
            _ => false,
        }
    }

    /// `θ/π` for `ω = e^{iθ}`, `θ ∈ [0, 2π)`.
    pub fn theta_over_pi(&self) -> Real {
        match self {
            UnitPoint::One => Real::zero(),
            UnitPoint::MinusOne => Real::int(1),
            UnitPoint::Turn(a) => a.value().scale_int(2),
        }
    }

    /// `{m θ/π}`.
    pub fn frac_m_theta_over_pi(&self, m: u64) -> Result<Real> {
        match self {
            UnitPoint::One | UnitPoint::MinusOne => Ok(Real::zero()),
            UnitPoint::Turn(a) => a.frac_mul(2 * m),
        }
    }

    pub fn to_f64_turns(&self) -> f64 {
        match self {
            UnitPoint::One => 0.0,
            UnitPoint::MinusOne => 0.5,
            UnitPoint::Turn(a) => a.to_f64(),
        }
    }
}

impl fmt::Display for UnitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitPoint::One => write!(f, "1"),
            UnitPoint::MinusOne => write!(f, "-1"),
            UnitPoint::Turn(a) => write!(f, "e^(2πi·{a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rational;

    fn golden() -> Angle {
        let approx = parse_rational("0.6180339887498948482045868343656381177203091798057628621354").unwrap();
        Angle::irrational_with_computed_gap(approx, q(1, 1) / Q::from_integer(crate::arith::ten_pow(55)), 1000)
            .unwrap()
    }

    #[test]
    fn gap_matches_denominator_scan() {
        let scan = |x: &Q, max_den: i64| {
            (1..=max_den)
                .map(|den| {
                    let p = (x * qi(den)).round();
                    (x - p / qi(den)).abs()
                })
                .min()
                .unwrap()
        };
        for x in ["0.6180339887498948", "0.31415926535", "0.999", "0.0045", "0.5", "1.25", "0.142857"] {
            let x = parse_rational(x).unwrap();
            for max_den in [1, 2, 7, 50, 1000] {
                assert_eq!(rational_gap(&x, max_den), scan(&x, max_den), "{x} {max_den}");
            }
        }
    }

    #[test]
    fn rational_reduction_and_range() {
        assert_eq!(Angle::rational(2, 6).unwrap(), Angle::Rational { p: 1, q: 3 });
        assert!(Angle::rational(0, 3).is_err());
        assert!(Angle::rational(3, 3).is_err());
        assert!(Angle::rational(1, 0).is_err());
    }

    #[test]
    fn irrational_invariants() {
        assert!(Angle::irrational(q(1, 2), q(1, 10), q(1, 5)).is_err()); // err >= gap/4
        assert!(Angle::irrational(q(1, 2), q(1, 100), q(0, 1)).is_err());
        let g = golden();
        assert!(!g.mul_is_integer(1_000_000));
        assert_eq!(g.floor_mul(1).unwrap(), 0);
        assert_eq!(g.ceil_mul(1).unwrap(), 1);
        assert_eq!(g.floor_mul(100).unwrap(), 61);
        assert_eq!(g.phi_mul(7), 1);
    }

    #[test]
    fn rational_multiples() {
        let a = Angle::rational(1, 3).unwrap();
        assert_eq!(a.floor_mul(3).unwrap(), 1);
        assert_eq!(a.ceil_mul(3).unwrap(), 1);
        assert_eq!(a.ceil_mul(4).unwrap(), 2);
        assert_eq!(a.phi_mul(3), 0);
        assert_eq!(a.times(3), None);
        assert_eq!(a.times(2), Some(Angle::rational(2, 3).unwrap()));
        assert_eq!(a.frac_mul(5).unwrap(), Real::exact(q(2, 3)));
    }

    #[test]
    fn unit_points() {
        assert!(matches!(UnitPoint::from_complex(&q(1, 2), &q(1, 2), 30), Err(Error::NotOnUnitCircle)));
        let p = UnitPoint::from_complex(&q(3, 5), &q(4, 5), 40).unwrap();
        match &p {
            UnitPoint::Turn(a) => {
                assert!(!a.is_rational());
                assert!((a.to_f64() - (0.6f64).acos() / std::f64::consts::TAU).abs() < 1e-15);
            }
            _ => panic!(),
        }
        let m = UnitPoint::from_complex(&q(3, 5), &q(-4, 5), 40).unwrap();
        assert!(m.same(&p.conj()));
        assert_eq!(UnitPoint::from_complex(&q(-1, 1), &q(0, 1), 10).unwrap(), UnitPoint::MinusOne);
        assert_eq!(
            UnitPoint::from_complex(&q(-1, 2), &parse_rational("0").unwrap(), 10).err(),
            Some(Error::NotOnUnitCircle)
        );
        assert_eq!(UnitPoint::from_turn(Angle::rational(1, 2).unwrap()), UnitPoint::MinusOne);
    }
}
