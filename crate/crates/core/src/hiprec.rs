//! Fixed-point evaluation of `acos` to a requested number of decimal digits.
//! Used only to turn exactly-known cosines into turn fractions.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{ten_pow, Q};
use crate::error::{Error, Result};

const GUARD: u32 = 24;

fn atan_series(x: &BigInt, scale: &BigInt) -> BigInt {
    // |x| <= scale/10, so the series gains at least two digits per term.
    let x2 = x * x / scale;
    let mut term = x.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term = term * &x2 / scale;
        k += 1;
    }
    sum
}

fn pi_fixed(scale: &BigInt) -> BigInt {
    let a = atan_series(&(scale / BigInt::from(5)), scale);
    let b = atan_series(&(scale / BigInt::from(239)), scale);
    a * 16 - b * 4
}

fn atan_fixed(t: &BigInt, scale: &BigInt, pi: &BigInt) -> BigInt {
    if t.is_negative() {
        return -atan_fixed(&-t, scale, pi);
    }
    if t > scale {
        let inv = scale * scale / t;
        return pi / 2 - atan_fixed(&inv, scale, pi);
    }
    let mut t = t.clone();
    let mut doublings = 0u32;
    let tenth = scale / BigInt::from(10);
    while t > tenth {
        // atan(t) = 2 atan(t / (1 + sqrt(1 + t^2)))
        let root = (scale * scale + &t * &t).sqrt();
        t = &t * scale / (scale + root);
        doublings += 1;
    }
    atan_series(&t, scale) << doublings
}

/// `acos(c) / 2π` rounded to `digits` decimal places. Fails when `c` is so
/// close to ±1 that the requested precision cannot be guaranteed.
pub fn acos_turns(c: &Q, digits: u32) -> Result<Q> {
    let w = digits + GUARD;
    let scale = ten_pow(w);
    let cf: BigInt = (c * Q::from_integer(scale.clone())).round().to_integer();
    let margin = ten_pow(w - 10);
    if cf.abs() >= &scale - &margin {
        return Err(Error::PrecisionExhausted(
            "cosine within 1e-10 of ±1; angle too close to 0 or π".into(),
        ));
    }
    let pi = pi_fixed(&scale);
    let s = (&scale * &scale - &cf * &cf).sqrt();
    let t = &cf * &scale / &s;
    let theta = &pi / 2 - atan_fixed(&t, &scale, &pi);
    let out_scale = ten_pow(digits);
    let turns = Q::new(theta * &out_scale, pi * 2);
    Ok(Q::new(turns.round().to_integer(), out_scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, to_f64};

    #[test]
    fn known_angles() {
        // acos(1/2) = π/3 -> 1/6 turn
        let a = acos_turns(&q(1, 2), 50).unwrap();
        assert!((a - q(1, 6)).abs() < q(1, 1) / Q::from_integer(ten_pow(49)));
        let b = acos_turns(&q(-1, 2), 50).unwrap();
        assert!((b - q(1, 3)).abs() < q(1, 1) / Q::from_integer(ten_pow(49)));
        let z = acos_turns(&q(0, 1), 40).unwrap();
        assert!((z - q(1, 4)).abs() < q(1, 1) / Q::from_integer(ten_pow(39)));
    }

    #[test]
    fn agrees_with_f64() {
        for &(n, d) in &[(3, 5), (-4, 5), (99, 100), (-1, 7), (12, 13)] {
            let a = to_f64(&acos_turns(&q(n, d), 30).unwrap());
            let f = (n as f64 / d as f64).acos() / (2.0 * std::f64::consts::PI);
            assert!((a - f).abs() < 1e-14, "{n}/{d}: {a} vs {f}");
        }
    }

    #[test]
    fn rejects_near_unit() {
        assert!(acos_turns(&(q(1, 1) - Q::new(1.into(), ten_pow(12))), 30).is_err());
    }
}
