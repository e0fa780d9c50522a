//! Iterated Maslov-type indices of a symplectic path described by the normal
//! form of its endpoint and its own index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::angle::Angle;
use crate::arith::{qi, real_decimal, Real, Q};
use crate::error::{invalid, Error, Result};
use crate::symplin::{Block, NormalFormDecomposition};
use num_traits::Signed;

#[derive(Clone, Debug, PartialEq)]
pub struct IndexProfile {
    pub dec: NormalFormDecomposition,
    /// `μ₋` of the path itself (`i(γ)`).
    pub base_index: i64,
}

impl IndexProfile {
    pub fn new(dec: NormalFormDecomposition, base_index: i64) -> Self {
        IndexProfile { dec, base_index }
    }

    pub fn d(&self) -> usize {
        self.dec.d()
    }

    /// Profile of the `k`-th iterate: endpoint `M^k` and index `μ₋(Φ^k)`.
    pub fn iterate(&self, k: u64) -> Result<IndexProfile> {
        Ok(IndexProfile { dec: self.dec.power(k), base_index: mu_minus_iter(self, k)? })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterateIndices {
    pub m: u64,
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub nu: u32,
    pub mean_times_m: Real,
}

fn check_m(m: u64) -> Result<()> {
    if m == 0 {
        Err(invalid("iterate count must be at least 1"))
    } else {
        Ok(())
    }
}

/// `μ₋(Φ^m)`.
pub fn mu_minus_iter(p: &IndexProfile, m: u64) -> Result<i64> {
    check_m(m)?;
    let c = p.dec.counts();
    let mi = m as i64;
    let (p_minus, p_zero, r) = (c.p_minus as i64, c.p_zero as i64, c.r as i64);
    let mut total = mi * (p.base_index + p_minus + p_zero - r) - r - p_minus - p_zero;
    for a in p.dec.rotation_angles() {
        total += 2 * a.ceil_mul(m)?;
    }
    if m % 2 == 0 {
        total -= (c.q_zero + c.q_plus) as i64;
    }
    for a in p.dec.n2_star_angles() {
        total += 2 * a.phi_mul(m);
    }
    total -= 2 * c.r_star as i64;
    Ok(total)
}

/// `ν₁(Φ^m)`: nullity of `M^m` at 1.
pub fn nu_iter(p: &IndexProfile, m: u64) -> Result<u32> {
    check_m(m)?;
    let even = m % 2 == 0;
    Ok(p.dec
        .blocks()
        .iter()
        .map(|b| match b {
            Block::EMinus | Block::EPlus => 1,
            Block::EId => 2,
            Block::FMinus | Block::FPlus if even => 1,
            Block::FId if even => 2,
            Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a) if a.mul_is_integer(m) => 2,
            _ => 0,
        })
        .sum())
}

/// `μ₊(Φ^m) = μ₋(Φ^m) + ν₁(Φ^m)`.
pub fn mu_plus_iter(p: &IndexProfile, m: u64) -> Result<i64> {
    Ok(mu_minus_iter(p, m)? + nu_iter(p, m)? as i64)
}

/// `μ̂ = i + p₋ + p₀ − r + Σ θ_j/π`.
pub fn mean_index(p: &IndexProfile) -> Real {
    let c = p.dec.counts();
    let mut base = p.base_index + c.p_minus as i64 + c.p_zero as i64 - c.r as i64;
    // a rotation and its conjugate contribute θ/π + (2 − θ/π) = 2 exactly
    let mut left: Vec<&Angle> = Vec::new();
    for a in p.dec.rotation_angles() {
        match left.iter().position(|b| !a.is_rational() && b.same_point(&a.conj())) {
            Some(k) => {
                left.swap_remove(k);
                base += 2;
            }
            None => left.push(a),
        }
    }
    left.iter().fold(Real::int(base), |acc, a| acc.add(&a.value().scale_int(2)))
}

pub fn iterate_indices(p: &IndexProfile, m: u64) -> Result<IterateIndices> {
    let mu_minus = mu_minus_iter(p, m)?;
    let nu = nu_iter(p, m)?;
    Ok(IterateIndices {
        m,
        mu_minus,
        mu_plus: mu_minus + nu as i64,
        nu,
        mean_times_m: mean_index(p).scale_int(m as i64),
    })
}

/// `μ₋(Φ^m)` for `m = 1..=m_max`, evaluated in parallel.
pub fn mu_minus_series(p: &IndexProfile, m_max: u64) -> Result<Vec<i64>> {
    iterates(m_max).map(|m| mu_minus_iter(p, m)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub m_max: u64,
    /// `μ₋(Φ) − e(P)/2 ≤ μ₋(Φ^{m+1}) − μ₊(Φ^m)` for all checked `m`.
    pub holds: bool,
    pub first_counterexample: Option<u64>,
    /// The threshold `μ₋(Φ) ≥ threshold` under which `μ₋(Φ^{m+1}) ≥ μ₊(Φ^m)` is claimed.
    pub corollary_threshold: i64,
    pub corollary_applies: bool,
    /// First `m` with `μ₋(Φ^{m+1}) < μ₊(Φ^m)` when the corollary applies.
    pub corollary_counterexample: Option<u64>,
}

#[cfg(feature = "parallel")]
fn iterates(m_max: u64) -> rayon::range_inclusive::Iter<u64> {
    (1..=m_max).into_par_iter()
}

#[cfg(not(feature = "parallel"))]
fn iterates(m_max: u64) -> std::ops::RangeInclusive<u64> {
    1..=m_max
}

pub fn check_gap_inequality(p: &IndexProfile, m_max: u64) -> Result<GapReport> {
    check_m(m_max)?;
    let e = p.dec.total_elliptic_multiplicity() as i64;
    // compare doubled quantities to keep e/2 integral
    let lhs2 = 2 * p.base_index - e;
    let threshold = p.d() as i64;
    let applies = p.base_index >= threshold;
    let rows: Vec<(u64, i64)> = iterates(m_max)
        .map(|m| Ok((m, mu_minus_iter(p, m + 1)? - mu_plus_iter(p, m)?)))
        .collect::<Result<_>>()?;
    let first = rows.iter().find(|(_, g)| 2 * g < lhs2).map(|(m, _)| *m);
    let cor = if applies { rows.iter().find(|(_, g)| *g < 0).map(|(m, _)| *m) } else { None };
    Ok(GapReport {
        m_max,
        holds: first.is_none(),
        first_counterexample: first,
        corollary_threshold: threshold,
        corollary_applies: applies,
        corollary_counterexample: cor,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityCertificate {
    pub passed: bool,
    /// Iterates `1..=m_star` were checked; beyond it `|μ₋(Φ^m) − mμ̂| ≤ d` suffices.
    pub m_star: u64,
    pub violating_m: Option<u64>,
    pub mean: Real,
}

/// Checks `μ₋(Φ^m) ≥ n − 1` for every `m ≥ 1`.
pub fn certify_dynamical_convexity(p: &IndexProfile, ambient_n: i64) -> Result<ConvexityCertificate> {
    let d = p.d() as i64;
    if d != ambient_n - 1 {
        return Err(invalid(format!(
            "profile half-dimension {d} does not match ambient n - 1 = {}",
            ambient_n - 1
        )));
    }
    let mean = mean_index(p);
    if !mean.lo().is_positive() {
        if mean.hi().is_positive() {
            return Err(Error::PrecisionExhausted(format!("sign of mean index {} undecided", real_decimal(&mean))));
        }
        return Err(Error::MeanIndexNonpositive(real_decimal(&mean)));
    }
    let need = qi(ambient_n - 1 + d);
    let m_star_q: Q = need / mean.lo();
    let m_star = crate::arith::ceil_q(&m_star_q);
    let m_star = crate::arith::big_to_i64(&m_star)?.max(1) as u64;
    for m in 1..=m_star {
        if mu_minus_iter(p, m)? < ambient_n - 1 {
            return Ok(ConvexityCertificate { passed: false, m_star, violating_m: Some(m), mean });
        }
    }
    Ok(ConvexityCertificate { passed: true, m_star, violating_m: None, mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, q};

    fn prof(blocks: Vec<Block>, i: i64) -> IndexProfile {
        IndexProfile::new(NormalFormDecomposition::new(blocks).unwrap(), i)
    }

    fn rot(p: i64, d: i64) -> Block {
        Block::Rot(Angle::rational(p, d).unwrap())
    }

    fn golden() -> Angle {
        Angle::irrational_with_computed_gap(
            parse_rational("0.6180339887498948482045868343656381177203").unwrap(),
            q(1, 1) / Q::from_integer(crate::arith::ten_pow(38)),
            1000,
        )
        .unwrap()
    }

    #[test]
    fn first_iterate_is_base_index() {
        let p = prof(vec![rot(1, 3), Block::EMinus, Block::FPlus, Block::N2Star(Angle::rational(1, 5).unwrap())], 4);
        assert_eq!(mu_minus_iter(&p, 1).unwrap(), 4);
    }

    #[test]
    fn spec_style_examples() {
        let p = prof(vec![rot(1, 3)], 1);
        assert_eq!(mu_minus_iter(&p, 3).unwrap(), 1);
        assert_eq!(nu_iter(&p, 3).unwrap(), 2);
        assert_eq!(nu_iter(&p, 2).unwrap(), 0);
        assert_eq!(mu_plus_iter(&p, 3).unwrap(), 3);
        assert_eq!(mean_index(&p).exact_value(), Some(&q(2, 3)));
        let h = prof(vec![Block::Hyp(1)], 2);
        assert_eq!(mu_minus_iter(&h, 5).unwrap(), 10);
        assert_eq!(mu_plus_iter(&h, 1).unwrap(), 2);
        assert_eq!(nu_iter(&prof(vec![Block::FMinus], 0), 2).unwrap(), 1);
        assert_eq!(mu_plus_iter(&prof(vec![Block::EId, Block::EPlus], 7), 1).unwrap(), 10);
        let e = prof(vec![Block::EMinus, Block::EId], 3);
        assert_eq!(mean_index(&e).exact_value(), Some(&qi(5)));
    }

    #[test]
    fn gap_inequality() {
        let g = prof(vec![Block::Rot(golden())], 1);
        assert!(check_gap_inequality(&g, 100).unwrap().holds);
        let h = prof(vec![Block::Hyp(1)], 1);
        let r = check_gap_inequality(&h, 50).unwrap();
        assert!(r.holds);
        assert!(r.corollary_applies);
        assert_eq!(r.corollary_counterexample, None);
    }

    #[test]
    fn convexity() {
        let a = Block::Rot(golden());
        let b = Block::Rot(golden().conj());
        let c = certify_dynamical_convexity(&prof(vec![a, b], 2), 3).unwrap();
        assert!(c.passed);
        let f = certify_dynamical_convexity(&prof(vec![Block::Hyp(2)], 1), 3).unwrap();
        assert_eq!(f.violating_m, Some(1));
        let z = certify_dynamical_convexity(&prof(vec![Block::EMinus, Block::EMinus, Block::EMinus], -3), 4);
        assert!(matches!(z, Err(Error::MeanIndexNonpositive(_))));
    }

    #[test]
    fn iterate_profile_keeps_bott_scaling() {
        let p = prof(vec![rot(1, 3), rot(2, 5), Block::FPlus], 3);
        for k in 1..6 {
            let it = p.iterate(k).unwrap();
            assert_eq!(mean_index(&it).exact_value().cloned(), Some(mean_index(&p).exact_value().unwrap() * qi(k as i64)));
            for m in 1..8 {
                assert_eq!(mu_minus_iter(&it, m).unwrap(), mu_minus_iter(&p, k * m).unwrap(), "k={k} m={m}");
            }
        }
    }
}
