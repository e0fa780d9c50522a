//! Deterministic searches producing the shipped example configurations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::angle::Angle;
use crate::arith::{floor_q, q, qi, ten_pow, Q};
use crate::cijump::SearchConfig;
use crate::error::{invalid, Result};
use crate::indexiter::{certify_dynamical_convexity, mean_index, IndexProfile};
use crate::symplin::{Block, NormalFormDecomposition};

use super::replay::{tuples_for_theorem_1_1, tuples_for_theorem_1_3};
use super::{
    mean_index_identity_check, morse_check, replay_theorem_1_1, replay_theorem_1_3, Configuration, LocalHomology,
    OrbitDescriptor, Status,
};

#[derive(Clone, Debug)]
pub struct KatokSearch {
    /// Decimal digits kept for every angle.
    pub digits: u32,
    pub m_top: i64,
    /// Smallest admissible turn angle (and distance of an angle from 1).
    pub min_angle: Q,
    /// Tuples (with `N` a multiple of `n − 1`) the lower-bound replay must survive.
    pub replay_tuples: usize,
    pub search: SearchConfig,
    /// Candidates `(radicands, divisors)` tried before the grid.
    pub seeds: Vec<([u64; 3], [i64; 3])>,
    /// Radicands `p` whose `{√p}` seed the angles, in search order.
    pub radicands: Vec<u64>,
    /// Divisors `L` for the angle near one.
    pub near_one_scales: Vec<i64>,
    /// Divisors `K` for the small angles.
    pub small_scales: Vec<i64>,
}

impl Default for KatokSearch {
    fn default() -> Self {
        KatokSearch {
            digits: 40,
            m_top: 60,
            min_angle: q(9, 2000),
            replay_tuples: 2,
            search: katok_search_config(),
            seeds: vec![([2, 3, 3], [25, 150, 100])],
            radicands: RADICANDS.to_vec(),
            near_one_scales: NEAR_ONE_SCALES.to_vec(),
            small_scales: SMALL_SCALES.to_vec(),
        }
    }
}

/// Jump search used with the shipped two-orbit example. Its angles are as
/// small as `9/2000`, so the window must be narrower than that.
pub fn katok_search_config() -> SearchConfig {
    SearchConfig { n_max: 100_000_000, epsilon: q(1, 20), delta: q(1, 250), m0: None, want: 1 }
}

fn truncate(x: &Q, digits: u32) -> Q {
    let scale = Q::from_integer(ten_pow(digits));
    Q::from_integer(floor_q(&(x * &scale))) / scale
}

/// `{√p}` truncated to `digits` decimals.
fn sqrt_frac(p: u64, digits: u32) -> Q {
    let s = (BigInt::from(p) * ten_pow(2 * digits)).sqrt();
    let x = Q::new(s, ten_pow(digits));
    &x - Q::from_integer(floor_q(&x))
}

fn marker(approx: &Q, digits: u32) -> Result<Angle> {
    let err = Q::new(BigInt::from(1), ten_pow(digits - 2));
    Angle::irrational_with_computed_gap(approx.clone(), err, 1000)
}

fn nondegenerate(label: &str, blocks: Vec<Block>, i: i64, digits: u32) -> Result<OrbitDescriptor> {
    let profile = IndexProfile::new(NormalFormDecomposition::new(blocks)?, i);
    let action = truncate(&mean_index(&profile).mid(), digits.min(12));
    Ok(OrbitDescriptor { label: label.into(), action, profile, local_homology: LocalHomology::NonDegenerate })
}

const RADICANDS: [u64; 24] = [2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20, 21, 22, 23, 24, 26, 27, 28, 29];
const NEAR_ONE_SCALES: [i64; 9] = [25, 30, 35, 40, 45, 50, 55, 60, 65];
const SMALL_SCALES: [i64; 3] = [100, 150, 200];

/// Two orbits, each a sum of two irrational rotations, whose mean indices
/// satisfy `1/μ̂₁ + 1/μ̂₂ = χ₊(3) = 1`.
///
/// The first orbit has base index 2 and angles `1 − {√p}/L` and `{√p′}/K`;
/// the second has base index 4, a small angle `{√p″}/K′`, and its last angle
/// solved from the identity. The seeds and then the grid are tried in a fixed
/// order and the first candidate passing every check is returned.
pub fn katok_like_n3(s: &KatokSearch) -> Result<Configuration> {
    for (p, k) in &s.seeds {
        if let Some(cfg) = katok_candidate(s, *p, *k)? {
            if katok_checks(&cfg, s)? {
                return Ok(cfg);
            }
        }
    }
    for &pa in &s.radicands {
        for &la in &s.near_one_scales {
            for &pb in &s.radicands {
                for &kb in &s.small_scales {
                    for &pc in &s.radicands {
                        for &kc in &s.small_scales {
                            if let Some(cfg) = katok_candidate(s, [pa, pb, pc], [la, kb, kc])? {
                                if katok_checks(&cfg, s)? {
                                    return Ok(cfg);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Err(invalid("fixture search exhausted its candidate list"))
}

/// The two-orbit configuration with radicands `p` and divisors `k`, unchecked.
/// `None` when an angle falls below the minimum or is not a usable marker.
pub fn katok_candidate(s: &KatokSearch, p: [u64; 3], k: [i64; 3]) -> Result<Option<Configuration>> {
    let digits = s.digits;
    let one = qi(1);
    let a = &one - truncate(&(sqrt_frac(p[0], digits) / qi(k[0])), digits);
    let b = truncate(&(sqrt_frac(p[1], digits) / qi(k[1])), digits);
    let mean1 = (&a + &b) * qi(2);
    let mean2 = &mean1 / (&mean1 - &one);
    let c = truncate(&(sqrt_frac(p[2], digits) / qi(k[2])), digits);
    let d = truncate(&(&mean2 / qi(2) - &one - &c), digits);
    let small = [&one - &a, b.clone(), c.clone(), d.clone()];
    if small.iter().any(|x| x < &s.min_angle) || d >= one {
        return Ok(None);
    }
    let mut m = Vec::new();
    for x in [&a, &b, &c, &d] {
        match marker(x, digits) {
            Ok(a) => m.push(a),
            Err(_) => return Ok(None),
        }
    }
    let x1 = nondegenerate("x1", vec![Block::Rot(m[0].clone()), Block::Rot(m[1].clone())], 2, digits)?;
    let x2 = nondegenerate("x2", vec![Block::Rot(m[2].clone()), Block::Rot(m[3].clone())], 4, digits)?;
    Ok(Some(Configuration::new(3, vec![x1, x2])?))
}

/// Every check the two-orbit example has to pass.
pub fn katok_checks(cfg: &Configuration, s: &KatokSearch) -> Result<bool> {
    for x in &cfg.orbits {
        if !certify_dynamical_convexity(&x.profile, cfg.n)?.passed {
            return Ok(false);
        }
    }
    if !mean_index_identity_check(cfg)?.holds || !morse_check(cfg, s.m_top)?.holds() {
        return Ok(false);
    }
    let Ok(tuples) = tuples_for_theorem_1_1(cfg, &s.search, s.replay_tuples) else {
        return Ok(false);
    };
    let v = replay_theorem_1_1(cfg, &tuples, &s.search.delta)?;
    if v.status != Status::ConsistentAtDepth || v.lower_bound != Some(2) {
        return Ok(false);
    }
    let Ok((t, t_sym)) = tuples_for_theorem_1_3(cfg, &s.search) else {
        return Ok(false);
    };
    Ok(replay_theorem_1_3(cfg, &t, &t_sym, &s.search.delta)?.certified())
}

/// One orbit made of `n − 1` blocks `N₁(1, 1)` whose local homology puts a
/// single class at `μ̂(x^k) + n − 1`; the base index is the first one for
/// which the lower-bound replay reports forcing.
pub fn sdm_forcing_n3(k_table: u64) -> Result<Configuration> {
    let n = 3i64;
    let blocks = vec![Block::EPlus; (n - 1) as usize];
    for i in 0..=8 {
        let profile = IndexProfile::new(NormalFormDecomposition::new(blocks.clone())?, i);
        let mean = mean_index(&profile);
        let Some(mean) = mean.exact_value().filter(|v| v.is_integer() && v.is_positive()).cloned() else {
            continue;
        };
        let table: BTreeMap<u64, BTreeMap<i64, u32>> = (1..=k_table)
            .map(|k| {
                let deg = (&mean * qi(k as i64)).to_integer() + BigInt::from(n - 1);
                (k, BTreeMap::from([(i64::try_from(deg).unwrap_or(i64::MAX), 1)]))
            })
            .collect();
        let x = OrbitDescriptor {
            label: "x1".into(),
            action: qi(1),
            profile,
            local_homology: LocalHomology::Table(table),
        };
        let Ok(cfg) = Configuration::new(n, vec![x]) else {
            continue;
        };
        let Ok(tuples) = tuples_for_theorem_1_1(&cfg, &SearchConfig::default(), 2) else {
            continue;
        };
        if tuples.iter().any(|t| 2 * t.m[0] + 1 > k_table) {
            continue;
        }
        let v = replay_theorem_1_1(&cfg, &tuples, &SearchConfig::default().delta)?;
        if v.status == Status::ForcedInfinitelyMany {
            return Ok(cfg);
        }
    }
    Err(invalid("no base index produced a forcing configuration"))
}

pub fn empty_config(n: i64) -> Result<Configuration> {
    Configuration::new(n, vec![])
}
