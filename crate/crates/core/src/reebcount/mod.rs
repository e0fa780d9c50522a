//! Homological bookkeeping for the unit cotangent bundle of `Sⁿ` and
//! mechanical replays of the orbit-counting arguments on finite orbit
//! configurations.

mod fixtures;
mod replay;

use std::collections::BTreeMap;
use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{big_to_i64, floor_q, lcm_u64, q, qi, real_decimal, Real, Q};
use crate::error::{invalid, Error, Result};
use crate::indexiter::{mean_index, mu_minus_iter, nu_iter, IndexProfile};
use crate::symplin::Block;

pub use fixtures::{empty_config, katok_candidate, katok_checks, katok_like_n3, katok_search_config, sdm_forcing_n3, KatokSearch};
pub use replay::{
    ellipticity_chain, tuples_for_theorem_1_1, tuples_for_theorem_1_3, replay_theorem_1_1, replay_theorem_1_3, ChainReport, ChainStep, Fact, Status,
    EllipticityReport, Verdict,
};

/// `b_k` of the positive `S¹`-equivariant symplectic homology, `k ≥ n − 1`.
pub fn betti(n: i64, k: i64) -> Result<u32> {
    if n < 2 {
        return Err(invalid("ambient dimension n must be at least 2"));
    }
    if k < n - 1 {
        return Err(Error::DomainBelowMin { k, min: n - 1 });
    }
    if (k - n).rem_euclid(2) == 0 {
        return Ok(0);
    }
    if k % (n - 1) == 0 {
        let j = k / (n - 1);
        if j > 1 && (n % 2 == 1 || j % 2 == 1) {
            return Ok(2);
        }
    }
    Ok(1)
}

/// `Σ_{k=n−1}^{k_top} (−1)^k b_k`.
pub fn betti_alternating_sum(n: i64, k_top: i64) -> Result<i64> {
    if k_top < n - 1 {
        return Err(Error::DomainBelowMin { k: k_top, min: n - 1 });
    }
    let mut s = 0i64;
    for k in n - 1..=k_top {
        let b = betti(n, k)? as i64;
        s += if k % 2 == 0 { b } else { -b };
    }
    Ok(s)
}

/// Asymptotic density `χ₊` of `(−1)^k b_k`.
pub fn chi_plus(n: i64) -> Result<Q> {
    if n < 2 {
        return Err(invalid("ambient dimension n must be at least 2"));
    }
    Ok(if n % 2 == 0 { q(-n, 2 * n - 2) } else { q(n + 1, 2 * n - 2) })
}

/// Degree → dimension.
pub type Graded = BTreeMap<i64, u32>;

#[derive(Clone, Debug, PartialEq)]
pub enum LocalHomology {
    NonDegenerate,
    /// Iterate `k` → graded dimensions.
    Table(BTreeMap<u64, Graded>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitDescriptor {
    pub label: String,
    pub action: Q,
    pub profile: IndexProfile,
    pub local_homology: LocalHomology,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub n: i64,
    pub orbits: Vec<OrbitDescriptor>,
}

impl Configuration {
    pub fn new(n: i64, orbits: Vec<OrbitDescriptor>) -> Result<Self> {
        let cfg = Configuration { n, orbits };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid("ambient dimension n must be at least 2"));
        }
        let mut seen = HashSet::new();
        for x in &self.orbits {
            if !seen.insert(x.label.as_str()) {
                return Err(invalid(format!("duplicate orbit label {:?}", x.label)));
            }
            if x.profile.d() as i64 != self.n - 1 {
                return Err(invalid(format!(
                    "orbit {:?} has half-dimension {} but n - 1 = {}",
                    x.label,
                    x.profile.d(),
                    self.n - 1
                )));
            }
            if !x.action.is_positive() {
                return Err(invalid(format!("orbit {:?} has non-positive action", x.label)));
            }
            if let LocalHomology::Table(t) = &x.local_homology {
                for (&k, graded) in t {
                    if k == 0 {
                        return Err(invalid(format!("orbit {:?}: iterate 0 in table", x.label)));
                    }
                    let lo = mu_minus_iter(&x.profile, k)?;
                    let hi = lo + nu_iter(&x.profile, k)? as i64;
                    if let Some((&deg, _)) = graded.iter().find(|(&deg, &dim)| dim > 0 && (deg < lo || deg > hi)) {
                        return Err(invalid(format!(
                            "orbit {:?}, iterate {k}: degree {deg} outside support window [{lo}, {hi}]",
                            x.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn profiles(&self) -> Vec<IndexProfile> {
        self.orbits.iter().map(|x| x.profile.clone()).collect()
    }

    pub fn without(&self, label: &str) -> Configuration {
        Configuration { n: self.n, orbits: self.orbits.iter().filter(|x| x.label != label).cloned().collect() }
    }
}

/// Local homology of `x^k`.
pub fn local_homology(x: &OrbitDescriptor, k: u64) -> Result<Graded> {
    if k == 0 {
        return Err(invalid("iterate count must be at least 1"));
    }
    if let LocalHomology::Table(t) = &x.local_homology {
        if let Some(g) = t.get(&k) {
            return Ok(g.iter().filter(|(_, &d)| d > 0).map(|(&a, &b)| (a, b)).collect());
        }
    }
    let nu = nu_iter(&x.profile, k)?;
    if nu > 0 {
        return Err(Error::DegenerateWithoutTable { label: x.label.clone(), k, nu });
    }
    Ok(BTreeMap::from([(mu_minus_iter(&x.profile, k)?, 1)]))
}

fn euler_of(g: &Graded) -> i64 {
    g.iter().map(|(&deg, &dim)| if deg.rem_euclid(2) == 0 { dim as i64 } else { -(dim as i64) }).sum()
}

/// `χ(x^k) = Σ_m (−1)^m dim SH_m(x^k)`.
pub fn local_euler(x: &OrbitDescriptor, k: u64) -> Result<i64> {
    Ok(euler_of(&local_homology(x, k)?))
}

/// Period of the nullity and index-parity patterns of the iterates.
pub fn euler_period(x: &OrbitDescriptor) -> Result<u64> {
    let mut t = 2u64;
    for b in x.profile.dec.blocks() {
        if let Block::Rot(a) | Block::N2Star(a) | Block::N2Zero(a) = b {
            if let Some(den) = a.denominator() {
                t = lcm_u64(t, den as u64);
            }
        }
    }
    if let LocalHomology::Table(table) = &x.local_homology {
        for (&k, g) in table {
            if let Some(h) = table.get(&(k + t)) {
                if euler_of(g) != euler_of(h) {
                    return Err(Error::PeriodUndetermined(format!(
                        "orbit {:?}: table Euler characteristics differ at iterates {k} and {}",
                        x.label,
                        k + t
                    )));
                }
            }
        }
    }
    Ok(t)
}

/// `χ̂(x) = (1/T) Σ_{k=1}^T χ(x^k)`.
pub fn mean_euler(x: &OrbitDescriptor) -> Result<Q> {
    let t = euler_period(x)?;
    let mut s = 0i64;
    for k in 1..=t {
        s += local_euler(x, k)?;
    }
    Ok(q(s, t as i64))
}

fn positive_mean(x: &OrbitDescriptor) -> Result<Real> {
    let m = mean_index(&x.profile);
    if m.lo().is_positive() {
        Ok(m)
    } else if m.hi().is_positive() {
        Err(Error::PrecisionExhausted(format!("sign of mean index of {:?} undecided", x.label)))
    } else {
        Err(Error::MeanIndexNonpositive(real_decimal(&m)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityTerm {
    pub label: String,
    pub mean_euler: Q,
    pub mean_index: Real,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub terms: Vec<IdentityTerm>,
    pub lhs: Real,
    pub chi_plus: Q,
    /// `Σ χ̂/μ̂ − χ₊`.
    pub residual: Real,
    /// The residual interval contains 0.
    pub holds: bool,
}

/// `Σ χ̂(x_i)/μ̂(x_i) = χ₊`.
pub fn mean_index_identity_check(cfg: &Configuration) -> Result<IdentityReport> {
    let chi = chi_plus(cfg.n)?;
    let mut terms = Vec::new();
    let mut lhs = Real::zero();
    for x in &cfg.orbits {
        let mean = positive_mean(x)?;
        let e = mean_euler(x)?;
        lhs = lhs.add(&mean.recip()?.scale(&e));
        terms.push(IdentityTerm { label: x.label.clone(), mean_euler: e, mean_index: mean });
    }
    let residual = lhs.add_q(&-&chi);
    let holds = residual.contains(&Q::zero());
    Ok(IdentityReport { terms, lhs, chi_plus: chi, residual, holds })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseRow {
    pub degree: i64,
    pub c: u64,
    pub b: u32,
    /// `Σ_{k ≤ m} (−1)^{m−k} (c_k − b_k)`.
    pub alternating: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseReport {
    pub m_top: i64,
    pub rows: Vec<MorseRow>,
    /// Iterates `x^k` contributing to some degree in `[n − 1, m_top]`.
    pub contributions: Vec<(String, u64)>,
    /// Total dimension found below degree `n − 1`.
    pub below_min: u64,
    pub failures: Vec<i64>,
}

impl MorseReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.below_min == 0
    }

    pub fn first_violation(&self) -> Option<i64> {
        self.failures.first().copied()
    }
}

/// Largest `k` with `μ₋(x^k) ≤ top` possible, from `μ₋(x^k) ≥ kμ̂ − d`.
fn last_iterate_below(x: &OrbitDescriptor, top: i64) -> Result<u64> {
    let mean = positive_mean(x)?;
    let bound = qi(top + x.profile.d() as i64) / mean.lo();
    Ok(big_to_i64(&floor_q(&bound))?.max(0) as u64)
}

/// Morse inequalities `c_m − c_{m−1} + ⋯ ≥ b_m − b_{m−1} + ⋯` for `n − 1 ≤ m ≤ m_top`.
pub fn morse_check(cfg: &Configuration, m_top: i64) -> Result<MorseReport> {
    let lo = cfg.n - 1;
    if m_top < lo {
        return Err(Error::DomainBelowMin { k: m_top, min: lo });
    }
    let mut c: BTreeMap<i64, u64> = BTreeMap::new();
    let mut contributions = Vec::new();
    let mut below_min = 0u64;
    for x in &cfg.orbits {
        for k in 1..=last_iterate_below(x, m_top)? {
            let a = mu_minus_iter(&x.profile, k)?;
            if a > m_top {
                continue;
            }
            let g = local_homology(x, k)?;
            let mut used = false;
            for (&deg, &dim) in &g {
                if deg < lo {
                    below_min += dim as u64;
                } else if deg <= m_top {
                    *c.entry(deg).or_default() += dim as u64;
                    used = true;
                }
            }
            if used {
                contributions.push((x.label.clone(), k));
            }
        }
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut acc = 0i64;
    for m in lo..=m_top {
        let cm = c.get(&m).copied().unwrap_or(0);
        let bm = betti(cfg.n, m)?;
        acc = (cm as i64 - bm as i64) - acc;
        let holds = acc >= 0;
        if !holds {
            failures.push(m);
        }
        rows.push(MorseRow { degree: m, c: cm, b: bm, alternating: acc, holds });
    }
    Ok(MorseReport { m_top, rows, contributions, below_min, failures })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdmReport {
    pub k: u64,
    pub mean: Real,
    pub mean_even_integer: bool,
    /// Degree `μ̂(x^k) + n − 1`, when `μ̂(x^k)` is an integer.
    pub top_degree: Option<i64>,
    pub top_dimension: u32,
    pub is_sdm: bool,
    /// `ν(x^k) = ν(x)`.
    pub admissible: bool,
}

/// Whether `x^k` is a symplectically degenerate maximum.
pub fn sdm_predicate(x: &OrbitDescriptor, k: u64, n: i64) -> Result<SdmReport> {
    let g = local_homology(x, k)?;
    let mean = mean_index(&x.profile).scale_int(k as i64);
    let int = mean.exact_value().filter(|v| v.is_integer()).map(|v| big_to_i64(&v.to_integer())).transpose()?;
    let even = int.is_some_and(|v| v.is_even());
    let top_degree = int.map(|v| v + n - 1);
    let top_dimension = top_degree.and_then(|t| g.get(&t).copied()).unwrap_or(0);
    let admissible = nu_iter(&x.profile, k)? == nu_iter(&x.profile, 1)?;
    Ok(SdmReport { k, mean, mean_even_integer: even, top_degree, top_dimension, is_sdm: even && top_dimension > 0, admissible })
}
