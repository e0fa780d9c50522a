//! Common index jump tuples: search by simultaneous Diophantine
//! approximation and exact re-verification of the jump identities.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::angle::UnitPoint;
use crate::arith::{format_decimal, lcm_u64, q, qi, real_decimal, Real, Q};
use crate::error::{invalid, Error, Result};
use crate::indexiter::{mean_index, mu_minus_iter, mu_plus_iter, nu_iter, IndexProfile};

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub n_max: u64,
    pub epsilon: Q,
    pub delta: Q,
    pub m0: Option<u64>,
    pub want: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { n_max: 1_000_000, epsilon: q(1, 20), delta: q(1, 40), m0: None, want: 1 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let half = q(1, 2);
        if !self.epsilon.is_positive() || self.epsilon >= half {
            return Err(invalid("epsilon must lie in (0, 1/2)"));
        }
        if !self.delta.is_positive() || self.delta >= half {
            return Err(invalid("delta must lie in (0, 1/2)"));
        }
        if self.delta >= self.epsilon {
            return Err(invalid("delta must be smaller than epsilon"));
        }
        if self.m0 == Some(0) {
            return Err(invalid("M0 must be positive"));
        }
        if self.n_max == 0 || self.want == 0 {
            return Err(invalid("N_max and want must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpTuple {
    pub n: u64,
    pub m: Vec<u64>,
    pub chi: Vec<u8>,
    pub delta_list: Vec<u32>,
    pub epsilon: Q,
    pub m_common: u64,
    pub m0: Option<u64>,
}

/// Diophantine data for a collection of profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct VVector {
    pub v: Vec<Real>,
    pub m_common: u64,
    pub l: usize,
    pub means: Vec<Real>,
}

/// Unit eigenvalues other than 1, each listed `S⁻` times.
fn s_minus_alphas(p: &IndexProfile) -> Vec<Real> {
    p.dec.s_minus_points().iter().map(UnitPoint::theta_over_pi).collect()
}

fn positive_means(profiles: &[IndexProfile]) -> Result<Vec<Real>> {
    profiles
        .iter()
        .map(|p| {
            let mean = mean_index(p);
            if mean.lo().is_positive() {
                Ok(mean)
            } else if mean.hi().is_positive() {
                Err(Error::PrecisionExhausted(format!("sign of mean index {} undecided", real_decimal(&mean))))
            } else {
                Err(Error::MeanIndexNonpositive(real_decimal(&mean)))
            }
        })
        .collect()
}

/// `v = (1/(Mμ̂_1), …, 1/(Mμ̂_q), α_{1,1}/μ̂_1, …, α_{q,μ_q}/μ̂_q)`.
pub fn build_v_vector(profiles: &[IndexProfile]) -> Result<VVector> {
    let means = positive_means(profiles)?;
    let mut m_common = 1u64;
    for p in profiles {
        for w in p.dec.eigen_points() {
            if let Some(x) = w.theta_over_pi().exact_value() {
                let den = x.denom().to_u64().ok_or_else(|| invalid("angle denominator too large"))?;
                m_common = lcm_u64(m_common, den);
            }
        }
    }
    let mq = qi(m_common as i64);
    let mut v = Vec::new();
    for mean in &means {
        v.push(mean.scale(&mq).recip()?);
    }
    for (p, mean) in profiles.iter().zip(&means) {
        for a in s_minus_alphas(p) {
            v.push(a.div(mean)?);
        }
    }
    let l = v.len();
    Ok(VVector { v, m_common, l, means })
}

/// `Δ = Σ S⁻` over eigenvalues with `0 < {mθ/π} < δ`.
pub fn delta_count(p: &IndexProfile, m: u64, delta: &Q) -> Result<u32> {
    let mut total = 0;
    for w in p.dec.eigen_points() {
        if matches!(w, UnitPoint::One) {
            continue;
        }
        let s = p.dec.splitting_numbers(&w).s_minus;
        if s == 0 {
            continue;
        }
        let f = w.frac_m_theta_over_pi(m)?;
        if f.is_exact() && f.lo().is_zero() {
            continue;
        }
        if f.cmp_q(delta)? == Ordering::Less {
            total += s;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub profile: usize,
    pub identity: &'static str,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub ok: bool,
    pub checks: Vec<Check>,
    pub deltas: Vec<u32>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn push_int(checks: &mut Vec<Check>, profile: usize, identity: &'static str, expected: i64, actual: Result<i64>) {
    match actual {
        Ok(a) => checks.push(Check {
            profile,
            identity,
            expected: expected.to_string(),
            actual: a.to_string(),
            holds: a == expected,
        }),
        Err(e) => checks.push(Check {
            profile,
            identity,
            expected: expected.to_string(),
            actual: e.to_string(),
            holds: false,
        }),
    }
}

/// Whether every unit eigenvalue has `{mθ/π} ∈ [0,δ) ∪ (1−δ,1)`.
fn in_windows(p: &IndexProfile, m: u64, delta: &Q) -> Result<bool> {
    let upper = qi(1) - delta;
    for w in p.dec.eigen_points() {
        let f = w.frac_m_theta_over_pi(m)?;
        let low = f.cmp_q(delta)? == Ordering::Less;
        let high = f.cmp_q(&upper)? == Ordering::Greater;
        if !low && !high {
            return Ok(false);
        }
    }
    Ok(true)
}

fn m_from_formula(n: u64, m_common: u64, mean: &Real, chi: u8) -> Result<u64> {
    let x = mean.scale(&qi(m_common as i64)).recip()?.scale(&qi(n as i64));
    let f = x.floor()?;
    let f = f.to_u64().ok_or_else(|| invalid("negative quotient"))?;
    Ok((f + chi as u64) * m_common)
}

/// Re-derives every jump identity for `t` through the index formulas.
pub fn verify_tuple(profiles: &[IndexProfile], t: &JumpTuple, delta: &Q) -> VerifyReport {
    let mut checks = Vec::new();
    let mut deltas = Vec::new();
    let two_n = 2 * t.n as i64;
    if t.m.len() != profiles.len() {
        checks.push(Check {
            profile: 0,
            identity: "tuple length",
            expected: profiles.len().to_string(),
            actual: t.m.len().to_string(),
            holds: false,
        });
        return VerifyReport { ok: false, checks, deltas };
    }
    if let Some(m0) = t.m0 {
        checks.push(Check {
            profile: 0,
            identity: "M0 | N",
            expected: "0".into(),
            actual: (t.n % m0).to_string(),
            holds: m0 > 0 && t.n % m0 == 0,
        });
    }
    for (i, (p, &m)) in profiles.iter().zip(&t.m).enumerate() {
        if m == 0 {
            checks.push(Check { profile: i, identity: "m > 0", expected: ">0".into(), actual: "0".into(), holds: false });
            deltas.push(0);
            continue;
        }
        if let Some(&chi) = t.chi.get(i) {
            let mean = mean_index(p);
            let expect = m_from_formula(t.n, t.m_common, &mean, chi);
            checks.push(Check {
                profile: i,
                identity: "m = ([N/(M mean)] + chi) M",
                expected: expect.as_ref().map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
                actual: m.to_string(),
                holds: expect.as_ref().is_ok_and(|x| *x == m),
            });
        }
        let nu1 = nu_iter(p, 1).unwrap_or(0) as i64;
        let mu1 = p.base_index;
        let s_plus = p.dec.splitting_numbers(&UnitPoint::One).s_plus as i64;
        let c = p.dec.c_of() as i64;
        let d = delta_count(p, m, delta);
        let dv = d.as_ref().map(|x| *x as i64).unwrap_or(0);
        deltas.push(dv as u32);
        if let Err(e) = &d {
            checks.push(Check { profile: i, identity: "Delta", expected: "decidable".into(), actual: e.to_string(), holds: false });
        }
        if let Some(&recorded) = t.delta_list.get(i) {
            checks.push(Check {
                profile: i,
                identity: "recorded Delta",
                expected: dv.to_string(),
                actual: recorded.to_string(),
                holds: recorded as i64 == dv,
            });
        }
        push_int(&mut checks, i, "nu(2m-1) = nu(1)", nu1, nu_iter(p, 2 * m - 1).map(i64::from));
        push_int(&mut checks, i, "nu(2m+1) = nu(1)", nu1, nu_iter(p, 2 * m + 1).map(i64::from));
        push_int(&mut checks, i, "mu-(2m+1) = 2N + mu-(1)", two_n + mu1, mu_minus_iter(p, 2 * m + 1));
        push_int(
            &mut checks,
            i,
            "mu+(2m-1) = 2N - mu-(1) - 2S+(1) + nu(1)",
            two_n - mu1 - 2 * s_plus + nu1,
            mu_plus_iter(p, 2 * m - 1),
        );
        push_int(
            &mut checks,
            i,
            "mu-(2m) = 2N - (S+(1) + C - 2Delta)",
            two_n - (s_plus + c - 2 * dv),
            mu_minus_iter(p, 2 * m),
        );
        let win = in_windows(p, m, delta);
        checks.push(Check {
            profile: i,
            identity: "{m theta/pi} in [0,delta) or (1-delta,1)",
            expected: "true".into(),
            actual: win.as_ref().map(|b| b.to_string()).unwrap_or_else(|e| e.to_string()),
            holds: win.unwrap_or(false),
        });
    }
    let ok = checks.iter().all(|c| c.holds);
    VerifyReport { ok, checks, deltas }
}

struct ScanContext<'a> {
    profiles: &'a [IndexProfile],
    vv: VVector,
    vf: Vec<f64>,
    alphas_f: Vec<Vec<f64>>,
    cfg: &'a SearchConfig,
}

impl ScanContext<'_> {
    fn new<'a>(profiles: &'a [IndexProfile], cfg: &'a SearchConfig) -> Result<ScanContext<'a>> {
        cfg.validate()?;
        if profiles.is_empty() {
            return Err(invalid("no profiles given"));
        }
        let vv = build_v_vector(profiles)?;
        let vf = vv.v.iter().map(Real::to_f64).collect();
        let alphas_f = profiles
            .iter()
            .map(|p| p.dec.eigen_points().iter().map(|w| w.theta_over_pi().to_f64()).collect())
            .collect();
        Ok(ScanContext { profiles, vv, vf, alphas_f, cfg })
    }

    /// Max-norm distance from `{Nv}` to the nearest cube vertex, in `f64`.
    /// Stops early once the distance exceeds `cut`.
    fn screen(&self, n: u64, cut: f64) -> f64 {
        let nf = n as f64;
        let mut worst = 0.0f64;
        for v in &self.vf {
            let x = nf * v;
            let f = x - x.floor();
            worst = worst.max(f.min(1.0 - f));
            if worst > cut {
                break;
            }
        }
        worst
    }

    /// Exact vertex test and tuple construction.
    /// Cheap `f64` test of the resonance windows for the `m_i` that `N`
    /// would produce.
    fn windows_plausible(&self, n: u64) -> bool {
        let nf = n as f64;
        let delta_f = self.cfg.delta.to_f64().unwrap_or(0.0);
        let mc = self.vv.m_common as f64;
        for (i, alphas) in self.alphas_f.iter().enumerate() {
            let x = nf * self.vf[i];
            let mi = (x.floor() + if x.rem_euclid(1.0) > 0.5 { 1.0 } else { 0.0 }) * mc;
            let slack = 1e-9 + 1e-13 * mi * (1.0 + nf);
            for a in alphas {
                let y = (mi * a).rem_euclid(1.0);
                if y.min(1.0 - y) > delta_f + slack {
                    return false;
                }
            }
        }
        true
    }

    fn candidate(&self, n: u64) -> Option<JumpTuple> {
        let eps = &self.cfg.epsilon;
        let one_minus = qi(1) - eps;
        let nq = qi(n as i64);
        let mut chi = Vec::with_capacity(self.vv.l);
        for (v, vf) in self.vv.v.iter().zip(&self.vf) {
            let Ok(f) = v.scale(&nq).frac() else {
                // within the error radius of an integer: a vertex either way
                let x = (n as f64 * vf).rem_euclid(1.0);
                chi.push(u8::from(x > 0.5));
                continue;
            };
            if f.cmp_q(eps).ok()? == Ordering::Less {
                chi.push(0);
            } else if f.cmp_q(&one_minus).ok()? == Ordering::Greater {
                chi.push(1);
            } else {
                return None;
            }
        }
        let mut m = Vec::with_capacity(self.profiles.len());
        for (mean, &c) in self.vv.means.iter().zip(&chi) {
            let mi = m_from_formula(n, self.vv.m_common, mean, c).ok()?;
            if mi == 0 {
                return None;
            }
            m.push(mi);
        }
        let mut t = JumpTuple {
            n,
            m,
            chi,
            delta_list: vec![],
            epsilon: eps.clone(),
            m_common: self.vv.m_common,
            m0: self.cfg.m0,
        };
        let report = verify_tuple(self.profiles, &t, &self.cfg.delta);
        if !report.ok {
            return None;
        }
        t.delta_list = report.deltas;
        Some(t)
    }

    /// Scans `N = M0, 2M0, …` in parallel blocks, keeping increasing-`N` order.
    fn scan(&self, want: usize, accept: impl Fn(&JumpTuple) -> bool + Sync) -> (Vec<JumpTuple>, f64) {
        const CHUNK: u64 = 4096;
        const CHUNKS_PER_ROUND: u64 = 64;
        let stride = self.cfg.m0.unwrap_or(1);
        let j_max = self.cfg.n_max / stride;
        let eps_f = self.cfg.epsilon.to_f64().unwrap_or(0.0);
        let mut found = Vec::new();
        let mut best = f64::INFINITY;
        let mut start = 1u64;
        let mut round = 1u64;
        while start <= j_max && found.len() < want {
            let round_end = (start + CHUNK * round - 1).min(j_max);
            round = (round * 2).min(CHUNKS_PER_ROUND);
            let chunks: Vec<(u64, u64)> = (start..=round_end)
                .step_by(CHUNK as usize)
                .map(|a| (a, (a + CHUNK - 1).min(round_end)))
                .collect();
            #[cfg(feature = "parallel")]
            let chunk_iter = chunks.par_iter();
            #[cfg(not(feature = "parallel"))]
            let chunk_iter = chunks.iter();
            let results: Vec<(Vec<JumpTuple>, f64)> = chunk_iter
                .map(|&(a, b)| {
                    let mut local = Vec::new();
                    let mut best = f64::INFINITY;
                    for j in a..=b {
                        let n = j * stride;
                        let slack = 1e-9 + 1e-13 * n as f64;
                        let dist = self.screen(n, best.max(eps_f + slack));
                        best = best.min(dist);
                        if dist < eps_f + slack && self.windows_plausible(n) {
                            if let Some(t) = self.candidate(n) {
                                if accept(&t) {
                                    local.push(t);
                                }
                            }
                        }
                    }
                    (local, best)
                })
                .collect();
            for (local, b) in results {
                best = best.min(b);
                found.extend(local);
            }
            start = round_end + 1;
        }
        found.truncate(want);
        (found, best)
    }

    fn not_found(&self, best: f64) -> Error {
        let best = if best.is_finite() { format!("{best:.6}") } else { "n/a".into() };
        Error::NoTupleFound { n_max: self.cfg.n_max, best_distance: best }
    }
}

/// Up to `cfg.want` tuples in increasing `N`.
pub fn find_tuples(profiles: &[IndexProfile], cfg: &SearchConfig) -> Result<Vec<JumpTuple>> {
    find_tuples_where(profiles, cfg, |_| true)
}

/// Like [`find_tuples`], keeping only tuples accepted by `accept`.
pub fn find_tuples_where(
    profiles: &[IndexProfile],
    cfg: &SearchConfig,
    accept: impl Fn(&JumpTuple) -> bool + Sync,
) -> Result<Vec<JumpTuple>> {
    let ctx = ScanContext::new(profiles, cfg)?;
    let (found, best) = ctx.scan(cfg.want, accept);
    if found.is_empty() {
        return Err(ctx.not_found(best));
    }
    Ok(found)
}

/// A second tuple whose `Δ′` satisfies `Δ_i + Δ′_i = C(M_i)` for every `i`.
pub fn symmetric_tuple(profiles: &[IndexProfile], t: &JumpTuple, cfg: &SearchConfig) -> Result<JumpTuple> {
    let ctx = ScanContext::new(profiles, cfg)?;
    let report = verify_tuple(profiles, t, &cfg.delta);
    if !report.ok {
        return Err(invalid("the given tuple does not verify"));
    }
    let targets: Vec<u32> = profiles.iter().zip(&report.deltas).map(|(p, d)| p.dec.c_of().saturating_sub(*d)).collect();
    // only irrational angles can land strictly inside (0, δ)
    let feasible = profiles.iter().zip(&report.deltas).zip(&targets).all(|((p, d), target)| {
        let reachable: u32 = p
            .dec
            .eigen_points()
            .iter()
            .filter(|w| matches!(w, UnitPoint::Turn(a) if !a.is_rational()))
            .map(|w| p.dec.splitting_numbers(w).s_minus)
            .sum();
        *d <= p.dec.c_of() && *target <= reachable
    });
    let (found, best) = if feasible {
        ctx.scan(1, |c| c.n != t.n && c.delta_list == targets)
    } else {
        (vec![], f64::INFINITY)
    };
    found.into_iter().next().ok_or_else(|| ctx.not_found(best))
}

/// `|2 m_i μ̂_i − 2N|` for each profile.
pub fn mean_index_offsets(profiles: &[IndexProfile], t: &JumpTuple) -> Vec<Real> {
    profiles
        .iter()
        .zip(&t.m)
        .map(|(p, &m)| mean_index(p).scale_int(2 * m as i64).add_q(&-qi(2 * t.n as i64)))
        .collect()
}

pub fn describe(t: &JumpTuple) -> String {
    format!(
        "N={} m={:?} chi={:?} Delta={:?} eps={}",
        t.n,
        t.m,
        t.chi,
        t.delta_list,
        format_decimal(&t.epsilon, 4)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::symplin::{Block, NormalFormDecomposition};

    fn prof(blocks: Vec<Block>, i: i64) -> IndexProfile {
        IndexProfile::new(NormalFormDecomposition::new(blocks).unwrap(), i)
    }

    #[test]
    fn v_vector_examples() {
        let v = build_v_vector(&[prof(vec![Block::Hyp(1)], 1)]).unwrap();
        assert_eq!((v.m_common, v.l), (1, 1));
        assert_eq!(v.v[0].exact_value(), Some(&qi(1)));
        let r = build_v_vector(&[prof(vec![Block::Rot(Angle::rational(1, 3).unwrap())], 1)]).unwrap();
        assert_eq!((r.m_common, r.l), (3, 2));
        assert_eq!(r.v[0].exact_value(), Some(&q(1, 2)));
        assert_eq!(r.v[1].exact_value(), Some(&qi(1)));
        let two = build_v_vector(&[prof(vec![Block::Hyp(1)], 1), prof(vec![Block::Hyp(1)], 2)]).unwrap();
        assert_eq!(two.l, 2);
        assert_eq!(two.v[1].exact_value(), Some(&q(1, 2)));
        assert!(matches!(
            build_v_vector(&[prof(vec![Block::Hyp(1)], 0)]),
            Err(Error::MeanIndexNonpositive(_))
        ));
    }

    #[test]
    fn hyperbolic_tuples() {
        let p = [prof(vec![Block::Hyp(1)], 2)];
        let cfg = SearchConfig { n_max: 100, want: 3, ..SearchConfig::default() };
        let ts = find_tuples(&p, &cfg).unwrap();
        assert_eq!(ts[0].n, 2);
        assert_eq!(ts[0].m, vec![1]);
        for t in &ts {
            assert!(verify_tuple(&p, t, &cfg.delta).ok);
        }
    }

    #[test]
    fn perturbed_tuple_fails() {
        let p = [prof(vec![Block::Rot(Angle::rational(1, 3).unwrap())], 1)];
        let cfg = SearchConfig { n_max: 100_000, want: 2, ..SearchConfig::default() };
        let ts = find_tuples(&p, &cfg).unwrap();
        assert!(!ts.is_empty());
        let mut bad = ts[0].clone();
        bad.m[0] += 1;
        let r = verify_tuple(&p, &bad, &cfg.delta);
        assert!(!r.ok);
        assert!(r.failures().any(|c| c.identity.starts_with("mu")));
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig { delta: q(1, 10), epsilon: q(1, 20), ..SearchConfig::default() };
        assert!(bad.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }
}
