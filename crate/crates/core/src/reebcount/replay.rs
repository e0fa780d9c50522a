//! Mechanical replays of the two counting arguments on a finite configuration.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::angle::UnitPoint;
use crate::arith::{qi, Q};
use crate::cijump::{find_tuples, find_tuples_where, symmetric_tuple, verify_tuple, JumpTuple, SearchConfig};
use crate::error::{invalid, Result};
use crate::indexiter::{
    certify_dynamical_convexity, check_gap_inequality, mean_index, mu_minus_iter, mu_plus_iter, nu_iter,
    IndexProfile,
};
use crate::symplin::Block;

use super::{chi_plus, local_homology, mean_euler, sdm_predicate, Configuration, OrbitDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    ConsistentAtDepth,
    Contradiction,
    ForcedInfinitelyMany,
    InputError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ConsistentAtDepth => "CONSISTENT_AT_DEPTH",
            Status::Contradiction => "CONTRADICTION",
            Status::ForcedInfinitelyMany => "FORCED_INFINITELY_MANY",
            Status::InputError => "INPUT_ERROR",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checked statement.
#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub step: String,
    pub statement: String,
    pub holds: bool,
    /// `N` of the tuple the fact was derived under.
    pub tuple_n: Option<u64>,
}

impl Fact {
    fn new(step: &str, statement: impl Into<String>, holds: bool, tuple_n: Option<u64>) -> Fact {
        Fact { step: step.into(), statement: statement.into(), holds, tuple_n }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Vec<Fact>,
    /// Number of distinct simple orbits the replay forced.
    pub lower_bound: Option<usize>,
    pub step1_count: Option<usize>,
}

impl Verdict {
    fn input_error(evidence: Vec<Fact>) -> Verdict {
        Verdict { status: Status::InputError, evidence, lower_bound: None, step1_count: None }
    }
}

fn check_dc(cfg: &Configuration, evidence: &mut Vec<Fact>) -> Result<bool> {
    let mut ok = true;
    for x in &cfg.orbits {
        let fact = match certify_dynamical_convexity(&x.profile, cfg.n) {
            Ok(c) => Fact::new(
                "input",
                match c.violating_m {
                    None => format!("{}: mu-(x^k) >= n-1 for all k (checked k <= {})", x.label, c.m_star),
                    Some(m) => format!("{}: mu-(x^{m}) < n-1, not dynamically convex", x.label),
                },
                c.passed,
                None,
            ),
            Err(e) => Fact::new("input", format!("{}: {e}", x.label), false, None),
        };
        ok &= fact.holds;
        evidence.push(fact);
    }
    Ok(ok)
}

fn check_tuple(cfg: &Configuration, profiles: &[IndexProfile], t: &JumpTuple, delta: &Q, evidence: &mut Vec<Fact>) -> bool {
    let report = verify_tuple(profiles, t, delta);
    for c in report.failures() {
        let label = cfg.orbits.get(c.profile).map(|x| x.label.as_str()).unwrap_or("?");
        evidence.push(Fact::new(
            "input",
            format!("{label}: {} expected {} got {}", c.identity, c.expected, c.actual),
            false,
            Some(t.n),
        ));
    }
    if report.ok {
        evidence.push(Fact::new("input", format!("tuple N={} m={:?} verifies", t.n, t.m), true, Some(t.n)));
    }
    report.ok
}

/// `dim SH_deg(x^k)`, zero without consulting local data outside the support window.
fn dim_at(x: &OrbitDescriptor, k: u64, deg: i64) -> Result<u32> {
    let lo = mu_minus_iter(&x.profile, k)?;
    let hi = lo + nu_iter(&x.profile, k)? as i64;
    if deg < lo || deg > hi {
        return Ok(0);
    }
    Ok(local_homology(x, k)?.get(&deg).copied().unwrap_or(0))
}

/// Assigns a distinct orbit to each degree, preferring earlier candidates.
fn matching(cands: &[Vec<usize>], orbits: usize) -> Option<Vec<usize>> {
    fn augment(d: usize, cands: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &o in &cands[d] {
            if seen[o] {
                continue;
            }
            seen[o] = true;
            if owner[o].is_none_or(|e| augment(e, cands, seen, owner)) {
                owner[o] = Some(d);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; orbits];
    for d in 0..cands.len() {
        let mut seen = vec![false; orbits];
        if !augment(d, cands, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; cands.len()];
    for (o, d) in owner.iter().enumerate() {
        if let Some(d) = d {
            out[*d] = o;
        }
    }
    Some(out)
}

const GROWTH_CHECK_DEPTH: u64 = 2000;

enum Outcome {
    Consistent(usize),
    Forced,
    Contradiction,
}

fn replay_tuple(cfg: &Configuration, t: &JumpTuple, ev: &mut Vec<Fact>) -> Result<(Outcome, usize)> {
    let n = cfg.n;
    let two_n = 2 * t.n as i64;
    let tn = Some(t.n);
    let orbits = &cfg.orbits;

    // the displays bounding every iterate other than the 2m_i-th
    for (x, &m) in orbits.iter().zip(&t.m) {
        let above = mu_minus_iter(&x.profile, 2 * m + 1)?;
        let below = mu_plus_iter(&x.profile, 2 * m - 1)?;
        // the corollary covers every k once mu-(x) >= d; iterates are spot-checked up to a fixed depth
        let depth = (2 * m + 1).min(GROWTH_CHECK_DEPTH);
        let gap = check_gap_inequality(&x.profile, depth)?;
        let growth = gap.corollary_applies && gap.corollary_counterexample.is_none();
        let holds = above >= two_n + n - 1 && below <= two_n && growth;
        ev.push(Fact::new(
            "step 1",
            format!(
                "{}: mu-(x^{}) = {above} >= 2N+n-1 = {}, mu+(x^{}) = {below} <= 2N = {two_n}, mu-(x^(k+1)) >= mu+(x^k) (corollary, checked for k <= {depth}): {growth}",
                x.label,
                2 * m + 1,
                two_n + n - 1,
                2 * m - 1,
            ),
            holds,
            tn,
        ));
        if !holds {
            return Ok((Outcome::Contradiction, 0));
        }
    }

    let carriers = |deg: i64| -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, (x, &m)) in orbits.iter().zip(&t.m).enumerate() {
            if dim_at(x, 2 * m, deg)? > 0 {
                out.push(i);
            }
        }
        Ok(out)
    };

    // Step 1: degrees 2N + 2k − (n − 1) for k in [[(n+1)/2], n − 2]
    let ks: Vec<i64> = ((n + 1) / 2..=n - 2).collect();
    let mut degrees: Vec<i64> = ks.iter().map(|k| two_n + 2 * k - (n - 1)).collect();
    let top = two_n + n - 1;
    degrees.push(top);
    let cands: Vec<Vec<usize>> = degrees.iter().map(|&d| carriers(d)).collect::<Result<_>>()?;
    for (d, c) in degrees.iter().zip(&cands) {
        let labels: Vec<&str> = c.iter().map(|&i| orbits[i].label.as_str()).collect();
        let step = if *d == top { "step 2" } else { "step 1" };
        ev.push(Fact::new(step, format!("degree {d} carried at the 2m_i-th iterate of {labels:?}"), !c.is_empty(), tn));
    }
    let step1_cands = &cands[..ks.len()];
    let Some(step1) = matching(step1_cands, orbits.len()) else {
        ev.push(Fact::new(
            "step 1",
            "the classes in degrees 2N+2k-(n-1) need distinct carriers among 2m_i-th iterates; none exist",
            false,
            tn,
        ));
        return Ok((Outcome::Contradiction, 0));
    };
    let step1_count = step1.len();
    ev.push(Fact::new("step 1", format!("{step1_count} distinct simple orbits forced"), true, tn));
    if step1.len() > 1 {
        let actions: Vec<Q> = step1.iter().map(|&i| &orbits[i].action * qi(2 * t.m[i] as i64)).collect();
        let ordered = actions.windows(2).all(|w| w[0] < w[1]);
        ev.push(Fact::new("step 1", "carrier actions strictly increase with degree", ordered, tn));
        if !ordered {
            return Ok((Outcome::Contradiction, step1_count));
        }
    }

    // Step 2
    let chi = chi_plus(n)?;
    let mut lhs = Q::from_integer(0.into());
    for (x, &m) in orbits.iter().zip(&t.m) {
        lhs += mean_euler(x)? * qi(2 * m as i64);
    }
    let rhs = &chi * qi(two_n);
    ev.push(Fact::new(
        "step 2",
        format!("sum 2m_i chi^_i = {lhs} against 2N chi+ = {rhs}"),
        lhs == rhs,
        tn,
    ));
    for (x, &m) in orbits.iter().zip(&t.m) {
        let off = mean_index(&x.profile).scale_int(2 * m as i64).add_q(&-qi(two_n));
        let close = off.lo().abs().max(off.hi().abs()) < t.epsilon;
        ev.push(Fact::new("step 2", format!("{}: |mean(x^2m) - 2N| = {off}", x.label), close, tn));
    }
    ev.push(Fact::new(
        "step 2",
        "assumed: local homology of the carrier's 2m-th iterate vanishes outside degree 2N+n-1",
        true,
        tn,
    ));
    let mut joint = step1_cands.to_vec();
    joint.push(cands[ks.len()].clone());
    let Some(assigned) = matching(&joint, orbits.len()) else {
        ev.push(Fact::new(
            "step 2",
            "no 2m_i-th iterate outside the step 1 carriers reaches degree 2N+n-1, so the Morse display gives 2N chi+ >= 2N chi+ + 1",
            false,
            tn,
        ));
        return Ok((Outcome::Contradiction, step1_count));
    };
    let mut bound = step1_count + 1;
    if n % 2 == 0 {
        return Ok((Outcome::Consistent(bound), step1_count));
    }

    // Step 3: degree 2N for odd n
    let mut joint3 = joint.clone();
    joint3.push(carriers(two_n)?);
    if matching(&joint3, orbits.len()).is_some() {
        bound += 1;
        ev.push(Fact::new("step 3", format!("degree {two_n} carried by a further 2m_i-th iterate"), true, tn));
        return Ok((Outcome::Consistent(bound), step1_count));
    }
    let _ = assigned;
    for (x, &m) in orbits.iter().zip(&t.m) {
        for j in (1..2 * m).rev() {
            if mu_plus_iter(&x.profile, j)? < two_n {
                break;
            }
            if dim_at(x, j, two_n)? == 0 {
                continue;
            }
            let m0 = 2 * m - j;
            ev.push(Fact::new("step 3", format!("{}: degree {two_n} carried by x^{j}, m0 = {m0}", x.label), true, tn));
            if m0 != 1 {
                ev.push(Fact::new("step 3", "mu+ monotonicity forces m0 = 1", false, tn));
                return Ok((Outcome::Contradiction, step1_count));
            }
            return sdm_chain(cfg, x, j, two_n, ev, tn).map(|forced| {
                (if forced { Outcome::Forced } else { Outcome::Contradiction }, step1_count)
            });
        }
    }
    ev.push(Fact::new("step 3", format!("no iterate carries degree {two_n}"), false, tn));
    Ok((Outcome::Contradiction, step1_count))
}

/// Checks that `x^j` (with `j = 2m − 1`) is an admissible symplectically degenerate maximum.
fn sdm_chain(cfg: &Configuration, x: &OrbitDescriptor, j: u64, two_n: i64, ev: &mut Vec<Fact>, tn: Option<u64>) -> Result<bool> {
    let n = cfg.n;
    let d = x.profile.d();
    let p_plus = x.profile.dec.counts().p_plus;
    let mean = mean_index(&x.profile);
    let mut steps = vec![
        (format!("{}: p+ = {p_plus} = n-1", x.label), p_plus == d),
        (format!("{}: mu-(x) = {} = n-1", x.label, x.profile.base_index), x.profile.base_index == n - 1),
        (
            format!("{}: mean index {mean} = n-1", x.label),
            mean.exact_value().is_some_and(|v| *v == qi(n - 1)),
        ),
    ];
    let sdm = sdm_predicate(x, j, n)?;
    steps.push((
        format!("{}: mean(x^{j}) + n - 1 = {}", x.label, two_n),
        sdm.top_degree == Some(two_n),
    ));
    steps.push((format!("{}: x^{j} is a degenerate maximum", x.label), sdm.is_sdm));
    steps.push((format!("{}: nu(x^{j}) = nu(x)", x.label), sdm.admissible));
    let mut ok = true;
    for (s, h) in steps {
        ok &= h;
        ev.push(Fact::new("step 3", s, h, tn));
    }
    if ok {
        ev.push(Fact::new(
            "step 3",
            format!(
                "{}: an admissible simple degenerate maximum forces infinitely many closed orbits, but the configuration lists {}",
                x.label,
                cfg.orbits.len()
            ),
            true,
            tn,
        ));
    }
    Ok(ok)
}

/// Replays the lower-bound argument on each tuple.
pub fn replay_theorem_1_1(cfg: &Configuration, tuples: &[JumpTuple], delta: &Q) -> Result<Verdict> {
    let mut ev = Vec::new();
    if let Err(e) = cfg.validate() {
        ev.push(Fact::new("input", e.to_string(), false, None));
        return Ok(Verdict::input_error(ev));
    }
    if !check_dc(cfg, &mut ev)? {
        return Ok(Verdict::input_error(ev));
    }
    if tuples.is_empty() {
        ev.push(Fact::new("input", "no tuples given", false, None));
        return Ok(Verdict::input_error(ev));
    }
    let profiles = cfg.profiles();
    let mut ok = true;
    for t in tuples {
        ok &= check_tuple(cfg, &profiles, t, delta, &mut ev);
        let divisible = t.n % (cfg.n as u64 - 1) == 0;
        if !divisible {
            ev.push(Fact::new("input", format!("N = {} is not a multiple of n-1", t.n), false, Some(t.n)));
        }
        ok &= divisible;
    }
    if !ok {
        return Ok(Verdict::input_error(ev));
    }
    let mut status = Status::ConsistentAtDepth;
    let mut bound: Option<usize> = None;
    let mut step1 = None;
    for t in tuples {
        let (outcome, s1) = replay_tuple(cfg, t, &mut ev)?;
        step1 = Some(s1);
        match outcome {
            Outcome::Consistent(b) => bound = Some(bound.map_or(b, |x| x.min(b))),
            Outcome::Forced => {
                if status != Status::Contradiction {
                    status = Status::ForcedInfinitelyMany;
                }
            }
            Outcome::Contradiction => status = Status::Contradiction,
        }
    }
    let lower_bound = (status == Status::ConsistentAtDepth).then_some(bound).flatten();
    Ok(Verdict { status, evidence: ev, lower_bound, step1_count: step1 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    /// `"="` or `"<="`.
    pub relation: &'static str,
    pub holds: bool,
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub m: u64,
    pub s_plus_one: u32,
    pub c: u32,
    pub delta: u32,
    pub window_s_minus: u32,
    pub cowindow_s_minus: u32,
    pub window_nu: u32,
    pub r_sum: u32,
    pub steps: Vec<ChainStep>,
    pub failed_step: Option<&'static str>,
    /// `r = n − 1`.
    pub all_rotations: bool,
    pub irrationally_elliptic: bool,
    pub certified: bool,
}

/// Re-derives the ellipticity chain for an orbit claimed to reach degree
/// `2N + n − 1` at its `2m`-th iterate.
pub fn ellipticity_chain(p: &IndexProfile, m: u64, delta: &Q, n: i64) -> Result<ChainReport> {
    let dec = &p.dec;
    let s_plus_one = dec.splitting_numbers(&UnitPoint::One).s_plus;
    let c = dec.c_of();
    let upper = qi(1) - delta;
    let (mut w, mut cw, mut wnu, mut delta_count) = (0u32, 0u32, 0u32, 0u32);
    for pt in dec.eigen_points() {
        if matches!(pt, UnitPoint::One) {
            continue;
        }
        let s = dec.splitting_numbers(&pt).s_minus;
        let f = pt.frac_m_theta_over_pi(m)?;
        if f.is_exact() && f.lo().is_zero() {
            continue;
        }
        if f.cmp_q(delta)? == Ordering::Less {
            w += s;
            wnu += dec.nullity_at(&pt);
            delta_count += s;
        } else if f.cmp_q(&upper)? == Ordering::Greater {
            cw += s;
        }
    }
    let counts = dec.counts();
    let r_sum = (counts.r + counts.r_star + counts.r_zero) as u32;
    let top = 2 * delta_count as i64 - c as i64 - s_plus_one as i64;
    let step = |name, lhs: i64, rhs: i64, eq: bool| ChainStep {
        name,
        lhs,
        rhs,
        relation: if eq { "=" } else { "<=" },
        holds: if eq { lhs == rhs } else { lhs <= rhs },
        tight: lhs == rhs,
    };
    let steps = vec![
        step("S+(1) = 0", s_plus_one as i64, 0, true),
        step("n-1 = 2Delta - C - S+(1)", n - 1, top, true),
        step("2Delta - C <= window S- - co-window S-", 2 * delta_count as i64 - c as i64, w as i64 - cw as i64, false),
        step("window S- - co-window S- <= window nu", w as i64 - cw as i64, wnu as i64, false),
        step("window nu <= r + r* + r0", wnu as i64, r_sum as i64, false),
        step("r + r* + r0 <= n-1", r_sum as i64, n - 1, false),
    ];
    let failed_step = steps.iter().find(|s| !s.holds || !s.tight).map(|s| s.name);
    let all_rotations = counts.r as i64 == n - 1 && p.d() as i64 == n - 1;
    let irr = dec.is_irrationally_elliptic()
        && dec.blocks().iter().all(|b| matches!(b, Block::Rot(_)));
    let certified = failed_step.is_none() && all_rotations && irr;
    Ok(ChainReport {
        m,
        s_plus_one,
        c,
        delta: delta_count,
        window_s_minus: w,
        cowindow_s_minus: cw,
        window_nu: wnu,
        r_sum,
        steps,
        failed_step,
        all_rotations,
        irrationally_elliptic: irr,
        certified,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticityReport {
    pub status: Status,
    pub first: Option<String>,
    pub second: Option<String>,
    pub chains: Vec<(String, u64, ChainReport)>,
    pub evidence: Vec<Fact>,
}

impl EllipticityReport {
    pub fn certified(&self) -> bool {
        self.first.is_some() && self.second.is_some()
    }
}

/// Finds the first orbit reaching `2N + n − 1` under `t` whose chain certifies.
fn certified_carrier(
    cfg: &Configuration,
    t: &JumpTuple,
    delta: &Q,
    skip: Option<usize>,
    chains: &mut Vec<(String, u64, ChainReport)>,
    ev: &mut Vec<Fact>,
) -> Result<Option<usize>> {
    let top = 2 * t.n as i64 + cfg.n - 1;
    let mut found = None;
    for (i, (x, &m)) in cfg.orbits.iter().zip(&t.m).enumerate() {
        let mu = mu_minus_iter(&x.profile, 2 * m)?;
        if mu != top {
            continue;
        }
        ev.push(Fact::new("carrier", format!("{}: mu(x^{}) = 2N+n-1 = {top}", x.label, 2 * m), true, Some(t.n)));
        let chain = ellipticity_chain(&x.profile, m, delta, cfg.n)?;
        ev.push(Fact::new(
            "chain",
            match chain.failed_step {
                None => format!("{}: chain holds with equality, r = n-1", x.label),
                Some(s) => format!("{}: chain fails at {s}", x.label),
            },
            chain.certified,
            Some(t.n),
        ));
        let ok = chain.certified && skip != Some(i);
        chains.push((x.label.clone(), t.n, chain));
        if ok && found.is_none() {
            found = Some(i);
        }
    }
    Ok(found)
}

/// Replays the ellipticity argument on a tuple and its symmetric companion.
pub fn replay_theorem_1_3(cfg: &Configuration, t: &JumpTuple, t_sym: &JumpTuple, delta: &Q) -> Result<EllipticityReport> {
    let mut ev = Vec::new();
    let mut chains = Vec::new();
    let fail = |status, ev, chains| EllipticityReport { status, first: None, second: None, chains, evidence: ev };
    if let Err(e) = cfg.validate() {
        ev.push(Fact::new("input", e.to_string(), false, None));
        return Ok(fail(Status::InputError, ev, chains));
    }
    for x in &cfg.orbits {
        if !x.profile.dec.all_iterates_nondegenerate() || nu_iter(&x.profile, 1)? != 0 {
            ev.push(Fact::new("input", format!("{}: degenerate iterates", x.label), false, None));
            return Ok(fail(Status::InputError, ev, chains));
        }
    }
    if !check_dc(cfg, &mut ev)? {
        return Ok(fail(Status::InputError, ev, chains));
    }
    let profiles = cfg.profiles();
    let ok_t = check_tuple(cfg, &profiles, t, delta, &mut ev);
    let ok_s = check_tuple(cfg, &profiles, t_sym, delta, &mut ev);
    if !(ok_t && ok_s) {
        return Ok(fail(Status::InputError, ev, chains));
    }
    let d1 = verify_tuple(&profiles, t, delta).deltas;
    let d2 = verify_tuple(&profiles, t_sym, delta).deltas;
    for (i, x) in cfg.orbits.iter().enumerate() {
        let c = x.profile.dec.c_of();
        let holds = d1[i] + d2[i] == c;
        ev.push(Fact::new("symmetric", format!("{}: Delta + Delta' = {} + {} against C = {c}", x.label, d1[i], d2[i]), holds, None));
        if !holds {
            return Ok(fail(Status::InputError, ev, chains));
        }
    }
    let Some(i1) = certified_carrier(cfg, t, delta, None, &mut chains, &mut ev)? else {
        ev.push(Fact::new("carrier", "no orbit reaches 2N+n-1 with a certified chain under t", false, Some(t.n)));
        return Ok(fail(Status::Contradiction, ev, chains));
    };
    let x1 = &cfg.orbits[i1];
    let low = mu_minus_iter(&x1.profile, 2 * t_sym.m[i1])?;
    let expected = 2 * t_sym.n as i64 - (cfg.n - 1);
    ev.push(Fact::new(
        "distinct",
        format!("{}: mu(x^{}) = {low} = 2N'-(n-1) < 2N'+(n-1)", x1.label, 2 * t_sym.m[i1]),
        low == expected,
        Some(t_sym.n),
    ));
    let Some(i2) = certified_carrier(cfg, t_sym, delta, Some(i1), &mut chains, &mut ev)? else {
        ev.push(Fact::new("carrier", "no second orbit reaches 2N'+n-1 with a certified chain under t'", false, Some(t_sym.n)));
        return Ok(EllipticityReport {
            status: Status::Contradiction,
            first: Some(x1.label.clone()),
            second: None,
            chains,
            evidence: ev,
        });
    };
    let x2 = &cfg.orbits[i2];
    for x in [x1, x2] {
        ev.push(Fact::new("conclusion", format!("{} is irrationally elliptic", x.label), x.profile.dec.is_irrationally_elliptic(), None));
    }
    Ok(EllipticityReport {
        status: Status::ConsistentAtDepth,
        first: Some(x1.label.clone()),
        second: Some(x2.label.clone()),
        chains,
        evidence: ev,
    })
}

/// The first `count` tuples with `N` a multiple of `n − 1`.
pub fn tuples_for_theorem_1_1(cfg: &Configuration, search: &SearchConfig, count: usize) -> Result<Vec<JumpTuple>> {
    let s = SearchConfig { m0: Some(cfg.n as u64 - 1), want: count, ..search.clone() };
    find_tuples(&cfg.profiles(), &s)
}

/// `2Δ − C − S⁺(1)`: the offset of `μ₋(x^{2m})` from `2N`.
fn top_offset(p: &IndexProfile, delta: u32) -> i64 {
    2 * delta as i64 - p.dec.c_of() as i64 - p.dec.splitting_numbers(&UnitPoint::One).s_plus as i64
}

/// A tuple under which some orbit reaches `2N + n − 1`, with a symmetric
/// companion under which a different orbit does.
pub fn tuples_for_theorem_1_3(cfg: &Configuration, search: &SearchConfig) -> Result<(JumpTuple, JumpTuple)> {
    let profiles = cfg.profiles();
    let target = cfg.n - 1;
    let both = |t: &JumpTuple| {
        let first = profiles.iter().zip(&t.delta_list).position(|(p, &d)| top_offset(p, d) == target);
        first.is_some_and(|i| {
            profiles
                .iter()
                .zip(&t.delta_list)
                .enumerate()
                .any(|(j, (p, &d))| j != i && top_offset(p, p.dec.c_of().saturating_sub(d)) == target)
        })
    };
    let s = SearchConfig { want: search.want.max(8), ..search.clone() };
    let mut last = None;
    for t in find_tuples_where(&profiles, &s, both)? {
        match symmetric_tuple(&profiles, &t, search) {
            Ok(t_sym) => return Ok((t, t_sym)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| invalid("no tuple pair found")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, q};
    use crate::angle::Angle;
    use crate::symplin::NormalFormDecomposition;

    fn irr(s: &str) -> Angle {
        Angle::irrational_with_computed_gap(parse_rational(s).unwrap(), q(1, 1_000_000_000), 1000).unwrap()
    }

    #[test]
    fn chain_certifies_irrational_rotations_in_window() {
        // {2·a} and {2·b} both just above 0
        let a = irr("0.5041");
        let b = irr("0.0083");
        let p = IndexProfile::new(NormalFormDecomposition::new(vec![Block::Rot(a), Block::Rot(b)]).unwrap(), 2);
        let r = ellipticity_chain(&p, 1, &q(1, 40), 3).unwrap();
        assert_eq!(r.failed_step, None, "{r:?}");
        assert!(r.certified);
    }

    #[test]
    fn chain_fails_on_s_plus_term() {
        let p = IndexProfile::new(NormalFormDecomposition::new(vec![Block::EId]).unwrap(), 1);
        let r = ellipticity_chain(&p, 1, &q(1, 40), 2).unwrap();
        assert!(!r.certified);
        assert_eq!(r.failed_step, Some("S+(1) = 0"));
        assert_eq!(r.s_plus_one, 1);
        assert!(!r.steps[1].holds);
    }

    #[test]
    fn matching_prefers_distinct_orbits() {
        assert_eq!(matching(&[vec![0, 1], vec![0]], 2), Some(vec![1, 0]));
        assert_eq!(matching(&[vec![0], vec![0]], 2), None);
    }
}
