//! JSON schemas for profiles, decompositions, configurations, tuples and
//! reports. Every number that is not a small integer travels as a string.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::angle::{Angle, DEFAULT_GAP_DENOMINATOR};
use crate::arith::{floor_q, format_decimal, format_rational, parse_decimal, parse_rational, real_decimal, ten_pow, Q, Real};
use crate::cijump::{JumpTuple, SearchConfig, VerifyReport};
use crate::error::{invalid, Error, Result};
use crate::indexiter::{ConvexityCertificate, GapReport, IndexProfile, IterateIndices};
use crate::reebcount::{
    ChainReport, Configuration, Fact, IdentityReport, LocalHomology, MorseReport, OrbitDescriptor, SdmReport,
    EllipticityReport, Verdict,
};
use crate::symplin::matrix::{QMat, SymplecticMatrix};
use crate::symplin::{Block, NormalFormDecomposition};

pub const DEFAULT_PRECISION: u32 = 60;

/// How decimal angle approximations are read.
#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Digits kept from an approximation; also the default error radius `10^-digits`.
    pub precision: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { precision: DEFAULT_PRECISION }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleJson {
    Rat([i64; 2]),
    Irr(IrrJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrJson {
    pub approx: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub err: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<AngleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub d: usize,
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub decomposition: DecompositionJson,
    pub base_index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexRequestJson {
    pub profile: ProfileJson,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LocalHomologyJson {
    Word(String),
    Table(BTreeMap<String, BTreeMap<String, u32>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub label: String,
    pub action: String,
    pub profile: ProfileJson,
    pub local_homology: LocalHomologyJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationJson {
    pub n: i64,
    pub orbits: Vec<OrbitJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    #[serde(rename = "N")]
    pub n: u64,
    pub m: Vec<u64>,
    pub chi: Vec<u8>,
    pub delta_i: Vec<u32>,
    pub epsilon: String,
    #[serde(rename = "M", default = "one_u64")]
    pub m_common: u64,
    #[serde(rename = "M0", default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<u64>,
}

fn one_u64() -> u64 {
    1
}

/// Search parameters; absent fields take the library defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub want: Option<usize>,
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

pub fn to_pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"))
}

/// Finite decimal when the denominator allows it, `p/q` otherwise.
pub fn exact_string(v: &Q) -> String {
    let mut d = v.denom().clone();
    let mut digits = 0u32;
    for p in [2u32, 5] {
        let p = BigInt::from(p);
        let mut k = 0u32;
        while d.is_multiple_of(&p) {
            d /= &p;
            k += 1;
        }
        digits = digits.max(k);
    }
    if d.is_one() {
        format_decimal(v, digits)
    } else {
        format_rational(v)
    }
}

fn parse_q(s: &str, what: &str) -> Result<Q> {
    parse_rational(s).map_err(|e| invalid(format!("{what}: {e}")))
}

pub fn angle_to_json(a: &Angle) -> AngleJson {
    match a {
        Angle::Rational { p, q } => AngleJson::Rat([*p, *q]),
        Angle::Irrational(x) => AngleJson::Irr(IrrJson {
            approx: exact_string(x.approx()),
            gap: Some(exact_string(x.gap())),
            err: Some(exact_string(x.err())),
        }),
    }
}

pub fn angle_from_json(a: &AngleJson, opts: &ParseOptions) -> Result<Angle> {
    match a {
        AngleJson::Rat([p, q]) => Angle::rational(*p, *q),
        AngleJson::Irr(x) => {
            let (mut approx, digits) = if x.approx.contains('/') {
                (parse_q(&x.approx, "angle approximation")?, opts.precision)
            } else {
                parse_decimal(&x.approx)?
            };
            let err = match &x.err {
                Some(e) => parse_q(e, "angle error")?,
                None => {
                    let kept = digits.min(opts.precision);
                    if digits > kept {
                        let scale = Q::from_integer(ten_pow(kept));
                        approx = Q::from_integer(floor_q(&(&approx * &scale))) / scale;
                    }
                    Q::new(BigInt::one(), ten_pow(kept))
                }
            };
            match &x.gap {
                Some(g) => Angle::irrational(approx, err, parse_q(g, "angle gap")?),
                None => Angle::irrational_with_computed_gap(approx, err, DEFAULT_GAP_DENOMINATOR),
            }
        }
    }
}

const KINDS: [&str; 10] = ["E_minus", "E_id", "E_plus", "F_minus", "F_id", "F_plus", "Rot", "N2Star", "N2Zero", "Hyp"];

pub fn block_to_json(b: &Block) -> BlockJson {
    let (kind, angle, k) = match b {
        Block::EMinus => ("E_minus", None, None),
        Block::EId => ("E_id", None, None),
        Block::EPlus => ("E_plus", None, None),
        Block::FMinus => ("F_minus", None, None),
        Block::FId => ("F_id", None, None),
        Block::FPlus => ("F_plus", None, None),
        Block::Rot(a) => ("Rot", Some(angle_to_json(a)), None),
        Block::N2Star(a) => ("N2Star", Some(angle_to_json(a)), None),
        Block::N2Zero(a) => ("N2Zero", Some(angle_to_json(a)), None),
        Block::Hyp(k) => ("Hyp", None, Some(*k)),
    };
    BlockJson { kind: kind.into(), angle, k }
}

pub fn block_from_json(b: &BlockJson, opts: &ParseOptions) -> Result<Block> {
    let angle = || -> Result<Angle> {
        let a = b.angle.as_ref().ok_or_else(|| invalid(format!("block `{}` needs an angle", b.kind)))?;
        angle_from_json(a, opts)
    };
    Ok(match b.kind.as_str() {
        "E_minus" => Block::EMinus,
        "E_id" => Block::EId,
        "E_plus" => Block::EPlus,
        "F_minus" => Block::FMinus,
        "F_id" => Block::FId,
        "F_plus" => Block::FPlus,
        "Rot" => Block::Rot(angle()?),
        "N2Star" => Block::N2Star(angle()?),
        "N2Zero" => Block::N2Zero(angle()?),
        "Hyp" => Block::Hyp(b.k.unwrap_or(1)),
        other => return Err(invalid(format!("unknown block kind `{other}` (expected one of {})", KINDS.join(", ")))),
    })
}

pub fn decomposition_to_json(d: &NormalFormDecomposition) -> DecompositionJson {
    DecompositionJson { d: d.d(), blocks: d.blocks().iter().map(block_to_json).collect() }
}

pub fn decomposition_from_json(d: &DecompositionJson, opts: &ParseOptions) -> Result<NormalFormDecomposition> {
    let blocks = d.blocks.iter().map(|b| block_from_json(b, opts)).collect::<Result<Vec<_>>>()?;
    NormalFormDecomposition::with_dim(d.d, blocks)
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<SymplecticMatrix> {
    let size = 2 * m.d;
    if m.entries.len() != size || m.entries.iter().any(|r| r.len() != size) {
        return Err(invalid(format!("matrix must be {size}x{size} for d = {}", m.d)));
    }
    let rows = m
        .entries
        .iter()
        .map(|r| r.iter().map(|s| parse_q(s, "matrix entry")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    SymplecticMatrix::new(QMat::from_rows(rows)?)
}

pub fn matrix_to_json(m: &SymplecticMatrix) -> MatrixJson {
    MatrixJson {
        d: m.d(),
        entries: m.matrix().to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
    }
}

pub fn profile_to_json(p: &IndexProfile) -> ProfileJson {
    ProfileJson { decomposition: decomposition_to_json(&p.dec), base_index: p.base_index }
}

pub fn profile_from_json(p: &ProfileJson, opts: &ParseOptions) -> Result<IndexProfile> {
    Ok(IndexProfile::new(decomposition_from_json(&p.decomposition, opts)?, p.base_index))
}

fn local_homology_to_json(h: &LocalHomology) -> LocalHomologyJson {
    match h {
        LocalHomology::NonDegenerate => LocalHomologyJson::Word("nondegenerate".into()),
        LocalHomology::Table(t) => LocalHomologyJson::Table(
            t.iter()
                .map(|(k, row)| (k.to_string(), row.iter().map(|(deg, dim)| (deg.to_string(), *dim)).collect()))
                .collect(),
        ),
    }
}

fn local_homology_from_json(h: &LocalHomologyJson) -> Result<LocalHomology> {
    match h {
        LocalHomologyJson::Word(w) if w == "nondegenerate" => Ok(LocalHomology::NonDegenerate),
        LocalHomologyJson::Word(w) => Err(invalid(format!("local_homology must be \"nondegenerate\" or a table, got `{w}`"))),
        LocalHomologyJson::Table(t) => {
            let mut out = BTreeMap::new();
            for (k, row) in t {
                let k: u64 = k.parse().map_err(|_| invalid(format!("bad iterate key `{k}`")))?;
                let mut r = BTreeMap::new();
                for (deg, dim) in row {
                    let deg: i64 = deg.parse().map_err(|_| invalid(format!("bad degree key `{deg}`")))?;
                    r.insert(deg, *dim);
                }
                out.insert(k, r);
            }
            Ok(LocalHomology::Table(out))
        }
    }
}

pub fn configuration_to_json(c: &Configuration) -> ConfigurationJson {
    ConfigurationJson {
        n: c.n,
        orbits: c
            .orbits
            .iter()
            .map(|o| OrbitJson {
                label: o.label.clone(),
                action: exact_string(&o.action),
                profile: profile_to_json(&o.profile),
                local_homology: local_homology_to_json(&o.local_homology),
            })
            .collect(),
    }
}

pub fn configuration_from_json(c: &ConfigurationJson, opts: &ParseOptions) -> Result<Configuration> {
    let orbits = c
        .orbits
        .iter()
        .map(|o| {
            Ok(OrbitDescriptor {
                label: o.label.clone(),
                action: parse_q(&o.action, "action")?,
                profile: profile_from_json(&o.profile, opts)?,
                local_homology: local_homology_from_json(&o.local_homology)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(c.n, orbits)
}

pub fn tuple_to_json(t: &JumpTuple) -> TupleJson {
    TupleJson {
        n: t.n,
        m: t.m.clone(),
        chi: t.chi.clone(),
        delta_i: t.delta_list.clone(),
        epsilon: format_rational(&t.epsilon),
        m_common: t.m_common,
        m0: t.m0,
    }
}

pub fn tuple_from_json(t: &TupleJson) -> Result<JumpTuple> {
    if t.chi.iter().any(|c| *c > 1) {
        return Err(invalid("chi entries must be 0 or 1"));
    }
    Ok(JumpTuple {
        n: t.n,
        m: t.m.clone(),
        chi: t.chi.clone(),
        delta_list: t.delta_i.clone(),
        epsilon: parse_q(&t.epsilon, "epsilon")?,
        m_common: t.m_common,
        m0: t.m0,
    })
}

impl SearchJson {
    pub fn apply(&self, base: SearchConfig) -> Result<SearchConfig> {
        let mut s = base;
        if let Some(v) = self.n_max {
            s.n_max = v;
        }
        if let Some(v) = &self.epsilon {
            s.epsilon = parse_q(v, "epsilon")?;
        }
        if let Some(v) = &self.delta {
            s.delta = parse_q(v, "delta")?;
        }
        if self.m0.is_some() {
            s.m0 = self.m0;
        }
        if let Some(v) = self.want {
            s.want = v;
        }
        s.validate()?;
        Ok(s)
    }
}

pub fn search_to_json(s: &SearchConfig) -> SearchJson {
    SearchJson {
        n_max: Some(s.n_max),
        epsilon: Some(format_rational(&s.epsilon)),
        delta: Some(format_rational(&s.delta)),
        m0: s.m0,
        want: Some(s.want),
    }
}

/// `"p/q"` for exact values, a decimal good to the interval radius otherwise.
pub fn real_string(r: &Real) -> String {
    match r.exact_value() {
        Some(v) => format_rational(v),
        None => real_decimal(r),
    }
}

pub fn indices_json(ix: &IterateIndices, mean: &Real) -> Value {
    json!({
        "m": ix.m,
        "mu_minus": ix.mu_minus,
        "mu_plus": ix.mu_plus,
        "nu": ix.nu,
        "mean": real_string(mean),
    })
}

pub fn gap_json(g: &GapReport) -> Value {
    json!({
        "m_max": g.m_max,
        "holds": g.holds,
        "first_counterexample": g.first_counterexample,
        "corollary_threshold": g.corollary_threshold,
        "corollary_applies": g.corollary_applies,
        "corollary_counterexample": g.corollary_counterexample,
    })
}

pub fn convexity_json(c: &ConvexityCertificate) -> Value {
    json!({
        "passed": c.passed,
        "m_star": c.m_star,
        "violating_m": c.violating_m,
        "mean": real_string(&c.mean),
    })
}

pub fn verify_json(t: &JumpTuple, r: &VerifyReport) -> Value {
    json!({
        "tuple": tuple_to_json(t),
        "ok": r.ok,
        "delta_i": r.deltas,
        "checks": r.checks.iter().map(|c| json!({
            "profile": c.profile,
            "identity": c.identity,
            "expected": c.expected,
            "actual": c.actual,
            "holds": c.holds,
        })).collect::<Vec<_>>(),
    })
}

fn fact_json(f: &Fact) -> Value {
    json!({ "step": f.step, "statement": f.statement, "holds": f.holds, "N": f.tuple_n })
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "status": v.status.as_str(),
        "lower_bound": v.lower_bound,
        "step1_count": v.step1_count,
        "evidence": v.evidence.iter().map(fact_json).collect::<Vec<_>>(),
    })
}

pub fn chain_json(c: &ChainReport) -> Value {
    json!({
        "m": c.m,
        "s_plus_one": c.s_plus_one,
        "C": c.c,
        "Delta": c.delta,
        "window_s_minus": c.window_s_minus,
        "cowindow_s_minus": c.cowindow_s_minus,
        "window_nu": c.window_nu,
        "r_sum": c.r_sum,
        "steps": c.steps.iter().map(|s| json!({
            "name": s.name,
            "lhs": s.lhs,
            "rhs": s.rhs,
            "relation": s.relation,
            "holds": s.holds,
            "tight": s.tight,
        })).collect::<Vec<_>>(),
        "failed_step": c.failed_step,
        "all_rotations": c.all_rotations,
        "irrationally_elliptic": c.irrationally_elliptic,
        "certified": c.certified,
    })
}

pub fn ellipticity_json(r: &EllipticityReport) -> Value {
    json!({
        "status": r.status.as_str(),
        "certified": r.certified(),
        "first": r.first,
        "second": r.second,
        "chains": r.chains.iter().map(|(label, n, c)| json!({ "label": label, "N": n, "chain": chain_json(c) })).collect::<Vec<_>>(),
        "evidence": r.evidence.iter().map(fact_json).collect::<Vec<_>>(),
    })
}

pub fn morse_json(r: &MorseReport) -> Value {
    json!({
        "m_top": r.m_top,
        "holds": r.holds(),
        "first_violation": r.first_violation(),
        "failures": r.failures,
        "below_min": r.below_min,
        "contributions": r.contributions.iter().map(|(l, c)| json!({ "label": l, "count": c })).collect::<Vec<_>>(),
        "rows": r.rows.iter().map(|w| json!({
            "degree": w.degree,
            "c": w.c,
            "b": w.b,
            "alternating": w.alternating,
            "holds": w.holds,
        })).collect::<Vec<_>>(),
    })
}

pub fn identity_json(r: &IdentityReport) -> Value {
    json!({
        "holds": r.holds,
        "lhs": real_string(&r.lhs),
        "chi_plus": format_rational(&r.chi_plus),
        "residual": real_string(&r.residual),
        "terms": r.terms.iter().map(|t| json!({
            "label": t.label,
            "mean_euler": format_rational(&t.mean_euler),
            "mean_index": real_string(&t.mean_index),
        })).collect::<Vec<_>>(),
    })
}

pub fn sdm_json(r: &SdmReport) -> Value {
    json!({
        "k": r.k,
        "mean": real_string(&r.mean),
        "mean_even_integer": r.mean_even_integer,
        "top_degree": r.top_degree,
        "top_dimension": r.top_dimension,
        "is_sdm": r.is_sdm,
        "admissible": r.admissible,
    })
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

/// Shortest decimal rendering of a small positive rational, for tables.
pub fn short(v: &Q) -> String {
    if v.is_integer() || v.is_zero() {
        return format_rational(v);
    }
    match v.abs().to_f64() {
        Some(x) if x >= 1e-4 => format_decimal(v, 6),
        _ => format_rational(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn exact_strings() {
        assert_eq!(exact_string(&q(1, 8)), "0.125");
        assert_eq!(exact_string(&q(1, 3)), "1/3");
        assert_eq!(exact_string(&q(7, 1)), "7");
        assert_eq!(parse_rational(&exact_string(&q(-3, 40))).unwrap(), q(-3, 40));
    }

    #[test]
    fn angle_schema() {
        let a: AngleJson = parse_json(r#"{"rat":[1,3]}"#).unwrap();
        assert_eq!(angle_from_json(&a, &ParseOptions::default()).unwrap(), Angle::rational(1, 3).unwrap());
        let i: AngleJson = parse_json(r#"{"irr":{"approx":"0.6180339887498948482","gap":"0.001"}}"#).unwrap();
        let x = angle_from_json(&i, &ParseOptions::default()).unwrap();
        let back = angle_from_json(&angle_to_json(&x), &ParseOptions::default()).unwrap();
        assert_eq!(x, back);
        let short = angle_from_json(&i, &ParseOptions { precision: 5 }).unwrap();
        match short {
            Angle::Irrational(s) => {
                assert_eq!(s.approx(), &q(61803, 100000));
                assert_eq!(s.err(), &q(1, 100000));
            }
            _ => panic!("expected an irrational marker"),
        }
    }

    #[test]
    fn configuration_round_trip() {
        let text = r#"{"n": 3, "orbits": [
            {"label": "x", "action": "1.5", "profile": {"decomposition": {"d": 2, "blocks": [
                {"kind": "E_plus"}, {"kind": "E_plus"}]}, "base_index": 2},
             "local_homology": {"1": {"4": 1}}},
            {"label": "y", "action": "2", "profile": {"decomposition": {"d": 2, "blocks": [
                {"kind": "Rot", "angle": {"rat": [1, 5]}}, {"kind": "Hyp", "k": 1}]}, "base_index": 3},
             "local_homology": "nondegenerate"}]}"#;
        let opts = ParseOptions::default();
        let c = configuration_from_json(&parse_json(text).unwrap(), &opts).unwrap();
        let j = configuration_to_json(&c);
        let again = configuration_from_json(&parse_json(&to_pretty(&j)).unwrap(), &opts).unwrap();
        assert_eq!(c, again);
        assert!(matches!(parse_json::<LocalHomologyJson>("\"degenerate\"").map(|h| local_homology_from_json(&h)), Ok(Err(_))));
    }

    #[test]
    fn unknown_kind_is_input_error() {
        let b: BlockJson = parse_json(r#"{"kind": "Shear"}"#).unwrap();
        assert!(matches!(block_from_json(&b, &ParseOptions::default()), Err(Error::InvalidInput(_))));
    }
}
