//! Command-line front end. `run` returns the exit code and everything that
//! would be written to stdout, so it can be driven from tests.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational};
use crate::cijump::{find_tuples, symmetric_tuple, verify_tuple, SearchConfig};
use crate::error::{invalid, Error, Result};
use crate::indexiter::{iterate_indices, mean_index};
use crate::json::*;
use crate::reebcount::{
    betti, empty_config, katok_like_n3, mean_index_identity_check, morse_check, replay_theorem_1_1, replay_theorem_1_3,
    sdm_forcing_n3, tuples_for_theorem_1_1, tuples_for_theorem_1_3, Configuration, KatokSearch, Status,
};
use crate::symplin::{decompose_numeric, DecomposeOptions};

#[derive(Parser, Debug)]
#[command(name = "sympindex", version, about = "Index iteration, common index jumps and Reeb orbit counting checks")]
pub struct Cli {
    /// Decimal digits kept from irrational angle approximations.
    #[arg(long, global = true, env = "SYMPINDEX_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Print JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SearchArgs {
    /// JSON file with search parameters; flags override it.
    #[arg(long = "search")]
    pub search_file: Option<PathBuf>,
    #[arg(long)]
    pub nmax: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub m0: Option<u64>,
    #[arg(long)]
    pub want: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Indices of the m-th iterate.
    Index {
        /// A profile, or a request object `{"profile", "m"}`.
        #[arg(long)]
        profile: PathBuf,
        /// Overrides the request's `m`; 1 when neither is given.
        #[arg(long)]
        m: Option<u64>,
    },
    /// Mean index of a profile.
    Mean {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Basic normal form of an exact symplectic matrix.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Search for common index jump tuples.
    CijFind {
        /// JSON list of profiles.
        profiles: PathBuf,
        /// Alias for --search.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-derive every jump identity for a tuple.
    CijVerify {
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Find a symmetric companion of a tuple.
    CijCompanion {
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// `cij find`, `cij verify` and `cij companion`, spelled as a group.
    Cij {
        #[command(subcommand)]
        op: CijOp,
    },
    /// Betti number of the positive equivariant homology of the unit cotangent bundle of S^n.
    Betti {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
    },
    /// Morse inequalities up to a degree.
    Morse {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "m-top")]
        m_top: i64,
    },
    /// Mean index identity.
    Identity {
        #[arg(long)]
        config: PathBuf,
    },
    /// Replay the lower-bound argument.
    #[command(name = "certify-1-1")]
    Certify11 {
        #[arg(long)]
        config: PathBuf,
        /// JSON list of tuples; searched for when absent.
        #[arg(long)]
        tuples: Option<PathBuf>,
        /// Tuples to search for when none are given.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Replay the ellipticity argument.
    #[command(name = "certify-1-3")]
    Certify13 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        tuple: Option<PathBuf>,
        #[arg(long = "tuple-sym", requires = "tuple")]
        tuple_sym: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Regenerate the example configurations.
    GenFixtures {
        #[arg(long)]
        out: PathBuf,
        /// katok-like-n3, sdm-forcing-n3, empty, or all.
        #[arg(long, default_value = "all")]
        which: String,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum CijOp {
    /// Same as cij-find.
    Find {
        profiles: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Same as cij-verify.
    Verify {
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Same as cij-companion.
    Companion {
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
}

impl CijOp {
    fn command(&self) -> Command {
        match self.clone() {
            CijOp::Find { profiles, config, search } => Command::CijFind { profiles, config, search },
            CijOp::Verify { profiles, tuple, delta } => Command::CijVerify { profiles, tuple, delta },
            CijOp::Companion { profiles, tuple, search } => Command::CijCompanion { profiles, tuple, search },
        }
    }
}

/// Exit status plus captured standard output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { code, stdout: e.render().to_string() };
        }
    };
    let table = cli.table;
    match dispatch(&cli) {
        Ok((code, value, text)) => Outcome { code, stdout: if table { text } else { pretty(&value) } },
        Err(e) => {
            let stdout = if table { format!("error: {e}\n") } else { pretty(&error_json(&e)) };
            Outcome { code: 2, stdout }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = to_pretty(v);
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn load_configuration(path: &Path, opts: &ParseOptions) -> Result<Configuration> {
    configuration_from_json(&load(path)?, opts)
}

fn search_config(args: &SearchArgs, extra: Option<&PathBuf>) -> Result<SearchConfig> {
    let mut s = SearchConfig::default();
    for file in [extra, args.search_file.as_ref()].into_iter().flatten() {
        s = load::<SearchJson>(file)?.apply(s)?;
    }
    let flags = SearchJson {
        n_max: args.nmax,
        epsilon: args.epsilon.clone(),
        delta: args.delta.clone(),
        m0: args.m0,
        want: args.want,
    };
    flags.apply(s)
}

type Dispatched = (i32, Value, String);

fn dispatch(cli: &Cli) -> Result<Dispatched> {
    execute(&cli.command, &ParseOptions { precision: cli.precision })
}

fn execute(command: &Command, opts: &ParseOptions) -> Result<Dispatched> {
    let opts = opts.clone();
    match command {
        Command::Cij { op } => execute(&op.command(), &opts),
        Command::Index { profile, m } => {
            let v: Value = load(profile)?;
            let bad = |e: serde_json::Error| invalid(format!("{}: {e}", profile.display()));
            let (pj, from_file) = if v.get("profile").is_some() {
                let r: IndexRequestJson = serde_json::from_value(v).map_err(bad)?;
                (r.profile, r.m)
            } else {
                (serde_json::from_value::<ProfileJson>(v).map_err(bad)?, 1)
            };
            let p = profile_from_json(&pj, &opts)?;
            let m = m.unwrap_or(from_file);
            let ix = iterate_indices(&p, m)?;
            let mean = mean_index(&p);
            let text = format!(
                "m        {}\nmu_minus {}\nmu_plus  {}\nnu       {}\nmean     {}\n",
                ix.m,
                ix.mu_minus,
                ix.mu_plus,
                ix.nu,
                real_string(&mean)
            );
            Ok((0, indices_json(&ix, &mean), text))
        }
        Command::Mean { profile } => {
            let p = profile_from_json(&load(profile)?, &opts)?;
            let mean = real_string(&mean_index(&p));
            Ok((0, json!({ "mean": mean }), format!("{mean}\n")))
        }
        Command::Decompose { matrix } => {
            let m = matrix_from_json(&load(matrix)?)?;
            let dec = decompose_numeric(&m, &DecomposeOptions { digits: opts.precision })?;
            let text = dec.blocks().iter().map(|b| format!("{b}\n")).collect();
            Ok((0, serde_json::to_value(decomposition_to_json(&dec)).unwrap_or(Value::Null), text))
        }
        Command::CijFind { profiles, config, search } => {
            let ps = load_profiles(profiles, &opts)?;
            let s = search_config(search, config.as_ref())?;
            let tuples = find_tuples(&ps, &s)?;
            let text = tuples.iter().map(|t| format!("{}\n", crate::cijump::describe(t))).collect();
            let v: Vec<TupleJson> = tuples.iter().map(tuple_to_json).collect();
            Ok((0, serde_json::to_value(v).unwrap_or(Value::Null), text))
        }
        Command::CijVerify { profiles, tuple, delta } => {
            let ps = load_profiles(profiles, &opts)?;
            let t = tuple_from_json(&load(tuple)?)?;
            let delta = match delta {
                Some(d) => parse_rational(d)?,
                None => SearchConfig::default().delta,
            };
            let r = verify_tuple(&ps, &t, &delta);
            let mut text = format!("ok {}\n", r.ok);
            for c in &r.checks {
                text.push_str(&format!(
                    "[{}] {:<44} expected {:>12} actual {:>12} {}\n",
                    c.profile,
                    c.identity,
                    c.expected,
                    c.actual,
                    if c.holds { "ok" } else { "FAIL" }
                ));
            }
            Ok((if r.ok { 0 } else { 1 }, verify_json(&t, &r), text))
        }
        Command::CijCompanion { profiles, tuple, search } => {
            let ps = load_profiles(profiles, &opts)?;
            let t = tuple_from_json(&load(tuple)?)?;
            let s = search_config(search, None)?;
            let c = symmetric_tuple(&ps, &t, &s)?;
            let text = format!("{}\n", crate::cijump::describe(&c));
            Ok((0, serde_json::to_value(tuple_to_json(&c)).unwrap_or(Value::Null), text))
        }
        Command::Betti { n, k } => {
            let b = betti(*n, *k)?;
            Ok((0, json!(b), format!("{b}\n")))
        }
        Command::Morse { config, m_top } => {
            let cfg = load_configuration(config, &opts)?;
            let r = morse_check(&cfg, *m_top)?;
            let mut text = format!("degree {:>6} {:>4} {:>6}\n", "c", "b", "alt");
            for row in &r.rows {
                text.push_str(&format!(
                    "{:>6} {:>6} {:>4} {:>6} {}\n",
                    row.degree,
                    row.c,
                    row.b,
                    row.alternating,
                    if row.holds { "" } else { "VIOLATED" }
                ));
            }
            Ok((if r.holds() { 0 } else { 1 }, morse_json(&r), text))
        }
        Command::Identity { config } => {
            let cfg = load_configuration(config, &opts)?;
            let r = mean_index_identity_check(&cfg)?;
            let text = format!(
                "lhs {}\nchi_plus {}\nresidual {}\nholds {}\n",
                real_string(&r.lhs),
                format_rational(&r.chi_plus),
                real_string(&r.residual),
                r.holds
            );
            Ok((if r.holds { 0 } else { 1 }, identity_json(&r), text))
        }
        Command::Certify11 { config, tuples, count, search } => {
            let cfg = load_configuration(config, &opts)?;
            let s = search_config(search, None)?;
            let ts = match tuples {
                Some(p) => load::<Vec<TupleJson>>(p)?.iter().map(tuple_from_json).collect::<Result<Vec<_>>>()?,
                None => tuples_for_theorem_1_1(&cfg, &s, *count)?,
            };
            let v = replay_theorem_1_1(&cfg, &ts, &s.delta)?;
            let code = match v.status {
                Status::ConsistentAtDepth => 0,
                Status::InputError => 2,
                _ => 1,
            };
            let mut text = format!("status {}\n", v.status);
            if let Some(b) = v.lower_bound {
                text.push_str(&format!("lower bound {b}\n"));
            }
            for f in &v.evidence {
                text.push_str(&format!("{} [{}] {}\n", if f.holds { "  " } else { "!!" }, f.step, f.statement));
            }
            let mut value = verdict_json(&v);
            value["tuples"] = serde_json::to_value(ts.iter().map(tuple_to_json).collect::<Vec<_>>()).unwrap_or(Value::Null);
            Ok((code, value, text))
        }
        Command::Certify13 { config, tuple, tuple_sym, search } => {
            let cfg = load_configuration(config, &opts)?;
            let s = search_config(search, None)?;
            let (t, t_sym) = match (tuple, tuple_sym) {
                (Some(a), Some(b)) => (tuple_from_json(&load(a)?)?, tuple_from_json(&load(b)?)?),
                (Some(a), None) => {
                    let t = tuple_from_json(&load(a)?)?;
                    let c = symmetric_tuple(&cfg.profiles(), &t, &s)?;
                    (t, c)
                }
                _ => tuples_for_theorem_1_3(&cfg, &s)?,
            };
            let r = replay_theorem_1_3(&cfg, &t, &t_sym, &s.delta)?;
            let code = match r.status {
                Status::InputError => 2,
                _ if r.certified() => 0,
                _ => 1,
            };
            let mut text = format!("status {}\ncertified {}\n", r.status, r.certified());
            for (label, n, c) in &r.chains {
                text.push_str(&format!("{label} at N={n}: failed step {:?}, certified {}\n", c.failed_step, c.certified));
            }
            for f in &r.evidence {
                text.push_str(&format!("{} [{}] {}\n", if f.holds { "  " } else { "!!" }, f.step, f.statement));
            }
            let mut value = ellipticity_json(&r);
            value["tuples"] = json!([tuple_to_json(&t), tuple_to_json(&t_sym)]);
            Ok((code, value, text))
        }
        Command::GenFixtures { out, which } => {
            let names: Vec<&str> = match which.as_str() {
                "all" => vec!["empty", "sdm-forcing-n3", "katok-like-n3"],
                w @ ("empty" | "sdm-forcing-n3" | "katok-like-n3") => vec![w],
                other => return Err(invalid(format!("unknown fixture `{other}`"))),
            };
            fs::create_dir_all(out).map_err(|e| invalid(format!("cannot create {}: {e}", out.display())))?;
            let mut written = Vec::new();
            for name in names {
                let cfg = generate_fixture(name)?;
                let path = out.join(format!("{name}.json"));
                fs::write(&path, fixture_text(&cfg)).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
                written.push(path.display().to_string());
            }
            let text = written.iter().map(|p| format!("{p}\n")).collect();
            Ok((0, json!({ "written": written }), text))
        }
    }
}

fn load_profiles(path: &Path, opts: &ParseOptions) -> Result<Vec<crate::indexiter::IndexProfile>> {
    let raw: Vec<ProfileJson> = load(path)?;
    if raw.is_empty() {
        return Err(Error::InvalidInput("profile list is empty".into()));
    }
    raw.iter().map(|p| profile_from_json(p, opts)).collect()
}

/// Runs the deterministic search behind one shipped example.
pub fn generate_fixture(name: &str) -> Result<Configuration> {
    match name {
        "empty" => empty_config(3),
        "sdm-forcing-n3" => sdm_forcing_n3(SDM_TABLE_DEPTH),
        "katok-like-n3" => katok_like_n3(&KatokSearch::default()),
        other => Err(invalid(format!("unknown fixture `{other}`"))),
    }
}

/// Iterates covered by the local homology table of the forcing example.
pub const SDM_TABLE_DEPTH: u64 = 16;

pub fn fixture_text(cfg: &Configuration) -> String {
    let mut s = to_pretty(&configuration_to_json(cfg));
    s.push('\n');
    s
}
