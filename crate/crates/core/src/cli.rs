//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a check failed |
//! | 2 | malformed input |
//! | 3 | exhaustive family too large |
//! | 4 | construction failed |

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{
    direct_pair_random_trace, exhaustion_cover, half_direct_search, is_sidon, make_ap, make_sidon,
    make_subgroup_union, sample_random_set, RNG_NAME,
};
use crate::energy::{common_energy, t_k_set};
use crate::error::{Error, Result};
use crate::group::{max_order_from_env, GroupSpec};
use crate::literal::{format_set_literal, parse_set_body, parse_set_file, parse_set_literal};
use crate::quantities::{
    additive_dimension, doubling, e_quantity, longest_ap, petridis_ratio, s_quantity, shift_ratio_k, QuantityResult,
    SearchBudget,
};
use crate::ratio::{parse_rational, ratio, Threshold};
use crate::set::GroupSet;
use crate::verify::{experiment_random_s, parse_family, run_family, CheckConfig, CheckKind, DEFAULT_FAMILY_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FAMILY_TOO_LARGE: i32 = 3;
pub const EXIT_CONSTRUCTION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "addcomb", version, about = "Exact additive-combinatorial quantities over finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest |A|+|B| (or |A|) searched exhaustively.
    #[arg(long, global = true, default_value_t = 24)]
    budget_bits: u32,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute quantities for named sets.
    Compute(ComputeArgs),
    /// Run a named construction.
    Construct(ConstructArgs),
    /// Run checks over a family of instances.
    Verify(VerifyArgs),
    /// Run an experiment.
    Experiment {
        #[command(subcommand)]
        which: ExperimentKind,
    },
}

#[derive(Args, Debug, Default)]
struct SetInput {
    #[arg(long)]
    group: Option<String>,

    /// `NAME={e1, e2, ...}`; repeatable.
    #[arg(long = "set")]
    sets: Vec<String>,

    /// A set file: group line, then `NAME = {...}` lines.
    #[arg(long)]
    file: Option<PathBuf>,

    /// `ROLE=NAME` or `ROLE={...}`: bind an operand role to a set.
    #[arg(long = "with")]
    with: Vec<String>,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    input: SetInput,

    /// d, s, e, K, k, dim, petridis, energy, tk; comma-separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    quantity: Vec<String>,

    /// Thresholds for s and e (rational >= 1 or `inf`).
    #[arg(long = "T", value_delimiter = ',', default_value = "inf")]
    t: Vec<String>,

    /// Order of the moment for `tk`.
    #[arg(long, default_value_t = 2)]
    k: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructionName {
    Sidon,
    Ap,
    SubgroupUnion,
    Random,
    DirectPairRandom,
    ExhaustionCover,
    HalfDirect,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    name: ConstructionName,

    #[command(flatten)]
    input: SetInput,

    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    start: Option<u64>,
    #[arg(long)]
    diff: Option<u64>,
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    m_star: Option<String>,
    #[arg(long, default_value_t = 64)]
    max_attempts: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    family: String,

    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,

    /// Thresholds for the chain check.
    #[arg(long = "T", value_delimiter = ',')]
    t: Vec<String>,

    /// Include every individual report, not only the summary.
    #[arg(long)]
    reports: bool,
}

#[derive(Subcommand, Debug)]
enum ExperimentKind {
    /// Median S[A] of random sets at several densities.
    #[command(name = "random-S")]
    RandomS {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FamilyTooLarge { .. } => EXIT_FAMILY_TOO_LARGE,
        Error::ConstructionFailed(_) => EXIT_CONSTRUCTION,
        _ => EXIT_PARSE,
    }
}

/// Output of one command: the rendered text and its exit code.
struct Rendered {
    text: String,
    code: i32,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &r.text).map_err(|e| e.to_string()),
                None => stdout.write_all(r.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => r.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: cannot write output: {e}");
                    EXIT_PARSE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<Rendered> {
    let budget = SearchBudget {
        max_exact_bits: cli.budget_bits,
        seed: cli.seed,
        ..SearchBudget::default()
    };
    budget.validate()?;
    match &cli.command {
        Command::Compute(args) => cmd_compute(args, &budget, cli.format.unwrap_or(Format::Json)),
        Command::Construct(args) => {
            if cli.format == Some(Format::Csv) {
                return Err(Error::InvalidArgument("construct writes JSON only".into()));
            }
            cmd_construct(args, cli.seed, &budget)
        }
        Command::Verify(args) => cmd_verify(args, &budget, cli.format.unwrap_or(Format::Json)),
        Command::Experiment { which } => cmd_experiment(which, cli.seed, &budget, cli.format.unwrap_or(Format::Csv)),
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Named sets in input order, and operand roles bound by `--with`.
struct Loaded {
    group: GroupSpec,
    sets: Vec<(String, GroupSet)>,
    roles: BTreeMap<String, String>,
}

impl Loaded {
    fn get(&self, name: &str) -> Option<&GroupSet> {
        self.sets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// Role `role` is its `--with` binding, else the `pos`-th set, else `fallback`.
    fn role(&self, role: &str, pos: usize, fallback: Option<&str>) -> Result<(String, GroupSet)> {
        let name = match self.roles.get(role) {
            Some(n) => n.clone(),
            None => match (self.sets.get(pos), fallback) {
                (Some((n, _)), _) => n.clone(),
                (None, Some(f)) => return self.role(f, 0, None),
                (None, None) => return Err(Error::InvalidArgument(format!("no set bound to role {role}"))),
            },
        };
        let set = self
            .get(&name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown set {name:?}")))?;
        Ok((name, set.clone()))
    }
}

fn load(input: &SetInput) -> Result<Loaded> {
    let cap = max_order_from_env()?;
    let mut sets: Vec<(String, GroupSet)> = Vec::new();
    let mut group = match &input.group {
        Some(g) => Some(GroupSpec::parse_with_cap(g, cap)?),
        None => None,
    };
    if let Some(path) = &input.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let file = parse_set_file(&text, cap)?;
        if let Some(g) = &group {
            if *g != file.group {
                return Err(Error::GroupMismatch {
                    left: g.to_string(),
                    right: file.group.to_string(),
                });
            }
        }
        group = Some(file.group.clone());
        sets.extend(file.sets);
    }
    let group = group.ok_or_else(|| Error::InvalidArgument("--group or --file is required".into()))?;
    for lit in &input.sets {
        sets.push(parse_set_literal(&group, lit)?);
    }
    for (i, (name, _)) in sets.iter().enumerate() {
        if sets[..i].iter().any(|(n, _)| n == name) {
            return Err(Error::InvalidArgument(format!("set {name:?} defined twice")));
        }
    }
    let mut roles = BTreeMap::new();
    for w in &input.with {
        let (role, rhs) = w
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("--with expects ROLE=NAME, got {w:?}")))?;
        let (role, rhs) = (role.trim().to_string(), rhs.trim());
        if rhs.starts_with('{') {
            let set = parse_set_body(&group, rhs)?;
            sets.push((role.clone(), set));
            roles.insert(role.clone(), role);
        } else {
            roles.insert(role, rhs.to_string());
        }
    }
    Ok(Loaded { group, sets, roles })
}

#[derive(Serialize)]
struct ComputeRecord {
    quantity: String,
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    t: Option<Threshold>,
    result: Value,
    #[serde(skip)]
    csv_value: String,
    #[serde(skip)]
    csv_exactness: String,
}

#[derive(Serialize)]
struct ComputeOutput {
    group: String,
    sets: BTreeMap<String, Vec<usize>>,
    results: Vec<ComputeRecord>,
    warnings: Vec<String>,
}

fn quantity_record(quantity: &str, a: &str, b: Option<&str>, t: Option<&Threshold>, q: QuantityResult) -> ComputeRecord {
    ComputeRecord {
        quantity: quantity.to_string(),
        a: a.to_string(),
        b: b.map(str::to_string),
        t: t.cloned(),
        csv_value: q.value.to_string(),
        csv_exactness: serde_json::to_value(q.exactness)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default(),
        result: serde_json::to_value(&q).expect("quantity results serialize"),
    }
}

fn cmd_compute(args: &ComputeArgs, budget: &SearchBudget, format: Format) -> Result<Rendered> {
    let loaded = load(&args.input)?;
    let (na, a) = loaded.role("A", 0, None)?;
    let (nb, b) = loaded.role("B", 1, Some("A"))?;
    let ts: Vec<Threshold> = args.t.iter().map(|t| Threshold::parse(t)).collect::<Result<_>>()?;
    let mut results = Vec::new();
    for q in &args.quantity {
        let q = q.trim();
        match q {
            "d" => results.push(quantity_record(q, &na, Some(&nb), None, doubling(&a, &b)?)),
            "s" | "e" => {
                for t in &ts {
                    let r = if q == "s" {
                        s_quantity(&a, &b, t, budget)?
                    } else {
                        e_quantity(&a, &b, t, budget)?
                    };
                    results.push(quantity_record(q, &na, Some(&nb), Some(t), r));
                }
            }
            "K" => results.push(quantity_record(q, &na, None, None, shift_ratio_k(&a)?)),
            "k" => results.push(quantity_record(q, &na, None, None, longest_ap(&a)?)),
            "dim" => results.push(quantity_record(q, &na, None, None, additive_dimension(&a, budget)?)),
            "petridis" => results.push(quantity_record(q, &na, None, None, petridis_ratio(&a, budget)?)),
            "energy" => {
                let e = common_energy(&a, &b)?;
                results.push(ComputeRecord {
                    quantity: q.to_string(),
                    a: na.clone(),
                    b: Some(nb.clone()),
                    t: None,
                    csv_value: e.value.to_string(),
                    csv_exactness: "exact".into(),
                    result: json!({ "value": e.value, "method": e.method, "exactness": "exact" }),
                })
            }
            "tk" => {
                let v = t_k_set(&a, args.k)?.to_string();
                let num = serde_json::Number::from_str(&v).expect("integers are valid JSON numbers");
                results.push(ComputeRecord {
                    quantity: q.to_string(),
                    a: na.clone(),
                    b: None,
                    t: None,
                    csv_value: v,
                    csv_exactness: "exact".into(),
                    result: json!({ "value": num, "k": args.k, "exactness": "exact" }),
                })
            }
            other => return Err(Error::Parse(format!("unknown quantity {other:?}"))),
        }
    }
    let warnings: Vec<String> = results
        .iter()
        .filter(|r| r.csv_exactness != "exact")
        .map(|r| {
            format!(
                "{} for {} is a {} (search budget of {} bits exceeded)",
                r.quantity, r.a, r.csv_exactness, budget.max_exact_bits
            )
        })
        .collect();
    let text = match format {
        Format::Json => {
            let mut sets = BTreeMap::new();
            for name in [&na, &nb] {
                if let Some(s) = loaded.get(name) {
                    sets.insert(name.clone(), s.to_vec());
                }
            }
            to_json(&ComputeOutput {
                group: loaded.group.to_string(),
                sets,
                results,
                warnings,
            })
        }
        Format::Csv => {
            let mut s = String::from("quantity,A,B,T,value,exactness\n");
            for r in &results {
                let t = r.t.as_ref().map(ToString::to_string).unwrap_or_default();
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.quantity,
                    r.a,
                    r.b.clone().unwrap_or_default(),
                    t,
                    r.csv_value,
                    r.csv_exactness
                ));
            }
            s
        }
    };
    Ok(Rendered { text, code: EXIT_OK })
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))
}

fn group_only(input: &SetInput) -> Result<GroupSpec> {
    let g = need(&input.group, "group")?;
    GroupSpec::parse_with_cap(&g, max_order_from_env()?)
}

fn set_output(name: &str, g: &GroupSpec, set: &GroupSet, extra: Value) -> Value {
    let mut v = json!({
        "construction": name,
        "group": g.to_string(),
        "set": set.to_vec(),
        "size": set.len(),
        "literal": format_set_literal("A", set),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn cmd_construct(args: &ConstructArgs, seed: u64, budget: &SearchBudget) -> Result<Rendered> {
    let rendered = |v: Value, code: i32| Rendered { text: to_json(&v), code };
    match args.name {
        ConstructionName::Sidon => {
            let g = group_only(&args.input)?;
            let a = make_sidon(&g, need(&args.size, "size")?, seed)?;
            let d = doubling(&a, &a)?;
            let extra = json!({
                "seed": seed,
                "rng": RNG_NAME,
                "verification": {
                    "sidon": is_sidon(&a)?,
                    "doubling": d.value,
                    "doubling_is_half_of_size_plus_one": *d.rational() == ratio(a.len() as u64 + 1, 2),
                },
            });
            Ok(rendered(set_output("sidon", &g, &a, extra), EXIT_OK))
        }
        ConstructionName::Ap => {
            let g = group_only(&args.input)?;
            let start = g.element(need(&args.start, "start")?)?;
            let diff = g.element(need(&args.diff, "diff")?)?;
            let a = make_ap(&g, start, diff, need(&args.len, "len")?)?;
            Ok(rendered(set_output("ap", &g, &a, json!({})), EXIT_OK))
        }
        ConstructionName::SubgroupUnion => {
            let loaded = load(&args.input)?;
            let parts: Vec<GroupSet> = loaded.sets.iter().map(|(_, s)| s.clone()).collect();
            let a = make_subgroup_union(&parts)?;
            let extra = json!({ "subgroups": loaded.sets.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>() });
            Ok(rendered(set_output("subgroup-union", &loaded.group, &a, extra), EXIT_OK))
        }
        ConstructionName::Random => {
            let g = group_only(&args.input)?;
            let delta = parse_rational(&need(&args.delta, "delta")?)?;
            let a = sample_random_set(&g, &delta, seed)?;
            let extra = json!({ "seed": seed, "rng": RNG_NAME, "delta": delta.to_string() });
            Ok(rendered(set_output("random", &g, &a, extra), EXIT_OK))
        }
        ConstructionName::DirectPairRandom => {
            let loaded = load(&args.input)?;
            let (_, a) = loaded.role("A", 0, None)?;
            let (_, b) = loaded.role("B", 1, Some("A"))?;
            let kappa = parse_rational(&need(&args.kappa, "kappa")?)?;
            let trace = direct_pair_random_trace(&a, &b, &kappa, seed, args.max_attempts)?;
            let ok = trace.success && trace.postconditions.as_ref().is_some_and(|p| p.all());
            let v = json!({
                "construction": "direct-pair-random",
                "group": loaded.group.to_string(),
                "rng": RNG_NAME,
                "trace": trace,
            });
            Ok(rendered(v, if ok { EXIT_OK } else { EXIT_CONSTRUCTION }))
        }
        ConstructionName::ExhaustionCover => {
            let loaded = load(&args.input)?;
            let (_, a) = loaded.role("A", 0, None)?;
            let (_, a1) = loaded.role("A1", 1, None)?;
            let m = args.m_star.as_deref().map(parse_rational).transpose()?;
            let w = exhaustion_cover(&a, &a1, m.as_ref())?;
            let code = if w.verified { EXIT_OK } else { EXIT_CONSTRUCTION };
            let v = json!({ "construction": "exhaustion-cover", "group": loaded.group.to_string(), "cover": w });
            Ok(rendered(v, code))
        }
        ConstructionName::HalfDirect => {
            let loaded = load(&args.input)?;
            let (_, a) = loaded.role("A", 0, None)?;
            let kappa = parse_rational(&need(&args.kappa, "kappa")?)?;
            let r = half_direct_search(&a, &kappa, budget)?;
            let v = json!({ "construction": "half-direct", "group": loaded.group.to_string(), "result": r });
            Ok(rendered(v, EXIT_OK))
        }
    }
}

fn cmd_verify(args: &VerifyArgs, budget: &SearchBudget, format: Format) -> Result<Rendered> {
    let family = parse_family(&args.family, max_order_from_env()?)?;
    let mut config = CheckConfig::new(CheckKind::parse_list(&args.checks)?);
    config.budget = *budget;
    if !args.t.is_empty() {
        config.chain_ts = args.t.iter().map(|t| Threshold::parse(t)).collect::<Result<_>>()?;
    }
    let (summary, reports) = run_family(&family, &config, DEFAULT_FAMILY_LIMIT)?;
    let code = if summary.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    let text = match format {
        Format::Json if args.reports => to_json(&json!({ "summary": summary, "reports": reports })),
        Format::Json => to_json(&json!({ "summary": summary })),
        Format::Csv => {
            let mut s = String::from("check_id,checked,passed,failed,not_applicable,measured,min_ratio,max_measured\n");
            for (id, st) in &summary.per_check {
                let min_ratio = st
                    .min_ratio
                    .as_ref()
                    .and_then(|e| e.ratio.as_ref())
                    .map(ToString::to_string)
                    .unwrap_or_default();
                let max_measured = st
                    .max_measured
                    .as_ref()
                    .and_then(|e| e.measured)
                    .map(|m| m.to_string())
                    .unwrap_or_default();
                s.push_str(&format!(
                    "{id},{},{},{},{},{},{min_ratio},{max_measured}\n",
                    st.checked, st.passed, st.failed, st.not_applicable, st.measured
                ));
            }
            s
        }
    };
    Ok(Rendered { text, code })
}

fn cmd_experiment(which: &ExperimentKind, seed: u64, budget: &SearchBudget, format: Format) -> Result<Rendered> {
    match which {
        ExperimentKind::RandomS { group, deltas, trials } => {
            let g = GroupSpec::parse_with_cap(group, max_order_from_env()?)?;
            let deltas: Vec<_> = deltas.iter().map(|d| parse_rational(d)).collect::<Result<_>>()?;
            let summary = experiment_random_s(&g, &deltas, *trials, seed, budget)?;
            let code = if summary.trend_holds() { EXIT_OK } else { EXIT_CHECK_FAILED };
            let text = match format {
                Format::Csv => summary.to_csv(),
                Format::Json => to_json(&summary),
            };
            Ok(Rendered { text, code })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["addcomb"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_examples() {
        let (code, out, _) = call(&["compute", "--group", "Z/6", "--set", "H={0,2,4}", "--quantity", "d"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["results"][0]["result"]["value"], json!({"num": 1, "den": 1}));
        let (code, out, _) = call(&[
            "compute", "--group", "Z/10", "--set", "A={0,1,2}", "--quantity", "energy", "--with", "B=A",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["results"][0]["result"]["value"], json!(19));
    }

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(call(&["compute", "--group", "Z/1", "--set", "A={0}", "--quantity", "d"]).0, 2);
        assert_eq!(call(&["compute", "--group", "Z/6", "--set", "A={9}", "--quantity", "d"]).0, 2);
        assert_eq!(call(&["compute", "--group", "Z/6", "--set", "A={1}", "--quantity", "zz"]).0, 2);
        assert_eq!(call(&["verify", "--family", "subsets(Z/12"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn construct_failure_exits_4() {
        let (code, _, err) = call(&["construct", "sidon", "--group", "Z/7", "--size", "4"]);
        assert_eq!(code, 4, "{err}");
    }
}
