//! The `puiseux` command line.
//!
//! [`run`] parses an argument vector, dispatches one query to `puiseux-core`
//! and returns the exit code together with the bytes meant for stdout and
//! stderr, so the binary and the tests share one code path.
//!
//! Exit codes: 0 on success, 1 when a spec cannot be read or parsed, 2 on
//! domain errors and bad parameters, 3 when the answer is unknown at the
//! requested depth.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use puiseux_core::blocks::{self, FiniteAbelianGroup, GSequence, GroupElement};
use puiseux_core::factor::{elasticity, factorizations, length_set};
use puiseux_core::homs::{self, HomCheck, HomSpec};
use puiseux_core::primary::{self, CertificateOutcome};
use puiseux_core::{Error, FiniteMonoid, Membership, NumericalMonoid, Polynomial, PuiseuxSpec, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SPEC: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

const DEFAULT_DEPTH: usize = 8;
const DEFAULT_BOUND: &str = "100";

#[derive(Debug, Parser)]
#[command(
    name = "puiseux",
    version,
    about = "Exact queries on Puiseux, numerical and block monoids"
)]
struct Cli {
    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpecArg {
    /// Monoid spec: inline JSON or a path to a JSON file.
    #[arg(long)]
    spec: String,
}

#[derive(Debug, Args)]
struct DepthArg {
    /// Truncation depth for infinite families.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
}

#[derive(Debug, Args)]
struct HomArg {
    /// Hom spec {"q":…,"domain":…,"codomain":…}: inline JSON or a path.
    #[arg(long)]
    hom: String,
}

#[derive(Debug, Args)]
struct GroupArg {
    /// Cyclic orders of the group, e.g. `3` or `2,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    group: Vec<u32>,
    /// JSON list of group elements generating the block monoid (default: the whole group).
    #[arg(long)]
    g0: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide x ∈ M.
    Member {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// List the atoms (the first `depth` of them for a family).
    Atoms {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// All factorizations of x.
    Factor {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// The set of lengths L(x).
    Lengths {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// max L(x) / min L(x).
    Elasticity {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Frobenius number of a numerical monoid.
    Frobenius {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Apéry set with respect to n (default: the multiplicity).
    Apery {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Transfer finite / transfer Krull / Krull / C-monoid.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Check n·x ∈ S + M for all truncation elements x ≤ bound.
    CertifyPrimary {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: u64,
        /// Comma-separated elements of S.
        #[arg(long = "s", value_delimiter = ',', required = true)]
        s: Vec<String>,
        #[arg(long, default_value = DEFAULT_BOUND)]
        bound: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Look for a valuation witness that no (n, S) works.
    RefutePrimary {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: u64,
        #[arg(long = "s", value_delimiter = ',', required = true)]
        s: Vec<String>,
    },
    /// Build ⟨q^f(n)·s/p^n⟩ and check its growth inequality.
    BuildConstruction {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Polynomial in n, e.g. `n^2+1`.
        #[arg(long)]
        f: String,
        /// JSON list of generator lists for S_1, S_2, …; the last one repeats.
        #[arg(long)]
        sn: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Check that x ↦ q·x maps the domain into the codomain.
    HomCheck {
        #[command(flatten)]
        hom: HomArg,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// Decide whether x ↦ q·x is a transfer homomorphism.
    TransferCheck {
        #[command(flatten)]
        hom: HomArg,
    },
    /// Compare atoms and length sets across a transfer homomorphism.
    TransferVerify {
        #[command(flatten)]
        hom: HomArg,
        /// Comma-separated sample elements of the domain.
        #[arg(long, value_delimiter = ',', required = true)]
        samples: Vec<String>,
    },
    /// Multipliers q with q·M = M in a window |k| ≤ K.
    AutSearch {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 3)]
        window: u32,
    },
    /// Minimal zero-sum sequences over G₀.
    BlockAtoms {
        #[command(flatten)]
        group: GroupArg,
    },
    /// Factorizations of a zero-sum sequence.
    BlockFactor {
        #[command(flatten)]
        group: GroupArg,
        /// JSON list of group elements.
        #[arg(long)]
        x: String,
    },
    /// Davenport constant of the group.
    Davenport {
        #[arg(long, value_delimiter = ',', required = true)]
        group: Vec<u32>,
    },
    /// Least m with a_{m+1} ∈ ⟨a_1, …, a_m⟩.
    GcdLemma {
        /// Comma-separated positive integers.
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<u64>,
        #[arg(long, default_value_t = 100)]
        cap: usize,
    },
}

/// What a single invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Spec(String),
    Domain(String),
    Unknown(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::AtomicityUnknown(_) | Error::ScanCap { .. } => {
                Failure::Unknown(json!({"verdict": "unknown", "reason": e.to_string()}), e.to_string())
            }
            other => Failure::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_DOMAIN,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let json_mode = cli.json;
    match dispatch(cli.command) {
        Ok((value, code)) => Outcome {
            code,
            stdout: render(&value, json_mode),
            stderr: String::new(),
        },
        Err(Failure::Spec(msg)) => fail(EXIT_SPEC, msg),
        Err(Failure::Domain(msg)) => fail(EXIT_DOMAIN, msg),
        Err(Failure::Unknown(value, msg)) => Outcome {
            code: EXIT_UNKNOWN,
            stdout: render(&value, json_mode),
            stderr: format!("unknown: {msg}\n"),
        },
    }
}

fn fail(code: i32, msg: String) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn render(value: &Value, json_mode: bool) -> String {
    if json_mode {
        return format!("{value}\n");
    }
    let Value::Object(map) = value else {
        return format!("{}\n", plain(value));
    };
    let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in map {
        let _ = writeln!(out, "{k:<width$}  {}", plain(v));
    }
    out
}

fn plain(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("outputs serialize to JSON")
}

fn object(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

/// Adds the depth echo to family answers so results can be reproduced.
fn with_depth(mut value: Value, spec: &PuiseuxSpec, depth: usize) -> Value {
    if !spec.is_finite() {
        if let Value::Object(map) = &mut value {
            map.insert("depth".into(), json!(depth));
        }
    }
    value
}

fn read_json<T: DeserializeOwned>(arg: &str, what: &str) -> CliResult<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Failure::Spec(format!("cannot read {what} file '{arg}': {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| {
        let mut msg = format!("malformed {what}: {e}");
        if msg.contains("floating point") {
            msg.push_str(" (floats are not accepted; write rationals as quoted strings such as \"3/2\")");
        }
        Failure::Spec(msg)
    })
}

fn rational(arg: &str) -> CliResult<Rational> {
    arg.parse().map_err(|e: Error| Failure::Domain(e.to_string()))
}

fn rationals(args: &[String]) -> CliResult<Vec<Rational>> {
    args.iter().map(|a| rational(a)).collect()
}

/// The finitely generated monoid a factorization query runs in: the spec
/// itself, or its depth-`depth` truncation for a family.
fn finite_monoid(spec: &PuiseuxSpec, depth: usize) -> CliResult<FiniteMonoid> {
    let truncated = spec.truncate(depth)?;
    match truncated {
        PuiseuxSpec::Finite(gens) => Ok(FiniteMonoid::new(&gens)?),
        _ => Err(Failure::Domain("truncation did not produce a finite spec".into())),
    }
}

fn numerical(spec: &PuiseuxSpec) -> CliResult<NumericalMonoid> {
    let PuiseuxSpec::Finite(gens) = spec else {
        return Err(Failure::Domain(
            "this query needs a numerical monoid (integer generators)".into(),
        ));
    };
    let ints = gens
        .iter()
        .map(|g| g.to_u64())
        .collect::<Option<Vec<u64>>>()
        .ok_or_else(|| Failure::Domain("this query needs integer generators".into()))?;
    Ok(NumericalMonoid::new(&ints)?)
}

fn group_and_support(arg: &GroupArg) -> CliResult<(FiniteAbelianGroup, Vec<GroupElement>)> {
    let group = FiniteAbelianGroup::new(arg.group.clone())?;
    let g0 = match &arg.g0 {
        Some(text) => read_json::<Vec<GroupElement>>(text, "G0 list").map_err(|f| match f {
            Failure::Spec(m) => Failure::Domain(m),
            other => other,
        })?,
        None => group.elements(),
    };
    Ok((group, g0))
}

fn dispatch(command: Command) -> CliResult<(Value, i32)> {
    let ok = |v: Value| Ok((v, EXIT_OK));
    match command {
        Command::Member { spec, x, depth } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let x = rational(&x)?;
            let verdict = m.member(&x, depth.depth)?;
            let mut value = object([("x", to_value(&x))]);
            if let (Value::Object(out), Value::Object(v)) = (&mut value, to_value(&verdict)) {
                out.extend(v);
            }
            let value = with_depth(value, &m, depth.depth);
            match verdict {
                Membership::Unknown { .. } => Err(Failure::Unknown(value, format!("membership of {x} undecided"))),
                _ => ok(value),
            }
        }
        Command::Atoms { spec, depth } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let atoms = m.atoms_up_to(depth.depth)?;
            ok(with_depth(object([("atoms", to_value(&atoms))]), &m, depth.depth))
        }
        Command::Factor { spec, x, depth } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let x = rational(&x)?;
            let fm = finite_monoid(&m, depth.depth)?;
            let fs = factorizations(&fm, &x)?;
            ok(with_depth(
                object([
                    ("x", to_value(&x)),
                    ("count", json!(fs.len())),
                    ("factorizations", to_value(&fs)),
                ]),
                &m,
                depth.depth,
            ))
        }
        Command::Lengths { spec, x, depth } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let x = rational(&x)?;
            let fm = finite_monoid(&m, depth.depth)?;
            let lengths = length_set(&fm, &x)?;
            ok(with_depth(object([("lengths", to_value(&lengths))]), &m, depth.depth))
        }
        Command::Elasticity { spec, x, depth } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let x = rational(&x)?;
            let fm = finite_monoid(&m, depth.depth)?;
            let rho = elasticity(&fm, &x)?;
            ok(with_depth(object([("elasticity", to_value(&rho))]), &m, depth.depth))
        }
        Command::Frobenius { spec } => {
            let nm = numerical(&read_json(&spec.spec, "spec")?)?;
            ok(object([("frobenius", json!(nm.frobenius()))]))
        }
        Command::Apery { spec, n } => {
            let nm = numerical(&read_json(&spec.spec, "spec")?)?;
            let n = n.unwrap_or_else(|| nm.multiplicity());
            let set = nm.apery_set(n)?;
            ok(object([("n", json!(n)), ("apery", to_value(&set))]))
        }
        Command::Classify { spec } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let c = m.classify()?;
            ok(object([
                ("transferFinite", json!(c.transfer_finite)),
                ("transferKrull", json!(c.transfer_krull)),
                ("krull", json!(c.krull)),
                ("cMonoid", json!(c.c_monoid)),
            ]))
        }
        Command::CertifyPrimary {
            spec,
            n,
            s,
            bound,
            depth,
        } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let s = rationals(&s)?;
            let bound = rational(&bound)?;
            let outcome = primary::verify_finitary_certificate(&m, n, &s, &bound, depth.depth)?;
            let value = to_value(&outcome);
            match &outcome {
                CertificateOutcome::Failed(w) if !w.conclusive => {
                    Err(Failure::Unknown(value, format!("membership undecided at x = {}", w.x)))
                }
                _ => ok(value),
            }
        }
        Command::RefutePrimary { spec, n, s } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            let s = rationals(&s)?;
            ok(to_value(&primary::refute_strongly_primary(&m, n, &s)?))
        }
        Command::BuildConstruction { p, q, f, sn, depth } => {
            let f: Polynomial = f.parse().map_err(|e: Error| Failure::Domain(e.to_string()))?;
            let lists: Vec<Vec<u64>> = serde_json::from_str(&sn)
                .map_err(|e| Failure::Domain(format!("--sn must be a JSON list of integer lists: {e}")))?;
            let chain = lists
                .iter()
                .map(|gens| NumericalMonoid::new(gens))
                .collect::<Result<Vec<_>, Error>>()?;
            let built = primary::build_primary_construction(p, q, f, chain, depth.depth as u64)?;
            ok(object([
                ("spec", to_value(&built.spec)),
                ("depth", json!(depth.depth)),
                ("report", to_value(&built.report)),
            ]))
        }
        Command::HomCheck { hom, depth } => {
            let h: HomSpec = read_json(&hom.hom, "hom spec")?;
            let verdict = homs::check_hom(&h.q, &h.domain, &h.codomain, depth.depth)?;
            let value = to_value(&verdict);
            match verdict {
                HomCheck::Inconclusive { ref generator, .. } => {
                    Err(Failure::Unknown(value, format!("image of {generator} undecided")))
                }
                _ => ok(value),
            }
        }
        Command::TransferCheck { hom } => {
            let h: HomSpec = read_json(&hom.hom, "hom spec")?;
            ok(to_value(&homs::is_transfer(&h.q, &h.domain, &h.codomain)?))
        }
        Command::TransferVerify { hom, samples } => {
            let h: HomSpec = read_json(&hom.hom, "hom spec")?;
            let samples = rationals(&samples)?;
            ok(to_value(&homs::verify_transfer_properties(
                &h.q,
                &h.domain,
                &h.codomain,
                &samples,
            )?))
        }
        Command::AutSearch { spec, window } => {
            let m: PuiseuxSpec = read_json(&spec.spec, "spec")?;
            ok(to_value(&homs::automorphism_search(&m, window)?))
        }
        Command::BlockAtoms { group } => {
            let (g, g0) = group_and_support(&group)?;
            let atoms = blocks::block_atoms(&g, &g0)?;
            ok(object([
                ("group", json!(g.to_string())),
                ("count", json!(atoms.len())),
                ("atoms", to_value(&atoms)),
            ]))
        }
        Command::BlockFactor { group, x } => {
            let (g, g0) = group_and_support(&group)?;
            let seq: GSequence = serde_json::from_str(&x)
                .map_err(|e| Failure::Domain(format!("--x must be a JSON list of group elements: {e}")))?;
            let fs = blocks::block_factorizations(&g, &g0, &seq)?;
            let lengths = blocks::block_length_set(&g, &g0, &seq)?;
            ok(object([
                ("count", json!(fs.len())),
                ("lengths", to_value(&lengths)),
                ("factorizations", to_value(&fs)),
            ]))
        }
        Command::Davenport { group } => {
            let g = FiniteAbelianGroup::new(group)?;
            ok(object([
                ("group", json!(g.to_string())),
                ("davenport", json!(blocks::davenport(&g))),
            ]))
        }
        Command::GcdLemma { seq, cap } => {
            let m = blocks::gcd_stabilization(seq.iter().copied(), cap)?;
            ok(object([("m", json!(m)), ("next", json!(seq[m]))]))
        }
    }
}
