//! Argument parsing and report rendering for the `sylow` binary.
//!
//! [`run`] never prints; it returns the exit code and both output streams so
//! the binary and the tests share one code path.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sylow_core::corpus;
use sylow_core::engine::{self, Verdict};
use sylow_core::gallery;
use sylow_core::oracle::{self, PnOracle, DEFAULT_CAP};
use sylow_core::partition::{partition_report, PartitionSpec};
use sylow_core::perm::Perm;
use sylow_core::words::parse_generators;
use sylow_core::wreath::Params;

pub const SCHEMA: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "sylow",
    version,
    about = "Sylow p-subgroups of symmetric groups and complements of their normal subgroups"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Element cap for brute-force group enumeration.
    #[arg(long, env = "SYLOW_CAP", default_value_t = DEFAULT_CAP, global = true)]
    cap: usize,
    /// Result cap for centralizer searches in the symmetric group.
    #[arg(long, env = "SYLOW_SYM_CAP", default_value_t = 1 << 20, global = true)]
    sym_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// The prime p.
    #[arg(long)]
    p: u32,
    /// Tower height n; the group acts on p^n points.
    #[arg(long)]
    n: usize,
    /// Primitive root used by the scaling maps (default: the smallest one).
    #[arg(long)]
    r: Option<u32>,
}

impl GroupArgs {
    fn params(&self) -> Result<Params, CmdError> {
        match self.r {
            Some(r) => Params::with_root(self.p, self.n, r),
            None => Params::new(self.p, self.n),
        }
        .map_err(usage)
    }
}

#[derive(Debug, Args)]
struct SmallGroupArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: usize,
}

impl SmallGroupArgs {
    fn params(&self) -> Result<Params, CmdError> {
        Params::new(self.p, self.n).map_err(usage)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the σ, η and ρ generators and the basis of the top base group.
    Gens(GroupArgs),
    /// Decide whether the normal closure of some generators has a complement.
    Decide {
        #[command(flatten)]
        group: GroupArgs,
        /// Generators separated by ';', in cycle notation or as words such
        /// as "s1 * (s1 ^ s0)".
        #[arg(long)]
        gens: String,
    },
    /// Normality and complements of a partition subgroup.
    Partition {
        #[command(flatten)]
        group: SmallGroupArgs,
        /// Comma-separated indices i_0,…,i_{n-1}.
        #[arg(long)]
        indices: String,
    },
    /// Brute-force checks at small sizes.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// The two groups without the Maschke property.
    #[command(subcommand)]
    Gallery(GalleryCmd),
    /// Replay the recorded worked examples.
    Corpus {
        /// Replay this corpus file instead of the built-in one.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Engine against exhaustive search on every normal subgroup.
    Crosscheck {
        #[command(flatten)]
        group: SmallGroupArgs,
        /// Seed for choosing generating sets.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Largest abelian subgroups.
    AbelianMax {
        #[command(flatten)]
        group: SmallGroupArgs,
    },
    /// Centralizers of A^{n-1} and P_n in the symmetric group.
    Centralizer {
        #[command(flatten)]
        group: SmallGroupArgs,
    },
    /// Lower central series of the subgroup B for p = 2.
    BSeries {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GalleryCmd {
    Q8c4,
    Mod9,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CmdError {
    Usage(String),
}

fn usage(e: impl std::fmt::Display) -> CmdError {
    CmdError::Usage(e.to_string())
}

fn oracle_err(e: oracle::OracleError) -> CmdError {
    match e {
        oracle::OracleError::CapExceeded { .. } => {
            CmdError::Usage(format!("{e}; raise it with --cap or SYLOW_CAP"))
        }
        e => usage(e),
    }
}

struct Report {
    command: &'static str,
    ok: bool,
    text: String,
    json: Value,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut value = report.json;
                    if let Value::Object(map) = &mut value {
                        map.insert("schema".into(), json!(SCHEMA));
                        map.insert("command".into(), json!(report.command));
                        map.insert("ok".into(), json!(report.ok));
                    }
                    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
                }
            };
            Outcome {
                code: if report.ok { EXIT_OK } else { EXIT_FAILED },
                stdout,
                stderr: String::new(),
            }
        }
        Err(CmdError::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CmdError> {
    match &cli.command {
        Command::Gens(g) => cmd_gens(&g.params()?),
        Command::Decide { group, gens } => cmd_decide(&group.params()?, gens),
        Command::Partition { group, indices } => cmd_partition(&group.params()?, indices),
        Command::Oracle(OracleCmd::Crosscheck { group, seed }) => {
            cmd_crosscheck(&group.params()?, cli.cap, *seed)
        }
        Command::Oracle(OracleCmd::AbelianMax { group }) => {
            cmd_abelian_max(&group.params()?, cli.cap)
        }
        Command::Oracle(OracleCmd::Centralizer { group }) => {
            cmd_centralizer(&group.params()?, cli.cap.max(cli.sym_cap))
        }
        Command::Oracle(OracleCmd::BSeries { n }) => cmd_b_series(*n, cli.cap),
        Command::Gallery(GalleryCmd::Q8c4) => cmd_q8c4(),
        Command::Gallery(GalleryCmd::Mod9) => cmd_mod9(),
        Command::Corpus { file } => cmd_corpus(file.as_deref()),
    }
}

fn named(word: String, perm: &Perm) -> Value {
    json!({ "word": word, "cycles": perm.format_cycles() })
}

/// `s{n-1} ^ (s0 * s1 * s1)` for the block with digits `(1, 2)`.
fn top_base_word(params: &Params, b: usize) -> String {
    let k = params.n() - 1;
    let mut factors = Vec::new();
    for level in 0..k {
        let digit = (b / params.power(k - 1 - level)) % params.p() as usize;
        factors.extend(std::iter::repeat_n(format!("s{level}"), digit));
    }
    match factors.len() {
        0 => format!("s{k}"),
        1 => format!("s{k} ^ {}", factors[0]),
        _ => format!("s{k} ^ ({})", factors.join(" * ")),
    }
}

fn cmd_gens(params: &Params) -> Result<Report, CmdError> {
    let mut text = format!(
        "P_{} for p = {} (degree {}, r = {})\n",
        params.n(),
        params.p(),
        params.degree(),
        params.r()
    );
    let mut sigma = Vec::new();
    let mut eta = Vec::new();
    let mut rho = Vec::new();
    for (i, s) in params.sigmas().iter().enumerate() {
        writeln!(text, "s{i} = {}", s.format_cycles()).unwrap();
        sigma.push(named(format!("s{i}"), s));
    }
    for (i, e) in params.etas().iter().enumerate() {
        writeln!(text, "e{i} = {}", e.format_cycles()).unwrap();
        eta.push(named(format!("e{i}"), e));
    }
    for i in 1..params.n() {
        let r = params.rho(i).map_err(usage)?;
        writeln!(text, "r{i} = {}", r.format_cycles()).unwrap();
        rho.push(named(format!("r{i}"), &r));
    }
    writeln!(text, "A^{} basis", params.n() - 1).unwrap();
    let mut top = Vec::new();
    for (b, x) in params.top_base_basis().iter().enumerate() {
        let word = top_base_word(params, b);
        writeln!(text, "{word} = {}", x.format_cycles()).unwrap();
        top.push(named(word, x));
    }
    Ok(Report {
        command: "gens",
        ok: true,
        text,
        json: json!({
            "p": params.p(),
            "n": params.n(),
            "r": params.r(),
            "degree": params.degree(),
            "sigma": sigma,
            "eta": eta,
            "rho": rho,
            "top_base": top,
        }),
    })
}

fn cmd_decide(params: &Params, gens: &str) -> Result<Report, CmdError> {
    let perms = parse_generators(gens, params).map_err(usage)?;
    let h = engine::closure_handle(params, &perms).map_err(usage)?;
    let decision = engine::decide(&h).map_err(usage)?;
    let eta_moves: Vec<usize> = engine::h_orbit_of_n(&h)
        .map_err(usage)?
        .iter()
        .filter(|e| !e.equals_n)
        .map(|e| e.k)
        .collect();
    let pn = params.sylow_exponent(params.n());
    let p = params.p();
    let mut text = format!(
        "depth j = {}, |N| = {p}^{}, dim N/K = {}\n",
        h.depth(),
        h.order_exponent(),
        h.nbar().dim()
    );
    let mut ok = true;
    let json = match &decision.verdict {
        Verdict::HasComplement {
            case,
            z,
            generators,
        } => {
            let report = engine::verify_complement(&h, &decision).map_err(usage)?;
            ok = report.passed();
            let c = decision.complement_exponent(params).expect("complement");
            let case_name = serde_json::to_value(case).expect("serializable");
            writeln!(
                text,
                "verdict: HasComplement ({}), Z = {:?}",
                case_name.as_str().unwrap_or_default(),
                z
            )
            .unwrap();
            writeln!(
                text,
                "complement: {}, |C| = {p}^{c}, |P_n| = {p}^{pn}",
                decision.describe()
            )
            .unwrap();
            writeln!(
                text,
                "checks: order {}, intersection {}, H-invariance {}",
                pass(report.order.ok),
                pass(report.intersection.ok),
                pass(report.h_invariance.ok)
            )
            .unwrap();
            for g in generators {
                writeln!(text, "{} = {}", g.label, g.perm.format_cycles()).unwrap();
            }
            json!({
                "verdict": "HasComplement",
                "case": case,
                "Z": z,
                "reason": null,
                "witness": null,
                "complement": decision.describe(),
                "complement_generators": generators.iter().map(|g| json!({
                    "label": g.label,
                    "cycles": g.perm.format_cycles(),
                })).collect::<Vec<_>>(),
                "orders": { "N": h.order_exponent(), "C": c, "Pn": pn },
                "checks": report,
            })
        }
        Verdict::NoComplement { reason, witness } => {
            writeln!(text, "verdict: NoComplement ({reason:?})").unwrap();
            writeln!(
                text,
                "head dim {}, socle dim {}, socle coordinates {:?}",
                witness.head_dim,
                witness.socle_dim,
                witness.socle_coordinates.basis()
            )
            .unwrap();
            json!({
                "verdict": "NoComplement",
                "case": null,
                "Z": null,
                "reason": reason,
                "witness": witness,
                "complement": null,
                "complement_generators": [],
                "orders": { "N": h.order_exponent(), "C": null, "Pn": pn },
                "checks": null,
            })
        }
    };
    if !eta_moves.is_empty() {
        writeln!(text, "not H-invariant: moved by η_k for k in {eta_moves:?}").unwrap();
    }
    let mut json = json;
    let map = json.as_object_mut().expect("object");
    map.insert("p".into(), json!(p));
    map.insert("n".into(), json!(params.n()));
    map.insert("r".into(), json!(params.r()));
    map.insert("depth".into(), json!(h.depth()));
    map.insert("nbar_dim".into(), json!(h.nbar().dim()));
    map.insert(
        "generators".into(),
        json!(perms.iter().map(Perm::format_cycles).collect::<Vec<_>>()),
    );
    map.insert("eta_moves".into(), json!(eta_moves));
    Ok(Report {
        command: "decide",
        ok,
        text,
        json,
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn cmd_partition(params: &Params, indices: &str) -> Result<Report, CmdError> {
    let spec = PartitionSpec::parse(params, indices).map_err(usage)?;
    let report = partition_report(params, &spec).map_err(usage)?;
    let mut text = format!(
        "indices {} : depth {}, normal {}\n",
        spec.format(),
        report.depth,
        report.normal
    );
    if let (Some(closed), Some(engine_says)) = (report.has_complement, report.engine_has_complement)
    {
        writeln!(
            text,
            "has complement: {closed} (closed form), {engine_says} (engine)"
        )
        .unwrap();
    }
    Ok(Report {
        command: "partition",
        ok: report.engine_crosscheck != Some(false),
        text,
        json: serde_json::to_value(&report).expect("serializable"),
    })
}

fn cmd_crosscheck(params: &Params, cap: usize, seed: u64) -> Result<Report, CmdError> {
    let report = oracle::crosscheck(params, cap, seed).map_err(oracle_err)?;
    let pn = PnOracle::new(params, cap).map_err(oracle_err)?;
    let derived = (0..params.n())
        .map(|j| oracle::derived_t_check(&pn, j))
        .collect::<Result<Vec<_>, _>>()
        .map_err(oracle_err)?;
    let derived_ok = derived.iter().all(|d| d.matches);
    let ok = report.equivalence_holds() && report.invariants_hold() && derived_ok;
    let mut text = format!(
        "P_{} for p = {}: {} normal subgroups, {} with a complement\n",
        params.n(),
        params.p(),
        report.records.len(),
        report.complemented()
    );
    writeln!(
        text,
        "engine agrees: {}, invariants: {}, derived T_j: {}",
        pass(report.equivalence_holds()),
        pass(report.invariants_hold()),
        pass(derived_ok)
    )
    .unwrap();
    for r in report.records.iter().filter(|r| !r.engine_agrees()) {
        writeln!(text, "mismatch: {r:?}").unwrap();
    }
    let mut json = serde_json::to_value(&report).expect("serializable");
    let map = json.as_object_mut().expect("object");
    map.insert("normal_subgroups".into(), json!(report.records.len()));
    map.insert("complemented".into(), json!(report.complemented()));
    map.insert(
        "equivalence_holds".into(),
        json!(report.equivalence_holds()),
    );
    map.insert("invariants_hold".into(), json!(report.invariants_hold()));
    map.insert(
        "derived_t".into(),
        serde_json::to_value(&derived).expect("serializable"),
    );
    Ok(Report {
        command: "oracle crosscheck",
        ok,
        text,
        json,
    })
}

fn cmd_abelian_max(params: &Params, cap: usize) -> Result<Report, CmdError> {
    let s = oracle::max_abelian_stats(params, cap).map_err(oracle_err)?;
    let text = format!(
        "largest abelian order {}^{}, attained by {} subgroups ({} normal)\n",
        s.p, s.d_exponent, s.count, s.normal_count
    );
    Ok(Report {
        command: "oracle abelian-max",
        ok: true,
        text,
        json: serde_json::to_value(&s).expect("serializable"),
    })
}

fn cmd_centralizer(params: &Params, cap: usize) -> Result<Report, CmdError> {
    let c = oracle::centralizer_report(params, cap).map_err(oracle_err)?;
    let text = format!(
        "degree {}: |A| = {}, |C(A)| = {} ({}), |C(P_n)| = {} ({})\n",
        c.degree,
        c.a_order,
        c.a_centralizer_order,
        if c.a_self_centralizing {
            "self-centralizing"
        } else {
            "NOT self-centralizing"
        },
        c.pn_centralizer_order,
        if c.pn_self_centralizing {
            "self-centralizing"
        } else {
            "NOT self-centralizing"
        },
    );
    Ok(Report {
        command: "oracle centralizer",
        ok: c.a_self_centralizing && c.pn_self_centralizing,
        text,
        json: serde_json::to_value(&c).expect("serializable"),
    })
}

fn cmd_b_series(n: usize, cap: usize) -> Result<Report, CmdError> {
    let b = oracle::uniserial_series_of_b(n, cap).map_err(oracle_err)?;
    let text = format!(
        "|B| = 2^{}, series length {}, step indices {:?}\n",
        b.order_exponent, b.length, b.step_indices
    );
    Ok(Report {
        command: "oracle b-series",
        ok: b.abelian && b.normal && b.step_indices.iter().all(|&i| i == 2),
        text,
        json: serde_json::to_value(&b).expect("serializable"),
    })
}

fn cmd_q8c4() -> Result<Report, CmdError> {
    let r = gallery::gallery_q8c4().map_err(usage)?;
    let text = format!(
        "|V| = {}, |N| = {}, {} complements generated by {}, φ-orbit type {:?}, {} invariant\n",
        r.order,
        r.n_order,
        r.complement_count,
        r.complement_generators.join(" "),
        r.orbit_type,
        r.invariant_complements
    );
    Ok(Report {
        command: "gallery q8c4",
        ok: r.maschke_fails,
        text,
        json: serde_json::to_value(&r).expect("serializable"),
    })
}

fn cmd_mod9() -> Result<Report, CmdError> {
    let r = gallery::gallery_mod9().map_err(usage)?;
    let text = format!(
        "|V| = {}, |N| = {}, {} complements, {} α-invariant\n",
        r.order, r.n_order, r.complement_count, r.alpha_invariant_complements
    );
    Ok(Report {
        command: "gallery mod9",
        ok: r.maschke_fails,
        text,
        json: serde_json::to_value(&r).expect("serializable"),
    })
}

fn cmd_corpus(file: Option<&std::path::Path>) -> Result<Report, CmdError> {
    let corpus = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            corpus::load(&text).map_err(usage)?
        }
        None => corpus::builtin(),
    };
    let outcomes = corpus::replay_all(&corpus);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut text = String::new();
    for o in &outcomes {
        writeln!(
            text,
            "{} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name
        )
        .unwrap();
        for f in &o.failures {
            writeln!(text, "    {f}").unwrap();
        }
    }
    writeln!(
        text,
        "{} of {} passed",
        outcomes.len() - failed,
        outcomes.len()
    )
    .unwrap();
    Ok(Report {
        command: "corpus",
        ok: failed == 0,
        text,
        json: json!({
            "entries": outcomes,
            "passed": outcomes.len() - failed,
            "failed": failed,
        }),
    })
}
