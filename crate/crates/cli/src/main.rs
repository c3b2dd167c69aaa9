//! `sumset-lab`: sumsets, bounds, families and exhaustive certificates from
//! the command line.
//!
//! Exit codes: 0 verified (or plain success), 1 refuted, 2 budget exhausted,
//! 3 usage error.

// Stdout writes that tolerate a closed pipe (`sumset-lab ... | head`).
macro_rules! print {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}
macro_rules! println {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use sumset_core::families::{all_members, members, FamilyKind, FamilySpec};
use sumset_core::sets::{normalize, IntegerSet, NormalizedSet};
use sumset_core::verify::{
    classify_extremal_with, sweep, sweep_lemmas, verify_conjecture, verify_theorem1, verify_theorem2,
    verify_theorem3, with_jobs, Certificate, Constraint, EnumerationQuery, Outcome, VerifyOptions,
    DEFAULT_BUDGET,
};

use config::Config;

const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sumset-lab", version, about = "Sumsets, restricted sumsets and exhaustive certificates")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Node budget for enumeration-backed commands.
    #[arg(long, global = true, value_name = "NODES")]
    budget: Option<u64>,

    /// key=value defaults file (also read from $SUMSET_LAB_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every bound and structure statement on one set.
    Compute {
        /// Set literal such as {0,1,4,5,6,9}; normalized before evaluation.
        set: String,
    },
    /// Exceptional set, witnesses, decomposition and split for one set.
    Analyze { set: String },
    /// List members of the extremal families.
    #[command(group(ArgGroup::new("which").required(true).args(["kind", "all"])))]
    Families {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        theta: Option<u32>,
    },
    /// Stream every normalized set matching a query.
    Enumerate {
        #[arg(long)]
        k: u32,
        /// Maximum element, exact (`9`) or an inclusive range (`5..9`).
        #[arg(long)]
        l: String,
        /// Named predicate; repeatable. See `Constraint` names.
        #[arg(long = "constraint", value_name = "C")]
        constraints: Vec<String>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Every set with cardinality k, maximum l and |2^A| = 3k-7.
    Classify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run an exhaustive verification and emit a certificate.
    Certify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        k_max: u32,
        /// Smallest k swept (defaults to the claim's own minimum).
        #[arg(long)]
        k_min: Option<u32>,
        /// Cap on the maximum element (theorems 1, 2 and the conjecture).
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Conjecture,
    Lemmas,
}

impl Theorem {
    fn label(self) -> &'static str {
        match self {
            Theorem::One => "theorem1",
            Theorem::Two => "theorem2",
            Theorem::Three => "theorem3",
            Theorem::Conjecture => "conjecture",
            Theorem::Lemmas => "lemmas",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = Config::discover(cli.config.as_deref())?;
    let budget = cli.budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        bail!("--budget must be positive");
    }
    let json = cli.json;
    match cli.command {
        Command::Compute { set } => compute(&set, json),
        Command::Analyze { set } => analyze(&set, json),
        Command::Families { kind, all, k, theta } => families(kind.as_deref(), all, k, theta, json),
        Command::Enumerate { k, l, constraints, jobs } => {
            enumerate(k, &l, &constraints, budget, jobs.or(cfg.jobs), json)
        }
        Command::Classify { k, l, jobs } => classify(k, l, budget, jobs.or(cfg.jobs), json),
        Command::Certify { theorem, k_max, k_min, cap, jobs, out } => {
            let opts = VerifyOptions { budget, jobs: jobs.or(cfg.jobs) };
            certify(theorem, k_min, k_max, cap, &cfg, &opts, out, json)
        }
    }
}

fn parse_set(literal: &str) -> Result<IntegerSet> {
    literal.parse().with_context(|| format!("parsing `{literal}`"))
}

fn normalized(literal: &str) -> Result<(NormalizedSet, Option<String>)> {
    let raw = parse_set(literal)?;
    let n = normalize(&raw)?;
    let note = (n.offset != 0 || n.scale != 1)
        .then(|| format!("normalized from {raw} (offset {}, scale {})", n.offset, n.scale));
    Ok((n.set, note))
}

fn compute(literal: &str, json: bool) -> Result<u8> {
    let (a, note) = normalized(literal)?;
    let report = sumset_core::bounds::evaluate_bounds(&a)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&render::report_json(&report, note.as_deref()))?);
    } else {
        print!("{}", render::report_text(&report, note.as_deref()));
    }
    Ok(0)
}

fn analyze(literal: &str, json: bool) -> Result<u8> {
    let (a, note) = normalized(literal)?;
    let analysis = render::Analysis::of(&a)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&analysis.to_json(note.as_deref()))?);
    } else {
        print!("{}", analysis.to_text(note.as_deref()));
    }
    Ok(0)
}

fn families(kind: Option<&str>, all: bool, k: u32, theta: Option<u32>, json: bool) -> Result<u8> {
    let list: Vec<(FamilySpec, NormalizedSet)> = if all {
        if theta.is_some() {
            bail!("--theta applies to --kind only");
        }
        all_members(k)
    } else {
        let kind: FamilyKind = kind.expect("clap enforces one of --kind/--all").parse()?;
        match theta {
            Some(t) if kind.takes_theta() => {
                let spec = FamilySpec { kind, k, theta: Some(t), sporadic_index: None };
                vec![(spec, spec.generate()?)]
            }
            Some(_) => bail!("{kind} takes no theta parameter"),
            None => members(kind, k),
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&render::families_json(&list))?);
    } else {
        print!("{}", render::families_text(&list));
        if list.is_empty() {
            eprintln!("no members for these parameters");
        }
    }
    Ok(0)
}

fn parse_l(l: &str) -> Result<(u32, u32)> {
    let bad = || anyhow!("--l expects N or LO..HI, got `{l}`");
    match l.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
        }
        None => {
            let v = l.trim().parse().map_err(|_| bad())?;
            Ok((v, v))
        }
    }
}

fn enumerate(k: u32, l: &str, constraints: &[String], budget: u64, jobs: Option<usize>, json: bool) -> Result<u8> {
    let (lo, hi) = parse_l(l)?;
    let mut q = EnumerationQuery::new(k, lo, hi).with_budget(budget);
    for c in constraints {
        q = q.with(c.parse::<Constraint>()?);
    }
    let sw = with_jobs(jobs, || {
        sweep(&q, Vec::new, |acc: &mut Vec<String>, s| acc.push(render::literal(s)))
    })?;
    let sets: Vec<String> = sw.shards.into_iter().flatten().collect();
    if json {
        let v = serde_json::json!({
            "query": q,
            "sets": sets,
            "count": sw.yielded,
            "nodes": sw.nodes,
            "truncated": sw.exhausted,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        for s in &sets {
            writeln!(out, "{s}")?;
        }
        if sw.exhausted {
            writeln!(out, "# truncated: budget of {budget} nodes exhausted after {} sets", sets.len())?;
        }
    }
    Ok(if sw.exhausted { Outcome::BudgetExhausted.exit_code() as u8 } else { 0 })
}

fn classify(k: u32, l: u32, budget: u64, jobs: Option<usize>, json: bool) -> Result<u8> {
    let (sets, exhausted) = with_jobs(jobs, || classify_extremal_with(k, l, budget))?;
    let labelled = render::label_members(k, &sets);
    if json {
        let v = serde_json::json!({
            "k": k,
            "l": l,
            "target": 3 * k - 7,
            "sets": labelled.iter().map(|(s, labels)| serde_json::json!({"set": s.to_string(), "families": labels})).collect::<Vec<_>>(),
            "truncated": exhausted,
        });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        for (s, labels) in &labelled {
            if labels.is_empty() {
                println!("{s}");
            } else {
                println!("{s}  {}", labels.join(", "));
            }
        }
        println!("# {} sets with |2^A| = {}", sets.len(), 3 * k - 7);
        if exhausted {
            println!("# truncated: budget of {budget} nodes exhausted");
        }
    }
    Ok(if exhausted { Outcome::BudgetExhausted.exit_code() as u8 } else { 0 })
}

#[allow(clippy::too_many_arguments)]
fn certify(
    theorem: Theorem,
    k_min: Option<u32>,
    k_max: u32,
    cap: Option<u32>,
    cfg: &Config,
    opts: &VerifyOptions,
    out: Option<PathBuf>,
    json: bool,
) -> Result<u8> {
    let cert: Certificate = match theorem {
        Theorem::One => verify_theorem1(k_min.unwrap_or(3), k_max, cap.or(cfg.cap), opts)?,
        Theorem::Two => verify_theorem2(k_min.unwrap_or(3), k_max, cap.or(cfg.cap), opts)?,
        Theorem::Three => {
            if cap.is_some() {
                bail!("--cap does not apply to theorem 3 (the maximum is fixed at 2k-3)");
            }
            verify_theorem3(k_min.unwrap_or(4), k_max, opts)?
        }
        Theorem::Conjecture => {
            if k_min.is_some() {
                bail!("the conjecture sweep always starts at k = 3");
            }
            let l_max = cap.or(cfg.conjecture_cap).unwrap_or(2 * k_max + 4);
            verify_conjecture(k_max, l_max, opts)?
        }
        Theorem::Lemmas => {
            if cap.is_some() {
                bail!("--cap does not apply to the lemma sweep");
            }
            sweep_lemmas(k_min.unwrap_or(3), k_max, opts)?
        }
    };
    let target = out.or_else(|| {
        cfg.out_dir
            .as_ref()
            .map(|d| d.join(format!("certificate-{}-k{}.json", theorem.label(), k_max)))
    });
    let text = cert.to_json();
    match &target {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            if json {
                print!("{text}");
            } else {
                print!("{}", render::certificate_summary(&cert));
                println!("certificate written to {}", path.display());
            }
        }
        None => {
            print!("{text}");
            if !json {
                eprint!("{}", render::certificate_summary(&cert));
            }
        }
    }
    Ok(cert.outcome.exit_code() as u8)
}
