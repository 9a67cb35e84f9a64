//! Command-line front end. Exit status: 0 when every check passes, 1 when a
//! property violation is found, 2 on input errors.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::collapse::{self, Mode};
use crate::coxeter::{CoxeterSystem, Word};
use crate::error::Error;
use crate::exec::Exec;
use crate::hecke::{self, XExpression};
use crate::poset::{self, check_cw_conditions_with};
use crate::tnn::{self, Sampler, Q};

#[derive(Parser, Debug)]
#[command(name = "tpcells", version, about = "Coxeter word calculus, subword-simplex collapses and CW-poset checks")]
pub struct Cli {
    /// Run batch loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Family letter A-G.
    #[arg(long = "type", value_name = "LETTER")]
    pub family: Option<char>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Plain-text Coxeter matrix: rank on the first line, then the rows.
    #[arg(long, value_name = "PATH")]
    pub coxeter_file: Option<PathBuf>,
}

impl SystemArgs {
    fn build(&self) -> anyhow::Result<CoxeterSystem> {
        match (&self.coxeter_file, self.family, self.rank) {
            (Some(path), None, None) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(CoxeterSystem::parse_matrix_text(&text)?)
            }
            (None, Some(f), Some(r)) => Ok(CoxeterSystem::from_type(f, r)?),
            _ => bail!("give either --type and --rank, or --coxeter-file"),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Full,
    CommutationOnly,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::CommutationOnly => Mode::CommutationOnly,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a Coxeter system and print its basic data.
    Build {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Evaluate a word and test reducedness.
    Word {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        word: String,
    },
    /// Demazure product, omittable pairs, deletion pairs and braid counts.
    Hecke {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        word: String,
        /// Support positions (1-based, comma separated); defaults to all.
        #[arg(long)]
        support: Option<String>,
    },
    /// Run the collapsing procedure and dump its trace.
    Collapse {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        /// Check the trace conditions and compare with the Bruhat interval.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value = "trace.json")]
        out: PathBuf,
    },
    /// Bruhat interval extraction, CW-condition reports and DOT export.
    Poset {
        #[command(flatten)]
        system: SystemArgs,
        /// Lower end as a word; defaults to the identity.
        #[arg(long, default_value = "")]
        lower: String,
        /// Upper end as a word; defaults to the longest element.
        #[arg(long)]
        upper: Option<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate the matrix product at parameters, or verify collapse fibers.
    Tnn {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        word: String,
        /// Rational parameters such as 1,1/2,3.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        verify_fibers: bool,
    },
    /// Full verification campaign over S3 and S4, written to a directory.
    Campaign {
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Violation,
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn parse_word(sys: &CoxeterSystem, s: &str) -> anyhow::Result<Word> {
    let w: Word = s.parse()?;
    sys.check_word(&w)?;
    Ok(w)
}

fn print_json<T: Serialize>(v: &T) {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn run(cli: Cli) -> ExitCode {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let res = match cli.command {
        Command::Build { system } => cmd_build(&system),
        Command::Word { system, word } => cmd_word(&system, &word),
        Command::Hecke { system, word, support } => cmd_hecke(&system, &word, support.as_deref()),
        Command::Collapse { system, word, mode, verify, out } => cmd_collapse(&system, &word, mode.into(), verify, &out),
        Command::Poset { system, lower, upper, dot } => cmd_poset(&system, &lower, upper.as_deref(), dot.as_deref(), exec),
        Command::Tnn { system, word, params, verify_fibers } => {
            cmd_tnn(&system, &word, params.as_deref(), verify_fibers, exec)
        }
        Command::Campaign { out } => cmd_campaign(&out, exec),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

pub fn main_with_args() -> ExitCode {
    run(Cli::parse())
}

fn cmd_build(system: &SystemArgs) -> Outcome {
    let sys = system.build()?;
    print_json(&json!({
        "name": sys.name(),
        "rank": sys.rank(),
        "coxeter_matrix": sys.coxeter_matrix(),
        "positive_roots": sys.positive_roots().len(),
        "longest_element": sys.reduced_word(&sys.longest_element()).to_string(),
    }));
    Ok(())
}

fn cmd_word(system: &SystemArgs, word: &str) -> Outcome {
    let sys = system.build()?;
    let w = parse_word(&sys, word)?;
    let (g, reduced) = sys.evaluate_word(&w)?;
    let reflections = if reduced {
        Some(sys.prefix_reflections(&w)?.iter().map(|r| sys.label(r)).collect::<Vec<_>>())
    } else {
        None
    };
    print_json(&json!({
        "word": w.to_string(),
        "element": sys.label(&g),
        "length": g.length(),
        "reduced": reduced,
        "prefix_reflections": reflections,
    }));
    Ok(())
}

fn cmd_hecke(system: &SystemArgs, word: &str, support: Option<&str>) -> Outcome {
    let sys = system.build()?;
    let w = parse_word(&sys, word)?;
    let e = match support {
        Some(s) => XExpression::new(w.clone(), s.parse::<Word>()?.0)?,
        None => XExpression::full(w.clone()),
    };
    let del: Vec<_> = hecke::deletion_pairs(&sys, &e)
        .into_iter()
        .map(|p| Ok(json!({ "pair": p, "long_braids": hecke::min_long_braids(&sys, &e, p)? })))
        .collect::<Result<_, Error>>()?;
    print_json(&json!({
        "word": w.to_string(),
        "support": e.support(),
        "demazure": sys.label(&hecke::demazure(&sys, &e)),
        "omittable_pairs": hecke::omittable_pairs(&sys, &e),
        "deletion_pairs": del,
    }));
    Ok(())
}

#[derive(Serialize)]
struct CollapseSummary {
    word: String,
    mode: Mode,
    steps: usize,
    surviving_classes: usize,
    conditions: Option<collapse::ConditionReport>,
    bruhat_mismatches: Option<Vec<String>>,
}

fn collapse_summary(sys: &CoxeterSystem, t: &collapse::CollapseTrace, verify: bool) -> anyhow::Result<(CollapseSummary, bool)> {
    let mut ok = true;
    let (conditions, mismatches) = if verify {
        let rep = collapse::verify_conditions(t);
        ok &= rep.all_ok();
        let mm = if t.mode == Mode::Full {
            let mm = collapse::bruhat_mismatches(sys, t)?;
            ok &= mm.is_empty();
            Some(mm)
        } else {
            None
        };
        (Some(rep), mm)
    } else {
        (None, None)
    };
    let s = CollapseSummary {
        word: t.base.to_string(),
        mode: t.mode,
        steps: t.steps.len(),
        surviving_classes: t.survivors().count(),
        conditions,
        bruhat_mismatches: mismatches,
    };
    Ok((s, ok))
}

fn cmd_collapse(system: &SystemArgs, word: &str, mode: Mode, verify: bool, out: &Path) -> Outcome {
    let sys = system.build()?;
    let w = parse_word(&sys, word)?;
    let t = collapse::run_collapse(&sys, &w, mode)?;
    write(out, &t.to_json())?;
    let (summary, ok) = collapse_summary(&sys, &t, verify)?;
    print_json(&summary);
    verdict(ok)
}

fn cmd_poset(system: &SystemArgs, lower: &str, upper: Option<&str>, dot: Option<&Path>, exec: Exec) -> Outcome {
    let sys = system.build()?;
    let u = sys.evaluate(&parse_word(&sys, lower)?);
    let v = match upper {
        Some(s) => sys.evaluate(&parse_word(&sys, s)?),
        None => sys.longest_element(),
    };
    let iv = sys.bruhat_interval(&u, &v)?;
    let reports = check_cw_conditions_with(&iv.poset, exec);
    if let Some(path) = dot {
        write(path, &poset::export_dot(&iv.poset, None))?;
    }
    let ok = reports.iter().all(|r| r.holds);
    print_json(&json!({
        "lower": sys.label(&u),
        "upper": sys.label(&v),
        "elements": iv.poset.len(),
        "covers": iv.poset.covers().len(),
        "reports": reports,
    }));
    verdict(ok)
}

fn parse_params(s: &str) -> anyhow::Result<Vec<Q>> {
    s.split(',')
        .map(|t| t.trim().parse::<Q>().map_err(|_| anyhow::anyhow!("bad rational {t:?}")))
        .collect()
}

fn cmd_tnn(system: &SystemArgs, word: &str, params: Option<&str>, verify_fibers: bool, exec: Exec) -> Outcome {
    let sys = system.build()?;
    if !sys.is_type_a() {
        return Err(Error::NotTypeA.into());
    }
    let w = parse_word(&sys, word)?;
    let n = sys.rank() + 1;
    let mut ok = true;
    let mut out = serde_json::Map::new();
    if let Some(p) = params {
        let p = parse_params(p)?;
        if p.iter().any(|x| x < &Q::from_integer(0.into())) {
            return Err(anyhow::anyhow!("parameters must be nonnegative").into());
        }
        let m = tnn::lusztig_eval(&w, &p, n)?;
        let cell = tnn::cell_element(&sys, &m)?;
        out.insert("matrix".into(), json!(m.to_string().lines().collect::<Vec<_>>()));
        out.insert("tnn".into(), json!(tnn::is_tnn(&m)));
        out.insert("cell".into(), json!(sys.label(&cell)));
    }
    if verify_fibers {
        let t = collapse::run_collapse(&sys, &w, Mode::Full)?;
        let rep = tnn::verify_fibers(&sys, &t, &Sampler::default(), exec)?;
        ok &= rep.ok();
        out.insert("fibers".into(), serde_json::to_value(&rep)?);
    }
    if out.is_empty() {
        return Err(anyhow::anyhow!("nothing to do: give --params and/or --verify-fibers").into());
    }
    print_json(&out);
    verdict(ok)
}

#[derive(Serialize)]
struct CampaignEntry {
    system: String,
    word: String,
    trace_file: String,
    collapse: CollapseSummary,
    fibers_ok: bool,
    fiber_samples: usize,
    quotient_cw: Vec<poset::IntervalReport>,
}

fn campaign_words() -> anyhow::Result<Vec<(CoxeterSystem, Word)>> {
    let mut jobs = Vec::new();
    let a2 = CoxeterSystem::named("A2")?;
    for g in a2.elements() {
        for w in a2.reduced_words(&g) {
            if !w.is_empty() {
                jobs.push((a2.clone(), w));
            }
        }
    }
    let a3 = CoxeterSystem::named("A3")?;
    for w in a3.reduced_words(&a3.longest_element()) {
        jobs.push((a3.clone(), w));
    }
    Ok(jobs)
}

fn cmd_campaign(out: &Path, exec: Exec) -> Outcome {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let jobs = campaign_words()?;
    let results = exec.map(&jobs, |(sys, w)| -> anyhow::Result<(String, String, CampaignEntry, bool)> {
        let t = collapse::run_collapse(sys, w, Mode::Full)?;
        let (summary, mut ok) = collapse_summary(sys, &t, true)?;
        let fibers = tnn::verify_fibers(sys, &t, &Sampler::default(), Exec::Sequential)?;
        ok &= fibers.ok();
        let q = collapse::quotient_poset(&t)?;
        let cw = check_cw_conditions_with(&q, Exec::Sequential);
        ok &= cw.iter().all(|r| r.holds);
        let stem: String = w.letters().iter().map(|i| i.to_string()).collect();
        let trace_file = format!("trace-{}-{stem}.json", sys.name());
        let entry = CampaignEntry {
            system: sys.name().to_string(),
            word: w.to_string(),
            trace_file: trace_file.clone(),
            collapse: summary,
            fibers_ok: fibers.ok(),
            fiber_samples: fibers.steps.iter().map(|s| s.samples).sum::<usize>() + fibers.cell_samples,
            quotient_cw: cw,
        };
        Ok((trace_file, t.to_json(), entry, ok))
    });
    let mut entries = Vec::new();
    let mut all_ok = true;
    for r in results {
        let (file, trace, entry, ok) = r?;
        write(&out.join(file), &trace)?;
        entries.push(entry);
        all_ok &= ok;
    }
    let report = json!({ "all_ok": all_ok, "runs": entries });
    write(&out.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    println!("{} runs, all checks {}", entries.len(), if all_ok { "pass" } else { "FAIL" });
    verdict(all_ok)
}
