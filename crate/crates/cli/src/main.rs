//! `mmp`: max-sum matchings, disk piercing, counterexample fixtures, lemma
//! samplers and random campaigns from the command line.
//!
//! Exit codes: 0 success, 1 unreadable or invalid input/parameters, 2 size cap
//! exceeded, 3 a guaranteed invariant or self-check failed.

mod document;
mod report;
mod svg;

use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mmp_core::campaign::{run_campaign, CampaignConfig};
use mmp_core::classify::{classify_three, witness_easy_case};
use mmp_core::constructions::{
    default_epsilon, equilateral_tightness, many_pair_counterexample, singleton_disk_instance,
    three_pair_counterexample, SINGLETON_PAIRS,
};
use mmp_core::lemmas::{run_lemma, LemmaConfig, LemmaId};
use mmp_core::matching::max_sum_bruteforce;
use mmp_core::piercing::{pierce_disks, StretchBound};
use mmp_core::{EllipseRegion, Matching, Point, Segment, Tolerance};
use serde::Serialize;
use serde_json::json;

use document::PointSetDocument;
use report::{report_for, run_match, RunReport};

#[derive(Parser)]
#[command(name = "mmp", version, about = "Max-sum matchings and the common points of their diametral disks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Point-set JSON file, or `-` for stdin (the default).
    #[arg(short, long, global = true)]
    input: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Pair count, or an inclusive range `a..b` for `experiment`.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Stretch factor for ellipse checks and drawings.
    #[arg(long, global = true, value_enum)]
    bound: Option<BoundArg>,
    /// Use local search instead of exhaustive search (no size cap).
    #[arg(long, global = true)]
    heuristic: bool,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Max-sum matching, piercing and stretch report for a point set.
    Match,
    /// Generate and verify a fixture.
    Counterexample {
        #[arg(value_enum)]
        family: Family,
    },
    /// Case label and pair relations of a three-pair matching.
    Classify,
    /// Run lemma samplers and print their reports.
    Lemmas {
        /// Lemma id; all of them when absent.
        #[arg(long)]
        lemma: Option<String>,
        /// Break the hypothesis on purpose.
        #[arg(long)]
        negative: bool,
    },
    /// Random-instance campaigns over a range of pair counts.
    Experiment {
        #[arg(long)]
        colored: bool,
    },
    /// Draw the point set, its max-sum matching, disks and witness.
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Three red-blue pairs without a common disk point.
    Thm2,
    /// The n-pair extension of the same.
    Thm3,
    /// Doubled equilateral triangle, tight for 2/sqrt(3).
    Equilateral,
    /// Disks meeting in exactly one point.
    Singleton,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    /// 2/sqrt(3)
    Fingerhut,
    Sqrt2,
    Sqrt5,
    /// 2.5
    Eppstein,
}

impl From<BoundArg> for StretchBound {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Fingerhut => Self::TwoOverSqrt3,
            BoundArg::Sqrt2 => Self::Sqrt2,
            BoundArg::Sqrt5 => Self::Sqrt5,
            BoundArg::Eppstein => Self::FiveHalves,
        }
    }
}

/// A guaranteed property failed on a valid input.
#[derive(Debug)]
struct InvariantFailure(String);

impl fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant failed: {}", self.0)
    }
}

impl std::error::Error for InvariantFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use mmp_core::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::SizeLimit { .. } => 2,
                E::InvalidPointSet(_) | E::InvalidMatching(_) | E::OutOfRange { .. } | E::NotInterior => 1,
                _ => 3,
            };
        }
        if cause.is::<InvariantFailure>() {
            return 3;
        }
    }
    1
}

fn read_input(flags: &Flags) -> Result<String> {
    let mut text = String::new();
    match flags.input.as_deref() {
        None | Some("-") => {
            std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
        Some(path) => text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
    }
    Ok(text)
}

fn read_document(flags: &Flags) -> Result<PointSetDocument> {
    PointSetDocument::parse(&read_input(flags)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn emit(flags: &Flags, text: &str) -> Result<()> {
    match &flags.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn parse_n(flags: &Flags, default: usize) -> Result<usize> {
    match &flags.n {
        None => Ok(default),
        Some(s) => s.trim().parse().with_context(|| format!("--n expects an integer, got {s:?}")),
    }
}

fn parse_n_range(flags: &Flags) -> Result<Vec<usize>> {
    let Some(s) = &flags.n else { return Ok(vec![3]) };
    let parse = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad pair count in --n {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        bail!("empty range --n {s:?}");
    }
    Ok((lo..=hi).collect())
}

fn ellipse_bound(flags: &Flags) -> StretchBound {
    flags.bound.map_or(StretchBound::TwoOverSqrt3, Into::into)
}

fn check_invariant(report: &RunReport) -> Result<()> {
    if report.invariant_holds {
        Ok(())
    } else if report.colored {
        Err(InvariantFailure("two matched disks of a max-sum red-blue matching are disjoint".into()).into())
    } else {
        Err(InvariantFailure("the disks of a max-sum matching have no common point".into()).into())
    }
}

fn cmd_match(flags: &Flags, tol: &Tolerance<f64>) -> Result<()> {
    let doc = read_document(flags)?;
    let ps = doc.point_set()?;
    let report = run_match(&doc, &ps, flags.heuristic, ellipse_bound(flags), tol)?;
    emit(flags, &to_json(&report))?;
    check_invariant(&report)
}

fn cmd_counterexample(flags: &Flags, family: Family, tol: &Tolerance<f64>) -> Result<()> {
    let start = std::time::Instant::now();
    let (doc, ps, instance, matching) = match family {
        Family::Thm2 | Family::Thm3 => {
            let inst = if matches!(family, Family::Thm2) {
                let eps = flags.epsilon.unwrap_or_else(|| default_epsilon(3));
                three_pair_counterexample(eps, tol)?
            } else {
                let n = parse_n(flags, 4)?;
                let eps = flags.epsilon.unwrap_or_else(|| default_epsilon(n.max(4)));
                many_pair_counterexample(n, eps, tol)?
            };
            let ps = inst.points().clone();
            let doc = PointSetDocument::from_point_set(Some(inst.name.clone()), &ps);
            let m = inst.claimed_optimum.clone();
            (doc, ps, Some(inst), m)
        }
        Family::Equilateral => {
            let ps = equilateral_tightness(1.0)?;
            let m = max_sum_bruteforce(&ps, tol)?.matching;
            (PointSetDocument::from_point_set(Some("equilateral".into()), &ps), ps, None, m)
        }
        Family::Singleton => {
            let ps = singleton_disk_instance(
                Point::new(-2.0, -1.0),
                Point::new(2.0, -1.0),
                Point::new(0.0, 2.0),
                Point::new(0.0, 0.0),
                tol,
            )?;
            let m = Matching::new(&ps, &SINGLETON_PAIRS)?;
            (PointSetDocument::from_point_set(Some("singleton".into()), &ps), ps, None, m)
        }
    };
    let mut report = report_for(&doc, &ps, &matching, tol, ellipse_bound(flags))?;
    report.matching.method = if instance.as_ref().is_none_or(|i| i.exhaustively_verified) {
        "exhaustive".into()
    } else {
        "local-search".into()
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let combined = json!({ "fixture": doc, "instance": instance, "report": report });
    match &flags.out {
        Some(_) => {
            emit(flags, &to_json(&doc))?;
            std::io::stdout().write_all(to_json(&combined).as_bytes())?;
        }
        None => emit(flags, &to_json(&combined))?,
    }
    check_invariant(&report)
}

fn cmd_classify(flags: &Flags, tol: &Tolerance<f64>) -> Result<()> {
    let doc = read_document(flags)?;
    let ps = doc.point_set()?;
    if ps.pair_count() != 3 {
        return Err(mmp_core::Error::OutOfRange {
            name: "pairs",
            value: ps.pair_count() as f64,
            constraint: "classification needs exactly 3 pairs".into(),
        }
        .into());
    }
    let m = max_sum_bruteforce(&ps, tol)?.matching;
    let class = classify_three(&ps, &m, tol)?;
    let segs = m.segments(&ps);
    let segs: [Segment; 3] = [segs[0], segs[1], segs[2]];
    let witness = if class.label.has_direct_witness() && !class.fragile {
        Some(witness_easy_case(&segs, &class, tol)?)
    } else {
        None
    };
    let pierce = pierce_disks(&m.disks(&ps), tol);
    let out = json!({
        "label": class.label,
        "group": class.group,
        "fragile": class.fragile,
        "pairs": m.pairs(),
        "relations": class.relations,
        "pointing": class.pointing,
        "witness": witness,
        "verdict": pierce.verdict,
    });
    emit(flags, &to_json(&out))?;
    if !ps.is_colored() && !pierce.verdict.has_common_point() {
        return Err(InvariantFailure("three max-sum disks without a common point".into()).into());
    }
    Ok(())
}

fn cmd_lemmas(flags: &Flags, lemma: Option<&str>, negative: bool, tol: &Tolerance<f64>) -> Result<()> {
    let ids: Vec<LemmaId> = match lemma {
        Some(s) => vec![s.parse()?],
        None => LemmaId::ALL.to_vec(),
    };
    let seed = flags.seed.unwrap_or(0);
    let mut reports = Vec::new();
    for id in ids {
        let mut cfg = LemmaConfig::new(flags.trials.unwrap_or(id.default_trials()), seed).with_tolerance(tol);
        if negative {
            cfg = cfg.negative();
        }
        reports.push(run_lemma(id, &cfg)?);
    }
    let text = if reports.len() == 1 { to_json(&reports[0]) } else { to_json(&reports) };
    emit(flags, &text)?;
    if !negative {
        if let Some(r) = reports.iter().find(|r| !r.is_clean()) {
            return Err(InvariantFailure(format!("{} reported {} violations", r.lemma, r.violations)).into());
        }
    }
    Ok(())
}

fn cmd_experiment(flags: &Flags, colored: bool, tol: &Tolerance<f64>) -> Result<()> {
    let ns = parse_n_range(flags)?;
    let trials = flags.trials.unwrap_or(500);
    let seed = flags.seed.unwrap_or(0);
    let mut reports = Vec::new();
    for n in ns {
        let mut cfg = CampaignConfig::new(n, trials, seed, colored);
        cfg.tolerance = tol.base();
        reports.push(run_campaign(&cfg)?);
    }
    emit(flags, &to_json(&reports))?;
    if let Some(r) = reports.iter().find(|r| !r.is_clean()) {
        return Err(InvariantFailure(format!("campaign n={} is not clean", r.config.n)).into());
    }
    Ok(())
}

fn cmd_svg(flags: &Flags, tol: &Tolerance<f64>) -> Result<()> {
    let text = read_input(flags)?;
    let doc = if text.trim().is_empty() {
        None
    } else {
        Some(PointSetDocument::parse(&text)?).filter(|d| !d.is_empty())
    };
    let mut scene = svg::Scene::default();
    if let Some(doc) = doc {
        let ps = doc.point_set()?;
        let report = run_match(&doc, &ps, flags.heuristic, ellipse_bound(flags), tol)?;
        let m = Matching::new(&ps, &report.matching.pairs)?;
        scene.points = (0..ps.len()).map(|i| (ps.point(i), ps.color(i))).collect();
        scene.segments = m.point_pairs(&ps);
        scene.disks = m.disks(&ps);
        scene.witness = report.piercing.witness;
        if let Some(b) = flags.bound {
            let factor = StretchBound::from(b).value();
            scene.ellipses =
                scene.segments.iter().map(|&(a, b)| EllipseRegion::with_stretch(a, b, factor)).collect();
        }
    }
    emit(flags, &svg::render(&scene))
}

fn run(cli: Cli) -> Result<()> {
    let tol = Tolerance::<f64>::from_env();
    let flags = &cli.flags;
    match cli.command {
        Command::Match => cmd_match(flags, &tol),
        Command::Counterexample { family } => cmd_counterexample(flags, family, &tol),
        Command::Classify => cmd_classify(flags, &tol),
        Command::Lemmas { lemma, negative } => cmd_lemmas(flags, lemma.as_deref(), negative, &tol),
        Command::Experiment { colored } => cmd_experiment(flags, colored, &tol),
        Command::Svg => cmd_svg(flags, &tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
