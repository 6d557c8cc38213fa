use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use loewy_core::blocks::ll_group_algebra_pgroup;
use loewy_core::bounds::checked_rho;
use loewy_core::corpus::{
    analyze_task, conjecture_report, read_records, run_corpus, write_json, ConjectureReport, ControlledAllowlist,
    CorpusConfig, CorpusRecord, Family, RecordKind, TaskOptions, CONJECTURE_FILE, RECORDS_FILE, SUMMARY_FILE,
};
use loewy_core::group::{is_p_power, GroupSpec};
use loewy_core::par::Parallelism;
use serde_json::json;

#[derive(Parser)]
#[command(name = "loewy", version, about = "Blocks, center Loewy lengths and defect-group bounds of modular group algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every block of FG for one group and prime.
    Analyze(AnalyzeArgs),
    /// Sweep group families and check every bound on every block.
    Corpus(CorpusArgs),
    /// Margins of the non-abelian-defect conjecture, smallest first.
    Conjecture(ConjectureArgs),
    /// rho(m, n) at a prime, or the table of rho(i, j) for i <= m, j <= n.
    Rho(RhoArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Group descriptor, e.g. S4, D8, Q16, Ab[4,2], ES+(3), W(4,3), C7:C3(2), S3*C3.
    #[arg(long)]
    group: String,
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Treat blocks as controlled; optional block indices restrict it.
    #[arg(long, num_args = 0.., value_name = "BLOCK")]
    assume_controlled: Option<Vec<usize>>,
    /// Also compute LL(FD) for each defect group D, and LL(FG) when G is a p-group.
    #[arg(long)]
    group_algebra_ll: bool,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Comma-separated families, or `all`.
    #[arg(long, default_value = "all")]
    families: String,
    /// Extra group descriptors, repeatable.
    #[arg(long = "group", value_name = "SPEC")]
    groups: Vec<String>,
    /// Restrict to these primes, repeatable.
    #[arg(long = "prime", value_name = "P")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 720)]
    max_order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Larger order caps for every family.
    #[arg(long)]
    extended: bool,
    /// Blocks asserted to be controlled: `SPEC`, `SPEC@BLOCK`, `@BLOCK` or `*`.
    #[arg(long, num_args = 1.., value_name = "ENTRY")]
    assume_controlled: Vec<String>,
    #[arg(long)]
    group_algebra_ll: bool,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "corpus-out")]
    out: PathBuf,
    /// Continue from the records already in the output directory.
    #[arg(long)]
    resume: bool,
    /// Also write a CSV table of the blocks.
    #[arg(long)]
    csv: bool,
    /// No progress lines on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct CorpusArgs {
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct ConjectureArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Read block records from this file instead of sweeping.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RhoArgs {
    m: u32,
    n: u32,
    p: u64,
    #[arg(long)]
    table: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Corpus(c) => corpus(c.sweep),
        Command::Conjecture(c) => conjecture(c),
        Command::Rho(r) => rho_cmd(r),
    }
}

fn analyze(a: AnalyzeArgs) -> Result<ExitCode> {
    let spec: GroupSpec = a.group.parse().with_context(|| format!("cannot parse group {:?}", a.group))?;
    if !loewy_core::field::is_prime(a.prime) {
        bail!("{} is not prime", a.prime);
    }
    let name = spec.to_string();
    let mut controlled = ControlledAllowlist::default();
    match &a.assume_controlled {
        Some(blocks) if blocks.is_empty() => controlled.push("*")?,
        Some(blocks) => {
            for b in blocks {
                controlled.push(&format!("@{b}"))?;
            }
        }
        None => {}
    }
    let opts = TaskOptions {
        seed: a.seed,
        controlled,
        group_algebra_ll: a.group_algebra_ll,
        central_ideal_max_order: 200,
    };
    let records = analyze_task(&name, a.prime, &opts);
    let first = &records[0];
    let whole_ll = if a.group_algebra_ll && first.order > 0 && is_p_power(first.order as u64, a.prime) {
        Some(ll_group_algebra_pgroup(&spec.build()?, a.prime)?)
    } else {
        None
    };
    let status = match first.kind {
        RecordKind::Block => "ok",
        RecordKind::Skip => "skip",
        RecordKind::Error => "error",
    };
    let blocks: Vec<_> = records.iter().filter_map(|r| r.block.as_ref()).collect();
    let report = json!({
        "group": name,
        "order": first.order,
        "p": a.prime,
        "seed": a.seed,
        "input_hash": first.input_hash,
        "status": status,
        "reason": first.reason,
        "group_algebra_ll": whole_ll,
        "blocks": blocks,
    });
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &a.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    match first.kind {
        RecordKind::Skip => {
            eprintln!("warning: skipped {name} at p = {}: {}", a.prime, first.reason.as_deref().unwrap_or(""));
            Ok(ExitCode::SUCCESS)
        }
        RecordKind::Error => {
            eprintln!("error: {}", first.reason.as_deref().unwrap_or(""));
            Ok(ExitCode::FAILURE)
        }
        RecordKind::Block => {
            let failed = records.iter().any(|r| r.theorem_failures().next().is_some() || r.machinery_failures().next().is_some());
            Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
    }
}

fn config(s: &SweepArgs) -> Result<CorpusConfig> {
    let mut controlled = ControlledAllowlist::default();
    for entry in &s.assume_controlled {
        controlled.push(entry)?;
    }
    Ok(CorpusConfig {
        families: Family::parse_list(&s.families)?,
        groups: s.groups.clone(),
        max_order: s.max_order,
        primes: (!s.primes.is_empty()).then(|| s.primes.clone()),
        seed: s.seed,
        extended: s.extended,
        controlled,
        group_algebra_ll: s.group_algebra_ll,
        central_ideal_max_order: 200,
        parallelism: Parallelism::with_threads(s.threads),
        csv: s.csv,
        task_limit: None,
    })
}

fn sweep(s: &SweepArgs) -> Result<loewy_core::corpus::CorpusSummary> {
    let cfg = config(s)?;
    let quiet = s.quiet;
    let summary = run_corpus(&cfg, &s.out, s.resume, |p| {
        if !quiet {
            eprintln!(
                "[{}/{}] {} p={}{}",
                p.done,
                p.total,
                p.task.group,
                p.task.p,
                if p.reused { " (reused)" } else { "" }
            );
        }
    })
    .with_context(|| format!("writing corpus to {}", s.out.display()))?;
    Ok(summary)
}

fn corpus(s: SweepArgs) -> Result<ExitCode> {
    let summary = sweep(&s)?;
    println!(
        "{} tasks, {} blocks, {} skipped, {} errors, {} theorem failures, {} machinery failures, {} conjecture counterexamples",
        summary.tasks,
        summary.blocks,
        summary.skipped.len(),
        summary.errors.len(),
        summary.theorem_failures.len(),
        summary.machinery_failures.len(),
        summary.conjecture_counterexamples.len()
    );
    for (name, t) in &summary.check_counts {
        println!("  {name:<28} applicable {:>5}  satisfied {:>5}  failed {:>3}", t.applicable, t.satisfied, t.failed);
    }
    for f in &summary.theorem_failures {
        println!("THEOREM FAILURE {} p={} block {} {}: {} vs {}", f.group, f.p, f.block, f.check, f.lhs, f.rhs);
    }
    for f in &summary.machinery_failures {
        println!("MACHINERY FAILURE {} p={}: {}", f.group, f.p, f.reason);
    }
    for f in &summary.errors {
        println!("ERROR {} p={}: {}", f.group, f.p, f.reason);
    }
    println!("records: {}", s.out.join(RECORDS_FILE).display());
    println!("summary: {}", s.out.join(SUMMARY_FILE).display());
    Ok(if summary.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn conjecture(c: ConjectureArgs) -> Result<ExitCode> {
    let (records, out_dir): (Vec<CorpusRecord>, PathBuf) = match &c.input {
        Some(path) => (
            read_records(path).with_context(|| format!("reading {}", path.display()))?,
            c.sweep.out.clone(),
        ),
        None => {
            sweep(&c.sweep)?;
            let path = c.sweep.out.join(RECORDS_FILE);
            (read_records(&path)?, c.sweep.out.clone())
        }
    };
    let report = conjecture_report(&records);
    std::fs::create_dir_all(&out_dir)?;
    let path = out_dir.join(CONJECTURE_FILE);
    write_json(&path, &report)?;
    print_margins(&report);
    println!("findings: {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn print_margins(report: &ConjectureReport) {
    println!(
        "{} blocks, {} with abelian defect excluded, {} counterexamples",
        report.blocks_considered, report.excluded_abelian, report.counterexamples
    );
    println!("{:<22} {:>5} {:>3} {:>5} {:>3} {:>3} {:>6} {:>6} {:>7}", "group", "|G|", "p", "block", "d", "e", "LL", "bound", "margin");
    for r in &report.rows {
        println!(
            "{:<22} {:>5} {:>3} {:>5} {:>3} {:>3} {:>6} {:>6} {:>7}{}",
            r.group,
            r.order,
            r.p,
            r.block,
            r.d,
            r.e,
            r.loewy_length,
            r.rhs,
            r.margin,
            if r.counterexample { "  COUNTEREXAMPLE" } else { "" }
        );
    }
    for r in report.rows.iter().filter(|r| r.counterexample) {
        println!("reproduce: {}  # block {}", r.reproduce, r.block);
    }
}

fn rho_cmd(r: RhoArgs) -> Result<ExitCode> {
    if !loewy_core::field::is_prime(r.p) {
        bail!("{} is not prime", r.p);
    }
    let value = |i, j| checked_rho(i, j, r.p).with_context(|| format!("rho({i},{j}) at p = {} exceeds u64", r.p));
    if !r.table {
        println!("{}", value(r.m, r.n)?);
        return Ok(ExitCode::SUCCESS);
    }
    for i in 0..=r.m {
        for j in 0..=r.n {
            value(i, j)?;
        }
    }
    print!("{:>4}", "m\\n");
    for j in 0..=r.n {
        print!(" {j:>8}");
    }
    println!();
    for i in 0..=r.m {
        print!("{i:>4}");
        for j in 0..=r.n {
            print!(" {:>8}", value(i, j)?);
        }
        println!();
    }
    Ok(ExitCode::SUCCESS)
}
