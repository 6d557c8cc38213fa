//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use loewy_core::blocks::ll_group_algebra_pgroup;
use loewy_core::bounds::{ll_abelian_formula, rho, rho_property_suite};
use loewy_core::corpus::{
    analyze_task, conjecture_report, corpus_tasks, read_records, run_corpus, CorpusConfig, CorpusRecord, CorpusSummary,
    Family, RecordKind, TaskOptions, RECORDS_FILE,
};
use loewy_core::group::GroupSpec;
use loewy_core::par::Parallelism;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }
}

fn report(id: u32, title: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = run();
    let elapsed = start.elapsed();
    if elapsed > limit {
        out.failures.push(format!("took {elapsed:.2?}, limit {limit:?}"));
    }
    let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{status} criterion {id}: {title} [{elapsed:.2?}]");
    for n in &out.notes {
        println!("    {n}");
    }
    for f in out.failures.iter().take(20) {
        println!("    failure: {f}");
    }
    out.failures.is_empty()
}

fn rho_identities() -> Outcome {
    let mut o = Outcome::new();
    for p in [2u64, 3, 5, 7, 11] {
        o.expect(rho(3, 1, p) == 3 * p - 2, || format!("rho(3,1,{p}) = {}", rho(3, 1, p)));
        for m in 0..=10 {
            o.expect(rho(m, 0, p) == 1, || format!("rho({m},0,{p}) != 1"));
            for n in m..=10 {
                o.expect(rho(m, n, p) == p.pow(m), || format!("rho({m},{n},{p}) != p^m"));
            }
        }
    }
    o
}

fn proposition_suite() -> Outcome {
    let mut o = Outcome::new();
    let r = rho_property_suite(8, 8, &[2, 3, 5]);
    o.notes.push(format!("{} ordered pairs compared", r.comparisons));
    o.failures.extend(r.violations);
    o
}

fn abelian_types(p: usize, max_order: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut k = 1;
    while p.pow(k) <= max_order {
        go(k, k, &mut Vec::new(), &mut out);
        k += 1;
    }
    out
}

fn abelian_closed_form() -> Outcome {
    let mut o = Outcome::new();
    let mut count = 0;
    for (p, cap) in [(2usize, 128usize), (3, 243)] {
        for ty in abelian_types(p, cap) {
            let radices: Vec<usize> = ty.iter().map(|&e| p.pow(e)).collect();
            let g = GroupSpec::Abelian(radices).build().unwrap();
            let brute = ll_group_algebra_pgroup(&g, p as u64).unwrap() as u64;
            let f = ll_abelian_formula(&ty, p as u64);
            count += 1;
            o.expect(brute == f.ll, || format!("p={p} type {ty:?}: brute force {brute}, formula {}", f.ll));
            o.expect(f.ll <= f.rho, || format!("p={p} type {ty:?}: {} > rho {}", f.ll, f.rho));
            o.expect((f.ll == f.rho) == f.equality_shape, || format!("p={p} type {ty:?}: equality shape mismatch"));
        }
    }
    o.notes.push(format!("{count} abelian p-groups"));
    o
}

fn extraspecial() -> Outcome {
    let mut o = Outcome::new();
    for (p, want) in [(3u64, 9usize), (5, 17)] {
        let g = GroupSpec::ExtraspecialPlus(p).build().unwrap();
        let ll = ll_group_algebra_pgroup(&g, p).unwrap();
        let r = rho(3, 1, p);
        o.notes.push(format!("p={p}: LL(F p^(1+2)_+) = {ll}, rho(3,1) = {r}"));
        o.expect(ll == want && ll as u64 == 4 * p - 3, || format!("p={p}: LL = {ll}, expected {want}"));
        o.expect(r == 3 * p - 2, || format!("p={p}: rho(3,1) = {r}"));
    }
    o
}

const MACHINERY: &[&str] = &[
    "idempotents_orthogonal",
    "idempotents_sum_to_one",
    "idempotents_primitive",
    "center_dimension_sum",
    "p_regular_support",
    "defect_group_order",
    "defect_recomputation",
    "principal_defect_sylow",
    "central_character_multiplicative",
    "brauer_hom_multiplicative",
    "induced_principal_block",
    "subsections_normalized",
];

fn machinery(records: &[CorpusRecord], summary: &CorpusSummary) -> Outcome {
    let mut o = Outcome::new();
    let analyzed: Vec<&CorpusRecord> = records.iter().filter(|r| r.block.as_ref().is_some_and(|b| b.index == 0)).collect();
    o.notes.push(format!("{} (G,p) pairs analyzed, {} skipped", analyzed.len(), summary.skipped.len()));
    o.expect(analyzed.len() >= 150, || format!("only {} pairs", analyzed.len()));
    for r in &analyzed {
        let checks = &r.block.as_ref().unwrap().machinery;
        for c in checks.iter().filter(|c| !c.passed) {
            o.failures.push(format!("{} p={}: {}: {}", r.group, r.p, c.name, c.detail));
        }
        for name in MACHINERY {
            if !checks.iter().any(|c| c.name == *name) {
                o.failures.push(format!("{} p={}: {name} missing", r.group, r.p));
            }
        }
    }
    for e in &summary.errors {
        o.failures.push(format!("{} p={}: {}", e.group, e.p, e.reason));
    }
    o
}

const THEOREMS: &[&str] = &[
    "okuyama",
    "kulshammer_nilpotency",
    "rho_abelian",
    "rho_abelian_equality",
    "abelian_lower_bound",
    "rho_metacyclic",
    "three_p_d_minus_2",
    "w_family",
    "dominated_subsections",
    "central_subgroup_ideals",
    "reynolds_quotient",
];

fn theorems(summary: &CorpusSummary, corpus_time: Duration) -> Outcome {
    let mut o = Outcome::new();
    for name in THEOREMS {
        let t = summary.check_counts.get(*name).copied().unwrap_or_default();
        o.notes.push(format!("{name}: {} applicable, {} failed", t.applicable, t.failed));
        o.expect(t.applicable > 0, || format!("{name} never applicable"));
    }
    for f in &summary.theorem_failures {
        o.failures.push(format!("{} p={} block {} {}: {} vs {}", f.group, f.p, f.block, f.check, f.lhs, f.rhs));
    }
    o.notes.push(format!("corpus sweep took {corpus_time:.2?}"));
    o.expect(corpus_time < Duration::from_secs(600), || "corpus sweep over 10 minutes".into());
    o
}

fn conjecture(records: &[CorpusRecord]) -> Outcome {
    let mut o = Outcome::new();
    let report = conjecture_report(records);
    o.notes.push(format!(
        "{} non-abelian-defect blocks, {} counterexamples, smallest margins:",
        report.rows.len(),
        report.counterexamples
    ));
    for r in report.rows.iter().take(5) {
        o.notes.push(format!("  {} p={} block {}: LL {} vs {} (margin {})", r.group, r.p, r.block, r.loewy_length, r.rhs, r.margin));
    }
    for r in report.rows.iter().filter(|r| r.counterexample) {
        o.notes.push(format!("  COUNTEREXAMPLE: {} (block {})", r.reproduce, r.block));
    }
    o.expect(!report.rows.is_empty(), || "empty margins table".into());
    // One analyze call rebuilds the tightest block.
    if let Some(row) = report.rows.first() {
        let opts = TaskOptions {
            seed: row.seed,
            ..TaskOptions::from_config(&CorpusConfig::default())
        };
        let again = analyze_task(&row.group, row.p, &opts);
        let block = again.get(row.block).and_then(|r| r.block.as_ref());
        o.expect(block.is_some_and(|b| b.loewy_length as u64 == row.loewy_length), || format!("{} does not reproduce", row.reproduce));
    }
    o
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    let cfg = CorpusConfig {
        families: vec![Family::Dihedral, Family::Symmetric, Family::Products, Family::W],
        seed: 7,
        ..CorpusConfig::default()
    };
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    run_corpus(&cfg, dirs[0].path(), false, |_| {}).unwrap();
    let first = fs::read(dirs[0].path().join(RECORDS_FILE)).unwrap();
    let seq = CorpusConfig {
        parallelism: Parallelism::Sequential,
        ..cfg.clone()
    };
    run_corpus(&seq, dirs[1].path(), false, |_| {}).unwrap();
    o.expect(fs::read(dirs[1].path().join(RECORDS_FILE)).unwrap() == first, || "rerun differs".into());

    // Interrupt after about 40% of the tasks, leaving a torn last line.
    let path = dirs[2].path().join(RECORDS_FILE);
    let partial = CorpusConfig {
        task_limit: Some(corpus_tasks(&cfg).unwrap().len() * 2 / 5),
        ..cfg.clone()
    };
    run_corpus(&partial, dirs[2].path(), false, |_| {}).unwrap();
    let mut bytes = fs::read(&path).unwrap();
    bytes.extend_from_slice(b"{\"kind\":\"block\",\"seed\":7,\"inp");
    fs::write(&path, &bytes).unwrap();
    let mut reused = 0;
    run_corpus(&cfg, dirs[2].path(), true, |p| reused += p.reused as usize).unwrap();
    o.expect(fs::read(&path).unwrap() == first, || "resumed run differs from single pass".into());
    o.expect(reused > 0, || "resume recomputed everything".into());
    o.notes.push(format!("{} bytes, {reused} tasks reused on resume", first.len()));
    let records = read_records(&path).unwrap();
    o.expect(records.iter().all(|r| r.seed == 7), || "seed missing from records".into());
    o
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored.
    let mut ok = true;
    ok &= report(1, "rho identities", Duration::from_secs(1), rho_identities);
    ok &= report(2, "rho monotonicity, range and equality cases", Duration::from_secs(5), proposition_suite);
    ok &= report(3, "abelian LL(FD) closed form against brute force", Duration::from_secs(120), abelian_closed_form);
    ok &= report(4, "extraspecial LL(FD) against rho(3,1)", Duration::from_secs(120), extraspecial);

    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let summary = run_corpus(&CorpusConfig::default(), dir.path(), false, |_| {}).unwrap();
    let corpus_time = start.elapsed();
    let records = read_records(&dir.path().join(RECORDS_FILE)).unwrap();
    assert!(records.iter().all(|r| r.kind != RecordKind::Error || !summary.errors.is_empty()));

    ok &= report(5, "block machinery invariants on the default corpus", Duration::from_secs(600), || machinery(&records, &summary));
    ok &= report(6, "theorem suite on the default corpus", Duration::from_secs(600), || theorems(&summary, corpus_time));
    ok &= report(7, "conjecture margins", Duration::from_secs(120), || conjecture(&records));
    ok &= report(8, "determinism and resume", Duration::from_secs(600), determinism);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
