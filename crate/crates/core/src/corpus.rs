//! Corpus sweeps over group families: one JSON line per block, resumable by
//! input hash, plus a summary, an optional CSV table and conjecture margins.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blocks::{analyze, ll_group_algebra_pgroup, AnalysisOptions, GroupAnalysis, MachineryCheck, MAX_PGROUP_ALGEBRA_ORDER};
use crate::bounds::{check_block, rho, BoundVerdict, CheckContext, Quantity};
use crate::error::Error;
use crate::field::is_prime;
use crate::group::{GroupSpec, MAX_ORDER};
use crate::par::{for_each_ordered, Parallelism};

/// Bumped whenever record contents change for the same inputs.
pub const RECORD_VERSION: &str = "loewy-corpus/1";
pub const RECORDS_FILE: &str = "blocks.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CSV_FILE: &str = "summary.csv";
pub const CONJECTURE_FILE: &str = "conjecture.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Abelian,
    Cyclic,
    Dihedral,
    Quaternion,
    Symmetric,
    Alternating,
    Extraspecial,
    W,
    Semidirect,
    Products,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Abelian,
        Family::Cyclic,
        Family::Dihedral,
        Family::Quaternion,
        Family::Symmetric,
        Family::Alternating,
        Family::Extraspecial,
        Family::W,
        Family::Semidirect,
        Family::Products,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Abelian => "abelian",
            Family::Cyclic => "cyclic",
            Family::Dihedral => "dihedral",
            Family::Quaternion => "quaternion",
            Family::Symmetric => "symmetric",
            Family::Alternating => "alternating",
            Family::Extraspecial => "extraspecial",
            Family::W => "w",
            Family::Semidirect => "semidirect",
            Family::Products => "products",
        }
    }

    /// Parses a comma-separated list; `all` expands to every family and an
    /// empty string to none.
    pub fn parse_list(s: &str) -> Result<Vec<Family>, Error> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            if part == "all" {
                out.extend(Family::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Group descriptors of the family, largest orders gated by `extended`.
    pub fn members(self, extended: bool) -> Vec<GroupSpec> {
        use GroupSpec::*;
        let ext = |small: usize, large: usize| if extended { large } else { small };
        match self {
            Family::Abelian => {
                let mut out = Vec::new();
                for (p, cap) in [(2usize, ext(128, 256)), (3, ext(81, 243))] {
                    let mut k = 1;
                    while p.pow(k) <= cap {
                        for part in partitions(k) {
                            let radices: Vec<usize> = part.iter().map(|&e| p.pow(e)).collect();
                            out.push(if radices.len() == 1 { Cyclic(radices[0]) } else { Abelian(radices) });
                        }
                        k += 1;
                    }
                }
                out
            }
            Family::Cyclic => (2..=ext(60, 120))
                .filter(|&n| prime_divisors(n as u64).len() >= 2)
                .map(Cyclic)
                .collect(),
            Family::Dihedral => (3..=ext(32, 64)).map(|n| Dihedral(2 * n)).collect(),
            Family::Quaternion => [8, 16, 32, 64, 128]
                .into_iter()
                .filter(|&n| n <= ext(64, 128))
                .map(Quaternion)
                .collect(),
            Family::Symmetric => (3..=6).map(Sym).collect(),
            Family::Alternating => (4..=6).map(Alt).collect(),
            Family::Extraspecial => [3, 5, 7]
                .into_iter()
                .filter(|&p| extended || p < 7)
                .map(ExtraspecialPlus)
                .collect(),
            Family::W => {
                let mut out: Vec<GroupSpec> = [(4, 2), (5, 2), (6, 2), (4, 3)].iter().map(|&(d, p)| W { d, p }).collect();
                if extended {
                    out.extend([(7, 2), (5, 3), (4, 5)].iter().map(|&(d, p)| W { d, p }));
                }
                out
            }
            Family::Semidirect => semidirect_members(ext(60, 120)),
            Family::Products => {
                let mut list = vec![
                    "S3*C3", "S3*S3", "S3*C4", "A4*C2", "A4*C3", "D8*C2", "D8*C3", "Q8*C2", "Q8*C3", "S4*C2",
                    "ES+(3)*C2", "ES+(3)*C3", "C3:C4(2)*C2", "D8*S3", "Q8*S3", "A5*C2", "S4*C3", "D8*C4",
                ];
                if extended {
                    list.extend(["S4*S3", "A5*C3", "A4*A4", "ES+(3)*S3"]);
                }
                list.iter().map(|s| s.parse().expect("built-in descriptor")).collect()
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Descriptor(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Partitions of `k`, parts in decreasing order.
fn partitions(k: u32) -> Vec<Vec<u32>> {
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
    go(k, k, &mut Vec::new(), &mut out);
    out
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `C_n : C_m(a)` with `n * m <= cap`, one `a` per cyclic subgroup `<a>` of
/// `(Z/n)^*` of order dividing `m`, dihedral actions excluded.
fn semidirect_members(cap: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for n in 3..=cap / 2 {
        for m in 2..=cap / n {
            let mut seen: Vec<Vec<usize>> = Vec::new();
            for a in 2..n {
                if gcd(a, n) != 1 || (m == 2 && a == n - 1) {
                    continue;
                }
                let mut powers = vec![1];
                let mut x = a;
                while x != 1 {
                    powers.push(x);
                    x = x * a % n;
                }
                if m % powers.len() != 0 {
                    continue;
                }
                powers.sort_unstable();
                if !seen.contains(&powers) {
                    seen.push(powers);
                    out.push(GroupSpec::Semidirect { n, m, a });
                }
            }
        }
    }
    out
}

/// Which blocks the user asserts to be controlled.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ControlledAllowlist {
    /// `(group, block)`; `None` matches anything.
    entries: Vec<(Option<String>, Option<usize>)>,
}

impl ControlledAllowlist {
    pub fn everything() -> Self {
        ControlledAllowlist { entries: vec![(None, None)] }
    }

    /// Parses `SPEC`, `SPEC@BLOCK`, `@BLOCK` or `*`.
    pub fn push(&mut self, entry: &str) -> Result<(), Error> {
        let entry = entry.trim();
        if entry == "*" || entry.is_empty() {
            self.entries.push((None, None));
            return Ok(());
        }
        let (spec, block) = match entry.rsplit_once('@') {
            Some((s, b)) => (
                s,
                Some(b.parse().map_err(|_| Error::Descriptor(format!("bad block index in {entry:?}")))?),
            ),
            None => (entry, None),
        };
        let spec = if spec.is_empty() || spec == "*" {
            None
        } else {
            Some(spec.parse::<GroupSpec>()?.to_string())
        };
        self.entries.push((spec, block));
        Ok(())
    }

    pub fn matches(&self, group: &str, block: usize) -> bool {
        self.entries
            .iter()
            .any(|(g, b)| g.as_deref().is_none_or(|g| g == group) && b.is_none_or(|b| b == block))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn fingerprint(&self, group: &str) -> String {
        let mut hits: Vec<String> = self
            .entries
            .iter()
            .filter(|(g, _)| g.as_deref().is_none_or(|g| g == group))
            .map(|(_, b)| b.map_or("*".to_string(), |b| b.to_string()))
            .collect();
        hits.sort();
        hits.dedup();
        hits.join(",")
    }
}

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub families: Vec<Family>,
    /// Explicit descriptors swept in addition to the families.
    pub groups: Vec<String>,
    pub max_order: usize,
    /// Restricts to these primes when set.
    pub primes: Option<Vec<u64>>,
    pub seed: u64,
    pub extended: bool,
    pub controlled: ControlledAllowlist,
    pub group_algebra_ll: bool,
    pub central_ideal_max_order: usize,
    pub parallelism: Parallelism,
    pub csv: bool,
    /// Only the first this many tasks.
    pub task_limit: Option<usize>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            families: Family::ALL.to_vec(),
            groups: Vec::new(),
            max_order: 720,
            primes: None,
            seed: 0,
            extended: false,
            controlled: ControlledAllowlist::default(),
            group_algebra_ll: false,
            central_ideal_max_order: 200,
            parallelism: Parallelism::default(),
            csv: false,
            task_limit: None,
        }
    }
}

/// One `(G, p)` unit of work.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub group: String,
    pub p: u64,
    pub input_hash: String,
}

/// Settings that change the records of a single task.
#[derive(Clone, Debug)]
pub struct TaskOptions {
    pub seed: u64,
    pub controlled: ControlledAllowlist,
    pub group_algebra_ll: bool,
    pub central_ideal_max_order: usize,
}

impl TaskOptions {
    pub fn from_config(c: &CorpusConfig) -> Self {
        TaskOptions {
            seed: c.seed,
            controlled: c.controlled.clone(),
            group_algebra_ll: c.group_algebra_ll,
            central_ideal_max_order: c.central_ideal_max_order,
        }
    }

    /// SHA-256 over everything that determines the records of `(group, p)`.
    pub fn input_hash(&self, group: &str, p: u64) -> String {
        let text = format!(
            "{RECORD_VERSION}|group={group}|p={p}|seed={}|controlled={}|gal={}|central={}",
            self.seed,
            self.controlled.fingerprint(group),
            self.group_algebra_ll,
            self.central_ideal_max_order
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Tasks in sweep order: families, then explicit groups, each group once, primes ascending.
pub fn corpus_tasks(config: &CorpusConfig) -> Result<Vec<Task>, Error> {
    let opts = TaskOptions::from_config(config);
    let mut specs: Vec<GroupSpec> = Vec::new();
    for f in &config.families {
        specs.extend(f.members(config.extended));
    }
    for g in &config.groups {
        specs.push(g.parse()?);
    }
    let cap = config.max_order.min(MAX_ORDER);
    let mut seen = std::collections::HashSet::new();
    let mut tasks = Vec::new();
    for spec in specs {
        let name = spec.to_string();
        if !seen.insert(name.clone()) {
            continue;
        }
        let order = match spec.declared_order() {
            Some(n) => n,
            None => spec.build()?.order(),
        };
        if order > cap {
            continue;
        }
        for p in prime_divisors(order as u64) {
            if config.primes.as_ref().is_some_and(|ps| !ps.contains(&p)) {
                continue;
            }
            tasks.push(Task {
                input_hash: opts.input_hash(&name, p),
                group: name.clone(),
                p,
            });
        }
    }
    if let Some(limit) = config.task_limit {
        tasks.truncate(limit);
    }
    Ok(tasks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Block,
    /// The task was not attempted, e.g. the splitting field is too large.
    Skip,
    /// The pipeline failed on the task.
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsectionReport {
    pub u: usize,
    pub u_order: u32,
    pub centralizer_order: usize,
    pub defect: u32,
    pub loewy_length: usize,
    pub dominated_loewy_length: usize,
    pub major: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub index: usize,
    pub block_count: usize,
    pub field_degree: usize,
    pub principal: bool,
    pub defect: u32,
    pub exponent_log: u32,
    pub defect_group_order: usize,
    pub defect_group_generators: Vec<usize>,
    pub defect_abelian: bool,
    pub abelian_type: Option<Vec<u32>>,
    pub defect_metacyclic: Option<bool>,
    pub defect_is_w: Option<bool>,
    pub defect_is_extraspecial: bool,
    pub dim_center: usize,
    pub loewy_length: usize,
    pub loewy_series: Vec<usize>,
    pub dim_reynolds: usize,
    pub ll_mod_reynolds: usize,
    pub rho: u64,
    /// `LL(FD)`, when requested and `|D|` is small enough.
    pub defect_group_algebra_ll: Option<usize>,
    pub assume_controlled: bool,
    pub subsections: Vec<SubsectionReport>,
    pub verdicts: Vec<BoundVerdict>,
    /// Group-level checks, carried by block 0 only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub machinery: Vec<MachineryCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub kind: RecordKind,
    pub seed: u64,
    pub input_hash: String,
    /// Number of records the task produced.
    pub task_records: usize,
    pub group: String,
    pub order: usize,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<BlockReport>,
}

impl CorpusRecord {
    pub fn theorem_failures(&self) -> impl Iterator<Item = &BoundVerdict> {
        self.block.iter().flat_map(|b| b.verdicts.iter().filter(|v| v.is_theorem_failure()))
    }

    pub fn machinery_failures(&self) -> impl Iterator<Item = &MachineryCheck> {
        self.block.iter().flat_map(|b| b.machinery.iter().filter(|c| !c.passed))
    }
}

fn is_skip(e: &Error) -> bool {
    matches!(e, Error::FieldDegreeCap { .. } | Error::OrderTooLarge { .. } | Error::NotPrime(_))
}

/// Runs the full pipeline on `(group, p)`, one record per block.
pub fn analyze_task(group: &str, p: u64, opts: &TaskOptions) -> Vec<CorpusRecord> {
    let input_hash = opts.input_hash(group, p);
    let fail = |order: usize, e: Error| {
        vec![CorpusRecord {
            kind: if is_skip(&e) { RecordKind::Skip } else { RecordKind::Error },
            seed: opts.seed,
            input_hash: input_hash.clone(),
            task_records: 1,
            group: group.to_string(),
            order,
            p,
            reason: Some(e.to_string()),
            block: None,
        }]
    };
    let built = group.parse::<GroupSpec>().and_then(|s| s.build());
    let g = match built {
        Ok(g) => Arc::new(g),
        Err(e) => return fail(0, e),
    };
    let order = g.order();
    if !is_prime(p) {
        return fail(order, Error::NotPrime(p));
    }
    let analysis_opts = AnalysisOptions {
        seed: opts.seed,
        ..AnalysisOptions::default()
    };
    match analyze(g, p, analysis_opts).and_then(|a| block_reports(&a, group, opts)) {
        Ok(blocks) => {
            let n = blocks.len();
            blocks
                .into_iter()
                .map(|b| CorpusRecord {
                    kind: RecordKind::Block,
                    seed: opts.seed,
                    input_hash: input_hash.clone(),
                    task_records: n,
                    group: group.to_string(),
                    order,
                    p,
                    reason: None,
                    block: Some(b),
                })
                .collect()
        }
        Err(e) => fail(order, e),
    }
}

fn block_reports(a: &GroupAnalysis, group: &str, opts: &TaskOptions) -> Result<Vec<BlockReport>, Error> {
    let center = &a.center;
    let g = center.group();
    let p = center.prime();
    let mut out = Vec::with_capacity(a.blocks.len());
    for (i, b) in a.blocks.iter().enumerate() {
        let controlled = opts.controlled.matches(group, i);
        let cx = CheckContext {
            assume_controlled: controlled,
            central_ideal_max_order: opts.central_ideal_max_order,
        };
        let verdicts = check_block(a, i, &cx)?;
        let gal = if opts.group_algebra_ll && b.defect_group.order() <= MAX_PGROUP_ALGEBRA_ORDER {
            Some(ll_group_algebra_pgroup(&g.subgroup_group(&b.defect_group).0, p)?)
        } else {
            None
        };
        let subsections = a.subsections[i]
            .iter()
            .map(|s| SubsectionReport {
                u: s.u,
                u_order: s.u_order,
                centralizer_order: s.centralizer_order,
                defect: s.block.defect,
                loewy_length: s.block.loewy_length,
                dominated_loewy_length: s.dominated_loewy_length,
                major: s.major,
            })
            .collect();
        out.push(BlockReport {
            index: i,
            block_count: a.blocks.len(),
            field_degree: center.ctx().degree(),
            principal: b.principal,
            defect: b.defect,
            exponent_log: b.exponent_log,
            defect_group_order: b.defect_group.order(),
            defect_group_generators: b.defect_group.generators().to_vec(),
            defect_abelian: b.defect_abelian,
            abelian_type: b.abelian_type.clone(),
            defect_metacyclic: b.defect_metacyclic,
            defect_is_w: b.defect_is_w,
            defect_is_extraspecial: b.defect_is_extraspecial,
            dim_center: b.dim_center,
            loewy_length: b.loewy_length,
            loewy_series: b.loewy_series.clone(),
            dim_reynolds: b.dim_reynolds,
            ll_mod_reynolds: b.ll_mod_reynolds,
            rho: rho(b.defect, b.exponent_log, p),
            defect_group_algebra_ll: gal,
            assume_controlled: controlled,
            subsections,
            verdicts,
            machinery: if i == 0 { a.checks.clone() } else { Vec::new() },
            warnings: if i == 0 { a.warnings.clone() } else { Vec::new() },
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub applicable: usize,
    pub satisfied: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub group: String,
    pub p: u64,
    pub block: usize,
    pub check: String,
    pub lhs: u64,
    pub rhs: Quantity,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskIssue {
    pub group: String,
    pub p: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub seed: u64,
    pub tasks: usize,
    pub records: usize,
    pub blocks: usize,
    pub check_counts: BTreeMap<String, CheckTally>,
    pub theorem_failures: Vec<VerdictEntry>,
    pub conjecture_counterexamples: Vec<VerdictEntry>,
    pub machinery_failures: Vec<TaskIssue>,
    pub skipped: Vec<TaskIssue>,
    pub errors: Vec<TaskIssue>,
    /// SHA-256 of the records file.
    pub records_sha256: String,
}

impl CorpusSummary {
    /// No theorem failure, machinery failure or pipeline error.
    pub fn passed(&self) -> bool {
        self.theorem_failures.is_empty() && self.machinery_failures.is_empty() && self.errors.is_empty()
    }
}

pub fn summarize(records: &[CorpusRecord], seed: u64, records_sha256: String) -> CorpusSummary {
    let mut s = CorpusSummary {
        seed,
        tasks: 0,
        records: records.len(),
        blocks: 0,
        check_counts: BTreeMap::new(),
        theorem_failures: Vec::new(),
        conjecture_counterexamples: Vec::new(),
        machinery_failures: Vec::new(),
        skipped: Vec::new(),
        errors: Vec::new(),
        records_sha256,
    };
    let mut last_hash: Option<&str> = None;
    for r in records {
        if last_hash != Some(r.input_hash.as_str()) {
            s.tasks += 1;
            last_hash = Some(&r.input_hash);
        }
        let issue = || TaskIssue {
            group: r.group.clone(),
            p: r.p,
            reason: r.reason.clone().unwrap_or_default(),
        };
        match r.kind {
            RecordKind::Skip => s.skipped.push(issue()),
            RecordKind::Error => s.errors.push(issue()),
            RecordKind::Block => {}
        }
        let Some(b) = &r.block else { continue };
        s.blocks += 1;
        for c in b.machinery.iter().filter(|c| !c.passed) {
            s.machinery_failures.push(TaskIssue {
                group: r.group.clone(),
                p: r.p,
                reason: format!("{}: {}", c.name, c.detail),
            });
        }
        for v in &b.verdicts {
            let tally = s.check_counts.entry(v.check.clone()).or_default();
            if !v.applicable {
                continue;
            }
            tally.applicable += 1;
            if v.satisfied {
                tally.satisfied += 1;
            } else {
                tally.failed += 1;
                let entry = VerdictEntry {
                    group: r.group.clone(),
                    p: r.p,
                    block: b.index,
                    check: v.check.clone(),
                    lhs: v.lhs,
                    rhs: v.rhs.clone(),
                    strict: v.strict,
                };
                if v.is_theorem_failure() {
                    s.theorem_failures.push(entry);
                } else {
                    s.conjecture_counterexamples.push(entry);
                }
            }
        }
    }
    s
}

fn parse_records(text: &str) -> (Vec<CorpusRecord>, Vec<usize>) {
    // Complete lines only; a trailing fragment or unparsable line ends the scan.
    let mut records = Vec::new();
    let mut ends = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.ends_with('\n') {
            break;
        }
        match serde_json::from_str::<CorpusRecord>(line.trim_end()) {
            Ok(r) => records.push(r),
            Err(_) => break,
        }
        offset += line.len();
        ends.push(offset);
    }
    (records, ends)
}

/// Reads a records file, ignoring a truncated or corrupt tail.
pub fn read_records(path: &Path) -> io::Result<Vec<CorpusRecord>> {
    Ok(parse_records(&fs::read_to_string(path)?).0)
}

/// Complete task groups of consecutive records, keyed by input hash, with
/// each group's byte range.
fn complete_groups(records: &[CorpusRecord], ends: &[usize]) -> Vec<(String, usize, usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let n = records[i].task_records.max(1);
        let j = i + n;
        if j > records.len() || records[i..j].iter().any(|r| r.input_hash != records[i].input_hash) {
            i += 1;
            continue;
        }
        let start = if i == 0 { 0 } else { ends[i - 1] };
        out.push((records[i].input_hash.clone(), start, ends[j - 1], i));
        i = j;
    }
    out
}

/// Progress callback payload.
#[derive(Clone, Debug)]
pub struct Progress<'a> {
    pub done: usize,
    pub total: usize,
    pub task: &'a Task,
    pub reused: bool,
}

/// Sweeps the corpus into `out_dir`, writing the records file incrementally.
///
/// With `resume`, the longest prefix of the existing records file that matches
/// the task order is kept, complete tasks elsewhere in it are reused, and the
/// rest is computed; the result is byte-identical to a single pass.
pub fn run_corpus(config: &CorpusConfig, out_dir: &Path, resume: bool, mut progress: impl FnMut(Progress<'_>)) -> io::Result<CorpusSummary> {
    let tasks = corpus_tasks(config).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(RECORDS_FILE);
    let mut reusable: HashMap<String, String> = HashMap::new();
    let mut kept = 0;
    let mut keep_bytes = 0;
    if resume && path.exists() {
        let text = fs::read_to_string(&path)?;
        let (records, ends) = parse_records(&text);
        let groups = complete_groups(&records, &ends);
        let mut prefix_open = true;
        for (hash, start, end, _) in &groups {
            if prefix_open && kept < tasks.len() && tasks[kept].input_hash == *hash && *start == keep_bytes {
                kept += 1;
                keep_bytes = *end;
            } else {
                prefix_open = false;
                reusable.insert(hash.clone(), text[*start..*end].to_string());
            }
        }
    }
    let file = OpenOptions::new().create(true).write(true).truncate(false).open(&path)?;
    file.set_len(keep_bytes as u64)?;
    let mut writer = BufWriter::new(file);
    io::Seek::seek(&mut writer, io::SeekFrom::End(0))?;
    for (i, t) in tasks[..kept].iter().enumerate() {
        progress(Progress {
            done: i + 1,
            total: tasks.len(),
            task: t,
            reused: true,
        });
    }
    let opts = TaskOptions::from_config(config);
    let rest = &tasks[kept..];
    for_each_ordered(
        rest,
        config.parallelism,
        |t| match reusable.get(&t.input_hash) {
            Some(text) => (text.clone(), true),
            None => (records_to_lines(&analyze_task(&t.group, t.p, &opts)), false),
        },
        |i, (text, reused)| {
            writer.write_all(text.as_bytes())?;
            writer.flush()?;
            progress(Progress {
                done: kept + i + 1,
                total: tasks.len(),
                task: &rest[i],
                reused,
            });
            Ok::<_, io::Error>(())
        },
    )?;
    writer.flush()?;
    drop(writer);
    finish(config, out_dir)
}

fn records_to_lines(records: &[CorpusRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Writes the summary (and CSV) for the records file already in `out_dir`.
fn finish(config: &CorpusConfig, out_dir: &Path) -> io::Result<CorpusSummary> {
    let bytes = fs::read(out_dir.join(RECORDS_FILE))?;
    let records = parse_records(std::str::from_utf8(&bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?).0;
    let summary = summarize(&records, config.seed, hex::encode(Sha256::digest(&bytes)));
    write_json(&out_dir.join(SUMMARY_FILE), &summary)?;
    if config.csv {
        write_csv(&out_dir.join(CSV_FILE), &records)?;
    }
    Ok(summary)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

/// One row per block record.
pub fn write_csv(path: &Path, records: &[CorpusRecord]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record([
        "group", "order", "p", "block", "principal", "field_degree", "d", "e", "defect_abelian", "abelian_type",
        "dim_center", "loewy_length", "ll_mod_reynolds", "rho", "subsections", "theorem_failures", "counterexamples",
    ])?;
    for r in records {
        let Some(b) = &r.block else { continue };
        let ty = b.abelian_type.as_ref().map(|t| format!("{t:?}")).unwrap_or_default();
        let count = |f: fn(&BoundVerdict) -> bool| b.verdicts.iter().filter(|v| f(v)).count().to_string();
        w.write_record([
            r.group.clone(),
            r.order.to_string(),
            r.p.to_string(),
            b.index.to_string(),
            b.principal.to_string(),
            b.field_degree.to_string(),
            b.defect.to_string(),
            b.exponent_log.to_string(),
            b.defect_abelian.to_string(),
            ty,
            b.dim_center.to_string(),
            b.loewy_length.to_string(),
            b.ll_mod_reynolds.to_string(),
            b.rho.to_string(),
            b.subsections.len().to_string(),
            count(BoundVerdict::is_theorem_failure),
            count(BoundVerdict::is_counterexample),
        ])?;
    }
    w.flush()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginRow {
    pub group: String,
    pub order: usize,
    pub p: u64,
    pub block: usize,
    pub d: u32,
    pub e: u32,
    pub loewy_length: u64,
    pub rhs: u64,
    /// `rhs - LL(ZB)`; non-positive is a counterexample.
    pub margin: i64,
    pub counterexample: bool,
    pub seed: u64,
    pub input_hash: String,
    /// Command that recomputes the block.
    pub reproduce: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub blocks_considered: usize,
    pub excluded_abelian: usize,
    pub counterexamples: usize,
    /// Sorted by margin, then group, prime and block.
    pub rows: Vec<MarginRow>,
}

/// Margins of the non-abelian-defect conjecture over the block records.
pub fn conjecture_report(records: &[CorpusRecord]) -> ConjectureReport {
    let mut rows = Vec::new();
    let mut excluded = 0;
    for r in records {
        let Some(b) = &r.block else { continue };
        if b.defect_abelian {
            excluded += 1;
            continue;
        }
        let Some(v) = b.verdicts.iter().find(|v| v.check == "loewy_conjecture" && v.applicable) else {
            continue;
        };
        let Quantity::Integer(rhs) = v.rhs else { continue };
        let margin = rhs as i64 - v.lhs as i64;
        rows.push(MarginRow {
            group: r.group.clone(),
            order: r.order,
            p: r.p,
            block: b.index,
            d: b.defect,
            e: b.exponent_log,
            loewy_length: v.lhs,
            rhs,
            margin,
            counterexample: !v.satisfied,
            seed: r.seed,
            input_hash: r.input_hash.clone(),
            reproduce: format!("loewy analyze --group '{}' --prime {} --seed {}", r.group, r.p, r.seed),
        });
    }
    rows.sort_by(|a, b| (a.margin, &a.group, a.p, a.block).cmp(&(b.margin, &b.group, b.p, b.block)));
    ConjectureReport {
        blocks_considered: rows.len() + excluded,
        excluded_abelian: excluded,
        counterexamples: rows.iter().filter(|r| r.counterexample).count(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> CorpusConfig {
        CorpusConfig {
            families: vec![],
            groups: ["S3", "C4", "D8", "C6", "A4", "Q8", "C3:C4(2)"].map(String::from).to_vec(),
            ..CorpusConfig::default()
        }
    }

    #[test]
    fn family_members() {
        let ab = Family::Abelian.members(false);
        assert_eq!(ab.len(), 44 + 11);
        assert!(ab.contains(&GroupSpec::Cyclic(128)));
        assert!(ab.contains(&GroupSpec::Abelian(vec![3, 3, 3, 3])));
        assert_eq!(Family::Abelian.members(true).len(), 44 + 22 + 11 + 7);
        assert_eq!(Family::parse_list("all").unwrap().len(), 10);
        assert!(Family::parse_list("").unwrap().is_empty());
        assert!(Family::parse_list("dihedral,bogus").is_err());
        for f in Family::ALL {
            for s in f.members(false) {
                assert_eq!(s.to_string().parse::<GroupSpec>().unwrap(), s);
            }
        }
    }

    #[test]
    fn semidirect_members_are_groups() {
        let members = semidirect_members(40);
        assert!(members.contains(&GroupSpec::Semidirect { n: 7, m: 3, a: 2 }));
        assert!(!members.iter().any(|s| matches!(s, GroupSpec::Semidirect { n: 5, m: 2, a: 4 })));
        for s in members {
            s.build().unwrap();
        }
    }

    #[test]
    fn default_task_count() {
        let tasks = corpus_tasks(&CorpusConfig::default()).unwrap();
        assert!(tasks.len() >= 150, "{}", tasks.len());
        let empty = CorpusConfig {
            families: vec![],
            ..CorpusConfig::default()
        };
        assert!(corpus_tasks(&empty).unwrap().is_empty());
    }

    #[test]
    fn allowlist_matching() {
        let mut a = ControlledAllowlist::default();
        assert!(!a.matches("S3", 0));
        a.push("S4@1").unwrap();
        a.push("C2*C2").unwrap();
        assert!(a.matches("S4", 1) && !a.matches("S4", 0));
        assert!(a.matches("C2*C2", 5));
        assert!(ControlledAllowlist::everything().matches("anything", 3));
        assert_ne!(
            TaskOptions { controlled: a.clone(), ..TaskOptions::from_config(&CorpusConfig::default()) }.input_hash("S4", 2),
            TaskOptions::from_config(&CorpusConfig::default()).input_hash("S4", 2)
        );
    }

    #[test]
    fn skip_records() {
        let opts = TaskOptions::from_config(&CorpusConfig::default());
        let r = analyze_task("C37", 37, &opts);
        assert_eq!(r[0].kind, RecordKind::Block);
        let r = analyze_task("C74", 2, &opts);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].kind, RecordKind::Skip);
        let r = analyze_task("X9", 3, &opts);
        assert_eq!(r[0].kind, RecordKind::Error);
    }

    #[test]
    fn run_resume_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CorpusConfig { csv: true, ..small_config() };
        let full = run_corpus(&cfg, dir.path(), false, |_| {}).unwrap();
        assert!(full.passed(), "{full:?}");
        let bytes = fs::read(dir.path().join(RECORDS_FILE)).unwrap();
        let records = read_records(&dir.path().join(RECORDS_FILE)).unwrap();
        assert_eq!(full.records, records.len());
        assert_eq!(full.tasks, corpus_tasks(&cfg).unwrap().len());
        let applicable: usize = full.check_counts.values().map(|t| t.applicable).sum();
        let counted = records.iter().flat_map(|r| &r.block).flat_map(|b| &b.verdicts).filter(|v| v.applicable).count();
        assert_eq!(applicable, counted);
        assert!(dir.path().join(CSV_FILE).exists());

        // cut mid-line, then resume
        let cut = bytes.len() * 3 / 5;
        fs::write(dir.path().join(RECORDS_FILE), &bytes[..cut]).unwrap();
        let mut reused = 0;
        let resumed = run_corpus(&cfg, dir.path(), true, |p| reused += p.reused as usize).unwrap();
        assert!(reused > 0);
        assert_eq!(fs::read(dir.path().join(RECORDS_FILE)).unwrap(), bytes);
        assert_eq!(resumed, full);

        // resume with nothing missing recomputes nothing
        let mut fresh = 0;
        run_corpus(&cfg, dir.path(), true, |p| fresh += (!p.reused) as usize).unwrap();
        assert_eq!(fresh, 0);
        assert_eq!(fs::read(dir.path().join(RECORDS_FILE)).unwrap(), bytes);
    }

    #[test]
    fn sequential_matches_parallel() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let seq = CorpusConfig { parallelism: Parallelism::Sequential, ..small_config() };
        run_corpus(&seq, a.path(), false, |_| {}).unwrap();
        run_corpus(&small_config(), b.path(), false, |_| {}).unwrap();
        assert_eq!(fs::read(a.path().join(RECORDS_FILE)).unwrap(), fs::read(b.path().join(RECORDS_FILE)).unwrap());
    }

    #[test]
    fn conjecture_rows() {
        let opts = TaskOptions::from_config(&CorpusConfig::default());
        let mut records = analyze_task("D8", 2, &opts);
        records.extend(analyze_task("C4", 2, &opts));
        let report = conjecture_report(&records);
        assert_eq!((report.blocks_considered, report.excluded_abelian), (2, 1));
        let row = &report.rows[0];
        assert_eq!((row.d, row.e, row.rhs), (3, 2, 4));
        assert_eq!(row.margin, 4 - row.loewy_length as i64);
        assert!(row.reproduce.contains("--group 'D8' --prime 2"));
    }
}
