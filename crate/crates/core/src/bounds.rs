//! The function `rho(m, n)`, the closed form of `LL(FD)` for abelian `D`, and
//! every Loewy-length inequality as a named check returning a [`BoundVerdict`].

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockRecord, GroupAnalysis, Subsection};
use crate::comalg::IdealBasis;
use crate::error::Result;

/// `rho(m, n) = q(p^n - 1) + p^r` for `m = qn + r`, and `rho(m, 0) = 1`.
///
/// Panics if the value does not fit in `u64`.
pub fn rho(m: u32, n: u32, p: u64) -> u64 {
    checked_rho(m, n, p).expect("rho overflows u64")
}

/// [`rho`], or `None` on `u64` overflow.
pub fn checked_rho(m: u32, n: u32, p: u64) -> Option<u64> {
    if n == 0 {
        return Some(1);
    }
    let (q, r) = ((m / n) as u64, m % n);
    q.checked_mul(p.checked_pow(n)? - 1)?.checked_add(p.checked_pow(r)?)
}

/// Whether `rho(m, n) = rho(k, l)` is forced for `m <= k`, `n <= l`.
pub fn rho_equality_case(m: u32, n: u32, k: u32, l: u32) -> bool {
    l == 0 || (n == l && l < m && m == k) || (m == k && m <= n)
}

/// Outcome of an exhaustive sweep of the monotonicity and range properties of `rho`.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct RhoSuiteReport {
    pub comparisons: usize,
    pub violations: Vec<String>,
}

/// Checks, for all `m, n, k, l` up to the given maxima and each prime:
/// `rho(m,n) <= rho(k,l)` when `m <= k, n <= l`, with equality exactly in the
/// forced cases, and `1 <= rho(m,n) <= p^m`.
pub fn rho_property_suite(max_m: u32, max_n: u32, primes: &[u64]) -> RhoSuiteReport {
    assert!(max_m <= 12 && max_n <= 12, "sweep bounds are capped at 12");
    let mut report = RhoSuiteReport::default();
    for &p in primes {
        for m in 0..=max_m {
            for n in 0..=max_n {
                let a = rho(m, n, p);
                if !(1..=p.pow(m)).contains(&a) {
                    report.violations.push(format!("p={p}: rho({m},{n}) = {a} outside [1, p^{m}]"));
                }
                for k in m..=max_m {
                    for l in n..=max_n {
                        report.comparisons += 1;
                        let b = rho(k, l, p);
                        if a > b {
                            report.violations.push(format!("p={p}: rho({m},{n}) = {a} > rho({k},{l}) = {b}"));
                        } else if (a == b) != rho_equality_case(m, n, k, l) {
                            report.violations.push(format!(
                                "p={p}: rho({m},{n}) = {a}, rho({k},{l}) = {b}, equality case predicts {}",
                                rho_equality_case(m, n, k, l)
                            ));
                        }
                    }
                }
            }
        }
    }
    report
}

/// `LL(FD)` for abelian `D` of a given type, next to `rho(d, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbelianLoewy {
    /// `sum p^(e_i) - r + 1`.
    pub ll: u64,
    /// `rho(d, e)` with `d = sum e_i`, `e = max e_i`.
    pub rho: u64,
    /// Whether the sorted type is `(e, ..., e, f)`, the shape for which `ll = rho`.
    pub equality_shape: bool,
}

pub fn ll_abelian_formula(abelian_type: &[u32], p: u64) -> AbelianLoewy {
    let mut ty = abelian_type.to_vec();
    ty.sort_unstable_by(|a, b| b.cmp(a));
    let ll = ty.iter().map(|&e| p.pow(e)).sum::<u64>() + 1 - ty.len() as u64;
    let d = ty.iter().sum();
    let e = ty.first().copied().unwrap_or(0);
    let inner = if ty.len() > 2 { &ty[1..ty.len() - 1] } else { &[] };
    AbelianLoewy {
        ll,
        rho: rho(d, e, p),
        equality_shape: inner.iter().all(|&x| x == e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Theorem,
    Conjecture,
}

/// An exact bound: an integer, or a reduced fraction written `n/d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Integer(u64),
    Fraction(String),
}

impl Quantity {
    fn from_ratio(r: Ratio<u64>) -> Quantity {
        if r.is_integer() {
            Quantity::Integer(r.to_integer())
        } else {
            Quantity::Fraction(format!("{}/{}", r.numer(), r.denom()))
        }
    }

    /// Parses back to an exact fraction.
    pub fn to_ratio(&self) -> Option<Ratio<u64>> {
        match self {
            Quantity::Integer(n) => Some(Ratio::from_integer(*n)),
            Quantity::Fraction(s) => {
                let (n, d) = s.split_once('/')?;
                let d: u64 = d.parse().ok()?;
                (d != 0).then_some(Ratio::new(n.parse().ok()?, d))
            }
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Integer(n) => write!(f, "{n}"),
            Quantity::Fraction(s) => f.write_str(s),
        }
    }
}

/// One inequality instance. When `applicable`,
/// `satisfied == (strict ? lhs < rhs : lhs <= rhs)`; otherwise `satisfied` is true.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub check: String,
    pub applicable: bool,
    pub lhs: u64,
    pub rhs: Quantity,
    pub strict: bool,
    pub satisfied: bool,
    pub classification: Classification,
    pub hypothesis_note: String,
}

impl BoundVerdict {
    fn compare(check: &str, classification: Classification, lhs: u64, rhs: Ratio<u64>, strict: bool, note: impl Into<String>) -> Self {
        let l = Ratio::from_integer(lhs);
        BoundVerdict {
            check: check.to_string(),
            applicable: true,
            lhs,
            rhs: Quantity::from_ratio(rhs),
            strict,
            satisfied: if strict { l < rhs } else { l <= rhs },
            classification,
            hypothesis_note: note.into(),
        }
    }

    fn theorem(check: &str, lhs: u64, rhs: u64, strict: bool, note: impl Into<String>) -> Self {
        Self::compare(check, Classification::Theorem, lhs, Ratio::from_integer(rhs), strict, note)
    }

    fn skipped(check: &str, classification: Classification, strict: bool, note: impl Into<String>) -> Self {
        BoundVerdict {
            check: check.to_string(),
            applicable: false,
            lhs: 0,
            rhs: Quantity::Integer(0),
            strict,
            satisfied: true,
            classification,
            hypothesis_note: note.into(),
        }
    }

    /// True for an applicable theorem verdict that does not hold.
    pub fn is_theorem_failure(&self) -> bool {
        self.applicable && !self.satisfied && self.classification == Classification::Theorem
    }

    /// True for an applicable conjecture verdict that does not hold.
    pub fn is_counterexample(&self) -> bool {
        self.applicable && !self.satisfied && self.classification == Classification::Conjecture
    }

    /// `rhs - lhs`, exactly.
    pub fn margin(&self) -> Option<String> {
        let r = self.rhs.to_ratio()?;
        let l = Ratio::from_integer(self.lhs);
        Some(if r >= l {
            Quantity::from_ratio(r - l).to_string()
        } else {
            format!("-{}", Quantity::from_ratio(l - r))
        })
    }
}

pub const CHECK_NAMES: &[&str] = &[
    "okuyama",
    "kulshammer_nilpotency",
    "rho_abelian",
    "rho_abelian_equality",
    "abelian_lower_bound",
    "kos_general",
    "kos_cyclic_maximal",
    "kos_nonabelian",
    "rho_small_2group",
    "rho_metacyclic",
    "three_p_d_minus_2",
    "w_family",
    "controlled_not_w",
    "controlled_small_exponent",
    "reynolds_quotient",
    "dominated_subsections",
    "central_subgroup_ideals",
    "controlled_radical_power",
    "brauer_dimension",
    "loewy_conjecture",
];

/// Flags that widen or narrow the checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckContext {
    /// The user asserts that the block is controlled.
    pub assume_controlled: bool,
    /// Ideal containments over subgroups of `Z(D)` run only for `|G|` at most this.
    pub central_ideal_max_order: usize,
}

impl Default for CheckContext {
    fn default() -> Self {
        CheckContext {
            assume_controlled: false,
            central_ideal_max_order: 200,
        }
    }
}

const USER_ASSERTED: &str = "hypothesis user-asserted: block is controlled";

/// All checks for block `index` of the analysis, in [`CHECK_NAMES`] order.
pub fn check_block(analysis: &GroupAnalysis, index: usize, cx: &CheckContext) -> Result<Vec<BoundVerdict>> {
    let center = &analysis.center;
    let b = &analysis.blocks[index];
    let subsections = analysis.subsections.get(index).map(Vec::as_slice).unwrap_or(&[]);
    let group = center.group();
    let p = center.prime();
    let (d, e) = (b.defect, b.exponent_log);
    let ll = b.loewy_length as u64;
    let abelian = b.defect_abelian;
    let theorem = Classification::Theorem;
    let mut out = Vec::with_capacity(CHECK_NAMES.len());

    out.push(BoundVerdict::theorem("okuyama", ll, p.pow(d), false, "LL(ZB) <= p^d"));

    let (index_max, z_note) = radical_nilpotency(center, b, p.pow(e));
    out.push(BoundVerdict::theorem("kulshammer_nilpotency", index_max, p.pow(e), false, z_note));

    let rho_de = rho(d, e, p);
    if abelian {
        out.push(BoundVerdict::theorem("rho_abelian", ll, rho_de, false, "D abelian: LL(ZB) <= rho(d, e)"));
    } else {
        out.push(BoundVerdict::skipped("rho_abelian", theorem, false, "D non-abelian"));
    }
    out.push(match (&b.abelian_type, group.order() as u64 == p.pow(d)) {
        (Some(ty), true) => {
            let shape = ll_abelian_formula(ty, p).equality_shape;
            if shape {
                BoundVerdict::theorem("rho_abelian_equality", rho_de, ll, false, format!("G = D of type {ty:?}: equality LL(ZB) = rho(d, e) expected"))
            } else {
                BoundVerdict::theorem("rho_abelian_equality", ll, rho_de, true, format!("G = D of type {ty:?}: strict LL(ZB) < rho(d, e) expected"))
            }
        }
        _ => BoundVerdict::skipped("rho_abelian_equality", theorem, false, "needs G = D abelian"),
    });

    if abelian {
        let lower = (p.pow(e) + p - 2) / (p - 1);
        out.push(BoundVerdict::theorem("abelian_lower_bound", lower, ll, false, "D abelian: (p^e + p - 2)/(p - 1) <= LL(ZB)"));
    } else {
        out.push(BoundVerdict::skipped("abelian_lower_bound", theorem, false, "D non-abelian"));
    }

    if d >= 1 {
        let (dr, er) = (Ratio::from_integer(d as u64), Ratio::from_integer(e as u64));
        let one = Ratio::from_integer(1u64);
        let rhs = (dr / er + one) * (dr / Ratio::from_integer(2) + Ratio::new(1, p - 1)) * Ratio::from_integer(p.pow(e) - 1);
        out.push(BoundVerdict::compare("kos_general", theorem, ll, rhs, false, "d >= 1: LL(ZB) <= (d/e + 1)(d/2 + 1/(p-1))(p^e - 1)"));
    } else {
        out.push(BoundVerdict::skipped("kos_general", theorem, false, "d = 0"));
    }

    if !abelian && e + 1 == d {
        let rhs = if p == 2 { (1 << (e - 1)) + 1 } else { p.pow(e - 1) };
        out.push(BoundVerdict::theorem("kos_cyclic_maximal", ll, rhs, false, "D non-abelian with a cyclic maximal subgroup"));
    } else {
        out.push(BoundVerdict::skipped("kos_cyclic_maximal", theorem, false, "needs non-abelian D with e = d - 1"));
    }

    if !abelian {
        let rhs = if p <= 3 { p.pow(d - 1) } else { 4 * p.pow(d - 2) };
        out.push(BoundVerdict::theorem("kos_nonabelian", ll, rhs, true, "D non-abelian"));
    } else {
        out.push(BoundVerdict::skipped("kos_nonabelian", theorem, true, "D abelian"));
    }

    if !abelian && p == 2 && (d == 3 || d == 4) {
        out.push(BoundVerdict::theorem("rho_small_2group", ll, rho_de, true, "p = 2, D non-abelian of order 8 or 16"));
    } else {
        out.push(BoundVerdict::skipped("rho_small_2group", theorem, true, "needs p = 2 and non-abelian D of order 8 or 16"));
    }

    out.push(match (abelian, b.defect_metacyclic) {
        (false, Some(true)) => BoundVerdict::theorem("rho_metacyclic", ll, rho_de, true, "D non-abelian metacyclic"),
        (false, None) => BoundVerdict::skipped("rho_metacyclic", theorem, true, "metacyclicity of D not decided"),
        _ => BoundVerdict::skipped("rho_metacyclic", theorem, true, "needs non-abelian metacyclic D"),
    });

    if abelian {
        out.push(BoundVerdict::skipped("three_p_d_minus_2", theorem, true, "D abelian"));
    } else if b.defect_is_extraspecial && p >= 5 {
        out.push(BoundVerdict::skipped("three_p_d_minus_2", theorem, true, "D is p^{1+2}_+ with p >= 5"));
    } else {
        out.push(BoundVerdict::theorem("three_p_d_minus_2", ll, 3 * p.pow(d - 2), true, "D non-abelian, not p^{1+2}_+ with p >= 5"));
    }

    out.push(match b.defect_is_w {
        Some(true) => {
            let rhs = match d {
                3 => 4 * p - 1,
                4 => 2 * p * p + 2 * p,
                _ => p.pow(d - 2) + 2 * p * (p - 1) + 1,
            };
            BoundVerdict::theorem("w_family", ll, rhs, false, format!("D isomorphic to W({d})"))
        }
        Some(false) => BoundVerdict::skipped("w_family", theorem, false, "D not isomorphic to W(d)"),
        None => BoundVerdict::skipped("w_family", theorem, false, "isomorphism type of D not decided"),
    });

    out.push(if !cx.assume_controlled {
        BoundVerdict::skipped("controlled_not_w", theorem, false, "needs --assume-controlled")
    } else if abelian || b.defect_is_w != Some(false) {
        BoundVerdict::skipped("controlled_not_w", theorem, false, "needs non-abelian D known not to be W(d)")
    } else {
        let rhs = p.pow(d - 2) + 3 * p.pow(d - 3) + p - 1;
        BoundVerdict::theorem("controlled_not_w", ll, rhs, false, USER_ASSERTED)
    });

    out.push(if !cx.assume_controlled {
        BoundVerdict::skipped("controlled_small_exponent", theorem, true, "needs --assume-controlled")
    } else if abelian || e + 3 > d {
        BoundVerdict::skipped("controlled_small_exponent", theorem, true, "needs non-abelian D with e <= d - 3")
    } else {
        BoundVerdict::theorem("controlled_small_exponent", ll, 6 * p.pow(d - 3), true, USER_ASSERTED)
    });

    if (group.order() as u64).is_multiple_of(p) {
        out.push(BoundVerdict::theorem(
            "reynolds_quotient",
            ll,
            b.ll_mod_reynolds as u64 + 1,
            false,
            "p divides |G|: LL(ZB) <= LL(ZB/RB) + 1, with LL of the zero quotient taken as 0",
        ));
    } else {
        out.push(BoundVerdict::skipped("reynolds_quotient", theorem, false, "p does not divide |G|"));
    }

    out.push(dominated_verdict(subsections));
    out.push(central_ideals_verdict(analysis, b, cx)?);
    out.push(controlled_radical_verdict(analysis, b, subsections, cx)?);

    out.push(BoundVerdict::compare(
        "brauer_dimension",
        Classification::Conjecture,
        b.dim_center as u64,
        Ratio::from_integer(p.pow(d)),
        false,
        "dim ZB <= p^d",
    ));

    if !abelian {
        let k = (d - e) as u64;
        out.push(BoundVerdict::compare(
            "loewy_conjecture",
            Classification::Conjecture,
            ll,
            Ratio::from_integer(k * (k + 1) / 2 * p.pow(e)),
            true,
            "D non-abelian: LL(ZB) < (d-e)(d-e+1)/2 p^e",
        ));
    } else {
        out.push(BoundVerdict::skipped("loewy_conjecture", Classification::Conjecture, true, "D abelian"));
    }
    debug_assert!(out.iter().map(|v| v.check.as_str()).eq(CHECK_NAMES.iter().copied()));
    Ok(out)
}

/// Largest nilpotency index over a basis of `J(ZB)`, searched up to `cap + 1`.
fn radical_nilpotency(center: &crate::blocks::GroupAlgebraCenter, b: &BlockRecord, cap: u64) -> (u64, String) {
    let alg = center.algebra();
    let mut worst = 1;
    for z in b.radical.basis() {
        let mut power = z.clone();
        let mut t = 1;
        while t <= cap && power.iter().any(|c| !c.is_zero()) {
            power = alg.mul(&power, z);
            t += 1;
        }
        worst = worst.max(t);
    }
    (worst, format!("max nilpotency index over {} radical basis elements vs p^e", b.radical.dim()))
}

fn dominated_verdict(subsections: &[Subsection]) -> BoundVerdict {
    let name = "dominated_subsections";
    let worst = subsections.iter().max_by_key(|s| {
        let rhs = s.u_order as i64 * s.dominated_loewy_length as i64;
        (s.block.loewy_length as i64 - rhs, std::cmp::Reverse(s.u))
    });
    match worst {
        None => BoundVerdict::skipped(name, Classification::Theorem, false, "no subsections computed"),
        Some(s) => BoundVerdict::theorem(
            name,
            s.block.loewy_length as u64,
            s.u_order as u64 * s.dominated_loewy_length as u64,
            false,
            format!("LL(Zb) <= o(u) LL(Zbbar) on all {} subsections; tightest at u = {}", subsections.len(), s.u),
        ),
    }
}

fn zero_or_power(powers: &[IdealBasis], t: usize) -> Option<&IdealBasis> {
    powers.get(t)
}

fn central_ideals_verdict(analysis: &GroupAnalysis, b: &BlockRecord, cx: &CheckContext) -> Result<BoundVerdict> {
    let name = "central_subgroup_ideals";
    let center = &analysis.center;
    let group = center.group();
    if b.defect_abelian {
        return Ok(BoundVerdict::skipped(name, Classification::Theorem, false, "D abelian"));
    }
    if group.order() > cx.central_ideal_max_order {
        return Ok(BoundVerdict::skipped(name, Classification::Theorem, false, format!("|G| > {}", cx.central_ideal_max_order)));
    }
    let alg = center.algebra();
    let ctx = center.ctx();
    let powers = alg.ideal_powers(&b.radical)?;
    let zd = group.center_of(&b.defect_group);
    let subgroups = group.subgroups_of(&zd);
    let mut failures = 0;
    for q in &subgroups {
        let l = ll_abelian_formula(&group.abelian_type(q, center.prime())?, center.prime()).ll as usize;
        let Some(jl) = zero_or_power(&powers, l) else { continue };
        let lhs = alg.ideal_product(&center.z_leq_ideal(&b.idempotent, q)?, jl);
        if !center.z_lt_ideal(&b.idempotent, q)?.contains_ideal(ctx, &lhs) {
            failures += 1;
        }
    }
    Ok(BoundVerdict::theorem(
        name,
        failures,
        0,
        false,
        format!("Z_<=P(B) J(ZB)^LL(FP) in Z_<P(B) for all {} subgroups P of Z(D); lhs counts failures", subgroups.len()),
    ))
}

fn controlled_radical_verdict(analysis: &GroupAnalysis, b: &BlockRecord, subsections: &[Subsection], cx: &CheckContext) -> Result<BoundVerdict> {
    let name = "controlled_radical_power";
    let skip = |note: &str| Ok(BoundVerdict::skipped(name, Classification::Theorem, false, note));
    if !cx.assume_controlled {
        return skip("needs --assume-controlled");
    }
    if b.defect_abelian {
        return skip("D abelian");
    }
    let Some(m) = subsections.iter().filter(|s| !s.major).map(|s| s.block.loewy_length).max() else {
        return skip("no non-major subsections");
    };
    let center = &analysis.center;
    let group = center.group();
    let powers = center.algebra().ideal_powers(&b.radical)?;
    let target = center.z_leq_ideal(&b.idempotent, &group.center_of(&b.defect_group))?;
    let contained = zero_or_power(&powers, m).is_none_or(|jm| target.contains_ideal(center.ctx(), jm));
    Ok(BoundVerdict::theorem(
        name,
        u64::from(!contained),
        0,
        false,
        format!("{USER_ASSERTED}; J(ZB)^{m} in Z_<=Z(D)(B) with M = {m}; lhs is 1 on failure"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{analyze, AnalysisOptions};
    use crate::group::GroupSpec;
    use proptest::prelude::*;
    use std::sync::Arc;

    /// Independent evaluation of `rho` by repeated subtraction of `n`.
    fn rho_oracle(m: u32, n: u32, p: u64) -> u64 {
        if n == 0 {
            return 1;
        }
        let (mut rest, mut acc) = (m, 0);
        while rest >= n {
            rest -= n;
            acc += p.pow(n) - 1;
        }
        acc + p.pow(rest)
    }

    fn verdicts(spec: &str, p: u64, cx: CheckContext) -> Vec<Vec<BoundVerdict>> {
        let g = Arc::new(spec.parse::<GroupSpec>().unwrap().build().unwrap());
        let a = analyze(g, p, AnalysisOptions::default()).unwrap();
        (0..a.blocks.len()).map(|i| check_block(&a, i, &cx).unwrap()).collect()
    }

    fn find<'a>(vs: &'a [BoundVerdict], name: &str) -> &'a BoundVerdict {
        vs.iter().find(|v| v.check == name).unwrap()
    }

    #[test]
    fn rho_examples() {
        for p in [2, 3, 5, 7, 11] {
            assert_eq!(rho(3, 1, p), 3 * p - 2);
            assert_eq!(rho(7, 0, p), 1);
        }
        assert_eq!(rho(5, 2, 2), 8);
        assert_eq!(rho(4, 2, 2), 7);
        assert_eq!(rho(4, 3, 2), 9);
        assert_eq!(rho(3, 2, 3), 11);
        assert_eq!(rho(0, 0, 3), 1);
        assert_eq!(checked_rho(40, 40, 11), None);
    }

    #[test]
    fn rho_suite_is_clean() {
        let report = rho_property_suite(8, 8, &[2, 3, 5]);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(report.comparisons, 3 * 45 * 45);
    }

    #[test]
    fn abelian_formula_examples() {
        assert_eq!(ll_abelian_formula(&[3], 2).ll, 8);
        assert_eq!(ll_abelian_formula(&[1, 1], 2).ll, 3);
        let x = ll_abelian_formula(&[1, 2], 3);
        assert_eq!((x.ll, x.rho, x.equality_shape), (11, 11, true));
        let y = ll_abelian_formula(&[2, 1, 1, 2], 2);
        assert!(!y.equality_shape);
        assert!(y.ll < y.rho);
        assert_eq!(ll_abelian_formula(&[], 5).ll, 1);
    }

    /// All partitions with parts summing to at most `total`, largest first.
    fn partitions(total: u32) -> Vec<Vec<u32>> {
        fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(cur.clone());
            for part in (1..=max.min(rest)).rev() {
                cur.push(part);
                go(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(total, total, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn abelian_formula_below_rho() {
        for p in [2, 3, 5] {
            for ty in partitions(8) {
                let x = ll_abelian_formula(&ty, p);
                assert!(x.ll <= x.rho, "{ty:?} p={p}");
                assert_eq!(x.ll == x.rho, x.equality_shape, "{ty:?} p={p}");
            }
        }
    }

    #[test]
    fn verdict_serialization() {
        let v = BoundVerdict::compare("kos_general", Classification::Theorem, 2, Ratio::new(7, 2), false, "n");
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["rhs"], "7/2");
        assert_eq!(json["classification"], "theorem");
        assert_eq!(v.margin().unwrap(), "3/2");
        let back: BoundVerdict = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
        let w = BoundVerdict::theorem("okuyama", 5, 4, false, "");
        assert!(w.is_theorem_failure());
        assert_eq!(w.margin().unwrap(), "-1");
    }

    #[test]
    fn symmetric_three_at_three() {
        let vs = &verdicts("S3", 3, CheckContext::default())[0];
        assert_eq!(vs.len(), CHECK_NAMES.len());
        let r = find(vs, "rho_abelian");
        assert_eq!((r.lhs, &r.rhs, r.satisfied), (2, &Quantity::Integer(3), true));
        let low = find(vs, "abelian_lower_bound");
        assert_eq!((low.lhs, &low.rhs), (2, &Quantity::Integer(2)));
        assert!(!find(vs, "loewy_conjecture").applicable);
        assert!(vs.iter().all(|v| v.satisfied));
    }

    #[test]
    fn defect_zero_verdicts() {
        let vs = &verdicts("S3", 2, CheckContext::default())[1];
        let r = find(vs, "rho_abelian");
        assert_eq!((r.lhs, &r.rhs), (1, &Quantity::Integer(1)));
        assert!(!find(vs, "kos_general").applicable);
        assert!(vs.iter().all(|v| v.satisfied));
    }

    #[test]
    fn nilpotent_probe_equality() {
        let vs = &verdicts("C4", 2, CheckContext::default())[0];
        let eq = find(vs, "rho_abelian_equality");
        assert!(eq.applicable && eq.satisfied && !eq.strict);
        assert_eq!((eq.lhs, &eq.rhs), (4, &Quantity::Integer(4)));
        let vs = &verdicts("Ab[2,2,4]", 2, CheckContext::default())[0];
        let eq = find(vs, "rho_abelian_equality");
        assert!(eq.applicable && eq.satisfied && eq.strict);
    }

    #[test]
    fn nonabelian_examples() {
        let vs = &verdicts("D8", 2, CheckContext::default())[0];
        let conj = find(vs, "loewy_conjecture");
        assert_eq!(conj.rhs, Quantity::Integer(4));
        assert!(conj.applicable);
        assert!(find(vs, "rho_metacyclic").applicable);
        assert!(find(vs, "w_family").applicable);
        assert!(find(vs, "central_subgroup_ideals").applicable);
        assert!(vs.iter().all(|v| !v.is_theorem_failure()), "{vs:?}");

        let vs = &verdicts("ES+(3)", 3, CheckContext { assume_controlled: true, ..Default::default() })[0];
        assert_eq!(find(vs, "loewy_conjecture").rhs, Quantity::Integer(9));
        assert!(find(vs, "three_p_d_minus_2").applicable);
        assert!(!find(vs, "controlled_not_w").applicable);
        assert!(find(vs, "controlled_radical_power").applicable);
        assert!(vs.iter().all(|v| !v.is_theorem_failure()), "{vs:?}");
    }

    proptest! {
        #[test]
        fn rho_matches_oracle(m in 0u32..=12, n in 0u32..=12, p in proptest::sample::select(vec![2u64, 3, 5, 7])) {
            prop_assert_eq!(rho(m, n, p), rho_oracle(m, n, p));
        }

        #[test]
        fn rho_monotone(m in 0u32..=10, n in 0u32..=10, dm in 0u32..=2, dn in 0u32..=2, p in proptest::sample::select(vec![2u64, 3, 5])) {
            let (a, b) = (rho(m, n, p), rho(m + dm, n + dn, p));
            prop_assert!(a <= b);
            prop_assert_eq!(a == b, rho_equality_case(m, n, m + dm, n + dn));
            prop_assert!(1 <= a && a <= p.pow(m));
        }
    }
}
