//! Concrete finite groups backed by a full multiplication table.
//!
//! Every group, whatever its construction, is reduced to elements `0..n` with
//! the identity at index 0 and a table of products. Subgroups are sorted index
//! lists into a parent group.

mod build;
mod iso;

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

pub use build::{GroupSpec, MAX_ORDER};
pub use iso::MAX_ISO_ORDER;

use crate::error::{Error, Result};

/// Index of an element inside its group.
pub type GroupElement = usize;

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: GroupElement,
    pub members: Vec<GroupElement>,
    pub centralizer_order: usize,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// `d(C)`: the exponent of `p` in `|C_G(x)|`.
    pub fn defect(&self, p: u64) -> u32 {
        p_adic_valuation(self.centralizer_order as u64, p)
    }
}

#[derive(Debug)]
struct ClassData {
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
    /// `conjugator[x]` conjugates the representative of `x`'s class onto `x`.
    conjugator: Vec<u16>,
}

#[derive(Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
    orders: Vec<u32>,
    gens: Vec<GroupElement>,
    classes: OnceLock<ClassData>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            n: self.n,
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            orders: self.orders.clone(),
            gens: self.gens.clone(),
            classes: OnceLock::new(),
        }
    }
}

/// A subgroup of some parent group, as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<GroupElement>,
    gens: Vec<GroupElement>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    fn membership(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &g in &self.elements {
            m[g] = true;
        }
        m
    }
}

pub fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn p_part(n: u64, p: u64) -> u64 {
    p.pow(p_adic_valuation(n, p))
}

pub fn is_p_power(n: u64, p: u64) -> bool {
    p_part(n, p) == n
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m as i64) as u64
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table with identity at 0.
    pub fn from_table(n: usize, table: Vec<u16>) -> Result<FiniteGroup> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                cap: MAX_ORDER,
            });
        }
        if table.len() != n * n {
            return Err(Error::Internal("table has the wrong size".into()));
        }
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(Error::Internal("index 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![u16::MAX; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            match row.iter().position(|&x| x == 0) {
                Some(b) => inverse[a] = b as u16,
                None => return Err(Error::Internal(format!("element {a} has no inverse"))),
            }
        }
        let mut g = FiniteGroup {
            n,
            table,
            inverse,
            orders: Vec::new(),
            gens: Vec::new(),
            classes: OnceLock::new(),
        };
        g.orders = (0..n).map(|a| g.compute_order(a)).collect();
        let all: Vec<GroupElement> = (0..n).collect();
        g.gens = g.greedy_generators(&all);
        Ok(g)
    }

    fn compute_order(&self, a: GroupElement) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
            assert!(k as usize <= self.n + 1, "non-periodic element");
        }
        k
    }

    /// Greedy generating set for the subgroup with the given elements, preferring
    /// elements of large order.
    fn greedy_generators(&self, elements: &[GroupElement]) -> Vec<GroupElement> {
        let mut candidates = elements.to_vec();
        candidates.sort_by_key(|&g| (std::cmp::Reverse(self.orders[g]), g));
        let mut gens = Vec::new();
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut count = 1;
        for g in candidates {
            if count == elements.len() {
                break;
            }
            if !inside[g] {
                gens.push(g);
                let closure = self.closure(&gens);
                count = closure.len();
                for x in closure {
                    inside[x] = true;
                }
            }
        }
        gens
    }

    fn closure(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> GroupElement {
        0
    }

    #[inline]
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: GroupElement) -> GroupElement {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: GroupElement, e: i64) -> GroupElement {
        let o = self.orders[a] as i64;
        let mut e = e.rem_euclid(o);
        let mut base = a;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: GroupElement, x: GroupElement) -> GroupElement {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn elem_order(&self, a: GroupElement) -> u32 {
        self.orders[a]
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &o| acc / gcd(acc, o as u64) * o as u64)
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.n).collect(),
            gens: self.gens.clone(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            elements: vec![0],
            gens: Vec::new(),
        }
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[GroupElement]) -> Subgroup {
        let elements = self.closure(gens);
        let gens = self.greedy_generators(&elements);
        Subgroup { elements, gens }
    }

    /// Wraps a set already known to be a subgroup.
    pub fn subgroup_from_elements(&self, mut elements: Vec<GroupElement>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let gens = self.greedy_generators(&elements);
        let sub = Subgroup { elements, gens };
        debug_assert_eq!(self.closure(&sub.gens), sub.elements, "not a subgroup");
        sub
    }

    /// Checks closure of an arbitrary subset.
    pub fn is_subgroup(&self, elements: &[GroupElement]) -> bool {
        let set: HashSet<_> = elements.iter().copied().collect();
        set.contains(&0)
            && elements
                .iter()
                .all(|&a| elements.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| {
            let n = self.n;
            let mut class_of = vec![u32::MAX; n];
            let mut conjugator = vec![0u16; n];
            let mut classes = Vec::new();
            for x in 0..n {
                if class_of[x] != u32::MAX {
                    continue;
                }
                let idx = classes.len() as u32;
                class_of[x] = idx;
                let mut members = vec![x];
                let mut head = 0;
                while head < members.len() {
                    let y = members[head];
                    head += 1;
                    for &s in &self.gens {
                        let z = self.conj(s, y);
                        if class_of[z] == u32::MAX {
                            class_of[z] = idx;
                            conjugator[z] = self.mul(s, conjugator[y] as usize) as u16;
                            members.push(z);
                        }
                    }
                }
                members.sort_unstable();
                let size = members.len();
                classes.push(ConjClass {
                    rep: x,
                    members,
                    centralizer_order: n / size,
                });
            }
            ClassData {
                classes,
                class_of,
                conjugator,
            }
        })
    }

    /// Conjugacy classes ordered by least member; the identity class comes first.
    pub fn conj_classes(&self) -> &[ConjClass] {
        &self.class_data().classes
    }

    pub fn class_of(&self, x: GroupElement) -> usize {
        self.class_data().class_of[x] as usize
    }

    /// An element `g` with `g rep g^-1 = x`, `rep` the representative of `x`'s class.
    pub fn class_conjugator(&self, x: GroupElement) -> GroupElement {
        self.class_data().conjugator[x] as usize
    }

    pub fn centralizer(&self, g: GroupElement) -> Subgroup {
        self.centralizer_of_set(&[g])
    }

    pub fn centralizer_of_set(&self, set: &[GroupElement]) -> Subgroup {
        let elements: Vec<_> = (0..self.n)
            .filter(|&h| set.iter().all(|&s| self.mul(h, s) == self.mul(s, h)))
            .collect();
        self.subgroup_from_elements(elements)
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer_of_set(&self.gens)
    }

    /// Centralizer in `h` of an element (`C_H(u)`).
    pub fn centralizer_in(&self, h: &Subgroup, u: GroupElement) -> Subgroup {
        let elements: Vec<_> = h
            .elements
            .iter()
            .copied()
            .filter(|&x| self.mul(x, u) == self.mul(u, x))
            .collect();
        self.subgroup_from_elements(elements)
    }

    pub fn center_of(&self, h: &Subgroup) -> Subgroup {
        let elements: Vec<_> = h
            .elements
            .iter()
            .copied()
            .filter(|&x| h.gens.iter().all(|&s| self.mul(x, s) == self.mul(s, x)))
            .collect();
        self.subgroup_from_elements(elements)
    }

    pub fn is_abelian_subgroup(&self, h: &Subgroup) -> bool {
        h.gens
            .iter()
            .all(|&a| h.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let member = h.membership(self.n);
        let elements: Vec<_> = (0..self.n)
            .filter(|&g| h.gens.iter().all(|&s| member[self.conj(g, s)]))
            .collect();
        self.subgroup_from_elements(elements)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let member = h.membership(self.n);
        self.gens
            .iter()
            .all(|&g| h.gens.iter().all(|&s| member[self.conj(g, s)]))
    }

    /// `g H g^-1`.
    pub fn conjugate_subgroup(&self, h: &Subgroup, g: GroupElement) -> Subgroup {
        let mut elements: Vec<_> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        elements.sort_unstable();
        let gens = h.gens.iter().map(|&x| self.conj(g, x)).collect();
        Subgroup { elements, gens }
    }

    /// Whether some `G`-conjugate of `q` lies inside `p` (`Q <=_G P`).
    pub fn conjugate_subgroup_leq(&self, q: &Subgroup, p: &Subgroup) -> bool {
        self.conjugate_subgroup_leq_within(&self.whole(), q, p)
    }

    /// Whether some `H`-conjugate of `q` lies inside `p`.
    pub fn conjugate_subgroup_leq_within(&self, h: &Subgroup, q: &Subgroup, p: &Subgroup) -> bool {
        if q.order() > p.order() || !p.order().is_multiple_of(q.order()) {
            return false;
        }
        if q.is_trivial() {
            return true;
        }
        let member = p.membership(self.n);
        h.elements
            .iter()
            .any(|&g| q.gens.iter().all(|&s| member[self.conj(g, s)]))
    }

    pub fn is_p_element(&self, g: GroupElement, p: u64) -> bool {
        is_p_power(self.orders[g] as u64, p)
    }

    pub fn is_p_regular(&self, g: GroupElement, p: u64) -> bool {
        !(self.orders[g] as u64).is_multiple_of(p)
    }

    /// Splits `g` into commuting `p`- and `p'`-parts, both powers of `g`.
    pub fn p_decomposition(&self, g: GroupElement, p: u64) -> (GroupElement, GroupElement) {
        let n = self.orders[g] as u64;
        let pa = p_part(n, p);
        let m = n / pa;
        let s = (m * mod_inverse(m, pa)) % n;
        let t = (n + 1 - s) % n;
        (self.pow(g, s as i64), self.pow(g, t as i64))
    }

    /// A Sylow `p`-subgroup, grown from a `p`-element of maximal order by
    /// repeatedly adjoining `p`-elements of the normalizer.
    pub fn sylow(&self, p: u64) -> Subgroup {
        self.sylow_within(&self.whole(), p)
    }

    /// A Sylow `p`-subgroup of the subgroup `h`.
    pub fn sylow_within(&self, h: &Subgroup, p: u64) -> Subgroup {
        let target = p_part(h.order() as u64, p) as usize;
        if target == 1 {
            return self.trivial();
        }
        let start = h
            .elements
            .iter()
            .copied()
            .filter(|&g| g != 0 && self.is_p_element(g, p))
            .max_by_key(|&g| (self.orders[g], std::cmp::Reverse(g)))
            .expect("p divides the order, so a p-element exists");
        let mut sub = self.generate(&[start]);
        while sub.order() < target {
            let member = sub.membership(self.n);
            let extra = h
                .elements
                .iter()
                .copied()
                .find(|&g| {
                    !member[g]
                        && self.is_p_element(g, p)
                        && sub.gens.iter().all(|&s| member[self.conj(g, s)])
                })
                .expect("a non-Sylow p-subgroup is properly contained in its normalizer's Sylow");
            let mut gens = sub.gens.clone();
            gens.push(extra);
            sub = self.generate(&gens);
        }
        sub
    }

    /// The subgroup as a standalone group, with the embedding of its elements.
    pub fn subgroup_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<GroupElement>) {
        let m = h.order();
        let mut index = vec![u16::MAX; self.n];
        for (i, &g) in h.elements.iter().enumerate() {
            index[g] = i as u16;
        }
        let mut table = Vec::with_capacity(m * m);
        for &a in &h.elements {
            for &b in &h.elements {
                table.push(index[self.mul(a, b)]);
            }
        }
        let g = FiniteGroup::from_table(m, table).expect("subgroup table is a group");
        (g, h.elements.clone())
    }

    /// `G/N` with the projection `G -> G/N`. Cosets are ordered by least member.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, Vec<GroupElement>)> {
        if !self.is_normal(normal) {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset_of[g] == usize::MAX {
                for &x in &normal.elements {
                    coset_of[self.mul(g, x)] = reps.len();
                }
                reps.push(g);
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(coset_of[self.mul(a, b)] as u16);
            }
        }
        Ok((FiniteGroup::from_table(m, table)?, coset_of))
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let mut comms: Vec<_> = (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        comms.sort_unstable();
        comms.dedup();
        self.generate(&comms)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        is_p_power(self.n as u64, p)
    }

    pub fn is_p_subgroup(&self, h: &Subgroup, p: u64) -> bool {
        is_p_power(h.order() as u64, p)
    }

    /// `e` with `p^e` the largest element order of the `p`-subgroup.
    pub fn exponent_log(&self, h: &Subgroup, p: u64) -> Result<u32> {
        if !self.is_p_subgroup(h, p) {
            return Err(Error::NotPGroup(p));
        }
        let max = h.elements.iter().map(|&g| self.orders[g]).max().unwrap_or(1);
        Ok(p_adic_valuation(max as u64, p))
    }

    /// Invariant type `(e_1 >= ... >= e_r)` of an abelian `p`-subgroup.
    pub fn abelian_type(&self, h: &Subgroup, p: u64) -> Result<Vec<u32>> {
        if !self.is_p_subgroup(h, p) {
            return Err(Error::NotPGroup(p));
        }
        if !self.is_abelian_subgroup(h) {
            return Err(Error::NotAbelian);
        }
        // |{x : x^(p^i) = 1}| = p^(sum_j min(e_j, i)).
        let e = self.exponent_log(h, p)?;
        let mut omega_log = vec![0u32];
        for i in 1..=e {
            let bound = p.pow(i);
            let count = h
                .elements
                .iter()
                .filter(|&&g| bound % self.orders[g] as u64 == 0)
                .count();
            omega_log.push(p_adic_valuation(count as u64, p));
        }
        // at_least[i] = #{j : e_j >= i}
        let at_least: Vec<u32> = (1..=e as usize)
            .map(|i| omega_log[i] - omega_log[i - 1])
            .collect();
        let rank = at_least.first().copied().unwrap_or(0);
        Ok((0..rank)
            .map(|j| at_least.iter().filter(|&&c| c > j).count() as u32)
            .collect())
    }

    pub fn is_cyclic_subgroup(&self, h: &Subgroup) -> bool {
        h.elements
            .iter()
            .any(|&g| self.orders[g] as usize == h.order())
    }

    /// Every subgroup of `h`, sorted by order then elements. Intended for small `h`.
    pub fn subgroups_of(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut seen: HashSet<Vec<GroupElement>> = HashSet::new();
        let mut all = vec![self.trivial()];
        seen.insert(vec![0]);
        let mut head = 0;
        while head < all.len() {
            let cur = all[head].clone();
            head += 1;
            for &g in &h.elements {
                if cur.contains(g) {
                    continue;
                }
                let mut gens = cur.gens.clone();
                gens.push(g);
                let elements = self.closure(&gens);
                if seen.insert(elements.clone()) {
                    all.push(self.subgroup_from_elements(elements));
                }
            }
        }
        all.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> FiniteGroup {
        s.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    #[test]
    fn class_examples() {
        let s3 = build("S3");
        let sizes: Vec<_> = s3.conj_classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let c7 = build("C7");
        assert!(c7.conj_classes().iter().all(|c| c.size() == 1));
        assert_eq!(c7.conj_classes().len(), 7);
        let d8 = build("D8");
        let mut sizes: Vec<_> = d8.conj_classes().iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(build("ES+(3)").conj_classes().len(), 11);
    }

    #[test]
    fn class_invariants() {
        for s in ["S4", "A5", "D20", "Q16", "W(4,3)", "C7:C3(2)", "S3*C4"] {
            let g = build(s);
            let total: usize = g.conj_classes().iter().map(|c| c.size()).sum();
            assert_eq!(total, g.order());
            for c in g.conj_classes() {
                assert_eq!(g.order() % c.size(), 0);
                assert_eq!(c.size() * c.centralizer_order, g.order());
                assert_eq!(c.size() * g.centralizer(c.rep).order(), g.order());
                for &x in &c.members {
                    assert_eq!(g.conj(g.class_conjugator(x), c.rep), x);
                }
            }
        }
    }

    #[test]
    fn centralizer_examples() {
        let s3 = build("S3");
        let three_cycle = s3.conj_classes()[2].rep;
        let c = s3.centralizer(three_cycle);
        assert_eq!(c.order(), 3);
        assert!(s3.is_cyclic_subgroup(&c));
        assert_eq!(s3.centralizer(0).order(), 6);
        let d8 = build("D8");
        let r = (0..8).find(|&g| d8.elem_order(g) == 4).unwrap();
        let c = d8.centralizer(r);
        assert_eq!(c, d8.generate(&[r]));
    }

    #[test]
    fn sylow_examples() {
        let s4 = build("S4");
        let p = s4.sylow(2);
        assert_eq!(p.order(), 8);
        assert!(!s4.is_abelian_subgroup(&p));
        let (d, _) = s4.subgroup_group(&p);
        assert!(d.is_isomorphic(&build("D8")).unwrap());
        let c12 = build("C12");
        let p = c12.sylow(3);
        assert_eq!(p.order(), 3);
        assert!(c12.sylow(5).is_trivial());
    }

    #[test]
    fn sylow_conjugates_cover_p_elements() {
        for (s, p) in [("S4", 2), ("S4", 3), ("A5", 2), ("D24", 2), ("C7:C3(2)", 3), ("S3*S3", 3)] {
            let g = build(s);
            let syl = g.sylow(p);
            assert_eq!(syl.order() as u64, p_part(g.order() as u64, p));
            let mut covered = vec![false; g.order()];
            for x in 0..g.order() {
                for &y in syl.elements() {
                    covered[g.conj(x, y)] = true;
                }
            }
            for (x, &c) in covered.iter().enumerate() {
                assert_eq!(c, g.is_p_element(x, p), "{s} element {x}");
            }
        }
    }

    #[test]
    fn p_decomposition_examples() {
        let c6 = build("C6");
        let g = (0..6).find(|&x| c6.elem_order(x) == 6).unwrap();
        assert_eq!(c6.p_decomposition(g, 3), (c6.pow(g, 4), c6.pow(g, 3)));
        let c12 = build("C12");
        let g = (0..12).find(|&x| c12.elem_order(x) == 12).unwrap();
        let (a, b) = c12.p_decomposition(g, 2);
        assert_eq!((a, b), (c12.pow(g, 9), c12.pow(g, 4)));
        assert_eq!((c12.elem_order(a), c12.elem_order(b)), (4, 3));
        let c8 = build("C8");
        assert_eq!(c8.p_decomposition(1, 2), (1, 0));
    }

    #[test]
    fn p_decomposition_exhaustive() {
        for s in ["S4", "C12*S3", "Q16*C3", "A5"] {
            let g = build(s);
            for p in [2, 3, 5] {
                for x in 0..g.order() {
                    let (a, b) = g.p_decomposition(x, p);
                    assert_eq!(g.mul(a, b), x);
                    assert_eq!(g.mul(b, a), x);
                    assert!(g.is_p_element(a, p));
                    assert!(g.is_p_regular(b, p));
                    // uniqueness among commuting factorizations
                    for a2 in 0..g.order() {
                        if a2 != a && g.is_p_element(a2, p) {
                            let b2 = g.mul(g.inv(a2), x);
                            let commuting = g.mul(a2, b2) == g.mul(b2, a2);
                            assert!(!(commuting && g.is_p_regular(b2, p)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let c4 = build("C4");
        let (q, _) = c4.quotient(&c4.whole()).unwrap();
        assert_eq!(q.order(), 1);
        let g = (0..4).find(|&x| c4.elem_order(x) == 4).unwrap();
        let sub = c4.generate(&[c4.pow(g, 2)]);
        let (q, _) = c4.quotient(&sub).unwrap();
        assert_eq!(q.order(), 2);
        let d8 = build("D8");
        let (q, proj) = d8.quotient(&d8.center()).unwrap();
        assert_eq!(q.order(), 4);
        assert!((1..4).all(|x| q.elem_order(x) == 2));
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(proj[d8.mul(a, b)], q.mul(proj[a], proj[b]));
            }
        }
        let s3 = build("S3");
        let t = s3.conj_classes()[1].rep;
        assert_eq!(s3.quotient(&s3.generate(&[t])).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn abelian_type_examples() {
        let g = build("Ab[4,2]");
        assert_eq!(g.abelian_type(&g.whole(), 2).unwrap(), vec![2, 1]);
        let g = build("Ab[3,3,3]");
        assert_eq!(g.abelian_type(&g.whole(), 3).unwrap(), vec![1, 1, 1]);
        let g = build("Ab[3,9,3]");
        assert_eq!(g.abelian_type(&g.whole(), 3).unwrap(), vec![2, 1, 1]);
        let g = build("D8");
        assert_eq!(g.abelian_type(&g.whole(), 2), Err(Error::NotAbelian));
        let g = build("C6");
        assert_eq!(g.abelian_type(&g.whole(), 2), Err(Error::NotPGroup(2)));
    }

    #[test]
    fn exponent_examples() {
        let g = build("C8");
        assert_eq!(g.exponent_log(&g.whole(), 2).unwrap(), 3);
        let g = build("ES+(3)");
        assert_eq!(g.exponent_log(&g.whole(), 3).unwrap(), 1);
        let g = build("W(4,3)");
        assert_eq!(g.exponent_log(&g.whole(), 3).unwrap(), 2);
    }

    #[test]
    fn conjugate_containment() {
        let s4 = build("S4");
        let p = s4.sylow(2);
        assert!(s4.conjugate_subgroup_leq(&s4.trivial(), &p));
        assert!(s4.conjugate_subgroup_leq(&p, &p));
        assert!(!s4.conjugate_subgroup_leq(&s4.whole(), &p));
        // every 2-subgroup lands in the Sylow
        for x in 0..24 {
            if s4.is_p_element(x, 2) {
                assert!(s4.conjugate_subgroup_leq(&s4.generate(&[x]), &p));
            }
        }
        let three = (0..24).find(|&x| s4.elem_order(x) == 3).unwrap();
        assert!(!s4.conjugate_subgroup_leq(&s4.generate(&[three]), &p));
    }

    #[test]
    fn subgroup_enumeration() {
        let g = build("Ab[2,2]");
        assert_eq!(g.subgroups_of(&g.whole()).len(), 5);
        let g = build("C8");
        assert_eq!(g.subgroups_of(&g.whole()).len(), 4);
        let g = build("Ab[2,2,2]");
        assert_eq!(g.subgroups_of(&g.whole()).len(), 16);
    }
}
