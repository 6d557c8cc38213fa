//! Group descriptors and their constructors.
//!
//! Structured families are realized as normal-form tuples under an explicit
//! multiplication law; `Sym`, `Alt` and `perm:[...]` use permutations. Both end
//! up as a [`FiniteGroup`] table with elements in lexicographic order of their
//! native encoding, identity first.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::field::is_prime;

pub const MAX_ORDER: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Abelian(Vec<usize>),
    /// Dihedral group of the given order `2n`.
    Dihedral(usize),
    /// Generalized quaternion group of the given order `2^n >= 8`.
    Quaternion(usize),
    Sym(usize),
    Alt(usize),
    /// `p^{1+2}_+`, order `p^3`, exponent `p`, for odd `p`.
    ExtraspecialPlus(u64),
    /// `<x,y,z | x^(p^(d-2)) = y^p = z^p = [x,y] = [x,z] = 1, [y,z] = x^(p^(d-3))>`.
    W { d: u32, p: u64 },
    /// `C_n : C_m` where the generator of `C_m` acts by `x -> x^a`.
    Semidirect { n: usize, m: usize, a: usize },
    Direct(Vec<GroupSpec>),
    /// Permutation group generated by the listed permutations, each a list of cycles
    /// on points `1..`.
    Perm(Vec<Vec<Vec<usize>>>),
}

fn checked_order(factors: impl IntoIterator<Item = usize>) -> Result<usize> {
    let mut n: usize = 1;
    for f in factors {
        n = n.saturating_mul(f);
    }
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            cap: MAX_ORDER,
        });
    }
    Ok(n)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Descriptor(msg.into())
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Builds a table for tuples in `radices` under `law(x, y, out)`.
fn tuple_group<F>(radices: &[u64], law: F) -> Result<FiniteGroup>
where
    F: Fn(&[u64], &[u64], &mut [u64]),
{
    let n = checked_order(radices.iter().map(|&r| r as usize))?;
    let width = radices.len();
    let mut tuples = vec![0u64; n * width];
    for idx in 0..n {
        let mut rest = idx as u64;
        for j in (0..width).rev() {
            tuples[idx * width + j] = rest % radices[j];
            rest /= radices[j];
        }
    }
    let encode = |t: &[u64]| -> usize {
        t.iter()
            .zip(radices)
            .fold(0u64, |acc, (&x, &r)| acc * r + x % r) as usize
    };
    let mut out = vec![0u64; width];
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let x = &tuples[a * width..(a + 1) * width];
        for b in 0..n {
            let y = &tuples[b * width..(b + 1) * width];
            law(x, y, &mut out);
            table.push(encode(&out) as u16);
        }
    }
    FiniteGroup::from_table(n, table)
}

fn abelian(radices: &[u64]) -> Result<FiniteGroup> {
    tuple_group(radices, |x, y, out| {
        for j in 0..radices.len() {
            out[j] = (x[j] + y[j]) % radices[j];
        }
    })
}

fn heisenberg_like(d: u32, p: u64) -> Result<FiniteGroup> {
    let big = p.pow(d - 2);
    let shift = p.pow(d - 3);
    tuple_group(&[big, p, p], |x, y, out| {
        out[0] = (x[0] + y[0] + shift * ((x[1] * y[2]) % p)) % big;
        out[1] = (x[1] + y[1]) % p;
        out[2] = (x[2] + y[2]) % p;
    })
}

fn perm_group(gens: &[Vec<u8>]) -> Result<FiniteGroup> {
    let degree = gens.iter().map(|g| g.len()).max().unwrap_or(0);
    let ident: Vec<u8> = (0..degree as u8).collect();
    let gens: Vec<Vec<u8>> = gens
        .iter()
        .map(|g| {
            let mut full = g.clone();
            full.extend(g.len() as u8..degree as u8);
            full
        })
        .collect();
    let mut seen: HashSet<Vec<u8>> = HashSet::from([ident.clone()]);
    let mut elems = vec![ident];
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for s in &gens {
            // (x*s)(i) = x(s(i)): apply s first.
            let y: Vec<u8> = (0..degree).map(|i| x[s[i] as usize]).collect();
            if seen.insert(y.clone()) {
                elems.push(y);
                if elems.len() > MAX_ORDER {
                    return Err(Error::OrderTooLarge {
                        order: elems.len(),
                        cap: MAX_ORDER,
                    });
                }
            }
        }
    }
    from_permutations(elems)
}

fn from_permutations(mut elems: Vec<Vec<u8>>) -> Result<FiniteGroup> {
    elems.sort();
    let n = elems.len();
    let degree = elems[0].len();
    let index: std::collections::HashMap<&[u8], usize> =
        elems.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut table = Vec::with_capacity(n * n);
    let mut buf = vec![0u8; degree];
    for x in &elems {
        for y in &elems {
            for i in 0..degree {
                buf[i] = x[y[i] as usize];
            }
            table.push(index[buf.as_slice()] as u16);
        }
    }
    FiniteGroup::from_table(n, table)
}

fn all_permutations(n: usize, even_only: bool) -> Vec<Vec<u8>> {
    fn rec(cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    if even_only {
        out.retain(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            inversions % 2 == 0
        });
    }
    if out.is_empty() {
        out.push(Vec::new());
    }
    out
}

fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let (na, nb) = (a.order(), b.order());
    let n = checked_order([na, nb])?;
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (x1, x2) = (x / nb, x % nb);
        for y in 0..n {
            let (y1, y2) = (y / nb, y % nb);
            table.push((a.mul(x1, y1) * nb + b.mul(x2, y2)) as u16);
        }
    }
    FiniteGroup::from_table(n, table)
}

impl GroupSpec {
    /// The order, when it can be read off without building the group.
    pub fn declared_order(&self) -> Option<usize> {
        use GroupSpec::*;
        Some(match self {
            Cyclic(n) => *n,
            Abelian(ns) => ns.iter().fold(1usize, |a, &b| a.saturating_mul(b)),
            Dihedral(n) | Quaternion(n) => *n,
            Sym(n) => (1..=*n).fold(1usize, |a, b| a.saturating_mul(b)),
            Alt(n) => ((1..=*n).fold(1usize, |a, b| a.saturating_mul(b)) / 2).max(1),
            ExtraspecialPlus(p) => (*p as usize).saturating_pow(3),
            W { d, p } => (*p as usize).saturating_pow(*d),
            Semidirect { n, m, .. } => n.saturating_mul(*m),
            Direct(parts) => {
                let mut acc = 1usize;
                for s in parts {
                    acc = acc.saturating_mul(s.declared_order()?);
                }
                acc
            }
            Perm(_) => return None,
        })
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        use GroupSpec::*;
        if let Some(n) = self.declared_order() {
            checked_order([n])?;
        }
        match self {
            Cyclic(n) => {
                if *n == 0 {
                    return Err(bad("C0"));
                }
                abelian(&[*n as u64])
            }
            Abelian(ns) => {
                if ns.is_empty() || ns.contains(&0) {
                    return Err(bad("abelian invariants must be positive"));
                }
                abelian(&ns.iter().map(|&n| n as u64).collect::<Vec<_>>())
            }
            Dihedral(order) => {
                if *order < 2 || order % 2 != 0 {
                    return Err(bad(format!("dihedral order {order} must be even")));
                }
                let n = (*order / 2) as u64;
                tuple_group(&[n, 2], |x, y, out| {
                    let turned = if x[1] == 1 { (n - y[0]) % n } else { y[0] };
                    out[0] = (x[0] + turned) % n;
                    out[1] = (x[1] + y[1]) % 2;
                })
            }
            Quaternion(order) => {
                if *order < 8 || !order.is_power_of_two() {
                    return Err(bad(format!("quaternion order {order} must be 2^n >= 8")));
                }
                let n2 = (*order / 2) as u64;
                let half = n2 / 2;
                tuple_group(&[n2, 2], |x, y, out| {
                    let turned = if x[1] == 1 { (n2 - y[0]) % n2 } else { y[0] };
                    let carry = if x[1] == 1 && y[1] == 1 { half } else { 0 };
                    out[0] = (x[0] + turned + carry) % n2;
                    out[1] = (x[1] + y[1]) % 2;
                })
            }
            Sym(n) | Alt(n) => {
                if *n > 6 {
                    return Err(bad("Sym/Alt degree must be at most 6"));
                }
                from_permutations(all_permutations(*n, matches!(self, Alt(_))))
            }
            ExtraspecialPlus(p) => {
                if !is_prime(*p) || *p == 2 {
                    return Err(bad("ES+(p) needs an odd prime"));
                }
                heisenberg_like(3, *p)
            }
            W { d, p } => {
                if !is_prime(*p) || *d < 3 {
                    return Err(bad("W(d,p) needs d >= 3 and p prime"));
                }
                heisenberg_like(*d, *p)
            }
            Semidirect { n, m, a } => {
                let (n64, m64, a64) = (*n as u64, *m as u64, *a as u64);
                if *n == 0 || *m == 0 {
                    return Err(bad("semidirect factors must be nontrivial"));
                }
                if n64 > 1 && (gcd(a64, n64) != 1 || pow_mod(a64, m64, n64) != 1 % n64) {
                    return Err(bad(format!(
                        "x -> x^{a} is not an automorphism of order dividing {m} on C{n}"
                    )));
                }
                let powers: Vec<u64> = (0..m64).map(|j| pow_mod(a64, j, n64)).collect();
                tuple_group(&[n64, m64], |x, y, out| {
                    out[0] = (x[0] + powers[x[1] as usize] * y[0]) % n64;
                    out[1] = (x[1] + y[1]) % m64;
                })
            }
            Direct(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| bad("empty direct product"))?;
                let mut acc = first.build()?;
                for s in it {
                    acc = direct_product(&acc, &s.build()?)?;
                }
                Ok(acc)
            }
            Perm(gens) => {
                let degree = gens.iter().flatten().flatten().copied().max().unwrap_or(0);
                if degree > 250 {
                    return Err(bad("permutation degree too large"));
                }
                let mut images = Vec::new();
                for cycles in gens {
                    let mut img: Vec<u8> = (0..degree as u8).collect();
                    let mut touched = HashSet::new();
                    for cyc in cycles {
                        for &pt in cyc {
                            if pt == 0 || !touched.insert(pt) {
                                return Err(bad("cycles must use distinct points >= 1"));
                            }
                        }
                        for (i, &pt) in cyc.iter().enumerate() {
                            img[pt - 1] = (cyc[(i + 1) % cyc.len()] - 1) as u8;
                        }
                    }
                    images.push(img);
                }
                perm_group(&images)
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupSpec::*;
        match self {
            Cyclic(n) => write!(f, "C{n}"),
            Abelian(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "Ab[{}]", parts.join(","))
            }
            Dihedral(n) => write!(f, "D{n}"),
            Quaternion(n) => write!(f, "Q{n}"),
            Sym(n) => write!(f, "S{n}"),
            Alt(n) => write!(f, "A{n}"),
            ExtraspecialPlus(p) => write!(f, "ES+({p})"),
            W { d, p } => write!(f, "W({d},{p})"),
            Semidirect { n, m, a } => write!(f, "C{n}:C{m}({a})"),
            Direct(parts) => {
                let s: Vec<String> = parts
                    .iter()
                    .map(|p| match p {
                        Direct(_) => format!("({p})"),
                        _ => p.to_string(),
                    })
                    .collect();
                write!(f, "{}", s.join("*"))
            }
            Perm(gens) => {
                let g: Vec<String> = gens
                    .iter()
                    .map(|cycles| {
                        if cycles.is_empty() {
                            return "()".to_string();
                        }
                        cycles
                            .iter()
                            .map(|c| {
                                let pts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                                format!("({})", pts.join(" "))
                            })
                            .collect::<String>()
                    })
                    .collect();
                write!(f, "perm:[{}]", g.join(","))
            }
        }
    }
}

/// Splits on `sep` outside any brackets or parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn num<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("expected a number, got {s:?}")))
}

fn parse_perm(body: &str) -> Result<GroupSpec> {
    let inner = body
        .trim()
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| bad("perm:[...] expects a bracketed generator list"))?;
    let mut gens = Vec::new();
    for gen in split_top(inner, ',') {
        let gen = gen.trim();
        if gen.is_empty() {
            continue;
        }
        let mut cycles = Vec::new();
        let mut rest = gen;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| bad(format!("bad cycle syntax in {gen:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| bad(format!("unclosed cycle in {gen:?}")))?;
            let pts: Vec<usize> = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(num)
                .collect::<Result<_>>()?;
            if pts.len() > 1 {
                cycles.push(pts);
            }
            rest = open[close + 1..].trim_start();
        }
        gens.push(cycles);
    }
    Ok(GroupSpec::Perm(gens))
}

fn parse_factor(s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty descriptor"));
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return inner.parse();
    }
    if let Some(body) = s.strip_prefix("perm:") {
        return parse_perm(body);
    }
    if let Some(inner) = s.strip_prefix("Ab[").and_then(|r| r.strip_suffix(']')) {
        let ns = inner.split(',').map(num).collect::<Result<Vec<usize>>>()?;
        return Ok(GroupSpec::Abelian(ns));
    }
    if let Some(inner) = s.strip_prefix("ES+(").and_then(|r| r.strip_suffix(')')) {
        return Ok(GroupSpec::ExtraspecialPlus(num(inner)?));
    }
    if let Some(inner) = s.strip_prefix("W(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 2 {
            return Err(bad("W(d,p) takes two arguments"));
        }
        return Ok(GroupSpec::W {
            d: num(parts[0])?,
            p: num(parts[1])?,
        });
    }
    if let Some(rest) = s.strip_prefix('C') {
        if let Some((left, right)) = rest.split_once(':') {
            let right = right
                .strip_prefix('C')
                .ok_or_else(|| bad("semidirect syntax is Cn:Cm(a)"))?;
            let (m, a) = right
                .strip_suffix(')')
                .and_then(|r| r.split_once('('))
                .ok_or_else(|| bad("semidirect syntax is Cn:Cm(a)"))?;
            return Ok(GroupSpec::Semidirect {
                n: num(left)?,
                m: num(m)?,
                a: num(a)?,
            });
        }
        return Ok(GroupSpec::Cyclic(num(rest)?));
    }
    let (head, tail) = s.split_at(1);
    match head {
        "D" => Ok(GroupSpec::Dihedral(num(tail)?)),
        "Q" => Ok(GroupSpec::Quaternion(num(tail)?)),
        "S" => Ok(GroupSpec::Sym(num(tail)?)),
        "A" => Ok(GroupSpec::Alt(num(tail)?)),
        _ => Err(bad(format!("unknown group {s:?}"))),
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        let parts = split_top(s, '*');
        if parts.len() == 1 {
            return parse_factor(parts[0]);
        }
        Ok(GroupSpec::Direct(
            parts.into_iter().map(parse_factor).collect::<Result<_>>()?,
        ))
    }
}
