//! Exact arithmetic in GF(p^k).
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` whose
//! base-`p` digits are the coefficients of its residue polynomial modulo the
//! field's defining polynomial. Prime fields use plain modular arithmetic;
//! extension fields of order at most 2^20 use log/antilog/Zech tables and
//! larger ones fall back to polynomial arithmetic on the digits.

use std::fmt;

use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 20;
const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn raw(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug)]
enum Arith {
    Prime,
    Tables {
        log: Vec<u32>,
        exp: Vec<u64>,
        zech: Vec<u32>,
    },
    Poly,
}

/// The finite field GF(p^k) with a fixed monic irreducible modulus.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    k: usize,
    order: u64,
    modulus: Vec<u64>,
    arith: Arith,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    /// GF(p^k) with the lexicographically least monic irreducible modulus of degree `k`.
    pub fn new(p: u64, k: usize) -> Result<FieldCtx> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        if !(1..=16).contains(&k) {
            return Err(Error::DegreeOutOfRange(k));
        }
        let mut order: u64 = 1;
        for _ in 0..k {
            order = order
                .checked_mul(p)
                .filter(|&q| q < 1 << 62)
                .ok_or(Error::FieldTooLarge { p, k })?;
        }
        if k == 1 {
            return Ok(FieldCtx {
                p,
                k,
                order,
                modulus: vec![0, 1],
                arith: Arith::Prime,
            });
        }
        let modulus = least_irreducible(p, k);
        let mut ctx = FieldCtx {
            p,
            k,
            order,
            modulus,
            arith: Arith::Poly,
        };
        if order <= TABLE_LIMIT {
            ctx.arith = ctx.build_tables();
        }
        Ok(ctx)
    }

    pub fn prime_field(p: u64) -> Result<FieldCtx> {
        FieldCtx::new(p, 1)
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of the modulus, constant term first; the last entry is 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The class of `x` modulo the defining polynomial (the integer `n` in a prime field).
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.p)
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_raw(&self, raw: u64) -> FieldElement {
        assert!(raw < self.order, "encoded element out of range");
        FieldElement(raw)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.k);
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c % self.p;
        }
        FieldElement(v)
    }

    /// Residue-polynomial coefficients, constant term first, length `k`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut out = vec![0; self.k];
        let mut v = a.0;
        for c in out.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    /// Every element, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    /// Whether the element lies in the prime subfield.
    pub fn in_prime_field(&self, a: FieldElement) -> bool {
        a.0 < self.p
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.arith {
            Arith::Prime => {
                let s = a.0 + b.0;
                FieldElement(if s >= self.p { s - self.p } else { s })
            }
            _ if self.p == 2 => FieldElement(a.0 ^ b.0),
            Arith::Tables { log, exp, zech } => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let m = self.order - 1;
                let la = log[a.0 as usize] as u64;
                let lb = log[b.0 as usize] as u64;
                let n = (lb + m - la) % m;
                let z = zech[n as usize];
                if z == NO_LOG {
                    FieldElement::ZERO
                } else {
                    FieldElement(exp[(la + z as u64) as usize])
                }
            }
            Arith::Poly => self.add_digits(a, b),
        }
    }

    fn add_digits(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.k {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 || self.p == 2 {
            return a;
        }
        match &self.arith {
            Arith::Prime => FieldElement(self.p - a.0),
            Arith::Tables { log, exp, .. } => {
                let half = (self.order - 1) / 2;
                FieldElement(exp[(log[a.0 as usize] as u64 + half) as usize])
            }
            Arith::Poly => {
                let mut x = a.0;
                let mut out = 0u64;
                let mut place = 1u64;
                for _ in 0..self.k {
                    let d = x % self.p;
                    out += ((self.p - d) % self.p) * place;
                    x /= self.p;
                    place = place.wrapping_mul(self.p);
                }
                FieldElement(out)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.arith {
            Arith::Prime => FieldElement(if a.0 >= b.0 {
                a.0 - b.0
            } else {
                a.0 + self.p - b.0
            }),
            _ => self.add(a, self.neg(b)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.arith {
            Arith::Prime => FieldElement(a.0 * b.0 % self.p),
            Arith::Tables { log, exp, .. } => {
                FieldElement(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
            }
            Arith::Poly => self.mul_digits(a, b),
        }
    }

    fn mul_digits(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p as u128;
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let mut prod = vec![0u128; 2 * self.k - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u128 * yj as u128) % p;
            }
        }
        for d in (self.k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..self.k].iter().enumerate() {
                let t = c * m as u128 % p;
                let slot = &mut prod[d - self.k + i];
                *slot = (*slot + p - t) % p;
            }
        }
        let digits: Vec<u64> = prod[..self.k].iter().map(|&c| c as u64).collect();
        self.from_coeffs(&digits)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero");
        match &self.arith {
            Arith::Prime => {
                let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                FieldElement(t0.rem_euclid(self.p as i64) as u64)
            }
            Arith::Tables { log, exp, .. } => {
                let m = self.order - 1;
                FieldElement(exp[((m - log[a.0 as usize] as u64) % m) as usize])
            }
            Arith::Poly => self.pow(a, self.order - 2),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    /// The Frobenius image `a^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// The unique `b` with `b^(p^s) = a`.
    pub fn frobenius_root(&self, a: FieldElement, s: u32) -> FieldElement {
        // Frobenius has order k, so its inverse s-fold iterate is the (k - s mod k)-fold iterate.
        let steps = (self.k - (s as usize % self.k)) % self.k;
        let mut b = a;
        for _ in 0..steps {
            b = self.frobenius(b);
        }
        b
    }

    pub fn format(&self, a: FieldElement) -> String {
        if self.k == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &ci)| ci != 0)
            .map(|(i, &ci)| match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "w".to_string(),
                (1, _) => format!("{ci}w"),
                (_, 1) => format!("w^{i}"),
                _ => format!("{ci}w^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn build_tables(&self) -> Arith {
        let q = self.order;
        let m = q - 1;
        let factors = prime_factors(m);
        let generator = (2..q)
            .map(FieldElement)
            .find(|&g| factors.iter().all(|&r| self.pow(g, m / r) != FieldElement::ONE))
            .expect("finite field has a primitive element");
        let mut log = vec![NO_LOG; q as usize];
        let mut exp = vec![0u64; 2 * m as usize];
        let mut cur = FieldElement::ONE;
        for i in 0..m {
            exp[i as usize] = cur.0;
            exp[(i + m) as usize] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_digits(cur, generator);
        }
        let zech = (0..m)
            .map(|n| {
                let s = self.add_digits(FieldElement::ONE, FieldElement(exp[n as usize]));
                log[s.0 as usize]
            })
            .collect();
        Arith::Tables { log, exp, zech }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

// Dense polynomials over GF(p), constant term first, used only to pick moduli.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = {
        let (mut acc, mut base, mut e) = (1u64, m[dm] % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            let slot = &mut r[d - dm + i];
            *slot = (*slot + p - c * mi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn pmulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    prem(&out, m, p)
}

fn ppowmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = prem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulmod(&acc, &base, m, p);
        }
        base = pmulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = prem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's test over the prime field.
pub(crate) fn is_irreducible_prime_poly(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut frob = vec![x.clone()];
    for _ in 0..k {
        let last = frob.last().unwrap();
        frob.push(ppowmod(last, p, f, p));
    }
    let mut full = frob[k].clone();
    trim(&mut full);
    if prem(&full, f, p) != prem(&x, f, p) {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|r| {
        let mut h = frob[k / r as usize].clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = pgcd(f, &h, p);
        g.len() == 1
    })
}

fn least_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for c in 0..count {
        let mut f = Vec::with_capacity(k + 1);
        let mut v = c;
        for _ in 0..k {
            f.push(v % p);
            v /= p;
        }
        if f[0] == 0 {
            continue;
        }
        f.push(1);
        if is_irreducible_prime_poly(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldCtx::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(FieldCtx::new(2, 0), Err(Error::DegreeOutOfRange(0)));
        assert_eq!(FieldCtx::new(2, 17), Err(Error::DegreeOutOfRange(17)));
    }

    #[test]
    fn small_moduli() {
        assert_eq!(FieldCtx::new(2, 1).unwrap().order(), 2);
        assert_eq!(FieldCtx::new(3, 1).unwrap().order(), 3);
        assert_eq!(FieldCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        // x^3 + x + 1 is the least irreducible cubic over GF(2).
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        // x^2 + 1 over GF(3).
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn frobenius_examples() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.frobenius(f3.from_int(2)), f3.from_int(2));
        let f4 = FieldCtx::new(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.frobenius(w), f4.add(w, f4.one()));
        assert_eq!(f4.frobenius(f4.zero()), f4.zero());
    }

    fn check_axioms(ctx: &FieldCtx) {
        let els: Vec<_> = ctx.elements().collect();
        for &a in &els {
            assert_eq!(ctx.add(a, ctx.neg(a)), ctx.zero());
            assert_eq!(ctx.sub(a, a), ctx.zero());
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a)), ctx.one());
            }
            let mut f = a;
            for _ in 0..ctx.degree() {
                f = ctx.frobenius(f);
            }
            assert_eq!(f, a);
            for &b in &els {
                assert_eq!(ctx.add(a, b), ctx.add(b, a));
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                assert_eq!(
                    ctx.frobenius(ctx.add(a, b)),
                    ctx.add(ctx.frobenius(a), ctx.frobenius(b))
                );
                assert_eq!(
                    ctx.frobenius(ctx.mul(a, b)),
                    ctx.mul(ctx.frobenius(a), ctx.frobenius(b))
                );
                for &c in els.iter().step_by(1 + els.len() / 9) {
                    assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                    assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                    assert_eq!(
                        ctx.mul(a, ctx.add(b, c)),
                        ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (3, 4), (7, 2)] {
            check_axioms(&FieldCtx::new(p, k).unwrap());
        }
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        let ctx = FieldCtx::new(3, 5).unwrap();
        let slow = FieldCtx {
            arith: Arith::Poly,
            ..ctx.clone()
        };
        for a in ctx.elements().step_by(7) {
            for b in ctx.elements().step_by(11) {
                assert_eq!(ctx.mul(a, b), slow.mul(a, b));
                assert_eq!(ctx.add(a, b), slow.add(a, b));
                assert_eq!(ctx.neg(a), slow.neg(a));
            }
        }
    }

    #[test]
    fn large_field_uses_polynomial_path() {
        let ctx = FieldCtx::new(2, 16).unwrap();
        assert!(matches!(ctx.arith, Arith::Tables { .. }) || ctx.order() > TABLE_LIMIT);
        let a = ctx.from_raw(12345);
        assert_eq!(ctx.mul(a, ctx.inv(a)), ctx.one());
        assert_eq!(ctx.frobenius_root(ctx.frobenius(a), 1), a);
    }
}
