//! Univariate polynomials over GF(q) and their factorization
//! (square-free, distinct-degree, then Cantor-Zassenhaus equal-degree splitting).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Coefficients constant term first, with no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Poly {
        Poly::new(vec![FieldElement::ZERO, FieldElement::ONE])
    }

    /// `x - a`.
    pub fn linear(ctx: &FieldCtx, a: FieldElement) -> Poly {
        Poly::new(vec![ctx.neg(a), FieldElement::ONE])
    }

    pub fn from_ints(ctx: &FieldCtx, ints: &[i64]) -> Poly {
        Poly::new(ints.iter().map(|&c| ctx.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = ctx.inv(self.lead());
        self.scale(ctx, inv)
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FieldElement) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
        Poly::new((0..n).map(|i| ctx.add(get(self, i), get(other, i))).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
        Poly::new((0..n).map(|i| ctx.sub(get(self, i), get(other, i))).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.deg();
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = ctx.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = ctx.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let slot = &mut rem[i - dd + j];
                *slot = ctx.sub(*slot, ctx.mul(c, d));
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Poly {
        self.div_rem(ctx, divisor).1
    }

    pub fn div_exact(&self, ctx: &FieldCtx, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(ctx, divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// `(g, s, t)` with `g = s*self + t*other` monic.
    pub fn ext_gcd(&self, ctx: &FieldCtx, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(ctx, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(ctx, &q.mul(ctx, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(ctx, &q.mul(ctx, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = ctx.inv(r0.lead());
        (r0.scale(ctx, inv), s0.scale(ctx, inv), t0.scale(ctx, inv))
    }

    pub fn mul_mod(&self, ctx: &FieldCtx, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(ctx, other).rem(ctx, modulus)
    }

    pub fn pow_mod(&self, ctx: &FieldCtx, mut e: u64, modulus: &Poly) -> Poly {
        let mut acc = Poly::one().rem(ctx, modulus);
        let mut base = self.rem(ctx, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(ctx, &base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(ctx, &base, modulus);
            }
        }
        acc
    }

    /// `self^q mod modulus` where q is the field order.
    fn frobenius_mod(&self, ctx: &FieldCtx, modulus: &Poly) -> Poly {
        let mut acc = self.rem(ctx, modulus);
        for _ in 0..ctx.degree() {
            acc = acc.pow_mod(ctx, ctx.characteristic(), modulus);
        }
        acc
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(c, ctx.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn roots(&self, ctx: &FieldCtx) -> Vec<FieldElement> {
        ctx.elements().filter(|&a| self.eval(ctx, a).is_zero()).collect()
    }

    pub fn format(&self, ctx: &FieldCtx) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let cs = ctx.format(c);
                let cs = if ctx.degree() > 1 && cs.contains('+') {
                    format!("({cs})")
                } else {
                    cs
                };
                match i {
                    0 => cs,
                    _ => {
                        let mono = if i == 1 { "x".to_string() } else { format!("x^{i}") };
                        if c == FieldElement::ONE {
                            mono
                        } else {
                            format!("{cs}*{mono}")
                        }
                    }
                }
            })
            .collect();
        terms.join(" + ")
    }

    /// The polynomial whose coefficients are the `p`-th roots of those of `self`;
    /// only meaningful when `self` is a polynomial in `x^p`.
    fn pth_root(&self, ctx: &FieldCtx) -> Poly {
        let p = ctx.characteristic() as usize;
        Poly::new(
            self.coeffs
                .iter()
                .step_by(p)
                .map(|&c| ctx.frobenius_root(c, 1))
                .collect(),
        )
    }
}

/// Square-free decomposition of a monic polynomial: `(factor, multiplicity)` with
/// pairwise coprime square-free factors.
pub fn square_free(ctx: &FieldCtx, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    let f = f.monic(ctx);
    if f.deg() == 0 {
        return out;
    }
    let p = ctx.characteristic() as u32;
    let c0 = f.gcd(ctx, &f.derivative(ctx));
    let mut w = f.div_exact(ctx, &c0);
    let mut c = c0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(ctx, &c);
        let fac = w.div_exact(ctx, &y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(ctx, &w);
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in square_free(ctx, &c.pth_root(ctx)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree split of a monic square-free polynomial: `(product of all
/// irreducible factors of degree d, d)`.
pub fn distinct_degree(ctx: &FieldCtx, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.monic(ctx);
    let mut h = Poly::x().rem(ctx, &rest);
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.frobenius_mod(ctx, &rest);
        let g = rest.gcd(ctx, &h.sub(ctx, &Poly::x()));
        if !g.is_one() {
            rest = rest.div_exact(ctx, &g);
            h = h.rem(ctx, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// Splits a monic square-free product of irreducibles of degree `d` into its factors.
pub fn equal_degree<R: Rng>(ctx: &FieldCtx, f: &Poly, d: usize, rng: &mut R) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.monic(ctx)];
    }
    let q = ctx.order();
    loop {
        let a = Poly::new(
            (0..n)
                .map(|_| ctx.from_raw(rng.gen_range(0..q)))
                .collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if ctx.characteristic() == 2 {
            // Absolute trace to GF(2): a + a^2 + ... + a^(2^(k d - 1)).
            let mut t = a.rem(ctx, f);
            let mut acc = t.clone();
            for _ in 1..ctx.degree() * d {
                t = t.mul_mod(ctx, &t, f);
                acc = acc.add(ctx, &t);
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q - 1)/2).
            let mut frob = a.rem(ctx, f);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.frobenius_mod(ctx, f);
                norm = norm.mul_mod(ctx, &frob, f);
            }
            norm.pow_mod(ctx, (q - 1) / 2, f).sub(ctx, &Poly::one())
        };
        let g = f.gcd(ctx, &b);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(ctx, &g);
            let mut out = equal_degree(ctx, &g, d, rng);
            out.extend(equal_degree(ctx, &h, d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted.
/// The leading coefficient of `f` is dropped.
pub fn factor<R: Rng>(ctx: &FieldCtx, f: &Poly, rng: &mut R) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (sf, mult) in square_free(ctx, f) {
        for (part, d) in distinct_degree(ctx, &sf) {
            for g in equal_degree(ctx, &part, d, rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn factor_seeded(ctx: &FieldCtx, f: &Poly, seed: u64) -> Result<Vec<(Poly, u32)>> {
    factor(ctx, f, &mut ChaCha8Rng::seed_from_u64(seed))
}
