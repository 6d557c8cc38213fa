//! Commutative associative algebras given by structure constants: local
//! decomposition, radical, Loewy series, ideal products and quotients.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{axpy, is_zero_vec, scale_vec, unit_vec, zero_vec, RelationFinder, Subspace, Vector};
use crate::poly::{factor_seeded, Poly};

/// Algebras up to this dimension get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_DIM: usize = 40;
const SAMPLED_TRIPLES: usize = 4096;

/// One sparse product `b_i b_j = sum c_k b_k`.
pub type Product = Vec<(u32, FieldElement)>;

#[derive(Clone, Debug)]
pub struct CommAlgebra {
    ctx: Arc<FieldCtx>,
    labels: Vec<String>,
    /// Row-major `n x n`, symmetric.
    table: Vec<Product>,
    identity: Vector,
}

/// A subspace of an algebra that is closed under multiplication by the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    space: Subspace,
}

impl IdealBasis {
    /// Wraps a subspace already known to be an ideal.
    pub(crate) fn trusted(space: Subspace) -> IdealBasis {
        IdealBasis { space }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn basis(&self) -> &[Vector] {
        self.space.basis()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[FieldElement]) -> bool {
        self.space.contains(ctx, v)
    }

    pub fn contains_ideal(&self, ctx: &FieldCtx, other: &IdealBasis) -> bool {
        self.space.contains_subspace(ctx, &other.space)
    }

    pub fn sum(&self, ctx: &FieldCtx, other: &IdealBasis) -> IdealBasis {
        IdealBasis {
            space: self.space.sum(ctx, &other.space),
        }
    }
}

/// A local summand `Ae` of a commutative algebra.
#[derive(Clone, Debug)]
pub struct LocalPiece {
    idempotent: Vector,
    span: Subspace,
    /// `residues[i]` is the eigenvalue of `b_i` on `Ae`.
    residues: Vec<FieldElement>,
}

impl LocalPiece {
    pub fn idempotent(&self) -> &Vector {
        &self.idempotent
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn residues(&self) -> &[FieldElement] {
        &self.residues
    }

    /// `J(Ae) = span{b_i e - residue_i e}`.
    pub fn radical(&self, alg: &CommAlgebra) -> IdealBasis {
        let ctx = alg.ctx();
        let n = alg.dim();
        let vectors = (0..n).map(|i| {
            let mut v = alg.mul_basis(i, &self.idempotent);
            axpy(ctx, &mut v, ctx.neg(self.residues[i]), &self.idempotent);
            v
        });
        IdealBasis {
            space: Subspace::spanned_by(ctx, n, vectors),
        }
    }
}

impl CommAlgebra {
    /// Builds and validates an algebra. `table[i * n + j]` is `b_i b_j`.
    pub fn new(ctx: Arc<FieldCtx>, labels: Vec<String>, table: Vec<Product>, identity: Vector) -> Result<CommAlgebra> {
        let alg = CommAlgebra::new_unchecked(ctx, labels, table, identity);
        alg.validate()?;
        Ok(alg)
    }

    pub(crate) fn new_unchecked(
        ctx: Arc<FieldCtx>,
        labels: Vec<String>,
        table: Vec<Product>,
        identity: Vector,
    ) -> CommAlgebra {
        debug_assert_eq!(table.len(), labels.len() * labels.len());
        debug_assert_eq!(identity.len(), labels.len());
        CommAlgebra {
            ctx,
            labels,
            table,
            identity,
        }
    }

    /// Builds an algebra from dense products `b_i b_j`.
    pub fn from_dense<F>(ctx: Arc<FieldCtx>, labels: Vec<String>, identity: Vector, mut product: F) -> Result<CommAlgebra>
    where
        F: FnMut(usize, usize) -> Vector,
    {
        let n = labels.len();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in i..n {
                let sparse = sparsify(&product(i, j));
                table[j * n + i] = sparse.clone();
                table[i * n + j] = sparse;
            }
        }
        CommAlgebra::new(ctx, labels, table, identity)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.table.len() != n * n || self.identity.len() != n {
            return Err(Error::InvalidAlgebra("shape".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if self.table[i * n + j] != self.table[j * n + i] {
                    return Err(Error::InvalidAlgebra(format!("commutativity at ({i}, {j})")));
                }
            }
        }
        for i in 0..n {
            if self.mul_basis(i, &self.identity) != unit_vec(n, i) {
                return Err(Error::InvalidAlgebra(format!("identity at {i}")));
            }
        }
        let check = |i: usize, j: usize, l: usize| -> Result<()> {
            let left = self.mul_basis(l, &self.basis_product(i, j));
            let right = self.mul_basis(i, &self.basis_product(j, l));
            if left == right {
                Ok(())
            } else {
                Err(Error::InvalidAlgebra(format!("associativity at ({i}, {j}, {l})")))
            }
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_DIM {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        check(i, j, l)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn shared_ctx(&self) -> Arc<FieldCtx> {
        Arc::clone(&self.ctx)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> &Vector {
        &self.identity
    }

    pub fn structure(&self, i: usize, j: usize) -> &[(u32, FieldElement)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vec(self.dim());
        for &(k, c) in self.structure(i, j) {
            v[k as usize] = c;
        }
        v
    }

    pub fn scalar(&self, c: FieldElement) -> Vector {
        scale_vec(&self.ctx, &self.identity, c)
    }

    /// `b_i * x`.
    pub fn mul_basis(&self, i: usize, x: &[FieldElement]) -> Vector {
        let ctx = &*self.ctx;
        let n = self.dim();
        let mut out = zero_vec(n);
        for (j, &xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for &(k, c) in &self.table[i * n + j] {
                out[k as usize] = ctx.add(out[k as usize], ctx.mul(xj, c));
            }
        }
        out
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vector {
        let ctx = &*self.ctx;
        let n = self.dim();
        let ys: Vec<(usize, FieldElement)> = y.iter().copied().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = zero_vec(n);
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let c = ctx.mul(xi, yj);
                for &(k, a) in &self.table[i * n + j] {
                    out[k as usize] = ctx.add(out[k as usize], ctx.mul(c, a));
                }
            }
        }
        out
    }

    /// Matrix of `x -> x * y`: row `i` is `b_i * y`.
    pub fn mult_matrix(&self, y: &[FieldElement]) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.mul_basis(i, y)).collect()
    }

    pub fn pow(&self, x: &[FieldElement], mut t: u64) -> Vector {
        let mut result = self.identity.clone();
        let mut base = x.to_vec();
        while t > 0 {
            if t & 1 == 1 {
                result = self.mul(&result, &base);
            }
            t >>= 1;
            if t > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn zero_ideal(&self) -> IdealBasis {
        IdealBasis {
            space: Subspace::zero(self.dim()),
        }
    }

    pub fn whole(&self) -> IdealBasis {
        IdealBasis {
            space: Subspace::full(self.dim()),
        }
    }

    pub fn is_ideal(&self, space: &Subspace) -> bool {
        space
            .basis()
            .iter()
            .all(|v| (0..self.dim()).all(|i| space.contains(&self.ctx, &self.mul_basis(i, v))))
    }

    /// Checks closure and wraps `space` as an ideal.
    pub fn ideal(&self, space: Subspace) -> Result<IdealBasis> {
        if space.ambient_dim() != self.dim() || !self.is_ideal(&space) {
            return Err(Error::NotIdeal);
        }
        Ok(IdealBasis { space })
    }

    /// The ideal `sum A v` over the given vectors.
    pub fn ideal_generated<I, V>(&self, vectors: I) -> IdealBasis
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[FieldElement]>,
    {
        let mut space = Subspace::zero(self.dim());
        for v in vectors {
            let v = v.as_ref();
            if space.contains(&self.ctx, v) {
                continue;
            }
            for i in 0..self.dim() {
                space.insert(&self.ctx, &self.mul_basis(i, v));
            }
        }
        IdealBasis { space }
    }

    /// A generating set of `ideal` as an `A`-module, chosen greedily from its basis.
    pub fn ideal_generators(&self, ideal: &IdealBasis) -> Vec<Vector> {
        let mut span = Subspace::zero(self.dim());
        let mut gens = Vec::new();
        for v in ideal.basis() {
            if span.contains(&self.ctx, v) {
                continue;
            }
            for i in 0..self.dim() {
                span.insert(&self.ctx, &self.mul_basis(i, v));
            }
            gens.push(v.clone());
        }
        gens
    }

    pub fn ideal_product(&self, i: &IdealBasis, k: &IdealBasis) -> IdealBasis {
        let gens = self.ideal_generators(k);
        self.product_with_generators(i, &gens)
    }

    /// `span{x g}` over `x` in a basis of `i` and the given generators of another ideal.
    fn product_with_generators(&self, i: &IdealBasis, gens: &[Vector]) -> IdealBasis {
        let n = self.dim();
        let mut space = Subspace::zero(n);
        for g in gens {
            let m = self.mult_matrix(g);
            for x in i.basis() {
                let mut v = zero_vec(n);
                for (j, &c) in x.iter().enumerate() {
                    axpy(&self.ctx, &mut v, c, &m[j]);
                }
                space.insert(&self.ctx, &v);
            }
        }
        IdealBasis { space }
    }

    /// `[A, J, J^2, ..., J^L]` with `J^L = 0` and `J^(L-1) != 0`.
    pub fn ideal_powers(&self, j: &IdealBasis) -> Result<Vec<IdealBasis>> {
        let gens = self.ideal_generators(j);
        let mut powers = vec![self.whole(), j.clone()];
        loop {
            let last = powers.last().expect("nonempty");
            if last.is_zero() {
                return Ok(powers);
            }
            let next = self.product_with_generators(last, &gens);
            if next.dim() == last.dim() {
                return Err(Error::NotNilpotent);
            }
            powers.push(next);
        }
    }

    /// `dim J^t` for `t = 0..=L`.
    pub fn loewy_series(&self, j: &IdealBasis) -> Result<Vec<usize>> {
        Ok(self.ideal_powers(j)?.iter().map(IdealBasis::dim).collect())
    }

    /// Least `L >= 1` with `J^L = 0`.
    pub fn loewy_length(&self, j: &IdealBasis) -> Result<usize> {
        Ok(self.ideal_powers(j)?.len() - 1)
    }

    /// `A / I` on the complement spanned by the non-pivot coordinates of `I`.
    pub fn quotient_algebra(&self, ideal: &IdealBasis) -> Result<CommAlgebra> {
        if !self.is_ideal(ideal.space()) {
            return Err(Error::NotIdeal);
        }
        let ctx = &*self.ctx;
        let n = self.dim();
        let free = ideal.space.free_columns();
        let m = free.len();
        let project = |v: &[FieldElement]| -> Vector {
            let w = ideal.space.reduce(ctx, v);
            free.iter().map(|&c| w[c]).collect()
        };
        let mut table = vec![Vec::new(); m * m];
        for a in 0..m {
            for b in a..m {
                let mut v = zero_vec(n);
                for &(k, c) in self.structure(free[a], free[b]) {
                    v[k as usize] = c;
                }
                let sparse = sparsify(&project(&v));
                table[b * m + a] = sparse.clone();
                table[a * m + b] = sparse;
            }
        }
        let labels = free.iter().map(|&c| self.labels[c].clone()).collect();
        Ok(CommAlgebra::new_unchecked(self.shared_ctx(), labels, table, project(&self.identity)))
    }

    /// The ideal as a unital algebra in its row-reduced basis, with identity `unit`.
    pub fn ideal_as_algebra(&self, ideal: &IdealBasis, unit: &[FieldElement], labels: Vec<String>) -> Result<CommAlgebra> {
        let ctx = &*self.ctx;
        let rows = ideal.basis();
        let m = rows.len();
        let coords = |v: &[FieldElement]| ideal.space.coordinates(ctx, v).ok_or(Error::NotIdeal);
        let mults: Vec<Vec<Vector>> = rows.iter().map(|r| self.mult_matrix(r)).collect();
        let mut table = vec![Vec::new(); m * m];
        for a in 0..m {
            for b in a..m {
                let mut v = zero_vec(self.dim());
                for (j, &c) in rows[b].iter().enumerate() {
                    axpy(ctx, &mut v, c, &mults[a][j]);
                }
                let sparse = sparsify(&coords(&v)?);
                table[b * m + a] = sparse.clone();
                table[a * m + b] = sparse;
            }
        }
        let identity = coords(unit)?;
        Ok(CommAlgebra::new_unchecked(self.shared_ctx(), labels, table, identity))
    }

    /// Splits `1` into primitive orthogonal idempotents.
    ///
    /// Splits along the lowest-index basis element whose minimal polynomial on
    /// the current summand has two coprime factors, then recurses.
    pub fn decompose_local(&self) -> Result<Vec<LocalPiece>> {
        let mut out = Vec::new();
        if self.dim() > 0 {
            self.split_piece(self.identity.clone(), &mut out)?;
        }
        Ok(out)
    }

    fn split_piece(&self, e: Vector, out: &mut Vec<LocalPiece>) -> Result<()> {
        let ctx = &*self.ctx;
        let n = self.dim();
        let images: Vec<Vector> = (0..n).map(|i| self.mul_basis(i, &e)).collect();
        let span = Subspace::spanned_by(ctx, n, &images);
        // x^(p^s) kills the nilpotent part once p^s >= dim Ae.
        let p = ctx.characteristic();
        let (mut q, mut s) = (1u64, 0u32);
        while (q as usize) < span.dim() {
            q *= p;
            s += 1;
        }
        let pivot = e.iter().position(|c| !c.is_zero()).expect("idempotent is nonzero");
        let mut residues = Vec::with_capacity(n);
        for x in &images {
            let y = self.pow_in(x, &e, q);
            let mu = ctx.div(y[pivot], e[pivot]);
            if y == scale_vec(ctx, &e, mu) {
                residues.push(ctx.frobenius_root(mu, s));
                continue;
            }
            let minpoly = self.min_poly(x, &e);
            let factors = factor_seeded(ctx, &minpoly, 0)?;
            if factors.len() == 1 {
                let deg = factors[0].0.degree().unwrap_or(0);
                return Err(if deg >= 2 {
                    Error::NonSplitting(deg)
                } else {
                    Error::Internal("primary minimal polynomial failed the power test".into())
                });
            }
            for (f, mult) in &factors {
                let g = f.pow(ctx, *mult as u64);
                let rest = minpoly.div_exact(ctx, &g);
                let (_, _, t) = g.ext_gcd(ctx, &rest);
                let idem = self.eval_in(&t.mul(ctx, &rest).rem(ctx, &minpoly), x, &e);
                self.split_piece(idem, out)?;
            }
            return Ok(());
        }
        out.push(LocalPiece {
            idempotent: e,
            span,
            residues,
        });
        Ok(())
    }

    /// `x^t` inside the summand with identity `e`.
    fn pow_in(&self, x: &[FieldElement], e: &[FieldElement], t: u64) -> Vector {
        if t == 0 {
            return e.to_vec();
        }
        let mut result: Option<Vector> = None;
        let mut base = x.to_vec();
        let mut t = t;
        while t > 0 {
            if t & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => self.mul(&r, &base),
                });
            }
            t >>= 1;
            if t > 0 {
                base = self.mul(&base, &base);
            }
        }
        result.expect("t > 0")
    }

    /// Minimal polynomial of `x` inside the summand with identity `e`.
    fn min_poly(&self, x: &[FieldElement], e: &[FieldElement]) -> Poly {
        let mut finder = RelationFinder::new();
        let mut power = e.to_vec();
        loop {
            if let Some(rel) = finder.push(&self.ctx, &power) {
                return Poly::new(rel);
            }
            power = self.mul(&power, x);
        }
    }

    fn eval_in(&self, f: &Poly, x: &[FieldElement], e: &[FieldElement]) -> Vector {
        let ctx = &*self.ctx;
        let mut acc = zero_vec(self.dim());
        for &c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            axpy(ctx, &mut acc, c, e);
        }
        acc
    }

    /// `J(A)` as the sum of the radicals of the local pieces.
    pub fn radical_all(&self) -> Result<IdealBasis> {
        let pieces = self.decompose_local()?;
        Ok(radical_of_pieces(self, &pieces))
    }

    /// Whether `z^t = 0`, for `z` in the radical `j`.
    pub fn element_nilpotency_check(&self, j: &IdealBasis, z: &[FieldElement], t: u64) -> Result<bool> {
        if !j.contains(&self.ctx, z) {
            return Err(Error::NotInRadical);
        }
        if t == 0 {
            return Ok(self.dim() == 0);
        }
        Ok(is_zero_vec(&self.pow_in(z, &self.identity, t)))
    }
}

pub fn radical_of_pieces(alg: &CommAlgebra, pieces: &[LocalPiece]) -> IdealBasis {
    let mut space = Subspace::zero(alg.dim());
    for piece in pieces {
        for v in piece.radical(alg).basis() {
            space.insert(alg.ctx(), v);
        }
    }
    IdealBasis { space }
}

fn sparsify(v: &[FieldElement]) -> Product {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, &c)| (k as u32, c))
        .collect()
}
