//! Dense row reduction over GF(q).

use crate::field::{FieldCtx, FieldElement};

pub type Vector = Vec<FieldElement>;

pub fn zero_vec(n: usize) -> Vector {
    vec![FieldElement::ZERO; n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = FieldElement::ONE;
    v
}

pub fn is_zero_vec(v: &[FieldElement]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn add_vec(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| ctx.add(x, y)).collect()
}

pub fn sub_vec(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| ctx.sub(x, y)).collect()
}

pub fn scale_vec(ctx: &FieldCtx, a: &[FieldElement], c: FieldElement) -> Vector {
    a.iter().map(|&x| ctx.mul(x, c)).collect()
}

/// `target += c * src`.
#[inline]
pub fn axpy(ctx: &FieldCtx, target: &mut [FieldElement], c: FieldElement, src: &[FieldElement]) {
    if c.is_zero() {
        return;
    }
    for (t, &s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t = ctx.add(*t, ctx.mul(c, s));
        }
    }
}

/// A subspace of `F^n` kept in reduced row echelon form.
///
/// Rows are sorted by pivot column and every pivot column is zero outside its row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Subspace {
        Subspace {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Subspace {
        Subspace {
            n,
            rows: (0..n).map(|i| unit_vec(n, i)).collect(),
            pivots: (0..n).collect(),
        }
    }

    pub fn spanned_by<I, V>(ctx: &FieldCtx, n: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[FieldElement]>,
    {
        let mut s = Subspace::zero(n);
        for v in vectors {
            s.insert(ctx, v.as_ref());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Non-pivot columns, i.e. the coordinates of a standard complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.n).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces `v` against the rows; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, ctx: &FieldCtx, v: &[FieldElement]) -> Vector {
        let mut w = v.to_vec();
        self.reduce_in_place(ctx, &mut w);
        w
    }

    pub fn reduce_in_place(&self, ctx: &FieldCtx, w: &mut [FieldElement]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let coef = w[c];
            if !coef.is_zero() {
                axpy(ctx, w, ctx.neg(coef), row);
            }
        }
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[FieldElement]) -> bool {
        is_zero_vec(&self.reduce(ctx, v))
    }

    /// Coordinates of `v` in the row basis, if `v` lies in the subspace.
    pub fn coordinates(&self, ctx: &FieldCtx, v: &[FieldElement]) -> Option<Vector> {
        if !self.contains(ctx, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, ctx: &FieldCtx, v: &[FieldElement]) -> bool {
        debug_assert_eq!(v.len(), self.n);
        let mut w = self.reduce(ctx, v);
        let Some(pc) = w.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(w[pc]);
        for x in w.iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let coef = row[pc];
            if !coef.is_zero() {
                axpy(ctx, row, ctx.neg(coef), &w);
            }
        }
        let at = self.pivots.partition_point(|&c| c < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, w);
        true
    }

    pub fn sum(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(ctx, r);
        }
        s
    }

    pub fn contains_subspace(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(ctx, r))
    }

    pub fn intersection(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        // Zassenhaus: row-reduce [[a, a], [b, 0]]; rows with zero left half give the intersection.
        let n = self.n;
        let mut big = Subspace::zero(2 * n);
        for r in &self.rows {
            let mut v = r.clone();
            v.extend_from_slice(r);
            big.insert(ctx, &v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.extend(zero_vec(n));
            big.insert(ctx, &v);
        }
        Subspace::spanned_by(
            ctx,
            n,
            big.rows
                .iter()
                .zip(&big.pivots)
                .filter(|(_, &c)| c >= n)
                .map(|(r, _)| r[n..].to_vec()),
        )
    }
}

/// Tracks linear dependence among a sequence of vectors, remembering how each
/// reduced row is expressed in terms of the inputs.
pub(crate) struct RelationFinder {
    rows: Vec<(usize, Vector, Vector)>,
    count: usize,
}

impl RelationFinder {
    pub fn new() -> Self {
        RelationFinder {
            rows: Vec::new(),
            count: 0,
        }
    }

    /// Feeds the next vector. If it depends on the earlier ones, returns the
    /// coefficients `c` (length = number of vectors fed so far, last entry 1)
    /// with `sum c_i v_i = 0`.
    pub fn push(&mut self, ctx: &FieldCtx, v: &[FieldElement]) -> Option<Vector> {
        let idx = self.count;
        self.count += 1;
        let mut w = v.to_vec();
        let mut combo = zero_vec(idx + 1);
        combo[idx] = FieldElement::ONE;
        for (pc, row, rc) in &self.rows {
            let coef = w[*pc];
            if !coef.is_zero() {
                let m = ctx.neg(coef);
                axpy(ctx, &mut w, m, row);
                axpy(ctx, &mut combo[..rc.len()], m, rc);
            }
        }
        match w.iter().position(|c| !c.is_zero()) {
            None => Some(combo),
            Some(pc) => {
                let inv = ctx.inv(w[pc]);
                let w = scale_vec(ctx, &w, inv);
                let combo = scale_vec(ctx, &combo, inv);
                self.rows.push((pc, w, combo));
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(ctx: &FieldCtx, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| ctx.from_int(x)).collect()
    }

    #[test]
    fn rref_shape() {
        let f = FieldCtx::new(5, 1).unwrap();
        let s = Subspace::spanned_by(&f, 3, [v(&f, &[1, 2, 3]), v(&f, &[2, 4, 0]), v(&f, &[3, 1, 3])]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 2]);
        assert!(s.contains(&f, &v(&f, &[1, 2, 0])));
        assert!(!s.contains(&f, &v(&f, &[0, 1, 0])));
        assert_eq!(s.free_columns(), vec![1]);
    }

    #[test]
    fn intersection_of_planes() {
        let f = FieldCtx::new(3, 1).unwrap();
        let a = Subspace::spanned_by(&f, 3, [v(&f, &[1, 0, 0]), v(&f, &[0, 1, 0])]);
        let b = Subspace::spanned_by(&f, 3, [v(&f, &[0, 1, 0]), v(&f, &[0, 0, 1])]);
        let i = a.intersection(&f, &b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&f, &v(&f, &[0, 1, 0])));
    }

    #[test]
    fn relation_finder_reports_dependency() {
        let f = FieldCtx::new(7, 1).unwrap();
        let mut rf = RelationFinder::new();
        assert!(rf.push(&f, &v(&f, &[1, 0])).is_none());
        assert!(rf.push(&f, &v(&f, &[0, 1])).is_none());
        let rel = rf.push(&f, &v(&f, &[3, 5])).unwrap();
        assert_eq!(rel, v(&f, &[-3, -5, 1]));
    }

    proptest! {
        #[test]
        fn dim_formula(rows_a in proptest::collection::vec(proptest::collection::vec(0i64..3, 5), 0..5),
                       rows_b in proptest::collection::vec(proptest::collection::vec(0i64..3, 5), 0..5)) {
            let f = FieldCtx::new(3, 1).unwrap();
            let a = Subspace::spanned_by(&f, 5, rows_a.iter().map(|r| v(&f, r)));
            let b = Subspace::spanned_by(&f, 5, rows_b.iter().map(|r| v(&f, r)));
            let s = a.sum(&f, &b);
            let i = a.intersection(&f, &b);
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(a.contains_subspace(&f, &i) && b.contains_subspace(&f, &i));
            for r in rows_a.iter() {
                prop_assert!(s.contains(&f, &v(&f, r)));
            }
        }
    }
}
