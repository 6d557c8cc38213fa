//! Blocks of `FG` through the center `Z(FG)` on the class-sum basis: block
//! idempotents, defect groups, the Brauer map, subsections, Reynolds ideals,
//! the ideals `Z_{<=P}` and `Z_{<P}`, dominated blocks, and `LL(FP)` for
//! `p`-groups.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comalg::{CommAlgebra, IdealBasis, LocalPiece, Product};
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldCtx, FieldElement};
use crate::group::{is_p_power, p_part, FiniteGroup, GroupElement, GroupSpec, Subgroup, MAX_ISO_ORDER};
use crate::linalg::{add_vec, is_zero_vec, scale_vec, unit_vec, zero_vec, Subspace, Vector};

pub const MAX_FIELD_DEGREE: usize = 16;
pub const MAX_PGROUP_ALGEBRA_ORDER: usize = 243;
/// Above this many classes, pairwise homomorphism checks are sampled.
const EXHAUSTIVE_PAIR_CLASSES: usize = 40;
const SAMPLED_PAIRS: usize = 600;

/// Multiplicative order of `p` modulo the `p'`-part of `exp(G)`.
pub fn splitting_degree(group: &FiniteGroup, p: u64) -> Result<usize> {
    let exp = group.exponent();
    let m = exp / p_part(exp, p);
    if m == 1 {
        return Ok(1);
    }
    let mut k = 1;
    let mut x = p % m;
    while x != 1 {
        x = x * p % m;
        k += 1;
    }
    if k > MAX_FIELD_DEGREE {
        return Err(Error::FieldDegreeCap {
            needed: k,
            cap: MAX_FIELD_DEGREE,
        });
    }
    Ok(k)
}

/// `Z(FG)` on the class-sum basis, class `i` being `group.conj_classes()[i]`.
#[derive(Clone, Debug)]
pub struct GroupAlgebraCenter {
    group: Arc<FiniteGroup>,
    p: u64,
    algebra: CommAlgebra,
    class_defect_groups: OnceLock<Vec<Subgroup>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockOptions {
    /// Decide metacyclic, `W(d)` and extraspecial shapes of the defect group.
    pub structure_flags: bool,
}

impl BlockOptions {
    pub fn full() -> Self {
        BlockOptions { structure_flags: true }
    }

    pub fn minimal() -> Self {
        BlockOptions { structure_flags: false }
    }
}

/// One block `B` with idempotent `e` and its invariants.
#[derive(Clone, Debug)]
pub struct BlockRecord {
    pub index: usize,
    pub idempotent: Vector,
    /// `lambda_B(C+)` per class.
    pub central_character: Vec<FieldElement>,
    pub defect: u32,
    pub defect_class: usize,
    pub defect_group: Subgroup,
    pub exponent_log: u32,
    pub dim_center: usize,
    pub loewy_length: usize,
    /// `dim J(ZB)^t` for `t = 0..=LL(ZB)`.
    pub loewy_series: Vec<usize>,
    pub dim_reynolds: usize,
    /// `LL(ZB/RB)`, 0 when `RB = ZB`.
    pub ll_mod_reynolds: usize,
    pub principal: bool,
    pub defect_abelian: bool,
    pub abelian_type: Option<Vec<u32>>,
    /// `None` when not decided.
    pub defect_metacyclic: Option<bool>,
    pub defect_is_w: Option<bool>,
    /// Non-abelian of order `p^3` and exponent `p`, i.e. `p^{1+2}_+`.
    pub defect_is_extraspecial: bool,
    /// `ZB` as an ideal of `Z(FG)`.
    pub center_span: IdealBasis,
    /// `J(ZB)` as an ideal of `Z(FG)`.
    pub radical: IdealBasis,
}

impl GroupAlgebraCenter {
    /// `Z(FG)` over `GF(p^k)` with `k` from [`splitting_degree`].
    pub fn build(group: Arc<FiniteGroup>, p: u64) -> Result<GroupAlgebraCenter> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let k = splitting_degree(&group, p)?;
        let ctx = Arc::new(FieldCtx::new(p, k)?);
        GroupAlgebraCenter::with_field(group, ctx)
    }

    /// `Z(FG)` over a given field, which must split `G`.
    pub fn with_field(group: Arc<FiniteGroup>, ctx: Arc<FieldCtx>) -> Result<GroupAlgebraCenter> {
        let p = ctx.characteristic();
        let classes = group.conj_classes();
        let r = classes.len();
        let mut table: Vec<Product> = vec![Vec::new(); r * r];
        let mut counts = vec![0u32; r * r];
        for (k, class) in classes.iter().enumerate() {
            counts.fill(0);
            let z = class.rep;
            for x in 0..group.order() {
                let i = group.class_of(x);
                let j = group.class_of(group.mul(group.inv(x), z));
                counts[i * r + j] += 1;
            }
            for (ij, &c) in counts.iter().enumerate() {
                let c = c as u64 % p;
                if c != 0 {
                    table[ij].push((k as u32, ctx.from_int(c as i64)));
                }
            }
        }
        let labels = classes
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}_{}", group.elem_order(c.rep), i))
            .collect();
        let identity = unit_vec(r, group.class_of(group.identity()));
        let algebra = CommAlgebra::new(ctx, labels, table, identity)?;
        Ok(GroupAlgebraCenter {
            group,
            p,
            algebra,
            class_defect_groups: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<FiniteGroup> {
        Arc::clone(&self.group)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.algebra.ctx()
    }

    pub fn shared_ctx(&self) -> Arc<FieldCtx> {
        self.algebra.shared_ctx()
    }

    pub fn algebra(&self) -> &CommAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `a(g)`: the coefficient of `g` in `z`.
    pub fn coefficient(&self, z: &[FieldElement], g: GroupElement) -> FieldElement {
        z[self.group.class_of(g)]
    }

    /// `delta(C)`: a Sylow `p`-subgroup of the centralizer of each class representative.
    pub fn class_defect_groups(&self) -> &[Subgroup] {
        self.class_defect_groups.get_or_init(|| {
            self.group
                .conj_classes()
                .iter()
                .map(|c| self.group.sylow_within(&self.group.centralizer(c.rep), self.p))
                .collect()
        })
    }

    fn class_sum_span<F: Fn(usize) -> bool>(&self, keep: F, eps: &[FieldElement]) -> Subspace {
        let r = self.dim();
        Subspace::spanned_by(
            self.ctx(),
            r,
            (0..r).filter(|&i| keep(i)).map(|i| self.algebra.mul_basis(i, eps)),
        )
    }

    /// Blocks, principal block first and the rest ordered by idempotent.
    pub fn blocks(&self, opts: BlockOptions) -> Result<Vec<BlockRecord>> {
        let pieces = self.algebra.decompose_local()?;
        let mut records = pieces
            .iter()
            .map(|piece| self.block_record(piece, opts))
            .collect::<Result<Vec<_>>>()?;
        records.sort_by(|a, b| b.principal.cmp(&a.principal).then_with(|| a.idempotent.cmp(&b.idempotent)));
        for (i, rec) in records.iter_mut().enumerate() {
            rec.index = i;
        }
        Ok(records)
    }

    fn block_record(&self, piece: &LocalPiece, opts: BlockOptions) -> Result<BlockRecord> {
        let ctx = self.ctx();
        let alg = &self.algebra;
        let group = &*self.group;
        let p = self.p;
        let eps = piece.idempotent().clone();
        let lambda = piece.residues().to_vec();
        let principal = group
            .conj_classes()
            .iter()
            .zip(&lambda)
            .all(|(c, &l)| l == ctx.from_int((c.size() as u64 % p) as i64));
        let (defect, defect_class) = self.defect_class(&eps, &lambda)?;
        let defect_group = self.class_defect_groups()[defect_class].clone();
        if defect_group.order() as u64 != p.pow(defect) {
            return Err(Error::Internal(format!(
                "defect group of order {} for defect {defect}",
                defect_group.order()
            )));
        }
        let exponent_log = group.exponent_log(&defect_group, p)?;
        let defect_abelian = group.is_abelian_subgroup(&defect_group);
        let abelian_type = if defect_abelian {
            Some(group.abelian_type(&defect_group, p)?)
        } else {
            None
        };

        let center_span = IdealBasis::trusted(piece.span().clone());
        let radical = piece.radical(alg);
        let mut loewy_series = alg.loewy_series(&radical)?;
        loewy_series[0] = center_span.dim();
        let loewy_length = loewy_series.len() - 1;

        let reynolds = self.reynolds_ideal(&eps);
        if !center_span.contains_ideal(ctx, &reynolds) || !alg.ideal_product(&reynolds, &radical).is_zero() {
            return Err(Error::Internal("Reynolds ideal does not annihilate the radical".into()));
        }
        let ll_mod_reynolds = if reynolds.dim() == center_span.dim() {
            0
        } else {
            self.ll_block_quotient(&eps, &reynolds)?
        };

        let (defect_metacyclic, defect_is_w) = if opts.structure_flags {
            defect_shape(group, &defect_group, p, defect, defect_abelian)?
        } else {
            (None, None)
        };
        let defect_is_extraspecial = !defect_abelian && defect == 3 && exponent_log == 1;
        Ok(BlockRecord {
            index: 0,
            idempotent: eps,
            central_character: lambda,
            defect,
            defect_class,
            defect_group,
            exponent_log,
            dim_center: center_span.dim(),
            loewy_length,
            loewy_series,
            dim_reynolds: reynolds.dim(),
            ll_mod_reynolds,
            principal,
            defect_abelian,
            abelian_type,
            defect_metacyclic,
            defect_is_w,
            defect_is_extraspecial,
            center_span,
            radical,
        })
    }

    /// `(d, C)`: the least class defect with `lambda(C+) != 0`, and the first
    /// `p`-regular class attaining it with nonzero idempotent coefficient.
    fn defect_class(&self, eps: &[FieldElement], lambda: &[FieldElement]) -> Result<(u32, usize)> {
        let classes = self.group.conj_classes();
        let d = classes
            .iter()
            .zip(lambda)
            .filter(|(_, l)| !l.is_zero())
            .map(|(c, _)| c.defect(self.p))
            .min()
            .ok_or_else(|| Error::Internal("central character vanishes".into()))?;
        let class = (0..classes.len())
            .find(|&i| {
                !lambda[i].is_zero()
                    && !eps[i].is_zero()
                    && classes[i].defect(self.p) == d
                    && self.group.is_p_regular(classes[i].rep, self.p)
            })
            .ok_or_else(|| Error::Internal("no defect class".into()))?;
        Ok((d, class))
    }

    /// Recomputes `(d, D)` for a block from its idempotent and central character.
    pub fn defect_and_group(&self, block: &BlockRecord) -> Result<(u32, Subgroup)> {
        let (d, class) = self.defect_class(&block.idempotent, &block.central_character)?;
        Ok((d, self.class_defect_groups()[class].clone()))
    }

    /// `LL(ZB/RB)` as the Loewy length of `Z(FG) / (RB + Z(FG)(1 - e))`.
    fn ll_block_quotient(&self, eps: &[FieldElement], reynolds: &IdealBasis) -> Result<usize> {
        let alg = &self.algebra;
        let complement = alg.ideal_generated([crate::linalg::sub_vec(self.ctx(), alg.identity(), eps)]);
        let kernel = complement.sum(self.ctx(), reynolds);
        let quotient = alg.quotient_algebra(&kernel)?;
        quotient.loewy_length(&quotient.radical_all()?)
    }

    /// The `p'`-section sums `S+`, one per `p`-regular class.
    pub fn section_sums(&self) -> Vec<Vector> {
        let group = &*self.group;
        let classes = group.conj_classes();
        let r = classes.len();
        let regular_part: Vec<usize> = classes
            .iter()
            .map(|c| group.class_of(group.p_decomposition(c.rep, self.p).1))
            .collect();
        (0..r)
            .filter(|&x| group.is_p_regular(classes[x].rep, self.p))
            .map(|x| {
                let mut v = zero_vec(r);
                for (c, &reg) in regular_part.iter().enumerate() {
                    if reg == x {
                        v[c] = FieldElement::ONE;
                    }
                }
                v
            })
            .collect()
    }

    /// `R(FG)`, spanned by the section sums.
    pub fn reynolds_fg(&self) -> IdealBasis {
        IdealBasis::trusted(Subspace::spanned_by(self.ctx(), self.dim(), self.section_sums()))
    }

    /// `RB = R(FG) e`.
    pub fn reynolds_ideal(&self, eps: &[FieldElement]) -> IdealBasis {
        let vectors = self.section_sums().into_iter().map(|s| self.algebra.mul(&s, eps));
        IdealBasis::trusted(Subspace::spanned_by(self.ctx(), self.dim(), vectors))
    }

    fn check_p_subgroup(&self, p_sub: &Subgroup) -> Result<()> {
        if self.group.is_p_subgroup(p_sub, self.p) {
            Ok(())
        } else {
            Err(Error::NotPGroup(self.p))
        }
    }

    /// `Z_{<=P}(FG) e`: classes whose defect group is `G`-conjugate into `P`.
    pub fn z_leq_ideal(&self, eps: &[FieldElement], p_sub: &Subgroup) -> Result<IdealBasis> {
        self.check_p_subgroup(p_sub)?;
        let deltas = self.class_defect_groups();
        let space = self.class_sum_span(|i| self.group.conjugate_subgroup_leq(&deltas[i], p_sub), eps);
        self.algebra.ideal(space)
    }

    /// `Z_{<P}(FG) e`: as above with the defect group strictly smaller than `P`.
    pub fn z_lt_ideal(&self, eps: &[FieldElement], p_sub: &Subgroup) -> Result<IdealBasis> {
        self.check_p_subgroup(p_sub)?;
        let deltas = self.class_defect_groups();
        let space = self.class_sum_span(
            |i| deltas[i].order() < p_sub.order() && self.group.conjugate_subgroup_leq(&deltas[i], p_sub),
            eps,
        );
        self.algebra.ideal(space)
    }

    /// The Brauer map `Z(FG) -> Z(F C_G(P))`, restriction of coefficients.
    pub fn brauer_hom(&self, p_sub: &Subgroup) -> Result<BrauerMap> {
        self.check_p_subgroup(p_sub)?;
        let c = self.group.centralizer_of_set(p_sub.generators());
        self.brauer_onto(c)
    }

    fn brauer_onto(&self, c: Subgroup) -> Result<BrauerMap> {
        let (h, embed) = self.group.subgroup_group(&c);
        let target = GroupAlgebraCenter::with_field(Arc::new(h), self.shared_ctx())?;
        let mut images = vec![Vec::new(); self.dim()];
        for (tc, class) in target.group.conj_classes().iter().enumerate() {
            images[self.group.class_of(embed[class.rep])].push(tc);
        }
        Ok(BrauerMap {
            subgroup: c,
            embed,
            target,
            images,
        })
    }

    /// The block whose central character is `lambda`, if any.
    pub fn block_with_character<'a>(&self, blocks: &'a [BlockRecord], lambda: &[FieldElement]) -> Option<&'a BlockRecord> {
        blocks.iter().find(|b| b.central_character == lambda)
    }

    /// `b^G` for a block `b` of `C_G(P)` reached through `map`.
    pub fn induced_block<'a>(&self, blocks: &'a [BlockRecord], map: &BrauerMap, b: &BlockRecord) -> Option<&'a BlockRecord> {
        self.block_with_character(blocks, &map.pull_back_character(self.ctx(), &b.central_character))
    }

    pub fn principal_block<'a>(&self, blocks: &'a [BlockRecord]) -> Option<&'a BlockRecord> {
        blocks.iter().find(|b| b.principal)
    }

    /// `mu(z)` for the projection `FH -> F[H/N]`, with `mu(C+) = (|C|/|Cbar|) Cbar+`.
    fn project_center(&self, target: &GroupAlgebraCenter, proj: &[GroupElement], z: &[FieldElement]) -> Vector {
        let ctx = self.ctx();
        let tclasses = target.group.conj_classes();
        let mut out = zero_vec(target.dim());
        for (i, class) in self.group.conj_classes().iter().enumerate() {
            if z[i].is_zero() {
                continue;
            }
            let bar = target.group.class_of(proj[class.rep]);
            let ratio = (class.size() / tclasses[bar].size()) as u64 % self.p;
            out[bar] = ctx.add(out[bar], ctx.mul(z[i], ctx.from_int(ratio as i64)));
        }
        out
    }
}

/// Whether the defect group is metacyclic and whether it is `W(d)`, when decidable.
fn defect_shape(
    group: &FiniteGroup,
    defect_group: &Subgroup,
    p: u64,
    d: u32,
    abelian: bool,
) -> Result<(Option<bool>, Option<bool>)> {
    if abelian {
        return Ok((Some(defect_group.order() == 1 || defect_shape_metacyclic(group, defect_group)), Some(false)));
    }
    let metacyclic = Some(defect_shape_metacyclic(group, defect_group));
    if d < 3 {
        return Ok((metacyclic, Some(false)));
    }
    if defect_group.order() > MAX_ISO_ORDER {
        return Ok((metacyclic, None));
    }
    let (dg, _) = group.subgroup_group(defect_group);
    let w = GroupSpec::W { d, p }.build()?;
    Ok((metacyclic, Some(dg.is_isomorphic(&w)?)))
}

fn defect_shape_metacyclic(group: &FiniteGroup, defect_group: &Subgroup) -> bool {
    group.subgroup_group(defect_group).0.is_metacyclic()
}

/// `sigma: Z(FG) -> Z(F C)` for `C = C_G(P)`.
#[derive(Clone, Debug)]
pub struct BrauerMap {
    /// `C_G(P)` inside `G`.
    pub subgroup: Subgroup,
    /// Element `i` of the target group is `embed[i]` in `G`.
    pub embed: Vec<GroupElement>,
    pub target: GroupAlgebraCenter,
    /// Target classes contained in each class of `G`.
    images: Vec<Vec<usize>>,
}

impl BrauerMap {
    pub fn apply(&self, z: &[FieldElement]) -> Vector {
        let mut out = zero_vec(self.target.dim());
        for (i, tcs) in self.images.iter().enumerate() {
            for &tc in tcs {
                out[tc] = z[i];
            }
        }
        out
    }

    /// `C+ -> lambda((C intersect C_G(P))+)`.
    pub fn pull_back_character(&self, ctx: &FieldCtx, lambda: &[FieldElement]) -> Vec<FieldElement> {
        self.images
            .iter()
            .map(|tcs| tcs.iter().fold(FieldElement::ZERO, |acc, &tc| ctx.add(acc, lambda[tc])))
            .collect()
    }

    /// Position of a `G`-element in the target group, if it lies in `C_G(P)`.
    pub fn local_index(&self, g: GroupElement) -> Option<usize> {
        self.embed.binary_search(&g).ok()
    }
}

/// The blocks of `H/<u>` dominated by each block of `H`, for a central `p`-element `u`.
pub fn dominated_blocks(zc: &GroupAlgebraCenter, blocks: &[BlockRecord], u: GroupElement) -> Result<Vec<BlockRecord>> {
    let h = zc.group();
    let p = zc.prime();
    if !h.is_p_element(u, p) || h.conj_classes()[h.class_of(u)].size() != 1 {
        return Err(Error::Internal("dominated block needs a central p-element".into()));
    }
    let (hbar, proj) = h.quotient(&h.generate(&[u]))?;
    let zbar = GroupAlgebraCenter::with_field(Arc::new(hbar), zc.shared_ctx())?;
    let bar_blocks = zbar.blocks(BlockOptions::minimal())?;
    blocks
        .iter()
        .map(|b| {
            let mu = zc.project_center(&zbar, &proj, &b.idempotent);
            bar_blocks
                .iter()
                .find(|bb| bb.idempotent == mu)
                .cloned()
                .ok_or_else(|| Error::Internal("image of a block idempotent is not a block idempotent".into()))
        })
        .collect()
}

/// `bbar`: the block of `C_G(u)/<u>` dominated by `b`.
pub fn dominated_block(zc: &GroupAlgebraCenter, b: &BlockRecord, u: GroupElement) -> Result<BlockRecord> {
    Ok(dominated_blocks(zc, std::slice::from_ref(b), u)?.remove(0))
}

/// Semi-echelon rows over `GF(p)`; each row is zero at the pivots of earlier rows.
struct PrimeEchelon {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl PrimeEchelon {
    fn new(p: u32) -> Self {
        PrimeEchelon { p, rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<u32>) {
        let p = self.p;
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                let m = p - c;
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = (*x + m * r) % p;
                    }
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pc], p);
            for x in v.iter_mut() {
                *x = *x * inv % p;
            }
            self.rows.push((pc, v));
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut b, mut e, mut r) = (a as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// `LL(FD)` for a `p`-group `D`, as the nilpotency degree of the augmentation ideal.
///
/// `J^t = span{x (s - 1)}` over a basis `x` of `J^(t-1)` and generators `s`.
pub fn ll_group_algebra_pgroup(d: &FiniteGroup, p: u64) -> Result<usize> {
    let n = d.order();
    if n > MAX_PGROUP_ALGEBRA_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            cap: MAX_PGROUP_ALGEBRA_ORDER,
        });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_p_power(n as u64, p) {
        return Err(Error::NotPGroup(p));
    }
    let pp = p as u32;
    let right: Vec<Vec<usize>> = d
        .generators()
        .iter()
        .map(|&s| (0..n).map(|g| d.mul(g, s)).collect())
        .collect();
    let mut current = PrimeEchelon::new(pp);
    for g in 1..n {
        let mut v = vec![0u32; n];
        v[g] = 1;
        v[0] = pp - 1;
        current.insert(v);
    }
    let mut length = 1;
    while current.dim() > 0 {
        let mut next = PrimeEchelon::new(pp);
        for (_, x) in &current.rows {
            for perm in &right {
                let mut y = vec![0u32; n];
                for (g, &c) in x.iter().enumerate() {
                    if c != 0 {
                        y[perm[g]] = c;
                    }
                }
                for (yg, &c) in y.iter_mut().zip(x) {
                    *yg = (*yg + pp - c) % pp;
                }
                next.insert(y);
            }
        }
        if next.dim() == current.dim() {
            return Err(Error::NotNilpotent);
        }
        current = next;
        length += 1;
    }
    Ok(length)
}

/// A `B`-subsection `(u, b)`.
#[derive(Clone, Debug)]
pub struct Subsection {
    /// The representative `u`, inside the defect group when normalized.
    pub u: GroupElement,
    pub u_order: u32,
    pub centralizer_order: usize,
    /// `b`, a block of `C_G(u0)` for the class representative `u0`, in that
    /// centralizer's own element numbering.
    pub block: BlockRecord,
    /// `LL(Z bbar)` for the block of `C_G(u)/<u>` dominated by `b`.
    pub dominated_loewy_length: usize,
    pub major: bool,
    pub normalized: bool,
}

/// A named consistency check of the block machinery on one `(G, p)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MachineryCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything computed for one `(G, p)`.
#[derive(Clone, Debug)]
pub struct GroupAnalysis {
    pub center: GroupAlgebraCenter,
    pub blocks: Vec<BlockRecord>,
    /// Per block, in block order; empty when subsections were not requested.
    pub subsections: Vec<Vec<Subsection>>,
    pub checks: Vec<MachineryCheck>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    pub subsections: bool,
    pub machinery_checks: bool,
    /// Drives the sampled pairs of the homomorphism checks on large centers.
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            subsections: true,
            machinery_checks: true,
            seed: 0,
        }
    }
}

/// Blocks of a centralizer `C_G(u)` and how they induce to `G`.
struct LocalBlocks {
    map: BrauerMap,
    blocks: Vec<BlockRecord>,
    induced: Vec<Option<usize>>,
}

/// Centralizer embedding and the elements of `<u>` inside it.
type DominatedKey = (Vec<GroupElement>, Vec<GroupElement>);

#[derive(Default)]
struct Caches {
    locals: HashMap<Vec<GroupElement>, Arc<LocalBlocks>>,
    dominated: HashMap<DominatedKey, Arc<Vec<usize>>>,
}

pub fn analyze(group: Arc<FiniteGroup>, p: u64, opts: AnalysisOptions) -> Result<GroupAnalysis> {
    let center = GroupAlgebraCenter::build(group, p)?;
    let blocks = center.blocks(BlockOptions::full())?;
    let mut analysis = GroupAnalysis {
        subsections: vec![Vec::new(); blocks.len()],
        center,
        blocks,
        checks: Vec::new(),
        warnings: Vec::new(),
    };
    let mut caches = Caches::default();
    if opts.subsections {
        compute_subsections(&mut analysis, &mut caches)?;
    }
    if opts.machinery_checks {
        analysis.checks = machinery_checks(&analysis, &mut caches, opts.seed)?;
    }
    Ok(analysis)
}

fn local_blocks(center: &GroupAlgebraCenter, blocks: &[BlockRecord], caches: &mut Caches, u: GroupElement) -> Result<Arc<LocalBlocks>> {
    let c = center.group().centralizer(u);
    if let Some(hit) = caches.locals.get(c.elements()) {
        return Ok(Arc::clone(hit));
    }
    let key = c.elements().to_vec();
    let map = center.brauer_onto(c)?;
    let local = map.target.blocks(BlockOptions::minimal())?;
    let induced = local
        .iter()
        .map(|b| center.induced_block(blocks, &map, b).map(|bg| bg.index))
        .collect();
    let entry = Arc::new(LocalBlocks {
        map,
        blocks: local,
        induced,
    });
    caches.locals.insert(key, Arc::clone(&entry));
    Ok(entry)
}

fn dominated_lengths(local: &LocalBlocks, caches: &mut Caches, u_local: GroupElement) -> Result<Arc<Vec<usize>>> {
    let h = local.map.target.group();
    let key = (local.map.embed.clone(), h.generate(&[u_local]).elements().to_vec());
    if let Some(hit) = caches.dominated.get(&key) {
        return Ok(Arc::clone(hit));
    }
    let lengths: Vec<usize> = dominated_blocks(&local.map.target, &local.blocks, u_local)?
        .iter()
        .map(|b| b.loewy_length)
        .collect();
    let entry = Arc::new(lengths);
    caches.dominated.insert(key, Arc::clone(&entry));
    Ok(entry)
}

fn compute_subsections(analysis: &mut GroupAnalysis, caches: &mut Caches) -> Result<()> {
    let center = &analysis.center;
    let group = center.group();
    let p = center.prime();
    let mut per_block: Vec<Vec<Subsection>> = vec![Vec::new(); analysis.blocks.len()];
    let mut warnings = Vec::new();
    for (ci, class) in group.conj_classes().iter().enumerate() {
        let u0 = class.rep;
        if !group.is_p_element(u0, p) {
            continue;
        }
        let local = local_blocks(center, &analysis.blocks, caches, u0)?;
        let u0_local = local.map.local_index(u0).expect("u lies in its centralizer");
        let dominated = dominated_lengths(&local, caches, u0_local)?;
        let h = local.map.target.group();
        for (bi, b) in local.blocks.iter().enumerate() {
            let Some(big) = local.induced[bi] else {
                warnings.push(format!("block {bi} of C_G({u0}) has no induced block"));
                continue;
            };
            let dg = &analysis.blocks[big].defect_group;
            let in_d: Vec<GroupElement> = dg.elements().iter().copied().filter(|&x| group.class_of(x) == ci).collect();
            if in_d.is_empty() {
                warnings.push(format!("class {ci} induces block {big} but misses its defect group"));
                continue;
            }
            let normal_rep = in_d.iter().copied().find(|&u| {
                let c = group.class_conjugator(u);
                let cd = group.centralizer_in(dg, u);
                if cd.order() != b.defect_group.order() {
                    return false;
                }
                let back = group.conjugate_subgroup(&cd, group.inv(c));
                let local_elems: Vec<GroupElement> = back.elements().iter().map(|&x| local.map.local_index(x).expect("conjugate centralizes u0")).collect();
                let q = h.subgroup_from_elements(local_elems);
                h.conjugate_subgroup_leq(&q, &b.defect_group)
            });
            let normalized = normal_rep.is_some();
            if !normalized {
                warnings.push(format!("subsection at class {ci}, local block {bi} could not be normalized"));
            }
            let u = normal_rep.unwrap_or(in_d[0]);
            let major = group.center_of(dg).contains(u);
            per_block[big].push(Subsection {
                u,
                u_order: group.elem_order(u),
                centralizer_order: h.order(),
                block: b.clone(),
                dominated_loewy_length: dominated[bi],
                major,
                normalized,
            });
        }
    }
    analysis.subsections = per_block;
    analysis.warnings.extend(warnings);
    Ok(())
}

fn check(name: &'static str, failures: Vec<String>) -> MachineryCheck {
    MachineryCheck {
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: failures.join("; "),
    }
}

fn pair_indices(r: usize, seed: u64) -> Vec<(usize, usize)> {
    if r <= EXHAUSTIVE_PAIR_CLASSES {
        (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..r), rng.gen_range(0..r))).collect()
    }
}

fn machinery_checks(analysis: &GroupAnalysis, caches: &mut Caches, seed: u64) -> Result<Vec<MachineryCheck>> {
    let center = &analysis.center;
    let alg = center.algebra();
    let ctx = center.ctx();
    let group = center.group();
    let p = center.prime();
    let blocks = &analysis.blocks;
    let classes = group.conj_classes();
    let r = center.dim();
    let mut out = Vec::new();

    let mut fails = Vec::new();
    for a in blocks {
        if alg.mul(&a.idempotent, &a.idempotent) != a.idempotent {
            fails.push(format!("block {} idempotent is not idempotent", a.index));
        }
        for b in blocks.iter().filter(|b| b.index > a.index) {
            if !is_zero_vec(&alg.mul(&a.idempotent, &b.idempotent)) {
                fails.push(format!("blocks {} and {} not orthogonal", a.index, b.index));
            }
        }
    }
    out.push(check("idempotents_orthogonal", fails));

    let total = blocks.iter().fold(zero_vec(r), |acc, b| add_vec(ctx, &acc, &b.idempotent));
    let fails = if &total == alg.identity() { vec![] } else { vec!["sum differs from 1".into()] };
    out.push(check("idempotents_sum_to_one", fails));

    let mut fails = Vec::new();
    for b in blocks {
        // Local iff every b_i e - lambda_i e is nilpotent.
        let mut q = 1u64;
        while (q as usize) < b.dim_center {
            q *= p;
        }
        for i in 0..r {
            let x = alg.mul_basis(i, &b.idempotent);
            let y = crate::linalg::sub_vec(ctx, &x, &scale_vec(ctx, &b.idempotent, b.central_character[i]));
            let mut power = y.clone();
            for _ in 1..q {
                power = alg.mul(&power, &y);
            }
            if !is_zero_vec(&power) {
                fails.push(format!("block {} not primitive at class {i}", b.index));
                break;
            }
        }
    }
    out.push(check("idempotents_primitive", fails));

    let dim_sum: usize = blocks.iter().map(|b| b.dim_center).sum();
    let fails = if dim_sum == r { vec![] } else { vec![format!("sum dim ZB = {dim_sum}, classes = {r}")] };
    out.push(check("center_dimension_sum", fails));

    let mut fails = Vec::new();
    for b in blocks {
        for (i, c) in b.idempotent.iter().enumerate() {
            if !c.is_zero() && !group.is_p_regular(classes[i].rep, p) {
                fails.push(format!("block {} supported on p-singular class {i}", b.index));
            }
        }
    }
    out.push(check("p_regular_support", fails));

    let fails = blocks
        .iter()
        .filter(|b| b.defect_group.order() as u64 != p.pow(b.defect))
        .map(|b| format!("block {}: |D| = {} with d = {}", b.index, b.defect_group.order(), b.defect))
        .collect();
    out.push(check("defect_group_order", fails));

    let mut fails = Vec::new();
    for b in blocks {
        let (d, dg) = center.defect_and_group(b)?;
        if d != b.defect || dg != b.defect_group {
            fails.push(format!("block {} defect recomputation differs", b.index));
        }
    }
    out.push(check("defect_recomputation", fails));

    let mut fails = Vec::new();
    match center.principal_block(blocks) {
        None => fails.push("no principal block".into()),
        Some(b0) => {
            let sylow = group.sylow(p);
            if b0.defect_group.order() != sylow.order() || !group.conjugate_subgroup_leq(&b0.defect_group, &sylow) {
                fails.push("principal defect group is not Sylow".into());
            }
        }
    }
    out.push(check("principal_defect_sylow", fails));

    let mut fails = Vec::new();
    for (i, j) in pair_indices(r, seed) {
        let lhs = blocks.iter().map(|b| ctx.mul(b.central_character[i], b.central_character[j]));
        for (b, l) in blocks.iter().zip(lhs) {
            let rhs = alg
                .structure(i, j)
                .iter()
                .fold(FieldElement::ZERO, |acc, &(k, c)| ctx.add(acc, ctx.mul(c, b.central_character[k as usize])));
            if l != rhs {
                fails.push(format!("block {} character at ({i}, {j})", b.index));
            }
        }
    }
    out.push(check("central_character_multiplicative", fails));

    let mut fails = Vec::new();
    let mut tested: Vec<&Subgroup> = Vec::new();
    for b in blocks {
        if tested.contains(&&b.defect_group) {
            continue;
        }
        tested.push(&b.defect_group);
        let map = center.brauer_hom(&b.defect_group)?;
        let talg = map.target.algebra();
        let images: Vec<Vector> = (0..r).map(|i| map.apply(&unit_vec(r, i))).collect();
        for (i, j) in pair_indices(r, seed.wrapping_add(1)) {
            let lhs = map.apply(&alg.basis_product(i, j));
            if lhs != talg.mul(&images[i], &images[j]) {
                fails.push(format!("Brauer map for block {} at ({i}, {j})", b.index));
            }
        }
        if map.apply(alg.identity()) != *talg.identity() {
            fails.push(format!("Brauer map for block {} is not unital", b.index));
        }
    }
    out.push(check("brauer_hom_multiplicative", fails));

    let mut fails = Vec::new();
    if let Some(b0) = center.principal_block(blocks) {
        for class in classes.iter().filter(|c| group.is_p_element(c.rep, p)) {
            let local = local_blocks(center, blocks, caches, class.rep)?;
            let lp = local.blocks.iter().position(|b| b.principal);
            match lp.and_then(|i| local.induced[i]) {
                Some(idx) if idx == b0.index => {}
                _ => fails.push(format!("principal block of C_G({}) does not induce the principal block", class.rep)),
            }
            if local.induced.iter().any(Option::is_none) {
                fails.push(format!("a block of C_G({}) has no induced block", class.rep));
            }
        }
    }
    out.push(check("induced_principal_block", fails));

    if analysis.subsections.iter().any(|s| !s.is_empty()) {
        let mut fails = Vec::new();
        for (bi, subs) in analysis.subsections.iter().enumerate() {
            if !subs.iter().any(|s| s.u == group.identity() && s.block.defect == blocks[bi].defect) {
                fails.push(format!("block {bi} lacks the trivial subsection"));
            }
            for s in subs.iter().filter(|s| !s.normalized) {
                fails.push(format!("block {bi}: subsection at {} not normalized", s.u));
            }
        }
        out.push(check("subsections_normalized", fails));
    }
    Ok(out)
}
