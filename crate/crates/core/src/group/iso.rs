use std::collections::HashSet;

use super::{FiniteGroup, GroupElement};
use crate::error::{Error, Result};

pub const MAX_ISO_ORDER: usize = 512;

#[derive(PartialEq, Eq, Debug)]
struct Fingerprint {
    order: usize,
    exponent: u64,
    center: usize,
    derived: usize,
    /// sorted (element order, class size, number of square roots)
    profile: Vec<(u32, usize, usize)>,
}

impl FiniteGroup {
    fn square_root_counts(&self) -> Vec<usize> {
        let mut roots = vec![0; self.order()];
        for h in 0..self.order() {
            roots[self.mul(h, h)] += 1;
        }
        roots
    }

    fn element_profile(&self, g: GroupElement, roots: &[usize]) -> (u32, usize, usize) {
        let class = &self.conj_classes()[self.class_of(g)];
        (self.elem_order(g), class.size(), roots[g])
    }

    fn fingerprint(&self) -> Fingerprint {
        let roots = self.square_root_counts();
        let mut profile: Vec<_> = (0..self.order())
            .map(|g| self.element_profile(g, &roots))
            .collect();
        profile.sort_unstable();
        Fingerprint {
            order: self.order(),
            exponent: self.exponent(),
            center: self.center().order(),
            derived: self.derived_subgroup().order(),
            profile,
        }
    }

    /// Isomorphism test for groups of order at most 512: invariant fingerprint,
    /// then exhaustive search for images of a generating set.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> Result<bool> {
        for g in [self, other] {
            if g.order() > MAX_ISO_ORDER {
                return Err(Error::OrderTooLarge {
                    order: g.order(),
                    cap: MAX_ISO_ORDER,
                });
            }
        }
        if self.order() != other.order() {
            return Ok(false);
        }
        if self.fingerprint() != other.fingerprint() {
            return Ok(false);
        }
        let gens = self.generators().to_vec();
        let (ra, rb) = (self.square_root_counts(), other.square_root_counts());
        let candidates: Vec<Vec<GroupElement>> = gens
            .iter()
            .map(|&s| {
                let want = self.element_profile(s, &ra);
                (0..other.order())
                    .filter(|&t| other.element_profile(t, &rb) == want)
                    .collect()
            })
            .collect();
        let mut images = Vec::with_capacity(gens.len());
        Ok(self.search_images(other, &gens, &candidates, &mut images))
    }

    fn search_images(
        &self,
        other: &FiniteGroup,
        gens: &[GroupElement],
        candidates: &[Vec<GroupElement>],
        images: &mut Vec<GroupElement>,
    ) -> bool {
        let depth = images.len();
        if depth == gens.len() {
            return self
                .extend_hom(other, gens, images)
                .is_some_and(|map| map.iter().collect::<HashSet<_>>().len() == self.order());
        }
        for &t in &candidates[depth] {
            images.push(t);
            if self.extend_hom(other, &gens[..=depth], images).is_some()
                && self.search_images(other, gens, candidates, images)
            {
                return true;
            }
            images.pop();
        }
        false
    }

    /// Extends `gens[i] -> images[i]` to the generated subgroup, if consistent.
    fn extend_hom(
        &self,
        other: &FiniteGroup,
        gens: &[GroupElement],
        images: &[GroupElement],
    ) -> Option<Vec<GroupElement>> {
        let mut map = vec![usize::MAX; self.order()];
        map[0] = 0;
        let mut queue = vec![0];
        let mut reached = Vec::new();
        while let Some(x) = queue.pop() {
            reached.push(x);
            for (&s, &t) in gens.iter().zip(images) {
                let y = self.mul(x, s);
                let img = other.mul(map[x], t);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push(y);
                } else if map[y] != img {
                    return None;
                }
            }
        }
        Some(reached.into_iter().map(|x| map[x]).collect())
    }

    /// Whether some cyclic normal subgroup has cyclic quotient.
    pub fn is_metacyclic(&self) -> bool {
        let n = self.order();
        let mut seen = HashSet::new();
        for g in 0..n {
            let cyc = self.generate(&[g]);
            if !seen.insert(cyc.elements().to_vec()) {
                continue;
            }
            if !self.generators().iter().all(|&s| cyc.contains(self.conj(s, g))) {
                continue;
            }
            let index = n / cyc.order();
            let quotient_cyclic = (0..n).any(|h| {
                let mut x = h;
                let mut k = 1;
                while !cyc.contains(x) {
                    x = self.mul(x, h);
                    k += 1;
                }
                k == index
            });
            if quotient_cyclic {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use crate::group::GroupSpec;

    fn g(s: &str) -> crate::group::FiniteGroup {
        s.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    #[test]
    fn metacyclic_examples() {
        assert!(g("D8").is_metacyclic());
        assert!(g("Q16").is_metacyclic());
        assert!(g("C9:C3(4)").is_metacyclic());
        assert!(!g("ES+(3)").is_metacyclic());
        assert!(!g("Ab[2,2,2]").is_metacyclic());
        assert!(!g("W(4,3)").is_metacyclic());
    }

    #[test]
    fn isomorphism_examples() {
        assert!(g("ES+(5)").is_isomorphic(&g("ES+(5)")).unwrap());
        assert!(g("ES+(3)").is_isomorphic(&g("W(3,3)")).unwrap());
        assert!(g("D8").is_isomorphic(&g("W(3,2)")).unwrap());
        assert!(g("C6").is_isomorphic(&g("Ab[2,3]")).unwrap());
        assert!(g("S3").is_isomorphic(&g("D6")).unwrap());
        assert!(g("S3").is_isomorphic(&g("perm:[(1 2),(1 2 3)]")).unwrap());
        assert!(!g("D8").is_isomorphic(&g("Q8")).unwrap());
        assert!(!g("C4*C2").is_isomorphic(&g("C8")).unwrap());
        assert!(!g("W(4,3)").is_isomorphic(&g("ES+(3)*C3")).unwrap());
        assert!(g("C12").is_isomorphic(&g("C4*C3")).unwrap());
        assert!(g("S6").is_isomorphic(&g("S6")).is_err());
    }
}
