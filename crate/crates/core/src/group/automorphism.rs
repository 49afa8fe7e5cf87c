use super::{respects_generators, FiniteGroup, GroupError, GroupTable};
use crate::modarith::gcd;

/// A validated automorphism, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    map: Vec<usize>,
}

impl Automorphism {
    pub fn new<G: FiniteGroup + ?Sized>(group: &G, map: Vec<usize>) -> Result<Self, GroupError> {
        let n = group.order();
        if map.len() != n {
            return Err(GroupError::MapLength { len: map.len(), expected: n });
        }
        let mut hit = vec![false; n];
        for &y in &map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return Err(GroupError::NotBijective);
            }
        }
        if map[0] != 0 {
            return Err(GroupError::IdentityNotFixed);
        }
        respects_generators(group, &map)?;
        Ok(Self { map })
    }

    /// Wraps a map the caller has already validated.
    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y] = x;
        }
        Self { map }
    }

    /// `self^e` for `e >= 0`.
    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.map.len());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut current = self.clone();
        let mut k = 1;
        while !current.is_identity() {
            current = current.compose(self);
            k += 1;
        }
        k
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.compose(other) == other.compose(self)
    }
}

/// The power map `a -> a^ell` on an abelian group.
pub fn power_map_aut(group: &GroupTable, ell: i64) -> Result<Automorphism, GroupError> {
    if !group.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let exponent = group.exponent();
    let reduced = ell.rem_euclid(exponent as i64) as u64;
    if gcd(reduced, exponent) != 1 {
        return Err(GroupError::NotCoprime { ell, exponent });
    }
    let map = (0..group.order()).map(|a| group.pow(a, ell)).collect();
    Automorphism::new(group, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{respects_all_products, small};

    #[test]
    fn power_maps_on_cyclic_groups() {
        let c7 = GroupTable::abelian(&[7]).unwrap();
        assert_eq!(power_map_aut(&c7, 2).unwrap().order(), 3);
        assert!(power_map_aut(&c7, 1).unwrap().is_identity());
        assert_eq!(power_map_aut(&c7, -1).unwrap().order(), 2);
        let c19 = GroupTable::abelian(&[19]).unwrap();
        assert_eq!(power_map_aut(&c19, 4).unwrap().order(), 9);
    }

    #[test]
    fn power_map_rejections() {
        let c9 = GroupTable::abelian(&[9]).unwrap();
        assert!(matches!(power_map_aut(&c9, 3), Err(GroupError::NotCoprime { .. })));
        assert!(matches!(power_map_aut(&small::symmetric3(), 5), Err(GroupError::NotAbelian)));
    }

    #[test]
    fn validation_rejects_non_automorphisms() {
        let c5 = GroupTable::abelian(&[5]).unwrap();
        assert!(matches!(Automorphism::new(&c5, vec![0, 2, 1, 3, 4]), Err(GroupError::NotHomomorphism { .. })));
        assert!(matches!(Automorphism::new(&c5, vec![1, 0, 2, 3, 4]), Err(GroupError::IdentityNotFixed)));
        assert!(matches!(Automorphism::new(&c5, vec![0, 1, 1, 3, 4]), Err(GroupError::NotBijective)));
        assert!(matches!(Automorphism::new(&c5, vec![0, 1]), Err(GroupError::MapLength { .. })));
    }

    #[test]
    fn generator_check_agrees_with_all_pairs() {
        let g = small::symmetric3();
        // every identity-fixing bijection of S3
        let mut rest: Vec<usize> = (1..6).collect();
        permute(&mut rest, 0, &mut |tail| {
            let mut map = vec![0];
            map.extend_from_slice(tail);
            assert_eq!(Automorphism::new(&g, map.clone()).is_ok(), respects_all_products(&g, &map));
        });
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn group_operations_on_automorphisms() {
        let c7 = GroupTable::abelian(&[7]).unwrap();
        let a = power_map_aut(&c7, 3).unwrap();
        assert_eq!(a.order(), 6);
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.pow(6), Automorphism::identity(7));
        assert_eq!(a.pow(2), power_map_aut(&c7, 2).unwrap());
    }
}
