//! Permutations of a group's element set and the standard maps into `Perm(G)`.
//!
//! Composition is `(f ∘ g)(x) = f(g(x))` throughout, which makes both
//! `lambda_rep` and `rho_rep` homomorphisms.

use std::fmt;

use crate::group::{Automorphism, FiniteGroup};
use crate::hol::HolError;
use crate::modarith::gcd;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GPerm {
    map: Vec<usize>,
}

impl fmt::Debug for GPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GPerm{:?}", self.map)
    }
}

impl GPerm {
    pub fn new(map: Vec<usize>) -> Result<Self, HolError> {
        let mut hit = vec![false; map.len()];
        for &y in &map {
            if y >= map.len() || std::mem::replace(&mut hit[y], true) {
                return Err(HolError::NotBijective);
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
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

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.len());
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

    /// `self ∘ h ∘ self^-1`.
    pub fn conjugate(&self, h: &Self) -> Self {
        let mut map = vec![0; self.len()];
        for x in 0..self.len() {
            map[self.map[x]] = self.map[h.map[x]];
        }
        Self { map }
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.map[x] == x).collect()
    }

    /// Order as an element of `Perm(G)`.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.len()];
        let mut order = 1u64;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.map[x];
                len += 1;
            }
            order = crate::modarith::lcm(order, len);
        }
        order
    }
}

impl From<&Automorphism> for GPerm {
    fn from(a: &Automorphism) -> Self {
        Self { map: a.map().to_vec() }
    }
}

/// `lambda(g) = (x -> g x)`.
pub fn lambda_rep<G: FiniteGroup + ?Sized>(group: &G, g: usize) -> GPerm {
    GPerm { map: (0..group.order()).map(|x| group.mul(g, x)).collect() }
}

/// `rho(g) = (x -> x g^-1)`.
pub fn rho_rep<G: FiniteGroup + ?Sized>(group: &G, g: usize) -> GPerm {
    let gi = group.inv(g);
    GPerm { map: (0..group.order()).map(|x| group.mul(x, gi)).collect() }
}

/// `x -> x^-1`.
pub fn inverse_map_perm<G: FiniteGroup + ?Sized>(group: &G) -> GPerm {
    GPerm { map: (0..group.order()).map(|x| group.inv(x)).collect() }
}

/// `x -> x^ell`, which is a bijection when `ell` is coprime to `exp(G)`.
pub fn power_map_perm<G: FiniteGroup + ?Sized>(group: &G, ell: i64) -> Result<GPerm, HolError> {
    let exponent = group.exponent();
    if gcd(ell.rem_euclid(exponent as i64) as u64, exponent) != 1 && exponent != 1 {
        return Err(HolError::NotCoprime { ell, exponent });
    }
    GPerm::new((0..group.order()).map(|x| group.pow(x, ell)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{small, GroupTable};

    #[test]
    fn regular_representations_are_homomorphisms() {
        let g = small::dihedral(4);
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                assert_eq!(lambda_rep(&g, a).compose(&lambda_rep(&g, b)), lambda_rep(&g, ab));
                assert_eq!(rho_rep(&g, a).compose(&rho_rep(&g, b)), rho_rep(&g, ab));
                // left and right translations commute
                assert_eq!(
                    lambda_rep(&g, a).compose(&rho_rep(&g, b)),
                    rho_rep(&g, b).compose(&lambda_rep(&g, a))
                );
            }
        }
    }

    #[test]
    fn identity_element_gives_identity_permutation() {
        let g = small::symmetric3();
        assert!(lambda_rep(&g, 0).is_identity());
        assert!(rho_rep(&g, 0).is_identity());
    }

    #[test]
    fn lambda_equals_rho_of_inverse_only_when_abelian() {
        let c6 = GroupTable::abelian(&[6]).unwrap();
        assert!((0..6).all(|g| lambda_rep(&c6, g) == rho_rep(&c6, c6.inv(g))));
        let s3 = small::symmetric3();
        assert!((0..6).any(|g| lambda_rep(&s3, g) != rho_rep(&s3, s3.inv(g))));
    }

    #[test]
    fn inverse_map_examples() {
        let e8 = GroupTable::abelian(&[2, 2, 2]).unwrap();
        assert!(inverse_map_perm(&e8).is_identity());
        let c3 = GroupTable::abelian(&[3]).unwrap();
        assert_eq!(inverse_map_perm(&c3).map(), &[0, 2, 1]);
        let s3 = small::symmetric3();
        let fixed = inverse_map_perm(&s3).fixed_points();
        assert_eq!(fixed.len(), 4);
        assert!(fixed.iter().all(|&x| s3.element_order(x) <= 2));
    }

    #[test]
    fn power_maps() {
        let d5 = small::dihedral(5);
        assert!(power_map_perm(&d5, 1).unwrap().is_identity());
        // exp(D5) = 10, so 9 = -1 mod exp
        assert_eq!(power_map_perm(&d5, 9).unwrap(), inverse_map_perm(&d5));
        assert!(matches!(power_map_perm(&d5, 5), Err(HolError::NotCoprime { .. })));
    }

    #[test]
    fn permutation_algebra() {
        let p = GPerm::new(vec![1, 2, 0, 4, 3]).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert!(p.compose(&p.inverse()).is_identity());
        let q = GPerm::new(vec![0, 1, 2, 4, 3]).unwrap();
        assert_eq!(p.conjugate(&q), p.compose(&q).compose(&p.inverse()));
        assert!(GPerm::new(vec![0, 0]).is_err());
    }
}
