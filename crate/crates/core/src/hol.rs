//! Membership in `Hol(G) = rho(G) x| Aut(G)` and in its normalizer `NHol(G)`.
//!
//! `Hol(G)` is never listed in full here. A permutation `f` lies in it iff
//! `alpha(x) = f(x) f(1)^-1` is an automorphism, and then `f(x) = alpha(x) f(1)`.
//! A permutation normalizes the finite group `Hol(G)` iff it conjugates each
//! generator back into `Hol(G)`.

use std::collections::HashSet;

use thiserror::Error;

use crate::group::{respects_generators, Automorphism, FiniteGroup};
use crate::perm::{rho_rep, GPerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HolError {
    #[error("map is not a bijection of the element set")]
    NotBijective,
    #[error("exponent {ell} is not coprime to exp(G) = {exponent}")]
    NotCoprime { ell: i64, exponent: u64 },
    #[error("group of order {size} exceeds the size cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("the given elements generate a subgroup of order {generated}, not {order}")]
    NotGenerating { generated: usize, order: usize },
    #[error("no power f^l with 1 <= l <= {bound} lies in Hol(G)")]
    CosetBoundExceeded { bound: u64 },
    #[error("permutation has {len} points but the group has order {order}")]
    SizeMismatch { len: usize, order: usize },
}

/// Witness that `f(x) = alpha(x) * translation` for all `x`, i.e.
/// `f = rho(translation^-1) ∘ alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolDecomposition {
    pub translation: usize,
    pub alpha: Automorphism,
}

impl HolDecomposition {
    pub fn to_perm<G: FiniteGroup + ?Sized>(&self, group: &G) -> GPerm {
        rho_rep(group, group.inv(self.translation)).compose(&GPerm::from(&self.alpha))
    }
}

/// Decomposes `f` as an element of `Hol(G)`, or returns `None` if it is not one.
/// `O(N * #generators)`.
pub fn hol_membership<G: FiniteGroup + ?Sized>(f: &GPerm, group: &G) -> Option<HolDecomposition> {
    if f.len() != group.order() {
        return None;
    }
    let translation = f.apply(0);
    let back = group.inv(translation);
    let alpha: Vec<usize> = f.map().iter().map(|&y| group.mul(y, back)).collect();
    respects_generators(group, &alpha).ok()?;
    Some(HolDecomposition { translation, alpha: Automorphism::from_map_unchecked(alpha) })
}

/// Whether `f` is an automorphism, i.e. lies in `Hol(G)` and fixes the identity.
pub fn is_automorphism<G: FiniteGroup + ?Sized>(f: &GPerm, group: &G) -> bool {
    f.apply(0) == 0 && hol_membership(f, group).is_some()
}

/// Generators of `Hol(G)`: `rho` of a generating set of `G`, plus generators of `Aut(G)`.
#[derive(Debug, Clone)]
pub struct HolGenSet<'g, G: FiniteGroup + ?Sized> {
    group: &'g G,
    generators: Vec<GPerm>,
    aut_generator_count: usize,
}

impl<'g, G: FiniteGroup + ?Sized> HolGenSet<'g, G> {
    /// Uses `aut_generators` as given; they must generate `Aut(G)`.
    pub fn new(group: &'g G, aut_generators: &[Automorphism]) -> Self {
        let mut generators: Vec<GPerm> =
            group.generators().iter().map(|&g| rho_rep(group, g)).collect();
        generators.extend(aut_generators.iter().map(GPerm::from));
        Self { group, generators, aut_generator_count: aut_generators.len() }
    }

    /// Picks a generating subset of a complete list of automorphisms.
    pub fn from_automorphisms(group: &'g G, auts: &[Automorphism]) -> Self {
        Self::new(group, &select_generators(auts))
    }

    pub fn group(&self) -> &'g G {
        self.group
    }

    pub fn generators(&self) -> &[GPerm] {
        &self.generators
    }

    pub fn aut_generators(&self) -> &[GPerm] {
        &self.generators[self.generators.len() - self.aut_generator_count..]
    }
}

/// Greedy generating set of the group formed by `auts` (which must be closed
/// under composition). Elements are tried in list order.
pub fn select_generators(auts: &[Automorphism]) -> Vec<Automorphism> {
    let Some(first) = auts.first() else { return Vec::new() };
    let identity = Automorphism::identity(first.map().len());
    let mut seen: HashSet<Automorphism> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut gens: Vec<Automorphism> = Vec::new();
    for theta in auts {
        if seen.contains(theta) {
            continue;
        }
        gens.push(theta.clone());
        let mut queue = elements.clone();
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    elements.push(y.clone());
                    queue.push(y);
                }
            }
        }
    }
    gens
}

/// `f ∈ NHol(G)`: every generator of `Hol(G)` conjugates back into `Hol(G)`.
pub fn nhol_membership<G: FiniteGroup + ?Sized>(f: &GPerm, hol: &HolGenSet<'_, G>) -> bool {
    nhol_witness(f, hol).is_none()
}

/// The first generator `h` with `f h f^-1 ∉ Hol(G)`, if any.
pub fn nhol_witness<G: FiniteGroup + ?Sized>(f: &GPerm, hol: &HolGenSet<'_, G>) -> Option<usize> {
    if f.len() != hol.group.order() {
        return Some(0);
    }
    hol.generators
        .iter()
        .position(|h| hol_membership(&f.conjugate(h), hol.group).is_none())
}

/// Default search bound for [`coset_order_in_t`]: `|G|` times the largest element order.
pub fn default_coset_bound<G: FiniteGroup + ?Sized>(group: &G) -> u64 {
    let max_order = (0..group.order()).map(|x| group.element_order(x)).max().unwrap_or(1);
    group.order() as u64 * max_order
}

/// Order of `f Hol(G)` in `T(G)`: the least `l >= 1` with `f^l ∈ Hol(G)`.
///
/// Assumes `f ∈ NHol(G)`; errors when no `l <= bound` works.
pub fn coset_order_in_t<G: FiniteGroup + ?Sized>(
    f: &GPerm,
    group: &G,
    bound: u64,
) -> Result<u64, HolError> {
    if f.len() != group.order() {
        return Err(HolError::SizeMismatch { len: f.len(), order: group.order() });
    }
    let mut power = f.clone();
    for l in 1..=bound {
        if hol_membership(&power, group).is_some() {
            return Ok(l);
        }
        power = power.compose(f);
    }
    Err(HolError::CosetBoundExceeded { bound })
}

/// Closure of a set of permutations, or `None` once it exceeds `limit` elements.
/// Oracle use only.
pub fn perm_closure(gens: &[GPerm], limit: usize) -> Option<HashSet<GPerm>> {
    let n = gens.first().map_or(0, GPerm::len);
    let identity = GPerm::identity(n);
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = vec![identity];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = x.compose(g);
            if !seen.contains(&y) {
                if seen.len() >= limit {
                    return None;
                }
                seen.insert(y.clone());
                queue.push(y);
            }
        }
    }
    Some(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::enumerate_aut;
    use crate::group::{small, GroupTable, DEFAULT_SIZE_CAP};
    use crate::perm::{inverse_map_perm, lambda_rep};

    fn hol_of(g: &GroupTable) -> HolGenSet<'_, GroupTable> {
        let auts = enumerate_aut(g, g.generators(), DEFAULT_SIZE_CAP).unwrap();
        HolGenSet::from_automorphisms(g, &auts)
    }

    #[test]
    fn decomposition_examples() {
        let g = small::dihedral(4);
        let id = hol_membership(&GPerm::identity(8), &g).unwrap();
        assert_eq!(id.translation, 0);
        assert!(id.alpha.is_identity());
        for x in 0..8 {
            let d = hol_membership(&rho_rep(&g, x), &g).unwrap();
            assert_eq!(d.translation, g.inv(x));
            assert!(d.alpha.is_identity());
            assert_eq!(d.to_perm(&g), rho_rep(&g, x));
            // lambda(x) = conjugation by x followed by right multiplication by x
            let d = hol_membership(&lambda_rep(&g, x), &g).unwrap();
            assert_eq!(d.translation, x);
            for y in 0..8 {
                assert_eq!(d.alpha.apply(y), g.mul(g.mul(x, y), g.inv(x)));
            }
        }
    }

    #[test]
    fn transposition_is_not_in_hol() {
        let c5 = GroupTable::abelian(&[5]).unwrap();
        let f = GPerm::new(vec![0, 2, 1, 3, 4]).unwrap();
        assert!(hol_membership(&f, &c5).is_none());
    }

    #[test]
    fn hol_membership_matches_closure() {
        for g in [small::symmetric3(), GroupTable::abelian(&[2, 2]).unwrap(), small::quaternion8(), GroupTable::abelian(&[5]).unwrap()] {
            let hol = hol_of(&g);
            let auts = enumerate_aut(&g, g.generators(), DEFAULT_SIZE_CAP).unwrap();
            let closure = perm_closure(hol.generators(), 100_000).unwrap();
            assert_eq!(closure.len(), g.order() * auts.len());
            // every identity-fixing permutation: member iff in the closure
            let n = g.order();
            let mut rest: Vec<usize> = (1..n).collect();
            all_perms(&mut rest, 0, &mut |tail| {
                let mut map = vec![0];
                map.extend_from_slice(tail);
                let f = GPerm::new(map).unwrap();
                assert_eq!(hol_membership(&f, &g).is_some(), closure.contains(&f));
            });
            for h in &closure {
                assert!(hol_membership(h, &g).is_some());
            }
        }
    }

    #[test]
    fn nhol_examples() {
        let g = small::symmetric3();
        let hol = hol_of(&g);
        for h in hol.generators() {
            assert!(nhol_membership(h, &hol));
        }
        assert!(nhol_membership(&inverse_map_perm(&g), &hol));
        assert_eq!(coset_order_in_t(&inverse_map_perm(&g), &g, 10), Ok(2));
        assert_eq!(coset_order_in_t(&lambda_rep(&g, 1), &g, 10), Ok(1));

        let c5 = GroupTable::abelian(&[5]).unwrap();
        let hol5 = hol_of(&c5);
        assert!(nhol_membership(&inverse_map_perm(&c5), &hol5));
        assert_eq!(coset_order_in_t(&inverse_map_perm(&c5), &c5, 10), Ok(1));
        // found by scanning S_5 on C5 for the first non-normalizing permutation
        let f = GPerm::new(vec![0, 1, 3, 2, 4]).unwrap();
        assert!(!nhol_membership(&f, &hol5));
    }

    #[test]
    fn conjugation_by_normalizer_permutes_hol() {
        let g = small::dihedral(4);
        let hol = hol_of(&g);
        let closure = perm_closure(hol.generators(), 100_000).unwrap();
        let f = inverse_map_perm(&g);
        let conjugated: HashSet<GPerm> = closure.iter().map(|h| f.conjugate(h)).collect();
        assert_eq!(conjugated, closure);
    }

    #[test]
    fn coset_bound_is_enforced() {
        let c5 = GroupTable::abelian(&[5]).unwrap();
        let f = GPerm::new(vec![0, 1, 3, 2, 4]).unwrap();
        assert_eq!(coset_order_in_t(&f, &c5, 1), Err(HolError::CosetBoundExceeded { bound: 1 }));
        assert_eq!(default_coset_bound(&c5), 25);
    }

    pub(crate) fn all_perms(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            all_perms(v, k + 1, f);
            v.swap(k, i);
        }
    }
}
