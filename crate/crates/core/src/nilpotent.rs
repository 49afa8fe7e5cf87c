//! Power maps `x -> x^l` on small p-groups of class `2 <= c <= p - 1`: the
//! predicted membership in `NHol(G)` and triviality in `T(G)`, checked directly.

use serde::Serialize;
use thiserror::Error;

use crate::aut::{aut_search_generators, enumerate_aut};
use crate::group::{subgroup_elements, FiniteGroup, GroupError, GroupTable, DEFAULT_SIZE_CAP};
use crate::hol::{coset_order_in_t, hol_membership, nhol_membership, HolError, HolGenSet};
use crate::modarith::{gcd, is_prime, padic_val};
use crate::perm::{power_map_perm, GPerm};

#[derive(Debug, Error)]
pub enum NilpotentError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group order {order} is not a power of {p}")]
    NotPGroup { order: usize, p: u64 },
    #[error("the lower central series stalls at a subgroup of order {0}")]
    NotNilpotent(usize),
    #[error("the Heisenberg construction here needs an odd prime at most 7, got {0}")]
    BadHeisenbergPrime(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hol(#[from] HolError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilpotencyData {
    pub p: u64,
    pub class: usize,
    pub center: Vec<usize>,
    /// `gamma_1 = G, gamma_2 = [G, G], ...`, ending with the trivial subgroup.
    pub lower_central: Vec<Vec<usize>>,
    /// `exp(G / Z(G)) = p^r`.
    pub r: u32,
    /// `exp(gamma_3) = p^t`.
    pub t: u32,
}

impl NilpotencyData {
    pub fn gamma(&self, i: usize) -> &[usize] {
        self.lower_central.get(i - 1).map_or(&[0][..], Vec::as_slice)
    }
}

fn commutator(g: &GroupTable, x: usize, y: usize) -> usize {
    g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y))
}

pub fn nilpotency_data(group: &GroupTable, p: u64) -> Result<NilpotencyData, NilpotentError> {
    if !is_prime(p) {
        return Err(NilpotentError::NotPrime(p));
    }
    let order = group.order();
    let e = padic_val(p, order as u64).map_err(|_| NilpotentError::NotPGroup { order, p })?;
    if p.pow(e) != order as u64 {
        return Err(NilpotentError::NotPGroup { order, p });
    }

    let center = group.center();
    let mut in_center = vec![false; order];
    for &z in &center {
        in_center[z] = true;
    }

    let mut lower_central = vec![(0..order).collect::<Vec<_>>()];
    while lower_central.last().expect("nonempty").len() > 1 {
        let current = lower_central.last().expect("nonempty");
        let mut commutators: Vec<usize> = (0..order)
            .flat_map(|x| current.iter().map(move |&y| (x, y)))
            .map(|(x, y)| commutator(group, x, y))
            .collect();
        commutators.sort_unstable();
        commutators.dedup();
        let next = subgroup_elements(group, &commutators);
        if next.len() == current.len() {
            return Err(NilpotentError::NotNilpotent(next.len()));
        }
        lower_central.push(next);
    }
    let class = lower_central.len() - 1;

    // least j with x^j central is the order of x Z(G)
    let quotient_exp = (0..order)
        .map(|x| {
            let mut y = x;
            let mut j = 1u64;
            while !in_center[y] {
                y = group.mul(y, x);
                j += 1;
            }
            j
        })
        .max()
        .unwrap_or(1);
    let gamma3_exp = lower_central
        .get(2)
        .map_or(1, |g3| g3.iter().map(|&x| group.element_order(x)).max().unwrap_or(1));
    let log = |v: u64| padic_val(p, v).expect("p-group element orders are positive");
    Ok(NilpotencyData { p, class, center, lower_central, r: log(quotient_exp), t: log(gamma3_exp) })
}

/// `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')` mod `p`, element
/// `(a, b, c)` at index `a p^2 + b p + c`.
pub fn build_heisenberg(p: u64) -> Result<GroupTable, NilpotentError> {
    if p == 2 || p > 7 || !is_prime(p) {
        return Err(NilpotentError::BadHeisenbergPrime(p));
    }
    let p = p as usize;
    let split = |x: usize| (x / (p * p), (x / p) % p, x % p);
    Ok(GroupTable::from_fn(p * p * p, DEFAULT_SIZE_CAP, |x, y| {
        let (a1, b1, c1) = split(x);
        let (a2, b2, c2) = split(y);
        ((a1 + a2) % p) * p * p + ((b1 + b2) % p) * p + (c1 + c2 + a1 * b2) % p
    })?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm11Outcome {
    pub ell: i64,
    /// Class in `2..=p-1` and `l` coprime to `p`.
    pub applicable: bool,
    pub in_nhol: bool,
    /// `x -> x^l` lies in `Hol(G)`.
    pub coset_trivial: bool,
    /// `l = 1 (mod p^t)`.
    pub predicted_in_nhol: bool,
    /// `l = 1 (mod p^r)`.
    pub predicted_trivial: bool,
    /// Order of the coset in `T(G)`, when `x -> x^l` normalizes `Hol(G)`.
    pub coset_order: Option<u64>,
}

impl Thm11Outcome {
    /// The computation is consistent with the prediction: when `l = 1 (mod p^t)`,
    /// the map normalizes `Hol(G)` and is trivial in `T(G)` exactly when
    /// `l = 1 (mod p^r)`. Vacuous when not applicable.
    pub fn agrees(&self) -> bool {
        !self.applicable
            || !self.predicted_in_nhol
            || (self.in_nhol && self.coset_trivial == self.predicted_trivial)
    }
}

/// Computes `Aut(G)` once and checks any number of exponents.
pub struct Thm11Checker<'g> {
    group: &'g GroupTable,
    data: NilpotencyData,
    hol: HolGenSet<'g, GroupTable>,
}

impl<'g> Thm11Checker<'g> {
    pub fn new(group: &'g GroupTable, p: u64) -> Result<Self, NilpotentError> {
        let data = nilpotency_data(group, p)?;
        let auts = enumerate_aut(group, &aut_search_generators(group), DEFAULT_SIZE_CAP)?;
        let hol = HolGenSet::from_automorphisms(group, &auts);
        Ok(Self { group, data, hol })
    }

    pub fn data(&self) -> &NilpotencyData {
        &self.data
    }

    pub fn check(&self, ell: i64) -> Result<Thm11Outcome, NilpotentError> {
        let p = self.data.p;
        let class_ok = self.data.class >= 2 && (self.data.class as u64) < p;
        let coprime = gcd(ell.unsigned_abs(), p) == 1;
        let applicable = class_ok && coprime;
        let congruent = |e: u32| ell.rem_euclid(p.pow(e) as i64) == 1 % p.pow(e) as i64;
        let predicted_in_nhol = congruent(self.data.t);
        let predicted_trivial = congruent(self.data.r);
        if !coprime {
            return Ok(Thm11Outcome {
                ell,
                applicable,
                in_nhol: false,
                coset_trivial: false,
                predicted_in_nhol,
                predicted_trivial,
                coset_order: None,
            });
        }
        let pi: GPerm = power_map_perm(self.group, ell)?;
        let in_nhol = nhol_membership(&pi, &self.hol);
        let coset_trivial = hol_membership(&pi, self.group).is_some();
        let coset_order = if in_nhol {
            Some(coset_order_in_t(&pi, self.group, pi.order())?)
        } else {
            None
        };
        Ok(Thm11Outcome {
            ell,
            applicable,
            in_nhol,
            coset_trivial,
            predicted_in_nhol,
            predicted_trivial,
            coset_order,
        })
    }
}

/// One-shot form of [`Thm11Checker::check`].
pub fn thm11_check(group: &GroupTable, p: u64, ell: i64) -> Result<Thm11Outcome, NilpotentError> {
    Thm11Checker::new(group, p)?.check(ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_27_data() {
        let h = build_heisenberg(3).unwrap();
        assert_eq!(h.order(), 27);
        assert_eq!(h.exponent(), 3);
        let data = nilpotency_data(&h, 3).unwrap();
        assert_eq!(data.class, 2);
        assert_eq!(data.center.len(), 3);
        assert_eq!(data.gamma(2).len(), 3);
        assert_eq!(data.gamma(3), &[0]);
        assert_eq!((data.r, data.t), (1, 0));
    }

    #[test]
    fn heisenberg_125_has_class_two() {
        let h = build_heisenberg(5).unwrap();
        assert_eq!(h.order(), 125);
        assert_eq!(nilpotency_data(&h, 5).unwrap().class, 2);
        assert!(build_heisenberg(2).is_err());
        assert!(build_heisenberg(11).is_err());
    }

    #[test]
    fn abelian_and_invalid_inputs() {
        let c9 = GroupTable::cyclic(9).unwrap();
        let data = nilpotency_data(&c9, 3).unwrap();
        assert_eq!(data.class, 1);
        assert_eq!(data.r, 0);
        let c33 = GroupTable::abelian(&[3, 3]).unwrap();
        assert_eq!(nilpotency_data(&c33, 3).unwrap().class, 1);
        assert!(matches!(nilpotency_data(&c9, 2), Err(NilpotentError::NotPGroup { .. })));
        assert!(matches!(nilpotency_data(&c9, 9), Err(NilpotentError::NotPrime(9))));
        assert_eq!(nilpotency_data(&GroupTable::trivial().unwrap(), 3).unwrap().class, 0);
        assert!(!thm11_check(&c9, 3, 2).unwrap().applicable);
    }

    #[test]
    fn power_maps_on_heisenberg_27() {
        let h = build_heisenberg(3).unwrap();
        let checker = Thm11Checker::new(&h, 3).unwrap();
        let two = checker.check(2).unwrap();
        assert!(two.applicable && two.in_nhol && !two.coset_trivial);
        assert_eq!(two.coset_order, Some(2));
        assert!(two.agrees());
        let four = checker.check(4).unwrap();
        assert!(four.in_nhol && four.coset_trivial);
        assert!(four.agrees());
        let one = checker.check(1).unwrap();
        assert!(one.coset_trivial);
        assert!(!checker.check(3).unwrap().applicable);
        // x -> x^2 permutes the elements but is not an automorphism
        let sq = power_map_perm(&h, 2).unwrap();
        assert!(hol_membership(&sq, &h).is_none());
    }
}
