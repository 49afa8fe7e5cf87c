//! Brute-force references for small groups, used to cross-check the fast paths.
//!
//! Nothing here uses the generator shortcuts of the main code: automorphisms
//! are found by scanning all permutations, and `NHol(G)` by scanning all
//! identity-fixing permutations (every coset of `Hol(G)` in `NHol(G)` meets
//! the stabilizer of the identity, and `Hol(G) ∩ Stab(1) = Aut(G)`).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::aut::{aut_search_generators, enumerate_aut};
use crate::group::{respects_all_products, Automorphism, FiniteGroup, GroupTable, DEFAULT_SIZE_CAP};
use crate::hol::{coset_order_in_t, nhol_membership, perm_closure, HolError, HolGenSet};
use crate::perm::{lambda_rep, rho_rep, GPerm};

/// Largest group handled by [`brute_aut`].
pub const BRUTE_AUT_LIMIT: usize = 10;

/// Largest group handled by [`regular_subgroup_check`].
pub const REGULAR_SUBGROUP_LIMIT: usize = 6;

/// Default cap on the number of identity-fixing permutations [`brute_nhol`] may scan.
pub const DEFAULT_SCAN_CAP: u64 = 40_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("group of order {order} is above the oracle limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("scan of {count} permutations exceeds the cap {cap}")]
    ScanCapExceeded { count: u128, cap: u64 },
    #[error(transparent)]
    Hol(#[from] HolError),
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Visits every permutation of `0..n` fixing 0, as an image array.
fn for_each_fixing_perm(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            rec(v, k + 1, f);
            v.swap(k, i);
        }
    }
    let mut v: Vec<usize> = (0..n).collect();
    rec(&mut v, 1.min(n), f);
}

/// `Aut(G)` by testing every identity-fixing permutation against all products.
pub fn brute_aut(group: &GroupTable) -> Result<Vec<Automorphism>, OracleError> {
    let n = group.order();
    if n > BRUTE_AUT_LIMIT {
        return Err(OracleError::TooLarge { order: n, limit: BRUTE_AUT_LIMIT });
    }
    let mut out = Vec::new();
    for_each_fixing_perm(n, &mut |map| {
        if respects_all_products(group, map) {
            out.push(Automorphism::from_map_unchecked(map.to_vec()));
        }
    });
    out.sort();
    Ok(out)
}

/// `T(G) = NHol(G) / Hol(G)` found by exhaustive scan.
#[derive(Debug, Clone)]
pub struct TStructure {
    pub aut_order: usize,
    /// Identity-fixing elements of `NHol(G)`; `|T(G)|` times `|Aut(G)|`.
    pub stabilizer_count: usize,
    /// One identity-fixing representative per coset, in increasing order.
    pub representatives: Vec<GPerm>,
    /// Order of each coset, aligned with `representatives`.
    pub coset_orders: Vec<u64>,
}

impl TStructure {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    /// Number of elements of `T(G)` of each order.
    pub fn order_spectrum(&self) -> BTreeMap<u64, usize> {
        let mut spectrum = BTreeMap::new();
        for &o in &self.coset_orders {
            *spectrum.entry(o).or_insert(0) += 1;
        }
        spectrum
    }

    /// Whether every non-trivial element of `T(G)` has order 2.
    ///
    /// Groups of exponent 2 are abelian, so this is exactly "elementary abelian 2-group".
    pub fn is_elementary_abelian_2(&self) -> bool {
        self.coset_orders.iter().all(|&o| o <= 2)
    }
}

// Depth-first search over identity-fixing permutations, assigning f(1), f(2), ...
// A partial assignment is abandoned once some conjugate f h f^-1 of a Hol
// generator provably leaves Hol: with c = f h f^-1 and t = c(1), membership
// needs alpha(y) = c(y) t^-1 to be multiplicative wherever it is defined.
struct NholScan<'a> {
    group: &'a GroupTable,
    gens: Vec<GPerm>,
    hol: &'a HolGenSet<'a, GroupTable>,
}

struct ScanState {
    f: Vec<usize>,
    used: Vec<bool>,
    // conj[h][y] = (f h f^-1)(y) where known
    conj: Vec<Vec<usize>>,
    known: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl<'a> NholScan<'a> {
    fn run(&self, first_image: usize, out: &mut Vec<GPerm>) {
        let n = self.group.order();
        let mut state = ScanState {
            f: vec![UNSET; n],
            used: vec![false; n],
            conj: vec![vec![UNSET; n]; self.gens.len()],
            known: vec![Vec::new(); self.gens.len()],
        };
        state.f[0] = 0;
        state.used[0] = true;
        if n == 1 {
            out.push(GPerm::identity(1));
            return;
        }
        if self.assign(&mut state, 0, 0) {
            self.descend(&mut state, 1, first_image, out);
        }
    }

    fn descend(&self, st: &mut ScanState, x: usize, v: usize, out: &mut Vec<GPerm>) {
        let n = self.group.order();
        st.f[x] = v;
        st.used[v] = true;
        let marks: Vec<usize> = st.known.iter().map(Vec::len).collect();
        if self.assign(st, x, v) {
            if x + 1 == n {
                let f = GPerm::new(st.f.clone()).expect("assignment is a bijection");
                if nhol_membership(&f, self.hol) {
                    out.push(f);
                }
            } else {
                for w in 0..n {
                    if !st.used[w] {
                        self.descend(st, x + 1, w, out);
                    }
                }
            }
        }
        for (h, &mark) in marks.iter().enumerate() {
            for y in st.known[h].drain(mark..) {
                st.conj[h][y] = UNSET;
            }
        }
        st.f[x] = UNSET;
        st.used[v] = false;
    }

    // Records the conjugate values newly determined by f(x) = v and checks them.
    fn assign(&self, st: &mut ScanState, x: usize, v: usize) -> bool {
        let g = self.group;
        for (h, perm) in self.gens.iter().enumerate() {
            let mut fresh = Vec::new();
            // c(f(x)) = f(h(x))
            let hx = perm.apply(x);
            if st.f[hx] != UNSET {
                fresh.push((v, st.f[hx]));
            }
            // c(f(z)) = f(h(z)) = v for the z with h(z) = x
            let z = perm.map().iter().position(|&w| w == x).expect("permutation");
            if z != x && st.f[z] != UNSET {
                fresh.push((st.f[z], v));
            }
            let had_translation = st.conj[h][0] != UNSET;
            for &(y, cy) in &fresh {
                st.conj[h][y] = cy;
                st.known[h].push(y);
            }
            let t = st.conj[h][0];
            if t == UNSET || fresh.is_empty() {
                continue;
            }
            let t_inv = g.inv(t);
            let conj = &st.conj[h];
            let alpha = |y: usize| g.mul(conj[y], t_inv);
            let check_from = |y: usize| {
                st.known[h].iter().all(|&w| {
                    let yw = g.mul(y, w);
                    let wy = g.mul(w, y);
                    (conj[yw] == UNSET || alpha(yw) == g.mul(alpha(y), alpha(w)))
                        && (conj[wy] == UNSET || alpha(wy) == g.mul(alpha(w), alpha(y)))
                })
            };
            let ok = if had_translation {
                fresh.iter().all(|&(y, _)| check_from(y))
            } else {
                st.known[h].iter().all(|&y| check_from(y))
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// `T(G)` by scanning all `(|G| - 1)!` identity-fixing permutations.
pub fn brute_nhol(group: &GroupTable, cap: u64) -> Result<TStructure, OracleError> {
    let n = group.order();
    let count = factorial(n.saturating_sub(1));
    if count > cap as u128 {
        return Err(OracleError::ScanCapExceeded { count, cap });
    }
    let auts = enumerate_aut(group, &aut_search_generators(group), DEFAULT_SIZE_CAP)?;
    let hol = HolGenSet::from_automorphisms(group, &auts);
    let scan = NholScan { group, gens: hol.generators().to_vec(), hol: &hol };
    let mut members: Vec<GPerm> = if n == 1 {
        let mut out = Vec::new();
        scan.run(0, &mut out);
        out
    } else {
        (1..n)
            .into_par_iter()
            .flat_map_iter(|v| {
                let mut out = Vec::new();
                scan.run(v, &mut out);
                out
            })
            .collect()
    };
    members.sort();

    let t_order = members.len() / auts.len();
    let mut claimed: HashSet<GPerm> = HashSet::new();
    let mut representatives = Vec::new();
    for f in &members {
        if claimed.contains(f) {
            continue;
        }
        for alpha in &auts {
            claimed.insert(f.compose(&GPerm::from(alpha)));
        }
        representatives.push(f.clone());
    }
    debug_assert_eq!(representatives.len(), t_order);
    let bound = t_order.max(1) as u64;
    let coset_orders = representatives
        .iter()
        .map(|f| coset_order_in_t(f, group, bound))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TStructure { aut_order: auts.len(), stabilizer_count: members.len(), representatives, coset_orders })
}

/// Regular subgroups `N` of `Perm(G)` with `N ⊆ Hol(G)` whose normalizer meets
/// the identity stabilizer in exactly `Aut(G)`. Their number should be `|T(G)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubgroupReport {
    pub regular_subgroups_in_hol: usize,
    pub count: usize,
    pub t_order: usize,
    pub contains_lambda: bool,
    pub contains_rho: bool,
}

impl RegularSubgroupReport {
    pub fn holds(&self) -> bool {
        self.count == self.t_order && self.contains_lambda && self.contains_rho
    }
}

/// Enumerates all regular subgroups isomorphic to `G` as conjugates
/// `sigma lambda(G) sigma^-1`, `sigma ∈ Perm(G)`.
pub fn regular_subgroup_check(group: &GroupTable) -> Result<RegularSubgroupReport, OracleError> {
    let n = group.order();
    if n > REGULAR_SUBGROUP_LIMIT {
        return Err(OracleError::TooLarge { order: n, limit: REGULAR_SUBGROUP_LIMIT });
    }
    let auts = enumerate_aut(group, &aut_search_generators(group), DEFAULT_SIZE_CAP)?;
    let aut_set: BTreeSet<GPerm> = auts.iter().map(GPerm::from).collect();
    let hol = HolGenSet::from_automorphisms(group, &auts);
    let hol_set = perm_closure(hol.generators(), usize::MAX).expect("no limit");

    let lambda: Vec<GPerm> = (0..n).map(|g| lambda_rep(group, g)).collect();
    let mut conjugates: BTreeSet<BTreeSet<GPerm>> = BTreeSet::new();
    let mut all: Vec<usize> = (0..n).collect();
    permute_all(&mut all, 0, &mut |sigma| {
        let sigma = GPerm::new(sigma.to_vec()).expect("permutation");
        conjugates.insert(lambda.iter().map(|l| sigma.conjugate(l)).collect());
    });

    let in_hol: Vec<&BTreeSet<GPerm>> =
        conjugates.iter().filter(|sub| sub.iter().all(|x| hol_set.contains(x))).collect();
    let mut count = 0;
    for sub in &in_hol {
        let mut normalizer = BTreeSet::new();
        for_each_fixing_perm(n, &mut |map| {
            let f = GPerm::new(map.to_vec()).expect("permutation");
            if sub.iter().all(|x| sub.contains(&f.conjugate(x))) {
                normalizer.insert(f);
            }
        });
        if normalizer == aut_set {
            count += 1;
        }
    }

    let lambda_set: BTreeSet<GPerm> = lambda.into_iter().collect();
    let rho_set: BTreeSet<GPerm> = (0..n).map(|g| rho_rep(group, g)).collect();
    let qualifies = |s: &BTreeSet<GPerm>| in_hol.iter().any(|sub| *sub == s);
    let t_order = brute_nhol(group, DEFAULT_SCAN_CAP)?.order();
    Ok(RegularSubgroupReport {
        regular_subgroups_in_hol: in_hol.len(),
        count,
        t_order,
        contains_lambda: qualifies(&lambda_set),
        contains_rho: qualifies(&rho_set),
    })
}

fn permute_all(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute_all(v, k + 1, f);
        v.swap(k, i);
    }
}
