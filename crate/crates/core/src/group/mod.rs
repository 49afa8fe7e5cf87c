//! Finite groups on the index set `0..N`, identity at index 0.
//!
//! Two concrete representations implement [`FiniteGroup`]: [`GroupTable`], a
//! full multiplication table, and [`SdpGroup`], a semidirect product
//! `A x| (<tau_1> x ... x <tau_r>)` multiplied in normal form without ever
//! materializing its table.

mod automorphism;
mod csv;
mod sdp;
pub mod small;
mod table;

pub use automorphism::{power_map_aut, Automorphism};
pub use csv::{import_table, parse_table_csv, to_csv};
pub use sdp::{SdpFactor, SdpGroup};
pub use table::GroupTable;

use thiserror::Error;

use crate::modarith::ModArithError;

/// Largest group whose multiplication table is materialized by default.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Tables up to this size get a full `O(N^3)` associativity scan.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;

/// Triples sampled for the associativity check above [`FULL_ASSOCIATIVITY_LIMIT`].
pub const ASSOCIATIVITY_SAMPLES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range for a table of size {size}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, size: usize },
    #[error("element 0 is not the identity: 0*{x} or {x}*0 differs from {x}")]
    IdentityViolation { x: usize },
    #[error("not a Latin square: {what} {index} repeats a value")]
    NotLatin { what: &'static str, index: usize },
    #[error("not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("group of order {size} exceeds the size cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("cyclic factor {0} must be at least 2")]
    BadCyclicFactor(u64),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("cannot read table: {0}")]
    Io(#[from] std::io::Error),
    #[error("map has length {len}, expected {expected}")]
    MapLength { len: usize, expected: usize },
    #[error("map is not a bijection")]
    NotBijective,
    #[error("map does not fix the identity")]
    IdentityNotFixed,
    #[error("map is not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotHomomorphism { x: usize, y: usize },
    #[error("power maps are automorphisms only of abelian groups")]
    NotAbelian,
    #[error("exponent {ell} is not coprime to exp(A) = {exponent}")]
    NotCoprime { ell: i64, exponent: u64 },
    #[error("factor {index}: {message}")]
    BadFactor { index: usize, message: String },
    #[error("prime {0} appears in more than one factor")]
    DuplicatePrime(u64),
    #[error("psi_{s} and psi_{t} do not commute")]
    NonCommuting { s: usize, t: usize },
    #[error(transparent)]
    Arith(#[from] ModArithError),
}

/// A finite group whose elements are the indices `0..order()`, with 0 the identity.
pub trait FiniteGroup: Sync {
    fn order(&self) -> usize;

    fn mul(&self, x: usize, y: usize) -> usize;

    fn inv(&self, x: usize) -> usize;

    /// A generating set; empty only for the trivial group.
    fn generators(&self) -> &[usize];

    /// `x^e` for any integer `e`, by square-and-multiply.
    fn pow(&self, x: usize, e: i64) -> usize {
        let mut base = if e < 0 { self.inv(x) } else { x };
        let mut e = e.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of `x`, by repeated multiplication.
    fn element_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn exponent(&self) -> u64 {
        (0..self.order()).fold(1, |acc, x| crate::modarith::lcm(acc, self.element_order(x)))
    }

    fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// Membership mask of the subgroup generated by `gens`.
pub fn closure<G: FiniteGroup + ?Sized>(group: &G, gens: &[usize]) -> Vec<bool> {
    let mut member = vec![false; group.order()];
    member[0] = true;
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = group.mul(x, g);
            if !member[y] {
                member[y] = true;
                queue.push(y);
            }
        }
    }
    member
}

/// Elements of the subgroup generated by `gens`, in increasing index order.
pub fn subgroup_elements<G: FiniteGroup + ?Sized>(group: &G, gens: &[usize]) -> Vec<usize> {
    closure(group, gens)
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}

/// Checks `f(xy) = f(x) f(y)` for every `x` and every generator `y`.
///
/// For a finite group this is equivalent to the all-pairs check: induction on
/// word length in the generators extends it to every `y`.
pub(crate) fn respects_generators<G: FiniteGroup + ?Sized>(
    group: &G,
    map: &[usize],
) -> Result<(), GroupError> {
    for &s in group.generators() {
        let fs = map[s];
        for x in 0..group.order() {
            if map[group.mul(x, s)] != group.mul(map[x], fs) {
                return Err(GroupError::NotHomomorphism { x, y: s });
            }
        }
    }
    Ok(())
}

/// Exhaustive `f(xy) = f(x) f(y)` over all pairs; `O(N^2)`.
pub fn respects_all_products<G: FiniteGroup + ?Sized>(group: &G, map: &[usize]) -> bool {
    let n = group.order();
    (0..n).all(|x| (0..n).all(|y| map[group.mul(x, y)] == group.mul(map[x], map[y])))
}

/// Element-order spectrum, `counts[k]` = number of elements of order `k`.
pub fn order_spectrum<G: FiniteGroup + ?Sized>(group: &G) -> std::collections::BTreeMap<u64, usize> {
    let mut spectrum = std::collections::BTreeMap::new();
    for x in 0..group.order() {
        *spectrum.entry(group.element_order(x)).or_insert(0) += 1;
    }
    spectrum
}
