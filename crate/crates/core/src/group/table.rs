use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    closure, FiniteGroup, GroupError, ASSOCIATIVITY_SAMPLES, DEFAULT_SIZE_CAP,
    FULL_ASSOCIATIVITY_LIMIT,
};

/// A finite group given by its multiplication table.
///
/// `mul[x * n + y]` is the index of `x * y`; index 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u64>,
    gens: Vec<usize>,
}

impl GroupTable {
    /// Validates a table given row by row.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row, col, value, size: n });
                }
                mul.push(value as u32);
            }
        }
        Self::from_flat(n, mul)
    }

    /// Builds the table of `f` on `0..n`, refusing sizes above `cap`.
    pub fn from_fn(
        n: usize,
        cap: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > cap {
            return Err(GroupError::CapExceeded { size: n, cap });
        }
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let value = f(x, y);
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row: x, col: y, value, size: n });
                }
                mul.push(value as u32);
            }
        }
        Self::from_flat(n, mul)
    }

    fn from_flat(n: usize, mul: Vec<u32>) -> Result<Self, GroupError> {
        let at = |x: usize, y: usize| mul[x * n + y] as usize;
        for x in 0..n {
            if at(0, x) != x || at(x, 0) != x {
                return Err(GroupError::IdentityViolation { x });
            }
        }
        let mut seen = vec![usize::MAX; n];
        for x in 0..n {
            for y in 0..n {
                let v = at(x, y);
                if seen[v] == x {
                    return Err(GroupError::NotLatin { what: "row", index: x });
                }
                seen[v] = x;
            }
        }
        seen.fill(usize::MAX);
        for y in 0..n {
            for x in 0..n {
                let v = at(x, y);
                if seen[v] == y {
                    return Err(GroupError::NotLatin { what: "column", index: y });
                }
                seen[v] = y;
            }
        }
        check_associative(n, &mul)?;

        let mut inv = vec![0u32; n];
        for x in 0..n {
            let y = (0..n).find(|&y| at(x, y) == 0).expect("Latin rows contain the identity");
            inv[x] = y as u32;
        }
        let mut orders = vec![1u64; n];
        for (x, order) in orders.iter_mut().enumerate() {
            let mut y = x;
            while y != 0 {
                y = at(y, x);
                *order += 1;
            }
        }
        let mut table = Self { n, mul, inv, orders, gens: Vec::new() };
        table.gens = table.greedy_generators();
        Ok(table)
    }

    /// Direct product of cyclic groups `C_{n_1} x ... x C_{n_k}`.
    ///
    /// Elements are mixed-radix tuples with the first factor most significant.
    pub fn abelian(factors: &[u64]) -> Result<Self, GroupError> {
        Self::abelian_with_cap(factors, DEFAULT_SIZE_CAP)
    }

    pub fn abelian_with_cap(factors: &[u64], cap: usize) -> Result<Self, GroupError> {
        if let Some(&bad) = factors.iter().find(|&&f| f < 2) {
            return Err(GroupError::BadCyclicFactor(bad));
        }
        let size = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f as usize))
            .filter(|&s| s <= cap)
            .ok_or(GroupError::CapExceeded {
                size: factors.iter().map(|&f| f as usize).fold(1usize, usize::saturating_mul),
                cap,
            })?;
        let radix: Vec<usize> = factors.iter().map(|&f| f as usize).collect();
        Self::from_fn(size, cap, |x, y| {
            let mut result = 0;
            let mut stride = 1;
            let (mut x, mut y) = (x, y);
            for &r in radix.iter().rev() {
                result += ((x % r + y % r) % r) * stride;
                x /= r;
                y /= r;
                stride *= r;
            }
            result
        })
    }

    /// Cyclic group `C_n`, element `i` being the `i`-th power of the generator 1.
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n == 1 {
            return Self::trivial();
        }
        Self::abelian(&[n])
    }

    pub fn trivial() -> Result<Self, GroupError> {
        Self::from_rows(&[vec![0]])
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.mul.chunks(self.n)
    }

    /// Centralizer size of every element; `O(N^2)`.
    pub fn centralizer_sizes(&self) -> Vec<usize> {
        (0..self.n)
            .map(|x| (0..self.n).filter(|&y| self.mul(x, y) == self.mul(y, x)).count())
            .collect()
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| self.gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect()
    }

    // Repeatedly adjoin the highest-order element outside the current subgroup.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = vec![false; self.n];
        member[0] = true;
        loop {
            let next = (0..self.n)
                .filter(|&x| !member[x])
                .max_by_key(|&x| (self.orders[x], std::cmp::Reverse(x)));
            let Some(x) = next else { break };
            gens.push(x);
            member = closure(self, &gens);
        }
        gens
    }
}

fn check_associative(n: usize, mul: &[u32]) -> Result<(), GroupError> {
    let at = |x: usize, y: usize| mul[x * n + y] as usize;
    let check = |x: usize, y: usize, z: usize| {
        if at(at(x, y), z) != at(x, at(y, z)) {
            Err(GroupError::NotAssociative { x, y, z })
        } else {
            Ok(())
        }
    };
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    check(x, y, z)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ab1e);
        for _ in 0..ASSOCIATIVITY_SAMPLES {
            check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
    }
    Ok(())
}

impl FiniteGroup for GroupTable {
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y] as usize
    }

    #[inline]
    fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    fn generators(&self) -> &[usize] {
        &self.gens
    }

    fn element_order(&self, x: usize) -> u64 {
        self.orders[x]
    }
}
