//! Modular arithmetic of the twisted geometric sums `S(x, i) = 1 + x + ... + x^(i-1)`.
//!
//! Everything the exponent-twisting bijection needs lives here: exact and
//! modular geometric sums, p-adic valuations, the permutation
//! `i -> S(k, i) mod p^n` of `Z/p^nZ` ([`XiTable`]), multiplicative orders and
//! inverses modulo `p^n`.
//!
//! Residues are `u64`; products go through `u128` so moduli up to `2^63` are safe.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("u = {u} must be positive and coprime to p = {p}")]
    BadUnit { p: u64, u: u64 },
    #[error("m = {m} is too small for p = {p} (need m >= 1, and m >= 2 when p = 2)")]
    BadM { p: u64, m: u32 },
    #[error("p-adic valuation of 0 is undefined")]
    ZeroValuation,
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("exponent n must be at least 1")]
    ZeroExponent,
    #[error("p^{exp} overflows u64 for p = {p}")]
    Overflow { p: u64, exp: u32 },
    #[error("S(k, i) mod {modulus} is not a bijection (collision at image {image})")]
    NotBijective { modulus: u64, image: u64 },
}

/// Deterministic primality test; trial division is plenty for the sizes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Checked `p^e`.
pub fn checked_pow(p: u64, e: u32) -> Result<u64, ModArithError> {
    p.checked_pow(e).ok_or(ModArithError::Overflow { p, exp: e })
}

#[inline]
pub fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

/// Exact `S(x, i) = sum_{t < i} x^t`, with `S(x, 0) = 0`.
pub fn geom_sum(x: u64, i: u64) -> BigUint {
    let x = BigUint::from(x);
    let mut term = BigUint::one();
    let mut acc = BigUint::zero();
    for _ in 0..i {
        acc += &term;
        term *= &x;
    }
    acc
}

/// `S(x, i) mod modulus` in `O(log i)` multiplications.
///
/// Walks the bits of `i` from the top, maintaining the pair `(x^j, S(x, j))`:
/// doubling uses `S(x, 2j) = S(x, j) (1 + x^j)` and a set bit appends one term
/// via `S(x, j + 1) = x S(x, j) + 1`.
pub fn geom_sum_mod(x: u64, i: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be at least 1");
    if modulus == 1 || i == 0 {
        return 0;
    }
    let x = x % modulus;
    let mut power = 1 % modulus; // x^j
    let mut sum = 0u64; // S(x, j)
    for bit in (0..64 - i.leading_zeros()).rev() {
        sum = mul_mod(sum, (1 + power) % modulus, modulus);
        power = mul_mod(power, power, modulus);
        if (i >> bit) & 1 == 1 {
            sum = (mul_mod(sum, x, modulus) + 1) % modulus;
            power = mul_mod(power, x, modulus);
        }
    }
    sum
}

/// Largest `e` with `p^e | n`.
pub fn padic_val(p: u64, n: u64) -> Result<u32, ModArithError> {
    if n == 0 {
        return Err(ModArithError::ZeroValuation);
    }
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Valuation of a big integer, for the exact-path Lemma checks.
pub fn padic_val_big(p: u64, n: &BigUint) -> Result<u32, ModArithError> {
    if n.is_zero() {
        return Err(ModArithError::ZeroValuation);
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut e = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    Ok(e)
}

/// Exponent of `p` in `(t + 1)!` by Legendre's formula.
pub fn factorial_val(p: u64, t: u64) -> u64 {
    let n = t + 1;
    let mut total = 0;
    let mut q = p;
    while q <= n {
        total += n / q;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    total
}

/// Smallest `l >= 1` with `k^l = 1 (mod modulus)`.
pub fn mult_order_mod(k: u64, modulus: u64) -> Result<u64, ModArithError> {
    if modulus == 0 {
        return Err(ModArithError::ZeroModulus);
    }
    if gcd(k % modulus, modulus) != 1 && modulus != 1 {
        return Err(ModArithError::NotInvertible { value: k, modulus });
    }
    if modulus == 1 {
        return Ok(1);
    }
    let k = k % modulus;
    let mut value = k;
    let mut order = 1;
    while value != 1 {
        value = mul_mod(value, k, modulus);
        order += 1;
    }
    Ok(order)
}

/// `k'` in `[0, modulus)` with `k k' = 1 (mod modulus)`.
pub fn mod_inverse(k: u64, modulus: u64) -> Result<u64, ModArithError> {
    if modulus == 0 {
        return Err(ModArithError::ZeroModulus);
    }
    if modulus == 1 {
        return Ok(0);
    }
    // extended Euclid on signed 128-bit values
    let (mut old_r, mut r) = ((k % modulus) as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(ModArithError::NotInvertible { value: k, modulus });
    }
    Ok(old_s.rem_euclid(modulus as i128) as u64)
}

/// The data `(p, u, m)` fixing `k = 1 + u p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PParams {
    p: u64,
    u: u64,
    m: u32,
    k: u64,
}

impl PParams {
    pub fn new(p: u64, u: u64, m: u32) -> Result<Self, ModArithError> {
        if !is_prime(p) {
            return Err(ModArithError::NotPrime(p));
        }
        if u == 0 || u % p == 0 {
            return Err(ModArithError::BadUnit { p, u });
        }
        if m < 1 || (p == 2 && m < 2) {
            return Err(ModArithError::BadM { p, m });
        }
        let k = checked_pow(p, m)?
            .checked_mul(u)
            .and_then(|v| v.checked_add(1))
            .ok_or(ModArithError::Overflow { p, exp: m })?;
        Ok(Self { p, u, m, k })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// 1 for `p = 2`, else 0.
    pub fn epsilon(&self) -> u32 {
        u32::from(self.p == 2)
    }
}

/// The bijection `i mod p^n -> S(k, i) mod p^n` as an explicit table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiTable {
    params: PParams,
    n: u32,
    modulus: u64,
    image: Vec<u64>,
    preimage: Vec<u64>,
}

impl XiTable {
    /// Tabulates `S(k, i) mod p^n` for `i < p^n` and checks it is a permutation.
    pub fn build(params: PParams, n: u32) -> Result<Self, ModArithError> {
        if n == 0 {
            return Err(ModArithError::ZeroExponent);
        }
        let modulus = checked_pow(params.p, n)?;
        let k = params.k % modulus;
        let mut image = Vec::with_capacity(modulus as usize);
        let mut sum = 0u64;
        let mut power = 1 % modulus;
        for _ in 0..modulus {
            image.push(sum);
            sum = (sum + power) % modulus;
            power = mul_mod(power, k, modulus);
        }
        let mut preimage = vec![u64::MAX; modulus as usize];
        for (i, &v) in image.iter().enumerate() {
            if preimage[v as usize] != u64::MAX {
                return Err(ModArithError::NotBijective { modulus, image: v });
            }
            preimage[v as usize] = i as u64;
        }
        Ok(Self {
            params,
            n,
            modulus,
            image,
            preimage,
        })
    }

    pub fn params(&self) -> PParams {
        self.params
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn image(&self) -> &[u64] {
        &self.image
    }

    /// `S(k, i) mod p^n` for any non-negative `i`.
    pub fn apply(&self, i: u64) -> u64 {
        self.image[(i % self.modulus) as usize]
    }

    /// The unique `j < p^n` with `S(k, j) = i (mod p^n)`.
    pub fn preimage(&self, i: u64) -> u64 {
        self.preimage[(i % self.modulus) as usize]
    }

    /// `l`-fold composite of the table applied to `i`.
    pub fn iterate(&self, i: u64, l: u64) -> u64 {
        (0..l).fold(i % self.modulus, |acc, _| self.image[acc as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geom_sum_examples() {
        assert_eq!(geom_sum(3, 0), BigUint::zero());
        assert_eq!(geom_sum(1, 5), BigUint::from(5u32));
        assert_eq!(geom_sum(4, 3), BigUint::from(21u32));
        assert_eq!(geom_sum(4, 8), BigUint::from(21845u32));
    }

    #[test]
    fn geom_sum_mod_examples() {
        assert_eq!(geom_sum_mod(4, 8, 9), 2);
        assert_eq!(geom_sum_mod(4, 9, 9), 0);
        assert_eq!(geom_sum_mod(10, 0, 81), 0);
        assert_eq!(geom_sum_mod(5, 17, 1), 0);
    }

    #[test]
    fn geom_sum_mod_matches_exact_path() {
        for x in 1..12u64 {
            for i in 0..60u64 {
                for modulus in [1u64, 2, 7, 9, 16, 81, 1000, 3125] {
                    let exact = geom_sum(x, i) % BigUint::from(modulus);
                    assert_eq!(BigUint::from(geom_sum_mod(x, i, modulus)), exact, "x={x} i={i} mod={modulus}");
                }
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_val(3, 21), Ok(1));
        assert_eq!(padic_val(3, 1), Ok(0));
        assert_eq!(padic_val(2, 48), Ok(4));
        assert_eq!(padic_val(5, 0), Err(ModArithError::ZeroValuation));
        assert_eq!(factorial_val(3, 1), 0);
        assert_eq!(factorial_val(3, 5), 2);
        assert_eq!(factorial_val(2, 3), 3);
    }

    #[test]
    fn legendre_bound_is_strict() {
        for p in [2u64, 3, 5, 7, 11] {
            for t in 1..3000u64 {
                let x = factorial_val(p, t);
                // x_t < (t+1)/(p-1)  <=>  x_t (p-1) < t+1
                assert!(x * (p - 1) < t + 1, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn pparams_validation() {
        assert!(PParams::new(2, 1, 1).is_err());
        assert!(PParams::new(2, 1, 2).is_ok());
        assert_eq!(PParams::new(3, 3, 1), Err(ModArithError::BadUnit { p: 3, u: 3 }));
        assert_eq!(PParams::new(9, 1, 1), Err(ModArithError::NotPrime(9)));
        assert!(PParams::new(3, 1, 0).is_err());
        let pp = PParams::new(3, 1, 1).unwrap();
        assert_eq!(pp.k(), 4);
        assert_eq!(pp.epsilon(), 0);
        assert_eq!(PParams::new(2, 3, 2).unwrap().epsilon(), 1);
    }

    #[test]
    fn k_is_exactly_one_mod_p_m() {
        for p in [2u64, 3, 5, 7] {
            for m in 1..=4u32 {
                for u in 1..=10u64 {
                    let Ok(pp) = PParams::new(p, u, m) else { continue };
                    let pm = p.pow(m);
                    assert_eq!(pp.k() % pm, 1);
                    assert_ne!(pp.k() % (pm * p), 1);
                }
            }
        }
    }

    #[test]
    fn xi_table_example() {
        let pp = PParams::new(3, 1, 1).unwrap();
        let xi = XiTable::build(pp, 2).unwrap();
        assert_eq!(xi.image(), &[0, 1, 5, 3, 4, 8, 6, 7, 2]);
        assert_eq!(xi.image()[4], 4);
        assert_eq!(xi.preimage(2), 8);
        assert_eq!(xi.preimage(0), 0);
        assert_eq!(xi.preimage(5), 2);
        assert!(XiTable::build(pp, 0).is_err());
    }

    #[test]
    fn orders_and_inverses() {
        assert_eq!(mult_order_mod(4, 9), Ok(3));
        assert_eq!(mult_order_mod(10, 81), Ok(9));
        assert_eq!(mult_order_mod(1, 17), Ok(1));
        assert!(mult_order_mod(3, 9).is_err());
        assert_eq!(mod_inverse(4, 9), Ok(7));
        assert_eq!(mod_inverse(1, 17), Ok(1));
        assert_eq!(mod_inverse(7, 9), Ok(4));
        assert!(mod_inverse(6, 9).is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
    }
}
