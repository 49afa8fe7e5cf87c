use super::{Automorphism, FiniteGroup, GroupError, GroupTable, DEFAULT_SIZE_CAP};
use crate::modarith::{checked_pow, is_prime, padic_val, PParams};

/// One cyclic factor `<tau>` of order `p^n`, acting on `A` through `psi`,
/// together with the twist data `k = 1 + u p^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpFactor {
    p: u64,
    n: u32,
    m: u32,
    u: u64,
    psi: Automorphism,
    y: u32,
    modulus: u64,
}

impl SdpFactor {
    pub fn new(
        a: &GroupTable,
        p: u64,
        n: u32,
        m: u32,
        u: u64,
        psi: Automorphism,
    ) -> Result<Self, GroupError> {
        let bad = |message: String| GroupError::BadFactor { index: 0, message };
        if !is_prime(p) {
            return Err(bad(format!("p = {p} is not prime")));
        }
        if n < 1 {
            return Err(bad("n must be at least 1".into()));
        }
        if m < 1 || m > n {
            return Err(bad(format!("m = {m} must satisfy 1 <= m <= n = {n}")));
        }
        if p == 2 && m < 2 {
            return Err(bad("m must be at least 2 when p = 2".into()));
        }
        if u == 0 || u % p == 0 {
            return Err(bad(format!("u = {u} must be positive and coprime to p = {p}")));
        }
        if psi.map().len() != a.order() {
            return Err(bad("psi is not a map on A".into()));
        }
        let modulus = checked_pow(p, n)?;
        let order = psi.order();
        let y = padic_val(p, order)?;
        if checked_pow(p, y)? != order {
            return Err(bad(format!("psi has order {order}, not a power of {p}")));
        }
        if y > n {
            return Err(bad(format!("psi has order {order}, which does not divide {p}^{n}")));
        }
        // m and u determine k; make sure the pair is admissible
        PParams::new(p, u, m)?;
        Ok(Self { p, n, m, u, psi, y, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn psi(&self) -> &Automorphism {
        &self.psi
    }

    /// `psi` has order `p^y`.
    pub fn y(&self) -> u32 {
        self.y
    }

    pub fn epsilon(&self) -> u32 {
        u32::from(self.p == 2)
    }

    /// `p^n`, the order of `tau`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn params(&self) -> PParams {
        PParams::new(self.p, self.u, self.m).expect("validated on construction")
    }

    pub fn k(&self) -> u64 {
        self.params().k()
    }
}

/// `G = A x| (<tau_1> x ... x <tau_r>)` with `tau_s a tau_s^-1 = psi_s(a)`.
///
/// Element `(a, e_1, ..., e_r)` stands for `a tau_1^e_1 ... tau_r^e_r` and has
/// index `a * d + enc(e)`, where `d = prod p_s^n_s` and `enc` is mixed radix
/// with `e_1` most significant. The identity is index 0.
#[derive(Debug, Clone)]
pub struct SdpGroup {
    a: GroupTable,
    factors: Vec<SdpFactor>,
    d: usize,
    strides: Vec<usize>,
    // psi_powers[s][j][b] = psi_s^j(b) for j < order(psi_s)
    psi_powers: Vec<Vec<Vec<u32>>>,
    gens: Vec<usize>,
    // flattened multiplication table, present when |G| is within the size cap
    table: Option<GroupTable>,
}

impl SdpGroup {
    /// Builds `G`, materializing its table when `|G| <= DEFAULT_SIZE_CAP`.
    pub fn new(a: GroupTable, factors: Vec<SdpFactor>) -> Result<Self, GroupError> {
        Self::with_table_cap(a, factors, DEFAULT_SIZE_CAP)
    }

    pub fn with_table_cap(
        a: GroupTable,
        factors: Vec<SdpFactor>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (s, f) in factors.iter().enumerate() {
            if f.psi.map().len() != a.order() {
                return Err(GroupError::BadFactor { index: s, message: "psi is not a map on A".into() });
            }
            for (t, g) in factors.iter().enumerate().skip(s + 1) {
                if f.p == g.p {
                    return Err(GroupError::DuplicatePrime(f.p));
                }
                if !f.psi.commutes_with(&g.psi) {
                    return Err(GroupError::NonCommuting { s, t });
                }
            }
        }
        let moduli: Vec<usize> = factors.iter().map(|f| f.modulus as usize).collect();
        let d = moduli.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m)).ok_or(
            GroupError::CapExceeded { size: usize::MAX, cap: usize::MAX },
        )?;
        a.order().checked_mul(d).ok_or(GroupError::CapExceeded { size: usize::MAX, cap: usize::MAX })?;
        let mut strides = vec![1usize; moduli.len()];
        for s in (0..moduli.len().saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * moduli[s + 1];
        }
        let psi_powers = factors
            .iter()
            .map(|f| {
                let order = f.psi.order() as usize;
                let mut powers = Vec::with_capacity(order);
                let mut current: Vec<u32> = (0..a.order() as u32).collect();
                for _ in 0..order {
                    powers.push(current.clone());
                    current = current.iter().map(|&b| f.psi.apply(b as usize) as u32).collect();
                }
                powers
            })
            .collect();
        let mut group = Self { a, factors, d, strides, psi_powers, gens: Vec::new(), table: None };
        let mut gens: Vec<usize> = group.a.generators().iter().map(|&x| group.embed(x)).collect();
        gens.extend((0..group.factors.len()).map(|s| group.tau(s)));
        group.gens = gens;
        if group.order() <= cap {
            group.table = Some(group.to_table(cap)?);
        }
        Ok(group)
    }

    pub fn a(&self) -> &GroupTable {
        &self.a
    }

    pub fn factors(&self) -> &[SdpFactor] {
        &self.factors
    }

    /// `d = prod p_s^n_s`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Index of `(a, e)`; exponents are reduced mod `p_s^n_s`.
    pub fn encode(&self, a: usize, exps: &[u64]) -> usize {
        assert_eq!(exps.len(), self.factors.len());
        let rest: usize = exps
            .iter()
            .zip(&self.factors)
            .zip(&self.strides)
            .map(|((&e, f), &stride)| (e % f.modulus) as usize * stride)
            .sum();
        a * self.d + rest
    }

    pub fn decode(&self, x: usize) -> (usize, Vec<u64>) {
        let rest = x % self.d;
        let exps = (0..self.factors.len()).map(|s| self.exponent_of(rest, s) as u64).collect();
        (x / self.d, exps)
    }

    /// The `A`-component of `x`.
    pub fn a_part(&self, x: usize) -> usize {
        x / self.d
    }

    /// The `tau_s`-exponent of `x`.
    pub fn tau_exponent(&self, x: usize, s: usize) -> u64 {
        self.exponent_of(x % self.d, s) as u64
    }

    #[inline]
    fn exponent_of(&self, rest: usize, s: usize) -> usize {
        (rest / self.strides[s]) % self.factors[s].modulus as usize
    }

    pub fn embed(&self, a: usize) -> usize {
        a * self.d
    }

    pub fn tau(&self, s: usize) -> usize {
        self.strides[s]
    }

    pub fn is_in_a(&self, x: usize) -> bool {
        x % self.d == 0
    }

    /// `psi_s^j(b)` for any integer `j`.
    pub fn psi_pow(&self, s: usize, j: i64, b: usize) -> usize {
        let powers = &self.psi_powers[s];
        powers[j.rem_euclid(powers.len() as i64) as usize][b] as usize
    }

    // Psi^e(b) = psi_1^e_1 ∘ ... ∘ psi_r^e_r (b), with e packed in `rest`
    #[inline]
    fn twist(&self, rest: usize, b: usize) -> usize {
        let mut b = b;
        for (s, powers) in self.psi_powers.iter().enumerate() {
            let e = self.exponent_of(rest, s);
            b = powers[e % powers.len()][b] as usize;
        }
        b
    }

    /// Materializes the multiplication table (index order preserved).
    pub fn to_table(&self, cap: usize) -> Result<GroupTable, GroupError> {
        GroupTable::from_fn(self.order(), cap, |x, y| self.mul_normal_form(x, y))
    }

    /// The cached table, if `|G|` was within the cap at construction.
    pub fn table(&self) -> Option<&GroupTable> {
        self.table.as_ref()
    }

    /// `(a, e) (b, f) = (a Psi^e(b), e + f)`.
    pub fn mul_normal_form(&self, x: usize, y: usize) -> usize {
        let (a, e) = (x / self.d, x % self.d);
        let (b, f) = (y / self.d, y % self.d);
        let ab = self.a.mul(a, self.twist(e, b));
        let mut rest = 0;
        for (s, factor) in self.factors.iter().enumerate() {
            let m = factor.modulus as usize;
            rest += ((self.exponent_of(e, s) + self.exponent_of(f, s)) % m) * self.strides[s];
        }
        ab * self.d + rest
    }

    /// `(a, e)^-1 = (Psi^-e(a^-1), -e)`.
    pub fn inv_normal_form(&self, x: usize) -> usize {
        let (a, e) = (x / self.d, x % self.d);
        let mut neg = 0;
        for (s, factor) in self.factors.iter().enumerate() {
            let m = factor.modulus as usize;
            neg += ((m - self.exponent_of(e, s)) % m) * self.strides[s];
        }
        self.twist(neg, self.a.inv(a)) * self.d + neg
    }
}

impl FiniteGroup for SdpGroup {
    fn order(&self) -> usize {
        self.a.order() * self.d
    }

    #[inline]
    fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t.mul(x, y),
            None => self.mul_normal_form(x, y),
        }
    }

    #[inline]
    fn inv(&self, x: usize) -> usize {
        match &self.table {
            Some(t) => t.inv(x),
            None => self.inv_normal_form(x),
        }
    }

    fn generators(&self) -> &[usize] {
        &self.gens
    }

    fn element_order(&self, x: usize) -> u64 {
        match &self.table {
            Some(t) => t.element_order(x),
            None => {
                let mut y = x;
                let mut k = 1;
                while y != 0 {
                    y = self.mul_normal_form(y, x);
                    k += 1;
                }
                k
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::power_map_aut;

    pub(crate) fn group_63() -> SdpGroup {
        let c7 = GroupTable::abelian(&[7]).unwrap();
        let psi = power_map_aut(&c7, 2).unwrap();
        let f = SdpFactor::new(&c7, 3, 2, 1, 1, psi).unwrap();
        SdpGroup::new(c7, vec![f]).unwrap()
    }

    #[test]
    fn order_63_nonabelian() {
        let g = group_63();
        assert_eq!(g.order(), 63);
        assert!(!g.is_abelian());
        let t = g.to_table(4096).unwrap();
        assert_eq!(t.order(), 63);
        assert_eq!(t.element_order(g.tau(0)), 9);
    }

    #[test]
    fn degenerate_rank_zero() {
        let c7 = GroupTable::abelian(&[7]).unwrap();
        let g = SdpGroup::new(c7.clone(), vec![]).unwrap();
        assert_eq!(g.order(), 7);
        assert_eq!(g.to_table(4096).unwrap(), c7);
    }

    #[test]
    fn factor_validation() {
        let c5 = GroupTable::abelian(&[5]).unwrap();
        let inv = power_map_aut(&c5, -1).unwrap();
        // p = 2 needs m >= 2, impossible when n = 1
        assert!(SdpFactor::new(&c5, 2, 1, 1, 1, inv.clone()).is_err());
        assert!(SdpFactor::new(&c5, 2, 1, 2, 1, inv.clone()).is_err());
        assert!(SdpFactor::new(&c5, 2, 3, 2, 1, inv.clone()).is_ok());
        // psi of order 4 cannot act through a factor of order 3^n
        let order4 = power_map_aut(&c5, 2).unwrap();
        assert!(SdpFactor::new(&c5, 3, 2, 1, 1, order4.clone()).is_err());
        assert!(SdpFactor::new(&c5, 2, 2, 2, 1, order4.clone()).is_ok());
        assert!(SdpFactor::new(&c5, 2, 3, 2, 2, inv).is_err());
    }

    #[test]
    fn duplicate_primes_and_commutation() {
        let c7 = GroupTable::abelian(&[7]).unwrap();
        let psi = power_map_aut(&c7, 2).unwrap();
        let f1 = SdpFactor::new(&c7, 3, 1, 1, 1, psi.clone()).unwrap();
        let f2 = SdpFactor::new(&c7, 3, 2, 1, 1, psi).unwrap();
        assert!(matches!(SdpGroup::new(c7, vec![f1, f2]), Err(GroupError::DuplicatePrime(3))));
    }

    #[test]
    fn normal_form_matches_table_and_conjugation() {
        let g = group_63();
        let t = g.to_table(4096).unwrap();
        for x in 0..g.order() {
            for y in 0..g.order() {
                assert_eq!(g.mul_normal_form(x, y), t.mul(x, y));
            }
            assert_eq!(g.inv_normal_form(x), t.inv(x));
        }
        let tau = g.tau(0);
        for a in 0..7 {
            let conj = g.mul(g.mul(tau, g.embed(a)), g.inv(tau));
            assert_eq!(conj, g.embed(g.factors()[0].psi().apply(a)));
        }
        assert_eq!(g.decode(g.encode(3, &[5])), (3, vec![5]));
    }

    #[test]
    fn two_factor_product_is_a_group() {
        let a = GroupTable::abelian(&[7, 11]).unwrap();
        let psi3 = power_map_aut(&a, 23).unwrap();
        let psi5 = power_map_aut(&a, 36).unwrap();
        let f3 = SdpFactor::new(&a, 3, 1, 1, 1, psi3).unwrap();
        let f5 = SdpFactor::new(&a, 5, 1, 1, 1, psi5).unwrap();
        let g = SdpGroup::new(a, vec![f3, f5]).unwrap();
        assert_eq!(g.order(), 77 * 15);
        // from_fn validates the group axioms
        let t = g.to_table(4096).unwrap();
        assert_eq!(t.element_order(g.tau(0)), 3);
        assert_eq!(t.element_order(g.tau(1)), 5);
        assert_eq!(g.mul(g.tau(0), g.tau(1)), g.mul(g.tau(1), g.tau(0)));
    }
}
