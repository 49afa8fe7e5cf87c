//! The exponent-twisting bijection `pi(a tau^e) = a tau^S(k, e)` on
//! `G = A x| (<tau_1> x ... x <tau_r>)`, the four hypotheses under which it
//! normalizes `Hol(G)`, and runtime verifiers for the intermediate identities.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Automorphism, FiniteGroup, GroupError, SdpGroup};
use crate::hol::{hol_membership, is_automorphism, HolError};
use crate::modarith::{geom_sum_mod, gcd, mult_order_mod, pow_mod, ModArithError, XiTable};
use crate::perm::{rho_rep, GPerm};
use crate::recipe;

#[derive(Debug, Error)]
pub enum PiError {
    #[error(transparent)]
    Arith(#[from] ModArithError),
    #[error(transparent)]
    Hol(#[from] HolError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("theta(tau_{s}) has nonzero tau_{t}-exponent {exponent}; it does not decompose as c_s tau_s^theta_s")]
    NotDecomposable { s: usize, t: usize, exponent: u64 },
    #[error("theta does not map A onto itself (element {0} of A leaves A)")]
    DoesNotStabilizeA(usize),
    #[error("conditions (1)-(4) are not all verified: {0}")]
    ConditionsUnverified(String),
    #[error("pi does not fix {0}")]
    FixedPointViolation(usize),
}

/// `pi` as a permutation of the element indices of `G`.
#[derive(Debug, Clone)]
pub struct PiMap {
    perm: GPerm,
    xi: Vec<XiTable>,
}

impl PiMap {
    pub fn perm(&self) -> &GPerm {
        &self.perm
    }

    pub fn xi(&self, s: usize) -> &XiTable {
        &self.xi[s]
    }

    pub fn ks(&self) -> Vec<u64> {
        self.xi.iter().map(|x| x.params().k()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }

    /// `(a, e) -> (a, S(k_s^l, e_s) mod p_s^n_s)`, the closed form of `pi^l`
    /// when every `n_s <= 2 m_s - eps_s`.
    pub fn closed_form_power(&self, group: &SdpGroup, l: u64) -> GPerm {
        let twisted: Vec<u64> =
            self.xi.iter().map(|x| pow_mod(x.params().k(), l, x.modulus())).collect();
        let map = (0..group.order())
            .map(|x| {
                let (a, exps) = group.decode(x);
                let new: Vec<u64> = exps
                    .iter()
                    .zip(&twisted)
                    .zip(&self.xi)
                    .map(|((&e, &kl), xi)| geom_sum_mod(kl, e, xi.modulus()))
                    .collect();
                group.encode(a, &new)
            })
            .collect();
        GPerm::new(map).expect("S(k^l, .) permutes Z/p^nZ")
    }
}

/// Builds `pi` and checks it is a bijection fixing `1`, `A` and every `tau_s`.
pub fn build_pi(group: &SdpGroup) -> Result<PiMap, PiError> {
    let xi = group
        .factors()
        .iter()
        .map(|f| XiTable::build(f.params(), f.n()))
        .collect::<Result<Vec<_>, _>>()?;
    let map = (0..group.order())
        .map(|x| {
            let (a, exps) = group.decode(x);
            let new: Vec<u64> = exps.iter().zip(&xi).map(|(&e, t)| t.apply(e)).collect();
            group.encode(a, &new)
        })
        .collect();
    let perm = GPerm::new(map)?;
    let fixed = (0..group.a().order())
        .map(|a| group.embed(a))
        .chain((0..group.rank()).map(|s| group.tau(s)));
    for x in fixed {
        if perm.apply(x) != x {
            return Err(PiError::FixedPointViolation(x));
        }
    }
    Ok(PiMap { perm, xi })
}

/// Outcome of one hypothesis check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails(String),
    Undetermined(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C3Method {
    Enumeration,
    FastPath,
}

/// An automorphism violating condition (3).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C3Witness {
    /// Position in the automorphism list.
    pub automorphism: usize,
    pub factor: usize,
    pub theta_s: u64,
    pub modulus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorDetail {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub u: u64,
    pub k: u64,
    pub epsilon: u32,
    /// `psi_s` has order `p^y`.
    pub y: u32,
    /// `p^(n - m + eps)`, the modulus in condition (3).
    pub c3_modulus: u64,
}

impl FactorDetail {
    pub fn of(group: &SdpGroup) -> Vec<Self> {
        group
            .factors()
            .iter()
            .map(|f| Self {
                p: f.p(),
                n: f.n(),
                m: f.m(),
                u: f.u(),
                k: f.k(),
                epsilon: f.epsilon(),
                y: f.y(),
                c3_modulus: f.p().pow(f.n() - f.m() + f.epsilon()),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub c1: Verdict,
    pub c2: Verdict,
    pub c3: Verdict,
    pub c4: Verdict,
    pub c3_method: C3Method,
    pub c3_witness: Option<C3Witness>,
    /// What the power-map criterion alone says about condition (3).
    pub c3_fast_path: Verdict,
    pub factors: Vec<FactorDetail>,
}

impl ConditionReport {
    /// Conditions (1)-(3), enough for `pi ∈ NHol(G)`.
    pub fn normalizes(&self) -> bool {
        self.c1.holds() && self.c2.holds() && self.c3.holds()
    }

    pub fn all_hold(&self) -> bool {
        self.normalizes() && self.c4.holds()
    }

    /// Name of the first condition that does not hold.
    pub fn first_failure(&self) -> Option<&'static str> {
        [("c1", &self.c1), ("c2", &self.c2), ("c3", &self.c3), ("c4", &self.c4)]
            .into_iter()
            .find(|(_, v)| !v.holds())
            .map(|(name, _)| name)
    }
}

/// Where condition (3) comes from.
#[derive(Debug, Clone, Copy)]
pub enum C3Source<'a> {
    /// A complete list of `Aut(G)`.
    Enumerated(&'a [Automorphism]),
    /// The power-map criterion, without enumerating `Aut(G)`.
    FastPath,
}

/// `theta(tau_s) = c_s tau_s^theta_s`; returns `(c_s, theta_s mod p_s^n_s)`.
pub fn extract_theta(theta: &Automorphism, group: &SdpGroup, s: usize) -> Result<(usize, u64), PiError> {
    let image = theta.apply(group.tau(s));
    for t in (0..group.rank()).filter(|&t| t != s) {
        let exponent = group.tau_exponent(image, t);
        if exponent != 0 {
            return Err(PiError::NotDecomposable { s, t, exponent });
        }
    }
    Ok((group.a_part(image), group.tau_exponent(image, s)))
}

pub fn check_conditions(group: &SdpGroup, source: C3Source<'_>) -> Result<ConditionReport, PiError> {
    let factors = FactorDetail::of(group);
    let exp_a = group.a().exponent();

    let c1 = match group.factors().iter().find(|f| gcd(f.p(), exp_a) != 1) {
        None => Verdict::Holds,
        Some(f) => Verdict::Fails(format!("p = {} divides exp(A) = {exp_a}", f.p())),
    };

    let c2 = match group.factors().iter().enumerate().find(|(_, f)| f.y() > f.m()) {
        None => Verdict::Holds,
        Some((s, f)) => Verdict::Fails(format!(
            "factor {s}: psi has order {}^{} which does not divide {}^{}",
            f.p(),
            f.y(),
            f.p(),
            f.m()
        )),
    };

    let c4 = match group
        .factors()
        .iter()
        .enumerate()
        .find(|(_, f)| f.n() + f.epsilon() > 2 * f.m())
    {
        None => Verdict::Holds,
        Some((s, f)) => Verdict::Fails(format!(
            "factor {s}: n = {} exceeds 2m - eps = {}",
            f.n(),
            2 * f.m() - f.epsilon()
        )),
    };

    let c3_fast_path = fast_path_c3(group, c1.holds());
    let (c3, c3_method, c3_witness) = match source {
        C3Source::FastPath => (c3_fast_path.clone(), C3Method::FastPath, None),
        C3Source::Enumerated(auts) => {
            let witness = find_c3_witness(group, auts, &factors)?;
            let verdict = match &witness {
                None => Verdict::Holds,
                Some(w) => Verdict::Fails(format!(
                    "automorphism #{} has theta_{} = {} which is not 1 mod {}",
                    w.automorphism, w.factor, w.theta_s, w.modulus
                )),
            };
            (verdict, C3Method::Enumeration, witness)
        }
    };

    Ok(ConditionReport { c1, c2, c3, c4, c3_method, c3_witness, c3_fast_path, factors })
}

fn find_c3_witness(
    group: &SdpGroup,
    auts: &[Automorphism],
    factors: &[FactorDetail],
) -> Result<Option<C3Witness>, PiError> {
    for (i, theta) in auts.iter().enumerate() {
        for (s, detail) in factors.iter().enumerate() {
            let (_, theta_s) = extract_theta(theta, group, s)?;
            if theta_s % detail.c3_modulus != 1 % detail.c3_modulus {
                return Ok(Some(C3Witness {
                    automorphism: i,
                    factor: s,
                    theta_s,
                    modulus: detail.c3_modulus,
                }));
            }
        }
    }
    Ok(None)
}

// With A abelian, condition (1), and each psi_s a power map (hence central in
// Aut(A)), every theta has theta_s = 1 mod p^y_s. That settles condition (3)
// for a factor when n - m + eps <= y; otherwise nothing follows.
fn fast_path_c3(group: &SdpGroup, c1: bool) -> Verdict {
    if !c1 {
        return Verdict::Undetermined("fast path needs condition (1)".into());
    }
    if !group.a().is_abelian() {
        return Verdict::Undetermined("fast path needs A abelian".into());
    }
    for (s, f) in group.factors().iter().enumerate() {
        if recipe::power_map_exponent(group.a(), f.psi()).is_none() {
            return Verdict::Undetermined(format!("psi_{s} is not a power map"));
        }
        if f.n() - f.m() + f.epsilon() > f.y() {
            return Verdict::Undetermined(format!(
                "factor {s}: n - m + eps = {} exceeds y = {}",
                f.n() - f.m() + f.epsilon(),
                f.y()
            ));
        }
    }
    Verdict::Holds
}

/// Result of checking `pi rho(b) pi^-1 = rho(b)` and the `tau_s` counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma31Report {
    /// Some `b ∈ A` (as an index of `A`) with `pi rho(b) pi^-1 != rho(b)`.
    pub part_a_witness: Option<usize>,
    /// Factors `s` for which `rho(tau_s^S(k_s, p^n - 1)) pi rho(tau_s) pi^-1` is not an automorphism.
    pub part_b_failures: Vec<usize>,
}

impl Lemma31Report {
    pub fn holds(&self) -> bool {
        self.part_a_witness.is_none() && self.part_b_failures.is_empty()
    }
}

pub fn verify_lemma31(group: &SdpGroup, pi: &PiMap) -> Lemma31Report {
    let f = pi.perm();
    let n = group.order();
    // pi ∘ rho(b) = rho(b) ∘ pi  <=>  pi(x b^-1) = pi(x) b^-1 for all x
    let part_a_witness = (0..group.a().order()).find(|&b| {
        let b_inv = group.inv(group.embed(b));
        (0..n).any(|x| f.apply(group.mul(x, b_inv)) != group.mul(f.apply(x), b_inv))
    });

    let f_inv = f.inverse();
    let part_b_failures = (0..group.rank())
        .filter(|&s| {
            let xi = pi.xi(s);
            let j = xi.apply(xi.modulus() - 1);
            let tau = group.tau(s);
            let shift = rho_rep(group, group.pow(tau, j as i64));
            let theta = shift.compose(f).compose(&rho_rep(group, tau)).compose(&f_inv);
            !is_automorphism(&theta, group)
        })
        .collect();
    Lemma31Report { part_a_witness, part_b_failures }
}

/// Result of checking `pi theta pi^-1 = theta` over `Aut(G)`, and the
/// product identity `c_s psi_s^theta_s(c_s) ... psi_s^(theta_s (p^m - 1))(c_s) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma32Report {
    pub checked: usize,
    /// Automorphisms (list positions) not commuting with `pi`.
    pub commute_failures: Vec<usize>,
    /// `(automorphism, factor)` pairs where the product is not trivial.
    pub product_failures: Vec<(usize, usize)>,
}

impl Lemma32Report {
    pub fn holds(&self) -> bool {
        self.commute_failures.is_empty() && self.product_failures.is_empty()
    }
}

pub fn verify_lemma32(group: &SdpGroup, pi: &PiMap, auts: &[Automorphism]) -> Result<Lemma32Report, PiError> {
    let f = pi.perm();
    let a = group.a();
    let results: Vec<(bool, Vec<usize>)> = auts
        .par_iter()
        .map(|theta| {
            let commutes = (0..group.order()).all(|x| f.apply(theta.apply(x)) == theta.apply(f.apply(x)));
            let mut bad = Vec::new();
            for (s, factor) in group.factors().iter().enumerate() {
                let (c, theta_s) = extract_theta(theta, group, s)?;
                let order = factor.psi().order();
                let step = (theta_s % order) as i64;
                let pm = factor.p().pow(factor.m());
                let mut acc = 0;
                for j in 0..pm as i64 {
                    acc = a.mul(acc, group.psi_pow(s, step * j, c));
                }
                if acc != 0 {
                    bad.push(s);
                }
            }
            Ok((commutes, bad))
        })
        .collect::<Result<_, PiError>>()?;
    let mut report = Lemma32Report { checked: auts.len(), commute_failures: Vec::new(), product_failures: Vec::new() };
    for (i, (commutes, bad)) in results.into_iter().enumerate() {
        if !commutes {
            report.commute_failures.push(i);
        }
        report.product_failures.extend(bad.into_iter().map(|s| (i, s)));
    }
    Ok(report)
}

/// `prod_s p_s^(n_s - m_s)`, the predicted order of `pi Hol(G)` in `T(G)`.
pub fn theoretical_coset_order(group: &SdpGroup, report: &ConditionReport) -> Result<u64, PiError> {
    if let Some(name) = report.first_failure() {
        return Err(PiError::ConditionsUnverified(format!("{name} does not hold")));
    }
    Ok(group.factors().iter().map(|f| f.p().pow(f.n() - f.m())).product())
}

/// Whether `k_s` has multiplicative order `p_s^(n_s - m_s)` modulo `p_s^n_s` for every factor.
pub fn k_orders_match(group: &SdpGroup) -> Result<bool, PiError> {
    for f in group.factors() {
        if mult_order_mod(f.k(), f.modulus())? != f.p().pow(f.n() - f.m()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks on the powers `pi^l`, `1 <= l <= upto`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiPowerReport {
    pub checked_up_to: u64,
    /// `pi^l` equals its closed form (only checked when every `n_s <= 2 m_s - eps_s`).
    pub closed_form: Option<bool>,
    /// `pi^l ∈ Hol(G)` exactly when `pi^l` is the identity.
    pub hol_iff_identity: bool,
    /// `pi^l` is the identity exactly when `S(k_s^l, i) = i (mod p_s^n_s)` for all `s`, `i`.
    pub identity_iff_congruence: bool,
}

pub fn verify_pi_powers(group: &SdpGroup, pi: &PiMap, upto: u64) -> PiPowerReport {
    let closed_form_applies = group.factors().iter().all(|f| f.n() + f.epsilon() <= 2 * f.m());
    let mut closed_form = closed_form_applies.then_some(true);
    let mut hol_iff_identity = true;
    let mut identity_iff_congruence = true;
    let mut power = pi.perm().clone();
    for l in 1..=upto {
        if closed_form_applies && power != pi.closed_form_power(group, l) {
            closed_form = Some(false);
        }
        let identity = power.is_identity();
        if hol_membership(&power, group).is_some() != identity {
            hol_iff_identity = false;
        }
        let congruence = pi.xi.iter().all(|xi| {
            let m = xi.modulus();
            let kl = pow_mod(xi.params().k(), l, m);
            (0..m).all(|i| geom_sum_mod(kl, i, m) == i)
        });
        if congruence != identity {
            identity_iff_congruence = false;
        }
        power = power.compose(pi.perm());
    }
    PiPowerReport { checked_up_to: upto, closed_form, hol_iff_identity, identity_iff_congruence }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::aut::{aut_search_generators, enumerate_aut};
    use crate::group::{power_map_aut, GroupTable, SdpFactor};

    pub(crate) fn cyclic_sdp(q: u64, ell: i64, p: u64, n: u32, m: u32) -> SdpGroup {
        let a = GroupTable::cyclic(q).unwrap();
        let psi = power_map_aut(&a, ell).unwrap();
        let f = SdpFactor::new(&a, p, n, m, 1, psi).unwrap();
        SdpGroup::new(a, vec![f]).unwrap()
    }

    fn auts(g: &SdpGroup) -> Vec<Automorphism> {
        let t = g.table().unwrap();
        enumerate_aut(t, &aut_search_generators(t), 4096).unwrap()
    }

    #[test]
    fn pi_on_group_63() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let pi = build_pi(&g).unwrap();
        for a in 0..7 {
            for e in 0..9u64 {
                let expected = [0, 1, 5, 3, 4, 8, 6, 7, 2][e as usize];
                assert_eq!(pi.perm().apply(g.encode(a, &[e])), g.encode(a, &[expected]));
            }
        }
        assert_eq!(pi.ks(), vec![4]);
    }

    #[test]
    fn pi_is_identity_when_m_equals_n() {
        let g = cyclic_sdp(7, 2, 3, 2, 2);
        assert!(build_pi(&g).unwrap().is_identity());
        let c7 = GroupTable::cyclic(7).unwrap();
        let trivial = SdpGroup::new(c7, vec![]).unwrap();
        assert!(build_pi(&trivial).unwrap().is_identity());
    }

    #[test]
    fn conditions_on_group_63() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let list = auts(&g);
        let report = check_conditions(&g, C3Source::Enumerated(&list)).unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(report.c3_method, C3Method::Enumeration);
        assert!(report.c3_fast_path.holds());
        assert_eq!(theoretical_coset_order(&g, &report).unwrap(), 3);
        for theta in &list {
            assert_eq!(extract_theta(theta, &g, 0).unwrap().1 % 3, 1);
        }
    }

    #[test]
    fn conditions_with_m_equal_n() {
        let g = cyclic_sdp(7, 2, 3, 2, 2);
        let report = check_conditions(&g, C3Source::Enumerated(&auts(&g))).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.factors[0].c3_modulus, 1);
        assert_eq!(report.factors[0].k, 10);
        assert_eq!(theoretical_coset_order(&g, &report).unwrap(), 1);
    }

    #[test]
    fn inversion_through_c8_fails_condition_three() {
        // A = C5, tau of order 8 acting by inversion, m = 2
        let g = cyclic_sdp(5, -1, 2, 3, 2);
        let report = check_conditions(&g, C3Source::Enumerated(&auts(&g))).unwrap();
        assert!(report.c1.holds());
        assert!(report.c2.holds());
        assert!(report.c4.holds());
        // tau -> tau^3 is an automorphism and 3 is not 1 mod 4
        let w = report.c3_witness.clone().unwrap();
        assert_eq!(w.modulus, 4);
        assert_eq!(w.theta_s % 4, 3);
        assert!(report.c3.fails());
        assert!(matches!(report.c3_fast_path, Verdict::Undetermined(_)));
        assert!(theoretical_coset_order(&g, &report).is_err());
    }

    #[test]
    fn c4_violation_is_reported() {
        let g = cyclic_sdp(7, 2, 3, 3, 1);
        let report = check_conditions(&g, C3Source::FastPath).unwrap();
        assert!(report.c4.fails());
        assert_eq!(report.first_failure(), Some("c3"));
    }

    #[test]
    fn extract_theta_examples() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let id = Automorphism::identity(g.order());
        assert_eq!(extract_theta(&id, &g, 0).unwrap(), (0, 1));
        // conjugation by a ∈ A
        for a in 1..7 {
            let x = g.embed(a);
            let conj = Automorphism::new(&g, (0..63).map(|y| g.mul(g.mul(x, y), g.inv(x))).collect()).unwrap();
            let (c, theta_s) = extract_theta(&conj, &g, 0).unwrap();
            assert_eq!(theta_s, 1);
            // a tau a^-1 = (a psi(a^-1)) tau
            let psi = g.factors()[0].psi();
            assert_eq!(c, g.a().mul(a, psi.apply(g.a().inv(a))));
        }
    }

    #[test]
    fn lemmas_on_group_63() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let pi = build_pi(&g).unwrap();
        assert!(verify_lemma31(&g, &pi).holds());
        let list = auts(&g);
        let report = verify_lemma32(&g, &pi, &list).unwrap();
        assert!(report.holds());
        assert_eq!(report.checked, list.len());
        let only_identity = verify_lemma32(&g, &pi, &[Automorphism::identity(63)]).unwrap();
        assert!(only_identity.holds());
        let c7 = GroupTable::cyclic(7).unwrap();
        let trivial = SdpGroup::new(c7, vec![]).unwrap();
        assert!(verify_lemma31(&trivial, &build_pi(&trivial).unwrap()).holds());
    }

    #[test]
    fn lemma31_detects_condition_two_violation() {
        // psi of order 9 while m = 1
        let g = cyclic_sdp(19, 4, 3, 2, 1);
        let report = check_conditions(&g, C3Source::FastPath).unwrap();
        assert!(report.c2.fails());
        let pi = build_pi(&g).unwrap();
        let lemma = verify_lemma31(&g, &pi);
        assert!(lemma.part_a_witness.is_some());
        assert!(!lemma.holds());
    }

    #[test]
    fn powers_of_pi() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let pi = build_pi(&g).unwrap();
        let report = verify_pi_powers(&g, &pi, 9);
        assert_eq!(report.closed_form, Some(true));
        assert!(report.hol_iff_identity);
        assert!(report.identity_iff_congruence);
        assert!(k_orders_match(&g).unwrap());
        assert!(pi.perm().pow(3).is_identity());
        assert!(!pi.perm().pow(1).is_identity());
    }
}
