//! Building groups that satisfy the four hypotheses by construction, from
//! cyclic data: `A = C_q1 x ... x C_qj` with every `psi_s` a power map.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{power_map_aut, Automorphism, FiniteGroup, GroupError, GroupTable, SdpFactor, SdpGroup};
use crate::modarith::{checked_pow, gcd, is_prime, lcm, mult_order_mod, ModArithError};
use crate::pi::{extract_theta, PiError};

#[derive(Debug, Error)]
pub enum RecipeError {
    #[error("p = {0} must be an odd prime")]
    BadPrime(u64),
    #[error("e must be at least 1")]
    BadE,
    #[error(transparent)]
    Arith(#[from] ModArithError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One factor `<tau>` of order `p^n` acting on `A` by `a -> a^ell`, an
/// automorphism of order `p^y`; `u` is fixed to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeFactor {
    pub p: u64,
    pub y: u32,
    pub n: u32,
    pub m: u32,
    pub ell: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeSpec {
    pub cyclic_factors: Vec<u64>,
    pub factors: Vec<RecipeFactor>,
}

impl RecipeSpec {
    /// `prod p^(n - m)`.
    pub fn target_order(&self) -> u64 {
        self.factors.iter().map(|f| f.p.pow(f.n - f.m)).product()
    }

    pub fn a_exponent(&self) -> u64 {
        self.cyclic_factors.iter().fold(1, |acc, &q| lcm(acc, q))
    }

    pub fn build(&self) -> Result<SdpGroup, GroupError> {
        let a = GroupTable::abelian(&self.cyclic_factors)?;
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(index, f)| {
                let psi = power_map_aut(&a, f.ell)?;
                SdpFactor::new(&a, f.p, f.n, f.m, 1, psi).map_err(|e| match e {
                    GroupError::BadFactor { message, .. } => GroupError::BadFactor { index, message },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SdpGroup::new(a, factors)
    }
}

/// Reasons the power-map criterion does not certify `spec`; empty when it does.
pub fn cor42_failures(spec: &RecipeSpec) -> Vec<String> {
    let mut out = Vec::new();
    let exp_a = spec.a_exponent();
    if spec.cyclic_factors.iter().any(|&q| q < 2) {
        out.push("cyclic factors must be at least 2".into());
    }
    for (s, f) in spec.factors.iter().enumerate() {
        if !is_prime(f.p) {
            out.push(format!("factor {s}: p = {} is not prime", f.p));
            continue;
        }
        if spec.factors[..s].iter().any(|g| g.p == f.p) {
            out.push(format!("factor {s}: prime {} repeats", f.p));
        }
        if gcd(f.p, exp_a) != 1 {
            out.push(format!("factor {s}: p = {} divides exp(A) = {exp_a}", f.p));
        }
        let eps = u32::from(f.p == 2);
        if f.m < 1 + eps || f.m > f.n {
            out.push(format!("factor {s}: m = {} out of range", f.m));
            continue;
        }
        let ell = f.ell.rem_euclid(exp_a as i64) as u64;
        let order = if exp_a == 1 {
            Ok(1)
        } else {
            mult_order_mod(ell, exp_a)
        };
        match (order, checked_pow(f.p, f.y)) {
            (Ok(o), Ok(py)) if o == py => {}
            _ => out.push(format!("factor {s}: {} does not have order {}^{} mod {exp_a}", f.ell, f.p, f.y)),
        }
        if f.n - f.m + eps > f.y || f.y > f.m {
            out.push(format!(
                "factor {s}: need n - m + eps <= y <= m, got n = {}, m = {}, y = {}",
                f.n, f.m, f.y
            ));
        }
    }
    out
}

/// Whether `spec` meets the power-map criterion, which implies all four hypotheses.
pub fn check_cor42(spec: &RecipeSpec) -> bool {
    cor42_failures(spec).is_empty()
}

/// Smallest unit of multiplicative order exactly `target` modulo `modulus`.
pub fn unit_order_element(modulus: u64, target: u64) -> Option<u64> {
    if modulus == 0 || target == 0 {
        return None;
    }
    if modulus == 1 {
        return (target == 1).then_some(0);
    }
    (1..modulus).find(|&x| gcd(x, modulus) == 1 && mult_order_mod(x, modulus).ok() == Some(target))
}

/// All recipes `A = C_q`, `q <= q_bound` prime, `y = m = e`, `n = 2e`, with
/// `ell` the smallest unit of order `p^e` mod `q`. Such `ell` exists exactly
/// when `p^e` divides `q - 1`.
pub fn recipe_search(p: u64, e: u32, q_bound: u64) -> Result<Vec<RecipeSpec>, RecipeError> {
    if p == 2 || !is_prime(p) {
        return Err(RecipeError::BadPrime(p));
    }
    if e == 0 {
        return Err(RecipeError::BadE);
    }
    let pe = checked_pow(p, e)?;
    checked_pow(p, 2 * e)?;
    Ok((2..=q_bound)
        .filter(|&q| is_prime(q) && (q - 1) % pe == 0)
        .filter_map(|q| {
            let ell = unit_order_element(q, pe)?;
            Some(RecipeSpec {
                cyclic_factors: vec![q],
                factors: vec![RecipeFactor { p, y: e, n: 2 * e, m: e, ell: ell as i64 }],
            })
        })
        .collect())
}

/// `ell` with `psi(a) = a^ell` for all `a ∈ A`, the least such in `0..exp(A)`,
/// or `None` when `psi` is not a power map.
pub fn power_map_exponent(a: &GroupTable, psi: &Automorphism) -> Option<u64> {
    if !a.is_abelian() {
        return None;
    }
    let gens = a.generators();
    let exp = a.exponent();
    (0..exp).find(|&ell| gens.iter().all(|&g| a.pow(g, ell as i64) == psi.apply(g)))
}

/// What the conjugation identity says for one `theta ∈ Aut(G)` and factor `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop41Outcome {
    pub c_s: usize,
    pub theta_s: u64,
    /// `theta_A psi_s = c_s psi_s^theta_s(theta_A(.)) c_s^-1` on `A`.
    pub identity_holds: bool,
    /// When `A` is abelian and `psi_s` commutes with `theta_A`: whether
    /// `theta_s = 1 (mod p^y)`. `None` when those premises fail.
    pub refinement: Option<bool>,
}

impl Prop41Outcome {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.refinement != Some(false)
    }
}

pub fn verify_prop41(theta: &Automorphism, group: &SdpGroup, s: usize) -> Result<Prop41Outcome, PiError> {
    let a = group.a();
    let theta_a = (0..a.order())
        .map(|b| {
            let image = theta.apply(group.embed(b));
            if group.is_in_a(image) {
                Ok(group.a_part(image))
            } else {
                Err(PiError::DoesNotStabilizeA(b))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (c_s, theta_s) = extract_theta(theta, group, s)?;
    let factor = &group.factors()[s];
    let psi = factor.psi();
    let step = (theta_s % psi.order()) as i64;
    let c_inv = a.inv(c_s);
    let identity_holds = (0..a.order()).all(|b| {
        let lhs = theta_a[psi.apply(b)];
        let rhs = a.mul(a.mul(c_s, group.psi_pow(s, step, theta_a[b])), c_inv);
        lhs == rhs
    });
    let commutes = (0..a.order()).all(|b| theta_a[psi.apply(b)] == psi.apply(theta_a[b]));
    let refinement = (a.is_abelian() && commutes).then(|| {
        let py = factor.p().pow(factor.y());
        theta_s % py == 1 % py
    });
    Ok(Prop41Outcome { c_s, theta_s, identity_holds, refinement })
}
