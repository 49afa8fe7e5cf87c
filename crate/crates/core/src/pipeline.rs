//! The full verification run for one group: hypotheses, `pi`, membership in
//! `NHol(G)`, the order of `pi Hol(G)` in `T(G)`, and the intermediate identities.

use std::time::Instant;

use serde::Serialize;

use crate::aut::{aut_search_generators, enumerate_aut};
use crate::group::{Automorphism, FiniteGroup, SdpGroup, DEFAULT_SIZE_CAP};
use crate::hol::{coset_order_in_t, default_coset_bound, nhol_witness, HolGenSet};
use crate::pi::{
    build_pi, check_conditions, k_orders_match, theoretical_coset_order, verify_lemma31, verify_lemma32,
    verify_pi_powers, C3Source, ConditionReport, Lemma31Report, Lemma32Report, PiError, PiPowerReport,
};
use crate::recipe::verify_prop41;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Do not enumerate `Aut(G)`; condition (3) then comes from the power-map criterion.
    pub skip_aut: bool,
    /// Largest `|G|` for which `Aut(G)` is enumerated.
    pub aut_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { skip_aut: false, aut_cap: DEFAULT_SIZE_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop41Summary {
    pub checked: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub aut_seconds: f64,
    pub total_seconds: f64,
}

/// Everything except `timing` is deterministic for a given input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub group_order: usize,
    pub a_order: usize,
    pub conditions: ConditionReport,
    /// `|Aut(G)|`, when enumerated.
    pub automorphism_count: Option<usize>,
    /// Why `Aut(G)` was not enumerated.
    pub aut_skipped: Option<String>,
    /// The power-map criterion and the enumeration agree on condition (3)
    /// (`None` unless both produced a verdict).
    pub c3_cross_check: Option<bool>,
    pub pi_is_identity: bool,
    /// `None` without a generating set of `Aut(G)`.
    pub pi_in_nhol: Option<bool>,
    pub coset_order_computed: Option<u64>,
    pub coset_order_theoretical: Option<u64>,
    pub k_orders_match: bool,
    pub pi_powers: Option<PiPowerReport>,
    pub lemma31: Lemma31Report,
    pub lemma32: Option<Lemma32Report>,
    pub prop41: Option<Prop41Summary>,
    pub confirmed: bool,
    pub failure: Option<String>,
    pub timing: Timing,
}

impl VerifyReport {
    /// Report as pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    /// The JSON without `timing`, for comparing runs.
    pub fn comparable_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}

pub fn run_verify(group: &SdpGroup, options: VerifyOptions) -> Result<VerifyReport, PiError> {
    let start = Instant::now();

    let (auts, aut_skipped, aut_seconds) = match (options.skip_aut, group.table()) {
        (true, _) => (None, Some("skipped on request".to_string()), 0.0),
        (false, Some(table)) if group.order() <= options.aut_cap => {
            let t0 = Instant::now();
            let auts = enumerate_aut(table, &aut_search_generators(table), options.aut_cap)?;
            (Some(auts), None, t0.elapsed().as_secs_f64())
        }
        _ => (
            None,
            Some(format!("|G| = {} exceeds the enumeration cap {}", group.order(), options.aut_cap)),
            0.0,
        ),
    };

    let source = match &auts {
        Some(list) => C3Source::Enumerated(list),
        None => C3Source::FastPath,
    };
    let conditions = check_conditions(group, source)?;
    let c3_cross_check = match (&auts, &conditions.c3_fast_path) {
        (Some(_), fast) if !matches!(fast, crate::pi::Verdict::Undetermined(_)) => {
            Some(fast.holds() == conditions.c3.holds())
        }
        _ => None,
    };
    let coset_order_theoretical = theoretical_coset_order(group, &conditions).ok();

    let pi = build_pi(group)?;
    let hol = auts.as_ref().map(|list| HolGenSet::from_automorphisms(group, list));
    let pi_in_nhol = hol.as_ref().map(|h| nhol_witness(pi.perm(), h).is_none());

    let normalizes = pi_in_nhol.unwrap_or(conditions.normalizes());
    let coset_order_computed = if normalizes {
        let bound = coset_order_theoretical.unwrap_or_else(|| default_coset_bound(group).min(pi.perm().order()));
        coset_order_in_t(pi.perm(), group, bound).ok()
    } else {
        None
    };
    let pi_powers = coset_order_theoretical.map(|order| verify_pi_powers(group, &pi, order));

    let lemma31 = verify_lemma31(group, &pi);
    let lemma32 = match &auts {
        Some(list) if conditions.normalizes() => Some(verify_lemma32(group, &pi, list)?),
        _ => None,
    };
    let prop41 = match &auts {
        Some(list) if conditions.c1.holds() => Some(prop41_summary(group, list)?),
        _ => None,
    };

    let failure = first_failure(
        &conditions,
        pi_in_nhol,
        coset_order_computed,
        coset_order_theoretical,
        &lemma31,
        lemma32.as_ref(),
        prop41.as_ref(),
        pi_powers.as_ref(),
    );
    Ok(VerifyReport {
        group_order: group.order(),
        a_order: group.a().order(),
        automorphism_count: auts.as_ref().map(Vec::len),
        aut_skipped,
        c3_cross_check,
        pi_is_identity: pi.is_identity(),
        pi_in_nhol,
        coset_order_computed,
        coset_order_theoretical,
        k_orders_match: k_orders_match(group)?,
        pi_powers,
        lemma31,
        lemma32,
        prop41,
        confirmed: failure.is_none(),
        failure,
        conditions,
        timing: Timing { aut_seconds, total_seconds: start.elapsed().as_secs_f64() },
    })
}

fn prop41_summary(group: &SdpGroup, auts: &[Automorphism]) -> Result<Prop41Summary, PiError> {
    let mut failures = 0;
    for theta in auts {
        for s in 0..group.rank() {
            if !verify_prop41(theta, group, s)?.holds() {
                failures += 1;
            }
        }
    }
    Ok(Prop41Summary { checked: auts.len() * group.rank(), failures })
}

#[allow(clippy::too_many_arguments)]
fn first_failure(
    conditions: &ConditionReport,
    pi_in_nhol: Option<bool>,
    computed: Option<u64>,
    theoretical: Option<u64>,
    lemma31: &Lemma31Report,
    lemma32: Option<&Lemma32Report>,
    prop41: Option<&Prop41Summary>,
    pi_powers: Option<&PiPowerReport>,
) -> Option<String> {
    if let Some(name) = conditions.first_failure() {
        return Some(format!("condition {name} does not hold"));
    }
    if pi_in_nhol == Some(false) {
        return Some("pi does not normalize Hol(G)".into());
    }
    if computed != theoretical {
        return Some(format!("coset order {computed:?} differs from the predicted {theoretical:?}"));
    }
    if !lemma31.holds() {
        return Some("pi does not commute with rho(A) as required".into());
    }
    if lemma32.is_some_and(|l| !l.holds()) {
        return Some("pi does not commute with Aut(G) as required".into());
    }
    if prop41.is_some_and(|p| p.failures > 0) {
        return Some("the conjugation identity for Aut(G) fails".into());
    }
    if pi_powers.is_some_and(|p| p.closed_form == Some(false) || !p.hol_iff_identity || !p.identity_iff_congruence) {
        return Some("powers of pi disagree with their closed form".into());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi::tests::cyclic_sdp;

    #[test]
    fn group_63_is_confirmed() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let report = run_verify(&g, VerifyOptions::default()).unwrap();
        assert!(report.confirmed, "{:?}", report.failure);
        assert_eq!(report.coset_order_computed, Some(3));
        assert_eq!(report.coset_order_theoretical, Some(3));
        assert_eq!(report.pi_in_nhol, Some(true));
        assert_eq!(report.automorphism_count, Some(126));
        assert_eq!(report.c3_cross_check, Some(true));
        assert_eq!(report.prop41, Some(Prop41Summary { checked: 126, failures: 0 }));
    }

    #[test]
    fn skip_aut_uses_the_fast_path() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let report = run_verify(&g, VerifyOptions { skip_aut: true, ..Default::default() }).unwrap();
        assert!(report.confirmed);
        assert_eq!(report.pi_in_nhol, None);
        assert_eq!(report.coset_order_computed, Some(3));
        assert!(report.lemma32.is_none());
    }

    #[test]
    fn trivial_pi_when_m_equals_n() {
        let g = cyclic_sdp(7, 2, 3, 2, 2);
        let report = run_verify(&g, VerifyOptions::default()).unwrap();
        assert!(report.confirmed);
        assert!(report.pi_is_identity);
        assert_eq!(report.coset_order_computed, Some(1));
    }

    #[test]
    fn c4_violation_is_not_confirmed() {
        // C19 with psi of order 3, n = 3, m = 1: n > 2m
        let g = cyclic_sdp(19, 7, 3, 3, 1);
        let report = run_verify(&g, VerifyOptions::default()).unwrap();
        assert!(report.conditions.c4.fails());
        assert!(!report.confirmed);
        assert_eq!(report.coset_order_theoretical, None);
        assert!(report.failure.unwrap().starts_with("condition"));
    }

    #[test]
    fn comparable_json_is_stable() {
        let g = cyclic_sdp(7, 2, 3, 2, 1);
        let a = run_verify(&g, VerifyOptions::default()).unwrap();
        let b = run_verify(&g, VerifyOptions::default()).unwrap();
        assert_eq!(a.comparable_json(), b.comparable_json());
        assert!(!a.comparable_json().contains("timing"));
        assert!(a.to_json().contains("\"timing\""));
    }
}
