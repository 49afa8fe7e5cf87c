#![allow(dead_code)]

use holomorph::group::{power_map_aut, GroupTable, SdpFactor, SdpGroup};
use holomorph::modarith::{geom_sum, mod_inverse, padic_val, padic_val_big, PParams, XiTable};

/// Every `(p, m, u)` of the exhaustive arithmetic suite.
pub fn suite_params() -> Vec<PParams> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for m in 1..=4u32 {
            for u in 1..=10u64 {
                if let Ok(params) = PParams::new(p, u, m) {
                    out.push(params);
                }
            }
        }
    }
    out
}

/// Checks the valuation equality, the fixed points, the iteration law and
/// the inverse congruence for one `(p, m, u)` and one `n`, over every
/// residue `i < p^n`. Returns the number of individual checks.
pub fn arith_suite(params: PParams, n: u32) -> Result<u64, String> {
    let p = params.p();
    let m = params.m();
    let eps = params.epsilon();
    let xi = XiTable::build(params, n).map_err(|e| e.to_string())?;
    let modulus = xi.modulus();
    let k = params.k() % modulus;
    let mut checks = 0u64;
    let ctx = |what: &str, i: u64| format!("{what}: p={p} m={m} u={} n={n} i={i}", params.u());

    // v_p(S(k, i)) = v_p(i); both are below n for 0 < i < p^n, so residues mod p^n decide it
    for i in 1..modulus {
        let s = xi.image()[i as usize];
        let v = padic_val(p, i).expect("i > 0");
        let divides = |e: u32| s % p.pow(e) == 0;
        if !(divides(v) && !divides(v + 1)) {
            return Err(ctx("valuation", i));
        }
        checks += 1;
    }

    // i = 1 (mod p^(n - m + eps)) is a fixed point
    if n >= m {
        let step = p.pow(n - m + eps);
        let mut i = 1 % step;
        while i < modulus {
            if xi.image()[i as usize] != i {
                return Err(ctx("fixed point", i));
            }
            checks += 1;
            i += step;
        }
    }

    // l-fold composite equals S(k^l, .) when n <= 2m - eps
    if n + eps <= 2 * m {
        let period = p.pow(n - m.min(n));
        let mut composite: Vec<u64> = (0..modulus).collect();
        let mut kl = 1u64;
        for l in 1..=3 * period {
            kl = kl * k % modulus;
            for c in composite.iter_mut() {
                *c = xi.image()[*c as usize];
            }
            // S(x, i + 1) = 1 + x S(x, i)
            let mut s = 0u64;
            for (i, &c) in composite.iter().enumerate() {
                if c != s {
                    return Err(ctx(&format!("iteration l={l}"), i as u64));
                }
                s = (1 + kl * s) % modulus;
            }
            checks += modulus;
        }
    }

    // S(k, i~ - 1) - S(k, p^n - 1) = k' i, with i~ the preimage taken in 1..=p^n
    let k_inv = mod_inverse(k, modulus).map_err(|e| e.to_string())?;
    let tail = xi.apply(modulus - 1);
    for i in 0..modulus {
        let pre = match xi.preimage(i) {
            0 => modulus,
            j => j,
        };
        let lhs = (xi.apply(pre - 1) + modulus - tail) % modulus;
        if lhs != k_inv * i % modulus {
            return Err(ctx("inverse congruence", i));
        }
        checks += 1;
    }
    Ok(checks)
}

/// Valuation equality with exact big integers, for `1 <= i <= upto`.
pub fn exact_valuations(params: PParams, upto: u64) -> Result<(), String> {
    let p = params.p();
    let k = params.k();
    let kb = num_bigint::BigUint::from(k);
    let mut term = num_bigint::BigUint::from(1u32);
    let mut sum = num_bigint::BigUint::from(0u32);
    for i in 1..=upto {
        sum += &term;
        term *= &kb;
        if padic_val_big(p, &sum).unwrap() != padic_val(p, i).unwrap() {
            return Err(format!("exact valuation: p={p} k={k} i={i}"));
        }
    }
    // spot-check the incremental sum against the library
    if upto > 0 && sum != geom_sum(k, upto) {
        return Err(format!("incremental sum disagrees at p={p} k={k}"));
    }
    Ok(())
}

/// `C_q x| C_(p^n)` with `tau` acting by `a -> a^ell`, `u = 1`.
pub fn cyclic_sdp(q: u64, ell: i64, p: u64, n: u32, m: u32) -> SdpGroup {
    let a = GroupTable::cyclic(q).unwrap();
    let psi = power_map_aut(&a, ell).unwrap();
    let factor = SdpFactor::new(&a, p, n, m, 1, psi).unwrap();
    SdpGroup::new(a, vec![factor]).unwrap()
}

/// `C77 x| (C9 x C25)` with `psi_3: a -> a^23` (order 3) and `psi_5: a -> a^15` (order 5).
pub fn two_factor_group() -> SdpGroup {
    let a = GroupTable::cyclic(77).unwrap();
    let f3 = SdpFactor::new(&a, 3, 2, 1, 1, power_map_aut(&a, 23).unwrap()).unwrap();
    let f5 = SdpFactor::new(&a, 5, 2, 1, 1, power_map_aut(&a, 15).unwrap()).unwrap();
    SdpGroup::new(a, vec![f3, f5]).unwrap()
}
