//! A few small nonabelian groups used as fixtures and oracle subjects.

use super::{GroupTable, DEFAULT_SIZE_CAP};

/// Dihedral group of order `2n`; index `j * n + i` stands for `r^i s^j`.
pub fn dihedral(n: usize) -> GroupTable {
    assert!(n >= 1);
    GroupTable::from_fn(2 * n, DEFAULT_SIZE_CAP, |x, y| {
        let (i, j) = (x % n, x / n);
        let (k, l) = (y % n, y / n);
        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        ((j + l) % 2) * n + rot
    })
    .expect("dihedral table is a group")
}

/// Dicyclic group of order `4n`: `<a, x | a^(2n), x^2 = a^n, x a x^-1 = a^-1>`.
///
/// Index `j * 2n + i` stands for `a^i x^j`.
pub fn dicyclic(n: usize) -> GroupTable {
    assert!(n >= 1);
    let m = 2 * n;
    GroupTable::from_fn(2 * m, DEFAULT_SIZE_CAP, |x, y| {
        let (i, j) = (x % m, x / m);
        let (k, l) = (y % m, y / m);
        if j == 0 {
            return l * m + (i + k) % m;
        }
        // a^i x a^k x^l = a^(i-k) x^(1+l)
        let rot = (i + m - k) % m;
        if l == 0 {
            m + rot
        } else {
            (rot + n) % m
        }
    })
    .expect("dicyclic table is a group")
}

pub fn symmetric3() -> GroupTable {
    dihedral(3)
}

pub fn quaternion8() -> GroupTable {
    dicyclic(2)
}
