//! Enumeration of `Aut(G)` for a table group by backtracking over the images
//! of a generating set.
//!
//! Candidate images are restricted to elements with the same order and
//! centralizer size as the generator they replace. Partial assignments are
//! pruned with two cheap relations per pair of generators: the order of their
//! product, and `g_i g_j g_i^-1 = g_j^t` whenever that conjugate is a power of
//! `g_j`. Each complete assignment is extended along a spanning tree of the
//! Cayley graph and accepted only if every edge is respected.

use rayon::prelude::*;

use crate::group::{closure, Automorphism, FiniteGroup, GroupTable};
use crate::hol::HolError;

/// A generating set chosen to keep the backtracking small: each step adds the
/// element that enlarges the generated subgroup most, breaking ties by the
/// number of elements sharing its (order, centralizer size) fingerprint.
pub fn aut_search_generators(group: &GroupTable) -> Vec<usize> {
    let n = group.order();
    let fingerprint_class = fingerprint_class_sizes(group);
    let mut gens = Vec::new();
    let mut member = vec![false; n];
    member[0] = true;
    while member.iter().any(|&m| !m) {
        let mut best: Option<(usize, usize, usize)> = None; // (subgroup size, class size, x)
        for x in (0..n).filter(|&x| !member[x]) {
            let mut trial = gens.clone();
            trial.push(x);
            let size = closure(group, &trial).iter().filter(|&&m| m).count();
            let key = (size, fingerprint_class[x], x);
            let better = match best {
                None => true,
                Some((bs, bc, _)) => size > bs || (size == bs && key.1 < bc),
            };
            if better {
                best = Some(key);
            }
        }
        let (_, _, x) = best.expect("some element lies outside the subgroup");
        gens.push(x);
        member = closure(group, &gens);
    }
    gens
}

fn fingerprints(group: &GroupTable) -> Vec<(u64, usize)> {
    let cent = group.centralizer_sizes();
    (0..group.order()).map(|x| (group.element_order(x), cent[x])).collect()
}

fn fingerprint_class_sizes(group: &GroupTable) -> Vec<usize> {
    let fp = fingerprints(group);
    let mut counts = std::collections::HashMap::new();
    for f in &fp {
        *counts.entry(*f).or_insert(0usize) += 1;
    }
    fp.iter().map(|f| counts[f]).collect()
}

struct Search<'a> {
    group: &'a GroupTable,
    gens: &'a [usize],
    candidates: Vec<Vec<usize>>,
    // product_orders[i][j] = order(g_j g_i) for j < i
    product_orders: Vec<Vec<u64>>,
    // (i, j, t): g_i g_j g_i^-1 = g_j^t
    relations: Vec<(usize, usize, i64)>,
    // spanning tree of the Cayley graph: (x, parent, generator index), BFS order
    tree: Vec<(usize, usize, usize)>,
}

impl<'a> Search<'a> {
    fn new(group: &'a GroupTable, gens: &'a [usize]) -> Self {
        let fp = fingerprints(group);
        let candidates = gens
            .iter()
            .map(|&g| (0..group.order()).filter(|&x| fp[x] == fp[g]).collect())
            .collect();
        let product_orders = (0..gens.len())
            .map(|i| (0..i).map(|j| group.element_order(group.mul(gens[j], gens[i]))).collect())
            .collect();
        let mut relations = Vec::new();
        for (i, &gi) in gens.iter().enumerate() {
            for (j, &gj) in gens.iter().enumerate() {
                if i == j {
                    continue;
                }
                let conj = group.mul(group.mul(gi, gj), group.inv(gi));
                let order = group.element_order(gj) as i64;
                if let Some(t) = (0..order).find(|&t| group.pow(gj, t) == conj) {
                    relations.push((i, j, t));
                }
            }
        }
        let mut tree = Vec::with_capacity(group.order());
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut frontier = vec![0usize];
        let mut head = 0;
        while head < frontier.len() {
            let x = frontier[head];
            head += 1;
            for (i, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    tree.push((y, x, i));
                    frontier.push(y);
                }
            }
        }
        Self { group, gens, candidates, product_orders, relations, tree }
    }

    fn consistent(&self, images: &[usize], level: usize, h: usize) -> bool {
        let g = self.group;
        for (j, &hj) in images.iter().enumerate() {
            if g.element_order(g.mul(hj, h)) != self.product_orders[level][j] {
                return false;
            }
        }
        self.relations.iter().all(|&(i, j, t)| {
            let (hi, hj) = match (i, j) {
                (i, j) if i == level && j < level => (h, images[j]),
                (i, j) if j == level && i < level => (images[i], h),
                _ => return true,
            };
            g.mul(g.mul(hi, hj), g.inv(hi)) == g.pow(hj, t)
        })
    }

    fn dfs(&self, images: &mut Vec<usize>, out: &mut Vec<Automorphism>) {
        let level = images.len();
        if level == self.gens.len() {
            if let Some(map) = self.extend(images) {
                out.push(Automorphism::from_map_unchecked(map));
            }
            return;
        }
        for &h in &self.candidates[level] {
            if self.consistent(images, level, h) {
                images.push(h);
                self.dfs(images, out);
                images.pop();
            }
        }
    }

    fn extend(&self, images: &[usize]) -> Option<Vec<usize>> {
        let g = self.group;
        let n = g.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        for &(x, parent, i) in &self.tree {
            map[x] = g.mul(map[parent], images[i]);
        }
        let mut hit = vec![false; n];
        for &y in &map {
            if std::mem::replace(&mut hit[y], true) {
                return None;
            }
        }
        for (i, &s) in self.gens.iter().enumerate() {
            for x in 0..n {
                if map[g.mul(x, s)] != g.mul(map[x], images[i]) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

/// All automorphisms of `group`, sorted by image array.
///
/// `gens` must generate the group; any generating set works, but
/// [`aut_search_generators`] keeps the search small.
pub fn enumerate_aut(
    group: &GroupTable,
    gens: &[usize],
    cap: usize,
) -> Result<Vec<Automorphism>, HolError> {
    let n = group.order();
    if n > cap {
        return Err(HolError::CapExceeded { size: n, cap });
    }
    let generated = closure(group, gens).iter().filter(|&&m| m).count();
    if generated != n {
        return Err(HolError::NotGenerating { generated, order: n });
    }
    if gens.is_empty() {
        return Ok(vec![Automorphism::identity(n)]);
    }
    let search = Search::new(group, gens);
    let mut auts: Vec<Automorphism> = search.candidates[0]
        .par_iter()
        .flat_map_iter(|&h| {
            let mut out = Vec::new();
            search.dfs(&mut vec![h], &mut out);
            out
        })
        .collect();
    auts.sort();
    Ok(auts)
}
