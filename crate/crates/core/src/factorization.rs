//! Factorizations of semigroup elements and minimal presentations.
//!
//! A minimal presentation is read off the factorization graphs: two
//! factorizations of `n` are adjacent when their supports meet, and every
//! degree whose graph has `c ≥ 2` connected components contributes `c − 1`
//! relations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::NumericalSemigroup;

/// Default cap on the number of factorizations enumerated for one element.
pub const DEFAULT_FACTORIZATION_CAP: usize = 1_000_000;

/// Exponent vector over the minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factorization(pub Vec<u32>);

impl Factorization {
    pub fn length(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn degree(&self, gens: &[u64]) -> u64 {
        self.0.iter().zip(gens).map(|(&a, &g)| a as u64 * g).sum()
    }

    /// Bitmask of indices with nonzero exponent.
    pub fn support(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    }
}

/// A pair of factorizations of the same element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub degree: u64,
    pub left: Factorization,
    pub right: Factorization,
}

/// A minimal presentation; its length is ρ(Γ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Presentation {
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn rho(&self) -> usize {
        self.relations.len()
    }
}

/// All factorizations of `n`, in lexicographic order of exponent vectors.
pub fn factorizations(s: &NumericalSemigroup, n: u64, cap: usize) -> Result<Vec<Factorization>> {
    let gens = s.generators();
    let mut out = Vec::new();
    if !s.contains(n as i64) {
        return Ok(out);
    }
    let reach = prefix_reachability(gens, n);
    let mut current = vec![0u32; gens.len()];
    enumerate(gens, &reach, gens.len() - 1, n, &mut current, &mut out, cap)?;
    out.sort_unstable();
    Ok(out)
}

/// `reach[i][v]`: `v` is a combination of `gens[..=i]`.
fn prefix_reachability(gens: &[u64], n: u64) -> Vec<Vec<bool>> {
    let n = n as usize;
    let mut reach: Vec<Vec<bool>> = Vec::with_capacity(gens.len());
    for (i, &g) in gens.iter().enumerate() {
        let g = g as usize;
        let mut row = match i {
            0 => {
                let mut r = vec![false; n + 1];
                r[0] = true;
                r
            }
            _ => reach[i - 1].clone(),
        };
        for v in g..=n {
            if row[v - g] {
                row[v] = true;
            }
        }
        reach.push(row);
    }
    reach
}

fn enumerate(
    gens: &[u64],
    reach: &[Vec<bool>],
    i: usize,
    rest: u64,
    current: &mut Vec<u32>,
    out: &mut Vec<Factorization>,
    cap: usize,
) -> Result<()> {
    if i == 0 {
        debug_assert_eq!(rest % gens[0], 0);
        current[0] = (rest / gens[0]) as u32;
        if out.len() >= cap {
            return Err(Error::limit("factorizations", cap));
        }
        out.push(Factorization(current.clone()));
        current[0] = 0;
        return Ok(());
    }
    let g = gens[i];
    let mut k = 0u64;
    while k * g <= rest {
        let r = rest - k * g;
        if reach[i - 1][r as usize] {
            current[i] = k as u32;
            enumerate(gens, reach, i - 1, r, current, out, cap)?;
        }
        k += 1;
    }
    current[i] = 0;
    Ok(())
}

/// Maximal factorization length for every element of `[0, bound]`.
#[derive(Debug, Clone)]
pub struct OrderTable {
    /// `None` for gaps.
    ord: Vec<Option<u32>>,
}

impl OrderTable {
    pub fn new(s: &NumericalSemigroup, bound: u64) -> Self {
        let gens = s.generators();
        let mut ord: Vec<Option<u32>> = vec![None; bound as usize + 1];
        ord[0] = Some(0);
        for n in 1..=bound as usize {
            ord[n] = gens
                .iter()
                .filter(|&&g| g as usize <= n)
                .filter_map(|&g| ord[n - g as usize])
                .max()
                .map(|o| o + 1);
        }
        OrderTable { ord }
    }

    pub fn bound(&self) -> u64 {
        self.ord.len() as u64 - 1
    }

    #[inline]
    pub fn get(&self, n: u64) -> Option<u32> {
        self.ord.get(n as usize).copied().flatten()
    }
}

/// Maximal length of a factorization of `n`.
pub fn order(s: &NumericalSemigroup, n: u64) -> Result<u64> {
    if !s.contains(n as i64) {
        return Err(Error::NotMember(n as i64));
    }
    Ok(OrderTable::new(s, n).get(n).expect("member") as u64)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups `items` into classes where two items are linked when their
/// support masks intersect. Classes come back ordered by first member.
pub(crate) fn support_components(supports: &[u64], width: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(supports.len());
    let mut owner: Vec<Option<usize>> = vec![None; width];
    for (idx, &mask) in supports.iter().enumerate() {
        for (bit, slot) in owner.iter_mut().enumerate() {
            if mask & (1 << bit) != 0 {
                match *slot {
                    Some(o) => uf.union(o, idx),
                    None => *slot = Some(idx),
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for idx in 0..supports.len() {
        let r = uf.find(idx);
        by_root.entry(r).or_default().push(idx);
    }
    // roots are minimal indices, so BTreeMap order is order of first member
    by_root.into_values().collect()
}

/// Connected components of the factorization graph of `n`. Factorizations
/// inside a component are sorted, and components are ordered by their least
/// factorization.
pub fn factorization_graph_components(
    s: &NumericalSemigroup,
    n: u64,
    cap: usize,
) -> Result<Vec<Vec<Factorization>>> {
    if !s.contains(n as i64) {
        return Err(Error::NotMember(n as i64));
    }
    let facts = factorizations(s, n, cap)?;
    Ok(components_of(facts, s.edim()))
}

fn components_of(facts: Vec<Factorization>, width: usize) -> Vec<Vec<Factorization>> {
    let supports: Vec<u64> = facts.iter().map(Factorization::support).collect();
    let classes = support_components(&supports, width);
    classes
        .into_iter()
        .map(|idxs| idxs.into_iter().map(|i| facts[i].clone()).collect())
        .collect()
}

/// Upper end of the window containing every degree of a minimal relation:
/// `Frob + Σ g_h − e + 2`.
pub fn betti_degree_window(s: &NumericalSemigroup) -> i64 {
    s.frobenius() + s.generator_sum() as i64 - s.edim() as i64 + 2
}

/// Candidate degrees for minimal relations: `w + g_k` with `w` in the Apéry
/// set of the multiplicity and `k ≥ 2`, restricted to the window.
fn betti_candidates(s: &NumericalSemigroup) -> Vec<u64> {
    if s.is_naturals() {
        return Vec::new();
    }
    let window = betti_degree_window(s);
    let ap = s.apery_set(s.multiplicity()).expect("positive modulus");
    let mut cands: Vec<u64> = ap
        .residues
        .iter()
        .flat_map(|&w| s.generators()[1..].iter().map(move |&g| w + g))
        .filter(|&d| d as i64 <= window)
        .collect();
    cands.sort_unstable();
    cands.dedup();
    cands
}

/// Betti elements with the number of components of their factorization graph.
pub fn betti_elements(s: &NumericalSemigroup) -> Result<BTreeMap<u64, usize>> {
    betti_elements_with_cap(s, DEFAULT_FACTORIZATION_CAP)
}

pub fn betti_elements_with_cap(s: &NumericalSemigroup, cap: usize) -> Result<BTreeMap<u64, usize>> {
    let mut out = BTreeMap::new();
    for d in betti_candidates(s) {
        let facts = factorizations(s, d, cap)?;
        if facts.len() < 2 {
            continue;
        }
        let supports: Vec<u64> = facts.iter().map(Factorization::support).collect();
        let c = support_components(&supports, s.edim()).len();
        if c >= 2 {
            out.insert(d, c);
        }
    }
    Ok(out)
}

/// Deterministic minimal presentation: at each Betti element the component
/// holding the lexicographically least factorization is joined to every other
/// component through their least factorizations.
pub fn minimal_presentation(s: &NumericalSemigroup) -> Result<Presentation> {
    minimal_presentation_with_cap(s, DEFAULT_FACTORIZATION_CAP)
}

pub fn minimal_presentation_with_cap(s: &NumericalSemigroup, cap: usize) -> Result<Presentation> {
    let mut relations = Vec::new();
    for d in betti_candidates(s) {
        let facts = factorizations(s, d, cap)?;
        if facts.len() < 2 {
            continue;
        }
        let comps = components_of(facts, s.edim());
        for other in &comps[1..] {
            relations.push(Relation {
                degree: d,
                left: comps[0][0].clone(),
                right: other[0].clone(),
            });
        }
    }
    Ok(Presentation { relations })
}

/// ρ(Γ), the cardinality of a minimal presentation.
pub fn rho(s: &NumericalSemigroup) -> Result<usize> {
    Ok(betti_elements(s)?.values().map(|c| c - 1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    fn f(v: &[u32]) -> Factorization {
        Factorization(v.to_vec())
    }

    /// Exhaustive oracle: every exponent vector with entries ≤ n / g_i.
    fn brute_factorizations(gens: &[u64], n: u64) -> Vec<Factorization> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; gens.len()];
        loop {
            if f(&cur).degree(gens) == n {
                out.push(f(&cur));
            }
            let mut i = 0;
            loop {
                if i == gens.len() {
                    out.sort();
                    return out;
                }
                cur[i] += 1;
                if cur[i] as u64 * gens[i] <= n {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn factorization_examples() {
        let s = sg(&[3, 4, 5]);
        assert_eq!(brute_factorizations(&[3, 4, 5], 8), vec![f(&[0, 2, 0]), f(&[1, 0, 1])]);
        assert_eq!(factorizations(&s, 8, 100).unwrap(), vec![f(&[0, 2, 0]), f(&[1, 0, 1])]);
        assert_eq!(factorizations(&s, 9, 100).unwrap(), vec![f(&[0, 1, 1]), f(&[3, 0, 0])]);
        assert!(factorizations(&sg(&[2, 3]), 1, 100).unwrap().is_empty());
    }

    #[test]
    fn factorization_cap() {
        let s = sg(&[3, 4, 5]);
        assert!(matches!(
            factorizations(&s, 60, 5),
            Err(Error::ResourceLimit { limit: 5, .. })
        ));
    }

    #[test]
    fn order_examples() {
        let s = sg(&[3, 4, 5]);
        assert_eq!(order(&s, 8).unwrap(), 2);
        assert_eq!(order(&s, 9).unwrap(), 3);
        assert_eq!(order(&s, 0).unwrap(), 0);
        assert_eq!(order(&s, 1), Err(Error::NotMember(1)));
    }

    #[test]
    fn graph_components() {
        let s = sg(&[3, 4, 5]);
        let c = factorization_graph_components(&s, 8, 100).unwrap();
        assert_eq!(c, vec![vec![f(&[0, 2, 0])], vec![f(&[1, 0, 1])]]);
        let c = factorization_graph_components(&s, 12, 100).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), brute_factorizations(&[3, 4, 5], 12).len());
        assert_eq!(factorization_graph_components(&s, 3, 100).unwrap().len(), 1);
    }

    #[test]
    fn betti_element_examples() {
        let be = |g: &[u64]| betti_elements(&sg(g)).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(be(&[3, 4, 5]), vec![(8, 2), (9, 2), (10, 2)]);
        assert_eq!(be(&[4, 5, 6]), vec![(10, 2), (12, 2)]);
        assert_eq!(be(&[2, 3]), vec![(6, 2)]);
        assert!(be(&[1]).is_empty());
    }

    /// Scans every degree of the window, not just the Apéry candidates.
    fn betti_full_window(s: &NumericalSemigroup) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for d in 0..=betti_degree_window(s).max(0) as u64 {
            if s.contains(d as i64) {
                let c = factorization_graph_components(s, d, 1 << 20).unwrap().len();
                if c >= 2 {
                    out.insert(d, c);
                }
            }
        }
        out
    }

    #[test]
    fn candidate_restriction_matches_full_window() {
        for g in [&[3u64, 4, 5][..], &[4, 5, 6], &[5, 7, 9, 11], &[6, 7, 8, 9, 10], &[4, 6, 9, 11], &[7, 9, 10, 12]] {
            let s = sg(g);
            assert_eq!(betti_elements(&s).unwrap(), betti_full_window(&s), "{s:?}");
        }
    }

    #[test]
    fn presentation_examples() {
        let p = minimal_presentation(&sg(&[3, 4, 5])).unwrap();
        assert_eq!(p.rho(), 3);
        assert_eq!(minimal_presentation(&sg(&[4, 5, 6])).unwrap().rho(), 2);
        let p = minimal_presentation(&sg(&[2, 3])).unwrap();
        assert_eq!(
            p.relations,
            vec![Relation { degree: 6, left: f(&[0, 2]), right: f(&[3, 0]) }]
        );
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"[{"degree":6,"left":[0,2],"right":[3,0]}]"#
        );
        assert_eq!(rho(&sg(&[5, 6, 7, 8, 9])).unwrap(), 10);
        assert_eq!(rho(&NumericalSemigroup::naturals()).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn enumeration_matches_brute_force(
            a in 2u64..9, b in 2u64..12, c in 2u64..15, n in 0u64..60
        ) {
            let mut gens = vec![a, a + b, a + b + c];
            if num_integer::gcd(num_integer::gcd(gens[0], gens[1]), gens[2]) != 1 {
                gens.push(gens[2] + 1);
            }
            let s = sg(&gens);
            let facts = factorizations(&s, n, 1 << 20).unwrap();
            prop_assert_eq!(&facts, &brute_factorizations(s.generators(), n));
            if let Ok(o) = order(&s, n) {
                prop_assert_eq!(Some(o), facts.iter().map(Factorization::length).max());
            } else {
                prop_assert!(facts.is_empty());
            }
        }

        #[test]
        fn presentation_relations_are_balanced(a in 3u64..10, b in 1u64..8, c in 1u64..8) {
            let gens = [a, a + b, a + b + c, 2 * a + b + c + 1];
            prop_assume!(gens.iter().fold(0, |x, &y| num_integer::gcd(x, y)) == 1);
            let s = sg(&gens);
            let p = minimal_presentation(&s).unwrap();
            let be = betti_elements(&s).unwrap();
            prop_assert!(p.rho() + 1 >= s.edim());
            for r in &p.relations {
                prop_assert_eq!(r.left.degree(s.generators()), r.degree);
                prop_assert_eq!(r.right.degree(s.generators()), r.degree);
                prop_assert!(r.left != r.right);
                prop_assert!(be.contains_key(&r.degree));
            }
        }
    }
}
