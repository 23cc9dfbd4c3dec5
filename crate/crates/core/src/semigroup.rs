//! Canonical representation of a numerical semigroup and its first-order
//! invariants.
//!
//! A [`NumericalSemigroup`] is stored as its minimal generators plus a gap
//! bitset over `[0, Frob]`; everything above the Frobenius number is an
//! element, so the bitset is all that membership needs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cofinite additive submonoid of the non-negative integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct NumericalSemigroup {
    gens: Vec<u64>,
    frobenius: i64,
    /// Bit `n` is set iff `n` is a gap; length `frobenius + 1` (0 for ℕ).
    gaps: FixedBitSet,
    genus: usize,
}

/// Least element of each residue class modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AperySet {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

/// Pseudo-Frobenius numbers in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoFrobeniusSet(pub Vec<u64>);

impl PseudoFrobeniusSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }
}

/// First-order invariants of a semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub multiplicity: u64,
    pub edim: usize,
    pub width: u64,
    pub frobenius: i64,
    pub genus: usize,
    pub eta: usize,
    #[serde(rename = "type")]
    pub type_: usize,
}

impl NumericalSemigroup {
    /// Builds the semigroup generated by `gens`. The input need not be
    /// minimal, sorted or duplicate free.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidInput("empty generator list".into()));
        }
        if gens.contains(&0) {
            return Err(Error::InvalidInput("generators must be positive".into()));
        }
        let mut input = gens.to_vec();
        input.sort_unstable();
        input.dedup();
        let g = input.iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::NotCofinite(input, g));
        }
        let m = input[0];
        if m == 1 {
            return Ok(Self::naturals());
        }

        // Apéry set with respect to the smallest generator, by Dijkstra over
        // residues mod m.
        let mut apery = vec![u64::MAX; m as usize];
        apery[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((dist, r))) = heap.pop() {
            if dist > apery[r] {
                continue;
            }
            for &g in &input[1..] {
                let nd = dist + g;
                let nr = (nd % m) as usize;
                if nd < apery[nr] {
                    apery[nr] = nd;
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        let max_ap = *apery.iter().max().expect("m > 1");
        let frobenius = max_ap as i64 - m as i64;
        let len = (frobenius + 1) as usize;
        let mut gaps = FixedBitSet::with_capacity(len);
        for n in 0..len {
            let r = n % m as usize;
            if (n as u64) < apery[r] {
                gaps.insert(n);
            }
        }
        let genus = gaps.count_ones(..);
        let mut s = NumericalSemigroup {
            gens: Vec::new(),
            frobenius,
            gaps,
            genus,
        };
        let mut minimal: Vec<u64> = Vec::with_capacity(input.len());
        for &cand in &input {
            let reducible = minimal
                .iter()
                .any(|&x| x < cand && s.contains((cand - x) as i64));
            if !reducible {
                minimal.push(cand);
            }
        }
        s.gens = minimal;
        Ok(s)
    }

    /// The semigroup ℕ = ⟨1⟩.
    pub fn naturals() -> Self {
        NumericalSemigroup {
            gens: vec![1],
            frobenius: -1,
            gaps: FixedBitSet::new(),
            genus: 0,
        }
    }

    /// Builds a semigroup from its gap set, checking that the complement is
    /// closed under addition.
    pub fn from_gaps(gap_list: &[u64]) -> Result<Self> {
        let frobenius = gap_list.iter().copied().max().map_or(-1, |f| f as i64);
        let len = (frobenius + 1) as usize;
        let mut gaps = FixedBitSet::with_capacity(len);
        for &x in gap_list {
            if x == 0 {
                return Err(Error::InvalidInput("0 cannot be a gap".into()));
            }
            gaps.insert(x as usize);
        }
        for a in 1..len {
            if gaps.contains(a) {
                continue;
            }
            for b in a..len - a {
                if !gaps.contains(b) && gaps.contains(a + b) {
                    return Err(Error::InvalidInput(format!(
                        "complement of gap set not closed: {a} + {b} = {} is a gap",
                        a + b
                    )));
                }
            }
        }
        Ok(Self::from_gap_bitset(frobenius, gaps))
    }

    /// Builds from a gap bitset already known to describe a semigroup.
    pub(crate) fn from_gap_bitset(frobenius: i64, gaps: FixedBitSet) -> Self {
        if frobenius < 0 {
            return Self::naturals();
        }
        let genus = gaps.count_ones(..);
        let mut s = NumericalSemigroup {
            gens: Vec::new(),
            frobenius,
            gaps,
            genus,
        };
        let m = s.first_nonzero_element();
        let upper = frobenius as u64 + m;
        let mut gens: Vec<u64> = Vec::new();
        for n in m..=upper {
            if !s.contains(n as i64) {
                continue;
            }
            if !gens.iter().any(|&g| g < n && s.contains((n - g) as i64)) {
                gens.push(n);
            }
        }
        s.gens = gens;
        s
    }

    fn first_nonzero_element(&self) -> u64 {
        (1..).find(|&n| self.contains(n as i64)).expect("cofinite")
    }

    /// Child in the genus tree: removes the minimal generator `x`, which must
    /// exceed the Frobenius number.
    pub fn remove_generator(&self, x: u64) -> Result<Self> {
        if (x as i64) <= self.frobenius || !self.gens.contains(&x) {
            return Err(Error::InvalidInput(format!(
                "{x} is not a minimal generator above the Frobenius number"
            )));
        }
        let len = x as usize + 1;
        let mut gaps = self.gaps.clone();
        gaps.grow(len);
        gaps.insert(x as usize);
        let mut child = NumericalSemigroup {
            gens: Vec::new(),
            frobenius: x as i64,
            gaps,
            genus: self.genus + 1,
        };
        let mut cands: Vec<u64> = self.gens.iter().copied().filter(|&g| g != x).collect();
        cands.extend(self.gens.iter().map(|&g| g + x));
        cands.push(2 * x);
        cands.push(3 * x);
        cands.sort_unstable();
        cands.dedup();
        let mut gens: Vec<u64> = Vec::new();
        for c in cands {
            if !child.contains(c as i64) {
                continue;
            }
            if !gens.iter().any(|&g| g < c && child.contains((c - g) as i64)) {
                gens.push(c);
            }
        }
        child.gens = gens;
        Ok(child)
    }

    /// True iff `n ∈ Γ`.
    #[inline]
    pub fn contains(&self, n: i64) -> bool {
        if n < 0 {
            false
        } else if n > self.frobenius {
            true
        } else {
            !self.gaps.contains(n as usize)
        }
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn multiplicity(&self) -> u64 {
        self.gens[0]
    }

    pub fn edim(&self) -> usize {
        self.gens.len()
    }

    pub fn width(&self) -> u64 {
        self.gens[self.gens.len() - 1] - self.gens[0]
    }

    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn is_naturals(&self) -> bool {
        self.frobenius < 0
    }

    /// Number of elements of Γ below the Frobenius number.
    pub fn eta(&self) -> usize {
        if self.is_naturals() {
            0
        } else {
            (self.frobenius + 1) as usize - self.genus
        }
    }

    pub fn generator_sum(&self) -> u64 {
        self.gens.iter().sum()
    }

    /// Gaps in increasing order.
    pub fn gaps(&self) -> impl Iterator<Item = u64> + '_ {
        self.gaps.ones().map(|n| n as u64)
    }

    /// Elements of Γ in `[0, bound]`.
    pub fn elements_up_to(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..=bound).filter(move |&n| self.contains(n as i64))
    }

    pub fn apery_set(&self, modulus: u64) -> Result<AperySet> {
        if modulus == 0 {
            return Err(Error::InvalidInput("Apéry modulus must be positive".into()));
        }
        let residues = (0..modulus)
            .map(|r| {
                let mut x = r;
                while !self.contains(x as i64) {
                    x += modulus;
                }
                x
            })
            .collect();
        Ok(AperySet { modulus, residues })
    }

    /// Pseudo-Frobenius numbers; `EmptyResult` for ℕ.
    pub fn pseudo_frobenius(&self) -> Result<PseudoFrobeniusSet> {
        if self.is_naturals() {
            return Err(Error::EmptyResult("ℕ has no pseudo-Frobenius numbers".into()));
        }
        Ok(self.pseudo_frobenius_or_empty())
    }

    pub(crate) fn pseudo_frobenius_or_empty(&self) -> PseudoFrobeniusSet {
        let pf = self
            .gaps()
            .filter(|&p| self.gens.iter().all(|&g| self.contains((p + g) as i64)))
            .collect();
        PseudoFrobeniusSet(pf)
    }

    pub fn type_(&self) -> usize {
        self.pseudo_frobenius_or_empty().len()
    }

    pub fn invariants(&self) -> Invariants {
        Invariants {
            multiplicity: self.multiplicity(),
            edim: self.edim(),
            width: self.width(),
            frobenius: self.frobenius,
            genus: self.genus,
            eta: self.eta(),
            type_: self.type_(),
        }
    }

    /// Every gap `x` has `Frob − x ∈ Γ`.
    pub fn is_symmetric(&self) -> bool {
        let f = self.frobenius;
        self.gaps().all(|x| self.contains(f - x as i64))
    }

    pub fn is_almost_symmetric(&self) -> bool {
        let f = self.frobenius;
        let pf = self.pseudo_frobenius_or_empty();
        self.gaps().all(|x| {
            let y = f - x as i64;
            self.contains(y) || (pf.contains(x) && y >= 0 && pf.contains(y as u64))
        })
    }

    pub fn is_nearly_gorenstein(&self) -> bool {
        let pf = self.pseudo_frobenius_or_empty();
        self.gens.iter().all(|&g| {
            pf.iter().any(|p| {
                pf.iter()
                    .all(|q| self.contains(g as i64 + p as i64 - q as i64))
            })
        })
    }

    pub fn has_canonical_reduction(&self) -> bool {
        let pf = self.pseudo_frobenius_or_empty();
        let g1 = self.multiplicity() as i64;
        pf.0.iter()
            .all(|&q| self.contains(g1 + self.frobenius - q as i64))
    }

    /// The semigroup generated by the interval `[g_1, g_e]`.
    pub fn interval_completion(&self) -> Self {
        let interval: Vec<u64> = (self.multiplicity()..=*self.gens.last().unwrap()).collect();
        Self::from_generators(&interval).expect("interval containing g_1 has gcd 1")
    }

    pub fn is_max_edim(&self) -> bool {
        self.edim() as u64 == self.multiplicity()
    }

    /// Generators form an arithmetic progression (at least two terms).
    pub fn is_arithmetic_sequence(&self) -> bool {
        self.gens.len() >= 2 && self.gens.windows(3).all(|w| w[1] - w[0] == w[2] - w[1])
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

impl FromStr for NumericalSemigroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_generators(&parse_generator_list(s)?)
    }
}

/// Parses the canonical textual form `"4,5,6"`.
pub fn parse_generator_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad generator {t:?} in {s:?}")))
        })
        .collect()
}

impl TryFrom<Vec<u64>> for NumericalSemigroup {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::from_generators(&v)
    }
}

impl From<NumericalSemigroup> for Vec<u64> {
    fn from(s: NumericalSemigroup) -> Self {
        s.gens
    }
}
