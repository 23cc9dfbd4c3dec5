//! Graded Betti numbers of the semigroup ring `k[Γ]` over `S = k[x_1..x_e]`.
//!
//! Two independent routes:
//!
//! * [`graded_betti`] uses that `x_1` (the multiplicity) is a nonzerodivisor,
//!   so `Tor^S(k[Γ], k)` is the Koszul homology of `k[Γ]/x_1` over
//!   `k[x_2..x_e]`. That quotient has basis `t^w`, `w` in the Apéry set, with
//!   `x_k·t^w = t^{w+g_k}` when `w + g_k` stays in the Apéry set and 0
//!   otherwise. The complex is finite, so no degree window is needed.
//! * [`graded_betti_simplicial`] computes `b_{i,j} = dim H̃_{i−1}(Δ_j)` from
//!   squarefree divisor complexes over the window
//!   `j ≤ Frob + 1 + Σg − e + i`.

mod bounds;
mod complex;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

pub use bounds::{
    binomial, binomial_expansion, bound_c, bound_d, macaulay_lower, macaulay_upper,
    max_betti_bound, r_s,
};
pub use complex::{divisor_complex, reduced_homology_dims, SimplicialComplex};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::semigroup::NumericalSemigroup;

/// Cap on `2^{e−1}·mult`, the size of the Koszul complex.
pub const DEFAULT_KOSZUL_CELL_CAP: u64 = 1 << 24;

/// Graded Betti numbers for one coefficient characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub characteristic: u32,
    pub edim: usize,
    entries: BTreeMap<(usize, u64), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: u64) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries `(i, j, b)` ordered by `i` then `j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u64, usize)> + '_ {
        self.entries.iter().map(|(&(i, j), &b)| (i, j, b))
    }

    /// `b_i` for `i = 0..edim`.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.edim];
        for (i, _, b) in self.entries() {
            t[i] += b;
        }
        t
    }

    /// Degrees `j` with `b_{i,j} ≠ 0` and their values.
    pub fn row(&self, i: usize) -> BTreeMap<u64, usize> {
        self.entries().filter(|e| e.0 == i).map(|(_, j, b)| (j, b)).collect()
    }

    pub fn alternating_sum(&self) -> i64 {
        self.totals()
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// `max{j − i : b_{i,j} ≠ 0}`.
    pub fn max_shift(&self) -> i64 {
        self.entries()
            .map(|(i, j, _)| j as i64 - i as i64)
            .max()
            .expect("b_0 is always present")
    }

    /// One `i,j,b` line per nonzero entry, then `i,total` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,b\n");
        for (i, j, b) in self.entries() {
            out.push_str(&format!("{i},{j},{b}\n"));
        }
        out.push_str("i,total\n");
        for (i, b) in self.totals().iter().enumerate() {
            out.push_str(&format!("{i},{b}\n"));
        }
        out
    }
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Entry {
            i: usize,
            j: u64,
            b: usize,
        }
        let entries: Vec<Entry> = self.entries().map(|(i, j, b)| Entry { i, j, b }).collect();
        let mut st = ser.serialize_struct("BettiTable", 3)?;
        st.serialize_field("char", &self.characteristic)?;
        st.serialize_field("entries", &entries)?;
        st.serialize_field("totals", &self.totals())?;
        st.end()
    }
}

fn check_characteristic(c: u32) -> Result<()> {
    if linalg::is_valid_characteristic(c) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("characteristic {c} is neither 0 nor a prime")))
    }
}

pub fn graded_betti(s: &NumericalSemigroup, characteristic: u32) -> Result<BettiTable> {
    graded_betti_with_cap(s, characteristic, DEFAULT_KOSZUL_CELL_CAP)
}

pub fn graded_betti_with_cap(
    s: &NumericalSemigroup,
    characteristic: u32,
    cell_cap: u64,
) -> Result<BettiTable> {
    check_characteristic(characteristic)?;
    let gens = s.generators();
    let e = gens.len();
    let m = gens[0];
    let h = &gens[1..];
    let v = h.len();
    if v >= 40 || (1u64 << v).saturating_mul(m) > cell_cap {
        return Err(Error::limit("Koszul complex cells", cell_cap as usize));
    }
    let ap = s.apery_set(m)?.residues;
    let in_ap = |x: u64| ap[(x % m) as usize] == x;

    let mut sums = vec![0u64; 1 << v];
    for f in 1..1usize << v {
        sums[f] = sums[f & (f - 1)] + h[f.trailing_zeros() as usize];
    }
    // A degree-j cell (F, w) is determined by F, since w = j − Σ_F h.
    let mut cells: Vec<(u64, u32, u64)> = Vec::with_capacity((1usize << v) * m as usize);
    for (f, &sf) in sums.iter().enumerate() {
        for &w in &ap {
            cells.push((sf + w, f.count_ones(), f as u64));
        }
    }
    cells.sort_unstable();
    let groups: Vec<&[(u64, u32, u64)]> = cells.chunk_by(|a, b| a.0 == b.0).collect();

    let per_degree: Vec<Vec<((usize, u64), usize)>> = groups
        .par_iter()
        .map(|group| {
            let j = group[0].0;
            let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); v + 1];
            for &(_, i, f) in group.iter() {
                by_size[i as usize].push(f);
            }
            let mut ranks = vec![0usize; v + 2];
            for i in 1..=v {
                if by_size[i].is_empty() || by_size[i - 1].is_empty() {
                    continue;
                }
                let lower = &by_size[i - 1];
                let rows: Vec<SparseRow> = by_size[i]
                    .iter()
                    .map(|&f| {
                        let w = j - sums[f as usize];
                        let mut row: SparseRow = Vec::new();
                        let mut pos = 0;
                        for k in 0..v {
                            if f & (1 << k) == 0 {
                                continue;
                            }
                            if in_ap(w + h[k]) {
                                let col = lower.binary_search(&(f & !(1 << k))).expect("same degree");
                                row.push((col, if pos % 2 == 0 { 1 } else { -1 }));
                            }
                            pos += 1;
                        }
                        row.sort_unstable();
                        row
                    })
                    .collect();
                ranks[i] = linalg::rank(&rows, characteristic);
            }
            (0..=v)
                .filter_map(|i| {
                    let b = by_size[i].len() - ranks[i] - ranks[i + 1];
                    (b > 0).then_some(((i, j), b))
                })
                .collect()
        })
        .collect();

    Ok(BettiTable {
        characteristic,
        edim: e,
        entries: per_degree.into_iter().flatten().collect(),
    })
}

/// Independent route through divisor complexes; slower, used as an oracle.
pub fn graded_betti_simplicial(s: &NumericalSemigroup, characteristic: u32) -> Result<BettiTable> {
    check_characteristic(characteristic)?;
    let e = s.edim();
    let base = s.frobenius() + 1 + s.generator_sum() as i64 - e as i64;
    let top = (base + e as i64 - 1).max(0) as u64;
    let mut entries = BTreeMap::new();
    for j in s.elements_up_to(top) {
        let dims = reduced_homology_dims(&divisor_complex(s, j)?, characteristic);
        for i in 0..e {
            if j as i64 <= base + i as i64 && dims[i] > 0 {
                entries.insert((i, j), dims[i]);
            }
        }
    }
    Ok(BettiTable {
        characteristic,
        edim: e,
        entries,
    })
}

/// `max{j − i : b_{i,j} ≠ 0} − Σg + e`, checked against `Frob + 1`.
pub fn regularity(s: &NumericalSemigroup) -> Result<i64> {
    regularity_from_table(s, &graded_betti(s, 0)?)
}

pub fn regularity_from_table(s: &NumericalSemigroup, t: &BettiTable) -> Result<i64> {
    let reg = t.max_shift() - s.generator_sum() as i64 + s.edim() as i64;
    if reg != s.frobenius() + 1 {
        return Err(Error::Consistency(format!(
            "regularity {reg} of {s:?} differs from Frob + 1 = {}",
            s.frobenius() + 1
        )));
    }
    Ok(reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::{betti_elements, rho};

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn totals_examples() {
        assert_eq!(graded_betti(&sg(&[3, 4, 5]), 0).unwrap().totals(), vec![1, 3, 2]);
        assert_eq!(graded_betti(&sg(&[4, 5, 6]), 0).unwrap().totals(), vec![1, 2, 1]);
        assert_eq!(graded_betti(&sg(&[4, 5, 6, 7]), 0).unwrap().totals(), vec![1, 6, 8, 3]);
        assert_eq!(graded_betti(&NumericalSemigroup::naturals(), 0).unwrap().totals(), vec![1]);
        assert_eq!(graded_betti(&sg(&[2, 3]), 2).unwrap().totals(), vec![1, 1]);
    }

    #[test]
    fn graded_entries() {
        let t = graded_betti(&sg(&[3, 4, 5]), 0).unwrap();
        assert_eq!(t.row(1), BTreeMap::from([(8, 1), (9, 1), (10, 1)]));
        assert_eq!(t.row(2), BTreeMap::from([(13, 1), (14, 1)]));
        assert_eq!(t.get(0, 0), 1);
        let json = serde_json::to_value(graded_betti(&sg(&[2, 3]), 0).unwrap()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"char": 0, "entries": [{"i":0,"j":0,"b":1},{"i":1,"j":6,"b":1}], "totals": [1, 1]})
        );
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(regularity(&sg(&[2, 3])).unwrap(), 2);
        assert_eq!(regularity(&sg(&[4, 5, 6])).unwrap(), 8);
        assert_eq!(regularity(&NumericalSemigroup::naturals()).unwrap(), 0);
    }

    #[test]
    fn invalid_characteristic_and_cap() {
        assert!(matches!(graded_betti(&sg(&[3, 4, 5]), 4), Err(Error::InvalidInput(_))));
        assert!(matches!(
            graded_betti_with_cap(&sg(&[5, 6, 7, 8, 9]), 0, 10),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn routes_agree_and_match_presentation() {
        let cases: &[&[u64]] = &[
            &[2, 3], &[3, 4, 5], &[3, 5, 7], &[4, 5, 6], &[4, 5, 6, 7], &[4, 6, 9, 11],
            &[5, 6, 7, 8, 9], &[5, 7, 9, 11], &[6, 7, 8, 9, 10, 11], &[7, 9, 11, 13, 15],
            &[5, 8, 11, 14, 17], &[6, 10, 15],
        ];
        for g in cases {
            let s = sg(g);
            for c in [0, 2, 3] {
                let fast = graded_betti(&s, c).unwrap();
                let slow = graded_betti_simplicial(&s, c).unwrap();
                assert_eq!(fast, slow, "{s:?} char {c}");
                assert_eq!(fast.alternating_sum(), 0);
                assert_eq!(fast.totals()[1], rho(&s).unwrap());
                assert_eq!(*fast.totals().last().unwrap(), s.type_());
                let b1: BTreeMap<u64, usize> = betti_elements(&s)
                    .unwrap()
                    .into_iter()
                    .map(|(d, comps)| (d, comps - 1))
                    .collect();
                assert_eq!(fast.row(1), b1, "{s:?}");
                regularity_from_table(&s, &fast).unwrap();
            }
        }
    }

    #[test]
    fn symmetric_resolutions_are_self_dual() {
        for g in [&[4u64, 5, 6][..], &[5, 6, 7, 8], &[6, 7, 8, 9, 10], &[6, 10, 15]] {
            let s = sg(g);
            assert!(s.is_symmetric());
            let t = graded_betti(&s, 0).unwrap().totals();
            let rev: Vec<usize> = t.iter().rev().copied().collect();
            assert_eq!(t, rev, "{s:?}");
        }
    }

    #[test]
    fn max_edim_hits_the_betti_bound() {
        for m in 3..8u64 {
            let s = sg(&(m..2 * m).collect::<Vec<_>>());
            let t = graded_betti(&s, 0).unwrap().totals();
            for i in 1..m as usize {
                assert_eq!(t[i] as u128, max_betti_bound(i as u64, m).unwrap());
            }
        }
    }
}
