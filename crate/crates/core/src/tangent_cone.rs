//! The tangent cone `G = gr_𝔪 k[[Γ]]` and its defining ideal.
//!
//! `G = S/I*`, where `I*` is generated by the lowest-degree forms of the
//! toric ideal. Everything is bigraded by Γ-degree `d` and total degree `j`,
//! and `G_{d,j}` is one dimensional when `j = ord(d)` and zero otherwise.
//! So with `Z_j(d)` the length-`j` factorizations of `d`, `I*_{d,j}` is all
//! of `k^{Z_j(d)}` below the order and the sum-zero hyperplane at it.
//!
//! Minimal generators in slice `(d, j)` are `dim I*_{d,j}` minus the
//! dimension of `Σ_k x_k·I*_{d−g_k, j−1}`. With
//! `K = {k : ord(d − g_k) = j − 1}`, that subspace contains `e_a` whenever
//! `a` uses an index outside `K`, and `e_a − e_b` whenever `a` and `b` share
//! an index in `K`. Linking factorizations through shared `K` indices, each
//! class that never touches an index outside `K` ("ungrounded") loses one
//! dimension, so the count is `#ungrounded − [j = ord(d)]`.
//!
//! Degree bound: let `J0` be the largest `ord(n)` over `n` having a
//! longest factorization that avoids `g_1`. Such a factorization has
//! `a_k < g_1` for `k ≥ 2` (trade `g_1` copies of `g_k` for `g_k` copies of
//! `g_1` otherwise), so the scan over `n ≤ (g_1 − 1)·Σ_{k≥2} g_k` is
//! finite. Above `J0` every longest factorization uses `g_1`, so
//! `ord(n) = ord(n − g_1) + 1`. In a slice with `j ≥ J0 + 2`, an ungrounded
//! `a` with `a_1 = 0` would make `a − e_k` a longest factorization of
//! `d − g_k` avoiding `g_1` at order `j − 1 > J0`, which cannot happen. All
//! ungrounded classes therefore contain index 1 and merge into one, and
//! index 1 is in `K` only when `j = ord(d)`. So no generator has degree
//! above `J0 + 1`, and the Hilbert function is constant from `J0` on.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::factorization::{support_components, OrderTable};
use crate::report::{CheckReport, Verdict};
use crate::resolution::binomial;
use crate::semigroup::NumericalSemigroup;

/// Lengths are tracked as bits of a `u128`; degrees beyond this are not
/// computed.
pub const MAX_TRACKED_DEGREE: u32 = 126;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    pub values: Vec<u64>,
    pub stable_value: u64,
}

/// `HF(j) = #{γ : ord(γ) = j}` for `j = 0..=jmax`.
pub fn hilbert_function_g(s: &NumericalSemigroup, jmax: usize) -> Result<HilbertFunction> {
    if jmax < 1 {
        return Err(Error::InvalidInput("jmax must be at least 1".into()));
    }
    // beyond this, γ − jmax·g_1 is a nonzero element, so ord(γ) > jmax
    let bound = (s.frobenius() + 1).max(0) as u64 + jmax as u64 * s.multiplicity();
    let ord = OrderTable::new(s, bound);
    let mut values = vec![0u64; jmax + 1];
    for n in 0..=bound {
        if let Some(o) = ord.get(n) {
            if (o as usize) <= jmax {
                values[o as usize] += 1;
            }
        }
    }
    Ok(HilbertFunction {
        values,
        stable_value: s.multiplicity(),
    })
}

/// `J0`: the Hilbert function of `G` is constant from here on and the
/// initial-form ideal has no minimal generator above `J0 + 1`.
pub fn stable_order_threshold(s: &NumericalSemigroup) -> u32 {
    let gens = s.generators();
    if gens.len() == 1 {
        return 0;
    }
    let m = gens[0];
    let n0 = (m - 1) * gens[1..].iter().sum::<u64>();
    let ord = OrderTable::new(s, n0);
    // longest factorization using only g_2..g_e
    let mut ord_rest: Vec<Option<u32>> = vec![None; n0 as usize + 1];
    ord_rest[0] = Some(0);
    for n in 1..=n0 as usize {
        ord_rest[n] = gens[1..]
            .iter()
            .filter(|&&g| g as usize <= n)
            .filter_map(|&g| ord_rest[n - g as usize])
            .max()
            .map(|o| o + 1);
    }
    (0..=n0)
        .filter(|&n| ord_rest[n as usize].is_some() && ord_rest[n as usize] == ord.get(n))
        .map(|n| ord.get(n).unwrap())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HfCheck {
    pub values: Vec<u64>,
    pub nondecreasing: bool,
    pub violation_at: Option<usize>,
}

/// Checks monotonicity of `HF_G` up to the point where it provably
/// stabilizes.
pub fn is_hf_nondecreasing(s: &NumericalSemigroup) -> Result<HfCheck> {
    let j0 = stable_order_threshold(s) as usize;
    let hf = hilbert_function_g(s, (j0 + 1).max(2))?;
    if hf.values[j0] != hf.stable_value || hf.values[j0 + 1] != hf.stable_value {
        return Err(Error::Consistency(format!(
            "Hilbert function of {s:?} not stable at {j0}: {:?}",
            hf.values
        )));
    }
    let violation_at = (1..hf.values.len()).find(|&j| hf.values[j] < hf.values[j - 1]);
    Ok(HfCheck {
        values: hf.values,
        nondecreasing: violation_at.is_none(),
        violation_at,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum B1Status {
    /// Every degree up to the proven bound was examined.
    Definite,
    /// Stopped at the cap, but no generator appeared in the last `g_e`
    /// degrees before it.
    Capped,
    /// Stopped at the cap with generators still appearing near it.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct B1G {
    pub value: usize,
    pub status: B1Status,
    /// Highest total degree examined.
    pub cap: u32,
    /// `J0 + 1`, above which no minimal generator exists.
    pub degree_bound: u32,
    pub by_degree: BTreeMap<u32, usize>,
}

impl B1G {
    pub fn is_definite(&self) -> bool {
        self.status == B1Status::Definite
    }
}

/// Heuristic cap `2(Frob + g_e)/g_1 + 2`, kept for callers that want a
/// cheaper partial answer than the proven bound.
pub fn default_degree_cap(s: &NumericalSemigroup) -> u32 {
    let ge = *s.generators().last().unwrap() as i64;
    (2 * (s.frobenius() + ge) / s.multiplicity() as i64 + 2) as u32
}

fn has_len(l: u128, len: u32) -> bool {
    len < 128 && (l >> len) & 1 == 1
}

/// Factorization length sets of `0..=bound` using the generators in `allowed`.
fn length_sets(gens: &[u64], allowed: u64, bound: u64) -> Vec<u128> {
    let mut l = vec![0u128; bound as usize + 1];
    l[0] = 1;
    for n in 1..=bound as usize {
        let mut acc = 0u128;
        for (k, &g) in gens.iter().enumerate() {
            if allowed >> k & 1 == 1 && g as usize <= n {
                acc |= l[n - g as usize] << 1;
            }
        }
        l[n] = acc;
    }
    l
}

/// Number of minimal generators of `I*` in bidegree `(d, j)`, `j ≥ 2`.
fn slice_generators(gens: &[u64], full: &[u128], ord: &OrderTable, d: u64, j: u32) -> Result<usize> {
    let (mut inner, mut outer) = (0u64, 0u64);
    for (k, &g) in gens.iter().enumerate() {
        if g > d || !has_len(full[(d - g) as usize], j - 1) {
            continue;
        }
        if ord.get(d - g) == Some(j - 1) {
            inner |= 1 << k;
        } else {
            outer |= 1 << k;
        }
    }
    let at_order = (ord.get(d) == Some(j)) as usize;
    let mut ungrounded = 0;
    if inner != 0 {
        let restricted = length_sets(gens, inner, d);
        let used: Vec<usize> = (0..gens.len())
            .filter(|&i| inner >> i & 1 == 1 && has_len(restricted[(d - gens[i]) as usize], j - 1))
            .collect();
        let mut items: Vec<u64> = used.iter().map(|&i| 1 << i).collect();
        for (x, &a) in used.iter().enumerate() {
            for &b in &used[x + 1..] {
                let sum = gens[a] + gens[b];
                if sum <= d && has_len(restricted[(d - sum) as usize], j - 2) {
                    items.push(1 << a | 1 << b);
                }
            }
        }
        for class in support_components(&items, gens.len()) {
            let support = class.iter().fold(0u64, |m, &c| m | items[c]);
            let grounded = (0..gens.len()).filter(|&i| support >> i & 1 == 1).any(|i| {
                (0..gens.len()).filter(|&k| outer >> k & 1 == 1).any(|k| {
                    let sum = gens[i] + gens[k];
                    sum <= d && has_len(full[(d - sum) as usize], j - 2)
                })
            });
            ungrounded += (!grounded) as usize;
        }
    }
    ungrounded.checked_sub(at_order).ok_or_else(|| {
        Error::Consistency(format!("negative generator count at degree ({d}, {j})"))
    })
}

/// Number of minimal generators of the initial-form ideal `I*`.
///
/// With `degree_cap = None` the proven bound `J0 + 1` is used and the
/// result is definite (unless that bound exceeds [`MAX_TRACKED_DEGREE`]).
pub fn b1_g(s: &NumericalSemigroup, degree_cap: Option<u32>) -> Result<B1G> {
    if let Some(c) = degree_cap {
        if c < 2 {
            return Err(Error::InvalidInput("degree cap must be at least 2".into()));
        }
    }
    let degree_bound = stable_order_threshold(s) + 1;
    let top = degree_cap.unwrap_or(degree_bound).min(degree_bound).min(MAX_TRACKED_DEGREE);
    let gens = s.generators();
    let mut by_degree = BTreeMap::new();
    if gens.len() > 1 {
        let (g1, ge) = (gens[0], *gens.last().unwrap());
        let nmax = top as u64 * ge;
        let full = length_sets(gens, u64::MAX, nmax);
        let ord = OrderTable::new(s, nmax);
        for j in 2..=top {
            let mut count = 0;
            for d in j as u64 * g1..=j as u64 * ge {
                if has_len(full[d as usize], j) {
                    count += slice_generators(gens, &full, &ord, d, j)?;
                }
            }
            if count > 0 {
                by_degree.insert(j, count);
            }
        }
    }
    let status = if top >= degree_bound {
        B1Status::Definite
    } else {
        let ge = *gens.last().unwrap() as u32;
        let last = by_degree.keys().next_back().copied().unwrap_or(0);
        if last + ge > top {
            B1Status::Inconclusive
        } else {
            B1Status::Capped
        }
    };
    Ok(B1G {
        value: by_degree.values().sum(),
        status,
        cap: top,
        degree_bound,
        by_degree,
    })
}

/// `b_1(G) ≤ b_1(G̃)` for the interval completion and
/// `b_1(G) ≤ C(width + 1, 2)`.
pub fn width_checks_g(s: &NumericalSemigroup) -> Result<CheckReport> {
    let own = b1_g(s, None)?;
    let completion = b1_g(&s.interval_completion(), None)?;
    let width_bound = binomial(s.width() + 1, 2) as usize;
    let judge = |ok: bool, definite: bool| {
        if !definite {
            Verdict::Inconclusive
        } else {
            Verdict::from_bool(ok)
        }
    };
    let vs_completion = judge(
        own.value <= completion.value,
        own.is_definite() && completion.is_definite(),
    );
    let vs_width = judge(own.value <= width_bound, own.is_definite());
    Ok(CheckReport::new(
        "width_g",
        s,
        vs_completion.combine(vs_width),
        json!({
            "b1_g": own.value,
            "b1_g_completion": completion.value,
            "width_bound": width_bound,
            "completion_inequality": vs_completion,
            "width_inequality": vs_width,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::{factorizations, DEFAULT_FACTORIZATION_CAP};
    use crate::linalg::{rank, SparseRow};
    use crate::resolution::graded_betti;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn hilbert_function_examples() {
        assert_eq!(hilbert_function_g(&sg(&[3, 4, 5]), 4).unwrap().values, vec![1, 3, 3, 3, 3]);
        assert_eq!(hilbert_function_g(&sg(&[2, 3]), 3).unwrap().values, vec![1, 2, 2, 2]);
        assert_eq!(
            hilbert_function_g(&NumericalSemigroup::naturals(), 5).unwrap().values,
            vec![1; 6]
        );
        assert!(hilbert_function_g(&sg(&[2, 3]), 0).is_err());
    }

    #[test]
    fn hilbert_function_counts_match_factorization_lengths() {
        for g in [&[3u64, 5, 7][..], &[4, 6, 9, 11], &[5, 7, 9], &[6, 7, 15], &[4, 5, 11]] {
            let s = sg(g);
            let hf = hilbert_function_g(&s, 6).unwrap();
            let mut brute = vec![0u64; 7];
            for n in s.elements_up_to(6 * s.generators().last().unwrap()) {
                let ord = factorizations(&s, n, DEFAULT_FACTORIZATION_CAP)
                    .unwrap()
                    .iter()
                    .map(|f| f.length())
                    .max()
                    .unwrap();
                if ord <= 6 {
                    brute[ord as usize] += 1;
                }
            }
            assert_eq!(hf.values, brute, "{s:?}");
            assert_eq!(hf.values[1], s.edim() as u64);
        }
    }

    #[test]
    fn monotonicity_check() {
        let c = is_hf_nondecreasing(&sg(&[3, 4, 5])).unwrap();
        assert!(c.nondecreasing);
        assert_eq!(c.violation_at, None);
        assert!(is_hf_nondecreasing(&NumericalSemigroup::naturals()).unwrap().nondecreasing);
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["violation_at"], serde_json::Value::Null);
        // a known decreasing example in the literature
        let c = is_hf_nondecreasing(&sg(&[13, 19, 24, 44, 49, 54, 55, 59, 60, 66])).unwrap();
        assert!(!c.nondecreasing);
    }

    #[test]
    fn b1_examples() {
        let b = b1_g(&sg(&[2, 3]), None).unwrap();
        assert_eq!((b.value, b.status), (1, B1Status::Definite));
        assert_eq!(b1_g(&sg(&[3, 4, 5]), None).unwrap().value, 3);
        assert_eq!(b1_g(&NumericalSemigroup::naturals(), None).unwrap().value, 0);
        for w in 3..9u64 {
            let s = sg(&(w..2 * w).collect::<Vec<_>>());
            let b = b1_g(&s, None).unwrap();
            assert_eq!(b.value as u128, binomial(w, 2));
            assert_eq!(b.by_degree.keys().copied().collect::<Vec<_>>(), vec![2]);
        }
        let json = serde_json::to_value(b1_g(&sg(&[2, 3]), None).unwrap()).unwrap();
        assert_eq!(json["status"], "definite");
        assert!(b1_g(&sg(&[2, 3]), Some(1)).is_err());
    }

    #[test]
    fn capped_runs_are_labelled() {
        let s = sg(&[5, 7, 9, 11]);
        let full = b1_g(&s, None).unwrap();
        let capped = b1_g(&s, Some(2)).unwrap();
        assert!(full.degree_bound > 2);
        assert_ne!(capped.status, B1Status::Definite);
        assert!(capped.value <= full.value);
    }

    /// Builds I*_{d,j} literally: relation vectors among factorizations of
    /// `d` of length ≥ j, projected onto the length-j coordinates.
    fn initial_space(s: &NumericalSemigroup, d: u64, j: u64) -> (Vec<Vec<u32>>, Vec<SparseRow>) {
        let facts = factorizations(s, d, DEFAULT_FACTORIZATION_CAP).unwrap();
        let long: Vec<&Vec<u32>> = facts.iter().filter(|f| f.length() >= j).map(|f| &f.0).collect();
        let basis: Vec<Vec<u32>> = long.iter().filter(|f| f.iter().sum::<u32>() as u64 == j).map(|f| f.to_vec()).collect();
        let mut rows = Vec::new();
        for w in long.windows(2) {
            let mut row: SparseRow = Vec::new();
            for (sign, f) in [(1i64, w[0]), (-1, w[1])] {
                if let Some(c) = basis.iter().position(|b| b == f) {
                    row.push((c, sign));
                }
            }
            row.sort_unstable();
            if !row.is_empty() {
                rows.push(row);
            }
        }
        (basis, rows)
    }

    fn brute_generators(s: &NumericalSemigroup, d: u64, j: u64) -> usize {
        let (basis, rows) = initial_space(s, d, j);
        let own = rank(&rows, 0);
        let gens = s.generators();
        let mut products: Vec<SparseRow> = Vec::new();
        for (k, &g) in gens.iter().enumerate() {
            if g > d || !s.contains((d - g) as i64) {
                continue;
            }
            let (lower_basis, lower_rows) = initial_space(s, d - g, j - 1);
            for row in lower_rows {
                let mut out: SparseRow = row
                    .iter()
                    .map(|&(c, v)| {
                        let mut f = lower_basis[c].clone();
                        f[k] += 1;
                        (basis.iter().position(|b| *b == f).unwrap(), v)
                    })
                    .collect();
                out.sort_unstable();
                products.push(out);
            }
        }
        own - rank(&products, 0)
    }

    #[test]
    fn b1_matches_linear_algebra_oracle() {
        let cases: &[&[u64]] = &[
            &[2, 3], &[3, 4, 5], &[3, 5, 7], &[4, 5, 6], &[4, 5, 11], &[4, 6, 9, 11],
            &[5, 6, 9], &[4, 7, 10], &[5, 7, 9, 11], &[6, 7, 15], &[5, 8, 9, 12], &[6, 9, 10, 13],
            &[7, 8, 17], &[5, 12, 13, 14],
        ];
        for g in cases {
            let s = sg(g);
            let b = b1_g(&s, None).unwrap();
            assert!(b.is_definite());
            let (g1, ge) = (s.multiplicity(), *s.generators().last().unwrap());
            let mut brute: BTreeMap<u32, usize> = BTreeMap::new();
            for j in 2..=b.degree_bound as u64 + 2 {
                for d in j * g1..=j * ge {
                    let c = brute_generators(&s, d, j);
                    if c > 0 {
                        *brute.entry(j as u32).or_default() += c;
                    }
                }
            }
            assert_eq!(b.by_degree, brute, "{s:?}");
            let b1_r = graded_betti(&s, 0).unwrap().totals()[1];
            assert!(b1_r <= b.value, "{s:?}");
        }
    }

    #[test]
    fn width_checks() {
        let r = width_checks_g(&sg(&[3, 4, 5])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.data["b1_g"], 3);
        assert_eq!(r.data["width_bound"], 3);
        let r = width_checks_g(&NumericalSemigroup::naturals()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
