//! Enumeration engines: the genus tree, symmetric semigroups by Frobenius
//! number, generator-set search with filters, random walks, and a
//! brute-force gap-subset oracle.

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::NumericalSemigroup;

/// Label attached to every result of a bounded enumeration.
pub const BOUNDED_MARKER: &str = "bounded search, not a proof";

/// Children in the genus tree: remove a minimal generator above Frob.
pub fn tree_children(s: &NumericalSemigroup) -> Vec<NumericalSemigroup> {
    s.generators()
        .iter()
        .filter(|&&g| g as i64 > s.frobenius())
        .map(|&g| s.remove_generator(g).expect("generator above Frob"))
        .collect()
}

/// Depth-first, preorder visit of every semigroup of genus ≤ `gmax` with
/// Frobenius number ≤ `frob_max`. Frob grows along tree edges, so the
/// Frobenius bound prunes whole subtrees.
pub fn walk_tree(gmax: usize, frob_max: Option<i64>, visit: &mut dyn FnMut(&NumericalSemigroup)) {
    fn go(s: &NumericalSemigroup, gmax: usize, fmax: i64, visit: &mut dyn FnMut(&NumericalSemigroup)) {
        visit(s);
        if s.genus() == gmax {
            return;
        }
        for c in tree_children(s) {
            if c.frobenius() <= fmax {
                go(&c, gmax, fmax, visit);
            }
        }
    }
    go(&NumericalSemigroup::naturals(), gmax, frob_max.unwrap_or(i64::MAX), visit);
}

pub fn enumerate_by_genus(gmax: usize, visit: &mut dyn FnMut(&NumericalSemigroup)) {
    walk_tree(gmax, None, visit)
}

/// Parallel fold over the tree. `fold` and `reduce` must form a commutative
/// monoid with `identity` for the result to be independent of scheduling.
pub fn par_fold_tree<T, I, F, R>(gmax: usize, frob_max: Option<i64>, identity: I, fold: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(T, &NumericalSemigroup) -> T + Sync,
    R: Fn(T, T) -> T + Sync,
{
    struct Ctx<'a, T, I, F, R> {
        gmax: usize,
        fmax: i64,
        identity: &'a I,
        fold: &'a F,
        reduce: &'a R,
        _t: std::marker::PhantomData<fn() -> T>,
    }
    fn go<T: Send, I, F, R>(s: &NumericalSemigroup, cx: &Ctx<'_, T, I, F, R>) -> T
    where
        I: Fn() -> T + Sync,
        F: Fn(T, &NumericalSemigroup) -> T + Sync,
        R: Fn(T, T) -> T + Sync,
    {
        let here = (cx.fold)((cx.identity)(), s);
        if s.genus() == cx.gmax {
            return here;
        }
        let kids: Vec<NumericalSemigroup> =
            tree_children(s).into_iter().filter(|c| c.frobenius() <= cx.fmax).collect();
        // shallow remaining depth is cheaper to run inline
        let below = if cx.gmax - s.genus() <= 3 {
            kids.iter().fold((cx.identity)(), |acc, c| (cx.reduce)(acc, go(c, cx)))
        } else {
            kids.par_iter().map(|c| go(c, cx)).reduce(cx.identity, cx.reduce)
        };
        (cx.reduce)(here, below)
    }
    let cx = Ctx {
        gmax,
        fmax: frob_max.unwrap_or(i64::MAX),
        identity: &identity,
        fold: &fold,
        reduce: &reduce,
        _t: std::marker::PhantomData,
    };
    go(&NumericalSemigroup::naturals(), &cx)
}

/// Per-genus counts `n_0..=n_gmax` from the tree, in parallel.
pub fn genus_counts(gmax: usize) -> Vec<u64> {
    par_fold_tree(
        gmax,
        None,
        || vec![0u64; gmax + 1],
        |mut acc, s| {
            acc[s.genus()] += 1;
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// Independent oracle: per-genus counts by testing every `g`-subset of
/// `[1, 2g − 1]` for closure of its complement.
pub fn genus_counts_brute(gmax: usize) -> Vec<u64> {
    (0..=gmax)
        .map(|g| {
            if g == 0 {
                return 1;
            }
            let top = 2 * g - 1;
            let mut count = 0;
            let mut subset: Vec<usize> = (1..=g).collect();
            loop {
                let mut gap = vec![false; top + 1];
                for &x in &subset {
                    gap[x] = true;
                }
                let closed = (1..=top).all(|a| {
                    gap[a] || (a..=top - a).all(|b| gap[b] || !gap[a + b])
                });
                count += closed as u64;
                // next combination in lexicographic order
                let mut i = g;
                while i > 0 && subset[i - 1] == top - (g - i) {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                subset[i - 1] += 1;
                for k in i..g {
                    subset[k] = subset[k - 1] + 1;
                }
            }
            count
        })
        .collect()
}

/// Every symmetric semigroup with Frobenius number `f`.
///
/// With `h = (f − 1)/2`, the set `A = Γ ∩ [1, h]` determines Γ: `x ∈ (h, f)`
/// is in Γ iff `f − x ∉ A`. Closure holds iff sums within `A` that stay
/// `≤ h` are in `A`, and no three elements of `A` add up to `f`.
pub fn symmetric_with_frobenius(f: i64, visit: &mut dyn FnMut(&NumericalSemigroup)) {
    if f == -1 {
        visit(&NumericalSemigroup::naturals());
        return;
    }
    if f < 1 || f % 2 == 0 {
        return;
    }
    let f = f as usize;
    let h = (f - 1) / 2;
    let mut in_a = vec![false; h + 1];
    fn dfs(x: usize, h: usize, f: usize, in_a: &mut Vec<bool>, visit: &mut dyn FnMut(&NumericalSemigroup)) {
        if x > h {
            let mut gaps = FixedBitSet::with_capacity(f + 1);
            for y in 1..=f {
                let member = if y <= h { in_a[y] } else if y < f { !in_a[f - y] } else { false };
                if !member {
                    gaps.insert(y);
                }
            }
            visit(&NumericalSemigroup::from_gap_bitset(f as i64, gaps));
            return;
        }
        let forced = (1..x).any(|a| in_a[a] && in_a[x - a]);
        // adding x: no a + b + x = f with a, b ∈ A ∪ {x}
        let can_add = {
            in_a[x] = true;
            let ok = (1..=h).filter(|&a| in_a[a]).all(|a| {
                let rest = f as i64 - x as i64 - a as i64;
                !(rest >= 1 && rest as usize <= h && in_a[rest as usize])
            });
            in_a[x] = false;
            ok
        };
        if can_add {
            in_a[x] = true;
            dfs(x + 1, h, f, in_a, visit);
            in_a[x] = false;
        }
        if !forced {
            dfs(x + 1, h, f, in_a, visit);
        }
    }
    dfs(1, h, f, &mut in_a, visit);
}

/// Symmetric semigroups with Frobenius number ≤ `frob_max`, including ℕ.
pub fn symmetric_up_to(frob_max: i64, visit: &mut dyn FnMut(&NumericalSemigroup)) {
    for f in (-1..=frob_max).filter(|f| *f == -1 || f % 2 == 1) {
        symmetric_with_frobenius(f, visit);
    }
}

/// Filters for bounded enumeration. At least one of `frob_max`, `gen_max`,
/// `genus_max` must be set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Filter {
    pub edim: Option<usize>,
    pub mult: Option<u64>,
    pub width: Option<u64>,
    pub frob_max: Option<i64>,
    pub gen_max: Option<u64>,
    pub genus_max: Option<usize>,
}

impl Filter {
    pub fn accepts(&self, s: &NumericalSemigroup) -> bool {
        self.edim.is_none_or(|e| s.edim() == e)
            && self.mult.is_none_or(|m| s.multiplicity() == m)
            && self.width.is_none_or(|w| s.width() == w)
            && self.frob_max.is_none_or(|f| s.frobenius() <= f)
            && self.gen_max.is_none_or(|g| *s.generators().last().unwrap() <= g)
            && self.genus_max.is_none_or(|g| s.genus() <= g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    pub visited: usize,
    pub strategy: &'static str,
    pub marker: &'static str,
}

/// All semigroups passing `filter`, each visited once.
pub fn enumerate_filtered(
    filter: &Filter,
    visit: &mut dyn FnMut(&NumericalSemigroup),
) -> Result<EnumerationSummary> {
    let mut visited = 0;
    let mut counted = |s: &NumericalSemigroup| {
        if filter.accepts(s) {
            visited += 1;
            visit(s);
        }
    };
    let strategy = if let Some(g) = filter.genus_max {
        walk_tree(g, filter.frob_max, &mut counted);
        "genus tree"
    } else if filter.gen_max.is_some() || (filter.edim.is_some() && filter.frob_max.is_some()) {
        generator_search(filter, &mut counted);
        "generator search"
    } else if let Some(f) = filter.frob_max {
        walk_tree(usize::MAX, Some(f), &mut counted);
        "Frobenius-pruned tree"
    } else {
        return Err(Error::InvalidInput(
            "enumeration needs one of frob_max, gen_max, genus_max".into(),
        ));
    };
    Ok(EnumerationSummary {
        visited,
        strategy,
        marker: BOUNDED_MARKER,
    })
}

/// Depth-first search over minimal generating sets `g_1 < g_2 < …`.
///
/// Bounds: `g_1 ≤ Frob + 1` and every minimal generator is at most
/// `Frob + g_1`. Pruning: the Apéry set of `g_1` has `g_1` distinct
/// elements, all `≤ Frob + g_1` and all sums of `g_2, …, g_e`; the number
/// of such sums is at most the number of multisets of the chosen
/// generators plus the smallest possible values of the unchosen ones.
fn generator_search(filter: &Filter, visit: &mut dyn FnMut(&NumericalSemigroup)) {
    let fmax = filter.frob_max.unwrap_or(i64::MAX);
    let gen_cap = filter.gen_max.unwrap_or(u64::MAX);
    if filter.edim.is_none_or(|e| e == 1) && filter.mult.is_none_or(|m| m == 1) {
        visit(&NumericalSemigroup::naturals());
    }
    let g1_max = (fmax.saturating_add(1) as u64).min(gen_cap);
    let g1_range: Vec<u64> = match filter.mult {
        Some(m) => vec![m],
        None => (2..=g1_max).collect(),
    };
    for g1 in g1_range {
        if g1 < 2 || g1 > g1_max {
            continue;
        }
        let mut bound = gen_cap.min((fmax as u64).saturating_add(g1));
        if let Some(w) = filter.width {
            bound = bound.min(g1 + w);
        }
        let mut st = GenState {
            filter,
            fmax,
            bound,
            gens: vec![g1],
            reach: vec![false; bound as usize + 1],
        };
        st.reach[0] = true;
        for n in (g1 as usize..=bound as usize).step_by(g1 as usize) {
            st.reach[n] = true;
        }
        st.extend(visit);
    }
}

struct GenState<'a> {
    filter: &'a Filter,
    fmax: i64,
    bound: u64,
    gens: Vec<u64>,
    /// `reach[n]`: n is a sum of the chosen generators
    reach: Vec<bool>,
}

impl GenState<'_> {
    fn emit(&self, visit: &mut dyn FnMut(&NumericalSemigroup)) {
        let g = self.gens.iter().fold(0u64, |a, &x| a.gcd(&x));
        if g != 1 {
            return;
        }
        if let Some(w) = self.filter.width {
            if self.gens.last().unwrap() - self.gens[0] != w {
                return;
            }
        }
        let s = NumericalSemigroup::from_generators(&self.gens).expect("gcd 1");
        if s.frobenius() <= self.fmax {
            visit(&s);
        }
    }

    /// Upper bound on the number of elements representable without `g_1`
    /// and `≤ bound`, assuming `extra` more generators just above the last.
    fn enough_room(&self, extra: usize) -> bool {
        let g1 = self.gens[0];
        let last = *self.gens.last().unwrap();
        let mut coins: Vec<u64> = self.gens[1..].to_vec();
        coins.extend((1..=extra as u64).map(|k| last + k));
        let b = self.bound as usize;
        let mut ways = vec![0u64; b + 1];
        ways[0] = 1;
        for &c in &coins {
            for n in c as usize..=b {
                ways[n] = (ways[n] + ways[n - c as usize]).min(g1);
            }
        }
        ways.iter().fold(0u64, |a, &w| (a + w).min(g1)) >= g1
    }

    fn extend(&mut self, visit: &mut dyn FnMut(&NumericalSemigroup)) {
        let k = self.gens.len();
        let target = self.filter.edim;
        if target.is_none_or(|e| e == k) && k >= 2 {
            self.emit(visit);
        }
        if target.is_some_and(|e| k >= e) {
            return;
        }
        let remaining = target.map_or(1, |e| e - k);
        if !self.enough_room(remaining) && target.is_some() {
            return;
        }
        let last = *self.gens.last().unwrap();
        for g in last + 1..=self.bound {
            if self.reach[g as usize] {
                continue;
            }
            // with g and the rest still to come, is there room?
            self.gens.push(g);
            if target.is_some() && !self.enough_room(remaining - 1) {
                self.gens.pop();
                // larger g only shrinks the count
                break;
            }
            let saved = self.reach.clone();
            for n in g as usize..=self.bound as usize {
                if self.reach[n - g as usize] {
                    self.reach[n] = true;
                }
            }
            self.extend(visit);
            self.reach = saved;
            self.gens.pop();
        }
    }
}

/// Largest starting multiplicity for [`random_semigroups`].
pub const RANDOM_MULT_MAX: u64 = 16;

/// Semigroups reached by random walks down the tree. Each walk starts at an
/// ordinary semigroup `⟨m, …, 2m − 1⟩` with `m` uniform in
/// `1..=min(gmax + 1, RANDOM_MULT_MAX)`, whose subtree holds every semigroup
/// of multiplicity `m`, and stops at a target genus drawn uniformly from what
/// is left. Deterministic for a given seed.
pub fn random_semigroups(count: usize, gmax: usize, seed: u64) -> Vec<NumericalSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.gen_range(1..=(gmax as u64 + 1).min(RANDOM_MULT_MAX));
        let mut s = NumericalSemigroup::from_generators(&(m..2 * m).collect::<Vec<_>>())
            .expect("consecutive generators");
        let target = rng.gen_range(s.genus()..=gmax);
        while s.genus() < target {
            // removing the multiplicity would leave the subtree
            let kids: Vec<_> = tree_children(&s)
                .into_iter()
                .filter(|c| c.multiplicity() == m)
                .collect();
            if kids.is_empty() {
                break;
            }
            let pick = rng.gen_range(0..kids.len());
            s = kids.into_iter().nth(pick).unwrap();
        }
        if s.genus() == target {
            out.push(s);
        }
    }
    out
}
