//! Known theorems run over bounded families. These are theorems, so a fail
//! here means a defect in this crate, and the suite stops at the first one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factorization::rho;
use crate::lab::enumerate::{enumerate_filtered, symmetric_up_to, Filter, BOUNDED_MARKER};
use crate::report::{CheckReport, Verdict};
use crate::resolution::{binomial, bound_c, bound_d, graded_betti, graded_betti_simplicial};
use crate::semigroup::NumericalSemigroup;

/// Finite bounds for a suite or search. At least one must be set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub frob_max: Option<i64>,
    pub genus_max: Option<usize>,
}

impl Bounds {
    pub fn frob(f: i64) -> Self {
        Bounds { frob_max: Some(f), genus_max: None }
    }

    pub fn genus(g: usize) -> Self {
        Bounds { frob_max: None, genus_max: Some(g) }
    }

    fn require(&self) -> Result<()> {
        if self.frob_max.is_none() && self.genus_max.is_none() {
            return Err(Error::InvalidInput("bounds need frob_max or genus_max".into()));
        }
        Ok(())
    }

    fn admits(&self, s: &NumericalSemigroup) -> bool {
        self.frob_max.is_none_or(|f| s.frobenius() <= f) && self.genus_max.is_none_or(|g| s.genus() <= g)
    }

    /// Frobenius bound implied for symmetric (and almost symmetric)
    /// semigroups, where `Frob ≤ 2·genus − 1`.
    fn symmetric_frob_max(&self) -> i64 {
        let from_genus = self.genus_max.map_or(i64::MAX, |g| 2 * g as i64 - 1);
        self.frob_max.unwrap_or(i64::MAX).min(from_genus)
    }
}

/// All symmetric semigroups within bounds with the given edim, in
/// increasing Frobenius order.
pub fn symmetric_family(edim: Option<usize>, bounds: &Bounds) -> Result<Vec<NumericalSemigroup>> {
    bounds.require()?;
    let mut out = Vec::new();
    symmetric_up_to(bounds.symmetric_frob_max(), &mut |s| {
        if edim.is_none_or(|e| s.edim() == e) && bounds.admits(s) {
            out.push(s.clone());
        }
    });
    Ok(out)
}

/// All semigroups within bounds matching `edim`.
pub fn bounded_family(edim: Option<usize>, bounds: &Bounds) -> Result<Vec<NumericalSemigroup>> {
    bounds.require()?;
    let filter = Filter {
        edim,
        frob_max: bounds.frob_max,
        genus_max: bounds.genus_max,
        ..Default::default()
    };
    let mut out = Vec::new();
    enumerate_filtered(&filter, &mut |s| out.push(s.clone()))?;
    Ok(out)
}

/// Four distinct indices with `g_i + g_j = g_h + g_k`.
pub fn has_sum_pattern(gens: &[u64]) -> bool {
    let mut sums: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            sums.entry(gens[i] + gens[j]).or_default().push((i, j));
        }
    }
    // two different pairs with the same sum are automatically disjoint
    sums.values().any(|pairs| pairs.len() >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Herzog,
    Bresinsky4,
    Bresinsky5,
    Etohw,
    Moscariello4,
    As5type,
    Ng4,
    Bresinsky88,
    RemTable,
    Erv,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Herzog,
        Suite::Bresinsky4,
        Suite::Bresinsky5,
        Suite::Etohw,
        Suite::Moscariello4,
        Suite::As5type,
        Suite::Ng4,
        Suite::Bresinsky88,
        Suite::RemTable,
        Suite::Erv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Herzog => "herzog",
            Suite::Bresinsky4 => "bresinsky4",
            Suite::Bresinsky5 => "bresinsky5",
            Suite::Etohw => "etohw",
            Suite::Moscariello4 => "moscariello4",
            Suite::As5type => "as5type",
            Suite::Ng4 => "ng4",
            Suite::Bresinsky88 => "bresinsky88",
            Suite::RemTable => "rem_table",
            Suite::Erv => "erv",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::Herzog => "edim 3: Betti totals (1,2,1) if symmetric, else (1,3,2)",
            Suite::Bresinsky4 => "symmetric, edim 4: rho in {3,5}",
            Suite::Bresinsky5 => "symmetric, edim 5, g_i+g_j = g_h+g_k: rho <= 13",
            Suite::Etohw => "almost symmetric, edim 4: rho <= 7",
            Suite::Moscariello4 => "almost symmetric, edim 4: type <= 3",
            Suite::As5type => "almost symmetric, edim 5: type <= 473",
            Suite::Ng4 => "nearly Gorenstein, edim 4: type <= 3",
            Suite::Bresinsky88 => "edim 4: rho <= 4 + 9 type",
            Suite::RemTable => "edim e+1, mult m, 3 <= e < m: rho <= C(e+1,2) + {0 if m-e<=3, 1 if 4,5, 2 if 6, 3 if m-e=7 and e<=5}",
            Suite::Erv => "edim e+1, mult m, 3 <= e < m: rho <= C(e,m), type <= D(e,m)",
        }
    }

    /// The bounded family the theorem speaks about.
    pub fn family(self, bounds: &Bounds) -> Result<Vec<NumericalSemigroup>> {
        let keep = |v: Vec<NumericalSemigroup>, p: &dyn Fn(&NumericalSemigroup) -> bool| {
            v.into_iter().filter(|s| p(s)).collect::<Vec<_>>()
        };
        Ok(match self {
            Suite::Herzog => bounded_family(Some(3), bounds)?,
            Suite::Bresinsky4 => symmetric_family(Some(4), bounds)?,
            Suite::Bresinsky5 => keep(symmetric_family(Some(5), bounds)?, &|s| has_sum_pattern(s.generators())),
            Suite::Etohw | Suite::Moscariello4 => keep(bounded_family(Some(4), bounds)?, &|s| s.is_almost_symmetric()),
            Suite::As5type => keep(bounded_family(Some(5), bounds)?, &|s| s.is_almost_symmetric()),
            Suite::Ng4 => keep(bounded_family(Some(4), bounds)?, &|s| s.is_nearly_gorenstein()),
            Suite::Bresinsky88 => bounded_family(Some(4), bounds)?,
            Suite::RemTable | Suite::Erv => keep(bounded_family(None, bounds)?, &|s| {
                let e = s.edim() as u64;
                e >= 4 && e - 1 < s.multiplicity()
            }),
        })
    }

    pub fn check(self, s: &NumericalSemigroup) -> Result<CheckReport> {
        let name = self.name();
        let report = |ok: bool, data: Value| Ok(CheckReport::new(name, s, Verdict::from_bool(ok), data));
        match self {
            Suite::Herzog => {
                let (sym, r, t) = (s.is_symmetric(), rho(s)?, s.type_());
                let expected = if sym { vec![1, 2, 1] } else { vec![1, 3, 2] };
                let koszul = graded_betti(s, 0)?.totals();
                let simplicial = graded_betti_simplicial(s, 0)?.totals();
                let ok = koszul == expected && simplicial == expected && [1, r, t] == expected[..];
                report(
                    ok,
                    json!({"symmetric": sym, "rho": r, "type": t, "koszul": koszul, "simplicial": simplicial}),
                )
            }
            Suite::Bresinsky4 => {
                let r = rho(s)?;
                report(r == 3 || r == 5, json!({"class": "rho", "value": r}))
            }
            Suite::Bresinsky5 | Suite::Etohw => {
                let r = rho(s)?;
                let bound = if self == Suite::Bresinsky5 { 13 } else { 7 };
                report(r <= bound, json!({"class": "rho", "value": r, "bound": bound}))
            }
            Suite::Moscariello4 | Suite::As5type | Suite::Ng4 => {
                let t = s.type_();
                let bound = if self == Suite::As5type { 473 } else { 3 };
                report(t <= bound, json!({"class": "type", "value": t, "bound": bound}))
            }
            Suite::Bresinsky88 => {
                let (r, t) = (rho(s)?, s.type_());
                report(r <= 4 + 9 * t, json!({"class": format!("type={t}"), "value": r, "bound": 4 + 9 * t}))
            }
            Suite::RemTable => {
                let (e, m, r) = (s.edim() as u64 - 1, s.multiplicity(), rho(s)?);
                let base = binomial(e + 1, 2) as usize;
                let bound = match m - e {
                    0..=3 => Some(base),
                    4 | 5 => Some(base + 1),
                    6 => Some(base + 2),
                    7 if e <= 5 => Some(base + 3),
                    _ => None,
                };
                report(
                    bound.is_none_or(|b| r <= b),
                    json!({"class": format!("e={e},m={m}"), "value": r, "bound": bound}),
                )
            }
            Suite::Erv => {
                let (e, m) = (s.edim() as u64 - 1, s.multiplicity());
                let (r, t) = (rho(s)?, s.type_());
                let (c, d) = (bound_c(e, m)?, bound_d(e, m)?);
                report(
                    r as u128 <= c && t as u128 <= d,
                    json!({"class": format!("e={e},m={m}"), "value": r, "type": t, "bound_c": c as u64, "bound_d": d as u64}),
                )
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let want = s.replace('-', "_").to_lowercase();
        Suite::ALL.into_iter().find(|x| x.name() == want).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::InvalidInput(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    /// Aggregated report; `gens` holds the witness on failure, else empty.
    pub summary: CheckReport,
    pub witness: Option<CheckReport>,
}

/// Runs a suite over its bounded family in parallel. The witness is the
/// first failure in enumeration order, so it does not depend on scheduling.
pub fn verify_theorem_suite(suite: Suite, bounds: &Bounds) -> Result<SuiteOutcome> {
    let family = suite.family(bounds)?;
    let reports: Vec<CheckReport> = family.par_iter().map(|s| suite.check(s)).collect::<Result<_>>()?;
    let witness = reports.iter().find(|r| r.verdict == Verdict::Fail).cloned();
    let mut max_by_class: BTreeMap<String, u64> = BTreeMap::new();
    for r in &reports {
        if let (Some(c), Some(v)) = (r.data.get("class").and_then(Value::as_str), r.data["value"].as_u64()) {
            let e = max_by_class.entry(c.to_string()).or_insert(v);
            *e = (*e).max(v);
        }
    }
    let verdict = if witness.is_some() { Verdict::Fail } else { Verdict::Pass };
    let summary = CheckReport {
        check: format!("suite:{}", suite.name()),
        gens: witness.as_ref().map(|w| w.gens.clone()).unwrap_or_default(),
        verdict,
        data: json!({
            "statement": suite.statement(),
            "bounds": bounds,
            "checked": reports.len(),
            "max_by_class": max_by_class,
            "marker": BOUNDED_MARKER,
        }),
        timestamp: None,
    };
    Ok(SuiteOutcome { summary, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_pattern() {
        assert!(has_sum_pattern(&[19, 21, 22, 26, 27]));
        assert!(!has_sum_pattern(&[3, 4, 5]));
        // 2+6 = 4+4 reuses an index
        assert!(!has_sum_pattern(&[2, 4, 6]));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("rem-table".parse::<Suite>().unwrap(), Suite::RemTable);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for suite in Suite::ALL {
            let out = verify_theorem_suite(suite, &Bounds::frob(25)).unwrap();
            assert_eq!(out.summary.verdict, Verdict::Pass, "{suite}: {:?}", out.witness);
            assert!(out.summary.gens.is_empty());
        }
    }

    #[test]
    fn symmetric_families_agree_with_filtered_tree() {
        let fast: Vec<_> = symmetric_family(Some(4), &Bounds::genus(11)).unwrap();
        let slow: Vec<_> = bounded_family(Some(4), &Bounds::genus(11))
            .unwrap()
            .into_iter()
            .filter(|s| s.is_symmetric())
            .collect();
        let key = |v: &[NumericalSemigroup]| {
            let mut k: Vec<_> = v.iter().map(|s| s.generators().to_vec()).collect();
            k.sort();
            k
        };
        assert_eq!(key(&fast), key(&slow));
        assert!(!fast.is_empty());
    }

    #[test]
    fn unbounded_is_rejected() {
        assert!(verify_theorem_suite(Suite::Herzog, &Bounds::default()).is_err());
    }

    #[test]
    fn herzog_counts_both_kinds() {
        let out = verify_theorem_suite(Suite::Herzog, &Bounds::frob(20)).unwrap();
        assert!(out.summary.data["checked"].as_u64().unwrap() > 20);
    }
}
