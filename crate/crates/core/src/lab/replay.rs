//! Invariant snapshots for persisted witnesses, and recomputation of a
//! stored report from its generators.

use serde_json::{json, Map, Value};

use crate::classify::{gluing_decomposition, semigroup_polynomial, GLUING_EDIM_LIMIT};
use crate::error::{Error, Result};
use crate::factorization::minimal_presentation;
use crate::lab::checks::{canonical_check_name, cyclotomic_factors, run_check};
use crate::lab::search::{replay_witness, SearchBounds, Target};
use crate::lab::suites::Suite;
use crate::report::CheckReport;
use crate::resolution::graded_betti;
use crate::semigroup::NumericalSemigroup;
use crate::tangent_cone::{b1_g, is_hf_nondecreasing};

/// A resource limit becomes part of the record instead of aborting it;
/// any other error is returned.
fn or_limit<T: serde::Serialize>(r: Result<T>) -> Result<Value> {
    match r {
        Ok(v) => Ok(serde_json::to_value(v).expect("serializable")),
        Err(e @ Error::ResourceLimit { .. }) => Ok(json!({ "resource_limit": e.to_string() })),
        Err(e) => Err(e),
    }
}

/// Everything recomputable from the generators, for the given
/// characteristics. Deterministic: equal inputs give equal values.
pub fn invariant_snapshot(s: &NumericalSemigroup, chars: &[u32]) -> Result<Value> {
    let presentation = minimal_presentation(s)?;
    let mut betti = Map::new();
    for &c in chars {
        betti.insert(c.to_string(), or_limit(graded_betti(s, c))?);
    }
    let p = semigroup_polynomial(s);
    let ci = presentation.rho() + 1 == s.edim();
    let gluing = if s.edim() <= GLUING_EDIM_LIMIT {
        serde_json::to_value(gluing_decomposition(s)?).expect("serializable")
    } else {
        Value::Null
    };
    Ok(json!({
        "gens": s.generators(),
        "invariants": s.invariants(),
        "pseudo_frobenius": s.pseudo_frobenius_or_empty().0,
        "apery": s.apery_set(s.multiplicity())?.residues,
        "flags": {
            "symmetric": s.is_symmetric(),
            "almost_symmetric": s.is_almost_symmetric(),
            "nearly_gorenstein": s.is_nearly_gorenstein(),
            "canonical_reduction": s.has_canonical_reduction(),
            "max_edim": s.is_max_edim(),
            "arithmetic_sequence": s.is_arithmetic_sequence(),
            "complete_intersection": ci,
        },
        "rho": presentation.rho(),
        "presentation": presentation,
        "gluing": gluing,
        "betti": betti,
        "hilbert_function_g": or_limit(is_hf_nondecreasing(s))?,
        "b1_g": or_limit(b1_g(s, None))?,
        "polynomial": p.to_string(),
        "cyclotomic": cyclotomic_factors(&p)?,
    }))
}

/// Recomputes a stored report from its generators: per-semigroup checks,
/// theorem-suite checks and search witnesses.
pub fn recompute(report: &CheckReport) -> Result<CheckReport> {
    let s = report.semigroup()?;
    let check = report.check.as_str();
    if let Some(letter) = check.strip_prefix("search:") {
        let target: Target = serde_json::from_value(report.data["target_params"].clone())
            .map_err(|e| Error::InvalidInput(format!("search record {letter} without parameters: {e}")))?;
        let bounds: SearchBounds = serde_json::from_value(report.data["bounds"].clone())
            .map_err(|e| Error::InvalidInput(format!("search record without bounds: {e}")))?;
        return replay_witness(&target, &s, &bounds);
    }
    if canonical_check_name(check).is_some() {
        return run_check(check, &s);
    }
    if let Ok(suite) = check.parse::<Suite>() {
        return suite.check(&s);
    }
    Err(Error::InvalidInput(format!("cannot replay check {check:?}")))
}

/// JSON paths where `a` and `b` differ.
pub fn json_diff(a: &Value, b: &Value) -> Vec<String> {
    fn go(a: &Value, b: &Value, path: String, out: &mut Vec<String>) {
        match (a, b) {
            (Value::Object(x), Value::Object(y)) => {
                let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
                for k in keys {
                    let sub = format!("{path}.{k}");
                    match (x.get(k), y.get(k)) {
                        (Some(u), Some(v)) => go(u, v, sub, out),
                        _ => out.push(sub),
                    }
                }
            }
            (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
                for (i, (u, v)) in x.iter().zip(y).enumerate() {
                    go(u, v, format!("{path}[{i}]"), out);
                }
            }
            _ if a != b => out.push(if path.is_empty() { "$".into() } else { path }),
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(a, b, String::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::search::search_supremum;
    use crate::report::Verdict;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn snapshot_is_deterministic() {
        let s = sg(&[4, 6, 9]);
        let a = invariant_snapshot(&s, &[0, 2]).unwrap();
        assert_eq!(a, invariant_snapshot(&s, &[0, 2]).unwrap());
        assert_eq!(a["flags"]["complete_intersection"], true);
        assert_eq!(a["betti"]["0"]["totals"], json!([1, 2, 1]));
        assert_eq!(a["rho"], 2);
        let n = invariant_snapshot(&NumericalSemigroup::naturals(), &[0]).unwrap();
        assert_eq!(n["invariants"]["frobenius"], -1);
    }

    #[test]
    fn reports_replay_identically() {
        let s = sg(&[5, 7, 9]);
        for name in ["wilf", "weak_wilf", "rf", "cyclo_ci"] {
            let r = run_check(name, &s).unwrap();
            assert_eq!(recompute(&r).unwrap(), r);
        }
        let r = Suite::Herzog.check(&s).unwrap();
        assert_eq!(recompute(&r).unwrap(), r);
        let out = search_supremum(Target::A { e: 4 }, &SearchBounds { frob_max: Some(20), ..Default::default() }).unwrap();
        let best = out.best.unwrap();
        assert_eq!(recompute(&best).unwrap(), best);
        let bogus = CheckReport::new("nope", &s, Verdict::Pass, json!({}));
        assert!(recompute(&bogus).is_err());
    }

    #[test]
    fn diff_paths() {
        let a = json!({"x": [1, 2], "y": {"z": 1}});
        let b = json!({"x": [1, 3], "y": {"z": 1, "w": 0}});
        assert_eq!(json_diff(&a, &b), vec![".x[1]", ".y.w"]);
        assert!(json_diff(&a, &a).is_empty());
    }
}
