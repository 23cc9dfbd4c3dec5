//! Per-semigroup conjecture checks. Each returns a [`CheckReport`]; a fail
//! verdict always carries the generators, so it can be replayed.

use std::sync::{Arc, Mutex};

use serde_json::json;

use crate::classify::{
    ci_structure_checks, gluing_decomposition, semigroup_polynomial, CyclotomicFactors,
    CyclotomicTester, IntegerPolynomial, GLUING_EDIM_LIMIT,
};
use crate::error::{Error, Result};
use crate::factorization::{betti_elements, rho};
use crate::lab::rf::rf_relation_check;
use crate::report::{CheckReport, Verdict};
use crate::resolution::binomial;
use crate::semigroup::NumericalSemigroup;
use crate::tangent_cone::{is_hf_nondecreasing, width_checks_g};

/// Names accepted by [`run_check`].
pub const CHECK_NAMES: [&str; 8] =
    ["wilf", "weak_wilf", "width_r", "width_g", "cyclo_ci", "rossi", "rf", "ci_structure"];

/// Canonical check name; dashes and underscores are ignored, so `widthr`,
/// `width-r` and `width_r` all match.
pub fn canonical_check_name(name: &str) -> Option<&'static str> {
    let squash = |s: &str| s.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_lowercase();
    let want = squash(name);
    CHECK_NAMES.iter().copied().find(|c| squash(c) == want)
}

pub fn run_check(name: &str, s: &NumericalSemigroup) -> Result<CheckReport> {
    match canonical_check_name(name) {
        Some("wilf") => Ok(check_wilf(s)),
        Some("weak_wilf") => check_weak_wilf(s),
        Some("width_r") => check_width_r(s),
        Some("width_g") => width_checks_g(s),
        Some("cyclo_ci") => check_cyclotomic_ci(s),
        Some("rossi") => check_rossi(s),
        Some("rf") => rf_relation_check(s),
        Some("ci_structure") => ci_structure_checks(s),
        _ => Err(Error::InvalidInput(format!(
            "unknown check {name:?}; expected one of {}",
            CHECK_NAMES.join(", ")
        ))),
    }
}

/// `Frob < edim · η`. Passes without counting when `Frob < 3·mult`, a
/// regime where the inequality is known to hold.
pub fn check_wilf(s: &NumericalSemigroup) -> CheckReport {
    let (f, e) = (s.frobenius(), s.edim() as i64);
    if f < 3 * s.multiplicity() as i64 {
        return CheckReport::new("wilf", s, Verdict::Pass, json!({"frob": f, "edim": e, "fast_path": true}));
    }
    let eta = s.eta() as i64;
    CheckReport::new(
        "wilf",
        s,
        Verdict::from_bool(f < e * eta),
        json!({"frob": f, "edim": e, "eta": eta, "fast_path": false}),
    )
}

/// Every Betti degree is at most `edim·(η − 1) + Σ g_i + 1`.
pub fn check_weak_wilf(s: &NumericalSemigroup) -> Result<CheckReport> {
    let bound = s.edim() as i64 * (s.eta() as i64 - 1) + s.generator_sum() as i64 + 1;
    let max_degree = betti_elements(s)?.keys().next_back().map(|&d| d as i64);
    let ok = max_degree.is_none_or(|d| d <= bound);
    Ok(CheckReport::new(
        "weak_wilf",
        s,
        Verdict::from_bool(ok),
        json!({"max_betti_degree": max_degree, "bound": bound}),
    ))
}

/// `ρ ≤ C(width + 1, 2)`.
pub fn check_width_r(s: &NumericalSemigroup) -> Result<CheckReport> {
    let r = rho(s)?;
    let bound = binomial(s.width() + 1, 2);
    Ok(CheckReport::new(
        "width_r",
        s,
        Verdict::from_bool(r as u128 <= bound),
        json!({"rho": r, "width": s.width(), "bound": bound as u64}),
    ))
}

/// Shared tester, grown on demand; building one is far costlier than a test.
fn shared_tester(degree: usize) -> Arc<CyclotomicTester> {
    static CACHE: Mutex<Option<(usize, Arc<CyclotomicTester>)>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    match &*guard {
        Some((d, t)) if *d >= degree => t.clone(),
        old => {
            let d = degree.max(old.as_ref().map_or(0, |(d, _)| 2 * d)).max(16);
            let t = Arc::new(CyclotomicTester::new(d));
            *guard = Some((d, t.clone()));
            t
        }
    }
}

pub fn cyclotomic_factors(p: &IntegerPolynomial) -> Result<CyclotomicFactors> {
    shared_tester(p.degree().unwrap_or(0)).test(p)
}

/// Complete intersections have cyclotomic `P_Γ` (known); the converse is
/// the conjecture. CI status comes from gluing and from `ρ = edim − 1`,
/// which must agree.
pub fn check_cyclotomic_ci(s: &NumericalSemigroup) -> Result<CheckReport> {
    let p = semigroup_polynomial(s);
    let cyc = cyclotomic_factors(&p)?;
    let ci_rho = rho(s)? == s.edim() - 1;
    if s.edim() <= GLUING_EDIM_LIMIT {
        let ci_glue = gluing_decomposition(s)?.is_some();
        if ci_glue != ci_rho {
            return Err(Error::Consistency(format!(
                "{s:?}: gluing says CI = {ci_glue}, presentation says {ci_rho}"
            )));
        }
    }
    let forward = !ci_rho || cyc.cyclotomic;
    let reverse = !cyc.cyclotomic || ci_rho;
    Ok(CheckReport::new(
        "cyclo_ci",
        s,
        Verdict::from_bool(forward && reverse),
        json!({
            "ci": ci_rho,
            "cyclotomic": cyc.cyclotomic,
            "factors": cyc.factors,
            "forward_ok": forward,
            "reverse_ok": reverse,
        }),
    ))
}

/// Non-decreasing Hilbert function of the tangent cone. The open question
/// concerns complete intersections, so only they can fail; for the rest
/// the monotonicity is recorded in the payload.
pub fn check_rossi(s: &NumericalSemigroup) -> Result<CheckReport> {
    let hf = is_hf_nondecreasing(s)?;
    let ci = rho(s)? == s.edim() - 1;
    Ok(CheckReport::new(
        "rossi",
        s,
        Verdict::from_bool(!ci || hf.nondecreasing),
        json!({
            "ci": ci,
            "nondecreasing": hf.nondecreasing,
            "violation_at": hf.violation_at,
            "hf": hf.values,
        }),
    ))
}
