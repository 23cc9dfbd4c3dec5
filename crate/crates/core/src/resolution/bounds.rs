//! Macaulay operators and the closed-form bounds built from them.

use crate::error::{Error, Result};

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c·(n−i)/(i+1) stays integral at every step
        match c.checked_mul((n - i) as u128) {
            Some(v) => c = v / (i + 1) as u128,
            None => return u128::MAX,
        }
    }
    c
}

/// The d-th binomial expansion `n = C(n_d, d) + … + C(n_j, j)` with
/// `n_d > … > n_j ≥ j ≥ 1`, as `(n_k, k)` pairs from `k = d` down.
pub fn binomial_expansion(n: u64, d: u64) -> Vec<(u64, u64)> {
    let mut rest = n as u128;
    let mut out = Vec::new();
    let mut k = d;
    while rest > 0 && k >= 1 {
        // largest t with C(t, k) ≤ rest; C(t, k) ≥ t − k + 1 bounds the search
        let (mut lo, mut hi) = (k, k + rest as u64);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if binomial(mid, k) <= rest {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        out.push((lo, k));
        rest -= binomial(lo, k);
        k -= 1;
    }
    out
}

/// `n^⟨d⟩ = Σ C(n_k + 1, k + 1)`.
pub fn macaulay_upper(n: u64, d: u64) -> u128 {
    binomial_expansion(n, d)
        .into_iter()
        .map(|(nk, k)| binomial(nk + 1, k + 1))
        .sum()
}

/// `n_⟨d⟩ = Σ C(n_k − 1, k)`.
pub fn macaulay_lower(n: u64, d: u64) -> u128 {
    binomial_expansion(n, d)
        .into_iter()
        .map(|(nk, k)| binomial(nk - 1, k))
        .sum()
}

/// `(r, s)` with `C(e+r−1, r−1) ≤ m < C(e+r, r)` and `s = m − C(e+r−1, r−1)`.
pub fn r_s(e: u64, m: u64) -> (u64, u64) {
    let mut r = 1;
    loop {
        let lo = binomial(e + r - 1, r - 1);
        if (m as u128) < binomial(e + r, r) {
            return (r, (m as u128 - lo) as u64);
        }
        r += 1;
    }
}

fn check_range(e: u64, m: u64) -> Result<()> {
    if e < 3 || e >= m {
        return Err(Error::InvalidInput(format!("bound needs 3 ≤ e < m, got e={e}, m={m}")));
    }
    Ok(())
}

/// `C(e,m) = C(e+r−1, r) + s^⟨r⟩ − s`.
pub fn bound_c(e: u64, m: u64) -> Result<u128> {
    check_range(e, m)?;
    let (r, s) = r_s(e, m);
    Ok(binomial(e + r - 1, r) + macaulay_upper(s, r) - s as u128)
}

/// `D(e,m) = C(e+r−2, r−1) + s_⟨r⟩`.
pub fn bound_d(e: u64, m: u64) -> Result<u128> {
    check_range(e, m)?;
    let (r, s) = r_s(e, m);
    Ok(binomial(e + r - 2, r - 1) + macaulay_lower(s, r))
}

/// `i·C(m, i+1)`, the largest possible `b_i` at multiplicity `m`.
pub fn max_betti_bound(i: u64, m: u64) -> Result<u128> {
    if i < 1 || i + 1 > m {
        return Err(Error::InvalidInput(format!("need 1 ≤ i ≤ m−1, got i={i}, m={m}")));
    }
    Ok(i as u128 * binomial(m, i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn macaulay_pins() {
        assert_eq!(binomial_expansion(5, 2), vec![(3, 2), (2, 1)]);
        assert_eq!(macaulay_upper(5, 2), 7);
        assert_eq!(macaulay_lower(5, 2), 2);
        assert_eq!(macaulay_upper(0, 3), 0);
        assert_eq!(macaulay_lower(0, 3), 0);
    }

    #[test]
    fn expansion_reconstructs_n() {
        for d in 1..6 {
            for n in 0..500u64 {
                let exp = binomial_expansion(n, d);
                let total: u128 = exp.iter().map(|&(nk, k)| binomial(nk, k)).sum();
                assert_eq!(total, n as u128);
                assert!(exp.windows(2).all(|w| w[0].0 > w[1].0));
                assert!(exp.iter().all(|&(nk, k)| nk >= k));
            }
        }
    }

    #[test]
    fn bound_pins() {
        assert_eq!(r_s(3, 4), (2, 0));
        assert_eq!(bound_c(3, 4).unwrap(), 6);
        assert_eq!(bound_d(3, 4).unwrap(), 3);
        for e in 3..20 {
            assert_eq!(bound_c(e, e + 1).unwrap(), binomial(e + 1, 2));
            assert_eq!(bound_d(e, e + 1).unwrap(), e as u128);
        }
        assert!(bound_c(2, 5).is_err());
        assert!(bound_d(4, 4).is_err());
    }

    #[test]
    fn max_betti_pins() {
        assert_eq!(max_betti_bound(1, 5).unwrap(), 10);
        assert_eq!(max_betti_bound(3, 4).unwrap(), 3);
        for m in 2..12 {
            assert_eq!(max_betti_bound(m - 1, m).unwrap(), (m - 1) as u128);
        }
        assert!(max_betti_bound(4, 4).is_err());
    }
}
