//! Hilbert-series numerator, cyclotomic test and complete intersections.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde_json::json;

use crate::error::{Error, Result};
use crate::factorization::rho;
use crate::report::{CheckReport, Verdict};
use crate::resolution::{binomial, graded_betti};
use crate::semigroup::NumericalSemigroup;

/// Dense integer polynomial, index = exponent, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPolynomial(Vec<BigInt>);

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntegerPolynomial(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return IntegerPolynomial(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient by a monic divisor, or `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &[i64]) -> Option<Self> {
        let dd = divisor.len() - 1;
        debug_assert_eq!(divisor[dd], 1);
        if self.0.len() <= dd {
            return None;
        }
        let mut rem = self.0.clone();
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = rem[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (k, &dk) in divisor.iter().enumerate() {
                if dk != 0 {
                    rem[i + k] -= &c * dk;
                }
            }
            q[i] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    fn residue_at(&self, w: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        self.0.iter().rev().fold(0u64, |acc, c| {
            let c = c.mod_floor(&pb).to_u64().expect("reduced mod p");
            (acc * w + c) % p
        })
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            match (show_mag, i) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}z")?,
                (false, 1) => f.write_str("z")?,
                (true, _) => write!(f, "{mag}z^{i}")?,
                (false, _) => write!(f, "z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for IntegerPolynomial {
    /// Coefficient list; entries outside `i64` become decimal strings.
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

/// `P_Γ(z) = 1 + (z − 1)·Σ_{gaps} z^γ`, of degree `Frob + 1`.
pub fn semigroup_polynomial(s: &NumericalSemigroup) -> IntegerPolynomial {
    let deg = (s.frobenius() + 1) as usize;
    let mut c = vec![0i64; deg + 1];
    c[0] = 1;
    for g in s.gaps() {
        c[g as usize + 1] += 1;
        c[g as usize] -= 1;
    }
    IntegerPolynomial::from_i64(&c)
}

/// Result of cyclotomic peeling: the `d` of every `Φ_d` removed, ascending
/// and with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicFactors {
    pub cyclotomic: bool,
    pub factors: Vec<u64>,
}

impl Serialize for CyclotomicFactors {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let factors: Vec<_> = self.factors.iter().map(|d| json!({ "d": d })).collect();
        json!({ "cyclotomic": self.cyclotomic, "factors": factors }).serialize(ser)
    }
}

struct Candidate {
    d: u64,
    phi: usize,
    coeffs: Vec<i64>,
    /// prime `p ≡ 1 (mod d)` and an element of order exactly `d` mod `p`
    p: u64,
    omega: u64,
}

/// Precomputed `Φ_d` for every `d` with `φ(d) ≤ max_degree`. Reuse one
/// tester across many polynomials.
pub struct CyclotomicTester {
    max_degree: usize,
    candidates: Vec<Candidate>,
}

impl CyclotomicTester {
    pub fn new(max_degree: usize) -> Self {
        // φ(d) ≥ √(d/2), so φ(d) ≤ D forces d ≤ 2D²
        let limit = 2 * max_degree * max_degree + 6;
        let (phi, mu) = phi_mu_sieve(limit);
        let candidates = (1..=limit)
            .filter(|&d| phi[d] as usize <= max_degree)
            .map(|d| {
                let d = d as u64;
                let (p, omega) = root_of_unity_mod_prime(d);
                Candidate {
                    d,
                    phi: phi[d as usize] as usize,
                    coeffs: cyclotomic_coefficients(d, phi[d as usize] as usize, &mu),
                    p,
                    omega,
                }
            })
            .collect();
        CyclotomicTester {
            max_degree,
            candidates,
        }
    }

    /// `Φ_d` coefficients, if `φ(d)` is within range.
    pub fn cyclotomic(&self, d: u64) -> Option<&[i64]> {
        self.candidates.iter().find(|c| c.d == d).map(|c| c.coeffs.as_slice())
    }

    /// Peels `Φ_d` factors in ascending `d`. Each candidate is first screened
    /// by evaluating at a primitive `d`-th root of unity mod `p`, which must
    /// vanish when `Φ_d` divides; survivors get exact division.
    pub fn test(&self, poly: &IntegerPolynomial) -> Result<CyclotomicFactors> {
        let deg = poly.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
        if deg > self.max_degree {
            return Err(Error::InvalidInput(format!(
                "degree {deg} exceeds tester range {}",
                self.max_degree
            )));
        }
        if !poly.0[deg].is_one() || !poly.0[0].abs().is_one() {
            return Err(Error::InvalidInput("polynomial must be monic with P(0) = ±1".into()));
        }
        let mut rest = poly.clone();
        let mut factors = Vec::new();
        for c in &self.candidates {
            while c.phi <= rest.degree().unwrap() && rest.residue_at(c.omega, c.p) == 0 {
                match rest.div_exact_monic(&c.coeffs) {
                    Some(q) => {
                        rest = q;
                        factors.push(c.d);
                    }
                    None => break,
                }
            }
            if rest.is_one() {
                break;
            }
        }
        Ok(CyclotomicFactors {
            cyclotomic: rest.is_one(),
            factors,
        })
    }
}

pub fn is_cyclotomic(poly: &IntegerPolynomial) -> Result<CyclotomicFactors> {
    let deg = poly.degree().unwrap_or(0);
    CyclotomicTester::new(deg).test(poly)
}

fn phi_mu_sieve(limit: usize) -> (Vec<u64>, Vec<i8>) {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    let mut mu = vec![1i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for k in (p..=limit).step_by(p) {
            if k > p {
                composite[k] = true;
            }
            phi[k] -= phi[k] / p as u64;
            mu[k] = -mu[k];
        }
        for k in (p * p..=limit).step_by(p * p) {
            mu[k] = 0;
        }
    }
    (phi, mu)
}

/// `Φ_d = Π_{k|d} (1 − z^k)^{μ(d/k)}` for `d > 1`, as a power series
/// truncated at degree `φ(d)`, which is exact.
fn cyclotomic_coefficients(d: u64, phi: usize, mu: &[i8]) -> Vec<i64> {
    if d == 1 {
        return vec![-1, 1];
    }
    let mut c = vec![0i128; phi + 1];
    c[0] = 1;
    for k in (1..=d).filter(|k| d.is_multiple_of(*k)) {
        let k_us = k as usize;
        if k_us > phi {
            continue;
        }
        match mu[(d / k) as usize] {
            1 => {
                for i in (k_us..=phi).rev() {
                    c[i] -= c[i - k_us];
                }
            }
            -1 => {
                for i in k_us..=phi {
                    c[i] += c[i - k_us];
                }
            }
            _ => {}
        }
    }
    c.into_iter().map(|v| v as i64).collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime `p ≡ 1 (mod d)` above 2^20 (so products fit in `u64`) and an
/// element of multiplicative order exactly `d`.
fn root_of_unity_mod_prime(d: u64) -> (u64, u64) {
    let start = (1u64 << 20) / d + 1;
    let p = (start..).map(|k| k * d + 1).find(|&p| is_prime(p)).expect("Dirichlet");
    let qs = prime_factors(d);
    for g in 2..p {
        let w = pow_mod(g, (p - 1) / d, p);
        if qs.iter().all(|&q| pow_mod(w, d / q, p) != 1) {
            return (p, w);
        }
    }
    unreachable!("the multiplicative group mod p is cyclic")
}

/// `ρ(S) = edim − 1`. When true, the Betti totals are checked against
/// `C(e − 1, i)`.
pub fn is_complete_intersection(s: &NumericalSemigroup) -> Result<bool> {
    let e = s.edim();
    let ci = rho(s)? == e - 1;
    if ci {
        let totals = graded_betti(s, 0)?.totals();
        let expected: Vec<usize> = (0..e as u64).map(|i| binomial(e as u64 - 1, i) as usize).collect();
        if totals != expected {
            return Err(Error::Consistency(format!(
                "complete intersection {s:?} has Betti totals {totals:?}"
            )));
        }
    }
    Ok(ci)
}

/// A node `a·L + b·R` of a gluing tree; a leaf stands for ⟨1⟩.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GluingDecomposition {
    pub gens: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<Box<Gluing>>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Gluing {
    pub left_factor: u64,
    pub left: GluingDecomposition,
    pub right_factor: u64,
    pub right: GluingDecomposition,
}

impl GluingDecomposition {
    /// Generators obtained by multiplying out the tree.
    pub fn recombine(&self) -> Vec<u64> {
        let mut g = match &self.split {
            None => vec![1],
            Some(gl) => {
                let mut v: Vec<u64> = gl.left.recombine().iter().map(|x| x * gl.left_factor).collect();
                v.extend(gl.right.recombine().iter().map(|x| x * gl.right_factor));
                v
            }
        };
        g.sort_unstable();
        g
    }
}

pub const GLUING_EDIM_LIMIT: usize = 20;

/// Splits the minimal generators into `A ⊔ B` with `d_A = gcd A`,
/// `d_B = gcd B` such that `d_A ∈ ⟨B/d_B⟩` and `d_B ∈ ⟨A/d_A⟩`, then
/// recurses. A gluing adds exactly one relation to the presentations of
/// its parts, so `S` is a complete intersection iff both parts are, and
/// the first admissible split decides.
pub fn gluing_decomposition(s: &NumericalSemigroup) -> Result<Option<GluingDecomposition>> {
    let e = s.edim();
    if e > GLUING_EDIM_LIMIT {
        return Err(Error::limit("gluing search embedding dimension", GLUING_EDIM_LIMIT));
    }
    let gens = s.generators();
    if e == 1 {
        return Ok(Some(GluingDecomposition { gens: vec![1], split: None }));
    }
    // complete intersections satisfy mult ≥ 2^{e−1}
    if s.multiplicity() < 1 << (e - 1) {
        return Ok(None);
    }
    // A always holds g_1; mask selects the rest of A among g_2..g_e
    for mask in 0u64..(1 << (e - 1)) - 1 {
        let (mut a, mut b) = (vec![gens[0]], Vec::new());
        for (k, &g) in gens[1..].iter().enumerate() {
            if mask >> k & 1 == 1 { a.push(g) } else { b.push(g) }
        }
        let da = a.iter().fold(0, |acc, &x| acc.gcd(&x));
        let db = b.iter().fold(0, |acc, &x| acc.gcd(&x));
        let ta = NumericalSemigroup::from_generators(&a.iter().map(|x| x / da).collect::<Vec<_>>())?;
        let tb = NumericalSemigroup::from_generators(&b.iter().map(|x| x / db).collect::<Vec<_>>())?;
        if !(ta.contains(db as i64) && tb.contains(da as i64)) {
            continue;
        }
        return Ok(match (gluing_decomposition(&ta)?, gluing_decomposition(&tb)?) {
            (Some(left), Some(right)) => Some(GluingDecomposition {
                gens: gens.to_vec(),
                split: Some(Box::new(Gluing { left_factor: da, left, right_factor: db, right })),
            }),
            _ => None,
        });
    }
    Ok(None)
}

/// Whether some symmetric semigroup has embedding dimension `e` and
/// multiplicity `m`.
pub fn symmetric_pair_exists(e: u64, m: u64) -> bool {
    (2 <= e && e < m) || (e, m) == (1, 1) || (e, m) == (2, 2)
}

pub fn ci_structure_checks(s: &NumericalSemigroup) -> Result<CheckReport> {
    let ci = is_complete_intersection(s)?;
    let (e, m) = (s.edim() as u64, s.multiplicity());
    let mult_ok = !ci || m >= 1 << (e - 1);
    let symmetric = s.is_symmetric();
    let pair_ok = !symmetric || symmetric_pair_exists(e, m);
    Ok(CheckReport::new(
        "ci_structure",
        s,
        Verdict::from_bool(mult_ok && pair_ok),
        json!({
            "ci": ci,
            "edim": e,
            "mult": m,
            "mult_lower_bound": 1u64 << (e - 1),
            "symmetric": symmetric,
            "symmetric_pair_exists": symmetric_pair_exists(e, m),
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    fn poly(c: &[i64]) -> IntegerPolynomial {
        IntegerPolynomial::from_i64(c)
    }

    #[test]
    fn semigroup_polynomial_examples() {
        assert_eq!(semigroup_polynomial(&sg(&[2, 3])), poly(&[1, -1, 1]));
        assert_eq!(semigroup_polynomial(&sg(&[4, 5, 6])), poly(&[1, -1, 0, 0, 1, 0, 0, -1, 1]));
        assert_eq!(semigroup_polynomial(&sg(&[3, 4, 5])), poly(&[1, -1, 0, 1]));
        assert_eq!(semigroup_polynomial(&sg(&[4, 5, 6])).to_string(), "1 - z + z^4 - z^7 + z^8");
        assert!(semigroup_polynomial(&NumericalSemigroup::naturals()).is_one());
        let p = semigroup_polynomial(&sg(&[5, 7, 9]));
        assert_eq!(p.degree(), Some(s_frob(&[5, 7, 9]) + 1));
        assert_eq!(p.eval(&BigInt::one()), BigInt::one());
    }

    fn s_frob(g: &[u64]) -> usize {
        sg(g).frobenius() as usize
    }

    #[test]
    fn cyclotomic_polynomials_multiply_to_binomials() {
        let t = CyclotomicTester::new(60);
        for n in 1..=60u64 {
            let mut prod = poly(&[1]);
            for d in (1..=n).filter(|d| n % d == 0) {
                prod = prod.mul(&poly(t.cyclotomic(d).unwrap()));
            }
            let mut target = vec![0i64; n as usize + 1];
            target[0] = -1;
            target[n as usize] = 1;
            assert_eq!(prod, poly(&target), "n = {n}");
        }
        // first coefficient of absolute value 2 appears at 105
        let t = CyclotomicTester::new(48);
        assert!(t.cyclotomic(105).unwrap().contains(&-2));
    }

    #[test]
    fn cyclotomic_examples() {
        let r = is_cyclotomic(&poly(&[1, -1, 1])).unwrap();
        assert_eq!((r.cyclotomic, r.factors.clone()), (true, vec![6]));
        let r = is_cyclotomic(&semigroup_polynomial(&sg(&[4, 5, 6]))).unwrap();
        assert_eq!(r.factors, vec![10, 12]);
        assert_eq!(
            serde_json::to_value(&r).unwrap(),
            json!({"cyclotomic": true, "factors": [{"d": 10}, {"d": 12}]})
        );
        assert!(!is_cyclotomic(&poly(&[1, -1, 0, 1])).unwrap().cyclotomic);
        // repeated factors: Φ_2² Φ_3 = (1 + z)²(1 + z + z²)
        let p = poly(&[1, 1]).mul(&poly(&[1, 1])).mul(&poly(&[1, 1, 1]));
        assert_eq!(is_cyclotomic(&p).unwrap().factors, vec![2, 2, 3]);
        assert!(is_cyclotomic(&poly(&[2, 1])).is_err());
    }

    #[test]
    fn complete_intersection_examples() {
        assert!(is_complete_intersection(&sg(&[4, 5, 6])).unwrap());
        assert!(!is_complete_intersection(&sg(&[3, 4, 5])).unwrap());
        assert!(is_complete_intersection(&sg(&[2, 3])).unwrap());
    }

    #[test]
    fn gluing_examples() {
        let g = gluing_decomposition(&sg(&[4, 5, 6])).unwrap().unwrap();
        let split = g.split.as_ref().unwrap();
        assert_eq!((split.left_factor, split.right_factor), (2, 5));
        assert_eq!(split.left.gens, vec![2, 3]);
        assert_eq!(split.right.gens, vec![1]);
        assert_eq!(g.recombine(), vec![4, 5, 6]);
        assert_eq!(gluing_decomposition(&sg(&[3, 4, 5])).unwrap(), None);
        let g = gluing_decomposition(&sg(&[2, 3])).unwrap().unwrap();
        let split = g.split.unwrap();
        assert_eq!((split.left_factor, split.right_factor), (2, 3));
        assert_eq!(split.left.split, None);
    }

    #[test]
    fn gluing_agrees_with_presentation_size() {
        let mut checked = 0;
        for a in 3..14u64 {
            for b in a + 1..20 {
                for c in b + 1..26 {
                    let Ok(s) = NumericalSemigroup::from_generators(&[a, b, c]) else { continue };
                    if s.edim() != 3 {
                        continue;
                    }
                    let glued = gluing_decomposition(&s).unwrap();
                    assert_eq!(glued.is_some(), is_complete_intersection(&s).unwrap(), "{s:?}");
                    if let Some(g) = glued {
                        assert_eq!(g.recombine(), s.generators());
                    }
                    checked += 1;
                }
            }
        }
        assert!(checked > 500);
        for g in [&[8u64, 10, 12, 15][..], &[8, 12, 14, 15], &[6, 7, 8, 9], &[16, 20, 24, 30, 35]] {
            let s = sg(g);
            let glued = gluing_decomposition(&s).unwrap();
            assert_eq!(glued.is_some(), is_complete_intersection(&s).unwrap(), "{s:?}");
        }
    }

    #[test]
    fn ci_implies_cyclotomic_and_cyclotomic_implies_symmetric() {
        let t = CyclotomicTester::new(80);
        for a in 3..12u64 {
            for b in a + 1..18 {
                for c in b + 1..22 {
                    let Ok(s) = NumericalSemigroup::from_generators(&[a, b, c]) else { continue };
                    if s.frobenius() > 79 {
                        continue;
                    }
                    let cyc = t.test(&semigroup_polynomial(&s)).unwrap().cyclotomic;
                    if gluing_decomposition(&s).unwrap().is_some() {
                        assert!(cyc, "{s:?}");
                    }
                    if cyc {
                        assert!(s.is_symmetric(), "{s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn structure_checks() {
        let r = ci_structure_checks(&sg(&[4, 5, 6])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.data["mult_lower_bound"], 4);
        assert_eq!(ci_structure_checks(&sg(&[2, 3])).unwrap().verdict, Verdict::Pass);
        assert!(symmetric_pair_exists(1, 1) && symmetric_pair_exists(2, 2));
        assert!(!symmetric_pair_exists(3, 3));
    }
}
