//! Exact rank of sparse integer matrices over ℚ or a prime field.
//!
//! Rows are eliminated against pivots keyed by their leading column. Over
//! ℚ the elimination is fraction free: `row ← p·row − a·pivot`, followed by
//! division by the row content. Arithmetic runs in `i64` with overflow
//! checks; on overflow the whole computation is redone with big integers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, i64)>;

/// Field characteristic: 0 for ℚ, otherwise a prime.
pub fn is_valid_characteristic(c: u32) -> bool {
    c == 0 || (c >= 2 && (2..c).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)))
}

/// Rank of the matrix with the given rows over the field of characteristic
/// `characteristic`.
pub fn rank(rows: &[SparseRow], characteristic: u32) -> usize {
    if characteristic == 0 {
        rank_rational(rows)
    } else {
        rank_mod_p(rows, characteristic as u64)
    }
}

pub fn rank_mod_p(rows: &[SparseRow], p: u64) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for row in rows {
        let mut r: Vec<(usize, u64)> = row
            .iter()
            .map(|&(c, v)| (c, v.rem_euclid(p as i64) as u64))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some(&(lead_col, lead_val)) = r.first() {
            match pivots.get(&lead_col) {
                Some(piv) => {
                    // piv has leading coefficient 1
                    r = axpy_mod(&r, piv, p - lead_val, p);
                }
                None => {
                    let inv = mod_inverse(lead_val, p);
                    for e in r.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    pivots.insert(lead_col, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `a + k·b` mod p on sorted sparse rows.
fn axpy_mod(a: &[(usize, u64)], b: &[(usize, u64)], k: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, k * b[j].1 % p));
            j += 1;
        } else {
            let v = (a[i].1 + k * b[j].1) % p;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(p as i64));
    e.x.rem_euclid(p as i64) as u64
}

/// Integer arithmetic that may refuse to overflow.
trait ExactInt: Clone + Zero + One + PartialEq + Integer + Signed {
    fn checked_mul_(&self, other: &Self) -> Option<Self>;
    fn checked_sub_(&self, other: &Self) -> Option<Self>;
}

impl ExactInt for i64 {
    fn checked_mul_(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn checked_sub_(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
}

impl ExactInt for BigInt {
    fn checked_mul_(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_sub_(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
}

pub fn rank_rational(rows: &[SparseRow]) -> usize {
    let small: Vec<Vec<(usize, i64)>> = rows.to_vec();
    if let Some(r) = rank_integer(small) {
        return r;
    }
    let big: Vec<Vec<(usize, BigInt)>> = rows
        .iter()
        .map(|row| row.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
        .collect();
    rank_integer(big).expect("big integers do not overflow")
}

fn rank_integer<T: ExactInt>(rows: Vec<Vec<(usize, T)>>) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, T)>> = HashMap::new();
    for row in rows {
        let mut r: Vec<(usize, T)> = row.into_iter().filter(|e| !e.1.is_zero()).collect();
        while let Some((lead_col, lead_val)) = r.first().cloned() {
            match pivots.get(&lead_col) {
                Some(piv) => {
                    let p = piv[0].1.clone();
                    let g = p.gcd(&lead_val);
                    let (mp, ml) = (p.div_floor(&g), lead_val.div_floor(&g));
                    r = combine(&r, &mp, piv, &ml)?;
                    normalize(&mut r);
                }
                None => {
                    normalize(&mut r);
                    pivots.insert(lead_col, r);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// `ka·a − kb·b` on sorted sparse rows.
fn combine<T: ExactInt>(a: &[(usize, T)], ka: &T, b: &[(usize, T)], kb: &T) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push((a[i].0, a[i].1.checked_mul_(ka)?));
            i += 1;
        } else if take_b {
            out.push((b[j].0, T::zero().checked_sub_(&b[j].1.checked_mul_(kb)?)?));
            j += 1;
        } else {
            let v = a[i].1.checked_mul_(ka)?.checked_sub_(&b[j].1.checked_mul_(kb)?)?;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn normalize<T: ExactInt>(r: &mut [(usize, T)]) {
    let g = r.iter().fold(T::zero(), |acc, e| acc.gcd(&e.1));
    if !g.is_zero() && !g.is_one() {
        for e in r.iter_mut() {
            e.1 = e.1.div_floor(&g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_to_sparse(m: &[Vec<i64>]) -> Vec<SparseRow> {
        m.iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c, v)).collect())
            .collect()
    }

    /// Dense rational Gaussian elimination on exact fractions (num, den).
    fn dense_rank_q(m: &[Vec<i64>]) -> usize {
        use num_rational::BigRational;
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in 0..cols {
                        let v = &f * &a[rank][k];
                        a[r][k] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        let m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]];
        assert_eq!(rank(&dense_to_sparse(&m), 0), 2);
        // [[1,1],[1,-1]] has determinant −2: full rank over ℚ, rank 1 mod 2
        let m = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(rank(&dense_to_sparse(&m), 0), 2);
        assert_eq!(rank(&dense_to_sparse(&m), 2), 1);
        assert_eq!(rank(&[], 0), 0);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // Powers of 2^40 force i64 overflow during elimination.
        let big = 1i64 << 40;
        let m = vec![vec![big, 1, 0], vec![1, big, 1], vec![0, 1, big], vec![big, big, big]];
        assert_eq!(rank_rational(&dense_to_sparse(&m)), dense_rank_q(&m));
    }

    #[test]
    fn characteristics() {
        assert!(is_valid_characteristic(0));
        assert!(is_valid_characteristic(2));
        assert!(is_valid_characteristic(7));
        assert!(!is_valid_characteristic(1));
        assert!(!is_valid_characteristic(9));
    }

    proptest! {
        #[test]
        fn rational_rank_matches_dense_oracle(
            m in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..7)
        ) {
            prop_assert_eq!(rank_rational(&dense_to_sparse(&m)), dense_rank_q(&m));
        }

        #[test]
        fn mod_p_rank_bounded_by_rational(
            m in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6)
        ) {
            let s = dense_to_sparse(&m);
            prop_assert!(rank_mod_p(&s, 3) <= rank_rational(&s));
        }
    }
}
