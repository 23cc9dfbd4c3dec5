//! Squarefree divisor complexes and their reduced homology.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::semigroup::NumericalSemigroup;

/// A simplicial complex on vertices `0..vertices`, faces stored as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub vertices: usize,
    /// Every face (including ∅ when the complex is nonempty), sorted by
    /// size and then by mask.
    faces: Vec<u64>,
}

impl SimplicialComplex {
    /// Downward closure of the given faces.
    pub fn from_faces(vertices: usize, generating: &[u64]) -> Self {
        let mut faces: Vec<u64> = Vec::new();
        for &f in generating {
            let mut sub = f;
            loop {
                faces.push(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        Self::from_closed(vertices, faces)
    }

    fn from_closed(vertices: usize, mut faces: Vec<u64>) -> Self {
        faces.sort_unstable_by_key(|&f| (f.count_ones(), f));
        faces.dedup();
        SimplicialComplex { vertices, faces }
    }

    pub fn faces(&self) -> &[u64] {
        &self.faces
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Maximal faces in increasing mask order.
    pub fn facets(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .faces
            .iter()
            .copied()
            .filter(|&f| {
                (0..self.vertices)
                    .filter(|v| f & (1 << v) == 0)
                    .all(|v| self.faces.binary_search_by_key(&(f.count_ones() + 1, f | 1 << v), |&g| (g.count_ones(), g)).is_err())
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Δ_j: subsets `F` of generator indices with `j − Σ_F g ∈ Γ`.
pub fn divisor_complex(s: &NumericalSemigroup, j: u64) -> Result<SimplicialComplex> {
    if !s.contains(j as i64) {
        return Err(Error::NotMember(j as i64));
    }
    let gens = s.generators();
    if gens.len() > 64 {
        return Err(Error::InvalidInput(format!(
            "embedding dimension {} exceeds 64",
            gens.len()
        )));
    }
    let mut faces = Vec::new();
    extend_faces(s, gens, j, 0, 0, 0, &mut faces);
    Ok(SimplicialComplex::from_closed(gens.len(), faces))
}

fn extend_faces(
    s: &NumericalSemigroup,
    gens: &[u64],
    j: u64,
    face: u64,
    sum: u64,
    next: usize,
    out: &mut Vec<u64>,
) {
    out.push(face);
    for v in next..gens.len() {
        let ns = sum + gens[v];
        if ns <= j && s.contains((j - ns) as i64) {
            extend_faces(s, gens, j, face | 1 << v, ns, v + 1, out);
        }
    }
}

/// Dimensions of H̃_k for k = −1, 0, …, vertices − 1 (index k + 1).
pub fn reduced_homology_dims(k: &SimplicialComplex, characteristic: u32) -> Vec<usize> {
    let n = k.vertices;
    let mut dims = vec![0usize; n + 1];
    if k.is_empty() {
        return dims;
    }
    // chains[s] = faces of size s, i.e. dimension s − 1
    let mut chains: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for &f in k.faces() {
        chains[f.count_ones() as usize].push(f);
    }
    // rank of ∂ from size-s faces to size-(s−1) faces, s ≥ 1
    let mut ranks = vec![0usize; n + 2];
    for s in 1..=n {
        if chains[s].is_empty() {
            continue;
        }
        let lower = &chains[s - 1];
        let rows: Vec<SparseRow> = chains[s]
            .iter()
            .map(|&f| {
                let mut row: SparseRow = Vec::with_capacity(s);
                let mut pos = 0;
                for v in 0..n {
                    if f & (1 << v) != 0 {
                        let sub = f & !(1 << v);
                        let col = lower.binary_search(&sub).expect("closed under subsets");
                        row.push((col, if pos % 2 == 0 { 1 } else { -1 }));
                        pos += 1;
                    }
                }
                row.sort_unstable();
                row
            })
            .collect();
        ranks[s] = linalg::rank(&rows, characteristic);
    }
    for s in 0..=n {
        dims[s] = chains[s].len() - ranks[s] - ranks[s + 1];
    }
    dims
}
