//! Graded Betti numbers of the Stanley–Reisner ring via Hochster's formula:
//! `β_{i,F} = dim H̃_{#F−i−1}(Δ|_F)` for squarefree degrees `F ⊆ [n]`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::complex::{binomial, SimplicialComplex};
use crate::error::{Error, Result};
use crate::face::Face;
use crate::homology::{connected_components, reduced_homology, reduced_homology_dim};
use crate::linalg::FieldSpec;

/// Hard ceiling on the vertex universe for a full `2^n` subset scan.
pub const MAX_SCAN_VERTICES: usize = 30;

/// Multigraded Betti numbers `β_{i,F}`; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub n: usize,
    pub d: usize,
    entries: BTreeMap<(usize, u64), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, face: Face) -> usize {
        self.entries.get(&(i, face.bits())).copied().unwrap_or(0)
    }

    /// Nonzero entries `(i, F, β_{i,F})` ordered by `i`, then by bit pattern of `F`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Face, usize)> + '_ {
        self.entries.iter().map(|(&(i, b), &v)| (i, Face::from_bits(b), v))
    }

    /// `β_{i,j} = Σ_{#F=j} β_{i,F}`, keyed by `(i, j)`.
    pub fn graded(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (i, f, v) in self.entries() {
            *out.entry((i, f.len())).or_insert(0) += v;
        }
        out
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries().filter(|e| e.0 == i).map(|e| e.2).sum()
    }

    /// Largest `i` with a nonzero entry.
    pub fn projective_dimension(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Coefficients of `Σ_{i,F} (−1)^i β_{i,F} t^{#F}`, constant term first.
    pub fn alternating_numerator(&self) -> Vec<i64> {
        let mut poly = vec![0i64; self.n + 1];
        for (i, f, v) in self.entries() {
            let s = if i % 2 == 0 { 1 } else { -1 };
            poly[f.len()] += s * v as i64;
        }
        trim(poly)
    }
}

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn check_scan_size(n: usize) -> Result<()> {
    if n > MAX_SCAN_VERTICES {
        return Err(Error::ResourceCap(format!(
            "Hochster scan over 2^{n} subsets (limit 2^{MAX_SCAN_VERTICES})"
        )));
    }
    Ok(())
}

fn d_of(complex: &SimplicialComplex) -> Result<usize> {
    let dim = complex.dim();
    if dim < 0 {
        return Err(Error::DimensionTooSmall { required: 0, actual: dim });
    }
    Ok((dim + 1) as usize)
}

/// The full multigraded Betti table over `field`.
pub fn betti_table(complex: &SimplicialComplex, field: FieldSpec) -> Result<BettiTable> {
    let d = d_of(complex)?;
    let n = complex.n();
    check_scan_size(n)?;
    let per_subset: Vec<(u64, Vec<(usize, usize)>)> = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| {
            let w = Face::from_bits(bits);
            let size = w.len();
            if !w.is_empty() && complex.contains(w) {
                return (bits, Vec::new());
            }
            let restricted = complex.induced(w);
            let dims = reduced_homology(&restricted, field);
            let nonzero = dims
                .iter()
                .filter(|&(_, v)| v > 0)
                .map(|(k, v)| ((size as isize - 1 - k) as usize, v))
                .collect();
            (bits, nonzero)
        })
        .collect();
    let mut entries = BTreeMap::new();
    for (bits, list) in per_subset {
        for (i, v) in list {
            entries.insert((i, bits), v);
        }
    }
    Ok(BettiTable { n, d, entries })
}

/// `dim Tor_{n−d}`, summed over `F` with `#F ≥ n − d`.
fn top_column(complex: &SimplicialComplex, field: FieldSpec) -> Result<Vec<(usize, usize)>> {
    let d = d_of(complex)?;
    let n = complex.n();
    check_scan_size(n)?;
    let i = n - d;
    let verts = complex.vertex_set();
    let contributions: Vec<(usize, usize)> = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|bits| {
            let w = Face::from_bits(bits);
            let size = w.len();
            if size < i {
                return None;
            }
            let k = size as isize - i as isize - 1;
            let v = if k == -1 {
                usize::from(w.intersection(verts).is_empty())
            } else if complex.contains(w) {
                0
            } else {
                reduced_homology_dim(&complex.induced(w), k, field)
            };
            (v > 0).then_some((size, v))
        })
        .collect();
    Ok(contributions)
}

/// The Cohen–Macaulay type `dim_K Tor_{n−d}(K[Δ], K)`.
pub fn cm_type(complex: &SimplicialComplex, field: FieldSpec) -> Result<usize> {
    Ok(top_column(complex, field)?.iter().map(|e| e.1).sum())
}

/// `j ↦ dim Tor_{n−d}(K[Δ], K)_j` for the degrees `j` that occur.
pub fn graded_type_column(
    complex: &SimplicialComplex,
    field: FieldSpec,
) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for (j, v) in top_column(complex, field)? {
        *out.entry(j).or_insert(0) += v;
    }
    Ok(out)
}

/// `dim Tor_{n−d}(K[Δ], K)_{n−d+1} = Σ_{#F = n−d+1} dim H̃_0(Δ|_F)`.
///
/// Nonzero exactly when some `(d−1)`-subset `W` disconnects `Δ|_{[n]∖W}`;
/// field independent.
pub fn linear_strand_top(complex: &SimplicialComplex) -> Result<usize> {
    let d = d_of(complex)?;
    let n = complex.n();
    let size = n + 1 - d;
    if size > n {
        return Ok(0);
    }
    check_scan_size(n)?;
    Ok((0..1u64 << n)
        .into_par_iter()
        .filter(|b| b.count_ones() as usize == size)
        .map(|bits| connected_components(&complex.induced(Face::from_bits(bits))).saturating_sub(1))
        .sum())
}

/// Checks `Σ (−1)^i β_{i,F} t^{#F} = (1−t)^{n−d} Σ h_k t^k` exactly.
pub fn hilbert_numerator_check(complex: &SimplicialComplex, field: FieldSpec) -> Result<bool> {
    let table = betti_table(complex, field)?;
    let h = complex.h_vector()?;
    let codim = table.n - table.d;
    let mut rhs = vec![0i64; codim + table.d + 1];
    for (k, hk) in h.entries().iter().enumerate() {
        for j in 0..=codim {
            let s = if j % 2 == 0 { 1 } else { -1 };
            rhs[k + j] += s * binomial(codim, j) * hk;
        }
    }
    Ok(table.alternating_numerator() == trim(rhs))
}
