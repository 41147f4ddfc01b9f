//! Reduced, absolute and relative simplicial homology dimensions over a field.
//!
//! Chain bases are ordered by face bit pattern and boundary signs follow the
//! `(−1)^i` rule on sorted vertex lists. Homology is read off two boundary
//! ranks per degree.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::linalg::{rank, FieldSpec, SparseMatrix};

/// Chain groups of an augmented (or relative) simplicial chain complex.
///
/// `basis(k)` is indexed by degree `k >= -1`; degree `-1` holds the empty face.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    bases: Vec<Vec<Face>>,
    index: Vec<HashMap<u64, usize>>,
}

impl ChainComplex {
    /// The augmented chain complex of `Δ`.
    pub fn augmented(complex: &SimplicialComplex) -> Self {
        Self::from_bases(complex.faces_by_size())
    }

    /// Chains of `Δ` modulo chains of `Γ`; the basis is the faces of `Δ` not in `Γ`.
    pub fn relative(complex: &SimplicialComplex, sub: &SimplicialComplex) -> Result<Self> {
        if let Some(f) = sub.facets().iter().find(|f| !complex.contains(**f)) {
            return Err(Error::NotSubcomplex(*f));
        }
        let mut bases = complex.faces_by_size();
        for b in &mut bases {
            b.retain(|f| !sub.contains(*f));
        }
        Ok(Self::from_bases(bases))
    }

    fn from_bases(bases: Vec<Vec<Face>>) -> Self {
        let index = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, f)| (f.bits(), i)).collect())
            .collect();
        Self { bases, index }
    }

    /// Highest degree with a (possibly empty) chain group.
    pub fn top_degree(&self) -> isize {
        self.bases.len() as isize - 2
    }

    pub fn basis(&self, k: isize) -> &[Face] {
        if k < -1 || k > self.top_degree() {
            return &[];
        }
        &self.bases[(k + 1) as usize]
    }

    pub fn chain_dim(&self, k: isize) -> usize {
        self.basis(k).len()
    }

    /// `∂_k : C_k → C_{k−1}` as a `dim C_{k−1} × dim C_k` matrix.
    pub fn boundary(&self, k: isize) -> SparseMatrix {
        let cols = self.basis(k);
        let rows = self.chain_dim(k - 1);
        if k < 0 || cols.is_empty() || rows == 0 {
            return SparseMatrix::zeros(rows, cols.len());
        }
        let row_index = &self.index[k as usize];
        let mut trips = Vec::with_capacity(cols.len() * (k as usize + 1));
        for (c, face) in cols.iter().enumerate() {
            for (i, sub) in face.boundary_faces().enumerate() {
                if let Some(&r) = row_index.get(&sub.bits()) {
                    trips.push((r, c, if i % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        SparseMatrix::from_triplets(rows, cols.len(), trips).expect("indices in range")
    }

    /// Whether `∂_k ∘ ∂_{k+1} = 0` in every degree.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (0..self.top_degree()).all(|k| {
            self.boundary(k)
                .mul(&self.boundary(k + 1))
                .map(|m| m.nnz() == 0)
                .unwrap_or(false)
        })
    }

    /// Homology dimensions computed purely from boundary ranks.
    pub fn homology(&self, field: FieldSpec) -> HomologyDims {
        let top = self.top_degree();
        // ranks[k] = rank ∂_k for k in 0..=top+1
        let ranks: Vec<usize> = (0..=top + 1).map(|k| rank(&self.boundary(k), field)).collect();
        let dims = (-1..=top)
            .map(|k| {
                let below = if k >= 0 { ranks[k as usize] } else { 0 };
                self.chain_dim(k) - below - ranks[(k + 1) as usize]
            })
            .collect();
        HomologyDims { dims }
    }
}

/// Homology dimensions indexed by degree `k >= -1`; out-of-range degrees are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyDims {
    dims: Vec<usize>,
}

impl HomologyDims {
    pub fn get(&self, k: isize) -> usize {
        if k < -1 {
            return 0;
        }
        self.dims.get((k + 1) as usize).copied().unwrap_or(0)
    }

    /// `(degree, dimension)` pairs from degree −1 upward.
    pub fn iter(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.dims.iter().enumerate().map(|(i, d)| (i as isize - 1, *d))
    }

    /// `Σ (−1)^k dim H_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.iter()
            .map(|(k, d)| if k.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Vertex sets of the connected components, ordered by smallest vertex.
pub fn vertex_components(complex: &SimplicialComplex) -> Vec<Face> {
    let verts = complex.vertex_set();
    let mut uf = UnionFind::<u32>::new(65);
    for f in complex.facets() {
        if let Some(first) = f.min_vertex() {
            for v in f.vertices().skip(1) {
                uf.union(first, v);
            }
        }
    }
    let mut by_root: Vec<(u32, Face)> = Vec::new();
    for v in verts.vertices() {
        let r = uf.find(v);
        match by_root.iter_mut().find(|e| e.0 == r) {
            Some(e) => e.1 = e.1.with(v),
            None => by_root.push((r, Face::singleton(v))),
        }
    }
    by_root.into_iter().map(|e| e.1).collect()
}

/// Number of connected components (0 for `{∅}`).
pub fn connected_components(complex: &SimplicialComplex) -> usize {
    vertex_components(complex).len()
}

/// Rank of `∂_k` in the augmented complex. Degrees 0 and 1 are field
/// independent and come from vertex counts and graph components.
fn absolute_boundary_rank(
    complex: &SimplicialComplex,
    chains: &ChainComplex,
    k: isize,
    field: FieldSpec,
) -> usize {
    match k {
        _ if k < 0 || k > chains.top_degree() => 0,
        0 => usize::from(chains.chain_dim(0) > 0),
        1 => chains.chain_dim(0) - connected_components(complex),
        _ => rank(&chains.boundary(k), field),
    }
}

/// All reduced homology dimensions `dim H̃_k(Δ; K)`, `k = -1..=dim Δ`.
pub fn reduced_homology(complex: &SimplicialComplex, field: FieldSpec) -> HomologyDims {
    let chains = ChainComplex::augmented(complex);
    let top = chains.top_degree();
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|k| absolute_boundary_rank(complex, &chains, k, field))
        .collect();
    let dims = (-1..=top)
        .map(|k| {
            let below = if k >= 0 { ranks[k as usize] } else { 0 };
            chains.chain_dim(k) - below - ranks[(k + 1) as usize]
        })
        .collect();
    HomologyDims { dims }
}

/// `dim H̃_k(Δ; K)`; `H̃_{−1}({∅}) = 1`.
pub fn reduced_homology_dim(complex: &SimplicialComplex, k: isize, field: FieldSpec) -> usize {
    if k < -1 || k > complex.dim() {
        return 0;
    }
    let chains = ChainComplex::augmented(complex);
    let cycles = chains.chain_dim(k) - absolute_boundary_rank(complex, &chains, k, field);
    cycles - absolute_boundary_rank(complex, &chains, k + 1, field)
}

/// `dim H_k(Δ, Γ; K)` for all `k`, via the quotient chain complex.
pub fn relative_homology(
    complex: &SimplicialComplex,
    sub: &SimplicialComplex,
    field: FieldSpec,
) -> Result<HomologyDims> {
    Ok(ChainComplex::relative(complex, sub)?.homology(field))
}

pub fn relative_homology_dim(
    complex: &SimplicialComplex,
    sub: &SimplicialComplex,
    k: isize,
    field: FieldSpec,
) -> Result<usize> {
    Ok(relative_homology(complex, sub, field)?.get(k))
}

/// Rank of `ι*: H_top(Δ) → H_top(Δ, cost_Δ(F))`, read off the long exact
/// sequence of the pair as `dim H_top(Δ) − dim H_top(cost_Δ(F))`.
pub fn icost_rank(complex: &SimplicialComplex, face: Face, field: FieldSpec) -> Result<usize> {
    let top = complex.dim();
    if top < 1 {
        return Err(Error::DimensionTooSmall { required: 1, actual: top });
    }
    let cost = complex.contrastar(face)?;
    let whole = reduced_homology_dim(complex, top, field);
    let rest = reduced_homology_dim(&cost, top, field);
    debug_assert!(rest <= whole);
    Ok(whole - rest)
}

/// For each top-dimensional face `F`, in lexicographic order, whether
/// `dim H̃_top(Δ ∖ F) < dim H̃_top(Δ)`, i.e. whether the column of `F` in
/// `∂_top` lies in the span of the other columns.
pub fn top_homology_drops(complex: &SimplicialComplex, field: FieldSpec) -> Vec<(Face, bool)> {
    let top = complex.dim();
    if top < 0 {
        return Vec::new();
    }
    let chains = ChainComplex::augmented(complex);
    let m = chains.boundary(top);
    let r = rank(&m, field);
    let mut out: Vec<(Face, bool)> = chains
        .basis(top)
        .iter()
        .enumerate()
        .map(|(j, &f)| (f, rank(&m.without_column(j), field) == r))
        .collect();
    out.sort_by_key(|e| e.0);
    out
}
