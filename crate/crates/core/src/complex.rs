//! The simplicial-complex value type and its purely combinatorial constructions.

use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::face::{Face, VertexId, MAX_VERTICES};

/// A finite simplicial complex on the vertex universe `[n]`, stored by its facets.
///
/// The facet list is an antichain in lexicographic order. The smallest
/// representable complex is `{∅}`; the void complex is not a value of this type.
#[derive(Clone)]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<Face>,
    labels: Option<Vec<VertexId>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

/// Face counts `f_{-1}, f_0, ..., f_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector(pub Vec<u64>);

/// `h_0, ..., h_d`; entries may be negative for non-CM complexes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HVector(pub Vec<i64>);

impl FVector {
    /// `f_i`, with `i >= -1`.
    pub fn get(&self, i: isize) -> u64 {
        self.0.get((i + 1) as usize).copied().unwrap_or(0)
    }

    /// The `d` with `dim = d - 1`.
    pub fn d(&self) -> usize {
        self.0.len() - 1
    }

    pub fn to_h_vector(&self) -> HVector {
        let d = self.d();
        let h = (0..=d)
            .map(|j| {
                (0..=j)
                    .map(|k| {
                        let sign = if (j - k) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(d - k, j - k) * self.0[k] as i64
                    })
                    .sum()
            })
            .collect();
        HVector(h)
    }
}

impl HVector {
    pub fn d(&self) -> usize {
        self.0.len() - 1
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Inverts the `(t-1)`-transform: `f_{j-1} = Σ_{k<=j} C(d-k, j-k) h_k`.
    pub fn to_f_vector(&self) -> FVector {
        let d = self.d();
        let f = (0..=d)
            .map(|j| {
                let v: i64 = (0..=j).map(|k| binomial(d - k, j - k) * self.0[k]).sum();
                v as u64
            })
            .collect();
        FVector(f)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// Keeps the inclusion-maximal members, sorted lexicographically.
fn antichain(mut faces: Vec<Face>) -> Vec<Face> {
    faces.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then(a.bits().cmp(&b.bits())));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
    for f in faces {
        if !kept.iter().any(|k| f.is_subset_of(*k)) {
            kept.push(f);
        }
    }
    kept.sort_unstable();
    kept
}

impl SimplicialComplex {
    /// Builds `⟨raw⟩` on `[n]`, keeping only the inclusion-maximal members of `raw`.
    ///
    /// An empty `raw` (or one holding only `∅`) yields `{∅}`.
    pub fn from_facets<I: IntoIterator<Item = Face>>(n: usize, raw: I) -> Result<Self> {
        if n < 1 || n > MAX_VERTICES {
            return Err(Error::BadUniverse(n));
        }
        let raw: Vec<Face> = raw.into_iter().collect();
        let universe = Face::full(n);
        for f in &raw {
            if !f.is_subset_of(universe) {
                return Err(Error::VertexOutOfRange { vertex: f.max_vertex(), n });
            }
        }
        Ok(Self::from_faces_unchecked(n, raw))
    }

    /// Convenience constructor from vertex lists.
    pub fn from_vertex_lists<S: AsRef<[VertexId]>>(n: usize, raw: &[S]) -> Result<Self> {
        let faces = raw
            .iter()
            .map(|s| Face::from_vertices(s.as_ref().iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_facets(n, faces)
    }

    /// The complex `{∅}` on `[n]`.
    pub fn empty_face_only(n: usize) -> Self {
        Self { n, facets: vec![Face::EMPTY], labels: None }
    }

    /// The full simplex `⟨F⟩`.
    pub fn simplex(n: usize, face: Face) -> Self {
        Self { n, facets: vec![face], labels: None }
    }

    /// Internal constructor: no range checks; `n` may be 0.
    pub(crate) fn from_faces_unchecked(n: usize, raw: Vec<Face>) -> Self {
        let mut facets = antichain(raw);
        if facets.is_empty() {
            facets.push(Face::EMPTY);
        }
        Self { n, facets, labels: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// `max #F - 1`; `{∅}` has dimension -1.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(0) as isize - 1
    }

    /// Original vertex labels when this complex came from a relabelling
    /// construction (restriction); `None` means the identity.
    pub fn labels(&self) -> Option<&[VertexId]> {
        self.labels.as_deref()
    }

    pub fn original_label(&self, v: VertexId) -> VertexId {
        match &self.labels {
            Some(l) => l[(v - 1) as usize],
            None => v,
        }
    }

    /// Union of all facets.
    pub fn vertex_set(&self) -> Face {
        self.facets.iter().fold(Face::EMPTY, |acc, f| acc.union(*f))
    }

    pub fn contains(&self, face: Face) -> bool {
        self.facets.iter().any(|f| face.is_subset_of(*f))
    }

    pub fn is_empty_face_only(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    /// A complex with a single facet (including `{∅}`).
    pub fn is_simplex(&self) -> bool {
        self.facets.len() == 1
    }

    /// All faces grouped by size (`result[k]` holds the faces with `k` vertices),
    /// each group in increasing bit-pattern order.
    pub fn faces_by_size(&self) -> Vec<Vec<Face>> {
        let mut all: Vec<u64> = Vec::new();
        for f in &self.facets {
            all.extend(f.subfaces().map(Face::bits));
        }
        all.sort_unstable();
        all.dedup();
        let top = self.dim() + 1;
        let mut out = vec![Vec::new(); (top + 1) as usize];
        for b in all {
            out[b.count_ones() as usize].push(Face::from_bits(b));
        }
        out
    }

    /// The faces of dimension `k` (`k + 1` vertices) in lexicographic order.
    pub fn faces_of_dim(&self, k: isize) -> Vec<Face> {
        if k < -1 || k > self.dim() {
            return Vec::new();
        }
        let mut v = self.faces_by_size().swap_remove((k + 1) as usize);
        v.sort_unstable();
        v
    }

    pub fn num_faces(&self) -> usize {
        self.faces_by_size().iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.faces_by_size().iter().map(|v| v.len() as u64).collect())
    }

    /// The h-vector; `{∅}` has none.
    pub fn h_vector(&self) -> Result<HVector> {
        if self.dim() < 0 {
            return Err(Error::DimensionTooSmall { required: 0, actual: self.dim() });
        }
        Ok(self.f_vector().to_h_vector())
    }

    /// `lk(F) = {G : F ∪ G ∈ Δ, F ∩ G = ∅}` on the same universe.
    pub fn link(&self, face: Face) -> Result<Self> {
        if !self.contains(face) {
            return Err(Error::NotAFace(face));
        }
        let raw = self
            .facets
            .iter()
            .filter(|g| face.is_subset_of(**g))
            .map(|g| g.difference(face))
            .collect();
        Ok(Self::from_faces_unchecked(self.n, raw))
    }

    /// `cost(F) = {G ∈ Δ : G ⊉ F}`, for a nonempty face `F`.
    pub fn contrastar(&self, face: Face) -> Result<Self> {
        if face.is_empty() {
            return Err(Error::EmptyFace);
        }
        if !self.contains(face) {
            return Err(Error::NotAFace(face));
        }
        let mut raw = Vec::with_capacity(self.facets.len() + face.len());
        for g in &self.facets {
            if face.is_subset_of(*g) {
                raw.extend(face.vertices().map(|v| g.without(v)));
            } else {
                raw.push(*g);
            }
        }
        Ok(Self::from_faces_unchecked(self.n, raw))
    }

    /// `Δ|_W` kept on the same universe `[n]`.
    pub fn induced(&self, w: Face) -> Self {
        let raw = self.facets.iter().map(|g| g.intersection(w)).collect();
        Self::from_faces_unchecked(self.n, raw)
    }

    /// `Δ|_W` re-hosted on `[#W]`: the `i`-th smallest vertex of `W` becomes `i`.
    /// The original labels are kept in [`SimplicialComplex::labels`].
    pub fn restriction(&self, w: Face) -> Result<Self> {
        if !w.is_subset_of(Face::full(self.n)) {
            return Err(Error::VertexOutOfRange { vertex: w.max_vertex(), n: self.n });
        }
        let induced = self.induced(w);
        let old: Vec<VertexId> = w.vertices().collect();
        let mut map = [0u32; MAX_VERTICES + 1];
        for (i, v) in old.iter().enumerate() {
            map[*v as usize] = i as VertexId + 1;
        }
        let raw = induced.facets.iter().map(|f| relabel(*f, &map)).collect();
        let mut out = Self::from_faces_unchecked(old.len(), raw);
        out.labels = Some(old.iter().map(|v| self.original_label(*v)).collect());
        Ok(out)
    }

    /// `v * Δ`; the universe grows to include `v` when needed.
    pub fn cone(&self, apex: VertexId) -> Result<Self> {
        if apex == 0 || apex as usize > MAX_VERTICES {
            return Err(Error::VertexOutOfRange { vertex: apex, n: MAX_VERTICES });
        }
        if self.vertex_set().contains(apex) {
            return Err(Error::VertexInUse(apex));
        }
        let n = self.n.max(apex as usize);
        let raw = self.facets.iter().map(|f| f.with(apex)).collect();
        Ok(Self::from_faces_unchecked(n, raw))
    }

    /// Applies the vertex map `v -> perm[v - 1]` (a permutation of `[n]`).
    pub fn permute(&self, perm: &[VertexId]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut map = [0u32; MAX_VERTICES + 1];
        for (i, p) in perm.iter().enumerate() {
            map[i + 1] = *p;
        }
        let raw = self.facets.iter().map(|f| relabel(*f, &map)).collect();
        Self::from_faces_unchecked(self.n, raw)
    }

    pub fn is_pure(&self) -> bool {
        let k = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == k)
    }

    /// Connectivity of the facet graph in which two facets are adjacent when
    /// they share `d - 1` vertices.
    pub fn is_strongly_connected(&self) -> bool {
        let m = self.facets.len();
        if m <= 1 {
            return true;
        }
        let d = self.dim() + 1;
        let mut uf = UnionFind::<usize>::new(m);
        let mut classes = m;
        for i in 0..m {
            for j in i + 1..m {
                if self.facets[i].intersection(self.facets[j]).len() as isize == d - 1
                    && uf.union(i, j)
                {
                    classes -= 1;
                }
            }
        }
        classes == 1
    }

    /// Whether every face of `self` is a face of `other`.
    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.facets.iter().all(|f| other.contains(*f))
    }

    /// `Δ ∪ Γ` on the larger universe.
    pub fn union(&self, other: &Self) -> Self {
        let raw = self.facets.iter().chain(other.facets.iter()).copied().collect();
        Self::from_faces_unchecked(self.n.max(other.n), raw)
    }

    /// `Δ ∩ Γ` on the larger universe.
    pub fn intersection(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                raw.push(a.intersection(*b));
            }
        }
        Self::from_faces_unchecked(self.n.max(other.n), raw)
    }

    /// Ridge sum of two complexes already living on a common universe:
    /// checks that `Γ ∩ Σ = ⟨W⟩` with `#W = d - 1` and returns `(Γ ∪ Σ, W)`.
    pub fn ridge_sum_shared(gamma: &Self, sigma: &Self) -> Result<(Self, Face)> {
        let (dg, ds) = (gamma.dim(), sigma.dim());
        if dg != ds {
            return Err(Error::DimensionMismatch(dg, ds));
        }
        if dg < 0 {
            return Err(Error::DimensionTooSmall { required: 0, actual: dg });
        }
        let meet = gamma.intersection(sigma);
        if meet.facets.len() != 1 {
            return Err(Error::InvalidRidgeSum(format!(
                "intersection has {} facets, expected a single simplex",
                meet.facets.len()
            )));
        }
        let w = meet.facets[0];
        if w.len() as isize != dg {
            return Err(Error::InvalidRidgeSum(format!(
                "shared simplex {w} has {} vertices, expected {dg}",
                w.len()
            )));
        }
        Ok((gamma.union(sigma), w))
    }

    /// Ridge sum `Γ ⊕_W Σ` by vertex identification.
    ///
    /// `gluing` lists pairs `(s, g)`: vertex `s` of `Σ` is identified with vertex
    /// `g` of `Γ`. The remaining vertices of `Σ` are renamed, in increasing
    /// order, to `Γ.n() + 1, Γ.n() + 2, ...`.
    pub fn ridge_sum(gamma: &Self, sigma: &Self, gluing: &[(VertexId, VertexId)]) -> Result<Self> {
        let (dg, ds) = (gamma.dim(), sigma.dim());
        if dg != ds {
            return Err(Error::DimensionMismatch(dg, ds));
        }
        if dg < 0 {
            return Err(Error::DimensionTooSmall { required: 0, actual: dg });
        }
        let mut map = [0u32; MAX_VERTICES + 1];
        let mut w_sigma = Face::EMPTY;
        let mut w_gamma = Face::EMPTY;
        for &(s, g) in gluing {
            if s == 0 || s as usize > sigma.n {
                return Err(Error::VertexOutOfRange { vertex: s, n: sigma.n });
            }
            if g == 0 || g as usize > gamma.n {
                return Err(Error::VertexOutOfRange { vertex: g, n: gamma.n });
            }
            if map[s as usize] != 0 || w_gamma.contains(g) {
                return Err(Error::InvalidRidgeSum("gluing is not a bijection".into()));
            }
            map[s as usize] = g;
            w_sigma = w_sigma.with(s);
            w_gamma = w_gamma.with(g);
        }
        if w_gamma.len() as isize != dg {
            return Err(Error::InvalidRidgeSum(format!(
                "gluing identifies {} vertices, expected {dg}",
                w_gamma.len()
            )));
        }
        if !gamma.contains(w_gamma) {
            return Err(Error::InvalidRidgeSum(format!("{w_gamma} is not a face of the first complex")));
        }
        if !sigma.contains(w_sigma) {
            return Err(Error::InvalidRidgeSum(format!("{w_sigma} is not a face of the second complex")));
        }
        let mut next = gamma.n as u32;
        for v in sigma.vertex_set().difference(w_sigma).vertices() {
            next += 1;
            if next as usize > MAX_VERTICES {
                return Err(Error::BadUniverse(next as usize));
            }
            map[v as usize] = next;
        }
        let moved = Self::from_faces_unchecked(
            next as usize,
            sigma.facets.iter().map(|f| relabel(*f, &map)).collect(),
        );
        let gamma = Self { n: next as usize, ..gamma.clone() };
        let (glued, _) = Self::ridge_sum_shared(&gamma, &moved)?;
        Ok(glued)
    }
}

pub(crate) fn relabel(face: Face, map: &[u32; MAX_VERTICES + 1]) -> Face {
    face.vertices()
        .fold(Face::EMPTY, |acc, v| acc.with(map[v as usize]))
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, face) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{face}")?;
        }
        write!(f, "⟩ on [{}]", self.n)
    }
}
