//! Decision procedures for the Cohen–Macaulay hierarchy and the
//! enumerative invariants `δ` and `η`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::betti::cm_type;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::homology::{connected_components, reduced_homology, reduced_homology_dim, top_homology_drops};
use crate::linalg::FieldSpec;
use crate::ridge::{find_ridge_split, split_completely};

/// Reisner's criterion: `H̃_k(lk F) = 0` for every face `F` and `k ≠ d−1−#F`.
///
/// Purity is checked first; a non-pure complex fails Reisner at a small facet.
pub fn is_cm(complex: &SimplicialComplex, field: FieldSpec) -> bool {
    let dim = complex.dim();
    if dim <= 0 {
        return true;
    }
    if !complex.is_pure() {
        return false;
    }
    let d = (dim + 1) as usize;
    let by_size = complex.faces_by_size();
    for (size, faces) in by_size.iter().enumerate().take(d.saturating_sub(1)) {
        let top = (d - 1 - size) as isize;
        for &f in faces {
            let link = complex.link(f).expect("face of the complex");
            let dims = reduced_homology(&link, field);
            if dims.iter().any(|(k, v)| k < top && v > 0) {
                return false;
            }
        }
    }
    true
}

/// CM, and `cost(v)` is CM of the same dimension for every vertex `v`.
pub fn is_two_cm(complex: &SimplicialComplex, field: FieldSpec) -> bool {
    if !is_cm(complex, field) {
        return false;
    }
    let dim = complex.dim();
    if dim < 0 {
        return false;
    }
    complex.vertex_set().vertices().all(|v| {
        let cost = complex.contrastar(Face::singleton(v)).expect("vertex of the complex");
        cost.dim() == dim && is_cm(&cost, field)
    })
}

/// CM, and deleting any facet strictly drops `dim H̃_{d−1}`.
///
/// In dimension 0 this says the complex has at least two vertices.
pub fn is_uniformly_cm(complex: &SimplicialComplex, field: FieldSpec) -> bool {
    let dim = complex.dim();
    if dim < 0 || (dim >= 1 && has_free_ridge(complex)) || !is_cm(complex, field) {
        return false;
    }
    if dim == 0 {
        return complex.facets().len() >= 2;
    }
    top_homology_drops(complex, field).iter().all(|e| e.1)
}

/// Some ridge lies in exactly one facet; such a facet carries no top cycle.
fn has_free_ridge(complex: &SimplicialComplex) -> bool {
    let mut ridges: Vec<Face> = complex.facets().iter().flat_map(|f| f.boundary_faces()).collect();
    ridges.sort_unstable_by_key(|f| f.bits());
    let mut i = 0;
    while i < ridges.len() {
        let mut j = i + 1;
        while j < ridges.len() && ridges[j] == ridges[i] {
            j += 1;
        }
        if j - i == 1 {
            return true;
        }
        i = j;
    }
    false
}

/// CM, and every `cost(F)` for a facet `F` is CM of the same dimension.
pub fn is_uniformly_cm_by_definition(complex: &SimplicialComplex, field: FieldSpec) -> bool {
    let dim = complex.dim();
    if dim < 0 || !is_cm(complex, field) {
        return false;
    }
    complex.facets().iter().all(|&f| {
        let cost = complex.contrastar(f).expect("facet of the complex");
        cost.dim() == dim && is_cm(&cost, field)
    })
}

/// `η_i = (h_d + ⋯ + h_{d−i}) − (h_0 + ⋯ + h_i)` for `i = 0..d−1`.
pub fn eta(h: &crate::complex::HVector) -> EtaPolynomial {
    let e = h.entries();
    let d = h.d();
    let mut coeffs = Vec::with_capacity(d);
    let (mut tail, mut head) = (0i64, 0i64);
    for i in 0..d {
        tail += e[d - i];
        head += e[i];
        coeffs.push(tail - head);
    }
    EtaPolynomial::new(coeffs)
}

/// `δ = η(1)`.
pub fn delta(h: &crate::complex::HVector) -> i64 {
    eta(h).coefficients().iter().sum()
}

/// CM, `dim H̃_{d−1} = 1` and type 1.
pub fn is_gorenstein_star(complex: &SimplicialComplex, field: FieldSpec) -> Result<bool> {
    let dim = complex.dim();
    if dim < 0 || !is_cm(complex, field) || reduced_homology_dim(complex, dim, field) != 1 {
        return Ok(false);
    }
    Ok(cm_type(complex, field)? == 1)
}

/// Uniformly CM and `δ = type − 1`.
pub fn is_almost_gorenstein_star(complex: &SimplicialComplex, field: FieldSpec) -> Result<bool> {
    if !is_uniformly_cm(complex, field) {
        return Ok(false);
    }
    let t = cm_type(complex, field)? as i64;
    Ok(delta(&complex.h_vector()?) == t - 1)
}

/// Combinatorial shortcuts for almost Gorenstein* in dimensions 1 and 2;
/// `None` elsewhere.
///
/// Dimension 1: a connected graph all of whose blocks are cycles.
/// Dimension 2: uniformly CM, and every piece of a complete ridge splitting
/// has one-dimensional top homology.
pub fn almost_gorenstein_star_fast_path(
    complex: &SimplicialComplex,
    field: FieldSpec,
) -> Result<Option<bool>> {
    match complex.dim() {
        1 => Ok(Some(is_ridge_sum_of_cycles(complex))),
        2 => {
            if !is_uniformly_cm(complex, field) {
                return Ok(Some(false));
            }
            let tree = split_completely(complex)?;
            Ok(Some(tree.leaves().iter().all(|leaf| reduced_homology_dim(leaf, 2, field) == 1)))
        }
        _ => Ok(None),
    }
}

/// Almost Gorenstein for graphs: a tree or a ridge sum of cycles.
pub fn is_almost_gorenstein_dim1(complex: &SimplicialComplex) -> Result<bool> {
    if complex.dim() != 1 {
        return Err(Error::Precondition(format!(
            "expected a 1-dimensional complex, got dimension {}",
            complex.dim()
        )));
    }
    Ok(is_tree(complex) || is_ridge_sum_of_cycles(complex))
}

fn is_tree(complex: &SimplicialComplex) -> bool {
    let f = complex.f_vector();
    complex.is_pure() && connected_components(complex) == 1 && f.get(1) + 1 == f.get(0)
}

/// Connected 1-dimensional complex whose biconnected blocks are all cycles.
pub fn is_ridge_sum_of_cycles(complex: &SimplicialComplex) -> bool {
    if complex.dim() != 1 || !complex.is_pure() || connected_components(complex) != 1 {
        return false;
    }
    let blocks = biconnected_blocks(complex);
    !blocks.is_empty() && blocks.iter().all(|&(v, e)| v >= 3 && v == e)
}

/// `(#vertices, #edges)` of each block of the graph of a 1-dimensional complex.
fn biconnected_blocks(complex: &SimplicialComplex) -> Vec<(usize, usize)> {
    let n = complex.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
    let edges: Vec<(usize, usize)> = complex
        .facets()
        .iter()
        .map(|f| {
            let mut it = f.vertices();
            (it.next().unwrap() as usize, it.next().unwrap() as usize)
        })
        .collect();
    for (id, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, id));
        adj[b].push((a, id));
    }

    struct Tarjan<'a> {
        adj: &'a [Vec<(usize, usize)>],
        edges: &'a [(usize, usize)],
        disc: Vec<usize>,
        low: Vec<usize>,
        clock: usize,
        stack: Vec<usize>,
        blocks: Vec<(usize, usize)>,
    }

    impl Tarjan<'_> {
        fn visit(&mut self, u: usize, parent_edge: Option<usize>) {
            self.clock += 1;
            self.disc[u] = self.clock;
            self.low[u] = self.clock;
            for i in 0..self.adj[u].len() {
                let (w, id) = self.adj[u][i];
                if Some(id) == parent_edge {
                    continue;
                }
                if self.disc[w] == 0 {
                    self.stack.push(id);
                    self.visit(w, Some(id));
                    self.low[u] = self.low[u].min(self.low[w]);
                    if self.low[w] >= self.disc[u] {
                        self.pop_block(id);
                    }
                } else if self.disc[w] < self.disc[u] {
                    self.stack.push(id);
                    self.low[u] = self.low[u].min(self.disc[w]);
                }
            }
        }

        fn pop_block(&mut self, until: usize) {
            let mut verts = Face::EMPTY;
            let mut count = 0;
            while let Some(id) = self.stack.pop() {
                let (a, b) = self.edges[id];
                verts = verts.with(a as u32).with(b as u32);
                count += 1;
                if id == until {
                    break;
                }
            }
            self.blocks.push((verts.len(), count));
        }
    }

    let mut t = Tarjan {
        adj: &adj,
        edges: &edges,
        disc: vec![0; n + 1],
        low: vec![0; n + 1],
        clock: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in complex.vertex_set().vertices() {
        if t.disc[v as usize] == 0 {
            t.visit(v as usize, None);
        }
    }
    t.blocks
}

/// `η_0 + η_1 t + ⋯ + η_{d−1} t^{d−1}`. Equality ignores trailing zeros.
#[derive(Clone, Debug, Eq)]
pub struct EtaPolynomial {
    coeffs: Vec<i64>,
}

impl EtaPolynomial {
    pub fn new(coeffs: Vec<i64>) -> Self {
        EtaPolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    fn trimmed(&self) -> &[i64] {
        let end = self.coeffs.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        &self.coeffs[..end]
    }

    pub fn is_symmetric(&self) -> bool {
        let c = &self.coeffs;
        (0..c.len()).all(|i| c[i] == c[c.len() - 1 - i])
    }

    pub fn value_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

impl PartialEq for EtaPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl fmt::Display for EtaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{mag}t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{mag}t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for EtaPolynomial {
    type Err = Error;

    /// Accepts either `"0,2,0"` or a polynomial in `t` such as `"2t"`, `"1 + t^2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        if compact.contains(',') || !compact.contains('t') {
            if compact.contains(',') {
                let coeffs = compact
                    .split(',')
                    .map(|p| p.parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(EtaPolynomial::new(coeffs));
            }
            return Ok(EtaPolynomial::new(vec![compact.parse().map_err(|_| bad())?]));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if i > 0 && (ch == '+' || ch == '-') && !compact[..i].ends_with('^') {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, power) = match body.find('t') {
                None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
                Some(pos) => {
                    let c = match body[..pos].trim_end_matches('*') {
                        "" => 1,
                        num => num.parse::<i64>().map_err(|_| bad())?,
                    };
                    let p = match &body[pos + 1..] {
                        "" => 1,
                        rest => rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                    };
                    (c, p)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] += sign * coef;
        }
        Ok(EtaPolynomial::new(coeffs))
    }
}

impl Serialize for EtaPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Re-check uniform CM by definition and the type/δ inequality.
    pub slow_verify: bool,
}

/// Everything the classifier knows about one complex over one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub field: String,
    pub characteristic: u64,
    pub n: usize,
    pub dim: isize,
    pub pure: bool,
    pub strongly_connected: bool,
    pub f_vector: Vec<u64>,
    pub h_vector: Option<Vec<i64>>,
    pub homology: Vec<usize>,
    pub top_homology: usize,
    pub cm: bool,
    pub two_cm: bool,
    pub uniformly_cm: bool,
    #[serde(rename = "type")]
    pub cm_type: Option<usize>,
    pub delta: Option<i64>,
    pub eta: Option<EtaPolynomial>,
    pub eta_text: Option<String>,
    pub gorenstein_star: bool,
    pub almost_gorenstein_star: bool,
    pub indecomposable: Option<bool>,
    pub slow_verified: bool,
    pub notes: Vec<String>,
}

/// Full classification of `complex` over `field`.
///
/// The type is only computed for uniformly CM complexes. The dimension 1 and 2
/// shortcuts are always compared against the general criterion.
pub fn classify(
    complex: &SimplicialComplex,
    field: FieldSpec,
    opts: ClassifyOptions,
) -> Result<ClassificationReport> {
    let dim = complex.dim();
    let homology = reduced_homology(complex, field);
    let top_homology = homology.get(dim);
    let pure = complex.is_pure();
    let strongly_connected = dim >= 0 && complex.is_strongly_connected();
    let h = if dim >= 0 { Some(complex.h_vector()?) } else { None };
    let cm = dim >= 0 && is_cm(complex, field);
    let two_cm = cm && is_two_cm(complex, field);
    let uniformly_cm = cm && is_uniformly_cm(complex, field);
    let mut notes = Vec::new();

    let cm_type = if uniformly_cm { Some(cm_type(complex, field)?) } else { None };
    let delta_v = h.as_ref().map(delta);
    let eta_v = h.as_ref().map(eta);
    let almost_gorenstein_star =
        matches!((cm_type, delta_v), (Some(t), Some(dl)) if dl == t as i64 - 1);
    let gorenstein_star = uniformly_cm && top_homology == 1 && cm_type == Some(1);

    if let Some(fast) = almost_gorenstein_star_fast_path(complex, field)? {
        if fast != almost_gorenstein_star {
            return Err(Error::Verification(format!(
                "dimension {dim} shortcut gives {fast}, general criterion gives {almost_gorenstein_star}"
            )));
        }
    }
    if dim == 0 {
        notes.push("dimension 0: uniformly CM taken to mean at least two vertices".into());
    }
    if dim >= 1 && top_homology >= 2 && pure && strongly_connected && find_ridge_split(complex)?.is_none() {
        notes.push(format!("no ridge split although top homology has dimension {top_homology}"));
    }
    if !cm && dim >= 0 {
        notes.push("not CM: type not computed".into());
    } else if cm && !uniformly_cm {
        notes.push("not uniformly CM: type not computed".into());
    }

    let mut slow_verified = false;
    if opts.slow_verify {
        let by_def = dim >= 0 && is_uniformly_cm_by_definition(complex, field);
        if by_def != uniformly_cm {
            return Err(Error::Verification(format!(
                "uniform CM: facet-deletion homology test gives {uniformly_cm}, definition gives {by_def}"
            )));
        }
        if let (Some(t), Some(dl)) = (cm_type, delta_v) {
            if t as i64 - 1 > dl {
                return Err(Error::Verification(format!("type − 1 = {} exceeds δ = {dl}", t as i64 - 1)));
            }
        }
        if gorenstein_star != (dim >= 0 && is_gorenstein_star(complex, field)?) {
            return Err(Error::Verification("Gorenstein* flag disagrees with its definition".into()));
        }
        let chain_ok = (!gorenstein_star || almost_gorenstein_star)
            && (!almost_gorenstein_star || uniformly_cm)
            && (!uniformly_cm || cm)
            && (!two_cm || uniformly_cm);
        if !chain_ok {
            return Err(Error::Verification("implication chain violated".into()));
        }
        slow_verified = true;
    }

    Ok(ClassificationReport {
        field: field.to_string(),
        characteristic: field.characteristic(),
        n: complex.n(),
        dim,
        pure,
        strongly_connected,
        f_vector: complex.f_vector().0,
        h_vector: h.map(|h| h.0),
        homology: homology.iter().map(|e| e.1).collect(),
        top_homology,
        cm,
        two_cm,
        uniformly_cm,
        cm_type,
        delta: delta_v,
        eta_text: eta_v.as_ref().map(|e| e.to_string()),
        eta: eta_v,
        gorenstein_star,
        almost_gorenstein_star,
        indecomposable: almost_gorenstein_star.then_some(top_homology == 1),
        slow_verified,
        notes,
    })
}
