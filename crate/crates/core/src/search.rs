//! Exhaustive enumeration of pure complexes on `[n]`, filtered by a
//! Cohen–Macaulay-family predicate.
//!
//! A pure `(d−1)`-complex using every vertex is a nonempty family of
//! `d`-subsets of `[n]` covering `[n]`. Families are indexed by bit masks over
//! the `C(n, d)` subsets in lexicographic order and visited in increasing mask
//! order, so the stream of hits is deterministic and resumable from a cursor.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{
    classify, delta, eta, is_almost_gorenstein_star, is_gorenstein_star, is_uniformly_cm,
    ClassificationReport, ClassifyOptions, EtaPolynomial,
};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::homology::reduced_homology_dim;
use crate::linalg::FieldSpec;

pub const DEFAULT_MAX_FAMILIES: u64 = 1 << 24;
pub const MAX_ISO_VERTICES: usize = 8;
const CHUNK: u64 = 1 << 12;
const CHUNKS_PER_ROUND: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    UniformlyCm,
    AgStar,
    AgStarIndecomposable,
    GorensteinStar,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::UniformlyCm => "uniformly_cm",
            Predicate::AgStar => "ag_star",
            Predicate::AgStarIndecomposable => "ag_star_indecomposable",
            Predicate::GorensteinStar => "gorenstein_star",
        }
    }

    fn holds(self, complex: &SimplicialComplex, field: FieldSpec) -> Result<bool> {
        Ok(match self {
            Predicate::UniformlyCm => is_uniformly_cm(complex, field),
            Predicate::AgStar => is_almost_gorenstein_star(complex, field)?,
            Predicate::AgStarIndecomposable => {
                is_almost_gorenstein_star(complex, field)?
                    && reduced_homology_dim(complex, complex.dim(), field) == 1
            }
            Predicate::GorensteinStar => is_gorenstein_star(complex, field)?,
        })
    }

    fn holds_in_report(self, r: &ClassificationReport) -> bool {
        match self {
            Predicate::UniformlyCm => r.uniformly_cm,
            Predicate::AgStar => r.almost_gorenstein_star,
            Predicate::AgStarIndecomposable => r.indecomposable == Some(true),
            Predicate::GorensteinStar => r.gorenstein_star,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "uniformly_cm" => Ok(Predicate::UniformlyCm),
            "ag_star" | "agstar" => Ok(Predicate::AgStar),
            "ag_star_indecomposable" => Ok(Predicate::AgStarIndecomposable),
            "gorenstein_star" => Ok(Predicate::GorensteinStar),
            _ => Err(Error::Precondition(format!("unknown predicate {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub predicate: Predicate,
    pub eta_filter: Option<EtaPolynomial>,
    pub delta_parity_scan: bool,
    pub up_to_iso: bool,
    pub limit: Option<u64>,
    pub max_families: u64,
}

impl SearchSpec {
    pub fn new(n: usize, d: usize, predicate: Predicate) -> Self {
        SearchSpec {
            n,
            d,
            field: FieldSpec::Rationals,
            predicate,
            eta_filter: None,
            delta_parity_scan: false,
            up_to_iso: false,
            limit: None,
            max_families: DEFAULT_MAX_FAMILIES,
        }
    }

    /// Number of candidate `d`-subsets.
    pub fn subset_count(&self) -> usize {
        crate::complex::binomial(self.n, self.d) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.d < 1 || self.d > self.n {
            return Err(Error::Precondition(format!("need 1 <= d <= n, got n={} d={}", self.n, self.d)));
        }
        if self.up_to_iso && self.n > MAX_ISO_VERTICES {
            return Err(Error::Precondition(format!(
                "isomorphism reduction supports n <= {MAX_ISO_VERTICES}"
            )));
        }
        if self.delta_parity_scan && (self.predicate != Predicate::AgStar || self.d < 2) {
            return Err(Error::Precondition("the delta parity scan runs over ag_star with d >= 2".into()));
        }
        let subsets = self.subset_count();
        if subsets >= 63 || (1u64 << subsets) - 1 > self.max_families {
            return Err(Error::ResourceCap(format!(
                "2^{subsets} - 1 facet families exceed the cap of {}",
                self.max_families
            )));
        }
        Ok(())
    }

    /// One-line description used to tie a checkpoint to its search.
    pub fn key(&self) -> String {
        format!(
            "n={} d={} field={} predicate={} eta={} iso={}",
            self.n,
            self.d,
            self.field,
            self.predicate,
            self.eta_filter.as_ref().map_or("-".to_string(), |e| e.coefficients().iter().join(",")),
            self.up_to_iso
        )
    }
}

/// One complex satisfying the predicate and filters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    /// The facet-family mask.
    pub mask: u64,
    /// Position among the covering families visited, from 0.
    pub ordinal: u64,
    pub complex: SimplicialComplex,
    pub report: ClassificationReport,
}

/// Resumable progress of a search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchState {
    /// Next mask to visit.
    pub cursor: u64,
    /// Covering families visited so far.
    pub scanned: u64,
    pub hits: u64,
    pub delta_histogram: BTreeMap<i64, u64>,
}

const CHECKPOINT_HEADER: &str = "agstar-checkpoint 1";

impl SearchState {
    pub fn start() -> Self {
        SearchState { cursor: 1, ..Default::default() }
    }

    pub fn to_text(&self, spec: &SearchSpec) -> String {
        let mut s = format!(
            "{CHECKPOINT_HEADER}\nspec {}\ncursor {}\nscanned {}\nhits {}\n",
            spec.key(),
            self.cursor,
            self.scanned,
            self.hits
        );
        for (v, c) in &self.delta_histogram {
            s.push_str(&format!("delta {v} {c}\n"));
        }
        s
    }

    pub fn from_text(text: &str, spec: &SearchSpec) -> Result<Self> {
        let bad = |msg: &str| Error::Precondition(format!("bad checkpoint: {msg}"));
        let mut lines = text.lines();
        if lines.next() != Some(CHECKPOINT_HEADER) {
            return Err(bad("missing header"));
        }
        let key = lines.next().and_then(|l| l.strip_prefix("spec ")).ok_or_else(|| bad("missing spec"))?;
        if key != spec.key() {
            return Err(bad(&format!("written for `{key}`, not `{}`", spec.key())));
        }
        let mut state = SearchState::default();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<u64> {
                parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(|| bad(line))
            };
            match parts[0] {
                "cursor" => state.cursor = num(1)?,
                "scanned" => state.scanned = num(1)?,
                "hits" => state.hits = num(1)?,
                "delta" => {
                    let v: i64 = parts.get(1).and_then(|p| p.parse().ok()).ok_or_else(|| bad(line))?;
                    state.delta_histogram.insert(v, num(2)?);
                }
                _ => return Err(bad(line)),
            }
        }
        if state.cursor == 0 {
            return Err(bad("cursor 0"));
        }
        Ok(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Completed,
    LimitReached,
    Interrupted,
}

/// Vertex permutations of `[n]`, used to pick one labeled representative per
/// isomorphism class.
pub struct Canonicalizer {
    n: usize,
    perms: Vec<Vec<u32>>,
}

impl Canonicalizer {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ISO_VERTICES {
            return Err(Error::ResourceCap(format!("canonical form needs n <= {MAX_ISO_VERTICES}")));
        }
        let perms = (1..=n as u32)
            .permutations(n)
            .map(|p| std::iter::once(0).chain(p).collect())
            .collect();
        Ok(Canonicalizer { n, perms })
    }

    fn apply(perm: &[u32], f: Face) -> u64 {
        f.vertices().fold(0u64, |acc, v| acc | 1 << (perm[v as usize] - 1))
    }

    /// Lexicographically least sorted facet-mask vector over all relabelings.
    pub fn canonical_form(&self, complex: &SimplicialComplex) -> Vec<u64> {
        assert!(complex.n() <= self.n, "universe larger than the canonicalizer");
        let mut best: Option<Vec<u64>> = None;
        let mut buf = Vec::with_capacity(complex.facets().len());
        for perm in &self.perms {
            buf.clear();
            buf.extend(complex.facets().iter().map(|&f| Self::apply(perm, f)));
            buf.sort_unstable();
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        best.unwrap_or_default()
    }

    pub fn is_canonical(&self, complex: &SimplicialComplex) -> bool {
        let mut own: Vec<u64> = complex.facets().iter().map(|f| f.bits()).collect();
        own.sort_unstable();
        let mut buf = Vec::with_capacity(own.len());
        for perm in &self.perms {
            buf.clear();
            buf.extend(complex.facets().iter().map(|&f| Self::apply(perm, f)));
            buf.sort_unstable();
            if buf < own {
                return false;
            }
        }
        true
    }
}

/// Canonical encoding of `complex` under vertex relabeling (`n <= 8`).
pub fn canonical_form(complex: &SimplicialComplex) -> Result<Vec<u64>> {
    Ok(Canonicalizer::new(complex.n())?.canonical_form(complex))
}

/// An enumeration in progress.
pub struct Search {
    spec: SearchSpec,
    subsets: Vec<Face>,
    canon: Option<Canonicalizer>,
    state: SearchState,
}

impl Search {
    pub fn new(spec: SearchSpec, resume: Option<SearchState>) -> Result<Self> {
        spec.validate()?;
        let subsets = (1..=spec.n as u32)
            .combinations(spec.d)
            .map(|c| Face::from_vertices(c).expect("vertex in range"))
            .collect();
        let canon = if spec.up_to_iso { Some(Canonicalizer::new(spec.n)?) } else { None };
        Ok(Search { spec, subsets, canon, state: resume.unwrap_or_else(SearchState::start) })
    }

    pub fn spec(&self) -> &SearchSpec {
        &self.spec
    }

    pub fn state(&self) -> &SearchState {
        &self.state
    }

    fn end(&self) -> u64 {
        1u64 << self.subsets.len()
    }

    fn family(&self, mask: u64) -> Option<SimplicialComplex> {
        let mut union = Face::EMPTY;
        let mut facets = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let f = self.subsets[m.trailing_zeros() as usize];
            union = union.union(f);
            facets.push(f);
            m &= m - 1;
        }
        if union != Face::full(self.spec.n) {
            return None;
        }
        Some(SimplicialComplex::from_facets(self.spec.n, facets).expect("vertices in range"))
    }

    /// `Some(hit)` if the family at `mask` passes every filter.
    fn examine(&self, mask: u64, complex: SimplicialComplex) -> Result<Option<(SimplicialComplex, ClassificationReport)>> {
        let field = self.spec.field;
        let h = complex.h_vector()?;
        if h.entries().iter().any(|&x| x < 0) || h.entries()[h.d()] < 1 {
            return Ok(None);
        }
        if let Some(target) = &self.spec.eta_filter {
            if eta(&h) != *target {
                return Ok(None);
            }
        }
        if !self.spec.predicate.holds(&complex, field)? {
            return Ok(None);
        }
        if let Some(c) = &self.canon {
            if !c.is_canonical(&complex) {
                return Ok(None);
            }
        }
        let report = classify(&complex, field, ClassifyOptions { slow_verify: true })?;
        if !self.spec.predicate.holds_in_report(&report) {
            return Err(Error::Verification(format!(
                "family {mask}: {} not confirmed by full classification",
                self.spec.predicate
            )));
        }
        debug_assert_eq!(report.delta, Some(delta(&h)));
        Ok(Some((complex, report)))
    }

    /// Scans `[lo, hi)`: returns the covering-family count and the hits with
    /// their position inside the range.
    fn scan_range(&self, lo: u64, hi: u64) -> Result<(u64, Vec<(u64, Hit)>)> {
        let mut scanned = 0;
        let mut hits = Vec::new();
        for mask in lo..hi {
            let Some(complex) = self.family(mask) else { continue };
            if let Some((complex, report)) = self.examine(mask, complex)? {
                hits.push((scanned, Hit { mask, ordinal: 0, complex, report }));
            }
            scanned += 1;
        }
        Ok((scanned, hits))
    }

    /// Runs until done, `limit` hits have been emitted in total, or `stop` is
    /// raised. `on_checkpoint` sees the state after every round of chunks.
    pub fn run(
        &mut self,
        stop: &AtomicBool,
        mut on_hit: impl FnMut(&Hit) -> Result<()>,
        mut on_checkpoint: impl FnMut(&SearchState) -> Result<()>,
    ) -> Result<SearchOutcome> {
        let end = self.end();
        if self.spec.limit.is_some_and(|l| self.state.hits >= l) {
            return Ok(SearchOutcome::LimitReached);
        }
        while self.state.cursor < end {
            if stop.load(Ordering::SeqCst) {
                on_checkpoint(&self.state)?;
                return Ok(SearchOutcome::Interrupted);
            }
            let start = self.state.cursor;
            let round_end = start.saturating_add(CHUNK * CHUNKS_PER_ROUND).min(end);
            let bounds: Vec<(u64, u64)> =
                (start..round_end).step_by(CHUNK as usize).map(|lo| (lo, (lo + CHUNK).min(round_end))).collect();
            let results: Vec<Result<(u64, Vec<(u64, Hit)>)>> =
                bounds.par_iter().map(|&(lo, hi)| self.scan_range(lo, hi)).collect();
            for ((_, hi), res) in bounds.into_iter().zip(results) {
                let (scanned, hits) = res?;
                for (offset, mut hit) in hits {
                    hit.ordinal = self.state.scanned + offset;
                    self.state.hits += 1;
                    if let Some(dl) = hit.report.delta {
                        *self.state.delta_histogram.entry(dl).or_insert(0) += 1;
                    }
                    on_hit(&hit)?;
                    if self.spec.limit.is_some_and(|l| self.state.hits >= l) {
                        self.state.cursor = hit.mask + 1;
                        self.state.scanned = hit.ordinal + 1;
                        on_checkpoint(&self.state)?;
                        return Ok(SearchOutcome::LimitReached);
                    }
                }
                self.state.scanned += scanned;
                self.state.cursor = hi;
            }
            on_checkpoint(&self.state)?;
        }
        Ok(SearchOutcome::Completed)
    }
}

/// All hits of `spec`, in stream order.
pub fn enumerate(spec: &SearchSpec) -> Result<Vec<Hit>> {
    let mut search = Search::new(spec.clone(), None)?;
    let mut hits = Vec::new();
    search.run(&AtomicBool::new(false), |h| {
        hits.push(h.clone());
        Ok(())
    }, |_| Ok(()))?;
    Ok(hits)
}

/// δ values over all almost Gorenstein* hits of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaParityReport {
    pub n: usize,
    pub d: usize,
    pub field: String,
    pub scanned: u64,
    pub hits: u64,
    pub histogram: BTreeMap<i64, u64>,
    /// Facet lists (as bit masks) of hits with odd δ.
    pub odd: Vec<Vec<u64>>,
}

impl DeltaParityReport {
    pub fn all_even(&self) -> bool {
        self.odd.is_empty()
    }
}

pub fn delta_parity_report(spec: &SearchSpec) -> Result<DeltaParityReport> {
    let mut spec = spec.clone();
    spec.delta_parity_scan = true;
    spec.limit = None;
    let mut search = Search::new(spec.clone(), None)?;
    let mut odd = Vec::new();
    search.run(&AtomicBool::new(false), |h| {
        if h.report.delta.is_some_and(|dl| dl % 2 != 0) {
            odd.push(h.complex.facets().iter().map(|f| f.bits()).collect());
        }
        Ok(())
    }, |_| Ok(()))?;
    let st = search.state();
    Ok(DeltaParityReport {
        n: spec.n,
        d: spec.d,
        field: spec.field.to_string(),
        scanned: st.scanned,
        hits: st.hits,
        histogram: st.delta_histogram.clone(),
        odd,
    })
}

/// Parity reports for every `2 <= d <= max_d`, `d <= n <= max_n`.
///
/// Dimension 0 is left out: there `δ = #vertices − 2` and parity carries no
/// information.
pub fn delta_parity_sweep(max_n: usize, max_d: usize, field: FieldSpec) -> Result<Vec<DeltaParityReport>> {
    let mut out = Vec::new();
    for d in 2..=max_d {
        for n in d..=max_n {
            let mut spec = SearchSpec::new(n, d, Predicate::AgStar);
            spec.field = field;
            out.push(delta_parity_report(&spec)?);
        }
    }
    Ok(out)
}
