//! JSON records written by the command-line tool. Their shape is fixed by
//! `schema/report.schema.json`.

use std::collections::BTreeMap;

use agstar::betti::BettiTable;
use agstar::search::{Hit, SearchSpec, SearchState};
use agstar::{classify, ClassificationReport, ClassifyOptions, FieldSpec, RidgeDecomposition};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::file::{facet_lists, ComplexFile};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "agstar";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub input_sha256: Option<String>,
    pub field: String,
}

impl Provenance {
    pub fn new(command: &'static str, input: Option<&[u8]>, field: FieldSpec) -> Self {
        Provenance {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            tool_version: TOOL_VERSION,
            command,
            input_sha256: input.map(|bytes| hex::encode(Sha256::digest(bytes))),
            field: field.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputJson {
    pub n: usize,
    pub facets: Vec<Vec<u32>>,
    pub dropped_faces: usize,
}

impl InputJson {
    pub fn new(file: &ComplexFile) -> Self {
        InputJson { n: file.complex.n(), facets: file.facet_lists(), dropped_faces: file.dropped }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeJson {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub input: InputJson,
    pub report: ClassificationReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeJson {
    Split { ridge: Vec<u32>, left: Box<NodeJson>, right: Box<NodeJson> },
    Leaf { facets: Vec<Vec<u32>>, report: Box<ClassificationReport> },
}

impl NodeJson {
    pub fn build(tree: &RidgeDecomposition, field: FieldSpec) -> agstar::Result<Self> {
        Ok(match tree {
            RidgeDecomposition::Leaf(c) => NodeJson::Leaf {
                facets: facet_lists(c),
                report: Box::new(classify(c, field, ClassifyOptions::default())?),
            },
            RidgeDecomposition::Split { ridge, left, right } => NodeJson::Split {
                ridge: ridge.vertices().collect(),
                left: Box::new(Self::build(left, field)?),
                right: Box::new(Self::build(right, field)?),
            },
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeJson {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub input: InputJson,
    pub leaves: usize,
    pub tree: NodeJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiEntryJson {
    pub i: usize,
    pub face: Vec<u32>,
    pub value: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradedEntryJson {
    pub i: usize,
    pub j: usize,
    pub value: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeValueJson {
    pub degree: usize,
    pub value: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiJson {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub input: InputJson,
    pub mode: &'static str,
    pub d: usize,
    pub cm: bool,
    pub entries: Option<Vec<BettiEntryJson>>,
    pub graded: Option<Vec<GradedEntryJson>>,
    pub projective_dimension: Option<usize>,
    pub hilbert_check: Option<bool>,
    pub type_column: Vec<DegreeValueJson>,
    #[serde(rename = "type")]
    pub cm_type: usize,
}

pub fn betti_entries(table: &BettiTable) -> (Vec<BettiEntryJson>, Vec<GradedEntryJson>) {
    let entries = table
        .entries()
        .map(|(i, f, value)| BettiEntryJson { i, face: f.vertices().collect(), value })
        .collect();
    let graded = table
        .graded()
        .into_iter()
        .map(|((i, j), value)| GradedEntryJson { i, j, value })
        .collect();
    (entries, graded)
}

pub fn type_column(col: &BTreeMap<usize, usize>) -> Vec<DegreeValueJson> {
    col.iter().map(|(&degree, &value)| DegreeValueJson { degree, value }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HitJson {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub record: &'static str,
    pub ordinal: u64,
    pub mask: u64,
    pub n: usize,
    pub facets: Vec<Vec<u32>>,
    pub report: ClassificationReport,
}

impl HitJson {
    pub fn new(hit: &Hit, field: FieldSpec) -> Self {
        HitJson {
            provenance: Provenance::new("search", None, field),
            record: "hit",
            ordinal: hit.ordinal,
            mask: hit.mask,
            n: hit.complex.n(),
            facets: facet_lists(&hit.complex),
            report: hit.report.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecJson {
    pub n: usize,
    pub d: usize,
    pub predicate: String,
    pub eta: Option<Vec<i64>>,
    pub delta_parity: bool,
    pub iso: bool,
    pub limit: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryJson {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub record: &'static str,
    pub spec: SpecJson,
    pub outcome: &'static str,
    pub cursor: u64,
    pub scanned: u64,
    pub hits: u64,
    /// `[δ, count]` pairs in increasing `δ`.
    pub delta_histogram: Vec<[i64; 2]>,
    pub odd_delta: Option<Vec<Vec<Vec<u32>>>>,
}

impl SummaryJson {
    pub fn new(
        spec: &SearchSpec,
        state: &SearchState,
        outcome: &'static str,
        odd: Option<Vec<Vec<Vec<u32>>>>,
    ) -> Self {
        SummaryJson {
            provenance: Provenance::new("search", None, spec.field),
            record: "summary",
            spec: SpecJson {
                n: spec.n,
                d: spec.d,
                predicate: spec.predicate.to_string(),
                eta: spec.eta_filter.as_ref().map(|e| e.coefficients().to_vec()),
                delta_parity: spec.delta_parity_scan,
                iso: spec.up_to_iso,
                limit: spec.limit,
            },
            outcome,
            cursor: state.cursor,
            scanned: state.scanned,
            hits: state.hits,
            delta_histogram: state.delta_histogram.iter().map(|(&v, &c)| [v, c as i64]).collect(),
            odd_delta: odd,
        }
    }
}
