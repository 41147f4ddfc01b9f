//! Exact classification of finite simplicial complexes over ℚ or 𝔽_p.
//!
//! Decides the Cohen–Macaulay, 2-CM, uniformly CM, Gorenstein* and almost
//! Gorenstein* properties, computes f/h-vectors, type, δ, the η-polynomial and
//! graded Betti numbers (via Hochster's formula), and splits almost
//! Gorenstein* complexes into indecomposable pieces along ridges.

pub mod betti;
pub mod classify;
pub mod complex;
pub mod error;
pub mod face;
pub mod homology;
pub mod linalg;
pub mod ridge;
pub mod search;

pub use classify::{classify, ClassificationReport, ClassifyOptions, EtaPolynomial};
pub use complex::{FVector, HVector, SimplicialComplex};
pub use error::{Error, Result};
pub use face::{Face, VertexId};
pub use linalg::FieldSpec;
pub use ridge::RidgeDecomposition;
