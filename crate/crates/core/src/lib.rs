//! Exact curvature calculus and counting asymptotics for Apollonian gaskets.
//!
//! A gasket is parametrized by the curvature quadruple of its seed triple.
//! This crate provides the matrix calculus that propagates quadruples along
//! replacement words, a high-throughput counter for the number of inscribed
//! disks with curvature below a threshold, growth-exponent (Hausdorff
//! dimension) and relative-measure estimation from counting data, geometric
//! realization with SVG rendering, and a renewal Markov chain on normalized
//! quadruples with ergodicity diagnostics.

pub mod chain;
pub mod counting;
pub mod curvature;
pub mod dimension;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod scalar;
pub mod word;

pub use chain::{ChainConfig, ChainPath, ChainState, SimulationSummary, TransitionKernel};
pub use counting::{
    CountCurve, CountQuery, CountRecord, DecompositionReport, LaplaceEstimate,
};
pub use curvature::{kappa_of, CurvatureVector, GammaEpsilonParams, Permutation};
pub use dimension::{DimensionEstimate, MeasureSession, BOYD_LOWER, BOYD_UPPER, DEFAULT_DIMENSION};
pub use error::{Error, Result};
pub use geometry::{Disk, DiskTriple, RenderSpec};
pub use matrix::{apply, apply_word, CurvMatrix, Matrix4, Quad};
pub use scalar::{Backend, Scalar};
pub use word::{enumerate_index_set, IndexWord, Letter, Word};
