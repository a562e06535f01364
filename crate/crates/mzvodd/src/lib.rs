//! Exact linear algebra for totally odd depth-graded multiple zeta values.
//!
//! Everything here is exact: matrices carry arbitrary-precision integers,
//! vectors carry rationals, and there is no floating point anywhere. The
//! central objects are the square integer matrices `E_{N,r}` and `C_{N,r}`
//! labeled by the set of totally odd indices of weight `N` and depth `r`.
//! Right annihilators of `C_{N,r}` encode linear relations among totally odd
//! depth-graded multiple zeta values; left annihilators of `E_{N,r}`
//! correspond to restricted even period polynomials.
//!
//! Module map:
//! - [`indices`]: totally odd index sets and labeled rational vectors,
//! - [`poly`]: sparse homogeneous polynomials and the coordinate map `pi1`,
//! - [`ihara`]: the linearized Ihara action and its coefficient families,
//! - [`matrix`]: the labeled integer matrices `E`, `E^(q)`, `C`, `F`,
//! - [`linalg`]: exact rank, kernel bases and span tests over the rationals,
//! - [`period`]: restricted even period polynomial spaces `W_{N,r}`,
//! - [`shuffle`]: the word algebra, Lyndon bases, `psi` lifts and `d_m`,
//! - [`series`]: truncated integer power series `O(x)`, `S(x)` and the
//!   Broadhurst-Kreimer rows,
//! - [`relations`]: certified relations among totally odd values,
//! - [`verify`]: named verification suites with machine-readable reports,
//! - [`io`] / [`cache`]: bit-exact file formats and an optional disk cache.

pub mod cache;
pub mod indices;
pub mod ihara;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod period;
pub mod poly;
pub mod relations;
pub mod report;
pub mod series;
pub mod shuffle;
pub mod verify;

use thiserror::Error;

/// Errors surfaced by operations with genuine failure modes. Degenerate
/// inputs (empty index sets, parity mismatches) are not errors; they yield
/// empty structures, mirroring the empty-matrix convention.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid totally odd index {0:?}: every part must be odd and >= 3")]
    InvalidIndex(Vec<u32>),
    #[error("label mismatch: S_({0},{1}) vs S_({2},{3})")]
    LabelMismatch(u32, usize, u32, usize),
    #[error("substitution arity mismatch: polynomial has {vars} variables, {forms} forms given")]
    ArityMismatch { vars: usize, forms: usize },
    #[error("monomial with exponents {0:?} lies outside the space labeled by S_({1},{2})")]
    MonomialOutsideSpace(Vec<u32>, u32, usize),
    #[error("sigma index {i} out of range 1..={max}")]
    SigmaOutOfRange { i: usize, max: usize },
    #[error("q = {q} out of range 2..={r}")]
    QOutOfRange { q: usize, r: usize },
    #[error("depth {0} out of range for this operation")]
    DepthOutOfRange(usize),
    #[error("weight/depth mismatch: prefix ({0},{1}) + vector ({2},{3}) does not fill ({4},{5})")]
    EmbeddingMismatch(u32, usize, u32, usize, u32, usize),
    #[error("word of weight {0} and depth {1} is not totally odd or not labeled by the target set")]
    WordOutsideSpace(u32, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub use indices::{IndexSet, OddIndex, RatVector};
pub use linalg::{KernelBasis, KernelSide};
pub use matrix::{IntMatrix, MatrixKind};
pub use poly::{HomPolynomial, LinearForm};
pub use shuffle::{Word, WordSum};
