//! Exact rank, kernel bases and span tests over the rationals.
//!
//! Elimination is fraction-free (Bareiss): every forward step divides by the
//! previous pivot and the division is exact by Sylvester's identity; a
//! runtime check enforces it. Pivots are chosen by minimal bit length in the
//! current column to bound intermediate swell. Kernel extraction reduces the
//! echelon rows over the rationals, back-substitutes free columns and clears
//! denominators, so emitted bases are canonical primitive integer vectors
//! (first nonzero entry positive) and two runs produce identical output.

// Index loops stay: elimination reads one row while writing another, which
// iterator adapters cannot express without cloning.
#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::indices::{IndexSet, RatVector};
use crate::matrix::{IntMatrix, Provenance};
use crate::Error;

/// Which annihilator space a kernel basis spans: `Left` holds row vectors
/// `v` with `v*M = 0`, `Right` holds `v` with `M*v^t = 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KernelSide {
    Left,
    Right,
}

impl KernelSide {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelSide::Left => "left",
            KernelSide::Right => "right",
        }
    }
}

/// A canonical kernel basis: linearly independent primitive integer vectors
/// in echelon position order.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub side: KernelSide,
    pub vectors: Vec<RatVector>,
    pub source: Provenance,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Reduced row echelon form over the rationals, computed fraction-free.
pub struct Echelon {
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<BigRational>>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn bit_len(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

/// Fraction-free forward elimination. Returns the pivot columns and the
/// echelon rows (integer, one per pivot).
fn forward_eliminate(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<usize>, Vec<Vec<BigInt>>) {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut pr = 0usize;
    for pc in 0..ncols {
        if pr == nrows {
            break;
        }
        // Pivot: nonzero entry of minimal bit length in this column.
        let mut best: Option<(usize, u64)> = None;
        for (i, row) in rows.iter().enumerate().skip(pr) {
            if !row[pc].is_zero() {
                let len = bit_len(&row[pc]);
                if best.is_none_or(|(_, b)| len < b) {
                    best = Some((i, len));
                }
            }
        }
        let Some((pivot_row, _)) = best else { continue };
        rows.swap(pr, pivot_row);
        let (head, tail) = rows.split_at_mut(pr + 1);
        let pivot_vals = &head[pr];
        let pivot = pivot_vals[pc].clone();
        for row in tail.iter_mut() {
            if row[pc].is_zero() {
                // Still rescale so every entry stays a minor of the input.
                for j in pc + 1..ncols {
                    if !row[j].is_zero() {
                        let num = &pivot * &row[j];
                        let (q, rem) = num.div_rem(&prev);
                        assert!(rem.is_zero(), "fraction-free elimination divided inexactly");
                        row[j] = q;
                    }
                }
                continue;
            }
            let factor = std::mem::replace(&mut row[pc], BigInt::zero());
            for j in pc + 1..ncols {
                let num = &pivot * &row[j] - &factor * &pivot_vals[j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free elimination divided inexactly");
                row[j] = q;
            }
        }
        prev = pivot;
        pivots.push(pc);
        pr += 1;
    }
    rows.truncate(pivots.len());
    (pivots, rows)
}

/// Reduced row echelon form of the row list (entries as rationals, pivot
/// entries 1). The result is the unique RREF of the row space.
pub fn rref(rows: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let (pivots, int_rows) = forward_eliminate(rows, ncols);
    let mut rows: Vec<Vec<BigRational>> = int_rows
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    for i in (0..pivots.len()).rev() {
        let pc = pivots[i];
        let inv = rows[i][pc].recip();
        for j in pc..ncols {
            let scaled = &rows[i][j] * &inv;
            rows[i][j] = scaled;
        }
        for k in 0..i {
            if rows[k][pc].is_zero() {
                continue;
            }
            let factor = rows[k][pc].clone();
            for j in pc..ncols {
                let delta = &factor * &rows[i][j];
                rows[k][j] = &rows[k][j] - delta;
            }
        }
    }
    Echelon {
        pivots,
        rows,
        ncols,
    }
}

/// Rank of a row list over the rationals.
pub fn rank_rows(rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    forward_eliminate(rows, ncols).0.len()
}

/// Basis of `{x : R x = 0}` for every row `R`, as canonical primitive
/// integer vectors ordered by free column.
pub fn nullspace_rows(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let ech = rref(rows, ncols);
    let mut out = Vec::new();
    let mut next_pivot = 0usize;
    for free in 0..ncols {
        if next_pivot < ech.pivots.len() && ech.pivots[next_pivot] == free {
            next_pivot += 1;
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (i, &pc) in ech.pivots.iter().enumerate() {
            if pc < free {
                v[pc] = -ech.rows[i][free].clone();
            }
        }
        out.push(clear_denominators(&v));
    }
    out
}

/// Scale a rational vector to a primitive integer vector with positive
/// first nonzero entry. The zero vector maps to itself.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return ints;
    }
    let first_nonzero_negative = ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if first_nonzero_negative {
        gcd = -gcd;
    }
    for x in &mut ints {
        *x = &*x / &gcd;
    }
    ints
}

fn ratvec_rows(vectors: &[RatVector]) -> (Vec<Vec<BigInt>>, usize) {
    let ncols = vectors.first().map_or(0, RatVector::len);
    let rows = vectors
        .iter()
        .map(|v| clear_denominators(v.entries()))
        .collect();
    (rows, ncols)
}

/// Exact rank over the rationals; an empty matrix has rank 0.
pub fn rank(m: &IntMatrix) -> usize {
    rank_rows(m.rows_cloned(), m.ncols())
}

fn kernel_from_rows(
    rows: Vec<Vec<BigInt>>,
    labels: Arc<IndexSet>,
    side: KernelSide,
    source: Provenance,
) -> KernelBasis {
    let ncols = labels.len();
    let vectors = nullspace_rows(rows, ncols)
        .into_iter()
        .map(|ints| {
            RatVector::from_integers(labels.clone(), ints).expect("nullspace width matches labels")
        })
        .collect();
    KernelBasis {
        side,
        vectors,
        source,
    }
}

/// Basis of `{v : M v^t = 0}`: the right annihilators `ker tr M`.
pub fn right_kernel(m: &IntMatrix) -> KernelBasis {
    kernel_from_rows(
        m.rows_cloned(),
        m.col_labels().clone(),
        KernelSide::Right,
        m.provenance(),
    )
}

/// Basis of `{v : v M = 0}`: the left annihilators `ker M`.
pub fn left_kernel(m: &IntMatrix) -> KernelBasis {
    kernel_from_rows(
        m.transposed_rows(),
        m.row_labels().clone(),
        KernelSide::Left,
        m.provenance(),
    )
}

/// Canonical echelon basis of the row space of `M^t` applied from the left,
/// i.e. of the image of `v -> v * M^t`. Used for the `Im tr E` inputs of the
/// dimension accounting.
pub fn image_of_transpose(m: &IntMatrix) -> Vec<RatVector> {
    let ech = rref(m.transposed_rows(), m.nrows());
    ech.rows
        .iter()
        .map(|row| {
            let ints = clear_denominators(row);
            RatVector::from_integers(m.row_labels().clone(), ints)
                .expect("row space width matches labels")
        })
        .collect()
}

/// Exact membership of `v` in the span of `basis`.
pub fn in_span(v: &RatVector, basis: &[RatVector]) -> Result<bool, Error> {
    for b in basis {
        if !b.same_labels(v) {
            return Err(Error::LabelMismatch(
                b.labels().weight(),
                b.labels().depth(),
                v.labels().weight(),
                v.labels().depth(),
            ));
        }
    }
    if v.is_zero() {
        return Ok(true);
    }
    let (mut rows, ncols) = ratvec_rows(basis);
    let base_rank = rank_rows(rows.clone(), ncols);
    rows.push(clear_denominators(v.entries()));
    Ok(rank_rows(rows, v.len()) == base_rank)
}

/// Rank of a list of labeled vectors; their count minus this is the number
/// of dependencies.
pub fn rank_of_vectors(vectors: &[RatVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let (rows, ncols) = ratvec_rows(vectors);
    rank_rows(rows, ncols)
}

/// Do two spans have trivial intersection? By the dimension formula this is
/// `rank(A) + rank(B) == rank(A u B)`.
pub fn trivial_intersection(a: &[RatVector], b: &[RatVector]) -> bool {
    let ra = rank_of_vectors(a);
    let rb = rank_of_vectors(b);
    let mut all: Vec<RatVector> = a.to_vec();
    all.extend_from_slice(b);
    ra + rb == rank_of_vectors(&all)
}
