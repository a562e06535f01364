//! The labeled integer matrices `E_{N,r}`, `E^(q)_{N,r}`, `C_{N,r}` and
//! `F_{N,r} = E - I`, plus the embedding maps.
//!
//! Rows and columns are labeled by `S_{N,r}` in the fixed order. Storage is
//! dense row-major arbitrary-precision integers: at desk scale density is
//! affordable, and entries grow under products so fixed-width integers are
//! ruled out. Every matrix carries its build parameters so cached artifacts
//! are self-describing.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ihara::e_coeff;
use crate::indices::{IndexSet, OddIndex, RatVector};
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixKind {
    E,
    Eq,
    C,
    F,
    Identity,
    Product,
    Custom,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::E => "E",
            MatrixKind::Eq => "Eq",
            MatrixKind::C => "C",
            MatrixKind::F => "F",
            MatrixKind::Identity => "I",
            MatrixKind::Product => "product",
            MatrixKind::Custom => "custom",
        }
    }
}

/// Build parameters embedded in every matrix value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Provenance {
    pub kind: MatrixKind,
    pub weight: u32,
    pub depth: usize,
    pub q: Option<usize>,
}

/// Dense square integer matrix labeled by `S_{N,r}`; 0 x 0 when the label
/// set is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    row_labels: Arc<IndexSet>,
    col_labels: Arc<IndexSet>,
    entries: Vec<BigInt>,
    provenance: Provenance,
}

impl IntMatrix {
    fn build(labels: Arc<IndexSet>, provenance: Provenance, f: impl Fn(&OddIndex, &OddIndex) -> BigInt) -> IntMatrix {
        let n = labels.len();
        let mut entries = Vec::with_capacity(n * n);
        for m in labels.members() {
            for nn in labels.members() {
                entries.push(f(m, nn));
            }
        }
        IntMatrix {
            row_labels: labels.clone(),
            col_labels: labels,
            entries,
            provenance,
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn row_labels(&self) -> &Arc<IndexSet> {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &Arc<IndexSet> {
        &self.col_labels
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn kind(&self) -> MatrixKind {
        self.provenance.kind
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.ncols() + j]
    }

    /// Entry by labels.
    pub fn entry(&self, row: &OddIndex, col: &OddIndex) -> Option<&BigInt> {
        let i = self.row_labels.position(row)?;
        let j = self.col_labels.position(col)?;
        Some(self.get(i, j))
    }

    pub fn rows_cloned(&self) -> Vec<Vec<BigInt>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn transposed_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.ncols())
            .map(|j| (0..self.nrows()).map(|i| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn from_rows(
        row_labels: Arc<IndexSet>,
        col_labels: Arc<IndexSet>,
        rows: Vec<Vec<BigInt>>,
        provenance: Provenance,
    ) -> Result<IntMatrix, Error> {
        if rows.len() != row_labels.len() || rows.iter().any(|r| r.len() != col_labels.len()) {
            return Err(Error::LabelMismatch(
                row_labels.weight(),
                row_labels.depth(),
                col_labels.weight(),
                col_labels.depth(),
            ));
        }
        Ok(IntMatrix {
            row_labels,
            col_labels,
            entries: rows.into_iter().flatten().collect(),
            provenance,
        })
    }
}

/// `E_{N,r}` with entries `e(m; n)` in the fixed index order.
pub fn build_e(weight: u32, depth: usize) -> IntMatrix {
    let labels = IndexSet::shared(weight, depth);
    IntMatrix::build(
        labels,
        Provenance {
            kind: MatrixKind::E,
            weight,
            depth,
            q: None,
        },
        |m, n| e_coeff(m.parts(), n.parts()),
    )
}

/// `E^(q)_{N,r}`: the first `r - q` parts must match exactly, the last `q`
/// parts contribute one action step. `q = r` reproduces `E_{N,r}`.
pub fn build_eq(weight: u32, depth: usize, q: usize) -> Result<IntMatrix, Error> {
    if q < 2 || q > depth {
        return Err(Error::QOutOfRange { q, r: depth });
    }
    let labels = IndexSet::shared(weight, depth);
    let head = depth - q;
    Ok(IntMatrix::build(
        labels,
        Provenance {
            kind: MatrixKind::Eq,
            weight,
            depth,
            q: Some(q),
        },
        |m, n| {
            if m.parts()[..head] != n.parts()[..head] {
                BigInt::zero()
            } else {
                e_coeff(&m.parts()[head..], &n.parts()[head..])
            }
        },
    ))
}

/// Identity matrix on the labeled space.
pub fn identity(weight: u32, depth: usize) -> IntMatrix {
    let labels = IndexSet::shared(weight, depth);
    IntMatrix::build(
        labels,
        Provenance {
            kind: MatrixKind::Identity,
            weight,
            depth,
            q: None,
        },
        |m, n| if m == n { BigInt::one() } else { BigInt::zero() },
    )
}

/// `F_{N,r} = E_{N,r} - I_{N,r}`.
pub fn build_f(weight: u32, depth: usize) -> IntMatrix {
    let mut e = build_e(weight, depth);
    let n = e.nrows();
    for i in 0..n {
        e.entries[i * n + i] -= BigInt::one();
    }
    e.provenance.kind = MatrixKind::F;
    e
}

/// `C_{N,r} = E^(2) E^(3) ... E^(r-1) E` by exact products; `I` at depth 1
/// and `E` itself at depth 2.
pub fn build_c(weight: u32, depth: usize) -> IntMatrix {
    let prov = Provenance {
        kind: MatrixKind::C,
        weight,
        depth,
        q: None,
    };
    let mut acc = match depth {
        0 | 1 => identity(weight, depth),
        _ => {
            let mut acc: Option<IntMatrix> = None;
            for q in 2..depth {
                let factor = build_eq(weight, depth, q).expect("q in range");
                acc = Some(match acc {
                    None => factor,
                    Some(a) => matmul(&a, &factor).expect("labels agree"),
                });
            }
            let e = build_e(weight, depth);
            match acc {
                None => e,
                Some(a) => matmul(&a, &e).expect("labels agree"),
            }
        }
    };
    acc.provenance = prov;
    acc
}

/// Exact matrix product; labels must be conformable.
pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, Error> {
    if a.col_labels != b.row_labels {
        return Err(Error::LabelMismatch(
            a.col_labels.weight(),
            a.col_labels.depth(),
            b.row_labels.weight(),
            b.row_labels.depth(),
        ));
    }
    let n = a.nrows();
    let k = a.ncols();
    let m = b.ncols();
    let mut entries = vec![BigInt::zero(); n * m];
    for i in 0..n {
        for l in 0..k {
            let alk = a.get(i, l);
            if alk.is_zero() {
                continue;
            }
            for j in 0..m {
                let blj = b.get(l, j);
                if !blj.is_zero() {
                    entries[i * m + j] += alk * blj;
                }
            }
        }
    }
    Ok(IntMatrix {
        row_labels: a.row_labels.clone(),
        col_labels: b.col_labels.clone(),
        entries,
        provenance: Provenance {
            kind: MatrixKind::Product,
            weight: a.provenance.weight,
            depth: a.provenance.depth,
            q: None,
        },
    })
}

/// The induced linear map `M(v) = v * M` on row vectors.
pub fn apply_row(v: &RatVector, m: &IntMatrix) -> Result<RatVector, Error> {
    if v.labels() != m.row_labels() {
        return Err(Error::LabelMismatch(
            v.labels().weight(),
            v.labels().depth(),
            m.row_labels.weight(),
            m.row_labels.depth(),
        ));
    }
    let mut out = RatVector::zeros(m.col_labels.clone());
    for j in 0..m.ncols() {
        let mut acc = BigRational::zero();
        for i in 0..m.nrows() {
            let vi = v.coeff(i);
            if !vi.is_zero() {
                acc += vi * BigRational::from_integer(m.get(i, j).clone());
            }
        }
        out.set(j, acc);
    }
    Ok(out)
}

/// The transpose map `tr M (v) = v * M^t`; `v` is a right annihilator of
/// `M` exactly when this vanishes.
pub fn apply_row_transpose(v: &RatVector, m: &IntMatrix) -> Result<RatVector, Error> {
    if v.labels() != m.col_labels() {
        return Err(Error::LabelMismatch(
            v.labels().weight(),
            v.labels().depth(),
            m.col_labels.weight(),
            m.col_labels.depth(),
        ));
    }
    let mut out = RatVector::zeros(m.row_labels.clone());
    for i in 0..m.nrows() {
        let mut acc = BigRational::zero();
        for j in 0..m.ncols() {
            let vj = v.coeff(j);
            if !vj.is_zero() {
                acc += vj * BigRational::from_integer(m.get(i, j).clone());
            }
        }
        out.set(i, acc);
    }
    Ok(out)
}

/// The injective embedding placing `v` (over `S_{N-p,q}`) at the positions
/// of `S_{N,r}` whose first `r - q` parts equal `prefix`.
pub fn phi_embed(prefix: &OddIndex, v: &RatVector, target: &Arc<IndexSet>) -> Result<RatVector, Error> {
    let src = v.labels();
    if prefix.weight() + src.weight() != target.weight()
        || prefix.depth() + src.depth() != target.depth()
    {
        return Err(Error::EmbeddingMismatch(
            prefix.weight(),
            prefix.depth(),
            src.weight(),
            src.depth(),
            target.weight(),
            target.depth(),
        ));
    }
    let mut out = RatVector::zeros(target.clone());
    for (pos, idx) in src.members().iter().enumerate() {
        let c = v.coeff(pos);
        if c.is_zero() {
            continue;
        }
        let full = prefix.concat(idx);
        let tpos = target.position(&full).ok_or_else(|| {
            Error::EmbeddingMismatch(
                prefix.weight(),
                prefix.depth(),
                src.weight(),
                src.depth(),
                target.weight(),
                target.depth(),
            )
        })?;
        out.set(tpos, c.clone());
    }
    Ok(out)
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ihara::c_coeff;

    fn as_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
        (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| i64::try_from(m.get(i, j)).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn e_12_2_matches_the_print() {
        let e = build_e(12, 2);
        assert_eq!(
            as_i64(&e),
            vec![
                vec![0, 0, 0, 1],
                vec![-6, 0, 1, 6],
                vec![-15, -14, 15, 15],
                vec![-27, -42, 42, 28],
            ]
        );
    }

    #[test]
    fn e_15_3_first_and_last_rows_match_the_print() {
        let e = build_e(15, 3);
        let rows = as_i64(&e);
        assert_eq!(rows[0], vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(rows[9], vec![-27, -42, 42, 0, 0, 0, -42, 0, 42, 28]);
    }

    #[test]
    fn empty_by_parity() {
        assert!(build_e(9, 2).is_empty());
        assert!(build_f(9, 2).is_empty());
    }

    #[test]
    fn eq_at_full_depth_is_e() {
        let a = build_eq(15, 3, 3).unwrap();
        let b = build_e(15, 3);
        assert_eq!(a.entries, b.entries);
        assert!(build_eq(15, 3, 4).is_err());
        assert!(build_eq(15, 3, 1).is_err());
    }

    #[test]
    fn eq_embeds_lower_depth_entries() {
        let eq = build_eq(15, 3, 2).unwrap();
        let i339 = OddIndex::new(vec![3, 3, 9]).unwrap();
        let i393 = OddIndex::new(vec![3, 9, 3]).unwrap();
        assert_eq!(eq.entry(&i339, &i339).unwrap(), &BigInt::zero());
        assert_eq!(eq.entry(&i339, &i393).unwrap(), &BigInt::one());
        // Prefix mismatch kills the entry.
        let i555 = OddIndex::new(vec![5, 5, 5]).unwrap();
        assert_eq!(eq.entry(&i339, &i555).unwrap(), &BigInt::zero());
    }

    #[test]
    fn eq_is_block_diagonal_with_lower_depth_blocks() {
        // Entries vanish off the prefix blocks; on a block they reproduce
        // the depth-q matrix of the remaining weight.
        for (n, r, q) in [(15u32, 3usize, 2usize), (18, 4, 2), (18, 4, 3)] {
            let eq = build_eq(n, r, q).unwrap();
            let labels = IndexSet::shared(n, r);
            let head = r - q;
            for m in labels.members() {
                for t in labels.members() {
                    let expect = if m.parts()[..head] == t.parts()[..head] {
                        e_coeff(&m.parts()[head..], &t.parts()[head..])
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(eq.entry(m, t).unwrap(), &expect, "at ({m},{t})");
                }
            }
        }
    }

    #[test]
    fn matmul_rejects_label_mismatch() {
        let a = build_e(12, 2);
        let b = build_e(14, 2);
        assert!(matmul(&a, &b).is_err());
    }

    #[test]
    fn c_degenerate_depths() {
        let c1 = build_c(7, 1);
        assert_eq!(as_i64(&c1), vec![vec![1]]);
        let c2 = build_c(12, 2);
        assert_eq!(c2.entries, build_e(12, 2).entries);
    }

    #[test]
    fn c_15_3_equals_eq_times_e_and_the_nested_oracle() {
        let c = build_c(15, 3);
        let prod = matmul(&build_eq(15, 3, 2).unwrap(), &build_e(15, 3)).unwrap();
        assert_eq!(c.entries, prod.entries);
        let labels = IndexSet::shared(15, 3);
        for m in labels.members() {
            for n in labels.members() {
                assert_eq!(
                    c.entry(m, n).unwrap(),
                    &c_coeff(m.parts(), n.parts()),
                    "C entry differs from nested action at ({m}, {n})"
                );
            }
        }
    }

    #[test]
    fn f_subtracts_identity_on_the_diagonal() {
        let f = build_f(12, 2);
        let diag: Vec<i64> = (0..4).map(|i| i64::try_from(f.get(i, i)).unwrap()).collect();
        assert_eq!(diag, vec![-1, -1, 14, 27]);
        let f15 = build_f(15, 3);
        assert_eq!(as_i64(&f15)[0], vec![-1, 0, 0, 1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn identity_is_neutral_for_matmul() {
        let e = build_e(12, 2);
        let i = identity(12, 2);
        assert_eq!(matmul(&i, &e).unwrap().entries, e.entries);
        assert_eq!(matmul(&e, &i).unwrap().entries, e.entries);
    }

    #[test]
    fn printed_kernel_vector_annihilates_on_the_right() {
        let e = build_e(12, 2);
        let v = RatVector::from_integers(e.col_labels().clone(), vec![14, 75, 84, 0]).unwrap();
        assert!(apply_row_transpose(&v, &e).unwrap().is_zero());
    }

    #[test]
    fn phi_embedding_places_prefixed_blocks() {
        let s12 = IndexSet::shared(12, 2);
        let s15 = IndexSet::shared(15, 3);
        let v = RatVector::from_integers(s12, vec![14, 75, 84, 0]).unwrap();
        let prefix = OddIndex::new(vec![3]).unwrap();
        let out = phi_embed(&prefix, &v, &s15).unwrap();
        let got: Vec<i64> = out
            .entries()
            .iter()
            .map(|x| i64::try_from(x.to_integer()).unwrap())
            .collect();
        assert_eq!(got, vec![14, 75, 84, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn phi_embedding_of_unit_vectors() {
        let s12 = IndexSet::shared(12, 2);
        let s17 = IndexSet::shared(17, 3);
        let pos57 = s12.position(&OddIndex::new(vec![5, 7]).unwrap()).unwrap();
        let v = RatVector::unit(s12.clone(), pos57);
        let prefix = OddIndex::new(vec![5]).unwrap();
        let out = phi_embed(&prefix, &v, &s17).unwrap();
        let target = s17.position(&OddIndex::new(vec![5, 5, 7]).unwrap()).unwrap();
        for (pos, c) in out.entries().iter().enumerate() {
            if pos == target {
                assert!(c.is_one());
            } else {
                assert!(c.is_zero());
            }
        }
        // Zero vector embeds to zero.
        let z = RatVector::zeros(s12);
        assert!(phi_embed(&prefix, &z, &s17).unwrap().is_zero());
    }

    #[test]
    fn phi_rejects_weight_mismatch() {
        let s12 = IndexSet::shared(12, 2);
        let s15 = IndexSet::shared(15, 3);
        let v = RatVector::zeros(s12);
        let prefix = OddIndex::new(vec![5]).unwrap();
        assert!(phi_embed(&prefix, &v, &s15).is_err());
    }
}
