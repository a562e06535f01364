//! Totally odd index sets `S_{N,r}` and the labeled coordinate space.
//!
//! `S_{N,r}` is the set of compositions of `N` into `r` odd parts `>= 3`,
//! ordered ascending lexicographically. That order reproduces the row and
//! column order of all matrices built downstream, so it is fixed once here
//! and never revisited.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

/// A composition of its weight into odd parts `>= 3`; the label type for
/// matrix rows and columns and for relation terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OddIndex(Vec<u32>);

impl OddIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self, Error> {
        if parts.iter().any(|&p| p < 3 || p % 2 == 0) {
            return Err(Error::InvalidIndex(parts));
        }
        Ok(OddIndex(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Concatenation `(self, tail)`, used by the embedding maps.
    pub fn concat(&self, tail: &OddIndex) -> OddIndex {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&tail.0);
        OddIndex(parts)
    }
}

impl fmt::Display for OddIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The ordered set `S_{N,r}` together with a position lookup table.
///
/// Degenerate parameters (parity mismatch, `N < 3r`) give an empty set, the
/// empty-matrix convention.
#[derive(Debug)]
pub struct IndexSet {
    weight: u32,
    depth: usize,
    members: Vec<OddIndex>,
    position: HashMap<OddIndex, usize>,
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.depth == other.depth
    }
}
impl Eq for IndexSet {}

impl IndexSet {
    /// Enumerate `S_{N,r}` in ascending lexicographic order.
    pub fn enumerate(weight: u32, depth: usize) -> IndexSet {
        let mut members = Vec::new();
        let mut current = Vec::with_capacity(depth);
        fill(weight, depth, &mut current, &mut members);
        let position = members
            .iter()
            .enumerate()
            .map(|(i, idx)| (idx.clone(), i))
            .collect();
        IndexSet {
            weight,
            depth,
            members,
            position,
        }
    }

    /// Shared, memoized handle to `S_{N,r}`. All labeled values in the crate
    /// hold one of these so label comparisons are `(N, r)` comparisons.
    pub fn shared(weight: u32, depth: usize) -> Arc<IndexSet> {
        type Memo = Mutex<HashMap<(u32, usize), Arc<IndexSet>>>;
        static CACHE: OnceLock<Memo> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((weight, depth))
            .or_insert_with(|| Arc::new(IndexSet::enumerate(weight, depth)))
            .clone()
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[OddIndex] {
        &self.members
    }

    pub fn at(&self, pos: usize) -> &OddIndex {
        &self.members[pos]
    }

    pub fn position(&self, idx: &OddIndex) -> Option<usize> {
        self.position.get(idx).copied()
    }

    pub fn position_of_parts(&self, parts: &[u32]) -> Option<usize> {
        let idx = OddIndex::new(parts.to_vec()).ok()?;
        self.position(&idx)
    }
}

fn fill(weight: u32, depth: usize, current: &mut Vec<u32>, out: &mut Vec<OddIndex>) {
    if depth == 0 {
        if weight == 0 {
            out.push(OddIndex(current.clone()));
        }
        return;
    }
    if weight < 3 * depth as u32 || !(weight as usize + depth).is_multiple_of(2) {
        return;
    }
    let remaining = 3 * (depth as u32 - 1);
    let mut part = 3;
    while part + remaining <= weight {
        current.push(part);
        fill(weight - part, depth - 1, current, out);
        current.pop();
        part += 2;
    }
}

/// `|S_{N,r}|` by stars and bars, without materializing the set: writing
/// each part as `2k+3` counts solutions of `sum k_i = (N-3r)/2`.
pub fn index_count(weight: u32, depth: usize) -> u64 {
    if depth == 0 {
        return u64::from(weight == 0);
    }
    let r = depth as u32;
    if weight < 3 * r || !(weight + r).is_multiple_of(2) {
        return 0;
    }
    let k = u64::from((weight - 3 * r) / 2);
    binomial_u64(k + depth as u64 - 1, depth as u64 - 1)
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// A row vector in the coordinate space labeled by `S_{N,r}`, stored dense
/// in label order with exact rational entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatVector {
    labels: Arc<IndexSet>,
    entries: Vec<BigRational>,
}

impl RatVector {
    pub fn zeros(labels: Arc<IndexSet>) -> RatVector {
        let entries = vec![BigRational::zero(); labels.len()];
        RatVector { labels, entries }
    }

    /// Unit vector at a label position.
    pub fn unit(labels: Arc<IndexSet>, pos: usize) -> RatVector {
        let mut v = RatVector::zeros(labels);
        v.entries[pos] = BigRational::one();
        v
    }

    pub fn from_entries(labels: Arc<IndexSet>, entries: Vec<BigRational>) -> Result<RatVector, Error> {
        if entries.len() != labels.len() {
            return Err(Error::LabelMismatch(
                labels.weight(),
                labels.depth(),
                labels.weight(),
                entries.len(),
            ));
        }
        Ok(RatVector { labels, entries })
    }

    pub fn from_integers<I: Into<BigInt>>(labels: Arc<IndexSet>, entries: Vec<I>) -> Result<RatVector, Error> {
        let entries = entries
            .into_iter()
            .map(|x| BigRational::from_integer(x.into()))
            .collect();
        RatVector::from_entries(labels, entries)
    }

    pub fn labels(&self) -> &Arc<IndexSet> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn coeff(&self, pos: usize) -> &BigRational {
        &self.entries[pos]
    }

    pub fn coeff_of(&self, idx: &OddIndex) -> Option<&BigRational> {
        self.labels.position(idx).map(|p| &self.entries[p])
    }

    pub fn set(&mut self, pos: usize, value: BigRational) {
        self.entries[pos] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn same_labels(&self, other: &RatVector) -> bool {
        self.labels == other.labels
    }

    pub fn add(&self, other: &RatVector) -> Result<RatVector, Error> {
        if !self.same_labels(other) {
            return Err(Error::LabelMismatch(
                self.labels.weight(),
                self.labels.depth(),
                other.labels.weight(),
                other.labels.depth(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RatVector {
            labels: self.labels.clone(),
            entries,
        })
    }

    pub fn scale(&self, c: &BigRational) -> RatVector {
        RatVector {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Rescale to a primitive integer vector whose first nonzero entry is
    /// positive; the canonical representative of the line through `self`.
    pub fn normalized_primitive(&self) -> RatVector {
        let ints = crate::linalg::clear_denominators(&self.entries);
        RatVector {
            labels: self.labels.clone(),
            entries: ints.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    /// Entries as integers; `None` if any entry is non-integral.
    pub fn integer_entries(&self) -> Option<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
