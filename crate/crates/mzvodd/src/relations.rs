//! Certified linear relations among totally odd depth-graded multiple zeta
//! values of a fixed weight and depth.
//!
//! Every emitted relation is a right annihilator of `C_{N,r}`, certified by
//! exact re-multiplication. The emission order is deterministic: the
//! canonical basis of the right kernel of `E_{N,r}` first (those relations
//! are annotated as such), then a completion to a basis of the right kernel
//! of `C_{N,r}` taken from its own canonical basis. Coefficients are
//! primitive integers with positive leading entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::indices::{IndexSet, OddIndex, RatVector};
use crate::linalg;
use crate::matrix;
use crate::shuffle::{psi_map, Word};

/// Where an emitted relation came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationSource {
    KernelOfE,
    PsiLift,
    KernelOfC,
}

impl RelationSource {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationSource::KernelOfE => "kernel-of-E",
            RelationSource::PsiLift => "psi-lift",
            RelationSource::KernelOfC => "kernel-of-C",
        }
    }
}

/// One relation `sum coeff * zeta_D(index) = 0`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub weight: u32,
    pub depth: usize,
    pub terms: Vec<(OddIndex, BigInt)>,
    pub source: RelationSource,
}

impl Relation {
    pub fn from_vector(v: &RatVector, source: RelationSource) -> Relation {
        let normalized = v.normalized_primitive();
        let mut terms = Vec::new();
        for (pos, idx) in normalized.labels().members().iter().enumerate() {
            let c = normalized.coeff(pos);
            if !c.is_zero() {
                terms.push((idx.clone(), c.to_integer()));
            }
        }
        Relation {
            weight: v.labels().weight(),
            depth: v.labels().depth(),
            terms,
            source,
        }
    }

    pub fn as_vector(&self) -> RatVector {
        let labels = IndexSet::shared(self.weight, self.depth);
        let mut v = RatVector::zeros(labels.clone());
        for (idx, c) in &self.terms {
            let pos = labels.position(idx).expect("relation terms are labeled");
            v.set(pos, BigRational::from_integer(c.clone()));
        }
        v
    }

    /// Exact re-multiplication against `tr C_{N,r}`.
    pub fn certify(&self) -> bool {
        let c = matrix::build_c(self.weight, self.depth);
        matrix::apply_row_transpose(&self.as_vector(), &c)
            .map(|residual| residual.is_zero())
            .unwrap_or(false)
    }

    /// Human-readable form `14 zD(3,9) + 75 zD(5,7) + 84 zD(7,5) = 0`.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0 = 0".to_string();
        }
        let mut out = String::new();
        for (k, (idx, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                if c.sign() == num_bigint::Sign::Minus {
                    out.push('-');
                }
            } else if c.sign() == num_bigint::Sign::Minus {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.magnitude();
            out.push_str(&format!("{mag} zD{idx}"));
        }
        out.push_str(" = 0");
        out
    }
}

/// JSON projection with decimal-string coefficients.
#[derive(Serialize)]
pub struct RelationJson {
    pub weight: u32,
    pub depth: usize,
    pub terms: Vec<RelationTermJson>,
    pub source: &'static str,
}

#[derive(Serialize)]
pub struct RelationTermJson {
    pub index: Vec<u32>,
    pub coeff: String,
}

impl Relation {
    pub fn to_json(&self) -> RelationJson {
        RelationJson {
            weight: self.weight,
            depth: self.depth,
            terms: self
                .terms
                .iter()
                .map(|(idx, c)| RelationTermJson {
                    index: idx.parts().to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
            source: self.source.as_str(),
        }
    }
}

/// All relations at `(N, r)`: a basis of the right kernel of `C_{N,r}`,
/// annotated by origin.
pub fn relations_for(weight: u32, depth: usize) -> Vec<Relation> {
    let c = matrix::build_c(weight, depth);
    let e = matrix::build_e(weight, depth);
    let ker_e = linalg::right_kernel(&e);
    let ker_c = linalg::right_kernel(&c);

    // Lift candidates explain kernel vectors beyond ker tr E: single-letter
    // lifts of depth r-1 kernels and pair lifts of depth r-2 kernels.
    let mut lift_span: Vec<RatVector> = ker_e.vectors.clone();
    if depth >= 3 {
        let mut p = 3u32;
        while p + 3 * (depth as u32 - 1) <= weight {
            let lower = linalg::right_kernel(&matrix::build_e(weight - p, depth - 1));
            for v in &lower.vectors {
                if let Ok(lifted) = psi_map(&Word::single(p), v) {
                    lift_span.push(lifted);
                }
            }
            p += 2;
        }
    }
    if depth >= 4 {
        let mut p = 6u32;
        while p + 3 * (depth as u32 - 2) <= weight {
            let pairs = IndexSet::shared(p, 2);
            let lower = linalg::right_kernel(&matrix::build_e(weight - p, depth - 2));
            for pair in pairs.members() {
                for v in &lower.vectors {
                    if let Ok(lifted) = psi_map(&Word::from_index(pair), v) {
                        lift_span.push(lifted);
                    }
                }
            }
            p += 2;
        }
    }

    let mut emitted: Vec<RatVector> = Vec::new();
    let mut relations = Vec::new();
    for v in &ker_e.vectors {
        emitted.push(v.clone());
        relations.push(Relation::from_vector(v, RelationSource::KernelOfE));
    }
    for v in &ker_c.vectors {
        if linalg::in_span(v, &emitted).unwrap_or(false) {
            continue;
        }
        let source = if linalg::in_span(v, &lift_span).unwrap_or(false) {
            RelationSource::PsiLift
        } else {
            RelationSource::KernelOfC
        };
        emitted.push(v.clone());
        relations.push(Relation::from_vector(v, source));
    }
    debug_assert_eq!(relations.len(), ker_c.dim());
    relations
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeff_of(rel: &Relation, parts: &[u32]) -> BigInt {
        rel.terms
            .iter()
            .find(|(idx, _)| idx.parts() == parts)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    #[test]
    fn weight_12_depth_2_is_the_printed_relation() {
        let rels = relations_for(12, 2);
        assert_eq!(rels.len(), 1);
        let rel = &rels[0];
        assert_eq!(rel.source, RelationSource::KernelOfE);
        assert_eq!(coeff_of(rel, &[3, 9]), BigInt::from(14));
        assert_eq!(coeff_of(rel, &[5, 7]), BigInt::from(75));
        assert_eq!(coeff_of(rel, &[7, 5]), BigInt::from(84));
        assert_eq!(rel.terms.len(), 3);
        assert!(rel.certify());
        assert_eq!(rel.display(), "14 zD(3,9) + 75 zD(5,7) + 84 zD(7,5) = 0");
    }

    #[test]
    fn weight_15_depth_3_contains_the_printed_relation() {
        let rels = relations_for(15, 3);
        assert_eq!(rels.len(), 2);
        let from_e: Vec<&Relation> = rels
            .iter()
            .filter(|r| r.source == RelationSource::KernelOfE)
            .collect();
        assert_eq!(from_e.len(), 1);
        // Printed as -14, 15, 6, 36; the canonical sign rule flips it.
        let rel = from_e[0];
        assert_eq!(coeff_of(rel, &[3, 3, 9]), BigInt::from(14));
        assert_eq!(coeff_of(rel, &[3, 5, 7]), BigInt::from(-15));
        assert_eq!(coeff_of(rel, &[3, 7, 5]), BigInt::from(-6));
        assert_eq!(coeff_of(rel, &[5, 5, 5]), BigInt::from(-36));
        // The completion relation is a lift.
        assert!(rels
            .iter()
            .any(|r| r.source == RelationSource::PsiLift));
        for rel in &rels {
            assert!(rel.certify());
        }
    }

    #[test]
    fn weight_18_depth_4_contains_the_printed_relation() {
        let rels = relations_for(18, 4);
        assert_eq!(rels.len(), 3);
        let from_e: Vec<&Relation> = rels
            .iter()
            .filter(|r| r.source == RelationSource::KernelOfE)
            .collect();
        assert_eq!(from_e.len(), 1);
        let rel = from_e[0];
        assert_eq!(coeff_of(rel, &[3, 3, 3, 9]), BigInt::from(70));
        assert_eq!(coeff_of(rel, &[3, 3, 5, 7]), BigInt::from(-75));
        assert_eq!(coeff_of(rel, &[3, 3, 7, 5]), BigInt::from(-30));
        assert_eq!(coeff_of(rel, &[3, 5, 5, 5]), BigInt::from(36));
        assert_eq!(rel.terms.len(), 4);
        for rel in &rels {
            assert!(rel.certify());
        }
    }

    #[test]
    fn empty_weights_have_no_relations() {
        assert!(relations_for(9, 2).is_empty());
        assert!(relations_for(10, 2).is_empty());
    }

    #[test]
    fn json_projection_uses_decimal_strings() {
        let rels = relations_for(12, 2);
        let json = serde_json::to_string(&rels[0].to_json()).unwrap();
        assert!(json.contains("\"coeff\":\"14\""));
        assert!(json.contains("\"index\":[3,9]"));
        assert!(json.contains("\"weight\":12"));
    }
}
