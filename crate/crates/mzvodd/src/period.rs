//! Restricted even period polynomial spaces `W_{N,r}` and their relation to
//! the annihilators of `E_{N,r}`.
//!
//! `W_{N,2}` is computed by solving the defining functional equation
//! `p - p(x2-x1, x2) + p(x2-x1, x1) = 0` directly over the monomial basis of
//! `P_{N,2}`; the cusp form series `S(x)` enters only as a dimension
//! cross-check. For depth `r >= 3` the space is assembled from products
//! `p(x1,x2) * x3^{n_3-1} ... xr^{n_r-1}`, and the functional equation is
//! re-asserted on every product.

use num_bigint::BigInt;
use serde::Serialize;

use crate::indices::{IndexSet, RatVector};
use crate::linalg;
use crate::matrix;
use crate::poly::{HomPolynomial, LinearForm};
use crate::Error;

/// Basis of `W_{N,r}`, each element a polynomial in `P_{N,r}` satisfying the
/// functional equation exactly.
#[derive(Clone, Debug)]
pub struct WSpaceBasis {
    pub weight: u32,
    pub depth: usize,
    pub basis: Vec<HomPolynomial>,
}

impl WSpaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `p - p(x2-x1, x2, rest) + p(x2-x1, x1, rest)`; zero exactly on `W_{N,r}`.
pub fn functional_equation_residual(p: &HomPolynomial) -> Result<HomPolynomial, Error> {
    let r = p.nvars();
    if r < 2 {
        return Err(Error::DepthOutOfRange(r));
    }
    let mut first = vec![LinearForm::diff(r, 1, 0)];
    for j in 1..r {
        first.push(LinearForm::var(r, j));
    }
    let mut second = vec![LinearForm::diff(r, 1, 0), LinearForm::var(r, 0)];
    for j in 2..r {
        second.push(LinearForm::var(r, j));
    }
    Ok(p.sub(&p.substitute(&first)?).add(&p.substitute(&second)?))
}

/// Solve for `W_{N,2}` over the monomial basis of `P_{N,2}`. The basis is
/// normalized exactly like kernel bases, so cross-module span comparisons
/// are canonical.
pub fn build_w2(weight: u32) -> WSpaceBasis {
    let labels = IndexSet::shared(weight, 2);
    if labels.is_empty() {
        return WSpaceBasis {
            weight,
            depth: 2,
            basis: Vec::new(),
        };
    }
    let degree = (weight - 2) as usize;
    // Row j: coefficients of the residual of the j-th basis monomial over
    // all degree-(N-2) monomials x1^a x2^(d-a), column index a.
    let mut rows = Vec::with_capacity(labels.len());
    for idx in labels.members() {
        let m = HomPolynomial::monomial_of_index(idx);
        let residual = functional_equation_residual(&m).expect("depth 2");
        let mut row = vec![BigInt::from(0); degree + 1];
        for (exps, coeff) in residual.terms() {
            debug_assert!(coeff.is_integer());
            row[exps[0] as usize] = coeff.to_integer();
        }
        rows.push(row);
    }
    // A combination sum a_j m_j lies in W exactly when a annihilates the
    // residual matrix from the left.
    let ncols = degree + 1;
    let transposed: Vec<Vec<BigInt>> = (0..ncols)
        .map(|k| rows.iter().map(|row| row[k].clone()).collect())
        .collect();
    let basis = linalg::nullspace_rows(transposed, labels.len())
        .into_iter()
        .map(|ints| {
            let v = RatVector::from_integers(labels.clone(), ints).expect("width matches");
            HomPolynomial::pi1_inverse(&v)
        })
        .collect();
    WSpaceBasis {
        weight,
        depth: 2,
        basis,
    }
}

/// `W_{N,r}`: the depth-2 solve for `r = 2`, the tensor construction
/// `p(x1,x2) * (monomial in x3..xr)` for `r >= 3`.
pub fn build_w(weight: u32, depth: usize) -> Result<WSpaceBasis, Error> {
    if depth < 2 {
        return Err(Error::DepthOutOfRange(depth));
    }
    if depth == 2 {
        return Ok(build_w2(weight));
    }
    let tail_depth = depth - 2;
    let mut basis = Vec::new();
    let mut n2 = 12u32;
    while n2 + 3 * tail_depth as u32 <= weight {
        let tails = IndexSet::shared(weight - n2, tail_depth);
        if !tails.is_empty() {
            let w2 = build_w2(n2);
            for p in &w2.basis {
                for tail in tails.members() {
                    let mut q = HomPolynomial::zero(depth, weight - depth as u32);
                    for (exps, coeff) in p.terms() {
                        let mut e = Vec::with_capacity(depth);
                        e.extend_from_slice(exps);
                        e.extend(tail.parts().iter().map(|&n| n - 1));
                        q.add_term(e, coeff.clone());
                    }
                    basis.push(q);
                }
            }
        }
        n2 += 2;
    }
    Ok(WSpaceBasis {
        weight,
        depth,
        basis,
    })
}

/// Images `F_{N,r}(pi1(p))` over the basis of `W_{N,r}`, with the two
/// properties of the injection checked: every image annihilates `E_{N,r}`
/// on the left, and the images are linearly independent.
#[derive(Clone, Debug)]
pub struct Theorem37Images {
    pub weight: u32,
    pub depth: usize,
    pub images: Vec<RatVector>,
    pub all_annihilate: bool,
    pub independent: bool,
    pub dim_w: usize,
}

pub fn theorem37_images(weight: u32, depth: usize) -> Result<Theorem37Images, Error> {
    if depth < 3 {
        return Err(Error::DepthOutOfRange(depth));
    }
    let w = build_w(weight, depth)?;
    let labels = IndexSet::shared(weight, depth);
    let e = matrix::build_e(weight, depth);
    let f = matrix::build_f(weight, depth);
    let mut images = Vec::with_capacity(w.basis.len());
    let mut all_annihilate = true;
    for p in &w.basis {
        let v = p.pi1(&labels)?;
        let image = matrix::apply_row(&v, &f)?;
        if !matrix::apply_row(&image, &e)?.is_zero() {
            all_annihilate = false;
        }
        images.push(image);
    }
    let independent = linalg::rank_of_vectors(&images) == images.len();
    Ok(Theorem37Images {
        weight,
        depth,
        images,
        all_annihilate,
        independent,
        dim_w: w.basis.len(),
    })
}

/// Both inclusions of `pi1(W_{N,2}) = ker E_{N,2}`, checked by exact span
/// membership in each direction.
#[derive(Clone, Debug, Serialize)]
pub struct Prop35Report {
    pub weight: u32,
    pub dim_w: usize,
    pub dim_kernel: usize,
    pub w_in_kernel: bool,
    pub kernel_in_w: bool,
}

impl Prop35Report {
    pub fn equal(&self) -> bool {
        self.w_in_kernel && self.kernel_in_w && self.dim_w == self.dim_kernel
    }
}

pub fn check_prop35(weight: u32) -> Prop35Report {
    let labels = IndexSet::shared(weight, 2);
    let w = build_w2(weight);
    let e = matrix::build_e(weight, 2);
    let kernel = linalg::left_kernel(&e);
    let w_vectors: Vec<RatVector> = w
        .basis
        .iter()
        .map(|p| p.pi1(&labels).expect("W basis lies in the labeled space"))
        .collect();
    let w_in_kernel = w_vectors
        .iter()
        .all(|v| linalg::in_span(v, &kernel.vectors).unwrap_or(false));
    let kernel_in_w = kernel
        .vectors
        .iter()
        .all(|v| linalg::in_span(v, &w_vectors).unwrap_or(false));
    Prop35Report {
        weight,
        dim_w: w.dim(),
        dim_kernel: kernel.dim(),
        w_in_kernel,
        kernel_in_w,
    }
}

/// Observation report for the conjectural surjectivity of the theorem map:
/// compares `dim ker E_{N,r}` with `[x^N] S(x) O(x)^{r-2}`. Never asserts.
#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub weight: u32,
    pub depth: usize,
    pub kernel_dim: usize,
    pub predicted: usize,
    pub equal: bool,
}

pub fn check_surjectivity(weight: u32, depth: usize) -> Result<SurjectivityReport, Error> {
    if depth < 3 {
        return Err(Error::DepthOutOfRange(depth));
    }
    let e = matrix::build_e(weight, depth);
    let kernel_dim = e.nrows() - linalg::rank(&e);
    let predicted = predicted_w_dim(weight, depth);
    Ok(SurjectivityReport {
        weight,
        depth,
        kernel_dim,
        predicted,
        equal: kernel_dim == predicted,
    })
}

/// `[x^N] S(x) O(x)^{r-2}`, the exact dimension of `W_{N,r}`.
pub fn predicted_w_dim(weight: u32, depth: usize) -> usize {
    let trunc = weight as usize;
    let series = crate::series::series_s(trunc).mul(&crate::series::series_o(trunc).pow(depth - 2));
    usize::try_from(series.coeff(weight as usize)).unwrap_or(0)
}

/// The antisymmetry `p(x1,x2,...) + p(x2,x1,...) = 0` satisfied on `W_{N,r}`.
pub fn antisymmetry_holds(p: &HomPolynomial) -> bool {
    p.add(&p.swap_first_two()).is_zero()
}

/// `p | (sigma^(j) sigma^(i) + sigma^(i) sigma^(j-1)) = 0` for
/// `r-1 >= i >= j >= 2`.
pub fn sigma_braid_identity_holds(p: &HomPolynomial, i: usize, j: usize) -> Result<bool, Error> {
    let lhs = p.sigma_action(j)?.sigma_action(i)?;
    let rhs = p.sigma_action(i)?.sigma_action(j - 1)?;
    Ok(lhs.add(&rhs).is_zero())
}

/// `p | sigma_r | (1 + sigma_r) = 0`.
pub fn sigma_sum_identity_holds(p: &HomPolynomial) -> Result<bool, Error> {
    let once = p.sigma_sum()?;
    Ok(once.add(&once.sigma_sum()?).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn w2_dimensions_match_the_cusp_series() {
        let s = crate::series::series_s(40);
        for weight in (2..=40u32).step_by(2) {
            let dim = build_w2(weight).dim();
            assert_eq!(
                BigInt::from(dim),
                s.coeff(weight as usize).clone(),
                "dim W_{{{weight},2}}"
            );
        }
    }

    #[test]
    fn w2_trivial_cases() {
        assert_eq!(build_w2(14).dim(), 0);
        assert_eq!(build_w2(11).dim(), 0);
        assert_eq!(build_w2(12).dim(), 1);
    }

    #[test]
    fn w2_basis_satisfies_the_equation_and_evenness() {
        for weight in [12u32, 16, 18, 20, 24] {
            for p in &build_w2(weight).basis {
                assert!(functional_equation_residual(p).unwrap().is_zero());
                for (exps, _) in p.terms() {
                    assert!(exps.iter().all(|e| e % 2 == 0), "odd exponent in W basis");
                }
                assert!(p.restrict_var_to_zero(0).is_zero());
                assert!(p.restrict_var_to_zero(1).is_zero());
            }
        }
    }

    #[test]
    fn w12_generator_in_canonical_coordinates() {
        // x1^2 x2^8 - 3 x1^4 x2^6 + 3 x1^6 x2^4 - x1^8 x2^2: antisymmetric
        // under swapping the coordinate pairs, as the kernel argument forces.
        let w = build_w2(12);
        assert_eq!(w.dim(), 1);
        let labels = IndexSet::shared(12, 2);
        let v = w.basis[0].pi1(&labels).unwrap();
        let ints: Vec<i64> = v
            .entries()
            .iter()
            .map(|x| i64::try_from(x.to_integer()).unwrap())
            .collect();
        assert_eq!(ints, vec![1, -3, 3, -1]);
    }

    #[test]
    fn w12_spans_the_left_kernel() {
        let report = check_prop35(12);
        assert!(report.equal());
        assert_eq!(report.dim_w, 1);
    }

    #[test]
    fn prop35_trivial_weight() {
        let report = check_prop35(14);
        assert!(report.equal());
        assert_eq!(report.dim_w, 0);
    }

    #[test]
    fn prop35_weight_24() {
        let report = check_prop35(24);
        assert!(report.equal());
        assert_eq!(report.dim_w, 2);
    }

    #[test]
    fn w_depth3_dimensions() {
        assert_eq!(build_w(15, 3).unwrap().dim(), 1);
        assert_eq!(build_w(13, 3).unwrap().dim(), 0);
        assert_eq!(predicted_w_dim(15, 3), 1);
        assert_eq!(predicted_w_dim(13, 3), 0);
    }

    #[test]
    fn w_dimensions_match_series_up_to_30() {
        for r in [3usize, 4] {
            for n in 3 * r as u32..=30 {
                assert_eq!(
                    build_w(n, r).unwrap().dim(),
                    predicted_w_dim(n, r),
                    "dim W at ({n},{r})"
                );
            }
        }
    }

    #[test]
    fn w_24_4_dimension_from_series_oracle() {
        // [x^24] S*O^2 = S_12*(O^2)_12 + S_16*(O^2)_8 + S_18*(O^2)_6
        //              = 1*4 + 1*2 + 1*1 = 7.
        assert_eq!(predicted_w_dim(24, 4), 7);
        assert_eq!(build_w(24, 4).unwrap().dim(), 7);
    }

    #[test]
    fn w_products_satisfy_the_equation() {
        for (n, r) in [(15u32, 3usize), (17, 3), (18, 4), (20, 4)] {
            let w = build_w(n, r).unwrap();
            assert_eq!(w.dim(), predicted_w_dim(n, r));
            for p in &w.basis {
                assert!(functional_equation_residual(p).unwrap().is_zero());
                for i in 0..r {
                    assert!(p.restrict_var_to_zero(i).is_zero());
                }
            }
        }
    }

    #[test]
    fn sigma_identities_on_w() {
        for (n, r) in [(17u32, 3usize), (18, 4)] {
            let w = build_w(n, r).unwrap();
            assert!(!w.basis.is_empty());
            for p in &w.basis {
                let s1 = p.sigma_action(1).unwrap();
                assert!(p.add(&s1).is_zero());
                assert!(antisymmetry_holds(p));
                for i in 2..r {
                    for j in 2..=i {
                        assert!(
                            sigma_braid_identity_holds(p, i, j).unwrap(),
                            "braid ({i},{j}) at ({n},{r})"
                        );
                    }
                }
                assert!(sigma_sum_identity_holds(p).unwrap());
            }
        }
    }

    #[test]
    fn sigma_of_w12_generator_is_minus_itself() {
        let w = build_w2(12);
        let p = &w.basis[0];
        let s1 = p.sigma_action(1).unwrap();
        assert_eq!(s1, p.scale(&-BigRational::one()));
    }

    #[test]
    fn one_plus_sigma_sum_matches_one_action_step() {
        // On monomials, | (1 + sigma_r) is the single-step action, so the
        // coefficients restricted to the labeled space reproduce E.
        let labels = IndexSet::shared(15, 3);
        let e = matrix::build_e(15, 3);
        for (pos, idx) in labels.members().iter().enumerate() {
            let m = HomPolynomial::monomial_of_index(idx);
            let expanded = m.add(&m.sigma_sum().unwrap());
            let v = RatVector::unit(labels.clone(), pos);
            let expected = matrix::apply_row(&v, &e).unwrap();
            for (tpos, tidx) in labels.members().iter().enumerate() {
                let exps: Vec<u32> = tidx.parts().iter().map(|&n| n - 1).collect();
                assert_eq!(
                    expanded.coeff(&exps),
                    expected.coeff(tpos).clone(),
                    "coefficient mismatch at {tidx}"
                );
            }
        }
    }

    #[test]
    fn theorem37_images_at_15_3() {
        let t = theorem37_images(15, 3).unwrap();
        assert_eq!(t.images.len(), 1);
        assert!(t.all_annihilate);
        assert!(t.independent);
        assert!(!t.images[0].is_zero());
    }

    #[test]
    fn theorem37_empty_when_w_is_trivial() {
        let t = theorem37_images(13, 3).unwrap();
        assert!(t.images.is_empty());
        assert!(t.all_annihilate && t.independent);
    }

    #[test]
    fn surjectivity_observations() {
        let s = check_surjectivity(15, 3).unwrap();
        assert!(s.equal && s.kernel_dim == 1);
        let s = check_surjectivity(13, 3).unwrap();
        assert!(s.equal && s.kernel_dim == 0);
    }
}
