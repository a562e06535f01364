//! Sparse homogeneous polynomials with exact rational coefficients.
//!
//! The monomial space `P_{N,r}` is spanned by `x_1^{n_1-1} ... x_r^{n_r-1}`
//! over the totally odd indices of weight `N` and depth `r`; `pi1` is the
//! positional coordinate isomorphism onto the labeled vector space. Monomials
//! are kept in lexicographic exponent order, consistent with the index order
//! via `n_i = e_i + 1`, so `pi1` is a positional copy.
//!
//! Substitution accepts integer linear forms only; that covers every
//! composition formula in the pipeline and keeps coefficients integral.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::indices::{IndexSet, OddIndex, RatVector};
use crate::Error;

/// An integer linear form `c_1 x_1 + ... + c_m x_m` over a target variable
/// set of size `m`. No constant term by design.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigInt>) -> LinearForm {
        LinearForm { coeffs }
    }

    /// The form `x_j` (0-based) over `nvars` variables.
    pub fn var(nvars: usize, j: usize) -> LinearForm {
        let mut coeffs = vec![BigInt::zero(); nvars];
        coeffs[j] = BigInt::one();
        LinearForm { coeffs }
    }

    /// The form `x_j - x_k` (0-based) over `nvars` variables.
    pub fn diff(nvars: usize, j: usize, k: usize) -> LinearForm {
        let mut coeffs = vec![BigInt::zero(); nvars];
        coeffs[j] = BigInt::one();
        coeffs[k] -= BigInt::one();
        LinearForm { coeffs }
    }

    /// The zero form, used for the `x_0 = 0` boundary convention.
    pub fn zero(nvars: usize) -> LinearForm {
        LinearForm {
            coeffs: vec![BigInt::zero(); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    fn to_poly(&self) -> HomPolynomial {
        let mut p = HomPolynomial::zero(self.coeffs.len(), 1);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; self.coeffs.len()];
                exps[j] = 1;
                p.terms.insert(exps, BigRational::from_integer(c.clone()));
            }
        }
        p
    }
}

/// A homogeneous polynomial, stored as a map from exponent vectors to
/// nonzero rational coefficients. The zero polynomial keeps its nominal
/// degree so homogeneity bookkeeping survives cancellation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPolynomial {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl HomPolynomial {
    pub fn zero(nvars: usize, degree: u32) -> HomPolynomial {
        HomPolynomial {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial 1 in zero variables, the unit for the
    /// depth-zero edge of the Ihara action.
    pub fn one() -> HomPolynomial {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigRational::one());
        HomPolynomial {
            nvars: 0,
            degree: 0,
            terms,
        }
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, coeff: BigRational) -> HomPolynomial {
        assert_eq!(exponents.len(), nvars, "exponent vector length != nvars");
        let degree = exponents.iter().sum();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponents, coeff);
        }
        HomPolynomial {
            nvars,
            degree,
            terms,
        }
    }

    /// `x_1^{n_1-1} ... x_r^{n_r-1}` for a totally odd index.
    pub fn monomial_of_index(idx: &OddIndex) -> HomPolynomial {
        let exps: Vec<u32> = idx.parts().iter().map(|&n| n - 1).collect();
        HomPolynomial::monomial(idx.depth(), exps, BigRational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> BigRational {
        self.terms.get(exponents).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: BigRational) {
        assert_eq!(exponents.len(), self.nvars);
        assert_eq!(exponents.iter().sum::<u32>(), self.degree, "inhomogeneous term");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &HomPolynomial) -> HomPolynomial {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.nvars, other.nvars, "variable count mismatch in add");
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HomPolynomial) -> HomPolynomial {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> HomPolynomial {
        if c.is_zero() {
            return HomPolynomial::zero(self.nvars, self.degree);
        }
        HomPolynomial {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Exact product; degrees add, variable sets must agree.
    pub fn mul(&self, other: &HomPolynomial) -> HomPolynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch in mul");
        let mut out = HomPolynomial::zero(self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Substitute one linear form per variable; the result is homogeneous of
    /// the same degree over the forms' variable set.
    pub fn substitute(&self, images: &[LinearForm]) -> Result<HomPolynomial, Error> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch {
                vars: self.nvars,
                forms: images.len(),
            });
        }
        let target_vars = images.first().map_or(0, LinearForm::nvars);
        for form in images {
            if form.nvars() != target_vars {
                return Err(Error::ArityMismatch {
                    vars: target_vars,
                    forms: form.nvars(),
                });
            }
        }
        // Power tables are shared across terms; exponents repeat heavily.
        let mut powers: Vec<Vec<HomPolynomial>> = images
            .iter()
            .map(|form| vec![unit_poly(target_vars), form.to_poly()])
            .collect();
        let mut out = HomPolynomial::zero(target_vars, self.degree);
        for (exps, coeff) in &self.terms {
            let mut acc = unit_poly(target_vars).scale(coeff);
            for (i, &e) in exps.iter().enumerate() {
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().mul(&table[1]);
                    table.push(next);
                }
                acc = acc.mul(&table[e as usize]);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// The coordinate vector of `self` in the labeled monomial space; errors
    /// if a monomial falls outside the space.
    pub fn pi1(&self, labels: &Arc<IndexSet>) -> Result<RatVector, Error> {
        let mut v = RatVector::zeros(labels.clone());
        for (exps, coeff) in &self.terms {
            let parts: Vec<u32> = exps.iter().map(|&e| e + 1).collect();
            let pos = labels.position_of_parts(&parts).ok_or_else(|| {
                Error::MonomialOutsideSpace(exps.clone(), labels.weight(), labels.depth())
            })?;
            v.set(pos, coeff.clone());
        }
        Ok(v)
    }

    /// Inverse of [`HomPolynomial::pi1`].
    pub fn pi1_inverse(v: &RatVector) -> HomPolynomial {
        let labels = v.labels();
        let nvars = labels.depth();
        let degree = labels.weight() - labels.depth() as u32;
        let mut out = HomPolynomial::zero(nvars, degree);
        for (pos, idx) in labels.members().iter().enumerate() {
            let c = v.coeff(pos);
            if !c.is_zero() {
                let exps: Vec<u32> = idx.parts().iter().map(|&n| n - 1).collect();
                out.add_term(exps, c.clone());
            }
        }
        out
    }

    /// The action `f | sigma_r^(i)` (1-based `i` in `1..=r-1`):
    /// `f(x_{i+1}-x_i, x_1,...,^x_{i+1},...,x_r) - f(x_{i+1}-x_i, x_1,...,^x_i,...,x_r)`.
    pub fn sigma_action(&self, i: usize) -> Result<HomPolynomial, Error> {
        let r = self.nvars;
        if i < 1 || i >= r {
            return Err(Error::SigmaOutOfRange { i, max: r.saturating_sub(1) });
        }
        let first = LinearForm::diff(r, i, i - 1);
        let skip = |omit: usize| -> Vec<LinearForm> {
            let mut images = Vec::with_capacity(r);
            images.push(first.clone());
            for j in 0..r {
                if j != omit {
                    images.push(LinearForm::var(r, j));
                }
            }
            images
        };
        let plus = self.substitute(&skip(i))?;
        let minus = self.substitute(&skip(i - 1))?;
        Ok(plus.sub(&minus))
    }

    /// Sum of `f | sigma_r^(i)` over all `i`, written `f | sigma_r`.
    pub fn sigma_sum(&self) -> Result<HomPolynomial, Error> {
        let mut acc = HomPolynomial::zero(self.nvars, self.degree);
        for i in 1..self.nvars {
            acc = acc.add(&self.sigma_action(i)?);
        }
        Ok(acc)
    }

    /// Restriction `x_i = 0` (0-based), still over the same variable set.
    pub fn restrict_var_to_zero(&self, i: usize) -> HomPolynomial {
        let mut out = HomPolynomial::zero(self.nvars, self.degree);
        for (exps, coeff) in &self.terms {
            if exps[i] == 0 {
                out.add_term(exps.clone(), coeff.clone());
            }
        }
        out
    }

    /// Swap of the first two variables, for the antisymmetry identity.
    pub fn swap_first_two(&self) -> HomPolynomial {
        assert!(self.nvars >= 2);
        let mut out = HomPolynomial::zero(self.nvars, self.degree);
        for (exps, coeff) in &self.terms {
            let mut e = exps.clone();
            e.swap(0, 1);
            out.add_term(e, coeff.clone());
        }
        out
    }
}

fn unit_poly(nvars: usize) -> HomPolynomial {
    let mut p = HomPolynomial::zero(nvars, 0);
    p.terms.insert(vec![0; nvars], BigRational::one());
    p
}

impl fmt::Display for HomPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{coeff}")?;
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    write!(f, "*x{}^{}", j + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn idx(parts: &[u32]) -> OddIndex {
        OddIndex::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn monomial_of_index_examples() {
        let p = HomPolynomial::monomial_of_index(&idx(&[3, 9]));
        assert_eq!(p.coeff(&[2, 8]), rat(1));
        assert_eq!(p.degree(), 10);

        let p = HomPolynomial::monomial_of_index(&idx(&[5, 5, 5]));
        assert_eq!(p.coeff(&[4, 4, 4]), rat(1));

        let p = HomPolynomial::monomial_of_index(&idx(&[3]));
        assert_eq!(p.coeff(&[2]), rat(1));
    }

    #[test]
    fn substitute_expands_products() {
        // p = x1*x2 under x1 -> x2 - x1, x2 -> x2 gives x2^2 - x1*x2.
        let p = HomPolynomial::monomial(2, vec![1, 1], rat(1));
        let images = vec![LinearForm::diff(2, 1, 0), LinearForm::var(2, 1)];
        let q = p.substitute(&images).unwrap();
        assert_eq!(q.coeff(&[0, 2]), rat(1));
        assert_eq!(q.coeff(&[1, 1]), rat(-1));
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn substitute_identity_and_sign() {
        let p = HomPolynomial::monomial(2, vec![3, 4], rat(7));
        let id = vec![LinearForm::var(2, 0), LinearForm::var(2, 1)];
        assert_eq!(p.substitute(&id).unwrap(), p);

        // x1^2 under x1 -> -x1 is unchanged (even degree).
        let p = HomPolynomial::monomial(1, vec![2], rat(1));
        let neg = vec![LinearForm::new(vec![BigInt::from(-1)])];
        assert_eq!(p.substitute(&neg).unwrap(), p);
    }

    #[test]
    fn substitute_arity_mismatch_is_an_error() {
        let p = HomPolynomial::monomial(2, vec![1, 1], rat(1));
        assert!(p.substitute(&[LinearForm::var(2, 0)]).is_err());
    }

    #[test]
    fn pi1_matches_label_order() {
        let labels = IndexSet::shared(12, 2);
        let mut p = HomPolynomial::zero(2, 10);
        p.add_term(vec![2, 8], rat(14));
        p.add_term(vec![4, 6], rat(75));
        p.add_term(vec![6, 4], rat(84));
        let v = p.pi1(&labels).unwrap();
        let got: Vec<BigRational> = v.entries().to_vec();
        assert_eq!(got, vec![rat(14), rat(75), rat(84), rat(0)]);

        let back = HomPolynomial::pi1_inverse(&v);
        assert_eq!(back, p);
    }

    #[test]
    fn pi1_of_zero_is_zero_vector() {
        let labels = IndexSet::shared(12, 2);
        let z = HomPolynomial::zero(2, 10);
        assert!(z.pi1(&labels).unwrap().is_zero());
    }

    #[test]
    fn pi1_unit_position() {
        let labels = IndexSet::shared(12, 2);
        let p = HomPolynomial::monomial_of_index(&idx(&[5, 7]));
        let v = p.pi1(&labels).unwrap();
        assert_eq!(v, RatVector::unit(labels, 1));
    }

    #[test]
    fn pi1_rejects_monomials_outside_the_space() {
        let labels = IndexSet::shared(12, 2);
        // x1^3 x2^7 corresponds to (4,8): not totally odd.
        let p = HomPolynomial::monomial(2, vec![3, 7], rat(1));
        assert!(p.pi1(&labels).is_err());
    }

    #[test]
    fn sigma_action_of_zero_is_zero() {
        let z = HomPolynomial::zero(3, 6);
        assert!(z.sigma_action(1).unwrap().is_zero());
        assert!(z.sigma_action(2).unwrap().is_zero());
        assert!(z.sigma_action(3).is_err());
    }

    #[test]
    fn homogeneity_preserved_by_substitution() {
        let mut p = HomPolynomial::zero(3, 5);
        p.add_term(vec![1, 2, 2], rat(3));
        p.add_term(vec![5, 0, 0], rat(-2));
        let images = vec![
            LinearForm::diff(3, 1, 0),
            LinearForm::var(3, 0),
            LinearForm::new(vec![BigInt::from(2), BigInt::from(-3), BigInt::from(1)]),
        ];
        let q = p.substitute(&images).unwrap();
        assert_eq!(q.degree(), 5);
        for (exps, _) in q.terms() {
            assert_eq!(exps.iter().sum::<u32>(), 5);
        }
    }
}
