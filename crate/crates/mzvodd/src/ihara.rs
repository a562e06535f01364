//! The linearized depth-graded Ihara action and its coefficient families.
//!
//! The closed form for `e` (one action step) is the production path: it is
//! O(r) per entry. The full polynomial expansion of the action is kept as an
//! independent oracle; tests compare the two on overlapping ranges. Nested
//! right-to-left expansion of the action gives the `c` coefficients directly
//! and serves as the oracle for the matrix factorization route.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{HomPolynomial, LinearForm};

/// Binomial coefficient with arbitrary-precision result.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `b^m_{n,n'} = (-1)^n C(m-1, n-1) + (-1)^{n'-m} C(m-1, n'-1)`.
pub fn b_coeff(m: u32, n: u32, nprime: u32) -> BigInt {
    let sign_n = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let sign_np = if (nprime as i64 - m as i64).rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    sign_n * binomial(m - 1, n - 1) + sign_np * binomial(m - 1, nprime - 1)
}

/// One-step action coefficient `e(m; n)` in closed form. Zero whenever the
/// tuples differ in length or weight; depth 1 is the Kronecker delta.
pub fn e_coeff(m: &[u32], n: &[u32]) -> BigInt {
    if m.len() != n.len() || m.iter().sum::<u32>() != n.iter().sum::<u32>() {
        return BigInt::zero();
    }
    let r = m.len();
    if r == 0 {
        return BigInt::one();
    }
    let mut acc = if m == n { BigInt::one() } else { BigInt::zero() };
    for i in 1..r {
        // Compare m with entries 1 and i removed against n with entries
        // i-1 and i removed (0-based), then weight by b^{m_1}_{n_i, n_{i+1}}.
        let m_matches = m[1..i].iter().chain(&m[i + 1..]);
        let n_matches = n[..i - 1].iter().chain(&n[i + 1..]);
        if m_matches.ne(n_matches) {
            continue;
        }
        acc += b_coeff(m[0], n[i - 1], n[i]);
    }
    acc
}

/// The polynomial representation of the linearized Ihara action on
/// homogeneous `f` (r variables) and `g` (s variables), with `x_0 = 0`.
pub fn ihara_action(f: &HomPolynomial, g: &HomPolynomial) -> HomPolynomial {
    let r = f.nvars();
    let s = g.nvars();
    assert!(r >= 1, "left factor must have at least one variable");
    if s == 0 {
        // Only the i = 0 term of the first sum survives: f itself, scaled
        // by the constant g.
        return f.scale(&g.coeff(&[]));
    }
    let total = r + s;
    let mut acc = HomPolynomial::zero(total, f.degree() + g.degree());

    // First sum: f consumes the block x_{i+1}..x_{i+r}, each shifted by x_i.
    for i in 0..=s {
        let f_images: Vec<LinearForm> = (1..=r)
            .map(|k| {
                if i == 0 {
                    LinearForm::var(total, k - 1)
                } else {
                    LinearForm::diff(total, i + k - 1, i - 1)
                }
            })
            .collect();
        let g_images: Vec<LinearForm> = (0..i)
            .chain(i + r..total)
            .map(|j| LinearForm::var(total, j))
            .collect();
        let fi = f.substitute(&f_images).expect("f arity fixed by construction");
        let gi = g.substitute(&g_images).expect("g arity fixed by construction");
        acc = acc.add(&fi.mul(&gi));
    }

    // Second sum: f consumes x_{i+r-1}..x_i reversed, shifted by x_{i+r},
    // with the global sign (-1)^{deg f + r}.
    let sign = if (f.degree() as usize + r).is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    for i in 1..=s {
        let f_images: Vec<LinearForm> = (1..=r)
            .map(|k| LinearForm::diff(total, i + r - k - 1, i + r - 1))
            .collect();
        let g_images: Vec<LinearForm> = (0..i - 1)
            .chain(i + r - 1..total)
            .map(|j| LinearForm::var(total, j))
            .collect();
        let fi = f.substitute(&f_images).expect("f arity fixed by construction");
        let gi = g.substitute(&g_images).expect("g arity fixed by construction");
        acc = acc.add(&fi.mul(&gi).scale(&sign));
    }
    acc
}

/// `x_1^{m-1}` as a one-variable polynomial.
pub fn power_monomial(m: u32) -> HomPolynomial {
    HomPolynomial::monomial(1, vec![m - 1], BigRational::one())
}

/// Right-nested iterated action
/// `x_1^{m_1-1} o ( ... o (x_1^{m_{r-1}-1} o x_1^{m_r-1}) ... )`,
/// expanded symbolically; the generating polynomial of the `c` coefficients.
pub fn nested_action(m: &[u32]) -> HomPolynomial {
    assert!(!m.is_empty());
    let mut acc = power_monomial(m[m.len() - 1]);
    for &mk in m[..m.len() - 1].iter().rev() {
        acc = ihara_action(&power_monomial(mk), &acc);
    }
    acc
}

/// `c(m; n)` read off the nested expansion. This is the oracle route; the
/// production route is the matrix factorization in [`crate::matrix`].
pub fn c_coeff(m: &[u32], n: &[u32]) -> BigInt {
    if m.len() != n.len() || m.iter().sum::<u32>() != n.iter().sum::<u32>() {
        return BigInt::zero();
    }
    let poly = nested_action(m);
    let exps: Vec<u32> = n.iter().map(|&x| x - 1).collect();
    let coeff = poly.coeff(&exps);
    debug_assert!(coeff.is_integer());
    coeff.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeff(3, 9, 3), BigInt::from(1));
        assert_eq!(b_coeff(5, 3, 9), BigInt::from(-6));
        assert_eq!(b_coeff(3, 3, 9), BigInt::from(-1));
    }

    #[test]
    fn b_antisymmetry_small() {
        for m in (3..=15).step_by(2) {
            for n in (3..=15).step_by(2) {
                for np in (3..=15).step_by(2) {
                    assert!(
                        (b_coeff(m, n, np) + b_coeff(m, np, n)).is_zero(),
                        "antisymmetry fails at ({m},{n},{np})"
                    );
                }
            }
        }
    }

    #[test]
    fn e_coeff_depth_one_is_delta() {
        assert_eq!(e_coeff(&[3], &[3]), BigInt::one());
        assert_eq!(e_coeff(&[3], &[5]), BigInt::zero());
    }

    #[test]
    fn e_coeff_printed_entries() {
        assert_eq!(e_coeff(&[5, 3, 7], &[3, 3, 9]), BigInt::from(-6));
        assert_eq!(e_coeff(&[9, 3, 3], &[9, 3, 3]), BigInt::from(28));
        assert_eq!(e_coeff(&[5, 7], &[3, 9]), BigInt::from(-6));
        assert_eq!(e_coeff(&[3, 9], &[9, 3]), BigInt::from(1));
    }

    #[test]
    fn e_coeff_weight_mismatch_is_zero() {
        assert_eq!(e_coeff(&[3, 9], &[3, 7]), BigInt::zero());
        assert_eq!(e_coeff(&[3, 9], &[3, 9, 3]), BigInt::zero());
    }

    #[test]
    fn action_with_unit_right_factor() {
        // f o 1 has only the i = 0 term of the first sum: f itself.
        let f = power_monomial(5);
        let res = ihara_action(&f, &HomPolynomial::one());
        assert_eq!(res, f);
    }

    #[test]
    fn action_reproduces_e_on_one_step() {
        // Coefficient of x1^2 x2^8 in x1^4 o x1^6 equals e((5,7);(3,9)) = -6.
        let res = ihara_action(&power_monomial(5), &power_monomial(7));
        assert_eq!(res.coeff(&[2, 8]), BigRational::from_integer(BigInt::from(-6)));
    }

    #[test]
    fn one_step_action_matches_closed_form_exhaustively() {
        // All m-tuples of depth 2..3 with weight <= 12, all integer parts.
        for weight in 2..=12u32 {
            for m1 in 1..weight {
                for m2 in 1..=(weight - m1) {
                    let rest = weight - m1 - m2;
                    if rest == 0 {
                        compare_expansion(&[m1, m2]);
                    } else {
                        compare_expansion(&[m1, m2, rest]);
                    }
                }
            }
        }
    }

    fn compare_expansion(m: &[u32]) {
        let r = m.len();
        let weight: u32 = m.iter().sum();
        let g_exps: Vec<u32> = m[1..].iter().map(|&x| x - 1).collect();
        let g = HomPolynomial::monomial(r - 1, g_exps, BigRational::one());
        let expansion = ihara_action(&power_monomial(m[0]), &g);
        // Every composition of the weight into r positive parts.
        let mut n = vec![1u32; r];
        enumerate_compositions(weight, r, &mut n, 0, &mut |n| {
            let exps: Vec<u32> = n.iter().map(|&x| x - 1).collect();
            let from_poly = expansion.coeff(&exps);
            let from_formula = BigRational::from_integer(e_coeff(m, n));
            assert_eq!(from_poly, from_formula, "mismatch at m={m:?} n={n:?}");
        });
    }

    fn enumerate_compositions(
        weight: u32,
        parts: usize,
        buf: &mut Vec<u32>,
        at: usize,
        f: &mut impl FnMut(&[u32]),
    ) {
        if at == parts - 1 {
            let used: u32 = buf[..at].iter().sum();
            if weight > used && weight - used >= 1 {
                buf[at] = weight - used;
                f(buf);
            }
            return;
        }
        let used: u32 = buf[..at].iter().sum();
        for v in 1..=(weight - used).saturating_sub((parts - at - 1) as u32) {
            buf[at] = v;
            enumerate_compositions(weight, parts, buf, at + 1, f);
        }
    }

    #[test]
    fn c_depth_one_is_delta() {
        assert_eq!(c_coeff(&[7], &[7]), BigInt::one());
        assert_eq!(c_coeff(&[7], &[5]), BigInt::zero());
    }

    #[test]
    fn c_depth_two_equals_e() {
        assert_eq!(c_coeff(&[5, 7], &[3, 9]), BigInt::from(-6));
        let set = crate::indices::IndexSet::enumerate(12, 2);
        for a in set.members() {
            for b in set.members() {
                assert_eq!(
                    c_coeff(a.parts(), b.parts()),
                    e_coeff(a.parts(), b.parts()),
                    "at ({a}, {b})"
                );
            }
        }
    }
}
