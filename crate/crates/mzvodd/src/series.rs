//! Truncated integer power series: `O(x) = x^3/(1-x^2)`,
//! `S(x) = x^12/((1-x^4)(1-x^6))`, their products, and the rows of the
//! uneven Broadhurst-Kreimer generating function `1/(1 - O(x)y + S(x)y^2)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Power series with integer coefficients, truncated at a fixed order.
/// Operations never read beyond the truncation; products truncate to the
/// smaller order of the factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(trunc: usize) -> IntSeries {
        IntSeries {
            coeffs: vec![BigInt::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> IntSeries {
        let mut s = IntSeries::zero(trunc);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Truncation order: coefficients are exact for exponents `0..=trunc`.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntSeries) -> IntSeries {
        let trunc = self.trunc().min(other.trunc());
        let coeffs = (0..=trunc)
            .map(|n| &self.coeffs[n] + &other.coeffs[n])
            .collect();
        IntSeries { coeffs }
    }

    pub fn sub(&self, other: &IntSeries) -> IntSeries {
        let trunc = self.trunc().min(other.trunc());
        let coeffs = (0..=trunc)
            .map(|n| &self.coeffs[n] - &other.coeffs[n])
            .collect();
        IntSeries { coeffs }
    }

    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let trunc = self.trunc().min(other.trunc());
        let mut coeffs = vec![BigInt::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntSeries { coeffs }
    }

    pub fn pow(&self, e: usize) -> IntSeries {
        let mut acc = IntSeries::one(self.trunc());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `O(x) = x^3 + x^5 + x^7 + ...`, the odd single zeta generating series.
pub fn series_o(trunc: usize) -> IntSeries {
    let mut s = IntSeries::zero(trunc);
    let mut n = 3;
    while n <= trunc {
        s.coeffs[n] = BigInt::one();
        n += 2;
    }
    s
}

/// `S(x) = x^12 + x^16 + x^18 + ...`, the cusp form dimension series.
pub fn series_s(trunc: usize) -> IntSeries {
    let mut s = IntSeries::zero(trunc);
    let mut a = 0;
    while 12 + 4 * a <= trunc {
        let mut b = 0;
        while 12 + 4 * a + 6 * b <= trunc {
            s.coeffs[12 + 4 * a + 6 * b] += BigInt::one();
            b += 1;
        }
        a += 1;
    }
    s
}

/// Row `r` of `1/(1 - O(x)y + S(x)y^2)` as a series in `x`, by the
/// recurrence `d_0 = 1`, `d_1 = O`, `d_r = O d_{r-1} - S d_{r-2}`.
pub fn bk_row(depth: usize, trunc: usize) -> IntSeries {
    let o = series_o(trunc);
    let s = series_s(trunc);
    let mut prev = IntSeries::one(trunc);
    if depth == 0 {
        return prev;
    }
    let mut cur = o.clone();
    for _ in 1..depth {
        let next = o.mul(&cur).sub(&s.mul(&prev));
        prev = cur;
        cur = next;
    }
    cur
}

/// The full table of rows `0..=max_depth`, each truncated at `trunc`.
pub fn bk_table(trunc: usize, max_depth: usize) -> Vec<IntSeries> {
    (0..=max_depth).map(|r| bk_row(r, trunc)).collect()
}

/// Rank of `C_{N,r}` against the Broadhurst-Kreimer coefficient. The
/// inequality is a theorem at depth 4; observed equality is conjectural
/// and only annotated.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RankBkReport {
    pub weight: u32,
    pub depth: usize,
    pub size: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub bk_bound: BigIntString,
    pub rank_le_bound: bool,
    pub equal: bool,
}

/// Decimal-string wrapper so serialized integers survive any width.
#[derive(Clone, Debug)]
pub struct BigIntString(pub BigInt);

impl serde::Serialize for BigIntString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub fn compare_rank_to_bk(weight: u32, depth: usize) -> RankBkReport {
    let c = crate::matrix::build_c(weight, depth);
    let rank = crate::linalg::rank(&c);
    let size = c.nrows();
    let bound = bk_row(depth, weight as usize).coeff(weight as usize).clone();
    RankBkReport {
        weight,
        depth,
        size,
        rank,
        kernel_dim: size - rank,
        rank_le_bound: BigInt::from(rank) <= bound,
        equal: BigInt::from(rank) == bound,
        bk_bound: BigIntString(bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::index_count;

    fn c(series: &IntSeries, n: usize) -> i64 {
        i64::try_from(series.coeff(n)).unwrap()
    }

    #[test]
    fn generator_expansions() {
        let o = series_o(20);
        assert_eq!(c(&o, 3), 1);
        assert_eq!(c(&o, 4), 0);
        assert_eq!(c(&o, 5), 1);
        let s = series_s(30);
        assert_eq!(c(&s, 12), 1);
        assert_eq!(c(&s, 14), 0);
        assert_eq!(c(&s, 16), 1);
        assert_eq!(c(&s, 18), 1);
        assert_eq!(c(&s, 24), 2);
    }

    #[test]
    fn powers_of_o_count_indices() {
        let trunc = 32;
        let o = series_o(trunc);
        for r in 0..=4usize {
            let or = o.pow(r);
            for n in 0..=trunc {
                assert_eq!(
                    or.coeff(n),
                    &BigInt::from(index_count(n as u32, r)),
                    "[x^{n}] O^{r}"
                );
            }
        }
    }

    #[test]
    fn bk_rows_match_their_closed_forms() {
        let trunc = 40;
        let o = series_o(trunc);
        let s = series_s(trunc);
        let os = o.mul(&s);
        assert_eq!(bk_row(1, trunc), o);
        assert_eq!(bk_row(2, trunc), o.pow(2).sub(&s));
        assert_eq!(bk_row(3, trunc), o.pow(3).sub(&os).sub(&os));
        let oos = o.pow(2).mul(&s);
        let row4 = o.pow(4).sub(&oos).sub(&oos).sub(&oos).add(&s.pow(2));
        assert_eq!(bk_row(4, trunc), row4);
    }

    #[test]
    fn bk_examples() {
        assert_eq!(c(&bk_row(2, 12), 12), 3);
        assert_eq!(c(&bk_row(1, 12), 12), 0);
        assert_eq!(c(&bk_row(1, 3), 3), 1);
        // [x^15] O^3 = 10 and [x^15] O*S = 1 (only O_3 * S_12), so row 3
        // has coefficient 10 - 2 = 8 here.
        assert_eq!(c(&bk_row(3, 15), 15), 8);
    }
}
