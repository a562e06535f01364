//! Summary grid: set sizes, exact ranks and kernel dimensions of `C_{N,r}`
//! against the Broadhurst-Kreimer coefficients.

use serde::Serialize;

use crate::cache::{matrix_cached, Cache};
use crate::linalg;
use crate::matrix::MatrixKind;
use crate::series;
use crate::Error;

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub weight: u32,
    pub depth: usize,
    pub size: usize,
    pub rank_c: usize,
    pub kernel_dim: usize,
    pub bk: String,
    pub matches: bool,
}

/// One row per `(N, r)` with `r <= max_depth` and `N <= max_weight`,
/// including the empty cells (all zeros). Deterministic order: depth, then
/// weight.
pub fn build_report(
    max_weight: u32,
    max_depth: usize,
    cache: Option<&Cache>,
) -> Result<Vec<ReportRow>, Error> {
    let mut rows = Vec::new();
    let table = series::bk_table(max_weight as usize, max_depth);
    for (depth, bk_row) in table.iter().enumerate().take(max_depth + 1).skip(1) {
        for weight in 1..=max_weight {
            let c = matrix_cached(cache, MatrixKind::C, weight, depth, None)?;
            let size = c.nrows();
            let rank_c = linalg::rank(&c);
            let bk = bk_row.coeff(weight as usize);
            rows.push(ReportRow {
                weight,
                depth,
                size,
                rank_c,
                kernel_dim: size - rank_c,
                bk: bk.to_string(),
                matches: &num_bigint::BigInt::from(rank_c) == bk,
            });
        }
    }
    Ok(rows)
}

/// Render as CSV with a header line.
pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from("weight,depth,size,rank_c,kernel_dim,bk,matches\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.weight, r.depth, r.size, r.rank_c, r.kernel_dim, r.bk, r.matches
        ));
    }
    out
}

/// Render as a markdown table.
pub fn to_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::from("| N | r | |S| | rank C | dim ker | BK | match |\n");
    out.push_str("|---|---|----|--------|---------|----|-------|\n");
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.weight, r.depth, r.size, r.rank_c, r.kernel_dim, r.bk, r.matches
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_rows_at_the_worked_cells() {
        let rows = build_report(15, 3, None).unwrap();
        let find = |n: u32, r: usize| rows.iter().find(|x| x.weight == n && x.depth == r).unwrap();
        let r12 = find(12, 2);
        assert_eq!(
            (r12.size, r12.rank_c, r12.kernel_dim, r12.bk.as_str(), r12.matches),
            (4, 3, 1, "3", true)
        );
        let r15 = find(15, 3);
        assert_eq!(
            (r15.size, r15.rank_c, r15.kernel_dim, r15.bk.as_str(), r15.matches),
            (10, 8, 2, "8", true)
        );
        // Empty cells are all zeros and match trivially.
        let r11 = find(11, 2);
        assert_eq!((r11.size, r11.rank_c, r11.kernel_dim), (0, 0, 0));
        assert!(r11.matches);
    }

    #[test]
    fn csv_has_one_line_per_row_plus_header() {
        let rows = build_report(8, 2, None).unwrap();
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().count(), rows.len() + 1);
        assert!(csv.starts_with("weight,depth,"));
    }
}
