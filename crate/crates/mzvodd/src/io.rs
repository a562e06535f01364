//! Bit-exact text formats for matrices and kernel bases.
//!
//! Matrix files:
//! ```text
//! MZVODD-MATRIX v1 kind=E N=12 r=2 q=-
//! rows=4 cols=4
//! 0 0 0 1
//! ...
//! ```
//!
//! Kernel files:
//! ```text
//! MZVODD-KERNEL v1 side=right kind=E N=12 r=2 q=-
//! dim=1
//! 14 75 84 0
//! ```
//!
//! Writers are deterministic, so identical inputs produce byte-identical
//! files; the cache layer relies on that.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::indices::IndexSet;
use crate::linalg::{KernelBasis, KernelSide};
use crate::matrix::{IntMatrix, MatrixKind, Provenance};
use crate::Error;

fn kind_token(kind: MatrixKind) -> &'static str {
    kind.as_str()
}

fn parse_kind(token: &str, line: usize) -> Result<MatrixKind, Error> {
    match token {
        "E" => Ok(MatrixKind::E),
        "Eq" => Ok(MatrixKind::Eq),
        "C" => Ok(MatrixKind::C),
        "F" => Ok(MatrixKind::F),
        "I" => Ok(MatrixKind::Identity),
        other => Err(Error::Parse {
            line,
            msg: format!("unknown matrix kind {other:?}"),
        }),
    }
}

fn q_token(q: Option<usize>) -> String {
    match q {
        Some(q) => q.to_string(),
        None => "-".to_string(),
    }
}

fn field<'a>(token: Option<&'a str>, name: &str, line: usize) -> Result<&'a str, Error> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing field {name}"),
    })?;
    token.strip_prefix(&format!("{name}=")).ok_or_else(|| Error::Parse {
        line,
        msg: format!("expected {name}=<value>, found {token:?}"),
    })
}

fn parse_usize(s: &str, line: usize) -> Result<usize, Error> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid integer {s:?}"),
    })
}

fn parse_bigint(s: &str, line: usize) -> Result<BigInt, Error> {
    BigInt::from_str(s).map_err(|_| Error::Parse {
        line,
        msg: format!("invalid integer {s:?}"),
    })
}

/// Serialize a matrix in the v1 format.
pub fn matrix_to_string(m: &IntMatrix) -> String {
    let p = m.provenance();
    let mut out = format!(
        "MZVODD-MATRIX v1 kind={} N={} r={} q={}\n",
        kind_token(p.kind),
        p.weight,
        p.depth,
        q_token(p.q)
    );
    out.push_str(&format!("rows={} cols={}\n", m.nrows(), m.ncols()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&m.get(i, j).to_string());
        }
        out.push('\n');
    }
    out
}

/// Parse the v1 matrix format.
pub fn matrix_from_str(text: &str) -> Result<IntMatrix, Error> {
    let mut lines = text.lines().enumerate();
    let (lno, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty file".into(),
    })?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("MZVODD-MATRIX") || tokens.next() != Some("v1") {
        return Err(Error::Parse {
            line: lno + 1,
            msg: "expected MZVODD-MATRIX v1 header".into(),
        });
    }
    let kind = parse_kind(field(tokens.next(), "kind", lno + 1)?, lno + 1)?;
    let weight = parse_usize(field(tokens.next(), "N", lno + 1)?, lno + 1)? as u32;
    let depth = parse_usize(field(tokens.next(), "r", lno + 1)?, lno + 1)?;
    let q_str = field(tokens.next(), "q", lno + 1)?;
    let q = if q_str == "-" {
        None
    } else {
        Some(parse_usize(q_str, lno + 1)?)
    };

    let (lno2, dims) = lines.next().ok_or(Error::Parse {
        line: lno + 2,
        msg: "missing dimension line".into(),
    })?;
    let mut tokens = dims.split_whitespace();
    let rows = parse_usize(field(tokens.next(), "rows", lno2 + 1)?, lno2 + 1)?;
    let cols = parse_usize(field(tokens.next(), "cols", lno2 + 1)?, lno2 + 1)?;

    let labels = IndexSet::shared(weight, depth);
    if labels.len() != rows || labels.len() != cols {
        return Err(Error::Parse {
            line: lno2 + 1,
            msg: format!(
                "dimensions {rows}x{cols} do not match |S_({weight},{depth})| = {}",
                labels.len()
            ),
        });
    }
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (lno3, line) = lines.next().ok_or(Error::Parse {
            line: lno2 + 2,
            msg: "missing matrix row".into(),
        })?;
        let row: Result<Vec<BigInt>, Error> = line
            .split_whitespace()
            .map(|t| parse_bigint(t, lno3 + 1))
            .collect();
        let row = row?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: lno3 + 1,
                msg: format!("expected {cols} entries, found {}", row.len()),
            });
        }
        data.push(row);
    }
    IntMatrix::from_rows(
        labels.clone(),
        labels,
        data,
        Provenance {
            kind,
            weight,
            depth,
            q,
        },
    )
}

/// Serialize a kernel basis in the v1 format.
pub fn kernel_to_string(kb: &KernelBasis) -> String {
    let p = kb.source;
    let mut out = format!(
        "MZVODD-KERNEL v1 side={} kind={} N={} r={} q={}\n",
        kb.side.as_str(),
        kind_token(p.kind),
        p.weight,
        p.depth,
        q_token(p.q)
    );
    out.push_str(&format!("dim={}\n", kb.dim()));
    for v in &kb.vectors {
        let ints = v.integer_entries().expect("kernel vectors are integral");
        let row: Vec<String> = ints.iter().map(BigInt::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the v1 kernel format.
pub fn kernel_from_str(text: &str) -> Result<KernelBasis, Error> {
    let mut lines = text.lines().enumerate();
    let (lno, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty file".into(),
    })?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("MZVODD-KERNEL") || tokens.next() != Some("v1") {
        return Err(Error::Parse {
            line: lno + 1,
            msg: "expected MZVODD-KERNEL v1 header".into(),
        });
    }
    let side = match field(tokens.next(), "side", lno + 1)? {
        "left" => KernelSide::Left,
        "right" => KernelSide::Right,
        other => {
            return Err(Error::Parse {
                line: lno + 1,
                msg: format!("unknown side {other:?}"),
            })
        }
    };
    let kind = parse_kind(field(tokens.next(), "kind", lno + 1)?, lno + 1)?;
    let weight = parse_usize(field(tokens.next(), "N", lno + 1)?, lno + 1)? as u32;
    let depth = parse_usize(field(tokens.next(), "r", lno + 1)?, lno + 1)?;
    let q_str = field(tokens.next(), "q", lno + 1)?;
    let q = if q_str == "-" {
        None
    } else {
        Some(parse_usize(q_str, lno + 1)?)
    };

    let (lno2, dim_line) = lines.next().ok_or(Error::Parse {
        line: lno + 2,
        msg: "missing dim line".into(),
    })?;
    let dim = parse_usize(field(dim_line.split_whitespace().next(), "dim", lno2 + 1)?, lno2 + 1)?;

    let labels = IndexSet::shared(weight, depth);
    let mut vectors = Vec::with_capacity(dim);
    for _ in 0..dim {
        let (lno3, line) = lines.next().ok_or(Error::Parse {
            line: lno2 + 2,
            msg: "missing kernel vector row".into(),
        })?;
        let ints: Result<Vec<BigInt>, Error> = line
            .split_whitespace()
            .map(|t| parse_bigint(t, lno3 + 1))
            .collect();
        let v = crate::indices::RatVector::from_integers(labels.clone(), ints?).map_err(|_| {
            Error::Parse {
                line: lno3 + 1,
                msg: format!("vector width does not match |S_({weight},{depth})|"),
            }
        })?;
        vectors.push(v);
    }
    Ok(KernelBasis {
        side,
        vectors,
        source: Provenance {
            kind,
            weight,
            depth,
            q,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{linalg, matrix};

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        for m in [
            matrix::build_e(12, 2),
            matrix::build_eq(15, 3, 2).unwrap(),
            matrix::build_c(15, 3),
            matrix::build_f(12, 2),
        ] {
            let text = matrix_to_string(&m);
            let back = matrix_from_str(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(matrix_to_string(&back), text);
        }
    }

    #[test]
    fn empty_matrix_round_trips() {
        let m = matrix::build_e(9, 2);
        let text = matrix_to_string(&m);
        let back = matrix_from_str(&text).unwrap();
        assert!(back.is_empty());
    }

    #[test]
    fn kernel_round_trip_is_bit_exact() {
        let e = matrix::build_e(15, 3);
        let kb = linalg::right_kernel(&e);
        let text = kernel_to_string(&kb);
        let back = kernel_from_str(&text).unwrap();
        assert_eq!(back.dim(), kb.dim());
        assert_eq!(back.vectors, kb.vectors);
        assert_eq!(kernel_to_string(&back), text);
    }

    #[test]
    fn rejects_malformed_headers() {
        assert!(matrix_from_str("WRONG v1 kind=E N=12 r=2 q=-\nrows=0 cols=0\n").is_err());
        assert!(matrix_from_str("MZVODD-MATRIX v2 kind=E N=12 r=2 q=-\nrows=0 cols=0\n").is_err());
        assert!(matrix_from_str("MZVODD-MATRIX v1 kind=X N=12 r=2 q=-\nrows=0 cols=0\n").is_err());
        // Dimension mismatch against the label set.
        assert!(matrix_from_str("MZVODD-MATRIX v1 kind=E N=12 r=2 q=-\nrows=3 cols=3\n").is_err());
    }
}
