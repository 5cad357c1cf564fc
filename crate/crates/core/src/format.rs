//! Interchange formats: matrix text, alist, DOT, and JSON search reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::btu::Matrix;
use crate::engine::SearchResult;
use crate::error::{Error, Result};
use crate::perm::{PartitionP2, Permutation};

/// `m` lines of `m` space-separated 0/1 digits.
pub fn matrix_to_text(mat: &Matrix) -> String {
    mat.to_string()
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let rows = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split_whitespace()
                .map(|t| match t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(Error::Parse(format!(
                        "line {}: expected 0 or 1, got {t:?}",
                        i + 1
                    ))),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    Matrix::from_rows(rows)
}

/// MacKay alist: `N M`, `maxcol maxrow`, column degrees, row degrees, then
/// the 1-based row indices of each column followed by the column indices of
/// each row, ascending.
pub fn to_alist(mat: &Matrix) -> String {
    let n = mat.size();
    let rows_of_col: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..n).filter(|&i| mat.get(i, j)).map(|i| i + 1).collect())
        .collect();
    let cols_of_row: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| mat.get(i, j)).map(|j| j + 1).collect())
        .collect();
    let max_col = rows_of_col.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = cols_of_row.iter().map(Vec::len).max().unwrap_or(0);
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{n} {n}");
    let _ = writeln!(out, "{max_col} {max_row}");
    let col_deg: Vec<usize> = rows_of_col.iter().map(Vec::len).collect();
    let row_deg: Vec<usize> = cols_of_row.iter().map(Vec::len).collect();
    let _ = writeln!(out, "{}", join(&col_deg));
    let _ = writeln!(out, "{}", join(&row_deg));
    for list in rows_of_col.iter().chain(&cols_of_row) {
        let _ = writeln!(out, "{}", join(list));
    }
    out
}

pub fn parse_alist(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut next_nums = |what: &str| -> Result<Vec<usize>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("alist ends before {what}")))?;
        line.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("alist {what}: bad number {t:?}")))
            })
            .collect()
    };
    let dims = next_nums("dimensions")?;
    let [ncols, nrows] = dims[..] else {
        return Err(Error::Parse("alist line 1 must be \"N M\"".into()));
    };
    if ncols != nrows || ncols == 0 {
        return Err(Error::Parse(format!(
            "alist is {nrows}x{ncols}; only square matrices are BTUs"
        )));
    }
    let n = ncols;
    next_nums("max degrees")?;
    let col_deg = next_nums("column degrees")?;
    let row_deg = next_nums("row degrees")?;
    if col_deg.len() != n || row_deg.len() != n {
        return Err(Error::Parse(
            "alist degree lines have the wrong length".into(),
        ));
    }
    let mut from_cols = Matrix::zeros(n);
    for (j, &deg) in col_deg.iter().enumerate() {
        let entries: Vec<usize> = next_nums("column lists")?
            .into_iter()
            .filter(|&x| x != 0)
            .collect();
        if entries.len() != deg {
            return Err(Error::Parse(format!(
                "column {} lists {} entries, degree says {deg}",
                j + 1,
                entries.len()
            )));
        }
        for i in entries {
            if i > n {
                return Err(Error::Parse(format!("row index {i} out of range")));
            }
            from_cols.set(i - 1, j, true);
        }
    }
    let mut from_rows = Matrix::zeros(n);
    for (i, &deg) in row_deg.iter().enumerate() {
        let entries: Vec<usize> = next_nums("row lists")?
            .into_iter()
            .filter(|&x| x != 0)
            .collect();
        if entries.len() != deg {
            return Err(Error::Parse(format!(
                "row {} lists {} entries, degree says {deg}",
                i + 1,
                entries.len()
            )));
        }
        for j in entries {
            if j > n {
                return Err(Error::Parse(format!("column index {j} out of range")));
            }
            from_rows.set(i, j - 1, true);
        }
    }
    if from_cols != from_rows {
        return Err(Error::Parse("alist column and row lists disagree".into()));
    }
    Ok(from_cols)
}

/// Matrix text if every line holds as many 0/1 tokens as there are lines,
/// alist otherwise.
pub fn parse_auto(text: &str) -> Result<Matrix> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let is_matrix = !lines.is_empty()
        && lines.iter().all(|l| {
            let toks: Vec<&str> = l.split_whitespace().collect();
            toks.len() == lines.len() && toks.iter().all(|t| *t == "0" || *t == "1")
        });
    if is_matrix {
        parse_matrix(text)
    } else {
        parse_alist(text)
    }
}

/// Undirected bipartite graph, left nodes `l1..lm`, right nodes `r1..rm`,
/// edges in row-major order.
pub fn to_dot(mat: &Matrix) -> String {
    let n = mat.size();
    let mut out = String::from("graph btu {\n");
    for i in 0..n {
        for j in 0..n {
            if mat.get(i, j) {
                let _ = writeln!(out, "  l{} -- r{};", i + 1, j + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub stage: usize,
    pub n: usize,
    pub rotation_j: Option<usize>,
    pub candidates_evaluated: u64,
    pub best_girth: usize,
}

/// JSON form of a search result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub m: usize,
    pub r: usize,
    pub b: usize,
    pub k: usize,
    pub girth: usize,
    pub permutations: Vec<Permutation>,
    pub partitions: Vec<PartitionP2>,
    pub traces: Vec<TraceRecord>,
    pub mode: String,
    pub policy: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub co_maximal: Vec<Vec<Permutation>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl SearchReport {
    pub fn from_result(res: &SearchResult, elapsed_ms: Option<u64>) -> SearchReport {
        let f = &res.factorization;
        SearchReport {
            m: f.m,
            r: f.r,
            b: f.b,
            k: f.k,
            girth: res.girth,
            permutations: res.btu.perms().to_vec(),
            partitions: res.partitions(),
            traces: res
                .traces
                .iter()
                .map(|t| TraceRecord {
                    stage: t.stage,
                    n: t.n,
                    rotation_j: t.rotation_j,
                    candidates_evaluated: t.candidates_evaluated,
                    best_girth: t.best_girth,
                })
                .collect(),
            mode: res.config.mode.to_string(),
            policy: res.config.rotation_policy.to_string(),
            co_maximal: res.co_maximal.iter().map(|b| b.perms().to_vec()).collect(),
            elapsed_ms,
        }
    }
}
