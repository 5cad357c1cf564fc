//! Balanced Tanner Units: `r` pairwise-compatible permutations of `{1..m}`,
//! equivalently an `m×m` 0/1 matrix with `r` ones in every row and column.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{closed_form_partitions, Factorization};
use crate::perm::{PartitionP2, Permutation};

/// An `(m, r)` BTU. Slot order is significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Btu {
    m: usize,
    perms: Vec<Permutation>,
}

impl Btu {
    /// Validates pairwise compatibility; the error names the first
    /// conflicting slot pair (1-based) and position.
    pub fn new(perms: Vec<Permutation>) -> Result<Btu> {
        let Some(first) = perms.first() else {
            return Err(Error::InvalidParameters(
                "a BTU needs at least one permutation".into(),
            ));
        };
        let m = first.degree();
        for p in &perms[1..] {
            if p.degree() != m {
                return Err(Error::DegreeMismatch {
                    left: m,
                    right: p.degree(),
                });
            }
        }
        for i in 0..perms.len() {
            for j in i + 1..perms.len() {
                if let Some(position) = perms[i].first_agreement(&perms[j])? {
                    return Err(Error::SlotConflict {
                        first: i + 1,
                        second: j + 1,
                        position,
                    });
                }
            }
        }
        Ok(Btu { m, perms })
    }

    pub(crate) fn new_unchecked(perms: Vec<Permutation>) -> Btu {
        let m = perms[0].degree();
        Btu { m, perms }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// Permutation in 1-based `slot`.
    pub fn slot(&self, slot: usize) -> Option<&Permutation> {
        slot.checked_sub(1).and_then(|i| self.perms.get(i))
    }

    pub fn into_perms(self) -> Vec<Permutation> {
        self.perms
    }

    pub fn to_biadjacency(&self) -> Matrix {
        let mut mat = Matrix::zeros(self.m);
        for p in &self.perms {
            for (row, &col) in p.as_slice().iter().enumerate() {
                mat.set(row, col, true);
            }
        }
        mat
    }

    /// `perms'[t] = perms[t] ∘ perms[slot]⁻¹`, so that `slot` holds the identity.
    pub fn rebase(&self, slot: usize) -> Result<Btu> {
        let pivot = self
            .slot(slot)
            .ok_or(Error::SlotOutOfRange { slot, r: self.r() })?
            .inverse();
        let perms = self
            .perms
            .iter()
            .map(|p| p.compose(&pivot))
            .collect::<Result<Vec<_>>>()?;
        Ok(Btu { m: self.m, perms })
    }

    /// Relabels rows by `rows` and columns by `cols`: an isomorphic BTU.
    pub fn relabel(&self, rows: &Permutation, cols: &Permutation) -> Result<Btu> {
        let row_inv = rows.inverse();
        let perms = self
            .perms
            .iter()
            .map(|p| cols.compose(&p.compose(&row_inv)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Btu { m: self.m, perms })
    }

    /// Slots sorted by their first image.
    pub fn canonicalize_order(&self) -> Btu {
        let mut perms = self.perms.clone();
        perms.sort_by_key(|p| p.as_slice()[0]);
        Btu { m: self.m, perms }
    }

    /// `β_i` between consecutive slots `i` and `i+1`.
    pub fn adjacent_partitions(&self) -> Vec<PartitionP2> {
        self.perms
            .windows(2)
            .map(|w| {
                w[0].union_cycle_partition(&w[1])
                    .expect("slots are compatible")
            })
            .collect()
    }

    /// Membership in `Φ(β₁, …, β_{r−1})` with respect to the stored slot order.
    pub fn in_phi(&self, betas: &[PartitionP2]) -> bool {
        betas.len() + 1 == self.r() && self.adjacent_partitions() == betas
    }

    /// Membership in `Z(m, r)`: optimal adjacent partitions, identity in slot
    /// `r−1`, and slot `j ≤ r−2` block-diagonal with blocks of size `b·k^j`.
    pub fn in_z(&self, f: &Factorization) -> bool {
        let r = self.r();
        if f.m != self.m || f.r != r || f.degenerate || r < 2 {
            return false;
        }
        if !self.perms[r - 2].is_identity() {
            return false;
        }
        let Ok(betas) = closed_form_partitions(f.b, f.k, r) else {
            return false;
        };
        if !self.in_phi(&betas) {
            return false;
        }
        (1..=r.saturating_sub(2)).all(|j| {
            let block = f.b * f.k.pow(j as u32);
            self.perms[j - 1].unscale(block).is_some()
        })
    }

    pub fn girth(&self) -> GirthReport {
        girth(self, false)
    }

    pub fn girth_with_witness(&self) -> GirthReport {
        girth(self, true)
    }
}

impl fmt::Display for Btu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.perms.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for Btu {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            perms: Vec<Permutation>,
        }
        let raw = Raw::deserialize(d)?;
        Btu::new(raw.perms).map_err(serde::de::Error::custom)
    }
}

/// Square 0/1 matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    size: usize,
    cells: Vec<bool>,
}

impl Matrix {
    pub fn zeros(size: usize) -> Matrix {
        Matrix {
            size,
            cells: vec![false; size * size],
        }
    }

    pub fn from_rows(rows: Vec<Vec<bool>>) -> Result<Matrix> {
        let size = rows.len();
        let mut cells = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {size}",
                    i + 1,
                    row.len()
                )));
            }
            cells.extend(row);
        }
        Ok(Matrix { size, cells })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cells[row * self.size + col] = value;
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.cells[row * self.size..(row + 1) * self.size]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.size)
            .map(|i| self.row(i).iter().filter(|&&c| c).count())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.size)
            .map(|j| (0..self.size).filter(|&i| self.get(i, j)).count())
            .collect()
    }

    /// Common row/column weight, if the matrix is regular.
    pub fn regular_weight(&self) -> Result<usize> {
        let rows = self.row_sums();
        let cols = self.col_sums();
        let Some(&r) = rows.first() else {
            return Err(Error::IrregularMatrix("empty matrix".into()));
        };
        if let Some(i) = rows.iter().position(|&s| s != r) {
            return Err(Error::IrregularMatrix(format!(
                "row {} has weight {}, row 1 has {r}",
                i + 1,
                rows[i]
            )));
        }
        if let Some(j) = cols.iter().position(|&s| s != r) {
            return Err(Error::IrregularMatrix(format!(
                "column {} has weight {}, rows have {r}",
                j + 1,
                cols[j]
            )));
        }
        Ok(r)
    }

    /// Splits a regular matrix into `r` compatible permutations by repeatedly
    /// extracting a perfect matching (augmenting paths, lowest index first).
    pub fn decompose(&self) -> Result<Btu> {
        let r = self.regular_weight()?;
        if r == 0 {
            return Err(Error::IrregularMatrix("all-zero matrix".into()));
        }
        let mut remaining = self.clone();
        let mut perms = Vec::with_capacity(r);
        for _ in 0..r {
            let matching = perfect_matching(&remaining)
                .ok_or_else(|| Error::IrregularMatrix("no perfect matching".into()))?;
            for (row, &col) in matching.iter().enumerate() {
                remaining.set(row, col, false);
            }
            perms.push(Permutation::from_zero_based(matching));
        }
        debug_assert!(remaining.cells.iter().all(|&c| !c));
        Btu::new(perms)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            for (j, &c) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(if c { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Kuhn's augmenting-path matching; rows in order, columns ascending.
fn perfect_matching(mat: &Matrix) -> Option<Vec<usize>> {
    let n = mat.size();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| mat.get(i, j)).collect())
        .collect();
    let mut col_owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        row: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        col_owner: &mut [Option<usize>],
    ) -> bool {
        // a free column is taken directly before any rerouting is tried
        if let Some(&col) = adj[row]
            .iter()
            .find(|&&c| !visited[c] && col_owner[c].is_none())
        {
            visited[col] = true;
            col_owner[col] = Some(row);
            return true;
        }
        for &col in &adj[row] {
            if visited[col] {
                continue;
            }
            visited[col] = true;
            let free = match col_owner[col] {
                None => true,
                Some(other) => augment(other, adj, visited, col_owner),
            };
            if free {
                col_owner[col] = Some(row);
                return true;
            }
        }
        false
    }

    for row in 0..n {
        let mut visited = vec![false; n];
        if !augment(row, &adj, &mut visited, &mut col_owner) {
            return None;
        }
    }
    let mut matching = vec![0; n];
    for (col, owner) in col_owner.iter().enumerate() {
        matching[owner.expect("perfect")] = col;
    }
    Some(matching)
}

/// A vertex of the bipartite graph: rows are left, columns are right (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    Left(usize),
    Right(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Left(i) => write!(f, "l{i}"),
            Vertex::Right(i) => write!(f, "r{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    /// `None` when the graph is a forest.
    pub girth: Option<usize>,
    pub witness_cycle: Option<Vec<Vertex>>,
}

/// Shortest cycle by BFS from every vertex. Compatible slots mean no parallel
/// edges, so excluding the parent vertex excludes the parent edge.
pub fn girth(btu: &Btu, with_witness: bool) -> GirthReport {
    let m = btu.m();
    let r = btu.r();
    if r < 2 {
        return GirthReport {
            girth: None,
            witness_cycle: None,
        };
    }
    let nv = 2 * m;
    let mut adj = vec![0usize; nv * r];
    for (t, p) in btu.perms().iter().enumerate() {
        for (row, &col) in p.as_slice().iter().enumerate() {
            adj[row * r + t] = m + col;
            adj[(m + col) * r + t] = row;
        }
    }

    let mut best = usize::MAX;
    let mut witness = None;
    let mut dist = vec![u32::MAX; nv];
    let mut parent = vec![usize::MAX; nv];
    let mut queue = VecDeque::with_capacity(nv);
    for root in 0..nv {
        dist.fill(u32::MAX);
        queue.clear();
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            let du = dist[u] as usize;
            if 2 * du >= best {
                break;
            }
            for &w in &adj[u * r..(u + 1) * r] {
                if dist[w] == u32::MAX {
                    dist[w] = du as u32 + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if w != parent[u] {
                    let len = du + dist[w] as usize + 1;
                    if len < best {
                        best = len;
                        if with_witness {
                            witness = Some(trace_cycle(&parent, root, u, w, m));
                        }
                    }
                    if 2 * du >= best {
                        break 'bfs;
                    }
                }
            }
        }
    }
    GirthReport {
        girth: (best != usize::MAX).then_some(best),
        witness_cycle: witness,
    }
}

fn trace_cycle(parent: &[usize], root: usize, u: usize, w: usize, m: usize) -> Vec<Vertex> {
    let path_to_root = |mut x: usize| {
        let mut path = vec![x];
        while x != root {
            x = parent[x];
            path.push(x);
        }
        path
    };
    // root .. u, then w .. (just before root)
    let mut cycle = path_to_root(u);
    cycle.reverse();
    let mut back = path_to_root(w);
    back.pop();
    cycle.extend(back);
    cycle
        .into_iter()
        .map(|v| {
            if v < m {
                Vertex::Left(v + 1)
            } else {
                Vertex::Right(v - m + 1)
            }
        })
        .collect()
}
