//! Minimum-cost perfect matching on square cost matrices.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("cost matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("cost matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
}

/// A square cost matrix, row-major.
///
/// When built from two child lists of different lengths, the rows past
/// `left_len` or the columns past `right_len` are padding.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>,
    left_len: usize,
    right_len: usize,
}

impl CostMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, AssignmentError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, values) in rows.iter().enumerate() {
            if values.len() != n {
                return Err(AssignmentError::NonSquare { row, len: values.len(), expected: n });
            }
            for (col, &v) in values.iter().enumerate() {
                if !v.is_finite() {
                    return Err(AssignmentError::NonFinite { row, col });
                }
                entries.push(v);
            }
        }
        Ok(CostMatrix { n, entries, left_len: n, right_len: n })
    }

    /// Builds the `max(left, right)` square matrix for matching two lists.
    ///
    /// Real cells hold `pair(i, j)`. A padding row (no left element) holds
    /// the cost of inserting right element `j`; a padding column holds the
    /// cost of deleting left element `i`.
    pub fn padded(
        left_len: usize,
        right_len: usize,
        mut pair: impl FnMut(usize, usize) -> f64,
        mut insert: impl FnMut(usize) -> f64,
        mut delete: impl FnMut(usize) -> f64,
    ) -> Result<Self, AssignmentError> {
        let n = left_len.max(right_len);
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = if i >= left_len {
                    if j < right_len {
                        insert(j)
                    } else {
                        0.0
                    }
                } else if j >= right_len {
                    delete(i)
                } else {
                    pair(i, j)
                };
                if !v.is_finite() {
                    return Err(AssignmentError::NonFinite { row: i, col: j });
                }
                entries.push(v);
            }
        }
        Ok(CostMatrix { n, entries, left_len, right_len })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn is_padding_row(&self, row: usize) -> bool {
        row >= self.left_len
    }

    pub fn is_padding_col(&self, col: usize) -> bool {
        col >= self.right_len
    }

    pub fn left_len(&self) -> usize {
        self.left_len
    }

    pub fn right_len(&self) -> usize {
        self.right_len
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(row, col)` pairs, one per row, sorted by row.
    pub pairs: Vec<(usize, usize)>,
    /// Sum of the selected entries, accumulated in row order.
    pub total_cost: f64,
}

/// Solves the assignment problem in O(n³) with the shortest augmenting
/// path method and dual potentials. Rows are inserted in index order and
/// the first column reaching the minimum slack is taken, so results are
/// deterministic.
pub fn hungarian_solve(matrix: &CostMatrix) -> Assignment {
    let n = matrix.size();
    if n == 0 {
        return Assignment { pairs: Vec::new(), total_cost: 0.0 };
    }
    // 1-based; column 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|b| *b = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = matrix.get(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of_row = vec![0usize; n];
    for j in 1..=n {
        col_of_row[owner[j] - 1] = j - 1;
    }
    let pairs: Vec<(usize, usize)> = col_of_row.into_iter().enumerate().collect();
    let total_cost = pairs.iter().map(|&(i, j)| matrix.get(i, j)).sum();
    Assignment { pairs, total_cost }
}
