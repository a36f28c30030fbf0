use crate::SparseError;

/// Compressed sparse-column matrix.
///
/// For symmetric use only the lower triangle (row >= col) is stored and
/// `nrows == ncols`. Row indices are strictly increasing within each column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn new(
        nrows: usize,
        ncols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, SparseError> {
        if col_ptr.len() != ncols + 1 {
            return Err(SparseError::Structure(format!(
                "col_ptr length {} != ncols + 1 = {}",
                col_ptr.len(),
                ncols + 1
            )));
        }
        if col_ptr[0] != 0 {
            return Err(SparseError::Structure("col_ptr[0] != 0".into()));
        }
        let nnz = *col_ptr.last().unwrap();
        if row_idx.len() != nnz || values.len() != nnz {
            return Err(SparseError::Structure(format!(
                "nnz mismatch: col_ptr says {}, row_idx has {}, values has {}",
                nnz,
                row_idx.len(),
                values.len()
            )));
        }
        for j in 0..ncols {
            if col_ptr[j] > col_ptr[j + 1] {
                return Err(SparseError::Structure(format!(
                    "col_ptr decreases at column {j}"
                )));
            }
            let mut last = None;
            for p in col_ptr[j]..col_ptr[j + 1] {
                let i = row_idx[p];
                if i >= nrows {
                    return Err(SparseError::Structure(format!(
                        "row index {i} out of range in column {j}"
                    )));
                }
                if let Some(prev) = last {
                    if i <= prev {
                        return Err(SparseError::Structure(format!(
                            "row indices not strictly increasing in column {j}"
                        )));
                    }
                }
                last = Some(i);
            }
        }
        Ok(Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from (row, col, value) triplets, summing duplicates.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self, SparseError> {
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(SparseError::Structure(format!(
                    "triplet ({r}, {c}) out of range for {nrows}x{ncols}"
                )));
            }
        }
        // count per column, then bucket and sort rows within each column
        let mut count = vec![0usize; ncols];
        for &(_, c, _) in triplets {
            count[c] += 1;
        }
        let mut col_ptr = vec![0usize; ncols + 1];
        for j in 0..ncols {
            col_ptr[j + 1] = col_ptr[j] + count[j];
        }
        let mut entries: Vec<(usize, f64)> = vec![(0, 0.0); triplets.len()];
        let mut next = col_ptr.clone();
        for &(r, c, v) in triplets {
            entries[next[c]] = (r, v);
            next[c] += 1;
        }
        let mut out_ptr = vec![0usize; ncols + 1];
        let mut out_row = Vec::with_capacity(triplets.len());
        let mut out_val = Vec::with_capacity(triplets.len());
        for j in 0..ncols {
            let seg = &mut entries[col_ptr[j]..col_ptr[j + 1]];
            seg.sort_unstable_by_key(|&(r, _)| r);
            for &(r, v) in seg.iter() {
                if out_row.len() > out_ptr[j] && *out_row.last().unwrap() == r {
                    *out_val.last_mut().unwrap() += v;
                } else {
                    out_row.push(r);
                    out_val.push(v);
                }
            }
            out_ptr[j + 1] = out_row.len();
        }
        Self::new(nrows, ncols, out_ptr, out_row, out_val)
    }

    /// Lower triangle (including diagonal) of a dense symmetric matrix.
    /// Entries with absolute value zero are dropped.
    pub fn lower_from_dense(a: &[Vec<f64>]) -> Result<Self, SparseError> {
        let n = a.len();
        let mut trips = Vec::new();
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(SparseError::Structure("dense input not square".into()));
            }
            for j in 0..=i {
                if row[j] != 0.0 {
                    trips.push((i, j, row[j]));
                }
            }
        }
        Self::from_triplets(n, n, &trips)
    }

    pub fn empty(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            col_ptr: vec![0; ncols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            col_ptr: (0..=n).collect(),
            row_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Iterator over (row, col, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ncols).flat_map(move |j| {
            (self.col_ptr[j]..self.col_ptr[j + 1]).map(move |p| (self.row_idx[p], j, self.values[p]))
        })
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// True if no entry lies strictly above the diagonal.
    pub fn is_lower_triangular(&self) -> bool {
        self.iter().all(|(i, j, _)| i >= j)
    }

    pub fn same_pattern(&self, other: &SparseMatrix) -> bool {
        self.nrows == other.nrows
            && self.ncols == other.ncols
            && self.col_ptr == other.col_ptr
            && self.row_idx == other.row_idx
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut count = vec![0usize; self.nrows];
        for &i in &self.row_idx {
            count[i] += 1;
        }
        let mut col_ptr = vec![0usize; self.nrows + 1];
        for i in 0..self.nrows {
            col_ptr[i + 1] = col_ptr[i] + count[i];
        }
        let mut row_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = col_ptr.clone();
        for j in 0..self.ncols {
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                let i = self.row_idx[p];
                row_idx[next[i]] = j;
                values[next[i]] = self.values[p];
                next[i] += 1;
            }
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            col_ptr,
            row_idx,
            values,
        }
    }

    /// y = A * x for a general rectangular matrix.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        y.fill(0.0);
        for j in 0..self.ncols {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                y[self.row_idx[p]] += self.values[p] * xj;
            }
        }
    }

    /// y = A^T * x.
    pub fn matvec_transpose(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        for j in 0..self.ncols {
            let mut acc = 0.0;
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                acc += self.values[p] * x[self.row_idx[p]];
            }
            y[j] = acc;
        }
    }

    /// y = A * x where only the lower triangle of a symmetric A is stored.
    pub fn symmetric_matvec(&self, x: &[f64], y: &mut [f64]) {
        assert!(self.is_square());
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        y.fill(0.0);
        for j in 0..self.ncols {
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                let i = self.row_idx[p];
                let v = self.values[p];
                y[i] += v * x[j];
                if i != j {
                    y[j] += v * x[i];
                }
            }
        }
    }

    /// Infinity norm of the symmetric matrix represented by this lower triangle.
    pub fn symmetric_norm_inf(&self) -> f64 {
        let mut row_sum = vec![0.0f64; self.nrows];
        for (i, j, v) in self.iter() {
            row_sum[i] += v.abs();
            if i != j {
                row_sum[j] += v.abs();
            }
        }
        row_sum.iter().copied().fold(0.0, f64::max)
    }

    /// Dense representation of the full symmetric matrix (lower storage mirrored).
    pub fn symmetric_to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.nrows;
        let mut a = vec![vec![0.0; n]; n];
        for (i, j, v) in self.iter() {
            a[i][j] = v;
            if i != j {
                a[j][i] = v;
            }
        }
        a
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, j, v) in self.iter() {
            a[i][j] = v;
        }
        a
    }

    pub fn diagonal_max_abs(&self) -> f64 {
        self.iter()
            .filter(|&(i, j, _)| i == j)
            .map(|(_, _, v)| v.abs())
            .fold(0.0, f64::max)
    }
}
