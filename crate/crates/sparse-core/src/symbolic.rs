use crate::{Permutation, SparseError, SparseMatrix};

/// Symbolic analysis of a symmetric matrix under a fixed permutation.
///
/// Holds the elimination tree and the full pattern of the factor L of
/// `P^T A P = L D L^T` (unit diagonal implied, not stored). The analysis
/// depends only on the sparsity pattern and is reusable across any numeric
/// values with the same pattern.
#[derive(Debug, Clone)]
pub struct SymbolicFactorization {
    pub(crate) n: usize,
    pub(crate) perm: Permutation,
    /// Parent of each column in the elimination tree; `usize::MAX` for roots.
    pub(crate) parent: Vec<usize>,
    /// Nonzero count of each column of L (strict lower part).
    pub(crate) l_col_counts: Vec<usize>,
    /// Column pointers of the L pattern.
    pub(crate) l_col_ptr: Vec<usize>,
    /// Row indices of the L pattern, ascending within each column.
    pub(crate) l_row_idx: Vec<usize>,
    /// Permuted upper-triangular pattern of A (diagonal included),
    /// used to scatter values during numeric factorization.
    pub(crate) upper_col_ptr: Vec<usize>,
    pub(crate) upper_row_idx: Vec<usize>,
    /// Maps position `p` of the input's nnz to its slot in the permuted
    /// upper pattern.
    pub(crate) value_map: Vec<usize>,
}

impl SymbolicFactorization {
    pub const NO_PARENT: usize = usize::MAX;

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn etree_parent(&self) -> &[usize] {
        &self.parent
    }

    pub fn l_col_counts(&self) -> &[usize] {
        &self.l_col_counts
    }

    pub fn l_pattern(&self) -> (&[usize], &[usize]) {
        (&self.l_col_ptr, &self.l_row_idx)
    }

    pub fn l_nnz(&self) -> usize {
        self.l_row_idx.len()
    }
}

/// Computes the elimination tree and L pattern of `P^T A P`.
///
/// `pattern` must be the lower triangle of a square symmetric matrix.
pub fn symbolic_analyze(
    pattern: &SparseMatrix,
    perm: &Permutation,
) -> Result<SymbolicFactorization, SparseError> {
    if !pattern.is_square() {
        return Err(SparseError::Structure(
            "symbolic analysis requires a square matrix".into(),
        ));
    }
    if !pattern.is_lower_triangular() {
        return Err(SparseError::Structure(
            "symmetric input must store only the lower triangle".into(),
        ));
    }
    let n = pattern.nrows();
    if perm.len() != n {
        return Err(SparseError::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let inv = perm.inverse();

    // Permuted upper pattern: original lower entry (r, c) lands at
    // (min(pr, pc), max(pr, pc)) with pr = inv[r], pc = inv[c].
    let nnz = pattern.nnz();
    let mut count = vec![0usize; n];
    let mut dest_col = vec![0usize; nnz];
    let mut dest_row = vec![0usize; nnz];
    for (p, (r, c, _)) in pattern.iter().enumerate() {
        let (pr, pc) = (inv[r], inv[c]);
        let (i, j) = if pr <= pc { (pr, pc) } else { (pc, pr) };
        dest_row[p] = i;
        dest_col[p] = j;
        count[j] += 1;
    }
    let mut upper_col_ptr = vec![0usize; n + 1];
    for j in 0..n {
        upper_col_ptr[j + 1] = upper_col_ptr[j] + count[j];
    }
    // bucket then sort each column by row to get a canonical upper pattern
    let mut order: Vec<usize> = (0..nnz).collect();
    order.sort_unstable_by_key(|&p| (dest_col[p], dest_row[p]));
    let mut upper_row_idx = vec![0usize; nnz];
    let mut value_map = vec![0usize; nnz];
    for (slot, &p) in order.iter().enumerate() {
        upper_row_idx[slot] = dest_row[p];
        value_map[p] = slot;
    }
    // duplicate structural entries are impossible: the input pattern is
    // strictly sorted per column and the permutation is a bijection

    // Elimination tree (Liu): walk ancestors with path compression.
    let mut parent = vec![SymbolicFactorization::NO_PARENT; n];
    let mut ancestor = vec![SymbolicFactorization::NO_PARENT; n];
    for k in 0..n {
        for p in upper_col_ptr[k]..upper_col_ptr[k + 1] {
            let mut i = upper_row_idx[p];
            while i < k {
                let next = ancestor[i];
                ancestor[i] = k;
                if next == SymbolicFactorization::NO_PARENT {
                    parent[i] = k;
                    i = k;
                } else {
                    i = next;
                }
            }
        }
    }

    // Row patterns of L via etree reach; accumulated column-wise.
    let mut l_col_counts = vec![0usize; n];
    let mut rows_per_col: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut mark = vec![usize::MAX; n];
    for k in 0..n {
        mark[k] = k;
        for p in upper_col_ptr[k]..upper_col_ptr[k + 1] {
            let mut j = upper_row_idx[p];
            while j < k && mark[j] != k {
                mark[j] = k;
                rows_per_col[j].push(k); // ks ascend, so columns stay sorted
                l_col_counts[j] += 1;
                j = parent[j];
            }
        }
    }
    let mut l_col_ptr = vec![0usize; n + 1];
    for j in 0..n {
        l_col_ptr[j + 1] = l_col_ptr[j] + l_col_counts[j];
    }
    let mut l_row_idx = Vec::with_capacity(l_col_ptr[n]);
    for rows in &rows_per_col {
        l_row_idx.extend_from_slice(rows);
    }

    Ok(SymbolicFactorization {
        n,
        perm: perm.clone(),
        parent,
        l_col_counts,
        l_col_ptr,
        l_row_idx,
        upper_col_ptr,
        upper_row_idx,
        value_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pattern_has_no_tree_and_empty_l() {
        let a = SparseMatrix::identity(4);
        let sym = symbolic_analyze(&a, &Permutation::identity(4)).unwrap();
        assert!(sym
            .etree_parent()
            .iter()
            .all(|&p| p == SymbolicFactorization::NO_PARENT));
        assert_eq!(sym.l_nnz(), 0);
    }

    #[test]
    fn dense_3x3_fills_strict_lower_triangle() {
        let a = SparseMatrix::lower_from_dense(&[
            vec![4.0, 1.0, 1.0],
            vec![1.0, 4.0, 1.0],
            vec![1.0, 1.0, 4.0],
        ])
        .unwrap();
        let sym = symbolic_analyze(&a, &Permutation::identity(3)).unwrap();
        assert_eq!(sym.l_nnz(), 3);
        let (ptr, rows) = sym.l_pattern();
        assert_eq!(ptr, &[0, 2, 3, 3]);
        assert_eq!(rows, &[1, 2, 2]);
    }

    #[test]
    fn tridiagonal_l_is_subdiagonal() {
        let a = SparseMatrix::from_triplets(
            4,
            4,
            &[
                (0, 0, 2.0),
                (1, 0, -1.0),
                (1, 1, 2.0),
                (2, 1, -1.0),
                (2, 2, 2.0),
                (3, 2, -1.0),
                (3, 3, 2.0),
            ],
        )
        .unwrap();
        let sym = symbolic_analyze(&a, &Permutation::identity(4)).unwrap();
        assert_eq!(sym.l_nnz(), 3);
        let (_, rows) = sym.l_pattern();
        assert_eq!(rows, &[1, 2, 3]);
        assert_eq!(sym.etree_parent(), &[1, 2, 3, SymbolicFactorization::NO_PARENT]);
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = SparseMatrix::identity(3);
        assert!(symbolic_analyze(&a, &Permutation::identity(4)).is_err());
    }
}
