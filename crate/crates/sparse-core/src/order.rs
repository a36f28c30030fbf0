use std::collections::BTreeSet;

use crate::{Permutation, SparseError, SparseMatrix};

/// Fill-reducing minimum degree ordering on a symmetric pattern.
///
/// Greedy elimination on the explicit graph: at each step the node of
/// minimum current degree is eliminated and its neighbors are clique-ed.
/// Ties are broken by the lowest original index, which makes the ordering
/// deterministic for a fixed input. Values are ignored; only the pattern
/// matters.
pub fn amd_order(pattern: &SparseMatrix) -> Result<Permutation, SparseError> {
    if !pattern.is_square() {
        return Err(SparseError::Structure(format!(
            "ordering requires a square pattern, got {}x{}",
            pattern.nrows(),
            pattern.ncols()
        )));
    }
    let n = pattern.nrows();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, j, _) in pattern.iter() {
        if i != j {
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }

    let mut active = vec![true; n];
    let mut forward = Vec::with_capacity(n);
    for _ in 0..n {
        // min (degree, index); linear scan keeps the tie-break explicit
        let mut best = usize::MAX;
        let mut best_deg = usize::MAX;
        for v in 0..n {
            if active[v] && adj[v].len() < best_deg {
                best_deg = adj[v].len();
                best = v;
            }
        }
        let v = best;
        active[v] = false;
        forward.push(v);

        let neighbors: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &neighbors {
            adj[u].remove(&v);
        }
        // eliminating v fills in the clique over its neighbors
        for (a, &u) in neighbors.iter().enumerate() {
            for &w in &neighbors[a + 1..] {
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
        adj[v].clear();
    }
    Permutation::from_forward(forward)
}
