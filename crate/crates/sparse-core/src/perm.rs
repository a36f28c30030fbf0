use crate::SparseError;

/// Permutation of {0..n-1} with both directions stored.
///
/// `forward[k]` is the original index placed at position `k` of the
/// reordered matrix; `inverse` is its inverse, so
/// `(P^T A P)(k, l) = A(forward[k], forward[l])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        Self {
            forward: id.clone(),
            inverse: id,
        }
    }

    pub fn from_forward(forward: Vec<usize>) -> Result<Self, SparseError> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &i) in forward.iter().enumerate() {
            if i >= n || inverse[i] != usize::MAX {
                return Err(SparseError::Structure(
                    "forward map is not a bijection".into(),
                ));
            }
            inverse[i] = k;
        }
        Ok(Self { forward, inverse })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }
}
