//! Fixtures shared by the criterion benchmarks.

use rhobock_core::{F2Matrix, F2Vector};

/// Deterministic pseudo-random dense matrix (xorshift), so benchmark inputs
/// are identical across runs.
pub fn dense_matrix(rows: usize, cols: usize, seed: u64) -> F2Matrix {
    let mut state = seed.max(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let rows = (0..rows)
        .map(|_| F2Vector::from_indices(cols, (0..cols).filter(|_| next() & 1 == 1)))
        .collect();
    F2Matrix::from_rows(cols, rows).expect("row lengths match")
}
