use crate::error::{Error, Result};
use crate::ordering::EliminationGraph;
use crate::sparse::{Permutation, SparseMatrix};

/// Number of fill edges (unordered vertex pairs) created by eliminating
/// the vertices of a symmetric pattern in the given order.
///
/// A fast, value-free measure of ordering quality. Note the unit: one
/// fill edge corresponds to two stored entries in a numeric LU of a
/// symmetric pattern (one in L, one in U).
pub fn symbolic_fill(pattern: &SparseMatrix, order: &Permutation) -> Result<u64> {
    let mut graph = EliminationGraph::from_pattern(pattern)?;
    if order.len() != graph.n() {
        return Err(Error::InvalidPermutation(format!(
            "permutation length {} does not match pattern dimension {}",
            order.len(),
            graph.n()
        )));
    }
    let mut fill = 0u64;
    for &v in order.map() {
        fill += graph.eliminate(v);
    }
    Ok(fill)
}
