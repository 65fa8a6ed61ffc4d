//! Fixtures shared by the criterion benchmarks.

use mk_core::zoo;
use mk_core::FiniteAlgebra;

/// Algebras of increasing size used across benchmark groups.
pub fn group_corpus() -> Vec<(&'static str, FiniteAlgebra)> {
    vec![
        ("z8", zoo::cyclic_group(8)),
        ("d4", zoo::dihedral4()),
        ("q8", zoo::quaternion()),
        ("s3", zoo::symmetric3()),
    ]
}
