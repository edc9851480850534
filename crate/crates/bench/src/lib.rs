//! Fixtures shared by the benchmarks.

use zgunits_core::group::witness_for;
use zgunits_core::{GroupSpec, GroupTable, Witness};

/// Builds a catalog group and the witness for `(a, b)` given in cycle notation.
pub fn fixture(name: &str, a: &str, b: &str) -> (GroupTable, Witness) {
    let g = GroupSpec::parse(name)
        .and_then(|s| s.build())
        .expect("catalog group");
    let w = witness_for(&g, g.find(a).expect("a"), g.find(b).expect("b")).expect("witness");
    (g, w)
}
