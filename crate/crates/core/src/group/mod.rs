//! Finite permutation groups as multiplication tables, plus the witness scan.

mod families;
mod perm;
mod table;
mod witness;

pub use families::{
    alternating, cyclic, dihedral, direct_product, quaternion, symmetric, GroupSpec, CATALOG,
};
pub use perm::Permutation;
pub use table::{
    build_group, build_group_with, BuildLimits, ElementSet, GroupTable, DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_ORDER,
};
pub use witness::{compute_m, find_witnesses, witness_for, Witness};
