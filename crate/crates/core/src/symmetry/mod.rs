//! Symmetry groups of lattices and polytopes, and equivalence of Delone cells.

pub mod auto;
pub mod equiv;
pub mod group;
pub mod perm;

pub use auto::{
    automorphism_group, automorphism_group_with_limit, find_isometry, group_from_generators, parse_group_file,
    preserves_gram, spanning_domain,
};
pub use equiv::{barycenter_equivalent, metric_isomorphism, stabilizer_mod_one, AffineWitness, BaryClass, DEFAULT_ORBIT_CAP};
pub use group::{linear_action, mod_one_action, MatrixGroup};
pub use perm::{orbit, Perm, PermGroup};
