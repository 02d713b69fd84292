//! Invariant subspaces, (strong) irreducibility of exterior powers,
//! simultaneous triangularisation, block reduction and proximality.

mod eigen;
mod invariant;
mod irreducibility;
mod proximality;
mod report;
mod subspace;
mod triangular;

pub use eigen::{common_eigenvectors, joint_eigenspaces, real_eigenvalue_clusters, CLUSTER_GAP};
pub use invariant::{
    algebra_dimension, decompose, invariant_subspaces, plucker_residual, InvariantSearch,
    INVARIANCE_TOL,
};
pub use irreducibility::{
    irreducibility_report, strong_irreducibility_heuristic, IrreducibilityVerdict,
    StrongIrreducibilityVerdict,
};
pub use proximality::{modulus_ratio, proximality, ProximalityOptions, ProximalityVerdict};
pub use report::{structure_report, LevelReport, StructureOptions, StructureReport};
pub use subspace::{family_residual, Subspace};
pub use triangular::{
    block_reduce, subdiagonal_residual, triangularizability, BlockReduction, TriangularVerdict,
};
