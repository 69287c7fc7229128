//! Exact combinatorial cellular decompositions of smooth toric fans: integer
//! linear algebra, shellings and critical complexes, a graded Milnor-Witt
//! coefficient calculus, and the reports (decompositions, homology sheaves,
//! motives, Chow bases, Chow-Witt tables) computed from fan data.

pub mod cellular;
pub mod fan;
pub mod intlin;
pub mod mwring;
pub mod report;
pub mod simplicial;

pub use cellular::{
    canonical_complex, chow_basis, decompose, decomposition_for, homology_sheaves,
    lambda_complex, moment_angle_complex, motive_reports, reduce_by_units, surface_report,
    DecompositionReport, MwChainComplex, SummandKind,
};
pub use fan::{builtin, row_sets, surface_data, transition_section, validate, Fan};
pub use intlin::{
    homology_at, is_lattice_basis_part, smith_normal_form, solve_integer, HomologyGroup,
    IntMatrix, SmithDecomposition,
};
pub use mwring::{
    action_coefficient, action_coefficient_bruteforce, mw_add, mw_mul, n_epsilon, CubicalCell,
    MwConstant, SectionMatrix,
};
pub use simplicial::{
    build_complex, critical_complex, find_shelling, is_shelling, reduced_homology,
    restriction_data, FacetOrder, SimplicialComplex,
};
