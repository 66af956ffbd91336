//! Exact quantum predictions for interlinked measurement contexts on
//! entangled spin-1 and spin-3/2 singlets.
//!
//! The crate builds the context operators, the singlet states and their
//! joint outcome tables, enumerates two-valued states on the orthogonality
//! diagram of the contexts, and draws reproducible simulated shot records.

pub mod correlations;
pub mod eigen;
pub mod error;
pub mod greechie;
pub mod matrix;
pub mod observables;
pub mod sampler;
pub mod scenario;
pub mod states;

pub use correlations::{
    contextuality_criterion, expectation, joint_distribution, marginals, sequential_link_test,
    verify_uniqueness, CriterionReport, JointTable, UniquenessReport, UniquenessStatus,
};
pub use eigen::{hermitian_eigensystem, matrix_function_from_spectrum, spectral_projectors, SpectralDecomposition};
pub use error::{Error, Result};
pub use greechie::{diagram_from_contexts, is_separating, link_atoms, two_valued_states, GreechieDiagram, TwoValuedState};
pub use matrix::{kron, projector_from_ray, trace, Complex, ComplexMatrix, ComplexVector};
pub use observables::{
    context_from_basis, four_dim_contexts, ks_context, ks_context_prime, spin1_eigensystem, spin1_operator,
    ContextOperator, Direction, EigenvalueSpectrum,
};
pub use sampler::{empirical_report, sample, EmpiricalReport, ShotRecord};
pub use scenario::Scenario;
pub use states::{
    check_rotation_invariance, density, rotation_operator_spin1, spin1_singlet, spin32_singlet, BipartiteState,
    DensityMatrix,
};
