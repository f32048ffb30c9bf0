//! Dissipative quantum Rabi model from weak to deep-strong coupling.
//!
//! The crate builds the quantum Rabi Hamiltonian in the Coulomb and dipole
//! gauges on a truncated qubit (x) Fock space, diagonalizes it into a dressed
//! basis, assembles the non-secular generalized master equation (and the
//! secular dressed and standard quantum-optics master equations for
//! comparison), and computes gauge-invariant photon-flux emission rates and
//! emission spectra under incoherent excitation, via the quantum regression
//! theorem in resolvent form.

pub mod convergence;
pub mod dressed;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod master;
pub mod models;
pub mod pipeline;
pub mod spectra;

pub use convergence::{converge_eigensystem, hamiltonian_in, ConvergenceSettings, ConvergedBasis, Gauge};
pub use dressed::{
    diagonalize, diagonalize_labeled, field_operator_plus, label_states, transition_table,
    wrong_field_operator_plus, Channel, EigenSystem, FieldOperatorSpec, StateLabel,
    TransitionTable, Weighting,
};
pub use dynamics::{
    emission_rate, steady_state, steady_state_with, two_level_ratio, DensityMatrix,
    SteadyStateOptions, UniquenessCheck,
};
pub use error::{QrmError, Result};
pub use hilbert::{annihilation, build_space, parity_operator, pauli, position, HilbertSpace, Operator, PauliAxis};
pub use master::{
    decay_rates, dissipator_generic, liouvillian_dressed_rwa, liouvillian_gme,
    liouvillian_gme_opts, liouvillian_standard, thermal_occupation, BathSpec, RateTable,
    Superoperator,
};
pub use models::{
    dressed_photon_operator, gauge_unitary, hamiltonian_coulomb, hamiltonian_dipole,
    hamiltonian_jc, hamiltonian_jc_with_coupling, ModelParams,
};
pub use pipeline::{reference_rate_eta0, solve_point, spectrum_map, ModelKind, PipelineSettings, PointSolution};
pub use spectra::{emission_spectrum, emission_spectrum_unweighted, Normalization, SpectrumResult};
