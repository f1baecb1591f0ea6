//! Quantum Otto heat engines on small working substances.
//!
//! The cycle can draw its heat either from a hot thermal bath or from a
//! non-selective quantum measurement. Records break heat down per energy level
//! so that flows through idle levels, the ones the field does not move, can be
//! inspected directly.

pub mod channels;
pub mod cycle;
pub mod error;
pub mod linalg;
pub mod measurements;
pub mod quantum;
pub mod substances;
pub mod sweep;
pub mod tolerance;

pub use channels::{
    apply_channel, energy_change, is_minimally_disturbing, is_unital, random_unital_channel,
    rearrangement_oracle, transfer_matrix, KrausChannel, TransferMatrix,
};
pub use cycle::{
    closed_form_two_bath_qutrit, efficiency_ratio_identity, run_cycle,
    uniform_ratio_efficiency_check, CycleConfig, CycleRecord, LevelRecord, Protocol,
};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use measurements::{local_spin_channel, su3_projective_channel, SpinDirection, Su3Angles};
pub use quantum::{
    energy_expectation, gibbs_state, hermitian_eigensystem, is_passive, populations_in_basis,
    BathSpec, DensityMatrix, HermitianOperator,
};
pub use substances::{
    build_hamiltonian, check_uniform_gap_ratio, detect_level_crossing, labelled_spectrum,
    LabelledSpectrum, LevelLabel, SubstanceSpec,
};
