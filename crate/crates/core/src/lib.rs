//! Numerical laboratory for adiabatic evolution of transverse-field Ising
//! systems encoding number partitioning: state-vector simulation, minimum-gap
//! spectral scans, measurement-based tomography, an exact classical solver,
//! and a cost ledger comparing how the pieces scale with system size.

pub mod algebra;
pub mod davidson;
pub mod error;
pub mod evolution;
pub mod fitting;
pub mod hamiltonian;
pub mod lanczos;
pub mod ledger;
pub mod partition;
pub mod spectrum;
pub mod tomography;

pub use algebra::{
    expectation, inner_product, pauli_matrix, product_state, HermitianOperator, Pauli,
    PauliString, QuantumState, DEFAULT_MAX_QUBITS,
};
pub use error::{Error, Result};
pub use evolution::{
    criterion_ratio, find_threshold_time, propagate, propagate_reversed, propagate_with,
    short_time_propagator, success_probability, EvolutionResult, GroundSpaceProjector,
    ThresholdScanConfig, ThresholdTime,
};
pub use hamiltonian::{
    build_ising, build_transverse, generate_instance, initial_state, interpolate,
    PartitionInstance, ScheduleSpec, WeightDistribution,
};
pub use ledger::{
    assemble, emit, measure_evolution, measure_f, measure_g, CostLabel, EmitFormat, LedgerReport,
    MorphismCost, Provenance, Verdict,
};
pub use partition::{
    brute_force, evaluate_ising, measure_basis, verify_zero_ground, PartitionSolution,
    SpinAssignment,
};
pub use spectrum::{
    fit_gap_scaling, gap_profile, lowest_levels, GapProfile, GapScalingFit, Sector,
};
pub use tomography::{
    budget, full_state_reconstruct, reconstruct_product_state, simulate_measurement,
    MeasurementRecord, TomographyBudget, TomographyMode,
};
