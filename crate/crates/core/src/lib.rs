//! Entanglement dynamics of two qutrits dephasing under an anisotropic XY
//! spin chain with a three-site interaction.
//!
//! The chain is only ever seen through its effective transverse field, which
//! the qutrits shift to one of nine values `λ_μ`. Each coherence of the
//! two-qutrit state is multiplied by a Loschmidt-echo factor `F_μν(t)`
//! evaluated mode by mode ([`decoherence`]), and the entanglement is read off
//! as the negativity of the resulting 9×9 state ([`state`]).
//!
//! [`oracle_ed`] rebuilds the spin Hamiltonian literally for short rings and
//! evaluates the echo by exact diagonalisation; [`sweeps`] drives the time,
//! field and three-site-coupling scans.

pub mod decoherence;
pub mod error;
pub mod linalg;
pub mod oracle_ed;
pub mod spectrum;
pub mod state;
pub mod sweeps;

pub use decoherence::{
    factor_complex, factor_complex_with, factor_magnitude, factors_for_state, mode_factor,
    DecoherenceFactor, DecoherenceSet, Eq6Variant, PairKernel, StateKernel,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectrum::{
    big_lambda, lambda_table, mode_set, theta, xi, ChainParams, LambdaTable, ModeSet,
    ModeSpectrum, QutritCoupling, SpectralTable, Theta,
};
pub use state::{
    evolved_state, initial_state, negativity_closed_form, negativity_spectral,
    partial_transpose, NegativityPoint, TwoQutritState,
};
pub use oracle_ed::{
    build_env_hamiltonian, determine_three_site_sign, exact_factor, ground_state, EchoOracle,
    EchoSetup, EnvHamiltonian, ExactFactor, GroundState, InitialSector, SignDetermination,
    ThreeSiteSign,
};
pub use sweeps::{
    alpha_time_grid, eta_family, find_critical_alpha, time_series, AlphaRange, Axis,
    CriticalAlpha, CriticalObjective, CriticalSearch, FactorSource, SweepKind, SweepMetadata,
    SweepOptions, SweepResult, TimeGrid, DEFAULT_ETAS,
};
