//! Shared fixtures for the criterion benches.

use qutrit_core::{ChainParams, QutritCoupling};

/// Chain and coupling used throughout the figure sweeps.
pub fn figure_setup(gamma: f64, alpha: f64, eta: f64) -> (ChainParams, QutritCoupling) {
    let params = ChainParams::new(3001, gamma, alpha, eta).expect("valid figure parameters");
    let coupling = QutritCoupling::uniform(0.005).expect("finite coupling");
    (params, coupling)
}
