//! Decoherence factors `F_μν(t)` as products over paired momentum modes.
//!
//! Each paired mode `(k, −k)` evolves in the two-dimensional space spanned by
//! the empty and doubly occupied states, so the environment echo factorises:
//!
//! ```text
//! F_μν(t) = ∏_k ⟨g_η| e^{iH_ν t} e^{−iH_μ t} |g_η⟩_k
//! ```
//!
//! The complex per-mode factor is
//!
//! ```text
//! e^{it(Λ_μ−Λ_ν)} [ (1 − e^{−2itΛ_μ})(1 − e^{2itΛ_ν}) a b c
//!                   − (1 − e^{−2itΛ_μ}) a² − (1 − e^{2itΛ_ν}) b² + 1 ]
//! a = sin((θ_μ − θ_η)/2),  b = sin((θ_ν − θ_η)/2),  c = cos((θ_μ − θ_ν)/2)
//! ```
//!
//! whose squared modulus is the closed-form radicand used by
//! [`factor_magnitude`]. The literal variant with `ξ` and both exponents
//! positive is kept as [`Eq6Variant::XiAsPrinted`] for comparison; it is not
//! a unitary overlap and its modulus is not bounded by one.
//!
//! Products are accumulated as log-magnitude plus phase; any mode whose
//! magnitude drops to `1e-300` or below makes the whole product exactly zero.

use num_complex::Complex64;
use serde::Serialize;

use crate::spectrum::{lambda_table, mode_phase, ChainParams, ModeSpectrum, QutritCoupling};

/// Per-mode magnitude at or below which a product is reported as exact zero.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Radicands below this indicate a bug, not roundoff.
pub const RADICAND_SLACK: f64 = 1e-12;

/// Which energies drive the oscillating exponents of the complex factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eq6Variant {
    /// Three-site-shifted energies `Λ`, consistent with the magnitude formula.
    #[default]
    Lambda,
    /// Bare energies `ξ` with both exponents positive.
    XiAsPrinted,
}

/// `F15`, `F19`, `F59` at a common time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSet {
    pub f15: Complex64,
    pub f19: Complex64,
    pub f59: Complex64,
}

impl DecoherenceSet {
    pub const IDENTITY: Self = Self {
        f15: Complex64::new(1.0, 0.0),
        f19: Complex64::new(1.0, 0.0),
        f59: Complex64::new(1.0, 0.0),
    };

    pub fn magnitudes(&self) -> [f64; 3] {
        [self.f15.norm(), self.f19.norm(), self.f59.norm()]
    }
}

/// A single decoherence factor together with its labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceFactor {
    pub mu: usize,
    pub nu: usize,
    pub t: f64,
    pub value: Complex64,
}

/// Time-independent data of one mode for a `(λ_μ, λ_ν)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PairMode {
    big_mu: f64,
    big_nu: f64,
    xi_mu: f64,
    xi_nu: f64,
    // sin((θ_μ − θ_η)/2), sin((θ_ν − θ_η)/2), cos((θ_μ − θ_ν)/2)
    half_mu: f64,
    half_nu: f64,
    half_cross: f64,
    // sin(θ_η − θ_μ), sin(θ_η − θ_ν), sin²((θ_μ − θ_ν)/2)
    s_mu: f64,
    s_nu: f64,
    cross_sq: f64,
}

impl PairMode {
    fn new(eta: &ModeSpectrum, mu: &ModeSpectrum, nu: &ModeSpectrum) -> Self {
        let sc = (0.5 * (mu.theta - nu.theta)).sin();
        Self {
            big_mu: mu.big_lambda,
            big_nu: nu.big_lambda,
            xi_mu: mu.xi,
            xi_nu: nu.xi,
            half_mu: (0.5 * (mu.theta - eta.theta)).sin(),
            half_nu: (0.5 * (nu.theta - eta.theta)).sin(),
            half_cross: (0.5 * (mu.theta - nu.theta)).cos(),
            s_mu: (eta.theta - mu.theta).sin(),
            s_nu: (eta.theta - nu.theta).sin(),
            cross_sq: sc * sc,
        }
    }

    fn at_phase(phase: f64, params: &ChainParams, lambda_mu: f64, lambda_nu: f64) -> Self {
        let (g, a) = (params.gamma(), params.alpha());
        Self::new(
            &ModeSpectrum::at_phase(phase, g, a, params.eta()),
            &ModeSpectrum::at_phase(phase, g, a, lambda_mu),
            &ModeSpectrum::at_phase(phase, g, a, lambda_nu),
        )
    }

    fn complex(&self, t: f64, variant: Eq6Variant) -> Complex64 {
        let (e_mu, e_nu, sign_mu) = match variant {
            Eq6Variant::Lambda => (self.big_mu, self.big_nu, -1.0),
            Eq6Variant::XiAsPrinted => (self.xi_mu, self.xi_nu, 1.0),
        };
        let one = Complex64::new(1.0, 0.0);
        let d_mu = one - Complex64::cis(sign_mu * 2.0 * t * e_mu);
        let d_nu = one - Complex64::cis(2.0 * t * e_nu);
        let (a, b, c) = (self.half_mu, self.half_nu, self.half_cross);
        let bracket = d_mu * d_nu * (a * b * c) - d_mu * (a * a) - d_nu * (b * b) + one;
        Complex64::cis(t * (e_mu - e_nu)) * bracket
    }

    fn radicand(&self, t: f64) -> f64 {
        let (sm, cm) = (t * self.big_mu).sin_cos();
        let (sn, cn) = (t * self.big_nu).sin_cos();
        let ss = self.s_mu * self.s_nu;
        let cos_diff = cm * cn + sm * sn;
        -4.0 * ss * self.cross_sq * sm * sm * sn * sn + 2.0 * ss * sm * sn * cos_diff
            - self.s_mu * self.s_mu * sm * sm
            - self.s_nu * self.s_nu * sn * sn
            + 1.0
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Precomputed per-mode constants for one `(λ_μ, λ_ν)` pair.
///
/// Every public evaluation routine in this module goes through this type, so
/// cached and one-shot evaluations are bitwise identical.
#[derive(Debug, Clone, PartialEq)]
pub struct PairKernel {
    modes: Vec<PairMode>,
}

impl PairKernel {
    pub fn new(params: &ChainParams, lambda_mu: f64, lambda_nu: f64) -> Self {
        let modes = params
            .modes()
            .phases()
            .iter()
            .map(|&phase| PairMode::at_phase(phase, params, lambda_mu, lambda_nu))
            .collect();
        Self { modes }
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Complex product over all modes.
    pub fn complex(&self, t: f64, variant: Eq6Variant) -> Complex64 {
        let mut log_mag = CompensatedSum::default();
        let mut phase = CompensatedSum::default();
        for mode in &self.modes {
            let m = mode.complex(t, variant);
            let r = m.norm();
            if r <= UNDERFLOW_FLOOR {
                return Complex64::new(0.0, 0.0);
            }
            log_mag.add(r.ln());
            phase.add(m.arg());
        }
        Complex64::from_polar(
            log_mag.value().exp(),
            phase.value().rem_euclid(std::f64::consts::TAU),
        )
    }

    /// Magnitude product from the closed-form radicand, in `[0, 1]`.
    pub fn magnitude(&self, t: f64) -> f64 {
        let mut log_mag = CompensatedSum::default();
        for mode in &self.modes {
            let r = mode.radicand(t);
            debug_assert!(r >= -RADICAND_SLACK, "radicand {r} below zero");
            let r = r.clamp(0.0, 1.0);
            if r <= UNDERFLOW_FLOOR * UNDERFLOW_FLOOR {
                return 0.0;
            }
            let root = r.sqrt();
            if root <= UNDERFLOW_FLOOR {
                return 0.0;
            }
            log_mag.add(root.ln());
        }
        log_mag.value().exp().min(1.0)
    }

    /// Unclamped per-mode radicands, for diagnostics and tests.
    pub fn radicands(&self, t: f64) -> Vec<f64> {
        self.modes.iter().map(|m| m.radicand(t)).collect()
    }
}

/// Bracketed per-mode factor including its phase prefactor.
pub fn mode_factor(k: usize, t: f64, params: &ChainParams, lambda_mu: f64, lambda_nu: f64) -> Complex64 {
    mode_factor_with(k, t, params, lambda_mu, lambda_nu, Eq6Variant::Lambda)
}

pub fn mode_factor_with(
    k: usize,
    t: f64,
    params: &ChainParams,
    lambda_mu: f64,
    lambda_nu: f64,
    variant: Eq6Variant,
) -> Complex64 {
    debug_assert!(k >= 1 && k <= (params.n() - 1) / 2);
    PairMode::at_phase(mode_phase(k, params.n()), params, lambda_mu, lambda_nu).complex(t, variant)
}

pub fn factor_complex(t: f64, params: &ChainParams, lambda_mu: f64, lambda_nu: f64) -> Complex64 {
    factor_complex_with(t, params, lambda_mu, lambda_nu, Eq6Variant::Lambda)
}

pub fn factor_complex_with(
    t: f64,
    params: &ChainParams,
    lambda_mu: f64,
    lambda_nu: f64,
    variant: Eq6Variant,
) -> Complex64 {
    PairKernel::new(params, lambda_mu, lambda_nu).complex(t, variant)
}

pub fn factor_magnitude(t: f64, params: &ChainParams, lambda_mu: f64, lambda_nu: f64) -> f64 {
    PairKernel::new(params, lambda_mu, lambda_nu).magnitude(t)
}

/// Kernels for the three coherences `|00⟩⟨11|`, `|00⟩⟨22|`, `|11⟩⟨22|`,
/// i.e. the `λ` pairs `(1, 5)`, `(1, 9)`, `(5, 9)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateKernel {
    pairs: [PairKernel; 3],
}

impl StateKernel {
    pub const PAIRS: [(usize, usize); 3] = [(1, 5), (1, 9), (5, 9)];

    pub fn new(params: &ChainParams, coupling: QutritCoupling) -> Self {
        let table = lambda_table(params.eta(), coupling);
        let pairs = Self::PAIRS.map(|(mu, nu)| PairKernel::new(params, table.get(mu), table.get(nu)));
        Self { pairs }
    }

    pub fn factors(&self, t: f64, variant: Eq6Variant) -> DecoherenceSet {
        let [f15, f19, f59] = [0, 1, 2].map(|i| self.pairs[i].complex(t, variant));
        DecoherenceSet { f15, f19, f59 }
    }

    pub fn magnitudes(&self, t: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| self.pairs[i].magnitude(t))
    }
}

pub fn factors_for_state(t: f64, params: &ChainParams, coupling: QutritCoupling) -> DecoherenceSet {
    StateKernel::new(params, coupling).factors(t, Eq6Variant::Lambda)
}
