//! Shifted-field table and per-mode spectral quantities of the fermionized chain.
//!
//! For a mode with phase `φ = 2πk/n` and effective transverse field `λ` the
//! chain contributes
//!
//! ```text
//! ξ(λ) = 2 sqrt(γ² sin²φ + (λ − cos φ)²)
//! Λ(λ) = ξ(λ) + 2α sin 2φ
//! θ(λ) = arg(λ − cos φ, γ sin φ) ∈ [0, π]
//! ```
//!
//! Only the paired momenta `k = 1..(n−1)/2` of an odd-length ring enter the
//! decoherence products; the unpaired `k = 0` mode has no pairing amplitude
//! and drops out of every magnitude.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{domain, Result};

/// Environment parameters: ring length, anisotropy, three-site coupling, field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainParams {
    n: usize,
    gamma: f64,
    alpha: f64,
    eta: f64,
}

impl ChainParams {
    pub fn new(n: usize, gamma: f64, alpha: f64, eta: f64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(domain(format!(
                "chain length n must be odd and >= 3 (got n = {n})"
            )));
        }
        for (name, v) in [("gamma", gamma), ("alpha", alpha), ("eta", eta)] {
            if !v.is_finite() {
                return Err(domain(format!("{name} must be finite (got {v})")));
            }
        }
        Ok(Self { n, gamma, alpha, eta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.n, self.gamma, alpha, self.eta)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(self.n, self.gamma, self.alpha, eta)
    }

    pub fn modes(&self) -> ModeSet {
        ModeSet::from_valid_n(self.n)
    }
}

/// Coupling strengths of qutrits A and B to the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QutritCoupling {
    pub g_a: f64,
    pub g_b: f64,
}

impl QutritCoupling {
    pub fn new(g_a: f64, g_b: f64) -> Result<Self> {
        if !g_a.is_finite() || !g_b.is_finite() {
            return Err(domain(format!(
                "couplings must be finite (got g_a = {g_a}, g_b = {g_b})"
            )));
        }
        Ok(Self { g_a, g_b })
    }

    pub fn uniform(g: f64) -> Result<Self> {
        Self::new(g, g)
    }
}

/// The nine effective fields `λ_μ`, one per two-qutrit basis state `|ij⟩`
/// with `μ = 3i + j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaTable([f64; 9]);

impl LambdaTable {
    /// `λ_μ` with the 1-based index used throughout the physics literature.
    ///
    /// Panics if `mu` is outside `1..=9`.
    pub fn get(&self, mu: usize) -> f64 {
        assert!((1..=9).contains(&mu), "lambda index {mu} outside 1..=9");
        self.0[mu - 1]
    }

    pub fn as_array(&self) -> &[f64; 9] {
        &self.0
    }
}

/// Magnetic quantum number of qutrit level `|0⟩, |1⟩, |2⟩`.
pub const LEVEL_SPIN: [f64; 3] = [1.0, 0.0, -1.0];

/// Field felt by the chain for every joint qutrit level:
/// `λ = η + g_A m_A + g_B m_B`.
pub fn lambda_table(eta: f64, coupling: QutritCoupling) -> LambdaTable {
    let QutritCoupling { g_a, g_b } = coupling;
    // Written out rather than through LEVEL_SPIN so that λ_5 = η and the
    // mirrored pairs are exact in floating point.
    LambdaTable([
        eta + g_a + g_b,
        eta + g_a,
        eta + g_a - g_b,
        eta + g_b,
        eta,
        eta - g_b,
        eta - g_a + g_b,
        eta - g_a,
        eta - g_a - g_b,
    ])
}

/// Paired momentum modes `k = 1..M` of an odd ring, `M = (n − 1)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    n: usize,
    phases: Vec<f64>,
}

impl ModeSet {
    fn from_valid_n(n: usize) -> Self {
        let m = (n - 1) / 2;
        let phases = (1..=m).map(|k| mode_phase(k, n)).collect();
        Self { n, phases }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.phases.len()
    }

    /// `φ_k = 2πk/n`, index 0 holds `k = 1`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }
}

pub fn mode_set(n: usize) -> Result<ModeSet> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(domain(format!(
            "chain length n must be odd and >= 3 (got n = {n})"
        )));
    }
    Ok(ModeSet::from_valid_n(n))
}

#[inline]
pub(crate) fn mode_phase(k: usize, n: usize) -> f64 {
    TAU * k as f64 / n as f64
}

#[inline]
fn gap_root(phase: f64, gamma: f64, lambda: f64) -> f64 {
    let (s, c) = phase.sin_cos();
    let y = gamma * s;
    let x = lambda - c;
    (y * y + x * x).sqrt()
}

/// `ξ` at an explicit mode phase.
pub fn xi_at(phase: f64, gamma: f64, lambda: f64) -> f64 {
    2.0 * gap_root(phase, gamma, lambda)
}

/// `Λ` at an explicit mode phase.
pub fn big_lambda_at(phase: f64, gamma: f64, alpha: f64, lambda: f64) -> f64 {
    2.0 * (alpha * (2.0 * phase).sin() + gap_root(phase, gamma, lambda))
}

/// Bogoliubov angle with its degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta {
    pub angle: f64,
    /// Set when the mode is gapless (`ξ = 0`) and the angle is undefined.
    pub degenerate: bool,
}

/// `θ` at an explicit mode phase; two-argument arctangent mapped to `[0, π]`.
pub fn theta_at(phase: f64, gamma: f64, lambda: f64) -> Theta {
    let (s, c) = phase.sin_cos();
    let y = gamma * s;
    let x = lambda - c;
    if y == 0.0 {
        // covers y = -0.0 as well, which atan2 would send to -π
        return if x > 0.0 {
            Theta { angle: 0.0, degenerate: false }
        } else if x < 0.0 {
            Theta { angle: PI, degenerate: false }
        } else {
            Theta { angle: 0.0, degenerate: true }
        };
    }
    let mut angle = y.atan2(x);
    if angle < 0.0 {
        angle += PI;
    }
    Theta { angle, degenerate: false }
}

pub fn xi(k: usize, n: usize, gamma: f64, lambda: f64) -> f64 {
    debug_assert!(k >= 1 && k <= (n - 1) / 2);
    xi_at(mode_phase(k, n), gamma, lambda)
}

pub fn big_lambda(k: usize, n: usize, gamma: f64, alpha: f64, lambda: f64) -> f64 {
    debug_assert!(k >= 1 && k <= (n - 1) / 2);
    big_lambda_at(mode_phase(k, n), gamma, alpha, lambda)
}

pub fn theta(k: usize, n: usize, gamma: f64, lambda: f64) -> Theta {
    debug_assert!(k >= 1 && k <= (n - 1) / 2);
    theta_at(mode_phase(k, n), gamma, lambda)
}

/// Spectral record of one `(k, λ)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpectrum {
    pub xi: f64,
    pub big_lambda: f64,
    pub theta: f64,
    pub degenerate: bool,
}

impl ModeSpectrum {
    pub fn at_phase(phase: f64, gamma: f64, alpha: f64, lambda: f64) -> Self {
        let th = theta_at(phase, gamma, lambda);
        Self {
            xi: xi_at(phase, gamma, lambda),
            big_lambda: big_lambda_at(phase, gamma, alpha, lambda),
            theta: th.angle,
            degenerate: th.degenerate,
        }
    }
}

/// All modes of one field value, precomputed once per parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable {
    lambda: f64,
    modes: Vec<ModeSpectrum>,
}

impl SpectralTable {
    pub fn new(params: &ChainParams, lambda: f64) -> Self {
        let modes = params
            .modes()
            .phases()
            .iter()
            .map(|&phase| ModeSpectrum::at_phase(phase, params.gamma, params.alpha, lambda))
            .collect();
        Self { lambda, modes }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn modes(&self) -> &[ModeSpectrum] {
        &self.modes
    }

    pub fn degenerate_count(&self) -> usize {
        self.modes.iter().filter(|m| m.degenerate).count()
    }
}
