//! Two-qutrit density matrices and their negativity.
//!
//! Basis ordering is `|ij⟩ ↦ 3i + j` with qutrit A first. Levels `|0⟩, |1⟩, |2⟩`
//! carry `S^z = +1, 0, −1`, which is what ties the coherences `|00⟩⟨11|`,
//! `|00⟩⟨22|`, `|11⟩⟨22|` to the field pairs `(λ_1, λ_5)`, `(λ_1, λ_9)`,
//! `(λ_5, λ_9)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::decoherence::DecoherenceSet;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, DenseMatrix};

pub const DIM: usize = 9;
/// Indices of `|00⟩`, `|11⟩`, `|22⟩`.
pub const DIAGONAL_KETS: [usize; 3] = [0, 4, 8];
/// Slack allowed on factor and negativity magnitudes.
pub const MAGNITUDE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQutritState {
    rho: DenseMatrix,
}

impl TwoQutritState {
    /// Wrap a matrix, checking Hermiticity, unit trace and dimension.
    pub fn from_matrix(rho: DenseMatrix) -> Result<Self> {
        if rho.dim() != DIM {
            return Err(Error::ParameterDomain(format!("expected 9x9 matrix, got {0}x{0}", rho.dim())));
        }
        let deviation = rho.hermitian_deviation();
        if deviation > 1e-12 {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = rho.trace();
        if (tr - 1.0).norm() > 1e-12 {
            return Err(Error::ParameterDomain(format!("density matrix trace {tr} != 1")));
        }
        Ok(Self { rho })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.rho
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rho[(row, col)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityPoint {
    pub t: f64,
    pub n_value: f64,
}

/// `(|00⟩ + |11⟩ + |22⟩)/√3` as a density matrix.
pub fn initial_state() -> TwoQutritState {
    coherent_state(&DecoherenceSet::IDENTITY)
}

fn coherent_state(f: &DecoherenceSet) -> TwoQutritState {
    let third = 1.0 / 3.0;
    let mut rho = DenseMatrix::zeros(DIM);
    for &i in &DIAGONAL_KETS {
        rho[(i, i)] = Complex64::new(third, 0.0);
    }
    for (&(r, c), &value) in [(0, 4), (0, 8), (4, 8)].iter().zip(&[f.f15, f.f19, f.f59]) {
        rho[(r, c)] = value * third;
        rho[(c, r)] = value.conj() * third;
    }
    TwoQutritState { rho }
}

/// Dephased state with coherences scaled by the decoherence factors.
pub fn evolved_state(factors: &DecoherenceSet) -> Result<TwoQutritState> {
    for (name, f) in [("F15", factors.f15), ("F19", factors.f19), ("F59", factors.f59)] {
        let magnitude = f.norm();
        if magnitude.is_nan() || magnitude > 1.0 + MAGNITUDE_SLACK {
            return Err(Error::FactorOutOfRange { name, magnitude });
        }
    }
    Ok(coherent_state(factors))
}

/// Transpose on qutrit A: `((i,j),(k,l)) ← ((k,j),(i,l))`.
pub fn partial_transpose(state: &TwoQutritState) -> DenseMatrix {
    partial_transpose_matrix(&state.rho)
}

pub(crate) fn partial_transpose_matrix(rho: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(DIM, |row, col| {
        let (i, j) = (row / 3, row % 3);
        let (k, l) = (col / 3, col % 3);
        rho[(3 * k + j, 3 * i + l)]
    })
}

/// `(‖ρ^{T_A}‖₁ − 1)/2` from a full Hermitian eigensolve.
pub fn negativity_spectral(state: &TwoQutritState) -> Result<f64> {
    let eig = hermitian_eigenvalues(&partial_transpose(state))?;
    let trace_norm: f64 = eig.iter().map(|e| e.abs()).sum();
    Ok((trace_norm - 1.0) / 2.0)
}

/// Closed form for the dephased GHZ-like state: the mean of the three
/// coherence magnitudes.
pub fn negativity_closed_form(f15_mag: f64, f19_mag: f64, f59_mag: f64) -> Result<f64> {
    for m in [f15_mag, f19_mag, f59_mag] {
        if !(-MAGNITUDE_SLACK..=1.0 + MAGNITUDE_SLACK).contains(&m) {
            return Err(Error::MagnitudeOutOfRange(m));
        }
    }
    Ok((f15_mag + f19_mag + f59_mag) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn set(f15: Complex64, f19: Complex64, f59: Complex64) -> DecoherenceSet {
        DecoherenceSet { f15, f19, f59 }
    }

    #[test]
    fn initial_state_is_pure_and_normalised() {
        let rho = initial_state();
        let m = rho.matrix();
        for r in 0..DIM {
            for col in 0..DIM {
                let want = if DIAGONAL_KETS.contains(&r) && DIAGONAL_KETS.contains(&col) { 1.0 / 3.0 } else { 0.0 };
                assert_eq!(m[(r, col)], c(want, 0.0));
            }
        }
        assert_abs_diff_eq!(m.trace().re, 1.0, epsilon = 1e-15);
        let sq = m.matmul(m);
        for r in 0..DIM {
            for col in 0..DIM {
                assert!((sq[(r, col)] - m[(r, col)]).norm() < 1e-15);
            }
        }
        assert!(TwoQutritState::from_matrix(m.clone()).is_ok());
    }

    #[test]
    fn initial_state_is_maximally_entangled() {
        assert_abs_diff_eq!(negativity_spectral(&initial_state()).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_factors_reproduce_initial_state() {
        assert_eq!(evolved_state(&DecoherenceSet::IDENTITY).unwrap(), initial_state());
    }

    #[test]
    fn full_dephasing_gives_separable_mixture() {
        let zero = c(0.0, 0.0);
        let rho = evolved_state(&set(zero, zero, zero)).unwrap();
        for r in 0..DIM {
            for col in 0..DIM {
                let want = if r == col && DIAGONAL_KETS.contains(&r) { 1.0 / 3.0 } else { 0.0 };
                assert_eq!(rho.get(r, col), c(want, 0.0));
            }
        }
        assert_abs_diff_eq!(negativity_spectral(&rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn mixed_phase_factors_give_valid_state() {
        let rho = evolved_state(&set(c(0.0, 0.5), c(0.5, 0.0), c(-0.5, 0.0))).unwrap();
        let m = rho.matrix();
        assert!(m.hermitian_deviation() == 0.0);
        assert_abs_diff_eq!(m.trace().re, 1.0, epsilon = 1e-15);
        let e = hermitian_eigenvalues(m).unwrap();
        assert!(e[0] >= -1e-12, "min eigenvalue {}", e[0]);
    }

    #[test]
    fn rejects_unphysical_factor() {
        let err = evolved_state(&set(c(1.1, 0.0), c(0.0, 0.0), c(0.0, 0.0))).unwrap_err();
        assert!(matches!(err, Error::FactorOutOfRange { name: "F15", .. }));
        assert!(evolved_state(&set(c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0))).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(negativity_closed_form(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(negativity_closed_form(0.0, 0.0, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(negativity_closed_form(0.3, 0.6, 0.9).unwrap(), 0.6, epsilon = 1e-15);
        assert!(negativity_closed_form(1.1, 0.0, 0.0).is_err());
        assert!(negativity_closed_form(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn spectral_matches_closed_form_example() {
        let rho = evolved_state(&set(c(0.3, 0.0), c(0.0, 0.6), c(-0.9, 0.0))).unwrap();
        assert_abs_diff_eq!(negativity_spectral(&rho).unwrap(), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let rho = evolved_state(&set(c(0.2, 0.3), c(-0.1, 0.7), c(0.4, -0.4))).unwrap();
        let pt = partial_transpose(&rho);
        assert!(pt.hermitian_deviation() < 1e-15);
        assert_eq!(partial_transpose_matrix(&pt), *rho.matrix());
    }

    #[test]
    fn product_state_stays_positive_under_partial_transpose() {
        // ρ_A ⊗ ρ_B with complex off-diagonals
        let a = [[c(0.5, 0.0), c(0.1, 0.2), c(0.0, 0.0)], [c(0.1, -0.2), c(0.3, 0.0), c(0.05, 0.0)], [c(0.0, 0.0), c(0.05, 0.0), c(0.2, 0.0)]];
        let b = [[c(0.6, 0.0), c(0.0, 0.1), c(0.1, 0.0)], [c(0.0, -0.1), c(0.3, 0.0), c(0.0, 0.0)], [c(0.1, 0.0), c(0.0, 0.0), c(0.1, 0.0)]];
        let rho = DenseMatrix::from_fn(DIM, |r, col| a[r / 3][col / 3] * b[r % 3][col % 3]);
        let state = TwoQutritState::from_matrix(rho).unwrap();
        assert!(hermitian_eigenvalues(state.matrix()).unwrap()[0] >= -1e-12);
        let e = hermitian_eigenvalues(&partial_transpose(&state)).unwrap();
        assert!(e[0] >= -1e-12);
        assert_abs_diff_eq!(negativity_spectral(&state).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_spectrum_structure() {
        let f = set(Complex64::from_polar(0.25, 1.0), Complex64::from_polar(0.5, -2.0), Complex64::from_polar(0.75, 0.3));
        let e = hermitian_eigenvalues(&partial_transpose(&evolved_state(&f).unwrap())).unwrap();
        let mut want = vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for m in [0.25, 0.5, 0.75] {
            want.push(m / 3.0);
            want.push(-m / 3.0);
        }
        want.sort_by(f64::total_cmp);
        for (g, w) in e.iter().zip(&want) {
            assert_abs_diff_eq!(*g, *w, epsilon = 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn spectral_equals_closed_form_and_ignores_phases(
                m in proptest::array::uniform3(0.0f64..=1.0),
                ph in proptest::array::uniform3(0.0f64..TAU),
                shift in proptest::array::uniform3(0.0f64..TAU),
            ) {
                let f = set(Complex64::from_polar(m[0], ph[0]), Complex64::from_polar(m[1], ph[1]), Complex64::from_polar(m[2], ph[2]));
                let rho = evolved_state(&f).unwrap();
                prop_assert!(rho.matrix().hermitian_deviation() == 0.0);
                prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
                let spectral = negativity_spectral(&rho).unwrap();
                let closed = negativity_closed_form(m[0], m[1], m[2]).unwrap();
                prop_assert!((spectral - closed).abs() <= 1e-9);

                let g = set(f.f15 * Complex64::cis(shift[0]), f.f19 * Complex64::cis(shift[1]), f.f59 * Complex64::cis(shift[2]));
                let spec2 = negativity_spectral(&evolved_state(&g).unwrap()).unwrap();
                prop_assert!((spectral - spec2).abs() <= 1e-10);
            }
        }
    }
}
