//! The qubit-oscillator system: Hamiltonian construction, the bath coupling
//! operator on the joint space, and initial states.
//!
//! The joint Hilbert space is ordered qubit (x) oscillator throughout the
//! crate (qubit index slow): the joint basis index is `q * n_osc + n` with
//! `q = 0` the excited qubit state `|e>` and `q = 1` the ground state `|g>`.
//! All frequencies are angular frequencies in simulation units with hbar = 1;
//! times are in the matching inverse units.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_2x2, kron, ComplexMatrix};

/// All physical and numerical parameters of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Qubit bias field.
    pub epsilon: f64,
    /// Bare tunneling amplitude.
    pub delta: f64,
    /// Oscillator frequency.
    pub omega0: f64,
    /// Qubit-oscillator coupling.
    pub g0: f64,
    /// Coherent-state displacement of the oscillator's initial state.
    pub alpha: f64,
    /// Qubit-bath coupling strength.
    pub gamma: f64,
    /// Spectral width of the bath coupling.
    pub lambda: f64,
    /// Oscillator truncation dimension (number of Fock levels kept).
    pub n_osc: usize,
    /// Hierarchy truncation depth L.
    pub hierarchy_depth: usize,
    /// Integration time step.
    pub dt: f64,
    /// Integration horizon.
    pub t_max: f64,
}

impl SystemParams {
    /// Dimensionless qubit-oscillator coupling ratio g0/omega0 (zero when
    /// the oscillator is decoupled).
    pub fn zeta(&self) -> f64 {
        if self.g0 == 0.0 {
            0.0
        } else {
            self.g0 / self.omega0
        }
    }

    /// Dimension of the joint qubit-oscillator space.
    pub fn joint_dim(&self) -> usize {
        2 * self.n_osc
    }

    pub fn validate(&self) -> Result<()> {
        if self.g0 != 0.0 && self.omega0 <= 0.0 {
            return Err(Error::InvalidParams(
                "omega0 must be positive when g0 is nonzero".into(),
            ));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams("gamma must be non-negative".into()));
        }
        if self.lambda <= 0.0 {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        if self.n_osc < 1 {
            return Err(Error::InvalidParams("n_osc must be at least 1".into()));
        }
        if self.dt <= 0.0 {
            return Err(Error::InvalidParams("dt must be positive".into()));
        }
        if self.t_max < 0.0 {
            return Err(Error::InvalidParams("t_max must be non-negative".into()));
        }
        Ok(())
    }
}

/// Pauli x.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, 2, vec![C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
}

/// Pauli z, with `|e>` the +1 eigenstate.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::ONE, -C64::ONE])
}

/// Projector onto the excited qubit state `|e><e|`.
pub fn excited_state() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::ONE, C64::ZERO])
}

/// Projector onto the ground qubit state `|g><g|`.
pub fn ground_state() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[C64::ZERO, C64::ONE])
}

/// Truncated annihilation operator, `a |n> = sqrt(n) |n-1>`.
pub fn annihilation(n_osc: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(n_osc, n_osc);
    for n in 1..n_osc {
        a.set(n - 1, n, C64::new((n as f64).sqrt(), 0.0));
    }
    a
}

/// The qubit-oscillator Hamiltonian
/// `(epsilon/2) sz + (delta/2) sx + omega0 a^dag a + g0 sx (a^dag + a)`
/// on the joint space. Built entry-by-entry so Hermiticity is exact.
pub fn build_h_qo(p: &SystemParams) -> ComplexMatrix {
    let n = p.n_osc;
    let dim = 2 * n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for q in 0..2 {
        let sz = if q == 0 { 1.0 } else { -1.0 };
        for m in 0..n {
            let row = q * n + m;
            h.set(
                row,
                row,
                C64::new(0.5 * p.epsilon * sz + p.omega0 * m as f64, 0.0),
            );
            // sigma_x block: couples (q, m) to (1-q, m') with
            // (delta/2) delta_{m m'} + g0 (a + a^dag)_{m m'}.
            let qr = (1 - q) * n;
            h.set(row, qr + m, C64::new(0.5 * p.delta, 0.0));
            if m + 1 < n {
                let v = C64::new(p.g0 * ((m + 1) as f64).sqrt(), 0.0);
                h.set(row, qr + m + 1, h.get(row, qr + m + 1) + v);
                h.set(qr + m + 1, row, h.get(qr + m + 1, row) + v);
            }
        }
    }
    h
}

/// The system side of the qubit-bath coupling, sigma_z lifted to the joint
/// space: `sz (x) I(n_osc)`.
pub fn build_system_coupling(n_osc: usize) -> ComplexMatrix {
    kron(&sigma_z(), &ComplexMatrix::identity(n_osc))
}

/// Truncated coherent state `|alpha>` as a density matrix. The Fock
/// amplitudes `c_n = exp(-alpha^2/2) alpha^n / sqrt(n!)` are renormalized
/// after truncation so the projector has unit trace exactly.
pub fn coherent_state(alpha: f64, n_osc: usize) -> ComplexMatrix {
    let amps = coherent_amplitudes(alpha, n_osc);
    let mut rho = ComplexMatrix::zeros(n_osc, n_osc);
    for m in 0..n_osc {
        for n in 0..n_osc {
            rho.set(m, n, C64::new(amps[m] * amps[n], 0.0));
        }
    }
    rho
}

/// Renormalized truncated coherent-state amplitudes (real for real alpha).
pub fn coherent_amplitudes(alpha: f64, n_osc: usize) -> Vec<f64> {
    let mut amps = Vec::with_capacity(n_osc);
    let mut c = (-0.5 * alpha * alpha).exp();
    for n in 0..n_osc {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    amps
}

/// Squared norm of the truncated coherent expansion before renormalization
/// (a partial Poisson sum).
pub fn coherent_truncation_weight(alpha: f64, n_osc: usize) -> f64 {
    let mut term = (-alpha * alpha).exp();
    let mut sum = term;
    for n in 1..n_osc {
        term *= alpha * alpha / n as f64;
        sum += term;
    }
    sum
}

/// Validate a 2x2 qubit density matrix: unit trace within 1e-10, Hermitian,
/// and no eigenvalue below -1e-10.
pub fn check_qubit_state(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::InvalidDensityMatrix(format!(
            "expected a 2x2 matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let tr = rho.trace();
    if (tr - C64::ONE).norm() > 1e-10 {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace is {tr} instead of 1"
        )));
    }
    if rho.hermiticity_deviation() > 1e-10 {
        return Err(Error::InvalidDensityMatrix(
            "matrix is not Hermitian".into(),
        ));
    }
    let vals = eigenvalues_2x2(rho);
    if vals[0] < -1e-10 {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {:.3e}",
            vals[0]
        )));
    }
    Ok(())
}

/// Initial joint state `rho_q (x) |alpha><alpha|`.
pub fn build_initial_joint_state(
    qubit_state: &ComplexMatrix,
    p: &SystemParams,
) -> Result<ComplexMatrix> {
    check_qubit_state(qubit_state)?;
    Ok(kron(qubit_state, &coherent_state(p.alpha, p.n_osc)))
}
