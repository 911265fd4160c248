//! Dense complex matrix arithmetic and the spectral primitives used by the
//! rest of the crate: Kronecker products, partial traces, Hermitian
//! eigendecomposition and the eigendecomposition propagator.
//!
//! Everything here operates on small matrices (at most a few dozen rows), so
//! a straightforward dense row-major layout and a cyclic Jacobi eigensolver
//! are entirely sufficient. All operations are pure functions of their
//! inputs.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Max-entry tolerance below which a matrix is accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Dense complex matrix with row-major entry order: the entry at row `r`,
/// column `c` is stored at index `r * cols + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Create a matrix from row-major data. Panics if the data length does
    /// not match the dimensions.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must be rows * cols");
        Self { rows, cols, data }
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::ONE;
        }
        m
    }

    /// Square matrix with `diag` on the main diagonal.
    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::ZERO {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise deviation from Hermiticity, `max |M - M^dag|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    /// Largest entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product `a (x) b`; output dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let av = a.get(ar, ac);
            if av == C64::ZERO {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    out.set(ar * b.rows() + br, ac * b.cols() + bc, av * b.get(br, bc));
                }
            }
        }
    }
    out
}

/// Trace out the second factor of a state on a `dim_first (x) dim_second`
/// product space (first factor slow, i.e. joint row index `i * dim_second + k`).
pub fn partial_trace_second(
    m: &ComplexMatrix,
    dim_first: usize,
    dim_second: usize,
) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != dim_first * dim_second {
        return Err(Error::DimensionMismatch(format!(
            "expected square {n}x{n} input for partial trace, got {r}x{c}",
            n = dim_first * dim_second,
            r = m.rows(),
            c = m.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(dim_first, dim_first);
    for i in 0..dim_first {
        for j in 0..dim_first {
            let mut sum = C64::ZERO;
            for k in 0..dim_second {
                sum += m.get(i * dim_second + k, j * dim_second + k);
            }
            out.set(i, j, sum);
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending. 2x2 inputs use the closed
/// quadratic form; anything larger goes through the cyclic Jacobi solver.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    if m.rows() == 2 {
        return Ok(eigenvalues_2x2(m).to_vec());
    }
    let (vals, _) = jacobi_eigensystem(m);
    Ok(vals)
}

/// Full eigendecomposition of a Hermitian matrix: `(values, vectors)` with
/// ascending eigenvalues and the matching eigenvectors as the columns of the
/// returned matrix.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(m)?;
    Ok(jacobi_eigensystem(m))
}

/// Evolve a density-matrix argument under a Hermitian generator:
/// `exp(-i h t) * v0 * exp(+i h t)`, computed via the eigendecomposition
/// of `h`.
pub fn matrix_exponential_apply(
    h: &ComplexMatrix,
    v0: &ComplexMatrix,
    t: f64,
) -> Result<ComplexMatrix> {
    if v0.rows() != h.rows() || !v0.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "generator is {}x{} but argument is {}x{}",
            h.rows(),
            h.cols(),
            v0.rows(),
            v0.cols()
        )));
    }
    let (vals, vecs) = hermitian_eigensystem(h)?;
    // In the eigenbasis the propagation is a pure phase on each entry.
    let w = vecs.adjoint().matmul(v0).matmul(&vecs);
    let n = h.rows();
    let mut wt = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let phase = C64::from_polar(1.0, -(vals[r] - vals[c]) * t);
            wt.set(r, c, phase * w.get(r, c));
        }
    }
    Ok(vecs.matmul(&wt).matmul(&vecs.adjoint()))
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
pub fn eigenvalues_2x2(m: &ComplexMatrix) -> [f64; 2] {
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Hermitian operations require a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITICITY_TOL,
        });
    }
    Ok(())
}

/// Cyclic Jacobi diagonalization for Hermitian matrices. Returns ascending
/// eigenvalues and the unitary of column eigenvectors.
fn jacobi_eigensystem(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize exactly so roundoff in the input cannot drift the sweep.
    for r in 0..n {
        for c in (r + 1)..n {
            let avg = 0.5 * (a.get(r, c) + a.get(c, r).conj());
            a.set(r, c, avg);
            a.set(c, r, avg.conj());
        }
        let d = a.get(r, r);
        a.set(r, r, C64::new(d.re, 0.0));
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= tol * 1e-2 {
                    continue;
                }
                // Strip the phase, then rotate as in the real symmetric case.
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = C64::new(c, 0.0);
                let sp = phase * s; // s * e^{i phi}
                // Rows p and q of A: A <- U^dag A.
                for j in 0..n {
                    let arj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, cs * arj - sp * aqj);
                    a.set(q, j, sp.conj() * arj + cs * aqj);
                }
                // Columns p and q of A: A <- A U; same update for V.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, cs * aip - sp.conj() * aiq);
                    a.set(i, q, sp * aip + cs * aiq);
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, cs * vip - sp.conj() * viq);
                    v.set(i, q, sp * vip + cs * viq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));
    let vals: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..n {
            vecs.set(r, new_c, v.get(r, old_c));
        }
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(2, 2, vec![C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[C64::ONE, -C64::ONE])
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            m.set(r, r, c(rng.random_range(-1.0..1.0), 0.0));
            for col in (r + 1)..n {
                let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m.set(r, col, v);
                m.set(col, r, v.conj());
            }
        }
        m
    }

    #[test]
    fn kron_identity_gives_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma_z_with_identity() {
        let m = kron(&sigma_z(), &ComplexMatrix::identity(2));
        let expected =
            ComplexMatrix::from_diagonal(&[C64::ONE, C64::ONE, -C64::ONE, -C64::ONE]);
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_sigma_x_sigma_z_hand_expansion() {
        let m = kron(&sigma_x(), &sigma_z());
        // [[0, sz], [sz, 0]] expanded by hand.
        let expected = ComplexMatrix::from_rows(
            4,
            4,
            vec![
                c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.),
                c(0., 0.), c(0., 0.), c(0., 0.), c(-1., 0.),
                c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.),
                c(0., 0.), c(-1., 0.), c(0., 0.), c(0., 0.),
            ],
        );
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_is_associative_on_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m1 = random_int_matrix(2, &mut rng);
            let m2 = random_int_matrix(3, &mut rng);
            let m3 = random_int_matrix(2, &mut rng);
            let left = kron(&kron(&m1, &m2), &m3);
            let right = kron(&m1, &kron(&m2, &m3));
            assert_eq!(left, right);
        }
    }

    fn random_int_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.random_range(-3..=3) as f64, rng.random_range(-3..=3) as f64))
            .collect();
        ComplexMatrix::from_rows(n, n, data)
    }

    #[test]
    fn partial_trace_of_product_state_recovers_first_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho_q = {
            // Random pure qubit state projector.
            let a = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let b = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (a, b) = (a / norm, b / norm);
            ComplexMatrix::from_rows(
                2,
                2,
                vec![a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj()],
            )
        };
        let mut rho_o = random_hermitian(8, &mut rng);
        // Normalize to unit trace.
        let tr = rho_o.trace();
        rho_o = rho_o.scale(C64::ONE / tr);
        let joint = kron(&rho_q, &rho_o);
        let reduced = partial_trace_second(&joint, 2, 8).unwrap();
        assert!(reduced.max_abs_diff(&rho_q) < 1e-12);
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        let m = ComplexMatrix::identity(16).scale(c(1.0 / 16.0, 0.0));
        let reduced = partial_trace_second(&m, 2, 8).unwrap();
        let expected = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(reduced.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace_and_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_hermitian(16, &mut rng);
            let reduced = partial_trace_second(&m, 2, 8).unwrap();
            // Direct-summation oracle for the trace.
            let direct: C64 = (0..16).map(|i| m.get(i, i)).sum();
            assert!((reduced.trace() - direct).norm() < 1e-12);

            let m2 = random_hermitian(16, &mut rng);
            let sum = partial_trace_second(&m.add(&m2), 2, 8).unwrap();
            let parts = reduced.add(&partial_trace_second(&m2, 2, 8).unwrap());
            assert!(sum.max_abs_diff(&parts) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_dimensions() {
        let m = ComplexMatrix::identity(6);
        assert!(partial_trace_second(&m, 2, 4).is_err());
    }

    #[test]
    fn eigenvalues_of_pauli_z_and_mixed_state() {
        assert_eq!(hermitian_eigenvalues(&sigma_z()).unwrap(), vec![-1.0, 1.0]);
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert_eq!(hermitian_eigenvalues(&half).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn eigenvalues_reproduce_trace_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = random_hermitian(4, &mut rng);
            let vals = hermitian_eigenvalues(&m).unwrap();
            let tr: f64 = vals.iter().sum();
            let fro2: f64 = vals.iter().map(|v| v * v).sum();
            assert!((tr - m.trace().re).abs() < 1e-10);
            assert!((fro2 - m.frobenius_norm().powi(2)).abs() < 1e-9);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn closed_form_2x2_agrees_with_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let m = random_hermitian(2, &mut rng);
            let closed = eigenvalues_2x2(&m);
            let (general, _) = jacobi_eigensystem(&m);
            assert!((closed[0] - general[0]).abs() < 1e-12);
            assert!((closed[1] - general[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalue_difference_of_density_matrices_sums_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let mut r1 = random_hermitian(4, &mut rng);
            let mut r2 = random_hermitian(4, &mut rng);
            // Shift and normalize each into a density matrix.
            for r in [&mut r1, &mut r2] {
                let vals = hermitian_eigenvalues(r).unwrap();
                let shift = -vals[0] + 0.1;
                let shifted = r.add(&ComplexMatrix::identity(4).scale(c(shift, 0.0)));
                let tr = shifted.trace().re;
                *r = shifted.scale(c(1.0 / tr, 0.0));
            }
            let vals = hermitian_eigenvalues(&r1.sub(&r2)).unwrap();
            assert!(vals.iter().sum::<f64>().abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = ComplexMatrix::from_rows(2, 2, vec![C64::ONE, C64::ONE, C64::ZERO, C64::ONE]);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigensystem_reconstructs_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = random_hermitian(16, &mut rng);
        let (vals, vecs) = hermitian_eigensystem(&m).unwrap();
        let lambda =
            ComplexMatrix::from_diagonal(&vals.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>());
        let rebuilt = vecs.matmul(&lambda).matmul(&vecs.adjoint());
        assert!(rebuilt.max_abs_diff(&m) < 1e-12 * m.frobenius_norm().max(1.0));
        // Unitarity of the eigenvector matrix.
        let gram = vecs.adjoint().matmul(&vecs);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(16)) < 1e-12);
    }

    #[test]
    fn propagator_at_zero_time_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let h = random_hermitian(4, &mut rng);
        let v0 = random_hermitian(4, &mut rng);
        let out = matrix_exponential_apply(&h, &v0, 0.0).unwrap();
        assert!(out.max_abs_diff(&v0) < 1e-12);
    }

    #[test]
    fn propagator_leaves_stationary_state_alone() {
        let excited = ComplexMatrix::from_diagonal(&[C64::ONE, C64::ZERO]);
        let out = matrix_exponential_apply(&sigma_z(), &excited, 2.7).unwrap();
        assert!(out.max_abs_diff(&excited) < 1e-12);
    }

    #[test]
    fn propagator_reproduces_rabi_rotation() {
        // h = (delta/2) sigma_x rotates |e><e| with <sigma_z(t)> = cos(delta t).
        let delta = 0.7;
        let h = sigma_x().scale(c(delta / 2.0, 0.0));
        let excited = ComplexMatrix::from_diagonal(&[C64::ONE, C64::ZERO]);
        for &t in &[0.3, 1.0, 4.0] {
            let rho = matrix_exponential_apply(&h, &excited, t).unwrap();
            let sz = (rho.get(0, 0) - rho.get(1, 1)).re;
            assert!((sz - (delta * t).cos()).abs() < 1e-12);
            // Power-series oracle for the same propagation.
            let series = series_propagate(&h, &excited, t);
            assert!(rho.max_abs_diff(&series) < 1e-12);
        }
    }

    #[test]
    fn propagator_preserves_trace_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let h = random_hermitian(6, &mut rng);
            let v0 = random_hermitian(6, &mut rng);
            let out = matrix_exponential_apply(&h, &v0, 1.3).unwrap();
            assert!((out.trace() - v0.trace()).norm() < 1e-10);
            assert!(out.hermiticity_deviation() < 1e-10);
        }
    }

    /// Taylor-series oracle: U = sum_k (-i h t)^k / k!, then U v0 U^dag.
    fn series_propagate(h: &ComplexMatrix, v0: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = h.rows();
        let mut u = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        let gen = h.scale(c(0.0, -t));
        for k in 1..200 {
            term = term.matmul(&gen).scale(c(1.0 / k as f64, 0.0));
            u = u.add(&term);
            if term.frobenius_norm() < 1e-18 {
                break;
            }
        }
        u.matmul(v0).matmul(&u.adjoint())
    }
}
