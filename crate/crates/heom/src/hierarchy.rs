//! The two-index hierarchy of auxiliary density operators (ADOs) and its
//! fixed-step propagation.
//!
//! Every ADO `rho_(l1, l2)` with `l1 + l2 <= L` is a matrix on the joint
//! qubit-oscillator space. The hierarchy couples each ADO to its four
//! index neighbors:
//!
//! ```text
//! d/dt rho_l = -i [H, rho_l] - (l . mu) rho_l
//!              - i [S, rho_{l+e1} + rho_{l+e2}]
//!              - (i/2) gamma lambda l1 S rho_{l-e1}
//!              + (i/2) gamma lambda l2 rho_{l-e2} S
//! ```
//!
//! with `mu = (lambda + i delta, lambda - i delta)` and `S = sz (x) I`.
//! Indices outside the truncation contribute zero. Only the root `(0, 0)`
//! is physical; the reduced qubit state is its partial trace over the
//! oscillator.
//!
//! The right-hand side is evaluated thousands of times per run, so it works
//! on a flat buffer of all ADOs with a precomputed neighbor table and
//! exploits the fixed sparsity of the model: `S` is a sign diagonal and `H`
//! splits into a real diagonal plus a real tridiagonal block coupling the
//! two qubit sectors. A dense reference evaluation in the tests pins the
//! optimized path to the definition above.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{partial_trace_second, ComplexMatrix};
use crate::model::{build_initial_joint_state, SystemParams};
use crate::observables::Trajectory;

/// Hierarchy depths are searched up to this bound before giving up.
pub const DEFAULT_MAX_DEPTH: usize = 30;

/// Integration aborts when the root ADO drifts further than this from unit
/// trace or from Hermiticity.
pub const INVARIANT_ABORT_TOL: f64 = 1e-6;

const NO_NEIGHBOR: u32 = u32::MAX;

/// Two-dimensional hierarchy index `(l1, l2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HierarchyIndex {
    pub l1: usize,
    pub l2: usize,
}

impl HierarchyIndex {
    pub fn depth(&self) -> usize {
        self.l1 + self.l2
    }
}

/// Flat index layout: depth ascending, `l1` descending within each depth,
/// so `(l1, l2)` lives at `d (d + 1) / 2 + l2` with `d = l1 + l2`.
#[derive(Debug)]
struct Layout {
    depth: usize,
    indices: Vec<HierarchyIndex>,
    up1: Vec<u32>,
    up2: Vec<u32>,
    down1: Vec<u32>,
    down2: Vec<u32>,
}

impl Layout {
    fn new(depth: usize) -> Self {
        let n_ados = (depth + 1) * (depth + 2) / 2;
        let mut indices = Vec::with_capacity(n_ados);
        for d in 0..=depth {
            for l2 in 0..=d {
                indices.push(HierarchyIndex { l1: d - l2, l2 });
            }
        }
        let position = |l1: usize, l2: usize| -> u32 {
            let d = l1 + l2;
            if d > depth {
                NO_NEIGHBOR
            } else {
                (d * (d + 1) / 2 + l2) as u32
            }
        };
        let mut up1 = Vec::with_capacity(n_ados);
        let mut up2 = Vec::with_capacity(n_ados);
        let mut down1 = Vec::with_capacity(n_ados);
        let mut down2 = Vec::with_capacity(n_ados);
        for idx in &indices {
            up1.push(position(idx.l1 + 1, idx.l2));
            up2.push(position(idx.l1, idx.l2 + 1));
            down1.push(if idx.l1 > 0 {
                position(idx.l1 - 1, idx.l2)
            } else {
                NO_NEIGHBOR
            });
            down2.push(if idx.l2 > 0 {
                position(idx.l1, idx.l2 - 1)
            } else {
                NO_NEIGHBOR
            });
        }
        Self {
            depth,
            indices,
            up1,
            up2,
            down1,
            down2,
        }
    }

    fn n_ados(&self) -> usize {
        self.indices.len()
    }
}

/// The full set of ADOs at one instant, flattened into a single buffer
/// (row-major matrices, hierarchy order as in [`Layout`]).
#[derive(Debug, Clone)]
pub struct HierarchyState {
    params: SystemParams,
    time: f64,
    dim: usize,
    layout: Arc<Layout>,
    data: Vec<C64>,
}

impl HierarchyState {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn num_ados(&self) -> usize {
        self.layout.n_ados()
    }

    pub fn indices(&self) -> impl Iterator<Item = HierarchyIndex> + '_ {
        self.layout.indices.iter().copied()
    }

    /// Copy of the ADO at `(l1, l2)`, or `None` outside the truncation.
    pub fn ado(&self, l1: usize, l2: usize) -> Option<ComplexMatrix> {
        if l1 + l2 > self.layout.depth {
            return None;
        }
        let d = l1 + l2;
        let j = d * (d + 1) / 2 + l2;
        let m = self.dim * self.dim;
        Some(ComplexMatrix::from_rows(
            self.dim,
            self.dim,
            self.data[j * m..(j + 1) * m].to_vec(),
        ))
    }

    /// The physical root ADO `rho_(0,0)`.
    pub fn root(&self) -> ComplexMatrix {
        self.ado(0, 0).expect("root always exists")
    }

    /// Reduced qubit state: the oscillator trace of the root ADO.
    pub fn reduced_qubit_state(&self) -> ComplexMatrix {
        partial_trace_second(&self.root(), 2, self.params.n_osc)
            .expect("root dimensions are consistent by construction")
    }

    pub(crate) fn into_data(self) -> Vec<C64> {
        self.data
    }
}

/// Initial hierarchy: the root carries `rho_q (x) |alpha><alpha|`, every
/// other ADO starts at zero.
pub fn init_hierarchy(qubit_state: &ComplexMatrix, p: &SystemParams) -> Result<HierarchyState> {
    p.validate()?;
    let joint = build_initial_joint_state(qubit_state, p)?;
    let layout = Arc::new(Layout::new(p.hierarchy_depth));
    let dim = p.joint_dim();
    let m = dim * dim;
    let mut data = vec![C64::ZERO; layout.n_ados() * m];
    data[..m].copy_from_slice(joint.as_slice());
    Ok(HierarchyState {
        params: p.clone(),
        time: 0.0,
        dim,
        layout,
        data,
    })
}

/// Precomputed coefficients and scratch space for repeated right-hand-side
/// evaluations and Runge-Kutta steps.
pub(crate) struct Engine {
    dim: usize,
    n_osc: usize,
    layout: Arc<Layout>,
    /// Diagonal of the Hamiltonian (qubit bias + Fock ladder), real.
    h_diag: Vec<f64>,
    /// Tridiagonal sector-coupling block: diagonal delta/2, off-diagonal
    /// g0 sqrt(m+1).
    b_diag: f64,
    b_off: Vec<f64>,
    /// Per-ADO decay constants l . mu.
    l_mu: Vec<C64>,
    /// Downward coupling scale gamma lambda / 2.
    psi: f64,
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    stage: Vec<C64>,
}

impl Engine {
    pub(crate) fn new(p: &SystemParams) -> Result<Self> {
        p.validate()?;
        let layout = Arc::new(Layout::new(p.hierarchy_depth));
        Self::with_layout(p, layout)
    }

    fn with_layout(p: &SystemParams, layout: Arc<Layout>) -> Result<Self> {
        let n = p.n_osc;
        let dim = 2 * n;
        let mut h_diag = Vec::with_capacity(dim);
        for q in 0..2 {
            let sz = if q == 0 { 1.0 } else { -1.0 };
            for m in 0..n {
                h_diag.push(0.5 * p.epsilon * sz + p.omega0 * m as f64);
            }
        }
        let b_off: Vec<f64> = (1..n).map(|m| p.g0 * (m as f64).sqrt()).collect();
        let mu = [
            C64::new(p.lambda, p.delta),
            C64::new(p.lambda, -p.delta),
        ];
        let l_mu = layout
            .indices
            .iter()
            .map(|idx| mu[0] * idx.l1 as f64 + mu[1] * idx.l2 as f64)
            .collect();
        let len = layout.n_ados() * dim * dim;
        Ok(Self {
            dim,
            n_osc: n,
            layout,
            h_diag,
            b_diag: 0.5 * p.delta,
            b_off,
            l_mu,
            psi: 0.5 * p.gamma * p.lambda,
            k1: vec![C64::ZERO; len],
            k2: vec![C64::ZERO; len],
            k3: vec![C64::ZERO; len],
            k4: vec![C64::ZERO; len],
            stage: vec![C64::ZERO; len],
        })
    }

    /// Hierarchy right-hand side, written into `dst`.
    fn rhs_into(&self, src: &[C64], dst: &mut [C64]) {
        let d = self.dim;
        let n = self.n_osc;
        let m = d * d;
        for j in 0..self.layout.n_ados() {
            let x = &src[j * m..(j + 1) * m];
            let out = &mut dst[j * m..(j + 1) * m];
            let l_mu = self.l_mu[j];

            // Diagonal commutator and hierarchy decay, fused into one
            // complex coefficient per entry.
            for r in 0..d {
                let hr = self.h_diag[r];
                let row = r * d;
                for c in 0..d {
                    let z = x[row + c];
                    let coef = C64::new(-l_mu.re, -l_mu.im - (hr - self.h_diag[c]));
                    out[row + c] = coef * z;
                }
            }

            // -i [T, X] with T the tridiagonal block coupling the qubit
            // sectors: -i T X as row operations, +i X T as column gathers.
            for q in 0..2 {
                let dst_base = q * n;
                let src_base = (1 - q) * n;
                for mm in 0..n {
                    let or = (dst_base + mm) * d;
                    axpy_neg_i(&mut out[or..or + d], &x[(src_base + mm) * d..(src_base + mm) * d + d], self.b_diag);
                    if mm > 0 {
                        let s = (src_base + mm - 1) * d;
                        axpy_neg_i(&mut out[or..or + d], &x[s..s + d], self.b_off[mm - 1]);
                    }
                    if mm + 1 < n {
                        let s = (src_base + mm + 1) * d;
                        axpy_neg_i(&mut out[or..or + d], &x[s..s + d], self.b_off[mm]);
                    }
                }
            }
            for r in 0..d {
                let row = r * d;
                for q in 0..2 {
                    let col_base = q * n;
                    let src_base = (1 - q) * n;
                    for mm in 0..n {
                        let mut acc = C64::ZERO;
                        acc += x[row + src_base + mm] * self.b_diag;
                        if mm > 0 {
                            acc += x[row + src_base + mm - 1] * self.b_off[mm - 1];
                        }
                        if mm + 1 < n {
                            acc += x[row + src_base + mm + 1] * self.b_off[mm];
                        }
                        // +i * acc
                        let o = &mut out[row + col_base + mm];
                        o.re -= acc.im;
                        o.im += acc.re;
                    }
                }
            }

            // Upward coupling -i [S, Y] for each neighbor Y one level deeper
            // in the hierarchy; only the off-diagonal qubit blocks survive.
            for up in [self.layout.up1[j], self.layout.up2[j]] {
                if up == NO_NEIGHBOR {
                    continue;
                }
                let y = &src[up as usize * m..(up as usize + 1) * m];
                for r in 0..n {
                    let row = r * d;
                    for c in n..d {
                        let z = y[row + c];
                        let o = &mut out[row + c];
                        o.re += 2.0 * z.im;
                        o.im -= 2.0 * z.re;
                    }
                }
                for r in n..d {
                    let row = r * d;
                    for c in 0..n {
                        let z = y[row + c];
                        let o = &mut out[row + c];
                        o.re -= 2.0 * z.im;
                        o.im += 2.0 * z.re;
                    }
                }
            }

            // Downward couplings: -(i/2) gamma lambda l1 S D1 (row signs)
            // and +(i/2) gamma lambda l2 D2 S (column signs).
            let idx = self.layout.indices[j];
            if idx.l1 > 0 {
                let dn = self.layout.down1[j] as usize;
                let y = &src[dn * m..(dn + 1) * m];
                let a = idx.l1 as f64 * self.psi;
                for r in 0..d {
                    let sign = if r < n { a } else { -a };
                    let row = r * d;
                    for c in 0..d {
                        let z = y[row + c];
                        let o = &mut out[row + c];
                        o.re += sign * z.im;
                        o.im -= sign * z.re;
                    }
                }
            }
            if idx.l2 > 0 {
                let dn = self.layout.down2[j] as usize;
                let y = &src[dn * m..(dn + 1) * m];
                let a = idx.l2 as f64 * self.psi;
                for r in 0..d {
                    let row = r * d;
                    for c in 0..d {
                        let sign = if c < n { a } else { -a };
                        let z = y[row + c];
                        let o = &mut out[row + c];
                        o.re -= sign * z.im;
                        o.im += sign * z.re;
                    }
                }
            }
        }
    }

    /// One classical fourth-order Runge-Kutta step, in place. The stage
    /// buffers live on the engine so stepping never allocates.
    pub(crate) fn rk4_step_in_place(&mut self, data: &mut [C64], dt: f64) {
        let half = 0.5 * dt;
        let sixth = dt / 6.0;

        let mut k1 = std::mem::take(&mut self.k1);
        let mut k2 = std::mem::take(&mut self.k2);
        let mut k3 = std::mem::take(&mut self.k3);
        let mut k4 = std::mem::take(&mut self.k4);
        let mut stage = std::mem::take(&mut self.stage);

        self.rhs_into(data, &mut k1);
        for i in 0..data.len() {
            stage[i] = data[i] + k1[i] * half;
        }
        self.rhs_into(&stage, &mut k2);
        for i in 0..data.len() {
            stage[i] = data[i] + k2[i] * half;
        }
        self.rhs_into(&stage, &mut k3);
        for i in 0..data.len() {
            stage[i] = data[i] + k3[i] * dt;
        }
        self.rhs_into(&stage, &mut k4);
        for i in 0..data.len() {
            data[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * sixth;
        }

        self.k1 = k1;
        self.k2 = k2;
        self.k3 = k3;
        self.k4 = k4;
        self.stage = stage;
    }

    /// `(|tr rho_root - 1|, hermiticity deviation of the root)`.
    pub(crate) fn root_invariants(&self, data: &[C64]) -> (f64, f64) {
        let d = self.dim;
        let mut tr = C64::ZERO;
        for r in 0..d {
            tr += data[r * d + r];
        }
        let trace_err = (tr - C64::ONE).norm();
        let mut herm = 0.0f64;
        for r in 0..d {
            for c in r..d {
                herm = herm.max((data[r * d + c] - data[c * d + r].conj()).norm());
            }
        }
        (trace_err, herm)
    }

    /// Reduced qubit state of the root ADO in `data`.
    pub(crate) fn reduced_root(&self, data: &[C64]) -> ComplexMatrix {
        let d = self.dim;
        let n = self.n_osc;
        let mut out = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for jq in 0..2 {
                let mut sum = C64::ZERO;
                for k in 0..n {
                    sum += data[(i * n + k) * d + jq * n + k];
                }
                out.set(i, jq, sum);
            }
        }
        out
    }
}

/// `dst += (-i * coeff) * src` for a real coefficient.
#[inline]
fn axpy_neg_i(dst: &mut [C64], src: &[C64], coeff: f64) {
    for (o, s) in dst.iter_mut().zip(src) {
        o.re += coeff * s.im;
        o.im -= coeff * s.re;
    }
}

/// Time derivative of the whole hierarchy at `s`.
pub fn heom_rhs(s: &HierarchyState) -> HierarchyState {
    let engine = Engine::with_layout(&s.params, Arc::clone(&s.layout))
        .expect("state parameters were validated at construction");
    let mut data = vec![C64::ZERO; s.data.len()];
    engine.rhs_into(&s.data, &mut data);
    HierarchyState {
        params: s.params.clone(),
        time: s.time,
        dim: s.dim,
        layout: Arc::clone(&s.layout),
        data,
    }
}

/// One classical fourth-order Runge-Kutta step of size `dt`.
pub fn rk4_step(s: &HierarchyState, dt: f64) -> HierarchyState {
    assert!(dt > 0.0, "dt must be positive");
    let mut engine = Engine::with_layout(&s.params, Arc::clone(&s.layout))
        .expect("state parameters were validated at construction");
    let mut out = s.clone();
    engine.rk4_step_in_place(&mut out.data, dt);
    out.time += dt;
    out
}

/// Integrate from `s0` to `t_max`, recording the reduced qubit state and its
/// derived observables every `record_every` steps. The root-trace and
/// Hermiticity invariants are checked after every step; a breach beyond
/// [`INVARIANT_ABORT_TOL`] aborts with a diagnostic (the usual causes are a
/// step too large for the spectral width or a hierarchy cut too shallow).
pub fn integrate(
    s0: HierarchyState,
    t_max: f64,
    dt: f64,
    record_every: usize,
) -> Result<Trajectory> {
    if t_max < 0.0 || dt <= 0.0 || record_every == 0 {
        return Err(Error::InvalidParams(
            "integrate requires t_max >= 0, dt > 0, record_every >= 1".into(),
        ));
    }
    let mut s = s0;
    let mut engine = Engine::with_layout(&s.params, Arc::clone(&s.layout))?;
    let n_steps = (t_max / dt).round() as usize;
    let mut traj = Trajectory::with_capacity(n_steps / record_every + 2);
    record(&mut traj, &engine, s.time, &s.data)?;
    for step in 1..=n_steps {
        engine.rk4_step_in_place(&mut s.data, dt);
        s.time += dt;
        let (trace_err, herm_err) = engine.root_invariants(&s.data);
        if trace_err > INVARIANT_ABORT_TOL || herm_err > INVARIANT_ABORT_TOL {
            return Err(Error::InvariantBreach {
                time: s.time,
                trace_err,
                herm_err,
            });
        }
        if step % record_every == 0 || step == n_steps {
            record(&mut traj, &engine, s.time, &s.data)?;
        }
    }
    Ok(traj)
}

fn record(traj: &mut Trajectory, engine: &Engine, time: f64, data: &[C64]) -> Result<()> {
    let reduced = engine.reduced_root(data);
    let (trace_err, _) = engine.root_invariants(data);
    traj.push(time, reduced, trace_err);
    Ok(())
}

/// Increase the hierarchy depth from `p.hierarchy_depth` in steps of two
/// until the recorded population difference stops moving by more than `tol`,
/// then return the first converged depth and its trajectory.
pub fn converge_depth(
    p: &SystemParams,
    qubit_state: &ComplexMatrix,
    tol: f64,
) -> Result<(usize, Trajectory)> {
    converge_depth_up_to(p, qubit_state, tol, DEFAULT_MAX_DEPTH)
}

/// [`converge_depth`] with an explicit depth cap.
pub fn converge_depth_up_to(
    p: &SystemParams,
    qubit_state: &ComplexMatrix,
    tol: f64,
    max_depth: usize,
) -> Result<(usize, Trajectory)> {
    if tol <= 0.0 {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let run = |depth: usize| -> Result<Trajectory> {
        let mut q = p.clone();
        q.hierarchy_depth = depth;
        integrate(init_hierarchy(qubit_state, &q)?, q.t_max, q.dt, 1)
    };
    let mut depth = p.hierarchy_depth;
    let mut traj = run(depth)?;
    let mut discrepancy = f64::INFINITY;
    while depth + 2 <= max_depth {
        let deeper = run(depth + 2)?;
        discrepancy = traj
            .sigma_z
            .iter()
            .zip(&deeper.sigma_z)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if discrepancy < tol {
            return Ok((depth, traj));
        }
        depth += 2;
        traj = deeper;
    }
    Err(Error::ConvergenceFailure {
        max_depth,
        discrepancy,
        tolerance: tol,
    })
}
