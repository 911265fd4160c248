//! Reduced-qubit observables, the trace distance, and the accumulated
//! information-backflow measure over randomized orthogonal state pairs.
//!
//! The measure integrates the positive part of the trace-distance rate
//! between two evolved states over a finite window. On the recording grid
//! this is evaluated exactly for a piecewise-linear distance curve as the
//! telescoped sum of positive increments, so the rate itself is never
//! differentiated numerically.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{init_hierarchy, Engine, INVARIANT_ABORT_TOL};
use crate::linalg::{eigenvalues_2x2, hermitian_eigenvalues, ComplexMatrix};
use crate::model::SystemParams;

/// Time series of reduced-qubit observables along one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Recorded times, ascending.
    pub times: Vec<f64>,
    /// Population difference `<sigma_z>` at each recorded time.
    pub sigma_z: Vec<f64>,
    /// Reduced 2x2 qubit states, when recorded.
    pub reduced_states: Option<Vec<ComplexMatrix>>,
    /// `|tr rho - 1|` of the root ADO at each recorded time.
    pub trace_err: Vec<f64>,
    /// Purity `tr rho^2` of the reduced state.
    pub purity: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            sigma_z: Vec::with_capacity(n),
            reduced_states: Some(Vec::with_capacity(n)),
            trace_err: Vec::with_capacity(n),
            purity: Vec::with_capacity(n),
        }
    }

    pub(crate) fn push(&mut self, time: f64, reduced: ComplexMatrix, trace_err: f64) {
        self.times.push(time);
        self.sigma_z.push(population_difference(&reduced));
        self.purity.push(reduced.matmul(&reduced).trace().re);
        self.trace_err.push(trace_err);
        if let Some(states) = &mut self.reduced_states {
            states.push(reduced);
        }
    }

    /// Largest recorded deviation of the root trace from one.
    pub fn max_trace_err(&self) -> f64 {
        self.trace_err.iter().copied().fold(0.0, f64::max)
    }

    /// Mean `<sigma_z>` over the final `fraction` of the recorded window.
    pub fn steady_mean(&self, fraction: f64) -> f64 {
        let t_end = *self.times.last().expect("trajectory is never empty");
        let t_from = t_end - fraction * (t_end - self.times[0]);
        let tail: Vec<f64> = self
            .times
            .iter()
            .zip(&self.sigma_z)
            .filter(|(t, _)| **t >= t_from)
            .map(|(_, s)| *s)
            .collect();
        tail.iter().sum::<f64>() / tail.len() as f64
    }

    /// `max - min` of `<sigma_z>` over recorded times in `[t0, t1]`.
    pub fn amplitude_in_window(&self, t0: f64, t1: f64) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (t, s) in self.times.iter().zip(&self.sigma_z) {
            if *t >= t0 && *t <= t1 {
                lo = lo.min(*s);
                hi = hi.max(*s);
            }
        }
        hi - lo
    }
}

/// Bloch angles of one orthogonal initial-state pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatePairSpec {
    /// Polar angle in `[0, pi]`.
    pub theta: f64,
    /// Azimuth in `[0, 2 pi]`.
    pub phi: f64,
}

/// One sampled pair with its accumulated measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSample {
    pub theta: f64,
    pub phi: f64,
    pub measure: f64,
}

/// Result of a randomized search for the maximal information backflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonMarkovReport {
    /// Upper bound of the time integration.
    pub t_c: f64,
    /// PRNG seed that generated the samples.
    pub seed: u64,
    /// Every sampled pair, in generation order.
    pub samples: Vec<PairSample>,
    /// The maximizing entry of `samples`.
    pub best: PairSample,
}

/// Population difference `tr(rho sigma_z)` of a 2x2 state.
pub fn population_difference(rho_q: &ComplexMatrix) -> f64 {
    let tr = rho_q.get(0, 0) - rho_q.get(1, 1);
    debug_assert!(tr.im.abs() < 1e-9, "population difference has imaginary part {}", tr.im);
    tr.re
}

/// Trace distance `1/2 sum |eig(rho1 - rho2)|`.
pub fn trace_distance(rho1: &ComplexMatrix, rho2: &ComplexMatrix) -> f64 {
    let diff = rho1.sub(rho2);
    if diff.rows() == 2 && diff.cols() == 2 {
        let vals = eigenvalues_2x2(&diff);
        return 0.5 * (vals[0].abs() + vals[1].abs());
    }
    let vals = hermitian_eigenvalues(&diff)
        .expect("trace distance requires Hermitian (density matrix) inputs");
    0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
}

/// The orthogonal pure-state pair at the given Bloch angles:
/// `cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>` and its antipode
/// `sin(theta/2)|e> - e^{i phi} cos(theta/2)|g>`, as projectors.
pub fn orthogonal_pair(spec: &StatePairSpec) -> (ComplexMatrix, ComplexMatrix) {
    let half = 0.5 * spec.theta;
    let phase = C64::from_polar(1.0, spec.phi);
    let a = [C64::new(half.cos(), 0.0), phase * half.sin()];
    let b = [C64::new(half.sin(), 0.0), -phase * half.cos()];
    (projector(&a), projector(&b))
}

fn projector(amps: &[C64; 2]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    for r in 0..2 {
        for c in 0..2 {
            m.set(r, c, amps[r] * amps[c].conj());
        }
    }
    m
}

/// Randomized search for the maximal accumulated backflow: samples
/// `n_samples` Bloch-uniform orthogonal pairs, evolves both members of each
/// pair through the full hierarchy (sharing the oscillator's coherent initial
/// state), and accumulates the positive variation of their trace distance on
/// the step grid up to `t_c`.
///
/// Samples are generated up front from the seeded PRNG and evolve
/// independently (in parallel when threads are available); the report keeps
/// generation order, so the result depends only on the arguments.
pub fn nonmarkovianity(
    p: &SystemParams,
    t_c: f64,
    n_samples: usize,
    seed: u64,
) -> Result<NonMarkovReport> {
    if t_c <= 0.0 {
        return Err(Error::InvalidParams("t_c must be positive".into()));
    }
    if n_samples == 0 {
        return Err(Error::InvalidParams("n_samples must be at least 1".into()));
    }
    p.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<StatePairSpec> = (0..n_samples)
        .map(|_| {
            // Area-uniform polar angle via arccos of a uniform variate.
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            StatePairSpec {
                theta: (1.0 - 2.0 * u).acos(),
                phi: 2.0 * std::f64::consts::PI * v,
            }
        })
        .collect();

    let samples: Vec<PairSample> = specs
        .par_iter()
        .map(|spec| {
            pair_backflow(p, spec, t_c).map(|measure| PairSample {
                theta: spec.theta,
                phi: spec.phi,
                measure,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = *samples
        .iter()
        .reduce(|acc, s| if s.measure > acc.measure { s } else { acc })
        .expect("n_samples >= 1");
    Ok(NonMarkovReport {
        t_c,
        seed,
        samples,
        best,
    })
}

/// Accumulated positive variation of the trace distance for one pair.
fn pair_backflow(p: &SystemParams, spec: &StatePairSpec, t_c: f64) -> Result<f64> {
    let (rho1, rho2) = orthogonal_pair(spec);
    let s1 = init_hierarchy(&rho1, p)?;
    let s2 = init_hierarchy(&rho2, p)?;
    let mut engine = Engine::new(p)?;
    let mut data1 = s1.into_data();
    let mut data2 = s2.into_data();

    let n_steps = (t_c / p.dt).round() as usize;
    let mut measure = 0.0f64;
    let mut d_prev = trace_distance(&engine.reduced_root(&data1), &engine.reduced_root(&data2));
    let mut time = 0.0;
    for _ in 0..n_steps {
        engine.rk4_step_in_place(&mut data1, p.dt);
        engine.rk4_step_in_place(&mut data2, p.dt);
        time += p.dt;
        for data in [&data1, &data2] {
            let (trace_err, herm_err) = engine.root_invariants(data);
            if trace_err > INVARIANT_ABORT_TOL || herm_err > INVARIANT_ABORT_TOL {
                return Err(Error::InvariantBreach {
                    time,
                    trace_err,
                    herm_err,
                });
            }
        }
        let d = trace_distance(&engine.reduced_root(&data1), &engine.reduced_root(&data2));
        measure += (d - d_prev).max(0.0);
        d_prev = d;
    }
    Ok(measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{excited_state, ground_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params() -> SystemParams {
        SystemParams {
            epsilon: 0.0,
            delta: 0.5,
            omega0: 1.0,
            g0: 0.0,
            alpha: 0.0,
            gamma: 0.5,
            lambda: 0.25,
            n_osc: 2,
            hierarchy_depth: 4,
            dt: 0.01,
            t_max: 10.0,
        }
    }

    fn random_density(rng: &mut ChaCha8Rng) -> ComplexMatrix {
        // Random Bloch vector inside the unit ball.
        let (x, y, z) = loop {
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random_range(-1.0..1.0);
            let z: f64 = rng.random_range(-1.0..1.0);
            if x * x + y * y + z * z <= 1.0 {
                break (x, y, z);
            }
        };
        ComplexMatrix::from_rows(
            2,
            2,
            vec![
                c(0.5 * (1.0 + z), 0.0),
                c(0.5 * x, -0.5 * y),
                c(0.5 * x, 0.5 * y),
                c(0.5 * (1.0 - z), 0.0),
            ],
        )
    }

    fn random_unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let (a, b, g) = (
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(0.0..std::f64::consts::PI),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let rz = |x: f64| {
            ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, -0.5 * x), C64::from_polar(1.0, 0.5 * x)])
        };
        let ry = ComplexMatrix::from_rows(
            2,
            2,
            vec![
                c((b / 2.0).cos(), 0.0),
                c(-(b / 2.0).sin(), 0.0),
                c((b / 2.0).sin(), 0.0),
                c((b / 2.0).cos(), 0.0),
            ],
        );
        rz(a).matmul(&ry).matmul(&rz(g))
    }

    #[test]
    fn population_difference_basics() {
        assert_eq!(population_difference(&excited_state()), 1.0);
        let mixed = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert_eq!(population_difference(&mixed), 0.0);
        for k in 0..20 {
            let theta = k as f64 * std::f64::consts::PI / 19.0;
            let spec = StatePairSpec { theta, phi: 1.1 };
            let (rho, _) = orthogonal_pair(&spec);
            assert!((population_difference(&rho) - theta.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_distance_reference_points() {
        assert_eq!(trace_distance(&excited_state(), &excited_state()), 0.0);
        assert!((trace_distance(&excited_state(), &ground_state()) - 1.0).abs() < 1e-15);
        let mixed = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!((trace_distance(&mixed, &excited_state()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_metric_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let r1 = random_density(&mut rng);
            let r2 = random_density(&mut rng);
            let r3 = random_density(&mut rng);
            let d12 = trace_distance(&r1, &r2);
            let d21 = trace_distance(&r2, &r1);
            assert!((d12 - d21).abs() < 1e-12);
            assert!((0.0..=1.0 + 1e-12).contains(&d12));
            let d13 = trace_distance(&r1, &r3);
            let d32 = trace_distance(&r3, &r2);
            assert!(d12 <= d13 + d32 + 1e-12);
        }
    }

    #[test]
    fn trace_distance_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..200 {
            let r1 = random_density(&mut rng);
            let r2 = random_density(&mut rng);
            let u = random_unitary(&mut rng);
            let conj = |r: &ComplexMatrix| u.matmul(r).matmul(&u.adjoint());
            let before = trace_distance(&r1, &r2);
            let after = trace_distance(&conj(&r1), &conj(&r2));
            assert!((before - after).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_pair_endpoints() {
        let (a, b) = orthogonal_pair(&StatePairSpec { theta: 0.0, phi: 0.3 });
        assert!(a.max_abs_diff(&excited_state()) < 1e-15);
        assert!(b.max_abs_diff(&ground_state()) < 1e-15);

        let (plus, minus) = orthogonal_pair(&StatePairSpec {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        });
        let expected_plus = ComplexMatrix::from_rows(
            2,
            2,
            vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
        );
        let expected_minus = ComplexMatrix::from_rows(
            2,
            2,
            vec![c(0.5, 0.0), c(-0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0)],
        );
        assert!(plus.max_abs_diff(&expected_plus) < 1e-12);
        assert!(minus.max_abs_diff(&expected_minus) < 1e-12);
    }

    #[test]
    fn sampled_pairs_are_orthogonal_projectors_at_unit_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let spec = StatePairSpec {
                theta: rng.random_range(0.0..std::f64::consts::PI),
                phi: rng.random_range(0.0..std::f64::consts::TAU),
            };
            let (a, b) = orthogonal_pair(&spec);
            for m in [&a, &b] {
                assert!((m.trace().re - 1.0).abs() < 1e-12);
                assert!(m.matmul(m).max_abs_diff(m) < 1e-12);
            }
            assert!(a.matmul(&b).trace().norm() < 1e-12);
            assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_qubit_accumulates_nothing() {
        let mut p = params();
        p.gamma = 0.0;
        p.g0 = 0.0;
        p.hierarchy_depth = 0;
        let report = nonmarkovianity(&p, 5.0, 3, 7).unwrap();
        for s in &report.samples {
            assert!(s.measure <= 1e-12, "measure {}", s.measure);
        }
        assert!(report.best.measure <= 1e-12);
    }

    #[test]
    fn measure_is_deterministic_and_nonnegative() {
        let mut p = params();
        p.hierarchy_depth = 4;
        let a = nonmarkovianity(&p, 2.0, 4, 11).unwrap();
        let b = nonmarkovianity(&p, 2.0, 4, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.samples.iter().all(|s| s.measure >= 0.0));
        let max = a
            .samples
            .iter()
            .map(|s| s.measure)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(a.best.measure, max);
        // A different seed draws different pairs.
        let c = nonmarkovianity(&p, 2.0, 4, 12).unwrap();
        assert_ne!(a.samples[0].theta, c.samples[0].theta);
    }

    #[test]
    fn markovian_regime_contracts_distance_monotonically() {
        let mut p = params();
        p.lambda = 10.0; // lambda / gamma = 20
        p.gamma = 0.5;
        p.hierarchy_depth = 4;
        let spec = StatePairSpec {
            theta: 1.0,
            phi: 0.4,
        };
        let (rho1, rho2) = orthogonal_pair(&spec);
        let s1 = init_hierarchy(&rho1, &p).unwrap();
        let s2 = init_hierarchy(&rho2, &p).unwrap();
        let mut engine = Engine::new(&p).unwrap();
        let mut d1 = s1.into_data();
        let mut d2 = s2.into_data();
        let mut prev = trace_distance(&engine.reduced_root(&d1), &engine.reduced_root(&d2));
        for _ in 0..1000 {
            engine.rk4_step_in_place(&mut d1, p.dt);
            engine.rk4_step_in_place(&mut d2, p.dt);
            let d = trace_distance(&engine.reduced_root(&d1), &engine.reduced_root(&d2));
            assert!(d <= prev + 1e-6, "distance rose from {prev} to {d}");
            prev = d;
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = params();
        assert!(nonmarkovianity(&p, 0.0, 3, 1).is_err());
        assert!(nonmarkovianity(&p, 1.0, 0, 1).is_err());
    }
}
