//! Closed-form results: the Lorentzian bath spectral density, its
//! exponential correlation function, the oscillator-induced renormalization
//! factor, and the long-time population difference it predicts.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Lorentzian bath spectral density
/// `J(omega) = gamma lambda^2 / (2 pi ((omega - delta)^2 + lambda^2))`,
/// peaked at the tunneling frequency with half-width `lambda`.
pub fn spectral_density(omega: f64, p: &SystemParams) -> f64 {
    let d = omega - p.delta;
    p.gamma * p.lambda * p.lambda / (2.0 * std::f64::consts::PI * (d * d + p.lambda * p.lambda))
}

/// Bath correlation function for the vacuum Lorentzian bath,
/// `C(t) = (gamma lambda / 2) exp(-(lambda + i delta) t)` for `t >= 0`.
pub fn bath_correlation(t: f64, p: &SystemParams) -> C64 {
    debug_assert!(t >= 0.0, "the correlation function is defined for t >= 0");
    let envelope = 0.5 * p.gamma * p.lambda * (-p.lambda * t).exp();
    C64::from_polar(envelope, -p.delta * t)
}

/// Fourier quadrature of the spectral density,
/// `int J(omega) exp(-i omega t) domega`, over the window
/// `omega in [delta - half_width lambda, delta + half_width lambda]` with a
/// composite Simpson rule on `2 * half_intervals` subintervals.
///
/// The clipped Lorentzian tails bound the window truncation error by
/// `gamma lambda arctan(1 / half_width) / pi`, which for `half_width = 2000`
/// is below `1.6e-4 * gamma lambda` -- well inside the 1e-4 consistency
/// tolerance at the parameter scales used here.
pub fn correlation_from_spectrum(
    t: f64,
    p: &SystemParams,
    half_width: f64,
    half_intervals: usize,
) -> C64 {
    let lo = p.delta - half_width * p.lambda;
    let hi = p.delta + half_width * p.lambda;
    let n = 2 * half_intervals;
    let h = (hi - lo) / n as f64;
    let f = |omega: f64| -> C64 {
        C64::from_polar(spectral_density(omega, p), -omega * t)
    };
    let mut sum = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(lo + k as f64 * h) * w;
    }
    sum * (h / 3.0)
}

/// Renormalization factor `eta = exp(-2 (g0/omega0)^2)` produced by the
/// polaron-style dressing of the qubit by the oscillator.
pub fn renormalization_eta(g0: f64, omega0: f64) -> Result<f64> {
    if omega0 <= 0.0 {
        return Err(Error::InvalidParams(
            "renormalization factor requires omega0 > 0".into(),
        ));
    }
    let zeta = g0 / omega0;
    Ok((-2.0 * zeta * zeta).exp())
}

/// Long-time population difference of the dressed biased qubit,
/// `-eta epsilon / sqrt(delta^2 + (eta epsilon)^2)`.
pub fn steady_population(p: &SystemParams) -> Result<f64> {
    if p.epsilon == 0.0 && p.delta == 0.0 {
        return Err(Error::InvalidParams(
            "steady population is undefined for epsilon = delta = 0".into(),
        ));
    }
    let eta = if p.g0 == 0.0 {
        1.0
    } else {
        renormalization_eta(p.g0, p.omega0)?
    };
    let dressed = eta * p.epsilon;
    Ok(-dressed / (p.delta * p.delta + dressed * dressed).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> SystemParams {
        SystemParams {
            epsilon: 0.0,
            delta: 0.5,
            omega0: 1.0,
            g0: 0.0,
            alpha: 0.0,
            gamma: 0.5,
            lambda: 0.25,
            n_osc: 1,
            hierarchy_depth: 0,
            dt: 0.01,
            t_max: 1.0,
        }
    }

    #[test]
    fn spectral_density_peak_and_half_width() {
        let p = params();
        let peak = spectral_density(p.delta, &p);
        assert!((peak - p.gamma / (2.0 * PI)).abs() < 1e-15);
        assert!((spectral_density(p.delta + p.lambda, &p) - 0.5 * peak).abs() < 1e-15);
        assert!((spectral_density(p.delta - p.lambda, &p) - 0.5 * peak).abs() < 1e-15);
        for w in [-3.0, -0.1, 0.0, 0.7, 10.0] {
            assert!(spectral_density(w, &p) > 0.0);
            assert!(spectral_density(w, &p) <= peak);
        }
    }

    #[test]
    fn correlation_at_zero_and_envelope() {
        let p = params();
        let c0 = bath_correlation(0.0, &p);
        assert!((c0 - C64::new(0.0625, 0.0)).norm() < 1e-15);
        for &t in &[0.5, 1.0, 3.0, 10.0] {
            let c = bath_correlation(t, &p);
            assert!((c.norm() / c0.norm() - (-p.lambda * t).exp()).abs() < 1e-12);
            // Phase winds as -delta t.
            let expected = -p.delta * t;
            let got = c.arg();
            let wrapped = (got - expected).rem_euclid(2.0 * PI);
            assert!(wrapped.min(2.0 * PI - wrapped) < 1e-12);
            assert!(c.norm() <= c0.norm());
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let p = params();
        for &t in &[0.0, 1.0, 5.0] {
            let quad = correlation_from_spectrum(t, &p, 2000.0, 1 << 19);
            let closed = bath_correlation(t, &p);
            assert!(
                (quad - closed).norm() < 1e-4,
                "t = {t}: |quad - closed| = {:.3e}",
                (quad - closed).norm()
            );
        }
    }

    #[test]
    fn eta_limits_and_values() {
        assert!((renormalization_eta(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((renormalization_eta(1.0, 1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-12);
        assert!((renormalization_eta(0.1, 1.0).unwrap() - (-0.02f64).exp()).abs() < 1e-12);
        assert!(renormalization_eta(0.1, 0.0).is_err());
    }

    #[test]
    fn eta_is_even_and_strictly_decreasing_in_zeta() {
        let mut prev = 1.0;
        for i in 1..=200 {
            let zeta = i as f64 * 0.02;
            let eta = renormalization_eta(zeta, 1.0).unwrap();
            let eta_neg = renormalization_eta(-zeta, 1.0).unwrap();
            assert_eq!(eta, eta_neg);
            assert!(eta < prev);
            assert!(eta > 0.0 && eta <= 1.0);
            prev = eta;
        }
    }

    #[test]
    fn steady_population_values() {
        let mut p = params();
        p.epsilon = 0.0;
        assert_eq!(steady_population(&p).unwrap(), 0.0);

        p.epsilon = 0.1;
        p.delta = 0.5;
        let bare = steady_population(&p).unwrap();
        assert!((bare - (-0.1 / 0.26f64.sqrt())).abs() < 1e-12);
        assert!((bare + 0.19612).abs() < 1e-5);

        // eta = 1 reduces exactly to the bare two-level formula.
        let direct = -p.epsilon / (p.epsilon * p.epsilon + p.delta * p.delta).sqrt();
        assert_eq!(bare, direct);

        p.epsilon = 0.0;
        p.delta = 0.0;
        assert!(steady_population(&p).is_err());
    }

    #[test]
    fn steady_population_moves_toward_zero_with_zeta() {
        let mut prev = -1.0f64;
        for &zeta in &[0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
            let mut p = params();
            p.epsilon = 0.1;
            p.g0 = if zeta == 0.0 { 0.0 } else { 0.02 };
            p.omega0 = if zeta == 0.0 { 1.0 } else { p.g0 / zeta };
            let v = steady_population(&p).unwrap();
            assert!(v > prev, "zeta {zeta}: {v} should exceed {prev}");
            assert!(v < 0.0 && v > -1.0);
            prev = v;
        }
    }
}
