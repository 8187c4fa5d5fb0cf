//! Least-squares fits of probe traces.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} samples in the window, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("fit diverged after {iterations} iterations (rms residual {residual_rms})")]
    Diverged { iterations: usize, residual_rms: f64 },
    #[error("times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
}

pub(crate) struct LmOutcome {
    pub params: DVector<f64>,
    pub std_errors: DVector<f64>,
    pub ssr: f64,
    pub iterations: usize,
}

/// Levenberg–Marquardt with Marquardt's diagonal scaling. `residual` returns
/// model − data, `jacobian` its derivative with respect to the parameters.
pub(crate) fn levenberg_marquardt(
    residual: impl Fn(&DVector<f64>) -> DVector<f64>,
    jacobian: impl Fn(&DVector<f64>) -> DMatrix<f64>,
    start: DVector<f64>,
    max_iterations: usize,
) -> Result<LmOutcome, FitError> {
    let k = start.len();
    let mut p = start;
    let mut r = residual(&p);
    let n = r.len();
    let mut ssr = r.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let diverged = |iterations: usize, ssr: f64| FitError::Diverged {
        iterations,
        residual_rms: (ssr / n as f64).sqrt(),
    };
    if !ssr.is_finite() {
        return Err(diverged(0, ssr));
    }
    while iterations < max_iterations && ssr > 0.0 {
        iterations += 1;
        let j = jacobian(&p);
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &r;
        let mut improved = false;
        while lambda < 1e16 {
            let mut a = jtj.clone();
            for i in 0..k {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &p + &step;
            let r_trial = residual(&trial);
            let ssr_trial = r_trial.norm_squared();
            if ssr_trial.is_finite() && ssr_trial <= ssr {
                let small_step = step.norm() <= 1e-14 * (p.norm() + 1e-14);
                let small_gain = ssr - ssr_trial <= 1e-15 * ssr;
                p = trial;
                r = r_trial;
                ssr = ssr_trial;
                lambda = (lambda / 10.0).max(1e-15);
                improved = true;
                if small_step || small_gain {
                    return finish(p, &jacobian, ssr, n, iterations);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // no downhill step left at any damping: a minimum to working precision
            return finish(p, &jacobian, ssr, n, iterations);
        }
    }
    if ssr == 0.0 || iterations < max_iterations {
        return finish(p, &jacobian, ssr, n, iterations);
    }
    Err(diverged(iterations, ssr))
}

fn finish(
    p: DVector<f64>,
    jacobian: &impl Fn(&DVector<f64>) -> DMatrix<f64>,
    ssr: f64,
    n: usize,
    iterations: usize,
) -> Result<LmOutcome, FitError> {
    let k = p.len();
    let j = jacobian(&p);
    let jtj = j.transpose() * &j;
    let dof = n.saturating_sub(k).max(1) as f64;
    let variance = ssr / dof;
    let std_errors = match jtj.try_inverse() {
        Some(cov) => DVector::from_iterator(k, (0..k).map(|i| (variance * cov[(i, i)]).max(0.0).sqrt())),
        None => DVector::from_element(k, f64::INFINITY),
    };
    if p.iter().any(|v| !v.is_finite()) {
        return Err(FitError::Diverged {
            iterations,
            residual_rms: (ssr / n as f64).sqrt(),
        });
    }
    Ok(LmOutcome {
        params: p,
        std_errors,
        ssr,
        iterations,
    })
}

/// Linear least squares; returns coefficients and the residual sum of squares.
fn linear_lsq(columns: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = y.len();
    let k = columns.len();
    let a = DMatrix::from_fn(n, k, |i, j| columns[j][i]);
    let b = DVector::from_column_slice(y);
    let coef = a.clone().svd(true, true).solve(&b, 1e-14).ok()?;
    let ssr = (a * &coef - b).norm_squared();
    Some((coef.iter().copied().collect(), ssr))
}

fn window_samples(times: &[f64], values: &[f64], window: Option<f64>) -> Result<(Vec<f64>, Vec<f64>), FitError> {
    if times.len() != values.len() {
        return Err(FitError::LengthMismatch {
            times: times.len(),
            values: values.len(),
        });
    }
    let start = times.first().copied().unwrap_or(0.0);
    let (t, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| window.map_or(true, |w| t - start <= w))
        .map(|(&t, &y)| (t, y))
        .unzip();
    if t.iter().chain(&y).any(|v| !v.is_finite()) {
        return Err(FitError::Degenerate("non-finite samples"));
    }
    Ok((t, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampedSineFit {
    pub frequency_hz: f64,
    pub damping: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub offset: f64,
    pub drift: f64,
    /// Standard errors in the order frequency, damping, amplitude, phase,
    /// offset, drift.
    pub std_errors: [f64; 6],
    pub residual_rms: f64,
    pub iterations: usize,
}

impl DampedSineFit {
    pub fn frequency_error(&self) -> f64 {
        self.std_errors[0]
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        damped_sine(t, self.amplitude, self.damping, self.frequency_hz, self.phase, self.offset, self.drift)
    }
}

/// A·e^(−βt)·cos(2πft + φ) + c₀ + c₁t.
pub fn damped_sine(t: f64, amplitude: f64, damping: f64, frequency_hz: f64, phase: f64, offset: f64, drift: f64) -> f64 {
    amplitude * (-damping * t).exp() * (2.0 * PI * frequency_hz * t + phase).cos() + offset + drift * t
}

fn periodogram_peak(t: &[f64], y: &[f64]) -> f64 {
    let span = t[t.len() - 1] - t[0];
    let mut steps: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).collect();
    steps.sort_by(f64::total_cmp);
    let dt = steps.get(steps.len() / 2).copied().unwrap_or(span);
    let nyquist = 0.5 / dt;
    let power = |f: f64| {
        let (mut c, mut s) = (0.0, 0.0);
        for (&ti, &yi) in t.iter().zip(y) {
            let (sn, cs) = (2.0 * PI * f * ti).sin_cos();
            c += yi * cs;
            s += yi * sn;
        }
        c * c + s * s
    };
    let coarse = 0.1 / span;
    let mut best = (0.0, coarse);
    let mut f = 0.5 / span;
    while f < nyquist {
        let p = power(f);
        if p > best.0 {
            best = (p, f);
        }
        f += coarse;
    }
    let centre = best.1;
    let fine = coarse / 50.0;
    let mut refined = best;
    for i in -50..=50 {
        let f = centre + i as f64 * fine;
        if f > 0.0 {
            let p = power(f);
            if p > refined.0 {
                refined = (p, f);
            }
        }
    }
    refined.1
}

/// Decay rate from a straight line through the log of per-period amplitudes.
fn log_envelope_rate(t: &[f64], y: &[f64], frequency: f64) -> f64 {
    let period = 1.0 / frequency;
    let t0 = t[0];
    let mut points = Vec::new();
    let mut start = 0;
    while start < t.len() {
        let chunk_end = t0 + period * (((t[start] - t0) / period).floor() + 1.0);
        let end = t[start..].iter().position(|&ti| ti >= chunk_end).map_or(t.len(), |p| p + start);
        if end - start >= 4 {
            let ts = &t[start..end];
            let cols = vec![
                ts.iter().map(|&ti| (2.0 * PI * frequency * ti).cos()).collect(),
                ts.iter().map(|&ti| (2.0 * PI * frequency * ti).sin()).collect(),
                vec![1.0; ts.len()],
            ];
            if let Some((c, _)) = linear_lsq(&cols, &y[start..end]) {
                let amp = c[0].hypot(c[1]);
                if amp > 0.0 {
                    let mid = 0.5 * (ts[0] + ts[ts.len() - 1]);
                    points.push((mid, amp.ln()));
                }
            }
        }
        start = end.max(start + 1);
    }
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx > 0.0 {
        -sxy / sxx
    } else {
        0.0
    }
}

/// Fit A·e^(−βt)·cos(2πft + φ) + c₀ + c₁t to the samples within `window` of
/// the first time stamp.
pub fn fit_damped_sine_samples(times: &[f64], values: &[f64], window: Option<f64>) -> Result<DampedSineFit, FitError> {
    const MIN_SAMPLES: usize = 10;
    let (t_raw, y_raw) = window_samples(times, values, window)?;
    if t_raw.len() < MIN_SAMPLES {
        return Err(FitError::InsufficientData {
            needed: MIN_SAMPLES,
            got: t_raw.len(),
        });
    }
    let t_scale = t_raw.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if t_scale == 0.0 || t_raw[t_raw.len() - 1] <= t_raw[0] {
        return Err(FitError::Degenerate("no time span"));
    }
    let t: Vec<f64> = t_raw.iter().map(|ti| ti / t_scale).collect();

    let ones = vec![1.0; t.len()];
    let (trend, _) = linear_lsq(&[ones.clone(), t.clone()], &y_raw).ok_or(FitError::Degenerate("trend"))?;
    let detrended: Vec<f64> = t.iter().zip(&y_raw).map(|(ti, yi)| yi - trend[0] - trend[1] * ti).collect();
    let spread = (detrended.iter().map(|d| d * d).sum::<f64>() / t.len() as f64).sqrt();
    let y_scale = y_raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if y_scale == 0.0 || spread <= 1e-12 * y_scale {
        return Err(FitError::Degenerate("no oscillation above the linear trend"));
    }
    let y: Vec<f64> = y_raw.iter().map(|v| v / y_scale).collect();
    let detrended: Vec<f64> = detrended.iter().map(|v| v / y_scale).collect();

    let f0 = periodogram_peak(&t, &detrended);
    let beta0 = log_envelope_rate(&t, &detrended, f0);
    let env: Vec<f64> = t.iter().map(|ti| (-beta0 * ti).exp()).collect();
    let cols = vec![
        t.iter().zip(&env).map(|(ti, e)| e * (2.0 * PI * f0 * ti).cos()).collect(),
        t.iter().zip(&env).map(|(ti, e)| e * (2.0 * PI * f0 * ti).sin()).collect(),
        ones,
        t.clone(),
    ];
    let (lin, _) = linear_lsq(&cols, &y).ok_or(FitError::Degenerate("initial linear fit"))?;
    let amp0 = lin[0].hypot(lin[1]);
    let phase0 = (-lin[1]).atan2(lin[0]);
    // p = [A, β, f, φ, c₀, c₁]
    let start = DVector::from_vec(vec![amp0, beta0, f0, phase0, lin[2], lin[3]]);

    let residual = |p: &DVector<f64>| {
        DVector::from_iterator(
            t.len(),
            t.iter()
                .zip(&y)
                .map(|(&ti, &yi)| damped_sine(ti, p[0], p[1], p[2], p[3], p[4], p[5]) - yi),
        )
    };
    let jacobian = |p: &DVector<f64>| {
        DMatrix::from_fn(t.len(), 6, |i, j| {
            let ti = t[i];
            let e = (-p[1] * ti).exp();
            let arg = 2.0 * PI * p[2] * ti + p[3];
            let (s, c) = arg.sin_cos();
            match j {
                0 => e * c,
                1 => -ti * p[0] * e * c,
                2 => -2.0 * PI * ti * p[0] * e * s,
                3 => -p[0] * e * s,
                4 => 1.0,
                _ => ti,
            }
        })
    };
    let out = levenberg_marquardt(residual, jacobian, start, 500)?;
    let p = &out.params;
    let se = &out.std_errors;
    let (mut amplitude, mut phase) = (p[0], p[3]);
    if amplitude < 0.0 {
        amplitude = -amplitude;
        phase += PI;
    }
    if amplitude * y_scale <= 1e-12 * y_scale {
        return Err(FitError::Degenerate("zero fitted amplitude"));
    }
    phase = phase.rem_euclid(2.0 * PI);
    Ok(DampedSineFit {
        frequency_hz: p[2] / t_scale,
        damping: p[1] / t_scale,
        amplitude: amplitude * y_scale,
        phase,
        offset: p[4] * y_scale,
        drift: p[5] * y_scale / t_scale,
        std_errors: [
            se[2] / t_scale,
            se[1] / t_scale,
            se[0] * y_scale,
            se[3],
            se[4] * y_scale,
            se[5] * y_scale / t_scale,
        ],
        residual_rms: (out.ssr / t.len() as f64).sqrt() * y_scale,
        iterations: out.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    /// Decay time τ; infinite for a flat trace.
    pub tau: f64,
    /// 1/τ.
    pub rate: f64,
    /// Decay rate in the γ = 1/(πτ) convention.
    pub gamma: f64,
    pub amplitude: f64,
    pub offset: f64,
    /// Standard errors of (amplitude, τ, offset).
    pub std_errors: [f64; 3],
    pub degenerate: bool,
}

/// γ = 1/(πτ).
pub fn gamma_from_tau(tau: f64) -> f64 {
    1.0 / (PI * tau)
}

/// Fit A·e^(−t/τ) + c. A flat trace yields rate 0 with `degenerate` set.
pub fn fit_exponential_samples(times: &[f64], values: &[f64]) -> Result<ExponentialFit, FitError> {
    const MIN_SAMPLES: usize = 4;
    let (t_raw, y_raw) = window_samples(times, values, None)?;
    if t_raw.len() < MIN_SAMPLES {
        return Err(FitError::InsufficientData {
            needed: MIN_SAMPLES,
            got: t_raw.len(),
        });
    }
    let t0 = t_raw[0];
    let span = t_raw[t_raw.len() - 1] - t0;
    if !(span > 0.0) {
        return Err(FitError::Degenerate("no time span"));
    }
    let mean = y_raw.iter().sum::<f64>() / y_raw.len() as f64;
    let spread = (y_raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / y_raw.len() as f64).sqrt();
    let y_scale = y_raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if spread <= 1e-12 * y_scale.max(f64::MIN_POSITIVE) {
        return Ok(ExponentialFit {
            tau: f64::INFINITY,
            rate: 0.0,
            gamma: 0.0,
            amplitude: 0.0,
            offset: mean,
            std_errors: [0.0, f64::INFINITY, 0.0],
            degenerate: true,
        });
    }
    // work in units of the span, relative to the first sample
    let t: Vec<f64> = t_raw.iter().map(|ti| (ti - t0) / span).collect();
    let y: Vec<f64> = y_raw.iter().map(|v| v / y_scale).collect();
    let ones = vec![1.0; t.len()];
    let projected = |tau: f64| {
        let col: Vec<f64> = t.iter().map(|ti| (-ti / tau).exp()).collect();
        linear_lsq(&[col, ones.clone()], &y)
    };
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for i in 0..=120 {
        let tau = 10f64.powf(-3.0 + 5.0 * i as f64 / 120.0);
        if let Some((c, ssr)) = projected(tau) {
            if best.as_ref().map_or(true, |b| ssr < b.1) {
                best = Some((tau, ssr, c));
            }
        }
    }
    let (tau0, _, lin) = best.ok_or(FitError::Degenerate("no exponential component"))?;
    let start = DVector::from_vec(vec![lin[0], tau0.ln(), lin[1]]);
    // p = [A, ln τ, c]
    let residual = |p: &DVector<f64>| {
        let tau = p[1].exp();
        DVector::from_iterator(
            t.len(),
            t.iter().zip(&y).map(|(&ti, &yi)| p[0] * (-ti / tau).exp() + p[2] - yi),
        )
    };
    let jacobian = |p: &DVector<f64>| {
        let tau = p[1].exp();
        DMatrix::from_fn(t.len(), 3, |i, j| {
            let e = (-t[i] / tau).exp();
            match j {
                0 => e,
                1 => p[0] * e * t[i] / tau,
                _ => 1.0,
            }
        })
    };
    let out = levenberg_marquardt(residual, jacobian, start, 500)?;
    let p = &out.params;
    let tau_unit = p[1].exp();
    let tau = tau_unit * span;
    // shift the amplitude reference from t₀ back to t = 0
    let amplitude = p[0] * y_scale * (t0 / tau).exp();
    Ok(ExponentialFit {
        tau,
        rate: 1.0 / tau,
        gamma: gamma_from_tau(tau),
        amplitude,
        offset: p[2] * y_scale,
        std_errors: [
            out.std_errors[0] * y_scale * (t0 / tau).exp(),
            out.std_errors[1] * tau,
            out.std_errors[2] * y_scale,
        ],
        degenerate: false,
    })
}
