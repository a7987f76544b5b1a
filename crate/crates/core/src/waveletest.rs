//! Wavelet estimation by averaging log spectra across a gather.
//!
//! Each trace is transformed, floored, unwrapped and stripped of its own
//! integer-sample delay (taken from the fitted phase slope) and of any whole
//! turns in the fitted intercept. The log amplitudes and residual phases are
//! then averaged bin by bin. Exponentiating the mean gives the wavelet
//! spectrum; since delays were removed it sits near time zero, and a window
//! of `+/- support_s` around its peak is kept.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, Spectrum, AMPLITUDE_FLOOR};
use crate::synthkit::{self, Trace};
use crate::unwrap::{self, Method, UnwrapConfig, UnwrapInput};

#[derive(Debug, Clone)]
pub struct Gather {
    traces: Vec<Trace>,
    pub seed: Option<u64>,
    pub provenance: String,
}

impl Gather {
    pub fn new(traces: Vec<Trace>) -> Result<Self> {
        let first = traces
            .first()
            .ok_or_else(|| Error::InvalidConfig("gather needs at least one trace".into()))?;
        let (n, dt) = (first.len(), first.dt());
        for (i, t) in traces.iter().enumerate() {
            if t.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "trace {i} has {} samples, expected {n}",
                    t.len()
                )));
            }
            if (t.dt() - dt).abs() > 1e-12 * dt {
                return Err(Error::DtMismatch(dt, t.dt()));
            }
        }
        Ok(Self {
            traces,
            seed: None,
            provenance: String::new(),
        })
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn n_samples(&self) -> usize {
        self.traces[0].len()
    }

    pub fn dt(&self) -> f64 {
        self.traces[0].dt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFailure {
    pub trace: usize,
    pub reason: String,
}

/// Bin-by-bin means over the traces that unwrapped successfully.
#[derive(Debug, Clone)]
pub struct SpectralAverage {
    pub mean_log_amp: Vec<f64>,
    pub mean_phase: Vec<f64>,
    pub n_used: usize,
    pub failures: Vec<TraceFailure>,
    pub n_time: usize,
    pub dt: f64,
}

struct TraceTerms {
    log_amp: Vec<f64>,
    phase: Vec<f64>,
}

/// Log amplitude and residual phase of a single trace.
fn trace_terms(trace: &Trace, method: Method, cfg: &UnwrapConfig) -> Result<TraceTerms> {
    let input = UnwrapInput::new(trace.clone());
    let s: &Spectrum = &input.spectrum;
    let curve = unwrap::unwrap(&input, method, cfg)?;
    let fit = unwrap::fit_linear_phase(&curve, s)?;
    // integer delay in samples, relative to the first sample
    let delay = (-fit.slope_rad_per_hz / TAU / s.dt).round();
    let turns = (fit.intercept_rad / TAU).round();
    let phase = curve
        .values
        .iter()
        .enumerate()
        .map(|(k, p)| p + TAU * s.frequency(k) * delay * s.dt - TAU * turns)
        .collect();
    let floor = AMPLITUDE_FLOOR * s.max_amplitude();
    let log_amp = s.bins.iter().map(|b| b.norm().max(floor).ln()).collect();
    Ok(TraceTerms { log_amp, phase })
}

/// Sum of vectors by pairwise reduction over a fixed tree, so the result
/// does not depend on how the per-trace work was scheduled.
fn pairwise_sum(mut items: Vec<Vec<f64>>) -> Vec<f64> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        items = next;
    }
    items.pop().unwrap_or_default()
}

pub fn log_spectral_average(g: &Gather, method: Method, cfg: &UnwrapConfig) -> Result<SpectralAverage> {
    let results: Vec<Result<TraceTerms>> = g
        .traces
        .par_iter()
        .map(|t| trace_terms(t, method, cfg))
        .collect();
    let mut amps = Vec::new();
    let mut phases = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => {
                amps.push(t.log_amp);
                phases.push(t.phase);
            }
            Err(e) => failures.push(TraceFailure {
                trace: i,
                reason: e.to_string(),
            }),
        }
    }
    let n_used = amps.len();
    if n_used == 0 {
        let reasons: Vec<String> = failures.iter().map(|f| f.reason.clone()).collect();
        return Err(Error::AllTracesFailed(reasons.join("; ")));
    }
    let scale = 1.0 / n_used as f64;
    let mean_log_amp = pairwise_sum(amps).into_iter().map(|v| v * scale).collect();
    let mean_phase = pairwise_sum(phases).into_iter().map(|v| v * scale).collect();
    Ok(SpectralAverage {
        mean_log_amp,
        mean_phase,
        n_used,
        failures,
        n_time: g.n_samples(),
        dt: g.dt(),
    })
}

impl SpectralAverage {
    /// Full-length time series whose spectrum is `exp(mean_log_amp + j mean_phase)`.
    pub fn reconstruct(&self) -> Trace {
        let n = self.n_time;
        let bins: Vec<Complex64> = self
            .mean_log_amp
            .iter()
            .zip(&self.mean_phase)
            .map(|(a, p)| Complex64::new(*a, *p).exp())
            .collect();
        let s = Spectrum {
            bins,
            df: 1.0 / (n as f64 * self.dt),
            n_time: n,
            dt: self.dt,
            t_start: 0.0,
        };
        spectral::idft(&s)
    }
}

#[derive(Debug, Clone)]
pub struct WaveletEstimate {
    /// Odd-length, peak-centred, peak-normalised wavelet; `t = 0` at the peak.
    pub wavelet: Trace,
    pub n_traces_used: usize,
    pub unwrap_method: Method,
    pub mean_log_amp: Vec<f64>,
    pub mean_phase: Vec<f64>,
    pub failed_trace_ids: Vec<usize>,
    pub failures: Vec<TraceFailure>,
}

pub fn estimate_wavelet(g: &Gather, method: Method, support_s: f64, cfg: &UnwrapConfig) -> Result<WaveletEstimate> {
    let n = g.n_samples();
    let dt = g.dt();
    let half = (support_s / dt).round() as usize;
    if !(support_s > 0.0) || 2 * half + 1 > n || support_s >= (n - 1) as f64 * dt / 2.0 {
        return Err(Error::InvalidConfig(format!(
            "support {support_s} s must be positive and below half the trace duration"
        )));
    }
    let avg = log_spectral_average(g, method, cfg)?;
    let full = avg.reconstruct();
    let x = full.samples();
    let peak = full.index_of_peak();
    let norm = x[peak].abs();
    let samples: Vec<f64> = (0..2 * half + 1)
        .map(|i| x[(peak + n + i - half) % n] / norm)
        .collect();
    let wavelet = Trace::from_parts(samples, dt, -(half as f64) * dt);
    Ok(WaveletEstimate {
        wavelet,
        n_traces_used: avg.n_used,
        unwrap_method: method,
        failed_trace_ids: avg.failures.iter().map(|f| f.trace).collect(),
        failures: avg.failures,
        mean_log_amp: avg.mean_log_amp,
        mean_phase: avg.mean_phase,
    })
}

/// Maximum over all lags of the normalised cross-correlation
/// `sum a[i] b[i + lag] / (|a| |b|)`.
pub fn max_normalized_xcorr(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let la = a.len() as isize;
    let lb = b.len() as isize;
    let mut best = f64::NEG_INFINITY;
    for lag in -(la - 1)..lb {
        let mut acc = 0.0;
        for (i, av) in a.iter().enumerate() {
            let j = i as isize + lag;
            if j >= 0 && j < lb {
                acc += av * b[j as usize];
            }
        }
        best = best.max(acc);
    }
    best / (na * nb)
}

/// Synthetic gather: one Ricker convolved with independent sparse
/// reflectivities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatherConfig {
    pub n_traces: usize,
    pub n_samples: usize,
    pub dt: f64,
    pub ricker_f0: f64,
    /// Samples of reflectivity per trace (the rest is zero padding).
    pub reflectivity_len: usize,
    pub spike_density: f64,
    pub snr_db: Option<f64>,
    pub seed: u64,
}

impl Default for GatherConfig {
    fn default() -> Self {
        Self {
            n_traces: 50,
            n_samples: 1024,
            dt: 1e-3,
            ricker_f0: 30.0,
            reflectivity_len: 256,
            spike_density: 0.1,
            snr_db: None,
            seed: 7,
        }
    }
}

/// Half-length of the synthetic wavelet in seconds: three dominant periods.
fn wavelet_half_length(f0: f64) -> f64 {
    3.0 / f0
}

/// Per-trace sub-seed derived from the gather seed.
pub fn trace_seed(seed: u64, index: usize, stream: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1))
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl GatherConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_traces == 0 {
            return Err(Error::InvalidConfig("n_traces must be at least 1".into()));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidConfig("dt must be positive".into()));
        }
        let half = (wavelet_half_length(self.ricker_f0) / self.dt).round() as usize;
        if self.reflectivity_len == 0 || self.reflectivity_len + 2 * half > self.n_samples {
            return Err(Error::InvalidConfig(format!(
                "reflectivity ({}) plus wavelet ({}) does not fit in {} samples",
                self.reflectivity_len,
                2 * half + 1,
                self.n_samples
            )));
        }
        Ok(())
    }

    /// The true wavelet: a Ricker centred in an odd-length window.
    pub fn true_wavelet(&self) -> Result<Trace> {
        let half = (wavelet_half_length(self.ricker_f0) / self.dt).round() as usize;
        let w = synthkit::ricker(self.ricker_f0, self.dt, 2 * half + 1, half as f64 * self.dt)?;
        Ok(w.with_t_start(-(half as f64) * self.dt))
    }

    pub fn build(&self) -> Result<(Gather, Trace)> {
        self.validate()?;
        let w = self.true_wavelet()?;
        let traces = (0..self.n_traces)
            .map(|i| {
                let r = synthkit::gen_reflectivity(
                    self.reflectivity_len,
                    self.spike_density,
                    self.dt,
                    trace_seed(self.seed, i, 0),
                )?;
                let s = synthkit::convolve(&w, &r.with_t_start(0.0))?.resized(self.n_samples);
                let s = s.with_t_start(0.0);
                match self.snr_db {
                    Some(snr) if snr.is_finite() => synthkit::add_noise(&s, snr, trace_seed(self.seed, i, 1)),
                    _ => Ok(s),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut g = Gather::new(traces)?;
        g.seed = Some(self.seed);
        g.provenance = format!(
            "ricker {} Hz * reflectivity(len {}, density {}), {} traces",
            self.ricker_f0, self.reflectivity_len, self.spike_density, self.n_traces
        );
        Ok((g, w))
    }
}
