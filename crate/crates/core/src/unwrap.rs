//! One-dimensional phase unwrappers and the constant-phase / delay fit.
//!
//! | method | label | idea |
//! |--------|-------|------|
//! | [`Method::Jump`] | PU-M | add `2 pi` whenever consecutive principal values jump by more than `pi` |
//! | [`Method::WPlane`] | PU-K | map to `exp(j phi)` and count crossings of the negative real axis |
//! | [`Method::Factor`] | PU-F | sum the continuous phase of every root of the z-transform |
//! | [`Method::Stoffa`] | PU-S | integrate `Im[S'/S]` over frequency |

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootfind::{self, RootConfig, RootSet};
use crate::spectral::{self, wrap_phase, PhaseCurve, PhaseKind, Spectrum};
use crate::synthkit::Trace;

/// `|dphi| - pi` within this counts as an exact half turn.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Minimum number of bins the linear fit accepts.
pub const MIN_FIT_BINS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// PU-M
    #[serde(rename = "PU-M")]
    Jump,
    /// PU-K
    #[serde(rename = "PU-K")]
    WPlane,
    /// PU-F
    #[serde(rename = "PU-F")]
    Factor,
    /// PU-S
    #[serde(rename = "PU-S")]
    Stoffa,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Jump, Method::WPlane, Method::Factor, Method::Stoffa];

    pub fn label(self) -> &'static str {
        match self {
            Method::Jump => "PU-M",
            Method::WPlane => "PU-K",
            Method::Factor => "PU-F",
            Method::Stoffa => "PU-S",
        }
    }

    /// Column-name friendly form, e.g. `pu_m`.
    pub fn slug(self) -> &'static str {
        match self {
            Method::Jump => "pu_m",
            Method::WPlane => "pu_k",
            Method::Factor => "pu_f",
            Method::Stoffa => "pu_s",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let m: Method = part.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("method list is empty".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('_', "-").as_str() {
            "PU-M" | "M" | "JUMP" => Ok(Method::Jump),
            "PU-K" | "K" | "WPLANE" | "W-PLANE" => Ok(Method::WPlane),
            "PU-F" | "F" | "FACTOR" => Ok(Method::Factor),
            "PU-S" | "S" | "STOFFA" => Ok(Method::Stoffa),
            other => Err(Error::InvalidConfig(format!("unknown unwrap method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnwrapConfig {
    /// PU-F refuses roots with `||u| - 1| <= unit_circle_delta` whose angle
    /// falls on a bin above the amplitude floor.
    pub unit_circle_delta: f64,
    pub roots: RootConfig,
}

impl Default for UnwrapConfig {
    fn default() -> Self {
        Self {
            unit_circle_delta: 1e-8,
            roots: RootConfig::default(),
        }
    }
}

/// A trace together with its spectrum and floor mask.
#[derive(Debug, Clone)]
pub struct UnwrapInput {
    pub trace: Trace,
    pub spectrum: Spectrum,
    pub mask: Vec<bool>,
}

impl UnwrapInput {
    pub fn new(trace: Trace) -> Self {
        let spectrum = spectral::dft(&trace);
        Self::with_spectrum(trace, spectrum)
    }

    pub fn with_spectrum(trace: Trace, spectrum: Spectrum) -> Self {
        debug_assert_eq!(trace.len(), spectrum.n_time);
        let mask = spectrum.floor_mask();
        Self {
            trace,
            spectrum,
            mask,
        }
    }

    pub fn wrapped(&self) -> PhaseCurve {
        let values = self.spectrum.bins.iter().map(|b| spectral::principal_value(*b)).collect();
        PhaseCurve::wrapped(values, self.mask.clone())
    }
}

/// Shared driver for the count-based unwrappers. `step(prev, cur)` returns
/// the change in `n(f)` between consecutive trusted bins and whether the
/// decision was a tie.
fn accumulate_counts(wrapped: &PhaseCurve, step: impl Fn(f64, f64) -> (i64, bool)) -> PhaseCurve {
    let p = &wrapped.values;
    let valid = &wrapped.valid;
    let n = p.len();
    let mut counts = vec![0i64; n];
    let mut flagged = Vec::new();
    let mut last: Option<usize> = None;
    let mut current = 0i64;
    for k in 0..n {
        if !valid[k] {
            continue;
        }
        if let Some(j) = last {
            let (dn, tie) = step(p[j], p[k]);
            current += dn;
            if tie {
                flagged.push(k);
            }
            // bins j+1..k were bridged
            flagged.extend(j + 1..k);
        }
        counts[k] = current;
        last = Some(k);
    }

    // masked bins take the multiple that keeps them closest to the nearest
    // trusted neighbour (previous one, or the next one for a leading run)
    let first_valid = valid.iter().position(|v| *v);
    let mut reference: Option<f64> = first_valid.map(|i| p[i] + TAU * counts[i] as f64);
    for k in 0..n {
        if valid[k] {
            reference = Some(p[k] + TAU * counts[k] as f64);
            continue;
        }
        if let Some(r) = reference {
            counts[k] = ((r - p[k]) / TAU).round() as i64;
        }
        if first_valid.is_some_and(|f| k < f) || last.is_some_and(|l| k > l) {
            flagged.push(k);
        }
    }
    flagged.sort_unstable();
    flagged.dedup();
    PhaseCurve::from_counts(p.clone(), counts, valid.clone(), flagged)
}

/// PU-M: classical `2 pi` jump correction.
pub fn unwrap_jump(wrapped: &PhaseCurve) -> PhaseCurve {
    debug_assert_eq!(wrapped.kind, PhaseKind::Wrapped);
    accumulate_counts(wrapped, |a, b| {
        let d = b - a;
        if (d.abs() - PI).abs() <= TIE_TOLERANCE {
            (0, true)
        } else if d > PI {
            (-1, false)
        } else if d < -PI {
            (1, false)
        } else {
            (0, false)
        }
    })
}

/// PU-K: walk `w = exp(j phi)` along the shorter arc between consecutive
/// bins and count crossings of the negative real axis.
pub fn unwrap_wplane(wrapped: &PhaseCurve) -> PhaseCurve {
    debug_assert_eq!(wrapped.kind, PhaseKind::Wrapped);
    accumulate_counts(wrapped, |a, b| {
        let wa = Complex64::from_polar(1.0, a);
        let wb = Complex64::from_polar(1.0, b);
        let cross = wa.re * wb.im - wa.im * wb.re;
        let dot = wa.re * wb.re + wa.im * wb.im;
        if dot < 0.0 && cross.abs() <= TIE_TOLERANCE {
            return (0, true);
        }
        let upper_a = wa.im >= 0.0;
        let upper_b = wb.im >= 0.0;
        match (upper_a, upper_b) {
            // counter-clockwise from the upper into the lower half-plane
            (true, false) if cross > 0.0 => (1, false),
            (false, true) if cross < 0.0 => (-1, false),
            _ => (0, false),
        }
    })
}

/// Signed sample time index: the upper half of the record is read as
/// negative time, the way the DFT treats it.
fn centred_index(n: usize, len: usize) -> f64 {
    if 2 * n < len {
        n as f64
    } else {
        n as f64 - len as f64
    }
}

/// PU-S: trapezoidal integration of `phi'(f) = Im[S'(f)/S(f)]`, where `S'`
/// is the DFT of `-j 2 pi t_n s_n`.
pub fn unwrap_stoffa(input: &UnwrapInput) -> Result<PhaseCurve> {
    let s = &input.spectrum;
    let n = s.n_time;
    let dt = s.dt;
    let mut weighted: Vec<Complex64> = input
        .trace
        .samples()
        .iter()
        .enumerate()
        .map(|(i, v)| Complex64::new(0.0, -TAU * centred_index(i, n) * dt * v))
        .collect();
    spectral::fft_in_place(&mut weighted, false);

    let nb = s.bins.len();
    let mut deriv = vec![f64::NAN; nb];
    for k in 0..nb {
        if input.mask[k] {
            deriv[k] = (weighted[k] / s.bins[k]).im;
        }
    }
    let mut flagged = Vec::new();
    // floored bins: hold the last valid derivative, leading ones take the first
    let first = deriv.iter().position(|d| d.is_finite());
    let mut hold = first.map(|i| deriv[i]).unwrap_or(0.0);
    for (k, d) in deriv.iter_mut().enumerate() {
        if d.is_finite() {
            hold = *d;
        } else {
            *d = hold;
            flagged.push(k);
        }
    }

    let mut phase = vec![0.0; nb];
    phase[0] = if s.bins[0].re > 0.0 { 0.0 } else { -PI };
    for k in 1..nb {
        phase[k] = phase[k - 1] + 0.5 * s.df * (deriv[k - 1] + deriv[k]);
    }
    Ok(PhaseCurve::unwrapped(phase, input.mask.clone(), flagged))
}

/// Roots of a trace's z-transform plus the bookkeeping needed to rebuild its
/// phase.
#[derive(Debug, Clone)]
pub struct FactoredTrace {
    /// Roots of `P(z) = sum_i c_{D-i} z^i` where `c` are the trimmed samples.
    pub roots: RootSet,
    /// Leading zero samples stripped off (exact linear phase).
    pub leading_zeros: usize,
    /// First non-zero sample.
    pub first_sample: f64,
}

impl FactoredTrace {
    pub fn degree(&self) -> usize {
        self.roots.degree
    }
}

/// Strips leading/trailing zeros and factors what is left.
pub fn factor_trace(trace: &Trace, cfg: &RootConfig) -> Result<FactoredTrace> {
    let s = trace.samples();
    let first = s.iter().position(|v| *v != 0.0).ok_or(Error::ZeroSignal)?;
    let last = s.iter().rposition(|v| *v != 0.0).unwrap_or(first);
    let core = &s[first..=last];
    let roots = if core.len() == 1 {
        RootSet {
            roots: Vec::new(),
            leading_coeff: Complex64::new(core[0], 0.0),
            degree: 0,
            max_residual: 0.0,
            iterations: 0,
        }
    } else {
        // ascending coefficients of P are the samples reversed
        let coeffs: Vec<f64> = core.iter().rev().copied().collect();
        rootfind::factor_polynomial(&coeffs, cfg)?
    };
    Ok(FactoredTrace {
        roots,
        leading_zeros: first,
        first_sample: core[0],
    })
}

/// PU-F: `arg S(w) = arg c_0 - w (L + D) + sum_k theta_k(w)`, where
/// `theta_k(w) = arg(exp(jw) - u_k)` is taken on the branch that is
/// continuous in `w`: `w + Arg(1 - u exp(-jw))` inside the circle and
/// `Arg(-u) + Arg(1 - exp(jw) / u)` outside it.
///
/// A root within `unit_circle_delta` of the circle is an error when it sits
/// under a bin with at least 1 % of the peak amplitude; elsewhere its bin is
/// flagged.
pub fn unwrap_factor(input: &UnwrapInput, factored: &FactoredTrace, cfg: &UnwrapConfig) -> Result<PhaseCurve> {
    let s = &input.spectrum;
    let nb = s.bins.len();
    let amp = s.amplitudes();
    let peak = s.max_amplitude();
    let mut flagged = Vec::new();
    for (i, u) in factored.roots.roots.iter().enumerate() {
        if (u.norm() - 1.0).abs() > cfg.unit_circle_delta {
            continue;
        }
        let k = ((u.arg().abs() / TAU * s.n_time as f64).round() as usize).min(nb - 1);
        if amp[k] >= 0.01 * peak {
            return Err(Error::RootOnUnitCircle {
                index: i,
                re: u.re,
                im: u.im,
                delta: cfg.unit_circle_delta,
            });
        }
        flagged.push(k);
    }
    flagged.sort_unstable();
    flagged.dedup();

    let omegas: Vec<f64> = (0..nb).map(|k| s.omega(k)).collect();
    let units: Vec<Complex64> = omegas.iter().map(|w| Complex64::from_polar(1.0, *w)).collect();
    let one = Complex64::new(1.0, 0.0);
    let mut sum = vec![0.0; nb];
    for u in &factored.roots.roots {
        if u.norm() < 1.0 {
            for k in 0..nb {
                sum[k] += omegas[k] + (one - u / units[k]).arg();
            }
        } else {
            let base = (-u).arg();
            let inv = u.inv();
            for k in 0..nb {
                sum[k] += base + (one - units[k] * inv).arg();
            }
        }
    }

    let lead_arg = if factored.first_sample < 0.0 { PI } else { 0.0 };
    let shift = (factored.leading_zeros + factored.degree()) as f64;
    let mut values: Vec<f64> = (0..nb).map(|k| lead_arg - omegas[k] * shift + sum[k]).collect();
    // start on the principal branch, like the wrapped-phase unwrappers
    let turns = TAU * ((values[0] - wrap_phase(values[0])) / TAU).round();
    values.iter_mut().for_each(|v| *v -= turns);
    Ok(PhaseCurve::unwrapped(values, input.mask.clone(), flagged))
}

/// Factors the trace and runs [`unwrap_factor`].
pub fn unwrap_factor_auto(input: &UnwrapInput, cfg: &UnwrapConfig) -> Result<PhaseCurve> {
    let factored = factor_trace(&input.trace, &cfg.roots)?;
    unwrap_factor(input, &factored, cfg)
}

pub fn unwrap(input: &UnwrapInput, method: Method, cfg: &UnwrapConfig) -> Result<PhaseCurve> {
    match method {
        Method::Jump => Ok(unwrap_jump(&input.wrapped())),
        Method::WPlane => Ok(unwrap_wplane(&input.wrapped())),
        Method::Factor => unwrap_factor_auto(input, cfg),
        Method::Stoffa => unwrap_stoffa(input),
    }
}

/// Constant phase and delay read off an unwrapped curve.
///
/// The model is `phi(f) = -phi0 - 2 pi f (tau - t_start)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearPhaseFit {
    /// Constant phase rotation in degrees, reduced to `(-180, 180]`.
    pub phi0_deg: f64,
    /// Delay relative to the trace's time origin.
    pub tau_s: f64,
    pub band: [f64; 2],
    pub residual_rms: f64,
    /// Raw regression intercept in radians (not reduced).
    pub intercept_rad: f64,
    /// Raw regression slope in rad/Hz.
    pub slope_rad_per_hz: f64,
    pub n_bins: usize,
}

/// Bins used by [`fit_linear_phase`]: trusted, amplitude at least 1 % of the
/// peak, not DC and not in the top tenth of the band.
pub fn fit_band(curve: &PhaseCurve, spectrum: &Spectrum) -> Vec<usize> {
    let amp = spectrum.amplitudes();
    let peak = amp.iter().copied().fold(0.0, f64::max);
    let nb = amp.len();
    let top = ((nb - 1) as f64 * 0.9).floor() as usize;
    let floor_mask = spectrum.floor_mask();
    (1..=top.min(nb - 1))
        .filter(|&k| curve.valid[k] && floor_mask[k] && amp[k] >= 0.01 * peak && curve.values[k].is_finite())
        .collect()
}

fn reduce_degrees(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

/// Amplitude-weighted least squares of `phi` against `[1, f]` over
/// [`fit_band`].
pub fn fit_linear_phase(curve: &PhaseCurve, spectrum: &Spectrum) -> Result<LinearPhaseFit> {
    if curve.len() != spectrum.bins.len() {
        return Err(Error::InvalidConfig("curve and spectrum lengths differ".into()));
    }
    let band = fit_band(curve, spectrum);
    if band.len() < MIN_FIT_BINS {
        return Err(Error::InsufficientBins {
            found: band.len(),
            needed: MIN_FIT_BINS,
        });
    }
    let (mut sw, mut sf, mut sp) = (0.0, 0.0, 0.0);
    for &k in &band {
        let w = spectrum.bins[k].norm();
        sw += w;
        sf += w * spectrum.frequency(k);
        sp += w * curve.values[k];
    }
    let fbar = sf / sw;
    let pbar = sp / sw;
    let (mut sff, mut sfp) = (0.0, 0.0);
    for &k in &band {
        let w = spectrum.bins[k].norm();
        let df = spectrum.frequency(k) - fbar;
        sff += w * df * df;
        sfp += w * df * (curve.values[k] - pbar);
    }
    let slope = sfp / sff;
    let intercept = pbar - slope * fbar;
    let rms = (band
        .iter()
        .map(|&k| {
            let r = curve.values[k] - (intercept + slope * spectrum.frequency(k));
            r * r
        })
        .sum::<f64>()
        / band.len() as f64)
        .sqrt();
    Ok(LinearPhaseFit {
        phi0_deg: reduce_degrees(-intercept.to_degrees()),
        tau_s: -slope / TAU + spectrum.t_start,
        band: [spectrum.frequency(band[0]), spectrum.frequency(*band.last().unwrap())],
        residual_rms: rms,
        intercept_rad: intercept,
        slope_rad_per_hz: slope,
        n_bins: band.len(),
    })
}

#[derive(Debug, Clone)]
pub struct UnwrapReport {
    pub method: Method,
    pub curve: PhaseCurve,
    pub fit: LinearPhaseFit,
    pub wall_time_s: f64,
}

/// Runs one method, timing the unwrapping itself (factoring included for
/// PU-F), then fits the curve.
pub fn run_method(input: &UnwrapInput, method: Method, cfg: &UnwrapConfig) -> Result<UnwrapReport> {
    let start = Instant::now();
    let curve = unwrap(input, method, cfg)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let fit = fit_linear_phase(&curve, &input.spectrum)?;
    Ok(UnwrapReport {
        method,
        curve,
        fit,
        wall_time_s,
    })
}

/// Wall time of `reps` runs after one discarded warm-up; returns the median.
pub fn time_method(input: &UnwrapInput, method: Method, cfg: &UnwrapConfig, reps: usize) -> Result<f64> {
    unwrap(input, method, cfg)?;
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let curve = unwrap(input, method, cfg)?;
        times.push(start.elapsed().as_secs_f64());
        std::hint::black_box(curve);
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = times.len();
    Ok(if m % 2 == 1 {
        times[m / 2]
    } else {
        0.5 * (times[m / 2 - 1] + times[m / 2])
    })
}

/// Largest `|wrap(a - b)|` over bins trusted in both curves, after removing
/// a common `2 pi` offset. Used to compare unwrappers.
pub fn max_disagreement(a: &PhaseCurve, b: &PhaseCurve, bins: &[usize]) -> f64 {
    if bins.is_empty() {
        return 0.0;
    }
    let k0 = bins[0];
    let offset = TAU * ((a.values[k0] - b.values[k0]) / TAU).round();
    bins.iter()
        .map(|&k| (a.values[k] - b.values[k] - offset).abs())
        .fold(0.0, f64::max)
}

/// Principal value of every entry; convenience for tests and reports.
pub fn rewrap_values(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| wrap_phase(*v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wrapped_of(values: &[f64]) -> PhaseCurve {
        PhaseCurve::wrapped(values.iter().map(|v| wrap_phase(*v)).collect(), vec![true; values.len()])
    }

    fn trace(samples: Vec<f64>, dt: f64) -> Trace {
        Trace::new(samples, dt, 0.0).unwrap()
    }

    #[test]
    fn method_labels_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.label().parse::<Method>().unwrap(), m);
        }
        assert_eq!(Method::parse_list("PU-M, pu-k,PU-M").unwrap(), vec![Method::Jump, Method::WPlane]);
        assert!("PU-X".parse::<Method>().is_err());
        assert!(Method::parse_list(" , ").is_err());
    }

    #[test]
    fn constant_phase_is_untouched() {
        let w = wrapped_of(&[0.7; 20]);
        assert_eq!(unwrap_jump(&w).values, w.values);
        assert_eq!(unwrap_wplane(&w).values, w.values);
    }

    #[test]
    fn jump_recovers_delay_line() {
        // line -2 pi f tau, tau = 90 ms, 1024 bins at 1/1.024 Hz spacing
        let df = 1.0 / 1.024;
        let line: Vec<f64> = (0..1024).map(|k| -TAU * k as f64 * df * 0.090).collect();
        let out = unwrap_jump(&wrapped_of(&line));
        for (a, b) in out.values.iter().zip(&line) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let out = unwrap_wplane(&wrapped_of(&line));
        for (a, b) in out.values.iter().zip(&line) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn jump_ties_are_not_corrected() {
        let w = PhaseCurve::wrapped(vec![-PI / 2.0, PI / 2.0, -PI / 2.0], vec![true; 3]);
        let out = unwrap_jump(&w);
        assert_eq!(out.wrap_counts.as_deref(), Some(&[0, 0, 0][..]));
        assert_eq!(out.flagged, vec![1, 2]);
    }

    #[test]
    fn wplane_antipodal_is_flagged() {
        let w = PhaseCurve::wrapped(vec![0.0, -PI, 0.0], vec![true; 3]);
        let out = unwrap_wplane(&w);
        assert_eq!(out.wrap_counts.as_deref(), Some(&[0, 0, 0][..]));
        assert_eq!(out.flagged, vec![1, 2]);
    }

    #[test]
    fn masked_bins_are_bridged() {
        // steps stay below pi/2 so the gap over the masked bin is below pi
        let line: Vec<f64> = (0..10).map(|k| -1.4 * k as f64).collect();
        let mut w = wrapped_of(&line);
        w.values[5] = 0.123;
        w.valid[5] = false;
        let out = unwrap_jump(&w);
        for k in (0..10).filter(|k| *k != 5) {
            assert!((out.values[k] - line[k]).abs() < 1e-12);
        }
        assert!(out.flagged.contains(&5));
        // masked bin still differs from its principal value by whole turns
        let n = (out.values[5] - 0.123) / TAU;
        assert!((n - n.round()).abs() < 1e-12);
        assert!((out.values[5] - out.values[4]).abs() <= PI);
    }

    #[test]
    fn stoffa_delay_spike_is_exact() {
        let n = 256;
        let dt = 2e-3;
        let k = 17;
        let mut s = vec![0.0; n];
        s[k] = 1.0;
        let input = UnwrapInput::new(trace(s, dt));
        let out = unwrap_stoffa(&input).unwrap();
        for (b, v) in out.values.iter().enumerate() {
            let expect = -TAU * input.spectrum.frequency(b) * k as f64 * dt;
            assert!((v - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn stoffa_zero_phase_is_zero() {
        let n = 128;
        let mut s = vec![0.0; n];
        s[0] = 1.0;
        for (i, a) in [0.6, 0.3, -0.1].iter().enumerate() {
            s[i + 1] = *a;
            s[n - 1 - i] = *a;
        }
        let input = UnwrapInput::new(trace(s, 1e-3));
        let out = unwrap_stoffa(&input).unwrap();
        assert!(out.values.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn factor_single_root_matches_dense_oracle() {
        let a = 0.6;
        let input = UnwrapInput::new(trace(vec![1.0, -a, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-3));
        let out = unwrap_factor_auto(&input, &UnwrapConfig::default()).unwrap();
        // oracle: principal-value tracking on a 64x denser grid
        let n = input.spectrum.n_time;
        let dense = 64 * n;
        let mut acc = 0.0;
        let mut prev = 0.0;
        let mut oracle = vec![0.0; n / 2 + 1];
        for m in 0..=dense / 2 {
            let w = TAU * m as f64 / dense as f64;
            let p = (a * w.sin()).atan2(1.0 - a * w.cos());
            if m > 0 {
                acc += wrap_phase(p - prev);
            } else {
                acc = p;
            }
            prev = p;
            if m % 64 == 0 {
                oracle[m / 64] = acc;
            }
        }
        for (k, v) in out.values.iter().enumerate() {
            assert!((v - oracle[k]).abs() < 1e-9, "bin {k}: {v} vs {}", oracle[k]);
        }
    }

    #[test]
    fn factor_symmetric_triplet_is_pure_delay() {
        let a = 0.3;
        let mut s = vec![0.0; 32];
        s[0] = a;
        s[1] = 1.0;
        s[2] = a;
        let input = UnwrapInput::new(trace(s, 1e-3));
        let out = unwrap_factor_auto(&input, &UnwrapConfig::default()).unwrap();
        for (k, v) in out.values.iter().enumerate() {
            let lin = input.spectrum.omega(k);
            assert!((v + lin).abs() < 1e-9, "bin {k}: {v}");
        }
    }

    #[test]
    fn factor_rejects_unit_circle_root() {
        // zeros on the circle halfway between bins 1 and 2
        let n = 16;
        let alpha = TAU * 1.5 / n as f64;
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        x[1] = -2.0 * alpha.cos();
        x[2] = 1.0;
        let input = UnwrapInput::new(trace(x, 1e-3));
        let err = unwrap_factor_auto(&input, &UnwrapConfig::default()).unwrap_err();
        assert!(matches!(err, Error::RootOnUnitCircle { .. }));

        // 1 + z^-1 vanishes at Nyquist, where nothing is trusted
        let input = UnwrapInput::new(trace(vec![1.0, 1.0, 0.0, 0.0], 1e-3));
        let out = unwrap_factor_auto(&input, &UnwrapConfig::default()).unwrap();
        assert_eq!(out.flagged, vec![2]);
    }

    #[test]
    fn factor_handles_leading_zeros() {
        let mut s = vec![0.0; 64];
        s[5] = 1.0;
        s[6] = 0.4;
        s[7] = -0.2;
        let input = UnwrapInput::new(trace(s, 1e-3));
        let out = unwrap_factor_auto(&input, &UnwrapConfig::default()).unwrap();
        let wrapped = input.wrapped();
        for k in 0..out.len() {
            let d = wrap_phase(out.values[k] - wrapped.values[k]);
            assert!(d.abs() < 1e-9);
        }
    }

    #[test]
    fn fit_exact_lines() {
        let n = 256;
        let dt = 1.024 / n as f64;
        let mut s = vec![0.0; n];
        s[0] = 1.0;
        let spec = spectral::dft(&trace(s, dt));
        let zero = PhaseCurve::unwrapped(vec![0.0; spec.bins.len()], vec![true; spec.bins.len()], vec![]);
        let fit = fit_linear_phase(&zero, &spec).unwrap();
        assert!(fit.phi0_deg.abs() < 1e-12 && fit.tau_s.abs() < 1e-12);

        let line: Vec<f64> = (0..spec.bins.len())
            .map(|k| -PI / 2.0 - TAU * spec.frequency(k) * 0.09)
            .collect();
        let curve = PhaseCurve::unwrapped(line, vec![true; spec.bins.len()], vec![]);
        let fit = fit_linear_phase(&curve, &spec).unwrap();
        assert!((fit.phi0_deg - 90.0).abs() < 1e-9);
        assert!((fit.tau_s - 0.09).abs() < 1e-9);
        assert!(fit.residual_rms < 1e-9);
    }

    #[test]
    fn fit_needs_enough_bins() {
        let mut s = vec![0.0; 16];
        s[0] = 1.0;
        let spec = spectral::dft(&trace(s, 1e-3));
        let curve = PhaseCurve::unwrapped(vec![0.0; 9], vec![true; 9], vec![]);
        assert!(matches!(fit_linear_phase(&curve, &spec), Err(Error::InsufficientBins { .. })));
    }

    #[test]
    fn report_carries_time() {
        let cfg = crate::synthkit::SynthConfig::default();
        let input = UnwrapInput::new(cfg.synthesize().unwrap());
        let rep = run_method(&input, Method::Jump, &UnwrapConfig::default()).unwrap();
        assert!(rep.wall_time_s > 0.0);
        assert_eq!(rep.curve.len(), input.spectrum.bins.len());
    }

    fn smooth_wrapped(seed: u64, n: usize) -> (Vec<f64>, PhaseCurve) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = rng.random_range(-PI..PI);
        let mut truth = Vec::with_capacity(n);
        for _ in 0..n {
            truth.push(acc);
            acc += rng.random_range(-PI + 0.1..PI - 0.1);
        }
        let w = wrapped_of(&truth);
        (truth, w)
    }

    proptest! {
        #[test]
        fn jump_and_wplane_agree_on_bounded_steps(seed in 0u64..10_000) {
            let (_, w) = smooth_wrapped(seed, 200);
            let a = unwrap_jump(&w);
            let b = unwrap_wplane(&w);
            prop_assert_eq!(a.wrap_counts, b.wrap_counts);
            prop_assert_eq!(a.values, b.values);
        }

        #[test]
        fn jump_output_is_continuous_and_congruent(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals: Vec<f64> = (0..100).map(|_| rng.random_range(-PI..PI)).collect();
            let w = PhaseCurve::wrapped(vals.clone(), vec![true; 100]);
            let out = unwrap_jump(&w);
            for k in 0..100 {
                let n = (out.values[k] - vals[k]) / TAU;
                prop_assert!((n - n.round()).abs() < 1e-9);
                if k > 0 {
                    prop_assert!((out.values[k] - out.values[k - 1]).abs() <= PI + 1e-9);
                }
            }
            prop_assert_eq!(out.rewrap(), vals);
        }
    }
}
