//! Half-band DFT, principal-value phase, complex log spectrum and complex
//! cepstrum.
//!
//! Transform convention: forward `X[k] = sum_n x[n] exp(-j 2 pi k n / N)`
//! with no scaling, inverse carries `1/N`. Only bins `0..=N/2` are stored;
//! the negative-frequency half is implied by Hermitian symmetry.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::synthkit::Trace;
use crate::unwrap::{self, Method, UnwrapConfig, UnwrapInput};

/// Bins whose amplitude is below `AMPLITUDE_FLOOR * max|S|` are masked.
pub const AMPLITUDE_FLOOR: f64 = 1e-12;

pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

/// Complex spectrum of a real trace on `[0, Nyquist]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<Complex64>,
    /// Hz per bin, `1 / (n_time * dt)`.
    pub df: f64,
    pub n_time: usize,
    pub dt: f64,
    /// Time of the first sample of the originating trace.
    pub t_start: f64,
}

impl Spectrum {
    pub fn frequency(&self, k: usize) -> f64 {
        k as f64 * self.df
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.bins.len()).map(|k| self.frequency(k)).collect()
    }

    /// Angular frequency of bin `k` in radians per sample.
    pub fn omega(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_time as f64
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.norm()).collect()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.bins.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }

    /// `true` where the amplitude clears the relative floor.
    pub fn floor_mask(&self) -> Vec<bool> {
        let floor = AMPLITUDE_FLOOR * self.max_amplitude();
        self.bins.iter().map(|b| floor > 0.0 && b.norm() >= floor).collect()
    }

    /// Energy of the full two-sided spectrum, `sum_k |X[k]|^2` over `0..N`.
    pub fn full_band_energy(&self) -> f64 {
        let n = self.n_time;
        self.bins
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let e = b.norm_sqr();
                if k == 0 || (n % 2 == 0 && k == n / 2) {
                    e
                } else {
                    2.0 * e
                }
            })
            .sum()
    }

    /// Expands to all `N` bins using Hermitian symmetry.
    pub fn to_full(&self) -> Vec<Complex64> {
        hermitian_full(&self.bins, self.n_time)
    }
}

fn hermitian_full(half: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| if k < half.len() { half[k] } else { half[n - k].conj() })
        .collect()
}

pub fn dft(x: &Trace) -> Spectrum {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    buf.truncate(n / 2 + 1);
    // a real input has real DC and Nyquist bins
    buf[0].im = 0.0;
    if n % 2 == 0 && n > 1 {
        buf[n / 2].im = 0.0;
    }
    Spectrum {
        bins: buf,
        df: 1.0 / (n as f64 * x.dt()),
        n_time: n,
        dt: x.dt(),
        t_start: x.t_start(),
    }
}

/// Inverse of [`dft`]; imaginary parts of DC and Nyquist are ignored.
pub fn idft(s: &Spectrum) -> Trace {
    let n = s.n_time;
    let samples = real_ifft(&s.bins, n);
    Trace::from_parts(samples, s.dt, s.t_start)
}

fn real_ifft(half: &[Complex64], n: usize) -> Vec<f64> {
    let mut full = hermitian_full(half, n);
    fft_in_place(&mut full, true);
    let scale = 1.0 / n as f64;
    full.iter().map(|c| c.re * scale).collect()
}

/// Principal value in `[-pi, pi)`: the negative real axis maps to `-pi`.
pub fn principal_value(z: Complex64) -> f64 {
    let p = z.im.atan2(z.re);
    if p >= PI {
        -PI
    } else {
        p
    }
}

/// Wraps any real angle into `[-pi, pi)`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut r = (x + PI).rem_euclid(TAU) - PI;
    if r >= PI {
        r -= TAU;
    }
    if r < -PI {
        r = -PI;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    Wrapped,
    Unwrapped,
}

/// Per-bin phase aligned with a [`Spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    pub values: Vec<f64>,
    pub kind: PhaseKind,
    /// `n(f)` such that `values = principal + 2 pi n`, when the unwrapper
    /// works by counting wraps.
    pub wrap_counts: Option<Vec<i64>>,
    /// Principal values the counts apply to.
    pub principal: Option<Vec<f64>>,
    /// `false` on bins below the amplitude floor.
    pub valid: Vec<bool>,
    /// Bins whose value involved a tie-break, a bridged masked span, or a
    /// clamped derivative.
    pub flagged: Vec<usize>,
}

impl PhaseCurve {
    pub fn wrapped(values: Vec<f64>, valid: Vec<bool>) -> Self {
        debug_assert_eq!(values.len(), valid.len());
        Self {
            values,
            kind: PhaseKind::Wrapped,
            wrap_counts: None,
            principal: None,
            valid,
            flagged: Vec::new(),
        }
    }

    /// Unwrapped curve built from principal values and integer counts.
    pub fn from_counts(principal: Vec<f64>, counts: Vec<i64>, valid: Vec<bool>, flagged: Vec<usize>) -> Self {
        let values = principal
            .iter()
            .zip(&counts)
            .map(|(p, n)| p + TAU * *n as f64)
            .collect();
        Self {
            values,
            kind: PhaseKind::Unwrapped,
            wrap_counts: Some(counts),
            principal: Some(principal),
            valid,
            flagged,
        }
    }

    pub fn unwrapped(values: Vec<f64>, valid: Vec<bool>, flagged: Vec<usize>) -> Self {
        Self {
            values,
            kind: PhaseKind::Unwrapped,
            wrap_counts: None,
            principal: None,
            valid,
            flagged,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Back to principal values. Count-based curves return the exact
    /// principal values they were built from.
    pub fn rewrap(&self) -> Vec<f64> {
        match (&self.principal, self.kind) {
            (_, PhaseKind::Wrapped) => self.values.clone(),
            (Some(p), _) => p.clone(),
            (None, _) => self.values.iter().map(|v| wrap_phase(*v)).collect(),
        }
    }
}

/// Principal-value phase of every bin, with floored bins marked invalid.
pub fn wrapped_phase(s: &Spectrum) -> PhaseCurve {
    let values = s.bins.iter().map(|b| principal_value(*b)).collect();
    PhaseCurve::wrapped(values, s.floor_mask())
}

/// `ln|S| + j arg S`, with the amplitude floored at `AMPLITUDE_FLOOR * max|S|`.
pub fn log_spectrum(s: &Spectrum, phase: &PhaseCurve) -> Result<Vec<Complex64>> {
    let max = s.max_amplitude();
    if max == 0.0 {
        return Err(Error::ZeroSignal);
    }
    if phase.len() != s.bins.len() {
        return Err(Error::InvalidConfig(format!(
            "phase curve has {} bins, spectrum has {}",
            phase.len(),
            s.bins.len()
        )));
    }
    let floor = AMPLITUDE_FLOOR * max;
    Ok(s.bins
        .iter()
        .zip(&phase.values)
        .map(|(b, p)| Complex64::new(b.norm().max(floor).ln(), *p))
        .collect())
}

/// Complex cepstrum of a real sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Cepstrum {
    /// Quefrency samples; index `i >= N/2` stands for negative quefrency `i - N`.
    pub values: Vec<f64>,
    /// Seconds per quefrency bin (the trace's `dt`).
    pub dq: f64,
    /// Integer delay (samples) removed as linear phase before the inverse
    /// transform; the removed slope is `-2 pi delay dt` rad/Hz.
    pub delay_samples: i64,
    /// -1 when the input was negated to make `S(0)` non-negative.
    pub polarity: f64,
    pub t_start: f64,
}

impl Cepstrum {
    pub fn n_time(&self) -> usize {
        self.values.len()
    }

    pub fn removed_slope_rad_per_hz(&self) -> f64 {
        -TAU * self.delay_samples as f64 * self.dq
    }

    /// Signed quefrency of index `i` in seconds.
    pub fn quefrency(&self, i: usize) -> f64 {
        let n = self.values.len();
        let idx = if i < n.div_ceil(2) { i as f64 } else { i as f64 - n as f64 };
        idx * self.dq
    }

    /// Fraction of `sum c^2` at `|quefrency| <= half_width` bins.
    pub fn energy_fraction_within(&self, half_width: usize) -> f64 {
        let n = self.values.len();
        let total: f64 = self.values.iter().map(|v| v * v).sum();
        if total == 0.0 {
            return 1.0;
        }
        let inner: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let d = (*i).min(n - *i);
                d <= half_width
            })
            .map(|(_, v)| v * v)
            .sum();
        inner / total
    }
}

/// Removes the integer linear phase that brings the last bin's phase to zero
/// and the 2 pi multiple at DC. Returns the delay in samples.
pub(crate) fn remove_integer_linear_phase(phase: &mut [f64], n_time: usize) -> i64 {
    let last = phase.len() - 1;
    let mut delay = 0i64;
    if last > 0 {
        let w_last = TAU * last as f64 / n_time as f64;
        delay = (-phase[last] / w_last).round() as i64;
        for (k, p) in phase.iter_mut().enumerate() {
            *p += TAU * k as f64 / n_time as f64 * delay as f64;
        }
    }
    let dc = (phase[0] / TAU).round();
    if dc != 0.0 {
        for p in phase.iter_mut() {
            *p -= TAU * dc;
        }
    }
    delay
}

/// Complex cepstrum `IDFT{ln|S| + j arg S}` with the phase unwrapped by `method`.
///
/// Before the inverse transform the input is negated if `S(0) < 0` and the
/// integer-sample linear phase that zeroes the Nyquist-bin phase is removed;
/// both are recorded so [`inverse_cepstrum`] can restore them.
pub fn cepstrum(x: &Trace, method: Method) -> Result<Cepstrum> {
    cepstrum_with(x, method, &UnwrapConfig::default())
}

pub fn cepstrum_with(x: &Trace, method: Method, cfg: &UnwrapConfig) -> Result<Cepstrum> {
    let mut s = dft(x);
    if s.max_amplitude() == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let polarity = if s.bins[0].re < 0.0 { -1.0 } else { 1.0 };
    let x = if polarity < 0.0 { x.scaled(-1.0) } else { x.clone() };
    if polarity < 0.0 {
        for b in s.bins.iter_mut() {
            *b = -*b;
        }
    }
    let input = UnwrapInput::with_spectrum(x, s.clone());
    let mut curve = unwrap::unwrap(&input, method, cfg)?;
    let delay = remove_integer_linear_phase(&mut curve.values, s.n_time);
    let log = log_spectrum(&s, &curve)?;
    let values = real_ifft(&log, s.n_time);
    Ok(Cepstrum {
        values,
        dq: s.dt,
        delay_samples: delay,
        polarity,
        t_start: s.t_start,
    })
}

/// Rebuilds the time series from its complex cepstrum, reapplying the
/// recorded linear phase and polarity.
pub fn inverse_cepstrum(c: &Cepstrum) -> Trace {
    let n = c.values.len();
    let mut buf: Vec<Complex64> = c.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    buf.truncate(n / 2 + 1);
    for (k, b) in buf.iter_mut().enumerate() {
        let lin = -TAU * k as f64 / n as f64 * c.delay_samples as f64;
        *b = (*b + Complex64::new(0.0, lin)).exp() * c.polarity;
    }
    let samples = real_ifft(&buf, n);
    Trace::from_parts(samples, c.dq, c.t_start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthkit::{convolve, gen_reflectivity, ricker};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_dft(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..=n / 2)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (i, v)| {
                    let a = -TAU * ((k * i) % n) as f64 / n as f64;
                    acc + Complex64::from_polar(*v, a)
                })
            })
            .collect()
    }

    fn random_trace(n: usize, seed: u64) -> Trace {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Trace::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect(), 1e-3, 0.0).unwrap()
    }

    fn spike(n: usize, at: usize) -> Trace {
        let mut s = vec![0.0; n];
        s[at] = 1.0;
        Trace::new(s, 1e-3, 0.0).unwrap()
    }

    #[test]
    fn dft_of_unit_spike_is_flat() {
        let s = dft(&spike(16, 0));
        assert_eq!(s.bins.len(), 9);
        for b in &s.bins {
            assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dft_of_on_grid_cosine_hits_one_bin() {
        let n = 64;
        let x: Vec<f64> = (0..n).map(|i| (TAU * 5.0 * i as f64 / n as f64).cos()).collect();
        let s = dft(&Trace::new(x, 1e-3, 0.0).unwrap());
        for (k, b) in s.bins.iter().enumerate() {
            if k == 5 {
                assert!((b.norm() - 32.0).abs() < 1e-10);
            } else {
                assert!(b.norm() < 1e-10, "bin {k}: {}", b.norm());
            }
        }
    }

    #[test]
    fn dft_matches_naive_oracle() {
        let x = random_trace(128, 1);
        let fast = dft(&x);
        let slow = naive_dft(x.samples());
        for (a, b) in fast.bins.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!((fast.df - 1.0 / 0.128).abs() < 1e-9);
    }

    #[test]
    fn idft_round_trip_and_parseval() {
        for n in [127, 128] {
            let x = random_trace(n, n as u64);
            let s = dft(&x);
            let y = idft(&s);
            for (a, b) in x.samples().iter().zip(y.samples()) {
                assert!((a - b).abs() < 1e-10);
            }
            let e_time = x.energy();
            let e_freq = s.full_band_energy() / n as f64;
            assert!((e_time - e_freq).abs() < 1e-9 * e_time);
        }
    }

    #[test]
    fn wrapped_phase_conventions() {
        let s = Spectrum {
            bins: vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(-1.0, -0.0),
                Complex64::new(0.0, 1.0),
            ],
            df: 1.0,
            n_time: 6,
            dt: 1.0 / 6.0,
            t_start: 0.0,
        };
        let p = wrapped_phase(&s);
        assert_eq!(p.values[0], 0.0);
        assert_eq!(p.values[1], -PI);
        assert_eq!(p.values[2], -PI);
        assert!((p.values[3] - PI / 2.0).abs() < 1e-15);
        assert!(p.valid.iter().all(|v| *v));
    }

    #[test]
    fn wrapped_phase_masks_floor() {
        let mut x = vec![0.0; 64];
        x[0] = 1.0;
        x[1] = 1.0; // zero at Nyquist
        let p = wrapped_phase(&dft(&Trace::new(x, 1e-3, 0.0).unwrap()));
        assert!(!p.valid[32]);
        assert!(p.valid[..32].iter().all(|v| *v));
    }

    #[test]
    fn shifted_ricker_jump_count() {
        // oracle: jumps of the principal value of the analytic line
        let tau = 0.090;
        let w = ricker(30.0, 1e-3, 1024, 0.0 + 0.256).unwrap().with_t_start(-0.256);
        let w = crate::synthkit::time_shift(&w, tau);
        let s = dft(&w);
        let p = wrapped_phase(&s);
        let f_max = 100.0;
        let kmax = (f_max / s.df) as usize;
        let jumps = (1..=kmax)
            .filter(|&k| (p.values[k] - p.values[k - 1]).abs() > PI)
            .count();
        // one jump per cycle of a line with slope 2*pi*0.346 rad/Hz
        let expected = (s.frequency(kmax) * 0.346).floor() as i64;
        assert!((jumps as i64 - expected).abs() <= 1, "{jumps} vs {expected}");
    }

    #[test]
    fn log_spectrum_basics() {
        let s = dft(&spike(8, 0));
        let p = PhaseCurve::unwrapped(vec![0.0; 5], vec![true; 5], vec![]);
        let l = log_spectrum(&s, &p).unwrap();
        assert!(l.iter().all(|c| c.norm() < 1e-15));

        let mut s2 = s.clone();
        s2.bins[2] = Complex64::new(std::f64::consts::E, 0.0);
        let l2 = log_spectrum(&s2, &p).unwrap();
        assert_eq!(l2[2].re, 1.0);

        let zero = dft(&Trace::new(vec![0.0; 8], 1e-3, 0.0).unwrap());
        assert_eq!(log_spectrum(&zero, &p), Err(Error::ZeroSignal));
    }

    #[test]
    fn log_spectrum_is_additive_over_products() {
        let w = random_trace(16, 3).resized(128);
        let r = random_trace(16, 4).resized(128);
        let s = convolve(&w, &r).unwrap().resized(128);
        let cw = dft(&w);
        let cr = dft(&r);
        let cs = dft(&s);
        let uw = unwrap::unwrap_factor_auto(&UnwrapInput::new(w), &UnwrapConfig::default()).unwrap();
        let ur = unwrap::unwrap_factor_auto(&UnwrapInput::new(r), &UnwrapConfig::default()).unwrap();
        let us = unwrap::unwrap_factor_auto(&UnwrapInput::new(s), &UnwrapConfig::default()).unwrap();
        let lw = log_spectrum(&cw, &uw).unwrap();
        let lr = log_spectrum(&cr, &ur).unwrap();
        let ls = log_spectrum(&cs, &us).unwrap();
        // phases add up to a constant whole number of turns
        let turns = TAU * ((ls[0] - lw[0] - lr[0]).im / TAU).round();
        for k in 0..ls.len() {
            let d = ls[k] - lw[k] - lr[k] - Complex64::new(0.0, turns);
            assert!(d.norm() < 1e-8, "bin {k}: {d}");
        }
    }

    #[test]
    fn cepstrum_of_spikes_vanishes() {
        let c = cepstrum(&spike(64, 0), Method::Jump).unwrap();
        assert!(c.values.iter().all(|v| v.abs() < 1e-12));
        for k in [1, 5, 20] {
            let c = cepstrum(&spike(64, k), Method::Jump).unwrap();
            assert_eq!(c.delay_samples, k as i64);
            assert!(c.values.iter().all(|v| v.abs() < 1e-8));
        }
    }

    #[test]
    fn cepstrum_rejects_zero() {
        let z = Trace::new(vec![0.0; 8], 1e-3, 0.0).unwrap();
        assert_eq!(cepstrum(&z, Method::Jump), Err(Error::ZeroSignal));
    }

    #[test]
    fn inverse_of_zero_cepstrum_is_spike() {
        let c = Cepstrum {
            values: vec![0.0; 32],
            dq: 1e-3,
            delay_samples: 0,
            polarity: 1.0,
            t_start: 0.0,
        };
        let x = inverse_cepstrum(&c);
        assert!((x.samples()[0] - 1.0).abs() < 1e-14);
        assert!(x.samples()[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn ricker_cepstrum_round_trip() {
        let w = ricker(30.0, 1e-3, 1024, 0.512).unwrap();
        let c = cepstrum(&w, Method::Jump).unwrap();
        let back = inverse_cepstrum(&c);
        let err = w
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max error {err}");

        let shifted = crate::synthkit::time_shift(&w, 0.060);
        let c = cepstrum(&shifted, Method::WPlane).unwrap();
        let back = inverse_cepstrum(&c);
        assert_eq!(back.index_of_peak(), 572);
    }

    #[test]
    fn negative_dc_is_tracked_by_polarity() {
        let x = Trace::new(vec![-1.0, 0.3, -0.2, 0.1, 0.0, 0.0, 0.0, 0.0], 1e-3, 0.0).unwrap();
        let c = cepstrum(&x, Method::Jump).unwrap();
        assert_eq!(c.polarity, -1.0);
        let y = inverse_cepstrum(&c);
        for (a, b) in x.samples().iter().zip(y.samples()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn wavelet_cepstrum_concentrates_near_origin() {
        let n = 1024;
        let w = ricker(30.0, 1e-3, n, 0.1).unwrap();
        let r = gen_reflectivity(n, 0.1, 1e-3, 5).unwrap();
        let cw = cepstrum(&w, Method::Jump).unwrap();
        let cr = cepstrum(&r, Method::Jump).unwrap();
        let (fw, fr) = (cw.energy_fraction_within(16), cr.energy_fraction_within(16));
        assert!(fw >= 0.8 && fw > fr, "{fw} vs {fr}");
    }

    proptest! {
        #[test]
        fn principal_value_in_range(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let p = principal_value(Complex64::new(re, im));
            prop_assert!((-PI..PI).contains(&p));
        }

        #[test]
        fn wrap_phase_in_range_and_congruent(x in -1e4f64..1e4) {
            let w = wrap_phase(x);
            prop_assert!((-PI..PI).contains(&w));
            let k = ((x - w) / TAU).round();
            prop_assert!((x - w - k * TAU).abs() < 1e-9);
        }
    }
}
