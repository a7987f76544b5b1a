//! Deterministic test-signal synthesis.
//!
//! Everything here is a pure function of its arguments. Stochastic pieces
//! (reflectivity, noise) draw from a ChaCha8 generator seeded with the caller's
//! seed, so the same `(arguments, seed)` always produces the same samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, Spectrum};

/// A uniformly sampled real time series.
///
/// Sample `i` sits at time `t_start + i * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    samples: Vec<f64>,
    dt: f64,
    t_start: f64,
}

impl Trace {
    pub fn new(samples: Vec<f64>, dt: f64, t_start: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidTrace(format!("dt must be positive, got {dt}")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidTrace("no samples".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTrace(format!("sample {i} is not finite")));
        }
        if !t_start.is_finite() {
            return Err(Error::InvalidTrace("t_start is not finite".into()));
        }
        Ok(Self {
            samples,
            dt,
            t_start,
        })
    }

    /// Internal constructor for samples produced by our own arithmetic.
    pub(crate) fn from_parts(samples: Vec<f64>, dt: f64, t_start: f64) -> Self {
        debug_assert!(dt > 0.0 && !samples.is_empty());
        Self {
            samples,
            dt,
            t_start,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }

    /// Same samples with the time axis re-referenced.
    pub fn with_t_start(mut self, t_start: f64) -> Self {
        self.t_start = t_start;
        self
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_parts(
            self.samples.iter().map(|v| v * c).collect(),
            self.dt,
            self.t_start,
        )
    }

    /// Zero-pads (or truncates) to exactly `n` samples.
    pub fn resized(&self, n: usize) -> Self {
        let mut s = self.samples.clone();
        s.resize(n, 0.0);
        Self::from_parts(s, self.dt, self.t_start)
    }

    /// Circular shift by an integer number of samples (positive delays).
    pub fn rotated(&self, k: isize) -> Self {
        let n = self.len() as isize;
        let k = k.rem_euclid(n) as usize;
        let mut s = self.samples.clone();
        s.rotate_right(k);
        Self::from_parts(s, self.dt, self.t_start)
    }

    pub fn index_of_peak(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.samples.iter().enumerate() {
            if v.abs() > self.samples[best].abs() {
                best = i;
            }
        }
        best
    }
}

/// Parameters of one synthetic rotated/shifted Ricker record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_samples: usize,
    /// Record length in seconds; `dt = total_length / n_samples`.
    pub total_length: f64,
    pub ricker_f0: f64,
    pub rotation_deg: f64,
    pub shift_s: f64,
    pub rng_seed: u64,
    /// `None` means noise-free.
    pub snr_db: Option<f64>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_samples: 1024,
            total_length: 1.024,
            ricker_f0: 30.0,
            rotation_deg: 90.0,
            shift_s: 0.090,
            rng_seed: 7,
            snr_db: None,
        }
    }
}

impl SynthConfig {
    pub fn dt(&self) -> f64 {
        self.total_length / self.n_samples as f64
    }

    pub fn nyquist(&self) -> f64 {
        self.n_samples as f64 / (2.0 * self.total_length)
    }

    /// Wavelet peak position before shifting: a quarter of the record.
    pub fn wavelet_center(&self) -> f64 {
        self.total_length / 4.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 16 {
            return Err(Error::InvalidConfig(format!(
                "n_samples must be at least 16, got {}",
                self.n_samples
            )));
        }
        if !(self.total_length > 0.0) || !self.total_length.is_finite() {
            return Err(Error::InvalidConfig("total_length must be positive".into()));
        }
        if !(self.ricker_f0 > 0.0) || self.ricker_f0 >= self.nyquist() {
            return Err(Error::InvalidConfig(format!(
                "ricker_f0 = {} Hz must lie in (0, {}) Hz",
                self.ricker_f0,
                self.nyquist()
            )));
        }
        if !self.rotation_deg.is_finite() || !self.shift_s.is_finite() {
            return Err(Error::InvalidConfig("rotation and shift must be finite".into()));
        }
        if self.shift_s.abs() >= (self.n_samples - 1) as f64 * self.dt() {
            return Err(Error::InvalidConfig("|shift_s| must be below the record duration".into()));
        }
        if let Some(snr) = self.snr_db {
            if snr.is_nan() {
                return Err(Error::InvalidConfig("snr_db is NaN".into()));
            }
        }
        Ok(())
    }

    /// The unshifted, unrotated wavelet with its time axis referenced to the
    /// wavelet peak (peak at t = 0).
    pub fn base_wavelet(&self) -> Result<Trace> {
        self.validate()?;
        let t0 = self.wavelet_center();
        Ok(ricker(self.ricker_f0, self.dt(), self.n_samples, t0)?.with_t_start(-t0))
    }

    /// Ricker, rotated by `rotation_deg`, delayed by `shift_s`, plus optional
    /// noise. The time origin sits on the unshifted wavelet peak, so a fitted
    /// delay reads directly as `shift_s`.
    pub fn synthesize(&self) -> Result<Trace> {
        let w = self.base_wavelet()?;
        let w = rotate_phase(&w, self.rotation_deg);
        let w = time_shift(&w, self.shift_s);
        match self.snr_db {
            Some(snr) => add_noise(&w, snr, self.rng_seed),
            None => Ok(w),
        }
    }
}

/// Sampled Ricker wavelet `(1 - 2 pi^2 f0^2 tau^2) exp(-pi^2 f0^2 tau^2)`,
/// `tau = t - t0`, on `t = i * dt`, `i in 0..n`.
pub fn ricker(f0: f64, dt: f64, n: usize, t0: f64) -> Result<Trace> {
    if !(dt > 0.0) || n == 0 {
        return Err(Error::InvalidConfig("ricker needs dt > 0 and n > 0".into()));
    }
    let nyquist = 1.0 / (2.0 * dt);
    if !(f0 > 0.0) || f0 >= nyquist {
        return Err(Error::InvalidConfig(format!(
            "ricker f0 = {f0} Hz must lie in (0, {nyquist}) Hz"
        )));
    }
    let duration = (n - 1) as f64 * dt;
    if !(0.0..=duration).contains(&t0) {
        return Err(Error::InvalidConfig(format!(
            "ricker t0 = {t0} s outside [0, {duration}] s"
        )));
    }
    // snap to the grid so the on-grid peak is exactly 1
    let mut offset = t0 / dt;
    if (offset - offset.round()).abs() < 1e-9 {
        offset = offset.round();
    }
    let a = PI * f0;
    let samples = (0..n)
        .map(|i| {
            let tau = (i as f64 - offset) * dt;
            let x = a * a * tau * tau;
            (1.0 - 2.0 * x) * (-x).exp()
        })
        .collect();
    Ok(Trace::from_parts(samples, dt, 0.0))
}

/// Constant-phase rotation: positive-frequency bins are multiplied by
/// `exp(-j phi)`. DC and Nyquist are real for a real signal and get `cos(phi)`,
/// which is what `x cos(phi) + H[x] sin(phi)` does there.
pub fn rotate_phase(x: &Trace, phi_deg: f64) -> Trace {
    let phi = phi_deg.to_radians();
    let factor = Complex64::from_polar(1.0, -phi);
    let mut s = spectral::dft(x);
    let n = x.len();
    let last = s.bins.len() - 1;
    for (k, b) in s.bins.iter_mut().enumerate() {
        if k == 0 || (n % 2 == 0 && k == last) {
            *b *= phi.cos();
        } else {
            *b *= factor;
        }
    }
    spectral::idft(&s)
}

/// Circular delay by `tau` seconds via the DFT shift theorem.
///
/// For integer `tau / dt` this is an exact index rotation. The Nyquist bin of
/// an even-length record keeps only the real part of its phase factor.
pub fn time_shift(x: &Trace, tau: f64) -> Trace {
    let mut s: Spectrum = spectral::dft(x);
    let n = x.len();
    let last = s.bins.len() - 1;
    let df = s.df;
    for (k, b) in s.bins.iter_mut().enumerate() {
        let arg = -2.0 * PI * k as f64 * df * tau;
        if n % 2 == 0 && k == last && k > 0 {
            *b *= arg.cos();
        } else {
            *b *= Complex64::from_polar(1.0, arg);
        }
    }
    spectral::idft(&s)
}

/// Sparse random reflectivity: each sample is a spike with probability
/// `spike_density`, spike amplitudes are standard normal.
pub fn gen_reflectivity(n: usize, spike_density: f64, dt: f64, seed: u64) -> Result<Trace> {
    if !(spike_density > 0.0 && spike_density <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "spike density must lie in (0, 1], got {spike_density}"
        )));
    }
    if n == 0 || !(dt > 0.0) {
        return Err(Error::InvalidConfig("reflectivity needs n > 0 and dt > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| {
            if rng.random::<f64>() < spike_density {
                loop {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    if a != 0.0 {
                        break a;
                    }
                }
            } else {
                0.0
            }
        })
        .collect();
    Ok(Trace::from_parts(samples, dt, 0.0))
}

/// Full linear convolution (length `len(w) + len(r) - 1`), computed through
/// zero-padded FFTs.
pub fn convolve(w: &Trace, r: &Trace) -> Result<Trace> {
    if (w.dt - r.dt).abs() > 1e-12 * w.dt.max(r.dt) {
        return Err(Error::DtMismatch(w.dt, r.dt));
    }
    let n = w.len() + r.len() - 1;
    let pad = |t: &Trace| -> Vec<Complex64> {
        let mut v: Vec<Complex64> = t.samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        v.resize(n, Complex64::new(0.0, 0.0));
        v
    };
    let mut a = pad(w);
    let mut b = pad(r);
    spectral::fft_in_place(&mut a, false);
    spectral::fft_in_place(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    spectral::fft_in_place(&mut a, true);
    let scale = 1.0 / n as f64;
    let samples = a.iter().map(|c| c.re * scale).collect();
    Ok(Trace::from_parts(samples, w.dt, w.t_start + r.t_start))
}

/// Adds white Gaussian noise at `snr_db` relative to the mean signal power.
/// An infinite SNR returns the input unchanged.
pub fn add_noise(x: &Trace, snr_db: f64, seed: u64) -> Result<Trace> {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return Ok(x.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidConfig(format!("snr_db = {snr_db}")));
    }
    let p_sig = x.energy() / x.len() as f64;
    if p_sig == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let sigma = (p_sig / 10f64.powf(snr_db / 10.0)).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = x.samples.iter().map(|v| v + normal.sample(&mut rng)).collect();
    Ok(Trace::from_parts(samples, x.dt, x.t_start))
}
