//! Homomorphic wavelet estimation and one-dimensional phase unwrapping.
//!
//! The crate is organised bottom-up:
//!
//! * [`synthkit`] builds deterministic test signals (Ricker wavelets, constant
//!   phase rotation, circular time shifts, sparse reflectivity, noise).
//! * [`spectral`] holds the half-band DFT contract, principal-value phase, the
//!   complex log spectrum and the complex cepstrum.
//! * [`unwrap`] implements four unwrappers (jump correction, w-plane crossing
//!   detection, root factorization and phase-derivative integration) plus the
//!   constant-phase / delay fit used to score them.
//! * [`rootfind`] factors the high-degree polynomials the root-factorization
//!   unwrapper needs.
//! * [`waveletest`] averages log spectra over a gather to estimate a shared
//!   wavelet.
//! * [`bench`] drives the benchmark scenarios and writes CSV / JSON results.

pub mod bench;
pub mod error;
pub mod rootfind;
pub mod spectral;
pub mod synthkit;
pub mod unwrap;
pub mod waveletest;

pub use error::{Error, Result};
pub use spectral::{Cepstrum, PhaseCurve, PhaseKind, Spectrum};
pub use synthkit::{SynthConfig, Trace};
pub use unwrap::{LinearPhaseFit, Method, UnwrapReport};
