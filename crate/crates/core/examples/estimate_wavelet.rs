//! Estimates a Ricker wavelet from a gather of synthetic traces by averaging
//! their log spectra, then compares it with the true wavelet.
//!
//! cargo run --release --example estimate_wavelet [snr_db]

use homomorphic::unwrap::UnwrapConfig;
use homomorphic::waveletest::{self, GatherConfig};
use homomorphic::Method;

fn main() -> homomorphic::Result<()> {
    let snr_db = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let gc = GatherConfig {
        snr_db,
        ..GatherConfig::default()
    };
    let (gather, truth) = gc.build()?;
    let support = 3.0 / gc.ricker_f0;
    let cfg = UnwrapConfig::default();

    for m in [Method::Jump, Method::WPlane, Method::Stoffa] {
        let est = waveletest::estimate_wavelet(&gather, m, support, &cfg)?;
        let rho = waveletest::max_normalized_xcorr(est.wavelet.samples(), truth.samples());
        println!(
            "{:5} correlation {rho:.4} from {} traces ({} failed)",
            m.label(),
            est.n_traces_used,
            est.failed_trace_ids.len()
        );
    }
    Ok(())
}
