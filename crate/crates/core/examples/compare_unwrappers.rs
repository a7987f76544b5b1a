//! Unwraps the default record with all four methods and prints the fitted
//! rotation and delay for each, plus how far the curves drift apart.
//!
//! cargo run --release --example compare_unwrappers [n_samples]

use homomorphic::unwrap::{self, UnwrapConfig, UnwrapInput};
use homomorphic::{Method, SynthConfig};

fn main() -> homomorphic::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(512);
    let synth = SynthConfig {
        n_samples: n,
        ..SynthConfig::default()
    };
    let input = UnwrapInput::new(synth.synthesize()?);
    let cfg = UnwrapConfig::default();

    let mut reports = Vec::new();
    for m in Method::ALL {
        match unwrap::run_method(&input, m, &cfg) {
            Ok(r) => {
                println!(
                    "{:5} phi0 {:8.3} deg  tau {:7.3} ms  rms {:.2e}  {:.2e} s",
                    m.label(),
                    r.fit.phi0_deg,
                    r.fit.tau_s * 1e3,
                    r.fit.residual_rms,
                    r.wall_time_s
                );
                reports.push(r);
            }
            Err(e) => println!("{:5} failed: {e}", m.label()),
        }
    }

    let band = unwrap::fit_band(&reports[0].curve, &input.spectrum);
    for r in &reports[1..] {
        let d = unwrap::max_disagreement(&reports[0].curve, &r.curve, &band);
        println!("max |{} - {}| over fit band: {d:.3e} rad", reports[0].method, r.method);
    }
    Ok(())
}
