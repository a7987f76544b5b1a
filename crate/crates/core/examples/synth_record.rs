//! Builds the rotated, delayed Ricker record and prints its wrapped phase
//! next to the ideal linear phase.
//!
//! cargo run --example synth_record

use homomorphic::spectral;
use homomorphic::SynthConfig;
use std::f64::consts::TAU;

fn main() -> homomorphic::Result<()> {
    let cfg = SynthConfig {
        n_samples: 256,
        ..SynthConfig::default()
    };
    let trace = cfg.synthesize()?;
    println!(
        "n={} dt={:.2} ms t_start={:.1} ms peak at {:.1} ms",
        trace.len(),
        trace.dt() * 1e3,
        trace.t_start() * 1e3,
        trace.time(trace.index_of_peak()) * 1e3
    );

    let s = spectral::dft(&trace);
    let wrapped = spectral::wrapped_phase(&s);
    let rot = cfg.rotation_deg.to_radians();
    println!("{:>8} {:>10} {:>10} {:>10}", "f_hz", "amp", "wrapped", "ideal");
    for k in (0..s.bins.len()).step_by(8) {
        let f = s.frequency(k);
        let ideal = -rot - TAU * f * (cfg.shift_s - trace.t_start());
        println!("{f:8.2} {:10.4} {:10.4} {:10.4}", s.bins[k].norm(), wrapped.values[k], ideal);
    }
    Ok(())
}
