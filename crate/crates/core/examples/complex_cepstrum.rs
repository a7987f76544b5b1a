//! Complex cepstrum of a wavelet, a spike series and their convolution.
//! The cepstrum of the convolution should equal the sum of the other two.
//!
//! cargo run --example complex_cepstrum

use homomorphic::spectral;
use homomorphic::synthkit::{self, Trace};
use homomorphic::Method;

fn main() -> homomorphic::Result<()> {
    let dt = 1e-3;
    let n = 128;
    let w = Trace::new(vec![1.0, -0.6, 0.2, 0.05], dt, 0.0)?.resized(n);
    let mut r = vec![0.0; n];
    r[0] = 1.0;
    r[9] = -0.5;
    r[23] = 0.3;
    let r = Trace::new(r, dt, 0.0)?;
    let y = synthkit::convolve(&w, &r)?.resized(n);

    let cw = spectral::cepstrum(&w, Method::WPlane)?;
    let cr = spectral::cepstrum(&r, Method::WPlane)?;
    let cy = spectral::cepstrum(&y, Method::WPlane)?;

    let mut worst: f64 = 0.0;
    for i in 0..n {
        worst = worst.max((cy.values[i] - cw.values[i] - cr.values[i]).abs());
    }
    println!("delays removed: w {} r {} y {}", cw.delay_samples, cr.delay_samples, cy.delay_samples);
    println!("max additivity error {worst:.2e}");
    for i in 0..8 {
        println!("q={:5.1} ms  c_w {:9.5}  c_r {:9.5}", cw.quefrency(i) * 1e3, cw.values[i], cr.values[i]);
    }

    let back = spectral::inverse_cepstrum(&cy);
    let err = back
        .samples()
        .iter()
        .zip(y.samples())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("round trip error {err:.2e}");
    Ok(())
}
