//! Factors a trace polynomial, rebuilds it from its roots and reports how
//! many roots sit inside the unit circle.
//!
//! cargo run --release --example polynomial_roots [degree]

use homomorphic::rootfind::{self, RootConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> homomorphic::Result<()> {
    let degree = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(255);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let coeffs: Vec<f64> = (0..=degree).map(|_| StandardNormal.sample(&mut rng)).collect();

    let t = std::time::Instant::now();
    let set = rootfind::factor_polynomial(&coeffs, &RootConfig::default())?;
    let elapsed = t.elapsed().as_secs_f64();

    let inside = set.roots.iter().filter(|z| z.norm() < 1.0).count();
    let rebuilt = rootfind::expand_roots(set.leading_coeff.re, &set.roots);
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let err = coeffs
        .iter()
        .zip(&rebuilt)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    println!("degree {degree}: {} iterations, {elapsed:.3} s", set.iterations);
    println!("{inside} roots inside |z| = 1, {} outside", set.degree - inside);
    println!("max scaled residual {:.2e}", set.max_residual);
    println!("coefficient reconstruction error {err:.2e}");
    Ok(())
}
