//! Reproduces the rotation / delay table for the default record at three
//! lengths and writes it to a directory.
//!
//! cargo run --release --example table1 [out_dir]

use homomorphic::bench::{self, BenchConfig};

fn main() -> homomorphic::Result<()> {
    let mut cfg = BenchConfig::default();
    if let Some(dir) = std::env::args().nth(1) {
        cfg.out_dir = dir.into();
    }
    for row in bench::table1_rows(&cfg)? {
        print!("n={:5}", row.n_samples);
        for m in &row.methods {
            match (m.phi0_deg, m.tau_ms) {
                (Some(p), Some(t)) => print!("  {} {p:8.3} deg {t:7.3} ms", m.method),
                _ => print!("  {} failed", m.method),
            }
        }
        println!();
    }
    for p in bench::cmd_table1(&cfg)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
