//! Singular-square partition for several thresholds: the measure of the
//! squares where |s|, |tr Gamma| or |det Gamma| exceeds eps0.
//!
//! cargo run --release --example singular_set -- 1105

use arw::arithmetic::enumerate_lattice_set;
use arw::kacrice::singular_partition;

fn main() -> arw::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1105);
    let set = enumerate_lattice_set(n)?;
    for eps0 in [0.1, 0.3, 0.5, 1.0, 2.0, f64::INFINITY] {
        let p = singular_partition(&set, 0.25, eps0, 3)?;
        println!(
            "n = {n}, N = {}, eps0 = {eps0}: K = {}, singular measure = {:.4}",
            set.size(),
            p.k,
            p.measure
        );
    }
    Ok(())
}
