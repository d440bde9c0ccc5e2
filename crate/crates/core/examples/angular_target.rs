//! Search for n whose fourth angular coefficient is close to a target, for
//! example the surplus regime `nu4 < -1/4`.
//!
//! cargo run --example angular_target -- -0.8 0.1 20000

use arw::arithmetic::{angular_stats, enumerate_lattice_set, find_angular_target};
use arw::kacrice::correction_term;

fn main() -> arw::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let target = args.first().copied().unwrap_or(-0.8);
    let tol = args.get(1).copied().unwrap_or(0.1);
    let n_max = args.get(2).copied().unwrap_or(20_000.0) as u64;
    let hits = find_angular_target(target, tol, n_max)?;
    println!(
        "{} values of n <= {n_max} with |nu4 - {target}| <= {tol}",
        hits.len()
    );
    for &n in hits.iter().take(10) {
        let set = enumerate_lattice_set(n)?;
        let c = correction_term(&set);
        println!(
            "  n = {n:>6}  N = {:>3}  nu4 = {:+.4}  C_n N = {:+.4}",
            set.size(),
            angular_stats(&set).nu4,
            c * set.size() as f64
        );
    }
    Ok(())
}
