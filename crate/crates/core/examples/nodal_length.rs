//! Monte Carlo nodal length by marching squares for both ensembles, against
//! the torus mean pi sqrt(n) / sqrt 2 and the Kac-Rice total.
//!
//! cargo run --release --example nodal_length -- 65 100

use std::f64::consts::{PI, SQRT_2};

use arw::arithmetic::enumerate_lattice_set;
use arw::field::FieldKind;
use arw::kacrice::{kac_rice_expected_length, KacRiceParams};
use arw::nodal::monte_carlo_expected_length;

fn main() -> arw::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let n = args.first().copied().unwrap_or(65) as u64;
    let trials = args.get(1).copied().unwrap_or(100);
    let set = enumerate_lattice_set(n)?;
    let torus = monte_carlo_expected_length(FieldKind::Torus, &set, trials, 40.0, 1)?;
    println!(
        "torus: {:.4} +- {:.4} (exact {:.4})",
        torus.mean,
        torus.stderr,
        PI * (n as f64).sqrt() / SQRT_2
    );
    let square = monte_carlo_expected_length(FieldKind::BoundaryAdapted, &set, trials, 40.0, 1)?;
    let kr = kac_rice_expected_length(&set, &KacRiceParams::default())?;
    println!(
        "square: {:.4} +- {:.4} (Kac-Rice {:.4}, grid M = {})",
        square.mean, square.stderr, kr.total, square.grid_m
    );
    Ok(())
}
