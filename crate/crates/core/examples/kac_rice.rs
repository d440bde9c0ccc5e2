//! Kac-Rice expected nodal length of the boundary-adapted wave, compared
//! with the leading term and the predicted correction.
//!
//! cargo run --release --example kac_rice -- 65 130 170 1105

use arw::arithmetic::enumerate_lattice_set;
use arw::kacrice::{kac_rice_expected_length, KacRiceParams};

fn main() -> arw::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let ns = if args.is_empty() {
        vec![65, 130, 170]
    } else {
        args
    };
    println!(
        "{:>6} {:>4} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "n", "N", "nu4", "total", "leading", "measured", "predicted", "conv"
    );
    for n in ns {
        let set = enumerate_lattice_set(n)?;
        let r = kac_rice_expected_length(&set, &KacRiceParams::default())?;
        println!(
            "{:>6} {:>4} {:>8.4} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.2e}",
            r.n,
            r.n_points,
            r.nu4,
            r.total,
            r.leading,
            r.measured_correction(),
            r.correction_pred,
            r.convergence
        );
    }
    Ok(())
}
