//! Measured second-order term of the expected nodal length, total minus the
//! leading term, next to the predicted leading * C_n.
//!
//! cargo run --release --example deficiency

use arw::arithmetic::{enumerate_lattice_set, find_angular_target};
use arw::kacrice::{kac_rice_expected_length, KacRiceParams};

fn main() -> arw::Result<()> {
    let mut ns = vec![65, 325, 1105];
    // a surplus candidate: 1 + 4 nu4 < 0 with N >= 16
    if let Some(&n) = find_angular_target(-0.8, 0.15, 20_000)?
        .iter()
        .find(|&&n| enumerate_lattice_set(n).is_ok_and(|s| s.size() >= 16))
    {
        ns.push(n);
    }
    println!(
        "{:>6} {:>4} {:>8} {:>10} {:>10} {:>10}",
        "n", "N", "nu4", "measured", "predicted", "ratio"
    );
    for n in ns {
        let set = enumerate_lattice_set(n)?;
        let r = kac_rice_expected_length(&set, &KacRiceParams::default())?;
        let m = r.measured_correction();
        println!(
            "{:>6} {:>4} {:>+8.4} {:>+10.5} {:>+10.5} {:>10.3}",
            n,
            r.n_points,
            r.nu4,
            m,
            r.correction_pred,
            m / r.correction_pred
        );
    }
    Ok(())
}
