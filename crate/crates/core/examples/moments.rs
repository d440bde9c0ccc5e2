//! The eight moment integrals of the local covariance data against their
//! first-order predictions, plus the singular-set measure.
//!
//! cargo run --release --example moments -- 1105 5525

use arw::arithmetic::enumerate_lattice_set;
use arw::kacrice::{moment_integrals, MomentParams};

fn main() -> arw::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let ns = if args.is_empty() {
        vec![325, 1105]
    } else {
        args
    };
    for n in ns {
        let set = enumerate_lattice_set(n)?;
        let r = moment_integrals(&set, &MomentParams::default())?;
        println!(
            "n = {}  N = {}  nu4 = {:.4}  singular measure = {:.3}",
            r.n, r.n_points, r.nu4, r.singular_measure
        );
        for m in &r.integrals {
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:+.5}"));
            println!(
                "  {:<15} N*value {:+.5}  N*nonsingular {:>9}  N*theory {:>9}",
                m.name,
                m.value * r.n_points as f64,
                fmt(m.value_nonsingular.map(|v| v * r.n_points as f64)),
                fmt(m.theory.map(|v| v * r.n_points as f64)),
            );
        }
    }
    Ok(())
}
