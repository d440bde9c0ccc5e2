//! Exact counts of semi-correlations, correlations, diagonal tuples and
//! quasi-correlations, then a small density scan.
//!
//! cargo run --release --example semicorrelations -- 1105

use arw::arithmetic::enumerate_lattice_set;
use arw::correlations::{correlation_report, scan_semi_correlations, ReportOptions};

fn main() -> arw::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1105);
    let set = enumerate_lattice_set(n)?;
    let opts = ReportOptions {
        with_correlations: true,
        with_diagonal: true,
        quasi_eps: vec![0.25],
    };
    for l in [2, 4, 6] {
        let r = correlation_report(&set, l, &opts)?;
        println!(
            "n = {n}, l = {l}: M = {}, R = {:?}, D = {:?}, quasi(0.25) = {}, M / N^(l/2) = {:.4}",
            r.m_count, r.r_count, r.d_count, r.quasi_counts[0].count, r.ratio_m
        );
    }
    let table = scan_semi_correlations(2, 2000, 4, &[2.0, 4.0, 8.0], false)?;
    println!("scan over n <= 2000, l = 4: {} rows", table.rows.len());
    for f in &table.fractions {
        println!("  fraction with M <= {} N^2: {:.4}", f.c, f.fraction);
    }
    Ok(())
}
