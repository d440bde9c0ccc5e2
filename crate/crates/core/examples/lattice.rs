//! Lattice points on a circle: factorization, the point set, its classes,
//! the grid number and the angular statistics.
//!
//! cargo run --example lattice -- 765 1105 25

use arw::arithmetic::{
    angular_stats, enumerate_lattice_set, factorize, first_coordinate_gcd, grid_number,
};

fn main() -> arw::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let ns = if args.is_empty() {
        vec![765, 1105, 25]
    } else {
        args
    };
    for n in ns {
        let fact = factorize(n);
        let set = enumerate_lattice_set(n)?;
        let stats = angular_stats(&set);
        println!("n = {n} = {:?}", fact.factors);
        println!(
            "  N = {} (r2 from factorization: {})",
            set.size(),
            fact.r2()
        );
        println!("  classes = {:?}", set.classes);
        if set.is_square() {
            println!("  axis points = {:?}", set.axis_points);
        }
        println!(
            "  Q = {} (gcd of first coordinates: {})",
            grid_number(n)?,
            first_coordinate_gcd(&set)
        );
        println!(
            "  nu4 = {:.6}, M4 = {:.6}, (3 + nu4)/32 = {:.6}",
            stats.nu4,
            stats.m4,
            (3.0 + stats.nu4) / 32.0
        );
    }
    Ok(())
}
