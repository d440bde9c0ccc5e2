//! Second-order expansion of the zero density at points where |s|,
//! |tr Gamma| and |det Gamma| are all below 0.1, with the ratio of the
//! remainder to the cubic majorant.
//!
//! cargo run --release --example perturbative

use arw::arithmetic::enumerate_lattice_set;
use arw::kacrice::{expansion_from_moments, local_moments, zero_density};

fn main() -> arw::Result<()> {
    for n in [65u64, 325, 1105] {
        let set = enumerate_lattice_set(n)?;
        let (mut kept, mut worst, mut max_l) = (0, 0.0f64, 0.0f64);
        for k in 1..=200_000 {
            let k = k as f64;
            let x = ((k * 0.754_877_666).fract(), (k * 0.569_840_291).fract());
            let Ok(m) = local_moments(&set, x) else {
                continue;
            };
            if m.s.abs() > 0.1 || m.gamma.trace().abs() > 0.1 || m.gamma.det().abs() > 0.1 {
                continue;
            }
            kept += 1;
            let t = expansion_from_moments(n, m.s, &m.gamma);
            let k1 = zero_density(&set, x)?;
            worst = worst.max((k1 - t.leading - t.l).abs() / t.bound);
            max_l = max_l.max(t.l.abs() / (n as f64).sqrt());
        }
        println!("n = {n}: {kept} points kept, max remainder / bound = {worst:.3}, max |L| / sqrt n = {max_l:.3}");
    }
    Ok(())
}
