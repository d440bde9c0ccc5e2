//! Local covariance data and the zero density at a few points, with the
//! elliptic-integral closed form checked against angular quadrature.
//!
//! cargo run --example zero_density -- 65

use arw::arithmetic::enumerate_lattice_set;
use arw::kacrice::{explicit_gamma, leading_term, local_moments, zero_density};
use arw::special::{expected_norm_bivariate, expected_norm_bivariate_quadrature};

fn main() -> arw::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(65);
    let set = enumerate_lattice_set(n)?;
    println!(
        "leading term sqrt(lambda)/(2 sqrt 2) = {:.5}",
        leading_term(n)
    );
    for x in [(0.5, 0.5), (0.23, 0.71), (0.05, 0.4), (0.0, 0.3)] {
        match local_moments(&set, x) {
            Ok(m) => {
                let alt = explicit_gamma(&set, x);
                println!(
                    "x = {x:?}: v = {:.4}, s = {:+.4}, tr Gamma = {:+.4}, det Gamma = {:+.4}, |Gamma - Gamma_explicit| = {:.1e}",
                    m.v, m.s, m.gamma.trace(), m.gamma.det(), m.gamma.max_abs_diff(&alt.gamma)
                );
                let closed = expected_norm_bivariate(&m.theta)?;
                let quad = expected_norm_bivariate_quadrature(&m.theta, 2048)?;
                println!(
                    "  E|grad f| given f = 0: {closed:.8} (quadrature {quad:.8}), K1 = {:.5}",
                    zero_density(&set, x)?
                );
            }
            Err(e) => println!("x = {x:?}: {e}"),
        }
    }
    Ok(())
}
