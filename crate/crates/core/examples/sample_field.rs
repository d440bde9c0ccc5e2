//! Seeded samples of the boundary-adapted wave and of the torus wave:
//! point values, gradients, the eigenvalue equation, and a grid dump.
//!
//! cargo run --example sample_field -- 765 > field.csv

use arw::arithmetic::enumerate_lattice_set;
use arw::field::{covariance, sample, FieldKind};

fn main() -> arw::Result<()> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(765);
    let set = enumerate_lattice_set(n)?;
    let wave = sample(FieldKind::BoundaryAdapted, &set, 7)?;
    let x = (0.31, 0.62);
    let residual = wave.evaluate_laplacian(x) + wave.eigenvalue() * wave.evaluate(x);
    eprintln!(
        "f{x:?} = {:.6}, grad = {:?}",
        wave.evaluate(x),
        wave.evaluate_gradient(x)
    );
    eprintln!(
        "Laplacian + lambda f = {residual:.2e}, variance = {:.6}",
        covariance(&set, x, x)
    );
    eprintln!("f(1/3, 0.5) = {:.2e}", wave.evaluate((1.0 / 3.0, 0.5)));
    let torus = sample(FieldKind::Torus, &set, 7)?;
    eprintln!(
        "torus g{x:?} = {:.6} (imaginary part {:.1e})",
        torus.evaluate(x),
        torus.evaluate_complex(x).1
    );
    wave.evaluate_grid(201).write_csv(
        std::io::stdout().lock(),
        &format!("kind=boundary_adapted n={n} seed=7"),
    )?;
    Ok(())
}
