//! Gaussian arithmetic random waves: the Dirichlet (boundary-adapted) field
//! on the unit square and the toral etalon.
//!
//! Randomness: each sample owns a ChaCha8 stream seeded from a 64-bit seed;
//! coefficients are drawn in class order with the ziggurat normal sampler of
//! `rand_distr`. Monte Carlo trials derive their seeds with [`derive_seed`].
//! Bit-reproducibility is promised within one build of the crate.

use std::f64::consts::PI;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::LatticeSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    BoundaryAdapted,
    Torus,
}

impl std::str::FromStr for FieldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boundary_adapted" | "boundary" | "dirichlet" => Ok(FieldKind::BoundaryAdapted),
            "torus" => Ok(FieldKind::Torus),
            other => Err(Error::InvalidArgument(format!(
                "unknown field kind {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FieldKind::BoundaryAdapted => "boundary_adapted",
            FieldKind::Torus => "torus",
        })
    }
}

/// SplitMix64 finalizer applied to `seed0` advanced by `index` golden-ratio
/// increments.
pub fn derive_seed(seed0: u64, index: u64) -> u64 {
    let mut z = seed0.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletMode {
    pub mu: (i64, i64),
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusMode {
    pub mu: (i64, i64),
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficients {
    BoundaryAdapted(Vec<DirichletMode>),
    /// One entry per lattice point; `a(-mu) = conj(a(mu))` holds exactly.
    Torus(Vec<TorusMode>),
}

/// One Gaussian draw of the coefficients, immutable after creation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveSample {
    pub n: u64,
    pub n_points: usize,
    pub seed: u64,
    pub coefficients: Coefficients,
}

pub fn sample(kind: FieldKind, set: &LatticeSet, seed: u64) -> Result<WaveSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = match kind {
        FieldKind::BoundaryAdapted => {
            if set.classes.is_empty() {
                return Err(Error::EmptySpectrum(set.n));
            }
            Coefficients::BoundaryAdapted(
                set.classes
                    .iter()
                    .map(|&mu| DirichletMode {
                        mu,
                        a: StandardNormal.sample(&mut rng),
                    })
                    .collect(),
            )
        }
        FieldKind::Torus => {
            let mut modes = Vec::with_capacity(set.size());
            for &(a, b) in set
                .points
                .iter()
                .filter(|&&(a, b)| a > 0 || (a == 0 && b > 0))
            {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y: f64 = StandardNormal.sample(&mut rng);
                let (re, im) = (
                    x * std::f64::consts::FRAC_1_SQRT_2,
                    y * std::f64::consts::FRAC_1_SQRT_2,
                );
                modes.push(TorusMode { mu: (a, b), re, im });
                modes.push(TorusMode {
                    mu: (-a, -b),
                    re,
                    im: -im,
                });
            }
            Coefficients::Torus(modes)
        }
    };
    Ok(WaveSample {
        n: set.n,
        n_points: set.size(),
        seed,
        coefficients,
    })
}

impl WaveSample {
    pub fn kind(&self) -> FieldKind {
        match self.coefficients {
            Coefficients::BoundaryAdapted(_) => FieldKind::BoundaryAdapted,
            Coefficients::Torus(_) => FieldKind::Torus,
        }
    }

    pub fn num_coefficients(&self) -> usize {
        match &self.coefficients {
            Coefficients::BoundaryAdapted(m) => m.len(),
            Coefficients::Torus(m) => m.len(),
        }
    }

    fn dirichlet_norm(&self) -> f64 {
        4.0 / (self.n_points as f64).sqrt()
    }

    /// Full complex torus sum `(1/sqrt N) sum a_mu e(<x, mu>)`; the imaginary
    /// part vanishes up to rounding. Zero for a Dirichlet sample.
    pub fn evaluate_complex(&self, x: (f64, f64)) -> (f64, f64) {
        match &self.coefficients {
            Coefficients::BoundaryAdapted(_) => (self.evaluate(x), 0.0),
            Coefficients::Torus(modes) => {
                let (mut re, mut im) = (0.0, 0.0);
                for m in modes {
                    let phase = 2.0 * PI * (m.mu.0 as f64 * x.0 + m.mu.1 as f64 * x.1);
                    let (s, c) = phase.sin_cos();
                    re += m.re * c - m.im * s;
                    im += m.re * s + m.im * c;
                }
                let norm = 1.0 / (self.n_points as f64).sqrt();
                (re * norm, im * norm)
            }
        }
    }

    pub fn evaluate(&self, x: (f64, f64)) -> f64 {
        match &self.coefficients {
            Coefficients::BoundaryAdapted(modes) => {
                self.dirichlet_norm()
                    * modes
                        .iter()
                        .map(|m| {
                            m.a * (PI * m.mu.0 as f64 * x.0).sin()
                                * (PI * m.mu.1 as f64 * x.1).sin()
                        })
                        .sum::<f64>()
            }
            Coefficients::Torus(_) => self.evaluate_complex(x).0,
        }
    }

    pub fn evaluate_gradient(&self, x: (f64, f64)) -> (f64, f64) {
        match &self.coefficients {
            Coefficients::BoundaryAdapted(modes) => {
                let (mut g1, mut g2) = (0.0, 0.0);
                for m in modes {
                    let (k1, k2) = (PI * m.mu.0 as f64, PI * m.mu.1 as f64);
                    let (s1, c1) = (k1 * x.0).sin_cos();
                    let (s2, c2) = (k2 * x.1).sin_cos();
                    g1 += m.a * k1 * c1 * s2;
                    g2 += m.a * k2 * s1 * c2;
                }
                let norm = self.dirichlet_norm();
                (g1 * norm, g2 * norm)
            }
            Coefficients::Torus(modes) => {
                let (mut g1, mut g2) = (0.0, 0.0);
                for m in modes {
                    let (k1, k2) = (2.0 * PI * m.mu.0 as f64, 2.0 * PI * m.mu.1 as f64);
                    let (s, c) = (k1 * x.0 + k2 * x.1).sin_cos();
                    // d/dx Re(a e^{i phase}) = -Re(a) sin - Im(a) cos, times k
                    let d = -m.re * s - m.im * c;
                    g1 += k1 * d;
                    g2 += k2 * d;
                }
                let norm = 1.0 / (self.n_points as f64).sqrt();
                (g1 * norm, g2 * norm)
            }
        }
    }

    /// Laplacian from exact second derivatives.
    pub fn evaluate_laplacian(&self, x: (f64, f64)) -> f64 {
        match &self.coefficients {
            Coefficients::BoundaryAdapted(modes) => {
                self.dirichlet_norm()
                    * modes
                        .iter()
                        .map(|m| {
                            let (k1, k2) = (PI * m.mu.0 as f64, PI * m.mu.1 as f64);
                            -(k1 * k1 + k2 * k2) * m.a * (k1 * x.0).sin() * (k2 * x.1).sin()
                        })
                        .sum::<f64>()
            }
            Coefficients::Torus(modes) => {
                let mut acc = 0.0;
                for m in modes {
                    let (k1, k2) = (2.0 * PI * m.mu.0 as f64, 2.0 * PI * m.mu.1 as f64);
                    let (s, c) = (k1 * x.0 + k2 * x.1).sin_cos();
                    acc += -(k1 * k1 + k2 * k2) * (m.re * c - m.im * s);
                }
                acc / (self.n_points as f64).sqrt()
            }
        }
    }

    /// Laplace eigenvalue of the sample: `pi^2 n` on the square, `4 pi^2 n`
    /// on the torus.
    pub fn eigenvalue(&self) -> f64 {
        match self.kind() {
            FieldKind::BoundaryAdapted => PI * PI * self.n as f64,
            FieldKind::Torus => 4.0 * PI * PI * self.n as f64,
        }
    }
}

/// Dirichlet covariance `r_n(x, y)`.
pub fn covariance(set: &LatticeSet, x: (f64, f64), y: (f64, f64)) -> f64 {
    let sum: f64 = set
        .classes
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (PI * a as f64, PI * b as f64);
            (a * x.0).sin() * (b * x.1).sin() * (a * y.0).sin() * (b * y.1).sin()
        })
        .sum();
    16.0 * sum / set.size() as f64
}

/// `v_n(x) = r_n(x, x)`.
pub fn variance(set: &LatticeSet, x: (f64, f64)) -> f64 {
    covariance(set, x, x)
}

/// Toral covariance `p_n(x - y)`.
pub fn torus_covariance(set: &LatticeSet, x: (f64, f64), y: (f64, f64)) -> f64 {
    let (d1, d2) = (x.0 - y.0, x.1 - y.1);
    set.points
        .iter()
        .map(|&(a, b)| (2.0 * PI * (a as f64 * d1 + b as f64 * d2)).cos())
        .sum::<f64>()
        / set.size() as f64
}

/// Row-major `m x m` matrix of samples; `at(i, j)` is the value at
/// `x1 = coords[i]`, `x2 = coords[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub m: usize,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> f64) -> Grid {
        let mut values = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(f(i, j));
            }
        }
        Grid { m, values }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    pub fn transposed(&self) -> Grid {
        Grid::from_fn(self.m, |i, j| self.at(j, i))
    }

    pub fn scaled(&self, c: f64) -> Grid {
        Grid {
            m: self.m,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// CSV dump: a `#` header line with the metadata, then one line per
    /// first-coordinate index.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &str) -> std::io::Result<()> {
        writeln!(out, "# {header} m={}", self.m)?;
        for i in 0..self.m {
            let row: Vec<String> = (0..self.m).map(|j| self.at(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Closed-grid nodes `i / (m - 1)`, `i = 0..m`.
pub fn closed_nodes(m: usize) -> Vec<f64> {
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}

/// Periodic nodes `i / m`, `i = 0..m`.
pub fn periodic_nodes(m: usize) -> Vec<f64> {
    (0..m).map(|i| i as f64 / m as f64).collect()
}

/// `sin(pi k x) / sin(pi x)`, continuous at the endpoints.
fn dirichlet_ratio(k: i64, x: f64) -> f64 {
    let d = (PI * x).sin();
    if d.abs() < 1e-12 {
        // limit at x = 0 is k; at x = 1 it is k (-1)^(k-1)
        let sign = if x > 0.5 && k % 2 == 0 { -1.0 } else { 1.0 };
        sign * k as f64
    } else {
        (PI * k as f64 * x).sin() / d
    }
}

fn separable_sum(m: usize, rows: &[Vec<f64>], cols: &[Vec<f64>], weights: &[f64]) -> Grid {
    let mut values = vec![0.0; m * m];
    values.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for ((r, c), &w) in rows.iter().zip(cols).zip(weights) {
            let ri = w * r[i];
            for (v, &cj) in row.iter_mut().zip(c) {
                *v += ri * cj;
            }
        }
    });
    Grid { m, values }
}

impl WaveSample {
    /// Values on the closed `m x m` grid of the unit square (Dirichlet) or on
    /// the periodic `m x m` grid of the torus.
    pub fn evaluate_grid(&self, m: usize) -> Grid {
        match &self.coefficients {
            Coefficients::BoundaryAdapted(modes) => {
                let nodes = closed_nodes(m);
                let rows: Vec<Vec<f64>> = modes
                    .iter()
                    .map(|md| {
                        nodes
                            .iter()
                            .map(|&x| (PI * md.mu.0 as f64 * x).sin())
                            .collect()
                    })
                    .collect();
                let cols: Vec<Vec<f64>> = modes
                    .iter()
                    .map(|md| {
                        nodes
                            .iter()
                            .map(|&x| (PI * md.mu.1 as f64 * x).sin())
                            .collect()
                    })
                    .collect();
                let w: Vec<f64> = modes
                    .iter()
                    .map(|md| md.a * self.dirichlet_norm())
                    .collect();
                separable_sum(m, &rows, &cols, &w)
            }
            Coefficients::Torus(_) => self.evaluate_torus_grid(m),
        }
    }

    /// Dirichlet field divided by `sin(pi x1) sin(pi x2)` on the closed grid.
    /// The quotient is a polynomial in `cos(pi x1), cos(pi x2)` with the same
    /// zero set as the field inside the open square, and is generically
    /// nonzero on the boundary, so contour extraction does not pick up the
    /// boundary itself.
    pub fn evaluate_reduced_grid(&self, m: usize) -> Result<Grid> {
        let Coefficients::BoundaryAdapted(modes) = &self.coefficients else {
            return Err(Error::InvalidArgument(
                "reduced grid is defined for the boundary-adapted field only".into(),
            ));
        };
        let nodes = closed_nodes(m);
        let rows: Vec<Vec<f64>> = modes
            .iter()
            .map(|md| nodes.iter().map(|&x| dirichlet_ratio(md.mu.0, x)).collect())
            .collect();
        let cols: Vec<Vec<f64>> = modes
            .iter()
            .map(|md| nodes.iter().map(|&x| dirichlet_ratio(md.mu.1, x)).collect())
            .collect();
        let w: Vec<f64> = modes
            .iter()
            .map(|md| md.a * self.dirichlet_norm())
            .collect();
        Ok(separable_sum(m, &rows, &cols, &w))
    }

    fn evaluate_torus_grid(&self, m: usize) -> Grid {
        let Coefficients::Torus(modes) = &self.coefficients else {
            unreachable!()
        };
        let nodes = periodic_nodes(m);
        // Re(a e1 e2) = Re(a e1) cos2 - Im(a e1) sin2: two separable terms per
        // mode, summed over one representative per antipodal pair (doubled).
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for md in modes.iter().step_by(2) {
            let k1 = 2.0 * PI * md.mu.0 as f64;
            let k2 = 2.0 * PI * md.mu.1 as f64;
            let (mut re_row, mut im_row) = (Vec::with_capacity(m), Vec::with_capacity(m));
            for &x in &nodes {
                let (s, c) = (k1 * x).sin_cos();
                re_row.push(md.re * c - md.im * s);
                im_row.push(md.re * s + md.im * c);
            }
            rows.push(re_row);
            cols.push(nodes.iter().map(|&x| (k2 * x).cos()).collect());
            rows.push(im_row);
            cols.push(nodes.iter().map(|&x| -(k2 * x).sin()).collect());
        }
        let w = vec![2.0 / (self.n_points as f64).sqrt(); rows.len()];
        separable_sum(m, &rows, &cols, &w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::enumerate_lattice_set;

    fn set(n: u64) -> LatticeSet {
        enumerate_lattice_set(n).unwrap()
    }

    #[test]
    fn single_class_sample() {
        let s = sample(FieldKind::BoundaryAdapted, &set(2), 7).unwrap();
        assert_eq!(s.num_coefficients(), 1);
        let Coefficients::BoundaryAdapted(m) = &s.coefficients else {
            panic!()
        };
        assert!((s.evaluate((0.5, 0.5)) - 2.0 * m[0].a).abs() < 1e-14);
        assert_eq!(
            sample(FieldKind::BoundaryAdapted, &set(1), 7),
            Err(Error::EmptySpectrum(1))
        );
    }

    #[test]
    fn determinism() {
        let e = set(1105);
        assert_eq!(
            sample(FieldKind::BoundaryAdapted, &e, 42).unwrap(),
            sample(FieldKind::BoundaryAdapted, &e, 42).unwrap()
        );
        assert_ne!(
            sample(FieldKind::BoundaryAdapted, &e, 42).unwrap(),
            sample(FieldKind::BoundaryAdapted, &e, 43).unwrap()
        );
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }

    #[test]
    fn torus_is_real() {
        let s = sample(FieldKind::Torus, &set(5), 3).unwrap();
        assert_eq!(s.num_coefficients(), 8);
        for k in 0..50 {
            let x = (0.013 * k as f64, 0.71 - 0.017 * k as f64);
            assert!(s.evaluate_complex(x).1.abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_boundary_and_grid_lines() {
        let s = sample(FieldKind::BoundaryAdapted, &set(765), 11).unwrap();
        for t in [0.0, 0.3, 0.77] {
            assert!(s.evaluate((0.0, t)).abs() < 1e-12);
            assert!(s.evaluate((t, 1.0)).abs() < 1e-12);
            assert!(s.evaluate((1.0 / 3.0, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenfunction_and_gradient() {
        for kind in [FieldKind::BoundaryAdapted, FieldKind::Torus] {
            let s = sample(kind, &set(65), 5).unwrap();
            for k in 0..20 {
                let x = (0.05 + 0.045 * k as f64, 0.93 - 0.039 * k as f64);
                let f = s.evaluate(x);
                let lap = s.evaluate_laplacian(x);
                let scale = s.eigenvalue() * (f.abs() + 1.0);
                assert!((lap + s.eigenvalue() * f).abs() / scale < 1e-8);
                let h = 1e-6;
                let (g1, g2) = s.evaluate_gradient(x);
                let fd1 = (s.evaluate((x.0 + h, x.1)) - s.evaluate((x.0 - h, x.1))) / (2.0 * h);
                let fd2 = (s.evaluate((x.0, x.1 + h)) - s.evaluate((x.0, x.1 - h))) / (2.0 * h);
                assert!((g1 - fd1).abs() < 1e-5 * (1.0 + g1.abs()));
                assert!((g2 - fd2).abs() < 1e-5 * (1.0 + g2.abs()));
            }
        }
    }

    #[test]
    fn grids_match_pointwise() {
        let e = set(130);
        let s = sample(FieldKind::BoundaryAdapted, &e, 1).unwrap();
        let m = 17;
        let g = s.evaluate_grid(m);
        let r = s.evaluate_reduced_grid(m).unwrap();
        let nodes = closed_nodes(m);
        for i in 0..m {
            for j in 0..m {
                let x = (nodes[i], nodes[j]);
                let f = s.evaluate(x);
                assert!((g.at(i, j) - f).abs() < 1e-12);
                let w = (PI * x.0).sin() * (PI * x.1).sin();
                if w > 1e-3 {
                    assert!((r.at(i, j) * w - f).abs() < 1e-12);
                }
            }
        }
        let t = sample(FieldKind::Torus, &e, 1).unwrap();
        let tg = t.evaluate_grid(m);
        let pn = periodic_nodes(m);
        for i in 0..m {
            for j in 0..m {
                assert!((tg.at(i, j) - t.evaluate((pn[i], pn[j]))).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn covariance_identities() {
        for n in [65u64, 85] {
            let e = set(n);
            for k in 0..100 {
                let x = (
                    (k as f64 * 0.618_034).fract(),
                    (k as f64 * 0.414_214 + 0.1).fract(),
                );
                let y = (
                    (k as f64 * 0.302_776 + 0.2).fract(),
                    (k as f64 * 0.732_051).fract(),
                );
                let s: f64 = 4.0 / e.size() as f64
                    * e.classes
                        .iter()
                        .map(|&(a, b)| {
                            let c1 = (2.0 * PI * a as f64 * x.0).cos();
                            let c2 = (2.0 * PI * b as f64 * x.1).cos();
                            c1 + c2 - c1 * c2
                        })
                        .sum::<f64>();
                assert!((covariance(&e, x, x) - (1.0 - s)).abs() < 1e-12);
                let rxy = covariance(&e, x, y);
                assert!((rxy - covariance(&e, y, x)).abs() < 1e-15);
                assert!((rxy - covariance(&e, (x.1, x.0), (y.1, y.0))).abs() < 1e-12);
                assert!(rxy.abs() <= (variance(&e, x) * variance(&e, y)).sqrt() + 1e-12);
                assert_eq!(covariance(&e, (0.0, x.1), y), 0.0);
            }
        }
    }
}
