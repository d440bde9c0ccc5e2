//! Nodal length of sampled fields by marching squares, and Monte Carlo
//! estimates of the expected nodal length.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{grid_number, LatticeSet};
use crate::error::{Error, Result};
use crate::field::{derive_seed, sample, FieldKind, Grid};

/// Replacement for grid values that are exactly zero.
pub const ZERO_NUDGE: f64 = 1e-12;
pub const DEFAULT_PPW: f64 = 40.0;

/// Fixed-point scale of the length accumulator, `2^64` units per unit length.
const FIXED_SCALE: f64 = 18_446_744_073_709_551_616.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodalEstimate {
    pub length: f64,
    pub grid_m: usize,
    /// Cells with four sign changes, resolved by the cell-mean sign.
    pub ambiguous_cells: usize,
    pub seed: Option<u64>,
}

#[inline]
fn nudge(v: f64) -> f64 {
    if v == 0.0 {
        ZERO_NUDGE
    } else {
        v
    }
}

/// Crossing parameter on the edge from `a` (lower index) to `b`.
#[inline]
fn crossing(a: f64, b: f64) -> f64 {
    a / (a - b)
}

#[inline]
fn fixed(len: f64) -> i128 {
    (len * FIXED_SCALE).round() as i128
}

/// Contribution of one cell with corner values `v00 = (i, j)`,
/// `v10 = (i+1, j)`, `v01 = (i, j+1)`, `v11 = (i+1, j+1)`, in units of the
/// cell side. Returns the fixed-point length and whether the cell was a
/// saddle.
fn cell_length(v00: f64, v10: f64, v01: f64, v11: f64) -> (i128, bool) {
    let (p00, p10, p01, p11) = (v00 > 0.0, v10 > 0.0, v01 > 0.0, v11 > 0.0);
    // edge crossings in local coordinates (x1, x2)
    let bottom = (p00 != p10).then(|| (crossing(v00, v10), 0.0));
    let left = (p00 != p01).then(|| (0.0, crossing(v00, v01)));
    let right = (p10 != p11).then(|| (1.0, crossing(v10, v11)));
    let top = (p01 != p11).then(|| (crossing(v01, v11), 1.0));
    let seg = |a: (f64, f64), b: (f64, f64)| fixed((a.0 - b.0).hypot(a.1 - b.1));
    let hits: Vec<(f64, f64)> = [bottom, left, right, top].into_iter().flatten().collect();
    match hits.len() {
        0 => (0, false),
        2 => (seg(hits[0], hits[1]), false),
        4 => {
            let (b, l, r, t) = (hits[0], hits[1], hits[2], hits[3]);
            let centre_positive = (v00 + v11) + (v10 + v01) > 0.0;
            if centre_positive == p00 {
                // the diagonal through (0,0) and (1,1) is connected; cut off
                // the other two corners
                (seg(b, r) + seg(l, t), true)
            } else {
                (seg(b, l) + seg(r, t), true)
            }
        }
        _ => unreachable!("odd number of sign changes around a cell"),
    }
}

fn march(grid: &Grid, spacing: f64, periodic: bool) -> Result<NodalEstimate> {
    let m = grid.m;
    let cells = if periodic { m } else { m.saturating_sub(1) };
    if m < 2 || cells == 0 {
        return Err(Error::GridTooSmall(m));
    }
    let next = |i: usize| if i + 1 == m { 0 } else { i + 1 };
    let rows: Vec<(i128, usize)> = (0..cells)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0i128;
            let mut saddles = 0;
            for j in 0..cells {
                let (i1, j1) = (next(i), next(j));
                let (len, saddle) = cell_length(
                    nudge(grid.at(i, j)),
                    nudge(grid.at(i1, j)),
                    nudge(grid.at(i, j1)),
                    nudge(grid.at(i1, j1)),
                );
                acc += len;
                saddles += usize::from(saddle);
            }
            (acc, saddles)
        })
        .collect();
    let total: i128 = rows.iter().map(|r| r.0).sum();
    Ok(NodalEstimate {
        length: total as f64 / FIXED_SCALE * spacing,
        grid_m: m,
        ambiguous_cells: rows.iter().map(|r| r.1).sum(),
        seed: None,
    })
}

/// Zero-contour length of a closed grid whose nodes are `spacing` apart.
///
/// Crossings are linearly interpolated along each edge from its lower-index
/// node, so neighbouring cells agree on shared points. Cell lengths are
/// accumulated in fixed point, which makes the result independent of the
/// visiting order (and of transposition of the grid).
pub fn marching_squares_length(grid: &Grid, spacing: f64) -> Result<NodalEstimate> {
    march(grid, spacing, false)
}

/// The same on a periodic grid: the last row and column wrap to the first.
pub fn marching_squares_length_periodic(grid: &Grid, spacing: f64) -> Result<NodalEstimate> {
    march(grid, spacing, true)
}

/// Grid size for a field of the given kind: `ppw` points per wavelength
/// along each axis. The boundary-adapted grid is closed and nudged so that
/// no node row falls on one of the deterministic lines `x = k / Q_n`.
pub fn monte_carlo_grid_size(kind: FieldKind, n: u64, ppw: f64) -> Result<usize> {
    if !(ppw > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "points per wavelength must be positive, got {ppw}"
        )));
    }
    let root = (n as f64).sqrt();
    Ok(match kind {
        FieldKind::BoundaryAdapted => {
            let q = grid_number(n)? as usize;
            let mut m = (ppw * root / 2.0).ceil() as usize + 1;
            m = m.max(3);
            if q > 1 && (m - 1).is_multiple_of(q) {
                m += 1;
            }
            m
        }
        FieldKind::Torus => ((ppw * root).ceil() as usize).max(2),
    })
}

/// Nodal length of one sampled field.
pub fn sample_nodal_length(
    kind: FieldKind,
    set: &LatticeSet,
    seed: u64,
    ppw: f64,
) -> Result<NodalEstimate> {
    let m = monte_carlo_grid_size(kind, set.n, ppw)?;
    let wave = sample(kind, set, seed)?;
    let mut est = match kind {
        FieldKind::BoundaryAdapted => {
            marching_squares_length(&wave.evaluate_reduced_grid(m)?, 1.0 / (m - 1) as f64)?
        }
        FieldKind::Torus => {
            marching_squares_length_periodic(&wave.evaluate_grid(m), 1.0 / m as f64)?
        }
    };
    est.seed = Some(seed);
    Ok(est)
}

pub const LENGTH_CSV_HEADER: &str = "n,kind,trials,grid_M,mean,stderr,variance,seed0";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthReport {
    pub n: u64,
    pub kind: FieldKind,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    pub variance: f64,
    #[serde(rename = "grid_M")]
    pub grid_m: usize,
    pub seed0: u64,
    pub ppw: f64,
    pub lengths: Vec<f64>,
}

impl LengthReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.kind,
            self.trials,
            self.grid_m,
            self.mean,
            self.stderr,
            self.variance,
            self.seed0
        )
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{LENGTH_CSV_HEADER}")?;
        writeln!(out, "{}", self.csv_row())
    }
}

/// Sample mean of the nodal length over `trials` independent fields seeded
/// by `derive_seed(seed0, t)`. Trials run in parallel; the statistics are
/// accumulated in trial order.
pub fn monte_carlo_expected_length(
    kind: FieldKind,
    set: &LatticeSet,
    trials: usize,
    ppw: f64,
    seed0: u64,
) -> Result<LengthReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let grid_m = monte_carlo_grid_size(kind, set.n, ppw)?;
    let lengths: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| sample_nodal_length(kind, set, derive_seed(seed0, t), ppw).map(|e| e.length))
        .collect::<Result<_>>()?;
    let mean = lengths.iter().sum::<f64>() / trials as f64;
    let variance = if trials > 1 {
        lengths.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(LengthReport {
        n: set.n,
        kind,
        trials,
        mean,
        stderr: (variance / trials as f64).sqrt(),
        variance,
        grid_m,
        seed0,
        ppw,
        lengths,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::arithmetic::enumerate_lattice_set;
    use crate::field::closed_nodes;

    fn closed(m: usize, f: impl Fn(f64, f64) -> f64) -> Grid {
        let x = closed_nodes(m);
        Grid::from_fn(m, |i, j| f(x[i], x[j]))
    }

    #[test]
    fn straight_line() {
        let g = closed(101, |x1, _| x1 - 0.3737);
        let est = marching_squares_length(&g, 0.01).unwrap();
        assert!((est.length - 1.0).abs() < 1e-6);
        let g = closed(64, |x1, x2| x1 + x2 - 1.0 + 1e-3);
        let est = marching_squares_length(&g, 1.0 / 63.0).unwrap();
        let exact = 2f64.sqrt() * (1.0 - 1e-3);
        assert!((est.length - exact).abs() < 1e-6, "{}", est.length);
    }

    #[test]
    fn two_crossing_lines() {
        // reduced form of sin(2 pi x1) sin(2 pi x2): zero lines x = 1/2 only
        let m = 200;
        let g = closed(m, |x1, x2| (PI * x1).cos() * (PI * x2).cos());
        let est = marching_squares_length(&g, 1.0 / (m - 1) as f64).unwrap();
        assert!((est.length - 2.0).abs() < 0.02, "{}", est.length);
    }

    #[test]
    fn circle() {
        let m = 400;
        let r = 0.3;
        let g = closed(m, |x1, x2| (x1 - 0.5).hypot(x2 - 0.5) - r);
        let est = marching_squares_length(&g, 1.0 / (m - 1) as f64).unwrap();
        assert!((est.length - 2.0 * PI * r).abs() < 1e-4);
    }

    #[test]
    fn periodic_lines() {
        let m = 128;
        let g = Grid::from_fn(m, |i, _| (2.0 * PI * (i as f64 / m as f64 + 0.01)).sin());
        let est = marching_squares_length_periodic(&g, 1.0 / m as f64).unwrap();
        assert!((est.length - 2.0).abs() < 1e-9);
        let closed = marching_squares_length(&g, 1.0 / m as f64).unwrap();
        assert!(closed.length < est.length);
    }

    #[test]
    fn invariances() {
        let e = enumerate_lattice_set(325).unwrap();
        let w = sample(FieldKind::BoundaryAdapted, &e, 11).unwrap();
        let g = w.evaluate_reduced_grid(257).unwrap();
        let h = 1.0 / 256.0;
        let base = marching_squares_length(&g, h).unwrap();
        let t = marching_squares_length(&g.transposed(), h).unwrap();
        assert_eq!(base.length, t.length);
        assert_eq!(base.ambiguous_cells, t.ambiguous_cells);
        for c in [4.0, 0.125] {
            let s = marching_squares_length(&g.scaled(c), h).unwrap();
            assert_eq!(s.length, base.length);
        }
        let s = marching_squares_length(&g.scaled(3.7), h).unwrap();
        assert!((s.length - base.length).abs() < 1e-12 * base.length);
        let neg = marching_squares_length(&g.scaled(-1.0), h).unwrap();
        assert!((neg.length - base.length).abs() < 1e-9 * base.length);
    }

    #[test]
    fn too_small() {
        let g = Grid::from_fn(1, |_, _| 1.0);
        assert_eq!(
            marching_squares_length(&g, 1.0),
            Err(Error::GridTooSmall(1))
        );
    }

    #[test]
    fn grid_sizes() {
        // 765 has Q = 3; ceil(40 sqrt(765) / 2) + 1 = 555, 554 is not a multiple of 3
        let m = monte_carlo_grid_size(FieldKind::BoundaryAdapted, 765, 40.0).unwrap();
        assert!(!(m - 1).is_multiple_of(3));
        let m = monte_carlo_grid_size(FieldKind::BoundaryAdapted, 9, 8.0).unwrap();
        assert_eq!(m, 14);
        assert_eq!(
            monte_carlo_grid_size(FieldKind::Torus, 25, 10.0).unwrap(),
            50
        );
    }

    #[test]
    fn grid_number_lines_are_found() {
        let e = enumerate_lattice_set(765).unwrap();
        for seed in 0..3 {
            let est = sample_nodal_length(FieldKind::BoundaryAdapted, &e, seed, 20.0).unwrap();
            assert!(est.length >= 4.0, "{est:?}");
        }
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let e = enumerate_lattice_set(65).unwrap();
        let a = monte_carlo_expected_length(FieldKind::Torus, &e, 8, 16.0, 5).unwrap();
        let b = monte_carlo_expected_length(FieldKind::Torus, &e, 8, 16.0, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.stderr > 0.0);
        assert_eq!(a.lengths.len(), 8);
    }
}
