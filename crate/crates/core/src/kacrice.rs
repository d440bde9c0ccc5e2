//! Kac-Rice evaluation of the expected nodal length of the boundary-adapted
//! field: pointwise covariance data, the zero density, the singular-square
//! partition, the second-order perturbative density, moment integrals and
//! the quadrature of the density over the unit square.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{angular_stats, grid_number, LatticeSet};
use crate::error::{Error, Result};
use crate::special::{expected_norm_bivariate, Sym2};

/// Variance below which conditioning on `f(x) = 0` is treated as degenerate.
pub const V_FLOOR: f64 = 1e-12;
pub const DEFAULT_C0: f64 = 0.25;
pub const DEFAULT_EPS0: f64 = 0.1;
pub const DEFAULT_PROBES: usize = 3;
pub const DEFAULT_MQ_FACTOR: usize = 40;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 0.01;

/// `sqrt(lambda_n) / (2 sqrt 2)` with `lambda_n = pi^2 n`.
pub fn leading_term(n: u64) -> f64 {
    PI * (n as f64).sqrt() / (2.0 * SQRT_2)
}

/// Pointwise covariance data of `(f(x), grad f(x))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalMoments {
    pub x: (f64, f64),
    pub v: f64,
    pub s: f64,
    /// `E[f grad f]`.
    pub b: [f64; 2],
    /// `E[grad f grad f^T]`.
    pub c: Sym2,
    /// Covariance of `grad f` conditioned on `f = 0`.
    pub theta: Sym2,
    pub gamma: Sym2,
    pub omega: Sym2,
}

/// Per-class trigonometric values at one coordinate.
#[derive(Clone, Copy)]
struct ClassTrig {
    sin: f64,
    cos: f64,
}

/// `sin(pi mu x)`, `cos(pi mu x)` for every class along a list of nodes.
struct AxisTables {
    /// `[node][class]`
    first: Vec<Vec<ClassTrig>>,
    second: Vec<Vec<ClassTrig>>,
}

impl AxisTables {
    fn new(set: &LatticeSet, nodes: &[f64]) -> Self {
        let table = |pick: fn(&(i64, i64)) -> i64| -> Vec<Vec<ClassTrig>> {
            nodes
                .iter()
                .map(|&x| {
                    set.classes
                        .iter()
                        .map(|mu| {
                            let (sin, cos) = (PI * pick(mu) as f64 * x).sin_cos();
                            ClassTrig { sin, cos }
                        })
                        .collect()
                })
                .collect()
        };
        AxisTables {
            first: table(|mu| mu.0),
            second: table(|mu| mu.1),
        }
    }
}

/// Raw sums from the derivative forms of the covariance function.
fn moments_from_trig(
    set: &LatticeSet,
    t1: &[ClassTrig],
    t2: &[ClassTrig],
    x: (f64, f64),
) -> LocalMoments {
    let (mut v, mut b1, mut b2, mut c11, mut c12, mut c22) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&(m1, m2), a), b) in set.classes.iter().zip(t1).zip(t2) {
        let (k1, k2) = (PI * m1 as f64, PI * m2 as f64);
        let (s1s, s2s) = (a.sin * a.sin, b.sin * b.sin);
        v += s1s * s2s;
        b1 += k1 * a.sin * a.cos * s2s;
        b2 += k2 * b.sin * b.cos * s1s;
        c11 += k1 * k1 * a.cos * a.cos * s2s;
        c22 += k2 * k2 * b.cos * b.cos * s1s;
        c12 += k1 * k2 * a.sin * a.cos * b.sin * b.cos;
    }
    let norm = 16.0 / set.size() as f64;
    let v = v * norm;
    let b = [b1 * norm, b2 * norm];
    let c = Sym2::new(c11 * norm, c12 * norm, c22 * norm);
    let theta = if v > 0.0 {
        c.sub(&Sym2::outer(b).scale(1.0 / v))
    } else {
        Sym2::new(f64::NAN, f64::NAN, f64::NAN)
    };
    let omega = theta.scale(2.0 / (PI * PI * set.n as f64));
    LocalMoments {
        x,
        v,
        s: 1.0 - v,
        b,
        c,
        theta,
        gamma: omega.sub(&Sym2::IDENTITY),
        omega,
    }
}

fn degenerate(m: &LocalMoments) -> Error {
    Error::DegeneratePoint {
        x1: m.x.0,
        x2: m.x.1,
        variance: m.v,
    }
}

fn point_trig(set: &LatticeSet, x: (f64, f64)) -> (Vec<ClassTrig>, Vec<ClassTrig>) {
    let t = |m: i64, y: f64| {
        let (sin, cos) = (PI * m as f64 * y).sin_cos();
        ClassTrig { sin, cos }
    };
    (
        set.classes.iter().map(|mu| t(mu.0, x.0)).collect(),
        set.classes.iter().map(|mu| t(mu.1, x.1)).collect(),
    )
}

/// Covariance data at `x` by direct summation over the classes, then
/// Gaussian conditioning `Theta = C - B B^T / v`.
pub fn local_moments(set: &LatticeSet, x: (f64, f64)) -> Result<LocalMoments> {
    if set.classes.is_empty() {
        return Err(Error::EmptySpectrum(set.n));
    }
    let (t1, t2) = point_trig(set, x);
    let m = moments_from_trig(set, &t1, &t2, x);
    if m.v <= V_FLOOR {
        return Err(degenerate(&m));
    }
    Ok(m)
}

/// Explicit `b_ij`, `d_i` route to `Gamma` (and `s`), independent of the
/// derivative sums in [`local_moments`]. The constant part of the diagonal
/// assumes `sum over classes of m1^2 = n N / 8`, which holds when `n` is
/// not a perfect square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplicitGamma {
    pub s: f64,
    pub v: f64,
    pub b11: f64,
    pub b12: f64,
    pub b22: f64,
    pub d1: f64,
    pub d2: f64,
    pub gamma: Sym2,
}

pub fn explicit_gamma(set: &LatticeSet, x: (f64, f64)) -> ExplicitGamma {
    let (mut s, mut b11, mut b12, mut b22, mut d1, mut d2) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &(m1, m2) in &set.classes {
        let (m1, m2) = (m1 as f64, m2 as f64);
        let (s1, c1) = (2.0 * PI * m1 * x.0).sin_cos();
        let (s2, c2) = (2.0 * PI * m2 * x.1).sin_cos();
        let h1 = (PI * m1 * x.0).sin();
        let h2 = (PI * m2 * x.1).sin();
        s += c1 + c2 - c1 * c2;
        b11 += m1 * m1 * (c1 - c2 - c1 * c2);
        b22 += m2 * m2 * (c2 - c1 - c1 * c2);
        b12 += m1 * m2 * s1 * s2;
        d1 += m1 * s1 * h2 * h2;
        d2 += m2 * s2 * h1 * h1;
    }
    let big_n = set.size() as f64;
    let n = set.n as f64;
    let s = 4.0 * s / big_n;
    let v = 1.0 - s;
    let lin = 8.0 / (n * big_n);
    let quad = 128.0 / (n * big_n * big_n * v);
    let gamma = Sym2::new(b11, b12, b22)
        .scale(lin)
        .sub(&Sym2::outer([d1, d2]).scale(quad));
    ExplicitGamma {
        s,
        v,
        b11,
        b12,
        b22,
        d1,
        d2,
        gamma,
    }
}

fn density_from_moments(m: &LocalMoments) -> Result<f64> {
    Ok(expected_norm_bivariate(&m.theta)? / (2.0 * PI * m.v).sqrt())
}

/// Zero density `K_1(x) = E[|grad f| | f = 0] / sqrt(2 pi v)`.
pub fn zero_density(set: &LatticeSet, x: (f64, f64)) -> Result<f64> {
    density_from_moments(&local_moments(set, x)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPartition {
    pub c0: f64,
    pub eps0: f64,
    pub probes: usize,
    /// Squares per side, `floor(sqrt(n) / c0) + 1`.
    pub k: usize,
    /// Row-major `k x k`; entry `(i, j)` covers `x1 in I_i`, `x2 in I_j`.
    pub flags: Vec<bool>,
    pub measure: f64,
}

impl SingularPartition {
    pub fn is_singular(&self, i: usize, j: usize) -> bool {
        self.flags[i * self.k + j]
    }

    /// Singular flag of the square containing `x`.
    pub fn contains_singular(&self, x: (f64, f64)) -> bool {
        let idx = |t: f64| ((t * self.k as f64) as usize).min(self.k - 1);
        self.is_singular(idx(x.0), idx(x.1))
    }
}

fn violates(m: &LocalMoments, eps0: f64) -> bool {
    if m.s.abs() > eps0 {
        return true;
    }
    if m.v <= V_FLOOR {
        // Gamma is undefined here; only vacuous thresholds let it pass
        return eps0.is_finite();
    }
    m.gamma.trace().abs() > eps0 || m.gamma.det().abs() > eps0
}

/// Flags each of the `k x k` small squares as singular when any of its
/// `probes x probes` sample points (corners and, for odd counts, the centre
/// included) violates one of the three thresholds on `|s|`, `|tr Gamma|`,
/// `|det Gamma|`. Probing under-approximates the existential condition over
/// the whole square.
pub fn singular_partition(
    set: &LatticeSet,
    c0: f64,
    eps0: f64,
    probes: usize,
) -> Result<SingularPartition> {
    if !(c0 > 0.0) || !(eps0 > 0.0) || probes == 0 {
        return Err(Error::InvalidArgument(
            "singular partition needs c0 > 0, eps0 > 0 and at least one probe".into(),
        ));
    }
    if set.classes.is_empty() {
        return Err(Error::EmptySpectrum(set.n));
    }
    let k = ((set.n as f64).sqrt() / c0).floor() as usize + 1;
    let offsets: Vec<f64> = if probes == 1 {
        vec![0.5]
    } else {
        (0..probes)
            .map(|i| i as f64 / (probes - 1) as f64)
            .collect()
    };
    let side = 1.0 / k as f64;
    let flags: Vec<bool> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            offsets.iter().any(|&a| {
                offsets.iter().any(|&b| {
                    let x = ((i as f64 + a) * side, (j as f64 + b) * side);
                    let (t1, t2) = point_trig(set, x);
                    violates(&moments_from_trig(set, &t1, &t2, x), eps0)
                })
            })
        })
        .collect();
    let measure = flags.iter().filter(|&&f| f).count() as f64 / (k * k) as f64;
    Ok(SingularPartition {
        c0,
        eps0,
        probes,
        k,
        flags,
        measure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionTerms {
    pub leading: f64,
    /// Second-order density correction `L_n(x)`.
    pub l: f64,
    /// Cubic majorant `sqrt(n) (|s|^3 + |Gamma|_F^3)`.
    pub bound: f64,
}

pub fn expansion_from_moments(n: u64, s: f64, gamma: &Sym2) -> ExpansionTerms {
    let root_n = (n as f64).sqrt();
    let tr = gamma.trace();
    let l = root_n * PI / (4.0 * SQRT_2)
        * (s + tr / 2.0 + 0.75 * s * s + 0.25 * s * tr
            - gamma.trace_of_square() / 16.0
            - tr * tr / 32.0);
    ExpansionTerms {
        leading: leading_term(n),
        l,
        bound: root_n * (s.abs().powi(3) + gamma.frobenius().powi(3)),
    }
}

pub fn perturbative_terms(set: &LatticeSet, x: (f64, f64)) -> Result<ExpansionTerms> {
    let m = local_moments(set, x)?;
    Ok(expansion_from_moments(set.n, m.s, &m.gamma))
}

/// `C_n = -(1 + 4 nu4) / (16 N)`.
pub fn correction_term(set: &LatticeSet) -> f64 {
    let nu4 = angular_stats(set).nu4;
    -(1.0 + 4.0 * nu4) / (16.0 * set.size() as f64)
}

/// Midpoint-rule accumulation over a cell-centred `m x m` grid. Rows are
/// processed in parallel, each summed sequentially; row totals are combined
/// in row order, so the result does not depend on the thread count.
struct CellSums {
    sums: Vec<f64>,
    subdivided: usize,
    skipped: usize,
}

fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Integrates `width` quantities computed by `eval` from the local moments at
/// every cell centre. Cells whose centre is degenerate are split once into
/// four and the non-degenerate sub-centres averaged; cells with no usable
/// sub-centre contribute zero.
fn integrate_cells<F>(set: &LatticeSet, m: usize, width: usize, eval: F) -> Result<CellSums>
where
    F: Fn(&LocalMoments, &mut [f64]) -> Result<()> + Sync,
{
    let h = 1.0 / m as f64;
    let nodes: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) * h).collect();
    let tables = AxisTables::new(set, &nodes);
    let rows: Vec<(Vec<f64>, usize, usize)> = (0..m)
        .into_par_iter()
        .map(|i| -> Result<(Vec<f64>, usize, usize)> {
            let mut row = vec![0.0; width];
            let mut comp = vec![0.0; width];
            let mut vals = vec![0.0; width];
            let (mut subdivided, mut skipped) = (0, 0);
            for j in 0..m {
                let x = (nodes[i], nodes[j]);
                let mom = moments_from_trig(set, &tables.first[i], &tables.second[j], x);
                if mom.v > V_FLOOR {
                    eval(&mom, &mut vals)?;
                } else {
                    subdivided += 1;
                    let mut acc = vec![0.0; width];
                    let mut used = 0;
                    for (da, db) in [(-0.25, -0.25), (-0.25, 0.25), (0.25, -0.25), (0.25, 0.25)] {
                        let y = (x.0 + da * h, x.1 + db * h);
                        let (t1, t2) = point_trig(set, y);
                        let sub = moments_from_trig(set, &t1, &t2, y);
                        if sub.v > V_FLOOR {
                            eval(&sub, &mut vals)?;
                            acc.iter_mut().zip(&vals).for_each(|(a, v)| *a += v);
                            used += 1;
                        }
                    }
                    if used == 0 {
                        skipped += 1;
                    }
                    let denom = used.max(1) as f64;
                    vals.iter_mut().zip(&acc).for_each(|(v, a)| *v = a / denom);
                }
                for k in 0..width {
                    let y = vals[k] - comp[k];
                    let t = row[k] + y;
                    comp[k] = (t - row[k]) - y;
                    row[k] = t;
                }
            }
            Ok((row, subdivided, skipped))
        })
        .collect::<Result<Vec<_>>>()?;
    let cell = h * h;
    let sums = (0..width)
        .map(|k| kahan_sum(rows.iter().map(|r| r.0[k])) * cell)
        .collect();
    Ok(CellSums {
        sums,
        subdivided: rows.iter().map(|r| r.1).sum(),
        skipped: rows.iter().map(|r| r.2).sum(),
    })
}

/// Midpoint integral of the zero density over the unit square on an
/// `m x m` cell-centred grid.
pub fn zero_density_integral(set: &LatticeSet, m: usize) -> Result<(f64, usize, usize)> {
    if set.classes.is_empty() {
        return Err(Error::EmptySpectrum(set.n));
    }
    let sums = integrate_cells(set, m, 1, |mom, out| {
        out[0] = density_from_moments(mom)?;
        Ok(())
    })?;
    Ok((sums.sums[0], sums.subdivided, sums.skipped))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KacRiceParams {
    /// Grid cells per side; defaults to `40 ceil(sqrt n)`.
    pub mq: Option<usize>,
    pub tolerance: f64,
}

impl Default for KacRiceParams {
    fn default() -> Self {
        KacRiceParams {
            mq: None,
            tolerance: DEFAULT_CONVERGENCE_TOL,
        }
    }
}

pub fn default_mq(n: u64) -> usize {
    DEFAULT_MQ_FACTOR * (n as f64).sqrt().ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KacRiceReport {
    pub n: u64,
    #[serde(rename = "N")]
    pub n_points: usize,
    pub nu4: f64,
    pub q: u64,
    pub mq: usize,
    /// Integral of the zero density on the `mq` grid.
    pub integral: f64,
    /// Same integral on the doubled grid.
    pub integral_refined: f64,
    /// `2 (Q_n - 1)`, the length of the deterministic nodal grid.
    pub grid_term: f64,
    pub total: f64,
    pub leading: f64,
    /// `leading * C_n`.
    pub correction_pred: f64,
    /// Relative change of the integral when the grid is doubled.
    pub convergence: f64,
    /// Absolute error bound on `integral`, `2 |integral_refined - integral|`.
    /// Point singularities of the density make the midpoint rule first
    /// order, in which case the error of the coarse grid is exactly twice
    /// the doubling difference.
    pub error_estimate: f64,
    pub subdivided_cells: usize,
    pub skipped_cells: usize,
}

impl KacRiceReport {
    /// `total - leading`.
    pub fn measured_correction(&self) -> f64 {
        self.total - self.leading
    }
}

/// `E[L_n] = int K_1 + 2 (Q_n - 1)`, with a grid-doubling convergence check.
pub fn kac_rice_expected_length(set: &LatticeSet, params: &KacRiceParams) -> Result<KacRiceReport> {
    let mq = params.mq.unwrap_or_else(|| default_mq(set.n));
    if mq == 0 {
        return Err(Error::InvalidArgument("mq must be positive".into()));
    }
    let (integral, sub1, skip1) = zero_density_integral(set, mq)?;
    let (integral_refined, sub2, skip2) = zero_density_integral(set, 2 * mq)?;
    let leading = leading_term(set.n);
    // measured against the expected-length scale so that fields with almost
    // no interior length do not report spurious relative changes
    let convergence = (integral_refined - integral).abs()
        / integral_refined.abs().max(integral.abs()).max(leading);
    if convergence > params.tolerance {
        return Err(Error::NonConvergent {
            rel_change: convergence,
            tolerance: params.tolerance,
        });
    }
    let q = grid_number(set.n)?;
    let grid_term = 2.0 * (q as f64 - 1.0);
    Ok(KacRiceReport {
        n: set.n,
        n_points: set.size(),
        nu4: angular_stats(set).nu4,
        q,
        mq,
        integral,
        integral_refined,
        grid_term,
        total: integral + grid_term,
        leading,
        correction_pred: leading * correction_term(set),
        convergence,
        error_estimate: 2.0 * (integral_refined - integral).abs(),
        subdivided_cells: sub1 + sub2,
        skipped_cells: skip1 + skip2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentIntegral {
    pub name: &'static str,
    /// Integral over the whole square.
    pub value: f64,
    /// Integral restricted to the nonsingular squares (absent for the exact
    /// trigonometric quadratures).
    pub value_nonsingular: Option<f64>,
    /// First-order prediction; absent where only an `O(1/N^2)` bound exists.
    pub theory: Option<f64>,
    pub residual: Option<f64>,
    /// `residual * N`.
    pub scaled_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub n: u64,
    #[serde(rename = "N")]
    pub n_points: usize,
    pub nu4: f64,
    pub m4: f64,
    /// Nodes per axis of the exact trigonometric quadrature.
    pub exact_nodes: usize,
    /// Cells per axis of the midpoint quadrature.
    pub midpoint_cells: usize,
    pub singular_measure: f64,
    pub integrals: Vec<MomentIntegral>,
}

impl MomentReport {
    pub fn get(&self, name: &str) -> Option<&MomentIntegral> {
        self.integrals.iter().find(|i| i.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParams {
    /// Midpoint cells per axis; defaults to `6 ceil(sqrt n)`.
    pub cells: Option<usize>,
    pub c0: f64,
    pub eps0: f64,
}

impl Default for MomentParams {
    fn default() -> Self {
        MomentParams {
            cells: None,
            c0: DEFAULT_C0,
            eps0: DEFAULT_EPS0,
        }
    }
}

/// Exact-quadrature node count `8 floor(sqrt n) + 3`: every frequency of
/// `s, s^2, s^3` is an integer below half of it.
pub fn exact_quadrature_nodes(n: u64) -> usize {
    8 * n.isqrt() as usize + 3
}

/// `s_n` as the trigonometric polynomial over the classes.
pub fn s_trig(set: &LatticeSet, x: (f64, f64)) -> f64 {
    4.0 / set.size() as f64
        * set
            .classes
            .iter()
            .map(|&(a, b)| {
                let c1 = (2.0 * PI * a as f64 * x.0).cos();
                let c2 = (2.0 * PI * b as f64 * x.1).cos();
                c1 + c2 - c1 * c2
            })
            .sum::<f64>()
}

/// Exact integrals of `s, s^2, s^3` by the uniform rule on the period grid.
pub fn exact_s_moments(set: &LatticeSet) -> [f64; 3] {
    let m = exact_quadrature_nodes(set.n);
    let nodes: Vec<f64> = (0..m).map(|i| i as f64 / m as f64).collect();
    let big_n = set.size() as f64;
    // per class: cos(2 pi mu x) along each axis
    let c1: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| {
            set.classes
                .iter()
                .map(|&(a, _)| (2.0 * PI * a as f64 * x).cos())
                .collect()
        })
        .collect();
    let c2: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| {
            set.classes
                .iter()
                .map(|&(_, b)| (2.0 * PI * b as f64 * x).cos())
                .collect()
        })
        .collect();
    let rows: Vec<[f64; 3]> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut acc = [0.0; 3];
            for j in 0..m {
                let s = 4.0 / big_n
                    * c1[i]
                        .iter()
                        .zip(&c2[j])
                        .map(|(a, b)| a + b - a * b)
                        .sum::<f64>();
                acc[0] += s;
                acc[1] += s * s;
                acc[2] += s * s * s;
            }
            acc
        })
        .collect();
    let w = 1.0 / (m * m) as f64;
    [0, 1, 2].map(|k| kahan_sum(rows.iter().map(|r| r[k])) * w)
}

/// The eight moment integrals entering the integral of `L_n`, with their
/// first-order predictions.
pub fn moment_integrals(set: &LatticeSet, params: &MomentParams) -> Result<MomentReport> {
    if set.classes.is_empty() {
        return Err(Error::EmptySpectrum(set.n));
    }
    let stats = angular_stats(set);
    let big_n = set.size() as f64;
    let [s1, s2, s3] = exact_s_moments(set);
    let cells = params
        .cells
        .unwrap_or(6 * (set.n as f64).sqrt().ceil() as usize);
    let partition = singular_partition(set, params.c0, params.eps0, DEFAULT_PROBES)?;
    // full-domain values in slots 0..5, nonsingular-only in 5..10
    let sums = integrate_cells(set, cells, 10, |mom, out| {
        let tr = mom.gamma.trace();
        let vals = [
            tr,
            mom.s * tr,
            mom.gamma.trace_of_square(),
            tr * tr,
            tr * tr * tr,
        ];
        let keep = if partition.contains_singular(mom.x) {
            0.0
        } else {
            1.0
        };
        for k in 0..5 {
            out[k] = vals[k];
            out[k + 5] = keep * vals[k];
        }
        Ok(())
    })?;
    let entry = |name, value: f64, nonsing: Option<f64>, theory: Option<f64>| {
        let residual = theory.map(|t| value - t);
        MomentIntegral {
            name,
            value,
            value_nonsingular: nonsing,
            theory,
            residual,
            scaled_residual: residual.map(|r| r * big_n),
        }
    };
    let m4 = stats.m4;
    let g = &sums.sums;
    let integrals = vec![
        entry("s", s1, None, Some(0.0)),
        entry("s2", s2, None, Some(5.0 / big_n)),
        entry("s3", s3, None, None),
        entry("tr_gamma", g[0], Some(g[5]), Some(-6.0 / big_n)),
        entry("s_tr_gamma", g[1], Some(g[6]), Some(2.0 / big_n)),
        entry(
            "tr_gamma2",
            g[2],
            Some(g[7]),
            Some(4.0 / big_n * (1.0 + 32.0 * m4)),
        ),
        entry(
            "tr_gamma_sq",
            g[3],
            Some(g[8]),
            Some(4.0 / big_n * (64.0 * m4 - 3.0)),
        ),
        entry("tr_gamma_cubed", g[4], Some(g[9]), None),
    ];
    Ok(MomentReport {
        n: set.n,
        n_points: set.size(),
        nu4: stats.nu4,
        m4,
        exact_nodes: exact_quadrature_nodes(set.n),
        midpoint_cells: cells,
        singular_measure: partition.measure,
        integrals,
    })
}
