//! Exact counts of spectral correlations, semi-correlations, diagonal tuples
//! and quasi-correlations. All counts are over ordered tuples of the full
//! lattice point set.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::arithmetic::{enumerate_lattice_set, is_representable, LatticeSet};
use crate::error::{Error, Result};

/// Elementary steps any single count may take.
pub const WORK_BUDGET: f64 = 1e9;
pub const MAX_SEMI_LENGTH: usize = 12;
pub const MAX_DIAGONAL_LENGTH: usize = 6;

fn half_length(l: usize) -> Result<usize> {
    if l == 0 {
        return Err(Error::InvalidArgument(
            "tuple length must be at least 2".into(),
        ));
    }
    if l % 2 == 1 {
        return Err(Error::OddLength(l));
    }
    Ok(l / 2)
}

fn check_budget(projected: f64) -> Result<()> {
    if projected > WORK_BUDGET {
        Err(Error::BudgetExceeded {
            projected,
            budget: WORK_BUDGET,
        })
    } else {
        Ok(())
    }
}

/// Distribution of sums of `k` first coordinates, offset-indexed so that
/// index `i` holds the count for `t = i - offset`.
struct FirstCoordinateSums {
    counts: Vec<u128>,
    offset: i64,
}

impl FirstCoordinateSums {
    fn build(set: &LatticeSet, k: usize) -> Self {
        let r = set.n.isqrt() as i64;
        let mut single: HashMap<i64, u128> = HashMap::new();
        for &(a, _) in &set.points {
            *single.entry(a).or_default() += 1;
        }
        let mut single: Vec<(i64, u128)> = single.into_iter().collect();
        single.sort_unstable();

        let mut counts = vec![1u128];
        let mut offset = 0i64;
        for _ in 0..k {
            let next_offset = offset + r;
            let mut next = vec![0u128; counts.len() + 2 * r as usize];
            for (i, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let t = i as i64 - offset;
                for &(a, m) in &single {
                    next[(t + a + next_offset) as usize] += c * m;
                }
            }
            counts = next;
            offset = next_offset;
        }
        FirstCoordinateSums { counts, offset }
    }

    fn get(&self, t: i64) -> u128 {
        let i = t + self.offset;
        if i < 0 || i as usize >= self.counts.len() {
            0
        } else {
            self.counts[i as usize]
        }
    }
}

/// `|M_l(n)|`: ordered `l`-tuples whose first coordinates sum to zero.
pub fn count_semi_correlations(set: &LatticeSet, l: usize) -> Result<u128> {
    let k = half_length(l)?;
    if l > MAX_SEMI_LENGTH {
        return Err(Error::LengthTooLarge {
            len: l,
            max: MAX_SEMI_LENGTH,
        });
    }
    let r = set.n.isqrt() as f64;
    check_budget((k * k) as f64 * set.size() as f64 * (2.0 * r + 1.0))?;
    let sums = FirstCoordinateSums::build(set, k);
    let total = (-(sums.offset)..=sums.offset)
        .map(|t| sums.get(t) * sums.get(-t))
        .sum();
    Ok(total)
}

/// Vector-sum distribution of `k`-tuples.
fn vector_sums(set: &LatticeSet, k: usize) -> HashMap<(i64, i64), u128> {
    let mut dist: HashMap<(i64, i64), u128> = HashMap::from([((0, 0), 1)]);
    for _ in 0..k {
        let mut next: HashMap<(i64, i64), u128> = HashMap::with_capacity(dist.len() * 4);
        for (&(x, y), &c) in &dist {
            for &(a, b) in &set.points {
                *next.entry((x + a, y + b)).or_default() += c;
            }
        }
        dist = next;
    }
    dist
}

fn vector_budget(set: &LatticeSet, k: usize) -> f64 {
    let n = set.size() as f64;
    (1..=k).map(|j| n.powi(j as i32)).sum()
}

/// `|R_l(n)|`: ordered `l`-tuples summing to the zero vector, counted by
/// meeting in the middle on `l/2`-tuple sums.
pub fn count_correlations(set: &LatticeSet, l: usize) -> Result<u128> {
    let k = half_length(l)?;
    check_budget(vector_budget(set, k))?;
    let dist = vector_sums(set, k);
    Ok(dist
        .iter()
        .map(|(&(x, y), &c)| c * dist.get(&(-x, -y)).copied().unwrap_or(0))
        .sum())
}

/// Ordered `l`-tuples with `0 < |sum| < n^(1/2 - eps)`.
pub fn count_quasi_correlations(set: &LatticeSet, l: usize, eps: f64) -> Result<u128> {
    let k = half_length(l)?;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "quasi-correlation exponent must lie in (0, 1/2), got {eps}"
        )));
    }
    let radius = (set.n as f64).powf(0.5 - eps);
    let r = radius.ceil() as i64;
    let disc: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            let q = (x * x + y * y) as f64;
            q > 0.0 && q.sqrt() < radius
        })
        .collect();
    let support = (set.size() as f64).powi(k as i32);
    check_budget(vector_budget(set, k) + support * disc.len().max(1) as f64)?;
    let dist = vector_sums(set, k);
    let mut total = 0u128;
    for (&(x, y), &c) in &dist {
        for &(u, w) in &disc {
            if let Some(&d) = dist.get(&(u - x, w - y)) {
                total += c * d;
            }
        }
    }
    Ok(total)
}

/// True when the positions of `tuple` can be perfectly matched into
/// antipodal pairs, i.e. every point occurs exactly as often as its negative
/// (no lattice point is its own negative).
fn has_antipodal_matching(tuple: &[(i64, i64)]) -> bool {
    tuple.iter().all(|&p| {
        let neg = (-p.0, -p.1);
        tuple.iter().filter(|&&q| q == p).count() == tuple.iter().filter(|&&q| q == neg).count()
    })
}

/// All perfect matchings of `0..l`.
fn perfect_matchings(l: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(acc.clone());
            return;
        };
        for i in 0..rest.len() {
            let mut remaining = rest.to_vec();
            let partner = remaining.remove(i);
            acc.push((first, partner));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let free: Vec<usize> = (0..l).collect();
    let mut out = Vec::new();
    go(&free, &mut Vec::new(), &mut out);
    out
}

/// Count of tuples satisfying `mu_i = -mu_j` for every edge in `edges`:
/// `N^components` when the constraint graph is bipartite, else zero (an odd
/// cycle would force `mu = -mu`, impossible off the origin).
fn antipodal_constraint_count(l: usize, edges: &[(usize, usize)], n_points: u128) -> u128 {
    let mut parent: Vec<usize> = (0..l).collect();
    let mut parity = vec![0u8; l];
    fn find(parent: &mut [usize], parity: &mut [u8], x: usize) -> (usize, u8) {
        if parent[x] == x {
            return (x, 0);
        }
        let (root, p) = find(parent, parity, parent[x]);
        parent[x] = root;
        parity[x] ^= p;
        (root, parity[x])
    }
    let mut components = l;
    for &(i, j) in edges {
        let (ri, pi) = find(&mut parent, &mut parity, i);
        let (rj, pj) = find(&mut parent, &mut parity, j);
        if ri == rj {
            if pi == pj {
                return 0;
            }
        } else {
            parent[ri] = rj;
            parity[ri] = pi ^ pj ^ 1;
            components -= 1;
        }
    }
    n_points.pow(components as u32)
}

/// Inclusion-exclusion over the perfect matchings of `l` positions.
pub fn count_diagonal_inclusion_exclusion(n_points: usize, l: usize) -> Result<u128> {
    half_length(l)?;
    if l > MAX_DIAGONAL_LENGTH {
        return Err(Error::LengthTooLarge {
            len: l,
            max: MAX_DIAGONAL_LENGTH,
        });
    }
    let matchings = perfect_matchings(l);
    let m = matchings.len();
    let mut plus = 0u128;
    let mut minus = 0u128;
    for mask in 1u32..(1 << m) {
        let edges: Vec<(usize, usize)> = (0..m)
            .filter(|&i| mask & (1 << i) != 0)
            .flat_map(|i| matchings[i].iter().copied())
            .collect();
        let c = antipodal_constraint_count(l, &edges, n_points as u128);
        if mask.count_ones() % 2 == 1 {
            plus += c;
        } else {
            minus += c;
        }
    }
    Ok(plus - minus)
}

/// `|D_l(n)|`: ordered tuples cancelling in antipodal pairs. Exhaustive
/// matching test per tuple for `l <= 4`, inclusion-exclusion for `l = 6`.
pub fn count_diagonal(set: &LatticeSet, l: usize) -> Result<u128> {
    half_length(l)?;
    if l > MAX_DIAGONAL_LENGTH {
        return Err(Error::LengthTooLarge {
            len: l,
            max: MAX_DIAGONAL_LENGTH,
        });
    }
    if l == 6 {
        return count_diagonal_inclusion_exclusion(set.size(), l);
    }
    let n = set.size();
    check_budget((n as f64).powi(l as i32) * l as f64)?;
    let mut idx = vec![0usize; l];
    let mut tuple = vec![(0i64, 0i64); l];
    let mut count = 0u128;
    'outer: loop {
        for (slot, &i) in tuple.iter_mut().zip(&idx) {
            *slot = set.points[i];
        }
        if has_antipodal_matching(&tuple) {
            count += 1;
        }
        for pos in (0..l).rev() {
            idx[pos] += 1;
            if idx[pos] < n {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        break;
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiCount {
    pub eps: f64,
    pub count: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub n: u64,
    #[serde(rename = "N")]
    pub n_points: usize,
    pub l: usize,
    pub m_count: u128,
    pub r_count: Option<u128>,
    pub d_count: Option<u128>,
    pub quasi_counts: Vec<QuasiCount>,
    /// `|M_l| / N^(l/2)`.
    pub ratio_m: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub with_correlations: bool,
    pub with_diagonal: bool,
    pub quasi_eps: Vec<f64>,
}

pub fn correlation_report(
    set: &LatticeSet,
    l: usize,
    opts: &ReportOptions,
) -> Result<CorrelationReport> {
    let m_count = count_semi_correlations(set, l)?;
    let r_count = opts
        .with_correlations
        .then(|| count_correlations(set, l))
        .transpose()?;
    let d_count = (opts.with_diagonal && l <= MAX_DIAGONAL_LENGTH)
        .then(|| count_diagonal(set, l))
        .transpose()?;
    let quasi_counts = opts
        .quasi_eps
        .iter()
        .map(|&eps| {
            Ok(QuasiCount {
                eps,
                count: count_quasi_correlations(set, l, eps)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport {
        n: set.n,
        n_points: set.size(),
        l,
        m_count,
        r_count,
        d_count,
        quasi_counts,
        ratio_m: m_count as f64 / (set.size() as f64).powi((l / 2) as i32),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: u64,
    #[serde(rename = "N")]
    pub n_points: usize,
    pub l: usize,
    #[serde(rename = "M_count")]
    pub m_count: u128,
    #[serde(rename = "R_count")]
    pub r_count: Option<u128>,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdFraction {
    #[serde(rename = "C")]
    pub c: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub fractions: Vec<ThresholdFraction>,
}

pub const SCAN_CSV_HEADER: &str = "n,N,l,M_count,R_count,ratio";

impl ScanTable {
    /// CSV with the fixed header, one row per `n`, followed by `#`-prefixed
    /// lines with the threshold fractions.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{SCAN_CSV_HEADER}")?;
        for row in &self.rows {
            let r = row.r_count.map(|r| r.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                row.n, row.n_points, row.l, row.m_count, r, row.ratio
            )?;
        }
        for f in &self.fractions {
            writeln!(out, "# fraction C={} {}", f.c, f.fraction)?;
        }
        Ok(())
    }

    /// One JSON object per row, then one object holding the fractions.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in &self.rows {
            writeln!(out, "{}", serde_json::to_string(row)?)?;
        }
        writeln!(
            out,
            "{}",
            serde_json::json!({ "fractions": self.fractions })
        )?;
        Ok(())
    }
}

/// Semi-correlation scan over representable `n` in `[n_min, n_max]` whose
/// class list is nonempty. Rows are computed in parallel and returned in
/// increasing `n`.
pub fn scan_semi_correlations(
    n_min: u64,
    n_max: u64,
    l: usize,
    thresholds: &[f64],
    with_correlations: bool,
) -> Result<ScanTable> {
    half_length(l)?;
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "empty range [{n_min}, {n_max}]"
        )));
    }
    let candidates: Vec<u64> = (n_min.max(1)..=n_max)
        .filter(|&n| is_representable(n))
        .collect();
    let rows = candidates
        .par_iter()
        .map(|&n| -> Result<Option<ScanRow>> {
            let set = enumerate_lattice_set(n)?;
            if set.classes.is_empty() {
                return Ok(None);
            }
            let m_count = count_semi_correlations(&set, l)?;
            let r_count = with_correlations
                .then(|| count_correlations(&set, l))
                .transpose()?;
            Ok(Some(ScanRow {
                n,
                n_points: set.size(),
                l,
                m_count,
                r_count,
                ratio: m_count as f64 / (set.size() as f64).powi((l / 2) as i32),
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let fractions = thresholds
        .iter()
        .map(|&c| ThresholdFraction {
            c,
            fraction: if rows.is_empty() {
                0.0
            } else {
                rows.iter().filter(|r| r.ratio <= c).count() as f64 / rows.len() as f64
            },
        })
        .collect();
    Ok(ScanTable { rows, fractions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(set: &LatticeSet, l: usize, pred: impl Fn(i64, i64) -> bool) -> u128 {
        let n = set.size();
        let mut idx = vec![0usize; l];
        let mut count = 0;
        loop {
            let (sx, sy) = idx.iter().fold((0, 0), |(x, y), &i| {
                (x + set.points[i].0, y + set.points[i].1)
            });
            if pred(sx, sy) {
                count += 1;
            }
            let mut pos = l;
            loop {
                if pos == 0 {
                    return count;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    #[test]
    fn semi_correlations_small() {
        let e5 = enumerate_lattice_set(5).unwrap();
        assert_eq!(count_semi_correlations(&e5, 2).unwrap(), 16);
        let e2 = enumerate_lattice_set(2).unwrap();
        assert_eq!(
            count_semi_correlations(&e2, 4).unwrap(),
            brute_force(&e2, 4, |x, _| x == 0)
        );
        assert_eq!(count_semi_correlations(&e5, 3), Err(Error::OddLength(3)));
        assert!(matches!(
            count_semi_correlations(&e5, 14),
            Err(Error::LengthTooLarge { .. })
        ));
    }

    #[test]
    fn pair_counts_match_multiplicities() {
        for n in (1..=100).filter(|&n| is_representable(n)) {
            let set = enumerate_lattice_set(n).unwrap();
            let mut mult: HashMap<i64, u128> = HashMap::new();
            for &(a, _) in &set.points {
                *mult.entry(a).or_default() += 1;
            }
            let expected: u128 = mult
                .iter()
                .map(|(&t, &c)| c * mult.get(&-t).copied().unwrap_or(0))
                .sum();
            assert_eq!(count_semi_correlations(&set, 2).unwrap(), expected);
            assert_eq!(count_correlations(&set, 2).unwrap(), set.size() as u128);
            assert_eq!(count_diagonal(&set, 2).unwrap(), set.size() as u128);
        }
    }

    #[test]
    fn correlations_match_brute_force() {
        for n in [5, 25, 65] {
            let set = enumerate_lattice_set(n).unwrap();
            assert_eq!(
                count_correlations(&set, 4).unwrap(),
                brute_force(&set, 4, |x, y| x == 0 && y == 0)
            );
        }
    }

    #[test]
    fn diagonal_routes_agree() {
        for n in [2, 5, 25, 65] {
            let set = enumerate_lattice_set(n).unwrap();
            let exhaustive = count_diagonal(&set, 4).unwrap();
            let ie = count_diagonal_inclusion_exclusion(set.size(), 4).unwrap();
            assert_eq!(exhaustive, ie);
            let nn = set.size() as u128;
            assert_eq!(ie, 3 * nn * (nn - 1));
            assert!(exhaustive <= count_correlations(&set, 4).unwrap());
        }
        // l = 6 on a small set against exhaustive matching
        let e5 = enumerate_lattice_set(5).unwrap();
        let mut idx = [0usize; 6];
        let mut brute = 0u128;
        loop {
            let t: Vec<_> = idx.iter().map(|&i| e5.points[i]).collect();
            if has_antipodal_matching(&t) {
                brute += 1;
            }
            let mut pos = 6;
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < e5.size() {
                    break false;
                }
                idx[pos] = 0;
            };
            if done {
                break;
            }
        }
        assert_eq!(count_diagonal(&e5, 6).unwrap(), brute);
    }

    #[test]
    fn quasi_correlations() {
        let e5 = enumerate_lattice_set(5).unwrap();
        let radius = 5f64.powf(0.4);
        let brute = brute_force(&e5, 2, |x, y| {
            let q = ((x * x + y * y) as f64).sqrt();
            q > 0.0 && q < radius
        });
        assert_eq!(count_quasi_correlations(&e5, 2, 0.1).unwrap(), brute);
        // radius below 1 leaves no nonzero lattice vector
        let set = enumerate_lattice_set(1105).unwrap();
        assert_eq!(count_quasi_correlations(&set, 2, 0.499).unwrap(), 0);
        assert!(count_quasi_correlations(&set, 2, 0.5).is_err());
        assert_eq!(
            count_quasi_correlations(&set, 5, 0.2),
            Err(Error::OddLength(5))
        );
    }

    #[test]
    fn scan_fractions_monotone() {
        let table = scan_semi_correlations(2, 400, 4, &[2.0, 4.0, 8.0, 16.0], true).unwrap();
        assert!(table
            .fractions
            .windows(2)
            .all(|w| w[0].fraction <= w[1].fraction));
        for row in &table.rows {
            let set = enumerate_lattice_set(row.n).unwrap();
            let d = count_diagonal(&set, 4).unwrap();
            let r = row.r_count.unwrap();
            assert!(d <= r && r <= row.m_count, "n = {}", row.n);
        }
        let mut csv = Vec::new();
        table.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().starts_with(SCAN_CSV_HEADER));
    }
}
