//! Sums of two squares: factorization, lattice points on circles, the grid
//! number and angular statistics of the lattice point set.

use serde::Serialize;

use crate::error::{Error, Result};

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFactorization {
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// True when every prime congruent to 3 mod 4 has an even exponent.
    pub fn is_sum_of_two_squares(&self) -> bool {
        self.factors.iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
    }

    /// Number of representations as an ordered sum of two squares, counting
    /// signs. Zero when the number is not a sum of two squares.
    pub fn r2(&self) -> u64 {
        if !self.is_sum_of_two_squares() {
            return 0;
        }
        4 * self
            .factors
            .iter()
            .filter(|&&(p, _)| p % 4 == 1)
            .map(|&(_, e)| u64::from(e) + 1)
            .product::<u64>()
    }
}

/// Trial division.
pub fn factorize(n: u64) -> PrimeFactorization {
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    PrimeFactorization { factors }
}

pub fn is_representable(n: u64) -> bool {
    n >= 1 && factorize(n).is_sum_of_two_squares()
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Integer points on the circle of radius `sqrt(n)`.
///
/// `classes` holds one representative `(m1, m2)` with `m1 > 0` and `m2 > 0`
/// per sign class; points with a zero coordinate live in `axis_points` only,
/// since the corresponding Dirichlet modes vanish identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSet {
    pub n: u64,
    pub points: Vec<(i64, i64)>,
    pub classes: Vec<(i64, i64)>,
    pub axis_points: Vec<(i64, i64)>,
}

impl LatticeSet {
    /// `N_n`, the number of lattice points (equal to `r_2(n)`).
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn is_square(&self) -> bool {
        !self.axis_points.is_empty()
    }

    /// Returns the set with every point reflected through the second axis,
    /// `(m1, m2) -> (-m1, m2)`. The result is again a valid lattice set (as a
    /// set it is unchanged) but the point order differs.
    pub fn reflected(&self) -> LatticeSet {
        LatticeSet {
            n: self.n,
            points: self.points.iter().map(|&(a, b)| (-a, b)).collect(),
            classes: self.classes.clone(),
            axis_points: self.axis_points.iter().map(|&(a, b)| (-a, b)).collect(),
        }
    }
}

pub fn enumerate_lattice_set(n: u64) -> Result<LatticeSet> {
    if n == 0 || !is_representable(n) {
        return Err(Error::NotRepresentable(n));
    }
    let r = n.isqrt() as i64;
    let mut points = Vec::new();
    let mut classes = Vec::new();
    let mut axis_points = Vec::new();
    for a in -r..=r {
        let rest = n - (a * a) as u64;
        let b = rest.isqrt() as i64;
        if (b * b) as u64 != rest {
            continue;
        }
        points.push((a, b));
        if b != 0 {
            points.push((a, -b));
        }
        if a == 0 || b == 0 {
            axis_points.push((a, b));
            if b != 0 {
                axis_points.push((a, -b));
            }
        } else if a > 0 {
            classes.push((a, b));
        }
    }
    points.sort_unstable();
    axis_points.sort_unstable();
    classes.sort_unstable();
    Ok(LatticeSet {
        n,
        points,
        classes,
        axis_points,
    })
}

/// `Q_n = 2^floor(a/2) * prod q_k^h_k`, the common divisor of all lattice
/// coordinates, which forces a deterministic nodal grid when `Q_n > 1`.
pub fn grid_number(n: u64) -> Result<u64> {
    let fact = factorize(n);
    if n == 0 || !fact.is_sum_of_two_squares() {
        return Err(Error::NotRepresentable(n));
    }
    Ok(fact
        .factors
        .iter()
        .map(|&(p, e)| match p % 4 {
            2 => p.pow(e / 2),
            3 => p.pow(e / 2),
            _ => 1,
        })
        .product())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularStats {
    /// Fourth Fourier coefficient of the angular measure of the full set.
    pub nu4: f64,
    /// `sum over classes of m1^4 / (n^2 N)`.
    pub m4: f64,
    pub n_points: usize,
}

/// `nu4` is evaluated from `(m1^4 - 6 m1^2 m2^2 + m2^4) / n^2 = cos(4 theta)`
/// summed in exact integer arithmetic and divided once.
pub fn angular_stats(set: &LatticeSet) -> AngularStats {
    let n = i128::from(set.n);
    let big_n = set.size() as i128;
    let cos4_sum: i128 = set
        .points
        .iter()
        .map(|&(a, b)| {
            let (a2, b2) = (i128::from(a * a), i128::from(b * b));
            a2 * a2 - 6 * a2 * b2 + b2 * b2
        })
        .sum();
    let m4_sum: i128 = set.classes.iter().map(|&(a, _)| i128::from(a).pow(4)).sum();
    let denom = (n * n * big_n) as f64;
    AngularStats {
        nu4: cos4_sum as f64 / denom,
        m4: m4_sum as f64 / denom,
        n_points: set.size(),
    }
}

/// `(1/N) sum exp(i k theta_mu)` over the full set, computed from the exact
/// Gaussian-integer power `(m1 + i m2)^k` divided by `n^(k/2)`.
pub fn angular_fourier(set: &LatticeSet, k: u32) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for &(a, b) in &set.points {
        let (mut pr, mut pi) = (1i128, 0i128);
        for _ in 0..k {
            let (a, b) = (i128::from(a), i128::from(b));
            (pr, pi) = (pr * a - pi * b, pr * b + pi * a);
        }
        re += pr as f64;
        im += pi as f64;
    }
    let scale = (set.n as f64).powf(f64::from(k) / 2.0) * set.size() as f64;
    (re / scale, im / scale)
}

/// All representable `n <= n_max` whose `nu4` lies within `tol` of `target`,
/// ordered by lattice-set size (largest first), ties by `n`.
pub fn find_angular_target(target: f64, tol: f64, n_max: u64) -> Result<Vec<u64>> {
    if !(tol >= 0.0) || !target.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be nonnegative and target finite (got tol={tol}, target={target})"
        )));
    }
    let mut hits: Vec<(usize, u64)> = (1..=n_max)
        .filter(|&n| is_representable(n))
        .filter_map(|n| {
            let set = enumerate_lattice_set(n).ok()?;
            let stats = angular_stats(&set);
            ((stats.nu4 - target).abs() <= tol).then_some((set.size(), n))
        })
        .collect();
    hits.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(hits.into_iter().map(|(_, n)| n).collect())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of the first coordinates of all lattice points; equals `Q_n`.
pub fn first_coordinate_gcd(set: &LatticeSet) -> u64 {
    set.points
        .iter()
        .fold(0, |g, &(a, _)| gcd(g, a.unsigned_abs()))
}
