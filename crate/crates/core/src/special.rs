//! Small dense helpers: symmetric 2x2 matrices, the complete elliptic
//! integral of the second kind, and the mean norm of a centred bivariate
//! normal vector.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Symmetric 2x2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 {
        xx: 1.0,
        xy: 0.0,
        yy: 1.0,
    };

    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Sym2 { xx, xy, yy }
    }

    pub fn outer(v: [f64; 2]) -> Self {
        Sym2::new(v[0] * v[0], v[0] * v[1], v[1] * v[1])
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// `tr(A^2)`, also the squared Frobenius norm.
    pub fn trace_of_square(&self) -> f64 {
        self.xx * self.xx + 2.0 * self.xy * self.xy + self.yy * self.yy
    }

    pub fn frobenius(&self) -> f64 {
        self.trace_of_square().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Sym2::new(self.xx * c, self.xy * c, self.yy * c)
    }

    pub fn add(&self, o: &Sym2) -> Self {
        Sym2::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }

    pub fn sub(&self, o: &Sym2) -> Self {
        Sym2::new(self.xx - o.xx, self.xy - o.xy, self.yy - o.yy)
    }

    pub fn max_abs_diff(&self, o: &Sym2) -> f64 {
        (self.xx - o.xx)
            .abs()
            .max((self.xy - o.xy).abs())
            .max((self.yy - o.yy).abs())
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        let rad = half_diff.hypot(self.xy);
        (mean + rad, mean - rad)
    }

    /// Symmetric square root of a PSD matrix (negative eigenvalues clamped).
    pub fn sqrt_psd(&self) -> Sym2 {
        let (l1, l2) = self.eigenvalues();
        let (s1, s2) = (l1.max(0.0).sqrt(), l2.max(0.0).sqrt());
        if (l1 - l2).abs() < 1e-300 {
            return Sym2::new(s1, 0.0, s1);
        }
        // A^(1/2) = (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det)) for 2x2 PSD
        let root_det = s1 * s2;
        let t = (s1 + s2).max(f64::MIN_POSITIVE);
        Sym2::new(
            (self.xx + root_det) / t,
            self.xy / t,
            (self.yy + root_det) / t,
        )
    }
}

/// Complete elliptic integral of the second kind `E(m)`, parameter
/// `m = k^2`, by the arithmetic-geometric mean.
pub fn ellipe(m: f64) -> f64 {
    assert!((0.0..=1.0).contains(&m), "parameter {m} outside [0, 1]");
    if m == 1.0 {
        return 1.0;
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..64 {
        let next_a = 0.5 * (a + b);
        // c_{k+1} = c_k^2 / (4 a_{k+1}) avoids the cancellation in (a - b) / 2
        c = c * c / (4.0 * next_a);
        b = (a * b).sqrt();
        a = next_a;
        pow *= 2.0;
        sum += pow * c * c;
        if c < 1e-17 * a {
            break;
        }
    }
    PI / (2.0 * a) * (1.0 - sum)
}

/// Relative tolerance for negative eigenvalues accepted as rounding noise.
const PSD_TOL: f64 = 1e-9;

fn checked_eigenvalues(sigma: &Sym2) -> Result<(f64, f64)> {
    let (l1, l2) = sigma.eigenvalues();
    let scale = l1.abs().max(1.0);
    if !(l1.is_finite() && l2.is_finite()) || l2 < -PSD_TOL * scale {
        return Err(Error::NotPsd { min_eigenvalue: l2 });
    }
    Ok((l1.max(0.0), l2.max(0.0)))
}

/// `E|Z|` for `Z ~ N(0, sigma)` in the plane:
/// `sqrt(2/pi) sqrt(l1) E(1 - l2/l1)` with eigenvalues `l1 >= l2 >= 0`.
pub fn expected_norm_bivariate(sigma: &Sym2) -> Result<f64> {
    let (l1, l2) = checked_eigenvalues(sigma)?;
    if l1 == 0.0 {
        return Ok(0.0);
    }
    let m = (1.0 - l2 / l1).clamp(0.0, 1.0);
    Ok((2.0 / PI).sqrt() * l1.sqrt() * ellipe(m))
}

/// The same mean by angular quadrature,
/// `sqrt(pi/2) (1/2pi) int sqrt(l1 cos^2 + l2 sin^2) dphi`, with the
/// composite midpoint rule on `nodes` points (spectrally accurate for this
/// smooth periodic integrand).
pub fn expected_norm_bivariate_quadrature(sigma: &Sym2, nodes: usize) -> Result<f64> {
    let (l1, l2) = checked_eigenvalues(sigma)?;
    let h = 2.0 * PI / nodes as f64;
    let mean = (0..nodes)
        .map(|i| {
            let phi = (i as f64 + 0.5) * h;
            let (s, c) = phi.sin_cos();
            (l1 * c * c + l2 * s * s).sqrt()
        })
        .sum::<f64>()
        / nodes as f64;
    Ok((PI / 2.0).sqrt() * mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipe_reference_values() {
        // scipy.special.ellipe
        assert!((ellipe(0.0) - PI / 2.0).abs() < 1e-15);
        assert!((ellipe(0.5) - 1.350_643_881_047_675_5).abs() < 1e-14);
        assert!((ellipe(0.9) - 1.104_774_732_704_073).abs() < 1e-14);
        assert!((ellipe(0.99) - 1.015_993_545_025_223_8).abs() < 1e-13);
        assert_eq!(ellipe(1.0), 1.0);
        assert!((ellipe(1.0 - 1e-15) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_and_half_normal() {
        let id = expected_norm_bivariate(&Sym2::IDENTITY).unwrap();
        assert!((id - (PI / 2.0).sqrt()).abs() < 1e-14);
        let lam = 3.7;
        let half = expected_norm_bivariate(&Sym2::new(lam, 0.0, 0.0)).unwrap();
        assert!((half - (2.0 * lam / PI).sqrt()).abs() < 1e-14);
        assert_eq!(expected_norm_bivariate(&Sym2::default()).unwrap(), 0.0);
        assert!(matches!(
            expected_norm_bivariate(&Sym2::new(1.0, 0.0, -0.5)),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for s in [
            Sym2::new(4.0, 0.0, 1.0),
            Sym2::new(2.0, 0.7, 0.5),
            Sym2::new(1e-3, 0.0, 5.0),
        ] {
            let a = expected_norm_bivariate(&s).unwrap();
            let b = expected_norm_bivariate_quadrature(&s, 4096).unwrap();
            assert!((a - b).abs() < 1e-12 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let s = Sym2::new(2.0, 0.7, 0.5);
        let r = s.sqrt_psd();
        let sq = Sym2::new(
            r.xx * r.xx + r.xy * r.xy,
            r.xx * r.xy + r.xy * r.yy,
            r.xy * r.xy + r.yy * r.yy,
        );
        assert!(sq.max_abs_diff(&s) < 1e-14);
    }
}
