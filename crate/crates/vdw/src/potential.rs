//! The pair potential `B(d) = 1/d^4 - 2/d^2` and the total potential felt by
//! a free particle near two particles fixed at `(-l/2, 0, 0)` and
//! `(+l/2, 0, 0)`, including the constant pair term `K_l`.
//!
//! Everything is written in terms of squared distances, which makes the
//! mirror symmetries `B2(x, y) = B2(-x, y) = B2(x, -y)` hold bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{self, SearchBox};

/// Squared distances below this raise [`Error::Singularity`] instead of
/// producing huge values that would leak into downstream root filters.
const SINGULARITY_EPS: f64 = 1e-24;

/// The fixed-particle pair: separation `l > 0` along the first axis, with the
/// particles implied at `(-l/2, 0, 0)` and `(+l/2, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    l: f64,
}

/// The pair potential at distance `d > 0`: `1/d^4 - 2/d^2`.
///
/// Infinite repulsion at short range, minimum -1 at `d = 1`, and decay to
/// zero from below at long range.
pub fn pair_potential(d: f64) -> Result<f64> {
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::domain(format!("pair distance must be > 0, got {d}")));
    }
    let s = d * d;
    Ok(pair_from_squared(s))
}

/// Pair potential in terms of the squared distance.
#[inline]
fn pair_from_squared(s: f64) -> f64 {
    1.0 / (s * s) - 2.0 / s
}

impl SystemConfig {
    pub fn new(l: f64) -> Result<Self> {
        if !l.is_finite() || l <= 0.0 {
            return Err(Error::domain(format!("separation l must be > 0, got {l}")));
        }
        Ok(SystemConfig { l })
    }

    pub fn separation(&self) -> f64 {
        self.l
    }

    /// Positions of the two fixed particles on the first axis.
    pub fn particles(&self) -> [(f64, f64); 2] {
        [(-self.l / 2.0, 0.0), (self.l / 2.0, 0.0)]
    }

    /// The constant pair term `K_l = 1/l^4 - 2/l^2`.
    pub fn pair_constant(&self) -> f64 {
        let s = self.l * self.l;
        pair_from_squared(s)
    }

    /// Squared distances from `(x, y)` to the two fixed particles, written as
    /// `(x ± l/2)^2 + y2` with `y2 = y^2` supplied by the caller.
    #[inline]
    fn squared_distances(&self, x: f64, y2: f64) -> (f64, f64) {
        let half = self.l / 2.0;
        let p1 = x + half;
        let p2 = x - half;
        (p1 * p1 + y2, p2 * p2 + y2)
    }

    fn pair_sum_from_y2(&self, x: f64, y2: f64) -> Result<f64> {
        let (s1, s2) = self.squared_distances(x, y2);
        if s1 < SINGULARITY_EPS || s2 < SINGULARITY_EPS {
            return Err(Error::Singularity { x, y: y2.sqrt() });
        }
        Ok(pair_from_squared(s1) + pair_from_squared(s2))
    }

    fn total_from_y2(&self, x: f64, y2: f64) -> Result<f64> {
        Ok(self.pair_sum_from_y2(x, y2)? + self.pair_constant())
    }

    /// `B2(x, y)` without the constant pair term, i.e. `B2 - K_l`.
    ///
    /// Same derivatives as [`SystemConfig::total_2d`]; at small separations
    /// `K_l` grows like `l^-4` and would otherwise swamp finite differences
    /// taken through the total.
    pub fn pair_sum_2d(&self, x: f64, y: f64) -> Result<f64> {
        self.pair_sum_from_y2(x, y * y)
    }

    /// Total potential `B2(x, y)` in the symmetry-reduced plane.
    pub fn total_2d(&self, x: f64, y: f64) -> Result<f64> {
        self.total_from_y2(x, y * y)
    }

    /// Total potential `B2(x, y, z)`; depends on `(x, y^2 + z^2)` only.
    pub fn total_3d(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        self.total_from_y2(x, y * y + z * z)
    }

    /// Analytic gradient of `B2` in the plane.
    pub fn gradient_2d(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let y2 = y * y;
        let (s1, s2) = self.squared_distances(x, y2);
        if s1 < SINGULARITY_EPS || s2 < SINGULARITY_EPS {
            return Err(Error::Singularity { x, y });
        }
        let half = self.l / 2.0;
        // d/ds (1/s^2 - 2/s) = 2(s - 1)/s^3, chained with ds/dx = 2 p.
        let f1 = 2.0 * (s1 - 1.0) / (s1 * s1 * s1);
        let f2 = 2.0 * (s2 - 1.0) / (s2 * s2 * s2);
        let gx = 2.0 * (x + half) * f1 + 2.0 * (x - half) * f2;
        let gy = 2.0 * y * (f1 + f2);
        Ok((gx, gy))
    }

    /// Analytic second derivatives `(dxx, dxy, dyy)` of `B2`.
    pub fn hessian_2d(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        let y2 = y * y;
        let (s1, s2) = self.squared_distances(x, y2);
        if s1 < SINGULARITY_EPS || s2 < SINGULARITY_EPS {
            return Err(Error::Singularity { x, y });
        }
        let half = self.l / 2.0;
        let mut dxx = 0.0;
        let mut dyy = 0.0;
        let mut dxy = 0.0;
        for (p, s) in [(x + half, s1), (x - half, s2)] {
            let fp = 2.0 * (s - 1.0) / (s * s * s);
            let fpp = 2.0 * (3.0 - 2.0 * s) / (s * s * s * s);
            dxx += 4.0 * p * p * fpp + 2.0 * fp;
            dyy += 4.0 * y2 * fpp + 2.0 * fp;
            dxy += 4.0 * p * y * fpp;
        }
        Ok((dxx, dxy, dyy))
    }

    /// Hessian determinant of `B2` under the doubled-matrix normalization:
    /// `det(2 * second-derivative matrix) = 4 (dxx dyy - dxy^2)`.
    ///
    /// This is the normalization under which the value at the perpendicular
    /// stationary point `(0, sqrt(4 - l^2)/2)` is exactly `-64 l^2 (l^2 - 4)`
    /// (see [`crate::critical::hessian_at_perpendicular`]). The sign, and
    /// hence every minimum/saddle classification, is the same as for the
    /// plain determinant; use [`SystemConfig::hessian_2d`] for the raw
    /// entries.
    pub fn hessian_det_2d(&self, x: f64, y: f64) -> Result<f64> {
        let (dxx, dxy, dyy) = self.hessian_2d(x, y)?;
        Ok(4.0 * (dxx * dyy - dxy * dxy))
    }
}

/// How a [`GlobalMinimum`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinimumProvenance {
    /// Perpendicular stationary point `(0, sqrt(4 - l^2)/2)`, valid for
    /// `l < 2` where its Hessian determinant is strictly positive.
    ClosedForm,
    /// Grid-refinement search; no closed form covers `l >= 2`.
    GridSearch,
}

/// Value and location of the global minimum `m_l` of `B2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalMinimum {
    pub value: f64,
    pub x: f64,
    pub y: f64,
    pub provenance: MinimumProvenance,
}

/// The global minimum `m_l = min B2`, the lowest level with a non-empty
/// orbit. Closed form for `l < 2`, grid-refined search otherwise.
pub fn global_minimum(cfg: &SystemConfig) -> GlobalMinimum {
    let l = cfg.separation();
    if l < 2.0 {
        let y = (4.0 - l * l).sqrt() / 2.0;
        // Both squared distances equal exactly 1 there, so the value is
        // B(1) + B(1) + K_l = -2 + K_l; evaluating it this way avoids the
        // last-ulp cancellation noise of the generic path and keeps the
        // minimum exact where K_l is exact.
        let value = -2.0 + cfg.pair_constant();
        GlobalMinimum {
            value,
            x: 0.0,
            y,
            provenance: MinimumProvenance::ClosedForm,
        }
    } else {
        let f = |x: f64, y: f64| cfg.total_2d(x, y).unwrap_or(f64::INFINITY);
        // The minimum sits within pair-law range of a particle (or at the
        // midpoint for l near 2); a box around the positive-x particle keeps
        // the coarse grid fine enough at any separation.
        let bounds = SearchBox::new((l / 2.0 - 2.5).max(0.0), l / 2.0 + 2.5, 0.0, 2.5);
        let ((x, y), value) = oracle::grid_refine_minimize(f, bounds, 40);
        GlobalMinimum {
            value,
            x,
            y,
            provenance: MinimumProvenance::GridSearch,
        }
    }
}
