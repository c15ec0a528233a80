//! Closed-form critical points of the two-center potential and their
//! classification through the Hessian determinant.
//!
//! Stationarity along the perpendicular bisector reduces to
//! `4 y^2 + l^2 - 4 = 0`; along the particle axis, with `u = x^2`, to the
//! cubic `-64 u^3 + (64 - 16 l^2) u^2 + (20 l^4 + 160 l^2) u + (20 l^4 - 3 l^6) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::SystemConfig;
use crate::roots;

/// Gradient norm admitted when accepting a candidate stationary point.
pub const GRADIENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalKind {
    /// The midpoint `(0, 0)`, stationary for every separation.
    Origin,
    /// On the particle axis, `(x*, 0)`.
    Collinear,
    /// On the perpendicular bisector, `(0, y*)`.
    Perpendicular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Minimum,
    Saddle,
    Maximum,
    Degenerate,
}

/// Whether the location came from a closed form or was only computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalProvenance {
    ClosedForm,
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub kind: CriticalKind,
    pub classification: Classification,
    /// Doubled-matrix Hessian determinant, as in
    /// [`SystemConfig::hessian_det_2d`].
    pub hess_det: f64,
    pub provenance: CriticalProvenance,
}

/// Height of the perpendicular stationary point, `sqrt(4 - l^2) / 2`.
///
/// Real only for `l < 2`; the quadratic `4 y^2 + l^2 - 4 = 0` has no real
/// root beyond that.
pub fn perpendicular_height(l: f64) -> f64 {
    (4.0 - l * l).sqrt() / 2.0
}

/// Ascending coefficients of the collinear stationarity cubic in `u = x^2`.
pub fn collinear_stationarity_cubic(l: f64) -> [f64; 4] {
    let l2 = l * l;
    let l4 = l2 * l2;
    let l6 = l4 * l2;
    [
        20.0 * l4 - 3.0 * l6,
        20.0 * l4 + 160.0 * l2,
        64.0 - 16.0 * l2,
        -64.0,
    ]
}

fn classify(cfg: &SystemConfig, x: f64, y: f64) -> (Classification, f64) {
    let (dxx, dxy, dyy) = cfg
        .hessian_2d(x, y)
        .expect("critical points are away from the particles");
    let det = 4.0 * (dxx * dyy - dxy * dxy);
    let tol = 1e-9 * (dxx.abs() * dyy.abs() + dxy * dxy + 1.0);
    let class = if det > tol && dxx > 0.0 {
        Classification::Minimum
    } else if det > tol && dxx < 0.0 {
        Classification::Maximum
    } else if det < -tol {
        Classification::Saddle
    } else {
        Classification::Degenerate
    };
    (class, det)
}

fn gradient_ok(cfg: &SystemConfig, x: f64, y: f64, tol: f64) -> bool {
    match (cfg.gradient_2d(x, y), cfg.total_2d(x, y)) {
        (Ok((gx, gy)), Ok(v)) => gx.hypot(gy) <= tol * (1.0 + v.abs()),
        _ => false,
    }
}

/// All critical points of `B2` in the closed first quadrant representative
/// set: the origin always, the perpendicular point for `l < 2`, and the
/// collinear points (positive-x representatives) for `l > 2`. Every emitted
/// point is gradient-verified and Hessian-classified.
pub fn critical_points(cfg: &SystemConfig) -> Vec<CriticalPoint> {
    let l = cfg.separation();
    let mut out = Vec::new();

    let (class, det) = classify(cfg, 0.0, 0.0);
    out.push(CriticalPoint {
        x: 0.0,
        y: 0.0,
        kind: CriticalKind::Origin,
        classification: class,
        hess_det: det,
        provenance: CriticalProvenance::Computed,
    });

    if l < 2.0 {
        let y = perpendicular_height(l);
        debug_assert!(gradient_ok(cfg, 0.0, y, GRADIENT_TOL));
        let (class, det) = classify(cfg, 0.0, y);
        out.push(CriticalPoint {
            x: 0.0,
            y,
            kind: CriticalKind::Perpendicular,
            classification: class,
            hess_det: det,
            provenance: CriticalProvenance::ClosedForm,
        });
    }

    if l > 2.0 {
        let [c0, c1, c2, c3] = collinear_stationarity_cubic(l);
        let rs = roots::solve_cubic(c3, c2, c1, c0).expect("leading -64 never degenerates");
        for &u in &rs.positive_real_roots {
            if u <= 0.0 {
                continue;
            }
            // The cubic's variable is u = x^2; verify the sqrt reading by the
            // gradient, falling back to the alternative power if it fails.
            let candidates = [u.sqrt(), u * u];
            let Some(&x) = candidates
                .iter()
                .find(|&&x| gradient_ok(cfg, x, 0.0, GRADIENT_TOL))
            else {
                continue;
            };
            let (class, det) = classify(cfg, x, 0.0);
            out.push(CriticalPoint {
                x,
                y: 0.0,
                kind: CriticalKind::Collinear,
                classification: class,
                hess_det: det,
                provenance: CriticalProvenance::ClosedForm,
            });
        }
    }
    out
}

/// Closed-form doubled-matrix Hessian determinant at the perpendicular
/// stationary point: `-64 l^2 (l^2 - 4)`, strictly positive on `l in (0, 2)`.
pub fn hessian_at_perpendicular(cfg: &SystemConfig) -> Result<f64> {
    let l = cfg.separation();
    if l >= 2.0 {
        return Err(Error::domain(format!(
            "perpendicular stationary point requires l < 2, got {l}"
        )));
    }
    let value = -64.0 * l * l * (l * l - 4.0);
    debug_assert!({
        let direct = cfg.hessian_det_2d(0.0, perpendicular_height(l)).unwrap();
        (direct - value).abs() <= 1e-6 * value.abs()
    });
    Ok(value)
}

/// Perpendicular point per separation; as `l -> 0` the pair acts as one
/// doubled well and the sequence converges to `(0, 1)`.
pub fn virtual_particle_limit(l_sequence: &[f64]) -> Result<Vec<(f64, f64)>> {
    l_sequence
        .iter()
        .map(|&l| {
            if !(l > 0.0 && l < 2.0) {
                return Err(Error::domain(format!(
                    "virtual-particle limit needs l in (0, 2), got {l}"
                )));
            }
            Ok((0.0, perpendicular_height(l)))
        })
        .collect()
}
