//! Independent numerical verification: bracketed bisection, finite
//! differences, and grid-refinement minimization.
//!
//! Nothing here touches the radical solvers; these routines are the ground
//! truth the algebraic pipeline is checked against.

use crate::levelset::{self, OrbitResult};
use crate::potential::SystemConfig;
use crate::Result;

/// Default grid resolution for scans over potential space. The narrowest
/// orbit features at small separations are a few times 1e-2 wide.
pub const DEFAULT_GRID_N: usize = 2000;

/// Absolute bisection convergence tolerance.
pub const BISECT_TOL: f64 = 1e-12;

/// |f| threshold under which a stationary point of `f` counts as a tangential
/// root (double root that never changes sign).
pub const TANGENCY_TOL: f64 = 1e-9;

/// All real roots of `f` on `[lo, hi]`, located by scanning `grid_n`
/// subintervals for sign changes and bisecting each bracket to [`BISECT_TOL`].
///
/// Tangential roots (where `f` touches zero without changing sign) are found
/// separately: sign changes of a central-difference derivative are bisected
/// and the candidate kept when `|f| <= TANGENCY_TOL`. The two root lists are
/// merged, deduplicated and sorted ascending.
pub fn bisect_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid_n: usize) -> Vec<f64> {
    assert!(lo < hi, "bisect_roots requires lo < hi");
    assert!(grid_n >= 2, "bisect_roots requires grid_n >= 2");

    let step = (hi - lo) / grid_n as f64;
    let mut roots = Vec::new();

    let mut x_prev = lo;
    let mut f_prev = f(x_prev);
    for i in 1..=grid_n {
        let x = lo + i as f64 * step;
        let fx = f(x);
        if f_prev == 0.0 {
            roots.push(x_prev);
        } else if f_prev * fx < 0.0 {
            roots.push(bisect(&f, x_prev, x, f_prev));
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        roots.push(x_prev);
    }

    // Tangency pass: bracket zeros of a finite-difference derivative, then
    // keep stationary points where |f| is essentially zero.
    let h = step / 8.0;
    let df = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let mut x_prev = lo + h;
    let mut d_prev = df(x_prev);
    for i in 1..grid_n {
        let x = lo + i as f64 * step + h;
        if x >= hi {
            break;
        }
        let dx = df(x);
        if d_prev * dx < 0.0 {
            let xc = bisect(&df, x_prev, x, d_prev);
            if f(xc).abs() <= TANGENCY_TOL {
                roots.push(xc);
            }
        }
        x_prev = x;
        d_prev = dx;
    }

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|b, a| (*b - *a).abs() <= 1e-8 * a.abs().max(1.0));
    roots
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let mut sign_lo = f_lo.signum();
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_lo {
            lo = mid;
            sign_lo = fm.signum();
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central-difference gradient of a scalar field of two variables.
pub fn finite_diff_gradient<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, h: f64) -> (f64, f64) {
    assert!(h > 0.0);
    let gx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
    let gy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
    (gx, gy)
}

/// Central-difference second derivatives `(dxx, dxy, dyy)`.
pub fn finite_diff_hessian<F: Fn(f64, f64) -> f64>(
    f: F,
    x: f64,
    y: f64,
    h: f64,
) -> (f64, f64, f64) {
    assert!(h > 0.0);
    let f0 = f(x, y);
    let dxx = (f(x + h, y) - 2.0 * f0 + f(x - h, y)) / (h * h);
    let dyy = (f(x, y + h) - 2.0 * f0 + f(x, y - h)) / (h * h);
    let dxy =
        (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
    (dxx, dxy, dyy)
}

/// Axis-aligned search box for [`grid_refine_minimize`].
#[derive(Debug, Clone, Copy)]
pub struct SearchBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl SearchBox {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x1 > x0 && y1 > y0, "degenerate search box");
        SearchBox { x0, x1, y0, y1 }
    }

    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
}

/// Coarse grid scan followed by repeated refinement around the best cell.
///
/// Each level evaluates `f` on a uniform grid (box edges included), then
/// shrinks the box to a few cells around the best point, clamped to the
/// original box. Terminates when the box diameter drops below 1e-10 or
/// `levels` is exhausted. Returns the best point and its value.
pub fn grid_refine_minimize<F: Fn(f64, f64) -> f64>(
    f: F,
    bounds: SearchBox,
    levels: usize,
) -> ((f64, f64), f64) {
    assert!(levels >= 1);
    const N: usize = 48;

    let mut boxed = bounds;
    let mut best = ((boxed.x0, boxed.y0), f64::INFINITY);

    for _ in 0..levels {
        let dx = (boxed.x1 - boxed.x0) / N as f64;
        let dy = (boxed.y1 - boxed.y0) / N as f64;
        for i in 0..=N {
            let x = boxed.x0 + i as f64 * dx;
            for j in 0..=N {
                let y = boxed.y0 + j as f64 * dy;
                let v = f(x, y);
                if v < best.1 {
                    best = ((x, y), v);
                }
            }
        }
        let ((bx, by), _) = best;
        boxed = SearchBox {
            x0: (bx - 2.0 * dx).max(bounds.x0),
            x1: (bx + 2.0 * dx).min(bounds.x1),
            y0: (by - 2.0 * dy).max(bounds.y0),
            y1: (by + 2.0 * dy).min(bounds.y1),
        };
        if boxed.diameter() < 1e-10 {
            break;
        }
    }
    best
}

/// Outcome of one algebraic-vs-bisection comparison over a column grid.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub columns: usize,
    /// Columns where the admissible-u counts disagreed.
    pub count_mismatches: usize,
    /// Largest |u_algebraic - u_bisection| over matched roots.
    pub max_u_discrepancy: f64,
    /// Total admissible values found by the algebraic path.
    pub algebraic_roots: usize,
}

impl VerifyReport {
    /// True when counts matched everywhere and locations agree to `tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.count_mismatches == 0 && self.max_u_discrepancy <= tol
    }
}

/// Floor below which an admissible u is treated as the y = 0 axis point and
/// excluded from the comparison (the y-bisection scans y > 0 only).
const U_FLOOR: f64 = 1e-10;

/// Compare the radical level-set solve against bisection of
/// `B2(x, .) - G` in y, column by column over `[0, x_max]`.
///
/// Tangential (double) roots are counted once on both sides.
pub fn verify_levelset(
    cfg: &SystemConfig,
    g: f64,
    x_max: f64,
    columns: usize,
    grid_n: usize,
) -> Result<VerifyReport> {
    let y_max = x_max + 1.0;
    let y_lo = 1e-6;
    let mut report = VerifyReport {
        columns,
        count_mismatches: 0,
        max_u_discrepancy: 0.0,
        algebraic_roots: 0,
    };

    for i in 0..columns {
        let x = x_max * i as f64 / (columns - 1).max(1) as f64;
        let algebraic: Vec<f64> = levelset::admissible_u_at(cfg, g, x)?
            .into_iter()
            .filter(|&u| u > U_FLOOR)
            .collect();

        let f = |y: f64| match cfg.total_2d(x, y) {
            Ok(v) => v - g,
            Err(_) => f64::INFINITY,
        };
        let numeric: Vec<f64> = bisect_roots(f, y_lo, y_max, grid_n)
            .into_iter()
            .map(|y| y * y)
            .filter(|&u| u > U_FLOOR)
            .collect();

        report.algebraic_roots += algebraic.len();
        if algebraic.len() != numeric.len() {
            report.count_mismatches += 1;
            continue;
        }
        for (ua, un) in algebraic.iter().zip(numeric.iter()) {
            report.max_u_discrepancy = report.max_u_discrepancy.max((ua - un).abs());
        }
    }
    Ok(report)
}

/// Trace an orbit using only bisection; used by the CLI `verify` command as
/// the oracle-side counterpart of `levelset::trace_orbit`.
pub fn trace_orbit_bisection(
    cfg: &SystemConfig,
    g: f64,
    x_max: f64,
    samples: usize,
    grid_n: usize,
) -> OrbitResult {
    let y_max = x_max + 1.0;
    let y_lo = 1e-6;
    let columns = (0..samples).map(|i| {
        let x = x_max * i as f64 / (samples - 1).max(1) as f64;
        let f = |y: f64| match cfg.total_2d(x, y) {
            Ok(v) => v - g,
            Err(_) => f64::INFINITY,
        };
        let us: Vec<f64> = bisect_roots(f, y_lo, y_max, grid_n)
            .into_iter()
            .map(|y| y * y)
            .collect();
        (x, us)
    });
    levelset::assemble_orbit(cfg, g, columns, levelset::Provenance::OracleOnly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::SystemConfig;

    #[test]
    fn finds_simple_root() {
        let roots = bisect_roots(|u| u * u - 3.0, 0.0, 10.0, 1000);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 3.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn finds_tangential_double_root_of_potential() {
        // B2(0, y) + 3 at l = 1 touches zero at y = sqrt(3)/2 without a sign
        // change; only the tangency path can see it.
        let cfg = SystemConfig::new(1.0).unwrap();
        let f = |y: f64| cfg.total_2d(0.0, y).unwrap() + 3.0;
        let roots = bisect_roots(f, 1e-6, 5.0, 2000);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 3.0f64.sqrt() / 2.0).abs() < 1e-6);
    }

    #[test]
    fn agrees_with_radical_quartic_on_levelset_column() {
        // The u-polynomial at l = 1, G = -2, x = 0.3: bisection and the
        // Ferrari solve must report the same admissible set.
        let cfg = SystemConfig::new(1.0).unwrap();
        let coeffs = crate::levelset::u_coefficients(&cfg, -2.0, 0.3);
        let algebraic = crate::levelset::solve_for_u(&coeffs).unwrap();
        let numeric: Vec<f64> = bisect_roots(|u| coeffs.eval(u), 0.0, 10.0, 20_000)
            .into_iter()
            .filter(|&u| u >= 0.0)
            .collect();
        assert_eq!(algebraic.len(), numeric.len());
        for (a, b) in algebraic.iter().zip(numeric.iter()) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn bisection_tracer_reproduces_algebraic_topology() {
        let cfg = SystemConfig::new(1.0).unwrap();
        for g in [-2.75, -2.0, 0.0] {
            let x_max = crate::levelset::default_x_max(&cfg, g);
            let algebraic = crate::levelset::trace_orbit(&cfg, g, x_max, 200).unwrap();
            let numeric = trace_orbit_bisection(&cfg, g, x_max, 200, 2000);
            assert_eq!(numeric.provenance, crate::levelset::Provenance::OracleOnly);
            assert_eq!(numeric.topology, algebraic.topology, "G = {g}");
            assert_eq!(numeric.total_points(), algebraic.total_points(), "G = {g}");
        }
    }

    #[test]
    fn recovers_constructed_simple_roots() {
        // Polynomial built from known factors; every root recovered in-bracket.
        let targets = [-2.5, -0.75, 0.5, 1.25, 3.0];
        let p = |x: f64| targets.iter().map(|r| x - r).product::<f64>();
        let found = bisect_roots(p, -4.0, 4.0, 4000);
        assert_eq!(found.len(), targets.len());
        for (a, b) in found.iter().zip(targets.iter()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn gradient_stencils() {
        let (gx, gy) = finite_diff_gradient(|x, _| x * x, 3.0, 0.0, 1e-6);
        assert!((gx - 6.0).abs() < 1e-6);
        assert!(gy.abs() < 1e-9);

        let (gx, gy) = finite_diff_gradient(|x, y| x * y, 2.0, -1.5, 1e-6);
        assert!((gx + 1.5).abs() < 1e-7);
        assert!((gy - 2.0).abs() < 1e-7);
    }

    #[test]
    fn gradient_matches_analytic_potential() {
        let cfg = SystemConfig::new(1.0).unwrap();
        let f = |x: f64, y: f64| cfg.total_2d(x, y).unwrap();
        let (gx, gy) = finite_diff_gradient(f, 0.5, 0.7, 1e-5);
        let (ax, ay) = cfg.gradient_2d(0.5, 0.7).unwrap();
        assert!((gx - ax).abs() <= 1e-6 * ax.abs().max(1.0));
        assert!((gy - ay).abs() <= 1e-6 * ay.abs().max(1.0));
    }

    #[test]
    fn grid_refine_finds_quadratic_minimum() {
        let ((x, y), v) = grid_refine_minimize(
            |x, y| (x - 0.3).powi(2) + (y + 0.1).powi(2),
            SearchBox::new(-1.0, 1.0, -1.0, 1.0),
            40,
        );
        assert!((x - 0.3).abs() < 1e-8);
        assert!((y + 0.1).abs() < 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn grid_refine_finds_potential_minimum() {
        let cfg = SystemConfig::new(1.0).unwrap();
        let f = |x: f64, y: f64| cfg.total_2d(x, y).unwrap_or(f64::INFINITY);
        let ((x, y), v) = grid_refine_minimize(f, SearchBox::new(0.0, 2.0, 0.0, 2.0), 40);
        assert!((v + 3.0).abs() < 1e-8);
        assert!(x.abs() < 1e-6);
        assert!((y - 3.0f64.sqrt() / 2.0).abs() < 1e-6);
    }

    #[test]
    fn grid_refine_result_is_stationary() {
        let cfg = SystemConfig::new(1.3).unwrap();
        let f = |x: f64, y: f64| cfg.total_2d(x, y).unwrap_or(f64::INFINITY);
        let ((x, y), _) = grid_refine_minimize(f, SearchBox::new(0.0, 2.0, 0.0, 2.0), 40);
        let (gx, gy) = finite_diff_gradient(f, x, y.max(1e-4), 1e-5);
        assert!(gx.hypot(gy) < 1e-4, "gradient {gx} {gy}");
    }
}
