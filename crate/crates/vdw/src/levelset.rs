//! Reduction of the level-set condition `B2(x, y) = G` to a polynomial in
//! `u = y^2`, its solution by radicals, and orbit tracing with topology
//! classification over the symmetry-reduced first quadrant.
//!
//! The u-polynomial coefficients are built by programmatic expansion of the
//! exact identity
//!
//! ```text
//! eval(coeffs, u) = (B2(x, sqrt(u)) - G) * D(x, u),
//! D(x, u) = ((x + l/2)^2 + u)^2 * ((x - l/2)^2 + u)^2,
//! ```
//!
//! for arbitrary separation `l`, rather than from any fixed-`l` expansion.
//! The quartic term `K_l - G` vanishes exactly on the level `G = K_l`, where
//! the reduction drops to a cubic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{self, SystemConfig};
use crate::roots::{self, EPS_POS};

/// Relative residual admitted for orbit membership:
/// |B2(x, y) - G| <= EPS_ORBIT * max(1, |G|).
pub const EPS_ORBIT: f64 = 1e-7;

/// Coefficients of the degree <= 4 polynomial in `u = y^2` at fixed
/// `(x, G, l)`, ascending order (`c[k]` multiplies u^k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UCoefficients {
    pub c: [f64; 5],
    /// Set when `|c[4]|` falls below the degeneracy threshold and the cubic
    /// path applies (exactly the level G = K_l).
    pub degenerate: bool,
}

impl UCoefficients {
    pub fn eval(&self, u: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }
}

/// Expand `(B2(x, sqrt(u)) - G) * D(x, u)` into the quartic coefficients.
///
/// With `a = (x + l/2)^2`, `b = (x - l/2)^2` and `m = K_l - G` the numerator
/// over the common denominator is
///
/// ```text
/// (b+u)^2 + (a+u)^2 - 2(a+u)(b+u)^2 - 2(b+u)(a+u)^2 + m (a+u)^2 (b+u)^2.
/// ```
pub fn u_coefficients(cfg: &SystemConfig, g: f64, x: f64) -> UCoefficients {
    let half = cfg.separation() / 2.0;
    let a = (x + half) * (x + half);
    let b = (x - half) * (x - half);
    let m = cfg.pair_constant() - g;

    let sum = a + b;
    let sym2 = a * a + 4.0 * a * b + b * b;
    let prod = a * b;

    let c4 = m;
    let c3 = -4.0 + 2.0 * sum * m;
    let c2 = 2.0 - 6.0 * sum + sym2 * m;
    let c1 = 2.0 * sum - 2.0 * sym2 + 2.0 * prod * sum * m;
    let c0 = (a * a + b * b) - 2.0 * prod * sum + prod * prod * m;

    let c = [c0, c1, c2, c3, c4];
    let max = c.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
    let degenerate = c4.abs() <= roots::DEGENERACY_EPS * max;
    UCoefficients { c, degenerate }
}

/// The cleared denominator `D(x, u)`, the product of the two squared
/// distances, each squared. Multiplying `B2 - G` by it yields the
/// u-polynomial; exposed for the identity checks.
pub fn clearing_factor(cfg: &SystemConfig, x: f64, u: f64) -> f64 {
    let half = cfg.separation() / 2.0;
    let s1 = (x + half) * (x + half) + u;
    let s2 = (x - half) * (x - half) + u;
    (s1 * s1) * (s2 * s2)
}

/// Admissible `u >= 0` values of the u-polynomial: radical solve (quartic,
/// or cubic on the degenerate level `G = K_l`), real extraction, positivity
/// clamp.
///
/// Dispatch follows the threshold-consistent degree rather than the nominal
/// one: far from the particles the lower coefficients grow like `x^8`, and a
/// leading term that has fallen below the relative threshold is solved at
/// the reduced degree instead of being treated as an error.
pub fn solve_for_u(coeffs: &UCoefficients) -> Result<Vec<f64>> {
    let [c0, c1, c2, c3, c4] = coeffs.c;
    let poly = roots::Polynomial::new(coeffs.c.to_vec())?;
    let rs = match poly.degree() {
        4 => roots::solve_quartic(c4, c3, c2, c1, c0)?,
        3 => roots::solve_cubic(c3, c2, c1, c0)?,
        2 => roots::solve_quadratic(c2, c1, c0)?,
        1 => roots::solve_power_composed(&poly, 1)?,
        _ => return Ok(Vec::new()),
    };
    let scale = rs.roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let reals = roots::extract_real(&rs, scale);
    Ok(reals
        .into_iter()
        .filter(|&u| u >= -EPS_POS)
        .map(|u| u.max(0.0))
        .collect())
}

/// Build and solve the u-polynomial at one x column.
pub fn admissible_u_at(cfg: &SystemConfig, g: f64, x: f64) -> Result<Vec<f64>> {
    if !g.is_finite() || !x.is_finite() {
        return Err(Error::domain("level G and column x must be finite"));
    }
    solve_for_u(&u_coefficients(cfg, g, x))
}

/// Topology of an orbit in the closed first quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    Empty,
    Point,
    OneBranch,
    TwoBranches,
    Other(usize),
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Topology::Empty => write!(f, "Empty"),
            Topology::Point => write!(f, "Point"),
            Topology::OneBranch => write!(f, "OneBranch"),
            Topology::TwoBranches => write!(f, "TwoBranches"),
            Topology::Other(n) => write!(f, "Other({n})"),
        }
    }
}

/// Whether a result came from the radical pipeline or from bisection only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Algebraic,
    OracleOnly,
}

/// One sampled level-set point in the first quadrant, `y = sqrt(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub branch_id: usize,
}

/// A connected run of orbit points at consecutive x columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitBranch {
    pub id: usize,
    pub points: Vec<OrbitPoint>,
}

/// Sampled level set grouped into branches, with a topology label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub l: f64,
    pub g: f64,
    pub topology: Topology,
    pub provenance: Provenance,
    pub branches: Vec<OrbitBranch>,
}

impl OrbitResult {
    pub fn total_points(&self) -> usize {
        self.branches.iter().map(|b| b.points.len()).sum()
    }
}

struct OpenBranch {
    id: usize,
    points: Vec<OrbitPoint>,
    last_dy: f64,
    extended: bool,
}

/// Group per-column admissible points into branches by continuity and
/// classify.
///
/// Linking: a candidate extends the nearest open branch from the previous
/// column when the Euclidean jump stays below `5 * (dx + |dy_prev|)`, the
/// branch's last step serving as the slope estimate; a branch of a single
/// point has no slope yet and links by the candidate's own jump instead.
/// Leftover candidates start new branches; branches not extended close.
/// Branches never merge, so the two root sheets of an oval stay distinct.
pub(crate) fn assemble_orbit<I>(
    cfg: &SystemConfig,
    g: f64,
    columns: I,
    provenance: Provenance,
) -> OrbitResult
where
    I: IntoIterator<Item = (f64, Vec<f64>)>,
{
    let tol = EPS_ORBIT * g.abs().max(1.0);
    let mut open: Vec<OpenBranch> = Vec::new();
    let mut closed: Vec<OpenBranch> = Vec::new();
    let mut next_id = 0usize;

    for (x, us) in columns {
        // Membership filter: keep only points that really satisfy B2 = G.
        let candidates: Vec<(f64, f64)> = us
            .into_iter()
            .filter_map(|u| {
                let y = u.sqrt();
                match cfg.total_2d(x, y) {
                    Ok(v) if (v - g).abs() <= tol => Some((y, u)),
                    _ => None,
                }
            })
            .collect();

        for b in open.iter_mut() {
            b.extended = false;
        }

        // Greedy nearest assignment, one candidate per branch.
        let mut taken = vec![false; candidates.len()];
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (bi, b) in open.iter().enumerate() {
            let last = *b.points.last().expect("open branch is non-empty");
            for (ci, &(y, _)) in candidates.iter().enumerate() {
                let dx = x - last.x;
                let dy = y - last.y;
                let jump = dx.hypot(dy);
                let slope = if b.points.len() >= 2 {
                    b.last_dy.abs()
                } else {
                    dy.abs()
                };
                if jump <= 5.0 * (dx.abs() + slope) {
                    pairs.push((jump, bi, ci));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (_, bi, ci) in pairs {
            if open[bi].extended || taken[ci] {
                continue;
            }
            let (y, u) = candidates[ci];
            let last_y = open[bi].points.last().unwrap().y;
            let id = open[bi].id;
            open[bi].points.push(OrbitPoint {
                x,
                y,
                u,
                branch_id: id,
            });
            open[bi].last_dy = y - last_y;
            open[bi].extended = true;
            taken[ci] = true;
        }

        for (ci, &(y, u)) in candidates.iter().enumerate() {
            if taken[ci] {
                continue;
            }
            let id = next_id;
            next_id += 1;
            open.push(OpenBranch {
                id,
                points: vec![OrbitPoint {
                    x,
                    y,
                    u,
                    branch_id: id,
                }],
                last_dy: 0.0,
                extended: true,
            });
        }

        let (still_open, done): (Vec<_>, Vec<_>) = open.drain(..).partition(|b| b.extended);
        open = still_open;
        closed.extend(done);
    }
    closed.append(&mut open);
    closed.sort_by_key(|b| b.id);

    let branches: Vec<OrbitBranch> = closed
        .into_iter()
        .map(|b| OrbitBranch {
            id: b.id,
            points: b.points,
        })
        .collect();

    let total: usize = branches.iter().map(|b| b.points.len()).sum();
    let topology = match (branches.len(), total) {
        (0, _) => Topology::Empty,
        (1, 1) => Topology::Point,
        (1, _) => Topology::OneBranch,
        (2, _) => Topology::TwoBranches,
        (n, _) => Topology::Other(n),
    };

    OrbitResult {
        l: cfg.separation(),
        g,
        topology,
        provenance,
        branches,
    }
}

/// Trace the orbit `O(l, G)` on a uniform x grid over `[0, x_max]`.
///
/// Levels below the global minimum come back as `Topology::Empty`.
pub fn trace_orbit(cfg: &SystemConfig, g: f64, x_max: f64, samples: usize) -> Result<OrbitResult> {
    let m = potential::global_minimum(cfg);
    trace_orbit_with_min(cfg, g, x_max, samples, m.value)
}

fn trace_orbit_with_min(
    cfg: &SystemConfig,
    g: f64,
    x_max: f64,
    samples: usize,
    m_l: f64,
) -> Result<OrbitResult> {
    if !g.is_finite() {
        return Err(Error::domain("level G must be finite"));
    }
    if samples < 2 {
        return Err(Error::domain("samples must be >= 2"));
    }
    if !x_max.is_finite() || x_max <= 0.0 {
        return Err(Error::domain("x_max must be > 0"));
    }

    if g < m_l - EPS_ORBIT * g.abs().max(1.0) {
        return Ok(OrbitResult {
            l: cfg.separation(),
            g,
            topology: Topology::Empty,
            provenance: Provenance::Algebraic,
            branches: Vec::new(),
        });
    }

    let step = x_max / (samples - 1) as f64;
    let mut columns = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = i as f64 * step;
        columns.push((x, admissible_u_at(cfg, g, x)?));
    }
    Ok(assemble_orbit(cfg, g, columns, Provenance::Algebraic))
}

/// Default scan extent: `1 + l/2` past the largest x where any admissible u
/// exists, found by expanding the probe until 50 consecutive empty columns.
pub fn default_x_max(cfg: &SystemConfig, g: f64) -> f64 {
    let l = cfg.separation();
    let probe = ((1.0 + l) / 400.0).max(2e-3);
    let base = 1.0 + l / 2.0;

    let mut largest: Option<f64> = None;
    let mut consecutive_empty = 0usize;
    let mut x = 0.0f64;
    // Hard cap keeps levels just below K_l (huge rings) from running away.
    while x < 1000.0 {
        let occupied = admissible_u_at(cfg, g, x)
            .map(|us| !us.is_empty())
            .unwrap_or(false);
        if occupied {
            largest = Some(x);
            consecutive_empty = 0;
        } else {
            consecutive_empty += 1;
            if consecutive_empty >= 50 && x > 1.0 + l {
                break;
            }
        }
        x += probe;
    }
    base + largest.unwrap_or(0.0)
}

/// [`trace_orbit`] per level, collecting `(G, topology)` pairs.
///
/// `x_max = None` picks [`default_x_max`] independently for each level.
pub fn topology_scan(
    cfg: &SystemConfig,
    g_values: &[f64],
    x_max: Option<f64>,
    samples: usize,
) -> Result<Vec<(f64, Topology)>> {
    let m = potential::global_minimum(cfg);
    let mut out = Vec::with_capacity(g_values.len());
    for &g in g_values {
        let xm = x_max.unwrap_or_else(|| default_x_max(cfg, g));
        let orbit = trace_orbit_with_min(cfg, g, xm, samples, m.value)?;
        out.push((g, orbit.topology));
    }
    Ok(out)
}
