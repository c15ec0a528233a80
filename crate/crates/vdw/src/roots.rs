//! Solution by radicals of quadratic, cubic (Cardano) and quartic (Ferrari)
//! polynomials with real coefficients, plus power-composed polynomials
//! `A x^{nk} + ... ` reduced through `t = x^k`.
//!
//! All roots are produced as complex numbers; [`extract_real`] projects the
//! (numerically) real ones and merges near-duplicates. Every solver applies
//! one Newton step against the original polynomial to recover digits lost in
//! the depressed-form reductions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Imaginary-part tolerance, relative to the root-magnitude scale, for
/// treating a complex root as real.
pub const EPS_IM: f64 = 1e-9;
/// Merge radius for near-duplicate real roots.
pub const EPS_CLUSTER: f64 = 1e-8;
/// Slack below zero admitted (and clamped) when filtering positive roots.
pub const EPS_POS: f64 = 1e-10;
/// Residual bound factor: |p(r)| <= EPS_RESIDUAL * sum_k |a_k||r|^k.
pub const EPS_RESIDUAL: f64 = 1e-9;
/// A leading coefficient this small, relative to the largest coefficient
/// magnitude, counts as zero.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Real-coefficient polynomial, ascending order: `coeffs[k]` multiplies x^k.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Ascending coefficients; at least one entry, all finite.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("polynomial coefficients must be finite"));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest index whose coefficient stays above the degeneracy threshold.
    pub fn degree(&self) -> usize {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max == 0.0 {
            return 0;
        }
        self.coeffs
            .iter()
            .rposition(|c| c.abs() > DEGENERACY_EPS * max)
            .unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn derivative_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        acc
    }

    /// Scale sum_k |a_k| |z|^k used for relative residual bounds.
    pub fn residual_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut pow = 1.0;
        let mut s = 0.0;
        for c in &self.coeffs {
            s += c.abs() * pow;
            pow *= r;
        }
        s
    }
}

/// Complex roots of a polynomial, with the real/positive projections already
/// extracted under the module tolerances.
#[derive(Debug, Clone)]
pub struct RootSet {
    /// All complex roots, multiplicity included (length = degree).
    pub roots: Vec<Complex64>,
    /// Real projections of roots with |im| <= EPS_IM * scale, deduplicated
    /// within EPS_CLUSTER and sorted ascending.
    pub real_roots: Vec<f64>,
    /// Subset of `real_roots` with value >= -EPS_POS, clamped to >= 0.
    pub positive_real_roots: Vec<f64>,
}

impl RootSet {
    fn from_roots(roots: Vec<Complex64>) -> Self {
        debug_assert!(roots.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let real_roots = project_real(&roots, scale);
        let positive_real_roots = clamp_positive(&real_roots);
        RootSet {
            roots,
            real_roots,
            positive_real_roots,
        }
    }
}

fn project_real(roots: &[Complex64], scale: f64) -> Vec<f64> {
    let mut reals: Vec<f64> = roots
        .iter()
        .filter(|z| z.im.abs() <= EPS_IM * scale)
        .map(|z| z.re)
        .collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    merge_clusters(&reals)
}

fn merge_clusters(sorted: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len()
            && (sorted[j] - sorted[j - 1]).abs() <= EPS_CLUSTER * sorted[j].abs().max(1.0)
        {
            j += 1;
        }
        let cluster = &sorted[i..j];
        out.push(cluster.iter().sum::<f64>() / cluster.len() as f64);
        i = j;
    }
    out
}

fn clamp_positive(reals: &[f64]) -> Vec<f64> {
    reals
        .iter()
        .filter(|&&v| v >= -EPS_POS)
        .map(|&v| v.max(0.0))
        .collect()
}

/// Real projections of `rs` under an explicit coefficient-magnitude scale:
/// roots with |im| <= EPS_IM * scale, merged within EPS_CLUSTER, ascending.
pub fn extract_real(rs: &RootSet, scale: f64) -> Vec<f64> {
    assert!(scale > 0.0, "extract_real needs a positive scale");
    project_real(&rs.roots, scale)
}

fn check_leading(lead: f64, rest_max: f64, degree: usize) -> Result<()> {
    if lead.abs() <= DEGENERACY_EPS * rest_max.max(lead.abs()) || lead == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient { lead, degree });
    }
    Ok(())
}

fn ensure_finite(coeffs: &[f64]) -> Result<()> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("coefficients must be finite"));
    }
    Ok(())
}

/// One Newton step against the original polynomial, skipped near multiple
/// roots where the derivative loses significance.
fn polish(poly: &Polynomial, z: Complex64) -> Complex64 {
    let dp = poly.derivative_complex(z);
    let dscale: f64 = {
        let r = z.norm();
        let mut pow = 1.0;
        let mut s = 0.0;
        for (k, c) in poly.coeffs().iter().enumerate().skip(1) {
            s += k as f64 * c.abs() * pow;
            pow *= r;
        }
        s
    };
    if dp.norm() < 1e-12 * dscale.max(f64::MIN_POSITIVE) {
        return z;
    }
    let step = poly.eval_complex(z) / dp;
    let z1 = z - step;
    if z1.re.is_finite() && z1.im.is_finite() {
        z1
    } else {
        z
    }
}

fn polish_all(coeffs: &[f64], roots: &mut [Complex64]) {
    let poly = Polynomial::new(coeffs.to_vec()).expect("finite coefficients");
    for z in roots.iter_mut() {
        *z = polish(&poly, *z);
    }
}

/// Both complex roots of `a2 x^2 + a1 x + a0`, using the sign-matched
/// numerator form so the small root never suffers cancellation.
pub fn solve_quadratic(a2: f64, a1: f64, a0: f64) -> Result<RootSet> {
    ensure_finite(&[a2, a1, a0])?;
    check_leading(a2, a1.abs().max(a0.abs()), 2)?;
    Ok(RootSet::from_roots(quadratic_roots(a2, a1, a0)))
}

fn quadratic_roots(a2: f64, a1: f64, a0: f64) -> Vec<Complex64> {
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // q = -(a1 + sign(a1) * sq) / 2 keeps the numerator away from zero.
        let q = -0.5 * (a1 + sq.copysign(if a1 == 0.0 { 1.0 } else { a1 }));
        if q == 0.0 {
            // a1 == 0 and disc == 0: double root at zero.
            return vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        vec![Complex64::new(q / a2, 0.0), Complex64::new(a0 / q, 0.0)]
    } else {
        let re = -a1 / (2.0 * a2);
        let im = (-disc).sqrt() / (2.0 * a2);
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Quadratic with complex coefficients (used by the quartic factorization).
fn quadratic_roots_complex(b: Complex64, c: Complex64) -> [Complex64; 2] {
    // Monic z^2 + b z + c.
    let disc = b * b - 4.0 * c;
    let sq = disc.sqrt();
    let q = if (b + sq).norm() >= (b - sq).norm() {
        -0.5 * (b + sq)
    } else {
        -0.5 * (b - sq)
    };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    [q, c / q]
}

/// Principal cube root that stays on the real axis for real input.
fn cbrt_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re.cbrt(), 0.0)
    } else {
        z.cbrt()
    }
}

/// All three complex roots of `a3 x^3 + a2 x^2 + a1 x + a0` via the depressed
/// cubic and Cardano's method.
///
/// The second cube-root term is obtained by division so the pair's product is
/// exactly -p/3; that pins the branch and makes the three roots reconstruct
/// the polynomial.
pub fn solve_cubic(a3: f64, a2: f64, a1: f64, a0: f64) -> Result<RootSet> {
    ensure_finite(&[a3, a2, a1, a0])?;
    check_leading(a3, a2.abs().max(a1.abs()).max(a0.abs()), 3)?;
    let mut roots = cubic_roots(a3, a2, a1, a0);
    polish_all(&[a0, a1, a2, a3], &mut roots);
    Ok(RootSet::from_roots(roots))
}

fn cubic_roots(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<Complex64> {
    let b2 = a2 / a3;
    let b1 = a1 / a3;
    let b0 = a0 / a3;
    // x = t - b2/3 gives t^3 + p t + q.
    let shift = b2 / 3.0;
    let p = b1 - b2 * b2 / 3.0;
    let q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;

    let omega = Complex64::new(-0.5, 0.75f64.sqrt());
    let t_roots: [Complex64; 3] = if p == 0.0 && q == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else {
        let disc = Complex64::new(0.25 * q * q + p * p * p / 27.0, 0.0);
        let w = disc.sqrt();
        let s_plus = -0.5 * q + w;
        let s_minus = -0.5 * q - w;
        let s = if s_plus.norm() >= s_minus.norm() {
            s_plus
        } else {
            s_minus
        };
        let c = cbrt_complex(s);
        // Product of the two cube-root terms must equal -p/3.
        let d = if c.norm() == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(-p / 3.0, 0.0) / c
        };
        [
            c + d,
            omega * c + omega.conj() * d,
            omega * omega * c + (omega * omega).conj() * d,
        ]
    };

    t_roots.iter().map(|t| t - shift).collect()
}

/// All four complex roots of `a4 x^4 + ... + a0` via the depressed quartic and
/// Ferrari's method, with the resolvent cubic solved by [`solve_cubic`]'s
/// internals.
///
/// The factorization uses the largest nonnegative real resolvent root (one
/// always exists), which keeps both quadratic factors real-coefficient and
/// keeps the divisions by the resolvent square root well conditioned. The
/// returned multiset is invariant under the resolvent choice up to roundoff.
pub fn solve_quartic(a4: f64, a3: f64, a2: f64, a1: f64, a0: f64) -> Result<RootSet> {
    ensure_finite(&[a4, a3, a2, a1, a0])?;
    check_leading(a4, a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs()), 4)?;
    let mut roots = quartic_roots(a4, a3, a2, a1, a0, None);
    polish_all(&[a0, a1, a2, a3, a4], &mut roots);
    Ok(RootSet::from_roots(roots))
}

/// Ferrari with an explicit resolvent-root choice; `which = None` picks the
/// default (largest nonnegative real root). Exposed for the invariance tests.
#[doc(hidden)]
pub fn solve_quartic_with_resolvent(
    a4: f64,
    a3: f64,
    a2: f64,
    a1: f64,
    a0: f64,
    which: usize,
) -> Result<RootSet> {
    ensure_finite(&[a4, a3, a2, a1, a0])?;
    check_leading(a4, a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs()), 4)?;
    let mut roots = quartic_roots(a4, a3, a2, a1, a0, Some(which));
    polish_all(&[a0, a1, a2, a3, a4], &mut roots);
    Ok(RootSet::from_roots(roots))
}

fn quartic_roots(
    a4: f64,
    a3: f64,
    a2: f64,
    a1: f64,
    a0: f64,
    resolvent_choice: Option<usize>,
) -> Vec<Complex64> {
    let b3 = a3 / a4;
    let b2 = a2 / a4;
    let b1 = a1 / a4;
    let b0 = a0 / a4;
    // x = y - b3/4 gives y^4 + p y^2 + q y + r.
    let shift = b3 / 4.0;
    let p = b2 - 3.0 * b3 * b3 / 8.0;
    let q = b1 - b3 * b2 / 2.0 + b3 * b3 * b3 / 8.0;
    let r = b0 - b3 * b1 / 4.0 + b3 * b3 * b2 / 16.0 - 3.0 * b3.powi(4) / 256.0;

    let y_roots: [Complex64; 4] = if q.abs() <= 1e-14 * (1.0 + p.abs() + r.abs()) {
        // Biquadratic: z^2 + p z + r with y = ±sqrt(z).
        let zs = quadratic_roots(1.0, p, r);
        let s0 = zs[0].sqrt();
        let s1 = zs[1].sqrt();
        [s0, -s0, s1, -s1]
    } else {
        // Resolvent cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0; a root z
        // gives the split (y^2 + a y + beta)(y^2 - a y + gamma), a = sqrt(z).
        let res = cubic_roots(1.0, 2.0 * p, p * p - 4.0 * r, -q * q);
        let z = match resolvent_choice {
            Some(i) => res[i % 3],
            None => {
                // Largest real root; it is nonnegative because the resolvent
                // is -q^2 < 0 at z = 0 and grows without bound.
                let mut best = res[0];
                for cand in &res {
                    let real_enough = cand.im.abs() <= 1e-9 * cand.norm().max(1.0);
                    let best_real = best.im.abs() <= 1e-9 * best.norm().max(1.0);
                    if (real_enough && !best_real)
                        || (real_enough == best_real && cand.re > best.re)
                    {
                        best = *cand;
                    }
                }
                Complex64::new(best.re.max(0.0), 0.0)
            }
        };
        let alpha = z.sqrt();
        if alpha.norm() == 0.0 {
            // q != 0 makes this unreachable for the default choice; guard the
            // explicit-choice path.
            let zs = quadratic_roots(1.0, p, r);
            let s0 = zs[0].sqrt();
            let s1 = zs[1].sqrt();
            [s0, -s0, s1, -s1]
        } else {
            let pz = Complex64::new(p, 0.0) + z;
            let qa = Complex64::new(q, 0.0) / alpha;
            let beta = 0.5 * (pz - qa);
            let gamma = 0.5 * (pz + qa);
            let [y0, y1] = quadratic_roots_complex(alpha, beta);
            let [y2, y3] = quadratic_roots_complex(-alpha, gamma);
            [y0, y1, y2, y3]
        }
    };

    y_roots.iter().map(|y| y - shift).collect()
}

/// Roots of a polynomial in `x` given as an inner polynomial in `t = x^k`:
/// solves the inner polynomial by radicals, then takes all k-th complex roots
/// of each inner root (`k * inner_degree` roots in total).
pub fn solve_power_composed(inner: &Polynomial, k: u32) -> Result<RootSet> {
    if k == 0 {
        return Err(Error::domain("power-composed exponent k must be >= 1"));
    }
    let c = inner.coeffs();
    let deg = inner.degree();
    let inner_roots: Vec<Complex64> = match deg {
        0 => return Err(Error::UnsupportedDegree(0)),
        1 => vec![Complex64::new(-c[0] / c[1], 0.0)],
        2 => solve_quadratic(c[2], c[1], c[0])?.roots,
        3 => solve_cubic(c[3], c[2], c[1], c[0])?.roots,
        4 => solve_quartic(c[4], c[3], c[2], c[1], c[0])?.roots,
        d => return Err(Error::UnsupportedDegree(d)),
    };

    let mut roots = Vec::with_capacity(inner_roots.len() * k as usize);
    for t in inner_roots {
        if k == 1 {
            roots.push(t);
            continue;
        }
        let mag = t.norm().powf(1.0 / k as f64);
        let base_arg = t.arg();
        for j in 0..k {
            let arg = (base_arg + std::f64::consts::TAU * j as f64) / k as f64;
            roots.push(Complex64::from_polar(mag, arg));
        }
    }
    Ok(RootSet::from_roots(roots))
}
